"""
The index pipeline: ψ profile, μ profile, tail fitting, the difference index
and the structural invariants tying them together.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace

from difference_index.core.errors import (
	IndexTooSmall,
	InvariantViolation,
	SlopeMismatch,
	TailNotLinear,
	ValidationError,
)
from difference_index.core.jacobi import build_Jk, build_Jki
from difference_index.core.rank_engine import RankEngine
from difference_index.core.report import IndexReport, rank_polynomial_note
from difference_index.core.sigma_poly import SystemSpec
from difference_index.core.specialization import Specialization, evaluate


@dataclass(frozen=True)
class RankProfile:
	"""
	Values k -> v(k) for k = 0..kmax, the underlying matrix ranks, and the
	fitted eventual line ``slope*k + intercept`` valid from ``onset`` on.
	"""

	values: tuple[int, ...]
	ranks: tuple[int, ...] = ()
	slope: int | None = None
	intercept: int | None = None
	onset: int | None = None

	@property
	def kmax(self) -> int:
		return len(self.values) - 1

	def fitted(self, bound: int) -> "RankProfile":
		slope, intercept, onset = fit_tail(self.values, bound)
		return replace(self, slope=slope, intercept=intercept, onset=onset)


def psi_bound(S: SystemSpec) -> int:
	"""Onset bound for ψ: e(min{r,n}+1)."""
	return S.e * (min(S.r, S.n) + 1)


def mu_bound(S: SystemSpec) -> int:
	"""Global onset bound for μ: e(min{r,n}+2)."""
	return S.e * (min(S.r, S.n) + 2)


def fit_tail(values: Sequence[int], bound: int) -> tuple[int, int, int]:
	"""
	Fits the eventual line through the last two points.

	Returns (slope, intercept, onset) where onset is the least k from which
	every sampled value lies on the line.
	"""
	kmax = len(values) - 1
	if kmax < max(bound + 1, 2):
		raise ValidationError(f"kmax = {kmax} is too small: the tail fit needs values through k = {max(bound + 1, 2)}")
	slope = values[kmax] - values[kmax - 1]
	if values[kmax - 1] - values[kmax - 2] != slope:
		raise TailNotLinear(
			f"the profile {list(values)} is not affine at its end "
			f"(differences {values[kmax - 1] - values[kmax - 2]} and {slope})"
		)
	intercept = values[kmax] - slope * kmax
	onset = kmax
	while onset > 0 and values[onset - 1] == slope * (onset - 1) + intercept:
		onset -= 1
	return slope, intercept, onset


def psi_profile(
	S: SystemSpec,
	sp: Specialization,
	engine: RankEngine,
	kmax: int | None = None,
	logger: logging.Logger | None = None,
) -> RankProfile:
	"""
	ψ(0) = en and ψ(k) = (k+e)n - rank(J_k); the fitted slope is d, the
	intercept s and the onset ρ.
	"""
	logger = logger or logging.getLogger(__name__)
	bound = psi_bound(S)
	kmax = kmax if kmax is not None else bound + 2
	n, r, e = S.n, S.r, S.e

	matrix = evaluate(build_Jk(S, kmax), sp)
	ranks = [0, *engine.prefix_ranks(matrix, [k * r for k in range(1, kmax + 1)], label="Jk")]
	values = [(k + e) * n - rank for k, rank in enumerate(ranks)]
	for k in range(1, kmax + 1):
		logger.info(f"rank(J_{k}) = {ranks[k]}, psi({k}) = {values[k]}")

	return RankProfile(tuple(values), tuple(ranks)).fitted(bound)


def mu_profile(
	S: SystemSpec,
	sp: Specialization,
	engine: RankEngine,
	i: int | None = None,
	kmax: int | None = None,
	rho: int | None = None,
	logger: logging.Logger | None = None,
) -> RankProfile:
	"""
	μ_0 = 0 and μ_k = kr - rank(J_k,i) for k = 1..kmax (not yet fitted).

	The default kmax is the smaller onset bound plus two; the sharper bound
	ρ+e is used only when ρ is supplied.
	"""
	logger = logger or logging.getLogger(__name__)
	i = S.e - 1 if i is None else i
	if i < S.e - 1:
		raise IndexTooSmall(f"i = {i} is below e - 1 = {S.e - 1}")
	if kmax is None:
		bound = mu_bound(S) if rho is None else min(mu_bound(S), rho + S.e)
		kmax = bound + 2
	r = S.r

	matrix = evaluate(build_Jki(S, kmax, i), sp)
	ranks = [0, *engine.prefix_ranks(matrix, [k * r for k in range(1, kmax + 1)], label=f"Jki:{i}")]
	values = [k * r - rank for k, rank in enumerate(ranks)]
	for k in range(1, kmax + 1):
		logger.info(f"rank(J_{k},{i}) = {ranks[k]}, mu_{k} = {values[k]}")
	return RankProfile(tuple(values), tuple(ranks))


def check_i_invariance(
	S: SystemSpec,
	sp: Specialization,
	engine: RankEngine,
	kmax: int,
	i_list: Sequence[int],
	logger: logging.Logger | None = None,
) -> dict:
	"""
	Compares μ_k,i across ``i_list`` for k <= kmax. A mismatch is a finding,
	reported in the result, not an exception.
	"""
	tables = {}
	for i in i_list:
		tables[i] = list(mu_profile(S, sp, engine, i=i, kmax=kmax, logger=logger).values)
	reference = tables[i_list[0]]
	mismatches = []
	for i in i_list[1:]:
		for k, (expected, actual) in enumerate(zip(reference, tables[i])):
			if expected != actual:
				mismatches.append({"k": k, "i": i, "mu": actual, "reference_i": i_list[0], "reference_mu": expected})
	return {
		"i_values": list(i_list),
		"kmax": kmax,
		"mu": {str(i): values for i, values in tables.items()},
		"mismatches": mismatches,
	}


def regularity_bound(e: int, rho: int, omega: int) -> int:
	"""Upper bound e-1+max{0, ρ-ω} on the Hilbert-Levin regularity."""
	return e - 1 + max(0, rho - omega)


def check_invariants(S: SystemSpec, report: IndexReport) -> list[str]:
	"""Returns a description of every violated structural invariant."""
	n, r, e, d = S.n, S.r, S.e, report.d
	violations = []

	mu = report.mu
	for k in range(len(mu) - 1):
		if mu[k + 1] < mu[k]:
			violations.append(f"mu decreases at k = {k}: {mu[k]} -> {mu[k + 1]}")

	psi = report.psi
	for k in range(1, len(psi) - 1):
		step = psi[k + 1] - psi[k]
		if not n - r <= step <= n:
			violations.append(f"psi({k + 1}) - psi({k}) = {step} is outside [{n - r}, {n}]")

	if not max(0, n - r) <= d <= n:
		violations.append(f"d = {d} is outside [{max(0, n - r)}, {n}]")
	if report.a < 0:
		violations.append(f"a = {report.a} is negative")
	if report.rho > psi_bound(S):
		violations.append(f"rho = {report.rho} exceeds the bound e(min(r,n)+1) = {psi_bound(S)}")

	omega_bound = min(mu_bound(S), report.rho + e)
	if report.omega > omega_bound:
		violations.append(
			f"omega = {report.omega} exceeds min(e(min(r,n)+2), rho+e) = "
			f"min({mu_bound(S)}, {report.rho + e}) = {omega_bound}"
		)

	if report.index_i == e - 1:
		i = report.index_i
		start = max(report.rho, report.omega)
		values = {
			k: d * (i + 1) + (d + r - n) * k + report.s - e * d - mu[k] for k in range(start, len(mu))
		}
		if len(set(values.values())) > 1:
			violations.append(f"the psi and mu tails disagree: d(i+1)+(d+r-n)k+s-ed-mu_k = {values}")

	return violations


def difference_index(
	S: SystemSpec,
	sp: Specialization,
	engine: RankEngine,
	psi: RankProfile | None = None,
	i: int | None = None,
	kmax_psi: int | None = None,
	kmax_mu: int | None = None,
	logger: logging.Logger | None = None,
) -> IndexReport:
	"""
	Runs the pipeline and returns the report; structural invariants are
	asserted and a violation raises ``InvariantViolation``.
	"""
	logger = logger or logging.getLogger(__name__)
	n, r, e = S.n, S.r, S.e
	i = e - 1 if i is None else i

	if psi is None:
		psi = psi_profile(S, sp, engine, kmax=kmax_psi, logger=logger)
	d = psi.slope
	s = psi.intercept
	rho = psi.onset

	mu = mu_profile(S, sp, engine, i=i, kmax=kmax_mu, rho=rho, logger=logger)
	sharp_bound = min(mu_bound(S), rho + e)
	try:
		mu = mu.fitted(sharp_bound)
	except TailNotLinear:
		if kmax_mu is not None or mu.kmax >= mu_bound(S) + 2:
			raise
		logger.warning(
			f"mu is not affine within the bound rho+e = {rho + e}; extending to k = {mu_bound(S) + 2}"
		)
		mu = mu_profile(S, sp, engine, i=i, kmax=mu_bound(S) + 2, logger=logger).fitted(mu_bound(S))

	expected_slope = d + r - n
	if mu.slope != expected_slope:
		raise SlopeMismatch(f"the mu tail has slope {mu.slope}, expected d + r - n = {expected_slope}")
	a = mu.intercept
	omega = next(k for k, value in enumerate(mu.values) if value == expected_slope * k + a)

	report = IndexReport(
		n=n,
		r=r,
		e=e,
		d=d,
		s=s,
		rho=rho,
		mu=list(mu.values),
		omega=omega,
		a=a,
		sigma_dim=d,
		ord_p=s - e * d - a,
		regularity_bound=regularity_bound(e, rho, omega),
		ranks_Jk=list(psi.ranks),
		ranks_Jki=list(mu.ranks),
		engine=engine.name,
		psi=list(psi.values),
		rank_polynomial={"slope": n - d, "intercept": e * n - s},
		index_i=i,
		kmax_psi=psi.kmax,
		kmax_mu=mu.kmax,
	)
	report.warnings.append(rank_polynomial_note(n, e, d, s))
	if engine.name == "probabilistic":
		report.warnings.append("ranks were computed probabilistically and may under-estimate the exact ranks")

	violations = check_invariants(S, report)
	if violations:
		raise InvariantViolation("; ".join(violations))
	logger.info(f"difference index omega = {omega}, rho = {rho}, d = {d}, s = {s}, a = {a}")
	return report