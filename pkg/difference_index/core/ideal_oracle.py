"""
Brute-force Gröbner-basis checks on the truncations Δ_k of a system over ℚ.

Δ_k is generated by f_i^(j), 0 <= j <= k-1, in the polynomial ring A_{k-1+e}
on the variables y_j@m, m <= k-1+e. Everything here is exact and meant for
desk-scale systems only.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations
from operator import itemgetter

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.groebnertools import groebner
from sympy.polys.orderings import ProductOrder, grevlex
from sympy.polys.rings import PolyRing

from difference_index.core.errors import (
	IndexTooSmall,
	NoStabilizationWithinBudget,
	OracleTooLarge,
	OracleUnsupported,
	ValidationError,
)
from difference_index.core.expressions import format_poly
from difference_index.core.report import IndexReport
from difference_index.core.sigma_poly import SigmaPolynomial, SystemSpec, VarRef


@dataclass(frozen=True)
class TruncatedIdeal:
	"""Δ_k as ordinary polynomials on the (k+e)n variables of A_{k-1+e}."""

	level: int
	top_order: int
	generators: tuple[SigmaPolynomial, ...]

	@property
	def generator_count(self) -> int:
		return len(self.generators)


@dataclass
class StabilizationResult:
	i: int
	h: int
	bases: list[list[str]] = field(default_factory=list)
	condition_holds: bool | None = None

	def to_dict(self) -> dict:
		return {"i": self.i, "h": self.h, "bases": self.bases, "condition_holds": self.condition_holds}


def groebner_basis(gens: Sequence, ring: PolyRing) -> list:
	"""Reduced Gröbner basis (Buchberger) of ``gens`` in ``ring``'s order."""
	gens = [g for g in gens if g]
	if not gens:
		return []
	return groebner(gens, ring, method="buchberger")


def krull_dimension(basis: Sequence, nvars: int) -> int:
	"""
	Dimension of A/I from a Gröbner basis of a proper ideal I: the size of a
	largest variable set containing the support of no leading monomial.
	"""
	supports = {frozenset(index for index, e in enumerate(g.LM) if e) for g in basis}
	minimal = [s for s in supports if not any(other < s for other in supports)]
	if not minimal:
		return nvars
	# complement of a largest independent set is a smallest hitting set
	for size in range(1, nvars + 1):
		for chosen in combinations(range(nvars), size):
			chosen_set = set(chosen)
			if all(s & chosen_set for s in minimal):
				return nvars - size
	return 0


def _symbol(v: VarRef, names: Sequence[str]) -> Symbol:
	return Symbol(f"{names[v.var_index - 1]}@{v.transform_order}")


class IdealOracle:
	"""
	Gröbner computations for one system; caches bases per (level, retained order).
	"""

	def __init__(
		self,
		system: SystemSpec,
		var_limit: int = 14,
		force: bool = False,
		logger: logging.Logger | None = None,
	):
		if not system.has_constant_coefficients():
			raise OracleUnsupported(
				"the oracle needs rational coefficients; systems with non-constant coefficients are "
				"verified by the rank engine only"
			)
		self.system = system
		self.var_limit = var_limit
		self.force = force
		self.logger = logger or logging.getLogger(__name__)
		self._cache: dict[tuple, list] = {}

	# rings

	def variables(self, top_order: int) -> list[VarRef]:
		return [VarRef(j, m) for m in range(top_order + 1) for j in range(1, self.system.n + 1)]

	def _check_size(self, count: int):
		if count <= self.var_limit:
			return
		message = f"{count} variables exceed the oracle limit of {self.var_limit}"
		if not self.force:
			raise OracleTooLarge(f"{message}; pass --force or raise DINDEX_ORACLE_VAR_LIMIT")
		self.logger.warning(f"{message}; continuing because the limit was forced")

	def ring(self, top_order: int, keep: int | None = None) -> tuple[PolyRing, list[VarRef]]:
		"""
		The ring A_top; with ``keep`` given, a block order eliminating every
		variable of order > keep (listed first, highest order first).
		"""
		variables = self.variables(top_order)
		if keep is None or keep >= top_order:
			order = grevlex
			ordered = variables
		else:
			dropped = sorted((v for v in variables if v.transform_order > keep), key=lambda v: (-v.transform_order, v.var_index))
			kept = [v for v in variables if v.transform_order <= keep]
			ordered = dropped + kept
			split = len(dropped)
			order = ProductOrder(
				(grevlex, itemgetter(slice(None, split))),
				(grevlex, itemgetter(slice(split, None))),
			)
		symbols = [_symbol(v, self.system.ring.variables) for v in ordered]
		return PolyRing(symbols, QQ, order), ordered

	def to_ring(self, p: SigmaPolynomial, ring: PolyRing, ordered: Sequence[VarRef]):
		position = {v: index for index, v in enumerate(ordered)}
		dfield = p.field
		terms = {}
		for monom, coeff in p.terms():
			exponents = [0] * len(ordered)
			for v, e in monom:
				if v not in position:
					raise ValidationError(f"{p} is not in the ring of the ideal")
				exponents[position[v]] = e
			terms[tuple(exponents)] = dfield.rational(coeff)
		return ring.from_dict(terms)

	# truncations

	def truncated(self, k: int) -> TruncatedIdeal:
		if k < 0:
			raise ValidationError(f"level must be nonnegative, got {k}")
		gens = tuple(f.transform(j) for j in range(k) for f in self.system.equations)
		return TruncatedIdeal(level=k, top_order=k - 1 + self.system.e, generators=gens)

	def _basis(self, T: TruncatedIdeal, keep: int | None = None):
		key = (T.level, keep)
		ring, ordered = self.ring(T.top_order, keep)
		if key not in self._cache:
			self._check_size(len(ordered))
			gens = [self.to_ring(g, ring, ordered) for g in T.generators]
			self.logger.info(
				f"Groebner basis of Delta_{T.level} ({len(gens)} generators, {len(ordered)} variables"
				+ (f", eliminating above order {keep})" if keep is not None else ")")
			)
			self._cache[key] = groebner_basis(gens, ring)
		return self._cache[key], ring, ordered

	def groebner(self, T: TruncatedIdeal) -> list:
		return self._basis(T)[0]

	def eliminate(self, T: TruncatedIdeal, i: int) -> list:
		"""Reduced basis of Δ_k ∩ A_i, in the grevlex ring of A_i."""
		if i > T.top_order:
			raise ValidationError(f"retain level {i} exceeds the top order {T.top_order} of Delta_{T.level}")
		if i < 0:
			raise ValidationError("retain level must be nonnegative")
		basis, ring, ordered = self._basis(T, keep=i)
		target, target_order = self.ring(i)
		position = {v: index for index, v in enumerate(target_order)}
		retained = []
		for g in basis:
			terms = {}
			for monom, coeff in g.items():
				if any(e and ordered[index].transform_order > i for index, e in enumerate(monom)):
					break
				exponents = [0] * len(target_order)
				for index, e in enumerate(monom):
					if e:
						exponents[position[ordered[index]]] = e
				terms[tuple(exponents)] = coeff
			else:
				retained.append(target.from_dict(terms))
		return groebner_basis(retained, target)

	def format_basis(self, basis: Sequence) -> list[str]:
		return [format_poly(g) for g in basis]

	def membership_test(self, f: SigmaPolynomial, T: TruncatedIdeal) -> bool:
		if f.is_zero():
			return True
		order = f.order()
		if order is not None and order > T.top_order:
			raise ValidationError(f"{f} has order {order} above the top order {T.top_order} of Delta_{T.level}")
		basis, ring, ordered = self._basis(T)
		g = self.to_ring(f, ring, ordered)
		if not basis:
			return not g
		return not g.rem(basis)

	def trdeg(self, T: TruncatedIdeal) -> int:
		"""
		Krull dimension of A/Δ_k: the size of a largest set of variables that
		contains the support of no leading monomial.
		"""
		basis, _, ordered = self._basis(T)
		if any(g.is_ground for g in basis):
			raise OracleUnsupported(f"Delta_{T.level} is the unit ideal")
		return krull_dimension(basis, len(ordered))

	def ideals_equal(self, first: Sequence, second: Sequence) -> bool:
		return set(first) == set(second)

	def stabilization_scan(self, i: int, h_max: int, report: IndexReport | None = None) -> StabilizationResult:
		"""
		Least h with Δ_{i-e+1+h} ∩ A_i = Δ_{i-e+2+h} ∩ A_i = Δ_{i-e+3+h} ∩ A_i.

		For i = e-1 the levels are Δ_h. When a report is given, records
		whether i+ω >= ρ+e-1 and i+h >= ρ+e-1, under which h equals ω.
		"""
		e = self.system.e
		if i < e - 1:
			raise IndexTooSmall(f"i = {i} is below e - 1 = {e - 1}")
		offset = i - e + 1
		levels: list[list] = []

		def level(h: int) -> list:
			while len(levels) <= h:
				levels.append(self.eliminate(self.truncated(offset + len(levels)), i))
			return levels[h]

		for h in range(h_max + 1):
			if self.ideals_equal(level(h), level(h + 1)) and self.ideals_equal(level(h + 1), level(h + 2)):
				result = StabilizationResult(i=i, h=h, bases=[self.format_basis(b) for b in levels])
				if report is not None:
					threshold = report.rho + e - 1
					result.condition_holds = i + report.omega >= threshold and i + h >= threshold
				return result
		raise NoStabilizationWithinBudget(f"Delta_h cap A_{i} did not stabilize for h <= {h_max}")

	def elimination_trdeg_check(self, report: IndexReport, i: int, k: int) -> dict:
		"""
		Compares trdeg(A_i / (Δ_{i-e+1+k} ∩ A_i)) with
		d(i+1) + (d+r-n)k + s - ed - μ_k, which holds for i+k >= ρ+e-1.
		"""
		S = self.system
		e, n, r, d = S.e, S.n, S.r, report.d
		if k >= len(report.mu):
			raise ValidationError(f"mu_{k} was not computed (kmax = {len(report.mu) - 1})")
		ideal = self.eliminate(self.truncated(i - e + 1 + k), i)
		observed = self._dimension(ideal, i)
		predicted = d * (i + 1) + (d + r - n) * k + report.s - e * d - report.mu[k]
		return {
			"i": i,
			"k": k,
			"applicable": i + k >= report.rho + e - 1,
			"predicted": predicted,
			"observed": observed,
			"agrees": predicted == observed,
		}

	def hilbert_levin_check(self, report: IndexReport, i_max: int) -> dict:
		"""
		Samples trdeg(A_i ∩ 𝔭) for i <= i_max against d(i+1) + ord and
		returns the least index from which every sample agrees.
		"""
		S = self.system
		e = S.e
		rows = []
		for i in range(e - 1, i_max + 1):
			stable = max(report.omega, report.rho + e - 1 - i)
			ideal = self.eliminate(self.truncated(i - e + 1 + stable), i)
			observed = self._dimension(ideal, i)
			predicted = report.d * (i + 1) + report.ord_p
			rows.append({"i": i, "observed": observed, "predicted": predicted})
		agree_from = None
		for row in reversed(rows):
			if row["observed"] != row["predicted"]:
				break
			agree_from = row["i"]
		return {"rows": rows, "agrees_from": agree_from, "regularity_bound": report.regularity_bound}

	def _dimension(self, basis: Sequence, i: int) -> int:
		if any(g.is_ground for g in basis):
			raise OracleUnsupported(f"the elimination ideal in A_{i} is the unit ideal")
		return krull_dimension(basis, (i + 1) * self.system.n)
