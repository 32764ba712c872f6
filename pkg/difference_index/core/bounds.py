"""
Effective ideal-membership bounds.

For f of order ord_f in the σ-ideal, f lies in Δ_{N+1} with
N = ω + max{-1, ord_f - e}, via a representation of total degree at most
(2D)^(2^m), m = (N+e+1)n. Without the hypothesis ω + max{0, ord_f-e+1} >= ρ
only the ω-free fallback N = e(min{r,n}+2) + max{-1, ord_f - e} is valid.
"""

import logging
from dataclasses import dataclass

from difference_index.core.errors import HypothesisUnmet
from difference_index.core.profiles import mu_bound
from difference_index.core.report import IndexReport
from difference_index.core.sigma_poly import SystemSpec

# int -> str conversion is refused beyond ~4300 digits on recent interpreters
_MAX_DECIMAL_BITS = 14000


@dataclass
class DegreeBound:
	N: int
	degree_exponent: int
	degree_bound: int | None
	symbolic: str

	@property
	def decimal(self) -> str | None:
		if self.degree_bound is None or self.degree_bound.bit_length() > _MAX_DECIMAL_BITS:
			return None
		return str(self.degree_bound)

	def to_dict(self) -> dict:
		return {
			"N": self.N,
			"degree_exponent": self.degree_exponent,
			"degree_bound": self.decimal,
			"degree_bound_bits": self.degree_bound.bit_length() if self.degree_bound is not None else None,
			"degree_bound_symbolic": self.symbolic,
		}


@dataclass
class MembershipBound:
	ord_f: int
	D: int
	hypothesis_met: bool
	primary: DegreeBound | None
	fallback: DegreeBound

	@property
	def N(self) -> int | None:
		return self.primary.N if self.primary else None

	def to_dict(self) -> dict:
		return {
			"ord_f": self.ord_f,
			"D": self.D,
			"hypothesis_met": self.hypothesis_met,
			"bound": self.primary.to_dict() if self.primary else None,
			"fallback": self.fallback.to_dict(),
		}


def degree_bound(N: int, D: int, e: int, n: int, threshold: int = 20) -> DegreeBound:
	m = (N + e + 1) * n
	exact = (2 * D) ** (2**m) if m <= threshold else None
	return DegreeBound(N=N, degree_exponent=m, degree_bound=exact, symbolic=f"(2*{D})^(2^{m})")


def membership_bounds(
	S: SystemSpec,
	report: IndexReport,
	ord_f: int,
	D: int | None = None,
	threshold: int = 20,
	strict: bool = False,
	logger: logging.Logger | None = None,
) -> MembershipBound:
	"""
	Computes the order and degree bounds for deciding membership of a
	polynomial of order ``ord_f``; D defaults to the maximal total degree of F.

	When the hypothesis fails the primary bound is omitted, or
	``HypothesisUnmet`` is raised if ``strict``.
	"""
	logger = logger or logging.getLogger(__name__)
	if ord_f < 0:
		raise ValueError("ord_f must be nonnegative")
	D = D if D is not None else max(f.total_degree() for f in S.equations)
	e, n = S.e, S.n
	shift = max(-1, ord_f - e)

	fallback = degree_bound(mu_bound(S) + shift, D, e, n, threshold)
	hypothesis_met = report.omega + max(0, ord_f - e + 1) >= report.rho
	primary = degree_bound(report.omega + shift, D, e, n, threshold) if hypothesis_met else None

	result = MembershipBound(ord_f=ord_f, D=D, hypothesis_met=hypothesis_met, primary=primary, fallback=fallback)
	if not hypothesis_met:
		message = (
			f"omega + max(0, ord_f - e + 1) = {report.omega + max(0, ord_f - e + 1)} < rho = {report.rho}; "
			f"only the fallback N = {fallback.N} applies"
		)
		if strict:
			raise HypothesisUnmet(message, fallback=result)
		logger.warning(message)
	return result
