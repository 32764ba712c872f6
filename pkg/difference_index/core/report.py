import json
from dataclasses import dataclass, field
from itertools import zip_longest

# Keys of the report document, in output order. The first block is the
# stable schema; the rest are extensions.
_SCHEMA_KEYS = (
	"n",
	"r",
	"e",
	"d",
	"s",
	"rho",
	"mu",
	"omega",
	"a",
	"sigma_dim",
	"ord_p",
	"regularity_bound",
	"ranks_Jk",
	"ranks_Jki",
	"engine",
	"warnings",
)
_EXTENSION_KEYS = (
	"psi",
	"rank_polynomial",
	"index_i",
	"kmax_psi",
	"kmax_mu",
	"i_invariance",
	"caveats",
	"config",
)

CAVEATS = (
	"The specialization is assumed generic: a non-generic point can only under-estimate ranks.",
	"Quasi-primeness of the truncated ideals and reflexivity of their union are assumed, not verified.",
	"rank(J_k,i) is assumed independent of the localization level; only i-invariance is spot-checked.",
)


@dataclass
class IndexReport:
	"""
	Everything computed for one system: ψ and μ profiles, the fitted
	invariants and the derived bounds.
	"""

	n: int
	r: int
	e: int
	d: int
	s: int
	rho: int
	mu: list[int]
	omega: int
	a: int
	sigma_dim: int
	ord_p: int
	regularity_bound: int
	ranks_Jk: list[int]
	ranks_Jki: list[int]
	engine: str
	psi: list[int]
	rank_polynomial: dict[str, int]
	index_i: int
	kmax_psi: int
	kmax_mu: int
	warnings: list[str] = field(default_factory=list)
	i_invariance: dict | None = None
	caveats: list[str] = field(default_factory=lambda: list(CAVEATS))
	config: dict = field(default_factory=dict)

	def to_dict(self) -> dict:
		return {key: getattr(self, key) for key in _SCHEMA_KEYS + _EXTENSION_KEYS}

	def to_json(self) -> str:
		return json.dumps(self.to_dict(), indent=2) + "\n"

	def render_text(self) -> str:
		lines = [
			f"n = {self.n}, r = {self.r}, e = {self.e}    engine: {self.engine}",
			f"quasi dimension polynomial   psi(k) = {_affine(self.d, self.s)}",
			f"rank polynomial of J_k       rank(J_k) = {_affine(self.rank_polynomial['slope'], self.rank_polynomial['intercept'])}",
			f"quasi regularity degree      rho = {self.rho}",
			f"mu tail (i = {self.index_i})             mu_k = {_affine(self.d + self.r - self.n, self.a)}",
			f"difference index             omega = {self.omega}",
			f"sigma-dim = {self.sigma_dim}, ord = {self.ord_p}, a = {self.a}",
			f"Hilbert-Levin regularity <= {self.regularity_bound}",
			"",
			f"{'k':>3}  {'rank J_k':>8}  {'psi':>5}  {'rank J_k,i':>10}  {'mu':>4}",
		]
		rows = zip_longest(range(max(len(self.psi), len(self.mu))), self.ranks_Jk, self.psi, self.ranks_Jki, self.mu)
		for k, rank_jk, psi, rank_jki, mu in rows:
			lines.append(f"{k:>3}  {_cell(rank_jk):>8}  {_cell(psi):>5}  {_cell(rank_jki):>10}  {_cell(mu):>4}")
		if self.i_invariance is not None:
			status = "consistent" if not self.i_invariance["mismatches"] else "MISMATCH"
			lines.append("")
			lines.append(f"i-invariance for i in {self.i_invariance['i_values']}: {status}")
		for warning in self.warnings:
			lines.append(f"warning: {warning}")
		for caveat in self.caveats:
			lines.append(f"caveat: {caveat}")
		return "\n".join(lines) + "\n"


def _cell(value) -> str:
	return "" if value is None else str(value)


def _affine(slope: int, intercept: int) -> str:
	if slope == 0:
		return str(intercept)
	head = "k" if slope == 1 else f"{slope}k"
	if intercept == 0:
		return head
	sign = "+" if intercept > 0 else "-"
	return f"{head} {sign} {abs(intercept)}"


def rank_polynomial_note(n: int, e: int, d: int, s: int) -> str:
	return (
		f"rank(J_k) = {_affine(n - d, e * n - s)} is the rank polynomial of J_k; "
		f"the quasi dimension polynomial is psi(k) = (k+e)n - rank(J_k) = {_affine(d, s)}"
	)
