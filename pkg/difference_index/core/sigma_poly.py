"""
The difference polynomial ring K{y1, ..., yn}.

A ``SigmaPolynomial`` is a sparse map from monomials in the transform
variables ``yj@k`` to coefficients in the difference field K.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from sympy.polys.domains import QQ

from difference_index.core.dfield import DifferenceField
from difference_index.core.errors import SystemNotDifference, UnknownIdentifier, ValidationError
from difference_index.core.expressions import ExpressionAlgebra, format_element, parse


@dataclass(frozen=True)
class VarRef:
	"""The transform variable y_j^(k); ``var_index`` is 1-based."""

	var_index: int
	transform_order: int = 0

	@property
	def sort_key(self) -> tuple[int, int]:
		return (self.transform_order, self.var_index)

	def shifted(self, m: int) -> "VarRef":
		return VarRef(self.var_index, self.transform_order + m)


Monomial = tuple[tuple[VarRef, int], ...]

ONE: Monomial = ()


def _monomial(powers: dict[VarRef, int]) -> Monomial:
	return tuple(sorted(((v, e) for v, e in powers.items() if e), key=lambda item: item[0].sort_key))


def _monomial_mul(a: Monomial, b: Monomial) -> Monomial:
	powers = dict(a)
	for v, e in b:
		powers[v] = powers.get(v, 0) + e
	return _monomial(powers)


def _display_key(monom: Monomial):
	degree = sum(e for _, e in monom)
	return (degree, tuple(sorted(((v.sort_key, e) for v, e in monom), reverse=True)))


class SigmaRing:
	"""Factory and parsing context for polynomials over ``field`` in ``variables``."""

	def __init__(self, field: DifferenceField, variables: Sequence[str]):
		variables = tuple(variables)
		if not variables:
			raise ValidationError("at least one variable is required")
		if len(set(variables)) != len(variables):
			raise ValidationError(f"duplicate variable names in {list(variables)}")
		clashes = set(variables) & set(field.generators)
		if clashes:
			raise ValidationError(f"names used both as variables and generators: {sorted(clashes)}")
		self.field = field
		self.variables = variables
		self._algebra = _EquationAlgebra(self)

	@property
	def n(self) -> int:
		return len(self.variables)

	@cached_property
	def zero(self) -> "SigmaPolynomial":
		return SigmaPolynomial(self, {})

	@cached_property
	def one(self) -> "SigmaPolynomial":
		return self.constant(1)

	def constant(self, value) -> "SigmaPolynomial":
		return SigmaPolynomial(self, {ONE: self.field.element(value)})

	def var(self, j: int, k: int = 0) -> "SigmaPolynomial":
		if not 1 <= j <= self.n:
			raise ValidationError(f"variable index {j} out of range 1..{self.n}")
		return SigmaPolynomial(self, {((VarRef(j, k), 1),): self.field.one})

	def index_of(self, name: str) -> int:
		return self.variables.index(name) + 1

	def var_name(self, v: VarRef) -> str:
		name = self.variables[v.var_index - 1]
		return f"{name}@{v.transform_order}" if v.transform_order else name

	def parse(self, text: str) -> "SigmaPolynomial":
		return parse(text, self._algebra)

	def __eq__(self, other):
		return isinstance(other, SigmaRing) and (self.field, self.variables) == (other.field, other.variables)

	def __hash__(self):
		return hash((self.field, self.variables))


class _EquationAlgebra(ExpressionAlgebra):
	allows_division = False

	def __init__(self, ring: SigmaRing):
		self.ring = ring

	def number(self, value: int):
		return self.ring.constant(value)

	def rational(self, numerator: int, denominator: int):
		return self.ring.constant(QQ(numerator, denominator))

	def name(self, name: str, position: int):
		if name in self.ring.variables:
			return self.ring.var(self.ring.index_of(name))
		if name in self.ring.field.generators:
			return self.ring.constant(self.ring.field.gen(name))
		raise UnknownIdentifier(name, position)

	def shifted(self, name: str, order: int, position: int):
		if name in self.ring.variables:
			return self.ring.var(self.ring.index_of(name), order)
		return super().shifted(name, order, position)

	def power(self, base, exponent: int):
		return base**exponent


class SigmaPolynomial:
	"""Immutable sparse difference polynomial; no zero coefficients are stored."""

	__slots__ = ("_hash", "_terms", "ring")

	def __init__(self, ring: SigmaRing, terms: dict[Monomial, object]):
		self.ring = ring
		self._terms = {m: c for m, c in terms.items() if c}
		self._hash = None

	@property
	def field(self) -> DifferenceField:
		return self.ring.field

	def terms(self) -> list[tuple[Monomial, object]]:
		"""Terms in display order (highest first)."""
		return sorted(self._terms.items(), key=lambda item: _display_key(item[0]), reverse=True)

	def is_zero(self) -> bool:
		return not self._terms

	def __bool__(self):
		return bool(self._terms)

	def __eq__(self, other):
		if isinstance(other, SigmaPolynomial):
			return self._terms == other._terms
		if isinstance(other, int):
			return self == self.ring.constant(other)
		return NotImplemented

	def __hash__(self):
		if self._hash is None:
			self._hash = hash(frozenset(self._terms.items()))
		return self._hash

	def _coerce(self, other) -> "SigmaPolynomial":
		if isinstance(other, SigmaPolynomial):
			return other
		return self.ring.constant(other)

	def __add__(self, other):
		other = self._coerce(other)
		terms = dict(self._terms)
		for m, c in other._terms.items():
			terms[m] = terms[m] + c if m in terms else c
		return SigmaPolynomial(self.ring, terms)

	__radd__ = __add__

	def __neg__(self):
		return SigmaPolynomial(self.ring, {m: -c for m, c in self._terms.items()})

	def __sub__(self, other):
		return self + (-self._coerce(other))

	def __rsub__(self, other):
		return self._coerce(other) - self

	def __mul__(self, other):
		other = self._coerce(other)
		terms: dict[Monomial, object] = {}
		for m1, c1 in self._terms.items():
			for m2, c2 in other._terms.items():
				m = _monomial_mul(m1, m2)
				terms[m] = terms[m] + c1 * c2 if m in terms else c1 * c2
		return SigmaPolynomial(self.ring, terms)

	__rmul__ = __mul__

	def __pow__(self, exponent: int):
		if exponent < 0:
			raise ValueError("negative exponent")
		result = self.ring.one
		base = self
		while exponent:
			if exponent & 1:
				result = result * base
			base = base * base
			exponent >>= 1
		return result

	def variables(self) -> set[VarRef]:
		return {v for monom in self._terms for v, _ in monom}

	def order(self, j: int | None = None) -> int | None:
		"""Highest transform order (of ``y_j`` if given); None when absent."""
		orders = [v.transform_order for v in self.variables() if j is None or v.var_index == j]
		return max(orders) if orders else None

	def total_degree(self) -> int:
		return max((sum(e for _, e in monom) for monom in self._terms), default=0)

	def transform(self, m: int = 1) -> "SigmaPolynomial":
		"""Shifts every variable by ``m`` and pushes the coefficients through σ^m."""
		if m == 0:
			return self
		terms = {}
		for monom, coeff in self._terms.items():
			shifted = tuple((v.shifted(m), e) for v, e in monom)
			terms[shifted] = self.field.sigma(coeff, m)
		return SigmaPolynomial(self.ring, terms)

	def diff(self, v: VarRef) -> "SigmaPolynomial":
		terms: dict[Monomial, object] = {}
		for monom, coeff in self._terms.items():
			powers = dict(monom)
			exponent = powers.get(v, 0)
			if not exponent:
				continue
			powers[v] = exponent - 1
			reduced = _monomial(powers)
			term = coeff * exponent
			terms[reduced] = terms[reduced] + term if reduced in terms else term
		return SigmaPolynomial(self.ring, terms)

	def format_monomial(self, monom: Monomial) -> str:
		parts = []
		for v, e in monom:
			name = self.ring.var_name(v)
			parts.append(f"{name}^{e}" if e > 1 else name)
		return "*".join(parts)

	def __str__(self):
		if not self._terms:
			return "0"
		terms = self.terms()
		out = [self._format_term(monom, coeff) for monom, coeff in terms]
		text = out[0]
		first_monom = terms[0][0]
		if first_monom and first_monom[0][1] > 1 and text == f"-{self.format_monomial(first_monom)}":
			# a bare minus binds to the base of the power
			text = f"-1*{text[1:]}"
		for term in out[1:]:
			text += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
		return text

	def _format_term(self, monom: Monomial, coeff) -> str:
		mono = self.format_monomial(monom)
		if self.field.is_constant(coeff):
			value = format_element(coeff)
			if not mono:
				return value
			if value == "1":
				return mono
			if value == "-1":
				return f"-{mono}"
			return f"{value}*{mono}"
		value = f"({format_element(coeff)})"
		return f"{value}*{mono}" if mono else value

	def __repr__(self):
		return f"SigmaPolynomial({self})"


def partial_derivative(p: SigmaPolynomial, v: VarRef) -> SigmaPolynomial:
	return p.diff(v)


def transform(p: SigmaPolynomial, m: int) -> SigmaPolynomial:
	return p.transform(m)


@dataclass(frozen=True)
class SystemSpec:
	"""
	A difference system F = {f_1, ..., f_r} in n variables.

	``eps[i][j]`` is the order of y_{j+1} in f_{i+1}, or None when absent.
	"""

	ring: SigmaRing
	equations: tuple[SigmaPolynomial, ...]
	eps: tuple[tuple[int | None, ...], ...]
	e: int

	@property
	def field(self) -> DifferenceField:
		return self.ring.field

	@property
	def n(self) -> int:
		return self.ring.n

	@property
	def r(self) -> int:
		return len(self.equations)

	@classmethod
	def build(cls, ring: SigmaRing, equations: Iterable[SigmaPolynomial | str]) -> "SystemSpec":
		polys = tuple(ring.parse(f) if isinstance(f, str) else f for f in equations)
		eps, e = orders(polys, ring.n)
		return cls(ring, polys, eps, e)

	def has_constant_coefficients(self) -> bool:
		return all(self.field.is_constant(c) for f in self.equations for _, c in f.terms())


def orders(equations: Sequence[SigmaPolynomial], n: int) -> tuple[tuple[tuple[int | None, ...], ...], int]:
	"""The order matrix ε and the maximal order e of a system."""
	if not equations:
		raise ValidationError("the system has no equations")
	for index, f in enumerate(equations, start=1):
		if f.is_zero():
			raise ValidationError(f"equation f{index} is zero")
	eps = tuple(tuple(f.order(j) for j in range(1, n + 1)) for f in equations)
	present = [value for row in eps for value in row if value is not None]
	e = max(present, default=0)
	if e == 0:
		raise SystemNotDifference("the system involves no transforms (e = 0)")
	return eps, e
