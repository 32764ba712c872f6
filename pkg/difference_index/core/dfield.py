"""
Difference fields: ℚ or ℚ(t1, ..., tm) together with an endomorphism σ given
by the images of the generators.

Elements are sympy ``FracElement`` values, which are kept in canonical form
(coprime numerator and denominator, normalized denominator) by sympy itself.
"""

import random
from collections.abc import Iterable, Mapping

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import grevlex

from difference_index.core.errors import (
	ConstantSigmaImage,
	DependentSigmaImages,
	DivisionByZero,
	MalformedExpression,
	PointSearchExhausted,
	ValidationError,
)
from difference_index.core.expressions import (
	FieldAlgebra,
	canonical_power,
	format_element,
	parse,
	rational_value,
)

FieldElement = FracElement


class DifferenceField:
	"""
	A rational function field over ℚ with a declared endomorphism σ.

	Use :func:`make_field` to build validated instances.
	"""

	def __init__(self, generators: Iterable[str], images: Mapping[str, str] | None = None):
		self.generators = tuple(generators)
		self.field = FracField([Symbol(name) for name in self.generators], QQ, grevlex)
		self.ring = self.field.ring
		self._names = dict(zip(self.generators, self.field.gens))
		self._algebra = FieldAlgebra(self.field, self._names)

		images = dict(images or {})
		self.sigma_images = {
			name: self.parse(images[name]) if name in images else self._names[name] for name in self.generators
		}
		self._image_tuple = tuple(self.sigma_images[name] for name in self.generators)
		self.is_identity = all(self.sigma_images[name] == self._names[name] for name in self.generators)

	def __repr__(self):
		images = ", ".join(f"{name} -> {format_element(image)}" for name, image in self.sigma_images.items())
		return f"DifferenceField([{', '.join(self.generators)}]; {images or 'id'})"

	def __eq__(self, other):
		return (
			isinstance(other, DifferenceField)
			and self.generators == other.generators
			and self.sigma_images == other.sigma_images
		)

	def __hash__(self):
		return hash((self.generators, tuple(self.sigma_images.values())))

	@property
	def ngens(self) -> int:
		return len(self.generators)

	@property
	def zero(self):
		return self.field.zero

	@property
	def one(self):
		return self.field.one

	def gen(self, name: str):
		return self._names[name]

	def element(self, value):
		"""Coerces an int, a rational, a string or an element of this field."""
		if isinstance(value, str):
			return self.parse(value)
		if self.field.is_element(value):
			return value
		return self.field.ground_new(QQ.convert(value))

	def parse(self, text: str):
		return parse(text, self._algebra)

	def format(self, x) -> str:
		return format_element(x)

	def is_constant(self, x) -> bool:
		return x.numer.is_ground and x.denom.is_ground

	def rational(self, x):
		return rational_value(x)

	def sigma(self, x, m: int = 1):
		"""σ^m(x) by m-fold substitution of the generator images."""
		if self.is_identity or self.is_constant(x):
			return x
		for _ in range(m):
			x = self.substitute(x, self._image_tuple)
		return x

	def substitute(self, x, values):
		"""Replaces the generators of ``x`` by ``values`` (elements of this field)."""
		return self._substitute_poly(x.numer, values) / self._substitute_poly(x.denom, values)

	def _substitute_poly(self, poly, values):
		result = self.field.zero
		for monom, coeff in poly.items():
			term = self.field.ground_new(coeff)
			for value, exponent in zip(values, monom):
				if exponent:
					term = term * canonical_power(self.field, value, exponent)
			result = result + term
		return result

	def embed(self, x, target: "DifferenceField"):
		"""Maps ``x`` into ``target`` by generator-name matching."""
		if target is self:
			return x
		positions = [target.generators.index(name) for name in self.generators]

		def move(poly):
			terms = {}
			for monom, coeff in poly.items():
				exponents = [0] * target.ngens
				for position, exponent in zip(positions, monom):
					exponents[position] = exponent
				terms[tuple(exponents)] = coeff
			return target.ring.from_dict(terms)

		return target.field.new(move(x.numer), move(x.denom))

	def evaluate(self, x, point: Mapping[str, object]):
		"""Evaluates ``x`` at a rational point; ``DivisionByZero`` on a pole."""
		values = [QQ.convert(point[name]) for name in self.generators]
		denominator = evaluate_poly(x.denom, values)
		if not denominator:
			raise DivisionByZero(f"{self.format(x)} has a pole at {dict(point)}")
		return evaluate_poly(x.numer, values) / denominator


def evaluate_poly(poly, values):
	total = QQ.zero
	for monom, coeff in poly.items():
		term = QQ.convert(coeff)
		for value, exponent in zip(values, monom):
			if exponent:
				term *= value**exponent
		total += term
	return total


def make_field(generators: Iterable[str], sigma_images: Mapping[str, str] | None = None) -> DifferenceField:
	"""
	Builds and validates a difference field descriptor.

	Images must be nonconstant; for several generators the Jacobian of the
	image tuple must have full rank.
	"""
	from difference_index.core.linalg import fraction_rank

	generators = list(generators)
	if len(set(generators)) != len(generators):
		raise ValidationError(f"duplicate generator names in {generators}")
	unknown = set(sigma_images or {}) - set(generators)
	if unknown:
		raise ValidationError(f"sigma images given for unknown generators {sorted(unknown)}")

	try:
		field = DifferenceField(generators, sigma_images)
	except (MalformedExpression, DivisionByZero) as e:
		raise MalformedExpression(f"invalid sigma image: {e.message}")

	for name, image in field.sigma_images.items():
		if field.is_constant(image):
			raise ConstantSigmaImage(f"sigma({name}) = {field.format(image)} is constant")

	if field.ngens > 1:
		jacobian = [[image.diff(gen) for gen in field.field.gens] for image in field._image_tuple]
		if fraction_rank(jacobian) < field.ngens:
			raise DependentSigmaImages("the Jacobian of the sigma images is rank deficient")

	return field


def sigma_apply(x, field: DifferenceField, m: int):
	return field.sigma(x, m)


def field_add(x, y):
	return x + y


def field_mul(x, y):
	return x * y


def field_neg(x):
	return -x


def field_inv(x):
	if not x:
		raise DivisionByZero("inverse of zero")
	return x.field.one / x


def field_is_zero(x) -> bool:
	return not x


def random_rational_point(
	field: DifferenceField,
	seed: int | str | random.Random,
	bound: int,
	denominators: Iterable = (),
	retries: int = 64,
) -> dict:
	"""
	Draws positive rationals with numerator and denominator in [1, bound] for
	every generator, rejecting points where any of ``denominators`` vanishes.
	"""
	if bound < 2:
		raise ValueError("bound must be at least 2")
	rng = seed if isinstance(seed, random.Random) else random.Random(seed)
	denominators = [d for d in denominators if not d.is_ground]

	for _ in range(retries):
		point = {name: QQ(rng.randint(1, bound), rng.randint(1, bound)) for name in field.generators}
		values = [point[name] for name in field.generators]
		if all(evaluate_poly(d, values) for d in denominators):
			return point
	raise PointSearchExhausted(f"no pole-free point found after {retries} attempts")
