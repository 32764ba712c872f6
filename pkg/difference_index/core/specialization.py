"""
Generic solution points: σ-compatible assignments y_j -> L that stand in for
the residue field of the prime ideal.
"""

import logging
from collections.abc import Mapping

from difference_index.core.dfield import DifferenceField
from difference_index.core.errors import EmbeddingMismatch, NotASolution, ValidationError
from difference_index.core.jacobi import EvaluatedMatrix, SymbolicMatrix
from difference_index.core.sigma_poly import SigmaPolynomial, SystemSpec


class Specialization:
	"""
	Assignment of every system variable to an element of the target field L.

	``y_j@k`` evaluates to σ_L^k(assign(y_j)); coefficients of K are embedded
	into L by generator-name matching.
	"""

	def __init__(self, target: DifferenceField, assign: Mapping[str, object]):
		self.target = target
		self.assign = {name: target.element(value) for name, value in assign.items()}
		self._orbits: dict[str, list] = {name: [value] for name, value in self.assign.items()}

	def __repr__(self):
		values = ", ".join(f"{name} -> {self.target.format(value)}" for name, value in self.assign.items())
		return f"Specialization({self.target!r}; {values})"

	def value(self, name: str, k: int):
		orbit = self._orbits[name]
		while len(orbit) <= k:
			orbit.append(self.target.sigma(orbit[-1]))
		return orbit[k]

	def evaluate(self, p: SigmaPolynomial):
		variables = p.ring.variables
		source = p.field
		result = self.target.zero
		for monom, coeff in p.terms():
			term = source.embed(coeff, self.target)
			for v, exponent in monom:
				value = self.value(variables[v.var_index - 1], v.transform_order)
				term = term * value**exponent
			result = result + term
		return result


def validate_specialization(S: SystemSpec, sp: Specialization, logger: logging.Logger | None = None) -> None:
	"""
	Checks that K embeds into L compatibly with σ and that every equation
	vanishes at the point.
	"""
	logger = logger or logging.getLogger(__name__)
	source, target = S.field, sp.target

	missing = [name for name in source.generators if name not in target.generators]
	if missing:
		raise EmbeddingMismatch(f"coefficient generators {missing} are not generators of the target field")
	for name in source.generators:
		expected = target.sigma(target.gen(name))
		actual = source.embed(source.sigma(source.gen(name)), target)
		if expected != actual:
			raise EmbeddingMismatch(
				f"sigma({name}) is {source.format(source.sigma(source.gen(name)))} in the coefficient field "
				f"but {target.format(expected)} in the target field"
			)

	unassigned = [name for name in S.ring.variables if name not in sp.assign]
	if unassigned:
		raise ValidationError(f"variables without an assignment: {unassigned}")
	extra = [name for name in sp.assign if name not in S.ring.variables]
	if extra:
		raise ValidationError(f"assignment for unknown variables: {extra}")

	residuals = {}
	for index, f in enumerate(S.equations, start=1):
		value = sp.evaluate(f)
		if value:
			residuals[index] = target.format(value)
	if residuals:
		raise NotASolution(residuals)
	logger.debug(f"Specialization {sp!r} annihilates all {S.r} equations.")


def evaluate(M: SymbolicMatrix, sp: Specialization) -> EvaluatedMatrix:
	entries = tuple(tuple(sp.evaluate(p) for p in row) for row in M.entries)
	return EvaluatedMatrix(sp.target, entries, M.cols)

