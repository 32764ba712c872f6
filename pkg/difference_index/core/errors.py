"""
Exception hierarchy shared by the whole package.

Every error carries the process exit code the ``dindex`` command maps it to.
"""


class DifferenceIndexError(Exception):
	"""Base class for all errors raised by difference_index."""

	exit_code = 1

	def __init__(self, message: str = ""):
		super().__init__(message)
		self.message = message


class ValidationError(DifferenceIndexError):
	"""Raised when an input (system file, expression, field descriptor) is rejected."""

	pass


class MalformedExpression(ValidationError):
	pass


class ExpressionSyntaxError(MalformedExpression):
	"""A parse failure at a known character offset of the input text."""

	def __init__(self, message: str, position: int, text: str = ""):
		super().__init__(f"{message} at position {position}")
		self.position = position
		self.text = text


class UnknownIdentifier(MalformedExpression):
	def __init__(self, name: str, position: int):
		super().__init__(f"unknown identifier '{name}' at position {position}")
		self.name = name
		self.position = position


class DivisionInEquation(MalformedExpression):
	pass


class NegativeExponent(MalformedExpression):
	pass


class ConstantSigmaImage(ValidationError):
	pass


class DependentSigmaImages(ValidationError):
	pass


class SystemNotDifference(ValidationError):
	pass


class IndexTooSmall(ValidationError):
	pass


class DivisionByZero(ValidationError):
	pass


class SystemFileError(ValidationError):
	pass


class SpecializationError(DifferenceIndexError):
	"""The supplied point is not a solution, or the coefficient fields do not embed."""

	exit_code = 2


class NotASolution(SpecializationError):
	"""
	Raised when some equations do not vanish at the specialization.

	``residuals`` maps the 1-based equation index to the printed nonzero residual.
	"""

	def __init__(self, residuals: dict[int, str]):
		parts = ", ".join(f"f{index} evaluates to {value}" for index, value in residuals.items())
		super().__init__(parts)
		self.residuals = residuals


class EmbeddingMismatch(SpecializationError):
	pass


class HypothesisViolation(DifferenceIndexError):
	"""A computed profile contradicts one of the standing hypotheses of the theory."""

	exit_code = 3


class TailNotLinear(HypothesisViolation):
	pass


class SlopeMismatch(HypothesisViolation):
	pass


class InvariantViolation(HypothesisViolation):
	pass


class OnsetExceedsBound(HypothesisViolation):
	"""A lemma-lab trial whose rank profile settles later than the proven bound."""

	def __init__(self, message: str, artifact: dict | None = None):
		super().__init__(message)
		self.artifact = artifact or {}


class OracleError(DifferenceIndexError):
	pass


class OracleTooLarge(OracleError):
	pass


class OracleUnsupported(OracleError):
	pass


class NoStabilizationWithinBudget(OracleError):
	pass


class PointSearchExhausted(DifferenceIndexError):
	pass


class HypothesisUnmet(DifferenceIndexError):
	"""The membership bound hypothesis fails; only the fallback bound is meaningful."""

	def __init__(self, message: str, fallback=None):
		super().__init__(message)
		self.fallback = fallback
