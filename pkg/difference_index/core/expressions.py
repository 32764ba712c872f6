"""
Tokenizer, recursive-descent parser and printer for the expression grammar.

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' nat)?
    atom   := rational | name | name '@' nat | '(' expr ')' | '-' atom

Rationals are ``int`` or ``int/nat``. Field elements additionally allow
``term '/' factor``; equations admit division only inside a rational literal,
so ``-y1^2`` is the square of ``-y1``.

The parser is generic over an ``ExpressionAlgebra`` which decides what names
mean and whether division is allowed. Field elements (sympy ``FracElement``)
and difference polynomials both plug in through it.
"""

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

from sympy.polys.domains import QQ
from sympy.printing.precedence import PRECEDENCE
from sympy.printing.str import StrPrinter

from difference_index.core.errors import (
	DivisionByZero,
	DivisionInEquation,
	ExpressionSyntaxError,
	NegativeExponent,
	UnknownIdentifier,
)

_TOKEN_RE = re.compile(r"(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^@()])")


@dataclass(frozen=True)
class Token:
	kind: str  # "number", "name", "op" or "end"
	text: str
	position: int


def tokenize(text: str) -> list[Token]:
	tokens = []
	position = 0
	while position < len(text):
		if text[position].isspace():
			position += 1
			continue
		match = _TOKEN_RE.match(text, position)
		if match is None:
			raise ExpressionSyntaxError(f"unexpected character {text[position]!r}", position, text)
		tokens.append(Token(match.lastgroup, match.group(), position))
		position = match.end()
	tokens.append(Token("end", "", len(text)))
	return tokens


class ExpressionAlgebra(ABC):
	"""
	Interprets the leaves of a parsed expression.

	Values returned by the algebra must support ``+``, ``-``, ``*`` and unary
	minus; powers and divisions go through the algebra so that results stay
	canonical.
	"""

	allows_division: bool = False

	@abstractmethod
	def number(self, value: int) -> Any:
		pass

	@abstractmethod
	def name(self, name: str, position: int) -> Any:
		pass

	def shifted(self, name: str, order: int, position: int) -> Any:
		raise ExpressionSyntaxError(f"transform suffix not allowed on '{name}'", position)

	@abstractmethod
	def power(self, base: Any, exponent: int) -> Any:
		pass

	@abstractmethod
	def rational(self, numerator: int, denominator: int) -> Any:
		"""The literal numerator/denominator; ``denominator`` is positive."""

	def divide(self, left: Any, right: Any, position: int) -> Any:
		"""Only called when ``allows_division`` is set."""
		raise NotImplementedError


class Parser:
	def __init__(self, text: str, algebra: ExpressionAlgebra):
		self.text = text
		self.algebra = algebra
		self.tokens = tokenize(text)
		self.index = 0

	@property
	def current(self) -> Token:
		return self.tokens[self.index]

	def _advance(self) -> Token:
		token = self.tokens[self.index]
		if token.kind != "end":
			self.index += 1
		return token

	def _at(self, text: str) -> bool:
		return self.current.kind == "op" and self.current.text == text

	def _error(self, message: str, token: Token | None = None) -> ExpressionSyntaxError:
		token = token or self.current
		if token.kind == "end":
			message = f"{message}: unexpected end of input"
		else:
			message = f"{message}: unexpected {token.text!r}"
		return ExpressionSyntaxError(message, token.position, self.text)

	def parse(self) -> Any:
		value = self.expr()
		if self.current.kind != "end":
			raise self._error("expected operator")
		return value

	def expr(self) -> Any:
		value = self.term()
		while self._at("+") or self._at("-"):
			op = self._advance().text
			right = self.term()
			value = value + right if op == "+" else value - right
		return value

	def term(self) -> Any:
		value = self.factor()
		while self._at("*") or self._at("/"):
			op = self._advance()
			if op.text == "*":
				value = value * self.factor()
			elif self.algebra.allows_division:
				value = self.algebra.divide(value, self.factor(), op.position)
			else:
				raise DivisionInEquation(f"division outside a rational literal at position {op.position}")
		return value

	def factor(self) -> Any:
		base = self.atom()
		if self._at("^"):
			self._advance()
			token = self.current
			if self._at("-"):
				raise NegativeExponent(f"negative exponent at position {token.position}")
			if token.kind != "number":
				raise self._error("expected exponent")
			self._advance()
			base = self.algebra.power(base, int(token.text))
		return base

	def atom(self) -> Any:
		token = self.current
		if self._at("-"):
			self._advance()
			return -self.atom()
		if token.kind == "number":
			self._advance()
			return self._number(token)
		if token.kind == "name":
			self._advance()
			if self._at("@"):
				self._advance()
				order = self.current
				if order.kind != "number":
					raise self._error("expected transform order")
				self._advance()
				return self.algebra.shifted(token.text, int(order.text), token.position)
			return self.algebra.name(token.text, token.position)
		if self._at("("):
			self._advance()
			value = self.expr()
			if not self._at(")"):
				raise self._error("expected ')'")
			self._advance()
			return value
		raise self._error("expected operand")

	def _number(self, token: Token) -> Any:
		if not (self._at("/") and self.tokens[self.index + 1].kind == "number"):
			return self.algebra.number(int(token.text))
		self._advance()
		denominator = self._advance()
		if int(denominator.text) == 0:
			raise DivisionByZero(f"division by zero at position {denominator.position}")
		return self.algebra.rational(int(token.text), int(denominator.text))


def parse(text: str, algebra: ExpressionAlgebra) -> Any:
	return Parser(text, algebra).parse()


class FieldAlgebra(ExpressionAlgebra):
	"""Field-element context: names are generators and '/' is division."""

	allows_division = True

	def __init__(self, frac_field, names: dict[str, Any]):
		self.frac_field = frac_field
		self.names = names

	def number(self, value: int):
		return self.frac_field.ground_new(value)

	def rational(self, numerator: int, denominator: int):
		return self.frac_field.ground_new(QQ(numerator, denominator))

	def name(self, name: str, position: int):
		if name not in self.names:
			raise UnknownIdentifier(name, position)
		return self.names[name]

	def power(self, base, exponent: int):
		return canonical_power(self.frac_field, base, exponent)

	def divide(self, left, right, position: int):
		if not right:
			raise DivisionByZero(f"division by zero at position {position}")
		return left / right


def canonical_power(frac_field, base, exponent: int):
	"""``base**exponent`` for a nonnegative exponent, re-cancelled."""
	if exponent == 0:
		return frac_field.one
	return frac_field.new(base.numer**exponent, base.denom**exponent)


class CaretPrinter(StrPrinter):
	"""StrPrinter variant whose output reads back through :func:`parse`."""

	def _print_PolyElement(self, poly):
		text = poly.str(self, PRECEDENCE, "%s^%s", "*")
		if not poly:
			return text
		monom, coeff = poly.terms()[0]
		first_exponent = next((e for e in monom if e), 0)
		if coeff == -poly.ring.domain.one and first_exponent > 1:
			# "-t^2" reads back as (-t)^2
			return "-1*" + text[1:]
		return text


_printer = CaretPrinter()


def format_poly(poly) -> str:
	"""Prints a sympy ``PolyElement`` in the caret grammar."""
	return _printer.doprint(poly)


def format_rational(value) -> str:
	value = QQ.convert(value)
	numerator, denominator = QQ.numer(value), QQ.denom(value)
	if denominator == 1:
		return str(numerator)
	return f"{numerator}/{denominator}"


def format_element(element) -> str:
	"""Prints a field element (a sympy ``FracElement``) in the caret grammar."""
	if element.numer.is_ground and element.denom.is_ground:
		return format_rational(rational_value(element))
	return _printer.doprint(element)


def rational_value(element):
	"""The rational value of a constant field element."""
	ring = element.field.ring
	zero = ring.domain.zero
	numer = element.numer.get(ring.zero_monom, zero)
	denom = element.denom.get(ring.zero_monom, zero)
	return QQ.convert(numer) / QQ.convert(denom)
