"""
Builders for the structured matrices of the theory.

``J_k``   kr x (k+e)n Jacobian of (F, F^(1), ..., F^(k-1)) in Y, ..., Y^(k-1+e)
``J_k,i`` kr x kn lower block-triangular pseudo-Jacobian above order i
``M_k``   twisted block-banded matrix of a block family E_1..E_t
``N_k``   lower block-triangular twisted matrix of a block family

Only the e+1 base blocks dF/dY^(q) are differentiated; every other block is a
transform of one of them.
"""

from collections.abc import Sequence
from dataclasses import dataclass

from difference_index.core.dfield import DifferenceField
from difference_index.core.errors import IndexTooSmall, ValidationError
from difference_index.core.sigma_poly import SigmaPolynomial, SigmaRing, SystemSpec, VarRef


@dataclass(frozen=True)
class SymbolicMatrix:
	"""A dense matrix of difference polynomials."""

	ring: SigmaRing
	entries: tuple[tuple[SigmaPolynomial, ...], ...]
	cols: int

	@property
	def rows(self) -> int:
		return len(self.entries)

	def entry(self, i: int, j: int) -> SigmaPolynomial:
		return self.entries[i][j]

	def transform(self, m: int) -> "SymbolicMatrix":
		return SymbolicMatrix(self.ring, tuple(tuple(p.transform(m) for p in row) for row in self.entries), self.cols)

	def block(self, row_start: int, rows: int, col_start: int, cols: int) -> "SymbolicMatrix":
		return SymbolicMatrix(
			self.ring,
			tuple(tuple(row[col_start : col_start + cols]) for row in self.entries[row_start : row_start + rows]),
			cols,
		)

	def to_strings(self) -> list[list[str]]:
		return [[str(p) for p in row] for row in self.entries]


@dataclass(frozen=True)
class EvaluatedMatrix:
	"""A dense matrix over a difference field (sympy ``FracElement`` entries)."""

	field: DifferenceField
	entries: tuple[tuple, ...]
	cols: int

	@property
	def rows(self) -> int:
		return len(self.entries)

	def transform(self, m: int = 1) -> "EvaluatedMatrix":
		return EvaluatedMatrix(
			self.field, tuple(tuple(self.field.sigma(x, m) for x in row) for row in self.entries), self.cols
		)

	def top_rows(self, count: int) -> "EvaluatedMatrix":
		return EvaluatedMatrix(self.field, self.entries[:count], self.cols)

	def to_strings(self) -> list[list[str]]:
		return [[self.field.format(x) for x in row] for row in self.entries]


class _Layout:
	"""Mutable scratch grid used while placing blocks."""

	def __init__(self, rows: int, cols: int, zero):
		self.grid = [[zero] * cols for _ in range(rows)]
		self.cols = cols

	def place(self, row_start: int, col_start: int, block: Sequence[Sequence]):
		for i, row in enumerate(block):
			for j, value in enumerate(row):
				self.grid[row_start + i][col_start + j] = value

	def frozen(self) -> tuple[tuple, ...]:
		return tuple(tuple(row) for row in self.grid)


def jacobian_blocks(S: SystemSpec) -> list[SymbolicMatrix]:
	"""The r x n blocks dF/dY^(q) for q = 0..e."""
	blocks = []
	for q in range(S.e + 1):
		entries = tuple(
			tuple(f.diff(VarRef(j, q)) for j in range(1, S.n + 1)) for f in S.equations
		)
		blocks.append(SymbolicMatrix(S.ring, entries, S.n))
	return blocks


def build_Jk(S: SystemSpec, k: int, blocks: list[SymbolicMatrix] | None = None) -> SymbolicMatrix:
	if k < 1:
		raise ValidationError(f"J_k needs k >= 1, got {k}")
	blocks = blocks or jacobian_blocks(S)
	r, n, e = S.r, S.n, S.e
	layout = _Layout(k * r, (k + e) * n, S.ring.zero)
	for b in range(k):
		for q, block in enumerate(blocks):
			layout.place(b * r, (b + q) * n, block.transform(b).entries)
	return SymbolicMatrix(S.ring, layout.frozen(), (k + e) * n)


def build_Jki(S: SystemSpec, k: int, i: int, blocks: list[SymbolicMatrix] | None = None) -> SymbolicMatrix:
	"""
	Block (b, c) with c <= b is the transform by i-e+1+b of dF/dY^(e-b+c);
	blocks with e-b+c < 0 are zero.
	"""
	if i < S.e - 1:
		raise IndexTooSmall(f"i = {i} is below e - 1 = {S.e - 1}")
	if k < 0:
		raise ValidationError(f"J_k,i needs k >= 0, got {k}")
	blocks = blocks or jacobian_blocks(S)
	r, n, e = S.r, S.n, S.e
	layout = _Layout(k * r, k * n, S.ring.zero)
	for b in range(k):
		shifted = [block.transform(i - e + 1 + b) for block in blocks]
		for c in range(b + 1):
			q = e - b + c
			if q >= 0:
				layout.place(b * r, c * n, shifted[q].entries)
	return SymbolicMatrix(S.ring, layout.frozen(), k * n)


@dataclass(frozen=True)
class BlockFamily:
	"""Blocks E_1, ..., E_t of a common size p x q over a difference field."""

	field: DifferenceField
	blocks: tuple[tuple[tuple, ...], ...]

	def __post_init__(self):
		if not self.blocks:
			raise ValidationError("a block family needs at least one block")
		shapes = {(len(block), len(block[0]) if block else 0) for block in self.blocks}
		if len(shapes) != 1:
			raise ValidationError(f"blocks have different shapes: {sorted(shapes)}")

	@property
	def t(self) -> int:
		return len(self.blocks)

	@property
	def p(self) -> int:
		return len(self.blocks[0])

	@property
	def q(self) -> int:
		return len(self.blocks[0][0])

	def transformed(self, a: int, m: int) -> tuple[tuple, ...]:
		"""E_a^(m), with ``a`` 1-based."""
		return tuple(tuple(self.field.sigma(x, m) for x in row) for row in self.blocks[a - 1])

	def to_strings(self) -> list[list[list[str]]]:
		return [[[self.field.format(x) for x in row] for row in block] for block in self.blocks]


def build_Mk(B: BlockFamily, k: int) -> EvaluatedMatrix:
	if k < 1:
		raise ValidationError(f"M_k needs k >= 1, got {k}")
	p, q, t = B.p, B.q, B.t
	cols = (k + t - 1) * q
	layout = _Layout(k * p, cols, B.field.zero)
	for b in range(k):
		for a in range(1, t + 1):
			layout.place(b * p, (b + a - 1) * q, B.transformed(a, b))
	return EvaluatedMatrix(B.field, layout.frozen(), cols)


def build_Nk(B: BlockFamily, k: int) -> EvaluatedMatrix:
	if k < 1:
		raise ValidationError(f"N_k needs k >= 1, got {k}")
	p, q, t = B.p, B.q, B.t
	layout = _Layout(k * p, k * q, B.field.zero)
	for b in range(k):
		for c in range(b + 1):
			a = b - c + 1
			if a <= t:
				layout.place(b * p, c * q, B.transformed(a, b))
	return EvaluatedMatrix(B.field, layout.frozen(), k * q)
