"""
Exact rank computations.

``bareiss_rank`` works on polynomial rows (denominators already cleared) with
fraction-free elimination; ``EchelonForm`` is an incremental sparse row
echelon form over any exact field and yields rank profiles of row prefixes.
"""

from collections.abc import Iterable, Sequence
from functools import reduce


def clear_row_denominators(row: Sequence) -> list:
	"""
	Multiplies a row of field elements by the lcm of its denominators.

	Returns the row as polynomials; scaling a row by a nonzero element does
	not change the rank.
	"""
	nonzero = [x for x in row if x]
	if not nonzero:
		ring = row[0].field.ring if row else None
		return [ring.zero for _ in row] if ring is not None else []
	ring = nonzero[0].field.ring
	common = reduce(lambda acc, x: acc.lcm(x.denom), nonzero, ring.one)
	return [x.numer * common.exquo(x.denom) if x else ring.zero for x in row]


def _pivot_weight(poly) -> tuple[int, int]:
	return (max(sum(monom) for monom in poly.itermonoms()), len(poly))


def bareiss_rank(rows: Sequence[Sequence]) -> int:
	"""
	Rank of a matrix of sympy polynomials by fraction-free Bareiss elimination.

	Zero columns are skipped; among the candidate pivots of a column the one
	of lowest degree is used to keep intermediate entries small.
	"""
	matrix = [list(row) for row in rows if any(row)]
	if not matrix:
		return 0
	ring = next(x for x in matrix[0] if x).ring
	ncols = len(matrix[0])
	previous = ring.one
	rank = 0
	col = 0

	while rank < len(matrix) and col < ncols:
		candidates = [r for r in range(rank, len(matrix)) if matrix[r][col]]
		if not candidates:
			col += 1
			continue
		best = min(candidates, key=lambda r: _pivot_weight(matrix[r][col]))
		matrix[rank], matrix[best] = matrix[best], matrix[rank]
		pivot_row = matrix[rank]
		pivot = pivot_row[col]

		for r in range(rank + 1, len(matrix)):
			row = matrix[r]
			factor = row[col]
			for c in range(col + 1, ncols):
				value = pivot * row[c]
				if factor and pivot_row[c]:
					value = value - factor * pivot_row[c]
				row[c] = value.exquo(previous) if value else value
			row[col] = ring.zero

		previous = pivot
		rank += 1
		col += 1

	return rank


def fraction_rank(rows: Sequence[Sequence]) -> int:
	"""Exact rank of a matrix of sympy ``FracElement`` values."""
	return bareiss_rank([clear_row_denominators(row) for row in rows])


class EchelonForm:
	"""
	Sparse row echelon form built one row at a time.

	Rows are ``{column: value}`` maps over an exact field. Every stored pivot
	row has a distinct leading column and leading coefficient one.
	"""

	def __init__(self):
		self._pivots: dict[int, dict] = {}

	@property
	def rank(self) -> int:
		return len(self._pivots)

	def insert(self, row: dict) -> bool:
		"""Adds a row; returns True when it raised the rank."""
		row = {c: v for c, v in row.items() if v}
		while row:
			lead = min(row)
			pivot_row = self._pivots.get(lead)
			if pivot_row is None:
				scale = 1 / row[lead]
				self._pivots[lead] = {c: v * scale for c, v in row.items()}
				return True
			factor = row[lead]
			for c, v in pivot_row.items():
				value = row.get(c, 0) - factor * v
				if value:
					row[c] = value
				else:
					row.pop(c, None)
		return False


def prefix_ranks(rows: Iterable[dict], row_counts: Sequence[int]) -> list[int]:
	"""
	Ranks of the leading ``row_counts[i]`` rows, computed in one pass.
	"""
	wanted = sorted(set(row_counts))
	ranks = {}
	echelon = EchelonForm()
	seen = 0
	iterator = iter(rows)
	for count in wanted:
		while seen < count:
			echelon.insert(next(iterator))
			seen += 1
		ranks[count] = echelon.rank
	return [ranks[count] for count in row_counts]
