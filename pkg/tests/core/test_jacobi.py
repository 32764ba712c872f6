import pytest

from difference_index.core.dfield import make_field
from difference_index.core.errors import IndexTooSmall, ValidationError
from difference_index.core.jacobi import (
	BlockFamily,
	build_Jk,
	build_Jki,
	build_Mk,
	build_Nk,
	jacobian_blocks,
)
from difference_index.core.sigma_poly import SigmaRing, SystemSpec


@pytest.fixture
def twisted_system():
	"""A system with non-constant coefficients so that transforms are visible."""
	ring = SigmaRing(make_field(["t"], {"t": "t + 1"}), ["y1", "y2"])
	return SystemSpec.build(ring, ["t*y1@2 - y2@1 + y1", "y1@1*y2 - t"])


def test_jacobian_blocks_of_worked_example(example7):
	S, _ = example7
	blocks = jacobian_blocks(S)
	assert [block.to_strings() for block in blocks] == [
		[["-1", "0"], ["0", "-1"], ["y2", "y1"]],
		[["0", "0"], ["1", "0"], ["0", "0"]],
		[["1", "0"], ["0", "0"], ["0", "0"]],
	]


def test_shapes(example7):
	S, _ = example7
	for k in range(1, 4):
		assert (build_Jk(S, k).rows, build_Jk(S, k).cols) == (3 * k, 2 * (k + 2))
		assert (build_Jki(S, k, 1).rows, build_Jki(S, k, 1).cols) == (3 * k, 2 * k)


def test_Jk_block_rows_are_transforms_of_the_first(twisted_system):
	S = twisted_system
	k, r, n = 4, S.r, S.n
	J = build_Jk(S, k)
	first = J.block(0, r, 0, (S.e + 1) * n)
	for b in range(1, k):
		assert J.block(b * r, r, b * n, (S.e + 1) * n) == first.transform(b)
		left = J.block(b * r, r, 0, b * n)
		assert all(p.is_zero() for row in left.entries for p in row)


def test_Jki_shift_coherence(twisted_system):
	S = twisted_system
	for i in range(S.e - 1, S.e + 2):
		assert build_Jki(S, 3, i + 1) == build_Jki(S, 3, i).transform(1)


def test_Jki_embedding(twisted_system):
	S = twisted_system
	r, n = S.r, S.n
	for k in range(1, 4):
		small = build_Jki(S, k, 1)
		big = build_Jki(S, k + 1, 1)
		assert big.block(0, k * r, 0, k * n) == small
		assert all(p.is_zero() for row in big.block(0, k * r, k * n, n).entries for p in row)


def test_Jki_is_lower_block_triangular(example7):
	S, _ = example7
	J = build_Jki(S, 4, 1)
	for b in range(4):
		for c in range(b + 1, 4):
			assert all(p.is_zero() for row in J.block(b * 3, 3, c * 2, 2).entries for p in row)


def test_index_too_small(example7):
	S, _ = example7
	with pytest.raises(IndexTooSmall):
		build_Jki(S, 2, 0)
	with pytest.raises(ValidationError):
		build_Jk(S, 0)


@pytest.fixture
def family():
	field = make_field(["t"], {"t": "t + 1"})
	E1 = ((field.parse("t"), field.parse("1")),)
	E2 = ((field.parse("2"), field.parse("t^2")),)
	return BlockFamily(field, (E1, E2))


def test_M2_layout(family):
	M = build_Mk(family, 2)
	assert (M.rows, M.cols) == (2, 6)
	assert M.to_strings() == [
		["t", "1", "2", "t^2", "0", "0"],
		["0", "0", "t + 1", "1", "2", "t^2 + 2*t + 1"],
	]


def test_N3_layout(family):
	N = build_Nk(family, 3)
	assert (N.rows, N.cols) == (3, 6)
	assert N.to_strings() == [
		["t", "1", "0", "0", "0", "0"],
		["2", "t^2 + 2*t + 1", "t + 1", "1", "0", "0"],
		["0", "0", "2", "t^2 + 4*t + 4", "t + 2", "1"],
	]


def test_block_family_rejects_mixed_shapes():
	field = make_field(["t"])
	with pytest.raises(ValidationError):
		BlockFamily(field, (((field.one,),), ((field.one, field.one),)))
