import json
import random
from unittest.mock import MagicMock

import pytest

from difference_index.core.errors import OnsetExceedsBound, ValidationError
from difference_index.core.lemma_lab import (
	default_lemma_field,
	lemma_bound,
	lemma_lab,
	random_block_family,
	rank_sequence,
)
from difference_index.core.rank_engine import ExactRankEngine


@pytest.mark.parametrize(
	"kind, t, p, q, expected",
	[
		("M", 1, 3, 2, 0),
		("M", 3, 2, 4, 6),
		("N", 3, 2, 4, 8),
		("N", 2, 1, 1, 3),
	],
)
def test_lemma_bound(kind, t, p, q, expected):
	assert lemma_bound(kind, t, p, q) == expected


def test_lemma_bound_unknown_kind():
	with pytest.raises(ValidationError):
		lemma_bound("X", 2, 2, 2)


def test_random_block_family_shape_and_seed():
	dfield = default_lemma_field()
	first = random_block_family(dfield, 3, 2, 4, random.Random("7"))
	second = random_block_family(dfield, 3, 2, 4, random.Random("7"))

	assert (first.t, first.p, first.q) == (3, 2, 4)
	assert first.to_strings() == second.to_strings()


def test_single_block_rank_is_linear_from_zero():
	"""
	With t = 1 the matrix is block diagonal, so its rank is k * rank(E_1).
	"""
	dfield = default_lemma_field()
	family = random_block_family(dfield, 1, 2, 2, random.Random("block"))
	ranks = rank_sequence("M", family, 4, ExactRankEngine())
	step = ranks[1]
	assert ranks == [k * step for k in range(5)]


@pytest.mark.parametrize("kind", ["M", "N"])
def test_lemma_lab_small_run(kind):
	report = lemma_lab(kind, 2, 2, 2, trials=5, seed=1)

	assert len(report.onsets) == 5
	assert report.max_onset <= report.bound
	assert sum(report.distribution.values()) == 5
	data = report.to_dict()
	assert data["kind"] == kind
	assert data["trials"] == 5
	json.dumps(data)


def test_lemma_lab_is_reproducible():
	first = lemma_lab("M", 2, 1, 2, trials=4, seed=9)
	second = lemma_lab("M", 2, 1, 2, trials=4, seed=9)
	assert first.onsets == second.onsets


def test_lemma_lab_rejects_empty_blocks():
	with pytest.raises(ValidationError):
		lemma_lab("M", 2, 0, 2, trials=1)


def test_late_onset_raises_with_artifact():
	"""
	Tests that a rank profile settling after the bound is reported with its blocks.
	"""
	engine = MagicMock()
	# M_k with t = 2, p = q = 1 has bound 2 and is ranked up to k = 5
	engine.prefix_ranks.return_value = [0, 0, 0, 1, 2]

	with pytest.raises(OnsetExceedsBound) as excinfo:
		lemma_lab("M", 2, 1, 1, trials=3, seed=0, engine=engine)

	artifact = excinfo.value.artifact
	assert artifact["trial"] == 0
	assert artifact["onset"] == 3
	assert artifact["bound"] == 2
	assert artifact["ranks"] == [0, 0, 0, 0, 1, 2]
	assert len(artifact["blocks"]) == 2
	assert excinfo.value.exit_code == 3
	engine.prefix_ranks.assert_called_once()


@pytest.mark.slow
@pytest.mark.parametrize("t", [1, 2, 3])
@pytest.mark.parametrize("p", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_M_onset_within_bound(t, p, q):
	report = lemma_lab("M", t, p, q, trials=100, seed=42)
	assert report.max_onset <= lemma_bound("M", t, p, q)


@pytest.mark.slow
@pytest.mark.parametrize("t", [1, 2, 3])
@pytest.mark.parametrize("p", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_N_onset_within_bound(t, p, q):
	report = lemma_lab("N", t, p, q, trials=100, seed=42)
	assert report.max_onset <= lemma_bound("N", t, p, q)
