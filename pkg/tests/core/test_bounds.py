from types import SimpleNamespace

import pytest

from difference_index.core.bounds import degree_bound, membership_bounds
from difference_index.core.errors import HypothesisUnmet
from difference_index.core.profiles import difference_index


@pytest.fixture
def example7_report(example7, exact_engine):
	S, sp = example7
	return S, difference_index(S, sp, exact_engine)


def test_membership_bound_for_order_one(example7_report):
	"""
	Tests the order and degree bound of an order-1 polynomial in the worked example.
	"""
	S, report = example7_report
	bounds = membership_bounds(S, report, ord_f=1)

	assert bounds.hypothesis_met
	assert bounds.D == 2
	assert bounds.N == 1
	assert bounds.primary.degree_exponent == 8
	assert bounds.primary.degree_bound == 4**256
	assert bounds.primary.symbolic == "(2*2)^(2^8)"
	assert bounds.primary.decimal == str(4**256)


def test_fallback_bound_is_not_expanded_to_decimal(example7_report):
	S, report = example7_report
	fallback = membership_bounds(S, report, ord_f=1).fallback

	assert fallback.N == 7
	assert fallback.degree_exponent == 20
	assert fallback.degree_bound == 4 ** (2**20)
	assert fallback.decimal is None
	assert fallback.to_dict()["degree_bound_bits"] == 2 * 2**20 + 1


def test_order_above_e_shifts_N(example7_report):
	S, report = example7_report
	assert membership_bounds(S, report, ord_f=4).N == 4
	assert membership_bounds(S, report, ord_f=0).N == 1


def test_explicit_degree_overrides_system_degree(example7_report):
	S, report = example7_report
	bounds = membership_bounds(S, report, ord_f=1, D=3)
	assert bounds.primary.symbolic == "(2*3)^(2^8)"
	assert bounds.primary.degree_bound == 6**256


def test_degree_bound_above_threshold_stays_symbolic():
	bound = degree_bound(N=30, D=2, e=2, n=2, threshold=20)
	assert bound.degree_exponent == 66
	assert bound.degree_bound is None
	assert bound.decimal is None
	assert bound.to_dict()["degree_bound_bits"] is None


def test_unmet_hypothesis_keeps_only_fallback(example7):
	"""
	Tests that a report with omega + max(0, ord_f - e + 1) < rho drops the primary bound.
	"""
	S, _ = example7
	report = SimpleNamespace(omega=0, rho=3)

	bounds = membership_bounds(S, report, ord_f=1)

	assert not bounds.hypothesis_met
	assert bounds.primary is None
	assert bounds.N is None
	assert bounds.to_dict()["bound"] is None
	assert bounds.fallback.N == 7


def test_unmet_hypothesis_strict_raises(example7):
	S, _ = example7
	report = SimpleNamespace(omega=0, rho=3)

	with pytest.raises(HypothesisUnmet) as excinfo:
		membership_bounds(S, report, ord_f=1, strict=True)

	assert "only the fallback N = 7 applies" in excinfo.value.message
	assert excinfo.value.fallback.fallback.N == 7


def test_negative_order_is_rejected(example7_report):
	S, report = example7_report
	with pytest.raises(ValueError):
		membership_bounds(S, report, ord_f=-1)
