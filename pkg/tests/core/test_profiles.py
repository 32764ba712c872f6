import pytest

from difference_index.core.errors import IndexTooSmall, InvariantViolation, TailNotLinear, ValidationError
from difference_index.core.profiles import (
	check_i_invariance,
	difference_index,
	fit_tail,
	mu_bound,
	mu_profile,
	psi_bound,
	psi_profile,
	regularity_bound,
)
from difference_index.core.rank_engine import ProbabilisticRankEngine

BUNDLED = ["example7", "shift", "fibonacci", "swap_pair", "involution_pair"]

# name -> (d, s, rho, omega, a, ord_p, regularity bound)
EXPECTED = {
	"example7": (0, 3, 1, 2, 2, 1, 1),
	"shift": (0, 1, 0, 0, 0, 1, 0),
	"fibonacci": (0, 2, 0, 0, 0, 2, 1),
	"swap_pair": (0, 2, 0, 0, 0, 2, 0),
	"involution_pair": (0, 4, 0, 2, 2, 2, 1),
}


def test_fit_tail():
	assert fit_tail([0, 2, 4, 5, 6, 7], 3) == (1, 2, 2)
	assert fit_tail([4, 3, 3, 3], 1) == (0, 3, 1)
	assert fit_tail([4, 3, 3, 3, 3], 2) == (0, 3, 1)
	assert fit_tail([0, 0, 0], 1) == (0, 0, 0)


def test_fit_tail_at_the_largest_bound_the_values_allow():
	# kmax = B + 1
	assert fit_tail([0, 2, 4, 5, 6, 7], 4) == (1, 2, 2)
	with pytest.raises(ValidationError):
		fit_tail([0, 2, 4, 5, 6, 7], 5)


def test_fit_tail_rejects_bent_tail():
	with pytest.raises(TailNotLinear):
		fit_tail([0, 1, 2, 2], 1)


def test_fit_tail_needs_enough_values():
	with pytest.raises(ValidationError):
		fit_tail([0, 1, 2], 2)


def test_psi_profile_of_worked_example(example7, exact_engine):
	S, sp = example7
	psi = psi_profile(S, sp, exact_engine)
	assert list(psi.values) == [4, 3, 3, 3, 3, 3, 3, 3, 3]
	assert list(psi.ranks) == [0, 3, 5, 7, 9, 11, 13, 15, 17]
	assert (psi.slope, psi.intercept, psi.onset) == (0, 3, 1)


def test_default_kmax_follows_the_onset_bounds(example7, exact_engine):
	S, sp = example7
	assert (psi_bound(S), mu_bound(S)) == (6, 8)
	assert psi_profile(S, sp, exact_engine).kmax == 8
	assert mu_profile(S, sp, exact_engine, rho=1).kmax == 5


def test_mu_profile_of_worked_example(example7, exact_engine):
	S, sp = example7
	mu = mu_profile(S, sp, exact_engine, kmax=5)
	assert list(mu.values) == [0, 2, 4, 5, 6, 7]
	assert list(mu.ranks) == [0, 1, 2, 4, 6, 8]


def test_mu_profile_index_too_small(example7, exact_engine):
	S, sp = example7
	with pytest.raises(IndexTooSmall):
		mu_profile(S, sp, exact_engine, i=0)


def test_difference_index_of_worked_example(example7, exact_engine):
	S, sp = example7
	report = difference_index(S, sp, exact_engine)
	assert (report.n, report.r, report.e) == (2, 3, 2)
	assert (report.d, report.s, report.rho) == (0, 3, 1)
	assert report.mu == [0, 2, 4, 5, 6, 7]
	assert (report.omega, report.a) == (2, 2)
	assert report.d + report.r - report.n == 1
	assert (report.sigma_dim, report.ord_p, report.regularity_bound) == (0, 1, 1)
	assert report.ranks_Jk[1:4] == [3, 5, 7]
	assert report.ranks_Jki[1:5] == [1, 2, 4, 6]
	assert report.rank_polynomial == {"slope": 2, "intercept": 1}
	assert any("rank(J_k) = 2k + 1" in w and "= 3" in w for w in report.warnings)


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_systems(name, load_system, exact_engine):
	S, sp = load_system(name)
	report = difference_index(S, sp, exact_engine)
	d, s, rho, omega, a, ord_p, reg = EXPECTED[name]
	assert (report.d, report.s, report.rho) == (d, s, rho)
	assert (report.omega, report.a) == (omega, a)
	assert (report.ord_p, report.regularity_bound) == (ord_p, reg)


@pytest.mark.parametrize("name", BUNDLED)
def test_structural_invariants(name, load_system, exact_engine):
	"""
	mu is monotone, psi steps lie in [n-r, n], a >= 0, the mu slope is
	d+r-n and omega <= min(e(min(r,n)+2), rho+e).
	"""
	S, sp = load_system(name)
	report = difference_index(S, sp, exact_engine)
	n, r, e = S.n, S.r, S.e
	assert all(x <= y for x, y in zip(report.mu, report.mu[1:]))
	assert all(n - r <= y - x <= n for x, y in zip(report.psi[1:], report.psi[2:]))
	assert report.a >= 0
	tail = report.mu[-1] - report.mu[-2]
	assert tail == report.d + r - n
	assert report.omega <= min(e * (min(r, n) + 2), report.rho + e)


@pytest.mark.parametrize("name", BUNDLED)
def test_i_invariance(name, load_system, exact_engine):
	S, sp = load_system(name)
	report = difference_index(S, sp, exact_engine)
	result = check_i_invariance(S, sp, exact_engine, report.rho + S.e, [S.e - 1, S.e, S.e + 1])
	assert result["mismatches"] == []
	assert len(result["mu"]) == 3


def test_counterexample_violates_the_sharp_omega_bound(counterexample, exact_engine):
	S, sp = counterexample
	with pytest.raises(InvariantViolation) as excinfo:
		difference_index(S, sp, exact_engine)
	assert "omega = 2 exceeds" in excinfo.value.message


def test_counterexample_profiles(counterexample, exact_engine):
	S, sp = counterexample
	psi = psi_profile(S, sp, exact_engine)
	assert set(psi.values) == {2}
	assert psi.onset == 0
	assert list(mu_profile(S, sp, exact_engine, kmax=4).values) == [0, 1, 2, 2, 2]


def test_probabilistic_engine_reproduces_worked_example(example7):
	S, sp = example7
	report = difference_index(S, sp, ProbabilisticRankEngine(trials=3, seed=0))
	assert (report.rho, report.omega, report.a) == (1, 2, 2)
	assert report.engine == "probabilistic"
	assert any("probabilistic" in w for w in report.warnings)


def test_regularity_bound():
	assert regularity_bound(2, 1, 2) == 1
	assert regularity_bound(1, 4, 1) == 3
