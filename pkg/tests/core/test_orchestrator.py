from unittest.mock import MagicMock

import pytest

from difference_index.core.config import AnalysisConfig
from difference_index.core.dfield import make_field
from difference_index.core.errors import InvariantViolation
from difference_index.core.orchestrator import AnalysisOrchestrator
from difference_index.core.sigma_poly import SigmaRing, SystemSpec
from difference_index.core.specialization import Specialization, validate_specialization


@pytest.fixture
def mock_config():
	"""Provides a default AnalysisConfig for orchestrator tests."""
	return AnalysisConfig()


@pytest.fixture
def mock_logger():
	"""Mocks the logger."""
	return MagicMock()


def test_orchestrator_run_on_worked_example(mock_config, example7, exact_engine, mock_logger):
	"""
	Tests the main `run` workflow: both profiles, the index and the i-invariance check.
	"""
	S, sp = example7
	orchestrator = AnalysisOrchestrator(mock_config, S, sp, exact_engine, mock_logger)

	report = orchestrator.run()

	assert (report.d, report.s, report.rho, report.omega, report.a) == (0, 3, 1, 2, 2)
	assert report.i_invariance["i_values"] == [1, 2, 3]
	assert report.i_invariance["kmax"] == 3
	assert report.i_invariance["mismatches"] == []
	assert report.config == mock_config.to_dict()
	assert report.engine == "exact"
	mock_logger.info.assert_any_call("Analyzing a system with n = 2, r = 3, e = 2 (exact ranks)")


def test_invariance_indices_follow_offsets(example7, exact_engine, mock_logger):
	S, sp = example7
	config = AnalysisConfig(invariance_offsets=[0, 3])
	orchestrator = AnalysisOrchestrator(config, S, sp, exact_engine, mock_logger)
	assert orchestrator.invariance_indices() == [1, 4]


def test_empty_index_list_skips_invariance_check(mocker, mock_config, example7, exact_engine, mock_logger):
	check = mocker.patch("difference_index.core.orchestrator.check_i_invariance")
	S, sp = example7

	report = AnalysisOrchestrator(mock_config, S, sp, exact_engine, mock_logger).run(i_values=[])

	check.assert_not_called()
	assert report.i_invariance is None


def test_explicit_kmax_mu_bounds_the_invariance_check(mocker, example7, exact_engine, mock_logger):
	check = mocker.patch(
		"difference_index.core.orchestrator.check_i_invariance",
		return_value={"i_values": [1, 5], "kmax": 4, "mu": {}, "mismatches": []},
	)
	S, sp = example7
	config = AnalysisConfig(kmax_mu=4)

	AnalysisOrchestrator(config, S, sp, exact_engine, mock_logger).run(i_values=[1, 5])

	check.assert_called_once_with(S, sp, exact_engine, 4, [1, 5], logger=mock_logger)


def test_invariance_mismatch_raises(mocker, mock_config, example7, exact_engine, mock_logger):
	"""
	Tests that a mu_k,i depending on i is reported as a hypothesis violation.
	"""
	mocker.patch(
		"difference_index.core.orchestrator.check_i_invariance",
		return_value={
			"i_values": [1, 2],
			"kmax": 3,
			"mu": {},
			"mismatches": [{"k": 2, "i": 2, "mu": 3, "reference_i": 1, "reference_mu": 4}],
		},
	)
	S, sp = example7

	with pytest.raises(InvariantViolation) as excinfo:
		AnalysisOrchestrator(mock_config, S, sp, exact_engine, mock_logger).run()

	assert "mu_2,2 = 3 but mu_2,1 = 4" in excinfo.value.message
	assert excinfo.value.exit_code == 3


def test_non_constant_coefficients_add_a_warning(mock_config, exact_engine, mock_logger):
	"""
	Tests y@1 - y - t over Q(t), sigma(t) = t + 1, solved by y = (t^2 - t)/2.
	"""
	field = make_field(["t"], {"t": "t + 1"})
	S = SystemSpec.build(SigmaRing(field, ["y"]), ["y@1 - y - t"])
	sp = Specialization(field, {"y": "(t^2 - t)/2"})
	validate_specialization(S, sp)

	report = AnalysisOrchestrator(mock_config, S, sp, exact_engine, mock_logger).run()

	assert (report.d, report.s, report.omega) == (0, 1, 0)
	assert any("Groebner oracle" in warning for warning in report.warnings)
