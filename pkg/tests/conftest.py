import pytest

from difference_index.core.dfield import make_field
from difference_index.core.rank_engine import ExactRankEngine
from difference_index.core.sigma_poly import SigmaRing, SystemSpec
from difference_index.core.specialization import Specialization
from difference_index.core.system_file import load_example


@pytest.fixture
def example7():
	"""The bundled worked example, validated: (SystemSpec, Specialization)."""
	data = load_example("example7").build()
	return data.system, data.specialization


@pytest.fixture
def load_system():
	"""Factory building any bundled example by name."""

	def _load(name: str):
		data = load_example(name).build()
		return data.system, data.specialization

	return _load


@pytest.fixture
def exact_engine():
	return ExactRankEngine("auto")


@pytest.fixture
def counterexample():
	"""
	{y1@1 - y2, y1} at the point 0: its mu profile settles later than
	rho + e allows.
	"""
	ring = SigmaRing(make_field([]), ["y1", "y2"])
	system = SystemSpec.build(ring, ["y1@1 - y2", "y1"])
	return system, Specialization(make_field([]), {"y1": 0, "y2": 0})
