import json
from pathlib import Path

import pytest

from difference_index.core.errors import EmbeddingMismatch, NotASolution, SystemFileError, ValidationError
from difference_index.core.system_file import (
	DEFAULT_EXAMPLE,
	FieldDescriptor,
	SystemFile,
	bundled_examples,
	load_example,
)


def _example7_data() -> dict:
	return json.loads(bundled_examples()["example7"].read_text(encoding="utf-8"))


def test_bundled_examples_are_listed():
	names = list(bundled_examples())
	assert names == sorted(names)
	assert {"example7", "shift", "fibonacci", "swap_pair", "involution_pair"} <= set(names)
	assert DEFAULT_EXAMPLE in names


@pytest.mark.parametrize("name", list(bundled_examples()))
def test_bundled_examples_build(name):
	"""
	Tests that every shipped system parses and its specialization annihilates it.
	"""
	system_file = load_example(name)
	data = system_file.build()
	assert system_file.description
	assert data.system.n == len(system_file.variables)


@pytest.mark.parametrize("name", list(bundled_examples()))
def test_dumps_reproduces_the_shipped_file(name):
	path = bundled_examples()[name]
	assert SystemFile.load(path).dumps() == path.read_text(encoding="utf-8")


def test_unknown_example():
	with pytest.raises(SystemFileError) as excinfo:
		load_example("missing")
	assert "example7" in excinfo.value.message


def test_save_and_load(tmp_path: Path):
	output = tmp_path / "system.json"
	load_example().save(output)

	reloaded = SystemFile.load(output)
	assert reloaded.equations == ["y1@2 - y1", "y1@1 - y2", "y1*y2 - 1"]
	assert reloaded.target_field.sigma_images == {"t": "1/t"}
	assert reloaded.assign == {"y1": "t", "y2": "1/t"}


def test_coefficient_field_defaults_to_rationals():
	data = _example7_data()
	del data["coefficient_field"]
	del data["description"]

	system_file = SystemFile.from_dict(data)

	assert system_file.coefficient_field == FieldDescriptor()
	assert system_file.description is None
	assert "description" not in system_file.to_dict()
	system_file.build()


def test_load_missing_file(tmp_path: Path):
	with pytest.raises(SystemFileError) as excinfo:
		SystemFile.load(tmp_path / "absent.json")
	assert "not found" in excinfo.value.message


def test_load_invalid_json(tmp_path: Path):
	path = tmp_path / "broken.json"
	path.write_text('{"variables": ["y1"],', encoding="utf-8")
	with pytest.raises(SystemFileError) as excinfo:
		SystemFile.load(path)
	assert "invalid JSON" in excinfo.value.message
	assert excinfo.value.exit_code == 1


@pytest.mark.parametrize(
	"mutate, fragment",
	[
		(lambda d: d.pop("equations"), "missing required key 'equations'"),
		(lambda d: d.update(variables="y1"), "'variables' must be a list"),
		(lambda d: d.update(equations=[1, 2]), "'equations' must be a list"),
		(lambda d: d.update(specialization={"target_field": {}}), "'assign' mapping"),
		(lambda d: d["specialization"].update(assign={"y1": 3}), "'specialization.assign'"),
		(lambda d: d.update(coefficient_field=[]), "'coefficient_field' must be an object"),
		(lambda d: d["specialization"]["target_field"].update(generators="t"), "generators' must be a list"),
	],
)
def test_malformed_documents(mutate, fragment):
	data = _example7_data()
	mutate(data)
	with pytest.raises(SystemFileError) as excinfo:
		SystemFile.from_dict(data)
	assert fragment in excinfo.value.message


def test_top_level_must_be_an_object():
	with pytest.raises(SystemFileError):
		SystemFile.from_dict(["y1"])


def test_wrong_point_reports_residuals():
	"""
	Tests that y2 -> t is rejected with the residual of every failing equation.
	"""
	data = _example7_data()
	data["specialization"]["assign"]["y2"] = "t"

	with pytest.raises(NotASolution) as excinfo:
		SystemFile.from_dict(data).build()

	assert set(excinfo.value.residuals) == {2, 3}
	assert excinfo.value.residuals[3] == "t^2 - 1"
	assert "f3 evaluates to t^2 - 1" in excinfo.value.message
	assert excinfo.value.exit_code == 2


def test_missing_assignment():
	data = _example7_data()
	del data["specialization"]["assign"]["y2"]
	with pytest.raises(ValidationError) as excinfo:
		SystemFile.from_dict(data).build()
	assert "without an assignment" in excinfo.value.message


def test_coefficient_sigma_must_match_target():
	"""
	Tests that K -> L must commute with sigma.
	"""
	data = {
		"coefficient_field": {"generators": ["t"], "sigma_images": {"t": "t + 1"}},
		"variables": ["y"],
		"equations": ["y@1 - y"],
		"specialization": {
			"target_field": {"generators": ["t"], "sigma_images": {"t": "t + 2"}},
			"assign": {"y": "1"},
		},
	}
	with pytest.raises(EmbeddingMismatch):
		SystemFile.from_dict(data).build()
