import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from difference_index.core.dfield import DifferenceField, make_field
from difference_index.core.errors import SystemFileError
from difference_index.core.sigma_poly import SigmaRing, SystemSpec
from difference_index.core.specialization import Specialization, validate_specialization

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"
DEFAULT_EXAMPLE = "example7"


@dataclass
class FieldDescriptor:
	"""Generators of ℚ(t1, ..., tm) and the σ-images of those that move."""

	generators: list[str] = field(default_factory=list)
	sigma_images: dict[str, str] = field(default_factory=dict)

	@classmethod
	def from_dict(cls, data: dict | None, where: str) -> "FieldDescriptor":
		if data is None:
			return cls()
		if not isinstance(data, dict):
			raise SystemFileError(f"'{where}' must be an object")
		generators = data.get("generators", [])
		images = data.get("sigma_images", {})
		if not isinstance(generators, list) or not all(isinstance(g, str) for g in generators):
			raise SystemFileError(f"'{where}.generators' must be a list of names")
		if not isinstance(images, dict) or not all(isinstance(v, str) for v in images.values()):
			raise SystemFileError(f"'{where}.sigma_images' must map names to expression strings")
		return cls(list(generators), dict(images))

	def to_dict(self) -> dict:
		return {"generators": self.generators, "sigma_images": self.sigma_images}

	def build(self) -> DifferenceField:
		return make_field(self.generators, self.sigma_images)


@dataclass
class AnalysisInput:
	"""A validated system together with its generic solution point."""

	system: SystemSpec
	specialization: Specialization


@dataclass
class SystemFile:
	"""
	The JSON system file: a difference system over K and a σ-compatible
	assignment of its variables into a target field L.

	``coefficient_field`` is optional and defaults to ℚ with σ = id.
	"""

	variables: list[str]
	equations: list[str]
	target_field: FieldDescriptor
	assign: dict[str, str]
	coefficient_field: FieldDescriptor = field(default_factory=FieldDescriptor)
	description: str | None = None

	@classmethod
	def from_dict(cls, data: dict) -> "SystemFile":
		if not isinstance(data, dict):
			raise SystemFileError("the system file must contain a JSON object")
		for key in ("variables", "equations", "specialization"):
			if key not in data:
				raise SystemFileError(f"missing required key '{key}'")
		variables, equations = data["variables"], data["equations"]
		if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
			raise SystemFileError("'variables' must be a list of names")
		if not isinstance(equations, list) or not all(isinstance(f, str) for f in equations):
			raise SystemFileError("'equations' must be a list of expression strings")

		specialization = data["specialization"]
		if not isinstance(specialization, dict) or "assign" not in specialization:
			raise SystemFileError("'specialization' must be an object with an 'assign' mapping")
		assign = specialization["assign"]
		if not isinstance(assign, dict) or not all(isinstance(v, str) for v in assign.values()):
			raise SystemFileError("'specialization.assign' must map variable names to expression strings")

		return cls(
			variables=list(variables),
			equations=list(equations),
			target_field=FieldDescriptor.from_dict(
				specialization.get("target_field"), "specialization.target_field"
			),
			assign=dict(assign),
			coefficient_field=FieldDescriptor.from_dict(data.get("coefficient_field"), "coefficient_field"),
			description=data.get("description"),
		)

	@classmethod
	def load(cls, path: Path | str, logger: logging.Logger | None = None) -> "SystemFile":
		logger = logger or logging.getLogger(__name__)
		path = Path(path)
		logger.info(f"Loading system file from: {path}")
		try:
			with open(path, encoding="utf-8") as f:
				data = json.load(f)
		except FileNotFoundError as e:
			raise SystemFileError(f"system file not found: {path}") from e
		except json.JSONDecodeError as e:
			raise SystemFileError(f"invalid JSON in {path}: {e.msg} (line {e.lineno}, column {e.colno})") from e
		return cls.from_dict(data)

	def to_dict(self) -> dict:
		data: dict = {}
		if self.description is not None:
			data["description"] = self.description
		data["coefficient_field"] = self.coefficient_field.to_dict()
		data["variables"] = self.variables
		data["equations"] = self.equations
		data["specialization"] = {"target_field": self.target_field.to_dict(), "assign": self.assign}
		return data

	def dumps(self) -> str:
		return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

	def save(self, path: Path | str):
		Path(path).write_text(self.dumps(), encoding="utf-8")

	def build(self, logger: logging.Logger | None = None) -> AnalysisInput:
		"""make_field -> parse -> orders -> validate_specialization."""
		coefficients = self.coefficient_field.build()
		ring = SigmaRing(coefficients, self.variables)
		system = SystemSpec.build(ring, self.equations)
		target = self.target_field.build()
		specialization = Specialization(target, self.assign)
		validate_specialization(system, specialization, logger)
		return AnalysisInput(system, specialization)


def bundled_examples() -> dict[str, Path]:
	"""Names and paths of the system files shipped with the package."""
	return {path.stem: path for path in sorted(FIXTURES_DIR.glob("*.json"))}


def load_example(name: str = DEFAULT_EXAMPLE) -> SystemFile:
	examples = bundled_examples()
	if name not in examples:
		raise SystemFileError(f"unknown example '{name}', available: {', '.join(examples)}")
	return SystemFile.load(examples[name])
