import json
import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from dotenv import load_dotenv

ENGINES = ("exact", "probabilistic")
EXACT_METHODS = ("auto", "bareiss", "evaluation")

logger = logging.getLogger(__name__)


@dataclass
class AnalysisConfig:
	"""
	Data class to hold all tunables of an analysis run.

	Every field is echoed into the report so that a run can be reproduced.
	"""

	engine: str = "exact"
	exact_method: str = "auto"
	trials: int = 3
	seed: int = 0
	point_bound: int = 64
	point_retries: int = 64
	kmax_psi: int | None = None  # None -> onset bound + 2
	kmax_mu: int | None = None  # None -> smaller onset bound + 2
	index_i: int | None = None  # None -> e - 1
	invariance_offsets: list[int] = field(default_factory=lambda: [0, 1, 2])
	degree_exponent_threshold: int = 20
	oracle_var_limit: int = 14
	force_oracle: bool = False
	lemma_trials: int = 100
	lemma_seed: int = 42
	lemma_max_entry: int = 3
	log_level: str = "INFO"

	def __post_init__(self):
		if self.engine not in ENGINES:
			logger.warning(f"Unknown engine '{self.engine}', using 'exact'.")
			self.engine = "exact"
		if self.exact_method not in EXACT_METHODS:
			logger.warning(f"Unknown exact method '{self.exact_method}', using 'auto'.")
			self.exact_method = "auto"
		if self.trials < 1:
			self.trials = 1
		if self.point_bound < 2:
			self.point_bound = 2

	@property
	def probabilistic(self) -> bool:
		return self.engine == "probabilistic"

	@classmethod
	def from_json(cls, config_path: Path | str) -> "AnalysisConfig":
		"""
		Loads configuration from a JSON file and returns an AnalysisConfig instance.
		"""
		try:
			with open(config_path, encoding="utf-8") as f:
				config_data = json.load(f)
			return cls(**config_data)
		except FileNotFoundError:
			logger.warning(f"Configuration file not found at {config_path}. Using default values.")
			return cls()
		except json.JSONDecodeError:
			logger.warning(f"Invalid JSON in configuration file at {config_path}. Using default values.")
			return cls()
		except TypeError as e:
			logger.warning(f"Mismatch between config file and class attributes: {e}. Using default values.")
			return cls()

	@classmethod
	def from_env(cls, base: "AnalysisConfig | None" = None) -> "AnalysisConfig":
		"""
		Applies overrides from the environment (and a ``.env`` file, if present).
		"""
		load_dotenv()
		config = base if base is not None else cls()

		var_limit = os.getenv("DINDEX_ORACLE_VAR_LIMIT")
		if var_limit:
			try:
				config.oracle_var_limit = int(var_limit)
			except ValueError:
				logger.warning(f"Ignoring non-integer DINDEX_ORACLE_VAR_LIMIT={var_limit!r}.")

		log_level = os.getenv("DINDEX_LOG_LEVEL")
		if log_level:
			config.log_level = log_level.upper()

		return config

	def to_dict(self) -> dict:
		return asdict(self)
