import logging
import random
from abc import ABC, abstractmethod
from collections.abc import Sequence

from sympy.polys.domains import QQ

from difference_index.core.config import AnalysisConfig
from difference_index.core.dfield import evaluate_poly, random_rational_point
from difference_index.core.jacobi import EvaluatedMatrix
from difference_index.core.linalg import bareiss_rank, clear_row_denominators, prefix_ranks

# above this many entries a univariate matrix is ranked by evaluation
_EVALUATION_THRESHOLD = 144


class RankEngine(ABC):
	"""
	Abstract base class for rank computations over the target field.
	"""

	name: str = ""

	@abstractmethod
	def rank(self, matrix: EvaluatedMatrix, label: str = "") -> int:
		pass

	def prefix_ranks(self, matrix: EvaluatedMatrix, row_counts: Sequence[int], label: str = "") -> list[int]:
		"""
		Ranks of the leading row blocks of ``matrix``.

		For the block-banded families the leading rows of the largest matrix
		are exactly the rows of the smaller ones padded with zero columns, so
		one matrix gives the whole profile.
		"""
		return [self.rank(matrix.top_rows(count), f"{label}:{count}") for count in row_counts]


class ExactRankEngine(RankEngine):
	"""
	Exact ranks over L.

	``bareiss``    fraction-free elimination after clearing row denominators.
	``evaluation`` (single-generator L only) maximum of the ranks at the
	               integer points 0..D, where D bounds the degree of every
	               minor; certified exact, and much faster on dense matrices.
	``auto``       evaluation for large univariate matrices, Bareiss otherwise.
	"""

	name = "exact"

	def __init__(self, method: str = "auto", logger: logging.Logger | None = None):
		self.method = method
		self.logger = logger or logging.getLogger(__name__)

	def _method_for(self, matrix: EvaluatedMatrix) -> str:
		if self.method != "auto":
			if self.method == "evaluation" and matrix.field.ngens != 1:
				return "bareiss"
			return self.method
		if matrix.field.ngens == 1 and matrix.rows * matrix.cols > _EVALUATION_THRESHOLD:
			return "evaluation"
		return "bareiss"

	def rank(self, matrix: EvaluatedMatrix, label: str = "") -> int:
		if self._method_for(matrix) == "evaluation":
			return self._evaluation_profile(matrix, [matrix.rows])[0]
		return bareiss_rank([clear_row_denominators(row) for row in matrix.entries])

	def prefix_ranks(self, matrix: EvaluatedMatrix, row_counts: Sequence[int], label: str = "") -> list[int]:
		if self._method_for(matrix) == "evaluation":
			return self._evaluation_profile(matrix, row_counts)
		return super().prefix_ranks(matrix, row_counts, label)

	def _evaluation_profile(self, matrix: EvaluatedMatrix, row_counts: Sequence[int]) -> list[int]:
		# If the generic rank exceeded ``best``, some (best+1)-minor would be a
		# nonzero polynomial of degree <= the sum of the best+1 largest row
		# degrees, so it cannot vanish at that many + 1 distinct points.
		rows = [clear_row_denominators(row) for row in matrix.entries]
		row_degrees = [max((poly.degree() for poly in row if poly), default=None) for row in rows]

		degrees, ceilings = [], []
		for count in row_counts:
			prefix = sorted((deg for deg in row_degrees[:count] if deg is not None), reverse=True)
			used_cols = sum(1 for c in range(matrix.cols) if any(row[c] for row in rows[:count]))
			degrees.append(prefix)
			ceilings.append(min(len(prefix), used_cols))

		def points_needed(j: int, rank: int) -> int:
			if rank >= ceilings[j]:
				return 0
			return sum(degrees[j][: rank + 1]) + 1

		best = [0] * len(row_counts)
		point = 0
		while any(point < points_needed(j, rank) for j, rank in enumerate(best)):
			value = QQ(point)
			evaluated = (
				{c: evaluate_poly(poly, [value]) for c, poly in enumerate(row) if poly} for row in rows
			)
			ranks = prefix_ranks(evaluated, row_counts)
			best = [max(a, b) for a, b in zip(best, ranks)]
			point += 1
		return best


class ProbabilisticRankEngine(RankEngine):
	"""
	Ranks at random rational points of L; the maximum over trials.

	Never exceeds the exact rank. Each call derives its points from
	(seed, label, trial) so results do not depend on call order.
	"""

	name = "probabilistic"

	def __init__(
		self,
		trials: int = 3,
		seed: int = 0,
		bound: int = 64,
		retries: int = 64,
		logger: logging.Logger | None = None,
	):
		if trials < 1:
			raise ValueError("trials must be at least 1")
		self.trials = trials
		self.seed = seed
		self.bound = bound
		self.retries = retries
		self.logger = logger or logging.getLogger(__name__)

	def _points(self, matrix: EvaluatedMatrix, label: str):
		denominators = {x.denom for row in matrix.entries for x in row if x}
		for trial in range(self.trials):
			rng = random.Random(f"{self.seed}:{label}:{trial}")
			yield random_rational_point(matrix.field, rng, self.bound, denominators, self.retries)

	def rank_at_point(self, matrix: EvaluatedMatrix, point: dict) -> int:
		return self._profile_at_point(matrix, point, [matrix.rows])[0]

	def _profile_at_point(self, matrix: EvaluatedMatrix, point: dict, row_counts: Sequence[int]) -> list[int]:
		field = matrix.field
		evaluated = ({c: field.evaluate(x, point) for c, x in enumerate(row) if x} for row in matrix.entries)
		return prefix_ranks(evaluated, row_counts)

	def rank(self, matrix: EvaluatedMatrix, label: str = "") -> int:
		return self.prefix_ranks(matrix, [matrix.rows], label)[0]

	def prefix_ranks(self, matrix: EvaluatedMatrix, row_counts: Sequence[int], label: str = "") -> list[int]:
		best = [0] * len(row_counts)
		for point in self._points(matrix, label):
			ranks = self._profile_at_point(matrix, point, row_counts)
			best = [max(a, b) for a, b in zip(best, ranks)]
		return best


def rank_exact(matrix: EvaluatedMatrix, method: str = "bareiss") -> int:
	return ExactRankEngine(method).rank(matrix)


def rank_probabilistic(matrix: EvaluatedMatrix, seed: int = 0, trials: int = 3, bound: int = 64) -> int:
	return ProbabilisticRankEngine(trials=trials, seed=seed, bound=bound).rank(matrix)


def create_rank_engine(config: AnalysisConfig, logger: logging.Logger | None = None) -> RankEngine:
	if config.probabilistic:
		return ProbabilisticRankEngine(
			trials=config.trials,
			seed=config.seed,
			bound=config.point_bound,
			retries=config.point_retries,
			logger=logger,
		)
	return ExactRankEngine(config.exact_method, logger=logger)
