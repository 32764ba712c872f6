import logging
from collections.abc import Sequence

from difference_index.core.config import AnalysisConfig
from difference_index.core.errors import InvariantViolation
from difference_index.core.profiles import check_i_invariance, difference_index, psi_profile
from difference_index.core.rank_engine import RankEngine
from difference_index.core.report import IndexReport
from difference_index.core.sigma_poly import SystemSpec
from difference_index.core.specialization import Specialization


class AnalysisOrchestrator:
	"""
	Runs the full analysis of one system: ψ profile, μ profile, the
	difference index and the i-invariance spot check.
	"""

	def __init__(
		self,
		config: AnalysisConfig,
		system: SystemSpec,
		specialization: Specialization,
		engine: RankEngine,
		logger: logging.Logger,
	):
		self.config = config
		self.system = system
		self.specialization = specialization
		self.engine = engine
		self.logger = logger

	def invariance_indices(self) -> list[int]:
		e = self.system.e
		return [e - 1 + offset for offset in self.config.invariance_offsets]

	def run(self, i_values: Sequence[int] | None = None) -> IndexReport:
		"""
		Executes the analysis and returns the report.

		``i_values`` overrides the indices of the i-invariance check; an empty
		sequence skips it.
		"""
		S = self.system
		self.logger.info(f"Analyzing a system with n = {S.n}, r = {S.r}, e = {S.e} ({self.engine.name} ranks)")

		psi = psi_profile(S, self.specialization, self.engine, kmax=self.config.kmax_psi, logger=self.logger)
		report = difference_index(
			S,
			self.specialization,
			self.engine,
			psi=psi,
			i=self.config.index_i,
			kmax_mu=self.config.kmax_mu,
			logger=self.logger,
		)

		if not S.has_constant_coefficients():
			report.warnings.append(
				"the coefficient field is not Q; the Groebner oracle cannot cross-check this system"
			)

		i_values = list(i_values) if i_values is not None else self.invariance_indices()
		if i_values:
			kmax = self.config.kmax_mu or max(1, report.rho + S.e)
			self.logger.info(f"Checking i-invariance of mu_k,i for i in {i_values}, k <= {kmax}")
			report.i_invariance = check_i_invariance(
				S, self.specialization, self.engine, kmax, i_values, logger=self.logger
			)

		report.config = self.config.to_dict()

		if report.i_invariance and report.i_invariance["mismatches"]:
			details = "; ".join(
				f"mu_{m['k']},{m['i']} = {m['mu']} but mu_{m['k']},{m['reference_i']} = {m['reference_mu']}"
				for m in report.i_invariance["mismatches"]
			)
			raise InvariantViolation(f"mu_k,i depends on i: {details}")

		return report
