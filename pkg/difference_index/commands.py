import json
import logging
from functools import wraps
from pathlib import Path

import click
from click.exceptions import NoArgsIsHelpError

from difference_index import __version__
from difference_index.core.bounds import DegreeBound, membership_bounds
from difference_index.core.config import AnalysisConfig
from difference_index.core.errors import DifferenceIndexError, OnsetExceedsBound, ValidationError
from difference_index.core.ideal_oracle import IdealOracle
from difference_index.core.jacobi import build_Jk, build_Jki
from difference_index.core.lemma_lab import KINDS, lemma_lab
from difference_index.core.orchestrator import AnalysisOrchestrator
from difference_index.core.rank_engine import create_rank_engine
from difference_index.core.report import IndexReport
from difference_index.core.specialization import evaluate
from difference_index.core.system_file import (
	DEFAULT_EXAMPLE,
	AnalysisInput,
	SystemFile,
	bundled_examples,
	load_example,
)
from difference_index.utils.logger import get_logger


class DifferenceIndexGroup(click.Group):
	"""
	Click group mapping library errors to their exit codes.

	Usage errors (unknown flags, bad option values) exit like any other rejected
	input, with ValidationError.exit_code.
	"""

	def make_context(self, info_name, args, parent=None, **extra):
		try:
			return super().make_context(info_name, args, parent, **extra)
		except click.UsageError as e:
			if not isinstance(e, NoArgsIsHelpError):
				e.exit_code = ValidationError.exit_code
			raise

	def invoke(self, ctx):
		try:
			return super().invoke(ctx)
		except click.UsageError as e:
			if not isinstance(e, NoArgsIsHelpError):
				e.exit_code = ValidationError.exit_code
			raise
		except DifferenceIndexError as e:
			click.echo(f"{type(e).__name__}: {e.message}", err=True)
			ctx.exit(e.exit_code)


def _parse_int_list(value: str | None) -> list[int] | None:
	if value is None:
		return None
	try:
		return [int(part) for part in value.split(",") if part.strip()]
	except ValueError:
		raise click.BadParameter(f"expected a comma-separated list of integers, got '{value}'")


def analysis_options(func):
	"""Flags shared by every command that runs the rank pipeline."""

	@click.option("--kmax", type=click.IntRange(min=1), default=None, help="Largest k of both profiles.")
	@click.option("--probabilistic", is_flag=True, help="Rank at random points instead of exactly.")
	@click.option("--trials", type=click.IntRange(min=1), default=None, help="Random points per rank.")
	@click.option("--seed", type=int, default=None, help="Seed of the probabilistic engine.")
	@click.option("--i", "index_i", type=int, default=None, help="Localization level i of J_k,i (default e-1).")
	@wraps(func)
	def wrapper(*args, kmax, probabilistic, trials, seed, index_i, **kwargs):
		config: AnalysisConfig = click.get_current_context().obj["config"]
		if kmax is not None:
			config.kmax_psi = kmax
			config.kmax_mu = kmax
		if probabilistic:
			config.engine = "probabilistic"
		if trials is not None:
			config.trials = trials
		if seed is not None:
			config.seed = seed
		if index_i is not None:
			config.index_i = index_i
		return func(*args, **kwargs)

	return wrapper


def _load(path: Path, logger: logging.Logger):
	return SystemFile.load(path, logger).build(logger)


def _report(data: AnalysisInput, i_values: list[int] | None = None) -> IndexReport:
	ctx = click.get_current_context()
	config, logger = ctx.obj["config"], ctx.obj["logger"]
	engine = create_rank_engine(config, logger)
	return AnalysisOrchestrator(config, data.system, data.specialization, engine, logger).run(i_values)


def _analyze(path: Path, i_values: list[int] | None = None) -> tuple[AnalysisInput, IndexReport]:
	data = _load(path, click.get_current_context().obj["logger"])
	return data, _report(data, i_values)


def _echo_json(data: dict):
	click.echo(json.dumps(data, indent=2))


def _expanded(bound: DegreeBound) -> str:
	if bound.decimal is not None:
		return bound.decimal
	if bound.degree_bound is not None:
		return f"<{bound.degree_bound.bit_length()}-bit integer>"
	return "<not expanded>"


def _grid(entries: list[list[str]]) -> str:
	if not entries:
		return "(empty)"
	widths = [max(len(row[c]) for row in entries) for c in range(len(entries[0]))]
	return "\n".join("  ".join(cell.rjust(width) for cell, width in zip(row, widths)) for row in entries)


@click.group(cls=DifferenceIndexGroup)
@click.version_option(__version__, prog_name="dindex")
@click.option(
	"--config",
	"config_path",
	type=click.Path(dir_okay=False, path_type=Path),
	default=None,
	help="JSON file with AnalysisConfig values.",
)
@click.option("--log-level", default=None, help="Logging level (default INFO, or DINDEX_LOG_LEVEL).")
@click.pass_context
def cli(ctx, config_path, log_level):
	"""Difference index, quasi dimension polynomial and membership bounds of difference systems."""
	config = AnalysisConfig.from_json(config_path) if config_path else AnalysisConfig()
	config = AnalysisConfig.from_env(config)
	if log_level:
		config.log_level = log_level.upper()
	ctx.obj = {"config": config, "logger": get_logger("difference_index", config.log_level)}


@cli.command("analyze")
@click.argument("path", type=click.Path(path_type=Path))
@analysis_options
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
@click.option(
	"--check-i-invariance",
	"i_list",
	default=None,
	help="Comma-separated localization levels compared for mu_k,i (default e-1,e,e+1).",
)
def analyze(path, as_json, i_list):
	"""Compute psi, mu, the difference index and the derived invariants."""
	_, report = _analyze(path, _parse_int_list(i_list))
	click.echo(report.to_json() if as_json else report.render_text(), nl=False)


@cli.command("ranks")
@click.argument("path", type=click.Path(path_type=Path))
@analysis_options
@click.option("--matrix", "kind", type=click.Choice(["Jk", "Jki"]), default="Jk", show_default=True)
@click.option("--k", "k", type=click.IntRange(min=1), required=True, help="Number of block rows.")
@click.option("--symbolic", is_flag=True, help="Dump the matrix before specialization.")
@click.option("--json", "as_json", is_flag=True, help="Print the matrix as JSON.")
def ranks(path, kind, k, symbolic, as_json):
	"""Dump J_k or J_k,i and its rank at the generic point."""
	ctx = click.get_current_context()
	config, logger = ctx.obj["config"], ctx.obj["logger"]
	data = _load(path, logger)
	S = data.system
	i = config.index_i if config.index_i is not None else S.e - 1
	matrix = build_Jk(S, k) if kind == "Jk" else build_Jki(S, k, i)
	evaluated = evaluate(matrix, data.specialization)
	rank = create_rank_engine(config, logger).rank(evaluated, label=kind)
	entries = matrix.to_strings() if symbolic else evaluated.to_strings()

	name = f"J_{k}" if kind == "Jk" else f"J_{k},{i}"
	if as_json:
		_echo_json({"matrix": name, "rows": matrix.rows, "cols": matrix.cols, "rank": rank, "entries": entries})
		return
	click.echo(f"{name}: {matrix.rows} x {matrix.cols}, rank {rank}")
	click.echo(_grid(entries))


@cli.command("membership")
@click.argument("path", type=click.Path(path_type=Path))
@analysis_options
@click.option("--ord-f", type=click.IntRange(min=0), default=None, help="Order of the polynomial to test.")
@click.option("--degree", "D", type=click.IntRange(min=1), default=None, help="Degree bound D of F.")
@click.option("--poly", default=None, help="Polynomial to decide; its order replaces --ord-f.")
@click.option("--strict", is_flag=True, help="Fail when only the fallback bound applies.")
@click.option("--force", is_flag=True, help="Ignore the oracle variable limit when deciding --poly.")
@click.option("--json", "as_json", is_flag=True, help="Print the bounds as JSON.")
def membership(path, ord_f, D, poly, strict, force, as_json):
	"""Order and degree bounds for ideal membership; optionally decide it."""
	ctx = click.get_current_context()
	config, logger = ctx.obj["config"], ctx.obj["logger"]
	if force:
		config.force_oracle = True
	data, report = _analyze(path, i_values=[])
	S = data.system

	f = None
	if poly is not None:
		f = S.ring.parse(poly)
		ord_f = f.order() or 0
	if ord_f is None:
		raise ValidationError("pass --ord-f or --poly")

	bounds = membership_bounds(
		S, report, ord_f, D, threshold=config.degree_exponent_threshold, strict=strict, logger=logger
	)
	result = bounds.to_dict()

	if f is not None:
		N = bounds.N if bounds.hypothesis_met else bounds.fallback.N
		oracle = IdealOracle(S, config.oracle_var_limit, config.force_oracle, logger)
		result["poly"] = str(f)
		result["member"] = oracle.membership_test(f, oracle.truncated(N + 1))
		result["tested_level"] = N + 1

	if as_json:
		_echo_json(result)
		return
	click.echo(f"ord_f = {ord_f}, D = {bounds.D}, omega = {report.omega}, rho = {report.rho}")
	if bounds.primary is not None:
		primary = bounds.primary
		click.echo(f"order bound     N = {primary.N} (f in Delta_{primary.N + 1} if f in [F])")
		click.echo(f"degree bound    {primary.symbolic} = {_expanded(primary)}")
	else:
		click.echo("order bound     hypothesis omega + max(0, ord_f - e + 1) >= rho fails")
	fallback = bounds.fallback
	click.echo(f"fallback        N = {fallback.N}, degree bound {fallback.symbolic} = {_expanded(fallback)}")
	if f is not None:
		verdict = "in" if result["member"] else "not in"
		click.echo(f"{result['poly']} is {verdict} Delta_{result['tested_level']}")


@cli.command("lemma-lab")
@click.option("--kind", type=click.Choice(KINDS), default="M", show_default=True)
@click.option("--t", "t", type=click.IntRange(min=1), required=True)
@click.option("--p", "p", type=click.IntRange(min=1), required=True)
@click.option("--q", "q", type=click.IntRange(min=1), required=True)
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=None)
@click.option(
	"--artifact",
	type=click.Path(dir_okay=False, path_type=Path),
	default=None,
	help="Where to write the counterexample if an onset exceeds its bound.",
)
@click.option("--json", "as_json", is_flag=True)
def lemma_lab_command(kind, t, p, q, trials, seed, artifact, as_json):
	"""Check eventual linearity of random twisted block matrices over Q(t), sigma(t) = t+1."""
	ctx = click.get_current_context()
	config, logger = ctx.obj["config"], ctx.obj["logger"]
	trials = trials if trials is not None else config.lemma_trials
	seed = seed if seed is not None else config.lemma_seed
	try:
		report = lemma_lab(
			kind,
			t,
			p,
			q,
			trials=trials,
			seed=seed,
			engine=create_rank_engine(config, logger),
			max_entry=config.lemma_max_entry,
			logger=logger,
		)
	except OnsetExceedsBound as e:
		if artifact is not None:
			artifact.write_text(json.dumps(e.artifact, indent=2) + "\n", encoding="utf-8")
			logger.error(f"Counterexample written to {artifact}")
		raise

	if as_json:
		_echo_json(report.to_dict())
		return
	click.echo(f"{kind}_k with t = {t}, p = {p}, q = {q}: {trials} trials, bound {report.bound}")
	click.echo(f"max onset {report.max_onset}")
	for onset, count in report.distribution.items():
		click.echo(f"  onset {onset}: {count}")


@cli.group("oracle", cls=DifferenceIndexGroup)
@click.argument("path", type=click.Path(path_type=Path))
@click.option("--force", is_flag=True, help="Ignore the oracle variable limit.")
@click.pass_context
def oracle(ctx, path, force):
	"""Groebner-basis cross-checks on the truncated ideals Delta_k."""
	if force:
		ctx.obj["config"].force_oracle = True
	ctx.obj["path"] = path


def _oracle():
	ctx = click.get_current_context()
	config, logger = ctx.obj["config"], ctx.obj["logger"]
	data = _load(ctx.obj["path"], logger)
	return data, IdealOracle(data.system, config.oracle_var_limit, config.force_oracle, logger)


@oracle.command("basis")
@click.option("--k", "k", type=click.IntRange(min=0), required=True, help="Level of Delta_k.")
@click.option("--json", "as_json", is_flag=True)
def oracle_basis(k, as_json):
	"""Reduced Groebner basis of Delta_k."""
	_, ideal_oracle = _oracle()
	basis = ideal_oracle.format_basis(ideal_oracle.groebner(ideal_oracle.truncated(k)))
	if as_json:
		_echo_json({"k": k, "basis": basis})
		return
	click.echo(f"Delta_{k}: {len(basis)} generators")
	for g in basis:
		click.echo(f"  {g}")


@oracle.command("elim")
@click.option("--i", "i", type=click.IntRange(min=0), required=True, help="Retained order.")
@click.option("--h", "h", type=click.IntRange(min=0), required=True, help="Level of Delta_h.")
@click.option("--json", "as_json", is_flag=True)
def oracle_elim(i, h, as_json):
	"""Reduced Groebner basis of Delta_h intersected with A_i."""
	_, ideal_oracle = _oracle()
	basis = ideal_oracle.format_basis(ideal_oracle.eliminate(ideal_oracle.truncated(h), i))
	if as_json:
		_echo_json({"i": i, "h": h, "basis": basis})
		return
	click.echo(f"Delta_{h} cap A_{i}: {len(basis)} generators")
	for g in basis:
		click.echo(f"  {g}")


@oracle.command("scan")
@click.option("--i", "i", type=int, default=None, help="Retained order (default e-1).")
@click.option("--hmax", type=click.IntRange(min=0), default=6, show_default=True)
@click.option("--cross-check", is_flag=True, help="Also run the rank pipeline and compare h with omega.")
@click.option("--json", "as_json", is_flag=True)
def oracle_scan(i, hmax, cross_check, as_json):
	"""Least h from which the elimination ideals stabilize."""
	data, ideal_oracle = _oracle()
	i = data.system.e - 1 if i is None else i
	report = None
	if cross_check:
		report = _report(data, i_values=[])
	result = ideal_oracle.stabilization_scan(i, hmax, report)
	document = result.to_dict()
	document["note"] = (
		"the scan checks the unlocalized statement; for a non-prime localization it is a one-sided check"
	)
	if report is not None:
		document["omega"] = report.omega
	if as_json:
		_echo_json(document)
		return
	click.echo(f"i = {i}: stabilizes from h = {result.h}")
	if report is not None:
		relation = "=" if result.h == report.omega else "!="
		click.echo(f"h {relation} omega = {report.omega}; cross-check condition holds: {result.condition_holds}")
	click.echo(f"note: {document['note']}")


@oracle.command("member")
@click.option("--poly", required=True, help="Polynomial to decide.")
@click.option("--h", "h", type=click.IntRange(min=0), required=True, help="Level of Delta_h.")
def oracle_member(poly, h):
	"""Decide membership of a polynomial in Delta_h."""
	data, ideal_oracle = _oracle()
	f = data.system.ring.parse(poly)
	member = ideal_oracle.membership_test(f, ideal_oracle.truncated(h))
	click.echo(f"{f} is {'in' if member else 'not in'} Delta_{h}")


@oracle.command("trdeg")
@click.option("--k", "k", type=click.IntRange(min=0), required=True, help="Level of Delta_k.")
@click.option("--compare", is_flag=True, help="Compare with psi(k) from the rank engine.")
def oracle_trdeg(k, compare):
	"""Transcendence degree of the residue ring of Delta_k."""
	ctx = click.get_current_context()
	data, ideal_oracle = _oracle()
	value = ideal_oracle.trdeg(ideal_oracle.truncated(k))
	click.echo(f"trdeg(Delta_{k}) = {value}")
	if compare:
		S = data.system
		rank = 0
		if k:
			engine = create_rank_engine(ctx.obj["config"], ctx.obj["logger"])
			rank = engine.rank(evaluate(build_Jk(S, k), data.specialization), "Jk")
		psi = (k + S.e) * S.n - rank
		click.echo(f"psi({k}) = {psi} from the rank engine: {'agrees' if psi == value else 'DISAGREES'}")


@oracle.command("elim-trdeg")
@click.option("--i", "i", type=int, default=None, help="Retained order (default e-1).")
@click.option("--k", "k", type=click.IntRange(min=0), required=True)
def oracle_elim_trdeg(i, k):
	"""Compare the elimination dimension with the value predicted from psi and mu."""
	data, ideal_oracle = _oracle()
	i = data.system.e - 1 if i is None else i
	report = _report(data, i_values=[])
	_echo_json(ideal_oracle.elimination_trdeg_check(report, i, k))


@oracle.command("hilbert-levin")
@click.option("--imax", type=click.IntRange(min=0), required=True)
def oracle_hilbert_levin(imax):
	"""Sample trdeg(A_i cap p) against the dimension polynomial d(i+1) + ord."""
	data, ideal_oracle = _oracle()
	report = _report(data, i_values=[])
	_echo_json(ideal_oracle.hilbert_levin_check(report, imax))


@cli.command("example")
@click.option("--list", "list_only", is_flag=True, help="List the bundled systems.")
@click.option("--name", default=DEFAULT_EXAMPLE, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None)
def example(list_only, name, output):
	"""Write a bundled system file (the worked example by default)."""
	if list_only:
		for example_name in bundled_examples():
			description = load_example(example_name).description or ""
			click.echo(f"{example_name:<18} {description}")
		return
	system_file = load_example(name)
	if output is None:
		click.echo(system_file.dumps(), nl=False)
		return
	system_file.save(output)
	click.echo(f"Wrote {name} to {output}", err=True)


def main():
	cli(prog_name="dindex")


if __name__ == "__main__":
	main()
