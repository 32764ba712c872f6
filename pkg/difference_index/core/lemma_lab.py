"""
Randomized harness for the eventual linearity of twisted block matrices.

For random blocks E_1..E_t the rank of M_k (resp. N_k) must be affine in k
from (t-1)(min{p,q}+1) (resp. (t-1)(min{p,q}+2)) on.
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass, field

from difference_index.core.dfield import DifferenceField, make_field
from difference_index.core.errors import OnsetExceedsBound, ValidationError
from difference_index.core.jacobi import BlockFamily, build_Mk, build_Nk
from difference_index.core.profiles import fit_tail
from difference_index.core.rank_engine import ExactRankEngine, RankEngine

KINDS = ("M", "N")


def lemma_bound(kind: str, t: int, p: int, q: int) -> int:
	if kind == "M":
		return (t - 1) * (min(p, q) + 1)
	if kind == "N":
		return (t - 1) * (min(p, q) + 2)
	raise ValidationError(f"unknown matrix family '{kind}', expected one of {KINDS}")


def default_lemma_field() -> DifferenceField:
	return make_field(["t"], {"t": "t + 1"})


def random_block_family(
	dfield: DifferenceField, t: int, p: int, q: int, rng: random.Random, max_entry: int = 3
) -> BlockFamily:
	"""Blocks whose entries are c0 + sum c_g*g with integer c in [-max_entry, max_entry]."""
	gens = [dfield.gen(name) for name in dfield.generators]

	def entry():
		value = dfield.element(rng.randint(-max_entry, max_entry))
		for gen in gens:
			value = value + gen * rng.randint(-max_entry, max_entry)
		return value

	blocks = tuple(tuple(tuple(entry() for _ in range(q)) for _ in range(p)) for _ in range(t))
	return BlockFamily(dfield, blocks)


def rank_sequence(kind: str, family: BlockFamily, kmax: int, engine: RankEngine) -> list[int]:
	"""rank(X_k) for k = 0..kmax, with rank 0 for the empty X_0."""
	build = build_Mk if kind == "M" else build_Nk
	matrix = build(family, kmax)
	counts = [k * family.p for k in range(1, kmax + 1)]
	return [0, *engine.prefix_ranks(matrix, counts, label=kind)]


@dataclass
class LemmaLabReport:
	kind: str
	t: int
	p: int
	q: int
	bound: int
	trials: int
	seed: int
	onsets: list[int] = field(default_factory=list)

	@property
	def distribution(self) -> dict[int, int]:
		return dict(sorted(Counter(self.onsets).items()))

	@property
	def max_onset(self) -> int:
		return max(self.onsets, default=0)

	def to_dict(self) -> dict:
		return {
			"kind": self.kind,
			"t": self.t,
			"p": self.p,
			"q": self.q,
			"bound": self.bound,
			"trials": self.trials,
			"seed": self.seed,
			"max_onset": self.max_onset,
			"onset_distribution": {str(k): v for k, v in self.distribution.items()},
		}


def lemma_lab(
	kind: str,
	t: int,
	p: int,
	q: int,
	trials: int = 100,
	seed: int = 42,
	dfield: DifferenceField | None = None,
	engine: RankEngine | None = None,
	max_entry: int = 3,
	logger: logging.Logger | None = None,
) -> LemmaLabReport:
	"""
	Runs ``trials`` random instances and checks every onset against the bound.

	Raises ``OnsetExceedsBound`` with the offending blocks as artifact.
	"""
	logger = logger or logging.getLogger(__name__)
	if min(t, p, q) < 1:
		raise ValidationError("t, p and q must all be at least 1")
	bound = lemma_bound(kind, t, p, q)
	dfield = dfield or default_lemma_field()
	engine = engine or ExactRankEngine("auto", logger=logger)
	kmax = bound + 3
	report = LemmaLabReport(kind=kind, t=t, p=p, q=q, bound=bound, trials=trials, seed=seed)

	for trial in range(trials):
		rng = random.Random(f"{seed}:{trial}")
		family = random_block_family(dfield, t, p, q, rng, max_entry)
		ranks = rank_sequence(kind, family, kmax, engine)
		_, _, onset = fit_tail(ranks, bound)
		if onset > bound:
			artifact = {
				"kind": kind,
				"trial": trial,
				"seed": seed,
				"field": repr(dfield),
				"blocks": family.to_strings(),
				"ranks": ranks,
				"onset": onset,
				"bound": bound,
			}
			raise OnsetExceedsBound(f"trial {trial}: onset {onset} exceeds the bound {bound}", artifact)
		report.onsets.append(onset)
		if (trial + 1) % 10 == 0 or trial + 1 == trials:
			logger.info(f"lemma-lab {kind}: {trial + 1}/{trials} trials, max onset {report.max_onset}")

	return report
