"""Hilbert-brick sampling and Monte Carlo locking experiments.

A brick element ``g`` has independent Haar coefficients ``c_w`` uniform on
``[-b_w, b_w]``.  Coefficients below the depth ``D`` are drawn; deeper ones
enter only through the analytic tail bound, so every certificate issued here
holds for the whole fibre of functions sharing the drawn coefficients.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import config
from .certify import (
    CONSERVATIVE,
    AnalyticTail,
    FunctionWithTail,
    check_gap_criterion,
    failure_probability_bound,
    log2_str,
)
from .conditions import check_admissible, check_evanescent
from .debruijn import PeriodicMeasure
from .haar import HaarCoefficients, StepFunction, forward_transform, inverse_transform, lipschitz_constant, words
from .sequences import GaugeSpec, SequenceSpec

BITS = 53
SEED_LIMIT = 1 << 64


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return seed


def unit_draw(seed: int, word: str) -> Fraction:
    """Dyadic uniform on ``(-1, 1)`` from a Philox stream keyed by ``(seed, word)``."""
    code = int("1" + word, 2)
    gen = np.random.Philox(key=np.array([_check_seed(seed), code], dtype=np.uint64))
    k = int(gen.random_raw()) >> (64 - BITS)
    return Fraction(2 * k - ((1 << BITS) - 1), 1 << BITS)


@dataclass(frozen=True)
class BrickSample:
    seed: int
    coeffs: HaarCoefficients

    @property
    def depth(self) -> int:
        return self.coeffs.level

    def to_json(self) -> dict:
        return {"seed": self.seed, "depth": self.depth,
                "coeffs": {w: str(c) for w, c in self.coeffs.as_dict().items()}}


def sample_brick(b: GaugeSpec, a: SequenceSpec, seed: int, depth: Optional[int] = None) -> BrickSample:
    """Draw ``c_w = u * b_w`` for every ``|w| < depth``, independently per word."""
    depth = b.depth if depth is None else depth
    if not 0 <= depth <= config.max_level():
        raise ValueError(f"depth must be in 0..{config.max_level()}")
    rows = tuple(tuple(unit_draw(seed, w) * b.b(w, a).to_fraction() for w in words(k))
                 for k in range(depth))
    return BrickSample(seed, HaarCoefficients(Fraction(0), rows))


def sample_seed(seed: int, i: int) -> int:
    """Independent 64-bit seed for sample ``i`` of a run."""
    return int(np.random.SeedSequence([_check_seed(seed), i]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ExperimentConfig:
    a: SequenceSpec
    gauge: GaugeSpec
    samples: int
    seed: int = 0
    depth: Optional[int] = None
    f0: Optional[StepFunction] = None
    mode: str = CONSERVATIVE

    @property
    def d(self) -> int:
        return self.gauge.depth if self.depth is None else self.depth

    @property
    def base(self) -> StepFunction:
        return StepFunction.constant(0) if self.f0 is None else self.f0

    def to_json(self) -> dict:
        return {
            "sequence": self.a.to_json(),
            "gauge": self.gauge.to_json(),
            "depth": self.d,
            "samples": self.samples,
            "seed": self.seed,
            "mode": self.mode,
            "f0": "zero" if self.f0 is None else self.f0.to_json(),
        }


def validate(cfg: ExperimentConfig) -> None:
    """Evanescence and admissibility to the horizon ``D``; raises with the diagnostic."""
    if cfg.samples < 0:
        raise ValueError("sample count must be nonnegative")
    if not 1 <= cfg.d <= config.CYCLE_CAP:
        raise ValueError(f"depth must be in 1..{config.CYCLE_CAP}")
    _check_seed(cfg.seed)
    eva = check_evanescent(cfg.a, cfg.gauge.c_eva, cfg.d)
    if not eva.ok:
        raise ValueError(f"evanescence check failed at n={eva.first_violation}: {eva.reason}")
    adm = check_admissible(cfg.gauge, cfg.a, cfg.d)
    if not adm.ok:
        raise ValueError(f"admissibility check failed at n={adm.first_violation}: {adm.reason}")


def run_sample(cfg: ExperimentConfig, i: int) -> dict:
    """Draw sample ``i`` and test the gap condition at every level ``1..D``."""
    s = sample_seed(cfg.seed, i)
    g = sample_brick(cfg.gauge, cfg.a, s, cfg.d)
    base = cfg.base
    head = inverse_transform(forward_transform(base) + g.coeffs)
    f = FunctionWithTail(head, AnalyticTail(cfg.a, cfg.gauge, lipschitz_constant(base, cfg.a)))
    passed = []
    first = None
    for n in range(1, cfg.d + 1):
        cert = check_gap_criterion(f, n, cfg.mode)
        passed.append(cert.certified)
        if cert.certified and first is None:
            first = cert
    rec = {"sample_id": i, "seed": s, "passed": passed, "certified_level": None,
           "maximizer_word": None, "period": None, "gap_log2": None, "tail_log2": None}
    if first is not None:
        rec.update(certified_level=first.level, maximizer_word=first.maximizer.word,
                   period=first.maximizer.period, gap_log2=log2_str(first.gap),
                   tail_log2=log2_str(first.tail))
    return rec


def _run_chunk(args):
    cfg, ids = args
    return [run_sample(cfg, i) for i in ids]


def binomial_slack(rate: float, n: int) -> float:
    return 4 * math.sqrt(rate * (1 - rate) / n) if n else 0.0


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> dict:
    """Run ``cfg.samples`` independent samples; the report is independent of ``workers``."""
    validate(cfg)
    lip0 = lipschitz_constant(cfg.base, cfg.a)
    bounds = [failure_probability_bound(n, cfg.a, cfg.gauge, lip0) for n in range(1, cfg.d + 1)]
    ids = list(range(cfg.samples))
    if workers > 1 and len(ids) > 1:
        size = -(-len(ids) // (4 * workers))
        chunks = [(cfg, ids[j:j + size]) for j in range(0, len(ids), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = [r for part in pool.map(_run_chunk, chunks) for r in part]
    else:
        records = _run_chunk((cfg, ids))
    return summarize(cfg, records, bounds)


def summarize(cfg: ExperimentConfig, records: list, bounds: list) -> dict:
    N = len(records)
    levels = []
    cumulative = 0
    for n, bound in enumerate(bounds, start=1):
        failures = sum(not r["passed"][n - 1] for r in records)
        cumulative += sum(r["certified_level"] == n for r in records)
        entry = {"level": n, "failures": failures, "bound": bound.to_json(),
                 "cumulative_certified": cumulative}
        if N:
            rate = failures / N
            slack = binomial_slack(rate, N)
            entry.update(failure_rate=rate, cumulative_rate=cumulative / N, slack=slack,
                         within_bound=rate <= float(bound.as_fraction()) + slack)
        levels.append(entry)
    periods = Counter(r["period"] for r in records if r["period"] is not None)
    certified = sum(periods.values())
    report = {
        "config": cfg.to_json(),
        "levels": levels,
        "certified": certified,
        f"uncertified <= {cfg.d}": N - certified,
        "period_histogram": {str(p): periods[p] for p in sorted(periods)},
        "records": records,
    }
    if N:
        report["certification_rate"] = certified / N
    return report


CSV_COLUMNS = ("sample_id", "certified_level", "maximizer_word", "period", "gap_log2", "tail_log2")


def report_rows(report: dict) -> list:
    return [["" if r[c] is None else r[c] for c in CSV_COLUMNS] for r in report["records"]]


def beta_projection_decomposition_check(weights: Optional[dict] = None) -> bool:
    """Whether a convex combination of periodic measures has the level-3
    cylinder frequencies of the Bernoulli measure (all ``1/8``).

    The default combination is ``(1/8) 0 + (1/8) 1 + (3/8) 001 + (3/8) 011``.
    """
    if weights is None:
        weights = {"0": Fraction(1, 8), "1": Fraction(1, 8),
                   "001": Fraction(3, 8), "011": Fraction(3, 8)}
    total = [Fraction(0)] * 8
    for word, w in weights.items():
        for i, x in enumerate(PeriodicMeasure(word).frequencies(3)):
            total[i] += Fraction(w) * x
    return total == [Fraction(1, 8)] * 8
