"""Deterministic chunked Monte Carlo engine.

Samples are drawn in fixed-size chunks; chunk k uses a Philox stream keyed
by (seed, operation key, k), so the stream depends only on the chunk index,
never on which worker ran it.  Partial statistics are combined in chunk
order, which makes every estimate bit-identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EvaluationError

CHUNK = 1 << 16
DEFAULT_BUDGET = 100_000

# -inf samples tolerated (and dropped) before an estimate is declared -inf.
MAX_ISOLATED_NEG_INF = 2


@dataclass(frozen=True)
class MeanEstimate:
    """A Monte Carlo mean with its statistical error.

    value is -inf when more than MAX_ISOLATED_NEG_INF samples hit -inf;
    otherwise isolated -inf samples are dropped and only flagged.
    samples counts the draws that contributed to the mean.
    """

    value: float
    std_error: float
    samples: int
    hit_minus_infinity: bool = False
    minus_inf_samples: int = 0


def chunk_rng(seed: int, key: tuple[int, ...], chunk_index: int) -> np.random.Generator:
    """Counter-style substream: fully determined by (seed, key, chunk_index)."""
    ss = np.random.SeedSequence(
        entropy=int(seed), spawn_key=tuple(int(k) & 0xFFFFFFFF for k in key) + (chunk_index,)
    )
    return np.random.Generator(np.random.Philox(ss))


def _chunk_sizes(budget: int):
    full, rest = divmod(budget, CHUNK)
    sizes = [CHUNK] * full
    if rest:
        sizes.append(rest)
    return sizes


def _chunk_stats(vals: np.ndarray):
    """(n_finite, mean, M2, n_neginf) for one chunk; raises on NaN / +inf."""
    bad = np.isnan(vals)
    if bad.any():
        i = int(np.argmax(bad))
        raise EvaluationError(f"evaluator returned NaN (sample {i} of chunk)")
    posinf = np.isposinf(vals)
    if posinf.any():
        raise EvaluationError("evaluator returned +inf; values must lie in [-inf, inf)")
    neg = np.isneginf(vals)
    n_neg = int(np.count_nonzero(neg))
    if n_neg:
        vals = vals[~neg]
    n = vals.size
    if n == 0:
        return 0, 0.0, 0.0, n_neg
    mean = float(np.mean(vals))
    m2 = float(np.sum((vals - mean) ** 2))
    return n, mean, m2, n_neg


def _combine(stats):
    """Chan et al. pairwise combination, applied sequentially in chunk order."""
    n, mean, m2 = 0, 0.0, 0.0
    n_neg = 0
    for cn, cmean, cm2, cneg in stats:
        n_neg += cneg
        if cn == 0:
            continue
        if n == 0:
            n, mean, m2 = cn, cmean, cm2
            continue
        total = n + cn
        delta = cmean - mean
        mean = mean + delta * cn / total
        m2 = m2 + cm2 + delta * delta * n * cn / total
        n = total
    return n, mean, m2, n_neg


def mc_mean(
    sample_fn,
    eval_fn,
    budget: int,
    seed: int,
    key: tuple[int, ...] = (),
    workers: int = 1,
) -> MeanEstimate:
    """Mean of eval_fn over points produced by sample_fn(rng, size).

    sample_fn must draw from the given generator only, in a fixed call
    order, so each chunk is reproducible in isolation.
    """
    if budget < 2:
        raise DomainError(f"budget must be >= 2, got {budget}")
    sizes = _chunk_sizes(budget)

    def task(idx_size):
        idx, size = idx_size
        rng = chunk_rng(seed, key, idx)
        pts = sample_fn(rng, size)
        vals = np.asarray(eval_fn(pts), dtype=np.float64)
        if vals.shape != (size,):
            raise EvaluationError(
                f"evaluator returned shape {vals.shape}, expected ({size},)"
            )
        return _chunk_stats(vals)

    jobs = list(enumerate(sizes))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(task, jobs))
    else:
        stats = [task(j) for j in jobs]

    n, mean, m2, n_neg = _combine(stats)
    if n_neg > MAX_ISOLATED_NEG_INF or n == 0:
        return MeanEstimate(
            value=float("-inf"),
            std_error=0.0,
            samples=max(n, 1),
            hit_minus_infinity=True,
            minus_inf_samples=n_neg,
        )
    var = m2 / (n - 1) if n > 1 else 0.0
    se = float(np.sqrt(max(var, 0.0) / n))
    return MeanEstimate(
        value=mean,
        std_error=se,
        samples=n,
        hit_minus_infinity=n_neg > 0,
        minus_inf_samples=n_neg,
    )


def default_budget() -> int:
    """Default sample budget; the CLI may override via PSH_DEFAULT_BUDGET."""
    raw = os.environ.get("PSH_DEFAULT_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"PSH_DEFAULT_BUDGET must be an integer, got {raw!r}") from exc
    if value < 2:
        raise DomainError("PSH_DEFAULT_BUDGET must be >= 2")
    return value
