"""Metropolis sampling of the entropy-constrained eigenvalue gas.

The target measure on the simplex {lam_k >= 0, sum lam = 1} has log weight

    2 sum_{j<k} ln|lam_j - lam_k| - beta N^2 (ln N + sum_k lam_k ln lam_k),

i.e. pairwise log repulsion against a per-eigenvalue entropy potential whose
strength beta selects the typical entropy deficit u(beta).  Proposals
transfer a uniform delta between a random unordered pair, which preserves
the trace exactly; the acceptance uses an O(N) incremental weight update
that a from-scratch recomputation audits every block.  Only beta >= 0 (the
gapped and gapless regimes) is sampled this way; the evaporated regime has
its own direct sampler in haar_ensemble.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Optional

import numpy as np

from . import _kernels
from .analytic_spectra import mp_quantile


@dataclass
class GasState:
    """Eigenvalue configuration with its cached log weight."""
    lambdas: np.ndarray
    cached_log_weight: float
    n_dim: int


@dataclass
class MoveCandidate(GasState):
    """A proposed configuration; cached_log_weight is NaN until evaluated."""
    pair: tuple = (0, 1)
    delta: float = 0.0
    auto_reject: bool = False


@dataclass
class ChainConfig:
    """Run parameters.  steps, burn_in and thinning count sweeps of N proposals.

    move_scale None means start from 2/N^2 and let burn-in adapt it toward
    30..50 percent acceptance; min_gap None means the default floor
    1e-12 / N on pairwise distances of accepted states.  init is one of
    "mp_quantiles" (deterministic spread along the unconstrained law),
    "flat" (a uniformly random simplex point), or "custom" with
    init_lambdas supplied.
    """
    n_dim: int
    beta: float
    steps: int = 20000
    burn_in: int = 2000
    thinning: int = 10
    seed: int = 0
    move_scale: Optional[float] = None
    min_gap: Optional[float] = None
    init: str = "mp_quantiles"
    init_lambdas: Optional[np.ndarray] = field(default=None, repr=False)


@dataclass
class ChainResult:
    samples: np.ndarray
    acceptance_rate: float
    empirical_u_trace: np.ndarray
    seed: int
    config: ChainConfig
    final_state: GasState
    move_scale_used: float
    mistuned: bool
    max_sum_drift: float
    max_logw_drift: float


def log_weight(state, beta):
    """Log weight of a configuration (additive constants dropped).

    Accepts a GasState or a bare array.  Returns -inf for any coincident
    pair or negative entry, the zero-weight sentinel.
    """
    lam = state.lambdas if hasattr(state, "lambdas") else np.asarray(state, dtype=float)
    n = lam.size
    if np.any(lam < 0.0):
        return float("-inf")
    iu, ju = _pair_table(n)
    gaps = np.abs(lam[iu] - lam[ju])
    if np.any(gaps == 0.0):
        return float("-inf")
    repulsion = 2.0 * float(np.log(gaps).sum())
    pos = lam > 0.0
    potential = math.log(n) + float((lam[pos] * np.log(lam[pos])).sum())
    return repulsion - float(beta) * n * n * potential


@lru_cache(maxsize=16)
def _pair_table(n):
    iu, ju = np.triu_indices(n, 1)
    return iu.astype(np.int64), ju.astype(np.int64)


def propose_pair_move(state, rng, move_scale, min_gap=0.0):
    """One symmetric pair-transfer proposal.

    Picks an unordered pair uniformly, draws delta uniform on
    [-move_scale, move_scale] and moves (lam_i, lam_j) to
    (lam_i + delta, lam_j - delta).  The candidate comes back with
    auto_reject set when an entry would turn negative or an accepted-state
    gap would fall below min_gap; delta = 0 is a valid self move.
    """
    if move_scale <= 0.0:
        raise ValueError("move_scale must be positive")
    lam = state.lambdas
    n = state.n_dim
    iu, ju = _pair_table(n)
    t = int(rng.integers(0, iu.size))
    i, j = int(iu[t]), int(ju[t])
    delta = float(rng.uniform(-move_scale, move_scale))
    cand = lam.copy()
    cand[i] += delta
    cand[j] -= delta
    bad = cand[i] < 0.0 or cand[j] < 0.0
    if not bad and min_gap > 0.0 and delta != 0.0:
        for idx in (i, j):
            gaps = np.abs(cand - cand[idx])
            gaps[idx] = np.inf
            if float(gaps.min()) < min_gap:
                bad = True
                break
    return MoveCandidate(lambdas=cand, cached_log_weight=float("nan"),
                         n_dim=n, pair=(i, j), delta=delta, auto_reject=bool(bad))


def _validate_config(config):
    if config.n_dim < 2:
        raise ValueError("n_dim must be at least 2")
    if config.beta < 0.0:
        raise ValueError("beta must be nonnegative")
    if config.burn_in < 0 or config.steps <= config.burn_in:
        raise ValueError("need steps > burn_in >= 0")
    if config.thinning < 1:
        raise ValueError("thinning must be at least 1")
    if config.move_scale is not None and config.move_scale <= 0.0:
        raise ValueError("move_scale must be positive")
    if config.min_gap is not None and config.min_gap < 0.0:
        raise ValueError("min_gap cannot be negative")
    if config.init not in ("mp_quantiles", "flat", "custom"):
        raise ValueError("init must be 'mp_quantiles', 'flat' or 'custom'")
    if config.init == "custom" and config.init_lambdas is None:
        raise ValueError("custom init needs init_lambdas")


def _initial_lambdas(config, rng):
    n = config.n_dim
    if config.init == "mp_quantiles":
        # deterministic spread along the beta = 0 law; distinct by construction
        q = np.array([mp_quantile((k + 0.5) / n) for k in range(n)])
        return q / q.sum()
    if config.init == "flat":
        # a uniform point of the simplex (all-equal would be coincident, weight zero)
        return rng.dirichlet(np.ones(n))
    lam = np.asarray(config.init_lambdas, dtype=float).copy()
    if lam.shape != (n,):
        raise ValueError("init_lambdas must have shape (n_dim,)")
    if np.any(lam < 0.0):
        raise ValueError("init_lambdas must be nonnegative")
    total = lam.sum()
    if not math.isfinite(total) or abs(total - 1.0) > 1e-6:
        raise ValueError("init_lambdas must sum to 1 (within 1e-6)")
    return lam / total


def run_chain(config):
    """Sample the gas; deterministic for a given config (seed included).

    Burn-in adapts move_scale toward 30..50 percent acceptance in windows,
    then the scale freezes for the sampling phase.  Proposals run in
    compiled blocks of about 1e4; each block boundary renormalizes the trace
    and audits the incremental log weight against a from-scratch value (the
    worst drifts are reported on the result).  acceptance_rate covers the
    post burn-in phase; a rate outside [0.05, 0.95] sets ``mistuned`` and
    emits a warning.
    """
    _validate_config(config)
    n = config.n_dim
    rng = np.random.default_rng(config.seed)
    lam = _initial_lambdas(config, rng)
    logw = log_weight(lam, config.beta)
    if not math.isfinite(logw):
        raise ValueError("initial state has zero weight (coincident eigenvalues)")
    move_scale = config.move_scale if config.move_scale is not None else 2.0 / n ** 2
    min_gap = config.min_gap if config.min_gap is not None else 1e-12 / n
    beta_n2 = config.beta * n * n
    iu, ju = _pair_table(n)

    u_trace = np.empty(config.steps)
    post_sweeps = config.steps - config.burn_in
    samples = np.empty((post_sweeps // config.thinning, n))
    counters = np.zeros(4, dtype=np.int64)
    logw_box = np.array([logw])
    drift = {"sum": 0.0, "logw": 0.0}
    block_sweeps = max(1, int(math.ceil(10000.0 / n)))

    def run_sweeps(n_sweeps, store):
        nonlocal lam
        done = 0
        while done < n_sweeps:
            bs = min(block_sweeps, n_sweeps - done)
            npp = bs * n
            pick = rng.integers(0, iu.size, size=npp)
            deltas = rng.uniform(-move_scale, move_scale, size=npp)
            logus = np.log(rng.random(size=npp))
            _kernels.gas_block(lam, beta_n2, iu[pick], ju[pick], deltas, logus,
                               min_gap, config.thinning, 1 if store else 0,
                               logw_box, counters, u_trace, samples)
            total = float(lam.sum())
            drift["sum"] = max(drift["sum"], abs(total - 1.0))
            lam /= total
            scratch = log_weight(lam, config.beta)
            drift["logw"] = max(drift["logw"], abs(scratch - float(logw_box[0])))
            logw_box[0] = scratch
            done += bs

    if config.burn_in > 0:
        window = max(10, min(200, config.burn_in // 10))
        done = 0
        while done < config.burn_in:
            w = min(window, config.burn_in - done)
            before = int(counters[0])
            run_sweeps(w, store=False)
            rate = (int(counters[0]) - before) / (w * n)
            if rate < 0.3:
                move_scale *= 0.8
            elif rate > 0.5:
                move_scale *= 1.25
            move_scale = min(max(move_scale, 1e-10), 0.5)
            done += w

    burn_accepted = int(counters[0])
    run_sweeps(post_sweeps, store=True)
    accepted = int(counters[0]) - burn_accepted
    acceptance = accepted / (post_sweeps * n)
    mistuned = acceptance < 0.05 or acceptance > 0.95
    if mistuned:
        warnings.warn("chain mistuned: post burn-in acceptance %.3f" % acceptance,
                      RuntimeWarning)
    assert int(counters[2]) == samples.shape[0]
    final = GasState(lambdas=lam.copy(), cached_log_weight=float(logw_box[0]), n_dim=n)
    return ChainResult(samples=samples, acceptance_rate=float(acceptance),
                       empirical_u_trace=u_trace, seed=config.seed, config=config,
                       final_state=final, move_scale_used=float(move_scale),
                       mistuned=bool(mistuned), max_sum_drift=drift["sum"],
                       max_logw_drift=drift["logw"])


def empirical_spectrum(result, bins=40, upper=None):
    """Pooled histogram of the rescaled eigenvalues N lam_k across all samples."""
    from .empirics import Histogram

    n = result.samples.shape[1]
    vals = result.samples.ravel() * n
    if upper is None:
        upper = 1.05 * float(vals.max())
    return Histogram.from_samples(vals, bins=bins, lo=0.0, hi=upper)


_CONFIG_TYPES = {
    "n_dim": int, "beta": float, "steps": int, "burn_in": int, "thinning": int,
    "seed": int, "move_scale": float, "min_gap": float, "init": str,
}


def parse_chain_config(path, defaults=None, **overrides):
    """Read a plain key=value chain config file ('#' starts a comment).

    Keys mirror the ChainConfig fields; keyword overrides (CLI flags) win
    over file values when they are not None, and ``defaults`` fill in only
    where the file says nothing.  Unknown keys are an error.
    """
    raw = dict(defaults or {})
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("line %d of %s is not key=value" % (lineno, path))
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_TYPES:
            raise ValueError("unknown config key %r" % key)
        raw[key] = _CONFIG_TYPES[key](val)
    for key, val in overrides.items():
        if val is None:
            continue
        if key not in _CONFIG_TYPES:
            raise ValueError("unknown config key %r" % key)
        raw[key] = _CONFIG_TYPES[key](val)
    if "n_dim" not in raw or "beta" not in raw:
        raise ValueError("config must define n_dim and beta")
    return ChainConfig(**raw)


def write_samples_csv(path, result):
    """One row per retained sample; columns lambda_1..lambda_N, 17 significant digits."""
    from ._io import write_csv

    n = result.samples.shape[1]
    header = ["lambda_%d" % (k + 1) for k in range(n)]
    write_csv(path, header, result.samples)
