"""Entropies, the pairwise log-gap statistic, histograms and distances."""

import math
from dataclasses import dataclass

import numpy as np


def vn_entropy(lambdas):
    """von Neumann entropy -sum lam ln lam, with 0 ln 0 = 0."""
    lam = np.asarray(lambdas, dtype=float)
    pos = lam > 0.0
    return float(-(lam[pos] * np.log(lam[pos])).sum())


def entropy_deficit(lambdas, n_dim=None):
    """ln N - S(lambdas); N defaults to the number of coefficients given."""
    lam = np.asarray(lambdas, dtype=float)
    n = lam.size if n_dim is None else int(n_dim)
    return math.log(n) - vn_entropy(lam)


def empirical_s(lambdas):
    """Finite-N log-volume statistic (2 / N^2) sum_{j<k} ln |N lam_j - N lam_k|.

    The empirical counterpart of the entropy density s(u): the repulsion
    part of the log weight per N^2, evaluated on one spectrum.  Coefficients
    are sorted first so the value is exactly permutation invariant; a
    coincident pair returns -inf.
    """
    lam = np.sort(np.asarray(lambdas, dtype=float))
    n = lam.size
    if n < 2:
        return 0.0
    v = n * lam
    iu, ju = np.triu_indices(n, 1)
    gaps = v[ju] - v[iu]
    if np.any(gaps == 0.0):
        return float("-inf")
    return 2.0 * float(np.log(np.abs(gaps)).sum()) / (n * n)


@dataclass(frozen=True)
class Histogram:
    """Equal-width mass histogram; masses need not reach 1 if samples fell outside."""
    edges: np.ndarray
    masses: np.ndarray
    total_mass: float

    @classmethod
    def from_samples(cls, values, bins=40, lo=0.0, hi=None):
        vals = np.asarray(values, dtype=float).ravel()
        if vals.size == 0:
            raise ValueError("no samples to bin")
        if hi is None:
            top = float(vals.max())
            hi = 1.05 * top if top > lo else lo + 1.0
        if not hi > lo:
            raise ValueError("need hi > lo")
        edges = np.linspace(lo, hi, int(bins) + 1)
        counts, _ = np.histogram(vals, bins=edges)
        masses = counts / vals.size
        return cls(edges=edges, masses=masses, total_mass=float(masses.sum()))

    @property
    def centers(self):
        return 0.5 * (self.edges[:-1] + self.edges[1:])


def bin_density_masses(density, edges, n_grid=1 << 16):
    """Mass of a spectral density inside each bin of ``edges``.

    Covers the continuous part only (a detached atom lives in trace units,
    not the support's variable).  Same theta substitution as the moment
    quadrature, on one fine midpoint grid whose node weights are accumulated
    into bins; resolution n_grid bounds the per-edge misassignment to well
    under 1e-3.
    """
    edges = np.asarray(edges, dtype=float)
    a, b = density.support.a, density.support.b
    m = 0.5 * (a + b)
    c = 0.5 * (b - a)
    theta = (2 * np.arange(1, n_grid + 1) - 1) * (np.pi / (2 * n_grid))
    lam = m + c * np.cos(theta)
    w = np.asarray(density.eval(lam), dtype=float) * (c * np.sin(theta)) * (np.pi / n_grid)
    idx = np.searchsorted(edges, lam, side="right") - 1
    masses = np.zeros(edges.size - 1)
    valid = (idx >= 0) & (idx < masses.size)
    np.add.at(masses, idx[valid], w[valid])
    return masses


def l1_distance(hist, density, n_grid=1 << 16):
    """L1 distance between a histogram and a density binned onto the same edges.

    Mass outside the histogram range enters as one extra cell on each side
    of the comparison, so the value lives in [0, 2] like a total variation
    distance: 0 for a perfect match, 2 for disjoint supports.
    """
    p = bin_density_masses(density, hist.edges, n_grid=n_grid)
    m_out = max(0.0, 1.0 - float(hist.total_mass))
    p_out = max(0.0, 1.0 - float(p.sum()))
    return float(np.abs(hist.masses - p).sum() + abs(m_out - p_out))


def ks_distance(hist, density, n_grid=1 << 16):
    """Largest cumulative-mass gap at the bin edges (a secondary metric)."""
    p = bin_density_masses(density, hist.edges, n_grid=n_grid)
    return float(np.max(np.abs(np.cumsum(hist.masses) - np.cumsum(p))))


def summarize(samples, acceptance_rate=None, n_batches=32):
    """Ensemble statistics of u and the log-gap statistic, with batch-means errors.

    ``samples`` is a 2d array of spectra (rows on the simplex), one spectrum,
    or anything with a ``.samples`` attribute (a ChainResult); in the latter
    case its acceptance rate is picked up automatically.  se_u comes from
    contiguous batch means, which stays honest for autocorrelated chain
    output; a single sample reports zero spread.
    """
    if hasattr(samples, "samples"):
        if acceptance_rate is None:
            acceptance_rate = getattr(samples, "acceptance_rate", None)
        samples = samples.samples
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.size == 0:
        raise ValueError("nothing to summarize")
    n_draws, n = arr.shape
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(arr > 0.0, np.log(np.where(arr > 0.0, arr, 1.0)), 0.0)
    entropies = -(arr * logs).sum(axis=1)
    us = math.log(n) - entropies
    ss = np.array([empirical_s(row) for row in arr])
    out = {
        "n_samples": int(n_draws),
        "n_dim": int(n),
        "mean_u": float(us.mean()),
        "std_u": float(us.std()),
        "se_u": _batch_se(us, n_batches),
        "mean_s": float(ss.mean()),
        "std_s": float(ss.std()),
        "mean_entropy": float(entropies.mean()),
    }
    if acceptance_rate is not None:
        out["acceptance_rate"] = float(acceptance_rate)
    return out


def _batch_se(values, n_batches):
    nb = min(int(n_batches), values.size)
    if nb < 2:
        return 0.0
    means = np.array([chunk.mean() for chunk in np.array_split(values, nb)])
    return float(means.std(ddof=1) / math.sqrt(nb))
