"""Closed-form typical spectra of entropy-constrained random pure states.

The rescaled eigenvalue density of a bipartite pure state conditioned on its
von Neumann entropy comes in three regimes, indexed either by a Lagrange
multiplier beta or by the entropy deficit u = ln N - S:

* Gapped (beta > 3/2, u < u_c): support [a, b] with a > 0, both edges soft.
* Gapless (0 <= beta <= 3/2, u_c <= u <= 1/2): support [0, b] with an
  inverse square root wall at the origin.
* Evaporated (u > 1/2): one eigenvalue detaches from an unconstrained sea
  and carries the whole entropy deficit by itself.

beta = 0 is the unconstrained case, whose density is the square root law
``mp_density`` on [0, 4].
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .quadrature import deformation_g, deformation_g_tilde

BETA_CRITICAL = 1.5
# u at the gap opening: ln(2/3) + 2/3
U_CRITICAL = math.log(2.0 / 3.0) + 2.0 / 3.0
U_EVAPORATION = 0.5


class Phase(Enum):
    GAPPED = "gapped"
    GAPLESS = "gapless"
    EVAPORATED = "evaporated"


@dataclass(frozen=True)
class SupportInterval:
    a: float
    b: float

    def __post_init__(self):
        if not (0.0 <= self.a < self.b):
            raise ValueError("support must satisfy 0 <= a < b")

    @property
    def width(self):
        return self.b - self.a


@dataclass(frozen=True)
class Atom:
    """A point mass: ``weight`` is the trace fraction sitting at ``position``."""
    position: float
    weight: float


@dataclass(frozen=True)
class SpectralDensity:
    """A bulk density plus an optional point mass.

    ``eval`` maps rescaled eigenvalues (scalar or array) to density values;
    it returns exact zeros outside the open support and NaN at a hard edge
    where the density itself diverges.  ``rescaling`` records which rescaled
    variable the bulk lives in.
    """
    support: SupportInterval
    eval: Callable = field(repr=False)
    atom: Optional[Atom] = None
    rescaling: str = "lambda = N * lambda_k"


def critical_values():
    """The two phase boundaries: beta_c for the gap opening and u_c = u(beta_c)."""
    return {"beta_c": BETA_CRITICAL, "u_c": U_CRITICAL}


def _check_beta(beta):
    beta = float(beta)
    if not math.isfinite(beta) or beta < 0.0:
        raise ValueError("beta must be a finite nonnegative number")
    return beta


def _check_n_dim(n_dim):
    n = int(n_dim)
    if n != n_dim or n < 2:
        raise ValueError("n_dim must be an integer >= 2")
    return n


def phase_of_beta(beta):
    beta = _check_beta(beta)
    return Phase.GAPPED if beta > BETA_CRITICAL else Phase.GAPLESS


def phase_of_u(u):
    u = float(u)
    if u < 0.0:
        raise ValueError("entropy deficit u cannot be negative")
    if u > U_EVAPORATION:
        return Phase.EVAPORATED
    return Phase.GAPLESS if u >= U_CRITICAL else Phase.GAPPED


def _edges_gapped(beta):
    r = math.sqrt(beta - 0.5)
    return (r - 1.0) ** 2 / beta, (r + 1.0) ** 2 / beta


def _edges_gapless(beta):
    # b = (4/beta)(sqrt(2 beta + 1) - 1), rationalized so beta -> 0 is exact
    return 0.0, 8.0 / (math.sqrt(2.0 * beta + 1.0) + 1.0)


def support_edges(beta):
    """Support [a, b] of the rescaled density at multiplier beta.

    The lower edge a is strictly positive exactly when beta > 3/2; at
    beta = 0 the support is exactly [0, 4].
    """
    beta = _check_beta(beta)
    if beta > BETA_CRITICAL:
        a, b = _edges_gapped(beta)
    else:
        a, b = _edges_gapless(beta)
    return SupportInterval(a, b)


def _u_gapped(beta):
    return math.log1p(-0.5 / beta) + 1.0 / beta


def _u_gapless(beta):
    g = math.sqrt(1.0 + 2.0 * beta)
    # equals (g - 1)/(2 beta) + ln(2/(g + 1)) + ... rearranged to be exact at beta = 0
    return 1.0 - 1.0 / (g + 1.0) - math.log(0.5 * (g + 1.0))


def u_of_beta(beta):
    """Entropy deficit u = ln N - S of the typical spectrum at multiplier beta.

    Strictly decreasing, u(0) = 1/2 exactly, u -> 0 as beta -> infinity,
    continuous (with three continuous derivatives) across beta = 3/2.
    """
    beta = _check_beta(beta)
    return _u_gapped(beta) if beta > BETA_CRITICAL else _u_gapless(beta)


def _du_dbeta(beta, order=1):
    # branchwise closed forms for the first three derivatives of u_of_beta
    if beta > BETA_CRITICAL:
        t = 2.0 * beta - 1.0
        if order == 1:
            return (1.0 - beta) / (beta ** 2 * t)
        if order == 2:
            return (4.0 * beta ** 2 - 7.0 * beta + 2.0) / (beta ** 3 * t ** 2)
        if order == 3:
            return -2.0 * (12.0 * beta ** 3 - 30.0 * beta ** 2 + 17.0 * beta - 3.0) \
                / (beta ** 4 * t ** 3)
    else:
        g = math.sqrt(1.0 + 2.0 * beta)
        if order == 1:
            return -1.0 / (g + 1.0) ** 2
        if order == 2:
            return 2.0 / (g * (g + 1.0) ** 3)
        if order == 3:
            return -2.0 * (4.0 * g + 1.0) / (g ** 3 * (g + 1.0) ** 4)
    raise ValueError("order must be 1, 2, or 3")


def beta_of_u(u, tol=1e-12):
    """Inverse of u_of_beta on 0 < u <= 1/2.

    Bisection brackets the root, Newton with the exact slope polishes it;
    the result satisfies |u_of_beta(beta) - u| <= tol.  u = 1/2 maps to
    beta = 0 exactly; u <= 0 and u > 1/2 are rejected (beta diverges as
    u -> 0, and deficits above 1/2 are not reachable at any beta).
    """
    u = float(u)
    if u <= 0.0:
        raise ValueError("u must be positive (beta diverges as u -> 0)")
    if u > U_EVAPORATION:
        raise ValueError("no beta reaches u > 1/2; see evaporated_spectrum")
    if u == U_EVAPORATION:
        return 0.0
    lo, hi = 0.0, 2.0
    while u_of_beta(hi) > u:
        hi *= 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if u_of_beta(mid) > u:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    for _ in range(100):
        err = u_of_beta(beta) - u
        if abs(err) <= tol:
            return beta
        if err > 0.0:
            lo = beta
        else:
            hi = beta
        nxt = beta - err / _du_dbeta(beta, 1)
        beta = nxt if lo < nxt < hi else 0.5 * (lo + hi)
    raise RuntimeError("beta_of_u failed to converge")


def _mp_eval(lam):
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.zeros(lam_arr.shape)
    out[lam_arr == 0.0] = np.nan
    inside = (lam_arr > 0.0) & (lam_arr < 4.0)
    li = lam_arr[inside]
    out[inside] = np.sqrt((4.0 - li) / li) / (2.0 * np.pi)
    return out if np.ndim(lam) else float(out[0])


def mp_density():
    """The unconstrained (beta = 0) density: sqrt((4 - lam)/lam) / (2 pi) on [0, 4]."""
    return SpectralDensity(support=SupportInterval(0.0, 4.0), eval=_mp_eval)


def mp_cdf(lam):
    """Cumulative mass of mp_density below lam (clamped outside [0, 4])."""
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.empty(lam_arr.shape)
    out[lam_arr <= 0.0] = 0.0
    out[lam_arr >= 4.0] = 1.0
    inside = (lam_arr > 0.0) & (lam_arr < 4.0)
    li = lam_arr[inside]
    root = np.sqrt(li * (4.0 - li))
    out[inside] = 0.5 + root / (2.0 * np.pi) + np.arctan((li - 2.0) / root) / np.pi
    return out if np.ndim(lam) else float(out[0])


def mp_quantile(p):
    """Inverse of mp_cdf on (0, 1)."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    return brentq(lambda t: mp_cdf(t) - p, 1e-15, 4.0 - 1e-15, xtol=1e-14)


def sigma(beta, n_nodes=None, tol=None):
    """The typical rescaled density at multiplier beta.

    Gapped branch: a deformed semicircle profile, exactly zero at both soft
    edges.  Gapless branch: an inverse square root at the origin times a
    bounded deformation (eval returns NaN at lambda = 0, where the density
    diverges).  beta = 0 returns mp_density itself.
    """
    beta = _check_beta(beta)
    if beta == 0.0:
        return mp_density()
    quad_kw = {}
    if n_nodes is not None:
        quad_kw["n_nodes"] = n_nodes
    if tol is not None:
        quad_kw["tol"] = tol
    support = support_edges(beta)
    a, b = support.a, support.b
    if beta > BETA_CRITICAL:
        eta = (b + a) / (b - a)
        pref = 8.0 / (math.pi * (b - a) ** 2)

        def ev(lam):
            lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
            out = np.zeros(lam_arr.shape)
            inside = (lam_arr > a) & (lam_arr < b)
            if inside.any():
                li = lam_arr[inside]
                x = np.clip(2.0 * (li - a) / (b - a) - 1.0,
                            -1.0 + 1e-15, 1.0 - 1e-15)
                gx = deformation_g(x, eta, **quad_kw)
                out[inside] = pref * np.sqrt((b - li) * (li - a)) * gx
            return out if np.ndim(lam) else float(out[0])
    else:
        pref = 2.0 / (math.pi * b)
        coef = beta * b / 4.0

        def ev(lam):
            lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
            out = np.zeros(lam_arr.shape)
            out[lam_arr == 0.0] = np.nan
            inside = (lam_arr > 0.0) & (lam_arr < b)
            if inside.any():
                li = lam_arr[inside]
                x = np.clip(2.0 * li / b - 1.0, -1.0 + 1e-15, 1.0 - 1e-15)
                gt = deformation_g_tilde(x, **quad_kw)
                out[inside] = pref * np.sqrt((b - li) / li) * (1.0 + coef * gt)
            return out if np.ndim(lam) else float(out[0])

    return SpectralDensity(support=support, eval=ev)


def evaporated_spectrum(u, n_dim):
    """Spectrum in the regime u > 1/2: a detached eigenvalue plus a sea.

    The detached eigenvalue sits at trace fraction mu = u / ln(n_dim) and
    carries that whole trace mass by itself; the remaining n_dim - 1
    eigenvalues form an unconstrained sea whose density, in the sea variable
    lambda = (N - 1) lambda_k / (1 - mu), is exactly mp_density.  The
    returned object carries the sea as bulk and the eigenvalue as the atom
    (position and trace weight both mu, in raw trace units).
    """
    n = _check_n_dim(n_dim)
    u = float(u)
    log_n = math.log(n)
    if u <= U_EVAPORATION:
        raise ValueError("evaporated regime needs u > 1/2")
    if u > log_n:
        raise ValueError("u cannot exceed ln(n_dim)")
    mu = u / log_n
    return SpectralDensity(
        support=SupportInterval(0.0, 4.0),
        eval=_mp_eval,
        atom=Atom(position=mu, weight=mu),
        rescaling="sea: lambda = (N - 1) lambda_k / (1 - mu); atom in trace units",
    )


def _s_gapped(beta):
    return 0.5 * math.log(1.0 / beta - 0.5 / beta ** 2) - 0.25


def _s_gapless(beta):
    g = math.sqrt(1.0 + 2.0 * beta)
    return g - 0.5 * beta - 1.5 - math.log(0.5 * (g + 1.0))


def entropy_density_s(u, n_dim=None):
    """Log-volume density s(u): ln Vol / N^2 of states at entropy deficit u.

    Three branches: gapped (0 < u < u_c), gapless (u_c <= u <= 1/2), and
    evaporated (1/2 < u <= ln N, which needs an explicit n_dim and gives
    s = ln(1 - u/ln N) - 1/2, reaching -inf at u = ln N).  s -> -inf as
    u -> 0+ as well; u <= 0 is rejected.
    """
    u = float(u)
    if u <= 0.0:
        raise ValueError("s(u) is defined for u > 0 (it diverges as u -> 0+)")
    if u <= U_EVAPORATION:
        if n_dim is not None:
            _check_n_dim(n_dim)
        beta = beta_of_u(u)
        return _s_gapped(beta) if u < U_CRITICAL else _s_gapless(beta)
    if n_dim is None:
        raise ValueError("u > 1/2 needs an explicit n_dim")
    n = _check_n_dim(n_dim)
    log_n = math.log(n)
    if u > log_n:
        raise ValueError("u cannot exceed ln(n_dim)")
    mu = u / log_n
    if mu >= 1.0:
        return float("-inf")
    return math.log1p(-mu) - 0.5


def log_volume(u, n_dim):
    """N^2 s(u): log of the isoentropic volume at deficit u for dimension N."""
    n = _check_n_dim(n_dim)
    return n * n * entropy_density_s(u, n)
