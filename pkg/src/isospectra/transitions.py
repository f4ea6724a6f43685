"""Derivatives of the entropy density and detection of its branch points.

s(u) is piecewise closed form, so derivatives come in two independent ways:
a chain rule route through the multiplier beta(u) (exact branchwise
formulas) and high order finite differences on s itself.  Branch point
detection uses one sided stencils that straddle, but never touch, each
candidate point; a jump in the k-th one sided derivative that clears the
stencil noise by an order of magnitude flags a genuine discontinuity of
that order.
"""

import math
from dataclasses import dataclass

import numpy as np

from .analytic_spectra import (U_CRITICAL, U_EVAPORATION, _check_n_dim,
                               _du_dbeta, beta_of_u, entropy_density_s)

_BREAKPOINTS = (U_CRITICAL, U_EVAPORATION)

# classic second order central stencils, Richardson extrapolated over h, h/2
_CENTRAL = {
    1: ({-1: -0.5, 1: 0.5}, 1),
    2: ({-1: 1.0, 0: -2.0, 1: 1.0}, 2),
    3: ({-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5}, 3),
    4: ({-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0}, 4),
}


def _stencil_guard(u, half_width, n_dim):
    for b in _BREAKPOINTS:
        if abs(u - b) <= half_width:
            raise ValueError(
                "u = %g is within the differencing stencil of the branch point %g"
                % (u, b))
    if u - half_width <= 0.0:
        raise ValueError("stencil would cross u = 0")
    if n_dim is not None and u + half_width >= math.log(n_dim):
        raise ValueError("stencil would cross u = ln(n_dim)")


def s_derivatives(u, n_dim=None, max_order=4, method="chain", step=1e-3):
    """d^k s / du^k for k = 1..max_order, at a point inside a single branch.

    method "chain" differentiates the closed forms through beta(u), using
    ds/du = beta and the inverse function rule for the higher orders; on the
    evaporated branch everything is explicit in ln(N) - u.  method "fd"
    applies central differences of entropy_density_s with one Richardson
    pass.  Points within twice the step of a branch point are rejected for
    either method, so both always see one smooth branch.
    """
    u = float(u)
    if not 1 <= int(max_order) <= 4:
        raise ValueError("max_order must be between 1 and 4")
    max_order = int(max_order)
    if step <= 0.0:
        raise ValueError("step must be positive")
    if u > U_EVAPORATION and n_dim is None:
        raise ValueError("u > 1/2 needs an explicit n_dim")
    _stencil_guard(u, 2.0 * step, n_dim)
    if method == "chain":
        return _chain_derivs(u, n_dim, max_order)
    if method == "fd":
        return _fd_derivs(u, n_dim, max_order, step)
    raise ValueError("method must be 'chain' or 'fd'")


def _chain_derivs(u, n_dim, max_order):
    if u > U_EVAPORATION:
        w = math.log(n_dim) - u
        vals = [-1.0 / w, -1.0 / w ** 2, -2.0 / w ** 3, -6.0 / w ** 4]
        return vals[:max_order]
    beta = beta_of_u(u)
    out = [beta]
    if max_order >= 2:
        u1 = _du_dbeta(beta, 1)
        out.append(1.0 / u1)
    if max_order >= 3:
        u2 = _du_dbeta(beta, 2)
        out.append(-u2 / u1 ** 3)
    if max_order >= 4:
        u3 = _du_dbeta(beta, 3)
        out.append((3.0 * u2 * u2 - u1 * u3) / u1 ** 5)
    return out


def _fd_derivs(u, n_dim, max_order, h):
    cache = {}

    def s_at(du):
        if du not in cache:
            cache[du] = entropy_density_s(u + du, n_dim)
        return cache[du]

    def estimate(hh):
        out = []
        for k in range(1, max_order + 1):
            coeffs, p = _CENTRAL[k]
            acc = sum(c * s_at(j * hh) for j, c in coeffs.items())
            out.append(acc / hh ** p)
        return out

    coarse = estimate(h)
    fine = estimate(0.5 * h)
    return [(4.0 * f - c) / 3.0 for c, f in zip(coarse, fine)]


def _one_sided_weights(order, n_pts=7):
    # weights w_j on offsets j = 1..n_pts (unit spacing, point itself excluded)
    # with sum_j w_j j^i = i! delta_{i,order}; exact on polynomials up to
    # degree n_pts - 1, hence O(h^{n_pts - order}) truncation error
    j = np.arange(1, n_pts + 1, dtype=float)
    vand = np.vander(j, increasing=True).T
    rhs = np.zeros(n_pts)
    rhs[order] = float(math.factorial(order))
    return np.linalg.solve(vand, rhs)


@dataclass(frozen=True)
class DerivativeJump:
    """One sided derivative pair across a candidate point at one order."""
    u_star: float
    order: int
    left: float
    right: float
    jump: float
    noise: float

    @property
    def flagged(self):
        return bool(self.jump > 10.0 * self.noise)


@dataclass(frozen=True)
class TransitionReport:
    u_c: float
    table: list
    detected: list


def _side_values(u_star, h, n_dim, sign, n_pts):
    # s at u_star + sign * j * h, j = 1..n_pts
    return np.array([entropy_density_s(u_star + sign * j * h, n_dim)
                     for j in range(1, n_pts + 1)])


def detect_transitions(n_dim, grid_spec=None, step=5e-3, n_stencil=7):
    """Scan a grid of candidate points for derivative jumps of s(u).

    Each candidate gets one sided derivative estimates of order 1..4 from
    both sides, at stencil widths step, step/2 and step/4; the point itself
    is never evaluated.  The spread across widths (plus a roundoff floor
    that grows like h^-k) sets the per-order noise; a left/right jump above
    ten times that noise is flagged.  ``detected`` lists each flagged point
    with the lowest discontinuous order.

    grid_spec is None (a default grid over (0, ln N) that always contains
    the two analytic branch points), a (lo, hi, count) triple, or an
    explicit sequence of candidate points.  Grid points other than the
    branch points themselves are dropped when a stencil around them would
    straddle a branch point, since one sided derivatives across a kink are
    meaningless.
    """
    n = _check_n_dim(n_dim)
    log_n = math.log(n)
    extent = (n_stencil + 1) * step
    if grid_spec is None:
        lo, hi, count = 0.06, log_n - 1.5 * extent, 25
    elif isinstance(grid_spec, tuple) and len(grid_spec) == 3:
        lo, hi, count = grid_spec
        if count < 1 or not lo < hi:
            raise ValueError("grid_spec must be (lo, hi, count) with lo < hi, count >= 1")
    else:
        lo, hi, count = None, None, None

    if lo is not None:
        uniform = np.linspace(lo, hi, int(count))
        keep = [p for p in uniform
                if all(abs(p - b) > extent for b in _BREAKPOINTS)]
        keep.extend(b for b in _BREAKPOINTS if lo <= b <= hi)
        candidates = np.array(sorted(keep))
    else:
        candidates = np.unique(np.asarray(grid_spec, dtype=float))
        if candidates.size == 0:
            raise ValueError("empty candidate grid")

    for p in candidates:
        if p - extent <= 0.0 or p + extent >= log_n:
            raise ValueError("candidate %g too close to the domain ends" % p)
        if any(0.0 < abs(p - b) <= extent for b in _BREAKPOINTS):
            raise ValueError(
                "candidate %g straddles a branch point; use the point itself" % p)

    weights = {k: _one_sided_weights(k, n_stencil) for k in range(1, 5)}
    abs_w = {k: float(np.abs(weights[k]).sum()) for k in weights}
    widths = (step, 0.5 * step, 0.25 * step)

    table = []
    detected = []
    for p in candidates:
        left_vals = {h: _side_values(p, h, n, -1.0, n_stencil) for h in widths}
        right_vals = {h: _side_values(p, h, n, +1.0, n_stencil) for h in widths}
        smag = max(1.0, float(np.max(np.abs(right_vals[step]))),
                   float(np.max(np.abs(left_vals[step]))))
        first_flag = None
        for k in range(1, 5):
            w = weights[k]
            lefts = [((-1.0) ** k) * float(w @ left_vals[h]) / h ** k for h in widths]
            rights = [float(w @ right_vals[h]) / h ** k for h in widths]
            spread = (max(lefts) - min(lefts)) + (max(rights) - min(rights))
            floor = 2.0 * np.finfo(float).eps * smag * abs_w[k] / widths[-1] ** k
            noise = spread + floor
            row = DerivativeJump(u_star=float(p), order=k,
                                 left=lefts[0], right=rights[0],
                                 jump=abs(rights[0] - lefts[0]), noise=noise)
            table.append(row)
            if row.flagged and first_flag is None:
                first_flag = k
        if first_flag is not None:
            detected.append((float(p), first_flag))
    return TransitionReport(u_c=U_CRITICAL, table=table, detected=detected)


def fit_half_jump_constant(n_dims=(50, 500, 5000), step=5e-3, n_stencil=7):
    """Measured first derivative jump at u = 1/2 across sizes, with c = jump * ln N.

    The jump decreases toward zero like c / ln N; the rows let the caller
    check the trend without this function asserting anything.
    """
    w = _one_sided_weights(1, n_stencil)
    rows = []
    for n in n_dims:
        n = _check_n_dim(n)
        lv = _side_values(U_EVAPORATION, step, n, -1.0, n_stencil)
        rv = _side_values(U_EVAPORATION, step, n, +1.0, n_stencil)
        left = -float(w @ lv) / step
        right = float(w @ rv) / step
        jump = abs(right - left)
        rows.append({"n_dim": n, "left": left, "right": right,
                     "jump": jump, "c_fit": jump * math.log(n)})
    return rows
