"""Compiled inner loops: the pair-transfer Metropolis block and tridiagonal QL."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def gas_block(lam, beta_n2, idx_i, idx_j, deltas, logus, min_gap,
              thin, store, logw_box, counters, u_trace, samples):
    """Run one block of pair-transfer proposals in place.

    One sweep is n proposals (n = len(lam)).  The move (lam_i + d, lam_j - d)
    keeps the trace fixed; the log weight update is O(n) because only the
    distances to the two moved entries and their two potential terms change.
    counters layout: [0] accepted, [1] sweeps completed, [2] sample rows
    written, [3] sweeps since the last stored row.  At the end of every
    sweep the current entropy deficit is written to u_trace; when ``store``
    is nonzero every ``thin``-th sweep deposits lam into ``samples``.
    """
    n = lam.shape[0]
    nprop = deltas.shape[0]
    logw = logw_box[0]
    logn = math.log(n)
    acc = 0
    for t in range(nprop):
        i = idx_i[t]
        j = idx_j[t]
        d = deltas[t]
        li = lam[i]
        lj = lam[j]
        li2 = li + d
        lj2 = lj - d
        if li2 >= 0.0 and lj2 >= 0.0:
            if d == 0.0:
                acc += 1  # self move, candidate identical to the state
            else:
                dlog = 0.0
                gap_new = abs(li2 - lj2)
                reject = gap_new < min_gap or gap_new == 0.0
                if not reject:
                    for k in range(n):
                        if k == i or k == j:
                            continue
                        a1 = abs(li2 - lam[k])
                        b1 = abs(lj2 - lam[k])
                        if a1 < min_gap or b1 < min_gap or a1 == 0.0 or b1 == 0.0:
                            reject = True
                            break
                        dlog += (math.log(a1) - math.log(abs(li - lam[k]))
                                 + math.log(b1) - math.log(abs(lj - lam[k])))
                if not reject:
                    dlog = 2.0 * (dlog + math.log(gap_new) - math.log(abs(li - lj)))
                    pot = 0.0
                    if li2 > 0.0:
                        pot += li2 * math.log(li2)
                    if lj2 > 0.0:
                        pot += lj2 * math.log(lj2)
                    if li > 0.0:
                        pot -= li * math.log(li)
                    if lj > 0.0:
                        pot -= lj * math.log(lj)
                    dlog -= beta_n2 * pot
                    if dlog >= 0.0 or logus[t] < dlog:
                        lam[i] = li2
                        lam[j] = lj2
                        logw += dlog
                        acc += 1
        if (t + 1) % n == 0:
            s_vn = 0.0
            for k in range(n):
                v = lam[k]
                if v > 0.0:
                    s_vn -= v * math.log(v)
            u_trace[counters[1]] = logn - s_vn
            counters[1] += 1
            if store != 0:
                counters[3] += 1
                if counters[3] >= thin:
                    counters[3] = 0
                    r = counters[2]
                    for k in range(n):
                        samples[r, k] = lam[k]
                    counters[2] += 1
    counters[0] += acc
    logw_box[0] = logw


@njit(cache=True)
def tridiag_eigenvalues(d, e, max_iter=60):
    """Implicit-shift QL on a symmetric tridiagonal matrix, in place.

    d holds the diagonal (overwritten with eigenvalues, unordered); e holds
    the subdiagonal in e[0..n-2] and needs one extra scratch slot at e[n-1].
    Returns 0 on success, or 1 + the index whose off-diagonal entry refused
    to annihilate within max_iter implicit shifts.
    """
    n = d.shape[0]
    eps = 2.220446049250313e-16
    if n <= 1:
        return 0
    for l in range(n):
        iters = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            iters += 1
            if iters > max_iter:
                return l + 1
            p = d[l]
            g = (d[l + 1] - p) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            if g >= 0.0:
                g = d[m] - p + e[l] / (g + r)
            else:
                g = d[m] - p + e[l] / (g - r)
            s = 1.0
            c = 1.0
            p = 0.0
            early = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # rotation annihilated early; drop the shift remainder
                    d[i + 1] -= p
                    e[m] = 0.0
                    early = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if not early:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return 0
