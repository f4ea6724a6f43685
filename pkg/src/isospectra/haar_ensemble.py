"""Gaussian bipartite states and a self contained Hermitian eigensolver.

A random pure state of an N x M system (square case M = N here) has Schmidt
coefficients equal to the eigenvalues of G G^dag / tr(G G^dag) with G a
complex Gaussian matrix.  The eigensolver is deliberately independent of
LAPACK: complex Householder reduction to a real tridiagonal followed by
implicit shift QL, so the sampling path can be cross checked against
library routines in the tests rather than relying on them.
"""

import math

import numpy as np

from ._kernels import tridiag_eigenvalues


def sample_gaussian_matrix(n_dim, rng):
    """N x N complex Gaussian matrix; each entry has unit expected square modulus."""
    n = int(n_dim)
    if n < 1:
        raise ValueError("n_dim must be a positive integer")
    re = rng.standard_normal((n, n))
    im = rng.standard_normal((n, n))
    return (re + 1j * im) / math.sqrt(2.0)


def _tridiagonalize(H):
    """Householder similarity of a Hermitian matrix to real tridiagonal form.

    Returns (d, e): the diagonal and the subdiagonal magnitudes.  Taking
    magnitudes on the subdiagonal is a diagonal phase similarity, so the
    spectrum is untouched.
    """
    A = np.array(H, dtype=np.complex128)
    n = A.shape[0]
    for k in range(n - 2):
        x = A[k + 1:, k]
        nrm = math.sqrt(float((x.conj() @ x).real))
        if nrm == 0.0:
            continue
        a0 = x[0]
        ph = a0 / abs(a0) if a0 != 0 else 1.0 + 0j
        u = x.copy()
        u[0] += ph * nrm
        uu = float((u.conj() @ u).real)
        if uu == 0.0:
            continue
        B = A[k + 1:, k + 1:]
        p = B @ u * (2.0 / uu)
        kappa = float((u.conj() @ p).real) / uu
        q = p - kappa * u
        B -= np.outer(q, u.conj()) + np.outer(u, q.conj())
        A[k + 1, k] = -ph * nrm
        A[k, k + 1] = np.conj(A[k + 1, k])
        A[k + 2:, k] = 0.0
        A[k, k + 2:] = 0.0
    d = np.real(np.diag(A)).copy()
    e = np.abs(np.diag(A, -1)).astype(np.float64)
    return d, e


def hermitian_eigenvalues(H, hermitian_tol=1e-12):
    """All eigenvalues of a Hermitian matrix, descending.

    Input must be square and Hermitian to within hermitian_tol relative to
    its largest entry (floored at 1).  Raises on non-Hermitian input and on
    the (never observed in practice) failure of the shifted iteration to
    converge.
    """
    A = np.asarray(H)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("input must be a square matrix")
    n = A.shape[0]
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    dev = float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0
    if dev > hermitian_tol * max(1.0, scale):
        raise ValueError("matrix is not Hermitian (max deviation %g)" % dev)
    if n == 0:
        return np.empty(0)
    if n == 1:
        return np.array([float(np.real(A[0, 0]))])
    d, e = _tridiagonalize(A)
    ee = np.zeros(n)
    ee[: n - 1] = e
    code = tridiag_eigenvalues(d, ee)
    if code != 0:
        raise RuntimeError("eigenvalue iteration stalled at index %d" % (code - 1))
    return np.sort(d)[::-1].copy()


def schmidt_spectrum(G):
    """Schmidt coefficients (descending, summing to one) of the state with amplitudes G."""
    G = np.asarray(G, dtype=np.complex128)
    W = G @ G.conj().T
    tr = float(np.trace(W).real)
    if tr <= 0.0:
        raise ValueError("amplitude matrix has zero norm")
    W /= tr
    lam = hermitian_eigenvalues(W)
    if lam[-1] < -1e-10:
        raise RuntimeError("spectrum came out with a significantly negative value")
    lam = np.where(lam > 0.0, lam, 0.0)
    lam /= lam.sum()
    return lam


def sample_spectra(n_dim, n_draws, rng):
    """Stack of n_draws Schmidt spectra of unconstrained Gaussian states."""
    if n_draws < 1:
        raise ValueError("n_draws must be positive")
    return np.stack([schmidt_spectrum(sample_gaussian_matrix(n_dim, rng))
                     for _ in range(n_draws)])


def sample_evaporated(u, n_dim, rng):
    """Draw a spectrum with the largest coefficient pinned at mu = u / ln(n_dim).

    Models the regime u > 1/2: one detached eigenvalue at exactly mu plus an
    independent unconstrained sea of n_dim - 1 coefficients rescaled to the
    leftover trace 1 - mu.  Requires 1/2 < u < ln(n_dim), and raises if the
    drawn sea happens to poke above mu (cannot occur once mu is
    macroscopically detached, i.e. for any reasonable n_dim).
    """
    n = int(n_dim)
    if n < 2:
        raise ValueError("n_dim must be at least 2")
    log_n = math.log(n)
    if not (0.5 < u < log_n):
        raise ValueError("u must lie strictly between 1/2 and ln(n_dim)")
    mu = u / log_n
    sea = schmidt_spectrum(sample_gaussian_matrix(n - 1, rng)) * (1.0 - mu)
    if sea.size and sea[0] >= mu:
        raise RuntimeError("sea outgrew the pinned eigenvalue; u too close to 1/2")
    return np.concatenate((np.array([mu]), sea))
