"""Dense complex matrix kernel.

Everything above this module reduces to a handful of spectral computations on
small Hermitian matrices: eigendecomposition, absolute values, polar factors
and operator norms.  The eigensolver is a cyclic complex Jacobi iteration; it
is slow per flop but deterministic and accurate to machine precision at the
dimensions used here (a few dozen at most).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import NoConvergence, NotHermitian, NotPositive, ShapeMismatch

OFF_DIAGONAL_THRESHOLD = 1e-12
MAX_SWEEPS = 100
TINY = 1e-150


@dataclass(frozen=True)
class Tolerance:
    """Global tolerance policy, passed explicitly to every comparison.

    ``eps`` is scaled by ``1 + ||M||_F`` of the matrix under test.  ``snap`` is
    the distance from {0, 1} within which a spectrum still counts as that of a
    projection.
    """

    eps: float = 1e-9
    snap: float = 1e-7

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"tolerance eps must be positive, got {self.eps!r}")
        if not self.snap > 0:
            raise ValueError(f"snap threshold must be positive, got {self.snap!r}")

    def scaled(self, *mats) -> float:
        return self.eps * (1.0 + sum(fro(m) for m in mats))


DEFAULT_TOL = Tolerance()
# positivity slack inside norm bisections; the bisection error tracks it
NORM_TOL = Tolerance(eps=1e-12)


@dataclass(frozen=True)
class EigDecomp:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def as_cmatrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def fro(m) -> float:
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def hermitian_defect(m: np.ndarray) -> float:
    return fro(m - adjoint(m))


@njit(cache=True)
def _jacobi_kernel(a, threshold, max_sweeps):
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) <= threshold:
            return a, v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = a[p, q]
                t = abs(z)
                if t < TINY:
                    # a rotation here would divide by a subnormal modulus
                    a[p, q] = 0j
                    a[q, p] = 0j
                    continue
                phase = z / t
                phase = phase / abs(phase)
                app = a[p, p].real
                aqq = a[q, q].real
                theta = 0.5 * math.atan2(2.0 * t, aqq - app)
                c = math.cos(theta)
                s = math.sin(theta)
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g00 = c + 0j
                g01 = s + 0j
                g10 = -s * phase.conjugate()
                g11 = c * phase.conjugate()
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * g00 + akq * g10
                    a[k, q] = akp * g01 + akq * g11
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = g00.conjugate() * apk + g10.conjugate() * aqk
                    a[q, k] = g01.conjugate() * apk + g11.conjugate() * aqk
                a[p, q] = 0j
                a[q, p] = 0j
                a[p, p] = a[p, p].real + 0j
                a[q, q] = a[q, q].real + 0j
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp * g00 + vkq * g10
                    v[k, q] = vkp * g01 + vkq * g11
    return a, v, -1


def hermitian_eig(m, tol: Tolerance = DEFAULT_TOL) -> EigDecomp:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises NotHermitian when ``||M - M*||_F`` exceeds the scaled tolerance and
    NoConvergence when the sweep cap is hit.
    """
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"eigendecomposition needs a square matrix, got {m.shape}")
    if hermitian_defect(m) > tol.scaled(m):
        raise NotHermitian(f"matrix is not Hermitian (defect {hermitian_defect(m):.3e})")
    n = m.shape[0]
    if n == 0:
        return EigDecomp(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    h = np.ascontiguousarray(0.5 * (m + adjoint(m)))
    threshold = OFF_DIAGONAL_THRESHOLD * max(1.0, fro(h))
    diag, vecs, sweeps = _jacobi_kernel(h, threshold, MAX_SWEEPS)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    lam = np.real(np.diag(diag)).copy()
    order = np.argsort(lam, kind="stable")
    return EigDecomp(lam[order], vecs[:, order])


def _spectral(m, fn, tol: Tolerance) -> np.ndarray:
    d = hermitian_eig(m, tol)
    u = d.eigenvectors
    return (u * fn(d.eigenvalues)) @ adjoint(u)


def matrix_abs(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """|M| = U diag(|lambda|) U* for Hermitian M."""
    return _spectral(m, np.abs, tol)


def psd_sqrt(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Positive square root; eigenvalues slightly below zero are clamped."""
    m = as_cmatrix(m)
    d = hermitian_eig(m, tol)
    lam = d.eigenvalues
    floor = -tol.scaled(m)
    if lam.size and lam[0] < floor:
        raise NotPositive(f"matrix has eigenvalue {lam[0]:.3e} below zero")
    u = d.eigenvectors
    return (u * np.sqrt(np.clip(lam, 0.0, None))) @ adjoint(u)


def _dilation_pairs(v: np.ndarray, tol: Tolerance):
    """Singular triplets of v from the Hermitian dilation [[0, v], [v*, 0]].

    Its eigenvalues are +/- the singular values, with eigenvectors
    (x; y) / sqrt(2), so no square root of v* v is ever taken and small
    singular values keep absolute accuracy.
    """
    m, n = v.shape
    dil = np.zeros((m + n, m + n), dtype=np.complex128)
    dil[:m, m:] = v
    dil[m:, :m] = adjoint(v)
    d = hermitian_eig(dil, tol)
    pos = d.eigenvalues > 0
    sigma = d.eigenvalues[pos]
    vecs = d.eigenvectors[:, pos] * np.sqrt(2.0)
    return sigma, vecs[:m], vecs[m:]


def rect_abs(v, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """(v* v)^(1/2) for a rectangular matrix; the result is n x n."""
    v = as_cmatrix(v)
    if v.size == 0:
        return np.zeros((v.shape[1], v.shape[1]), dtype=np.complex128)
    sigma, _, right = _dilation_pairs(v, tol)
    out = (right * sigma) @ adjoint(right)
    return 0.5 * (out + adjoint(out))


def polar(v, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition ``v = w |v|`` with ``w`` a partial isometry.

    ``w`` pairs left and right singular vectors; singular values below half the
    scaled tolerance are treated as kernel.
    """
    v = as_cmatrix(v)
    m, n = v.shape
    if v.size == 0:
        return np.zeros((m, n), dtype=np.complex128), np.zeros((n, n), dtype=np.complex128)
    sigma, left, right = _dilation_pairs(v, tol)
    keep = sigma > 0.5 * tol.scaled(v)
    left, right = left[:, keep], right[:, keep]
    if keep.any():
        # columns are orthonormal in exact arithmetic only
        q, r = np.linalg.qr(left)
        left = q * np.sign(np.real(np.diag(r)))
        q, r = np.linalg.qr(right)
        right = q * np.sign(np.real(np.diag(r)))
    w = left @ adjoint(right)
    return w, rect_abs(v, tol)


def op_norm(m) -> float:
    """Largest singular value."""
    m = as_cmatrix(m)
    if m.size == 0:
        return 0.0
    gram = adjoint(m) @ m if m.shape[0] >= m.shape[1] else m @ adjoint(m)
    lam = hermitian_eig(gram).eigenvalues
    return float(math.sqrt(max(lam[-1], 0.0)))


def numerical_rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    m = as_cmatrix(m)
    if m.size == 0:
        return 0
    lam = hermitian_eig(adjoint(m) @ m, tol).eigenvalues
    cutoff = 0.5 * tol.scaled(m)
    return int(np.sum(np.sqrt(np.clip(lam, 0.0, None)) > cutoff))
