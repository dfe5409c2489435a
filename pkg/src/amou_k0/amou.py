"""Finite-dimensional C*-algebras as absolute matrix order unit spaces.

An algebra ``A = M_{n_1} (+) ... (+) M_{n_k}`` is described by its block sizes.
An element of ``M_{m,n}(A)`` is stored as one complex matrix per block: block
``i`` has shape ``(m*n_i, n*n_i)`` and is laid out as an ``m x n`` grid of
``n_i x n_i`` cells, so the scalar action of ``a in M_{r,m}`` is ``kron(a, I)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .errors import AlgebraMismatch, NotHermitian, NotPositive, ShapeMismatch, ZeroElement
from .linalg import DEFAULT_TOL, NORM_TOL, Tolerance


@dataclass(frozen=True)
class Algebra:
    block_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.block_sizes)
        if not sizes or any(n < 1 for n in sizes):
            raise ValueError(f"block sizes must be a nonempty list of positive integers, got {self.block_sizes!r}")
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def k(self) -> int:
        return len(self.block_sizes)

    def __str__(self):
        parts = ["C" if n == 1 else f"M{n}" for n in self.block_sizes]
        return "+".join(parts)

    def zeros(self, m: int, n: int | None = None) -> AElement:
        n = m if n is None else n
        return AElement(self, (m, n), tuple(np.zeros((m * s, n * s), dtype=np.complex128) for s in self.block_sizes))

    def unit(self, n: int = 1) -> AElement:
        """The matrix order unit e^n = e (+) ... (+) e."""
        return AElement(self, (n, n), tuple(np.eye(n * s, dtype=np.complex128) for s in self.block_sizes))

    def from_blocks(self, level, blocks) -> AElement:
        return AElement(self, tuple(level), tuple(linalg.as_cmatrix(b) for b in blocks))

    def random(self, rng: np.random.Generator, m: int, n: int | None = None, hermitian: bool = False) -> AElement:
        """Gaussian entries; Hermitian samples are symmetrised as (M + M*)/2."""
        n = m if n is None else n
        blocks = []
        for s in self.block_sizes:
            x = rng.standard_normal((m * s, n * s)) + 1j * rng.standard_normal((m * s, n * s))
            if hermitian:
                x = 0.5 * (x + x.conj().T)
            blocks.append(x)
        return AElement(self, (m, n), tuple(blocks))

    def random_positive(self, rng: np.random.Generator, n: int, rank_deficient: bool = False) -> AElement:
        x = self.random(rng, n)
        if rank_deficient:
            # kill a random subset of the range so supports are nontrivial
            cols = []
            for b in x.blocks:
                keep = rng.random(b.shape[1]) < 0.5
                cols.append(b * keep)
            x = AElement(self, x.level, tuple(cols))
        return x.adjoint() @ x


@dataclass(frozen=True, eq=False)
class AElement:
    algebra: Algebra
    level: tuple[int, int]
    blocks: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        m, n = self.level
        if m < 0 or n < 0:
            raise ShapeMismatch(f"negative level {self.level}")
        if len(self.blocks) != self.algebra.k:
            raise ShapeMismatch(f"expected {self.algebra.k} blocks, got {len(self.blocks)}")
        frozen = []
        for b, s in zip(self.blocks, self.algebra.block_sizes):
            b = np.array(b, dtype=np.complex128)
            if b.shape != (m * s, n * s):
                raise ShapeMismatch(f"block of size {s} at level {self.level} must be {(m * s, n * s)}, got {b.shape}")
            b.setflags(write=False)
            frozen.append(b)
        object.__setattr__(self, "blocks", tuple(frozen))

    # -- structure -------------------------------------------------------
    @property
    def is_square(self) -> bool:
        return self.level[0] == self.level[1]

    def _check_same(self, other: AElement):
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")
        if self.level != other.level:
            raise ShapeMismatch(f"levels differ: {self.level} vs {other.level}")

    def _map(self, fn: Callable[[np.ndarray], np.ndarray], level=None) -> AElement:
        return AElement(self.algebra, self.level if level is None else level, tuple(fn(b) for b in self.blocks))

    def adjoint(self) -> AElement:
        return self._map(lambda b: b.conj().T, (self.level[1], self.level[0]))

    @property
    def H(self) -> AElement:
        return self.adjoint()

    def __add__(self, other: AElement) -> AElement:
        self._check_same(other)
        return AElement(self.algebra, self.level, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: AElement) -> AElement:
        self._check_same(other)
        return AElement(self.algebra, self.level, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> AElement:
        return self._map(lambda b: -b)

    def __mul__(self, scalar) -> AElement:
        return self._map(lambda b: scalar * b)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> AElement:
        return self._map(lambda b: b / scalar)

    def __matmul__(self, other: AElement) -> AElement:
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")
        if self.level[1] != other.level[0]:
            raise ShapeMismatch(f"cannot multiply levels {self.level} and {other.level}")
        return AElement(
            self.algebra, (self.level[0], other.level[1]), tuple(a @ b for a, b in zip(self.blocks, other.blocks))
        )

    def direct_sum(self, other: AElement) -> AElement:
        """v (+) w = [[v, 0], [0, w]]."""
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")
        level = (self.level[0] + other.level[0], self.level[1] + other.level[1])
        blocks = []
        for a, b in zip(self.blocks, other.blocks):
            out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.complex128)
            out[: a.shape[0], : a.shape[1]] = a
            out[a.shape[0] :, a.shape[1] :] = b
            blocks.append(out)
        return AElement(self.algebra, level, tuple(blocks))

    def pad(self, rows: int = 0, cols: int = 0) -> AElement:
        """Append zero rows/columns at the bottom/right (in A-matrix units)."""
        return self.direct_sum(self.algebra.zeros(rows, cols))

    def corner(self, m: int, n: int | None = None) -> AElement:
        """Upper-left m x n corner, i.e. the inverse of zero padding."""
        n = m if n is None else n
        return AElement(
            self.algebra, (m, n), tuple(b[: m * s, : n * s] for b, s in zip(self.blocks, self.algebra.block_sizes))
        )

    def entry(self, r: int, c: int) -> tuple[np.ndarray, ...]:
        """The (r, c) entry as an element of A, 0-based."""
        return tuple(
            b[r * s : (r + 1) * s, c * s : (c + 1) * s] for b, s in zip(self.blocks, self.algebra.block_sizes)
        )

    # -- numerics -------------------------------------------------------
    def fro(self) -> float:
        return float(np.sqrt(sum(linalg.fro(b) ** 2 for b in self.blocks)))

    def is_hermitian(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.is_square and all(linalg.hermitian_defect(b) <= tol.scaled(b) for b in self.blocks)

    def is_zero(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return all(linalg.fro(b) <= tol.eps for b in self.blocks)

    def close(self, other: AElement, tol: Tolerance = DEFAULT_TOL) -> bool:
        """Blockwise Frobenius distance within the scaled tolerance."""
        if self.algebra != other.algebra or self.level != other.level:
            return False
        return all(linalg.fro(a - b) <= tol.scaled(a, b) for a, b in zip(self.blocks, other.blocks))

    def distance(self, other: AElement) -> float:
        self._check_same(other)
        return max((linalg.fro(a - b) for a, b in zip(self.blocks, other.blocks)), default=0.0)

    def __repr__(self):
        return f"AElement({self.algebra}, level={self.level})"


def sum_of(elements: Sequence[AElement]) -> AElement:
    out = elements[0]
    for e in elements[1:]:
        out = out + e
    return out


def block_matrix(rows: Sequence[Sequence[AElement]]) -> AElement:
    """Assemble a block matrix over A from a grid of conformable elements."""
    alg = rows[0][0].algebra
    heights = [r[0].level[0] for r in rows]
    widths = [e.level[1] for e in rows[0]]
    blocks = []
    for i in range(alg.k):
        blocks.append(np.block([[e.blocks[i] for e in r] for r in rows]))
    return AElement(alg, (sum(heights), sum(widths)), tuple(blocks))


# -- order structure ------------------------------------------------------


def is_positive(v: AElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    if not v.is_square:
        raise ShapeMismatch(f"positivity needs a square level, got {v.level}")
    for b in v.blocks:
        if b.size == 0:
            continue
        if linalg.hermitian_defect(b) > tol.scaled(b):
            return False
        lam = linalg.hermitian_eig(b, tol).eigenvalues
        if lam[0] < -tol.scaled(b):
            return False
    return True


def abs(v: AElement, tol: Tolerance = DEFAULT_TOL) -> AElement:  # noqa: A001
    """|v|_{m,n} = (v* v)^(1/2), computed blockwise; a positive element at level (n, n)."""
    if v.is_square and v.is_hermitian(tol):
        return v._map(lambda b: linalg.matrix_abs(b, tol))
    return AElement(v.algebra, (v.level[1], v.level[1]), tuple(linalg.rect_abs(b, tol) for b in v.blocks))


def scalar_act(a, v: AElement, b) -> AElement:
    """a v b for scalar matrices a (r x m) and b (n x s)."""
    a = linalg.as_cmatrix(a)
    b = linalg.as_cmatrix(b)
    m, n = v.level
    if a.shape[1] != m or b.shape[0] != n:
        raise ShapeMismatch(f"cannot act by {a.shape} and {b.shape} on level {v.level}")
    blocks = tuple(
        np.kron(a, np.eye(s)) @ blk @ np.kron(b, np.eye(s)) for blk, s in zip(v.blocks, v.algebra.block_sizes)
    )
    return AElement(v.algebra, (a.shape[0], b.shape[1]), blocks)


def norm(v: AElement) -> float:
    """The matrix norm: max over blocks of the operator norm."""
    return max((linalg.op_norm(b) for b in v.blocks), default=0.0)


def norm_inf_formula(v: AElement, tol: Tolerance = NORM_TOL, iterations: int = 40) -> float:
    """inf{k > 0 : [[k e^n, v], [v*, k e^n]] is positive}, by bisection.

    Defined for square levels only; the bracket is [0, 2 * norm(v)].
    """
    if not v.is_square:
        raise ShapeMismatch(f"order unit norm needs a square level, got {v.level}")
    n = v.level[0]
    upper = 2.0 * norm(v)
    if upper == 0.0:
        return 0.0
    e = v.algebra.unit(n)
    lo, hi = 0.0, upper
    for _ in range(iterations):
        k = 0.5 * (lo + hi)
        if is_positive(block_matrix([[k * e, v], [v.adjoint(), k * e]]), tol):
            hi = k
        else:
            lo = k
    return hi


def _require_positive(*elements: AElement, tol: Tolerance):
    for u in elements:
        if not is_positive(u, tol):
            raise NotPositive(f"{u!r} is not positive")


def orthogonal(u: AElement, v: AElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    """u ⊥ v  iff  |u - v| = u + v (checked in operator norm)."""
    _require_positive(u, v, tol=tol)
    defect = norm(abs(u - v, tol) - (u + v))
    return defect <= tol.eps * (1.0 + norm(u) + norm(v))


def orthogonal_product(u: AElement, v: AElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Fast path: ||u v|| small.  Agrees with :func:`orthogonal` in a C*-algebra."""
    return norm(u @ v) <= tol.eps * (1.0 + norm(u) * norm(v))


def orthogonal_infty(u: AElement, v: AElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    """u ⊥_∞ v for nonzero positives, decided by ||u/||u|| + v/||v|| || <= 1."""
    _require_positive(u, v, tol=tol)
    nu, nv = norm(u), norm(v)
    if nu <= tol.eps or nv <= tol.eps:
        raise ZeroElement("⊥_∞ is decided for nonzero elements only")
    return norm(u / nu + v / nv) <= 1.0 + tol.eps


def orthogonal_infty_definition(u: AElement, v: AElement, tol: Tolerance = DEFAULT_TOL, grid: int = 9) -> bool:
    """||k1 u + k2 v|| = max(||k1 u||, ||k2 v||) on a grid of real (k1, k2)."""
    nu, nv = norm(u), norm(v)
    ks = np.linspace(-2.0, 2.0, grid)
    for k1 in ks:
        for k2 in ks:
            lhs = norm(k1 * u + k2 * v)
            rhs = max(np.abs(k1) * nu, np.abs(k2) * nv)
            if np.abs(lhs - rhs) > tol.eps * (1.0 + np.abs(k1) * nu + np.abs(k2) * nv):
                return False
    return True


def support_scaled(u: AElement, tol: Tolerance = DEFAULT_TOL) -> AElement:
    """lambda_min^+ (u) times the support projection of u; a positive element below u."""
    blocks, floor = [], np.inf
    for b in u.blocks:
        if b.size == 0:
            blocks.append(b)
            continue
        d = linalg.hermitian_eig(b, tol)
        keep = d.eigenvalues > tol.scaled(b)
        if keep.any():
            floor = min(floor, float(d.eigenvalues[keep].min()))
        q = d.eigenvectors[:, keep]
        blocks.append(q @ q.conj().T)
    if not np.isfinite(floor):
        return u.algebra.zeros(*u.level)
    return floor * AElement(u.algebra, u.level, tuple(blocks))


def orthogonal_infty_hereditary(
    u: AElement, v: AElement, rng: np.random.Generator | int = 0, samples: int = 50, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Sampled u ⊥_∞^a v: u1 ⊥_∞ v1 for dominated pairs 0 <= u1 <= u, 0 <= v1 <= v.

    The pair of scaled support projections is always tried; for projections
    ||P + Q|| = 1 + ||PQ||, so that pair alone detects any overlap.
    """
    _require_positive(u, v, tol=tol)
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    pairs = [(u, v), (support_scaled(u, tol), support_scaled(v, tol))]
    pairs += [(random_dominated(u, rng, tol), random_dominated(v, rng, tol)) for _ in range(samples)]
    for u1, v1 in pairs:
        if norm(u1) <= tol.eps or norm(v1) <= tol.eps:
            continue
        if not orthogonal_infty(u1, v1, tol):
            return False
    return True


def orthogonal_decompose(v: AElement, tol: Tolerance = DEFAULT_TOL) -> tuple[AElement, AElement]:
    """Split a self-adjoint v into orthogonal positive and negative parts."""
    if not v.is_hermitian(tol):
        raise NotHermitian(f"{v!r} is not self-adjoint")
    a = abs(v, tol)
    return 0.5 * (a + v), 0.5 * (a - v)


def random_isometry(rng: np.random.Generator, r: int, m: int) -> np.ndarray:
    """A Haar-ish r x m isometry (alpha* alpha = I_m), r >= m."""
    x = rng.standard_normal((r, m)) + 1j * rng.standard_normal((r, m))
    q, rr = np.linalg.qr(x)
    return q * (np.diag(rr) / np.abs(np.diag(rr)))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    return random_isometry(rng, n, n)


def leq(a: AElement, b: AElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    """a <= b in the matrix order."""
    return is_positive(b - a, tol)


def random_orthogonal_pair(alg: Algebra, rng: np.random.Generator, n: int) -> tuple[AElement, AElement]:
    """Positive u, v at level n with disjoint spectral supports in every block."""
    us, vs = [], []
    for s in alg.block_sizes:
        d = n * s
        q = random_unitary(rng, d)
        mask = rng.random(d) < 0.5
        lam = rng.uniform(0.1, 2.0, size=d)
        us.append((q * (lam * mask)) @ q.conj().T)
        vs.append((q * (rng.uniform(0.1, 2.0, size=d) * ~mask)) @ q.conj().T)
    return AElement(alg, (n, n), tuple(us)), AElement(alg, (n, n), tuple(vs))


def random_dominated(v: AElement, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL) -> AElement:
    """Some w with 0 <= w <= v, built as v^(1/2) c v^(1/2) for a positive contraction c."""
    blocks = []
    for b in v.blocks:
        root = linalg.psd_sqrt(b, tol)
        x = rng.standard_normal(b.shape) + 1j * rng.standard_normal(b.shape)
        c = x @ x.conj().T
        c = c / max(linalg.op_norm(c), 1e-300) * rng.uniform(0.0, 1.0)
        blocks.append(root @ c @ root)
    return AElement(v.algebra, v.level, tuple(blocks))


def check_axioms(alg: Algebra, trials: int, seed: int, tol: Tolerance = DEFAULT_TOL, max_level: int = 3):
    """Sample the axioms of an absolutely matrix ordered space on ``alg``.

    Every check is a theorem for C*-algebras, so a failure points at a bug in
    the implementation.  Returns a :class:`~amou_k0.report.Report`.
    """
    from .report import Report

    if trials < 1:
        raise ValueError("trials must be at least 1")
    rep = Report(f"axioms on {alg}")

    def close(a, b):
        return a.close(b, tol)

    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        m, n, r, s = (int(x) for x in rng.integers(1, max_level + 1, size=4))
        where = f"trial {t}, levels m={m} n={n} r={r} s={s}"

        # absolutely ordered space at level n
        h = alg.random(rng, n, hermitian=True)
        p = alg.random_positive(rng, n)
        k = float(rng.uniform(-3, 3))
        ah = abs(h, tol)
        rep.record("ordered: |v| = v on positives", close(abs(p, tol), p), where)
        rep.record("ordered: |v| ± v >= 0", is_positive(ah + h, tol) and is_positive(ah - h, tol), where)
        rep.record("ordered: |kv| = |k||v|", close(abs(k * h, tol), np.abs(k) * ah), f"{where}, k={k:.6g}")
        u, v = random_orthogonal_pair(alg, rng, n)
        w = random_dominated(v, rng, tol)
        rep.record(
            "ordered: u ⊥ v, 0 <= w <= v  =>  u ⊥ w",
            orthogonal(u, v, tol) and orthogonal(u, w, tol),
            where,
        )
        w2 = random_dominated(v, rng, tol) - random_dominated(v, rng, tol)
        # any w2 supported under v is orthogonal to u after taking |.|
        vw_plus, vw_minus = abs(v + w2, tol), abs(v - w2, tol)
        rep.record(
            "ordered: u ⊥ v, u ⊥ w  =>  u ⊥ |v ± w|",
            orthogonal(u, abs(w2, tol), tol) and orthogonal(u, vw_plus, tol) and orthogonal(u, vw_minus, tol),
            where,
        )

        # |alpha v beta| <= ||alpha|| ||v| beta|
        x = alg.random(rng, m, n)
        rr = r if t % 4 else m
        alpha = np.eye(m) if t % 4 == 0 else rng.standard_normal((rr, m)) + 1j * rng.standard_normal((rr, m))
        beta = rng.standard_normal((n, s)) + 1j * rng.standard_normal((n, s))
        lhs = abs(scalar_act(alpha, x, beta), tol)
        rhs = linalg.op_norm(alpha) * abs(scalar_act(np.eye(n), abs(x, tol), beta), tol)
        rep.record("contraction: |a v b| <= ||a|| ||v| b|", leq(lhs, rhs, tol), where)

        # |v (+) w| = |v| (+) |w|
        y = alg.random(rng, r, s)
        rep.record(
            "direct sum: |v (+) w| = |v| (+) |w|",
            close(abs(x.direct_sum(y), tol), abs(x, tol).direct_sum(abs(y, tol))),
            where,
        )

        # consequences
        iso = random_isometry(rng, m + r, m)
        rep.record("isometry: |a v| = |v|", close(abs(scalar_act(iso, x, np.eye(n)), tol), abs(x, tol)), where)
        off = block_matrix([[alg.zeros(m), x], [x.adjoint(), alg.zeros(n)]])
        rep.record(
            "off-diagonal: |[[0, v], [v*, 0]]| = |v*| (+) |v|",
            close(abs(off, tol), abs(x.adjoint(), tol).direct_sum(abs(x, tol))),
            where,
        )
        big = block_matrix([[abs(x.adjoint(), tol), x], [x.adjoint(), abs(x, tol)]])
        rep.record("positivity: [[|v*|, v], [v*, |v|]] >= 0", is_positive(big, tol), where)
        col = block_matrix([[x], [alg.zeros(r, n)]])
        rep.record("padding: |[v; 0]| = |v|", close(abs(col, tol), abs(x, tol)), where)
        row = block_matrix([[x, alg.zeros(m, s)]])
        rep.record(
            "padding: |[v, 0]| = |v| (+) 0", close(abs(row, tol), abs(x, tol).direct_sum(alg.zeros(s))), where
        )
    return rep
