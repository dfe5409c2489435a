"""Order projections, partial isometries and their equivalences.

A self-adjoint ``p`` is an order projection when ``|2p - e^n| = e^n``; in the
C*-model that is a spectrum inside {0, 1}.  Accepted projections are snapped to
their exact spectral projection so that tolerance does not drift through
chains of direct sums.

Equivalence ``p ~ q`` (p at level m, q at level n) is witnessed by a partial
isometry ``v`` in ``M_{m,n}(A)`` with ``|v*| = p`` and ``|v| = q``.  In this
model it is decided by per-block ranks, and witnesses are assembled from
orthonormal range bases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import amou, linalg
from .amou import AElement, Algebra
from .errors import NotProjection, PreconditionFailed, ShapeMismatch
from .linalg import DEFAULT_TOL, Tolerance


def _spectrum_ok(v: AElement, tol: Tolerance) -> bool:
    if not v.is_hermitian(tol):
        return False
    for b in v.blocks:
        if b.size == 0:
            continue
        lam = linalg.hermitian_eig(b, tol).eigenvalues
        if np.any(np.minimum(np.abs(lam), np.abs(lam - 1.0)) > tol.snap):
            return False
    return True


def is_order_projection(v: AElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Hermitian with every block eigenvalue within ``tol.snap`` of {0, 1}."""
    return v.is_square and _spectrum_ok(v, tol)


def is_order_projection_by_definition(v: AElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    """v* = v and |2v - e^n| = e^n, checked directly."""
    if not v.is_square or not v.is_hermitian(tol):
        return False
    e = v.algebra.unit(v.level[0])
    defect = amou.abs(2.0 * v - e, tol) - e
    return all(linalg.fro(b) <= tol.scaled(b0) for b, b0 in zip(defect.blocks, v.blocks))


def _range_basis(b: np.ndarray, tol: Tolerance) -> np.ndarray:
    if b.size == 0:
        return np.zeros((b.shape[0], 0), dtype=np.complex128)
    d = linalg.hermitian_eig(b, tol)
    return d.eigenvectors[:, d.eigenvalues > 0.5]


@dataclass(frozen=True, eq=False)
class OrderProjection:
    element: AElement

    def __post_init__(self):
        if not self.element.is_square:
            raise ShapeMismatch(f"projections live at square levels, got {self.element.level}")

    @classmethod
    def from_element(cls, v: AElement, tol: Tolerance = DEFAULT_TOL) -> OrderProjection:
        """Validate and snap to the exact spectral projection."""
        if not is_order_projection(v, tol):
            raise NotProjection(f"{v!r} is not an order projection")
        blocks = []
        for b in v.blocks:
            q = _range_basis(b, tol)
            blocks.append(q @ q.conj().T)
        return cls(AElement(v.algebra, v.level, tuple(blocks)))

    @classmethod
    def diagonal(cls, alg: Algebra, level: int, ranks) -> OrderProjection:
        """Canonical 0/1 diagonal projection with ``ranks[i]`` ones top-left in block i."""
        blocks = []
        for r, s in zip(ranks, alg.block_sizes):
            d = level * s
            if not 0 <= r <= d:
                raise ValueError(f"rank {r} does not fit in a block of dimension {d}")
            blocks.append(np.diag(np.r_[np.ones(r), np.zeros(d - r)]).astype(np.complex128))
        return cls(AElement(alg, (level, level), tuple(blocks)))

    @classmethod
    def zero(cls, alg: Algebra, level: int = 1) -> OrderProjection:
        return cls(alg.zeros(level))

    @classmethod
    def unit(cls, alg: Algebra, level: int = 1) -> OrderProjection:
        return cls(alg.unit(level))

    @property
    def algebra(self) -> Algebra:
        return self.element.algebra

    @property
    def level(self) -> int:
        return self.element.level[0]

    def direct_sum(self, other: OrderProjection) -> OrderProjection:
        return OrderProjection(self.element.direct_sum(other.element))

    def pad(self, n: int) -> OrderProjection:
        return OrderProjection(self.element.pad(n, n))

    def complement(self) -> OrderProjection:
        return OrderProjection(self.algebra.unit(self.level) - self.element)

    def __add__(self, other: OrderProjection) -> OrderProjection:
        """p + q for orthogonal projections at the same level."""
        return OrderProjection.from_element(self.element + other.element)

    def __repr__(self):
        return f"OrderProjection({self.algebra}, level={self.level}, ranks={rank_vector(self)})"


def as_projection(p, tol: Tolerance = DEFAULT_TOL) -> OrderProjection:
    if isinstance(p, OrderProjection):
        return p
    return OrderProjection.from_element(p, tol)


def rank_vector(p, tol: Tolerance = DEFAULT_TOL) -> tuple[int, ...]:
    """Per-block number of eigenvalues in (0.5, 1.5)."""
    p = as_projection(p, tol)
    out = []
    for b in p.element.blocks:
        if b.size == 0:
            out.append(0)
            continue
        lam = linalg.hermitian_eig(b, tol).eigenvalues
        out.append(int(np.sum((lam > 0.5) & (lam < 1.5))))
    return tuple(out)


def is_partial_isometry(v: AElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    return is_order_projection(amou.abs(v, tol), tol) and is_order_projection(amou.abs(v.adjoint(), tol), tol)


@dataclass(frozen=True, eq=False)
class EquivWitness:
    """A partial isometry v with |v*| = p and |v| = q."""

    v: AElement
    p: OrderProjection
    q: OrderProjection

    def verify(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return amou.abs(self.v.adjoint(), tol).close(self.p.element, tol) and amou.abs(self.v, tol).close(
            self.q.element, tol
        )


def _witness(p: OrderProjection, q: OrderProjection, tol: Tolerance) -> AElement:
    blocks = []
    for bp, bq in zip(p.element.blocks, q.element.blocks):
        left = _range_basis(bp, tol)
        right = _range_basis(bq, tol)
        blocks.append(left @ right.conj().T)
    return AElement(p.algebra, (p.level, q.level), tuple(blocks))


def equivalent(p, q, tol: Tolerance = DEFAULT_TOL) -> EquivWitness | None:
    """A witness of p ~ q, or None when the rank vectors differ.

    The witness lives in ``M_{m,n}(A)`` for p at level m and q at level n, so no
    padding is needed for different levels.
    """
    p, q = as_projection(p, tol), as_projection(q, tol)
    if p.algebra != q.algebra or rank_vector(p, tol) != rank_vector(q, tol):
        return None
    return EquivWitness(_witness(p, q, tol), p, q)


def stably_equivalent(p, q, tol: Tolerance = DEFAULT_TOL) -> tuple[int, EquivWitness] | None:
    """p ≈ q, witnessed by p (+) e ~ q (+) e (stabilisation with m = 1)."""
    p, q = as_projection(p, tol), as_projection(q, tol)
    if p.algebra != q.algebra:
        return None
    e = OrderProjection.unit(p.algebra)
    w = equivalent(p.direct_sum(e), q.direct_sum(e), tol)
    if w is None:
        return None
    return 1, w


def condition_T_witness(u: AElement, v: AElement, tol: Tolerance = DEFAULT_TOL) -> AElement:
    """Given partial isometries u (m x n), v (l x n) with |u| = |v|, return w (m x l)
    with |w*| = |u*| and |w| = |v*|, built from the polar factors as w = U V*.
    """
    if u.level[1] != v.level[1] or u.algebra != v.algebra:
        raise PreconditionFailed(f"levels {u.level} and {v.level} do not share a column count")
    if not (is_partial_isometry(u, tol) and is_partial_isometry(v, tol)):
        raise PreconditionFailed("both inputs must be partial isometries")
    if not amou.abs(u, tol).close(amou.abs(v, tol), tol):
        raise PreconditionFailed("|u| != |v|")
    blocks = []
    for bu, bv in zip(u.blocks, v.blocks):
        wu, _ = linalg.polar(bu, tol)
        wv, _ = linalg.polar(bv, tol)
        blocks.append(wu @ wv.conj().T)
    return AElement(u.algebra, (u.level[0], v.level[0]), tuple(blocks))


def random_projection(alg: Algebra, rng: np.random.Generator, level: int, ranks=None) -> OrderProjection:
    """A Haar-rotated projection with the given (or random) per-block ranks."""
    blocks = []
    for i, s in enumerate(alg.block_sizes):
        d = level * s
        r = int(rng.integers(0, d + 1)) if ranks is None else int(ranks[i])
        q = amou.random_unitary(rng, d)[:, :r]
        blocks.append(q @ q.conj().T)
    return OrderProjection(AElement(alg, (level, level), tuple(blocks)))


def random_subprojection(p: OrderProjection, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL) -> OrderProjection:
    """A random q <= p: a random subspace of range(p) in every block."""
    blocks = []
    for b in p.element.blocks:
        basis = _range_basis(b, tol)
        r = basis.shape[1]
        keep = int(rng.integers(0, r + 1))
        rot = amou.random_unitary(rng, r)[:, :keep] if r else np.zeros((0, 0))
        sub = basis @ rot
        blocks.append(sub @ sub.conj().T)
    return OrderProjection(AElement(p.algebra, p.element.level, tuple(blocks)))


def is_finite(p, rng: np.random.Generator | int = 0, samples: int = 20, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Sampled finiteness: every sampled q <= p with q ~ p must equal p."""
    p = as_projection(p, tol)
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    candidates = [p] + [random_subprojection(p, rng, tol) for _ in range(samples)]
    for q in candidates:
        if not amou.leq(q.element, p.element, tol):
            continue
        if equivalent(q, p, tol) is not None and not q.element.close(p.element, tol):
            return False
    return True
