"""The matricial direct limit M_∞(A) as an F-bimodule.

``F`` is the algebra of infinite complex matrices with finitely many nonzero
entries.  A limit element is stored trimmed to its order ``o(v)``, the smallest
``N`` with ``i_N v i_N = v``; the corner embeddings ``v -> v (+) 0`` are thereby
quotiented out and equality is payload equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import amou, linalg
from .amou import AElement, Algebra
from .errors import AlgebraMismatch, LevelTooSmall, ShapeMismatch
from .linalg import DEFAULT_TOL, NORM_TOL, Tolerance


class FMatrix:
    """A finitely supported infinite matrix, 1-based indices."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[tuple[int, int], complex] | None = None):
        clean = {}
        for (i, j), z in (entries or {}).items():
            if i < 1 or j < 1:
                raise ValueError(f"F-matrix indices are 1-based, got {(i, j)}")
            if z != 0:
                clean[(int(i), int(j))] = complex(z)
        self._entries = clean

    @classmethod
    def unit(cls, i: int, j: int) -> FMatrix:
        return cls({(i, j): 1.0})

    @classmethod
    def identity(cls, n: int) -> FMatrix:
        """i_n = e_11 + ... + e_nn."""
        return cls({(i, i): 1.0 for i in range(1, n + 1)})

    @classmethod
    def shift(cls, n: int) -> FMatrix:
        """J_n = sum_{i<=n} e_{i, n+i}."""
        return cls({(i, n + i): 1.0 for i in range(1, n + 1)})

    @classmethod
    def diagonal(cls, indices) -> FMatrix:
        return cls({(i, i): 1.0 for i in indices})

    @classmethod
    def from_array(cls, a) -> FMatrix:
        a = np.asarray(a)
        return cls({(i + 1, j + 1): a[i, j] for i, j in zip(*np.nonzero(a))})

    @property
    def entries(self) -> dict[tuple[int, int], complex]:
        return dict(self._entries)

    @property
    def order(self) -> int:
        return max((max(i, j) for i, j in self._entries), default=0)

    def to_array(self, n: int | None = None) -> np.ndarray:
        n = self.order if n is None else n
        if n < self.order:
            raise LevelTooSmall(f"F-matrix of order {self.order} does not fit in {n} x {n}")
        out = np.zeros((n, n), dtype=np.complex128)
        for (i, j), z in self._entries.items():
            out[i - 1, j - 1] = z
        return out

    def adjoint(self) -> FMatrix:
        return FMatrix({(j, i): z.conjugate() for (i, j), z in self._entries.items()})

    def __matmul__(self, other: FMatrix) -> FMatrix:
        out: dict[tuple[int, int], complex] = {}
        for (i, j), a in self._entries.items():
            for (k, l), b in other._entries.items():
                if j == k:
                    out[(i, l)] = out.get((i, l), 0) + a * b
        return FMatrix(out)

    def __add__(self, other: FMatrix) -> FMatrix:
        out = dict(self._entries)
        for key, z in other._entries.items():
            out[key] = out.get(key, 0) + z
        return FMatrix(out)

    def __sub__(self, other: FMatrix) -> FMatrix:
        return self + (-1) * other

    def __mul__(self, scalar) -> FMatrix:
        return FMatrix({k: scalar * z for k, z in self._entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, FMatrix) and self._entries == other._entries

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def norm(self) -> float:
        return linalg.op_norm(self.to_array()) if self._entries else 0.0

    def is_local_unitary(self, tol: float = 1e-12) -> bool:
        a = self.to_array()
        n = a.shape[0]
        return n > 0 and np.allclose(a.conj().T @ a, np.eye(n), atol=tol) and np.allclose(a @ a.conj().T, np.eye(n), atol=tol)

    def __repr__(self):
        return f"FMatrix({self._entries})"


def _trim_order(v: AElement, threshold: float) -> int:
    n = v.level[0]
    sizes = v.algebra.block_sizes
    while n > 0:
        r = n - 1
        boundary = 0.0
        for b, s in zip(v.blocks, sizes):
            lo, hi = r * s, n * s
            if b.size:
                boundary = max(boundary, np.max(np.abs(b[lo:hi, : hi])), np.max(np.abs(b[: hi, lo:hi])))
        if boundary >= threshold:
            break
        n -= 1
    return n


@dataclass(frozen=True, eq=False)
class LimitElement:
    """An element of M_∞(A), kept at the level equal to its order."""

    payload: AElement

    @property
    def algebra(self) -> Algebra:
        return self.payload.algebra

    @property
    def order(self) -> int:
        return self.payload.level[0]

    def at_level(self, n: int) -> AElement:
        """T_n^{-1}(v): the representative in M_n(A), n >= o(v)."""
        if n < self.order:
            raise LevelTooSmall(f"element of order {self.order} has no representative at level {n}")
        return self.payload.pad(n - self.order, n - self.order)

    def adjoint(self) -> LimitElement:
        return LimitElement(self.payload.adjoint())

    def _common(self, other: LimitElement) -> int:
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")
        return max(self.order, other.order)

    def __add__(self, other: LimitElement) -> LimitElement:
        n = self._common(other)
        return lift(self.at_level(n) + other.at_level(n))

    def __sub__(self, other: LimitElement) -> LimitElement:
        n = self._common(other)
        return lift(self.at_level(n) - other.at_level(n))

    def __neg__(self) -> LimitElement:
        return LimitElement(-self.payload)

    def __mul__(self, scalar) -> LimitElement:
        return lift(scalar * self.payload)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, LimitElement)
            and self.algebra == other.algebra
            and self.order == other.order
            and all(np.array_equal(a, b) for a, b in zip(self.payload.blocks, other.payload.blocks))
        )

    __hash__ = None

    def close(self, other: LimitElement, tol: Tolerance = DEFAULT_TOL) -> bool:
        n = self._common(other)
        return self.at_level(n).close(other.at_level(n), tol)

    def __repr__(self):
        return f"LimitElement({self.algebra}, order={self.order})"


def lift(v: AElement, tol: Tolerance = DEFAULT_TOL) -> LimitElement:
    """T_n(v) for square v, trimmed to its canonical order.

    A boundary row/column counts as zero when all of its entries are below
    half the tolerance.
    """
    if not v.is_square:
        raise ShapeMismatch(f"only square levels embed in the limit, got {v.level}")
    order = _trim_order(v, 0.5 * tol.eps)
    return LimitElement(v.corner(order))


def zero(alg: Algebra) -> LimitElement:
    return LimitElement(alg.zeros(0))


def local_unit(alg: Algebra, n: int = 1) -> LimitElement:
    """e^n embedded in the limit; the local order unit is e = local_unit(alg, 1)."""
    return LimitElement(alg.unit(n))


def f_act(a: FMatrix, v: LimitElement, b: FMatrix, tol: Tolerance = DEFAULT_TOL) -> LimitElement:
    """The bimodule action a v b."""
    n = max(a.order, v.order, b.order)
    return lift(amou.scalar_act(a.to_array(n), v.at_level(n), b.to_array(n)), tol)


def is_positive(v: LimitElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    return amou.is_positive(v.payload, tol)


def leq(u: LimitElement, v: LimitElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    return is_positive(v - u, tol)


def abs_limit(v: LimitElement, tol: Tolerance = DEFAULT_TOL) -> LimitElement:
    """|v| = T_o(|T_o^{-1}(v)|) with o = o(v)."""
    return lift(amou.abs(v.payload, tol), tol)


def pair_plus(v1: LimitElement, v2: LimitElement, n: int, tol: Tolerance = DEFAULT_TOL) -> LimitElement:
    """(v1, v2)_n^+ = v1 + J_n* v2 J_n."""
    if n < max(v1.order, v2.order):
        raise LevelTooSmall(f"level {n} is below the orders {v1.order}, {v2.order}")
    j = FMatrix.shift(n)
    return v1 + f_act(j.adjoint(), v2, j, tol)


def sa_n(v: LimitElement, n: int, tol: Tolerance = DEFAULT_TOL) -> LimitElement:
    """sa_n(v) = i_n v J_n + J_n* v* i_n."""
    if n < v.order:
        raise LevelTooSmall(f"level {n} is below the order {v.order}")
    i, j = FMatrix.identity(n), FMatrix.shift(n)
    return f_act(i, v, j, tol) + f_act(j.adjoint(), v.adjoint(), i, tol)


def limit_norm(v: LimitElement, tol: Tolerance = NORM_TOL, iterations: int = 40) -> float:
    """inf{k > 0 : (k e^o, k e^o)_o^+ + sa_o(v) is positive}, o = o(v), by bisection."""
    o = v.order
    if o == 0:
        return 0.0
    e = local_unit(v.algebra, o)
    s = sa_n(v, o, tol)
    hi = 2.0 * amou.norm(v.payload)
    lo = 0.0
    if hi == 0.0:
        return 0.0
    for _ in range(iterations):
        k = 0.5 * (lo + hi)
        if is_positive(pair_plus(k * e, k * e, o, tol) + s, tol):
            hi = k
        else:
            lo = k
    return hi


def norm(v: LimitElement) -> float:
    """Blockwise operator norm of the payload (equal to :func:`limit_norm`)."""
    return amou.norm(v.payload)


def support_indices(v: LimitElement, tol: Tolerance = DEFAULT_TOL) -> set[int]:
    """1-based indices r such that row r or column r of v is nonzero."""
    idx = set()
    sizes = v.algebra.block_sizes
    for r in range(v.order):
        for b, s in zip(v.payload.blocks, sizes):
            lo, hi = r * s, (r + 1) * s
            if np.max(np.abs(b[lo:hi, :]), initial=0.0) >= 0.5 * tol.eps or np.max(
                np.abs(b[:, lo:hi]), initial=0.0
            ) >= 0.5 * tol.eps:
                idx.add(r + 1)
                break
    return idx


def f_independent(
    u: LimitElement, v: LimitElement, tol: Tolerance = DEFAULT_TOL
) -> tuple[FMatrix, FMatrix] | None:
    """Diagonal projections r, s on disjoint index sets with r u r = u, s v s = v."""
    iu, iv = support_indices(u, tol), support_indices(v, tol)
    if iu & iv:
        return None
    return FMatrix.diagonal(sorted(iu)), FMatrix.diagonal(sorted(iv))
