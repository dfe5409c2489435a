"""K_0 of a finite-dimensional C*-algebra model.

Classes of projections modulo ≈ are rank vectors; the monoid is cancellative,
so the Grothendieck group is Z^k and a formal difference [(p, q)] is stored as
``rank(p) - rank(q)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .amou import Algebra
from .errors import AlgebraMismatch
from .linalg import DEFAULT_TOL, Tolerance
from .projlattice import OrderProjection, as_projection, is_finite, rank_vector, stably_equivalent


@dataclass(frozen=True)
class K0Class:
    """[p] in OP_∞(A)/≈."""

    algebra: Algebra
    ranks: tuple[int, ...]

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        if len(ranks) != self.algebra.k or any(r < 0 for r in ranks):
            raise ValueError(f"invalid rank vector {self.ranks!r} for {self.algebra}")
        object.__setattr__(self, "ranks", ranks)

    def __add__(self, other: K0Class) -> K0Class:
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")
        return K0Class(self.algebra, tuple(a + b for a, b in zip(self.ranks, other.ranks)))

    def representative(self) -> OrderProjection:
        """Canonical diagonal projection, ones filled top-left in each block."""
        level = max(1, max(math.ceil(r / s) for r, s in zip(self.ranks, self.algebra.block_sizes)))
        return OrderProjection.diagonal(self.algebra, level, self.ranks)

    def element(self) -> K0Element:
        return K0Element(self.algebra, self.ranks)


@dataclass(frozen=True)
class K0Element:
    """[(p, q)] in K_0(A), stored as rank(p) - rank(q)."""

    algebra: Algebra
    diff: tuple[int, ...]

    def __post_init__(self):
        diff = tuple(int(d) for d in self.diff)
        if len(diff) != self.algebra.k:
            raise ValueError(f"expected {self.algebra.k} components, got {len(diff)}")
        object.__setattr__(self, "diff", diff)

    @classmethod
    def from_pair(cls, p, q, tol: Tolerance = DEFAULT_TOL) -> K0Element:
        p, q = as_projection(p, tol), as_projection(q, tol)
        if p.algebra != q.algebra:
            raise AlgebraMismatch(f"{p.algebra} vs {q.algebra}")
        return cls(p.algebra, tuple(a - b for a, b in zip(rank_vector(p, tol), rank_vector(q, tol))))

    @classmethod
    def zero(cls, alg: Algebra) -> K0Element:
        return cls(alg, (0,) * alg.k)

    def _same(self, other: K0Element):
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")

    def __add__(self, other: K0Element) -> K0Element:
        self._same(other)
        return K0Element(self.algebra, tuple(a + b for a, b in zip(self.diff, other.diff)))

    def __neg__(self) -> K0Element:
        return K0Element(self.algebra, tuple(-a for a in self.diff))

    def __sub__(self, other: K0Element) -> K0Element:
        return self + (-other)

    def __mul__(self, n: int) -> K0Element:
        return K0Element(self.algebra, tuple(n * a for a in self.diff))

    __rmul__ = __mul__

    def is_positive(self) -> bool:
        return all(a >= 0 for a in self.diff)

    def __le__(self, other: K0Element) -> bool:
        self._same(other)
        return (other - self).is_positive()

    def __ge__(self, other: K0Element) -> bool:
        return other <= self

    def pair(self) -> tuple[OrderProjection, OrderProjection]:
        """A representative (p, q) with [(p, q)] = self: positive and negative parts."""
        plus = K0Class(self.algebra, tuple(max(a, 0) for a in self.diff))
        minus = K0Class(self.algebra, tuple(max(-a, 0) for a in self.diff))
        return plus.representative(), minus.representative()


def class_of(p, tol: Tolerance = DEFAULT_TOL) -> K0Class:
    """χ(p) = [p]."""
    p = as_projection(p, tol)
    return K0Class(p.algebra, rank_vector(p, tol))


def pairs_equivalent(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    """(p1, q1) ≡ (p2, q2)  iff  p1 (+) q2 ≈ p2 (+) q1."""
    (p1, q1), (p2, q2) = a, b
    left = as_projection(p1, tol).direct_sum(as_projection(q2, tol))
    right = as_projection(p2, tol).direct_sum(as_projection(q1, tol))
    return stably_equivalent(left, right, tol) is not None


def _from_pair(g: K0Element) -> K0Element:
    p, q = g.pair()
    return class_of(p).element() - class_of(q).element()


def order_unit_bound(g: K0Element) -> int:
    """Smallest n with -n[e] <= g <= n[e]."""
    return max((math.ceil(abs(d) / s) for d, s in zip(g.diff, g.algebra.block_sizes)), default=0)


@dataclass
class K0Group:
    algebra: Algebra
    order_unit: K0Element = field(init=False)
    finite_units: bool = True
    verified: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        self.order_unit = K0Element(self.algebra, self.algebra.block_sizes)

    @property
    def k(self) -> int:
        return self.algebra.k

    def generators(self) -> list[K0Element]:
        return [K0Element(self.algebra, tuple(int(i == j) for j in range(self.k))) for i in range(self.k)]

    def in_cone(self, g: K0Element) -> bool:
        if g.algebra != self.algebra:
            raise AlgebraMismatch(f"{g.algebra} vs {self.algebra}")
        return g.is_positive()

    def describe(self) -> str:
        group = "Z" if self.k == 1 else f"Z^{self.k}"
        cone = "Z+" if self.k == 1 else f"Z+^{self.k}"
        unit = ",".join(str(n) for n in self.algebra.block_sizes)
        return f"K0 = {group}, cone {cone}, unit [{unit}]"


def k0_of(alg: Algebra, tol: Tolerance = DEFAULT_TOL, finiteness_levels: int = 4, seed: int = 0) -> K0Group:
    """Build (K_0(A), K_0(A)^+, [e]) and verify group and cone laws on generators.

    Properness of the cone is only asserted when the sampled finiteness check
    on e^n, n <= ``finiteness_levels``, passes.
    """
    g = K0Group(alg)
    rng = np.random.default_rng(seed)
    g.finite_units = all(
        is_finite(OrderProjection.unit(alg, n), rng, tol=tol) for n in range(1, finiteness_levels + 1)
    )
    gens = g.generators()
    zero = K0Element.zero(alg)
    v = g.verified
    v["identity"] = all(x + zero == x for x in gens)
    v["inverse"] = all(x + (-x) == zero for x in gens)
    v["commutative"] = all(x + y == y + x for x in gens for y in gens)
    v["associative"] = all((x + y) + z == x + (y + z) for x in gens for y in gens for z in gens)
    v["cone contains 0"] = g.in_cone(zero)
    v["cone + cone in cone"] = all(g.in_cone(x + y) for x in gens for y in gens)
    v["cone generates"] = all(_from_pair(x) == x for x in gens + [-x for x in gens])
    if g.finite_units:
        v["cone is proper"] = all(not (g.in_cone(x) and g.in_cone(-x)) for x in gens)
    v["generators realised by projections"] = all(
        class_of(K0Class(alg, x.diff).representative()).element() == x for x in gens
    )
    v["order unit is a class"] = class_of(OrderProjection.unit(alg)).element() == g.order_unit
    return g
