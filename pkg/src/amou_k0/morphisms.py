"""Completely |.|-preserving maps between algebra models and K_0 of maps.

Every *-homomorphism between finite-dimensional C*-algebras is, up to unitary
conjugation in each target block, a block-diagonal repetition of the source
blocks.  A :class:`MorphismSpec` records exactly that data: a multiplicity
matrix ``M`` (target blocks x source blocks) and one conjugating unitary per
target block.  Sums of orthogonal maps are :class:`SumMap` values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from . import amou, linalg
from .amou import AElement, Algebra
from .errors import AlgebraMismatch, NotOrthogonal, NotProjectionPreserving, ShapeMismatch
from .k0 import K0Element, class_of
from .linalg import DEFAULT_TOL, Tolerance
from .projlattice import OrderProjection, is_order_projection
from .report import Report


class Map(Protocol):
    source: Algebra
    target: Algebra

    def apply(self, v: AElement) -> AElement: ...


@dataclass(frozen=True, eq=False)
class MorphismSpec:
    source: Algebra
    target: Algebra
    multiplicity: np.ndarray
    conjugators: tuple[np.ndarray, ...] = field(default=())

    def __post_init__(self):
        mult = np.array(self.multiplicity, dtype=np.int64).reshape(self.target.k, self.source.k)
        if np.any(mult < 0):
            raise ValueError("multiplicities must be nonnegative")
        mult.setflags(write=False)
        object.__setattr__(self, "multiplicity", mult)
        conj = self.conjugators or tuple(np.eye(m) for m in self.target.block_sizes)
        if len(conj) != self.target.k:
            raise ShapeMismatch(f"expected {self.target.k} conjugators, got {len(conj)}")
        frozen = []
        for u, m in zip(conj, self.target.block_sizes):
            u = np.array(u, dtype=np.complex128)
            if u.shape != (m, m):
                raise ShapeMismatch(f"conjugator for a block of size {m} must be {m} x {m}, got {u.shape}")
            u.setflags(write=False)
            frozen.append(u)
        object.__setattr__(self, "conjugators", tuple(frozen))
        if np.any(self.zero_pad < 0):
            raise ValueError(f"multiplicities overflow the target blocks: pads {self.zero_pad.tolist()}")

    @classmethod
    def identity(cls, alg: Algebra) -> MorphismSpec:
        return cls(alg, alg, np.eye(alg.k, dtype=np.int64))

    @classmethod
    def zero(cls, source: Algebra, target: Algebra) -> MorphismSpec:
        return cls(source, target, np.zeros((target.k, source.k), dtype=np.int64))

    @property
    def zero_pad(self) -> np.ndarray:
        used = self.multiplicity @ np.array(self.source.block_sizes)
        return np.array(self.target.block_sizes) - used

    @property
    def unital(self) -> bool:
        return bool(np.all(self.zero_pad == 0))

    def conjugators_unitary(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return all(linalg.fro(u.conj().T @ u - np.eye(u.shape[0])) <= tol.scaled(u) for u in self.conjugators)

    def apply(self, v: AElement) -> AElement:
        """phi_n(v), blockwise U_j (copies of the source blocks (+) 0) U_j*."""
        if v.algebra != self.source:
            raise AlgebraMismatch(f"map is defined on {self.source}, got an element of {v.algebra}")
        a, b = v.level
        cells = [blk.reshape(a, n, b, n) for blk, n in zip(v.blocks, self.source.block_sizes)]
        out = []
        for j, m in enumerate(self.target.block_sizes):
            s = np.zeros((a, m, b, m), dtype=np.complex128)
            off = 0
            for i, n in enumerate(self.source.block_sizes):
                for _ in range(self.multiplicity[j, i]):
                    s[:, off : off + n, :, off : off + n] = cells[i]
                    off += n
            u = self.conjugators[j]
            s = s.reshape(a * m, b * m)
            out.append(np.kron(np.eye(a), u) @ s @ np.kron(np.eye(b), u).conj().T)
        return AElement(self.target, (a, b), tuple(out))

    __call__ = apply

    def inverse(self) -> MorphismSpec:
        """Inverse of an isomorphism (a block permutation with unitary conjugation)."""
        mult = self.multiplicity
        square = mult.shape[0] == mult.shape[1]
        if not (square and self.unital and np.all(mult.sum(axis=0) == 1) and np.all(mult.sum(axis=1) == 1)):
            raise ValueError("only isomorphisms (permutation multiplicities, unital) are invertible")
        conj = [None] * self.source.k
        for j in range(self.target.k):
            i = int(np.argmax(mult[j]))
            conj[i] = self.conjugators[j].conj().T
        return MorphismSpec(self.target, self.source, mult.T.copy(), tuple(conj))

    def __repr__(self):
        return f"MorphismSpec({self.source} -> {self.target}, mult={self.multiplicity.tolist()})"


def compose(psi: MorphismSpec, phi: MorphismSpec) -> MorphismSpec:
    """psi ∘ phi as a spec: multiplicities multiply, conjugators are rebuilt.

    Inside target block j of psi the nested layout is: for each middle block l
    and each of its copies, the segments of phi's canonical layout (itself
    conjugated by phi's unitary) and phi's pad; then psi's pad.  A permutation
    takes the composite's canonical layout to that nested one.
    """
    if psi.source != phi.target:
        raise AlgebraMismatch(f"cannot compose {psi} after {phi}")
    mult = psi.multiplicity @ phi.multiplicity
    src_sizes = phi.source.block_sizes
    conj = []
    for j, m in enumerate(psi.target.block_sizes):
        # nested segments: (source block or None for padding, size)
        segments: list[tuple[int | None, int]] = []
        dilation = np.zeros((m, m), dtype=np.complex128)
        off = 0
        for l, ml in enumerate(phi.target.block_sizes):
            for _ in range(psi.multiplicity[j, l]):
                dilation[off : off + ml, off : off + ml] = phi.conjugators[l]
                off += ml
                for i, n in enumerate(src_sizes):
                    segments.extend([(i, n)] * int(phi.multiplicity[l, i]))
                if phi.zero_pad[l]:
                    segments.append((None, int(phi.zero_pad[l])))
        dilation[off:, off:] = np.eye(m - off)
        if m - off:
            segments.append((None, m - off))

        # canonical start offset for every (source block, copy)
        canon_start = {}
        pos = 0
        for i, n in enumerate(src_sizes):
            canon_start[i] = [pos + c * n for c in range(mult[j, i])]
            pos += int(mult[j, i]) * n
        pad_pos = pos
        used = {i: 0 for i in range(len(src_sizes))}
        perm = np.zeros((m, m))
        nested = 0
        for i, size in segments:
            if i is None:
                for t in range(size):
                    perm[nested + t, pad_pos + t] = 1.0
                pad_pos += size
            else:
                start = canon_start[i][used[i]]
                used[i] += 1
                for t in range(size):
                    perm[nested + t, start + t] = 1.0
            nested += size
        conj.append(psi.conjugators[j] @ dilation @ perm)
    return MorphismSpec(phi.source, psi.target, mult, tuple(conj))


@dataclass(frozen=True, eq=False)
class SumMap:
    """Pointwise sum of pairwise orthogonal maps."""

    parts: tuple
    verification: Report | None = None

    @property
    def source(self) -> Algebra:
        return self.parts[0].source

    @property
    def target(self) -> Algebra:
        return self.parts[0].target

    def apply(self, v: AElement) -> AElement:
        return amou.sum_of([p.apply(v) for p in self.parts])

    __call__ = apply


def _check_same_ends(phi, psi):
    if phi.source != psi.source or phi.target != psi.target:
        raise AlgebraMismatch(f"maps {phi.source}->{phi.target} and {psi.source}->{psi.target} differ")


def is_completely_abs_preserving(
    phi: Map, trials: int = 20, maxlevel: int = 3, seed: int = 0, tol: Tolerance = DEFAULT_TOL
) -> Report:
    """Sample abs(phi(v)) = phi(abs(v)) and phi(v*) = phi(v)* at levels <= maxlevel."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rep = Report(f"|.|-preservation of {phi!r}")
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        m, n = (int(x) for x in rng.integers(1, maxlevel + 1, size=2))
        v = phi.source.random(rng, m, n)
        where = f"trial {t}, level ({m},{n})"
        rep.record("abs preserved", amou.abs(phi.apply(v), tol).close(phi.apply(amou.abs(v, tol)), tol), where)
        rep.record("involution preserved", phi.apply(v.adjoint()).close(phi.apply(v).adjoint(), tol), where)
    return rep


def orthogonal_maps_structural(phi: Map, psi: Map, tol: Tolerance = DEFAULT_TOL) -> bool:
    """phi(e) and psi(e) have disjoint supports in every target block."""
    _check_same_ends(phi, psi)
    e = phi.source.unit(1)
    return amou.orthogonal_product(phi.apply(e), psi.apply(e), tol)


def orthogonal_maps(phi: Map, psi: Map, trials: int = 10, seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> bool:
    """phi_n(u) ⊥ psi_n(v) for sampled positive u, v at levels <= 3."""
    _check_same_ends(phi, psi)
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        n = int(rng.integers(1, 4))
        u = phi.source.random_positive(rng, n)
        v = phi.source.random_positive(rng, n)
        if not amou.orthogonal(phi.apply(u), psi.apply(v), tol):
            return False
    return True


def sum_maps(phi: Map, psi: Map, trials: int = 10, seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> SumMap:
    """phi + psi for orthogonal maps, re-verified on [[0, v], [v*, 0]] at level 2n."""
    if not orthogonal_maps(phi, psi, trials, seed, tol):
        raise NotOrthogonal(f"{phi!r} and {psi!r} are not orthogonal")
    parts = tuple(phi.parts if isinstance(phi, SumMap) else (phi,)) + tuple(
        psi.parts if isinstance(psi, SumMap) else (psi,)
    )
    total = SumMap(parts)
    rep = is_completely_abs_preserving(total, trials, 3, seed, tol)
    for t in range(trials):
        rng = np.random.default_rng([seed, 10_000 + t])
        n = int(rng.integers(1, 4))
        v = phi.source.random(rng, n)
        z = phi.source.zeros(n)
        x = amou.block_matrix([[z, v], [v.adjoint(), z]])
        lhs = amou.abs(phi.apply(x) + psi.apply(x), tol)
        rhs = amou.abs(phi.apply(x), tol) + amou.abs(psi.apply(x), tol)
        rep.record("|phi(x) + psi(x)| = |phi(x)| + |psi(x)| at level 2n", lhs.close(rhs, tol), f"trial {t}, n={n}")
    return SumMap(parts, rep)


def minimal_projection(alg: Algebra, i: int) -> OrderProjection:
    """A rank-one projection in block i at level 1."""
    ranks = [0] * alg.k
    ranks[i] = 1
    return OrderProjection.diagonal(alg, 1, ranks)


def k0_of_map(phi: Map, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """K_0(phi) as an integer matrix (target blocks x source blocks).

    Column i is the class of phi(p_i) for a minimal projection p_i in source
    block i, so the matrix is read off the map's action, not its metadata.
    """
    if not is_order_projection(phi.apply(phi.source.unit(1)), tol):
        raise NotProjectionPreserving(f"{phi!r} does not send the unit to a projection")
    cols = []
    for i in range(phi.source.k):
        image = phi.apply(minimal_projection(phi.source, i).element)
        if not is_order_projection(image, tol):
            raise NotProjectionPreserving(f"{phi!r} does not send a minimal projection to a projection")
        cols.append(class_of(image, tol).ranks)
    return np.array(cols, dtype=np.int64).T.reshape(phi.target.k, phi.source.k)


def apply_k0(matrix: np.ndarray, target: Algebra, g: K0Element) -> K0Element:
    return K0Element(target, tuple(int(x) for x in np.asarray(matrix) @ np.array(g.diff, dtype=np.int64)))


@dataclass(frozen=True)
class CbNormReport:
    levels: tuple[float, ...]
    sup: float
    value: float

    def render(self) -> str:
        per = ", ".join(f"{x:.12g}" for x in self.levels)
        return f"||phi_n|| for n = 1..{len(self.levels)}: [{per}]; sup {self.sup:.12g}; cb-norm {self.value:g}"


def cb_norm(phi: Map, max_level: int = 3, trials: int = 10, seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> CbNormReport:
    """Sampled ||phi||_cb = sup_n ||phi_n||.

    Each level norm is the largest ratio ||phi_n(v)|| / ||v|| over e^n and random
    samples.  For *-homomorphisms the value is 1 (0 for the zero map); sampled
    sups within tolerance of 0 or 1 are snapped to those exact values.
    """
    levels = []
    for n in range(1, max_level + 1):
        rng = np.random.default_rng([seed, n])
        samples = [phi.source.unit(n)] + [phi.source.random(rng, n) for _ in range(trials)]
        best = 0.0
        for v in samples:
            nv = amou.norm(v)
            if nv > 0:
                best = max(best, amou.norm(phi.apply(v)) / nv)
        levels.append(best)
    sup = max(levels)
    value = sup
    for exact in (0.0, 1.0):
        if abs(sup - exact) <= tol.eps * 10:
            value = exact
    return CbNormReport(tuple(levels), sup, value)


# -- random generators ----------------------------------------------------


def random_algebra(rng: np.random.Generator, max_blocks: int = 2, max_size: int = 3) -> Algebra:
    k = int(rng.integers(1, max_blocks + 1))
    return Algebra(tuple(int(x) for x in rng.integers(1, max_size + 1, size=k)))


def random_unital_spec(
    rng: np.random.Generator, source: Algebra, max_mult: int = 2, max_dim: int = 8
) -> MorphismSpec:
    """A unital spec out of ``source``; target block sizes are forced by the multiplicities."""
    if min(source.block_sizes) > max_dim:
        raise ValueError(f"no target block of size <= {max_dim} can contain {source}")
    while True:
        l = int(rng.integers(1, 3))
        mult = rng.integers(0, max_mult + 1, size=(l, source.k))
        used = mult @ np.array(source.block_sizes)
        if np.all(used > 0) and np.all(used <= max_dim):
            break
    sizes = tuple(int(x) for x in used)
    target = Algebra(sizes)
    conj = tuple(amou.random_unitary(rng, m) for m in sizes)
    return MorphismSpec(source, target, mult, conj)


def _shift_permutation(m: int, first: int, second: int) -> np.ndarray:
    """Permutation moving coordinates [0, second) to [first, first + second)."""
    perm = np.zeros((m, m))
    for t in range(second):
        perm[first + t, t] = 1.0
    rest = [r for r in range(m) if not first <= r < first + second]
    for t, r in zip(range(second, m), rest):
        perm[r, t] = 1.0
    return perm


def random_orthogonal_specs(
    rng: np.random.Generator, source: Algebra, max_mult: int = 2, max_dim: int = 8
) -> tuple[MorphismSpec, MorphismSpec]:
    """Two maps out of ``source`` into one target with disjoint ranges; their sum is unital."""
    if min(source.block_sizes) > max_dim:
        raise ValueError(f"no target block of size <= {max_dim} can contain {source}")
    sizes_arr = np.array(source.block_sizes)
    while True:
        l = int(rng.integers(1, 3))
        m_phi = rng.integers(0, max_mult + 1, size=(l, source.k))
        m_psi = rng.integers(0, max_mult + 1, size=(l, source.k))
        d_phi, d_psi = m_phi @ sizes_arr, m_psi @ sizes_arr
        if np.all(d_phi + d_psi > 0) and np.all(d_phi + d_psi <= max_dim):
            break
    target = Algebra(tuple(int(x) for x in d_phi + d_psi))
    unitaries = [amou.random_unitary(rng, int(m)) for m in target.block_sizes]
    phi = MorphismSpec(source, target, m_phi, tuple(unitaries))
    psi_conj = tuple(
        u @ _shift_permutation(int(m), int(a), int(b))
        for u, m, a, b in zip(unitaries, target.block_sizes, d_phi, d_psi)
    )
    psi = MorphismSpec(source, target, m_psi, psi_conj)
    return phi, psi


def corrupt_conjugator(phi: MorphismSpec, block: int = 0, shear: float = 0.75) -> MorphismSpec:
    """Replace one conjugator U by U (I + shear E_{1m}), no longer unitary (planted bug)."""
    conj = [u.copy() for u in phi.conjugators]
    m = conj[block].shape[0]
    bump = np.eye(m, dtype=np.complex128)
    bump[0, m - 1] += shear
    conj[block] = conj[block] @ bump
    return MorphismSpec(phi.source, phi.target, phi.multiplicity.copy(), tuple(conj))


def compose_maps(maps: Sequence[MorphismSpec]) -> MorphismSpec:
    """maps[-1] ∘ ... ∘ maps[0]."""
    out = maps[0]
    for m in maps[1:]:
        out = compose(m, out)
    return out
