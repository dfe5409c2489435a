"""Seeded property suites over the algebra models.

Each suite returns a :class:`Report`; trial ``t`` of a suite draws from
``default_rng([seed, salt, t])`` so suites are independent of each other and
of the order they run in.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from . import amou, k0, limitspace, morphisms, projlattice
from .amou import Algebra
from .errors import AmouError, NotOrthogonal, NotProjectionPreserving, UnknownSuite
from .limitspace import FMatrix
from .linalg import Tolerance
from .morphisms import MorphismSpec
from .projlattice import OrderProjection
from .report import Report

SUITE_TOL = Tolerance(eps=1e-7)
DEFAULT_ALGEBRAS = tuple(Algebra(b) for b in [(1,), (2,), (3,), (1, 2), (2, 3)])
SUITES = ("axioms", "limit", "orthogonality", "projections", "k0", "functor")


def _rng(seed: int, salt: int, t: int) -> np.random.Generator:
    return np.random.default_rng([seed, salt, t])


def _absorb(rep: Report, sub: Report, prefix: str, context: str | None = None) -> None:
    for name, c in sub.checks.items():
        mine = rep.check(f"{prefix} {name}")
        mine.passed += c.passed
        mine.failed += c.failed
        if mine.counterexample is None and c.counterexample is not None:
            mine.counterexample = c.counterexample if context is None else f"{context}, {c.counterexample}"


def _guard(rep: Report, name: str, where: str, fn: Callable[[], bool]) -> bool:
    """Record fn(); a raised AmouError counts as a failure, not a crash."""
    try:
        ok = bool(fn())
    except AmouError as exc:
        return rep.record(name, False, f"{where}: {type(exc).__name__}: {exc}")
    return rep.record(name, ok, where)


def _payload(v) -> str:
    return "; ".join(np.array2string(b, precision=4, max_line_width=200).replace("\n", "") for b in v.blocks)


# -- axioms ------------------------------------------------------------------


def axioms_suite(algebras: Sequence[Algebra], trials: int, seed: int, tol: Tolerance = SUITE_TOL) -> Report:
    rep = Report("axioms")
    for alg in algebras:
        _absorb(rep, amou.check_axioms(alg, trials, seed, tol), f"[{alg}]")
    for t in range(2 * trials):
        rng = _rng(seed, 1, t)
        alg = algebras[t % len(algebras)]
        v = alg.random(rng, int(rng.integers(1, 4)))
        a, b = amou.norm_inf_formula(v), amou.norm(v)
        rep.record("norm: order-unit inf formula = blockwise operator norm", abs(a - b) <= 1e-7, f"sample {t} on {alg}: {a!r} vs {b!r}")
    return rep


# -- limit -------------------------------------------------------------------


def _random_fmatrix(rng: np.random.Generator, n: int) -> FMatrix:
    return FMatrix.from_array(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def _positive_of_order(alg: Algebra, rng: np.random.Generator, order: int, level: int):
    return alg.random_positive(rng, order).pad(level - order, level - order)


def limit_suite(algebras: Sequence[Algebra], trials: int, seed: int, tol: Tolerance = SUITE_TOL) -> Report:
    rep = Report("limit")
    for t in range(trials):
        rng = _rng(seed, 2, t)
        alg = algebras[t % len(algebras)]
        where = f"trial {t} on {alg}"

        order = int(rng.integers(1, 4))
        v = limitspace.lift(_positive_of_order(alg, rng, order, 3), tol)
        u = limitspace.lift(amou.random_dominated(v.payload, rng, tol), tol)
        rep.record("order: 0 <= u <= v  =>  o(u) <= o(v)", limitspace.leq(u, v, tol) and u.order <= v.order, where)
        rep.record("order: o(T_n(v)) is the trimmed level", v.order == order, where)

        w = limitspace.lift(alg.random(rng, int(rng.integers(1, 4))), tol)
        n = w.order + int(rng.integers(0, 2))
        a = FMatrix.from_array(amou.random_unitary(rng, n))
        lhs = limitspace.abs_limit(limitspace.f_act(a.adjoint(), w, a, tol), tol)
        rhs = limitspace.f_act(a.adjoint(), limitspace.abs_limit(w, tol), a, tol)
        rep.record("local unitary: |a* v a| = a* |v| a", a.is_local_unitary() and lhs.close(rhs, tol), where)

        if t % 5 == 0:
            ln, bn = limitspace.limit_norm(w), limitspace.norm(w)
            rep.record("norm: bisection limit norm = blockwise operator norm", abs(ln - bn) <= 1e-7, f"{where}: {ln!r} vs {bn!r}")

        x = _random_fmatrix(rng, int(rng.integers(1, 5)))
        y = _random_fmatrix(rng, int(rng.integers(1, 5)))
        prod = limitspace.norm(limitspace.f_act(x, w, y, tol))
        bound = x.norm() * limitspace.norm(w) * y.norm()
        rep.record("norm: ||a v b|| <= ||a|| ||v|| ||b||", prod <= bound * (1 + tol.eps) + tol.eps, where)

        m = w.order
        big = m + int(rng.integers(0, 3))
        iso = np.zeros((big, big), dtype=np.complex128)
        iso[:, :m] = amou.random_isometry(rng, big, m)
        a_iso = FMatrix.from_array(iso)
        rep.record(
            "isometric absorption: a*a = i_o(v)  =>  |a v| = |v|",
            limitspace.abs_limit(limitspace.f_act(a_iso, w, FMatrix.identity(m), tol), tol).close(
                limitspace.abs_limit(w, tol), tol
            ),
            where,
        )
        rep.record("non-degenerate: i_o v i_o = v", limitspace.f_act(FMatrix.identity(m), w, FMatrix.identity(m), tol).close(w, tol), where)
        k = float(rng.uniform(0.0, 2.0)) * limitspace.norm(w)
        ke = k * limitspace.local_unit(alg, m)
        diag = limitspace.pair_plus(ke, ke, m, tol)
        sa = limitspace.sa_n(w, m, tol)
        rep.record(
            "local order unit: (ke, ke)+ + sa(v) >= 0  <=>  (ke, ke)+ - sa(v) >= 0",
            limitspace.is_positive(diag + sa, tol) == limitspace.is_positive(diag - sa, tol),
            f"{where}, k = {k:.6g}",
        )
        h = limitspace.lift(alg.random(rng, m, hermitian=True), tol)
        plus, minus = amou.orthogonal_decompose(h.at_level(m), tol)
        rep.record(
            "cone is generating: v = v+ - v- with v+-, v- >= 0",
            amou.is_positive(plus, tol) and amou.is_positive(minus, tol) and (plus - minus).close(h.at_level(m), tol),
            where,
        )
        rep.record(
            "cone is proper: v >= 0 and -v >= 0  =>  v = 0",
            not (limitspace.is_positive(h, tol) and limitspace.is_positive(-h, tol)) or h.payload.is_zero(tol),
            where,
        )
        rep.record(
            "embedding: T_n(v (+) 0) = T_n(v)",
            limitspace.lift(w.at_level(m + 2), tol) == w,
            where,
        )
        s = limitspace.sa_n(w, m, tol)
        rep.record("sa_n(v) is self-adjoint", s.payload.is_hermitian(tol), where)
    return rep


# -- orthogonality -------------------------------------------------------------


def _normalise(v):
    return v / amou.norm(v)


def orthogonality_suite(algebras: Sequence[Algebra], trials: int, seed: int, tol: Tolerance = SUITE_TOL) -> Report:
    rep = Report("orthogonality")
    seen = set()
    accepted = 0
    for t in range(20 * trials):
        if accepted == 2 * trials:
            break
        rng = _rng(seed, 3, t)
        alg = algebras[t % len(algebras)]
        n = int(rng.integers(1, 4))
        where = f"sample {t} on {alg}, level {n}"
        if t % 2 == 0:
            u, v = amou.random_orthogonal_pair(alg, rng, n)
            if amou.norm(u) == 0 or amou.norm(v) == 0:
                u, v = alg.random_positive(rng, n), alg.random_positive(rng, n)
        else:
            u, v = alg.random_positive(rng, n, rank_deficient=True), alg.random_positive(rng, n, rank_deficient=True)
        if amou.norm(u) <= tol.eps or amou.norm(v) <= tol.eps:
            continue
        accepted += 1
        u, v = _normalise(u), _normalise(v)
        perp = amou.orthogonal(u, v, tol)
        perp_inf = amou.orthogonal_infty(u, v, tol)
        seen.add(perp)
        rep.record("u ⊥ v  =>  ||u + v|| = 1 on norm-one positives", perp_inf or not perp, where)
        rep.record(
            "u ⊥ v  <=>  u ⊥_∞^a v (50 dominated sub-pairs)",
            perp == amou.orthogonal_infty_hereditary(u, v, rng, 50, tol),
            where,
        )
        rep.record("u ⊥ v  <=>  uv = 0", perp == amou.orthogonal_product(u, v, tol), where)
        if t % 10 == 0:
            rep.record(
                "||u + v|| = 1  <=>  ||k1 u + k2 v|| = max(||k1 u||, ||k2 v||)",
                perp_inf == amou.orthogonal_infty_definition(u, v, tol),
                where,
            )

        h = alg.random(rng, n, hermitian=True)
        plus, minus = amou.orthogonal_decompose(h, tol)
        rep.record(
            "decompose: v = v+ - v-,  |v| = v+ + v-,  v+ ⊥ v-",
            (plus - minus).close(h, tol)
            and (plus + minus).close(amou.abs(h, tol), tol)
            and amou.orthogonal(plus, minus, tol),
            f"{where}: v = {_payload(h)}",
        )
    rep.record("2 x trials nonzero samples drawn", accepted == 2 * trials, f"only {accepted} samples accepted")
    rep.record("both outcomes of ⊥ were sampled", seen == {True, False}, f"outcomes seen: {sorted(seen)}")
    return rep


# -- projections -----------------------------------------------------------


def _trace_ranks(p: OrderProjection) -> tuple[int, ...]:
    return tuple(int(round(np.trace(b).real)) for b in p.element.blocks)


def projections_suite(algebras: Sequence[Algebra], trials: int, seed: int, tol: Tolerance = SUITE_TOL) -> Report:
    rep = Report("projections")
    for t in range(2 * trials):
        rng = _rng(seed, 4, t)
        alg = algebras[t % len(algebras)]
        m, n = (int(x) for x in rng.integers(1, 4, size=2))
        where = f"pair {t} on {alg}, levels {m}, {n}"
        p = projlattice.random_projection(alg, rng, m)
        if t % 2 == 0:
            ranks = [min(r, n * s) for r, s in zip(_trace_ranks(p), alg.block_sizes)]
            q = projlattice.random_projection(alg, rng, n, ranks)
        else:
            q = projlattice.random_projection(alg, rng, n)
        oracle = _trace_ranks(p) == _trace_ranks(q)
        w = _guard_value(lambda: projlattice.equivalent(p.element, q.element, tol))
        rep.record("witness exists  <=>  trace ranks agree", (w is not None) == oracle, where)
        if w is not None:
            rep.record("witness: |v*| = p, |v| = q", w.verify(tol), where)
            rep.record("witness is a partial isometry", projlattice.is_partial_isometry(w.v, tol), where)

    for t in range(trials):
        rng = _rng(seed, 5, t)
        alg = algebras[t % len(algebras)]
        where = f"trial {t} on {alg}"
        p = projlattice.random_projection(alg, rng, int(rng.integers(1, 4)))
        ranks = projlattice.rank_vector(p, tol)
        q = _projection_with_ranks(alg, rng, ranks)
        r = _projection_with_ranks(alg, rng, ranks)

        rep.record("~ is reflexive", _verified(projlattice.equivalent(p, p, tol), tol), where)
        pq = projlattice.equivalent(p, q, tol)
        qp = projlattice.equivalent(q, p, tol)
        rep.record("~ is symmetric", _verified(pq, tol) and _verified(qp, tol), where)
        if t % 2 == 0:
            pq = projlattice.equivalent(p, q, tol)
            qr = projlattice.equivalent(q, r, tol)
            _guard(rep, "~ is transitive via a condition (T) witness", where, lambda: _transitive(pq, qr, p, r, tol))

        q2 = projlattice.random_projection(alg, rng, int(rng.integers(1, 4)))
        swap = projlattice.equivalent(p.direct_sum(q2), q2.direct_sum(p), tol)
        rep.record("p (+) q ~ q (+) p", _verified(swap, tol), where)

        lvl = int(rng.integers(1, 4))
        e1, e2 = _orthogonal_projections(alg, rng, lvl)
        summed = e1 + e2
        rep.record(
            "p ⊥ q  =>  p + q ~ p (+) q",
            amou.orthogonal(e1.element, e2.element, tol) and _verified(projlattice.equivalent(summed, e1.direct_sum(e2), tol), tol),
            where,
        )
        if pq is not None:
            rep.record("p ~ q  =>  p ≈ q", projlattice.stably_equivalent(p, q, tol) is not None, where)
        f1, f2 = _orthogonal_projections(alg, rng, lvl)
        g1 = _projection_with_ranks(alg, rng, projlattice.rank_vector(f1, tol))
        g2 = _projection_with_ranks(alg, rng, projlattice.rank_vector(f2, tol))
        _guard(rep, "p ~ q, p' ~ q', p ⊥ p', q ⊥ q'  =>  p + p' ~ q + q'", where, lambda: _additive(f1, f2, g1, g2, tol))
        rep.record("p ≈ p (+) 0", projlattice.stably_equivalent(p, p.direct_sum(OrderProjection.zero(alg)), tol) is not None, where)

        v = p.element
        rep.record(
            "spectral and definitional projection tests agree on projections",
            projlattice.is_order_projection(v, tol) and projlattice.is_order_projection_by_definition(v, tol),
            where,
        )
        if any(projlattice.rank_vector(p, tol)):
            for c in (0.5, 0.7, 0.75, 1.3):
                scaled = c * v
                rep.record(
                    "c p is not a projection for c not in {0, 1}",
                    not projlattice.is_order_projection(scaled, tol)
                    and not projlattice.is_order_projection_by_definition(scaled, tol),
                    f"{where}, c = {c}",
                )
            h = alg.random(rng, p.level, hermitian=True)
            rep.record(
                "spectral and definitional tests agree on random self-adjoints",
                projlattice.is_order_projection(h, tol) == projlattice.is_order_projection_by_definition(h, tol),
                where,
            )
    return rep


def _guard_value(fn):
    try:
        return fn()
    except AmouError:
        return None


def _verified(w, tol) -> bool:
    return w is not None and w.verify(tol)


def _projection_with_ranks(alg: Algebra, rng: np.random.Generator, ranks) -> OrderProjection:
    """A random projection with the given ranks at a random level that fits them."""
    low = max([1] + [-(-r // s) for r, s in zip(ranks, alg.block_sizes)])
    return projlattice.random_projection(alg, rng, int(rng.integers(low, 4)), ranks)


def _transitive(pq, qr, p, r, tol) -> bool:
    # u = v_pq (|u| = q), v = v_qr* (|v| = q); T gives w with |w*| = p, |w| = r
    w = projlattice.condition_T_witness(pq.v, qr.v.adjoint(), tol)
    return projlattice.EquivWitness(w, p, r).verify(tol) and projlattice.is_partial_isometry(w, tol)


def _additive(p1, p2, q1, q2, tol) -> bool:
    """Witness p1 + p2 ~ q1 + q2 by v1 + v2, with q1, q2 moved to orthogonal ranges."""
    n = q1.level
    q2 = q2.pad(n - q2.level) if q2.level < n else q2
    q1 = q1.pad(q2.level - n) if n < q2.level else q1
    # q1 (+) q2 sits at level 2n: its two summands are orthogonal by construction
    r1 = OrderProjection(q1.element.direct_sum(q2.element.algebra.zeros(q2.level)))
    r2 = OrderProjection(q1.element.algebra.zeros(q1.level).direct_sum(q2.element))
    w1, w2 = projlattice.equivalent(p1, r1, tol), projlattice.equivalent(p2, r2, tol)
    if w1 is None or w2 is None:
        return False
    total = projlattice.EquivWitness(w1.v + w2.v, p1 + p2, r1 + r2)
    return amou.orthogonal(r1.element, r2.element, tol) and total.verify(tol)


def _orthogonal_projections(alg: Algebra, rng: np.random.Generator, n: int):
    a, b = [], []
    for s in alg.block_sizes:
        d = n * s
        u = amou.random_unitary(rng, d)
        i, j = sorted(int(x) for x in rng.integers(0, d + 1, size=2))
        a.append(u[:, :i] @ u[:, :i].conj().T)
        b.append(u[:, i:j] @ u[:, i:j].conj().T)
    return OrderProjection(amou.AElement(alg, (n, n), tuple(a))), OrderProjection(amou.AElement(alg, (n, n), tuple(b)))


# -- K_0 -----------------------------------------------------------------------


def _random_k0(alg: Algebra, rng: np.random.Generator) -> k0.K0Element:
    return k0.K0Element(alg, tuple(int(x) for x in rng.integers(-6, 7, size=alg.k)))


def k0_suite(algebras: Sequence[Algebra], trials: int, seed: int, tol: Tolerance = SUITE_TOL) -> Report:
    rep = Report("k0")
    for alg in algebras:
        g = k0.k0_of(alg, tol, seed=seed)
        where = f"on {alg}"
        rep.record("K0 = Z^k with cone Z+^k", g.k == alg.k and all(g.in_cone(x) for x in g.generators()), where)
        rep.record("order unit = (n_1, ..., n_k)", g.order_unit.diff == alg.block_sizes, where)
        rep.record("units e^n are finite", g.finite_units, where)
        for name, ok in g.verified.items():
            rep.record(f"group structure: {name}", ok, where)

    for t in range(trials):
        rng = _rng(seed, 6, t)
        alg = algebras[t % len(algebras)]
        where = f"trial {t} on {alg}"
        a, b, c = (_random_k0(alg, rng) for _ in range(3))
        if t % 2:
            b = a
        zero = k0.K0Element.zero(alg)
        rep.record(
            "group laws in Z^k",
            a + zero == a and a + (-a) == zero and a + b == b + a and (a + b) + c == a + (b + c),
            where,
        )
        rep.record("cancellation: a + c = b + c  =>  a = b", ((a + c) == (b + c)) == (a == b), where)
        rep.record("order is translation invariant", (a <= b) == (a + c <= b + c), where)

        n = k0.order_unit_bound(a)
        e = k0.K0Element(alg, alg.block_sizes)
        tight = n == 0 or not (-(n - 1) * e <= a <= (n - 1) * e)
        rep.record("order unit bound: -n[e] <= g <= n[e], n minimal", -n * e <= a <= n * e and tight, f"{where}, g = {a.diff}")

        p, q = a.pair()
        rep.record("[(p, q)] recovers g", k0.K0Element.from_pair(p, q, tol) == a, where)
        rep.record(
            "[(p, q)] + [(q, p)] = 0",
            k0.K0Element.from_pair(p, q, tol) + k0.K0Element.from_pair(q, p, tol) == zero,
            where,
        )
        rep.record(
            "≡ is reflexive and symmetric",
            k0.pairs_equivalent((p, q), (p, q), tol)
            and k0.pairs_equivalent((p, q), (p.pad(1), q.pad(1)), tol)
            and k0.pairs_equivalent((p.pad(1), q.pad(1)), (p, q), tol),
            where,
        )
        r = projlattice.random_projection(alg, rng, int(rng.integers(1, 3)))
        p2, q2 = p.direct_sum(r), q.direct_sum(r)
        r2 = projlattice.random_projection(alg, rng, int(rng.integers(1, 3)))
        p3, q3 = p2.direct_sum(r2), q2.direct_sum(r2)
        rep.record(
            "≡ is transitive on pairs",
            k0.pairs_equivalent((p, q), (p2, q2), tol)
            and k0.pairs_equivalent((p2, q2), (p3, q3), tol)
            and k0.pairs_equivalent((p, q), (p3, q3), tol),
            where,
        )
        s = projlattice.random_projection(alg, rng, int(rng.integers(1, 3)))
        rep.record(
            "[p (+) s] = [p] + [s]",
            k0.class_of(p2.direct_sum(s), tol) == k0.class_of(p2, tol) + k0.class_of(s, tol),
            where,
        )
        x = projlattice.random_projection(alg, rng, int(rng.integers(1, 3)))
        y = (
            _projection_with_ranks(alg, rng, projlattice.rank_vector(x, tol))
            if t % 2
            else projlattice.random_projection(alg, rng, int(rng.integers(1, 3)))
        )
        rep.record(
            "monoid cancellation: x (+) s ≈ y (+) s  <=>  x ≈ y",
            (projlattice.stably_equivalent(x.direct_sum(s), y.direct_sum(s), tol) is not None)
            == (projlattice.stably_equivalent(x, y, tol) is not None),
            where,
        )
    return rep


# -- functor -------------------------------------------------------------------


def _map_checks(rep: Report, phi, where: str, seed: int, tol: Tolerance, trials: int = 3) -> None:
    """Checks every map in the homomorphism family must pass."""
    prefix = "map:"
    _absorb(rep, morphisms.is_completely_abs_preserving(phi, trials, 3, seed, tol), prefix, where)
    unit = phi.apply(phi.source.unit(1))
    rep.record(f"{prefix} phi(e) is an order projection", projlattice.is_order_projection(unit, tol), f"{where}: phi(e) = {_payload(unit)}")
    if getattr(phi, "unital", False):
        rep.record(f"{prefix} unital phi(e) = e", unit.close(phi.target.unit(1), tol), f"{where}: phi(e) = {_payload(unit)}")
    rng = _rng(seed, 7, 0)
    contractive = True
    for lvl in (1, 2, 3):
        v = phi.source.random(rng, lvl)
        contractive &= amou.norm(phi.apply(v)) <= amou.norm(v) * (1 + tol.eps) + tol.eps
    rep.record(f"{prefix} completely contractive ||phi_n(v)|| <= ||v||", contractive, where)
    if isinstance(phi, MorphismSpec):
        _guard(
            rep,
            f"{prefix} K0(phi) = multiplicity matrix",
            where,
            lambda: np.array_equal(morphisms.k0_of_map(phi, tol), phi.multiplicity),
        )
        p = projlattice.random_projection(phi.source, rng, int(rng.integers(1, 3)))
        _guard(
            rep,
            f"{prefix} class_of(phi(p)) = K0(phi) class_of(p)",
            where,
            lambda: k0.class_of(phi.apply(p.element), tol).element()
            == morphisms.apply_k0(phi.multiplicity, phi.target, k0.class_of(p, tol).element()),
        )


def functor_suite(
    algebras: Sequence[Algebra],
    trials: int,
    seed: int,
    tol: Tolerance = SUITE_TOL,
    maps: Sequence[tuple[str, MorphismSpec]] = (),
) -> Report:
    rep = Report("functor")
    for alg in algebras:
        where = f"on {alg}"
        ident = MorphismSpec.identity(alg)
        zero = MorphismSpec.zero(alg, alg)
        rep.record("K0(identity) = identity", np.array_equal(morphisms.k0_of_map(ident, tol), np.eye(alg.k, dtype=np.int64)), where)
        rep.record("K0(zero) = 0", not morphisms.k0_of_map(zero, tol).any(), where)
        rep.record("zero map ⊥ identity", morphisms.orthogonal_maps(ident, zero, 3, seed, tol), where)
        rep.record("identity is not ⊥ itself", not morphisms.orthogonal_maps(ident, ident, 3, seed, tol), where)
        try:
            morphisms.sum_maps(ident, ident, 3, seed, tol)
            rep.record("sum of non-orthogonal maps is rejected", False, where)
        except NotOrthogonal:
            rep.record("sum of non-orthogonal maps is rejected", True, where)
        rep.record("||0||_cb = 0 and ||id||_cb = 1", morphisms.cb_norm(zero, tol=tol).value == 0.0 and morphisms.cb_norm(ident, tol=tol).value == 1.0, where)

    pairs = max(1, trials // 5)
    for t in range(pairs):
        rng = _rng(seed, 8, t)
        alg = algebras[t % len(algebras)]
        phi = morphisms.random_unital_spec(rng, alg)
        psi = morphisms.random_unital_spec(rng, phi.target)
        where = f"pair {t}: {phi!r} then {psi!r}"
        both = morphisms.compose(psi, phi)
        _map_checks(rep, both, where, seed + t, tol)
        v = alg.random(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
        rep.record("composite spec = nested application", both.apply(v).close(psi.apply(phi.apply(v)), tol), where)
        _guard(
            rep,
            "K0(psi ∘ phi) = K0(psi) K0(phi)",
            where,
            lambda: np.array_equal(
                morphisms.k0_of_map(both, tol), morphisms.k0_of_map(psi, tol) @ morphisms.k0_of_map(phi, tol)
            ),
        )
        rep.record("||psi ∘ phi||_cb = 1", morphisms.cb_norm(both, seed=seed, tol=tol).value == 1.0, where)

    for t in range(pairs):
        rng = _rng(seed, 9, t)
        alg = algebras[t % len(algebras)]
        phi, psi = morphisms.random_orthogonal_specs(rng, alg)
        where = f"orthogonal pair {t}: {phi!r}, {psi!r}"
        sampled = morphisms.orthogonal_maps(phi, psi, 3, seed, tol)
        rep.record("phi ⊥ psi sampled  <=>  disjoint range supports", sampled == morphisms.orthogonal_maps_structural(phi, psi, tol), where)
        try:
            total = morphisms.sum_maps(phi, psi, 3, seed, tol)
        except NotOrthogonal as exc:
            rep.record("orthogonal sum is defined", False, f"{where}: {exc}")
            continue
        rep.record("orthogonal sum is defined", True, where)
        _absorb(rep, total.verification, "sum:")
        _map_checks(rep, total, where, seed + t, tol)
        try:
            k_sum = morphisms.k0_of_map(total, tol)
            ok = np.array_equal(k_sum, morphisms.k0_of_map(phi, tol) + morphisms.k0_of_map(psi, tol))
        except NotProjectionPreserving as exc:
            ok = False
            where = f"{where}: {exc}"
        rep.record("K0(phi + psi) = K0(phi) + K0(psi)", ok, where)
        p = projlattice.random_projection(alg, rng, int(rng.integers(1, 3)))
        rep.record("phi(p) + psi(p) is an order projection", projlattice.is_order_projection(total.apply(p.element), tol), where)
        cb = [morphisms.cb_norm(f, seed=seed, tol=tol).value for f in (total, phi, psi)]
        rep.record("||phi + psi||_cb = max(||phi||_cb, ||psi||_cb)", cb[0] == max(cb[1], cb[2]), f"{where}: {cb}")

    for t in range(pairs):
        rng = _rng(seed, 10, t)
        alg = algebras[t % len(algebras)]
        iso = _random_isomorphism(alg, rng)
        where = f"isomorphism {t}: {iso!r}"
        inv = iso.inverse()
        v = alg.random(rng, 2)
        rep.record("phi^-1 ∘ phi = id", inv.apply(iso.apply(v)).close(v, tol), where)
        rep.record(
            "K0(phi^-1) = K0(phi)^-1",
            np.array_equal(morphisms.k0_of_map(inv, tol) @ morphisms.k0_of_map(iso, tol), np.eye(alg.k, dtype=np.int64)),
            where,
        )

    for name, phi in maps:
        _map_checks(rep, phi, f"morphism {name}", seed, tol, trials=max(3, trials // 10))
    return rep


def _random_isomorphism(alg: Algebra, rng: np.random.Generator) -> MorphismSpec:
    perm = rng.permutation(alg.k)
    target = Algebra(tuple(alg.block_sizes[i] for i in perm))
    mult = np.zeros((alg.k, alg.k), dtype=np.int64)
    for j, i in enumerate(perm):
        mult[j, i] = 1
    conj = tuple(amou.random_unitary(rng, m) for m in target.block_sizes)
    return MorphismSpec(alg, target, mult, conj)


# -- dispatch --------------------------------------------------------------------


def run_suite(
    name: str,
    trials: int,
    seed: int,
    tol: Tolerance = SUITE_TOL,
    algebras: Sequence[Algebra] = DEFAULT_ALGEBRAS,
    maps: Sequence[tuple[str, MorphismSpec]] = (),
) -> list[Report]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if name == "all":
        names = SUITES
    elif name in SUITES:
        names = (name,)
    else:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    algebras = tuple(algebras)
    out = []
    for n in names:
        if n == "functor":
            out.append(functor_suite(algebras, trials, seed, tol, maps))
        else:
            out.append(_RUNNERS[n](algebras, trials, seed, tol))
    return out


_RUNNERS = {
    "axioms": axioms_suite,
    "limit": limit_suite,
    "orthogonality": orthogonality_suite,
    "projections": projections_suite,
    "k0": k0_suite,
}
