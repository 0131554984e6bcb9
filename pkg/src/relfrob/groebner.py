"""Buchberger-based ideal computations over F_p.

Reduced Groebner bases with pair-discarding criteria, normal forms, ideal
membership/equality, sums/products/powers, bracket powers, elimination
ideals and Rabinowitsch radical membership.  The reduction loops run on
dense-keyed polynomials through relfrob.core; this module owns the
translation between sparse Poly values and the dense kernel form.

A reduced basis is auto-reduced, monic and sorted by descending leading
monomial, so it is a canonical invariant of the ideal for its order:
ideal equality is syntactic equality of reduced bases.
"""

from __future__ import annotations

import heapq
import itertools
import threading
import time
from dataclasses import dataclass

from . import core
from .errors import Overflow, ResourceExceeded
from .polyring import (
    DEGREE_CAP,
    Block,
    Grevlex,
    MonomialOrder,
    Poly,
    PrimeField,
    var,
)


@dataclass(frozen=True)
class ResourceLimits:
    """Caps that make a diverging computation fail loudly, not silently."""

    max_pairs: int = 200_000
    max_basis_degree: int = 64
    wall_clock_budget: float = 30.0

    def __post_init__(self):
        if self.max_pairs <= 0 or self.max_basis_degree <= 0 or self.wall_clock_budget <= 0:
            raise ValueError("resource limits must be positive")


DEFAULT_LIMITS = ResourceLimits()


class _Context:
    """Dense translation layer for one (field, order) combination."""

    __slots__ = ("field", "p", "order", "slots", "index", "segs", "nslots")

    def __init__(self, field: PrimeField, order: MonomialOrder):
        self.field = field
        self.p = field.p
        self.order = order
        self.slots = order.vars
        self.index = {v: i for i, v in enumerate(self.slots)}
        self.segs = order.segments()
        self.nslots = len(self.slots)

    def to_dense(self, poly: Poly) -> dict:
        out = {}
        idx = self.index
        n = self.nslots
        for m, c in poly.terms.items():
            exps = [0] * n
            for v, e in m:
                if v not in idx:
                    raise ValueError(f"polynomial variable outside ambient: {v}")
                exps[idx[v]] = e
            out[tuple(exps)] = c
        return out

    def to_poly(self, dense: dict) -> Poly:
        slots = self.slots
        items = []
        for exps, c in dense.items():
            mon = tuple(
                (slots[i], exps[i]) for i in range(len(slots)) if exps[i]
            )
            items.append((tuple(sorted(mon)), c))
        return Poly.from_terms(self.field, items)

    def key(self, exps):
        return core.key_of(exps, self.segs)


def _prepare(dense, lead):
    return (lead, tuple((e, c) for e, c in dense.items() if e != lead))


class _Engine:
    """One Buchberger run; `tracked` additionally carries cofactor vectors
    expressing every basis element in the original generators."""

    def __init__(self, ctx: _Context, limits: ResourceLimits, tracked: bool):
        self.ctx = ctx
        self.limits = limits
        self.tracked = tracked
        self.start = time.monotonic()
        self.stats = {"pairs_processed": 0, "reductions_to_zero": 0, "basis_size": 0}

    def _check(self):
        if time.monotonic() - self.start > self.limits.wall_clock_budget:
            raise ResourceExceeded("wall clock budget exhausted", self.stats)

    def _nf(self, f, reducers):
        """Remainder of f; with tracking also the per-reducer quotients."""
        ctx = self.ctx
        if not self.tracked:
            try:
                r = core.normal_form(f, reducers, ctx.p, ctx.segs, DEGREE_CAP)
            except OverflowError:
                raise Overflow(f"degree cap {DEGREE_CAP} exceeded") from None
            return r, None
        p = ctx.p
        work = dict(f)
        out = {}
        quotients = [{} for _ in reducers]
        keycache = {}

        def k(e):
            v = keycache.get(e)
            if v is None:
                v = keycache[e] = ctx.key(e)
            return v

        n = ctx.nslots
        while work:
            m = max(work, key=k)
            c = work.pop(m)
            hit = None
            for idx, (lead, tail) in enumerate(reducers):
                ok = True
                for i in range(n):
                    if lead[i] > m[i]:
                        ok = False
                        break
                if ok:
                    hit = (idx, lead, tail)
                    break
            if hit is None:
                out[m] = c
                continue
            idx, lead, tail = hit
            shift = tuple(m[i] - lead[i] for i in range(n))
            q = quotients[idx]
            q[shift] = (q.get(shift, 0) + c) % p
            for te, tc in tail:
                ne = tuple(shift[i] + te[i] for i in range(n))
                nc = (work.get(ne, 0) - c * tc) % p
                if nc:
                    work[ne] = nc
                else:
                    work.pop(ne, None)
        return out, quotients

    def run(self, gens_dense, vectors=None):
        """Reduced Groebner basis of the given dense generators.

        Returns (basis, vectors); vectors is None unless tracked.  The
        basis is monic, auto-reduced and sorted descending, hence canonical
        for the order: the input generator order cannot affect it.
        """
        ctx = self.ctx
        p = ctx.p
        G: list[dict] = []
        prepared: list[tuple] = []
        leads: list[tuple] = []
        vecs: list[list[dict]] = []

        def push(f, vec):
            lead = core.leading(f, ctx.segs)
            lc = f[lead]
            if lc != 1:
                inv = pow(lc, p - 2, p)
                f = core.scale(f, inv, p)
                if vec is not None:
                    vec = [core.scale(v, inv, p) for v in vec]
            G.append(f)
            prepared.append(_prepare(f, lead))
            leads.append(lead)
            vecs.append(vec)
            return lead

        ngens = len(gens_dense)
        for i, g in enumerate(gens_dense):
            if not g:
                continue
            push(g, vectors[i] if self.tracked else None)

        if not G:
            return [], ([] if self.tracked else None)

        heap: list[tuple] = []
        pending: set[frozenset] = set()

        def queue_pairs(t):
            for i in range(t):
                lcm = tuple(max(leads[i][s], leads[t][s]) for s in range(ctx.nslots))
                heapq.heappush(heap, (sum(lcm), ctx.key(lcm), i, t))
                pending.add(frozenset((i, t)))

        for t in range(1, len(G)):
            queue_pairs(t)

        while heap:
            self._check()
            _, _, i, j = heapq.heappop(heap)
            pair = frozenset((i, j))
            if pair not in pending:
                continue
            pending.discard(pair)
            self.stats["pairs_processed"] += 1
            if self.stats["pairs_processed"] > self.limits.max_pairs:
                raise ResourceExceeded("pair budget exhausted", self.stats)
            li, lj = leads[i], leads[j]
            lcm = tuple(max(li[s], lj[s]) for s in range(ctx.nslots))
            # first criterion: coprime leading monomials reduce to zero
            if all(li[s] == 0 or lj[s] == 0 for s in range(ctx.nslots)):
                continue
            # chain criterion
            discard = False
            for k in range(len(G)):
                if k == i or k == j:
                    continue
                lk = leads[k]
                if all(lk[s] <= lcm[s] for s in range(ctx.nslots)):
                    if frozenset((i, k)) not in pending and frozenset((j, k)) not in pending:
                        discard = True
                        break
            if discard:
                continue
            # S-polynomial (both reducers are monic)
            sh_i = tuple(lcm[s] - li[s] for s in range(ctx.nslots))
            sh_j = tuple(lcm[s] - lj[s] for s in range(ctx.nslots))
            try:
                a = core.mul_term(G[i], sh_i, 1, p, DEGREE_CAP)
                b = core.mul_term(G[j], sh_j, p - 1, p, DEGREE_CAP)
            except OverflowError:
                raise Overflow(f"degree cap {DEGREE_CAP} exceeded") from None
            s = core.add(a, b, p)
            svec = None
            if self.tracked:
                svec = [
                    core.add(
                        core.mul_term(vecs[i][t], sh_i, 1, p, DEGREE_CAP),
                        core.mul_term(vecs[j][t], sh_j, p - 1, p, DEGREE_CAP),
                        p,
                    )
                    for t in range(ngens)
                ]
            r, quotients = self._nf(s, prepared)
            if not r:
                self.stats["reductions_to_zero"] += 1
                continue
            if max(sum(e) for e in r) > self.limits.max_basis_degree:
                self.stats["basis_size"] = len(G)
                raise ResourceExceeded(
                    f"basis degree limit {self.limits.max_basis_degree} exceeded",
                    self.stats,
                )
            rvec = None
            if self.tracked:
                rvec = list(svec)
                for idx, q in enumerate(quotients):
                    if not q:
                        continue
                    for t in range(ngens):
                        contrib = core.mul(q, vecs[idx][t], p, DEGREE_CAP)
                        rvec[t] = core.add(rvec[t], core.scale(contrib, p - 1, p), p)
            t = len(G)
            push(r, rvec)
            queue_pairs(t)
            if leads[t] == (0,) * ctx.nslots:
                break  # the ideal is the unit ideal

        self.stats["basis_size"] = len(G)
        return self._interreduce(G, leads, vecs)

    def _interreduce(self, G, leads, vecs):
        ctx = self.ctx
        order = sorted(range(len(G)), key=lambda i: ctx.key(leads[i]))
        kept: list[int] = []
        for i in order:
            li = leads[i]
            if any(
                all(leads[j][s] <= li[s] for s in range(ctx.nslots)) for j in kept
            ):
                continue
            kept.append(i)
        basis = [G[i] for i in kept]
        bleads = [leads[i] for i in kept]
        bvecs = [vecs[i] for i in kept]
        final = []
        final_vecs = []
        for i in range(len(basis)):
            others = [
                _prepare(basis[j], bleads[j]) for j in range(len(basis)) if j != i
            ]
            r, quotients = self._nf(basis[i], others)
            rvec = None
            if self.tracked:
                rvec = list(bvecs[i])
                pos = 0
                for j in range(len(basis)):
                    if j == i:
                        continue
                    q = quotients[pos]
                    pos += 1
                    if not q:
                        continue
                    for t in range(len(rvec)):
                        contrib = core.mul(q, bvecs[j][t], ctx.p, DEGREE_CAP)
                        rvec[t] = core.add(
                            rvec[t], core.scale(contrib, ctx.p - 1, ctx.p), ctx.p
                        )
            final.append(r)
            final_vecs.append(rvec)
        idx = sorted(
            range(len(final)),
            key=lambda i: ctx.key(core.leading(final[i], ctx.segs)),
            reverse=True,
        )
        basis = [final[i] for i in idx]
        out_vecs = [final_vecs[i] for i in idx] if self.tracked else None
        return basis, out_vecs


def _run_buchberger(field, order, gens, limits, tracked=False):
    ctx = _Context(field, order)
    dense = [ctx.to_dense(g) for g in gens]
    engine = _Engine(ctx, limits or DEFAULT_LIMITS, tracked)
    vectors = None
    if tracked:
        zero = {}
        one = {(0,) * ctx.nslots: 1}
        vectors = []
        for i in range(len(dense)):
            vec = [dict(zero) for _ in range(len(dense))]
            vec[i] = dict(one)
            vectors.append(vec)
    basis, vecs = engine.run(dense, vectors)
    basis_polys = tuple(ctx.to_poly(b) for b in basis)
    if not tracked:
        return basis_polys, None, engine.stats
    vec_polys = tuple(tuple(ctx.to_poly(v) for v in vec) for vec in vecs)
    return basis_polys, vec_polys, engine.stats


class Ideal:
    """An ideal of F_p[vars], with per-order cached reduced bases.

    Cache writes are synchronized and idempotent: whichever thread wins
    stores the same canonical basis, and a cached basis is never
    recomputed.
    """

    __slots__ = ("field", "vars", "gens", "_gb", "_tracked", "_lock")

    def __init__(self, field: PrimeField, vars: tuple[int, ...], gens):
        self.field = field
        self.vars = tuple(vars)
        allowed = set(self.vars)
        cleaned = []
        for g in gens:
            if g.field.p != field.p:
                raise ValueError("generator over a different prime field")
            extra = g.vars_used() - allowed
            if extra:
                raise ValueError(f"generator uses variables outside ambient: {extra}")
            if not g.is_zero and g not in cleaned:
                cleaned.append(g)
        self.gens = tuple(cleaned)
        self._gb: dict = {}
        self._tracked: dict = {}
        self._lock = threading.Lock()

    def default_order(self) -> Grevlex:
        return Grevlex(self.vars)

    def groebner_basis(self, order: MonomialOrder | None = None, limits=None):
        order = order or self.default_order()
        with self._lock:
            hit = self._gb.get(order)
        if hit is not None:
            return hit
        basis, _, _ = _run_buchberger(self.field, order, self.gens, limits)
        with self._lock:
            return self._gb.setdefault(order, basis)

    def tracked_basis(self, order: MonomialOrder | None = None, limits=None):
        """(basis, vectors) with basis[k] == sum(vectors[k][i] * gens[i])."""
        order = order or self.default_order()
        with self._lock:
            hit = self._tracked.get(order)
        if hit is not None:
            return hit
        basis, vecs, _ = _run_buchberger(self.field, order, self.gens, limits, tracked=True)
        with self._lock:
            return self._tracked.setdefault(order, (basis, vecs))

    def normal_form(self, f: Poly, order=None, limits=None) -> Poly:
        order = order or self.default_order()
        basis = self.groebner_basis(order, limits)
        return normal_form(f, basis, order)

    def contains(self, f: Poly, order=None, limits=None) -> bool:
        return self.normal_form(f, order, limits).is_zero

    def equals(self, other: "Ideal", limits=None) -> bool:
        if self.field.p != other.field.p or set(self.vars) != set(other.vars):
            raise ValueError("ideal equality requires the same ambient ring")
        order = self.default_order()
        return self.groebner_basis(order, limits) == other.groebner_basis(order, limits)

    def is_zero_ideal(self, limits=None) -> bool:
        return not self.groebner_basis(limits=limits)

    def is_unit_ideal(self, limits=None) -> bool:
        basis = self.groebner_basis(limits=limits)
        return len(basis) == 1 and basis[0].is_constant() and not basis[0].is_zero

    def __repr__(self):
        gens = ", ".join(g.render() for g in self.gens) or "0"
        return f"Ideal(F_{self.field.p}; {gens})"


def buchberger(ideal: Ideal, order=None, limits=None):
    """Reduced Groebner basis; deterministic for fixed ideal and order."""
    return ideal.groebner_basis(order, limits)


def normal_form(f: Poly, basis, order: MonomialOrder) -> Poly:
    """Unique remainder of f modulo a reduced basis; zero iff f is in the ideal."""
    basis = tuple(basis)
    field = f.field
    ctx = _Context(field, order)
    prepared = []
    for g in basis:
        d = ctx.to_dense(g)
        lead = core.leading(d, ctx.segs)
        if d[lead] != 1:
            d = core.scale(d, field.inv(d[lead]), field.p)
        prepared.append(_prepare(d, lead))
    try:
        r = core.normal_form(ctx.to_dense(f), prepared, ctx.p, ctx.segs, DEGREE_CAP)
    except OverflowError:
        raise Overflow(f"degree cap {DEGREE_CAP} exceeded") from None
    return ctx.to_poly(r)


def ideal_membership(f: Poly, ideal: Ideal, order=None, limits=None) -> bool:
    return ideal.contains(f, order, limits)


def ideal_equality(a: Ideal, b: Ideal, limits=None) -> bool:
    return a.equals(b, limits)


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    _same_ambient(a, b)
    return Ideal(a.field, a.vars, a.gens + b.gens)


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    _same_ambient(a, b)
    gens = [f * g for f in a.gens for g in b.gens]
    return Ideal(a.field, a.vars, gens)


def ideal_power(a: Ideal, n: int) -> Ideal:
    if n < 0:
        raise ValueError("power must be >= 0")
    if n == 0:
        return Ideal(a.field, a.vars, (Poly.const(a.field, 1),))
    gens = []
    for combo in itertools.combinations_with_replacement(a.gens, n):
        g = combo[0]
        for h in combo[1:]:
            g = g * h
        gens.append(g)
    return Ideal(a.field, a.vars, gens)


def bracket_power(a: Ideal, m: int) -> tuple[Ideal, bool]:
    """The ideal generated by m-th powers of the generators, plus an
    exactness flag.

    For m a power of the characteristic (or 0, 1) the generator powers
    generate the full bracket power, by Frobenius expansion; for other m
    the result may be smaller than the true bracket power and the flag is
    False.
    """
    if m < 0:
        raise ValueError("bracket power must be >= 0")
    if m == 0:
        return Ideal(a.field, a.vars, (Poly.const(a.field, 1),)), True
    if m == 1:
        return a, True
    p = a.field.p
    q, e = m, 0
    while q % p == 0:
        q //= p
        e += 1
    exact = q == 1
    if exact:
        gens = [g.frobenius(e) for g in a.gens]
    else:
        gens = [g**m for g in a.gens]
    return Ideal(a.field, a.vars, gens), exact


def _same_ambient(a: Ideal, b: Ideal):
    if a.field.p != b.field.p or a.vars != b.vars:
        raise ValueError("ideal operation requires the same ambient ring")


def eliminate(ideal: Ideal, front, limits=None) -> Ideal:
    """Generators of ideal ∩ F_p[vars outside `front`]."""
    front = set(front)
    if not front <= set(ideal.vars):
        raise ValueError("front block must be a subset of the ambient variables")
    front_vars = tuple(v for v in ideal.vars if v in front)
    back_vars = tuple(v for v in ideal.vars if v not in front)
    order = Block(Grevlex(front_vars), Grevlex(back_vars))
    basis = ideal.groebner_basis(order, limits)
    kept = [g for g in basis if not (g.vars_used() & front)]
    return Ideal(ideal.field, back_vars, kept)


def radical_membership(f: Poly, ideal: Ideal, limits=None) -> bool:
    """Rabinowitsch trick: f in sqrt(ideal) iff 1 in ideal + (1 - t*f)."""
    if f.is_zero:
        return True
    taken = set(ideal.vars)
    name = "t#rad"
    t = var(name)
    n = 2
    while t in taken:
        t = var(f"{name}{n}")
        n += 1
    field = ideal.field
    one_minus_tf = Poly.const(field, 1) - Poly.variable(field, t) * f
    extended = Ideal(field, ideal.vars + (t,), ideal.gens + (one_minus_tf,))
    return extended.is_unit_ideal(limits)


def express(f: Poly, ideal: Ideal, order=None, limits=None):
    """Cofactors (c_i) with f == sum(c_i * gens[i]) exactly, or None.

    The identity holds in the ambient polynomial ring, not merely modulo
    the ideal, so it is an independently checkable membership certificate.
    """
    order = order or ideal.default_order()
    basis, vectors = ideal.tracked_basis(order, limits)
    if not basis:
        return None if not f.is_zero else tuple(
            Poly.zero(ideal.field) for _ in ideal.gens
        )
    ctx = _Context(ideal.field, order)
    engine = _Engine(ctx, limits or DEFAULT_LIMITS, tracked=True)
    prepared = []
    dense_basis = []
    for g in basis:
        d = ctx.to_dense(g)
        dense_basis.append(d)
        prepared.append(_prepare(d, core.leading(d, ctx.segs)))
    rem, quotients = engine._nf(ctx.to_dense(f), prepared)
    if rem:
        return None
    ngens = len(ideal.gens)
    cof = [Poly.zero(ideal.field) for _ in range(ngens)]
    for k, q in enumerate(quotients):
        if not q:
            continue
        qp = ctx.to_poly(q)
        for i in range(ngens):
            cof[i] = cof[i] + qp * vectors[k][i]
    return tuple(cof)
