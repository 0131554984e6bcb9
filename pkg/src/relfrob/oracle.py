"""Brute-force lifting semantics over small finite rings.

A TableAlgebra is a finite commutative F_p-algebra given by structure
constants, with commutativity, the unit law and associativity checked
exhaustively at construction.  A SquareZeroPair (A, I) additionally checks
that I is an ideal and that every element of I has vanishing p-th power —
exactly the quotients through which the bounded-nil lifting property is
tested.  Enumerations iterate assignments in lexicographic order, so every
report is reproducible byte for byte for a fixed seed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .algebra import AlgebraOver, FPAlgebra
from .errors import BudgetExceeded, InternalInconsistency
from .groebner import Ideal, radical_membership
from .polyring import GF, Poly, PrimeField, mon_render

DEFAULT_BUDGET = 10**7


# ---------------------------------------------------------------------------
# dense linear algebra mod p


def rref(rows, p):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(rows[i][j] - f * rows[r][j]) % p for j in range(ncols)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    rows = [row for row in rows[:r]]
    return rows, pivots


def reduce_vector(vec, rows, pivots, p):
    """Remainder of vec modulo the row span (rows in rref)."""
    v = list(vec)
    for row, c in zip(rows, pivots):
        f = v[c] % p
        if f:
            v = [(v[j] - f * row[j]) % p for j in range(len(v))]
    return tuple(v)


def in_span(vec, rows, pivots, p):
    return not any(reduce_vector(vec, rows, pivots, p))


def solve(matrix_rows, rhs, p):
    """One solution x of x . rows == rhs, or None (rows as row vectors)."""
    n = len(matrix_rows)
    if n == 0:
        return () if not any(rhs) else None
    ncols = len(matrix_rows[0])
    aug = [list(matrix_rows[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    reduced, pivots = rref(aug, p)
    x = [0] * n
    v = list(rhs)
    for row, c in zip(reduced, pivots):
        if c >= ncols:
            continue
        f = v[c] % p
        if f:
            for j in range(ncols):
                v[j] = (v[j] - f * row[j]) % p
            for j in range(n):
                x[j] = (x[j] + f * row[ncols + j]) % p
    if any(v):
        return None
    return tuple(x)


# ---------------------------------------------------------------------------
# table algebras


@dataclass(frozen=True)
class TableAlgebra:
    """Finite commutative algebra by structure constants; e_0 is the unit."""

    field: PrimeField
    dim: int
    labels: tuple[str, ...]
    mult: tuple[tuple[tuple[int, ...], ...], ...]  # mult[i][j] = coords of e_i * e_j

    def __post_init__(self):
        p = self.field.p
        n = self.dim
        if n < 1 or len(self.mult) != n or len(self.labels) != n:
            raise ValueError("inconsistent table dimensions")
        unit = self.basis_vector(0)
        for i in range(n):
            for j in range(n):
                if self.mult[i][j] != self.mult[j][i]:
                    raise ValueError("structure constants are not commutative")
            if self.mult[0][i] != self.basis_vector(i):
                raise ValueError("e_0 is not a unit")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    left = self.mul(self.mult[i][j], self.basis_vector(k))
                    right = self.mul(self.basis_vector(i), self.mult[j][k])
                    if left != right:
                        raise ValueError("structure constants are not associative")
        assert unit == self.one

    def basis_vector(self, i: int) -> tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in range(self.dim))

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.dim

    @property
    def one(self) -> tuple[int, ...]:
        return self.basis_vector(0)

    def add(self, u, v):
        p = self.field.p
        return tuple((a + b) % p for a, b in zip(u, v))

    def scale(self, c, u):
        p = self.field.p
        return tuple((c * a) % p for a in u)

    def mul(self, u, v):
        p = self.field.p
        out = [0] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                c = (a * b) % p
                row = self.mult[i][j]
                for k in range(self.dim):
                    if row[k]:
                        out[k] = (out[k] + c * row[k]) % p
        return tuple(out)

    def power(self, u, k: int):
        result = self.one
        base = u
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def elements(self):
        """All elements in lexicographic coordinate order."""
        return itertools.product(range(self.field.p), repeat=self.dim)

    def eval_poly(self, f: Poly, assign: dict[int, tuple[int, ...]]):
        out = self.zero
        powers: dict[tuple[int, int], tuple[int, ...]] = {}
        for mon, c in f.terms.items():
            v = self.scale(c, self.one)
            for vid, e in mon:
                key = (vid, e)
                pw = powers.get(key)
                if pw is None:
                    pw = powers[key] = self.power(assign[vid], e)
                v = self.mul(v, pw)
            out = self.add(out, v)
        return out


def _product_basis_rows(a: TableAlgebra, b: TableAlgebra):
    """Basis of A x B in direct-sum coordinates: (1,1), (e_i,0) i>=1, (0,e_j)."""
    n, m = a.dim, b.dim
    rows = [list(a.one) + list(b.one)]
    for i in range(1, n):
        rows.append(list(a.basis_vector(i)) + [0] * m)
    for j in range(m):
        rows.append([0] * n + list(b.basis_vector(j)))
    return rows


def product_table(a: TableAlgebra, b: TableAlgebra) -> TableAlgebra:
    """A x B with the unit placed first in the basis."""
    if a.field.p != b.field.p:
        raise ValueError("product of algebras over different primes")
    p = a.field.p
    n, m = a.dim, b.dim
    rows = _product_basis_rows(a, b)

    def pairmul(u, v):
        ua, ub = tuple(u[:n]), tuple(u[n:])
        va, vb = tuple(v[:n]), tuple(v[n:])
        return tuple(a.mul(ua, va)) + tuple(b.mul(ub, vb))

    mult = []
    for i in range(n + m):
        row = []
        for j in range(n + m):
            prod = pairmul(rows[i], rows[j])
            coords = solve(rows, prod, p)
            if coords is None:  # pragma: no cover - rows form a basis
                raise InternalInconsistency("product basis is not a basis")
            row.append(coords)
        mult.append(tuple(row))
    labels = ("1",) + tuple(f"({lbl},0)" for lbl in a.labels[1:]) + tuple(
        f"(0,{lbl})" for lbl in b.labels
    )
    return TableAlgebra(a.field, n + m, labels, tuple(mult))


def product_pair(name: str, pa: SquareZeroPair, pb: SquareZeroPair) -> SquareZeroPair:
    """(A x B, I_A x I_B) with ideal vectors re-expressed in the product basis."""
    table = product_table(pa.ring, pb.ring)
    n, m = pa.ring.dim, pb.ring.dim
    rows = _product_basis_rows(pa.ring, pb.ring)
    p = pa.ring.field.p
    vecs = [list(r) + [0] * m for r in pa.ideal_basis]
    vecs += [[0] * n + list(r) for r in pb.ideal_basis]
    coords = []
    for v in vecs:
        c = solve(rows, v, p)
        if c is None:  # pragma: no cover - rows form a basis
            raise InternalInconsistency("product basis is not a basis")
        coords.append(c)
    return SquareZeroPair(name, table, tuple(coords))


# ---------------------------------------------------------------------------
# presented -> table conversion


def table_from_algebra(
    algebra: FPAlgebra, max_dim: int = 64, require_nilpotent: bool = False, limits=None
):
    """Convert a finite-dimensional presented algebra to a table.

    Returns (table, basis monomials, coords) where coords maps a Poly to
    its coordinate vector.  Fails with ValueError when the monomial basis
    is infinite or larger than max_dim.  With require_nilpotent, every
    generator must be nilpotent (the random catalog sampler's precondition).
    """
    if require_nilpotent:
        for v in algebra.vars:
            if not radical_membership(
                Poly.variable(algebra.field, v), algebra.relations, limits
            ):
                raise ValueError("generator is not nilpotent")
    order = algebra.order()
    basis = algebra.relations.groebner_basis(order, limits)
    if any(g.is_constant() and not g.is_zero for g in basis):
        raise ValueError("zero ring has no table presentation")
    leads = [order.leading_monomial(g) for g in basis]
    bounds = {}
    for v in algebra.vars:
        pure = [e for m in leads for (w, e) in m if w == v and len(m) == 1]
        if not pure:
            raise ValueError(f"no pure power of {mon_render(((v, 1),))} in the leading ideal")
        bounds[v] = min(pure)

    def divisible(mon, lead):
        dm = dict(mon)
        return all(dm.get(v, 0) >= e for v, e in lead)

    monomials = []
    ranges = [range(bounds[v]) for v in algebra.vars]
    for exps in itertools.product(*ranges):
        mon = tuple((v, e) for v, e in zip(algebra.vars, exps) if e)
        if any(divisible(mon, lead) for lead in leads):
            continue
        monomials.append(mon)
        if len(monomials) > max_dim:
            raise ValueError(f"dimension exceeds {max_dim}")
    monomials.sort(key=order.key)  # the monomial 1 comes first
    index = {m: i for i, m in enumerate(monomials)}
    dim = len(monomials)

    def coords(f: Poly) -> tuple[int, ...]:
        r = algebra.nf(f, limits)
        out = [0] * dim
        for m, c in r.terms.items():
            out[index[m]] = c
        return tuple(out)

    mult = []
    for mi in monomials:
        row = []
        for mj in monomials:
            prod = Poly.term(algebra.field, mi, 1) * Poly.term(algebra.field, mj, 1)
            row.append(coords(prod))
        mult.append(tuple(row))
    labels = tuple(mon_render(m) for m in monomials)
    table = TableAlgebra(algebra.field, dim, labels, tuple(mult))
    return table, tuple(monomials), coords


def ideal_subspace(table, monomials, coords, algebra, gens):
    """Coordinate basis (rref rows) of the ideal generated by gens."""
    rows = []
    for g in gens:
        for m in monomials:
            rows.append(list(coords(g * Poly.term(algebra.field, m, 1))))
    reduced, pivots = rref(rows, table.field.p)
    return [tuple(r) for r in reduced], pivots


# ---------------------------------------------------------------------------
# square-zero pairs


@dataclass(frozen=True)
class SquareZeroPair:
    """(A, I) with I an ideal whose elements all have vanishing p-th power."""

    name: str
    ring: TableAlgebra
    ideal_basis: tuple[tuple[int, ...], ...]  # rref rows
    quotient: TableAlgebra = field(init=False, compare=False)
    _proj_rows: tuple = field(init=False, compare=False, repr=False)
    _lift_rows: tuple = field(init=False, compare=False, repr=False)
    _pivots: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        a = self.ring
        p = a.field.p
        rows, pivots = rref([list(r) for r in self.ideal_basis], p)
        object.__setattr__(self, "ideal_basis", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "_pivots", tuple(pivots))
        # ideal check: closed under multiplication by every basis element
        for v in rows:
            for i in range(a.dim):
                prod = a.mul(tuple(v), a.basis_vector(i))
                if not in_span(prod, rows, pivots, p):
                    raise ValueError("subspace is not an ideal")
        # bracket condition, exhaustively: a^p = 0 for every element of I
        for coeffs in itertools.product(range(p), repeat=len(rows)):
            v = a.zero
            for c, row in zip(coeffs, rows):
                v = a.add(v, a.scale(c, row))
            if a.power(v, p) != a.zero:
                raise ValueError("ideal element with nonzero p-th power")
        q_table, proj_rows, lift_rows = self._build_quotient(rows, pivots)
        object.__setattr__(self, "quotient", q_table)
        object.__setattr__(self, "_proj_rows", proj_rows)
        object.__setattr__(self, "_lift_rows", lift_rows)

    def _build_quotient(self, rows, pivots):
        a = self.ring
        p = a.field.p
        n = a.dim
        free_cols = [c for c in range(n) if c not in pivots]
        m = len(free_cols)
        if m == 0:  # pragma: no cover - 1 in I contradicts the bracket check
            raise ValueError("ideal is the whole ring")

        def residue_coords(vec):
            r = reduce_vector(vec, rows, pivots, p)
            return tuple(r[c] for c in free_cols)

        # choose a quotient basis with the image of 1 first
        u = residue_coords(a.one)
        basis_rows = [list(u)]
        span_rows, span_piv = rref(basis_rows, p)
        for i in range(m):
            if len(basis_rows) == m:
                break
            probe = [0] * m
            probe[i] = 1
            if in_span(probe, span_rows, span_piv, p):
                continue
            basis_rows.append(probe)
            span_rows, span_piv = rref(basis_rows, p)

        def to_new(qvec):
            coords = solve(basis_rows, list(qvec), p)
            if coords is None:  # pragma: no cover - basis spans
                raise InternalInconsistency("quotient basis does not span")
            return coords

        def lift_of_residue(qvec):
            # residue coords -> representative in A
            out = [0] * n
            for c, col in zip(qvec, free_cols):
                out[col] = c
            return tuple(out)

        new_reps = []
        for row in basis_rows:
            new_reps.append(lift_of_residue(row))
        mult = []
        for i in range(m):
            mrow = []
            for j in range(m):
                prod = a.mul(new_reps[i], new_reps[j])
                mrow.append(to_new(residue_coords(prod)))
            mult.append(tuple(mrow))
        labels = tuple(f"q{i}" for i in range(m))
        q_table = TableAlgebra(a.field, m, labels, tuple(mult))
        proj_rows = tuple(to_new(residue_coords(a.basis_vector(i))) for i in range(n))
        lift_rows = tuple(new_reps)
        return q_table, proj_rows, lift_rows

    def project(self, vec):
        p = self.ring.field.p
        out = [0] * self.quotient.dim
        for c, row in zip(vec, self._proj_rows):
            if c:
                for k in range(self.quotient.dim):
                    out[k] = (out[k] + c * row[k]) % p
        return tuple(out)

    def lift_representative(self, qvec):
        p = self.ring.field.p
        out = [0] * self.ring.dim
        for c, rep in zip(qvec, self._lift_rows):
            if c:
                for k in range(self.ring.dim):
                    out[k] = (out[k] + c * rep[k]) % p
        return tuple(out)

    def ideal_elements(self):
        p = self.ring.field.p
        for coeffs in itertools.product(range(p), repeat=len(self.ideal_basis)):
            v = self.ring.zero
            for c, row in zip(coeffs, self.ideal_basis):
                v = self.ring.add(v, self.ring.scale(c, row))
            yield v

    def preimages(self, qvec):
        rep = self.lift_representative(qvec)
        for w in self.ideal_elements():
            yield self.ring.add(rep, w)


# ---------------------------------------------------------------------------
# hom sets, lifts, tau


@dataclass(frozen=True)
class HomSet:
    source: FPAlgebra
    target: TableAlgebra
    maps: tuple[tuple[tuple[int, ...], ...], ...]  # generator image tuples


def enumerate_maps(source: FPAlgebra, target: TableAlgebra, budget=DEFAULT_BUDGET) -> HomSet:
    """All F_p-algebra maps source -> target, by exhaustive assignment."""
    if source.field.p != target.field.p:
        raise ValueError("prime mismatch")
    ngens = len(source.vars)
    total = (target.field.p ** target.dim) ** ngens
    if total > budget:
        raise BudgetExceeded(f"{total} assignments exceed budget {budget}")
    elements = list(target.elements())
    found = []
    for assign_tuple in itertools.product(elements, repeat=ngens):
        assign = dict(zip(source.vars, assign_tuple))
        if all(
            target.eval_poly(rel, assign) == target.zero
            for rel in source.relations.gens
        ):
            found.append(assign_tuple)
    return HomSet(source, target, tuple(found))


def commuting_squares(phi: AlgebraOver, pair: SquareZeroPair, budget=DEFAULT_BUDGET):
    """All (R -> A, S -> A/I) pairs making the lifting square commute."""
    r_homs = enumerate_maps(phi.base, pair.ring, budget)
    f_homs = enumerate_maps(phi.total, pair.quotient, budget)
    squares = []
    for r_images in r_homs.maps:
        r_assign = dict(zip(phi.base.vars, r_images))
        for f_images in f_homs.maps:
            f_assign = dict(zip(phi.total.vars, f_images))
            ok = True
            for i, _ in enumerate(phi.base.vars):
                lhs = pair.quotient.eval_poly(phi.structure.images[i], f_assign)
                rhs = pair.project(r_images[i])
                if lhs != rhs:
                    ok = False
                    break
            if ok:
                squares.append((r_images, f_images))
    return squares


def lifts(
    phi: AlgebraOver,
    pair: SquareZeroPair,
    r_images,
    f_images,
    budget=DEFAULT_BUDGET,
):
    """All R-algebra maps S -> A reducing to f modulo I."""
    s = phi.total
    a = pair.ring
    ngens = len(s.vars)
    per_gen = [list(pair.preimages(f_images[j])) for j in range(ngens)]
    total = 1
    for cands in per_gen:
        total *= len(cands)
    if total > budget:
        raise BudgetExceeded(f"{total} lift candidates exceed budget {budget}")
    r_assign_targets = list(r_images)
    out = []
    for assign_tuple in itertools.product(*per_gen):
        assign = dict(zip(s.vars, assign_tuple))
        if any(
            a.eval_poly(rel, assign) != a.zero for rel in s.relations.gens
        ):
            continue
        if any(
            a.eval_poly(phi.structure.images[i], assign) != r_assign_targets[i]
            for i in range(len(phi.base.vars))
        ):
            continue
        out.append(assign_tuple)
    return out


@dataclass(frozen=True)
class TauConstruction:
    """The canonical map twist -> A attached to a commuting square."""

    images: dict  # twist var -> element of A


def tau_construct(
    pair: SquareZeroPair,
    phi: AlgebraOver,
    twist_data,
    r_images,
    f_images,
    check_all_lifts: bool | None = None,
):
    """Build tau with tau(1 ⊗ s) = (any lift of f(s))^p and check it.

    The choice independence and both commuting triangles are asserted; a
    failure falsifies the implementation, not the theory, and raises
    InternalInconsistency.
    """
    a = pair.ring
    p = a.field.p
    s = phi.total
    if check_all_lifts is None:
        check_all_lifts = len(pair.ideal_basis) * len(s.vars) <= 8
    images = {}
    for i, v in enumerate(phi.base.vars):
        images[twist_data.twist.vars[i]] = r_images[i]
    nbase = len(phi.base.vars)
    for j, v in enumerate(s.vars):
        qv = f_images[j]
        rep = pair.lift_representative(qv)
        value = a.power(rep, p)
        if check_all_lifts:
            for cand in pair.preimages(qv):
                if a.power(cand, p) != value:
                    raise InternalInconsistency(
                        "tau value depends on the choice of lift"
                    )
        images[twist_data.twist.vars[nbase + j]] = value
    # well-definedness on the twist presentation
    for rel in twist_data.twist.relations.gens:
        if a.eval_poly(rel, images) != a.zero:
            raise InternalInconsistency("tau does not kill a twist relation")
    # triangle through R: tau ∘ from_FstarR == the given R -> A
    for i, v in enumerate(phi.base.vars):
        lhs = a.eval_poly(twist_data.from_FstarR.images[i], images)
        if lhs != r_images[i]:
            raise InternalInconsistency("tau fails the bottom triangle")
    # triangle through S: proj ∘ tau == f ∘ rel_frob
    f_assign = dict(zip(s.vars, f_images))
    for k, v in enumerate(twist_data.twist.vars):
        lhs = pair.project(a.eval_poly(Poly.variable(a.field, v), images))
        rhs = pair.quotient.eval_poly(twist_data.rel_frob.images[k], f_assign)
        if lhs != rhs:
            raise InternalInconsistency("tau fails the top triangle")
    return TauConstruction(images)


# ---------------------------------------------------------------------------
# crosscheck


@dataclass(frozen=True)
class InstanceReport:
    name: str
    squares: int
    lift_counts: tuple[int, ...]
    multi_lift_example: tuple | None
    skipped: str = ""


@dataclass(frozen=True)
class CrosscheckReport:
    instances: tuple[InstanceReport, ...]
    violations: tuple[str, ...]
    etale_yes: bool
    surjective_yes: bool

    @property
    def ok(self) -> bool:
        return not self.violations

    def multi_lift_witnesses(self):
        return [
            (inst.name, inst.multi_lift_example)
            for inst in self.instances
            if inst.multi_lift_example is not None
        ]


def crosscheck(
    phi: AlgebraOver,
    catalog,
    classification=None,
    budget=DEFAULT_BUDGET,
    limits=None,
    check_tau: bool = True,
) -> CrosscheckReport:
    """Test every catalog instance against the symbolic verdicts.

    Violations (empty on a correct engine): a b-nil formally étale Yes with
    lift count != 1, a surjective relative Frobenius with more than one
    lift, two lifts disagreeing after composition with the relative
    Frobenius, or a tau assertion failure.
    """
    from . import decide

    if classification is None:
        classification = decide.classify(phi, limits=limits)
    td = classification.twist_data
    etale_yes = classification.b_nil_formally_etale.status is decide.Status.YES
    surj_yes = classification.rel_frob_surjective.status is decide.Status.YES
    s = phi.total
    a_field_p = phi.base.field.p
    instances = []
    violations = []
    for pair in catalog:
        if pair.ring.field.p != a_field_p:
            instances.append(InstanceReport(pair.name, 0, (), None, "prime mismatch"))
            continue
        try:
            squares = commuting_squares(phi, pair, budget)
        except BudgetExceeded as exc:
            instances.append(InstanceReport(pair.name, 0, (), None, f"skipped: {exc}"))
            continue
        lift_counts = []
        multi = None
        for r_images, f_images in squares:
            try:
                found = lifts(phi, pair, r_images, f_images, budget)
            except BudgetExceeded as exc:
                instances.append(
                    InstanceReport(pair.name, len(squares), (), None, f"skipped: {exc}")
                )
                break
            lift_counts.append(len(found))
            if len(found) > 1 and multi is None:
                multi = (r_images, f_images, tuple(found[:2]))
            if etale_yes and len(found) != 1:
                violations.append(
                    f"{pair.name}: étale verdict but {len(found)} lifts"
                )
            if surj_yes and len(found) > 1:
                violations.append(
                    f"{pair.name}: surjective relative Frobenius but {len(found)} lifts"
                )
            # lift rigidity: any two lifts agree after the relative Frobenius
            if td is not None and len(found) > 1:
                for g_idx in range(len(found)):
                    for h_idx in range(g_idx + 1, len(found)):
                        g_assign = dict(zip(s.vars, found[g_idx]))
                        h_assign = dict(zip(s.vars, found[h_idx]))
                        for img in td.rel_frob.images:
                            gv = pair.ring.eval_poly(img, g_assign)
                            hv = pair.ring.eval_poly(img, h_assign)
                            if gv != hv:
                                violations.append(
                                    f"{pair.name}: lifts disagree after the relative Frobenius"
                                )
                                break
            if check_tau and td is not None:
                try:
                    tau_construct(pair, phi, td, r_images, f_images)
                except InternalInconsistency as exc:
                    violations.append(f"{pair.name}: {exc}")
        else:
            instances.append(
                InstanceReport(pair.name, len(squares), tuple(lift_counts), multi)
            )
    return CrosscheckReport(
        tuple(instances), tuple(violations), etale_yes, surj_yes
    )


# ---------------------------------------------------------------------------
# the default catalog and its file format


def _pair_from_algebra(name, algebra, ideal_gens, limits=None) -> SquareZeroPair:
    table, monomials, coords = table_from_algebra(algebra, limits=limits)
    rows, _ = ideal_subspace(table, monomials, coords, algebra, ideal_gens)
    return SquareZeroPair(name, table, tuple(rows))


def _truncation(p, k, name="a") -> FPAlgebra:
    from .polyring import var

    v = var(name)
    fld = GF(p)
    g = Poly.variable(fld, v)
    return FPAlgebra(fld, (v,), (g**k,))


def default_catalog(p: int = 2, seed: int = 0, min_size: int = 15):
    """Curated square-zero pairs plus a seeded sampler to reach min_size."""
    from .algebra import galois_field
    from .polyring import var

    fld = GF(p)
    out = []

    dual = _truncation(p, 2, "eps")
    eps = Poly.variable(fld, var("eps"))
    out.append(_pair_from_algebra(f"dual-numbers(p={p})", dual, [eps]))

    trunc3 = _truncation(p, 3, "a")
    a = Poly.variable(fld, var("a"))
    if p >= 3:
        out.append(_pair_from_algebra(f"truncation(3,1;p={p})", trunc3, [a]))
    out.append(_pair_from_algebra(f"truncation(3,2;p={p})", trunc3, [a**2]))
    trunc4 = _truncation(p, 4, "a")
    if p == 2:
        out.append(_pair_from_algebra(f"truncation(4,2;p={p})", trunc4, [a**2]))
    out.append(_pair_from_algebra(f"truncation(4,3;p={p})", trunc4, [a**3]))

    gf = galois_field(p, 2)
    table, _, _ = table_from_algebra(gf)
    out.append(SquareZeroPair(f"GF({p}^2)", table, ()))

    # two-variable square-zero ring with its maximal ideal
    x2, y2 = var("u#cat"), var("v#cat")
    u, v = Poly.variable(fld, x2), Poly.variable(fld, y2)
    sq = FPAlgebra(fld, (x2, y2), (u**2, v**2, u * v))
    out.append(_pair_from_algebra(f"square-zero-plane(p={p})", sq, [u, v]))

    # products of the small ones
    d_pair = out[0]
    t_pair = next(o for o in out if o.name.startswith("truncation(3,2"))
    out.append(product_pair(f"dual x truncation(3,2) (p={p})", d_pair, t_pair))
    out.append(product_pair(f"dual x dual (p={p})", d_pair, d_pair))

    rng = random.Random(seed)
    tries = 0
    while len(out) < min_size and tries < 400:
        tries += 1
        pair = _sample_pair(p, rng, tries)
        if pair is not None:
            out.append(pair)
    if len(out) < min_size:  # pragma: no cover - sampler always succeeds
        raise InternalInconsistency("could not build the default catalog")
    return out


def _sample_pair(p, rng, tag):
    """One random monomial-quotient pair, or None when rejected."""
    from .polyring import var

    fld = GF(p)
    nvars = rng.choice([1, 1, 2])
    names = [f"s{i}#cat" for i in range(nvars)]
    vs = tuple(var(n) for n in names)
    gens = [Poly.variable(fld, v) for v in vs]
    rels = []
    for g in gens:
        rels.append(g ** rng.randint(2, 3 if p == 2 else 2))
    if nvars == 2 and rng.random() < 0.5:
        rels.append(gens[0] * gens[1])
    algebra = FPAlgebra(fld, vs, rels)
    try:
        table, monomials, coords = table_from_algebra(algebra, max_dim=6, require_nilpotent=True)
    except ValueError:
        return None
    # candidate ideal: generated by powers of the generators
    ideal_gens = []
    for g in gens:
        e = rng.randint(1, 2)
        ideal_gens.append(g**e)
    rows, pivots = ideal_subspace(table, monomials, coords, algebra, ideal_gens)
    if not rows:
        return None
    try:
        return SquareZeroPair(f"sampled-{tag}(p={p})", table, tuple(rows))
    except ValueError:
        return None


def save_catalog(pairs, path):
    """Write pairs in the text format: dim, row-major constants, ideal indices."""
    lines = ["# square-zero pair catalog"]
    for pair in pairs:
        a = pair.ring
        lines.append("pair " + pair.name.replace(" ", "_"))
        lines.append(f"prime {a.field.p}")
        lines.append(f"dim {a.dim}")
        flat = []
        for i in range(a.dim):
            for j in range(a.dim):
                flat.extend(a.mult[i][j])
        lines.append("mult " + " ".join(str(c) for c in flat))
        idx = []
        for row in pair.ideal_basis:
            ones = [k for k, c in enumerate(row) if c]
            if len(ones) != 1 or row[ones[0]] != 1:
                raise ValueError(
                    "catalog format stores ideals spanned by basis elements only"
                )
            idx.append(ones[0])
        lines.append("ideal " + " ".join(str(i) for i in sorted(idx)))
        lines.append("end")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_catalog(path):
    """Read the text catalog format written by save_catalog."""
    pairs = []
    state = None
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            words = line.split()
            if words[0] == "pair":
                state = {"name": words[1] if len(words) > 1 else f"pair{len(pairs)}"}
            elif words[0] == "prime":
                state["p"] = int(words[1])
            elif words[0] == "dim":
                state["dim"] = int(words[1])
            elif words[0] == "mult":
                state["mult"] = [int(w) for w in words[1:]]
            elif words[0] == "ideal":
                state["ideal"] = [int(w) for w in words[1:]]
            elif words[0] == "end":
                p, dim = state["p"], state["dim"]
                flat = state["mult"]
                if len(flat) != dim**3:
                    raise ValueError("mult must list dim^3 base-10 integers")
                mult = tuple(
                    tuple(
                        tuple(flat[(i * dim + j) * dim : (i * dim + j) * dim + dim])
                        for j in range(dim)
                    )
                    for i in range(dim)
                )
                table = TableAlgebra(
                    GF(p), dim, tuple(f"e{i}" for i in range(dim)), mult
                )
                rows = tuple(table.basis_vector(i) for i in state.get("ideal", []))
                pairs.append(SquareZeroPair(state["name"], table, rows))
                state = None
    return pairs
