"""Finitely presented F_p-algebras and presented ring homomorphisms.

An FPAlgebra is F_p[vars]/relations with the presentation immutable and
derived data (Groebner bases, the zero-ring flag) cached lazily.  A RingMap
stores one image polynomial per domain generator, normal-formed against the
codomain relations under the codomain's default order, so map equality is
syntactic equality of images.  Well-definedness is checked at construction:
every domain relation must land in the codomain relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import DomainMismatch, NotWellDefined
from .groebner import Ideal
from .polyring import GF, Grevlex, Poly, PrimeField, derived_var, var


class FPAlgebra:
    __slots__ = ("field", "vars", "relations", "_zero", "_cache")

    def __init__(self, fld: PrimeField, vars, relations):
        self.field = fld
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate presentation variables")
        if isinstance(relations, Ideal):
            if relations.field.p != fld.p or relations.vars != self.vars:
                relations = Ideal(fld, self.vars, relations.gens)
        else:
            relations = Ideal(fld, self.vars, tuple(relations))
        self.relations = relations
        self._zero = None
        self._cache = {}

    # -- structure

    def order(self) -> Grevlex:
        return Grevlex(self.vars)

    def gen_poly(self, vid: int) -> Poly:
        return Poly.variable(self.field, vid)

    def gen_polys(self) -> tuple[Poly, ...]:
        return tuple(Poly.variable(self.field, v) for v in self.vars)

    def nf(self, f: Poly, limits=None) -> Poly:
        """Canonical representative of f modulo the relations."""
        return self.relations.normal_form(f, self.order(), limits)

    def is_zero_ring(self, limits=None) -> bool:
        """True when 1 lies in the relations; permitted but flagged."""
        if self._zero is None:
            self._zero = self.relations.is_unit_ideal(limits)
        return self._zero

    def ideal(self, gens) -> Ideal:
        return Ideal(self.field, self.vars, tuple(gens))

    # -- value semantics on the presentation

    def __eq__(self, other):
        if not isinstance(other, FPAlgebra):
            return NotImplemented
        return (
            self.field.p == other.field.p
            and self.vars == other.vars
            and self.relations.gens == other.relations.gens
        )

    def __hash__(self):
        return hash((self.field.p, self.vars, self.relations.gens))

    def render(self) -> str:
        from .polyring import var_name

        names = ", ".join(var_name(v) for v in self.vars)
        rels = ", ".join(g.render() for g in self.relations.gens)
        if not self.vars:
            return f"F_{self.field.p}"
        base = f"F_{self.field.p}[{names}]"
        return f"{base}/({rels})" if rels else base

    def __repr__(self):
        return self.render()


def base_field_algebra(fld: PrimeField) -> FPAlgebra:
    """F_p presented with no generators; the initial object."""
    return FPAlgebra(fld, (), ())


def free_algebra(fld: PrimeField, *names: str) -> FPAlgebra:
    return FPAlgebra(fld, tuple(var(n) for n in names), ())


@dataclass(frozen=True)
class RingMap:
    """A presented homomorphism dom -> cod, one image per dom generator."""

    dom: FPAlgebra
    cod: FPAlgebra
    images: tuple[Poly, ...]
    verified: bool = True
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def image_of(self, vid: int) -> Poly:
        return self.images[self.dom.vars.index(vid)]

    def substitution(self) -> dict[int, Poly]:
        return dict(zip(self.dom.vars, self.images))

    def apply(self, f: Poly, limits=None) -> Poly:
        """Image of a dom element, normal-formed in cod."""
        return self.cod.nf(f.subs(self.substitution()), limits)

    def render(self) -> str:
        from .polyring import var_name

        inner = ", ".join(
            f"{var_name(v)} -> {img.render()}"
            for v, img in zip(self.dom.vars, self.images)
        )
        return "{" + inner + "}"

    def __repr__(self):
        return f"RingMap({self.dom!r} -> {self.cod!r}, {self.render()})"


def make_map(dom: FPAlgebra, cod: FPAlgebra, images, limits=None) -> RingMap:
    """Build a verified RingMap; raises NotWellDefined when a relation breaks."""
    images = tuple(images)
    if len(images) != len(dom.vars):
        raise ValueError(
            f"expected {len(dom.vars)} images, got {len(images)}"
        )
    normed = []
    for img in images:
        if img.field.p != cod.field.p:
            raise ValueError("image over a different prime field")
        extra = img.vars_used() - set(cod.vars)
        if extra:
            raise ValueError(f"image uses variables outside the codomain: {extra}")
        normed.append(cod.nf(img, limits))
    normed = tuple(normed)
    subst = dict(zip(dom.vars, normed))
    for rel in dom.relations.gens:
        residue = cod.nf(rel.subs(subst), limits)
        if not residue.is_zero:
            raise NotWellDefined(rel.render(), residue.render())
    return RingMap(dom, cod, normed)


def identity_map(a: FPAlgebra) -> RingMap:
    return RingMap(a, a, tuple(a.nf(g) for g in a.gen_polys()))


def compose(psi: RingMap, phi: RingMap, limits=None) -> RingMap:
    """psi after phi; requires phi.cod and psi.dom to be the same presentation."""
    if phi.cod != psi.dom:
        raise DomainMismatch("codomain of inner map differs from domain of outer map")
    images = tuple(psi.apply(img, limits) for img in phi.images)
    return RingMap(phi.dom, psi.cod, images)


@dataclass(frozen=True)
class AlgebraOver:
    """S as an R-algebra: the structure map is always explicit."""

    base: FPAlgebra
    total: FPAlgebra
    structure: RingMap

    def __post_init__(self):
        if self.structure.dom != self.base or self.structure.cod != self.total:
            raise ValueError("structure map does not match base/total")
        if not self.structure.verified:
            raise ValueError("structure map must be verified")


def algebra_over(structure: RingMap) -> AlgebraOver:
    return AlgebraOver(structure.dom, structure.cod, structure)


def over_base_field(total: FPAlgebra) -> AlgebraOver:
    """total as an algebra over its own prime field."""
    return algebra_over(make_map(base_field_algebra(total.field), total, ()))


@dataclass(frozen=True)
class Pushout:
    """S ⊗_R T with its two coprojections and the induced base structure."""

    tensor: FPAlgebra
    from_left: RingMap
    from_right: RingMap
    over: AlgebraOver


def tensor_over(r: FPAlgebra, s_over: AlgebraOver, t_over: AlgebraOver) -> Pushout:
    """Pushout presentation of S ⊗_R T.

    Variables are renamed copies (#L for S, #R for T); relations are both
    sets of renamed relations plus one gluing relation per generator of R
    identifying the two images of that generator.
    """
    if s_over.base != r or t_over.base != r:
        raise ValueError("both factors must share the base")
    s, t = s_over.total, t_over.total
    fld = r.field
    taken = set(r.vars) | set(s.vars) | set(t.vars)
    left_map: dict[int, int] = {}
    for v in s.vars:
        nv = derived_var(v, "#L", taken)
        taken.add(nv)
        left_map[v] = nv
    right_map: dict[int, int] = {}
    for v in t.vars:
        nv = derived_var(v, "#R", taken)
        taken.add(nv)
        right_map[v] = nv
    rels = [g.rename(left_map) for g in s.relations.gens]
    rels += [g.rename(right_map) for g in t.relations.gens]
    for i, _ in enumerate(r.vars):
        lhs = s_over.structure.images[i].rename(left_map)
        rhs = t_over.structure.images[i].rename(right_map)
        rels.append(lhs - rhs)
    tensor = FPAlgebra(
        fld,
        tuple(left_map[v] for v in s.vars) + tuple(right_map[v] for v in t.vars),
        rels,
    )
    from_left = make_map(s, tensor, [Poly.variable(fld, left_map[v]) for v in s.vars])
    from_right = make_map(t, tensor, [Poly.variable(fld, right_map[v]) for v in t.vars])
    structure = compose(from_left, s_over.structure)
    other = compose(from_right, t_over.structure)
    if structure != other:
        raise AssertionError("pushout legs disagree on the base")
    return Pushout(tensor, from_left, from_right, AlgebraOver(r, tensor, structure))


def quotient(s: FPAlgebra, extra) -> tuple[FPAlgebra, RingMap]:
    """S/extra with the identity-on-generators projection."""
    if isinstance(extra, Ideal):
        extra_gens = extra.gens
        if set(extra.vars) - set(s.vars):
            raise ValueError("quotient ideal outside the presentation variables")
    else:
        extra_gens = tuple(extra)
    q = FPAlgebra(s.field, s.vars, s.relations.gens + tuple(extra_gens))
    proj = make_map(s, q, [Poly.variable(s.field, v) for v in s.vars])
    return q, proj


# ---------------------------------------------------------------------------
# stock constructions used by the corpus


def _poly1_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and any(a):
        shift = len(a) - 1 - dm
        c = (a[-1] * inv) % p
        for i, cm in enumerate(m):
            a[shift + i] = (a[shift + i] - c * cm) % p
        while len(a) > 1 and a[-1] == 0:
            a.pop()
    return a


def _poly1_is_irreducible(f, p):
    """Trial division by all monic polynomials of degree <= deg(f)/2."""
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            rem = _poly1_mod(f, g, p)
            if len(rem) == 1 and rem[0] == 0:
                return False
    return True


def irreducible_poly(p: int, k: int) -> list[int]:
    """Deterministic monic irreducible of degree k over F_p (little-endian)."""
    if k == 1:
        return [0, 1]
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if f[0] == 0:
            continue  # reducible: divisible by x
        if _poly1_is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


def galois_field(p: int, k: int, name: str = "y") -> FPAlgebra:
    """F_{p^k} presented as F_p[name]/(irreducible of degree k)."""
    fld = GF(p)
    if k == 1:
        return base_field_algebra(fld)
    v = var(name)
    coeffs = irreducible_poly(p, k)
    g = Poly.variable(fld, v)
    rel = Poly.zero(fld)
    for i, c in enumerate(coeffs):
        rel = rel + (g**i).scale(c)
    return FPAlgebra(fld, (v,), (rel,))


def truncated_family(p: int, n: int, prefix: str = "x") -> tuple[FPAlgebra, Ideal]:
    """The length-n truncation of the idempotent-ideal family.

    Variables x_0..x_n with relations x_i^p for every i and
    x_i - x_{i+1}*x_{i+2} for i <= n-2; returns the algebra together with
    the ideal generated by all the variables.
    """
    fld = GF(p)
    vs = tuple(var(f"{prefix}_{i}") for i in range(n + 1))
    gens = [Poly.variable(fld, v) for v in vs]
    rels = [g**p for g in gens]
    rels += [gens[i] - gens[i + 1] * gens[i + 2] for i in range(n - 1)]
    algebra = FPAlgebra(fld, vs, rels)
    return algebra, algebra.ideal(gens)
