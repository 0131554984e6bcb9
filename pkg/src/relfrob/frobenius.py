"""Frobenius twists, relative Frobenius maps, and dominating covers.

Given phi: R -> S with structure images rho(x_i), the e-th twist is
presented on fresh copies xbar_i of R's generators plus S's own
generators, with relations

    I(xbar)  +  J(y)  +  ( xbar_i^{p^e} - rho(x_i)(y) ),

the gluing coming from R acting on the left factor through the e-th power
map.  The relative Frobenius sends xbar_i to rho(x_i) and y_j to y_j^{p^e}.
This gluing is the most error-prone construction in the engine, so both
commuting-triangle identities are re-checked on every build; a failure is
an InternalInconsistency, never a user error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraOver, FPAlgebra, Pushout, RingMap, compose, make_map, tensor_over
from .errors import InternalInconsistency, NotWellDefined
from .groebner import Ideal
from .polyring import Poly, derived_var, var

MAX_TWIST_EXPONENT = 6


@dataclass(frozen=True)
class TwistData:
    """The twist S^{(p^e)} with its two structure maps and F^e_phi."""

    e: int
    phi: AlgebraOver
    twist: FPAlgebra
    from_FstarR: RingMap  # F*^e R -> twist (left factor)
    from_S: RingMap  # S -> twist (right factor)
    rel_frob: RingMap  # twist -> S


def twist(phi: AlgebraOver, e: int = 1, limits=None) -> TwistData:
    if not 1 <= e <= MAX_TWIST_EXPONENT:
        raise ValueError(f"twist exponent must be in [1, {MAX_TWIST_EXPONENT}]")
    r, s, rho = phi.base, phi.total, phi.structure
    fld = r.field
    q = fld.p**e
    taken = set(r.vars) | set(s.vars)
    copies: dict[int, int] = {}
    for v in r.vars:
        nv = derived_var(v, "#fr", taken)
        taken.add(nv)
        copies[v] = nv
    rels = [g.rename(copies) for g in r.relations.gens]
    rels += list(s.relations.gens)
    for i, v in enumerate(r.vars):
        xbar = Poly.variable(fld, copies[v])
        rels.append(xbar**q - rho.images[i])
    tw = FPAlgebra(fld, tuple(copies[v] for v in r.vars) + s.vars, rels)
    try:
        from_FstarR = make_map(
            r, tw, [Poly.variable(fld, copies[v]) for v in r.vars], limits
        )
        from_S = make_map(s, tw, [Poly.variable(fld, v) for v in s.vars], limits)
        rel_frob = make_map(
            tw,
            s,
            list(rho.images) + [Poly.variable(fld, v) ** q for v in s.vars],
            limits,
        )
    except NotWellDefined as exc:  # pragma: no cover - constructor bug guard
        raise InternalInconsistency(f"twist construction broke: {exc}") from exc
    # triangle identities of the defining diagram
    if compose(rel_frob, from_S, limits) != absolute_frobenius(s, e, limits):
        raise InternalInconsistency("rel_frob ∘ from_S is not the absolute Frobenius")
    if compose(rel_frob, from_FstarR, limits) != rho:
        raise InternalInconsistency("rel_frob ∘ from_FstarR is not the structure map")
    return TwistData(e, phi, tw, from_FstarR, from_S, rel_frob)


def relative_frobenius(phi: AlgebraOver, e: int = 1, limits=None) -> RingMap:
    return twist(phi, e, limits).rel_frob


def absolute_frobenius(s: FPAlgebra, e: int = 1, limits=None) -> RingMap:
    """The self-map raising every generator to the p^e-th power."""
    if e < 1:
        raise ValueError("e must be >= 1")
    q = s.field.p**e
    return make_map(s, s, [Poly.variable(s.field, v) ** q for v in s.vars], limits)


@dataclass(frozen=True)
class CoverData:
    """The surjection S' -> S with bracket-nil kernel dominating S."""

    cover: FPAlgebra
    surjection: RingMap
    kernel: Ideal  # of the cover presentation; its p-bracket power vanishes
    twist_data: TwistData
    adjoined: tuple[int, ...]  # the p-th-root variables, one per generator


def adjoin_pth_roots(td: TwistData, gens) -> tuple[FPAlgebra, RingMap, tuple[int, ...]]:
    """Extend the twist by T_i with T_i^p = (1 ⊗ f_i) and map onto S.

    The returned map acts as the relative Frobenius on the twist part and
    sends T_i to f_i; it is the common core of the dominating cover and of
    the p-basis test.
    """
    s = td.phi.total
    fld = s.field
    gens = tuple(gens)
    taken = set(td.twist.vars) | set(s.vars)
    adjoined = []
    rels = list(td.twist.relations.gens)
    for i, f in enumerate(gens):
        t = var(f"T{i}#cv")
        n = 2
        while t in taken:
            t = var(f"T{i}#cv{n}")
            n += 1
        taken.add(t)
        adjoined.append(t)
        rels.append(Poly.variable(fld, t) ** fld.p - td.from_S.apply(f))
    cover = FPAlgebra(fld, td.twist.vars + tuple(adjoined), rels)
    try:
        onto = make_map(cover, s, list(td.rel_frob.images) + list(gens))
    except NotWellDefined as exc:  # pragma: no cover - constructor bug guard
        raise InternalInconsistency(f"cover surjection broke: {exc}") from exc
    return cover, onto, tuple(adjoined)


def dominating_cover(phi: AlgebraOver, gens=None, limits=None) -> CoverData:
    """Lemma-style cover S' = S^{(p)}[T_i]/(T_i^p - (1 ⊗ f_i)) ->> S.

    `gens` must generate S as an algebra over the twist; the default (all
    generators of S) always does.  User-supplied generators are trusted:
    if they do not generate, the surjectivity check below fails and the
    construction is rejected.
    """
    from . import decide

    s = phi.total
    if gens is None:
        gens = s.gen_polys()
    td = twist(phi, 1, limits)
    cover, onto, adjoined = adjoin_pth_roots(td, gens)
    surj = decide.is_surjective(onto, limits)
    if surj.status is not decide.Status.YES:
        raise InternalInconsistency(
            "cover map is not surjective; the supplied generators do not "
            "generate S over the twist"
        )
    ker = decide.kernel(onto, limits)
    for g in ker.gens:
        if not cover.relations.contains(g.frobenius(1), limits=limits):
            raise InternalInconsistency(
                "cover kernel p-bracket power does not vanish"
            )
    return CoverData(cover, onto, ker, td, adjoined)


@dataclass(frozen=True)
class BaseChangeComparison:
    """Twist of the base-changed map vs. base change of the twist.

    `comparison` maps the twist of T -> S ⊗_R T isomorphically onto
    twist(phi) ⊗_R T and intertwines the two relative Frobenius maps.
    """

    pushout: Pushout  # S ⊗_R T
    twisted_pushout: TwistData  # twist of T -> S ⊗_R T
    tensor_of_twist: Pushout  # twist(phi) ⊗_R T
    comparison: RingMap
    base_changed_frobenius: RingMap  # twist(phi) ⊗_R T -> S ⊗_R T


def base_change_comparison(
    phi: AlgebraOver, psi: AlgebraOver, limits=None
) -> BaseChangeComparison:
    """Construct the canonical comparison for S, T over R.

    With phi: R -> S and psi: R -> T, both sides present the twist of the
    base-changed map T -> S ⊗_R T.  Generators map as: copies of T's
    generators to the right factor, the S-copy to the twist's S-copy, and
    the T-copy to the p-th power of the right factor.
    """
    r = phi.base
    if psi.base != r:
        raise ValueError("both maps must share the base")
    fld = r.field
    push = tensor_over(r, phi, psi)
    phi_t = AlgebraOver(psi.total, push.tensor, push.from_right)
    twisted = twist(phi_t, 1, limits)

    td = twist(phi, 1, limits)
    td_over = AlgebraOver(r, td.twist, td.from_FstarR)
    big = tensor_over(r, td_over, psi)

    s, t = phi.total, psi.total
    images = []
    # copies of T's generators made by the twist constructor
    for i, _ in enumerate(t.vars):
        images.append(big.from_right.images[i])
    # the S-copy inside S ⊗_R T
    s_copy_in_twist = {
        orig: img for orig, img in zip(s.vars, td.from_S.images)
    }
    for v in s.vars:
        inside_twist = s_copy_in_twist[v]
        images.append(big.from_left.apply(inside_twist, limits))
    # the T-copy inside S ⊗_R T maps to the p-th power of the right factor
    for i, _ in enumerate(t.vars):
        images.append(big.from_right.images[i] ** fld.p)
    try:
        comparison = make_map(twisted.twist, big.tensor, images, limits)
        # the base change of rel_frob along T, landing back in S ⊗_R T
        bc_images = [push.from_left.apply(img, limits) for img in td.rel_frob.images]
        bc_images += list(push.from_right.images)
        base_changed = make_map(big.tensor, push.tensor, bc_images, limits)
    except NotWellDefined as exc:  # pragma: no cover - constructor bug guard
        raise InternalInconsistency(f"comparison construction broke: {exc}") from exc

    # intertwining: F_{phi_T} == base_changed ∘ comparison
    if compose(base_changed, comparison, limits) != twisted.rel_frob:
        raise InternalInconsistency(
            "comparison map does not intertwine the relative Frobenius maps"
        )
    return BaseChangeComparison(push, twisted, big, comparison, base_changed)
