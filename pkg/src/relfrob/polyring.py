"""Sparse multivariate polynomials over prime fields F_p.

Representation:

  * a variable is an interned integer id; the process-wide registry maps
    names to ids, so equal names always denote the same variable,
  * a monomial is a tuple ``((vid, exp), ...)`` sorted by vid with every
    exponent positive; the empty tuple is the monomial 1,
  * a Poly maps monomials to coefficients in ``[1, p)``; the zero
    polynomial stores no terms, so equal term dicts <=> equal polynomials.

Monomial orders (lex, grevlex, elimination blocks) are value objects that
produce sort keys; term storage itself is unordered.  All values here are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import MixedPrime, Overflow

#: Total degree beyond which arithmetic refuses to proceed.
DEGREE_CAP = 1 << 20


# ---------------------------------------------------------------------------
# prime fields


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p.  Scalars are canonical representatives in [0, p)."""

    p: int

    def __post_init__(self):
        if not (2 <= self.p < 2**31) or not _is_prime(self.p):
            raise ValueError(f"p must be a prime in [2, 2^31), got {self.p}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


# ---------------------------------------------------------------------------
# variable registry

_reg_lock = threading.Lock()
_names: list[str] = []
_ids: dict[str, int] = {}


def var(name: str) -> int:
    """Intern `name` and return its variable id."""
    with _reg_lock:
        vid = _ids.get(name)
        if vid is None:
            vid = len(_names)
            _names.append(name)
            _ids[name] = vid
        return vid


def variables(*names: str) -> tuple[int, ...]:
    return tuple(var(n) for n in names)


def var_name(vid: int) -> str:
    return _names[vid]


def derived_var(vid: int, suffix: str, taken=()) -> int:
    """A variable named after `vid` plus `suffix`, avoiding ids in `taken`.

    Deterministic: the same base name and suffix always yield the same id,
    escalating to suffix2, suffix3, ... only while the candidate collides
    with `taken`.  Engine suffixes contain '#', which the script language
    does not allow in identifiers, so user variables are never shadowed.
    """
    taken = set(taken)
    base = var_name(vid)
    candidate = var(base + suffix)
    n = 2
    while candidate in taken:
        candidate = var(f"{base}{suffix}{n}")
        n += 1
    return candidate


def fresh_var(base: str) -> int:
    """A brand-new variable whose name starts with `base`."""
    with _reg_lock:
        if base not in _ids:
            name = base
        else:
            n = 2
            while f"{base}_{n}" in _ids:
                n += 1
            name = f"{base}_{n}"
        vid = len(_names)
        _names.append(name)
        _ids[name] = vid
        return vid


# ---------------------------------------------------------------------------
# monomials: sorted tuples of (vid, exp)

MON_ONE: tuple = ()


def mon_from_dict(d: dict[int, int]) -> tuple:
    return tuple(sorted((v, e) for v, e in d.items() if e))


def mon_degree(m) -> int:
    return sum(e for _, e in m)


def mon_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    m = tuple(sorted(d.items()))
    if mon_degree(m) > DEGREE_CAP:
        raise Overflow(f"monomial degree exceeds cap {DEGREE_CAP}")
    return m


def mon_pow(m, k: int):
    if k == 0 or not m:
        return MON_ONE
    if mon_degree(m) * k > DEGREE_CAP:
        raise Overflow(f"monomial degree exceeds cap {DEGREE_CAP}")
    return tuple((v, e * k) for v, e in m)


def mon_divides(a, b) -> bool:
    """True when monomial a divides b."""
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def mon_div(b, a):
    """b / a, or None when a does not divide b."""
    d = dict(b)
    for v, e in a:
        r = d.get(v, 0) - e
        if r < 0:
            return None
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def mon_lcm(a, b):
    d = dict(a)
    for v, e in b:
        if e > d.get(v, 0):
            d[v] = e
    return tuple(sorted(d.items()))


def mon_vars(m) -> set[int]:
    return {v for v, _ in m}


def mon_render(m) -> str:
    if not m:
        return "1"
    parts = []
    for v, e in m:
        n = var_name(v)
        parts.append(n if e == 1 else f"{n}^{e}")
    return "*".join(parts)


# ---------------------------------------------------------------------------
# monomial orders

SEG_LEX = 0
SEG_GREVLEX = 1


def segment_key(exps, segments):
    """Sort key of a dense exponent tuple under (kind, length) segments."""
    key = []
    pos = 0
    for kind, n in segments:
        chunk = exps[pos : pos + n]
        if kind == SEG_LEX:
            key.extend(chunk)
        else:
            key.append(sum(chunk))
            key.extend(-e for e in reversed(chunk))
        pos += n
    return tuple(key)


class MonomialOrder:
    """A total multiplicative monomial order with 1 minimal.

    `vars` lists the slots most-significant first; `segments()` describes
    how the dense exponent vector is compared.
    """

    vars: tuple[int, ...]

    def segments(self) -> tuple[tuple[int, int], ...]:
        raise NotImplementedError

    @cached_property
    def _index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vars)}

    def dense(self, mon) -> tuple[int, ...]:
        exps = [0] * len(self.vars)
        idx = self._index
        for v, e in mon:
            exps[idx[v]] = e
        return tuple(exps)

    def key(self, mon):
        return segment_key(self.dense(mon), self.segments())

    def leading_monomial(self, poly: "Poly"):
        if not poly.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(poly.terms, key=self.key)

    def sorted_terms(self, poly: "Poly"):
        """Terms of `poly` in descending order."""
        return sorted(poly.terms.items(), key=lambda kv: self.key(kv[0]), reverse=True)


@dataclass(frozen=True)
class Lex(MonomialOrder):
    vars: tuple[int, ...]

    def segments(self):
        return ((SEG_LEX, len(self.vars)),)


@dataclass(frozen=True)
class Grevlex(MonomialOrder):
    vars: tuple[int, ...]

    def segments(self):
        return ((SEG_GREVLEX, len(self.vars)),)


@dataclass(frozen=True)
class Block(MonomialOrder):
    """Elimination order: every monomial meeting `front` exceeds all that don't."""

    front: MonomialOrder
    back: MonomialOrder

    def __post_init__(self):
        overlap = set(self.front.vars) & set(self.back.vars)
        if overlap:
            raise ValueError(f"block order with overlapping variables {overlap}")
        object.__setattr__(self, "vars", self.front.vars + self.back.vars)

    def segments(self):
        return self.front.segments() + self.back.segments()


def elimination_order(front_vars, back_vars) -> Block:
    return Block(Grevlex(tuple(front_vars)), Grevlex(tuple(back_vars)))


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """An element of F_p[x_1, ..., x_n] in canonical sparse form."""

    __slots__ = ("field", "terms")

    def __init__(self, field: PrimeField, terms: dict):
        self.field = field
        self.terms = terms

    # -- constructors

    @staticmethod
    def zero(field: PrimeField) -> "Poly":
        return Poly(field, {})

    @staticmethod
    def const(field: PrimeField, c: int) -> "Poly":
        c %= field.p
        return Poly(field, {MON_ONE: c} if c else {})

    @staticmethod
    def variable(field: PrimeField, vid: int) -> "Poly":
        return Poly(field, {((vid, 1),): 1})

    @staticmethod
    def term(field: PrimeField, mon, c: int) -> "Poly":
        c %= field.p
        return Poly(field, {mon: c} if c else {})

    @staticmethod
    def from_terms(field: PrimeField, items) -> "Poly":
        terms: dict = {}
        p = field.p
        for mon, c in items:
            c = (terms.get(mon, 0) + c) % p
            if c:
                terms[mon] = c
            else:
                terms.pop(mon, None)
        return Poly(field, terms)

    # -- basic queries

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """-1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mon_degree(m) for m in self.terms)

    def constant_term(self) -> int:
        return self.terms.get(MON_ONE, 0)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and MON_ONE in self.terms)

    def vars_used(self) -> set[int]:
        out: set[int] = set()
        for m in self.terms:
            out.update(v for v, _ in m)
        return out

    def _check_field(self, other: "Poly"):
        if self.field.p != other.field.p:
            raise MixedPrime(f"F_{self.field.p} vs F_{other.field.p}")

    # -- arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check_field(other)
            return other
        if isinstance(other, int):
            return Poly.const(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        terms = dict(self.terms)
        for m, c in other.terms.items():
            c = (terms.get(m, 0) + c) % p
            if c:
                terms[m] = c
            else:
                terms.pop(m, None)
        return Poly(self.field, terms)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return Poly(self.field, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mon_mul(m1, m2)
                c = (terms.get(m, 0) + c1 * c2) % p
                if c:
                    terms[m] = c
                else:
                    terms.pop(m, None)
        return Poly(self.field, terms)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: int) -> "Poly":
        c %= self.field.p
        if c == 0:
            return Poly.zero(self.field)
        if c == 1:
            return self
        p = self.field.p
        return Poly(self.field, {m: (c * v) % p for m, v in self.terms.items()})

    def monic(self, order: MonomialOrder) -> "Poly":
        if not self.terms:
            return self
        lc = self.terms[order.leading_monomial(self)]
        return self.scale(self.field.inv(lc))

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return result

    # -- characteristic-p specials

    def frobenius(self, e: int = 1) -> "Poly":
        """f^(p^e), computed by scaling exponents; coefficients are Frobenius-fixed."""
        if e < 1:
            raise ValueError("e must be >= 1")
        q = self.field.p**e
        terms = {}
        for m, c in self.terms.items():
            if mon_degree(m) * q > DEGREE_CAP:
                raise Overflow(f"monomial degree exceeds cap {DEGREE_CAP}")
            terms[tuple((v, ex * q) for v, ex in m)] = c
        return Poly(self.field, terms)

    def deriv(self, vid: int) -> "Poly":
        """Formal partial derivative with respect to `vid`."""
        p = self.field.p
        terms: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(vid, 0)
            if not e:
                continue
            c2 = (c * e) % p
            if not c2:
                continue
            if e == 1:
                del d[vid]
            else:
                d[vid] = e - 1
            m2 = tuple(sorted(d.items()))
            c2 = (terms.get(m2, 0) + c2) % p
            if c2:
                terms[m2] = c2
            else:
                terms.pop(m2, None)
        return Poly(self.field, terms)

    def subs(self, images: dict[int, "Poly"]) -> "Poly":
        """Substitute every variable by its image polynomial.

        All images must live over the same field; variables of self without
        an image raise KeyError.
        """
        field = self.field
        out = Poly.zero(field)
        cache: dict[tuple[int, int], Poly] = {}
        for m, c in self.terms.items():
            acc = Poly.const(field, c)
            for v, e in m:
                key = (v, e)
                powv = cache.get(key)
                if powv is None:
                    img = images[v]
                    if img.field.p != field.p:
                        raise MixedPrime("substitution across different primes")
                    powv = cache[key] = img**e
                acc = acc * powv
            out = out + acc
        return out

    def rename(self, mapping: dict[int, int]) -> "Poly":
        """Rename variables; ids absent from the mapping are kept."""
        terms = {}
        for m, c in self.terms.items():
            m2 = tuple(sorted((mapping.get(v, v), e) for v, e in m))
            terms[m2] = c
        if len(terms) != len(self.terms):
            raise ValueError("variable renaming collapsed distinct monomials")
        return Poly(self.field, terms)

    # -- equality / rendering

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.field, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field.p == other.field.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.field.p, frozenset(self.terms.items())))

    def render(self) -> str:
        if not self.terms:
            return "0"
        order = Grevlex(tuple(sorted(self.vars_used())))
        parts = []
        for m, c in order.sorted_terms(self):
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon_render(m))
            else:
                parts.append(f"{c}*{mon_render(m)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly(F_{self.field.p}, {self.render()})"
