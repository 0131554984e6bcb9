"""Pure-Python fallback for the term-arithmetic hot kernels.

Polynomials here are dense-keyed: a dict mapping an exponent tuple (one
slot per variable, most significant first) to a coefficient in [1, p).
The compiled extension relfrob._core exports the same functions with the
same semantics; relfrob.core picks one at import time.

Orders are passed as `segs`, a tuple of (kind, length) pairs where kind 0
is lex and kind 1 is grevlex on that slot range; keys from different
segments concatenate, so a two-segment tuple is an elimination order.
"""

COMPILED = False


def key_of(exps, segs):
    out = []
    pos = 0
    for kind, n in segs:
        chunk = exps[pos : pos + n]
        if kind == 0:
            out.extend(chunk)
        else:
            out.append(sum(chunk))
            out.extend(-e for e in reversed(chunk))
        pos += n
    return tuple(out)


def leading(f, segs):
    """Leading exponent tuple of a nonzero dense polynomial."""
    keys = {}

    def k(e):
        v = keys.get(e)
        if v is None:
            v = keys[e] = key_of(e, segs)
        return v

    return max(f, key=k)


def add(f, g, p):
    out = dict(f)
    for e, c in g.items():
        c2 = (out.get(e, 0) + c) % p
        if c2:
            out[e] = c2
        else:
            out.pop(e, None)
    return out


def scale(f, c, p):
    c %= p
    if c == 0:
        return {}
    if c == 1:
        return dict(f)
    return {e: (c * v) % p for e, v in f.items()}


def mul_term(f, m, c, p, cap):
    """f * (c * x^m)."""
    c %= p
    if c == 0:
        return {}
    n = len(m)
    out = {}
    for e, v in f.items():
        e2 = tuple(e[i] + m[i] for i in range(n))
        if sum(e2) > cap:
            raise OverflowError("degree cap exceeded")
        cv = (c * v) % p
        if cv:
            out[e2] = cv
    return out


def mul(f, g, p, cap):
    if not f or not g:
        return {}
    if len(g) < len(f):
        f, g = g, f
    out = {}
    n = len(next(iter(f)))
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(e1[i] + e2[i] for i in range(n))
            if sum(e) > cap:
                raise OverflowError("degree cap exceeded")
            c = (out.get(e, 0) + c1 * c2) % p
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def _divides(a, b):
    for i in range(len(a)):
        if a[i] > b[i]:
            return False
    return True


def normal_form(f, basis, p, segs, cap):
    """Full remainder of f modulo a list of monic reducers.

    `basis` is a sequence of (lead_exps, tail_items) pairs where tail_items
    is a tuple of (exps, coeff) for the non-leading terms; every reducer is
    assumed monic.  Reduction picks the first dividing reducer, which is
    deterministic for a fixed basis order.
    """
    work = dict(f)
    out = {}
    keys = {}

    def k(e):
        v = keys.get(e)
        if v is None:
            v = keys[e] = key_of(e, segs)
        return v

    nslots = len(segs) and sum(n for _, n in segs)
    while work:
        m = max(work, key=k)
        c = work.pop(m)
        hit_tail = None
        hit_lead = None
        for lead, tail in basis:
            if _divides(lead, m):
                hit_lead = lead
                hit_tail = tail
                break
        if hit_lead is None:
            out[m] = c
            continue
        shift = tuple(m[i] - hit_lead[i] for i in range(nslots))
        for te, tc in hit_tail:
            ne = tuple(shift[i] + te[i] for i in range(nslots))
            if sum(ne) > cap:
                raise OverflowError("degree cap exceeded")
            nc = (work.get(ne, 0) - c * tc) % p
            if nc:
                work[ne] = nc
            else:
                work.pop(ne, None)
    return out
