"""Buchberger's algorithm for ideals and for submodules of free modules.

Vectors are dicts ``{(component, exponent): coefficient}``.  Terms are
compared position-over-term: a smaller component index is larger, ties
broken by the ring's monomial order.  Ideals are the rank-1 case.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Any, Dict, List, Sequence, Tuple

from .base import Poly, PolyRing, RingError

Term = Tuple[int, Tuple[int, ...]]
Vec = Dict[Term, Any]


@lru_cache(maxsize=None)
def _term_key_fn(order: str):
    from .base import MONOMIAL_ORDERS

    mk = lru_cache(maxsize=1 << 16)(MONOMIAL_ORDERS[order])

    def key(t):
        return (-t[0], mk(t[1]))

    return key


def term_key(ring: PolyRing):
    return _term_key_fn(ring.order)


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


class _Elem:
    __slots__ = ("comp", "exp", "vec")

    def __init__(self, comp, exp, vec):
        self.comp = comp
        self.exp = exp
        self.vec = vec


def _monic(F, key, vec: Vec) -> _Elem:
    lt = max(vec, key=key)
    inv = F.inv(vec[lt])
    return _Elem(lt[0], lt[1], {t: F.mul(c, inv) for t, c in vec.items()})


def reduce_vec(F, key, vec: Vec, basis: Sequence[_Elem], full: bool = True) -> Vec:
    """Remainder of ``vec`` on division by a list of monic elements."""
    p = dict(vec)
    r: Vec = {}
    zero = F.zero()
    while p:
        t = max(p, key=key)
        c = p[t]
        comp, e = t
        for g in basis:
            if g.comp == comp and _divides(g.exp, e):
                shift = tuple(a - b for a, b in zip(e, g.exp))
                for (gc, ge), gcf in g.vec.items():
                    tt = (gc, tuple(a + b for a, b in zip(ge, shift)))
                    s = F.sub(p.get(tt, zero), F.mul(c, gcf))
                    if F.is_zero(s):
                        p.pop(tt, None)
                    else:
                        p[tt] = s
                break
        else:
            if not full:
                r.update(p)
                return r
            r[t] = c
            del p[t]
    return r


def _spoly(F, a: _Elem, b: _Elem) -> Vec:
    lcm = tuple(max(x, y) for x, y in zip(a.exp, b.exp))
    sa = tuple(l - x for l, x in zip(lcm, a.exp))
    sb = tuple(l - x for l, x in zip(lcm, b.exp))
    out: Vec = {}
    zero = F.zero()
    for (c, e), v in a.vec.items():
        out[(c, tuple(x + y for x, y in zip(e, sa)))] = v
    for (c, e), v in b.vec.items():
        t = (c, tuple(x + y for x, y in zip(e, sb)))
        s = F.sub(out.get(t, zero), v)
        if F.is_zero(s):
            out.pop(t, None)
        else:
            out[t] = s
    return out


def module_gb(ring: PolyRing, vectors: Sequence[Vec], is_ideal: bool = False) -> List[_Elem]:
    """Reduced Groebner basis (monic elements) of the submodule spanned by ``vectors``.

    The coprime-leading-monomial criterion is only sound for ideals, so it is
    enabled by ``is_ideal``.
    """
    F = ring.field
    key = term_key(ring)
    mk = ring.mono_key
    G: List[_Elem] = []
    for v in vectors:
        if v:
            r = reduce_vec(F, key, v, G)
            if r:
                G.append(_monic(F, key, r))
    pairs = {(i, j) for j in range(len(G)) for i in range(j) if G[i].comp == G[j].comp}

    def lcm_of(i, j):
        return tuple(max(x, y) for x, y in zip(G[i].exp, G[j].exp))

    while pairs:
        i, j = min(pairs, key=lambda ij: (-G[ij[0]].comp, mk(lcm_of(*ij)), ij))
        pairs.discard((i, j))
        lcm = lcm_of(i, j)
        # product criterion: only valid for ideals
        if is_ideal and all(min(x, y) == 0 for x, y in zip(G[i].exp, G[j].exp)):
            continue
        # chain criterion
        skip = False
        for k in range(len(G)):
            if k in (i, j) or G[k].comp != G[i].comp or not _divides(G[k].exp, lcm):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                skip = True
                break
        if skip:
            continue
        r = reduce_vec(F, key, _spoly(F, G[i], G[j]), G)
        if r:
            G.append(_monic(F, key, r))
            n = len(G) - 1
            for k in range(n):
                if G[k].comp == G[n].comp:
                    pairs.add((k, n))
    return _interreduce(F, key, G)


def _interreduce(F, key, G: List[_Elem]) -> List[_Elem]:
    keep = []
    for i, g in enumerate(G):
        dominated = False
        for j, h in enumerate(G):
            if i == j or h.comp != g.comp or not _divides(h.exp, g.exp):
                continue
            if h.exp != g.exp or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = reduce_vec(F, key, g.vec, others)
        out.append(_monic(F, key, r))
    out.sort(key=lambda g: key((g.comp, g.exp)), reverse=True)
    return out


# ------------------------------------------------------------ ideal level


def _poly_ring_of(polys: Sequence[Poly]) -> PolyRing:
    if not polys:
        raise RingError("need at least one polynomial")
    ring = polys[0].ring
    if not isinstance(ring, PolyRing):
        raise RingError(f"groebner_basis needs a polynomial ring, got {ring}")
    for f in polys:
        if f.ring != ring:
            raise RingError("generators live in different rings")
    return ring


def groebner_basis(gens: Sequence[Poly]) -> List[Poly]:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Output is monic and sorted by decreasing leading monomial, so it does
    not depend on the order or redundancy of the input.
    """
    if not isinstance(gens, (list, tuple)):
        gens = list(gens)
    ring = _poly_ring_of(gens)
    G = module_gb(ring, [{(0, e): c for e, c in f.terms.items()} for f in gens], is_ideal=True)
    return [Poly(ring, {e: c for (_, e), c in g.vec.items()}) for g in G]


def normal_form_raw(ring: PolyRing, terms: Dict, basis: Sequence[Poly]) -> Dict:
    F = ring.field
    key = term_key(ring)
    elems = [
        _Elem(0, ring.leading_exp(b), {(0, e): c for e, c in b.terms.items()})
        for b in basis
    ]
    for el in elems:
        lc = el.vec[(0, el.exp)]
        if lc != F.one():
            inv = F.inv(lc)
            el.vec = {t: F.mul(c, inv) for t, c in el.vec.items()}
    r = reduce_vec(F, key, {(0, e): c for e, c in terms.items()}, elems)
    return {e: c for (_, e), c in r.items()}


def normal_form(f: Poly, basis: Sequence[Poly]) -> Poly:
    """Remainder of ``f`` modulo a Groebner basis; zero iff ``f`` lies in the ideal."""
    ring = f.ring
    if not isinstance(ring, PolyRing):
        raise RingError("normal_form needs a polynomial ring element")
    for b in basis:
        if b.ring != ring:
            raise RingError(f"basis element in {b.ring}, expected {ring}")
    return Poly(ring, normal_form_raw(ring, f.terms, basis))
