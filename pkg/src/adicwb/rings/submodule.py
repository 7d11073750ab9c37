"""Submodules of free modules R^r given by generators.

One object answers the three questions every homological computation
reduces to: canonical reduction modulo the submodule (hence membership),
lifting a member to a combination of the generators, and the syzygies of
the generators.  Lifting and syzygies come from the elimination trick:
generator ``g_j`` is stored as ``(g_j, e_j)`` in R^(r+m) and reduced with
the first ``r`` components dominating.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Any, List, Optional, Sequence, Tuple

from .base import IntegerRing, Poly, PolyRing, QuotientRing, Ring, RingError
from .groebner import _Elem, module_gb, reduce_vec, term_key

Vector = Tuple[Any, ...]


class _Echelon:
    """Row echelon basis over ZZ (Hermite-style) or a field."""

    def __init__(self, ring: Ring, width: int, rows: Sequence[Sequence[Any]]):
        self.ring = ring
        self.width = width
        self.is_zz = isinstance(ring, IntegerRing)
        remaining = [list(r) for r in rows if any(not ring.is_zero(x) for x in r)]
        pivots = []
        R = ring
        for col in range(width):
            cand = [r for r in remaining if not R.is_zero(r[col])]
            if not cand:
                continue
            rest = [r for r in remaining if R.is_zero(r[col])]
            if self.is_zz:
                while len(cand) > 1:
                    cand.sort(key=lambda r: abs(r[col]))
                    p = cand[0]
                    new = [p]
                    for r in cand[1:]:
                        q = r[col] // p[col]
                        r = [a - q * b for a, b in zip(r, p)]
                        if r[col]:
                            new.append(r)
                        elif any(r):
                            rest.append(r)
                    cand = new
                piv = cand[0]
                if piv[col] < 0:
                    piv = [-a for a in piv]
            else:
                piv = cand[0]
                inv = R.inv(piv[col])
                piv = [R.mul(inv, a) for a in piv]
                for r in cand[1:]:
                    c = r[col]
                    r = [R.sub(a, R.mul(c, b)) for a, b in zip(r, piv)]
                    if any(not R.is_zero(a) for a in r):
                        rest.append(r)
            pivots.append((col, piv))
            remaining = rest
        self.pivots = pivots

    def reduce(self, v: Sequence[Any]) -> List[Any]:
        v = list(v)
        R = self.ring
        for col, piv in self.pivots:
            c = v[col]
            if R.is_zero(c):
                continue
            if self.is_zz:
                q = c // piv[col]
                if q:
                    v = [a - q * b for a, b in zip(v, piv)]
            else:
                v = [R.sub(a, R.mul(c, b)) for a, b in zip(v, piv)]
        return v

    def rows_from(self, col0: int):
        return [piv for col, piv in self.pivots if col >= col0]


class _PolyGB:
    """Module Groebner basis over a polynomial ring, vectors as dense tuples."""

    def __init__(self, ring: PolyRing, width: int, rows: Sequence[Sequence[Poly]]):
        self.ring = ring
        self.width = width
        self.key = term_key(ring)
        vecs = [self.to_vec(r) for r in rows]
        self.basis: List[_Elem] = module_gb(ring, [v for v in vecs if v])

    def to_vec(self, row):
        out = {}
        for i, p in enumerate(row):
            for e, c in p.terms.items():
                out[(i, e)] = c
        return out

    def from_vec(self, vec) -> List[Poly]:
        parts = [dict() for _ in range(self.width)]
        for (i, e), c in vec.items():
            parts[i][e] = c
        return [Poly(self.ring, p) for p in parts]

    def reduce(self, v: Sequence[Poly]) -> List[Poly]:
        return self.from_vec(reduce_vec(self.ring.field, self.key, self.to_vec(v), self.basis))

    def rows_from(self, col0: int):
        return [self.from_vec(g.vec) for g in self.basis if g.comp >= col0]


def _make_engine(ring: Ring, width: int, rows):
    if isinstance(ring, PolyRing):
        return _PolyGB(ring, width, rows)
    if isinstance(ring, IntegerRing) or ring.is_field:
        return _Echelon(ring, width, rows)
    raise RingError(f"no linear algebra engine for {ring}")


class Submodule:
    """The submodule of R^rank generated by ``gens`` (each a length-``rank`` tuple).

    With ``track=True`` the generators are carried along so that
    :meth:`lift` and :meth:`syzygies` are available.
    """

    def __init__(self, ring: Ring, rank: int, gens: Sequence[Sequence[Any]], track: bool = False):
        self.ring = ring
        self.rank = rank
        self.gens = [tuple(g) for g in gens]
        for g in self.gens:
            if len(g) != rank:
                raise RingError(f"generator of length {len(g)} in rank {rank}")
        self.track = track
        m = len(self.gens)
        if isinstance(ring, QuotientRing):
            base = ring.base
            lifted = [tuple(ring.lift(x) for x in g) for g in self.gens]
            extra = []
            for rel in ring.relations:
                rel = base.coerce(rel)
                for i in range(rank):
                    extra.append(tuple(rel if k == i else base.zero() for k in range(rank)))
            self._base = base
            allgens = lifted + extra
        else:
            self._base = ring
            allgens = self.gens
        self._m = m
        B = self._base
        if track:
            n = len(allgens)
            rows = []
            for j, g in enumerate(allgens):
                unit = tuple(B.one() if k == j else B.zero() for k in range(n))
                rows.append(tuple(g) + unit)
            self._engine = _make_engine(B, rank + n, rows)
        else:
            self._engine = _make_engine(B, rank, allgens)

    def _to_base(self, v):
        if isinstance(self.ring, QuotientRing):
            return tuple(self.ring.lift(self.ring.coerce(x)) for x in v)
        return tuple(v)

    def _from_base(self, v):
        if isinstance(self.ring, QuotientRing):
            return tuple(self.ring.coerce(x) for x in v)
        return tuple(v)

    def reduce(self, v: Sequence[Any]) -> Vector:
        """Canonical representative of ``v`` modulo the submodule."""
        if len(v) != self.rank:
            raise RingError("vector of wrong length")
        vb = self._to_base(v)
        if self.track:
            n = self._engine.width - self.rank
            red = self._engine.reduce(vb + (self._base.zero(),) * n)[: self.rank]
        else:
            red = self._engine.reduce(vb)
        return self._from_base(red)

    def contains(self, v: Sequence[Any]) -> bool:
        return all(self.ring.is_zero(x) for x in self.reduce(v))

    def lift(self, v: Sequence[Any]) -> Optional[Vector]:
        """Coefficients ``c`` with ``sum c_j gens_j == v``, or None if ``v`` is not a member."""
        if not self.track:
            raise RingError("lift needs a Submodule built with track=True")
        B = self._base
        n = self._engine.width - self.rank
        red = self._engine.reduce(self._to_base(v) + (B.zero(),) * n)
        if any(not B.is_zero(x) for x in red[: self.rank]):
            return None
        coeffs = [B.neg(x) for x in red[self.rank: self.rank + self._m]]
        return self._from_base(coeffs)

    def syzygies(self) -> List[Vector]:
        """Generators of the module of relations among ``gens``."""
        if not self.track:
            raise RingError("syzygies needs a Submodule built with track=True")
        out = []
        for row in self._engine.rows_from(self.rank):
            coeffs = self._from_base(row[self.rank: self.rank + self._m])
            if any(not self.ring.is_zero(x) for x in coeffs):
                out.append(coeffs)
        return _dedupe(self.ring, out)


def _dedupe(ring, vecs):
    seen, out = set(), []
    for v in vecs:
        k = tuple(v)
        if k not in seen:
            seen.add(k)
            out.append(v)
    return out


@lru_cache(maxsize=4096)
def cached_submodule(ring: Ring, rank: int, gens: Tuple[Tuple[Any, ...], ...], track: bool) -> Submodule:
    return Submodule(ring, rank, gens, track)


def submodule(ring: Ring, rank: int, gens, track: bool = False) -> Submodule:
    gens = tuple(tuple(g) for g in gens)
    return cached_submodule(ring, rank, gens, track)
