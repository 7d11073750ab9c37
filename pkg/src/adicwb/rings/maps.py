"""Ring homomorphisms the engine can express: canonical maps out of ZZ/QQ,
variable substitutions between polynomial rings, and quotient projections."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence, Tuple

from .base import IntegerRing, Poly, PolyRing, QuotientRing, RationalField, Ring, RingError
from .matrix import Matrix


@dataclass(frozen=True)
class RingMap:
    source: Ring
    target: Ring
    images: Tuple[Any, ...] = ()

    def __post_init__(self):
        src = self.source
        nv = src.nvars
        if len(self.images) != nv:
            raise RingError(f"map from {src} needs {nv} variable images, got {len(self.images)}")
        object.__setattr__(self, "images", tuple(self.target.coerce(x) for x in self.images))
        if isinstance(src, QuotientRing) and isinstance(src.base, PolyRing):
            for r in src.relations:
                if not self.target.is_zero(self._eval_poly(r)):
                    raise RingError(f"relation {r} does not map to zero in {self.target}")
        if isinstance(src, QuotientRing) and isinstance(src.base, IntegerRing):
            if not self.target.is_zero(self.target.from_int(src.modulus)):
                raise RingError(f"{src} does not map to {self.target}")
        if isinstance(src, RationalField) and isinstance(self.target, IntegerRing):
            raise RingError("no ring map QQ -> ZZ")

    def _coef(self, c):
        T = self.target
        if isinstance(c, Fraction):
            if c.denominator == 1:
                return T.from_int(c.numerator)
            if isinstance(T, IntegerRing) or (isinstance(T, QuotientRing) and isinstance(T.base, IntegerRing)):
                raise RingError(f"cannot map {c} into {T}")
            return T.coerce(c)
        return T.from_int(int(c))

    def _eval_poly(self, p: Poly):
        T = self.target
        out = T.zero()
        for e, c in p.terms.items():
            term = self._coef(c)
            for img, k in zip(self.images, e):
                if k:
                    term = T.mul(term, T.power(img, k))
            out = T.add(out, term)
        return out

    def __call__(self, x):
        src = self.source
        if isinstance(x, Poly):
            if x.ring != src:
                raise RingError(f"element of {x.ring} passed to map from {src}")
            return self._eval_poly(x)
        return self._coef(x)

    def matrix(self, m: Matrix) -> Matrix:
        return m.map(self, self.target)


def identity_map(ring: Ring) -> RingMap:
    if ring.nvars:
        base = ring.base if isinstance(ring, QuotientRing) else ring
        return RingMap(ring, ring, tuple(ring.coerce(v) for v in base.gens()))
    return RingMap(ring, ring, ())


def inclusion(source: Ring, target: Ring) -> RingMap:
    """Variables sent to same-named variables of the target (or its base)."""
    if not source.nvars:
        return RingMap(source, target, ())
    tbase = target.base if isinstance(target, QuotientRing) else target
    imgs = []
    for name in source.names:
        if name not in tbase.names:
            raise RingError(f"variable {name} missing in {target}")
        imgs.append(target.coerce(tbase.var(name)))
    return RingMap(source, target, tuple(imgs))


def substitution(source: Ring, target: Ring, images: Sequence[Any]) -> RingMap:
    return RingMap(source, target, tuple(images))
