"""Exact rings and the linear-algebra kernels everything else is built on."""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Any, List, Sequence

from .base import (
    QQ,
    ZZ,
    IntegerRing,
    Poly,
    PolyRing,
    PrimeField,
    QuotientRing,
    RationalField,
    Ring,
    RingError,
    parse_element,
)
from .groebner import groebner_basis, normal_form
from .maps import RingMap, identity_map, inclusion, substitution
from .matrix import Matrix, block_diag, kron
from .snf import determinant, smith_normal_form
from .submodule import Submodule, submodule

__all__ = [
    "QQ", "ZZ", "IntegerRing", "Poly", "PolyRing", "PrimeField", "QuotientRing",
    "RationalField", "Ring", "RingError", "parse_element", "groebner_basis",
    "normal_form", "RingMap", "identity_map", "inclusion", "substitution", "Matrix",
    "block_diag", "kron", "determinant", "smith_normal_form", "Submodule", "submodule",
    "syzygy_module", "ideal_power", "GF",
]


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def syzygy_module(m: Matrix) -> Matrix:
    """Columns generating the kernel of ``R^ncols -> R^nrows`` given by ``m``."""
    R = m.ring
    if m.ncols == 0:
        return Matrix.zero(R, 0, 0)
    if isinstance(R, IntegerRing):
        diag, _, right = smith_normal_form(m)
        rank = sum(1 for d in diag if d)
        return right.select_columns(list(range(rank, m.ncols)))
    syz = Submodule(R, m.nrows, m.columns(), track=True).syzygies()
    return Matrix.from_columns(R, m.ncols, syz)


def ideal_power(gens: Sequence[Any], n: int, ring: Ring | None = None) -> List[Any]:
    """Generators of the n-th power of the ideal: all degree-n products, deduplicated."""
    if n < 1:
        raise RingError("ideal_power needs n >= 1; the unit ideal is written explicitly")
    if ring is None:
        if not gens or not isinstance(gens[0], Poly):
            raise RingError("pass ring= for scalar generators")
        ring = gens[0].ring
    gens = [ring.coerce(g) for g in gens]
    out, seen = [], set()
    for combo in combinations_with_replacement(range(len(gens)), n):
        p = ring.one()
        for i in combo:
            p = ring.mul(p, gens[i])
        if ring.is_zero(p) or p in seen:
            continue
        seen.add(p)
        out.append(p)
    return out
