"""Finitely presented modules, maps, bounded cochain complexes and their
cohomology, free resolutions, tensor products, Tor and Ext.

A module is the cokernel of its presentation matrix (columns are relations
among the standard generators).  Kernels only ever appear as syzygies.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .rings import (
    IntegerRing,
    Matrix,
    PolyRing,
    QuotientRing,
    Ring,
    RingError,
    block_diag,
    kron,
    smith_normal_form,
    submodule,
    syzygy_module,
)
from .rings.groebner import _divides

INF = math.inf


class ResolutionTooShort(RuntimeError):
    """A derived functor needed more terms of a free resolution than were computed."""


# ----------------------------------------------------------------- modules


@dataclass(frozen=True)
class FpModule:
    ring: Ring
    ngens: int
    relations: Matrix

    def __post_init__(self):
        if self.relations.nrows != self.ngens:
            raise RingError(
                f"presentation has {self.relations.nrows} rows for {self.ngens} generators")
        if self.relations.ring != self.ring:
            raise RingError("presentation over the wrong ring")

    @classmethod
    def free(cls, ring: Ring, n: int) -> "FpModule":
        return cls(ring, n, Matrix.zero(ring, n, 0))

    @classmethod
    def zero(cls, ring: Ring) -> "FpModule":
        return cls.free(ring, 0)

    @classmethod
    def from_matrix(cls, m: Matrix) -> "FpModule":
        return cls(m.ring, m.nrows, m)

    @classmethod
    def cyclic(cls, ring: Ring, ideal: Sequence[Any]) -> "FpModule":
        """A/I for the ideal generated by ``ideal``."""
        ideal = [ring.coerce(a) for a in ideal]
        return cls(ring, 1, Matrix.from_rows(ring, [ideal], len(ideal)))

    def relation_submodule(self, track: bool = False):
        return submodule(self.ring, self.ngens, self.relations.columns(), track)

    def reduce(self, v):
        return self.relation_submodule().reduce(v)

    def is_zero_element(self, v) -> bool:
        return self.relation_submodule().contains(v)

    def is_zero(self) -> bool:
        if self.ngens == 0:
            return True
        sub = self.relation_submodule()
        R = self.ring
        return all(sub.contains(unit(R, self.ngens, i)) for i in range(self.ngens))

    def is_free_presentation(self) -> bool:
        return self.relations.ncols == 0 or self.relations.is_zero()

    def quotient_by(self, vectors: Sequence[Sequence[Any]]) -> "FpModule":
        """M / (submodule generated by ``vectors``); same generators."""
        extra = Matrix.from_columns(self.ring, self.ngens, [tuple(v) for v in vectors])
        return FpModule(self.ring, self.ngens, self.relations.hstack(extra))

    def ideal_quotient(self, ideal: Sequence[Any]) -> "FpModule":
        """M / I M."""
        R = self.ring
        vecs = []
        for a in ideal:
            a = R.coerce(a)
            for i in range(self.ngens):
                vecs.append(tuple(a if k == i else R.zero() for k in range(self.ngens)))
        return self.quotient_by(vecs)

    def direct_sum(self, other: "FpModule") -> "FpModule":
        return FpModule(self.ring, self.ngens + other.ngens,
                        block_diag(self.ring, [self.relations, other.relations]))

    def power(self, n: int) -> "FpModule":
        return FpModule(self.ring, self.ngens * n, block_diag(self.ring, [self.relations] * n))

    def fmt(self) -> str:
        return f"coker {self.relations.fmt()} ({self.ngens} gens over {self.ring})"


def unit(ring: Ring, n: int, i: int):
    z, o = ring.zero(), ring.one()
    return tuple(o if k == i else z for k in range(n))


def _nonzero(ring, v) -> bool:
    return any(not ring.is_zero(x) for x in v)


def _dedupe(vecs):
    seen, out = set(), []
    for v in vecs:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


@dataclass(frozen=True)
class ModuleMap:
    source: FpModule
    target: FpModule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise RingError(
                f"map matrix {self.matrix.shape} does not fit "
                f"{self.source.ngens} -> {self.target.ngens} generators")

    @classmethod
    def checked(cls, source, target, matrix) -> "ModuleMap":
        f = cls(source, target, matrix)
        if not f.is_well_defined():
            raise RingError("matrix does not carry relations of the source into relations of the target")
        return f

    @classmethod
    def identity(cls, M: FpModule) -> "ModuleMap":
        return cls(M, M, Matrix.identity(M.ring, M.ngens))

    @classmethod
    def zero(cls, source: FpModule, target: FpModule) -> "ModuleMap":
        return cls(source, target, Matrix.zero(source.ring, target.ngens, source.ngens))

    def is_well_defined(self) -> bool:
        img = self.matrix @ self.source.relations
        sub = self.target.relation_submodule()
        return all(sub.contains(c) for c in img.columns())

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition ``self ∘ other``."""
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def is_zero(self) -> bool:
        sub = self.target.relation_submodule()
        return all(sub.contains(c) for c in self.matrix.columns())

    def kernel(self) -> "SubQuotient":
        R = self.source.ring
        g = self.source.ngens
        gens = _preimage_generators(R, self.matrix, self.target)
        return SubQuotient.build(R, g, gens, self.source.relations.columns())

    def cokernel(self) -> FpModule:
        return FpModule(self.source.ring, self.target.ngens,
                        self.target.relations.hstack(self.matrix))

    def image(self) -> "SubQuotient":
        R = self.source.ring
        return SubQuotient.build(R, self.target.ngens, self.matrix.columns(),
                                 self.target.relations.columns())

    def is_injective(self) -> bool:
        return self.kernel().module.is_zero()

    def is_surjective(self) -> bool:
        return self.cokernel().is_zero()

    def is_iso(self) -> bool:
        return self.is_surjective() and self.is_injective()


def _preimage_generators(R: Ring, F: Matrix, target: FpModule) -> List[tuple]:
    """Generators of {v : F v lies in the relation module of ``target``}."""
    g = F.ncols
    if g == 0:
        return []
    if target.ngens == 0:
        return [unit(R, g, i) for i in range(g)]
    cols = F.columns() + target.relations.columns()
    sub = submodule(R, target.ngens, cols, track=True)
    return _dedupe([s[:g] for s in sub.syzygies() if _nonzero(R, s[:g])])


@dataclass(frozen=True)
class SubQuotient:
    """(span K + span Rel) / span Rel inside R^rank, with its presentation.

    ``gens`` are the kept generators; :meth:`coords` expresses an ambient
    vector of the subquotient in terms of them.
    """

    ring: Ring
    rank: int
    gens: Tuple[tuple, ...]
    rels: Tuple[tuple, ...]
    module: FpModule

    @classmethod
    def build(cls, ring: Ring, rank: int, gens, rels) -> "SubQuotient":
        rels = _dedupe([tuple(r) for r in rels if _nonzero(ring, r)])
        relsub = submodule(ring, rank, rels)
        K = _dedupe([relsub.reduce(tuple(k)) for k in gens])
        K = [k for k in K if _nonzero(ring, k)]
        s = len(K)
        if s == 0:
            return cls(ring, rank, (), tuple(rels), FpModule.zero(ring))
        tracked = submodule(ring, rank, K + rels, track=True)
        pres = _dedupe([sy[:s] for sy in tracked.syzygies() if _nonzero(ring, sy[:s])])
        M = FpModule(ring, s, Matrix.from_columns(ring, s, pres))
        return cls(ring, rank, tuple(K), tuple(rels), M)

    def coords(self, w) -> tuple:
        s = len(self.gens)
        if s == 0:
            return ()
        tracked = submodule(self.ring, self.rank, list(self.gens) + list(self.rels), track=True)
        c = tracked.lift(tuple(w))
        if c is None:
            raise RingError("vector does not lie in the subquotient")
        return tuple(c[:s])

    def induced(self, F: Matrix, other: "SubQuotient") -> ModuleMap:
        """Map self -> other induced by the ambient matrix ``F``."""
        cols = [other.coords(F.apply(k)) for k in self.gens]
        m = Matrix.from_columns(self.ring, len(other.gens), cols)
        return ModuleMap(self.module, other.module, m)


# ---------------------------------------------------------------- complexes


class Complex:
    """Bounded cochain complex: ``terms[i]`` with ``d[i]: terms[i] -> terms[i+1]``."""

    def __init__(self, ring: Ring, terms: Dict[int, FpModule], d: Dict[int, Matrix],
                 check: bool = True):
        self.ring = ring
        self.terms = {i: m for i, m in terms.items()}
        if not self.terms:
            self.lo, self.hi = 0, -1
        else:
            self.lo, self.hi = min(self.terms), max(self.terms)
        for i in range(self.lo, self.hi + 1):
            self.terms.setdefault(i, FpModule.zero(ring))
        self.d: Dict[int, Matrix] = {}
        for i in range(self.lo, self.hi):
            m = d.get(i)
            if m is None:
                m = Matrix.zero(ring, self.terms[i + 1].ngens, self.terms[i].ngens)
            if m.shape != (self.terms[i + 1].ngens, self.terms[i].ngens):
                raise RingError(f"differential d^{i} has shape {m.shape}")
            self.d[i] = m
        self._cache: Dict[Any, Any] = {}
        self._lock = threading.Lock()
        if check:
            self.validate()

    @classmethod
    def concentrated(cls, M: FpModule, degree: int = 0) -> "Complex":
        return cls(M.ring, {degree: M}, {}, check=False)

    @classmethod
    def zero(cls, ring: Ring) -> "Complex":
        return cls(ring, {}, {}, check=False)

    def term(self, i: int) -> FpModule:
        return self.terms.get(i) or FpModule.zero(self.ring)

    def diff(self, i: int) -> ModuleMap:
        return ModuleMap(self.term(i), self.term(i + 1), self.dmat(i))

    def dmat(self, i: int) -> Matrix:
        if i in self.d:
            return self.d[i]
        return Matrix.zero(self.ring, self.term(i + 1).ngens, self.term(i).ngens)

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def validate(self):
        for i in range(self.lo, self.hi - 1):
            comp = ModuleMap(self.term(i), self.term(i + 2), self.d[i + 1] @ self.d[i])
            if not comp.is_zero():
                raise RingError(f"d∘d != 0 at degree {i}")
        for i in range(self.lo, self.hi):
            if not self.diff(i).is_well_defined():
                raise RingError(f"d^{i} is not a module map")

    def ranks(self) -> Dict[int, int]:
        return {i: self.terms[i].ngens for i in self.degrees()}

    def _cached(self, key, fn):
        if key in self._cache:
            return self._cache[key]
        val = fn()
        with self._lock:
            self._cache.setdefault(key, val)
        return self._cache[key]

    def cohomology_data(self, i: int) -> SubQuotient:
        return self._cached(("H", i), lambda: self._cohomology_data(i))

    def _cohomology_data(self, i: int) -> SubQuotient:
        R = self.ring
        Ci = self.term(i)
        r = Ci.ngens
        if r == 0:
            return SubQuotient.build(R, 0, [], [])
        if i in self.d and self.term(i + 1).ngens:
            K = _preimage_generators(R, self.d[i], self.term(i + 1))
        else:
            K = [unit(R, r, k) for k in range(r)]
        rels = list(Ci.relations.columns())
        if i - 1 in self.d:
            rels += self.d[i - 1].columns()
        return SubQuotient.build(R, r, K, rels)

    def shift(self, k: int) -> "Complex":
        """C[k]: degree i holds C^{i+k}; differentials pick up (-1)^k."""
        sign = self.ring.from_int(-1 if k % 2 else 1)
        return Complex(self.ring, {i - k: m for i, m in self.terms.items()},
                       {i - k: m.scale(sign) for i, m in self.d.items()}, check=False)

    def __repr__(self):
        return f"Complex({self.ring}, ranks={self.ranks()})"


def cohomology(c: Complex, i: int) -> FpModule:
    """H^i(c) = ker d^i / im d^{i-1}; the zero module outside the range."""
    return c.cohomology_data(i).module


@dataclass
class ComplexMap:
    source: Complex
    target: Complex
    maps: Dict[int, Matrix]

    def __post_init__(self):
        R = self.source.ring
        for i in self.source.degrees():
            if i not in self.maps:
                self.maps[i] = Matrix.zero(R, self.target.term(i).ngens, self.source.term(i).ngens)

    def at(self, i: int) -> Matrix:
        if i in self.maps:
            return self.maps[i]
        return Matrix.zero(self.source.ring, self.target.term(i).ngens, self.source.term(i).ngens)

    def is_chain_map(self) -> bool:
        S, T = self.source, self.target
        lo, hi = min(S.lo, T.lo), max(S.hi, T.hi)
        for i in range(lo, hi + 1):
            f_i = self.at(i)
            if not ModuleMap(S.term(i), T.term(i), f_i).is_well_defined():
                return False
            lhs = T.dmat(i) @ f_i
            rhs = self.at(i + 1) @ S.dmat(i)
            if not ModuleMap(S.term(i), T.term(i + 1), lhs - rhs).is_zero():
                return False
        return True

    def __matmul__(self, other: "ComplexMap") -> "ComplexMap":
        degs = set(other.source.degrees())
        return ComplexMap(other.source, self.target,
                          {i: self.at(i) @ other.at(i) for i in degs})

    @classmethod
    def identity(cls, c: Complex) -> "ComplexMap":
        return cls(c, c, {i: Matrix.identity(c.ring, c.term(i).ngens) for i in c.degrees()})


def induced_map(f: ComplexMap, i: int) -> ModuleMap:
    """H^i(f)."""
    src = f.source.cohomology_data(i)
    tgt = f.target.cohomology_data(i)
    if not src.gens:
        return ModuleMap.zero(src.module, tgt.module)
    return src.induced(f.at(i), tgt)


def mapping_cone(f: ComplexMap) -> Complex:
    """cone(f)^i = C^{i+1} ⊕ D^i with d(c, x) = (-d c, f c + d x)."""
    C, D, R = f.source, f.target, f.source.ring
    lo = min(C.lo - 1, D.lo)
    hi = max(C.hi - 1, D.hi)
    terms, diffs = {}, {}
    for i in range(lo, hi + 1):
        terms[i] = C.term(i + 1).direct_sum(D.term(i))
    for i in range(lo, hi):
        top = (-C.dmat(i + 1)).hstack(Matrix.zero(R, C.term(i + 2).ngens, D.term(i).ngens))
        bot = f.at(i + 1).hstack(D.dmat(i))
        diffs[i] = top.vstack(bot)
    return Complex(R, terms, diffs, check=False)


@dataclass
class QuasiIsoReport:
    ok: bool
    witnesses: Dict[int, Dict[str, FpModule]]

    def __bool__(self):
        return self.ok


def quasi_iso_check(f: ComplexMap) -> QuasiIsoReport:
    """True iff H^i(f) is an isomorphism in every degree; failing degrees carry
    the kernel and cokernel of H^i(f) as witnesses."""
    lo = min(f.source.lo, f.target.lo)
    hi = max(f.source.hi, f.target.hi)
    witnesses = {}
    for i in range(lo, hi + 1):
        h = induced_map(f, i)
        ker = h.kernel().module
        cok = h.cokernel()
        if not (ker.is_zero() and cok.is_zero()):
            witnesses[i] = {"kernel": ker, "cokernel": cok}
    return QuasiIsoReport(not witnesses, witnesses)


def is_acyclic(c: Complex) -> bool:
    return all(cohomology(c, i).is_zero() for i in c.degrees())


# ----------------------------------------------------------------- tensors


def tensor_modules(M: FpModule, N: FpModule) -> FpModule:
    """M ⊗ N; generator (i, k) sits at index i * N.ngens + k."""
    R = M.ring
    if M.ngens == 0 or N.ngens == 0:
        return FpModule.zero(R)
    rel = kron(M.relations, Matrix.identity(R, N.ngens)).hstack(
        kron(Matrix.identity(R, M.ngens), N.relations))
    return FpModule(R, M.ngens * N.ngens, rel)


def tensor_complexes(c1: Complex, c2: Complex) -> Complex:
    """Total tensor complex with d = d1 ⊗ 1 + (-1)^p 1 ⊗ d2 on C1^p ⊗ C2^q."""
    R = c1.ring
    if c1.ring != c2.ring:
        raise RingError("tensor of complexes over different rings")
    if c1.hi < c1.lo or c2.hi < c2.lo:
        return Complex.zero(R)
    lo, hi = c1.lo + c2.lo, c1.hi + c2.hi
    layout = {}
    terms = {}
    for n in range(lo, hi + 1):
        parts, off = [], 0
        mods = []
        for p in c1.degrees():
            q = n - p
            if q < c2.lo or q > c2.hi:
                continue
            T = tensor_modules(c1.term(p), c2.term(q))
            parts.append((p, q, off, T.ngens))
            mods.append(T)
            off += T.ngens
        layout[n] = parts
        if mods:
            rel = block_diag(R, [m.relations for m in mods])
            terms[n] = FpModule(R, off, rel)
        else:
            terms[n] = FpModule.zero(R)
    diffs = {}
    minus = R.from_int(-1)
    for n in range(lo, hi):
        src, tgt = layout[n], layout[n + 1]
        rows = terms[n + 1].ngens
        cols = terms[n].ngens
        grid = [[R.zero()] * cols for _ in range(rows)]
        tgt_off = {(p, q): (o, k) for p, q, o, k in tgt}
        for p, q, so, sk in src:
            g1, g2 = c1.term(p).ngens, c2.term(q).ngens
            blocks = []
            if (p + 1, q) in tgt_off and p in c1.d:
                blocks.append(((p + 1, q), kron(c1.d[p], Matrix.identity(R, g2))))
            if (p, q + 1) in tgt_off and q in c2.d:
                b = kron(Matrix.identity(R, g1), c2.d[q])
                if p % 2:
                    b = b.scale(minus)
                blocks.append(((p, q + 1), b))
            for key, b in blocks:
                to, _ = tgt_off[key]
                for a in range(b.nrows):
                    row = grid[to + a]
                    for c in range(b.ncols):
                        v = b.rows[a][c]
                        if not R.is_zero(v):
                            row[so + c] = R.add(row[so + c], v)
        diffs[n] = Matrix(R, rows, cols, tuple(tuple(r) for r in grid))
    out = Complex(R, terms, diffs, check=False)
    out._layout = layout
    return out


def tensor_chain_maps(f: ComplexMap, g: ComplexMap, source: Complex = None,
                      target: Complex = None) -> ComplexMap:
    """f ⊗ g between the tensor complexes (built here unless passed in)."""
    R = f.source.ring
    S = source or tensor_complexes(f.source, g.source)
    T = target or tensor_complexes(f.target, g.target)
    maps = {}
    for n in S.degrees():
        rows, cols = T.term(n).ngens, S.term(n).ngens
        grid = [[R.zero()] * cols for _ in range(rows)]
        tgt_off = {(p, q): o for p, q, o, _ in T._layout.get(n, [])}
        for p, q, so, _ in S._layout[n]:
            if (p, q) not in tgt_off:
                continue
            b = kron(f.at(p), g.at(q))
            to = tgt_off[(p, q)]
            for a in range(b.nrows):
                for c in range(b.ncols):
                    v = b.rows[a][c]
                    if not R.is_zero(v):
                        grid[to + a][so + c] = v
        maps[n] = Matrix(R, rows, cols, tuple(tuple(r) for r in grid))
    return ComplexMap(S, T, maps)


def tensor_complex_module(c: Complex, M: FpModule) -> Complex:
    return tensor_complexes(c, Complex.concentrated(M))


def tensor_map_module(f: ComplexMap, M: FpModule, source=None, target=None) -> ComplexMap:
    cm = Complex.concentrated(M)
    return tensor_chain_maps(f, ComplexMap.identity(cm), source, target)


# ------------------------------------------------------------- resolutions


@dataclass
class FreeResolution:
    module: FpModule
    complex: Complex
    length: int
    terminated: bool

    def rank(self, i: int) -> int:
        return self.complex.term(-i).ngens


def _prune_columns(R: Ring, rank: int, cols: List[tuple], limit: int = 24) -> List[tuple]:
    """Drop generators lying in the span of the others (greedy, small inputs only)."""
    cols = _dedupe([c for c in cols if _nonzero(R, c)])
    if len(cols) > limit:
        return cols
    keep = list(cols)
    for c in list(reversed(cols)):
        others = [k for k in keep if k != c]
        if others and submodule(R, rank, others).contains(c):
            keep = others
    return keep


def free_resolution(M: FpModule, length: int | None = None) -> FreeResolution:
    """Free resolution F_n -> ... -> F_0 -> M placed in degrees -n..0.

    Stops early once a syzygy module vanishes (``terminated``).  The default
    length is the number of ring variables plus two.
    """
    R = M.ring
    if length is None:
        length = R.nvars + 2
    if length < 0:
        raise ValueError("resolution length must be >= 0")
    terms = {0: FpModule.free(R, M.ngens)}
    diffs = {}
    rels = _prune_columns(R, M.ngens, M.relations.columns())
    cur = Matrix.from_columns(R, M.ngens, rels)
    terminated = False
    for k in range(1, length + 1):
        if cur.ncols == 0:
            terminated = True
            break
        terms[-k] = FpModule.free(R, cur.ncols)
        diffs[-k] = cur
        nxt = syzygy_module(cur)
        cols = _prune_columns(R, cur.ncols, nxt.columns())
        cur = Matrix.from_columns(R, cur.ncols, cols)
    else:
        terminated = cur.ncols == 0
    cx = Complex(R, terms, diffs, check=False)
    return FreeResolution(M, cx, length, terminated)


def _resolution_for(M: FpModule, need: int, length: int | None) -> FreeResolution:
    L = length if length is not None else max(M.ring.nvars + 2, need)
    res = free_resolution(M, L)
    if not res.terminated and L < need:
        if length is None:
            res = free_resolution(M, 2 * L)
        if not res.terminated and res.length < need:
            raise ResolutionTooShort(
                f"need {need} resolution terms, computed {res.length}; increase length")
    return res


def tor(M: FpModule, N: FpModule, i: int, length: int | None = None) -> FpModule:
    """Tor_i(M, N) = H^{-i}(F ⊗ N) for a free resolution F of M."""
    if M.ring != N.ring:
        raise RingError("tor over different rings")
    if i < 0:
        return FpModule.zero(M.ring)
    res = _resolution_for(M, i + 1, length)
    return cohomology(tensor_complex_module(res.complex, N), -i)


def hom_free_complex(c: Complex, N: FpModule) -> Complex:
    """Hom(C, N) for a complex C of free modules: degree i holds Hom(C^{-i}, N)."""
    R = c.ring
    terms, diffs = {}, {}
    for i in c.degrees():
        terms[-i] = N.power(c.term(i).ngens)
    for i, m in c.d.items():
        # d^i: C^i -> C^{i+1} dualises to Hom(C^{i+1},N) -> Hom(C^i,N), degree -(i+1) -> -i
        diffs[-i - 1] = kron(m.transpose(), Matrix.identity(R, N.ngens))
    return Complex(R, terms, diffs, check=False)


def ext(M: FpModule, N: FpModule, i: int, length: int | None = None) -> FpModule:
    """Ext^i(M, N) = H^i(Hom(F, N))."""
    if M.ring != N.ring:
        raise RingError("ext over different rings")
    if i < 0:
        return FpModule.zero(M.ring)
    res = _resolution_for(M, i + 1, length)
    return cohomology(hom_free_complex(res.complex, N), i)


def hom_cyclic(ideal: Sequence[Any], M: FpModule) -> SubQuotient:
    """Hom(A/I, M) = {m in M : I m = 0}, realised inside M's generators."""
    R = M.ring
    ideal = [R.coerce(a) for a in ideal]
    g = M.ngens
    if g == 0:
        return SubQuotient.build(R, 0, [], [])
    blocks = [Matrix.scalar(R, g, a) for a in ideal]
    F = blocks[0]
    for b in blocks[1:]:
        F = F.vstack(b)
    K = _preimage_generators(R, F, M.power(len(ideal)))
    return SubQuotient.build(R, g, K, M.relations.columns())


# --------------------------------------------------------------- invariants


def zz_invariants(M: FpModule) -> Tuple[int, Tuple[int, ...]]:
    """(free rank, torsion coefficients > 1) of a module over ZZ or ZZ/n."""
    R = M.ring
    rel = M.relations
    if isinstance(R, QuotientRing) and isinstance(R.base, IntegerRing):
        n = R.modulus
        rel = rel.map(lambda a: a, R.base).hstack(Matrix.scalar(R.base, M.ngens, n))
    elif not isinstance(R, IntegerRing):
        raise RingError("zz_invariants needs ZZ or ZZ/n")
    if M.ngens == 0:
        return 0, ()
    if rel.ncols == 0:
        return M.ngens, ()
    diag, _, _ = smith_normal_form(rel)
    diag = diag + [0] * (M.ngens - len(diag))
    free = sum(1 for d in diag if d == 0)
    tors = tuple(sorted(d for d in diag if d > 1))
    return free, tors


def _prime_factor_count(n: int) -> int:
    c, d = 0, 2
    while d * d <= n:
        while n % d == 0:
            n //= d
            c += 1
        d += 1
    return c + (1 if n > 1 else 0)


def _poly_engine(M: FpModule):
    R = M.ring
    sub = submodule(R, M.ngens, M.relations.columns())
    return sub._engine, sub._base


def standard_monomial_count(M: FpModule):
    """k-dimension of a module over a polynomial ring (or quotient), INF if infinite."""
    eng, base = _poly_engine(M)
    n = base.nvars
    total = 0
    for comp in range(M.ngens):
        lts = [g.exp for g in eng.basis if g.comp == comp]
        bounds = []
        for v in range(n):
            pure = [e[v] for e in lts if all(e[w] == 0 for w in range(n) if w != v)]
            if not pure:
                return INF
            bounds.append(min(pure))
        for e in product(*(range(b) for b in bounds)):
            if not any(_divides(l, e) for l in lts):
                total += 1
    return total


def finite_length(M: FpModule):
    """Length (k-dimension over polynomial rings), or ``math.inf``."""
    R = M.ring
    if M.ngens == 0:
        return 0
    if isinstance(R, IntegerRing) or (isinstance(R, QuotientRing) and isinstance(R.base, IntegerRing)):
        free, tors = zz_invariants(M)
        if free:
            return INF
        return sum(_prime_factor_count(t) for t in tors)
    if R.is_field:
        return M.ngens - rank_over_field(M.relations)
    if isinstance(R, (PolyRing, QuotientRing)):
        return standard_monomial_count(M)
    raise RingError(f"finite_length not available over {R}")


def rank_over_field(m: Matrix) -> int:
    if m.ncols == 0 or m.nrows == 0:
        return 0
    from .rings.submodule import _Echelon

    return len(_Echelon(m.ring, m.nrows, m.columns()).pivots)


def variables_ideal(R: Ring) -> List[Any]:
    base = R.base if isinstance(R, QuotientRing) else R
    return [R.coerce(v) for v in base.gens()] if R.nvars else []


def min_generators(M: FpModule) -> int:
    """Minimal number of generators (exact over ZZ and fields; over polynomial
    rings the dimension of M/(variables)M, exact for graded or local modules)."""
    R = M.ring
    if M.ngens == 0:
        return 0
    if isinstance(R, IntegerRing) or (isinstance(R, QuotientRing) and isinstance(R.base, IntegerRing)):
        free, tors = zz_invariants(M)
        return free + len(tors)
    if R.is_field:
        return finite_length(M)
    return standard_monomial_count(M.ideal_quotient(variables_ideal(R)))


def hilbert_profile(M: FpModule, depth: int) -> Tuple[Any, ...]:
    """(dim M/m^k M for k = 1..depth), m the ideal of the variables."""
    from .rings import ideal_power

    R = M.ring
    out = []
    for k in range(1, depth + 1):
        out.append(finite_length(M.ideal_quotient(ideal_power(variables_ideal(R), k, R))))
    return tuple(out)


def module_invariants(M: FpModule):
    """A canonical iso-invariant where one is complete (ZZ, fields); k-dimension otherwise."""
    R = M.ring
    if isinstance(R, IntegerRing) or (isinstance(R, QuotientRing) and isinstance(R.base, IntegerRing)):
        return ("zz",) + zz_invariants(M)
    if R.is_field:
        return ("dim", finite_length(M))
    return ("dim", finite_length(M))


# ------------------------------------------------------ gaussian reduction


def obvious_unit_inverse(R: Ring, a):
    """Inverse of ``a`` when it is a unit of the evident kind (±1, nonzero field
    element, nonzero constant polynomial); None otherwise."""
    if R.is_zero(a):
        return None
    if isinstance(R, IntegerRing):
        return a if a in (1, -1) else None
    if isinstance(R, QuotientRing) and isinstance(R.base, IntegerRing):
        return pow(a, -1, R.modulus) if math.gcd(a, R.modulus) == 1 else None
    if R.is_field:
        return R.inv(a)
    base = R.base if isinstance(R, QuotientRing) else R
    if isinstance(base, PolyRing):
        p = R.lift(a) if isinstance(R, QuotientRing) else a
        if base.is_unit(p):
            c = next(iter(p.terms.values()))
            return R.coerce(base.const(base.field.inv(c)))
    return None


@dataclass
class Reduction:
    """A smaller complex with chain maps ``iota: small -> big`` and
    ``pi: big -> small`` such that ``pi ∘ iota`` is the identity."""

    small: Complex
    iota: ComplexMap
    pi: ComplexMap


def gaussian_reduction(c: Complex) -> Reduction:
    """Cancel unit entries of the differentials of a complex of free modules.

    Each cancellation is a homotopy equivalence; the returned maps compose them.
    """
    R = c.ring
    for i in c.degrees():
        if not c.term(i).is_free_presentation():
            raise RingError("gaussian_reduction needs free terms")
    terms = {i: c.term(i).ngens for i in c.degrees()}
    d = {i: [list(r) for r in c.dmat(i).rows] for i in range(c.lo, c.hi)}
    # iota/pi as dense lists: iota[i] is (orig rank x current rank), pi[i] (current x orig)
    iota = {i: [list(r) for r in Matrix.identity(R, terms[i]).rows] for i in terms}
    pi = {i: [list(r) for r in Matrix.identity(R, terms[i]).rows] for i in terms}
    z = R.zero()

    def find():
        for i in sorted(d):
            for r, row in enumerate(d[i]):
                for col, v in enumerate(row):
                    inv = obvious_unit_inverse(R, v)
                    if inv is not None:
                        return i, r, col, inv
        return None

    while True:
        hit = find()
        if hit is None:
            break
        i, r, col, uinv = hit
        D = d[i]
        beta = [D[r][k] for k in range(terms[i])]          # row r
        alpha = [D[k][col] for k in range(terms[i + 1])]    # column col
        keep_c = [k for k in range(terms[i]) if k != col]
        keep_r = [k for k in range(terms[i + 1]) if k != r]
        # new differential in degree i
        newD = []
        for a in keep_r:
            row = []
            ca = R.mul(alpha[a], uinv)
            for b in keep_c:
                v = D[a][b]
                if not R.is_zero(ca) and not R.is_zero(beta[b]):
                    v = R.sub(v, R.mul(ca, beta[b]))
                row.append(v)
            newD.append(row)
        d[i] = newD
        if i - 1 in d:
            d[i - 1] = [d[i - 1][k] for k in keep_c]
        if i + 1 in d:
            d[i + 1] = [[row[k] for k in keep_r] for row in d[i + 1]]
        # iota^i: new basis b -> e_b - u^{-1} beta_b e_col  (in current coords)
        coef = [R.neg(R.mul(uinv, beta[b])) for b in keep_c]
        old = iota[i]
        iota[i] = [[R.add(row[b], R.mul(row[col], coef[n])) for n, b in enumerate(keep_c)]
                   for row in old]
        iota[i + 1] = [[row[k] for k in keep_r] for row in iota[i + 1]]
        # pi^{i+1}: y -> y' - alpha u^{-1} y_r ; pi^i: drop col
        oldp = pi[i + 1]
        pi[i + 1] = [[R.sub(oldp[a][k], R.mul(R.mul(alpha[a], uinv), oldp[r][k]))
                      for k in range(len(oldp[0]) if oldp else 0)] for a in keep_r]
        pi[i] = [pi[i][k] for k in keep_c]
        terms[i] -= 1
        terms[i + 1] -= 1

    small_terms = {i: FpModule.free(R, n) for i, n in terms.items()}
    small_d = {i: Matrix(R, terms[i + 1], terms[i], tuple(tuple(r) for r in m))
               for i, m in d.items()}
    small = Complex(R, small_terms, small_d, check=False)
    io = ComplexMap(small, c, {i: Matrix(R, c.term(i).ngens, terms[i],
                                         tuple(tuple(r) for r in iota[i])) for i in terms})
    pr = ComplexMap(c, small, {i: Matrix(R, terms[i], c.term(i).ngens,
                                         tuple(tuple(r) for r in pi[i])) for i in terms})
    return Reduction(small, io, pr)
