"""Inverse (pro) and direct (ind) systems of modules and complexes.

Towers are indexed from 1 and evaluated lazily.  All decisions are bounded:
a tower is inspected on levels ``1..bound`` and a verdict is one of
``stabilized``, ``verified``, ``failed`` or ``inconclusive``.

Pro-zero and ind-zero are certified on the window ``j <= max(1, bound // 2)``
with witnesses searched among levels ``k <= bound``; this leaves room for
towers whose kernels die only after an index doubling.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from .modcplx import (
    Complex,
    ComplexMap,
    FpModule,
    ModuleMap,
    SubQuotient,
    cohomology,
    induced_map,
    min_generators,
)
from .rings import Matrix

DEFAULT_BOUND = 8

STABILIZED = "stabilized"
VERIFIED = "verified"
FAILED = "failed"
INCONCLUSIVE = "inconclusive"


@dataclass
class StabilizationReport:
    status: str
    level: Optional[int] = None
    witness: Any = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status in (STABILIZED, VERIFIED)

    def __bool__(self):
        return self.ok


def window(bound: int) -> int:
    """Levels on which zero-ness is certified for a given inspection bound."""
    return max(1, bound // 2)


def _check_bound(bound: int):
    if bound < 2:
        raise ValueError("inspection bound must be >= 2")


# ------------------------------------------------------------------ towers


class Tower:
    """Lazy tower.  ``kind`` is ``"pro"`` (transition n: X_{n+1} -> X_n) or
    ``"ind"`` (transition n: X_n -> X_{n+1})."""

    kind = "pro"

    def __init__(self, level: Callable[[int], Any], transition: Callable[[int], Any],
                 name: str = ""):
        self._level_fn = level
        self._trans_fn = transition
        self.name = name
        self._levels: Dict[int, Any] = {}
        self._trans: Dict[int, Any] = {}
        self._lock = threading.Lock()
        #: optional shortcut (src, dst) -> composite map, used when the levels
        #: come from a tower of complexes and intermediate levels are costly
        self.composite_fn: Optional[Callable[[int, int], Any]] = None

    def level(self, n: int):
        if n < 1:
            raise IndexError("towers are indexed from 1")
        if n not in self._levels:
            v = self._level_fn(n)
            with self._lock:
                self._levels.setdefault(n, v)
        return self._levels[n]

    def transition(self, n: int):
        if n < 1:
            raise IndexError("towers are indexed from 1")
        if n not in self._trans:
            v = self._trans_fn(n)
            with self._lock:
                self._trans.setdefault(n, v)
        return self._trans[n]

    def __repr__(self):
        return f"{type(self).__name__}({self.name or '?'})"


class _ModuleTowerMixin:
    def composite(self, src: int, dst: int) -> ModuleMap:
        """Composite of transitions from level ``src`` to level ``dst``."""
        if self.composite_fn is not None and src != dst:
            if (src < dst) != (self.kind == "ind"):
                raise ValueError("composites follow the tower direction")
            return self.composite_fn(src, dst)
        if self.kind == "pro":
            if src < dst:
                raise ValueError("pro composites go down")
            m = ModuleMap.identity(self.level(src))
            for n in range(src - 1, dst - 1, -1):
                m = self.transition(n) @ m
            return m
        if src > dst:
            raise ValueError("ind composites go up")
        m = ModuleMap.identity(self.level(src))
        for n in range(src, dst):
            m = self.transition(n) @ m
        return m


class ProModule(_ModuleTowerMixin, Tower):
    kind = "pro"

    @classmethod
    def constant(cls, M: FpModule, name: str = "") -> "ProModule":
        return cls(lambda n: M, lambda n: ModuleMap.identity(M), name or "constant")

    @classmethod
    def from_function(cls, level, matrix, name: str = "") -> "ProModule":
        """Levels from ``level(n)``; transition X_{n+1} -> X_n has matrix ``matrix(n)``."""
        t = cls(level, lambda n: None, name)
        t._trans_fn = lambda n: ModuleMap(t.level(n + 1), t.level(n), matrix(n))
        return t


class IndModule(_ModuleTowerMixin, Tower):
    kind = "ind"

    @classmethod
    def constant(cls, M: FpModule, name: str = "") -> "IndModule":
        return cls(lambda n: M, lambda n: ModuleMap.identity(M), name or "constant")

    @classmethod
    def from_function(cls, level, matrix, name: str = "") -> "IndModule":
        """Levels from ``level(n)``; transition X_n -> X_{n+1} has matrix ``matrix(n)``."""
        t = cls(level, lambda n: None, name)
        t._trans_fn = lambda n: ModuleMap(t.level(n), t.level(n + 1), matrix(n))
        return t


class _ComplexTowerMixin:
    def composite(self, src: int, dst: int) -> ComplexMap:
        if self.kind == "pro":
            if src < dst:
                raise ValueError("pro composites go down")
            m = ComplexMap.identity(self.level(src))
            for n in range(src - 1, dst - 1, -1):
                m = self.transition(n) @ m
            return m
        if src > dst:
            raise ValueError("ind composites go up")
        m = ComplexMap.identity(self.level(src))
        for n in range(src, dst):
            m = self.transition(n) @ m
        return m


class ProComplex(_ComplexTowerMixin, Tower):
    kind = "pro"


class IndComplex(_ComplexTowerMixin, Tower):
    kind = "ind"


@dataclass
class TowerMap:
    """Levelwise maps f_n: source_n -> target_n between towers of one kind."""

    source: Tower
    target: Tower
    at: Callable[[int], Any]
    _cache: Dict[int, Any] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.source.kind != self.target.kind:
            raise ValueError("a tower map needs towers of the same kind")

    @property
    def kind(self):
        return self.source.kind

    def level(self, n: int):
        if n not in self._cache:
            self._cache[n] = self.at(n)
        return self._cache[n]

    @classmethod
    def identity(cls, t: Tower) -> "TowerMap":
        return cls(t, t, lambda n: ModuleMap.identity(t.level(n)))

    def is_natural(self, bound: int) -> bool:
        """Compatibility with transitions on levels 1..bound."""
        for n in range(1, bound):
            if self.kind == "pro":
                lhs = self.level(n) @ self.source.transition(n)
                rhs = self.target.transition(n) @ self.level(n + 1)
            else:
                lhs = self.target.transition(n) @ self.level(n)
                rhs = self.level(n + 1) @ self.source.transition(n)
            diff = ModuleMap(lhs.source, lhs.target, lhs.matrix - rhs.matrix)
            if not diff.is_zero():
                return False
        return True

    def __matmul__(self, other: "TowerMap") -> "TowerMap":
        return TowerMap(other.source, self.target, lambda n: self.level(n) @ other.level(n))


def tower_cls(kind: str, complexes: bool = False):
    if complexes:
        return ProComplex if kind == "pro" else IndComplex
    return ProModule if kind == "pro" else IndModule


# ---------------------------------------------------- derived constructions


def levelwise_cohomology(t: Tower, i: int) -> Tower:
    """The tower of H^i of the levels with induced transitions."""
    cls = tower_cls(t.kind)
    return cls(lambda n: cohomology(t.level(n), i),
               lambda n: induced_map(t.transition(n), i),
               name=f"H^{i}({t.name})")


def levelwise_cohomology_map(f: TowerMap, i: int, source: Tower = None,
                             target: Tower = None) -> TowerMap:
    S = source or levelwise_cohomology(f.source, i)
    T = target or levelwise_cohomology(f.target, i)
    return TowerMap(S, T, lambda n: induced_map(f.level(n), i))


def kernel_tower(f: TowerMap) -> Tower:
    cls = tower_cls(f.kind)
    kers: Dict[int, SubQuotient] = {}

    def sq(n):
        if n not in kers:
            kers[n] = f.level(n).kernel()
        return kers[n]

    def trans(n):
        t = f.source.transition(n)
        if f.kind == "pro":
            return sq(n + 1).induced(t.matrix, sq(n))
        return sq(n).induced(t.matrix, sq(n + 1))

    return cls(lambda n: sq(n).module, trans, name=f"ker({f.source.name})")


def cokernel_tower(f: TowerMap) -> Tower:
    cls = tower_cls(f.kind)

    def trans(n):
        t = f.target.transition(n)
        if f.kind == "pro":
            return ModuleMap(f.level(n + 1).cokernel(), f.level(n).cokernel(), t.matrix)
        return ModuleMap(f.level(n).cokernel(), f.level(n + 1).cokernel(), t.matrix)

    return cls(lambda n: f.level(n).cokernel(), trans, name=f"coker({f.target.name})")


def direct_sum_towers(a: Tower, b: Tower) -> Tower:
    from .rings import block_diag

    cls = tower_cls(a.kind)

    def trans(n):
        ta, tb = a.transition(n), b.transition(n)
        src = ta.source.direct_sum(tb.source)
        tgt = ta.target.direct_sum(tb.target)
        return ModuleMap(src, tgt, block_diag(src.ring, [ta.matrix, tb.matrix]))

    return cls(lambda n: a.level(n).direct_sum(b.level(n)), trans,
               name=f"{a.name}+{b.name}")


def reindex(t: Tower, phi: Callable[[int], int]) -> Tower:
    """The tower n -> t_{phi(n)} for strictly increasing phi."""
    cls = tower_cls(t.kind)
    if t.kind == "pro":
        return cls(lambda n: t.level(phi(n)), lambda n: t.composite(phi(n + 1), phi(n)),
                   name=f"{t.name}∘phi")
    return cls(lambda n: t.level(phi(n)), lambda n: t.composite(phi(n), phi(n + 1)),
               name=f"{t.name}∘phi")


def reindex_comparison(t: Tower, phi: Callable[[int], int]) -> TowerMap:
    """The natural map between t∘phi and t (pro: t_{phi(n)} -> t_n; ind: t_n -> t_{phi(n)})."""
    r = reindex(t, phi)
    if t.kind == "pro":
        return TowerMap(r, t, lambda n: t.composite(phi(n), n))
    return TowerMap(t, r, lambda n: t.composite(n, phi(n)))


# ---------------------------------------------------------------- verdicts


def _zero_check(t: Tower, bound: int) -> StabilizationReport:
    _check_bound(bound)
    deepest = 1
    for j in range(1, window(bound) + 1):
        if t.level(j).is_zero():
            continue
        found = None
        if t.kind == "pro":
            m = ModuleMap.identity(t.level(j))
            for k in range(j + 1, bound + 1):
                m = m @ t.transition(k - 1)
                if m.is_zero():
                    found = k
                    break
        else:
            m = ModuleMap.identity(t.level(j))
            for k in range(j + 1, bound + 1):
                m = t.transition(k - 1) @ m
                if m.is_zero():
                    found = k
                    break
        if found is None:
            return StabilizationReport(
                INCONCLUSIVE, j, t.level(j),
                f"level {j} survives every composite up to level {bound}")
        deepest = max(deepest, found)
    return StabilizationReport(VERIFIED, deepest, None,
                               f"levels <= {window(bound)} die by level {deepest}")


def pro_zero_check(t: Tower, bound: int = DEFAULT_BOUND) -> StabilizationReport:
    """Every level j of the window is killed by some composite X_k -> X_j, k <= bound."""
    if t.kind != "pro":
        raise ValueError("pro_zero_check needs a pro tower")
    return _zero_check(t, bound)


def ind_zero_check(t: Tower, bound: int = DEFAULT_BOUND) -> StabilizationReport:
    """Every class at level j of the window dies in some X_k, k <= bound."""
    if t.kind != "ind":
        raise ValueError("ind_zero_check needs an ind tower")
    return _zero_check(t, bound)


def _persistent_nonzero(t: Tower, bound: int) -> Optional[int]:
    """First level of the inspected tail when that tail cannot die: every level
    is nonzero and every transition is surjective (pro) or injective (ind), so
    no composite inside it is zero."""
    start = window(bound)
    for n in range(start, bound + 1):
        if t.level(n).is_zero():
            return None
    for n in range(start, bound):
        tr = t.transition(n)
        if not (tr.is_surjective() if t.kind == "pro" else tr.is_injective()):
            return None
    return start


def _iso_check(f: TowerMap, bound: int) -> StabilizationReport:
    _check_bound(bound)
    parts = {"kernel": kernel_tower(f), "cokernel": cokernel_tower(f)}
    levels = []
    for label, tw in parts.items():
        r = _zero_check(tw, bound)
        if not r.ok:
            lvl = _persistent_nonzero(tw, bound)
            if lvl is not None:
                return StabilizationReport(
                    FAILED, lvl, tw.level(lvl),
                    f"{label} tower stays nonzero from level {lvl} to {bound}")
            return StabilizationReport(INCONCLUSIVE, r.level, r.witness,
                                       f"{label} tower: {r.detail}")
        levels.append(r.level)
    return StabilizationReport(VERIFIED, max(levels), None,
                               "kernel and cokernel towers vanish in the window")


def pro_iso_check(f: TowerMap, bound: int = DEFAULT_BOUND) -> StabilizationReport:
    if f.kind != "pro":
        raise ValueError("pro_iso_check needs a map of pro towers")
    return _iso_check(f, bound)


def ind_iso_check(f: TowerMap, bound: int = DEFAULT_BOUND) -> StabilizationReport:
    if f.kind != "ind":
        raise ValueError("ind_iso_check needs a map of ind towers")
    return _iso_check(f, bound)


def stable_value(t: Tower, bound: int = DEFAULT_BOUND) -> StabilizationReport:
    """``stabilized`` at the least n <= bound-1 from which all transitions up to
    ``bound`` are isomorphisms (witness: that level's module); else inconclusive."""
    _check_bound(bound)
    n = bound
    while n > 1 and t.transition(n - 1).is_iso():
        n -= 1
    if n == bound:
        return StabilizationReport(INCONCLUSIVE, bound, None,
                                   f"transition {bound - 1} is not an isomorphism")
    return StabilizationReport(STABILIZED, n, t.level(n),
                               f"transitions are isomorphisms from level {n} to {bound}")


def generator_counts(t: Tower, bound: int) -> List[int]:
    return [min_generators(t.level(n)) for n in range(1, bound + 1)]


def strictly_growing(counts: List[int], tail: int = 3) -> bool:
    tail = min(tail, len(counts))
    c = counts[-tail:]
    return len(c) >= 2 and all(a < b for a, b in zip(c, c[1:]))


# ------------------------------------------------------- limits and colimits


def _same_submodule(a: SubQuotient, b: SubQuotient) -> bool:
    """Equality of (span gens + rels) for two subquotients of one ambient module."""
    from .rings import submodule

    R = a.ring
    sa = submodule(R, a.rank, list(a.gens) + list(a.rels))
    sb = submodule(R, b.rank, list(b.gens) + list(b.rels))
    return all(sb.contains(g) for g in a.gens) and all(sa.contains(g) for g in b.gens)


@dataclass
class LimitValue:
    """A certified (co)limit: ``module`` plus how it sits in the tower."""

    module: FpModule
    level: int
    realization: Any
    report: StabilizationReport


def ml_limit(t: ProModule, m0: int, b: int) -> Optional[LimitValue]:
    """Inverse limit of a Mittag-Leffler tower from a finite window.

    The stable image S_m = Im(X_b -> X_m) must equal Im(X_{b-1} -> X_m) for
    m = m0, m0+1 and S_{m0+1} -> S_{m0} must be an isomorphism; the limit is
    then S_{m0}, realised inside X_{m0}.  Returns None if not certified.
    """
    if not (1 <= m0 and m0 + 1 <= b - 1):
        raise ValueError("need m0 + 1 <= b - 1")
    imgs = {}
    for m in (m0, m0 + 1):
        s_b = t.composite(b, m).image()
        s_b1 = t.composite(b - 1, m).image()
        if not _same_submodule(s_b, s_b1):
            return None
        imgs[m] = s_b
    step = imgs[m0 + 1].induced(t.transition(m0).matrix, imgs[m0])
    if not step.is_iso():
        return None
    rep = StabilizationReport(STABILIZED, m0, imgs[m0].module,
                              f"stable images at levels {m0},{m0 + 1} from levels {b - 1},{b}")
    return LimitValue(imgs[m0].module, m0, imgs[m0], rep)


def _kernel_of(t: IndModule, src: int, dst: int) -> SubQuotient:
    return t.composite(src, dst).kernel()


def ind_colimit(t: IndModule, b: int, start: int = 1) -> Optional[LimitValue]:
    """Direct limit of an ind tower from a finite window.

    Looks for the least t0 >= start with ker(X_t -> X_b) = ker(X_t -> X_{b-1})
    for t = t0, t0+1 and X_{t0}/K -> X_{t0+1}/K an isomorphism; the colimit is
    then X_{t0}/ker(X_{t0} -> X_b) on the generators of X_{t0}.
    """
    for t0 in range(start, b - 1):
        quo = {}
        ok = True
        for s in (t0, t0 + 1):
            k_b = _kernel_of(t, s, b)
            k_b1 = _kernel_of(t, s, b - 1)
            if not _same_submodule(k_b, k_b1):
                ok = False
                break
            quo[s] = t.level(s).quotient_by(k_b.gens)
        if not ok:
            continue
        step = ModuleMap(quo[t0], quo[t0 + 1], t.transition(t0).matrix)
        if step.is_iso():
            rep = StabilizationReport(STABILIZED, t0, quo[t0],
                                      f"kernels stable at levels {t0},{t0 + 1} against {b - 1},{b}")
            return LimitValue(quo[t0], t0, None, rep)
    return None
