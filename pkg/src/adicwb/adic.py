"""Koszul, dual Koszul and telescope stages; completion and torsion towers;
derived completion and torsion as pro/ind complexes; the weak proregularity
test and the levelwise comparison M ⊗ A/a^n -> M/a^n M.

Stage conventions (cohomological degrees):

* ``koszul_complex(j)`` is ⊗_i [A --a_i^j--> A] in degrees -1, 0, so it sits in
  degrees -n..0 and H^{-k} is the k-th Koszul homology.  The transition from
  stage j+1 to stage j is 1 in degree 0 and a_i in degree -1 factorwise.
* ``dual_koszul_stage(t)`` is ⊗_i [A --a_i^t--> A] in degrees 0, 1; the forward
  transition t -> t+1 is 1 in degree 0 and a_i in degree 1 factorwise.  Its
  colimit is ⊗_i [A -> A[1/a_i]].
* ``telescope_stage(j)`` keeps δ_0..δ_j in both degrees with d(δ_0) = δ_0 and
  d(δ_i) = δ_{i-1} - a δ_i.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .modcplx import (
    Complex,
    ComplexMap,
    FpModule,
    ModuleMap,
    Reduction,
    SubQuotient,
    gaussian_reduction,
    hom_cyclic,
    quasi_iso_check,
    tensor_chain_maps,
    tensor_complexes,
    tensor_modules,
)
from .rings import Matrix, Ring, RingError, RingMap, ideal_power, identity_map
from .towers import (
    DEFAULT_BOUND,
    FAILED,
    INCONCLUSIVE,
    VERIFIED,
    IndComplex,
    IndModule,
    ProComplex,
    ProModule,
    StabilizationReport,
    Tower,
    generator_counts,
    ind_colimit,
    strictly_growing,
    levelwise_cohomology,
    pro_zero_check,
)


@dataclass(frozen=True)
class AdicContext:
    """A ring with a finite generating sequence of an ideal."""

    ring: Ring
    gens: Tuple[Any, ...]

    def __post_init__(self):
        if not self.gens:
            raise RingError("an adic context needs at least one generator")
        object.__setattr__(self, "gens", tuple(self.ring.coerce(a) for a in self.gens))

    @property
    def n(self) -> int:
        return len(self.gens)

    def power(self, j: int) -> List[Any]:
        """Generators of a^j."""
        return ideal_power(list(self.gens), j, self.ring)

    def power_sequence(self, j: int) -> List[Any]:
        """(a_1^j, ..., a_n^j); cofinal with the powers of a."""
        return [self.ring.power(a, j) for a in self.gens]

    def __str__(self):
        return f"({', '.join(self.ring.fmt(a) for a in self.gens)}) in {self.ring}"


_cache: Dict[Any, Any] = {}
_cache_lock = threading.Lock()


def _memo(key, fn):
    if key in _cache:
        return _cache[key]
    val = fn()
    with _cache_lock:
        _cache.setdefault(key, val)
    return _cache[key]


# ---------------------------------------------------------------- stages


def _two_term(R: Ring, a, lo: int) -> Complex:
    return Complex(R, {lo: FpModule.free(R, 1), lo + 1: FpModule.free(R, 1)},
                   {lo: Matrix(R, 1, 1, ((R.coerce(a),),))}, check=False)


def _two_term_map(src: Complex, tgt: Complex, lo: int, low, high) -> ComplexMap:
    R = src.ring
    return ComplexMap(src, tgt, {lo: Matrix(R, 1, 1, ((R.coerce(low),),)),
                                 lo + 1: Matrix(R, 1, 1, ((R.coerce(high),),))})


def _labels_of_factor(c: Complex) -> Dict[int, List[str]]:
    out = {}
    for i in c.degrees():
        g = c.term(i).ngens
        out[i] = [str(i - c.lo)] if g == 1 else [f"{i - c.lo}.{b}" for b in range(g)]
    return out


def _tensor_labels(X: Complex, Y: Complex, T: Complex, lx, ly):
    out = {}
    for n, parts in T._layout.items():
        labs = [None] * T.term(n).ngens
        for p, q, off, _ in parts:
            gy = Y.term(q).ngens
            for i in range(X.term(p).ngens):
                for k in range(gy):
                    labs[off + i * gy + k] = lx[p][i] + ly[q][k]
        out[n] = labs
    return out


def tensor_factors(factors: Sequence[Complex]) -> Complex:
    """Left-nested tensor product; basis labels are recorded on ``_labels``."""
    c = factors[0]
    labels = _labels_of_factor(c)
    for f in factors[1:]:
        t = tensor_complexes(c, f)
        labels = _tensor_labels(c, f, t, labels, _labels_of_factor(f))
        c = t
    c._labels = labels
    return c


def tensor_factor_maps(maps: Sequence[ComplexMap], source: Complex = None,
                       target: Complex = None) -> ComplexMap:
    """⊗ of chain maps, nested like :func:`tensor_factors`."""
    f = maps[0]
    src, tgt = f.source, f.target
    for k, g in enumerate(maps[1:], start=1):
        last = k == len(maps) - 1
        s = source if (last and source is not None) else tensor_complexes(src, g.source)
        t = target if (last and target is not None) else tensor_complexes(tgt, g.target)
        f = tensor_chain_maps(f, g, s, t)
        src, tgt = s, t
    return f


def koszul_complex(ctx: AdicContext, j: int = 1) -> Complex:
    """Kos(A; a_1^j, ..., a_n^j) in degrees -n..0."""
    if j < 1:
        raise ValueError("Koszul stages start at j = 1")
    return _memo(("kos", ctx, j), lambda: tensor_factors(
        [_two_term(ctx.ring, a, -1) for a in ctx.power_sequence(j)]))


def koszul_transition(ctx: AdicContext, j: int) -> ComplexMap:
    """Stage j+1 -> stage j."""
    def build():
        R = ctx.ring
        maps = []
        for a in ctx.gens:
            s = _two_term(R, R.power(a, j + 1), -1)
            t = _two_term(R, R.power(a, j), -1)
            maps.append(_two_term_map(s, t, -1, a, 1))
        return tensor_factor_maps(maps, koszul_complex(ctx, j + 1), koszul_complex(ctx, j))
    return _memo(("kos_t", ctx, j), build)


def koszul_tower(ctx: AdicContext) -> ProComplex:
    return ProComplex(lambda j: koszul_complex(ctx, j), lambda j: koszul_transition(ctx, j),
                      name=f"Kos{ctx}")


def dual_koszul_stage(ctx: AdicContext, t: int = 1) -> Complex:
    """⊗_i [A --a_i^t--> A] in degrees 0..n."""
    if t < 1:
        raise ValueError("dual Koszul stages start at t = 1")
    return _memo(("dual", ctx, t), lambda: tensor_factors(
        [_two_term(ctx.ring, a, 0) for a in ctx.power_sequence(t)]))


def dual_koszul_transition(ctx: AdicContext, t: int) -> ComplexMap:
    """Stage t -> stage t+1."""
    def build():
        R = ctx.ring
        maps = []
        for a in ctx.gens:
            s = _two_term(R, R.power(a, t), 0)
            tg = _two_term(R, R.power(a, t + 1), 0)
            maps.append(_two_term_map(s, tg, 0, 1, a))
        return tensor_factor_maps(maps, dual_koszul_stage(ctx, t), dual_koszul_stage(ctx, t + 1))
    return _memo(("dual_t", ctx, t), build)


def dual_koszul_tower(ctx: AdicContext) -> IndComplex:
    return IndComplex(lambda t: dual_koszul_stage(ctx, t),
                      lambda t: dual_koszul_transition(ctx, t), name=f"Kdual{ctx}")


def dual_to_koszul_iso(ctx: AdicContext, j: int) -> ComplexMap:
    """Isomorphism dual_koszul_stage(j) -> koszul_complex(j)[-n] (signed permutation
    matching the basis elements that select the same target factors)."""
    def build():
        D = dual_koszul_stage(ctx, j)
        K = koszul_complex(ctx, j)
        Ks = K.shift(-ctx.n)
        Ks._labels = {i + ctx.n: labs for i, labs in K._labels.items()}
        return _signed_relabel(D, Ks)
    return _memo(("dual_iso", ctx, j), build)


def _signed_relabel(D: Complex, K: Complex) -> ComplexMap:
    R = D.ring
    one, minus = R.one(), R.from_int(-1)
    perm = {}
    for i in D.degrees():
        pos = {lab: k for k, lab in enumerate(K._labels[i])}
        perm[i] = [pos[lab] for lab in D._labels[i]]
    sign = {D.lo: [one] * D.term(D.lo).ngens}
    for i in range(D.lo, D.hi):
        dD, dK = D.dmat(i), K.dmat(i)
        s = [None] * D.term(i + 1).ngens
        for r in range(len(s)):
            for c in range(D.term(i).ngens):
                v = dD.rows[r][c]
                if R.is_zero(v):
                    continue
                w = dK.rows[perm[i + 1][r]][perm[i][c]]
                if w == v:
                    s[r] = sign[i][c]
                elif w == R.neg(v):
                    s[r] = R.neg(sign[i][c])
                else:
                    raise RingError("stages do not match up to sign")
                break
        sign[i + 1] = [x if x is not None else one for x in s]
    maps = {}
    for i in D.degrees():
        g = D.term(i).ngens
        rows = [[R.zero()] * g for _ in range(g)]
        for b in range(g):
            rows[perm[i][b]][b] = sign[i][b]
        maps[i] = Matrix(R, g, g, tuple(tuple(r) for r in rows))
    f = ComplexMap(D, K, maps)
    if not f.is_chain_map():
        raise RingError("signed relabelling is not a chain map")
    return f


def _telescope_factor(R: Ring, a, j: int) -> Complex:
    if j < 0:
        raise ValueError("telescope stages start at j = 0")
    a = R.coerce(a)
    z, o = R.zero(), R.one()
    rows = [[z] * (j + 1) for _ in range(j + 1)]
    rows[0][0] = o
    for i in range(1, j + 1):
        rows[i - 1][i] = o
        rows[i][i] = R.neg(a)
    m = Matrix(R, j + 1, j + 1, tuple(tuple(r) for r in rows))
    return Complex(R, {0: FpModule.free(R, j + 1), 1: FpModule.free(R, j + 1)}, {0: m},
                   check=False)


def _telescope_factor_comparison(R: Ring, a, j: int, src: Complex) -> ComplexMap:
    """δ_0 -> 1 in degree 0; δ_i -> a^{j-i} in degree 1."""
    tgt = _two_term(R, R.power(R.coerce(a), j), 0)
    z = R.zero()
    f0 = Matrix(R, 1, j + 1, (tuple([R.one()] + [z] * j),))
    f1 = Matrix(R, 1, j + 1, (tuple(R.power(R.coerce(a), j - i) for i in range(j + 1)),))
    return ComplexMap(src, tgt, {0: f0, 1: f1})


def telescope_stage(ctx: AdicContext, j: int) -> Complex:
    """Finite stage of the telescope (tensor over the generators)."""
    return _memo(("tel", ctx, j), lambda: tensor_factors(
        [_telescope_factor(ctx.ring, a, j) for a in ctx.gens]))


def telescope_comparison(ctx: AdicContext, j: int) -> ComplexMap:
    """Chain map telescope_stage(j) -> dual_koszul_stage(j); needs j >= 1."""
    def build():
        R = ctx.ring
        maps = [_telescope_factor_comparison(R, a, j, _telescope_factor(R, a, j))
                for a in ctx.gens]
        return tensor_factor_maps(maps, telescope_stage(ctx, j), dual_koszul_stage(ctx, j))
    return _memo(("tel_cmp", ctx, j), build)


@dataclass
class TelescopeReduction:
    """Factorwise cancellation of the unit entries of a telescope stage.

    ``factor_reductions[i].iota`` is certified a quasi-isomorphism of bounded
    free complexes (hence a homotopy equivalence, so it stays one after
    tensoring with any module); ``small_to_dual`` is the comparison map
    restricted along the tensor product of the iotas.
    """

    factor_reductions: List[Reduction]
    certified: bool
    small: Complex
    small_to_dual: ComplexMap


def telescope_reduction(ctx: AdicContext, j: int) -> TelescopeReduction:
    def build():
        R = ctx.ring
        reds, comps, ok = [], [], True
        for a in ctx.gens:
            fac = _telescope_factor(R, a, j)
            red = gaussian_reduction(fac)
            ok = ok and red.iota.is_chain_map() and quasi_iso_check(red.iota).ok
            reds.append(red)
            comps.append(_telescope_factor_comparison(R, a, j, fac) @ red.iota)
        small = tensor_factors([r.small for r in reds])
        f = tensor_factor_maps(comps, small, dual_koszul_stage(ctx, j))
        return TelescopeReduction(reds, ok, small, f)
    return _memo(("tel_red", ctx, j), build)


def telescope_koszul_check(ctx: AdicContext, j: int, M, direct_limit: int = 64) -> StabilizationReport:
    """Certify that telescope_stage(j) ⊗ M -> koszul_complex(j)[-n] ⊗ M (the
    comparison map followed by the signed relabelling) is a quasi-isomorphism.

    The telescope is first shrunk factorwise by cancelling unit entries; the
    inclusion of the small complex is a certified homotopy equivalence, so the
    check on small ⊗ M decides the one on the full stage.  When the full stage
    tensored with M has at most ``direct_limit`` generators it is also checked
    directly."""
    Mc = as_complex(M)
    red = telescope_reduction(ctx, j)
    if not red.certified:
        return StabilizationReport(INCONCLUSIVE, j, None, "factor reduction not certified")
    iso = dual_to_koszul_iso(ctx, j)
    idm = ComplexMap.identity(Mc)
    g = iso @ red.small_to_dual
    q = quasi_iso_check(tensor_chain_maps(g, idm, tensor_complexes(red.small, Mc),
                                          tensor_complexes(iso.target, Mc)))
    if not q.ok:
        return StabilizationReport(FAILED, j, q.witnesses,
                                   f"not a quasi-isomorphism in degrees {sorted(q.witnesses)}")
    tel = telescope_stage(ctx, j)
    detail = "quasi-isomorphism through the reduced telescope"
    if sum(tel.ranks().values()) * _total_rank(Mc) <= direct_limit:
        full = iso @ telescope_comparison(ctx, j)
        q = quasi_iso_check(tensor_chain_maps(full, idm, tensor_complexes(tel, Mc),
                                              tensor_complexes(iso.target, Mc)))
        if not q.ok:
            return StabilizationReport(FAILED, j, q.witnesses,
                                       f"direct check fails in degrees {sorted(q.witnesses)}")
        detail += " and directly"
    return StabilizationReport(VERIFIED, j, None, detail)


def _total_rank(Mc: Complex) -> int:
    return sum(Mc.ranks().values())


# ------------------------------------------------------------ base change


def extend_scalars(c: Complex, f: RingMap) -> Complex:
    """B ⊗_A C, applying ``f`` to every presentation and differential entry."""
    B = f.target
    terms = {i: FpModule(B, m.ngens, f.matrix(m.relations)) for i, m in c.terms.items()}
    return Complex(B, terms, {i: f.matrix(m) for i, m in c.d.items()}, check=False)


@dataclass
class BaseChange:
    source: AdicContext
    target: AdicContext
    ring_map: RingMap

    def koszul_iso(self, j: int) -> ComplexMap:
        """Kos(A; a^j) ⊗ B -> Kos(B; f(a)^j); the identity once matrices agree."""
        return _identity_if_equal(extend_scalars(koszul_complex(self.source, j), self.ring_map),
                                  koszul_complex(self.target, j))

    def telescope_iso(self, j: int) -> ComplexMap:
        return _identity_if_equal(extend_scalars(telescope_stage(self.source, j), self.ring_map),
                                  telescope_stage(self.target, j))

    def dual_iso(self, j: int) -> ComplexMap:
        return _identity_if_equal(
            extend_scalars(dual_koszul_stage(self.source, j), self.ring_map),
            dual_koszul_stage(self.target, j))


def _identity_if_equal(c: Complex, d: Complex) -> ComplexMap:
    if c.ranks() != d.ranks() or any(c.dmat(i) != d.dmat(i) for i in c.degrees()):
        raise RingError("base-changed stage differs from the stage over the target ring")
    R = d.ring
    return ComplexMap(c, d, {i: Matrix.identity(R, d.term(i).ngens) for i in d.degrees()})


def base_change(ctx: AdicContext, f: RingMap) -> BaseChange:
    if f.source != ctx.ring:
        raise RingError(f"map starts at {f.source}, context lives over {ctx.ring}")
    return BaseChange(ctx, AdicContext(f.target, tuple(f(a) for a in ctx.gens)), f)


# ------------------------------------------------------ completion / torsion


def completion_tower(M, ctx: AdicContext, powers: str = "ideal",
                     colimit_level: int = 2 * DEFAULT_BOUND) -> ProModule:
    """{M / a^n M} with canonical surjections (``powers="sequence"`` uses the
    cofinal ideals (a_1^n, ..., a_n^n)).  ``M`` may be an :class:`IndModule`, in
    which case each level is the certified colimit of {M_t / a^n M_t}."""
    gens = ctx.power if powers == "ideal" else ctx.power_sequence
    if isinstance(M, IndModule):
        return _colimit_levels(
            lambda n: IndModule(lambda t: M.level(t).ideal_quotient(gens(n)),
                                lambda t: ModuleMap(M.level(t).ideal_quotient(gens(n)),
                                                    M.level(t + 1).ideal_quotient(gens(n)),
                                                    M.transition(t).matrix)),
            lambda n, t0: Matrix.identity(ctx.ring, M.level(t0).ngens),
            colimit_level, name=f"completion of {M.name}")
    return ProModule.from_function(lambda n: M.ideal_quotient(gens(n)),
                                   lambda n: Matrix.identity(ctx.ring, M.ngens),
                                   name="completion")


class ColimitUnavailable(RuntimeError):
    """An ind system did not stabilize within the inspected levels."""

    def __init__(self, msg, growing=False):
        super().__init__(msg)
        self.growing = growing


def _colimit_levels(inner, pro_matrix, b: int, name: str = "",
                    levels: int = DEFAULT_BOUND + 1) -> ProModule:
    """Pro tower whose level n is the colimit of the ind tower ``inner(n)``,
    all evaluated at one common index t0; transitions have matrix
    ``pro_matrix(n, t0)`` on the generators of ``inner(n).level(t0)``.

    Levels 1..``levels`` are certified eagerly so that t0 is fixed before any
    level is handed out; a later level needing a larger t0 raises."""

    def certify(n, t0):
        lv = ind_colimit(inner(n), b, start=t0)
        if lv is None:
            grow = strictly_growing(generator_counts(inner(n), min(b, 6)))
            raise ColimitUnavailable(f"level {n}: colimit not certified by level {b}", grow)
        return lv

    t0 = 1
    while True:
        vals: Dict[int, FpModule] = {}
        for n in range(1, levels + 1):
            lv = certify(n, t0)
            if lv.level > t0:
                t0 = lv.level
                break
            vals[n] = lv.module
        else:
            break

    def value(n):
        if n in vals:
            return vals[n]
        lv = certify(n, t0)
        if lv.level != t0:
            raise ColimitUnavailable(f"level {n} needs a later index than {t0}")
        return lv.module

    tw = ProModule(value, lambda n: ModuleMap(value(n + 1), value(n), pro_matrix(n, t0)), name)
    tw.t0 = t0
    return tw


def torsion_ind(M: FpModule, ctx: AdicContext) -> IndModule:
    """{Hom(A/a^n, M)} with inclusion transitions, realised inside M."""
    sq: Dict[int, SubQuotient] = {}
    lock = threading.Lock()

    def level(n):
        if n not in sq:
            v = hom_cyclic(ctx.power(n), M)
            with lock:
                sq.setdefault(n, v)
        return sq[n]

    return IndModule(lambda n: level(n).module,
                     lambda n: level(n).induced(Matrix.identity(ctx.ring, M.ngens), level(n + 1)),
                     name="torsion")


def as_complex(M) -> Complex:
    if isinstance(M, Complex):
        return M
    if isinstance(M, FpModule):
        return Complex.concentrated(M)
    raise TypeError(f"expected a module or complex, got {type(M).__name__}")


def _unit_complex(R: Ring) -> Complex:
    return Complex.concentrated(FpModule.free(R, 1))


def tensor_stage(stage: Complex, Mc: Complex) -> Complex:
    return tensor_complexes(stage, Mc)


def derived_completion(Mc, ctx: AdicContext) -> ProComplex:
    """{Kos(A; a^j) ⊗ Mc}."""
    Mc = as_complex(Mc)
    levels: Dict[int, Complex] = {}

    def level(j):
        if j not in levels:
            levels[j] = tensor_complexes(koszul_complex(ctx, j), Mc)
        return levels[j]

    def trans(j):
        idm = ComplexMap.identity(Mc)
        return tensor_chain_maps(koszul_transition(ctx, j), idm, level(j + 1), level(j))

    return ProComplex(level, trans, name="derived completion")


def completion_map(Mc, ctx: AdicContext, j: int, target: Complex = None) -> ComplexMap:
    """Mc = A ⊗ Mc -> Kos(A; a^j) ⊗ Mc, the identity into the degree-0 summand."""
    Mc = as_complex(Mc)
    R = ctx.ring
    K = koszul_complex(ctx, j)
    unit = _unit_complex(R)
    inc = ComplexMap(unit, K, {0: Matrix.identity(R, 1)})
    src = tensor_complexes(unit, Mc)
    return tensor_chain_maps(inc, ComplexMap.identity(Mc), src,
                             target or tensor_complexes(K, Mc))


def derived_torsion(Mc, ctx: AdicContext) -> IndComplex:
    """{dual_koszul_stage(t) ⊗ Mc}."""
    Mc = as_complex(Mc)
    levels: Dict[int, Complex] = {}

    def level(t):
        if t not in levels:
            levels[t] = tensor_complexes(dual_koszul_stage(ctx, t), Mc)
        return levels[t]

    def trans(t):
        idm = ComplexMap.identity(Mc)
        return tensor_chain_maps(dual_koszul_transition(ctx, t), idm, level(t), level(t + 1))

    return IndComplex(level, trans, name="derived torsion")


def counit_map(Mc, ctx: AdicContext, t: int, source: Complex = None) -> ComplexMap:
    """dual_koszul_stage(t) ⊗ Mc -> A ⊗ Mc, the projection onto degree 0."""
    Mc = as_complex(Mc)
    R = ctx.ring
    D = dual_koszul_stage(ctx, t)
    unit = _unit_complex(R)
    proj = ComplexMap(D, unit, {0: Matrix.identity(R, 1)})
    return tensor_chain_maps(proj, ComplexMap.identity(Mc), source or tensor_complexes(D, Mc),
                             tensor_complexes(unit, Mc))


# ------------------------------------------------------------------- checks


def koszul_homology_tower(ctx: AdicContext, i: int) -> ProModule:
    """{H_i(Kos(A; a^j))} with the multiplication transitions."""
    return levelwise_cohomology(koszul_tower(ctx), -i)


def wpr_check(ctx: AdicContext, bound: int = DEFAULT_BOUND) -> StabilizationReport:
    """The higher Koszul homology towers are pro-zero (checked on the window)."""
    deepest = 1
    for i in range(1, ctx.n + 1):
        r = pro_zero_check(koszul_homology_tower(ctx, i), bound)
        if not r.ok:
            return StabilizationReport(INCONCLUSIVE, r.level, r.witness, f"H_{i}: {r.detail}")
        deepest = max(deepest, r.level)
    return StabilizationReport(VERIFIED, deepest, None,
                               f"H_1..H_{ctx.n} Koszul towers pro-zero to bound {bound}")


def psi_comparison(M: FpModule, ctx: AdicContext, n: int) -> StabilizationReport:
    """M ⊗ A/a^n -> M/a^n M induced by the identity on generators."""
    if n < 1:
        raise ValueError("n >= 1")
    R = ctx.ring
    src = tensor_modules(M, FpModule.cyclic(R, ctx.power(n)))
    tgt = M.ideal_quotient(ctx.power(n))
    f = ModuleMap(src, tgt, Matrix.identity(R, M.ngens))
    if not f.is_well_defined():
        return StabilizationReport(FAILED, n, None, "comparison map is not well defined")
    if f.is_iso():
        return StabilizationReport(VERIFIED, n, tgt, "isomorphism")
    return StabilizationReport(FAILED, n, f.kernel().module, "not an isomorphism")


# ------------------------------------------------- named ind-modules over ZZ


def rationals_ind(R: Ring) -> IndModule:
    """QQ as the direct system ZZ --x2!--> ZZ --x3!--> ZZ --x4!--> ...

    Every integer divides a partial product of the transitions, so the colimit
    is QQ; factorials make each prime's torsion die within few levels."""
    F = FpModule.free(R, 1)
    return IndModule.from_function(lambda t: F,
                                   lambda t: Matrix.scalar(R, 1, R.from_int(math.factorial(t + 1))),
                                   name="rationals")


def prufer_ind(R: Ring, p) -> IndModule:
    """The Prüfer module as {A/(p^t)} with multiplication by p."""
    p = R.coerce(p)
    return IndModule.from_function(lambda t: FpModule.cyclic(R, [R.power(p, t)]),
                                   lambda t: Matrix.scalar(R, 1, p), name="prufer")


def sum_copies_ind(R: Ring, p) -> IndModule:
    """A countable direct sum of copies of A/(p) as {(A/p)^t} with inclusions."""
    p = R.coerce(p)

    def level(t):
        return FpModule(R, t, Matrix.scalar(R, t, p))

    def matrix(t):
        rows = [[R.one() if r == c else R.zero() for c in range(t)] for r in range(t + 1)]
        return Matrix(R, t + 1, t, tuple(tuple(r) for r in rows))

    return IndModule.from_function(level, matrix, name="sum of copies")


# ------------------------------------------------------------ the diagonal


@dataclass(frozen=True)
class DiagonalContext:
    """A = K[x_1..x_n] inside the enveloping ring B = K[x_1..x_n, x_1_..x_n_].

    The second copy of each variable carries a trailing underscore; the
    diagonal sequence is x_i - x_i_ and the augmentation ideal is generated by
    all 2n variables.
    """

    A: Any

    def __post_init__(self):
        from .rings import PolyRing

        if not isinstance(self.A, PolyRing):
            raise RingError("the diagonal model needs a polynomial ring")

    @property
    def n(self) -> int:
        return self.A.nvars

    @property
    def B(self):
        from .rings import PolyRing

        return _memo(("B", self.A), lambda: PolyRing(
            self.A.field, tuple(self.A.names) + tuple(v + "_" for v in self.A.names),
            self.A.order))

    @property
    def first(self) -> RingMap:
        """A -> B on the first copy."""
        B = self.B
        return RingMap(self.A, B, tuple(B.gens()[: self.n]))

    @property
    def second(self) -> RingMap:
        """A -> B on the second copy."""
        B = self.B
        return RingMap(self.A, B, tuple(B.gens()[self.n:]))

    @property
    def multiplication(self) -> RingMap:
        """B -> A identifying the copies."""
        g = self.A.gens()
        return RingMap(self.B, self.A, tuple(g) + tuple(g))

    @property
    def diagonal(self) -> List[Any]:
        g = self.B.gens()
        return [g[i] - g[i + self.n] for i in range(self.n)]

    @property
    def a_ctx(self) -> AdicContext:
        return AdicContext(self.A, tuple(self.A.gens()))

    @property
    def I_ctx(self) -> AdicContext:
        return AdicContext(self.B, tuple(self.B.gens()))

    @property
    def diag_ctx(self) -> AdicContext:
        return AdicContext(self.B, tuple(self.diagonal))

    def extend(self, M: FpModule, f: RingMap) -> FpModule:
        return FpModule(f.target, M.ngens, f.matrix(M.relations))

    def outer(self, M: FpModule, N: FpModule) -> FpModule:
        """M ⊠ N over B: M in the first variables, N in the second."""
        return tensor_modules(self.extend(M, self.first), self.extend(N, self.second))

    def restrict(self, M: FpModule) -> FpModule:
        """An A-module viewed over B through the multiplication map."""
        return self.extend(M, self.first).ideal_quotient(self.diagonal)
