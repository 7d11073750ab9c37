"""Verification pipelines: each builds both sides of an isomorphism between
derived completion / torsion objects as towers, constructs the natural map
between them, and renders a bounded verdict.

Double towers (a torsion stage of a completion stage, or vice versa) are
evaluated through a certified Mittag-Leffler limit or direct limit of the
inner tower at fixed inner levels (see :func:`inner_levels`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from .adic import (
    AdicContext,
    ColimitUnavailable,
    DiagonalContext,
    _colimit_levels,
    _two_term,
    _two_term_map,
    _unit_complex,
    as_complex,
    completion_map,
    completion_tower,
    counit_map,
    dual_koszul_stage,
    dual_koszul_transition,
    extend_scalars,
    koszul_complex,
    koszul_transition,
    tensor_factor_maps,
    tensor_factors,
)
from .modcplx import (
    Complex,
    ComplexMap,
    FpModule,
    ModuleMap,
    cohomology,
    finite_length,
    free_resolution,
    hom_free_complex,
    induced_map,
    min_generators,
    quasi_iso_check,
    tensor_chain_maps,
    tensor_complexes,
    tensor_modules,
    tor,
)
from .rings import Matrix, kron
from .towers import (
    DEFAULT_BOUND,
    FAILED,
    INCONCLUSIVE,
    VERIFIED,
    IndModule,
    ProModule,
    StabilizationReport,
    TowerMap,
    generator_counts,
    ind_colimit,
    ind_iso_check,
    ml_limit,
    pro_iso_check,
    stable_value,
    strictly_growing,
)

THEOREM_IDS = ("L3.1", "T3.2", "T3.3", "MGM", "T4.1-1", "T4.1-2", "T4.1-3", "T5.1", "SERRE")


class PreconditionError(ValueError):
    """Inputs outside the situation a pipeline is able to certify."""


class SerreMismatch(AssertionError):
    """The two routes to an intersection multiplicity disagree."""


@dataclass
class TheoremInstance:
    theorem: str
    inputs: Dict[str, str]
    bound: int
    verdict: StabilizationReport
    trace: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict.ok


def inner_levels(bound: int) -> Tuple[int, int]:
    """(m0, b): an inner tower is read at level m0, with images or kernels
    compared between levels b-1 and b.  The gap b - m0 - 2 equals the bound, so
    transitions that need as many steps as the outer index still die in time."""
    return bound, 2 * bound + 2


def combine(reports: Dict[Any, StabilizationReport]) -> StabilizationReport:
    """Worst verdict wins: failed, then inconclusive, then verified."""
    for status in (FAILED, INCONCLUSIVE):
        for key, r in reports.items():
            if r.status == status:
                return StabilizationReport(status, r.level, r.witness, f"{key}: {r.detail}")
    lvl = max([r.level or 1 for r in reports.values()] or [1])
    return StabilizationReport(VERIFIED, lvl, None, "all parts verified")


def _degree_range(*cs: Complex) -> range:
    return range(min(c.lo for c in cs), max(c.hi for c in cs) + 1)


def _memo(fn):
    cache = {}

    def wrapped(*args):
        if args not in cache:
            cache[args] = fn(*args)
        return cache[args]

    return wrapped


def _describe(x) -> str:
    if isinstance(x, FpModule):
        return x.fmt()
    if isinstance(x, Complex):
        return f"complex ranks {x.ranks()}"
    if isinstance(x, IndModule):
        return f"ind-module {x.name}"
    return str(x)


class ChainTower:
    """A tower of complexes given by level and transition functions, with
    memoized composite chain maps.  Cohomology towers built from it compose
    at the chain level, so long composites never touch intermediate
    cohomology."""

    def __init__(self, kind: str, level, trans):
        self.kind = kind
        self.level = level
        self.trans = trans
        self._comp: Dict[Tuple[int, int], ComplexMap] = {}

    def composite(self, s: int, d: int) -> ComplexMap:
        if s == d:
            return ComplexMap.identity(self.level(s))
        if (s, d) not in self._comp:
            if self.kind == "ind":
                self._comp[(s, d)] = self.trans(d - 1) @ self.composite(s, d - 1)
            else:
                self._comp[(s, d)] = self.trans(d) @ self.composite(s, d + 1)
        return self._comp[(s, d)]

    def cohomology(self, i: int):
        cls = IndModule if self.kind == "ind" else ProModule
        tw = cls(lambda n: cohomology(self.level(n), i),
                 lambda n: induced_map(self.trans(n), i))
        tw.composite_fn = lambda s, d: induced_map(self.composite(s, d), i)
        return tw


# --------------------------------------------- ind tower against ML limits


def ind_against_limits(bound: int, degrees, lhs, lhs_trans, inner, inner_pro, inner_ind,
                       to_inner, trace: List[str]) -> Dict[int, StabilizationReport]:
    """For each degree i compare the ind tower t -> H^i(lhs(t)) with the ind
    tower t -> lim_j H^i(inner(t, j)).

    ``lhs_trans(t)``: lhs(t) -> lhs(t+1); ``inner_pro(t, j)``: inner(t, j+1) ->
    inner(t, j); ``inner_ind(t, j)``: inner(t, j) -> inner(t+1, j);
    ``to_inner(t, j)``: lhs(t) -> inner(t, j).
    """
    m0, b = inner_levels(bound)
    chains = _memo(lambda t: ChainTower("pro", lambda j: inner(t, j), lambda j: inner_pro(t, j)))
    reports = {}
    for i in degrees:
        limits = {}

        def limit(t, i=i, limits=limits):
            if t not in limits:
                limits[t] = ml_limit(chains(t).cohomology(i), m0, b)
            return limits[t]

        missing = next((t for t in range(1, bound + 1) if limit(t) is None), None)
        if missing is not None:
            reports[i] = StabilizationReport(
                INCONCLUSIVE, missing, None, f"inner limit at level {missing} not certified")
            trace.append(f"H^{i}: inconclusive (inner limit at level {missing})")
            continue
        L = IndModule(lambda t, i=i: cohomology(lhs(t), i),
                      lambda t, i=i: induced_map(lhs_trans(t), i))
        Rt = IndModule(lambda t, limit=limit: limit(t).module,
                       lambda t, i=i, limit=limit: limit(t).realization.induced(
                           induced_map(inner_ind(t, m0), i).matrix, limit(t + 1).realization))

        def level_map(t, i=i, L=L, Rt=Rt, limit=limit):
            h = induced_map(to_inner(t, m0), i)
            real = limit(t).realization
            cols = [real.coords(c) for c in h.matrix.columns()]
            return ModuleMap(L.level(t), Rt.level(t),
                             Matrix.from_columns(h.matrix.ring, len(real.gens), cols))

        reports[i] = ind_iso_check(TowerMap(L, Rt, level_map), bound)
        trace.append(f"H^{i}: {reports[i].status} ({reports[i].detail})")
    return reports


# ---------------------------------------- pro tower against direct limits


def colimit_tower(bound: int, i: int, inner, inner_ind, inner_pro, chains=None) -> Tuple[ProModule, int]:
    """Pro tower j -> colim_t H^i(inner(j, t)), all levels read at one index t0."""
    _, b = inner_levels(bound)
    if chains is None:
        chains = _memo(lambda j: ChainTower("ind", lambda t: inner(j, t), lambda t: inner_ind(j, t)))
    tw = _colimit_levels(lambda j: chains(j).cohomology(i), lambda j, t0: induced_map(inner_pro(j, t0), i).matrix, b,
                         levels=bound + 1)
    return tw, tw.t0


def pro_against_colimits(bound: int, degrees, rhs, rhs_trans, inner, inner_ind, inner_pro,
                         from_inner, trace: List[str]) -> Dict[int, StabilizationReport]:
    """For each degree i compare j -> colim_t H^i(inner(j, t)) with j -> H^i(rhs(j))."""
    reports = {}
    chains = _memo(lambda j: ChainTower("ind", lambda t: inner(j, t), lambda t: inner_ind(j, t)))
    for i in degrees:
        try:
            L, t0 = colimit_tower(bound, i, inner, inner_ind, inner_pro, chains)
        except ColimitUnavailable as e:
            reports[i] = StabilizationReport(INCONCLUSIVE, None, None, str(e))
            trace.append(f"H^{i}: inconclusive ({e})")
            continue
        Rt = ProModule(lambda j, i=i: cohomology(rhs(j), i),
                       lambda j, i=i: induced_map(rhs_trans(j), i))

        def level_map(j, i=i, L=L, Rt=Rt, t0=t0):
            h = induced_map(from_inner(j, t0), i)
            return ModuleMap(L.level(j), Rt.level(j), h.matrix)

        reports[i] = pro_iso_check(TowerMap(L, Rt, level_map), bound)
        trace.append(f"H^{i}: {reports[i].status} ({reports[i].detail})")
    return reports


# ----------------------------------------------------------- certificates


def killed_by_power(H: FpModule, ctx: AdicContext, bound: int) -> Optional[int]:
    """Least k <= bound with a_i^k H = 0 for all i, or None."""
    R = ctx.ring
    if H.is_zero():
        return 0
    for k in range(1, bound + 1):
        sub = H.relation_submodule()
        ok = True
        for a in ctx.power_sequence(k):
            for g in range(H.ngens):
                v = tuple(a if r == g else R.zero() for r in range(H.ngens))
                if not sub.contains(v):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return k
    return None


def torsion_certificate(Mc: Complex, ctx: AdicContext, bound: int) -> Optional[int]:
    """Every cohomology module is killed by a power of the ideal.  For bounded
    complexes with finitely generated cohomology this makes the complex both
    cohomologically torsion and cohomologically complete."""
    worst = 0
    for i in Mc.degrees():
        k = killed_by_power(cohomology(Mc, i), ctx, bound)
        if k is None:
            return None
        worst = max(worst, k)
    return worst


# ------------------------------------ torsion of free complexes (lemma31)


def _with_relations(P: Complex, extra: List[Any]) -> Complex:
    """Each term M -> M / (extra) M, same differentials."""
    return Complex(P.ring, {i: P.term(i).ideal_quotient(extra) for i in P.degrees()},
                   dict(P.d), check=False)


def check_lemma31(ctx: AdicContext, P, bound: int = DEFAULT_BOUND) -> TheoremInstance:
    """dual_koszul_stage(t) ⊗ P against the limit over j of
    dual_koszul_stage(t) ⊗ P/(a_1^j..a_n^j)P, for a complex P of free modules."""
    P = as_complex(P)
    for i in P.degrees():
        if not P.term(i).is_free_presentation():
            raise PreconditionError("the complex must consist of free modules")
    R = ctx.ring
    idP = ComplexMap.identity(P)
    Pj = _memo(lambda j: _with_relations(P, ctx.power_sequence(j)))
    lhs = _memo(lambda t: tensor_complexes(dual_koszul_stage(ctx, t), P))
    inner = _memo(lambda t, j: tensor_complexes(dual_koszul_stage(ctx, t), Pj(j)))

    def ident(src, tgt):
        return ComplexMap(src, tgt, {i: Matrix.identity(R, P.term(i).ngens) for i in P.degrees()})

    def idD(t):
        return ComplexMap.identity(dual_koszul_stage(ctx, t))

    lhs_trans = _memo(lambda t: tensor_chain_maps(dual_koszul_transition(ctx, t), idP,
                                                  lhs(t), lhs(t + 1)))
    inner_pro = _memo(lambda t, j: tensor_chain_maps(idD(t), ident(Pj(j + 1), Pj(j)),
                                                     inner(t, j + 1), inner(t, j)))
    inner_ind = _memo(lambda t, j: tensor_chain_maps(
        dual_koszul_transition(ctx, t), ComplexMap.identity(Pj(j)), inner(t, j), inner(t + 1, j)))
    to_inner = _memo(lambda t, j: tensor_chain_maps(idD(t), ident(P, Pj(j)), lhs(t), inner(t, j)))
    trace = []
    degrees = range(P.lo, P.hi + ctx.n + 1)
    reports = ind_against_limits(bound, degrees, lhs, lhs_trans, inner, inner_pro, inner_ind,
                                 to_inner, trace)
    return TheoremInstance("L3.1", {"context": str(ctx), "P": _describe(P)}, bound,
                           combine({f"H^{i}": r for i, r in reports.items()}), trace)


# ---------------------- torsion/completion round trips (thm32, thm33)


class _Stages:
    """Shared stage complexes for one (context, complex) pair."""

    def __init__(self, ctx: AdicContext, Mc: Complex):
        self.ctx, self.Mc = ctx, Mc
        self.unit = _unit_complex(ctx.ring)
        self.AM = tensor_complexes(self.unit, Mc)
        self.idM = ComplexMap.identity(Mc)
        self.idAM = ComplexMap.identity(self.AM)
        self.X = _memo(lambda j: tensor_complexes(koszul_complex(ctx, j), self.AM))
        self.Y = _memo(lambda t: tensor_complexes(dual_koszul_stage(ctx, t), self.AM))
        self.X_trans = _memo(lambda j: tensor_chain_maps(
            koszul_transition(ctx, j), self.idAM, self.X(j + 1), self.X(j)))
        self.Y_trans = _memo(lambda t: tensor_chain_maps(
            dual_koszul_transition(ctx, t), self.idAM, self.Y(t), self.Y(t + 1)))
        self.comp = _memo(lambda j: tensor_chain_maps(
            ComplexMap(self.unit, koszul_complex(ctx, j), {0: Matrix.identity(ctx.ring, 1)}),
            self.idAM, tensor_complexes(self.unit, self.AM),
            self.X(j)))
        self.counit = _memo(lambda t: tensor_chain_maps(
            ComplexMap(dual_koszul_stage(ctx, t), self.unit, {0: Matrix.identity(ctx.ring, 1)}),
            self.idAM, self.Y(t), tensor_complexes(self.unit, self.AM)))

    @property
    def AAM(self):
        return tensor_complexes(self.unit, self.AM)


def _thm32_reports(ctx: AdicContext, Mc: Complex, bound: int, trace) -> Dict[int, StabilizationReport]:
    S = _Stages(ctx, Mc)
    D = lambda t: dual_koszul_stage(ctx, t)
    lhs = _memo(lambda t: tensor_complexes(D(t), S.AAM))
    inner = _memo(lambda t, j: tensor_complexes(D(t), S.X(j)))
    lhs_trans = _memo(lambda t: tensor_chain_maps(
        dual_koszul_transition(ctx, t), ComplexMap.identity(S.AAM), lhs(t), lhs(t + 1)))
    inner_pro = _memo(lambda t, j: tensor_chain_maps(
        ComplexMap.identity(D(t)), S.X_trans(j), inner(t, j + 1), inner(t, j)))
    inner_ind = _memo(lambda t, j: tensor_chain_maps(
        dual_koszul_transition(ctx, t), ComplexMap.identity(S.X(j)), inner(t, j), inner(t + 1, j)))
    to_inner = _memo(lambda t, j: tensor_chain_maps(
        ComplexMap.identity(D(t)), S.comp(j), lhs(t), inner(t, j)))
    degrees = range(Mc.lo - ctx.n, Mc.hi + ctx.n + 1)
    return ind_against_limits(bound, degrees, lhs, lhs_trans, inner, inner_pro, inner_ind,
                              to_inner, trace)


def check_thm32(ctx: AdicContext, M, bound: int = DEFAULT_BOUND) -> TheoremInstance:
    """Derived torsion of M against derived torsion of its derived completion,
    along the map induced by M -> Kos(A; a^j) ⊗ M."""
    Mc = as_complex(M)
    trace = []
    reports = _thm32_reports(ctx, Mc, bound, trace)
    return TheoremInstance("T3.2", {"context": str(ctx), "M": _describe(M)}, bound,
                           combine({f"H^{i}": r for i, r in reports.items()}), trace)


def _thm33_reports(ctx: AdicContext, Mc: Complex, bound: int, trace) -> Dict[int, StabilizationReport]:
    S = _Stages(ctx, Mc)
    K = lambda j: koszul_complex(ctx, j)
    rhs = _memo(lambda j: tensor_complexes(K(j), S.AAM))
    inner = _memo(lambda j, t: tensor_complexes(K(j), S.Y(t)))
    rhs_trans = _memo(lambda j: tensor_chain_maps(
        koszul_transition(ctx, j), ComplexMap.identity(S.AAM), rhs(j + 1), rhs(j)))
    inner_ind = _memo(lambda j, t: tensor_chain_maps(
        ComplexMap.identity(K(j)), S.Y_trans(t), inner(j, t), inner(j, t + 1)))
    inner_pro = _memo(lambda j, t: tensor_chain_maps(
        koszul_transition(ctx, j), ComplexMap.identity(S.Y(t)), inner(j + 1, t), inner(j, t)))
    from_inner = _memo(lambda j, t: tensor_chain_maps(
        ComplexMap.identity(K(j)), S.counit(t), inner(j, t), rhs(j)))
    degrees = range(Mc.lo - ctx.n, Mc.hi + ctx.n + 1)
    return pro_against_colimits(bound, degrees, rhs, rhs_trans, inner, inner_ind, inner_pro,
                                from_inner, trace)


def check_thm33(ctx: AdicContext, M, bound: int = DEFAULT_BOUND) -> TheoremInstance:
    """Derived completion of derived torsion of M against derived completion of
    M, along the map induced by the projection dual_koszul_stage(t) -> A."""
    Mc = as_complex(M)
    trace = []
    reports = _thm33_reports(ctx, Mc, bound, trace)
    return TheoremInstance("T3.3", {"context": str(ctx), "M": _describe(M)}, bound,
                           combine({f"H^{i}": r for i, r in reports.items()}), trace)


# -------------------------------------------------------------------- MGM


def check_mgm(ctx: AdicContext, M, bound: int = DEFAULT_BOUND,
              direction: str = "tor") -> TheoremInstance:
    """Round trips through derived torsion and completion.

    ``direction="tor"``: torsion of the completion against torsion of M, and,
    when M carries a torsion certificate, the counit from torsion of M to M.
    ``direction="com"``: completion of the torsion against completion of M,
    and, when M carries a completeness certificate, the map from M to its
    completion.
    """
    if direction not in ("tor", "com"):
        raise ValueError("direction is 'tor' or 'com'")
    Mc = as_complex(M)
    trace: List[str] = []
    S = _Stages(ctx, Mc)
    parts: Dict[str, StabilizationReport] = {}
    cert = torsion_certificate(Mc, ctx, bound)
    if direction == "tor":
        for i, r in _thm32_reports(ctx, Mc, bound, trace).items():
            parts[f"round trip H^{i}"] = r
    else:
        for i, r in _thm33_reports(ctx, Mc, bound, trace).items():
            parts[f"round trip H^{i}"] = r
    if cert is None:
        trace.append("no torsion/completeness certificate: unit/counit comparison skipped")
    else:
        trace.append(f"cohomology killed by power {cert} of the ideal")
        for i in range(Mc.lo - ctx.n, Mc.hi + ctx.n + 1):
            H = cohomology(S.AM, i)
            if direction == "tor":
                L = IndModule(lambda t, i=i: cohomology(S.Y(t), i),
                              lambda t, i=i: induced_map(S.Y_trans(t), i))
                C = IndModule.constant(H)
                f = TowerMap(L, C, lambda t, i=i, L=L: ModuleMap(
                    L.level(t), H, induced_map(S.counit(t), i).matrix))
                r = ind_iso_check(f, bound)
            else:
                Rt = ProModule(lambda j, i=i: cohomology(S.X(j), i),
                               lambda j, i=i: induced_map(S.X_trans(j), i))
                C = ProModule.constant(H)
                f = TowerMap(C, Rt, lambda j, i=i, Rt=Rt: ModuleMap(
                    H, Rt.level(j), induced_map(S.comp(j), i).matrix))
                r = pro_iso_check(f, bound)
            parts[f"{'counit' if direction == 'tor' else 'unit'} H^{i}"] = r
            trace.append(f"{direction} unit/counit H^{i}: {r.status}")
    inputs = {"context": str(ctx), "M": _describe(M), "direction": direction}
    return TheoremInstance("MGM", inputs, bound, combine(parts), trace,
                           {"certificate": cert})


# ------------------------------------ reduction to the diagonal (thm41)


@dataclass
class DiagonalData:
    """Both routes to Tor_*^A(M, N) and the comparison maps between them."""

    direct: List[Any]
    diagonal: List[Any]
    maps: Dict[str, Any]
    natural_checked: bool


def _zigzag(dctx: DiagonalContext, M: FpModule, N: FpModule):
    """Kos(Δ) ⊗ (M ⊠ N) <-α- Kos(Δ) ⊗ (P ⊠ N) -β-> B/Δ ⊗ (P ⊠ N) = P ⊗_A N."""
    B = dctx.B
    P = free_resolution(M).complex
    PB = extend_scalars(P, dctx.first)
    MB = dctx.extend(M, dctx.first)
    NB = dctx.extend(N, dctx.second)
    cM, cN = Complex.concentrated(MB), Complex.concentrated(NB)
    PN = tensor_complexes(PB, cN)
    MN = tensor_complexes(cM, cN)
    eps = ComplexMap(PB, cM, {0: Matrix.identity(B, M.ngens)})
    eN = tensor_chain_maps(eps, ComplexMap.identity(cN), PN, MN)
    kos = koszul_complex(dctx.diag_ctx, 1)
    Bd = Complex.concentrated(FpModule.cyclic(B, dctx.diagonal))
    aug = ComplexMap(kos, Bd, {0: Matrix.identity(B, 1)})
    return dict(P=P, PN=PN, MN=MN, eN=eN, kos=kos, Bd=Bd, aug=aug)


def diagonal_tor(dctx: DiagonalContext, M: FpModule, N: FpModule,
                 natural: bool = True, size_limit: int = 40) -> DiagonalData:
    """dim Tor_i^A(M, N) by a free resolution over A and dim H_i(Kos(B; Δ) ⊗ (M ⊠ N));
    with ``natural`` (and total rank at most ``size_limit``) also certify the
    zigzag of quasi-isomorphisms joining the two computations."""
    n = dctx.n
    direct = [finite_length(tor(M, N, i)) for i in range(n + 1)]
    z = _zigzag(dctx, M, N)
    lhs = tensor_complexes(z["kos"], z["MN"])
    diagonal = [finite_length(cohomology(lhs, -i)) for i in range(n + 1)]
    maps: Dict[str, Any] = {}
    X = tensor_complexes(z["kos"], z["PN"])
    checked = natural and sum(X.ranks().values()) <= size_limit
    if checked:
        alpha = tensor_chain_maps(ComplexMap.identity(z["kos"]), z["eN"], X, lhs)
        Y = tensor_complexes(z["Bd"], z["PN"])
        beta = tensor_chain_maps(z["aug"], ComplexMap.identity(z["PN"]), X, Y)
        maps = {"alpha": alpha, "beta": beta,
                "alpha_qis": quasi_iso_check(alpha), "beta_qis": quasi_iso_check(beta)}
    return DiagonalData(direct, diagonal, maps, checked)


def _finite_tensor(M: FpModule, N: FpModule):
    L = finite_length(tensor_modules(M, N))
    if L == float("inf"):
        raise PreconditionError("M ⊗ N does not have finite length")
    return L


def check_thm41_fg(dctx: DiagonalContext, M: FpModule, N: FpModule,
                   bound: int = DEFAULT_BOUND) -> TheoremInstance:
    """Tor over A against Koszul homology of the diagonal on M ⊠ N (finite length)."""
    _finite_tensor(M, N)
    data = diagonal_tor(dctx, M, N)
    trace = [f"direct Tor dims {data.direct}", f"diagonal dims {data.diagonal}"]
    if data.direct != data.diagonal:
        v = StabilizationReport(FAILED, None, None,
                                f"dimensions differ: {data.direct} vs {data.diagonal}")
    elif data.natural_checked and not (data.maps["alpha_qis"].ok and data.maps["beta_qis"].ok):
        bad = "alpha" if not data.maps["alpha_qis"].ok else "beta"
        v = StabilizationReport(FAILED, None, None, f"comparison map {bad} is not a quasi-isomorphism")
    else:
        note = "natural maps certified" if data.natural_checked else "natural maps skipped (size)"
        trace.append(note)
        v = StabilizationReport(VERIFIED, 1, None, f"dimensions agree; {note}")
    return TheoremInstance("T4.1-3", {"A": str(dctx.A), "M": M.fmt(), "N": N.fmt()}, bound, v,
                           trace, {"direct": data.direct, "diagonal": data.diagonal})


def serre_chi(dctx: DiagonalContext, M: FpModule, N: FpModule) -> int:
    """Σ (-1)^i dim Tor_i(M, N), by a free resolution and by the diagonal;
    raises :class:`SerreMismatch` if the routes disagree."""
    _finite_tensor(M, N)
    data = diagonal_tor(dctx, M, N, natural=False)
    chi_direct = sum((-1) ** i * d for i, d in enumerate(data.direct))
    chi_diag = sum((-1) ** i * d for i, d in enumerate(data.diagonal))
    if chi_direct != chi_diag:
        raise SerreMismatch(f"direct route {data.direct} -> {chi_direct}; "
                            f"diagonal route {data.diagonal} -> {chi_diag}")
    return chi_direct


def check_thm41_completed(dctx: DiagonalContext, M: FpModule, N: FpModule,
                          bound: int = DEFAULT_BOUND) -> TheoremInstance:
    """Completion towers (over the augmentation ideal) of both sides of the
    diagonal comparison, joined by the induced maps of the zigzag."""
    _finite_tensor(M, N)
    data = diagonal_tor(dctx, M, N, size_limit=10 ** 6)
    I = dctx.I_ctx
    parts: Dict[str, StabilizationReport] = {}
    trace = []
    for name in ("alpha", "beta"):
        f = data.maps[name]
        for i in range(dctx.n + 1):
            h = induced_map(f, -i)
            S = completion_tower(h.source, I, powers="sequence")
            T = completion_tower(h.target, I, powers="sequence")
            tm = TowerMap(S, T, lambda k, h=h, S=S, T=T: ModuleMap(S.level(k), T.level(k), h.matrix))
            r = pro_iso_check(tm, bound)
            parts[f"{name} H_{i}"] = r
            trace.append(f"{name} completed H_{i}: {r.status}")
    for i in range(dctx.n + 1):
        r = stable_value(completion_tower(tor(M, N, i), dctx.a_ctx, powers="sequence"), bound)
        trace.append(f"Tor_{i} completion tower: {r.status} at level {r.level}")
    return TheoremInstance("T4.1-2", {"A": str(dctx.A), "M": M.fmt(), "N": N.fmt()}, bound,
                           combine(parts), trace)


def check_thm41_torsion(dctx: DiagonalContext, M: FpModule, N: FpModule,
                        bound: int = DEFAULT_BOUND, size_limit: int = 128) -> TheoremInstance:
    """A ⊗_B (derived torsion of M ⊠ N at the augmentation ideal) against derived
    torsion of M ⊗^L N at (x_1..x_n).

    Levelwise zigzag: Kos(Δ) ⊗ D_t(B) ⊗ (M ⊠ N) <-α- Kos(Δ) ⊗ D_t(B) ⊗ (P ⊠ N)
    -β-> D_t(B) ⊗ (P ⊗_A N) -γ-> D_t(x) ⊗ (P ⊗_A N), where γ projects the
    second-copy factors to degree 0.  α and β are levelwise quasi-isomorphisms
    (checked on the window); γ is compared as a map of ind towers, and its
    target is checked against the same stages computed over A.  Instances whose
    first stage has total rank above ``size_limit`` are rejected.
    """
    B = dctx.B
    n = dctx.n
    z = _zigzag(dctx, M, N)
    I = dctx.I_ctx
    kos, Bd, PN, MN = z["kos"], z["Bd"], z["PN"], z["MN"]
    DB = lambda t: dual_koszul_stage(I, t)
    xs = B.gens()[:n]

    @_memo
    def DX(t):
        return tensor_factors([_two_term(B, B.power(x, t), 0) for x in xs]
                              + [_unit_complex(B) for _ in range(n)])

    @_memo
    def DX_trans(t):
        maps = [_two_term_map(_two_term(B, B.power(x, t), 0), _two_term(B, B.power(x, t + 1), 0),
                              0, 1, x) for x in xs]
        maps += [ComplexMap.identity(_unit_complex(B)) for _ in range(n)]
        return tensor_factor_maps(maps, DX(t), DX(t + 1))

    @_memo
    def proj(t):
        maps = [ComplexMap.identity(_two_term(B, B.power(x, t), 0)) for x in xs]
        maps += [ComplexMap(_two_term(B, B.power(y, t), 0), _unit_complex(B),
                            {0: Matrix.identity(B, 1)}) for y in B.gens()[n:]]
        return tensor_factor_maps(maps, DB(t), DX(t))

    X = _memo(lambda t: tensor_complexes(kos, tensor_complexes(DB(t), PN)))
    size = sum(X(1).ranks().values())
    if size > size_limit:
        raise PreconditionError(f"first stage has total rank {size} > {size_limit}")
    LHS = _memo(lambda t: tensor_complexes(kos, tensor_complexes(DB(t), MN)))
    Y = _memo(lambda t: tensor_complexes(Bd, tensor_complexes(DB(t), PN)))
    Z = _memo(lambda t: tensor_complexes(Bd, tensor_complexes(DX(t), PN)))
    idPN = ComplexMap.identity(PN)
    idBd = ComplexMap.identity(Bd)
    inner_DB = _memo(lambda t: tensor_complexes(DB(t), PN))
    inner_DX = _memo(lambda t: tensor_complexes(DX(t), PN))

    parts: Dict[str, StabilizationReport] = {}
    trace: List[str] = []
    for t in range(1, max(1, bound // 2) + 1):
        a = tensor_chain_maps(ComplexMap.identity(kos), tensor_chain_maps(
            ComplexMap.identity(DB(t)), z["eN"], tensor_complexes(DB(t), PN),
            tensor_complexes(DB(t), MN)), X(t), LHS(t))
        b = tensor_chain_maps(z["aug"], ComplexMap.identity(inner_DB(t)), X(t), Y(t))
        for name, f in (("alpha", a), ("beta", b)):
            q = quasi_iso_check(f)
            if not q.ok:
                parts[f"{name} level {t}"] = StabilizationReport(
                    FAILED, t, None, f"{name} is not a quasi-isomorphism at level {t}")
    gamma = _memo(lambda t: tensor_chain_maps(idBd, tensor_chain_maps(
        proj(t), idPN, inner_DB(t), inner_DX(t)), Y(t), Z(t)))
    Ytr = _memo(lambda t: tensor_chain_maps(idBd, tensor_chain_maps(
        dual_koszul_transition(I, t), idPN, inner_DB(t), inner_DB(t + 1)), Y(t), Y(t + 1)))
    Ztr = _memo(lambda t: tensor_chain_maps(idBd, tensor_chain_maps(
        DX_trans(t), idPN, inner_DX(t), inner_DX(t + 1)), Z(t), Z(t + 1)))
    ref = Z(1)
    for i in range(ref.lo, Y(1).hi + 1):
        Lt = IndModule(lambda t, i=i: cohomology(Y(t), i), lambda t, i=i: induced_map(Ytr(t), i))
        Rt = IndModule(lambda t, i=i: cohomology(Z(t), i), lambda t, i=i: induced_map(Ztr(t), i))
        r = ind_iso_check(TowerMap(Lt, Rt, lambda t, i=i: induced_map(gamma(t), i)), bound)
        parts[f"H^{i}"] = r
        trace.append(f"H^{i}: {r.status} ({r.detail})")
    # the A-side stages, computed over A directly
    actx = dctx.a_ctx
    PA = tensor_complexes(z["P"], Complex.concentrated(N))
    for t in range(1, bound + 1):
        W = tensor_complexes(dual_koszul_stage(actx, t), PA)
        dims_w = [finite_length(cohomology(W, i)) for i in W.degrees()]
        dims_z = [finite_length(cohomology(Z(t), i)) for i in W.degrees()]
        if dims_w != dims_z:
            parts[f"A-side level {t}"] = StabilizationReport(
                FAILED, t, None, f"stage dimensions over A {dims_w} vs over B {dims_z}")
            break
    trace.append("stages over B/Δ match the stages over A")
    return TheoremInstance("T4.1-1", {"A": str(dctx.A), "M": M.fmt(), "N": N.fmt()}, bound,
                           combine(parts), trace)


# ------------------------------------------- cofinite modules (thm51)


def _as_ind(M) -> IndModule:
    if isinstance(M, IndModule):
        return M
    if isinstance(M, FpModule):
        return IndModule.constant(M)
    raise TypeError("expected an FpModule or IndModule")


@dataclass
class FgFlag:
    value: Optional[bool]  # None = undetermined
    reason: str

    def label(self) -> str:
        return {True: "fg", False: "not-fg", None: "unknown"}[self.value]


def _ind_flag(tw: IndModule, b: int) -> FgFlag:
    lv = ind_colimit(tw, b)
    if lv is not None:
        return FgFlag(True, f"colimit stabilizes at level {lv.level}")
    counts = generator_counts(tw, min(b, 8))
    if strictly_growing(counts):
        return FgFlag(False, f"generator counts grow: {counts}")
    return FgFlag(None, "no stabilization and no growth witness")


def _pro_flag(tw: ProModule, ctx: AdicContext, bound: int) -> FgFlag:
    sv = stable_value(tw, bound)
    if sv.ok:
        return FgFlag(True, f"stable from level {sv.level}")
    top = tw.level(bound)
    C = completion_tower(top, ctx, powers="sequence")
    f = TowerMap(C, tw, lambda j: ModuleMap(C.level(j), tw.level(j), tw.composite(bound, j).matrix))
    r = pro_iso_check(f, bound)
    if r.ok:
        return FgFlag(True, "pro-isomorphic to the completion tower of the top level")
    counts = generator_counts(tw, bound)
    if strictly_growing(counts):
        return FgFlag(False, f"generator counts grow: {counts}")
    return FgFlag(None, "neither stable nor a completion tower")


def check_thm51(ctx: AdicContext, M, bound: int = DEFAULT_BOUND) -> TheoremInstance:
    """Finite generation of Ext^i(A/a, M) against finite generation of the
    cohomology towers of the derived completion of M, degree by degree
    (Ext^i against H^{i-n}) and as a whole."""
    Mi = _as_ind(M)
    R = ctx.ring
    n = ctx.n
    _, b = inner_levels(bound)
    F = free_resolution(FpModule.cyclic(R, list(ctx.gens)), n + 2).complex
    hom = _memo(lambda t: hom_free_complex(F, Mi.level(t)))

    def hom_trans(t):
        f = Mi.transition(t).matrix
        maps = {}
        for d in hom(t).degrees():
            r = hom(t).term(d).ngens // max(1, Mi.level(t).ngens)
            maps[d] = kron(Matrix.identity(R, r), f)
        return ComplexMap(hom(t), hom(t + 1), maps)

    hom_trans = _memo(hom_trans)
    ext_flags = []
    trace = []
    for i in range(n + 1):
        tw = IndModule(lambda t, i=i: cohomology(hom(t), i),
                       lambda t, i=i: induced_map(hom_trans(t), i))
        fl = _ind_flag(tw, b)
        ext_flags.append(fl)
        trace.append(f"Ext^{i}: {fl.label()} ({fl.reason})")

    idx = {}
    K = lambda j: koszul_complex(ctx, j)
    inner = _memo(lambda j, t: tensor_complexes(K(j), Complex.concentrated(Mi.level(t))))

    def inner_ind(j, t):
        cm_s, cm_t = Complex.concentrated(Mi.level(t)), Complex.concentrated(Mi.level(t + 1))
        g = ComplexMap(cm_s, cm_t, {0: Mi.transition(t).matrix})
        return tensor_chain_maps(ComplexMap.identity(K(j)), g, inner(j, t), inner(j, t + 1))

    def inner_pro(j, t):
        cm = Complex.concentrated(Mi.level(t))
        return tensor_chain_maps(koszul_transition(ctx, j), ComplexMap.identity(cm),
                                 inner(j + 1, t), inner(j, t))

    inner_ind, inner_pro = _memo(inner_ind), _memo(inner_pro)
    com_flags = []
    for i in range(-n, 1):
        try:
            tw, _ = colimit_tower(bound, i, inner, inner_ind, inner_pro)
            fl = _pro_flag(tw, ctx, bound)
        except ColimitUnavailable as e:
            fl = FgFlag(False, f"a level is not finitely generated ({e})") if e.growing \
                else FgFlag(None, str(e))
        com_flags.append(fl)
        trace.append(f"H^{i} completion tower: {fl.label()} ({fl.reason})")

    ev = [f.value for f in ext_flags]
    cv = [f.value for f in com_flags]
    details = {"ext_flags": [f.label() for f in ext_flags],
               "completion_flags": [f.label() for f in com_flags]}
    if None in ev or None in cv:
        v = StabilizationReport(INCONCLUSIVE, None, None, "a flag could not be determined")
    elif ev == cv and all(ev) == all(cv):
        v = StabilizationReport(VERIFIED, bound, None, f"flags agree: {details['ext_flags']}")
    else:
        v = StabilizationReport(FAILED, None, None,
                                f"flags differ: {details['ext_flags']} vs {details['completion_flags']}")
    return TheoremInstance("T5.1", {"context": str(ctx), "M": _describe(M)}, bound, v, trace,
                           details)
