"""Theorem pipelines on small instances, with negative controls."""

import pytest

from adicwb import theorems as T
from adicwb.adic import (
    AdicContext, DiagonalContext, derived_completion, derived_torsion, koszul_complex,
    prufer_ind, rationals_ind, sum_copies_ind,
)
from adicwb.modcplx import Complex, FpModule, free_resolution
from adicwb.rings import QQ, ZZ, Matrix, PolyRing
from adicwb.towers import FAILED, INCONCLUSIVE, VERIFIED, StabilizationReport

R1 = PolyRing(QQ, ("x",))
R2 = PolyRing(QQ, ("x", "y"))
Z3 = AdicContext(ZZ, (3,))
Ax = AdicContext(R1, R1.gens())


def test_inner_levels_and_combine():
    assert T.inner_levels(4) == (4, 10)
    ok = StabilizationReport(VERIFIED, 2, None, "")
    inc = StabilizationReport(INCONCLUSIVE, None, None, "x")
    bad = StabilizationReport(FAILED, 3, None, "y")
    assert T.combine({"a": ok, "b": inc}).status == INCONCLUSIVE
    assert T.combine({"a": inc, "b": bad}).status == FAILED
    assert T.combine({"a": ok}).status == VERIFIED


def test_killed_by_power():
    assert T.killed_by_power(FpModule.cyclic(ZZ, [9]), Z3, 8) == 2
    assert T.killed_by_power(FpModule.free(ZZ, 1), Z3, 8) is None
    assert T.torsion_certificate(Complex.concentrated(FpModule.cyclic(ZZ, [27])), Z3, 8) == 3


# ------------------------------------ torsion of free complexes (lemma31)


@pytest.mark.parametrize("P", [
    Complex.concentrated(FpModule.free(ZZ, 1)),
    free_resolution(FpModule.cyclic(ZZ, [9]), 2).complex,
    koszul_complex(Z3, 2),
])
def test_lemma31(P):
    assert T.check_lemma31(Z3, P, 4).verdict.status == VERIFIED


def test_lemma31_requires_free_terms():
    with pytest.raises(T.PreconditionError):
        T.check_lemma31(Z3, FpModule.cyclic(ZZ, [9]), 4)


def _lemma31_scaled(c, bound=4):
    """check_lemma31 data for P = Z at (3), with the comparison map multiplied by c."""
    from adicwb.adic import dual_koszul_stage, dual_koszul_transition
    from adicwb.modcplx import ComplexMap, tensor_chain_maps, tensor_complexes

    P = Complex.concentrated(FpModule.free(ZZ, 1))
    Pj = lambda j: Complex.concentrated(FpModule.cyclic(ZZ, [3 ** j]))
    D = lambda t: dual_koszul_stage(Z3, t)
    idD = lambda t: ComplexMap.identity(D(t))
    lhs = T._memo(lambda t: tensor_complexes(D(t), P))
    inner = T._memo(lambda t, j: tensor_complexes(D(t), Pj(j)))
    scal = lambda src, tgt, k: ComplexMap(src, tgt, {0: Matrix.scalar(ZZ, 1, k)})
    lhs_trans = lambda t: tensor_chain_maps(dual_koszul_transition(Z3, t),
                                            ComplexMap.identity(P), lhs(t), lhs(t + 1))
    inner_pro = lambda t, j: tensor_chain_maps(idD(t), scal(Pj(j + 1), Pj(j), 1),
                                               inner(t, j + 1), inner(t, j))
    inner_ind = lambda t, j: tensor_chain_maps(dual_koszul_transition(Z3, t),
                                               ComplexMap.identity(Pj(j)), inner(t, j), inner(t + 1, j))
    to_inner = lambda t, j: tensor_chain_maps(idD(t), scal(P, Pj(j), c), lhs(t), inner(t, j))
    reports = T.ind_against_limits(bound, range(0, 2), lhs, lhs_trans, inner, inner_pro,
                                   inner_ind, to_inner, [])
    return T.combine(reports)


def test_lemma31_negative_control():
    assert _lemma31_scaled(1).status == VERIFIED
    assert _lemma31_scaled(3).status == FAILED


# ---------------------- torsion/completion round trips (thm32, thm33)


@pytest.mark.parametrize("ctx, M", [
    (Z3, FpModule.free(ZZ, 1)),
    (Z3, FpModule.cyclic(ZZ, [9])),
    (Ax, FpModule.free(R1, 1)),
    (Ax, FpModule.cyclic(R1, [R1.gens()[0] ** 2])),
])
def test_thm32_thm33(ctx, M):
    assert T.check_thm32(ctx, M, 4).verdict.status == VERIFIED
    assert T.check_thm33(ctx, M, 4).verdict.status == VERIFIED


def test_thm32_on_torsion_complex():
    tc = derived_torsion(FpModule.free(ZZ, 1), Z3).level(2)
    assert T.check_thm32(Z3, tc, 4).ok


@pytest.mark.parametrize("direction", ["tor", "com"])
def test_mgm(direction):
    r = T.check_mgm(Z3, FpModule.cyclic(ZZ, [9]), 4, direction)
    assert r.ok and r.details["certificate"] == 2
    r = T.check_mgm(Z3, FpModule.free(ZZ, 1), 4, direction)
    assert r.ok and r.details["certificate"] is None
    assert any("skipped" in line for line in r.trace)


def test_mgm_bad_direction():
    with pytest.raises(ValueError):
        T.check_mgm(Z3, FpModule.free(ZZ, 1), 4, "sideways")


@pytest.mark.parametrize("ctx, M", [(Z3, FpModule.cyclic(ZZ, [9])), (Ax, FpModule.free(R1, 1))])
def test_verdicts_stable_in_bound(ctx, M):
    a = [T.check_thm32(ctx, M, b).verdict.status for b in (4, 6)]
    assert a[0] == a[1] == VERIFIED


# ------------------------------------ reduction to the diagonal (thm41)


D1 = DiagonalContext(R1)
D2 = DiagonalContext(R2)


def cyc(R, *gens):
    return FpModule.cyclic(R, list(gens))


def test_serre_values():
    x, y = R2.gens()
    assert T.serre_chi(D2, cyc(R2, y - x ** 2), cyc(R2, y)) == 2
    assert T.serre_chi(D2, cyc(R2, x), cyc(R2, y)) == 1
    assert T.serre_chi(D2, cyc(R2, x), cyc(R2, x + y)) == 1


def test_serre_infinite_length_rejected():
    x, y = R2.gens()
    with pytest.raises(T.PreconditionError):
        T.serre_chi(D2, cyc(R2, x), cyc(R2, x))


def test_self_intersection_vector():
    x, y = R2.gens()
    data = T.diagonal_tor(D2, cyc(R2, x, y), cyc(R2, x, y), natural=False)
    assert data.direct == data.diagonal == [1, 2, 1]


def test_thm41_fg_and_completed():
    x = R1.gens()[0]
    M, N = cyc(R1, x), cyc(R1, x ** 2)
    r = T.check_thm41_fg(D1, M, N, 4)
    assert r.ok and r.details["direct"] == [1, 1]
    assert T.check_thm41_completed(D1, M, N, 4).ok


def test_thm41_torsion():
    x = R1.gens()[0]
    assert T.check_thm41_torsion(D1, cyc(R1, x), cyc(R1, x), 4).ok


def test_thm41_torsion_size_guard():
    x, y = R2.gens()
    k = cyc(R2, x, y)
    with pytest.raises(T.PreconditionError):
        T.check_thm41_torsion(D2, k, k, 4, size_limit=8)


# ------------------------------------------- cofinite modules (thm51)


@pytest.mark.parametrize("M, flags", [
    (rationals_ind(ZZ), ["fg", "fg"]),
    (prufer_ind(ZZ, 3), ["fg", "fg"]),
    (sum_copies_ind(ZZ, 3), ["not-fg", "not-fg"]),
])
def test_thm51(M, flags):
    r = T.check_thm51(Z3, M, 8)
    assert r.verdict.status == VERIFIED
    assert r.details["ext_flags"] == r.details["completion_flags"] == flags


def test_thm51_finitely_generated_module():
    r = T.check_thm51(Z3, FpModule.cyclic(ZZ, [6]), 4)
    assert r.ok and r.details["ext_flags"] == ["fg", "fg"]
