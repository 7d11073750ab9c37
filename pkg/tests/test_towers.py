"""Pro/ind towers and their bounded checks."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adicwb.modcplx import FpModule, ModuleMap, hom_cyclic, zz_invariants
from adicwb.rings import ZZ, Matrix
from adicwb.towers import (
    FAILED, INCONCLUSIVE, STABILIZED, VERIFIED, IndModule, ProModule, TowerMap,
    ind_colimit, ind_iso_check, ind_zero_check, kernel_tower, ml_limit, pro_iso_check,
    pro_zero_check, reindex, reindex_comparison, stable_value, strictly_growing, window,
)

p = 3


def zp_tower(scale=1):
    """{Z/p^(scale*n)} with reduction maps."""
    return ProModule.from_function(lambda n: FpModule.cyclic(ZZ, [p ** (scale * n)]),
                                   lambda n: Matrix.identity(ZZ, 1))


def prufer(shift=0):
    return IndModule.from_function(lambda n: FpModule.cyclic(ZZ, [p ** (n + shift)]),
                                   lambda n: Matrix.scalar(ZZ, 1, p))


def test_window():
    assert window(8) == 4 and window(2) == 1


def test_pro_zero_checks():
    const = ProModule.constant(FpModule.cyclic(ZZ, [p]))
    assert pro_zero_check(const, 8).status == INCONCLUSIVE
    zeros = ProModule.from_function(lambda n: FpModule.cyclic(ZZ, [p]),
                                    lambda n: Matrix.zero(ZZ, 1, 1))
    assert pro_zero_check(zeros, 8).status == VERIFIED


def test_iso_checks():
    tw = zp_tower()
    assert pro_iso_check(TowerMap.identity(tw), 8).status == VERIFIED
    assert pro_iso_check(TowerMap.identity(tw), 8).level == 1
    # {Z/p^2n} -> {Z/p^n}
    f = TowerMap(zp_tower(2), tw, lambda n: ModuleMap(zp_tower(2).level(n), tw.level(n),
                                                       Matrix.identity(ZZ, 1)))
    assert pro_iso_check(f, 8).status == VERIFIED
    const = ProModule.constant(FpModule.cyclic(ZZ, [p]))
    zero = TowerMap(const, const, lambda n: ModuleMap.zero(const.level(n), const.level(n)))
    r = pro_iso_check(zero, 8)
    assert r.status == FAILED and r.witness is not None


def test_ind_iso_checks():
    P = prufer()
    assert ind_iso_check(TowerMap.identity(P), 8).ok
    # inclusion Z/p^n -> Z/p^(n+1) by multiplication by p: an interleaving
    shifted = prufer(1)
    f = TowerMap(P, shifted, lambda n: ModuleMap(P.level(n), shifted.level(n),
                                                 Matrix.scalar(ZZ, 1, p)))
    assert ind_iso_check(f, 8).status == VERIFIED
    const = IndModule.constant(FpModule.cyclic(ZZ, [p]))
    zero = IndModule.constant(FpModule.zero(ZZ))
    g = TowerMap(const, zero, lambda n: ModuleMap.zero(const.level(n), zero.level(n)))
    assert ind_iso_check(g, 8).status == FAILED


def test_stable_values():
    M = FpModule.cyclic(ZZ, [5])
    r = stable_value(ProModule.constant(M), 8)
    assert r.status == STABILIZED and r.level == 1
    assert stable_value(zp_tower(), 8).status == INCONCLUSIVE
    # Hom(Z/p^n, Z/p^2) = Z/p, Z/p^2, Z/p^2, ...
    target = FpModule.cyclic(ZZ, [p ** 2])
    sq = {}

    def level(n):
        sq.setdefault(n, hom_cyclic([p ** n], target))
        return sq[n]

    gamma = IndModule(lambda n: level(n).module,
                      lambda n: level(n).induced(Matrix.identity(ZZ, 1), level(n + 1)))
    r = stable_value(gamma, 8)
    assert r.status == STABILIZED and r.level == 2
    assert zz_invariants(r.witness) == (0, (p ** 2,))


def test_ml_limit_and_colimit():
    lim = ml_limit(ProModule.constant(FpModule.cyclic(ZZ, [7])), 2, 5)
    assert lim is not None and zz_invariants(lim.module) == (0, (7,))
    assert ind_colimit(prufer(), 8) is None  # the Pruefer group is not finitely generated
    killed = IndModule.from_function(lambda n: FpModule.cyclic(ZZ, [p]),
                                     lambda n: Matrix.zero(ZZ, 1, 1))
    c = ind_colimit(killed, 8)
    assert c is not None and c.module.is_zero()


def test_kernel_tower_and_reindex():
    tw = zp_tower()
    f = TowerMap(zp_tower(2), tw, lambda n: ModuleMap(zp_tower(2).level(n), tw.level(n),
                                                       Matrix.identity(ZZ, 1)))
    k = kernel_tower(f)
    assert zz_invariants(k.level(2)) == (0, (p ** 2,))
    r = reindex(tw, lambda n: 2 * n)
    assert zz_invariants(r.level(3)) == (0, (p ** 6,))
    assert pro_iso_check(reindex_comparison(tw, lambda n: 2 * n), 8).ok


def test_strictly_growing():
    assert strictly_growing([1, 2, 3, 4])
    assert not strictly_growing([1, 2, 2, 2])


@given(st.integers(1, 6), st.integers(4, 8))
def test_bound_monotonicity(scale, bound):
    """A verified comparison stays verified when the bound grows."""
    tw = zp_tower()
    f = TowerMap(zp_tower(scale), tw, lambda n: ModuleMap(
        FpModule.cyclic(ZZ, [p ** (scale * n)]), tw.level(n), Matrix.identity(ZZ, 1)))
    small = pro_iso_check(f, bound)
    if small.ok:
        assert pro_iso_check(f, bound + 2).ok


@given(st.integers(2, 12))
def test_constant_towers_stabilize_at_one(n):
    M = FpModule.cyclic(ZZ, [n])
    assert stable_value(IndModule.constant(M), 6).level == 1
    assert pro_iso_check(TowerMap.identity(ProModule.constant(M)), 6).ok


def test_checks_reject_bad_bounds():
    with pytest.raises(ValueError):
        pro_zero_check(zp_tower(), 1)
