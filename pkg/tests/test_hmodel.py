"""The PBW product against matrix products on a faithful-enough module."""

import random

import pytest

from quasiqg import hmodel as hm
from quasiqg import repcore as rc
from quasiqg.linalg import Matrix


def _matpow(A, k, ctx):
    out = Matrix.identity(ctx, A.nrows)
    for _ in range(k):
        out = out @ A
    return out


def act(x, M):
    """Representation matrix of a PBW element E^a F^b K^c on M."""
    ctx = M.ctx
    total = Matrix(ctx, M.dim, M.dim)
    E, F, K = M.matE, M.matF, M.matK
    for (a, b, c), coeff in x.terms.items():
        total = total + (_matpow(E, a, ctx) @ _matpow(F, b, ctx) @ _matpow(K, c, ctx)).scale(coeff)
    return total


@pytest.fixture(scope="module")
def big3(ctx3):
    mods = [rc.projective_P(ctx3, l) for l in (1, 2)] + [rc.simple_V(ctx3, 3)]
    mods += [rc.block_simple_V(ctx3, t, r) for t in (1, 2) for r in range(3)]
    return rc.direct_sum(mods, ctx3)


def test_generators_act_as_module_matrices(ctx3, big3):
    assert act(hm.generator_E(ctx3), big3) == big3.matE
    assert act(hm.generator_F(ctx3), big3) == big3.matF
    assert act(hm.generator_K(ctx3), big3) == big3.matK


def test_product_is_a_representation(ctx3, big3):
    rng = random.Random(7)
    for _ in range(8):
        x, y = hm.random_element(ctx3, rng), hm.random_element(ctx3, rng)
        assert act(hm.multiply(x, y), big3) == act(x, big3) @ act(y, big3)


def test_idempotents_project_onto_blocks(ctx3, big3):
    for i in range(3):
        P = act(hm.block_idempotent(ctx3, i), big3)
        assert P @ P == P
        expected = sum(1 for k in big3.weights if (-k) % 3 == i)
        assert P.rank() == expected


def test_weight_idempotent_projects(ctx3, big3):
    for s in range(9):
        P = act(hm.weight_idempotent(ctx3, s), big3)
        assert P.rank() == sum(1 for k in big3.weights if (k + s) % 9 == 0)


def test_pbw_rank_n4(ctx3):
    monos = [hm.AlgebraElem(ctx3, {(a, b, c): ctx3.one}) for a in range(3) for b in range(3) for c in range(9)]
    assert hm.pbw_rank(ctx3, monos) == 81


def test_en_vanishes(ctx3):
    assert (hm.generator_E(ctx3) ** 3).is_zero()
    assert (hm.generator_F(ctx3) ** 3).is_zero()
    assert hm.k_power(ctx3, 9) == hm.AlgebraElem.scalar(ctx3, 1)


@pytest.mark.parametrize("r", [1, 2])
def test_commutation_residue(ctx3, r):
    assert hm.commutation_residue(ctx3, r).is_zero()


def test_casimir_central(ctx3):
    C = hm.casimir(ctx3)
    for g in (hm.generator_E(ctx3), hm.generator_F(ctx3), hm.generator_K(ctx3)):
        assert hm.multiply(C, g) == hm.multiply(g, C)


def test_associator_values(ctx3):
    # phi(s,t,r) = 1 unless s + t wraps past m
    assert hm.associator_exponent(ctx3, 0, 5, 7) == 0
    assert hm.associator_exponent(ctx3, 5, 5, 1) == 3
    assert hm.cocycle_check(ctx3) == []


def test_cocycle_sampled_n5(ctx5):
    assert hm.cocycle_check(ctx5, samples=300, seed=1) == []


def test_records_roundtrip(ctx3, rng):
    x = hm.random_element(ctx3, rng)
    assert hm.AlgebraElem.from_records(ctx3, x.to_records()) == x


def test_a_element_annihilated(ctx3):
    for i in (1, 2):
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                x = hm.multiply(hm.a_element(ctx3, i, j, k), hm.sub_idempotent(ctx3, i, j))
                assert hm.multiply(hm.generator_F(ctx3), x).is_zero()


def test_index_errors(ctx3):
    with pytest.raises(hm.AlgebraError):
        hm.block_idempotent(ctx3, 3)
    with pytest.raises(hm.AlgebraError):
        hm.sub_idempotent(ctx3, 0, 1)
