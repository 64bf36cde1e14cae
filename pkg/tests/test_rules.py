"""Decomposition rules: dimension bookkeeping plus engine certification."""

import random

import pytest

from quasiqg import homalg as ha
from quasiqg import repcore as rc
from quasiqg import rules


def _dim(claim, n):
    return sum(rc.label_dim(lab, n) * k for lab, k in claim.items())


@pytest.mark.parametrize("n", [3, 5, 7])
def test_rule_dimensions(n):
    for t in range(1, n):
        for r in range(n):
            assert _dim(rules.v2_block(n, t, r), n) == 2 * n
            for l in range(1, n + 1):
                assert _dim(rules.simple_block(n, l, t, r), n) == l * n
            for l in range(1, n):
                assert _dim(rules.proj_block(n, l, t, r), n) == 2 * n * n
            for s in range(1, 5):
                for l in range(1, n):
                    assert _dim(rules.string_block(n, s, l, t, r), n) == rc.label_dim(rc.Syzygy(1, s, l), n) * n
            for t2 in range(1, n):
                for r2 in range(n):
                    assert _dim(rules.block_block(n, t, r, t2, r2), n) == n * n


def test_block_block_symmetric():
    for n in (3, 5):
        for t in range(1, n):
            for t2 in range(1, n):
                for r in range(n):
                    for r2 in range(n):
                        assert rules.block_block(n, t, r, t2, r2) == rules.block_block(n, t2, r2, t, r)


def test_projective_label():
    assert rules.projective_label(3, 0) is None
    assert rules.projective_label(3, 3) == rc.Simple(3)
    with pytest.raises(rc.ModuleError):
        rules.projective_label(3, 4)


def test_v2_rule_n3_example(ctx3):
    assert rules.v2_block(3, 1, 0) == {rc.BlockSimple(1, 1): 1, rc.BlockSimple(1, 2): 1}


@pytest.mark.parametrize("seed", range(6))
def test_rules_certified_n5_sample(ctx5, seed):
    rng = random.Random(seed)
    t, r, t2, r2 = rng.randrange(1, 5), rng.randrange(5), rng.randrange(1, 5), rng.randrange(5)
    if seed % 2:
        t2 = 5 - t  # force the projective regime
    M = rc.tensor(rc.block_simple_V(ctx5, t, r), rc.block_simple_V(ctx5, t2, r2))
    ha.verify_claim(M, rules.block_block(5, t, r, t2, r2), seed=seed)
    l = rng.randrange(1, 6)
    M = rc.tensor(rc.simple_V(ctx5, l), rc.block_simple_V(ctx5, t, r))
    ha.verify_claim(M, rules.simple_block(5, l, t, r), seed=seed)
