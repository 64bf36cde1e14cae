import json
from collections import Counter

import pytest

from quasiqg import repcore as rc
from quasiqg.linalg import Matrix


@pytest.mark.parametrize("l", [1, 2, 3])
def test_simple_modules(ctx3, l):
    M = rc.simple_V(ctx3, l)
    assert M.dim == l and rc.validate(M) == []
    assert rc.block_index(M) == 0


@pytest.mark.parametrize("t,r", [(1, 0), (2, 2), (1, 4), (3, 1)])
def test_block_simple_n5(ctx5, t, r):
    M = rc.block_simple_V(ctx5, t, r)
    assert M.dim == 5 and rc.validate(M) == []
    assert len(M.matF.nullspace()) == 1
    assert rc.block_index(M) == 5 - t


def test_projective_dims(ctx5):
    for l in range(1, 5):
        P = rc.projective_P(ctx5, l)
        assert P.dim == 10 and rc.validate(P) == []


def test_tensor_weights_are_sums(ctx3):
    A, B = rc.simple_V(ctx3, 2), rc.block_simple_V(ctx3, 1, 2)
    T = rc.tensor(A, B)
    assert Counter(T.weights) == Counter((a + b) % 9 for a in A.weights for b in B.weights)
    assert rc.validate(T) == []


def test_tensor_of_projectives_is_valid(ctx3):
    T = rc.tensor(rc.projective_P(ctx3, 1), rc.projective_P(ctx3, 2))
    assert T.dim == 36 and rc.validate(T) == []


def test_regular_module(ctx3):
    M = rc.regular_submodule(ctx3, 1, 1)
    assert M.dim == 9 and rc.validate(M) == []


def test_validate_reports_broken_relation(ctx3):
    M = rc.simple_V(ctx3, 3)
    ecols = [list(c) for c in M.ecols]
    j = next(j for j, c in enumerate(ecols) if c)
    i, a = ecols[j][0]
    ecols[j][0] = (i, a * 2)
    bad = rc.Representation(ctx3, M.weights, ecols, M.fcols)
    assert any("[E,F]" in p for p in rc.validate(bad))


def test_weight_mismatch_rejected(ctx3):
    with pytest.raises(rc.ModuleError):
        rc.Representation(ctx3, [0, 0], [[], [(0, ctx3.one)]], [[], []])


def test_json_roundtrip_and_format(ctx3):
    M = rc.projective_P(ctx3, 2)
    data = json.loads(json.dumps(rc.to_json(M)))
    assert set(data) == {"n", "dim", "label", "E", "F", "K"}
    assert data["label"] == "P2"
    assert len(data["E"][0][0]) == ctx3.degree
    back = rc.from_json(data)
    assert back.matE == M.matE and back.matF == M.matF and back.matK == M.matK
    assert back.label == rc.Proj(2)


def test_from_json_rejects_invalid(ctx3):
    data = rc.to_json(rc.simple_V(ctx3, 2))
    data["F"][0][1] = ["5/1"] + ["0/1"] * (ctx3.degree - 1)
    with pytest.raises(rc.ModuleError):
        rc.from_json(data)
    with pytest.raises(rc.ModuleError):
        rc.from_json({"n": 3, "dim": 2, "E": [[]]})


def test_from_matrices_diagonalizes_k(ctx3):
    # conjugate V2 by a non-monomial change of basis
    M = rc.simple_V(ctx3, 2)
    S = Matrix(ctx3, 2, 2, [[ctx3.one, ctx3.one], [ctx3.zero, ctx3.one]])
    Si = S.inverse()
    N = rc.from_matrices(ctx3, S @ M.matE @ Si, S @ M.matF @ Si, S @ M.matK @ Si)
    assert sorted(N.weights) == sorted(M.weights)
    assert rc.validate(N) == []


@pytest.mark.parametrize("text,label", [
    ("V2", rc.Simple(2)), ("V(1,4)", rc.BlockSimple(1, 1)), ("P1", rc.Proj(1)), ("P3", rc.Simple(3)),
    ("Omega^+2(V1)", rc.Syzygy(1, 2, 1)), ("M1(2,inf)", rc.Band(1, 2, "inf")),
])
def test_label_parse(text, label):
    assert rc.parse_label(text, 3) == label


def test_label_print_roundtrip():
    for lab in (rc.Simple(2), rc.BlockSimple(2, 1), rc.Proj(1), rc.Syzygy(-1, 3, 2)):
        assert rc.parse_label(str(lab), 3) == lab


def test_label_dims():
    assert rc.label_dim(rc.Syzygy(1, 1, 1), 3) == 5
    assert rc.label_dim(rc.Syzygy(-1, 2, 2), 3) == 8
    assert rc.label_dim(rc.Band(2, 1, "inf"), 3) == 6


def test_bad_labels():
    for text in ("V0", "P3x", "V(0,1)", "Omega^+0(V1)"):
        with pytest.raises(rc.ModuleError):
            rc.parse_label(text, 3)


def test_associator_intertwines(ctx3):
    from quasiqg.homalg import GradedMap
    M, N, P = rc.simple_V(ctx3, 2), rc.block_simple_V(ctx3, 2, 1), rc.block_simple_V(ctx3, 1, 0)
    A, B = rc.tensor(rc.tensor(M, N), P), rc.tensor(M, rc.tensor(N, P))
    d = rc.associator_scalars(M, N, P)
    D = Matrix(ctx3, A.dim, A.dim)
    for i in range(A.dim):
        D.rows[i][i] = d[i]
    assert D @ A.matE == B.matE @ D
    assert D @ A.matF == B.matF @ D
    assert A.matK == B.matK
    assert any(x != 1 for x in d)  # the associator is not trivial here
    Phi = GradedMap.from_columns(A, B, [D.column(j) for j in range(A.dim)])
    assert Phi.is_intertwiner()


def test_block_parts(ctx3):
    M = rc.direct_sum([rc.simple_V(ctx3, 2), rc.block_simple_V(ctx3, 1, 0)], ctx3)
    parts = rc.block_parts(M)
    assert sorted(parts) == [0, 2]
    assert parts[0].dim == 2 and parts[2].dim == 3
