import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from quasiqg import make_context
from quasiqg.cyclo import CycloError, cyclotomic_polynomial, q_integer


@pytest.mark.parametrize("m", [1, 2, 6, 9, 12, 25, 49, 81])
def test_cyclotomic_polynomial_matches_sympy(m):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(m)) == [int(c) for c in expected]


@pytest.mark.parametrize("n", [3, 5, 7])
def test_root_orders(n):
    ctx = make_context(n)
    assert ctx.degree == sympy.totient(n * n)
    assert ctx.zeta ** (n * n) == 1
    assert ctx.q ** n == 1 and ctx.q != 1
    for d in range(1, n * n):
        if (n * n) % d == 0:
            assert ctx.zeta ** d != 1


def _embed(x, n):
    z = cmath.exp(2j * cmath.pi / (n * n))
    return sum(float(c) * z ** i for i, c in enumerate(x.coeffs()))


def _elem(ctx, coeffs):
    return ctx.from_coeffs([Fraction(a, b) for a, b in coeffs[: ctx.degree]])


coeff_lists = st.lists(st.tuples(st.integers(-6, 6), st.integers(1, 5)), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(coeff_lists, coeff_lists)
def test_field_ops_agree_with_complex_embedding(a, b):
    ctx = make_context(3)
    x, y = _elem(ctx, a), _elem(ctx, b)
    for got, want in ((x + y, _embed(x, 3) + _embed(y, 3)), (x * y, _embed(x, 3) * _embed(y, 3)),
                      (x - y, _embed(x, 3) - _embed(y, 3))):
        assert abs(_embed(got, 3) - want) < 1e-8
    if not x.is_zero():
        assert x * x.inv() == 1
        assert abs(_embed(y / x, 3) - _embed(y, 3) / _embed(x, 3)) < 1e-6


@settings(max_examples=40, deadline=None)
@given(coeff_lists)
def test_string_roundtrip(a):
    ctx = make_context(5)
    x = _elem(ctx, a)
    assert ctx.from_strings(x.to_strings()) == x
    assert all("/" in s for s in x.to_strings())


def test_zero_has_no_inverse(ctx3):
    with pytest.raises((CycloError, ZeroDivisionError)):
        ctx3.zero.inv()


def test_context_rejects_even_n():
    for bad in (2, 4, 1, 0):
        with pytest.raises(ValueError):
            make_context(bad)


def test_from_strings_wrong_length(ctx3):
    with pytest.raises(ValueError):
        ctx3.from_strings(["1/1"])


def test_quantum_integer(ctx3):
    q = ctx3.q
    assert q_integer(3, q) == 0  # 1 + q + q^2 for a primitive cube root
    assert q_integer(2, q) == 1 + q


def test_context_mismatch(ctx3, ctx5):
    with pytest.raises(CycloError):
        ctx3.one + ctx5.one
