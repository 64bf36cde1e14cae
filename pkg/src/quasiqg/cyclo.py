"""Exact arithmetic in the cyclotomic field Q(zeta) with zeta a primitive n^2-th root of unity.

Elements are stored as rational polynomials in zeta reduced modulo the
n^2-th cyclotomic polynomial, so equality is coefficient-wise and zero
testing is exact.  The polynomial arithmetic itself is delegated to
FLINT's ``fmpq_poly``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC

from flint import fmpq, fmpq_poly

__all__ = [
    "CycloContext",
    "CycloNum",
    "CycloError",
    "make_context",
    "cyclotomic_polynomial",
    "q_integer",
    "parse_rational",
    "format_rational",
]


class CycloError(ArithmeticError):
    """Raised for invalid field operations such as inverting zero."""


# ---------------------------------------------------------------------------
# integer polynomial helpers (little-endian coefficient lists)


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    """Divide integer polynomials, requiring a monic divisor and zero remainder."""
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    for shift in range(len(quot) - 1, -1, -1):
        c = rem[shift + len(den) - 1]
        quot[shift] = c
        if c:
            for i, d in enumerate(den):
                rem[shift + i] -= c * d
    if any(rem):
        raise ArithmeticError("polynomial division left a remainder")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first.

    Computed as (x^m - 1) divided by the product of Phi_d over the proper
    divisors d of m.
    """
    if m < 1:
        raise ValueError("m must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    den = [1]
    for d in range(1, m):
        if m % d == 0:
            den = _poly_mul(den, list(cyclotomic_polynomial(d)))
    return tuple(_poly_exact_div(num, den))


# ---------------------------------------------------------------------------
# rationals


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a reduced Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _to_fmpq(x) -> fmpq:
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, fmpq):
        return x
    if isinstance(x, _RationalABC):
        return fmpq(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


# ---------------------------------------------------------------------------


class CycloContext:
    """Shared data for Q(zeta_{n^2}): the modulus and cached root powers.

    Use :func:`make_context`; contexts are cached so that one context exists
    per n and identity comparison suffices.
    """

    def __init__(self, n: int):
        if not isinstance(n, int) or n <= 2 or n % 2 == 0:
            raise ValueError(f"n must be an odd integer > 2, got {n!r}")
        self.n = n
        self.m = n * n
        # K E K^-1 = q^2 E raises the zeta-exponent of a weight by 2n
        self.shift = (2 * n) % self.m
        self.cyclotomic_polynomial = cyclotomic_polynomial(self.m)
        self.degree = len(self.cyclotomic_polynomial) - 1
        self._modulus = fmpq_poly(list(self.cyclotomic_polynomial))
        self.zero = CycloNum(self, fmpq_poly())
        self.one = CycloNum(self, fmpq_poly([1]))
        x = fmpq_poly([0, 1])
        self._roots = []
        p = fmpq_poly([1])
        for _ in range(self.m):
            self._roots.append(CycloNum(self, p))
            p = (p * x) % self._modulus
        self.zeta = self._roots[1 % self.m]
        self.q = self._roots[n % self.m]
        self._q_minus_qinv_inv = (self.q - self.q_power(-1)).inv()

    def __repr__(self) -> str:
        return f"CycloContext(n={self.n})"

    def __reduce__(self):
        return (make_context, (self.n,))

    def root_power(self, k: int) -> "CycloNum":
        """zeta^k with k taken mod n^2."""
        return self._roots[k % self.m]

    def q_power(self, k: int) -> "CycloNum":
        """q^k = zeta^{nk} with k taken mod n."""
        return self._roots[(self.n * (k % self.n)) % self.m]

    def __call__(self, value) -> "CycloNum":
        """Coerce an int/Fraction/CycloNum into this field."""
        if isinstance(value, CycloNum):
            if value.ctx is not self:
                raise CycloError("context mismatch")
            return value
        return CycloNum(self, fmpq_poly([_to_fmpq(value)]))

    @property
    def bracket_denominator_inv(self) -> "CycloNum":
        """1/(q - q^{-1})."""
        return self._q_minus_qinv_inv

    def from_coeffs(self, coeffs) -> "CycloNum":
        coeffs = list(coeffs)
        if len(coeffs) > self.degree:
            raise ValueError(f"expected at most {self.degree} coefficients")
        return CycloNum(self, fmpq_poly([_to_fmpq(parse_rational(c) if isinstance(c, str) else c)
                                         for c in coeffs]))

    def from_strings(self, strings) -> "CycloNum":
        strings = list(strings)
        if len(strings) != self.degree:
            raise ValueError(f"expected {self.degree} coefficients, got {len(strings)}")
        return self.from_coeffs(strings)

    def reduce_poly(self, poly: fmpq_poly) -> "CycloNum":
        return CycloNum(self, poly % self._modulus)


class CycloNum:
    """An element of Q(zeta_{n^2}) in the reduced power basis."""

    __slots__ = ("ctx", "poly")

    def __init__(self, ctx: CycloContext, poly: fmpq_poly):
        self.ctx = ctx
        self.poly = poly

    # coercion -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CycloNum):
            if other.ctx is not self.ctx:
                raise CycloError("context mismatch")
            return other.poly
        if isinstance(other, (int, Fraction, fmpq)):
            return fmpq_poly([_to_fmpq(other)])
        return NotImplemented

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        p = self._coerce(other)
        if p is NotImplemented:
            return p
        return CycloNum(self.ctx, self.poly + p)

    __radd__ = __add__

    def __sub__(self, other):
        p = self._coerce(other)
        if p is NotImplemented:
            return p
        return CycloNum(self.ctx, self.poly - p)

    def __rsub__(self, other):
        p = self._coerce(other)
        if p is NotImplemented:
            return p
        return CycloNum(self.ctx, p - self.poly)

    def __neg__(self):
        return CycloNum(self.ctx, -self.poly)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, CycloNum):
            if other.ctx is not self.ctx:
                raise CycloError("context mismatch")
            return CycloNum(self.ctx, (self.poly * other.poly) % self.ctx._modulus)
        if isinstance(other, (int, Fraction, fmpq)):
            return CycloNum(self.ctx, self.poly * _to_fmpq(other))
        return NotImplemented

    __rmul__ = __mul__

    def inv(self) -> "CycloNum":
        if self.poly.is_zero():
            raise CycloError("inverse of zero")
        g, s, _ = self.poly.xgcd(self.ctx._modulus)
        # the modulus is irreducible, so g is a nonzero constant
        return CycloNum(self.ctx, (s / g[0]) % self.ctx._modulus)

    def __truediv__(self, other):
        if isinstance(other, CycloNum):
            return self * other.inv()
        if isinstance(other, (int, Fraction, fmpq)):
            if other == 0:
                raise CycloError("division by zero")
            return CycloNum(self.ctx, self.poly / _to_fmpq(other))
        return NotImplemented

    def __rtruediv__(self, other):
        return self.ctx(other) * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        result = self.ctx.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycloNum):
            return self.ctx is other.ctx and self.poly == other.poly
        if isinstance(other, (int, Fraction)):
            return self.poly == fmpq_poly([_to_fmpq(other)])
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.n, tuple(self.coeffs())))

    def __bool__(self):
        return not self.poly.is_zero()

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_rational(self) -> bool:
        return self.poly.degree() <= 0

    # views ----------------------------------------------------------------
    def coeffs(self) -> list[Fraction]:
        """Power-basis coefficients, length phi(n^2), lowest first."""
        raw = self.poly.coeffs()
        out = [Fraction(int(c.p), int(c.q)) for c in raw]
        return out + [Fraction(0)] * (self.ctx.degree - len(out))

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs()]

    def __repr__(self) -> str:
        return f"CycloNum({self})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs()):
            if c == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


@lru_cache(maxsize=None)
def make_context(n: int) -> CycloContext:
    """Return the (cached) context for Q(zeta_{n^2}); n must be odd and > 2."""
    return CycloContext(n)


def q_integer(k: int, base: CycloNum) -> CycloNum:
    """The quantum integer (k)_base = 1 + base + ... + base^{k-1}."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    total = base.ctx.zero
    term = base.ctx.one
    for _ in range(k):
        total = total + term
        term = term * base
    return total
