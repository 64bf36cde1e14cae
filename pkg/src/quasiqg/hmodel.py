"""The algebra H at c = d = n in the PBW basis E^a F^b K^c.

Relations: K E K^-1 = q^2 E, K F K^-1 = q^-2 F, [E, F] = (K - K^-1)/(q - q^-1),
E^n = F^n = 0, K^{n^2} = 1, with q = zeta^n and zeta a primitive n^2-th root.

Products are computed by straightening.  ``F^b E^a`` is expanded once per
(b, a) using only the commutator [E, F] and the K-conjugation scalars; the
resulting table is cached per context.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .cyclo import CycloContext, CycloNum, make_context

Key = tuple[int, int, int]

__all__ = [
    "AlgebraElem",
    "AlgebraError",
    "multiply",
    "generator_E",
    "generator_F",
    "generator_K",
    "k_power",
    "block_idempotent",
    "weight_idempotent",
    "sub_idempotent",
    "a_coefficient",
    "a_coefficient_sum",
    "a_element",
    "associator_scalar",
    "cocycle_check",
    "casimir",
    "commutation_residue",
    "pbw_rank",
    "random_element",
]


class AlgebraError(ValueError):
    pass


class AlgebraElem:
    """A sparse linear combination of PBW monomials E^a F^b K^c."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: CycloContext, terms: Mapping[Key, CycloNum] | None = None):
        self.ctx = ctx
        n, m = ctx.n, ctx.m
        clean: dict[Key, CycloNum] = {}
        for (a, b, c), v in (terms or {}).items():
            if not (0 <= a < n and 0 <= b < n and 0 <= c < m):
                raise AlgebraError(f"PBW key {(a, b, c)} out of range")
            if v:
                clean[(a, b, c)] = v
        self.terms = clean

    @classmethod
    def scalar(cls, ctx: CycloContext, value) -> "AlgebraElem":
        return cls(ctx, {(0, 0, 0): ctx(value)})

    def __add__(self, other: "AlgebraElem") -> "AlgebraElem":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return AlgebraElem(self.ctx, out)

    def __sub__(self, other: "AlgebraElem") -> "AlgebraElem":
        return self + other.scale(-1)

    def __neg__(self) -> "AlgebraElem":
        return self.scale(-1)

    def scale(self, c) -> "AlgebraElem":
        return AlgebraElem(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElem):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "AlgebraElem":
        out = AlgebraElem.scalar(self.ctx, 1)
        for _ in range(k):
            out = multiply(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElem):
            return NotImplemented
        return self.ctx is other.ctx and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, a: int, b: int, c: int) -> CycloNum:
        return self.terms.get((a, b, c % self.ctx.m), self.ctx.zero)

    def to_records(self) -> list[dict]:
        return [{"a": a, "b": b, "c": c, "coeff": v.to_strings()}
                for (a, b, c), v in sorted(self.terms.items())]

    @classmethod
    def from_records(cls, ctx: CycloContext, records: Iterable[dict]) -> "AlgebraElem":
        terms: dict[Key, CycloNum] = {}
        for r in records:
            key = (int(r["a"]), int(r["b"]), int(r["c"]))
            terms[key] = terms.get(key, ctx.zero) + ctx.from_strings(r["coeff"])
        return cls(ctx, terms)

    def __repr__(self) -> str:
        return f"AlgebraElem({len(self.terms)} terms)"


def _add_into(acc: dict, key: Key, value: CycloNum) -> None:
    cur = acc.get(key)
    if cur is None:
        acc[key] = value
    else:
        s = cur + value
        if s:
            acc[key] = s
        else:
            del acc[key]


def generator_E(ctx: CycloContext) -> AlgebraElem:
    return AlgebraElem(ctx, {(1, 0, 0): ctx.one})


def generator_F(ctx: CycloContext) -> AlgebraElem:
    return AlgebraElem(ctx, {(0, 1, 0): ctx.one})


def generator_K(ctx: CycloContext) -> AlgebraElem:
    return AlgebraElem(ctx, {(0, 0, 1 % ctx.m): ctx.one})


def k_power(ctx: CycloContext, c: int) -> AlgebraElem:
    return AlgebraElem(ctx, {(0, 0, c % ctx.m): ctx.one})


# ---------------------------------------------------------------------------
# straightening


def _left_E(ctx: CycloContext, elem: dict) -> dict:
    """E * (sum of PBW terms), truncating E^n."""
    out: dict = {}
    for (a, b, c), v in elem.items():
        if a + 1 < ctx.n:
            _add_into(out, (a + 1, b, c), v)
    return out


def _right_F(ctx: CycloContext, elem: dict) -> dict:
    """(sum of PBW terms) * F using K^c F = q^{-2c} F K^c."""
    out: dict = {}
    for (a, b, c), v in elem.items():
        if b + 1 < ctx.n:
            _add_into(out, (a, b + 1, c), v * ctx.q_power(-2 * c))
    return out


def _right_K(ctx: CycloContext, elem: dict, e: int) -> dict:
    out: dict = {}
    for (a, b, c), v in elem.items():
        _add_into(out, (a, b, (c + e) % ctx.m), v)
    return out


@lru_cache(maxsize=None)
def _fe_table(n: int) -> dict:
    """PBW expansion of F^b E^a for 0 <= a, b < n."""
    ctx = make_context(n)
    kappa = ctx.bracket_denominator_inv
    # F E^a: F E^a = (E F - (K - K^-1)/(q - q^-1)) E^{a-1} = E (F E^{a-1}) - ...
    fe = {0: {(0, 1, 0): ctx.one}}
    for a in range(1, n):
        acc = _left_E(ctx, fe[a - 1])
        # (K - K^-1) E^{a-1} = q^{2(a-1)} E^{a-1} K - q^{-2(a-1)} E^{a-1} K^-1
        _add_into(acc, (a - 1, 0, 1 % ctx.m), -(ctx.q_power(2 * (a - 1)) * kappa))
        _add_into(acc, (a - 1, 0, ctx.m - 1), ctx.q_power(-2 * (a - 1)) * kappa)
        fe[a] = acc
    one_f = fe
    table: dict = {}
    for a in range(n):
        table[(0, a)] = {(a, 0, 0): ctx.one}
    for b in range(1, n):
        for a in range(n):
            table[(b, a)] = _left_F(ctx, table[(b - 1, a)], one_f)
    return table


def _left_F(ctx: CycloContext, elem: dict, fe: dict) -> dict:
    """F * (sum of PBW terms) using the F E^a expansions."""
    out: dict = {}
    for (a, b, c), v in elem.items():
        # F E^a F^b K^c = (F E^a) F^b K^c
        for (x, y, z), w in fe[a].items():
            # (E^x F^y K^z) F^b K^c = q^{-2 z b} E^x F^{y+b} K^{z+c}
            if y + b < ctx.n:
                _add_into(out, (x, y + b, (z + c) % ctx.m), v * w * ctx.q_power(-2 * z * b))
    return out


def multiply(x: AlgebraElem, y: AlgebraElem) -> AlgebraElem:
    """Product in PBW normal form."""
    ctx = x.ctx
    if y.ctx is not ctx:
        raise AlgebraError("context mismatch")
    n, m = ctx.n, ctx.m
    table = _fe_table(n)
    out: dict = {}
    for (a, b, c), u in x.terms.items():
        for (a2, b2, c2), v in y.terms.items():
            # K^c E^{a2} F^{b2} = q^{2c(a2-b2)} E^{a2} F^{b2} K^c
            coeff = u * v * ctx.q_power(2 * c * (a2 - b2))
            for (x1, y1, z1), w in table[(b, a2)].items():
                if a + x1 >= n or y1 + b2 >= n:
                    continue
                # E^a (E^x1 F^y1 K^z1) F^{b2} K^{c+c2}
                _add_into(out, (a + x1, y1 + b2, (z1 + c + c2) % m),
                          coeff * w * ctx.q_power(-2 * z1 * b2))
    return AlgebraElem(ctx, out)


# ---------------------------------------------------------------------------
# distinguished elements


def block_idempotent(ctx: CycloContext, i: int) -> AlgebraElem:
    """e_i = (1/n) sum_t q^{ti} K^{tn}."""
    n = ctx.n
    if not 0 <= i < n:
        raise AlgebraError("block index out of range")
    inv_n = Fraction(1, n)
    return AlgebraElem(ctx, {(0, 0, (t * n) % ctx.m): ctx.q_power(t * i) * inv_n for t in range(n)})


def weight_idempotent(ctx: CycloContext, s: int) -> AlgebraElem:
    """1_s = (1/m) sum_r zeta^{sr} K^r; acts as projection onto K = zeta^{-s}."""
    m = ctx.m
    inv_m = Fraction(1, m)
    return AlgebraElem(ctx, {(0, 0, r): ctx.root_power(s * r) * inv_m for r in range(m)})


def sub_idempotent(ctx: CycloContext, i: int, j: int) -> AlgebraElem:
    """T^i_j = (1/n) sum_k zeta^{((j-1)n+i)k} K^k e_i."""
    n = ctx.n
    if not (1 <= i <= n - 1 and 1 <= j <= n):
        raise AlgebraError("sub_idempotent index out of range")
    e = block_idempotent(ctx, i)
    total = AlgebraElem(ctx)
    for k in range(n):
        total = total + multiply(k_power(ctx, k), e).scale(ctx.root_power(((j - 1) * n + i) * k))
    return total.scale(Fraction(1, n))


def a_coefficient(ctx: CycloContext, i: int, j: int, k: int, s: int) -> CycloNum:
    """The scalar a^{ij}_{ks} (1 <= s <= k <= n)."""
    if not 1 <= s <= k <= ctx.n:
        raise AlgebraError("a-coefficient index out of range")
    if s == k:
        return ctx.one
    if s == 1:
        n = ctx.n
        w = (1 - j) * n - i
        num = ctx.q_power(2 * (k - 1)) * ctx.root_power(w) - ctx.q_power(2 * (1 - k)) * ctx.root_power(-w)
        return num * ctx.bracket_denominator_inv
    return a_coefficient(ctx, i, j, k, 1) + a_coefficient(ctx, i, j, k - 1, s - 1)


def a_coefficient_sum(ctx: CycloContext, i: int, j: int, k: int, s: int) -> CycloNum:
    """a^{ij}_{k-s+1,1} + ... + a^{ij}_{k,1}, the closed form of the recursion for s < k."""
    total = ctx.zero
    for p in range(k - s + 1, k + 1):
        total = total + a_coefficient(ctx, i, j, p, 1)
    return total


def a_element(ctx: CycloContext, i: int, j: int, k: int) -> AlgebraElem:
    """A^{ij}_k = sum_p (prod_{t<=p} a_{k,k-t}) E^{k-1-p} F^{n-1-p} e_i."""
    n = ctx.n
    if not (1 <= i <= n - 1 and 1 <= j <= n and 1 <= k <= n):
        raise AlgebraError("a_element index out of range")
    for kk in range(2, n + 1):
        if not a_coefficient(ctx, i, j, kk, 1):
            raise AlgebraError(f"a^{{{i}{j}}}_{{{kk},1}} vanishes")
    terms: dict = {}
    prod = ctx.one
    for p in range(k):
        prod = prod * a_coefficient(ctx, i, j, k, k - p)
        terms[(k - 1 - p, n - 1 - p, 0)] = prod
    return multiply(AlgebraElem(ctx, terms), block_idempotent(ctx, i))


def casimir(ctx: CycloContext) -> AlgebraElem:
    """C = E F + (q^-1 K + q K^-1)/(q - q^-1)^2, a central element."""
    d = ctx.bracket_denominator_inv
    d2 = d * d
    return AlgebraElem(ctx, {
        (1, 1, 0): ctx.one,
        (0, 0, 1): ctx.q_power(-1) * d2,
        (0, 0, ctx.m - 1): ctx.q * d2,
    })


def commutation_residue(ctx: CycloContext, r: int) -> AlgebraElem:
    """F E^r - E^r F - E^{r-1}(alpha_r K^-1 - beta_r K); zero when the identity holds."""
    q = ctx.q
    qi = ctx.q_power(-1)
    d = ctx.bracket_denominator_inv
    E = generator_E(ctx)
    F = generator_F(ctx)
    Er = E ** r
    alpha = (1 - qi ** (2 * r)) / (1 - qi ** 2) * d
    beta = (1 - q ** (2 * r)) / (1 - q ** 2) * d
    corr = multiply(E ** (r - 1), k_power(ctx, -1).scale(alpha) - k_power(ctx, 1).scale(beta))
    return multiply(F, Er) - multiply(Er, F) - corr


def pbw_rank(ctx: CycloContext, elems: Iterable[AlgebraElem]) -> int:
    """Rank of a family of algebra elements over the PBW coordinates."""
    pivots: dict[Key, dict] = {}
    rank = 0
    for el in elems:
        row = dict(el.terms)
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                break
            f = row[lead]
            for k, v in prow.items():
                nv = row.get(k, ctx.zero) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if row:
            lead = min(row)
            inv = row[lead].inv()
            pivots[lead] = {k: v * inv for k, v in row.items()}
            rank += 1
    return rank


def random_element(ctx: CycloContext, rng: random.Random, nterms: int = 4, bound: int = 3) -> AlgebraElem:
    n, m = ctx.n, ctx.m
    terms = {}
    for _ in range(nterms):
        key = (rng.randrange(n), rng.randrange(n), rng.randrange(m))
        terms[key] = ctx(rng.randint(-bound, bound)) + ctx.root_power(rng.randrange(m)) * rng.randint(-bound, bound)
    return AlgebraElem(ctx, terms)


# ---------------------------------------------------------------------------
# associator


def associator_exponent(ctx: CycloContext, s: int, t: int, r: int) -> int:
    """Exponent e with phi(s, t, r) = zeta^e, arguments reduced mod m."""
    m = ctx.m
    s, t, r = s % m, t % m, r % m
    return (ctx.n * r * ((s + t) // m)) % m


def associator_scalar(ctx: CycloContext, s: int, t: int, r: int) -> CycloNum:
    return ctx.root_power(associator_exponent(ctx, s, t, r))


def cocycle_check(ctx: CycloContext, samples: int | None = None, seed: int = 0) -> list[tuple]:
    """Check the normalized 3-cocycle identity; returns the failing quadruples.

    phi(b,c,d) phi(a,b+c,d) phi(a,b,c) = phi(a+b,c,d) phi(a,b,c+d), checked
    exhaustively when ``samples`` is None, otherwise on seeded random samples.
    Normalization (phi = 1 when an argument is 0) is checked as well.
    """
    m = ctx.m

    def ex(s, t, r):
        return associator_exponent(ctx, s, t, r)

    def quads():
        if samples is None:
            for a in range(m):
                for b in range(m):
                    for c in range(m):
                        for d in range(m):
                            yield a, b, c, d
        else:
            rng = random.Random(seed)
            for _ in range(samples):
                yield tuple(rng.randrange(m) for _ in range(4))

    failures = []
    for a, b, c, d in quads():
        lhs = ex(b, c, d) + ex(a, (b + c) % m, d) + ex(a, b, c)
        rhs = ex((a + b) % m, c, d) + ex(a, b, (c + d) % m)
        if (lhs - rhs) % m:
            failures.append((a, b, c, d))
    for a in range(m):
        for b in range(m):
            if ex(0, a, b) or ex(a, 0, b) or ex(a, b, 0):
                failures.append(("normalization", a, b))
    return failures
