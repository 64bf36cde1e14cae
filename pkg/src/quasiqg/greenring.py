"""The Green ring as a normal-form ring over the integers.

Elements are integer combinations of monomials in the generators

    y = [V_2],  x_t = [V(t,0)],  e_t = [V(t,1)],  z+ = [Omega V_1],
    z- = [Omega^-1 V_1],  w_{s,eta} = [M_s(1,eta)].

Products are reduced by rewriting rules oriented so that every step lowers
(z-degree, w-degree, x/e-degree, y-degree, e-count) lexicographically.
Because the surviving monomials are a Z-basis of the quotient ring, the
normal form does not depend on the order in which rules fire.

Band parameters eta are opaque strings; only equality between them is used.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, NamedTuple

from .repcore import Band, BlockSimple, Proj, Simple, Syzygy

__all__ = [
    "GreenRing",
    "GreenElem",
    "Monomial",
    "GreenError",
    "NotExpressible",
    "ExpressionError",
    "DEFAULT_ETAS",
]

DEFAULT_ETAS = ("inf", "eta1", "eta2", "eta3", "eta4")
STEP_BUDGET = 5_000


class GreenError(ValueError):
    pass


class NotExpressible(GreenError):
    """A label whose class has no generator expression from the closed formulas."""


class ExpressionError(GreenError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


# ---------------------------------------------------------------------------
# integer polynomials in y (little-endian lists)


def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def padd(a, b):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def pscale(c: int, a):
    return _trim([c * x for x in a])


def psub(a, b):
    return padd(a, pscale(-1, b))


def pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, z in enumerate(b):
                out[i + j] += x * z
    return _trim(out)


def ymono(k: int, c: int = 1):
    return _trim([0] * k + [c])


def _exact(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"expected an integer coefficient, got {x}")
    return x.numerator


def _ratio_binom(top: int, i: int) -> int:
    """top/(top-i) * C(top-i, i): the Lucas-type coefficients."""
    return _exact(Fraction(top, top - i) * comb(top - i, i))


# ---------------------------------------------------------------------------
# monomials


class Monomial(NamedTuple):
    y: int = 0
    xe: tuple = ()  # sorted (kind, t); kind 0 = x_t, 1 = e_t
    zp: int = 0
    zm: int = 0
    w: tuple = ()  # sorted (s, eta)

    def times(self, other: "Monomial") -> "Monomial":
        return Monomial(self.y + other.y, tuple(sorted(self.xe + other.xe)),
                        self.zp + other.zp, self.zm + other.zm,
                        tuple(sorted(self.w + other.w)))

    def order_key(self) -> tuple:
        eps = sum(1 for kind, _ in self.xe if kind)
        return (self.zp + self.zm, len(self.w), len(self.xe), self.y, eps,
                self.zp, self.zm, self.xe, self.w)

    def __str__(self) -> str:
        parts = []
        if self.y:
            parts.append("y" if self.y == 1 else f"y^{self.y}")
        for (kind, t), k in sorted(Counter(self.xe).items()):
            name = f"{'e' if kind else 'x'}{t}"
            parts.append(name if k == 1 else f"{name}^{k}")
        for name, k in (("z+", self.zp), ("z-", self.zm)):
            if k:
                parts.append(name if k == 1 else f"{name}^{k}")
        for (s, eta), k in sorted(Counter(self.w).items()):
            name = f"w{s},{eta}"
            parts.append(name if k == 1 else f"({name})^{k}")
        return "*".join(parts) if parts else "1"


ONE = Monomial()


# ---------------------------------------------------------------------------
# elements


class GreenElem:
    """Integer combination of monomials (normal ones after reduction)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "GreenRing", terms: dict | None = None):
        self.ring = ring
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def __add__(self, other):
        other = self.ring.coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GreenElem(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GreenElem(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self.ring.coerce(other))

    def __rsub__(self, other):
        return self.ring.coerce(other) - self

    def __mul__(self, other):
        return self.ring.mul(self, self.ring.coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise GreenError("negative powers are not defined")
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.coerce(other)
        if not isinstance(other, GreenElem):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms, key=Monomial.order_key, reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m in self.monomials():
            c = self.terms[m]
            body = str(m)
            if body == "1":
                text = str(abs(c))
            elif abs(c) == 1:
                text = body
            else:
                text = f"{abs(c)}*{body}"
            sign = "-" if c < 0 else "+"
            out.append((sign, text))
        first_sign, first = out[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, text in out[1:]:
            s += f" {sign} {text}"
        return s

    __repr__ = __str__

    def to_records(self) -> list[dict]:
        return [{"monomial": str(m), "coeff": self.terms[m]} for m in self.monomials()]


# ---------------------------------------------------------------------------
# the ring


class GreenRing:
    """Normal-form arithmetic in the Green ring at a fixed odd n > 2."""

    def __init__(self, n: int, etas: Iterable[str] = DEFAULT_ETAS):
        if not isinstance(n, int) or n <= 2 or n % 2 == 0:
            raise GreenError(f"n must be an odd integer > 2, got {n!r}")
        self.n = n
        self.h = (n - 1) // 2
        self.etas = tuple(etas)
        self._polys = self._build_polys()
        self._cache: dict[Monomial, dict] = {}

    def __reduce__(self):
        return (GreenRing, (self.n, self.etas))

    # polynomial data -----------------------------------------------------
    def _build_polys(self) -> dict[str, list[int]]:
        n, h = self.n, self.h
        f1 = []
        for i in range(h + 1):
            f1 = padd(f1, ymono(n - 1 - 2 * i, (-1) ** i * comb(n - 1 - i, i)))
        f2 = [-2]
        for i in range(h + 1):
            f2 = padd(f2, ymono(n - 2 * i, (-1) ** i * _ratio_binom(n, i)))
        f3 = []
        for i in range(1, h + 1):
            f3 = padd(f3, ymono(n - 1 - 2 * i, (-1) ** (i - 1) * comb(n - i - 2, i - 1)))
        f4 = []
        for i in range(1, h + 1):
            f4 = padd(f4, ymono(n - 2 * i, (-1) ** (i - 1) * comb(n - i - 1, i - 1)))
        g1 = []
        for i in range((n + 1) // 4 + 1):
            g1 = padd(g1, ymono((n + 1) // 2 - 2 * i, (-1) ** i * _exact(
                Fraction(n + 1, n + 1 - 2 * i) * comb((n + 1) // 2 - i, i))))
        g2 = []
        for i in range((n - 1) // 4 + 1):
            g2 = padd(g2, ymono((n - 1) // 2 - 2 * i, (-1) ** i * _exact(
                Fraction(n - 1, n - 1 - 2 * i) * comb((n - 1) // 2 - i, i))))
        g3 = [-1, 0, 1]
        for i in range(2, h + 1):
            g3 = padd(g3, ymono(n - 2 * i, (-1) ** i * comb(n - 2 - i, i - 2)))
        g4 = [1]
        for i in range(1, (n - 1) // 4 + 1):
            g4 = padd(g4, [2 * (-1) ** i])
        for k in range(1, h + 1):
            for i in range((n - 1 - 2 * k) // 4 + 1):
                g4 = padd(g4, ymono(k, (-1) ** i * _exact(Fraction(k + 2 * i, k + i) * comb(k + i, i))))
        return {"f1": f1, "f2": f2, "f3": f3, "f4": f4, "g1": g1, "g2": g2, "g3": g3, "g4": g4}

    def poly(self, name: str) -> list[int]:
        return list(self._polys[name])

    # construction ----------------------------------------------------------
    @property
    def zero(self) -> GreenElem:
        return GreenElem(self, {})

    @property
    def one(self) -> GreenElem:
        return GreenElem(self, {ONE: 1})

    def coerce(self, value) -> GreenElem:
        if isinstance(value, GreenElem):
            if value.ring.n != self.n:
                raise GreenError("ring mismatch")
            return value
        if isinstance(value, int):
            return GreenElem(self, {ONE: value})
        raise TypeError(f"cannot coerce {type(value).__name__}")

    def ypoly(self, p, base: Monomial = ONE) -> dict:
        return {base.times(Monomial(y=k)): c for k, c in enumerate(p) if c}

    def elem_from_poly(self, p, base: Monomial = ONE) -> GreenElem:
        return self.reduce_raw(self.ypoly(p, base))

    def _check_t(self, t: int):
        if not 1 <= t <= self.n - 1:
            raise GreenError(f"t must lie in 1..{self.n - 1}, got {t}")

    def gen(self, name: str, *params) -> GreenElem:
        """A generator as an element: gen('y'), gen('x', t), gen('e', t), gen('z+'), gen('w', s, eta)."""
        if name == "y":
            return self.reduce_raw({Monomial(y=1): 1})
        if name in ("x", "e"):
            (t,) = params
            self._check_t(t)
            return self.reduce_raw({Monomial(xe=((0 if name == "x" else 1, t),)): 1})
        if name == "z+":
            return self.reduce_raw({Monomial(zp=1): 1})
        if name == "z-":
            return self.reduce_raw({Monomial(zm=1): 1})
        if name == "w":
            s, eta = params
            if s < 1:
                raise GreenError("w needs s >= 1")
            return self.reduce_raw({Monomial(w=((s, str(eta)),)): 1})
        if name in self._polys:
            return self.elem_from_poly(self._polys[name])
        raise GreenError(f"unknown generator {name!r}")

    # raw polynomial arithmetic -----------------------------------------------
    @staticmethod
    def _raw_mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = m1.times(m2)
                out[m] = out.get(m, 0) + c1 * c2
        return {m: c for m, c in out.items() if c}

    @staticmethod
    def _raw_add(*parts: dict) -> dict:
        out: dict = {}
        for p in parts:
            for m, c in p.items():
                out[m] = out.get(m, 0) + c
        return {m: c for m, c in out.items() if c}

    @staticmethod
    def _raw_scale(c: int, a: dict) -> dict:
        return {m: c * v for m, v in a.items() if c * v}

    # normal forms ------------------------------------------------------------
    def is_normal(self, m: Monomial) -> bool:
        n, h = self.n, self.h
        z = m.zp + m.zm
        if m.xe:
            if len(m.xe) != 1 or z or m.w:
                return False
            kind, _ = m.xe[0]
            return m.y <= (h if kind == 0 else h - 1)
        if z:
            return not m.w and (m.zp == 0 or m.zm == 0) and m.y <= n - 2
        if m.w:
            return len(m.w) == 1 and m.y <= n - 2
        return m.y <= 2 * n - 2

    def _step(self, m: Monomial) -> dict:
        """One rewrite of a non-normal monomial, returned as a raw polynomial."""
        P = self._polys
        n, h = self.n, self.h
        if m.zp and m.zm:
            rest = m._replace(zp=m.zp - 1, zm=m.zm - 1)
            rhs = padd([1], pmul(P["f1"], padd(ymono(1, 2), pscale(4, P["f3"]))))
            return self.ypoly(rhs, rest)
        if (m.zp or m.zm) and m.w:
            (s, eta) = m.w[0]
            if m.zp:
                rest = m._replace(zp=m.zp - 1, w=m.w[1:])
                tail = pscale(s, pmul(P["f1"], P["f1"]))
            else:
                rest = m._replace(zm=m.zm - 1, w=m.w[1:])
                tail = pscale(s, pmul(P["f1"], padd(ymono(1), P["f3"])))
            wmono = Monomial(w=((s, eta),))
            return self._raw_add(self.ypoly(P["f4"], rest.times(wmono)), self.ypoly(tail, rest))
        if len(m.w) >= 2:
            (k, eta), (t, alpha) = m.w[0], m.w[1]
            rest = m._replace(w=m.w[2:])
            if eta != alpha:
                return self.ypoly(pscale(k * t, pmul(P["f1"], P["f1"])), rest)
            if k > t:
                k, t = t, k
            wk = rest.times(Monomial(w=((k, eta),)))
            return self._raw_add(self.ypoly(padd([1], P["f4"]), wk),
                                 self.ypoly(pscale((t - 1) * k, pmul(P["f1"], P["f1"])), rest))
        if len(m.xe) >= 2:
            (k1, t1), (k2, t2) = m.xe[0], m.xe[1]
            rest = m._replace(xe=m.xe[2:])
            tot = t1 + t2
            if tot != n:
                tt = tot if tot < n else tot - n
                return self.ypoly(P["g4"], rest.times(Monomial(xe=((0, tt),))))
            if k1 and k2:
                return self.ypoly(pmul(P["g3"], P["f1"]), rest)
            return self.ypoly(pmul(padd(P["f4"], [1]), P["f1"]), rest)
        if m.xe and (m.zp or m.zm):
            rest = m._replace(zp=m.zp - 1) if m.zp else m._replace(zm=m.zm - 1)
            return self.ypoly(padd(pscale(2, P["g4"]), [-1]), rest)
        if m.xe and m.w:
            (s, _), (_, t) = m.w[0], m.xe[0]
            rest = m._replace(w=m.w[1:], xe=((1, t),))
            return self.ypoly(pscale(s, P["g4"]), rest)
        if m.xe:
            kind, t = m.xe[0]
            if kind == 0:
                d = h + 1
                lower = psub(ymono(d), psub(P["g1"], P["g2"]))
                return self.ypoly(lower, m._replace(y=m.y - d))
            base = m._replace(y=m.y - h)
            return self._raw_add(
                self.ypoly(P["g4"], base._replace(xe=((0, t),))),
                self.ypoly(pscale(-1, psub(P["g4"], ymono(h))), base))
        if m.zp or m.zm:
            base = m._replace(y=m.y - (n - 1))
            lower = self.ypoly(psub(ymono(n - 1), P["f1"]), base)
            down = base._replace(zp=m.zp - 1) if m.zp else base._replace(zm=m.zm - 1)
            return self._raw_add(lower, self.ypoly(pmul(P["f1"], padd([1], pscale(2, P["f4"]))), down))
        if m.w:
            (s, _) = m.w[0]
            base = m._replace(y=m.y - (n - 1))
            lower = self.ypoly(psub(ymono(n - 1), P["f1"]), base)
            return self._raw_add(lower, self.ypoly(pscale(s, pmul(P["f1"], padd([1], P["f4"]))),
                                                   base._replace(w=())))
        d = 2 * n - 1
        return self.ypoly(psub(ymono(d), pmul(P["f1"], P["f2"])), m._replace(y=m.y - d))

    def reduce_monomial(self, m: Monomial, _depth: int = 0) -> dict:
        """Normal form of one monomial; every intermediate result is memoized."""
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        if _depth > STEP_BUDGET:
            raise GreenError(f"reduction of {m} exceeded the depth budget")
        if self.is_normal(m):
            out = {m: 1}
        else:
            out = {}
            for m2, c in self._step(m).items():
                for m3, c3 in self.reduce_monomial(m2, _depth + 1).items():
                    out[m3] = out.get(m3, 0) + c * c3
            out = {k: v for k, v in out.items() if v}
        self._cache[m] = out
        return out

    def reduce_raw(self, raw: dict) -> GreenElem:
        out: dict = {}
        for m, c in raw.items():
            for m2, c2 in self.reduce_monomial(m).items():
                out[m2] = out.get(m2, 0) + c * c2
        return GreenElem(self, out)

    def reduce(self, elem: GreenElem) -> GreenElem:
        return self.reduce_raw(elem.terms)

    def mul(self, a: GreenElem, b: GreenElem) -> GreenElem:
        return self.reduce_raw(self._raw_mul(a.terms, b.terms))

    # normal basis ------------------------------------------------------------
    def normal_basis(self, s_max: int = 1, etas: Iterable[str] | None = None,
                     part: str = "all") -> list[Monomial]:
        """Normal monomials; z- and w-powers are listed up to s_max.

        part: "projective-small" (y only), "projective" (y, x, e) or "all".
        """
        n, h = self.n, self.h
        out = [Monomial(y=j) for j in range(2 * n - 1)]
        if part == "projective-small":
            return out
        for t in range(1, n):
            out += [Monomial(y=k, xe=((0, t),)) for k in range(h + 1)]
            out += [Monomial(y=i, xe=((1, t),)) for i in range(h)]
        if part == "projective":
            return out
        for s in range(1, s_max + 1):
            for l in range(n - 1):
                out.append(Monomial(y=l, zp=s))
                out.append(Monomial(y=l, zm=s))
                for eta in (etas or self.etas):
                    out.append(Monomial(y=l, w=((s, eta),)))
        return out

    # labels ------------------------------------------------------------------
    def simple_class(self, l: int) -> GreenElem:
        p = []
        for i in range((l - 1) // 2 + 1):
            p = padd(p, ymono(l - 1 - 2 * i, (-1) ** i * comb(l - 1 - i, i)))
        return self.elem_from_poly(p)

    def proj_class(self, l: int) -> GreenElem:
        n = self.n
        if l == n:
            return self.simple_class(n)
        p = []
        for i in range((n - l) // 2 + 1):
            p = padd(p, ymono(n - l - 2 * i, (-1) ** i * _ratio_binom(n - l, i)))
        return self.elem_from_poly(pmul(p, self._polys["f1"]))

    def block_class(self, t: int, r: int) -> GreenElem:
        """[V(t,r)] for r >= 0 from the closed formula in x_t, e_t and y^2-2."""
        self._check_t(t)
        if r < 0:
            raise GreenError("r must be nonnegative here; reduce mod n first")
        if r == 0:
            return self.gen("x", t)
        if r == 1:
            return self.gen("e", t)
        u = [-2, 0, 1]

        def upow(k):
            out = [1]
            for _ in range(k):
                out = pmul(out, u)
            return out

        pe, px = [], []
        for i in range((r - 1) // 2 + 1):
            pe = padd(pe, pscale((-1) ** i * comb(r - 1 - i, i), upow(r - 1 - 2 * i)))
        for i in range((r - 2) // 2 + 1):
            px = padd(px, pscale((-1) ** i * comb(r - 2 - i, i), upow(r - 2 - 2 * i)))
        return self.reduce_raw(self._raw_add(self.ypoly(pe, Monomial(xe=((1, t),))),
                                             self.ypoly(pscale(-1, px), Monomial(xe=((0, t),)))))

    def from_label(self, label, derived: dict | None = None) -> GreenElem:
        """Class of an indecomposable in the generator basis.

        Syzygy labels other than Omega^{+-1}V_1 are only available through a
        ``derived`` table built by :func:`derive_syzygy_class`.
        """
        n = self.n
        if isinstance(label, Simple):
            if not 1 <= label.l <= n:
                raise GreenError(f"V_{label.l} does not exist at n={n}")
            return self.simple_class(label.l)
        if isinstance(label, Proj):
            return self.proj_class(label.l)
        if isinstance(label, BlockSimple):
            return self.block_class(label.t, label.r % n)
        if isinstance(label, Syzygy):
            if label.s == 1 and label.l == 1:
                return self.gen("z+" if label.sign > 0 else "z-")
            if derived is not None and label in derived:
                return derived[label]
            raise NotExpressible(f"{label} has no generator expression from the closed formulas")
        if isinstance(label, Band):
            if label.l == 1:
                return self.gen("w", label.s, label.eta)
            raise NotExpressible(f"{label} has no generator expression from the closed formulas")
        raise TypeError(f"not a label: {label!r}")

    def from_counter(self, parts, derived: dict | None = None) -> GreenElem:
        total = self.zero
        for lab, mult in sorted(parts.items(), key=lambda kv: str(kv[0])):
            total = total + self.from_label(lab, derived) * mult
        return total

    # parsing -----------------------------------------------------------------
    def parse(self, text: str) -> GreenElem:
        return _Parser(self, text).parse()

    def from_records(self, records) -> GreenElem:
        """Inverse of :meth:`GreenElem.to_records`."""
        total = self.zero
        for rec in records:
            coeff = rec["coeff"]
            if not isinstance(coeff, int) or isinstance(coeff, bool):
                raise GreenError(f"coefficient must be an integer, got {coeff!r}")
            total = total + self.parse(rec["monomial"]) * coeff
        return total

    # relation sets -----------------------------------------------------------
    def relation_sets(self, s_max: int = 2, etas: Iterable[str] | None = None) -> dict[str, list[tuple[str, dict]]]:
        """Generators of every presentation, as raw (unreduced) polynomials."""
        P = self._polys
        n = self.n
        etas = tuple(etas or self.etas)
        Y = self.ypoly
        add, mul, sc = self._raw_add, self._raw_mul, self._raw_scale
        zp, zm = {Monomial(zp=1): 1}, {Monomial(zm=1): 1}

        def w(s, eta):
            return {Monomial(w=((s, eta),)): 1}

        def x(t):
            return {Monomial(xe=((0, t),)): 1}

        def e(t):
            return {Monomial(xe=((1, t),)): 1}

        f1, f3, f4 = Y(P["f1"]), Y(P["f3"]), Y(P["f4"])
        f1f2 = Y(pmul(P["f1"], P["f2"]))
        small = [("f1*f2", f1f2)]

        r_gens = small + [
            ("z+*z- - 1 - f1*(2y+4f3)",
             add(mul(zp, zm), {ONE: -1}, sc(-1, Y(pmul(P["f1"], padd(ymono(1, 2), pscale(4, P["f3"]))))))),
            ("f1*(z+ - 1 - 2f4)", mul(f1, add(zp, {ONE: -1}, sc(-2, f4)))),
            ("f1*(z+ - z-)", mul(f1, add(zp, sc(-1, zm)))),
        ]
        green_small = list(r_gens)
        svals = range(1, s_max + 1)
        for k in svals:
            for eta in etas:
                wk = w(k, eta)
                green_small.append((f"f1*(w{k},{eta} - {k} - {k}f4)",
                                    mul(f1, add(wk, {ONE: -k}, sc(-k, f4)))))
                green_small.append((f"(z+ - f4)*w{k},{eta} - {k}f1^2",
                                    add(mul(add(zp, sc(-1, f4)), wk), sc(-k, mul(f1, f1)))))
                green_small.append((f"(z- - f4)*w{k},{eta} - {k}f1*(y+f3)",
                                    add(mul(add(zm, sc(-1, f4)), wk),
                                        sc(-k, mul(f1, add({Monomial(y=1): 1}, f3))))))
                for s in svals:
                    for alpha in etas:
                        if alpha != eta:
                            green_small.append((f"w{k},{eta}*w{s},{alpha} - {k * s}f1^2",
                                                add(mul(wk, w(s, alpha)), sc(-k * s, mul(f1, f1)))))
                for t in svals:
                    if k <= t:
                        green_small.append((f"w{k},{eta}*(w{t},{eta} - 1 - f4) - {(t - 1) * k}f1^2",
                                            add(mul(wk, add(w(t, eta), {ONE: -1}, sc(-1, f4))),
                                                sc(-(t - 1) * k, mul(f1, f1)))))

        g1g2 = Y(psub(P["g1"], P["g2"]))
        g3, g4 = Y(P["g3"]), Y(P["g4"])
        proj_quasi = list(small)
        for t in range(1, n):
            proj_quasi.append((f"(g1-g2)*x{t}", mul(g1g2, x(t))))
            proj_quasi.append((f"g4*(x{t} - e{t})", mul(g4, add(x(t), sc(-1, e(t))))))
            for t2 in range(1, n):
                proj_quasi.append((f"x{t}*x{t2} - x{t}*e{t2}", add(mul(x(t), x(t2)), sc(-1, mul(x(t), e(t2))))))
                if t + t2 != n:
                    proj_quasi.append((f"x{t}*x{t2} - e{t}*e{t2}", add(mul(x(t), x(t2)), sc(-1, mul(e(t), e(t2))))))
                if t + t2 < n:
                    proj_quasi.append((f"x{t}*x{t2} - g4*x{t + t2}", add(mul(x(t), x(t2)), sc(-1, mul(g4, x(t + t2))))))
                if t + t2 > n:
                    proj_quasi.append((f"x{t}*x{t2} - g4*x{t + t2 - n}",
                                       add(mul(x(t), x(t2)), sc(-1, mul(g4, x(t + t2 - n))))))
            proj_quasi.append((f"x{t}*x{n - t} - (f4+1)*f1",
                               add(mul(x(t), x(n - t)), sc(-1, Y(pmul(padd(P["f4"], [1]), P["f1"]))))))
            proj_quasi.append((f"e{t}*e{n - t} - g3*f1",
                               add(mul(e(t), e(n - t)), sc(-1, Y(pmul(P["g3"], P["f1"]))))))

        mixed = []
        two_g4_minus_1 = Y(padd(pscale(2, P["g4"]), [-1]))
        for t in range(1, n):
            mixed.append((f"(z+ - z-)*x{t}", mul(add(zp, sc(-1, zm)), x(t))))
            mixed.append((f"(z+ - z-)*e{t}", mul(add(zp, sc(-1, zm)), e(t))))
            mixed.append((f"z+*x{t} - (2g4-1)*x{t}", add(mul(zp, x(t)), sc(-1, mul(two_g4_minus_1, x(t))))))
            mixed.append((f"z+*e{t} - (2g4-1)*e{t}", add(mul(zp, e(t)), sc(-1, mul(two_g4_minus_1, e(t))))))
            for s in svals:
                for eta in etas:
                    ws = w(s, eta)
                    mixed.append((f"w{s},{eta}*x{t} - w{s},{eta}*e{t}", add(mul(ws, x(t)), sc(-1, mul(ws, e(t))))))
                    mixed.append((f"w{s},{eta}*x{t} - {s}g4*e{t}", add(mul(ws, x(t)), sc(-s, mul(g4, e(t))))))

        green_quasi = proj_quasi + green_small[1:] + mixed
        return {
            "projective-small": small,
            "green-small-zring": r_gens,
            "green-small": green_small,
            "projective-quasi": proj_quasi,
            "green-quasi-mixed": mixed,
            "green-quasi": green_quasi,
        }

    def check_relations(self, s_max: int = 2, etas=None) -> dict[str, list[tuple[str, str]]]:
        """Residues of every relation generator; an empty list means all vanish."""
        out = {}
        for key, gens in self.relation_sets(s_max, etas).items():
            bad = []
            for name, raw in gens:
                res = self.reduce_raw(raw)
                if not res.is_zero():
                    bad.append((name, str(res)))
            out[key] = bad
        return out

    def audit_text(self, s_max: int = 2, etas=None) -> str:
        """Every relation generator written out, one per line, grouped by set."""
        lines = [f"# relation generators at n={self.n}, s_max={s_max}"]
        for key, gens in self.relation_sets(s_max, etas).items():
            lines.append(f"[{key}]")
            for name, raw in gens:
                lines.append(f"{name}: {GreenElem(self, raw)}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# stable quotient


class StableRing:
    """The quotient killing projective classes, on monomials in y, z+, z-, w.

    Normal monomials: y^l, y^l z+^s, y^l z-^s, y^l w_{s,eta} with l <= n-2.
    """

    def __init__(self, ring: GreenRing):
        self.ring = ring
        self.n = ring.n
        self._cache: dict[Monomial, dict] = {}

    def is_normal(self, m: Monomial) -> bool:
        if m.xe or m.y > self.n - 2:
            return False
        if m.zp and m.zm:
            return False
        if m.w and (m.zp or m.zm or len(m.w) > 1):
            return False
        return True

    def _step(self, m: Monomial) -> dict:
        P = self.ring._polys
        Y = self.ring.ypoly
        if m.xe:
            return {}
        if m.zp and m.zm:
            return {m._replace(zp=m.zp - 1, zm=m.zm - 1): 1}
        if m.w and (m.zp or m.zm):
            rest = m._replace(zp=m.zp - 1) if m.zp else m._replace(zm=m.zm - 1)
            return Y(P["f4"], rest)
        if len(m.w) >= 2:
            (k, eta), (t, alpha) = m.w[0], m.w[1]
            if eta != alpha:
                return {}
            rest = m._replace(w=m.w[2:]).times(Monomial(w=((min(k, t), eta),)))
            return Y(padd([1], P["f4"]), rest)
        d = self.n - 1
        return Y(psub(ymono(d), P["f1"]), m._replace(y=m.y - d))

    def reduce_monomial(self, m: Monomial) -> dict:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        if self.is_normal(m):
            out = {m: 1}
        else:
            out: dict = {}
            for m2, c in self._step(m).items():
                for m3, c3 in self.reduce_monomial(m2).items():
                    out[m3] = out.get(m3, 0) + c * c3
            out = {k: v for k, v in out.items() if v}
        self._cache[m] = out
        return out

    def reduce_raw(self, raw: dict) -> GreenElem:
        out: dict = {}
        for m, c in raw.items():
            for m2, c2 in self.reduce_monomial(m).items():
                out[m2] = out.get(m2, 0) + c * c2
        return GreenElem(self.ring, out)

    def image(self, elem: GreenElem) -> GreenElem:
        return self.reduce_raw(elem.terms)

    def mul(self, a: GreenElem, b: GreenElem) -> GreenElem:
        return self.reduce_raw(GreenRing._raw_mul(a.terms, b.terms))

    def relations(self, s_max: int = 2, etas=None) -> list[tuple[str, dict]]:
        ring = self.ring
        P = ring._polys
        etas = tuple(etas or ring.etas)
        Y = ring.ypoly
        add, mul, sc = ring._raw_add, ring._raw_mul, ring._raw_scale
        zp, zm = {Monomial(zp=1): 1}, {Monomial(zm=1): 1}
        f4 = Y(P["f4"])

        def w(s, eta):
            return {Monomial(w=((s, eta),)): 1}

        out = [("f1", Y(P["f1"])), ("z+*z- - 1", add(mul(zp, zm), {ONE: -1}))]
        svals = range(1, s_max + 1)
        for k in svals:
            for eta in etas:
                wk = w(k, eta)
                out.append((f"(z+ - f4)*w{k},{eta}", mul(add(zp, sc(-1, f4)), wk)))
                out.append((f"(z+ - z-)*w{k},{eta}", mul(add(zp, sc(-1, zm)), wk)))
                for s in svals:
                    for alpha in etas:
                        if alpha != eta:
                            out.append((f"w{k},{eta}*w{s},{alpha}", mul(wk, w(s, alpha))))
                for t in svals:
                    if k <= t:
                        out.append((f"w{k},{eta}*(w{t},{eta} - 1 - f4)",
                                    mul(wk, add(w(t, eta), {ONE: -1}, sc(-1, f4)))))
        return out


# ---------------------------------------------------------------------------
# expression parser


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<z>z[+-])
  | (?P<w>w(?P<ws_s>\d+),(?P<ws_eta>[A-Za-z0-9_∞]+))
  | (?P<gen>[xe](?P<gen_t>\d+))
  | (?P<poly>[fg][1-4])
  | (?P<y>y)
  | (?P<op>[-+*^()])
""", re.VERBOSE)


class _Parser:
    def __init__(self, ring: GreenRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ExpressionError("unexpected character", text, pos)
            kind = None
            for k in ("int", "z", "w", "gen", "poly", "y", "op"):
                if m.group(k) is not None:
                    kind = k
                    break
            if kind is not None:
                self.tokens.append((kind, m, pos))
            pos = m.end()
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def _take(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _error(self, msg):
        raise ExpressionError(msg, self.text, self._peek()[2])

    def parse(self) -> GreenElem:
        if not self.tokens:
            self._error("empty expression")
        val = self._expr()
        if self.i != len(self.tokens):
            self._error("unexpected token")
        return val

    def _is_op(self, ch):
        kind, m, _ = self._peek()
        return kind == "op" and m.group() == ch

    def _expr(self):
        val = self._term()
        while self._is_op("+") or self._is_op("-"):
            sign = self._take()[1].group()
            rhs = self._term()
            val = val + rhs if sign == "+" else val - rhs
        return val

    def _starts_factor(self):
        kind, m, _ = self._peek()
        if kind is None:
            return False
        if kind == "op":
            return m.group() == "("
        return True

    def _term(self):
        val = self._unary()
        while True:
            if self._is_op("*"):
                self._take()
                val = val * self._unary()
            elif self._starts_factor():
                val = val * self._power()
            else:
                return val

    def _unary(self):
        if self._is_op("-"):
            self._take()
            return -self._unary()
        if self._is_op("+"):
            self._take()
            return self._unary()
        return self._power()

    def _power(self):
        base = self._atom()
        if self._is_op("^"):
            self._take()
            kind, m, _ = self._peek()
            if kind != "int":
                self._error("exponent must be a nonnegative integer")
            self._take()
            return base ** int(m.group())
        return base

    def _atom(self):
        kind, m, pos = self._peek()
        ring = self.ring
        if kind is None:
            self._error("unexpected end of expression")
        self._take()
        try:
            if kind == "int":
                return ring.coerce(int(m.group()))
            if kind == "y":
                return ring.gen("y")
            if kind == "z":
                return ring.gen(m.group())
            if kind == "w":
                return ring.gen("w", int(m.group("ws_s")), m.group("ws_eta"))
            if kind == "gen":
                return ring.gen("x" if m.group()[0] == "x" else "e", int(m.group("gen_t")))
            if kind == "poly":
                return ring.gen(m.group())
        except GreenError as exc:
            raise ExpressionError(str(exc), self.text, pos) from exc
        if m.group() == "(":
            val = self._expr()
            if not self._is_op(")"):
                self._error("expected ')'")
            self._take()
            return val
        raise ExpressionError("unexpected token", self.text, pos)


# ---------------------------------------------------------------------------
# checks


def lattice_determinant(ring: GreenRing, classes: list[GreenElem], basis: list[Monomial]) -> int:
    """Determinant of the integer matrix expressing ``classes`` in ``basis``."""
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for c in classes:
        row = [Fraction(0)] * len(basis)
        for m, v in c.terms.items():
            if m not in index:
                raise GreenError(f"class has a term {m} outside the basis")
            row[index[m]] = Fraction(v)
        rows.append(row)
    if len(rows) != len(basis):
        raise GreenError(f"{len(rows)} classes against a basis of size {len(basis)}")
    det = Fraction(1)
    size = len(rows)
    for c in range(size):
        p = next((r for r in range(c, size) if rows[r][c]), None)
        if p is None:
            return 0
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det *= rows[c][c]
        for r in range(c + 1, size):
            f = rows[r][c] / rows[c][c]
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
    return _exact(det)


def projective_classes(ring: GreenRing, with_blocks: bool) -> list[GreenElem]:
    n = ring.n
    out = [ring.simple_class(l) for l in range(1, n + 1)]
    out += [ring.proj_class(l) for l in range(1, n)]
    if with_blocks:
        out += [ring.block_class(t, r) for t in range(1, n) for r in range(n)]
    return out


def identity_checks(ring: GreenRing, s_max: int = 2) -> list[tuple[str, GreenElem]]:
    """Named residues (lhs - rhs) of the class identities used by the suites; all should be 0."""
    n, h = ring.n, ring.h
    y = ring.gen("y")
    Vn = ring.simple_class(n)
    V = ring.simple_class
    Pc = ring.proj_class
    f1, f3, f4, g4 = (ring.gen(k) for k in ("f1", "f3", "f4", "g4"))
    zp, zm = ring.gen("z+"), ring.gen("z-")
    out = []
    out.append(("[V_n] = f1", Vn - f1))
    for j in range(2, n):
        out.append((f"y[V{j}] = [V{j + 1}] + [V{j - 1}]", y * V(j) - V(j + 1) - V(j - 1)))
    out.append(("y[V_n] = [P_{n-1}]", y * Vn - Pc(n - 1)))
    out.append(("y[P1] = [P2] + 2[V_n]", y * Pc(1) - Pc(2) - 2 * Vn))
    for j in range(2, n - 1):
        out.append((f"y[P{j}] = [P{j + 1}] + [P{j - 1}]", y * Pc(j) - Pc(j + 1) - Pc(j - 1)))
    out.append(("y[P_{n-1}] = 2[V_n] + [P_{n-2}]", y * Pc(n - 1) - 2 * Vn - Pc(n - 2)))
    odd = sum((Pc(2 * i + 1) for i in range(h + 1)), ring.zero)
    out.append(("sum of odd-index projectives = [V_n]^2", odd - Vn * Vn))
    odd1 = sum((Pc(2 * i + 1) for i in range(1, h + 1)), ring.zero)
    out.append(("sum_{i>=1} [P_{2i+1}] = f3[V_n]", odd1 - f3 * Vn))
    even = sum((Pc(2 * i) for i in range(1, h + 1)), ring.zero)
    out.append(("sum_{i>=1} [P_{2i}] = f4[V_n]", even - f4 * Vn))
    out.append(("z+z- = 1 + (2y+4f3)[V_n]", zp * zm - 1 - (2 * y + 4 * f3) * Vn))
    out.append(("z+[V_n] = (1+2f4)[V_n]", zp * Vn - (1 + 2 * f4) * Vn))
    out.append(("z-[V_n] = (1+2f4)[V_n]", zm * Vn - (1 + 2 * f4) * Vn))
    etas = ring.etas[:2]
    for k in range(1, s_max + 1):
        for eta in etas:
            wk = ring.gen("w", k, eta)
            out.append((f"w{k},{eta}[V_n] = {k}(1+f4)[V_n]", wk * Vn - k * (1 + f4) * Vn))
            out.append((f"z+ w{k},{eta} = f4 w + {k}[V_n]^2", zp * wk - f4 * wk - k * Vn * Vn))
            out.append((f"z- w{k},{eta} = f4 w + {k}(y+f3)[V_n]", zm * wk - f4 * wk - k * (y + f3) * Vn))
            for s in range(1, s_max + 1):
                ws_other = ring.gen("w", s, etas[1] if eta == etas[0] else etas[0])
                out.append((f"w{k},{eta} w{s},other = {k * s}[V_n]^2", wk * ws_other - k * s * Vn * Vn))
                if k <= s:
                    ws = ring.gen("w", s, eta)
                    out.append((f"w{k},{eta} w{s},{eta} = w(1+f4) + {(s - 1) * k}[V_n]^2",
                                wk * ws - wk * (1 + f4) - (s - 1) * k * Vn * Vn))
    for t in range(1, n):
        x, e = ring.gen("x", t), ring.gen("e", t)
        for z, zn in ((zp, "z+"), (zm, "z-")):
            out.append((f"{zn} x{t} = (2g4-1) x{t}", z * x - (2 * g4 - 1) * x))
            out.append((f"{zn} e{t} = (2g4-1) e{t}", z * e - (2 * g4 - 1) * e))
        for s in range(1, s_max + 1):
            ws = ring.gen("w", s, ring.etas[0])
            out.append((f"w{s} x{t} = w{s} e{t} = {s} g4 e{t}", ws * x - s * g4 * e))
            out.append((f"w{s} e{t} = {s} g4 e{t}", ws * e - s * g4 * e))
        # period n of the closed formula and the V_3 recursion
        out.append((f"[V({t},n)] = x{t}", ring.block_class(t, n) - x))
        out.append((f"[V({t},n+1)] = e{t}", ring.block_class(t, n + 1) - e))
        for k in range(1, n + 1):
            lhs = ring.simple_class(3) * ring.block_class(t, k)
            rhs = ring.block_class(t, k - 1) + ring.block_class(t, k) + ring.block_class(t, k + 1)
            out.append((f"[V3][V({t},{k})] = sum of neighbours", lhs - rhs))
        out += [(name, res) for name, res in ladder_checks(ring, t)]
    return out


def ladder_poly(r: int) -> list[int]:
    """sum_i (-1)^i r/(r-i) C(r-i,i) y^{r-2i}."""
    p = []
    for i in range(r // 2 + 1):
        p = padd(p, ymono(r - 2 * i, (-1) ** i * _ratio_binom(r, i)))
    return p


def ladder_checks(ring: GreenRing, t: int) -> list[tuple[str, GreenElem]]:
    """Multiplying x_t or e_t by the ladder polynomials lands on two block simples."""
    n = ring.n
    out = []
    B = lambda r: ring.block_class(t, r % n)  # noqa: E731
    for r in range(1, n):
        lp = ring.elem_from_poly(ladder_poly(r))
        if r % 2:
            a, b = (n - r) // 2, (n + r) // 2
        else:
            a, b = -r // 2, r // 2
        out.append((f"ladder r={r} on x{t}", lp * ring.gen("x", t) - B(a) - B(b)))
        out.append((f"ladder r={r} on e{t}", lp * ring.gen("e", t) - B(a + 1) - B(b + 1)))
    return out


def random_element(ring: GreenRing, rng: random.Random, s_max: int = 2, nterms: int = 3,
                   bound: int = 3) -> GreenElem:
    basis = ring.normal_basis(s_max, ring.etas[:2])
    terms = {}
    for _ in range(nterms):
        m = rng.choice(basis)
        terms[m] = terms.get(m, 0) + rng.randint(-bound, bound)
    return GreenElem(ring, terms)


@lru_cache(maxsize=None)
def green_ring(n: int) -> GreenRing:
    return GreenRing(n)


# ---------------------------------------------------------------------------
# agreement with the module engine


def engine_power_module(factors: list, ctx):
    """Left-nested tensor product of the modules for ``factors``."""
    from . import homalg
    from .repcore import tensor
    M = homalg.construct(factors[0], ctx)
    for lab in factors[1:]:
        M = tensor(M, homalg.construct(lab, ctx))
    return M


def engine_decomposition(factors: list, n: int, seed: int = 0) -> tuple[Counter, object]:
    """Identify the tensor product of ``factors`` and certify it with a witness."""
    from . import homalg
    from .cyclo import make_context
    ctx = make_context(n)
    M = engine_power_module(factors, ctx)
    parts = homalg.identify(M, seed=seed)
    witness = homalg.verify_claim(M, parts, seed=seed)
    return parts, witness


def _expressible_product(a, b, n: int) -> bool:
    """Whether a (x) b decomposes into classes with closed generator formulas."""
    for u, v in ((a, b), (b, a)):
        if isinstance(u, Syzygy):
            if isinstance(v, Simple) and 1 < v.l < n:
                return False
            if isinstance(v, Syzygy) and v.sign == u.sign:
                return False
    return True


def crosscheck_pairs(n: int, samples: int, seed: int) -> list[list]:
    """Factor lists to compare: required product shapes first, then random pairs."""
    rng = random.Random(seed)
    required: list[list] = []
    for t in range(1, n):
        required.append([Simple(2), BlockSimple(t, 0)])
        required.append([Syzygy(1, 1, 1), BlockSimple(t, 0)])
        for t2 in range(t, n):
            required.append([BlockSimple(t, 0), BlockSimple(t2, 0)])
    for k in range(1, 4):
        required.append([Simple(n)] + [Simple(2)] * k)
    required.append([Syzygy(1, 1, 1), Syzygy(-1, 1, 1)])
    pool = ([Simple(l) for l in range(1, n + 1)] + [Proj(l) for l in range(1, n)]
            + [BlockSimple(t, r) for t in range(1, n) for r in range(n)]
            + [Syzygy(1, 1, 1), Syzygy(-1, 1, 1)])
    extra: list[list] = []
    while len(required) + len(extra) < samples:
        a, b = rng.choice(pool), rng.choice(pool)
        if _expressible_product(a, b, n) and [a, b] not in required and [a, b] not in extra:
            extra.append([a, b])
    return required + extra


def crosscheck_with_engine(ring: GreenRing, samples: int = 30, seed: int = 0,
                           pairs: list | None = None) -> list[dict]:
    """Compare symbolic products with certified engine decompositions."""
    out = []
    for idx, factors in enumerate(pairs or crosscheck_pairs(ring.n, samples, seed)):
        symbolic = ring.one
        for lab in factors:
            symbolic = symbolic * ring.from_label(lab)
        parts, _ = engine_decomposition(factors, ring.n, seed=seed + idx)
        engine = ring.from_counter(parts)
        out.append({
            "factors": [str(f) for f in factors],
            "symbolic": str(symbolic),
            "engine_labels": {str(k): v for k, v in sorted(parts.items(), key=lambda kv: str(kv[0]))},
            "engine": str(engine),
            "equal": symbolic == engine,
        })
    return out


def derive_syzygy_class(ring: GreenRing, sign: int, s: int, l: int, seed: int = 0,
                        table: dict | None = None) -> GreenElem:
    """[Omega^{sign*s} V_l] obtained from the engine (derived, not a closed formula).

    Uses Omega^{+-1}V_1 (x) X = Omega^{+-1}X + projectives: the tensor is built,
    projectives are peeled off, the remainder is checked isomorphic to the
    string module, and the class is z_{+-} [X] minus the projective classes.
    Results are stored in ``table`` keyed by the Syzygy label.
    """
    from . import homalg
    from .cyclo import make_context
    from .repcore import tensor
    table = {} if table is None else table
    target = Syzygy(sign, s, l)
    if target in table:
        return table[target]
    if s == 1 and l == 1:
        return ring.from_label(target)
    prev_label = Simple(l) if s == 1 else Syzygy(sign, s - 1, l)
    prev = ring.simple_class(l) if s == 1 else derive_syzygy_class(ring, sign, s - 1, l, seed, table)
    ctx = make_context(ring.n)
    M = tensor(homalg.string_module(ring.n, sign, 1, 1), homalg.construct(prev_label, ctx))
    proj, X = homalg.peel_projectives(M)
    res = homalg.find_isomorphism(homalg.string_module(ring.n, sign, s, l), X, seed=seed)
    if not res:
        raise homalg.ClaimUnverified(f"stable part is not {target}", {"status": res.status, "dim": X.dim})
    z = ring.gen("z+" if sign > 0 else "z-")
    cls = z * prev - ring.from_counter(proj)
    table[target] = cls
    return cls
