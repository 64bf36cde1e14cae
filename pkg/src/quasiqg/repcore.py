"""Finite-dimensional H-modules with K acting diagonally.

A module stores, for each basis vector, the exponent k with K v = zeta^k v,
plus sparse columns for E and F.  Every construction in this package keeps
K diagonal, which lets all later linear algebra run weight space by weight
space.  Dense E, F, K, K^-1 matrices are available as properties.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .cyclo import CycloContext, CycloNum, make_context, q_integer
from .hmodel import (
    AlgebraElem,
    generator_E,
    generator_F,
    generator_K,
    multiply,
    sub_idempotent,
    weight_idempotent,
)
from .linalg import Echelon, Matrix, nullspace

__all__ = [
    "Simple", "BlockSimple", "Proj", "Syzygy", "Band", "IndecompLabel",
    "parse_label", "label_dim",
    "CyclicSummand", "Representation", "ModuleError",
    "simple_V", "block_simple_V", "regular_submodule", "weight_regular_module",
    "projective_P", "casimir_value", "casimir_block",
    "direct_sum", "tensor", "dual", "submodule", "quotient",
    "validate", "validate_matrices", "block_index",
    "associator_scalars", "apply_word",
    "to_json", "from_json", "coords_vector",
]


class ModuleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# labels


@dataclass(frozen=True, order=True)
class Simple:
    l: int

    def __str__(self):
        return f"V{self.l}"


@dataclass(frozen=True, order=True)
class BlockSimple:
    t: int
    r: int

    def __str__(self):
        return f"V({self.t},{self.r})"


@dataclass(frozen=True, order=True)
class Proj:
    l: int

    def __str__(self):
        return f"P{self.l}"


@dataclass(frozen=True, order=True)
class Syzygy:
    sign: int  # +1 or -1
    s: int
    l: int

    def __str__(self):
        return f"Omega^{'+' if self.sign > 0 else '-'}{self.s}(V{self.l})"


@dataclass(frozen=True, order=True)
class Band:
    s: int
    l: int
    eta: str

    def __str__(self):
        return f"M{self.s}({self.l},{self.eta})"


IndecompLabel = Simple | BlockSimple | Proj | Syzygy | Band


def make_label(kind: str, n: int, *params) -> IndecompLabel:
    """Build a label with range checks; BlockSimple r is reduced mod n."""
    if kind == "simple":
        (l,) = params
        if not 1 <= l <= n:
            raise ModuleError(f"V_l needs 1 <= l <= {n}")
        return Simple(l)
    if kind == "block-simple":
        t, r = params
        if not 1 <= t <= n - 1:
            raise ModuleError(f"V(t,r) needs 1 <= t <= {n - 1}")
        return BlockSimple(t, r % n)
    if kind == "proj":
        (l,) = params
        if not 1 <= l <= n - 1:
            raise ModuleError(f"P_l needs 1 <= l <= {n - 1}")
        return Proj(l)
    if kind == "syzygy":
        sign, s, l = params
        if sign not in (1, -1) or s < 1 or not 1 <= l <= n - 1:
            raise ModuleError("syzygy needs sign in {+1,-1}, s >= 1, 1 <= l <= n-1")
        return Syzygy(sign, s, l)
    if kind == "band":
        s, l, eta = params
        if s < 1 or not 1 <= l <= n - 1:
            raise ModuleError("band needs s >= 1, 1 <= l <= n-1")
        return Band(s, l, str(eta))
    raise ModuleError(f"unknown label kind {kind!r}")


_LABEL_PATTERNS = [
    (re.compile(r"^V(\d+)$"), lambda g, n: make_label("simple", n, int(g[0]))),
    (re.compile(r"^V\((\d+),(-?\d+)\)$"), lambda g, n: make_label("block-simple", n, int(g[0]), int(g[1]))),
    (re.compile(r"^P(\d+)$"), lambda g, n: Simple(n) if int(g[0]) == n else make_label("proj", n, int(g[0]))),
    (re.compile(r"^Omega\^([+-])(\d+)\(V(\d+)\)$"),
     lambda g, n: make_label("syzygy", n, 1 if g[0] == "+" else -1, int(g[1]), int(g[2]))),
    (re.compile(r"^M(\d+)\((\d+),([^()]+)\)$"), lambda g, n: make_label("band", n, int(g[0]), int(g[1]), g[2])),
]


def parse_label(text: str, n: int) -> IndecompLabel:
    """Parse the printed form of a label, e.g. ``V2``, ``V(1,0)``, ``P1``, ``Omega^+2(V1)``."""
    s = text.replace(" ", "")
    for pat, build in _LABEL_PATTERNS:
        m = pat.match(s)
        if m:
            return build(m.groups(), n)
    raise ModuleError(f"cannot parse label {text!r}")


def label_dim(label: IndecompLabel, n: int) -> int:
    if isinstance(label, Simple):
        return label.l
    if isinstance(label, BlockSimple):
        return n
    if isinstance(label, Proj):
        return 2 * n
    if isinstance(label, Syzygy):
        s, l = label.s, label.l
        return s * n + (n - l if s % 2 else l)
    if isinstance(label, Band):
        return label.s * n  # factors V_l and V_{n-l}, each s times
    raise TypeError(label)


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True)
class CyclicSummand:
    """A direct summand generated by one vector with a known presentation.

    Basis vector ``offset + b`` equals ``E^a F^c`` applied to the generator,
    where ``words[b] = (a, c)``.  Homs out of the summand are determined by
    the image of the generator, which may be any vector of weight
    ``weight`` satisfying the defining conditions:

    * kind ``"lowest"``: F m = 0 and E^param m = 0;
    * kind ``"casimir"``: m lies in the generalized eigenspace of the
      Casimir element for the eigenvalue of V_param.
    """

    offset: int
    words: tuple[tuple[int, int], ...]
    kind: str
    weight: int
    param: int
    label: object = None

    @property
    def size(self) -> int:
        return len(self.words)


class Representation:
    """A module over H with diagonal K.

    ``weights[b]`` is the exponent k with K e_b = zeta^k e_b.  ``ecols[j]``
    lists the nonzero entries (i, value) of column j of the matrix of E;
    likewise ``fcols`` for F.
    """

    def __init__(self, ctx: CycloContext, weights: Sequence[int], ecols, fcols,
                 label=None, presentation: tuple[CyclicSummand, ...] | None = None):
        self.ctx = ctx
        m = ctx.m
        self.weights = tuple(int(k) % m for k in weights)
        dim = len(self.weights)
        self.ecols = tuple(tuple((i, v) for i, v in col if v) for col in ecols)
        self.fcols = tuple(tuple((i, v) for i, v in col if v) for col in fcols)
        if len(self.ecols) != dim or len(self.fcols) != dim:
            raise ModuleError("column count does not match dimension")
        shift = ctx.shift
        for j, col in enumerate(self.ecols):
            for i, _ in col:
                if self.weights[i] != (self.weights[j] + shift) % m:
                    raise ModuleError(f"E entry ({i},{j}) does not raise the weight by q^2")
        for j, col in enumerate(self.fcols):
            for i, _ in col:
                if self.weights[i] != (self.weights[j] - shift) % m:
                    raise ModuleError(f"F entry ({i},{j}) does not lower the weight by q^2")
        self.label = label
        self.presentation = presentation

    # basic data ----------------------------------------------------------
    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def dim(self) -> int:
        return len(self.weights)

    def __repr__(self) -> str:
        lab = f", label={self.label}" if self.label is not None else ""
        return f"Representation(n={self.n}, dim={self.dim}{lab})"

    @cached_property
    def weight_spaces(self) -> dict[int, list[int]]:
        """Weight exponent -> sorted list of basis indices with that weight."""
        out: dict[int, list[int]] = {}
        for b, k in enumerate(self.weights):
            out.setdefault(k, []).append(b)
        return dict(sorted(out.items()))

    @cached_property
    def local_position(self) -> tuple[int, ...]:
        pos = [0] * self.dim
        for idx in self.weight_spaces.values():
            for p, b in enumerate(idx):
                pos[b] = p
        return tuple(pos)

    def weight_dim(self, k: int) -> int:
        return len(self.weight_spaces.get(k % self.ctx.m, ()))

    # dense views ---------------------------------------------------------
    def _dense(self, cols) -> Matrix:
        mat = Matrix(self.ctx, self.dim, self.dim)
        for j, col in enumerate(cols):
            for i, v in col:
                mat.rows[i][j] = v
        return mat

    @cached_property
    def matE(self) -> Matrix:
        return self._dense(self.ecols)

    @cached_property
    def matF(self) -> Matrix:
        return self._dense(self.fcols)

    @cached_property
    def matK(self) -> Matrix:
        mat = Matrix(self.ctx, self.dim, self.dim)
        for b, k in enumerate(self.weights):
            mat.rows[b][b] = self.ctx.root_power(k)
        return mat

    @cached_property
    def matKinv(self) -> Matrix:
        mat = Matrix(self.ctx, self.dim, self.dim)
        for b, k in enumerate(self.weights):
            mat.rows[b][b] = self.ctx.root_power(-k)
        return mat

    # weight blocks -------------------------------------------------------
    def _block(self, cols, k: int, shift: int) -> Matrix:
        m = self.ctx.m
        k %= m
        src = self.weight_spaces.get(k, [])
        tgt = self.weight_spaces.get((k + shift) % m, [])
        mat = Matrix(self.ctx, len(tgt), len(src))
        pos = self.local_position
        for c, j in enumerate(src):
            for i, v in cols[j]:
                mat.rows[pos[i]][c] = v
        return mat

    def e_block(self, k: int) -> Matrix:
        """Matrix of E from weight space k to weight space k + 2n."""
        cache = self.__dict__.setdefault("_eblocks", {})
        k %= self.ctx.m
        if k not in cache:
            cache[k] = self._block(self.ecols, k, self.ctx.shift)
        return cache[k]

    def f_block(self, k: int) -> Matrix:
        """Matrix of F from weight space k to weight space k - 2n."""
        cache = self.__dict__.setdefault("_fblocks", {})
        k %= self.ctx.m
        if k not in cache:
            cache[k] = self._block(self.fcols, k, -self.ctx.shift)
        return cache[k]

    # actions on global vectors -------------------------------------------
    def _apply(self, cols, v: Sequence[CycloNum]) -> list[CycloNum]:
        out = [self.ctx.zero] * self.dim
        for j, a in enumerate(v):
            if a:
                for i, val in cols[j]:
                    out[i] = out[i] + a * val
        return out

    def apply_E(self, v):
        return self._apply(self.ecols, v)

    def apply_F(self, v):
        return self._apply(self.fcols, v)

    def apply_K(self, v, power: int = 1):
        return [a * self.ctx.root_power(power * k) if a else a for a, k in zip(v, self.weights)]

    def basis_vector(self, b: int) -> list[CycloNum]:
        v = [self.ctx.zero] * self.dim
        v[b] = self.ctx.one
        return v

    def with_label(self, label) -> "Representation":
        return Representation(self.ctx, self.weights, self.ecols, self.fcols, label, self.presentation)

    def without_presentation(self) -> "Representation":
        return Representation(self.ctx, self.weights, self.ecols, self.fcols, self.label, None)


def apply_word(M: Representation, word: tuple[int, int], v):
    """E^a F^c v for word (a, c)."""
    a, c = word
    for _ in range(c):
        v = M.apply_F(v)
    for _ in range(a):
        v = M.apply_E(v)
    return v


def coords_vector(ctx: CycloContext, dim: int, entries: dict[int, CycloNum]) -> list[CycloNum]:
    v = [ctx.zero] * dim
    for i, a in entries.items():
        v[i] = a
    return v


# ---------------------------------------------------------------------------
# constructors


def _alpha(ctx: CycloContext, i: int, l: int) -> CycloNum:
    return q_integer(i, ctx.q_power(2)) * (1 - ctx.q_power(2 * (i - l)))


def _beta(ctx: CycloContext, i: int, l: int) -> CycloNum:
    return _alpha(ctx, i, l) / (ctx.q_power(2 * i - l) - ctx.q_power(2 * i - l - 2))


def simple_V(n_or_ctx, l: int) -> Representation:
    """The l-dimensional simple module V_l with basis m_1..m_l."""
    ctx = _ctx(n_or_ctx)
    return _simple_V(ctx.n, l)


@lru_cache(maxsize=None)
def _simple_V(n: int, l: int) -> Representation:
    ctx = make_context(n)
    if not 1 <= l <= n:
        raise ModuleError(f"V_l needs 1 <= l <= {n}")
    # m_i (i = 1..l) has K-eigenvalue q^{2i-l-1}
    weights = [n * (2 * i - l - 1) for i in range(1, l + 1)]
    ecols = [[(b + 1, ctx.one)] if b + 1 < l else [] for b in range(l)]
    # F m_i = beta_{i-1}(l) m_{i-1}
    fcols = [[(b - 1, _beta(ctx, b, l))] if b >= 1 else [] for b in range(l)]
    pres = (CyclicSummand(0, tuple((a, 0) for a in range(l)), "lowest", weights[0] % ctx.m, l, Simple(l)),)
    return Representation(ctx, weights, ecols, fcols, Simple(l), pres)


def gamma(ctx: CycloContext, t: int, r: int, j: int) -> CycloNum:
    q = ctx.q_power
    z = ctx.root_power
    a = z(-t) * (q(-2 * r) - q(-2 * (r + j))) / (1 - q(-2))
    b = z(t) * (q(2 * r) - q(2 * (r + j))) / (1 - q(2))
    return (a - b) * ctx.bracket_denominator_inv


def block_simple_V(n_or_ctx, t: int, r: int) -> Representation:
    """The n-dimensional simple module V(t, r); r is reduced mod n."""
    ctx = _ctx(n_or_ctx)
    return _block_simple_V(ctx.n, t, r % ctx.n)


@lru_cache(maxsize=None)
def _block_simple_V(n: int, t: int, r: int) -> Representation:
    ctx = make_context(n)
    if not 1 <= t <= n - 1:
        raise ModuleError(f"V(t,r) needs 1 <= t <= {n - 1}")
    weights = [t + 2 * n * (r + i) for i in range(n)]
    ecols = [[(b + 1, ctx.one)] if b + 1 < n else [] for b in range(n)]
    fcols = []
    for b in range(n):
        if b == 0:
            fcols.append([])
            continue
        g = gamma(ctx, t, r, b)
        if not g:
            raise ModuleError(f"gamma_{b} vanishes for V({t},{r})")
        fcols.append([(b - 1, g)])
    label = BlockSimple(t, r)
    pres = (CyclicSummand(0, tuple((a, 0) for a in range(n)), "lowest", weights[0] % ctx.m, n, label),)
    return Representation(ctx, weights, ecols, fcols, label, pres)


def _ctx(n_or_ctx) -> CycloContext:
    if isinstance(n_or_ctx, CycloContext):
        return n_or_ctx
    return make_context(int(n_or_ctx))


def _left_module(ctx: CycloContext, gen: AlgebraElem, words: Sequence[tuple[int, int]],
                 label=None) -> tuple[Representation, list[AlgebraElem]]:
    """Left multiplication on span{E^a F^b gen}.

    ``gen`` must consist of K-terms only, so that basis elements have
    disjoint (a, b)-supports; coordinates are read off one PBW key per
    basis element and the reconstruction is checked exactly.
    """
    if any(a or b for (a, b, _) in gen.terms):
        raise ModuleError("generator must be a combination of K-powers")
    index = {w: p for p, w in enumerate(words)}
    basis = [multiply(AlgebraElem(ctx, {(a, b, 0): ctx.one}), gen) for (a, b) in words]
    refs = []
    for el in basis:
        if el.is_zero():
            raise ModuleError("zero basis element")
        key = min(el.terms)
        refs.append((key, el.terms[key]))

    def coords(x: AlgebraElem) -> dict[int, CycloNum]:
        out: dict[int, CycloNum] = {}
        recon = AlgebraElem(ctx)
        for (a, b, c) in {(a, b, 0) for (a, b, _) in x.terms}:
            p = index.get((a, b))
            if p is None:
                raise ModuleError(f"product leaves the span at word {(a, b)}")
            key, ref = refs[p]
            val = x.coefficient(*key) / ref
            if val:
                out[p] = val
                recon = recon + basis[p].scale(val)
        if recon != x:
            raise ModuleError("product is not in the span of the basis")
        return out

    E, F, K = generator_E(ctx), generator_F(ctx), generator_K(ctx)
    ecols, fcols, weights = [], [], []
    for p, el in enumerate(basis):
        ecols.append(sorted(coords(multiply(E, el)).items()))
        fcols.append(sorted(coords(multiply(F, el)).items()))
        kc = coords(multiply(K, el))
        if set(kc) != {p}:
            raise ModuleError("K does not act diagonally on this basis")
        lam = kc[p]
        k = next((e for e in range(ctx.m) if ctx.root_power(e) == lam), None)
        if k is None:
            raise ModuleError("K-eigenvalue is not a power of zeta")
        weights.append(k)
    return Representation(ctx, weights, ecols, fcols, label), basis


def regular_submodule(n_or_ctx, i: int, j: int) -> Representation:
    """H T^i_j with basis E^s F^l T^i_j (0 <= s, l < n) under left multiplication."""
    ctx = _ctx(n_or_ctx)
    return _regular_submodule(ctx.n, i, j)[0]


@lru_cache(maxsize=None)
def _regular_submodule(n: int, i: int, j: int):
    ctx = make_context(n)
    words = [(s, l) for s in range(n) for l in range(n)]
    return _left_module(ctx, sub_idempotent(ctx, i, j), words)


def regular_submodule_basis(n_or_ctx, i: int, j: int) -> list[AlgebraElem]:
    ctx = _ctx(n_or_ctx)
    return _regular_submodule(ctx.n, i, j)[1]


def algebra_coordinates(n_or_ctx, i: int, j: int, x: AlgebraElem) -> list[CycloNum]:
    """Coordinates of x in H T^i_j with respect to the basis E^s F^l T^i_j."""
    ctx = _ctx(n_or_ctx)
    M, basis = _regular_submodule(ctx.n, i, j)
    out = [ctx.zero] * M.dim
    recon = AlgebraElem(ctx)
    for p, el in enumerate(basis):
        key = min(el.terms)
        val = x.coefficient(*key) / el.terms[key]
        out[p] = val
        if val:
            recon = recon + el.scale(val)
    if recon != x:
        raise ModuleError("element does not lie in H T^i_j")
    return out


def weight_regular_module(n_or_ctx, s: int) -> Representation:
    """H 1_s with basis E^a F^b 1_s; 1_s generates weight zeta^{-s}."""
    ctx = _ctx(n_or_ctx)
    return _weight_regular_module(ctx.n, s % ctx.m)


@lru_cache(maxsize=None)
def _weight_regular_module(n: int, s: int) -> Representation:
    ctx = make_context(n)
    words = [(a, b) for a in range(n) for b in range(n)]
    return _left_module(ctx, weight_idempotent(ctx, s), words)[0]


def casimir_value(ctx: CycloContext, l: int) -> CycloNum:
    """Eigenvalue (q^l + q^-l)/(q - q^-1)^2 of the Casimir element on V_l."""
    d = ctx.bracket_denominator_inv
    return (ctx.q_power(l) + ctx.q_power(-l)) * d * d


def casimir_block(M: Representation, k: int) -> Matrix:
    """The Casimir element E F + (q^-1 K + q K^-1)/(q - q^-1)^2 on weight space k."""
    ctx = M.ctx
    k %= ctx.m
    ef = M.e_block(k - ctx.shift) @ M.f_block(k)
    d = ctx.bracket_denominator_inv
    c = (ctx.q_power(-1) * ctx.root_power(k) + ctx.q * ctx.root_power(-k)) * d * d
    for i in range(ef.nrows):
        ef.rows[i][i] = ef.rows[i][i] + c
    return ef


def generalized_eigenspace(A: Matrix, value: CycloNum) -> list[list[CycloNum]]:
    """Basis of ker (A - value)^N for large enough N."""
    ctx = A.ctx
    size = A.nrows
    shifted = A.copy()
    for i in range(size):
        shifted.rows[i][i] = shifted.rows[i][i] - value
    power = Matrix.identity(ctx, size)
    last = -1
    while True:
        power = power @ shifted
        ker = power.nullspace()
        if len(ker) == last or len(ker) == size:
            return ker
        last = len(ker)


def projective_P(n_or_ctx, l: int) -> Representation:
    """The projective cover P_l of V_l (l < n), dimension 2n; P_n is V_n."""
    ctx = _ctx(n_or_ctx)
    if l == ctx.n:
        return simple_V(ctx, ctx.n)
    return _projective_P(ctx.n, l)


@lru_cache(maxsize=None)
def _projective_P(n: int, l: int) -> Representation:
    ctx = make_context(n)
    if not 1 <= l <= n - 1:
        raise ModuleError(f"P_l needs 1 <= l <= {n - 1}")
    s = (n * (l - 1)) % ctx.m
    R = weight_regular_module(ctx, s)
    k0 = (-s) % ctx.m
    idx = R.weight_spaces[k0]
    pos = R.local_position
    C = casimir_block(R, k0)
    # split the generator 1_s into Casimir generalized eigencomponents
    values = []
    for lp in range(1, n + 1):
        c = casimir_value(ctx, lp)
        if c not in values:
            values.append(c)
    spaces = [generalized_eigenspace(C, c) for c in values]
    target = casimir_value(ctx, l)
    flat = [v for sp in spaces for v in sp]
    if len(flat) != len(idx):
        raise ModuleError("Casimir is not split on the generator weight space")
    ech = Echelon(ctx, len(idx), track=True)
    for v in flat:
        ech.add(v)
    gen_local = [ctx.zero] * len(idx)
    gen_local[pos[0]] = ctx.one  # word (0,0) is basis vector 0
    coeffs = ech.added_coordinates(gen_local)
    g_local = [ctx.zero] * len(idx)
    start = 0
    for sp, c in zip(spaces, values):
        if c == target:
            for cf, v in zip(coeffs[start:start + len(sp)], sp):
                if cf:
                    g_local = [a + cf * b for a, b in zip(g_local, v)]
        start += len(sp)
    g = [ctx.zero] * R.dim
    for p, b in enumerate(idx):
        g[b] = g_local[p]
    words = sorted(((a, b) for a in range(n) for b in range(n)), key=lambda w: (w[0] + w[1], w[1]))
    P, chosen, _ = rebase_on_words(R, g, words, label=Proj(l))
    if P.dim != 2 * n:
        raise ModuleError(f"P_{l} came out with dimension {P.dim}")
    pres = (CyclicSummand(0, tuple(chosen), "casimir", k0, l, Proj(l)),)
    return Representation(ctx, P.weights, P.ecols, P.fcols, Proj(l), pres)


def rebase_on_words(M: Representation, g, words, label=None) -> Representation:
    """The submodule generated by g, in the basis of independent words applied to g.

    Words are tried in the given order and kept when independent of the
    earlier ones (in their weight space).  Returns the module, the chosen
    words and their vectors in M.
    """
    ctx = M.ctx
    chosen: list[tuple[int, int]] = []
    vecs: list[list[CycloNum]] = []
    spans: dict[int, Echelon] = {}
    for w in words:
        v = apply_word(M, w, g)
        if not any(v):
            continue
        k = _vector_weight(M, v)
        ech = spans.setdefault(k, Echelon(ctx, M.dim, track=True))
        if ech.add(v):
            chosen.append(w)
            vecs.append(v)
    weights = [_vector_weight(M, v) for v in vecs]
    # position of each chosen vector inside its weight-space echelon
    order: dict[int, list[int]] = {}
    for p, k in enumerate(weights):
        order.setdefault(k, []).append(p)

    def express(v):
        if not any(v):
            return []
        k = _vector_weight(M, v)
        ech = spans.get(k)
        if ech is None:
            raise ModuleError("generated span is not closed")
        coeffs = ech.added_coordinates(v)
        return [(order[k][i], c) for i, c in enumerate(coeffs) if c]

    ecols = [express(M.apply_E(v)) for v in vecs]
    fcols = [express(M.apply_F(v)) for v in vecs]
    return Representation(ctx, weights, ecols, fcols, label), chosen, vecs


def _vector_weight(M: Representation, v) -> int:
    ks = {M.weights[i] for i, a in enumerate(v) if a}
    if len(ks) != 1:
        raise ModuleError("vector is not weight-homogeneous")
    return ks.pop()


# ---------------------------------------------------------------------------
# sums, tensors, duals


def direct_sum(mods: Sequence[Representation], ctx: CycloContext | None = None) -> Representation:
    """Block-diagonal sum; presentations are kept when every summand has one."""
    mods = list(mods)
    if not mods:
        if ctx is None:
            raise ModuleError("empty direct sum needs a context")
        return Representation(ctx, [], [], [], None, ())
    ctx = mods[0].ctx
    weights, ecols, fcols, pres = [], [], [], []
    off = 0
    keep = True
    for M in mods:
        if M.ctx is not ctx:
            raise ModuleError("context mismatch")
        weights.extend(M.weights)
        ecols.extend([[(i + off, v) for i, v in col] for col in M.ecols])
        fcols.extend([[(i + off, v) for i, v in col] for col in M.fcols])
        if M.presentation is None:
            keep = False
        elif keep:
            pres.extend(CyclicSummand(s.offset + off, s.words, s.kind, s.weight, s.param, s.label)
                        for s in M.presentation)
        off += M.dim
    labels = [M.label for M in mods]
    label = labels[0] if len(mods) == 1 else tuple(labels)
    return Representation(ctx, weights, ecols, fcols, label, tuple(pres) if keep else None)


def tensor(M: Representation, N: Representation) -> Representation:
    """M (x) N under the coproduct; basis u_i (x) v_j has index i*dim N + j.

    E(u (x) v) = E u (x) c v + zeta^{k_u} u (x) E v, where c = zeta^{-n k_v}
    if the projection index (-k_u mod m) is below 2n and 1 otherwise.
    F(u (x) v) = F u (x) d v + u (x) F v, where d = zeta^{-k_v} if the
    index is below m - 2n and zeta^{(n-1) k_v} otherwise.
    """
    ctx = M.ctx
    if N.ctx is not ctx:
        raise ModuleError("context mismatch")
    n, m = ctx.n, ctx.m
    dN = N.dim
    rp = ctx.root_power
    weights = [(ku + kv) % m for ku in M.weights for kv in N.weights]
    ecols, fcols = [], []
    for i, ku in enumerate(M.weights):
        j_u = (-ku) % m
        for j, kv in enumerate(N.weights):
            col = []
            ce = rp(-n * kv) if j_u < 2 * n else ctx.one
            for i2, a in M.ecols[i]:
                col.append((i2 * dN + j, a * ce))
            zu = rp(ku)
            for j2, b in N.ecols[j]:
                col.append((i * dN + j2, zu * b))
            ecols.append(col)
            col = []
            cf = rp(-kv) if j_u < m - 2 * n else rp((n - 1) * kv)
            for i2, a in M.fcols[i]:
                col.append((i2 * dN + j, a * cf))
            for j2, b in N.fcols[j]:
                col.append((i * dN + j2, b))
            fcols.append(col)
    return Representation(ctx, weights, ecols, fcols, None)


def dual(M: Representation) -> Representation:
    """Contravariant dual: E acts by F^T, F by E^T, K unchanged."""
    ecols = [[] for _ in range(M.dim)]
    fcols = [[] for _ in range(M.dim)]
    for j, col in enumerate(M.fcols):
        for i, v in col:
            ecols[i].append((j, v))
    for j, col in enumerate(M.ecols):
        for i, v in col:
            fcols[i].append((j, v))
    return Representation(M.ctx, M.weights, ecols, fcols, None)


def associator_scalars(M: Representation, N: Representation, P: Representation) -> list[CycloNum]:
    """Diagonal of Phi on (M (x) N) (x) P in the basis order of tensor(tensor(M, N), P).

    Phi = sum phi(f, g, h) 1_f (x) 1_g (x) 1_h, and 1_f picks the weight
    zeta^{-f}, so a basis vector of weights (a, b, c) gets phi(-a, -b, -c).
    """
    from .hmodel import associator_scalar
    ctx = M.ctx
    out = []
    for a in M.weights:
        for b in N.weights:
            for c in P.weights:
                out.append(associator_scalar(ctx, -a, -b, -c))
    return out


def submodule(M: Representation, spans: dict[int, Echelon], label=None) -> tuple[Representation, list]:
    """Restrict to a K-stable subspace given per weight as echelon spans of global vectors.

    Returns the module and the list of global vectors forming its basis.
    """
    ctx = M.ctx
    vecs, weights, where = [], [], {}
    for k in sorted(spans):
        ech = spans[k]
        where[k] = len(vecs)
        for row in ech.rows:
            vecs.append(row)
            weights.append(k)

    def express(v):
        if not any(v):
            return []
        k = _vector_weight(M, v)
        ech = spans.get(k)
        if ech is None:
            raise ModuleError("subspace is not a submodule")
        coords = ech.coordinates(v)
        return [(where[k] + i, c) for i, c in enumerate(coords) if c]

    ecols = [express(M.apply_E(v)) for v in vecs]
    fcols = [express(M.apply_F(v)) for v in vecs]
    return Representation(ctx, weights, ecols, fcols, label), vecs


def quotient(M: Representation, spans: dict[int, Echelon], label=None) -> tuple[Representation, list[int]]:
    """M / S for a submodule S given per weight as echelon spans.

    The quotient basis is the images of the standard basis vectors at
    non-pivot positions; returns the module and those positions.
    """
    ctx = M.ctx
    pivots = set()
    for ech in spans.values():
        pivots.update(ech.pivots)
    keep = [b for b in range(M.dim) if b not in pivots]
    newpos = {b: p for p, b in enumerate(keep)}

    def express(v):
        if not any(v):
            return []
        k = _vector_weight_or_none(M, v)
        if k is not None and k in spans:
            v = spans[k].reduce(v)
        return [(newpos[b], a) for b, a in enumerate(v) if a and b in newpos]

    ecols = [express(M.apply_E(M.basis_vector(b))) for b in keep]
    fcols = [express(M.apply_F(M.basis_vector(b))) for b in keep]
    return Representation(ctx, [M.weights[b] for b in keep], ecols, fcols, label), keep


def _vector_weight_or_none(M: Representation, v):
    ks = {M.weights[i] for i, a in enumerate(v) if a}
    return ks.pop() if len(ks) == 1 else None


# ---------------------------------------------------------------------------
# validation


def validate(M: Representation) -> list[str]:
    """Check every defining relation exactly; returns the violated ones."""
    ctx = M.ctx
    n, m = ctx.n, ctx.m
    problems: list[str] = []
    # K K^-1 = 1, K^{n^2} = 1 and the conjugation relations hold by
    # construction of the weight storage; recheck them from the dense data
    for b, k in enumerate(M.weights):
        if ctx.root_power(k) * ctx.root_power(-k) != 1:
            problems.append("K Kinv = 1")
            break
    for j, col in enumerate(M.ecols):
        for i, v in col:
            if ctx.root_power(M.weights[i] - M.weights[j]) != ctx.q_power(2):
                problems.append("K E Kinv = q^2 E")
    for j, col in enumerate(M.fcols):
        for i, v in col:
            if ctx.root_power(M.weights[i] - M.weights[j]) != ctx.q_power(-2):
                problems.append("K F Kinv = q^-2 F")
    for name, apply in (("E^n = 0", M.apply_E), ("F^n = 0", M.apply_F)):
        for b in range(M.dim):
            v = M.basis_vector(b)
            for _ in range(n):
                v = apply(v)
                if not any(v):
                    break
            if any(v):
                problems.append(name)
                break
    d = ctx.bracket_denominator_inv
    for b in range(M.dim):
        v = M.basis_vector(b)
        lhs = [x - y for x, y in zip(M.apply_E(M.apply_F(v)), M.apply_F(M.apply_E(v)))]
        k = M.weights[b]
        expect = (ctx.root_power(k) - ctx.root_power(-k)) * d
        rhs = [ctx.zero] * M.dim
        rhs[b] = expect
        if lhs != rhs:
            problems.append(f"[E,F] = (K - Kinv)/(q - qinv) fails on basis vector {b}")
            break
    return problems


def validate_matrices(ctx: CycloContext, E: Matrix, F: Matrix, K: Matrix, Kinv: Matrix | None = None) -> list[str]:
    """Relation check for arbitrary dense matrices (used on import)."""
    dim = E.nrows
    problems = []
    I = Matrix.identity(ctx, dim)
    if Kinv is None:
        try:
            Kinv = K.inverse()
        except ValueError:
            return ["K is invertible"]
    if K @ Kinv != I:
        problems.append("K Kinv = 1")
    P = I
    for _ in range(ctx.m):
        P = P @ K
    if P != I:
        problems.append("K^(n^2) = 1")
    En, Fn = I, I
    for _ in range(ctx.n):
        En, Fn = En @ E, Fn @ F
    if not En.is_zero():
        problems.append("E^n = 0")
    if not Fn.is_zero():
        problems.append("F^n = 0")
    q2 = ctx.q_power(2)
    if K @ E @ Kinv != E.scale(q2):
        problems.append("K E Kinv = q^2 E")
    if K @ F @ Kinv != F.scale(ctx.q_power(-2)):
        problems.append("K F Kinv = q^-2 F")
    if (E @ F) - (F @ E) != (K - Kinv).scale(ctx.bracket_denominator_inv):
        problems.append("[E,F] = (K - Kinv)/(q - qinv)")
    return problems


def block_index(M: Representation):
    """i with K^n = q^{n-i} on all of M, or "mixed"."""
    n = M.n
    blocks = {(-k) % n for k in M.weights}
    if len(blocks) == 1:
        return blocks.pop()
    if not blocks:
        return 0
    return "mixed"


def block_parts(M: Representation) -> dict[int, Representation]:
    """Split M into its block components (restriction to K^n-eigenspaces)."""
    ctx = M.ctx
    out = {}
    for i in sorted({(-k) % ctx.n for k in M.weights}):
        spans = {}
        for k, idx in M.weight_spaces.items():
            if (-k) % ctx.n == i:
                ech = Echelon(ctx, M.dim)
                for b in idx:
                    ech.add(M.basis_vector(b))
                spans[k] = ech
        out[i] = submodule(M, spans)[0]
    return out


# ---------------------------------------------------------------------------
# JSON


def _mat_json(mat: Matrix) -> list:
    return [[a.to_strings() for a in row] for row in mat.rows]


def to_json(M: Representation) -> dict:
    return {
        "n": M.n,
        "dim": M.dim,
        "label": None if M.label is None else _label_str(M.label),
        "E": _mat_json(M.matE),
        "F": _mat_json(M.matF),
        "K": _mat_json(M.matK),
    }


def _label_str(label) -> str:
    if isinstance(label, tuple):
        return " + ".join(_label_str(x) for x in label)
    return str(label)


def from_json(data: dict | str, check: bool = True) -> Representation:
    """Load a module, validate it, and bring K to diagonal form if needed."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        ctx = make_context(int(data["n"]))
        dim = int(data["dim"])
        mats = {}
        for key in ("E", "F", "K"):
            rows = data[key]
            if len(rows) != dim or any(len(r) != dim for r in rows):
                raise ModuleError(f"matrix {key} is not {dim}x{dim}")
            mats[key] = Matrix(ctx, dim, dim, [[ctx.from_strings(c) for c in r] for r in rows])
    except (KeyError, TypeError) as exc:
        raise ModuleError(f"malformed module JSON: {exc}") from exc
    if check:
        problems = validate_matrices(ctx, mats["E"], mats["F"], mats["K"])
        if problems:
            raise ModuleError("module violates relations: " + "; ".join(problems))
    label = None
    if data.get("label"):
        try:
            label = parse_label(data["label"], ctx.n)
        except ModuleError:
            label = None
    return from_matrices(ctx, mats["E"], mats["F"], mats["K"], label)


def from_matrices(ctx: CycloContext, E: Matrix, F: Matrix, K: Matrix, label=None) -> Representation:
    """Build a Representation from dense matrices, diagonalizing K if necessary."""
    dim = E.nrows
    diagonal = all(not K.rows[i][j] for i in range(dim) for j in range(dim) if i != j)
    if diagonal:
        weights = []
        for i in range(dim):
            lam = K.rows[i][i]
            k = next((e for e in range(ctx.m) if ctx.root_power(e) == lam), None)
            if k is None:
                raise ModuleError("K eigenvalue is not an n^2-th root of unity")
            weights.append(k)
        ecols = [[(i, E.rows[i][j]) for i in range(dim) if E.rows[i][j]] for j in range(dim)]
        fcols = [[(i, F.rows[i][j]) for i in range(dim) if F.rows[i][j]] for j in range(dim)]
        return Representation(ctx, weights, ecols, fcols, label)
    # eigenbasis of K: its eigenvalues are n^2-th roots of unity
    cols, weights = [], []
    for k in range(ctx.m):
        shifted = K.copy()
        lam = ctx.root_power(k)
        for i in range(dim):
            shifted.rows[i][i] = shifted.rows[i][i] - lam
        for v in shifted.nullspace():
            cols.append(v)
            weights.append(k)
    if len(cols) != dim:
        raise ModuleError("K is not diagonalizable over the field")
    P = Matrix.from_columns(ctx, dim, cols)
    Pinv = P.inverse()
    E2, F2 = Pinv @ E @ P, Pinv @ F @ P
    ecols = [[(i, E2.rows[i][j]) for i in range(dim) if E2.rows[i][j]] for j in range(dim)]
    fcols = [[(i, F2.rows[i][j]) for i in range(dim) if F2.rows[i][j]] for j in range(dim)]
    return Representation(ctx, weights, ecols, fcols, label)
