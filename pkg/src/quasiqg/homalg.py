"""Homomorphisms, isomorphism search and the structure of modules.

Because K is diagonal everywhere, a module map is a family of blocks, one
per weight space.  Hom spaces are found either from a presentation of the
source (image of each generator ranges over an explicit subspace) or by
solving the intertwining equations weight space by weight space.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .cyclo import CycloContext, CycloNum, make_context
from .linalg import Echelon, Matrix, matvec, sparse_nullspace
from .repcore import (
    Band,
    BlockSimple,
    CyclicSummand,
    IndecompLabel,
    ModuleError,
    Proj,
    Representation,
    Simple,
    Syzygy,
    apply_word,
    block_index,
    block_parts,
    block_simple_V,
    casimir_block,
    casimir_value,
    direct_sum,
    dual,
    generalized_eigenspace,
    label_dim,
    projective_P,
    quotient,
    simple_V,
    submodule,
)

__all__ = [
    "GradedMap", "HomSpace", "IsoResult", "ClaimUnverified",
    "hom_space", "find_isomorphism", "verify_claim", "construct",
    "socle", "radical", "top", "projective_cover", "injective_envelope",
    "syzygy", "peel_projectives", "decompose_semisimple", "identify",
    "cyclic_submodule", "admissible_vectors", "composition_factors",
    "simple_hom_table", "string_module", "claim_module",
]

DEFAULT_BOUND = 8
DEFAULT_BUDGET = 64


class ClaimUnverified(Exception):
    """A decomposition claim could not be certified; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# ---------------------------------------------------------------------------
# graded maps


class GradedMap:
    """A K-equivariant linear map, stored as one block per source weight."""

    def __init__(self, source: Representation, target: Representation, blocks: dict[int, Matrix]):
        self.source = source
        self.target = target
        self.blocks = blocks

    @property
    def ctx(self) -> CycloContext:
        return self.source.ctx

    def block(self, k: int) -> Matrix:
        k %= self.ctx.m
        b = self.blocks.get(k)
        if b is None:
            b = Matrix(self.ctx, self.target.weight_dim(k), self.source.weight_dim(k))
        return b

    @classmethod
    def from_columns(cls, source: Representation, target: Representation, columns) -> "GradedMap":
        """Build from images of the source basis vectors (global target vectors)."""
        ctx = source.ctx
        blocks = {}
        tpos = target.local_position
        for k, sidx in source.weight_spaces.items():
            tidx = target.weight_spaces.get(k, [])
            mat = Matrix(ctx, len(tidx), len(sidx))
            for c, b in enumerate(sidx):
                col = columns[b]
                for i, a in enumerate(col):
                    if a:
                        if target.weights[i] != k:
                            raise ModuleError("map does not preserve weights")
                        mat.rows[tpos[i]][c] = a
            blocks[k] = mat
        return cls(source, target, blocks)

    def matrix(self) -> Matrix:
        """Dense dim(target) x dim(source) matrix."""
        mat = Matrix(self.ctx, self.target.dim, self.source.dim)
        for k, blk in self.blocks.items():
            sidx = self.source.weight_spaces.get(k, [])
            tidx = self.target.weight_spaces.get(k, [])
            for i, row in enumerate(blk.rows):
                for j, a in enumerate(row):
                    if a:
                        mat.rows[tidx[i]][sidx[j]] = a
        return mat

    def apply(self, v) -> list[CycloNum]:
        ctx = self.ctx
        out = [ctx.zero] * self.target.dim
        for k, blk in self.blocks.items():
            sidx = self.source.weight_spaces.get(k, [])
            tidx = self.target.weight_spaces.get(k, [])
            local = [v[b] for b in sidx]
            if not any(local):
                continue
            for i, a in zip(tidx, matvec(blk, local)):
                out[i] = a
        return out

    @staticmethod
    def linear_combination(maps: Sequence["GradedMap"], coeffs) -> "GradedMap":
        first = maps[0]
        ctx = first.ctx
        blocks = {}
        for k in first.source.weight_spaces:
            acc = None
            for f, c in zip(maps, coeffs):
                if not c:
                    continue
                b = f.block(k).scale(ctx(c))
                acc = b if acc is None else acc + b
            if acc is None:
                acc = Matrix(ctx, first.target.weight_dim(k), first.source.weight_dim(k))
            blocks[k] = acc
        return GradedMap(first.source, first.target, blocks)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self o other."""
        blocks = {k: self.block(k) @ other.block(k) for k in other.source.weight_spaces}
        return GradedMap(other.source, self.target, blocks)

    def is_invertible(self) -> bool:
        if self.source.dim != self.target.dim:
            return False
        for k, idx in self.source.weight_spaces.items():
            if self.target.weight_dim(k) != len(idx):
                return False
            if self.block(k).rank() != len(idx):
                return False
        return True

    def inverse(self) -> "GradedMap":
        blocks = {k: self.block(k).inverse() for k in self.source.weight_spaces}
        return GradedMap(self.target, self.source, blocks)

    def transpose(self, source: Representation, target: Representation) -> "GradedMap":
        """The transposed map, between the given (dual) modules."""
        return GradedMap(source, target, {k: b.transpose() for k, b in self.blocks.items()})

    def rank(self) -> int:
        return sum(b.rank() for b in self.blocks.values())

    def is_intertwiner(self) -> bool:
        """Check T E = E T and T F = F T blockwise (K commutes by construction)."""
        M, N = self.source, self.target
        s = M.ctx.shift
        for k in M.weight_spaces:
            T = self.block(k)
            if self.block(k + s) @ M.e_block(k) != N.e_block(k) @ T:
                return False
            if self.block(k - s) @ M.f_block(k) != N.f_block(k) @ T:
                return False
        return True

    def image_spans(self) -> dict[int, Echelon]:
        out = {}
        tgt = self.target
        for k, blk in self.blocks.items():
            tidx = tgt.weight_spaces.get(k, [])
            ech = Echelon(self.ctx, tgt.dim)
            for col in blk.columns():
                if any(col):
                    v = [self.ctx.zero] * tgt.dim
                    for i, a in zip(tidx, col):
                        v[i] = a
                    ech.add(v)
            if len(ech):
                out[k] = ech
        return out

    def kernel_spans(self) -> dict[int, Echelon]:
        out = {}
        src = self.source
        for k, sidx in src.weight_spaces.items():
            ker = self.block(k).nullspace()
            if ker:
                ech = Echelon(self.ctx, src.dim)
                for v in ker:
                    g = [self.ctx.zero] * src.dim
                    for i, a in zip(sidx, v):
                        g[i] = a
                    ech.add(g)
                out[k] = ech
        return out


@dataclass
class HomSpace:
    source: Representation
    target: Representation
    basis: list[GradedMap]

    @property
    def dim(self) -> int:
        return len(self.basis)


# ---------------------------------------------------------------------------
# Hom spaces


def _local_to_global(M: Representation, k: int, v) -> list[CycloNum]:
    g = [M.ctx.zero] * M.dim
    for i, a in zip(M.weight_spaces.get(k, []), v):
        g[i] = a
    return g


def _chain_power(M: Representation, k: int, steps: int, up: bool) -> Matrix:
    """Matrix of E^steps (or F^steps) from weight space k."""
    ctx = M.ctx
    s = ctx.shift if up else -ctx.shift
    mat = Matrix.identity(ctx, M.weight_dim(k))
    cur = k
    for _ in range(steps):
        blk = M.e_block(cur) if up else M.f_block(cur)
        mat = blk @ mat
        cur = (cur + s) % ctx.m
    return mat


def admissible_vectors(summand: CyclicSummand, N: Representation) -> list[list[CycloNum]]:
    """Basis of possible generator images (global vectors of N) for homs from the summand."""
    ctx = N.ctx
    k = summand.weight % ctx.m
    d = N.weight_dim(k)
    if d == 0:
        return []
    if summand.kind == "lowest":
        rows = list(N.f_block(k).rows) + list(_chain_power(N, k, summand.param, True).rows)
        ker = Matrix(ctx, len(rows), d, rows).nullspace() if rows else Matrix.identity(ctx, d).rows
    elif summand.kind == "casimir":
        ker = generalized_eigenspace(casimir_block(N, k), casimir_value(ctx, summand.param))
    else:
        raise ModuleError(f"unknown presentation kind {summand.kind!r}")
    return [_local_to_global(N, k, v) for v in ker]


def _summand_columns(summand: CyclicSummand, N: Representation, u) -> list[list[CycloNum]]:
    return [apply_word(N, w, u) for w in summand.words]


def _map_from_images(M: Representation, N: Representation, images: dict[int, list]) -> GradedMap:
    """Map from a presented M given generator images (summand index -> vector)."""
    zero = [N.ctx.zero] * N.dim
    columns = [zero] * M.dim
    for si, summand in enumerate(M.presentation):
        u = images.get(si)
        if u is None:
            continue
        for b, col in enumerate(_summand_columns(summand, N, u)):
            columns[summand.offset + b] = col
    return GradedMap.from_columns(M, N, columns)


def hom_space(M: Representation, N: Representation) -> HomSpace:
    """A basis of Hom(M, N)."""
    if M.ctx is not N.ctx:
        raise ModuleError("context mismatch")
    if M.presentation is not None:
        basis = []
        for si, summand in enumerate(M.presentation):
            for u in admissible_vectors(summand, N):
                basis.append(_map_from_images(M, N, {si: u}))
        return HomSpace(M, N, basis)
    return HomSpace(M, N, _hom_by_equations(M, N))


def _hom_by_equations(M: Representation, N: Representation) -> list[GradedMap]:
    ctx = M.ctx
    m, s = ctx.m, ctx.shift
    var = {}
    nvars = 0
    for k, sidx in M.weight_spaces.items():
        dn = N.weight_dim(k)
        if dn:
            var[k] = nvars
            nvars += dn * len(sidx)
    if nvars == 0:
        return []

    def vid(k, i, j):
        return var[k] + i * M.weight_dim(k) + j

    equations = []
    for k in M.weight_spaces:
        dm = M.weight_dim(k)
        for sh, mblk, nblk in ((s, M.e_block, N.e_block), (-s, M.f_block, N.f_block)):
            k2 = (k + sh) % m
            A = mblk(k)            # M_k -> M_k2
            B = nblk(k)            # N_k -> N_k2
            dn2 = N.weight_dim(k2)
            dm2 = M.weight_dim(k2)
            dn = N.weight_dim(k)
            # (T_k2 A - B T_k)[i, j] = 0 for i in N_k2, j in M_k
            for i in range(dn2):
                for j in range(dm):
                    eq = {}
                    if k2 in var:
                        for p in range(dm2):
                            a = A.rows[p][j]
                            if a:
                                key = vid(k2, i, p)
                                eq[key] = eq.get(key, ctx.zero) + a
                    if k in var:
                        for p in range(dn):
                            b = B.rows[i][p]
                            if b:
                                key = vid(k, p, j)
                                eq[key] = eq.get(key, ctx.zero) - b
                    if eq:
                        equations.append(eq)
    sols = sparse_nullspace(ctx, equations, nvars)
    out = []
    for sol in sols:
        blocks = {}
        for k, sidx in M.weight_spaces.items():
            dm, dn = len(sidx), N.weight_dim(k)
            mat = Matrix(ctx, dn, dm)
            if k in var:
                for i in range(dn):
                    for j in range(dm):
                        mat.rows[i][j] = sol[vid(k, i, j)]
            blocks[k] = mat
        out.append(GradedMap(M, N, blocks))
    return out


# ---------------------------------------------------------------------------
# isomorphisms


@dataclass
class IsoResult:
    status: str  # "found" | "none" | "unverified"
    witness: GradedMap | None = None
    reason: str = ""
    hom_dim: int | None = None
    attempts: int = 0

    def __bool__(self) -> bool:
        return self.status == "found"


def _try_invertible(maps: list[GradedMap], coeff_iter) -> tuple[GradedMap | None, int]:
    tries = 0
    for coeffs in coeff_iter:
        tries += 1
        T = GradedMap.linear_combination(maps, coeffs)
        if T.is_invertible():
            return T, tries
    return None, tries


def find_isomorphism(M: Representation, N: Representation, seed: int = 0,
                     budget: int = DEFAULT_BUDGET, bound: int = DEFAULT_BOUND) -> IsoResult:
    """Search for an invertible intertwiner M -> N.

    Returns status "none" only when non-isomorphism is forced (different
    dimension or weight multiplicities, Hom = 0, or an exhaustive check at
    Hom dimension <= 2); "unverified" when the random budget runs out.
    """
    if M.ctx is not N.ctx:
        raise ModuleError("context mismatch")
    if M.dim != N.dim:
        return IsoResult("none", reason=f"dimension {M.dim} != {N.dim}")
    if sorted(M.weights) != sorted(N.weights):
        return IsoResult("none", reason="weight multiplicities differ")
    if M.dim == 0:
        return IsoResult("found", GradedMap(M, N, {}), hom_dim=1)
    backwards = M.presentation is None and N.presentation is not None
    H = hom_space(N, M) if backwards else hom_space(M, N)
    maps = H.basis
    h = len(maps)
    if h == 0:
        return IsoResult("none", reason="Hom space is zero", hom_dim=0)
    rng = random.Random(seed)
    if h == 1:
        coeff_iter = iter([[1]])
    elif h == 2:
        pts = [[1, 0]] + [[a, 1] for a in range(M.dim)]
        coeff_iter = iter(pts)
    else:
        def gen():
            yield [1] * h
            for _ in range(budget - 1):
                yield [rng.randint(-bound, bound) for _ in range(h)]
        coeff_iter = gen()
    T, tries = _try_invertible(maps, coeff_iter)
    if T is None:
        if h <= 2:
            return IsoResult("none", reason="no invertible map (exhaustive)", hom_dim=h, attempts=tries)
        return IsoResult("unverified", reason="retry budget exhausted", hom_dim=h, attempts=tries)
    if backwards:
        T = T.inverse()
    return IsoResult("found", T, hom_dim=h, attempts=tries)


# ---------------------------------------------------------------------------
# constructing labelled modules


def construct(label: IndecompLabel, n_or_ctx) -> Representation:
    """The module for a label (Band labels are symbolic only)."""
    ctx = n_or_ctx if isinstance(n_or_ctx, CycloContext) else make_context(int(n_or_ctx))
    if isinstance(label, Simple):
        return simple_V(ctx, label.l)
    if isinstance(label, BlockSimple):
        return block_simple_V(ctx, label.t, label.r)
    if isinstance(label, Proj):
        return projective_P(ctx, label.l)
    if isinstance(label, Syzygy):
        return string_module(ctx.n, label.sign, label.s, label.l)
    if isinstance(label, Band):
        raise ModuleError("band modules are symbolic only and cannot be constructed")
    raise TypeError(f"not a label: {label!r}")


@lru_cache(maxsize=None)
def string_module(n: int, sign: int, s: int, l: int) -> Representation:
    M = syzygy(simple_V(n, l), sign, s)
    return M.with_label(Syzygy(sign, s, l))


def claim_module(claim, ctx: CycloContext) -> Representation:
    labels = _expand_claim(claim)
    return direct_sum([construct(lab, ctx) for lab in labels], ctx)


def _expand_claim(claim) -> list:
    if isinstance(claim, Counter) or isinstance(claim, dict):
        out = []
        for lab in sorted(claim, key=_label_key):
            out.extend([lab] * claim[lab])
        return out
    return list(claim)


def _label_key(lab) -> tuple:
    order = {Simple: 0, Proj: 1, BlockSimple: 2, Syzygy: 3, Band: 4}
    return (order[type(lab)], str(lab))


def simple_labels(M: Representation) -> list:
    """All simple labels in the blocks that occur in M."""
    n = M.n
    blocks = {(-k) % n for k in M.weights}
    out = []
    if 0 in blocks:
        out.extend(Simple(l) for l in range(1, n + 1))
    for i in sorted(blocks - {0}):
        out.extend(BlockSimple(n - i, r) for r in range(n))
    return out


def simple_hom_table(M: Representation) -> dict[str, int]:
    """dim Hom(S, M) for every simple S in M's blocks."""
    return {str(S): hom_space(construct(S, M.ctx), M).dim for S in simple_labels(M)}


def verify_claim(M: Representation, claim, seed: int = 0, budget: int = DEFAULT_BUDGET) -> GradedMap:
    """Certify M ~ (direct sum of the claimed labels); returns the witness S -> M."""
    labels = _expand_claim(claim)
    if any(isinstance(lab, Band) for lab in labels):
        raise ClaimUnverified("claim contains band modules", {"claim": [str(x) for x in labels]})
    S = direct_sum([construct(lab, M.ctx) for lab in labels], M.ctx)
    diag = {"claim": [str(x) for x in labels], "dim_module": M.dim, "dim_claim": S.dim, "seed": seed}
    if S.dim != M.dim:
        raise ClaimUnverified("dimension mismatch", diag)
    res = find_isomorphism(S, M, seed=seed, budget=budget)
    if res.status == "found":
        if not res.witness.is_intertwiner():
            raise ClaimUnverified("witness failed the intertwining check", diag)
        return res.witness
    diag["reason"] = res.reason
    diag["hom_dim"] = res.hom_dim
    try:
        diag["hom_table_module"] = simple_hom_table(M)
        diag["hom_table_claim"] = simple_hom_table(S)
    except ModuleError:
        pass
    raise ClaimUnverified(f"claim not verified ({res.status}: {res.reason})", diag)


# ---------------------------------------------------------------------------
# socle, radical, top


def _simple_presentation(label, ctx) -> CyclicSummand:
    return construct(label, ctx).presentation[0]


def socle(M: Representation) -> tuple[Representation, dict[int, Echelon]]:
    """The socle as a submodule, with its per-weight spans."""
    ctx = M.ctx
    spans: dict[int, Echelon] = {}
    for S in simple_labels(M):
        summand = _simple_presentation(S, ctx)
        for u in admissible_vectors(summand, M):
            for w in summand.words:
                v = apply_word(M, w, u)
                if any(v):
                    k = next(M.weights[i] for i, a in enumerate(v) if a)
                    spans.setdefault(k, Echelon(ctx, M.dim)).add(v)
    return submodule(M, spans)[0], spans


def radical(M: Representation) -> dict[int, Echelon]:
    """rad(M) per weight: the orthogonal complement of the socle of the dual."""
    ctx = M.ctx
    _, dspans = socle(dual(M))
    out = {}
    for k, idx in M.weight_spaces.items():
        ech = dspans.get(k)
        rows = [[r[i] for i in idx] for r in ech.rows] if ech else []
        if rows:
            perp = Matrix(ctx, len(rows), len(idx), rows).nullspace()
        else:
            perp = Matrix.identity(ctx, len(idx)).rows
        if perp:
            e = Echelon(ctx, M.dim)
            for v in perp:
                e.add(_local_to_global(M, k, v))
            out[k] = e
    return out


def top(M: Representation) -> Representation:
    return quotient(M, radical(M))[0]


def radical_module(M: Representation) -> Representation:
    return submodule(M, radical(M))[0]


# ---------------------------------------------------------------------------
# covers and syzygies


def projective_cover(M: Representation) -> tuple[Representation, GradedMap]:
    """(P, pi) with P a sum of indecomposable projectives and pi: P -> M onto."""
    ctx = M.ctx
    n = ctx.n
    b = block_index(M)
    if M.dim == 0:
        P = direct_sum([], ctx)
        return P, GradedMap(P, M, {})
    if b == "mixed":
        raise ModuleError("projective_cover expects a module in a single block")
    if b != 0:
        ident = GradedMap(M, M, {k: Matrix.identity(ctx, len(idx)) for k, idx in M.weight_spaces.items()})
        return M, ident
    rad = radical(M)
    pieces, images = [], []
    for l in range(1, n + 1):
        P = projective_P(ctx, l)
        summand = P.presentation[0]
        k = summand.weight
        ech = Echelon(ctx, M.dim)
        if k in rad:
            for row in rad[k].rows:
                ech.add(row)
        for u in admissible_vectors(summand, M):
            if ech.add(u):
                pieces.append(P)
                images.append(u)
    cover = direct_sum(pieces, ctx)
    pi = _map_from_images(cover, M, dict(enumerate(images)))
    for k, idx in M.weight_spaces.items():
        if pi.block(k).rank() != len(idx):
            raise ModuleError("projective cover map is not onto")
    return cover, pi


def injective_envelope(M: Representation) -> tuple[Representation, GradedMap]:
    """(I, iota) with iota: M -> I injective, via the cover of the dual."""
    DM = dual(M)
    P, pi = projective_cover(DM)
    I = dual(P)
    iota = pi.transpose(M, I)
    return I, iota


def syzygy(M: Representation, sign: int, s: int) -> Representation:
    """Omega^{sign s} M by iterated kernels (sign +1) or cokernels (sign -1)."""
    if sign not in (1, -1) or s < 0:
        raise ValueError("sign must be +1 or -1 and s >= 0")
    cur = M
    for _ in range(s):
        if sign > 0:
            P, pi = projective_cover(cur)
            cur = submodule(P, pi.kernel_spans())[0]
        else:
            I, iota = injective_envelope(cur)
            cur = quotient(I, iota.image_spans())[0]
    return cur


def cyclic_submodule(M: Representation, v) -> Representation:
    """The submodule generated by v (split into weight components first)."""
    ctx = M.ctx
    spans: dict[int, Echelon] = {}
    queue = []
    comps: dict[int, list] = {}
    for i, a in enumerate(v):
        if a:
            comps.setdefault(M.weights[i], [ctx.zero] * M.dim)[i] = a
    queue.extend(comps.values())
    while queue:
        u = queue.pop()
        k = next(M.weights[i] for i, a in enumerate(u) if a)
        ech = spans.setdefault(k, Echelon(ctx, M.dim))
        if ech.add(u):
            for w in (M.apply_E(u), M.apply_F(u)):
                if any(w):
                    queue.append(w)
    return submodule(M, spans)[0]


# ---------------------------------------------------------------------------
# decomposition


def decompose_semisimple(M: Representation) -> Counter:
    """Multiplicities of V(t, r) in a module from a semisimple block."""
    ctx = M.ctx
    n = ctx.n
    b = block_index(M)
    if M.dim == 0:
        return Counter()
    if b == 0 or b == "mixed":
        raise ModuleError("decompose_semisimple needs a module in one block i >= 1")
    t = n - b
    inv2 = pow(2, -1, n)
    out = Counter()
    for k, idx in M.weight_spaces.items():
        mult = len(M.f_block(k).nullspace())
        if mult:
            r = (((k - t) // n) * inv2) % n
            out[BlockSimple(t, r)] += mult
    if sum(out.values()) * n != M.dim:
        raise ModuleError("multiplicities do not reconcile with the dimension")
    return out


def composition_factors(M: Representation) -> Counter:
    """Composition multiplicities of a block-0 module from its weight data.

    The factor V_l is counted by the generalized Casimir eigenspace at the
    weight q^{1-l} (which meets only V_l among the simples).
    """
    ctx = M.ctx
    n = ctx.n
    out = Counter()
    for l in range(1, n + 1):
        k = (n * (1 - l)) % ctx.m
        if M.weight_dim(k) == 0:
            continue
        mult = len(generalized_eigenspace(casimir_block(M, k), casimir_value(ctx, l)))
        # V_l and V_{n-l} share a Casimir value but only V_l has weight q^{1-l}
        if mult:
            out[Simple(l)] = mult
    return out


def peel_projectives(M: Representation) -> tuple[Counter, Representation]:
    """Split off projective summands of a block-0 module.

    P_l embeds as a summand exactly when some generator image maps the
    socle of P_l to a nonzero vector (an injective submodule splits off);
    the quotient by that copy is the complement.  Labels Proj(l) and
    Simple(n) are returned with the remaining stable part.
    """
    ctx = M.ctx
    n = ctx.n
    parts: Counter = Counter()
    cur = M
    progress = True
    while progress and cur.dim:
        progress = False
        for l in range(n, 0, -1):
            P = projective_P(ctx, l)
            summand = P.presentation[0]
            soc_coords = _projective_socle_coords(n, l)
            for u in admissible_vectors(summand, cur):
                img = [ctx.zero] * cur.dim
                for w, c in zip(summand.words, soc_coords):
                    if c:
                        img = [a + c * b for a, b in zip(img, apply_word(cur, w, u))]
                if any(img):
                    iota = _map_from_images(P, cur, {0: u})
                    cur = quotient(cur, iota.image_spans())[0]
                    parts[Simple(n) if l == n else Proj(l)] += 1
                    progress = True
                    break
            if progress:
                break
    return parts, cur


@lru_cache(maxsize=None)
def _projective_socle_coords(n: int, l: int) -> tuple:
    """Coordinates (in the word basis) of a vector spanning soc(P_l)."""
    ctx = make_context(n)
    P = projective_P(ctx, l)
    if l == n:
        c = [ctx.zero] * P.dim
        c[0] = ctx.one
        return tuple(c)
    _, spans = socle(P)
    vecs = [row for ech in spans.values() for row in ech.rows]
    if len(vecs) != l:
        raise ModuleError(f"socle of P_{l} has dimension {len(vecs)}")
    # the lowest-weight vector of soc(P_l) ~ V_l sits at weight q^{1-l}
    k = (n * (1 - l)) % ctx.m
    (v,) = spans[k].rows
    return tuple(v)


def _stable_candidates(X: Representation) -> list:
    n = X.n
    out = []
    for sign in (1, -1):
        for l in range(1, n):
            s = 1
            while True:
                d = s * n + (n - l if s % 2 else l)
                if d > X.dim:
                    break
                if d == X.dim:
                    out.append(Syzygy(sign, s, l))
                s += 1
    return out


def identify(M: Representation, seed: int = 0) -> Counter:
    """Decompose M into labelled indecomposables with certified pieces.

    Semisimple blocks use weight data; block 0 peels projectives, then the
    stable part is matched against simples or a constructed string module.
    Raises ClaimUnverified when the stable part is not recognized.
    """
    out: Counter = Counter()
    for i, part in block_parts(M).items():
        if i != 0:
            out.update(decompose_semisimple(part))
            continue
        proj, X = peel_projectives(part)
        out.update(proj)
        if X.dim == 0:
            continue
        soc, _ = socle(X)
        if soc.dim == X.dim:
            for l in range(1, X.n):
                h = hom_space(simple_V(X.ctx, l), X).dim
                if h:
                    out[Simple(l)] += h
            continue
        for cand in _stable_candidates(X):
            res = find_isomorphism(construct(cand, X.ctx), X, seed=seed)
            if res:
                out[cand] += 1
                break
        else:
            raise ClaimUnverified("stable part not identified",
                                  {"dim": X.dim, "hom_table": simple_hom_table(X)})
    return out
