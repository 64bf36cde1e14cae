"""Check-suite runner: parameter sweeps with structured pass/fail records.

Every check is identified by a stable id, carries a short statement string
(its anchor) and reports one of ``pass``, ``fail`` or ``unverified``.
A failing check always stores a counterexample in its record.  Reports are
line-delimited JSON followed by one summary record; with timings disabled
two runs of the same configuration produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
import traceback
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from . import greenring as gr
from . import hmodel as hm
from . import homalg as ha
from . import repcore as rc
from . import rules
from .cyclo import make_context
from .linalg import Matrix

SUITES = ("algebra", "modules", "tensor", "green", "stable")
DEFAULT_SEED = 0xC0FFEE
FAULTS = ("corrupt-simple", "corrupt-block-simple", "corrupt-proj", "corrupt-tensor")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    n: int = 3
    seed: int = DEFAULT_SEED
    s_max: int = 4
    suites: tuple = ("all",)
    samples: int = 20
    tensor_samples: int = 60
    green_samples: int = 100
    crosscheck_samples: int = 30
    associator_samples: int = 20
    output: str | None = None
    threads: int = 1
    fault: str | None = None
    timings: bool = False

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n <= 2 or self.n % 2 == 0:
            raise ConfigError(f"n must be an odd integer > 2, got {self.n!r}")
        if self.s_max < 1:
            raise ConfigError("s_max must be at least 1")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        unknown = set(self.suites) - set(SUITES) - {"all"}
        if unknown:
            raise ConfigError(f"unknown suites {sorted(unknown)}")
        if self.fault is not None and self.fault not in FAULTS:
            raise ConfigError(f"unknown fault {self.fault!r}; choose from {FAULTS}")

    @property
    def exhaustive(self) -> bool:
        return self.n == 3

    def selected(self) -> list[str]:
        if "all" in self.suites:
            return list(SUITES)
        return [s for s in SUITES if s in self.suites]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    anchor: str
    params: tuple = ()

    @property
    def id(self) -> str:
        inner = ",".join(str(p) for p in self.params)
        return f"{self.suite}.{self.name}[{inner}]" if self.params else f"{self.suite}.{self.name}"


@dataclass
class Outcome:
    status: str
    detail: dict = field(default_factory=dict)
    witness: str | None = None
    counterexample: object = None


# ---------------------------------------------------------------------------
# helpers


def check_seed(global_seed: int, check_id: str) -> int:
    digest = hashlib.sha256(f"{global_seed}:{check_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def witness_digest(T: ha.GradedMap) -> str:
    """Short hash of the nonzero entries of a witness map."""
    h = hashlib.sha256()
    h.update(f"{T.source.dim}x{T.target.dim}".encode())
    for k in sorted(T.blocks):
        for i, j, a in T.blocks[k].nonzero_entries():
            h.update(f"{k}:{i}:{j}:{','.join(a.to_strings())};".encode())
    return h.hexdigest()[:16]


def _passed(cond: bool, detail: dict | None = None, counterexample=None, witness=None) -> Outcome:
    if cond:
        return Outcome("pass", detail or {}, witness)
    return Outcome("fail", detail or {}, witness,
                   counterexample if counterexample is not None else detail or "condition failed")


def _corrupt(M: rc.Representation) -> rc.Representation:
    """Perturb one entry (or one weight for the trivial module)."""
    for j, col in enumerate(M.ecols):
        if col:
            ecols = [list(c) for c in M.ecols]
            i, a = ecols[j][0]
            ecols[j][0] = (i, a + 1)
            return rc.Representation(M.ctx, M.weights, ecols, M.fcols, M.label)
    weights = list(M.weights)
    weights[0] = (weights[0] + M.ctx.shift) % M.ctx.m
    return rc.Representation(M.ctx, weights, M.ecols, M.fcols, M.label)


def _module(cfg: SuiteConfig, kind: str, *params) -> rc.Representation:
    ctx = make_context(cfg.n)
    if kind == "simple":
        M = rc.simple_V(ctx, *params)
    elif kind == "block-simple":
        M = rc.block_simple_V(ctx, *params)
    elif kind == "proj":
        M = rc.projective_P(ctx, *params)
    else:
        raise ValueError(kind)
    if cfg.fault == f"corrupt-{kind}":
        M = _corrupt(M)
    return M


def _claim_outcome(M: rc.Representation, claim, seed: int, extra: dict | None = None) -> Outcome:
    detail = {"claim": _counter_str(claim), "dim": M.dim}
    detail.update(extra or {})
    problems = rc.validate(M)
    if problems:
        return Outcome("fail", detail, counterexample={"violated": problems})
    try:
        W = ha.verify_claim(M, claim, seed=seed)
    except ha.ClaimUnverified as exc:
        msg = str(exc)
        # "none" means non-isomorphism was forced, so the claim is wrong
        status = "fail" if msg.startswith("dimension") or "(none:" in msg else "unverified"
        return Outcome(status, detail, counterexample={"message": str(exc), **_jsonable(exc.diagnostics)})
    return Outcome("pass", detail, witness_digest(W))


def _counter_str(claim) -> dict:
    return {str(k): v for k, v in sorted(Counter(claim).items(), key=lambda kv: str(kv[0]))}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)


def _sample(items: list, k: int, seed: int) -> list:
    if len(items) <= k:
        return list(items)
    rng = random.Random(seed)
    idx = sorted(rng.sample(range(len(items)), k))
    return [items[i] for i in idx]


# ---------------------------------------------------------------------------
# algebra checks

_CHECKS: dict[str, Callable[[SuiteConfig, tuple, int], Outcome]] = {}


def _register(suite: str, name: str):
    def deco(fn):
        _CHECKS[f"{suite}.{name}"] = fn
        return fn
    return deco


def _pbw_monomials(ctx):
    n, m = ctx.n, ctx.m
    return [hm.AlgebraElem(ctx, {(a, b, c): ctx.one}) for a in range(n) for b in range(n) for c in range(m)]


@_register("algebra", "pbw_dimension")
def _alg_pbw(cfg, params, seed):
    ctx = make_context(cfg.n)
    monos = _pbw_monomials(ctx)
    total = hm.pbw_rank(ctx, monos)
    blocks = [hm.pbw_rank(ctx, (hm.multiply(x, hm.block_idempotent(ctx, i)) for x in monos))
              for i in range(ctx.n)]
    ok = total == ctx.n ** 4 and all(b == ctx.n ** 3 for b in blocks)
    return _passed(ok, {"rank": total, "block_ranks": blocks, "expected": [ctx.n ** 4, ctx.n ** 3]})


@_register("algebra", "idempotents")
def _alg_idem(cfg, params, seed):
    ctx = make_context(cfg.n)
    n = ctx.n
    es = [hm.block_idempotent(ctx, i) for i in range(n)]
    one = hm.AlgebraElem.scalar(ctx, 1)
    bad = []
    total = hm.AlgebraElem(ctx)
    for e in es:
        total = total + e
    if total != one:
        bad.append("sum != 1")
    for i in range(n):
        for j in range(n):
            prod = hm.multiply(es[i], es[j])
            if prod != (es[i] if i == j else hm.AlgebraElem(ctx)):
                bad.append(f"e{i} e{j}")
        for g, name in ((hm.generator_E(ctx), "E"), (hm.generator_F(ctx), "F"), (hm.generator_K(ctx), "K")):
            if hm.multiply(es[i], g) != hm.multiply(g, es[i]):
                bad.append(f"e{i} not central ({name})")
    return _passed(not bad, {"n": n}, bad)


@_register("algebra", "block_relations")
def _alg_block(cfg, params, seed):
    (i,) = params
    ctx = make_context(cfg.n)
    n = ctx.n
    e = hm.block_idempotent(ctx, i)
    E = hm.multiply(hm.generator_E(ctx), e)
    F = hm.multiply(hm.generator_F(ctx), e)
    K = hm.multiply(hm.generator_K(ctx), e)
    Kinv = hm.multiply(hm.k_power(ctx, -1), e)
    bad = []
    if hm.multiply(hm.multiply(K, E), Kinv) != E.scale(ctx.q_power(2)):
        bad.append("K E Kinv = q^2 E")
    if hm.multiply(hm.multiply(K, F), Kinv) != F.scale(ctx.q_power(-2)):
        bad.append("K F Kinv = q^-2 F")
    if K ** n != e.scale(ctx.q_power(n - i)):
        bad.append("K^n = q^(n-i) e")
    if not (E ** n).is_zero() or not (F ** n).is_zero():
        bad.append("E^n = F^n = 0")
    if hm.multiply(K, Kinv) != e:
        bad.append("K Kinv = e")
    return _passed(not bad, {"block": i}, bad)


@_register("algebra", "commutation")
def _alg_comm(cfg, params, seed):
    (r,) = params
    res = hm.commutation_residue(make_context(cfg.n), r)
    return _passed(res.is_zero(), {"r": r}, {"residue_terms": len(res.terms)})


@_register("algebra", "sub_idempotents")
def _alg_sub(cfg, params, seed):
    (i,) = params
    ctx = make_context(cfg.n)
    n = ctx.n
    Ts = [hm.sub_idempotent(ctx, i, j) for j in range(1, n + 1)]
    bad = []
    total = hm.AlgebraElem(ctx)
    for T in Ts:
        total = total + T
    if total != hm.block_idempotent(ctx, i):
        bad.append("sum_j T_j != e_i")
    K = hm.generator_K(ctx)
    for j, T in enumerate(Ts, start=1):
        if hm.multiply(K, T) != T.scale(ctx.root_power((1 - j) * n - i)):
            bad.append(f"K T_{j} eigenvalue")
        for j2, T2 in enumerate(Ts, start=1):
            prod = hm.multiply(T, T2)
            if prod != (T if j == j2 else hm.AlgebraElem(ctx)):
                bad.append(f"T_{j} T_{j2}")
    return _passed(not bad, {"i": i}, bad)


@_register("algebra", "a_element")
def _alg_a(cfg, params, seed):
    i, j, k = params
    ctx = make_context(cfg.n)
    A = hm.a_element(ctx, i, j, k)
    T = hm.sub_idempotent(ctx, i, j)
    bad = []
    if not hm.multiply(hm.generator_F(ctx), hm.multiply(A, T)).is_zero():
        bad.append("F A T = 0")
    K = hm.generator_K(ctx)
    if hm.multiply(K, A) != hm.multiply(A, K).scale(ctx.q_power(2 * k)):
        bad.append("K A = q^2k A K")
    for s in range(1, k):
        if hm.a_coefficient(ctx, i, j, k, s) != hm.a_coefficient_sum(ctx, i, j, k, s):
            bad.append(f"a_{k}{s} closed form")
    return _passed(not bad, {"i": i, "j": j, "k": k}, bad)


@_register("algebra", "casimir_central")
def _alg_casimir(cfg, params, seed):
    ctx = make_context(cfg.n)
    C = hm.casimir(ctx)
    bad = [name for g, name in ((hm.generator_E(ctx), "E"), (hm.generator_F(ctx), "F"), (hm.generator_K(ctx), "K"))
           if hm.multiply(C, g) != hm.multiply(g, C)]
    return _passed(not bad, {}, bad)


@_register("algebra", "associativity")
def _alg_assoc(cfg, params, seed):
    ctx = make_context(cfg.n)
    rng = random.Random(seed)
    bad = 0
    for _ in range(cfg.samples):
        a, b, c = (hm.random_element(ctx, rng) for _ in range(3))
        if hm.multiply(hm.multiply(a, b), c) != hm.multiply(a, hm.multiply(b, c)):
            bad += 1
    return _passed(bad == 0, {"triples": cfg.samples}, {"failures": bad})


@_register("algebra", "weight_projection")
def _alg_proj(cfg, params, seed):
    """1_s acts on a weight-k vector by (1/m) sum_r zeta^{(s+k) r}: 1 iff s = -k."""
    ctx = make_context(cfg.n)
    m = ctx.m
    bad = []
    for k in range(0, m, max(1, m // 9)):
        for s in range(m):
            val = ctx.zero
            for r in range(m):
                val = val + ctx.root_power((s + k) * r)
            val = val * Fraction(1, m)
            expect = 1 if (s + k) % m == 0 else 0
            if val != expect:
                bad.append((k, s))
    return _passed(not bad, {}, bad)


@_register("algebra", "cocycle")
def _alg_cocycle(cfg, params, seed):
    ctx = make_context(cfg.n)
    samples = None if cfg.exhaustive else 1000
    fails = hm.cocycle_check(ctx, samples=samples, seed=seed)
    return _passed(not fails, {"mode": "exhaustive" if samples is None else f"sampled {samples}"}, fails[:10])


# ---------------------------------------------------------------------------
# module checks


@_register("modules", "simple")
def _mod_simple(cfg, params, seed):
    (l,) = params
    M = _module(cfg, "simple", l)
    ctx = M.ctx
    bad = list(rc.validate(M))
    if M.dim != l:
        bad.append("dimension")
    if rc.block_index(M) != 0:
        bad.append("block index")
    if l == 2 and M.matF.rows[0][1] != 1:
        bad.append("F m2 = m1")
    if l == 1 and not (M.matE.is_zero() and M.matF.is_zero() and M.matK == Matrix.identity(ctx, 1)):
        bad.append("trivial action")
    return _passed(not bad, {"l": l}, bad)


@_register("modules", "block_simple")
def _mod_block(cfg, params, seed):
    t, r = params
    M = _module(cfg, "block-simple", t, r)
    ctx = M.ctx
    n = ctx.n
    bad = list(rc.validate(M))
    if len(M.matF.nullspace()) != 1:
        bad.append("dim ker F != 1")
    if rc.block_index(M) != n - t:
        bad.append("block index")
    spectrum = sorted(M.weights)
    expect = sorted((t + 2 * n * (r + i)) % ctx.m for i in range(n))
    if spectrum != expect:
        bad.append("K spectrum")
    if any(rc.gamma(ctx, t, r, j).is_zero() for j in range(1, n)):
        bad.append("gamma vanishes")
    return _passed(not bad, {"t": t, "r": r}, bad)


@_register("modules", "simple_homs")
def _mod_homs(cfg, params, seed):
    """dim Hom between block simples and between the V_l."""
    t, r = params
    ctx = make_context(cfg.n)
    n = ctx.n
    A = rc.block_simple_V(ctx, t, r)
    bad = []
    for t2 in range(1, n):
        for r2 in range(n):
            h = ha.hom_space(A, rc.block_simple_V(ctx, t2, r2)).dim
            if h != (1 if (t2, r2) == (t, r % n) else 0):
                bad.append(("V", t2, r2, h))
    res = ha.find_isomorphism(A, rc.block_simple_V(ctx, t, r + n), seed=seed)
    if not res:
        bad.append("V(t,r) vs V(t,r+n)")
    return _passed(not bad, {"t": t, "r": r}, bad, witness_digest(res.witness) if res else None)


@_register("modules", "simple_V_homs")
def _mod_vhoms(cfg, params, seed):
    ctx = make_context(cfg.n)
    n = ctx.n
    bad = []
    for l in range(1, n + 1):
        for l2 in range(1, n + 1):
            h = ha.hom_space(rc.simple_V(ctx, l), rc.simple_V(ctx, l2)).dim
            if h != (l == l2):
                bad.append((l, l2, h))
    res = ha.find_isomorphism(rc.simple_V(ctx, 2), rc.direct_sum([rc.simple_V(ctx, 1)] * 2, ctx))
    if res.status != "none":
        bad.append(("V2 vs 2V1", res.status))
    return _passed(not bad, {}, bad)


@_register("modules", "regular")
def _mod_regular(cfg, params, seed):
    i, j = params
    ctx = make_context(cfg.n)
    n = ctx.n
    M = rc.regular_submodule(ctx, i, j)
    claim = Counter({rc.BlockSimple(n - i, r): 1 for r in range(n)})
    extra = {}
    if ha.decompose_semisimple(M) != claim:
        return Outcome("fail", {"i": i, "j": j}, counterexample=_counter_str(ha.decompose_semisimple(M)))
    return _claim_outcome(M, claim, seed, {"i": i, "j": j, **extra})


@_register("modules", "a_generated")
def _mod_agen(cfg, params, seed):
    i, j, k = params
    ctx = make_context(cfg.n)
    n = ctx.n
    x = hm.multiply(hm.a_element(ctx, i, j, k), hm.sub_idempotent(ctx, i, j))
    v = rc.algebra_coordinates(ctx, i, j, x)
    M = rc.regular_submodule(ctx, i, j)
    S = ha.cyclic_submodule(M, v)
    num = n + 2 * k - j
    r = num // 2 if num % 2 == 0 else (2 * k - j) // 2
    return _claim_outcome(S, Counter({rc.BlockSimple(n - i, r % n): 1}), seed, {"i": i, "j": j, "k": k})


@_register("modules", "projective")
def _mod_proj(cfg, params, seed):
    (l,) = params
    P = _module(cfg, "proj", l)
    ctx = P.ctx
    n = ctx.n
    bad = list(rc.validate(P))
    if bad:
        return Outcome("fail", {"l": l}, counterexample={"violated": bad})
    if P.dim != 2 * n:
        bad.append("dim P_l != 2n")
    soc, _ = ha.socle(P)
    if not ha.find_isomorphism(soc, rc.simple_V(ctx, l), seed=seed):
        bad.append("socle")
    if not ha.find_isomorphism(ha.top(P), rc.simple_V(ctx, l), seed=seed):
        bad.append("top")
    cf = ha.composition_factors(P)
    if cf != Counter({rc.Simple(l): 2, rc.Simple(n - l): 2}):
        bad.append(("composition factors", _counter_str(cf)))
    cover, pi = ha.projective_cover(rc.simple_V(ctx, l))
    res = ha.find_isomorphism(cover, P, seed=seed)
    if not res:
        bad.append("projective cover of V_l")
    if any(ha.radical(rc.simple_V(ctx, l)).values()):
        bad.append("radical of simple")
    return _passed(not bad, {"l": l}, bad, witness_digest(res.witness) if res else None)


@_register("modules", "projective_Vn")
def _mod_vn(cfg, params, seed):
    ctx = make_context(cfg.n)
    Vn = rc.simple_V(ctx, ctx.n)
    cover, _ = ha.projective_cover(Vn)
    B = rc.block_simple_V(ctx, 1, 0)
    cover_b, _ = ha.projective_cover(B)
    ok = cover.dim == ctx.n and cover_b.dim == ctx.n and bool(ha.find_isomorphism(cover, Vn))
    return _passed(ok, {"dims": [cover.dim, cover_b.dim]})


def _unit_pool(ctx):
    n = ctx.n
    return [rc.simple_V(ctx, 2), rc.simple_V(ctx, n), rc.block_simple_V(ctx, 1, 0), rc.projective_P(ctx, 1),
            ha.string_module(n, 1, 1, 1)]


@_register("modules", "unit")
def _mod_unit(cfg, params, seed):
    (idx,) = params
    ctx = make_context(cfg.n)
    M = _unit_pool(ctx)[idx]
    V1 = rc.simple_V(ctx, 1)
    left = ha.find_isomorphism(rc.tensor(V1, M), M, seed=seed)
    right = ha.find_isomorphism(rc.tensor(M, V1), M, seed=seed)
    return _passed(bool(left) and bool(right), {"module": str(M.label)},
                   {"left": left.status, "right": right.status},
                   witness_digest(left.witness) if left else None)


@_register("modules", "syzygy")
def _mod_syz(cfg, params, seed):
    sign, s, l = params
    n = cfg.n
    M = ha.string_module(n, sign, s, l)
    expect = s * n + (n - l if s % 2 else l)
    bad = list(rc.validate(M))
    if M.dim != expect:
        bad.append(("dim", M.dim, expect))
    detail = {"sign": sign, "s": s, "l": l, "dim": M.dim}
    witness = None
    if s == 1:
        back = ha.syzygy(M, -sign, 1)
        res = ha.find_isomorphism(back, rc.simple_V(make_context(n), l), seed=seed)
        if not res:
            bad.append(("inverse syzygy", res.status))
        else:
            witness = witness_digest(res.witness)
    return _passed(not bad, detail, bad, witness)


@_register("modules", "associator")
def _mod_assoc(cfg, params, seed):
    (idx,) = params
    ctx = make_context(cfg.n)
    n = ctx.n
    pool = [rc.simple_V(ctx, 2), rc.simple_V(ctx, n), rc.block_simple_V(ctx, 1, 0),
            rc.block_simple_V(ctx, n - 1, 1), rc.projective_P(ctx, 1), rc.simple_V(ctx, 1)]
    rng = random.Random(seed)
    M, N, P = (rng.choice(pool) for _ in range(3))
    A = rc.tensor(rc.tensor(M, N), P)
    B = rc.tensor(M, rc.tensor(N, P))
    d = rc.associator_scalars(M, N, P)
    blocks = {}
    for k, idxs in A.weight_spaces.items():
        D = Matrix(ctx, len(idxs), len(idxs))
        for a, b in enumerate(idxs):
            D.rows[a][a] = d[b]
        blocks[k] = D
    Phi = ha.GradedMap(A, B, blocks)
    ok = A.weights == B.weights and Phi.is_intertwiner() and Phi.is_invertible()
    labels = [str(X.label) for X in (M, N, P)]
    return _passed(ok, {"triple": labels}, {"triple": labels}, witness_digest(Phi) if ok else None)


@_register("modules", "negative_control")
def _mod_negative(cfg, params, seed):
    ctx = make_context(cfg.n)
    M = _corrupt(rc.simple_V(ctx, 3))
    problems = rc.validate(M)
    return _passed(bool(problems), {"reported": problems})


@_register("modules", "json_roundtrip")
def _mod_json(cfg, params, seed):
    ctx = make_context(cfg.n)
    M = rc.tensor(rc.simple_V(ctx, 2), rc.block_simple_V(ctx, 1, 0))
    back = rc.from_json(json.loads(json.dumps(rc.to_json(M))))
    ok = back.matE == M.matE and back.matF == M.matF and back.matK == M.matK
    return _passed(ok, {"dim": M.dim})


# ---------------------------------------------------------------------------
# tensor corpus


def tensor_instances(cfg: SuiteConfig) -> list[tuple]:
    n = cfg.n
    out: list[tuple] = []
    for t in range(1, n):
        for r in range(n):
            out.append(("v2", t, r))
            for l in range(1, n + 1):
                out.append(("simple", l, t, r, "left"))
                out.append(("simple", l, t, r, "right"))
            for l in range(1, n):
                out.append(("proj", l, t, r))
            for s in range(1, cfg.s_max + 1):
                for sign in (1, -1):
                    for l in range(1, n):
                        out.append(("string", sign, s, l, t, r, "left"))
                        out.append(("string", sign, s, l, t, r, "right"))
            for t2 in range(1, n):
                for r2 in range(n):
                    out.append(("block", t, r, t2, r2))
    return out


def _tensor_selection(cfg: SuiteConfig) -> list[tuple]:
    insts = tensor_instances(cfg)
    if cfg.exhaustive:
        return insts
    # stratify so every family and both regimes of t + t' = n appear
    fam: dict[str, list] = {}
    for inst in insts:
        key = inst[0]
        if key == "block":
            _, t, r, t2, r2 = inst
            if t + t2 != cfg.n:
                key = "block-lt" if t + t2 < cfg.n else "block-gt"
            else:
                key = "block-low-u" if (r + r2) % cfg.n <= (cfg.n - 1) // 2 else "block-high-u"
        if key == "string":
            key = f"string-{inst[2] % 2}-{inst[3] % 2}"
        fam.setdefault(key, []).append(inst)
    per = max(1, cfg.tensor_samples // len(fam))
    chosen = []
    for key in sorted(fam):
        chosen += _sample(fam[key], per, check_seed(cfg.seed, f"tensor-family:{key}"))
    return chosen


@_register("tensor", "instance")
def _tensor_instance(cfg, params, seed):
    ctx = make_context(cfg.n)
    n = ctx.n
    kind = params[0]
    if kind == "v2":
        _, t, r = params
        M = rc.tensor(rc.simple_V(ctx, 2), rc.block_simple_V(ctx, t, r))
        claim = rules.v2_block(n, t, r)
    elif kind == "simple":
        _, l, t, r, side = params
        A, B = rc.simple_V(ctx, l), rc.block_simple_V(ctx, t, r)
        M = rc.tensor(A, B) if side == "left" else rc.tensor(B, A)
        claim = rules.simple_block(n, l, t, r)
    elif kind == "proj":
        _, l, t, r = params
        M = rc.tensor(rc.projective_P(ctx, l), rc.block_simple_V(ctx, t, r))
        claim = rules.proj_block(n, l, t, r)
    elif kind == "string":
        _, sign, s, l, t, r, side = params
        A, B = ha.string_module(n, sign, s, l), rc.block_simple_V(ctx, t, r)
        M = rc.tensor(A, B) if side == "left" else rc.tensor(B, A)
        claim = rules.string_block(n, s, l, t, r)
    elif kind == "block":
        _, t, r, t2, r2 = params
        M = rc.tensor(rc.block_simple_V(ctx, t, r), rc.block_simple_V(ctx, t2, r2))
        claim = rules.block_block(n, t, r, t2, r2)
    else:
        raise ValueError(kind)
    if cfg.fault == "corrupt-tensor":
        M = _corrupt(M)
    return _claim_outcome(M, claim, seed)


@_register("tensor", "krull_schmidt")
def _tensor_ks(cfg, params, seed):
    ctx = make_context(cfg.n)
    n = ctx.n
    A = rc.tensor(rc.simple_V(ctx, 2), rc.block_simple_V(ctx, 1, 0))
    B = rc.regular_submodule(ctx, n - 1, 1)
    lhs = ha.decompose_semisimple(rc.direct_sum([A, B], ctx))
    rhs = ha.decompose_semisimple(A) + ha.decompose_semisimple(B)
    return _passed(lhs == rhs, {"sum": _counter_str(lhs)}, {"lhs": _counter_str(lhs), "rhs": _counter_str(rhs)})


@_register("tensor", "projective_reduction")
def _tensor_projred(cfg, params, seed):
    """M (x) V(t,r) matches the sum over composition factors of M."""
    sign, s, l = params
    ctx = make_context(cfg.n)
    M = ha.string_module(cfg.n, sign, s, l)
    B = rc.block_simple_V(ctx, 1, 0)
    claim: Counter = Counter()
    for S, mult in ha.composition_factors(M).items():
        for lab, k in rules.simple_block(cfg.n, S.l, 1, 0).items():
            claim[lab] += k * mult
    return _claim_outcome(rc.tensor(M, B), claim, seed, {"module": str(M.label)})


# ---------------------------------------------------------------------------
# green ring checks


@_register("green", "relations")
def _green_rel(cfg, params, seed):
    (key,) = params
    ring = gr.green_ring(cfg.n)
    gens = ring.relation_sets(min(cfg.s_max, 3))[key]
    bad = []
    for name, raw in gens:
        res = ring.reduce_raw(raw)
        if not res.is_zero():
            bad.append({"generator": name, "residue": str(res)})
    return _passed(not bad, {"generators": len(gens)}, bad)


@_register("green", "normal_basis")
def _green_basis(cfg, params, seed):
    ring = gr.green_ring(cfg.n)
    basis = ring.normal_basis(cfg.s_max)
    bad = [str(m) for m in basis if ring.reduce_monomial(m) != {m: 1}]
    return _passed(not bad, {"checked": len(basis)}, bad)


@_register("green", "rank")
def _green_rank(cfg, params, seed):
    (which,) = params
    ring = gr.green_ring(cfg.n)
    n = cfg.n
    if which == "small":
        basis = ring.normal_basis(part="projective-small")
        classes = gr.projective_classes(ring, with_blocks=False)
        expect = 2 * n - 1
    else:
        basis = ring.normal_basis(part="projective")
        classes = gr.projective_classes(ring, with_blocks=True)
        expect = n * n + n - 1
    det = gr.lattice_determinant(ring, classes, basis)
    return _passed(len(basis) == expect and abs(det) == 1,
                   {"rank": len(basis), "expected": expect, "determinant": det})


@_register("green", "ring_axioms")
def _green_axioms(cfg, params, seed):
    ring = gr.green_ring(cfg.n)
    rng = random.Random(seed)
    bad = []
    for idx in range(cfg.green_samples):
        a, b, c = (gr.random_element(ring, rng) for _ in range(3))
        if (a * b) * c != a * (b * c):
            bad.append((idx, "associativity"))
        if a * b != b * a:
            bad.append((idx, "commutativity"))
        if a * (b + c) != a * b + a * c:
            bad.append((idx, "distributivity"))
    return _passed(not bad, {"triples": cfg.green_samples}, bad)


@_register("green", "identities")
def _green_ids(cfg, params, seed):
    ring = gr.green_ring(cfg.n)
    checks = gr.identity_checks(ring, s_max=min(cfg.s_max, 3))
    bad = [{"identity": name, "residue": str(res)} for name, res in checks if not res.is_zero()]
    return _passed(not bad, {"identities": len(checks)}, bad)


@_register("green", "crosscheck")
def _green_cross(cfg, params, seed):
    ring = gr.green_ring(cfg.n)
    factors = [rc.parse_label(p, cfg.n) for p in params]
    (rec,) = gr.crosscheck_with_engine(ring, pairs=[factors], seed=seed % (2 ** 31))
    return _passed(rec["equal"], rec, rec)


# ---------------------------------------------------------------------------
# stable ring checks


@_register("stable", "relations")
def _stable_rel(cfg, params, seed):
    ring = gr.green_ring(cfg.n)
    S = gr.StableRing(ring)
    gens = S.relations(min(cfg.s_max, 3))
    bad = [{"generator": name, "residue": str(S.reduce_raw(raw))} for name, raw in gens
           if not S.reduce_raw(raw).is_zero()]
    return _passed(not bad, {"generators": len(gens)}, bad)


@_register("stable", "quotient_map")
def _stable_map(cfg, params, seed):
    ring = gr.green_ring(cfg.n)
    S = gr.StableRing(ring)
    n = cfg.n
    bad = []
    if S.image(ring.parse("z+*z-")) != ring.one:
        bad.append("z+ z- -> 1")
    for l in range(1, n):
        if not S.image(ring.proj_class(l)).is_zero():
            bad.append(f"P{l} -> 0")
    if not S.image(ring.simple_class(n)).is_zero():
        bad.append("V_n -> 0")
    for t in range(1, n):
        for r in range(n):
            if not S.image(ring.block_class(t, r)).is_zero():
                bad.append(f"V({t},{r}) -> 0")
    rng = random.Random(seed)
    for idx in range(cfg.samples):
        a, b = gr.random_element(ring, rng), gr.random_element(ring, rng)
        if S.image(a * b) != S.mul(S.image(a), S.image(b)):
            bad.append(f"product {idx}")
    return _passed(not bad, {}, bad)


@_register("stable", "peel")
def _stable_peel(cfg, params, seed):
    (which,) = params
    ctx = make_context(cfg.n)
    n = ctx.n
    ring = gr.green_ring(n)
    if which == "projective-sum":
        M = rc.direct_sum([rc.projective_P(ctx, n - 1), rc.simple_V(ctx, n)], ctx)
        expect = Counter({rc.Proj(n - 1): 1, rc.Simple(n): 1})
        proj, X = ha.peel_projectives(M)
        return _passed(proj == expect and X.dim == 0, {"projective": _counter_str(proj), "stable_dim": X.dim})
    if which == "V2-Vn":
        M = rc.tensor(rc.simple_V(ctx, 2), rc.simple_V(ctx, n))
        proj, X = ha.peel_projectives(M)
        ok = proj == Counter({rc.Proj(n - 1): 1}) and X.dim == 0
        return _passed(ok, {"projective": _counter_str(proj), "stable_dim": X.dim})
    if which == "zplus-zminus":
        M = rc.tensor(ha.string_module(n, 1, 1, 1), ha.string_module(n, -1, 1, 1))
        proj, X = ha.peel_projectives(M)
        res = ha.find_isomorphism(X, rc.simple_V(ctx, 1), seed=seed)
        symbolic = ring.parse("f1*(2y+4f3)")
        ok = bool(res) and ring.from_counter(proj) == symbolic
        return _passed(ok, {"projective": _counter_str(proj), "stable_dim": X.dim,
                            "projective_class": str(ring.from_counter(proj))},
                       witness=witness_digest(res.witness) if res else None)
    raise ValueError(which)


# ---------------------------------------------------------------------------
# planning


def plan(cfg: SuiteConfig) -> list[Check]:
    n = cfg.n
    checks: list[Check] = []
    sel = cfg.selected()

    def sample(items, name):
        return items if cfg.exhaustive else _sample(items, cfg.samples, check_seed(cfg.seed, name))

    if "algebra" in sel:
        A = "algebra"
        checks.append(Check(A, "pbw_dimension", "PBW monomials are independent; each block has dimension n^3"))
        checks.append(Check(A, "idempotents", "block idempotents are orthogonal, central and sum to 1"))
        checks += [Check(A, "block_relations", "block presentation incl. K_i^n = q^(n-i) e_i", (i,)) for i in range(n)]
        checks += [Check(A, "commutation", "F E^r straightening identity", (r,)) for r in range(1, n)]
        checks += [Check(A, "sub_idempotents", "weight idempotents inside a semisimple block", (i,)) for i in range(1, n)]
        triples = [(i, j, k) for i in range(1, n) for j in range(1, n + 1) for k in range(1, n + 1)]
        checks += [Check(A, "a_element", "F A T = 0 and K A = q^2k A K", p) for p in sample(triples, "a_element")]
        checks.append(Check(A, "casimir_central", "the Casimir element is central"))
        checks.append(Check(A, "associativity", "PBW multiplication is associative"))
        checks.append(Check(A, "weight_projection", "1_s projects onto the weight zeta^-s"))
        checks.append(Check(A, "cocycle", "associator scalars form a normalized 3-cocycle"))
    if "modules" in sel:
        M = "modules"
        checks += [Check(M, "simple", "V_l is a valid module in block 0", (l,)) for l in range(1, n + 1)]
        pairs = [(t, r) for t in range(1, n) for r in range(n)]
        checks += [Check(M, "block_simple", "V(t,r) is valid with one-dimensional ker F", p) for p in pairs]
        checks += [Check(M, "simple_homs", "V(t,r) = V(t',r') iff t = t' and r = r' mod n", p)
                   for p in sample(pairs, "simple_homs")]
        checks.append(Check(M, "simple_V_homs", "Hom(V_l, V_l') is scalar or zero"))
        ij = [(i, j) for i in range(1, n) for j in range(1, n + 1)]
        checks += [Check(M, "regular", "HT^i_j is the sum of V(n-i, r) over r", p) for p in sample(ij, "regular")]
        checks += [Check(M, "a_generated", "A T generates a block simple", p)
                   for p in sample([(i, j, k) for i, j in ij for k in range(1, n + 1)], "a_generated")]
        checks += [Check(M, "projective", "P_l: dim 2n, socle and top V_l, cover of V_l", (l,)) for l in range(1, n)]
        checks.append(Check(M, "projective_Vn", "V_n and V(t,r) are their own covers"))
        checks += [Check(M, "unit", "V_1 is a tensor unit up to isomorphism", (i,)) for i in range(5)]
        syz = [(sign, s, l) for sign in (1, -1) for s in range(1, cfg.s_max + 1) for l in range(1, n)]
        checks += [Check(M, "syzygy", "dim of Omega^s V_l; inverse syzygy recovers V_l", p) for p in syz]
        checks += [Check(M, "associator", "Phi is an invertible intertwiner (MN)P -> M(NP)", (i,))
                   for i in range(cfg.associator_samples)]
        checks.append(Check(M, "negative_control", "a perturbed module is rejected by validation"))
        checks.append(Check(M, "json_roundtrip", "matrix JSON export and import agree"))
    if "tensor" in sel:
        T = "tensor"
        anchors = {
            "v2": "V_2 (x) V(t,r) splits into two block simples",
            "simple": "V_l (x) V(t,r) and its flip, both parities of l",
            "proj": "P_l (x) V(t,r) is twice every V(t,j)",
            "string": "Omega^{+-s} V_l (x) V(t,r), four parity cases",
            "block": "V(t,r) (x) V(t',r'), all regimes of t + t'",
        }
        checks += [Check(T, "instance", anchors[p[0]], p) for p in _tensor_selection(cfg)]
        checks.append(Check(T, "krull_schmidt", "semisimple decomposition is additive"))
        checks += [Check(T, "projective_reduction", "M (x) V(t,r) depends only on composition factors of M",
                         (sign, s, 1)) for sign in (1, -1) for s in (1, 2)]
    if "green" in sel:
        G = "green"
        ring = gr.green_ring(n)
        for key in ring.relation_sets(1):
            checks.append(Check(G, "relations", "presentation generators reduce to zero", (key,)))
        checks.append(Check(G, "normal_basis", "reduction fixes every normal monomial"))
        checks.append(Check(G, "rank", "projective class ring of the small quantum group has rank 2n-1", ("small",)))
        checks.append(Check(G, "rank", "projective class ring has rank n^2+n-1", ("full",)))
        checks.append(Check(G, "ring_axioms", "normal-form ring is associative and commutative"))
        checks.append(Check(G, "identities", "class identities for projectives, z and w"))
        for factors in gr.crosscheck_pairs(n, cfg.crosscheck_samples, check_seed(cfg.seed, "crosscheck") % (2 ** 31)):
            checks.append(Check(G, "crosscheck", "[U][V] = [U (x) V] against the module engine",
                                tuple(str(f) for f in factors)))
    if "stable" in sel:
        S = "stable"
        checks.append(Check(S, "relations", "stable presentation generators reduce to zero"))
        checks.append(Check(S, "quotient_map", "killing projectives is a ring map with z+ z- = 1"))
        for which in ("projective-sum", "V2-Vn", "zplus-zminus"):
            checks.append(Check(S, "peel", "projective summands split off with the expected stable part", (which,)))
    return checks


# ---------------------------------------------------------------------------
# execution


def run_check(cfg: SuiteConfig, check: Check) -> dict:
    seed = check_seed(cfg.seed, check.id)
    start = time.perf_counter()
    try:
        out = _CHECKS[f"{check.suite}.{check.name}"](cfg, check.params, seed)
    except ha.ClaimUnverified as exc:
        out = Outcome("unverified", {}, counterexample={"message": str(exc), **_jsonable(exc.diagnostics)})
    except Exception as exc:  # noqa: BLE001 - isolation: one check never aborts the run
        out = Outcome("fail", {}, counterexample={"exception": f"{type(exc).__name__}: {exc}",
                                                  "trace": traceback.format_exc(limit=3).splitlines()[-3:]})
    rec = {
        "id": check.id,
        "suite": check.suite,
        "anchor": check.anchor,
        "params": _jsonable(list(check.params)),
        "status": out.status,
        "detail": _jsonable(out.detail),
        "witness": out.witness,
    }
    if out.status == "fail":
        rec["counterexample"] = _jsonable(out.counterexample)
    elif out.status == "unverified":
        rec["diagnostics"] = _jsonable(out.counterexample)
    if cfg.timings:
        rec["wall_time"] = round(time.perf_counter() - start, 4)
    return rec


def _run_one(args):
    cfg, check = args
    return run_check(cfg, check)


@dataclass
class SuiteReport:
    config: dict
    records: list[dict]

    @property
    def counts(self) -> dict:
        c = Counter(r["status"] for r in self.records)
        return {"pass": c.get("pass", 0), "fail": c.get("fail", 0), "unverified": c.get("unverified", 0),
                "total": len(self.records)}

    @property
    def exit_code(self) -> int:
        c = self.counts
        if c["fail"]:
            return 1
        if c["unverified"]:
            return 2
        return 0

    def lines(self) -> list[str]:
        out = [json.dumps(r, sort_keys=True, ensure_ascii=False) for r in self.records]
        out.append(json.dumps({"summary": self.counts, "config": self.config}, sort_keys=True, ensure_ascii=False))
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def run_suite(cfg: SuiteConfig, progress: Callable[[dict], None] | None = None) -> SuiteReport:
    """Run the selected suites; records come back in plan order."""
    checks = plan(cfg)
    if cfg.threads > 1 and len(checks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            records = []
            for rec in pool.map(_run_one, [(cfg, c) for c in checks], chunksize=1):
                records.append(rec)
                if progress:
                    progress(rec)
    else:
        records = []
        for c in checks:
            rec = run_check(cfg, c)
            records.append(rec)
            if progress:
                progress(rec)
    conf = {k: v for k, v in asdict(cfg).items() if k not in ("output", "threads", "timings")}
    conf["suites"] = list(cfg.suites)
    report = SuiteReport(conf, records)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(report.text())
    return report
