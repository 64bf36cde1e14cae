"""Closed-form tensor decomposition rules, returned as label multisets.

Each function gives the claimed direct-sum decomposition of a tensor
product of two indecomposables; the engine certifies them with
:func:`quasiqg.homalg.verify_claim`.  Block-simple parameters r are
reduced mod n, and P_n stands for V_n.
"""

from __future__ import annotations

from collections import Counter

from .repcore import BlockSimple, ModuleError, Proj, Simple

__all__ = [
    "v2_block",
    "simple_block",
    "proj_block",
    "string_block",
    "block_block",
    "projective_label",
]


def _half(n: int) -> int:
    return (n - 1) // 2


def projective_label(n: int, l: int):
    """P_l as a label; P_n is V_n and P_0 is the zero module (None)."""
    if l == 0:
        return None
    if l == n:
        return Simple(n)
    if not 1 <= l < n:
        raise ModuleError(f"no projective P_{l} at n={n}")
    return Proj(l)


def _block_offset(n: int, l: int, r: int) -> int:
    """Lowest r-index of the summands of V_l (x) V(t,r)."""
    if l % 2:
        return r - (l - 1) // 2
    return r + (n - l + 1) // 2


def v2_block(n: int, t: int, r: int) -> Counter:
    return Counter({BlockSimple(t, (r + _half(n)) % n): 1, BlockSimple(t, (r + _half(n) + 1) % n): 1})


def simple_block(n: int, l: int, t: int, r: int) -> Counter:
    """V_l (x) V(t,r), which also equals V(t,r) (x) V_l."""
    if l == n:
        return Counter({BlockSimple(t, j): 1 for j in range(n)})
    base = _block_offset(n, l, r)
    out: Counter = Counter()
    for j in range(l):
        out[BlockSimple(t, (base + j) % n)] += 1
    return out


def proj_block(n: int, l: int, t: int, r: int) -> Counter:
    """P_l (x) V(t,r) for 1 <= l <= n-1: two copies of every V(t,j)."""
    return Counter({BlockSimple(t, j): 2 for j in range(n)})


def string_block(n: int, s: int, l: int, t: int, r: int) -> Counter:
    """Omega^{+-s} V_l (x) V(t,r); the sign does not matter."""
    out: Counter = Counter({BlockSimple(t, j): s for j in range(n)})
    base = _block_offset(n, l, r)
    extra = range(l, n) if s % 2 else range(l)
    for j in extra:
        out[BlockSimple(t, (base + j) % n)] += 1
    return out


def block_block(n: int, t: int, r: int, t2: int, r2: int) -> Counter:
    """V(t,r) (x) V(t2,r2)."""
    total = t + t2
    if total != n:
        tt = total if total < n else total - n
        return Counter({BlockSimple(tt, j): 1 for j in range(n)})
    u = (r + r2) % n
    h = _half(n)
    ls: list[int] = []
    if u <= h:
        ls += [2 * j for j in range(u, h + 1)]
        ls.append(n)
        ls += [n - 2 * u + 2 * j for j in range(1, u)]
    else:
        ls += [2 * j for j in range(n + 1 - u, h + 1)]
        ls += [2 * u + 2 * j - n for j in range(0, n - u + 1)]
    out: Counter = Counter()
    for l in ls:
        lab = projective_label(n, l)
        if lab is not None:
            out[lab] += 1
    return out
