"""Binary relations on {0..N-1} stored as one integer bitmask per source."""
from __future__ import annotations


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def identity(n: int) -> tuple:
    return tuple(1 << x for x in range(n))


def empty(n: int) -> tuple:
    return (0,) * n


def diagonal(mask: int, n: int) -> tuple:
    return tuple((1 << x) if mask >> x & 1 else 0 for x in range(n))


def union(a, b) -> tuple:
    return tuple(x | y for x, y in zip(a, b))


def image(rel, mask: int) -> int:
    out = 0
    for y in bits(mask):
        out |= rel[y]
    return out


def compose(a, b) -> tuple:
    return tuple(image(b, row) for row in a)


def star(a) -> tuple:
    """Reflexive-transitive closure (Warshall on bit rows)."""
    r = [row | (1 << x) for x, row in enumerate(a)]
    n = len(r)
    for k in range(n):
        bit, rk = 1 << k, r[k]
        for i in range(n):
            if r[i] & bit:
                r[i] |= rk
    return tuple(r)


def plus(a) -> tuple:
    return compose(a, star(a))


def converse(a) -> tuple:
    n = len(a)
    out = [0] * n
    for x, row in enumerate(a):
        for y in bits(row):
            out[y] |= 1 << x
    return tuple(out)


def pairs(a) -> set:
    return {(x, y) for x, row in enumerate(a) for y in bits(row)}


def from_pairs(ps, n: int) -> tuple:
    out = [0] * n
    for x, y in ps:
        out[x] |= 1 << y
    return tuple(out)
