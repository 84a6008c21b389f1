"""Helpers for immutable formula trees."""
from __future__ import annotations

from dataclasses import dataclass, fields


def node(cls):
    """Frozen dataclass whose hash is computed once (formula trees get deep)."""
    cls = dataclass(frozen=True)(cls)
    structural_hash = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = structural_hash(self)
            object.__setattr__(self, "_hash", h)
        return h

    cls.__hash__ = __hash__
    return cls


def _nodes_in(v):
    if hasattr(v, "__dataclass_fields__"):
        yield v
    elif isinstance(v, (tuple, frozenset)):
        for x in v:
            yield from _nodes_in(x)


def children(n):
    for f in fields(n):
        yield from _nodes_in(getattr(n, f.name))


def size(n, _seen=None) -> int:
    """Number of nodes in the tree (shared subtrees counted once per occurrence)."""
    memo = {} if _seen is None else _seen
    key = id(n)
    if key in memo:
        return memo[key]
    s = 1 + sum(size(c, memo) for c in children(n))
    memo[key] = s
    return s
