"""Backtracking search for natural assignments.

Every enumeration in the package (natural transformations, sections of a
family, Π fibers, exponentials, uniform filler structures) is the same
problem: pick a value for each node from its domain so that whenever node
``j`` is a restriction of node ``i`` along ``g`` the value at ``j`` is the
restriction of the value at ``i``.  The edge list of a node is expected to
cover its whole down-closure, so one assignment propagates in a single
sweep and conflicts are detected immediately.
"""
from __future__ import annotations

from typing import Callable, Iterator, Sequence

from .caps import CapExceeded, current

_UNSET = object()


def default_order(edges: Sequence[Sequence]) -> list[int]:
    # nodes that determine the most others go first
    return sorted(range(len(edges)), key=lambda i: (-len(edges[i]), i))


def natural_assignments(domains: Sequence[Sequence], edges: Sequence[Sequence],
                        act: Callable, order: Sequence[int] | None = None,
                        ) -> Iterator[tuple]:
    """Yield every tuple ``v`` with ``v[j] == act(i, v[i], g)`` for ``(g, j)`` in ``edges[i]``.

    Results come out in lexicographic order of ``order`` and domain order,
    which makes them deterministic.
    """
    n = len(domains)
    if order is None:
        order = default_order(edges)
    members = [frozenset(d) for d in domains]
    val = [_UNSET] * n

    def place(i, v):
        val[i] = v
        placed = [i]
        for g, j in edges[i]:
            w = act(i, v, g)
            cur = val[j]
            if cur is _UNSET:
                if w not in members[j]:
                    break
                val[j] = w
                placed.append(j)
            elif cur != w:
                break
        else:
            return placed
        for k in placed:
            val[k] = _UNSET
        return None

    def next_unset(p):
        while p < n and val[order[p]] is not _UNSET:
            p += 1
        return p

    if n == 0:
        yield ()
        return
    stack = [[next_unset(0), 0, None]]
    while stack:
        frame = stack[-1]
        pos, k, placed = frame
        if placed is not None:
            for j in placed:
                val[j] = _UNSET
            frame[2] = None
        i = order[pos]
        dom = domains[i]
        while k < len(dom):
            placed = place(i, dom[k])
            k += 1
            if placed is None:
                continue
            frame[1], frame[2] = k, placed
            nxt = next_unset(pos + 1)
            if nxt == n:
                yield tuple(val)
            else:
                stack.append([nxt, 0, None])
            break
        else:
            stack.pop()


def collect(it: Iterator, what: str = "enumeration", cap: int | None = None) -> list:
    cap = current().count if cap is None else cap
    out = []
    for item in it:
        out.append(item)
        if len(out) > cap:
            raise CapExceeded(f"{what} produced more than {cap} results")
    return out


def count(it: Iterator, what: str = "enumeration", cap: int | None = None) -> int:
    cap = current().count if cap is None else cap
    total = 0
    for _ in it:
        total += 1
        if total > cap:
            raise CapExceeded(f"{what} produced more than {cap} results")
    return total
