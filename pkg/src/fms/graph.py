"""Strongly connected components (Tarjan), iterative to survive deep graphs."""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping


def tarjan_scc(nodes: Iterable[Hashable], edges: Mapping[Hashable, Iterable[Hashable]]) -> list[list]:
    """SCCs in reverse topological order: every component comes after the ones it reaches.

    Put differently, dependencies come first when ``edges`` maps a node to what
    it depends on.  Nodes are visited in the given order, so the result is
    deterministic.
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(edges.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = low[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(edges.get(succ, ()))))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(comp)
    return out


def reachable(roots: Iterable[Hashable], edges: Mapping[Hashable, Iterable[Hashable]]) -> set:
    seen = set()
    todo = list(roots)
    while todo:
        n = todo.pop()
        if n in seen:
            continue
        seen.add(n)
        todo.extend(edges.get(n, ()))
    return seen
