"""Graph primitives shared by the structure index, the engines and the tableau."""

from __future__ import annotations

from typing import Sequence


def tarjan_scc(n: int, succ: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Strongly connected components of the graph ``0..n-1``.

    Returns ``(comp, comps)`` where ``comp[v]`` is the component number of
    ``v`` and ``comps`` lists members per component.  Components are numbered
    in reverse topological order: every edge ``u -> v`` with
    ``comp[u] != comp[v]`` has ``comp[u] > comp[v]``.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    comps: list[list[int]] = []
    stack: list[int] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            edges = succ[v]
            if i < len(edges):
                work[-1] = (v, i + 1)
                w = edges[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = len(comps)
                    members.append(w)
                    if w == v:
                        break
                comps.append(members)
    return comp, comps


def nontrivial_components(succ: Sequence[Sequence[int]], comp: list[int],
                          comps: list[list[int]]) -> list[bool]:
    """Whether each component contains at least one internal edge."""
    flags = [len(members) > 1 for members in comps]
    for c, members in enumerate(comps):
        if not flags[c]:
            v = members[0]
            flags[c] = v in succ[v]
    return flags


def backward_closure(n: int, pred: Sequence[Sequence[int]], seeds) -> list[bool]:
    """States that can reach some seed (seeds included)."""
    mark = [False] * n
    todo = []
    for v in seeds:
        if not mark[v]:
            mark[v] = True
            todo.append(v)
    while todo:
        v = todo.pop()
        for u in pred[v]:
            if not mark[u]:
                mark[u] = True
                todo.append(u)
    return mark
