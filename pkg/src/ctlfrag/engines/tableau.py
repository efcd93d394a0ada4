"""Path existence by a tableau of obligation sets over the structure.

A tableau node is a state together with the obligations that hold now and
the obligations passed on to the next position.  Expansion follows the
one-step unfolding of each operator (``F a = a | X F a``, ``a U b =
b | (a & X (a U b))``, ``a R b = b & (a | X (a R b))``, ``G a = a & X G a``);
``Fi a`` is treated as ``G F a`` and ``Gi a`` as ``F G a``.  A path exists
iff an initial node reaches a nontrivial strongly connected component in
which every eventuality is somewhere not pending.
"""

from __future__ import annotations

import numpy as np

from ..formula import (
    Embed,
    F,
    Finf,
    G,
    Ginf,
    PAnd,
    PathFormula,
    PNot,
    POr,
    R,
    U,
    X,
)
from ..graphs import backward_closure, nontrivial_components, tarjan_scc
from ..kripke import KripkeStructure

_LEAF, _AND, _OR, _X, _F, _G, _U, _R, _FI, _GI = range(10)


class _Closure:
    def __init__(self, chi: PathFormula, leaf_vector):
        self.kinds: list[int] = []
        self.args: list[tuple] = []
        self.leaf: list = []
        self._ids: dict = {}
        self.root = self._add(chi, leaf_vector)
        # Fi a needs F a and Gi a needs G a inside the closure
        self.helper: dict[int, int] = {}
        for i, kind in enumerate(list(self.kinds)):
            if kind == _FI:
                self.helper[i] = self._node(_F, self.args[i])
            elif kind == _GI:
                self.helper[i] = self._node(_G, self.args[i])
        self.eventualities = [i for i, k in enumerate(self.kinds) if k in (_F, _U, _GI)]

    def _node(self, kind, args, leaf=None) -> int:
        key = (kind, args, None if leaf is None else id(leaf))
        if key in self._ids:
            return self._ids[key]
        self.kinds.append(kind)
        self.args.append(args)
        self.leaf.append(leaf)
        self._ids[key] = len(self.kinds) - 1
        return self._ids[key]

    def _add(self, p, leaf_vector) -> int:
        if p in self._ids:
            return self._ids[p]
        if isinstance(p, Embed):
            i = self._node(_LEAF, (), leaf_vector(p.state))
        elif isinstance(p, PNot):
            raise ValueError("tableau expects a path formula in negation normal form")
        else:
            kind = {PAnd: _AND, POr: _OR, X: _X, F: _F, G: _G, U: _U, R: _R,
                    Finf: _FI, Ginf: _GI}[type(p)]
            args = tuple(self._add(c, leaf_vector) for c in _path_children(p))
            i = self._node(kind, args)
        self._ids[p] = i
        return i


def _path_children(p):
    if isinstance(p, (X, F, G, Finf, Ginf)):
        return (p.arg,)
    return (p.left, p.right)


class Tableau:
    """Tableau graph for one NNF path formula over one structure."""

    def __init__(self, structure: KripkeStructure, chi: PathFormula, leaf_vector):
        self.K = structure
        self.cl = _Closure(chi, leaf_vector)
        self._expansions: dict = {}
        self.nodes: list[tuple] = []
        self._node_ids: dict = {}
        self.succ: list[list[int]] = []
        self.initial: list[list[int]] = [[] for _ in range(structure.n)]
        self._build()
        self.good = self._good_nodes()

    # ---- local expansion

    def expand(self, w: int, obligations: frozenset) -> list[tuple]:
        key = (w, obligations)
        if key in self._expansions:
            return self._expansions[key]
        cl = self.cl
        results = set()

        def go(todo: tuple, now: frozenset, nxt: frozenset):
            while todo:
                f, todo = todo[-1], todo[:-1]
                if f in now:
                    continue
                now = now | {f}
                kind, a = cl.kinds[f], cl.args[f]
                if kind == _LEAF:
                    if not cl.leaf[f][w]:
                        return
                elif kind == _AND:
                    todo = todo + a
                elif kind == _OR:
                    go(todo + (a[0],), now, nxt)
                    go(todo + (a[1],), now, nxt)
                    return
                elif kind == _X:
                    nxt = nxt | {a[0]}
                elif kind == _F:
                    go(todo + (a[0],), now, nxt)
                    go(todo, now, nxt | {f})
                    return
                elif kind == _G:
                    todo = todo + (a[0],)
                    nxt = nxt | {f}
                elif kind == _U:
                    go(todo + (a[1],), now, nxt)
                    go(todo + (a[0],), now, nxt | {f})
                    return
                elif kind == _R:
                    todo = todo + (a[1],)
                    go(todo + (a[0],), now, nxt)
                    go(todo, now, nxt | {f})
                    return
                elif kind == _FI:
                    todo = todo + (cl.helper[f],)
                    nxt = nxt | {f}
                else:  # _GI
                    go(todo + (cl.helper[f],), now, nxt)
                    go(todo, now, nxt | {f})
                    return
            results.add((now, nxt))

        go(tuple(sorted(obligations)), frozenset(), frozenset())
        out = sorted(results, key=lambda pair: (sorted(pair[0]), sorted(pair[1])))
        self._expansions[key] = out
        return out

    # ---- graph

    def _intern(self, node: tuple) -> tuple[int, bool]:
        i = self._node_ids.get(node)
        if i is not None:
            return i, False
        i = len(self.nodes)
        self.nodes.append(node)
        self._node_ids[node] = i
        self.succ.append([])
        return i, True

    def _build(self):
        root = frozenset({self.cl.root})
        todo = []
        for w in range(self.K.n):
            for now, nxt in self.expand(w, root):
                i, new = self._intern((w, now, nxt))
                self.initial[w].append(i)
                if new:
                    todo.append(i)
        while todo:
            i = todo.pop()
            w, _, nxt = self.nodes[i]
            targets = set()
            for w2 in self.K.succ[w]:
                for now2, nxt2 in self.expand(w2, nxt):
                    j, new = self._intern((w2, now2, nxt2))
                    targets.add(j)
                    if new:
                        todo.append(j)
            self.succ[i] = sorted(targets)

    def pending(self, i: int, e: int) -> bool:
        _, now, _ = self.nodes[i]
        if e not in now:
            return False
        kind, a = self.cl.kinds[e], self.cl.args[e]
        if kind == _F:
            return a[0] not in now
        if kind == _U:
            return a[1] not in now
        return self.cl.helper[e] not in now  # _GI

    def _good_nodes(self) -> list[bool]:
        m = len(self.nodes)
        comp, comps = tarjan_scc(m, self.succ)
        nontrivial = nontrivial_components(self.succ, comp, comps)
        fulfilling = []
        for c, members in enumerate(comps):
            if not nontrivial[c]:
                continue
            if all(any(not self.pending(i, e) for i in members)
                   for e in self.cl.eventualities):
                fulfilling.extend(members)
        pred = [[] for _ in range(m)]
        for i, row in enumerate(self.succ):
            for j in row:
                pred[j].append(i)
        return backward_closure(m, pred, fulfilling)

    def exists(self) -> np.ndarray:
        """States from which some path satisfies the formula."""
        return np.array([any(self.good[i] for i in self.initial[w])
                         for w in range(self.K.n)], dtype=bool)


def exists_path_vector(structure: KripkeStructure, chi: PathFormula,
                       leaf_vector) -> np.ndarray:
    return Tableau(structure, chi, leaf_vector).exists()
