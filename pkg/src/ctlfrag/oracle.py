"""Reference semantics by direct evaluation over ultimately periodic paths.

State formulas are evaluated recursively.  A path quantifier ``E chi`` is
decided per state in two independent halves:

* a positive answer requires an explicit lasso ``u . v^omega`` from the
  state, and every such lasso is re-evaluated position by position with
  :func:`lasso_satisfies` before it is accepted;
* a negative answer is certified by an exhaustive analysis of the pairs
  (state, truth values of the temporal subformulas of ``chi``).  Every
  infinite path induces a sequence of such pairs, and ultimately periodic
  witnesses correspond exactly to reachable cycles of pairs that fulfil all
  pending eventualities.

A witness longer than the bound is reported as indeterminate rather than
silently accepted or rejected.  ``A chi`` is ``not E not chi``.

This module is exponential in the number of temporal operators per path
quantifier and is meant for small structures (up to about 8 states and 4
temporal operators per quantifier).
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .formula import (
    And,
    Atom,
    Const,
    Embed,
    F,
    Finf,
    G,
    Ginf,
    Not,
    Or,
    PAnd,
    PathFormula,
    PathQuant,
    PNot,
    POr,
    R,
    StateFormula,
    U,
    X,
    children,
    path_negate,
    temporal_count,
)
from .graphs import tarjan_scc
from .kripke import KripkeStructure

CAP_ENV = "CTLFRAG_ORACLE_CAP"


class OracleIndeterminate(Exception):
    """The witness search did not settle the answer within the bound."""

    def __init__(self, state: str, bound: int):
        super().__init__(f"oracle indeterminate at state {state!r} for bound {bound}")
        self.state = state
        self.bound = bound


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic path ``prefix . cycle^omega``."""

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")

    def states(self) -> tuple:
        return self.prefix + self.cycle

    def is_valid(self, structure: KripkeStructure) -> bool:
        seq = list(self.prefix) + list(self.cycle) + [self.cycle[0]]
        trans = structure.transitions
        return all((a, b) in trans for a, b in zip(seq, seq[1:]))

    def __len__(self):
        return len(self.prefix) + len(self.cycle)


def default_bound(structure: KripkeStructure, chi: PathFormula) -> int:
    return structure.n * (temporal_count(chi) + 1)


def default_cap(structure: KripkeStructure, chi: PathFormula) -> int:
    factor = os.environ.get(CAP_ENV)
    base = default_bound(structure, chi)
    if factor:
        return max(base, int(factor))
    return 4 * base


# ------------------------------------------------------------ path compiler

_LEAF, _NOT, _AND, _OR, _X, _F, _G, _U, _R, _FI, _GI = range(11)
_KIND = {PNot: _NOT, PAnd: _AND, POr: _OR, X: _X, F: _F, G: _G, U: _U, R: _R,
         Finf: _FI, Ginf: _GI}
_TEMPORAL_KINDS = (_X, _F, _G, _U, _R, _FI, _GI)


class _PathProgram:
    """Bottom-up node list of a path formula with leaf truth vectors."""

    def __init__(self, chi: PathFormula, leaf_value):
        self.kinds: list[int] = []
        self.args: list[tuple] = []
        self.leaves: list[Optional[Sequence[bool]]] = []
        self.temporal_bit: list[int] = []
        self.n_temporal = 0
        self._ids: dict = {}
        self.root = self._add(chi, leaf_value)

    def _add(self, node, leaf_value) -> int:
        if node in self._ids:
            return self._ids[node]
        if isinstance(node, Embed):
            kind, args, leaf = _LEAF, (), leaf_value(node.state)
        else:
            kind = _KIND[type(node)]
            args = tuple(self._add(c, leaf_value) for c in children(node))
            leaf = None
        i = len(self.kinds)
        self.kinds.append(kind)
        self.args.append(args)
        self.leaves.append(leaf)
        if kind in _TEMPORAL_KINDS:
            self.temporal_bit.append(self.n_temporal)
            self.n_temporal += 1
        else:
            self.temporal_bit.append(-1)
        self._ids[node] = i
        return i

    # values of all nodes along one periodic cycle, as lists over positions
    def cycle_values(self, cycle: Sequence[int]) -> list[list[bool]]:
        k = len(cycle)
        vals: list[list[bool]] = []
        for i, kind in enumerate(self.kinds):
            a = self.args[i]
            if kind == _LEAF:
                leaf = self.leaves[i]
                v = [bool(leaf[s]) for s in cycle]
            elif kind == _NOT:
                v = [not x for x in vals[a[0]]]
            elif kind == _AND:
                v = [x and y for x, y in zip(vals[a[0]], vals[a[1]])]
            elif kind == _OR:
                v = [x or y for x, y in zip(vals[a[0]], vals[a[1]])]
            elif kind == _X:
                arg = vals[a[0]]
                v = [arg[(j + 1) % k] for j in range(k)]
            elif kind in (_F, _FI):
                v = [any(vals[a[0]])] * k
            elif kind in (_G, _GI):
                v = [all(vals[a[0]])] * k
            elif kind == _U:
                v = _cycle_until(vals[a[0]], vals[a[1]])
            else:  # R(a, b) = not ((not a) U (not b))
                na = [not x for x in vals[a[0]]]
                nb = [not x for x in vals[a[1]]]
                v = [not x for x in _cycle_until(na, nb)]
            vals.append(v)
        return vals

    # values at a state given the values of all nodes one step later
    def step_values(self, s: int, later: list[bool]) -> list[bool]:
        vals: list[bool] = []
        for i, kind in enumerate(self.kinds):
            a = self.args[i]
            if kind == _LEAF:
                v = bool(self.leaves[i][s])
            elif kind == _NOT:
                v = not vals[a[0]]
            elif kind == _AND:
                v = vals[a[0]] and vals[a[1]]
            elif kind == _OR:
                v = vals[a[0]] or vals[a[1]]
            elif kind == _X:
                v = later[a[0]]
            elif kind == _F:
                v = vals[a[0]] or later[i]
            elif kind == _G:
                v = vals[a[0]] and later[i]
            elif kind == _U:
                v = vals[a[1]] or (vals[a[0]] and later[i])
            elif kind == _R:
                v = vals[a[1]] and (vals[a[0]] or later[i])
            else:  # Fi, Gi are suffix invariant
                v = later[i]
            vals.append(v)
        return vals


def _cycle_until(a: list[bool], b: list[bool]) -> list[bool]:
    k = len(a)
    v = [False] * k
    for _ in range(2):
        for j in range(k - 1, -1, -1):
            v[j] = b[j] or (a[j] and v[(j + 1) % k])
    return v


def _lasso_values(prog: _PathProgram, prefix: Sequence[int], cycle: Sequence[int]) -> list[bool]:
    """Values of all nodes at position 0 of ``prefix . cycle^omega``."""
    cyc = prog.cycle_values(cycle)
    current = [col[0] for col in cyc]
    for s in reversed(prefix):
        current = prog.step_values(s, current)
    return current


# ------------------------------------------------------------- the oracle

class Oracle:
    """Per-invocation evaluator; memoizes state formulas for one structure.

    Results are three-valued per state: ``True``, ``False`` or ``None``
    (indeterminate at the bound).
    """

    def __init__(self, structure: KripkeStructure, bound: int | None = None,
                 escalate: bool = False, cap: int | None = None):
        self.structure = structure
        self.bound = bound
        self.escalate = escalate
        self.cap = cap
        self._memo: dict = {}
        self.witnesses: dict = {}

    # ---- state formulas

    def values(self, f: StateFormula) -> list[Optional[bool]]:
        if f in self._memo:
            return self._memo[f]
        K = self.structure
        if isinstance(f, Atom):
            out = [f.name in lab for lab in K.labels]
        elif isinstance(f, Const):
            out = [f.value] * K.n
        elif isinstance(f, Not):
            out = [None if v is None else not v for v in self.values(f.arg)]
        elif isinstance(f, And):
            out = [_and3(a, b) for a, b in zip(self.values(f.left), self.values(f.right))]
        elif isinstance(f, Or):
            out = [_or3(a, b) for a, b in zip(self.values(f.left), self.values(f.right))]
        elif isinstance(f, PathQuant):
            if f.quantifier == "E":
                out = self._exists(f.body)
            else:
                ex = self._exists(path_negate(f.body))
                out = [None if v is None else not v for v in ex]
        else:
            raise TypeError(f"not a state formula: {f!r}")
        self._memo[f] = out
        return out

    def _leaf_value(self, s: StateFormula):
        vals = self.values(s)
        if any(v is None for v in vals):
            raise _UnknownLeaf
        return vals

    def program(self, chi: PathFormula) -> _PathProgram:
        return _PathProgram(chi, self._leaf_value)

    # ---- path quantification

    def _exists(self, chi: PathFormula) -> list[Optional[bool]]:
        K = self.structure
        try:
            prog = self.program(chi)
        except _UnknownLeaf:
            return [None] * K.n
        bound = self.bound or default_bound(K, chi)
        limit = max(bound, self.cap or default_cap(K, chi)) if self.escalate else bound
        graph = _TypeGraph(K, prog)
        out: list[Optional[bool]] = []
        for w in range(K.n):
            lasso = graph.witness(w)
            if lasso is None:
                out.append(False)
                continue
            prefix, cycle = lasso
            if not _lasso_values(prog, prefix, cycle)[prog.root]:
                raise AssertionError("extracted lasso fails direct evaluation")
            if max(len(prefix), len(cycle)) <= limit:
                names = K.states
                self.witnesses[(chi, names[w])] = Lasso(
                    tuple(names[s] for s in prefix), tuple(names[s] for s in cycle))
                out.append(True)
            else:
                out.append(None)
        return out


class _UnknownLeaf(Exception):
    pass


def _and3(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _or3(a, b):
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


class _TypeGraph:
    """Pairs (state, temporal valuation) linked by one-step consistency.

    A node fixes the truth of every temporal subformula at the current
    position; everything else follows locally.  Edges go forward in time and
    each predecessor is determined uniquely by the successor node and the
    predecessor state.  Nodes on cycles whose infinitely-often obligations
    are all met describe exactly the periodic parts of lassos.
    """

    def __init__(self, structure: KripkeStructure, prog: _PathProgram):
        self.K = structure
        self.prog = prog
        k = prog.n_temporal
        self.width = 1 << k
        n_nodes = structure.n * self.width
        temporal_nodes = [i for i, b in enumerate(prog.temporal_bit) if b >= 0]
        self.vals: list[Optional[list[bool]]] = [None] * n_nodes
        for s in range(structure.n):
            for g in range(self.width):
                self.vals[s * self.width + g] = self._local(s, g)
        succ = [[] for _ in range(n_nodes)]
        pred = [[] for _ in range(n_nodes)]
        for s2 in range(structure.n):
            for g2 in range(self.width):
                later = self.vals[s2 * self.width + g2]
                for s in structure.pred[s2]:
                    now = prog.step_values(s, later)
                    g = 0
                    for i in temporal_nodes:
                        if now[i]:
                            g |= 1 << prog.temporal_bit[i]
                    u, v = s * self.width + g, s2 * self.width + g2
                    succ[u].append(v)
                    pred[v].append(u)
        self.succ, self.pred = succ, pred
        self._accepting_members()
        self._distance_to_accepting()

    def _local(self, s: int, g: int) -> list[bool]:
        prog = self.prog
        vals: list[bool] = []
        for i, kind in enumerate(prog.kinds):
            a = prog.args[i]
            if kind == _LEAF:
                v = bool(prog.leaves[i][s])
            elif kind == _NOT:
                v = not vals[a[0]]
            elif kind == _AND:
                v = vals[a[0]] and vals[a[1]]
            elif kind == _OR:
                v = vals[a[0]] or vals[a[1]]
            else:
                v = bool(g >> prog.temporal_bit[i] & 1)
            vals.append(v)
        return vals

    def _admissible(self, node: int) -> bool:
        prog, v = self.prog, self.vals[node]
        for i, kind in enumerate(prog.kinds):
            if kind == _FI and not v[i] and v[prog.args[i][0]]:
                return False
            if kind == _GI and v[i] and not v[prog.args[i][0]]:
                return False
        return True

    def _pending(self, node: int) -> list[bool]:
        """Per eventuality: still waiting for fulfilment at this node."""
        prog, v = self.prog, self.vals[node]
        out = []
        for i, kind in enumerate(prog.kinds):
            a = prog.args[i]
            if kind in (_F, _FI):
                out.append(v[i] and not v[a[0]])
            elif kind == _U:
                out.append(v[i] and not v[a[1]])
            elif kind in (_G, _GI):
                out.append(not v[i] and v[a[0]])
            elif kind == _R:
                out.append(not v[i] and v[a[1]])
        return out

    def _accepting_members(self):
        n_nodes = len(self.vals)
        ok = [self._admissible(x) for x in range(n_nodes)]
        inner = [[y for y in self.succ[x] if ok[y]] if ok[x] else [] for x in range(n_nodes)]
        comp, comps = tarjan_scc(n_nodes, inner)
        self.comp = comp
        self.inner = inner
        accepting = [False] * len(comps)
        pending = [self._pending(x) for x in range(n_nodes)]
        n_events = len(pending[0]) if pending else 0
        for c, members in enumerate(comps):
            if not ok[members[0]]:
                continue
            if len(members) == 1 and members[0] not in inner[members[0]]:
                continue
            accepting[c] = all(
                any(not pending[x][e] for x in members) for e in range(n_events))
        self.accepting_comp = accepting
        self.pending = pending
        self.n_events = n_events

    def _distance_to_accepting(self):
        n_nodes = len(self.vals)
        dist = [-1] * n_nodes
        nxt = [-1] * n_nodes
        queue = deque()
        for x in range(n_nodes):
            if self.accepting_comp[self.comp[x]]:
                dist[x] = 0
                queue.append(x)
        while queue:
            y = queue.popleft()
            for x in self.pred[y]:
                if dist[x] < 0:
                    dist[x] = dist[y] + 1
                    nxt[x] = y
                    queue.append(x)
        self.dist, self.next_hop = dist, nxt

    def witness(self, w: int) -> Optional[tuple[list[int], list[int]]]:
        """Shortest-prefix lasso from state ``w`` satisfying the root, if any."""
        root = self.prog.root
        best = None
        for g in range(self.width):
            x = w * self.width + g
            if self.vals[x][root] and self.dist[x] >= 0:
                if best is None or self.dist[x] < self.dist[best]:
                    best = x
        if best is None:
            return None
        path = [best]
        while self.dist[path[-1]] > 0:
            path.append(self.next_hop[path[-1]])
        entry = path[-1]
        cycle_nodes = self._fulfilling_cycle(entry)
        prefix = [x // self.width for x in path[:-1]]
        cycle = [x // self.width for x in cycle_nodes]
        return prefix, cycle

    def _fulfilling_cycle(self, entry: int) -> list[int]:
        c = self.comp[entry]
        route = [entry]
        here = entry
        for e in range(self.n_events):
            if any(not self.pending[x][e] for x in route):
                continue
            seg = self._bfs(here, lambda x, e=e: not self.pending[x][e], c)
            route.extend(seg[1:])
            here = route[-1]
        seg = self._bfs(here, lambda x: x == entry, c, allow_start=False)
        route.extend(seg[1:-1])
        return route

    def _bfs(self, start: int, goal, c: int, allow_start: bool = True) -> list[int]:
        if allow_start and goal(start):
            return [start]
        parent = {start: None}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in self.inner[x]:
                if self.comp[y] != c:
                    continue
                if goal(y):
                    path = [y, x]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        raise AssertionError("accepting component is not strongly connected")


# -------------------------------------------------------------- public API

def oracle_table(structure: KripkeStructure, f: StateFormula, bound: int | None = None,
                 escalate: bool = False, cap: int | None = None) -> dict:
    """Three-valued truth of ``f`` at every state (``None`` = indeterminate)."""
    vals = Oracle(structure, bound, escalate, cap).values(f)
    return dict(zip(structure.states, vals))


def eval_oracle(structure: KripkeStructure, w: str, f: StateFormula,
                bound: int | None = None, escalate: bool = False,
                cap: int | None = None) -> bool:
    """Truth of ``f`` at state ``w``.

    Raises
    ------
    OracleIndeterminate
        If a witness exists only beyond the lasso bound.
    """
    i = structure.check_state(w)
    v = Oracle(structure, bound, escalate, cap).values(f)[i]
    if v is None:
        raise OracleIndeterminate(w, bound or 0)
    return v


def lasso_satisfies(structure: KripkeStructure, lasso: Lasso, chi: PathFormula) -> bool:
    """Exact truth of ``chi`` on ``lasso`` by position-wise evaluation."""
    if not lasso.is_valid(structure):
        raise ValueError("lasso does not follow the transition relation")
    oracle = Oracle(structure)
    prog = _PathProgram(chi, _strict_leaf(oracle))
    idx = structure.index
    prefix = [idx[s] for s in lasso.prefix]
    cycle = [idx[s] for s in lasso.cycle]
    return _lasso_values(prog, prefix, cycle)[prog.root]


def _strict_leaf(oracle: Oracle):
    def leaf(s):
        vals = oracle.values(s)
        if any(v is None for v in vals):
            raise OracleIndeterminate("?", 0)
        return vals
    return leaf


def iter_lassos(structure: KripkeStructure, w: int, bound: int):
    """All lassos from ``w`` with prefix and cycle length at most ``bound``."""
    succ = structure.succ

    def cycles_from(x):
        # closed walks x -> ... -> x of length 1..bound
        stack = [(x, [x])]
        while stack:
            y, walk = stack.pop()
            for z in succ[y]:
                if z == x:
                    yield list(walk)
                if len(walk) < bound:
                    stack.append((z, walk + [z]))

    prefixes = [[]]
    frontier = [[]]
    for _ in range(bound):
        grown = []
        for p in frontier:
            tail = p[-1] if p else None
            options = [w] if tail is None else succ[tail]
            for y in options:
                grown.append(p + [y])
        prefixes.extend(grown)
        frontier = grown
    for p in prefixes:
        starts = [w] if not p else succ[p[-1]]
        for x in starts:
            for cyc in cycles_from(x):
                yield p, cyc


def exists_path_lasso(structure: KripkeStructure, w: str, chi: PathFormula, bound: int) -> bool:
    """Bounded exhaustive lasso search: is there a satisfying lasso within ``bound``?"""
    if bound <= 0:
        raise ValueError("bound must be positive")
    i = structure.check_state(w)
    oracle = Oracle(structure)
    prog = _PathProgram(chi, _strict_leaf(oracle))
    for prefix, cycle in iter_lassos(structure, i, bound):
        if _lasso_values(prog, prefix, cycle)[prog.root]:
            return True
    return False


def _bfs(structure: KripkeStructure, sources) -> set:
    seen = set(sources)
    queue = deque(seen)
    succ = structure.succ
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def ef_inf_closed_form(structure: KripkeStructure, alpha) -> dict:
    """States from which some cycle through an ``alpha`` state is reachable.

    ``alpha`` is a collection of state names.  Plain breadth-first search
    only, so the result is independent of the SCC machinery used elsewhere.
    """
    idx = structure.index
    on_cycle = {idx[x] for x in alpha
                if idx[x] in _bfs(structure, structure.succ[idx[x]])}
    return {w: bool(_bfs(structure, [idx[w]]) & on_cycle) for w in structure.states}
