"""Global fixpoint labelling for CTL and ECTL."""

from __future__ import annotations

import numpy as np

from ..formula import (
    CTL,
    ECTL,
    PROPOSITIONAL,
    And,
    Atom,
    Const,
    F,
    Finf,
    G,
    Ginf,
    Not,
    Or,
    R,
    StateFormula,
    U,
    X,
    syntactic_class,
)
from ..kripke import KripkeStructure
from .common import FragmentError, LabelTable


class _Vectors:
    """Vectorized one-step operators over a fixed structure."""

    def __init__(self, structure: KripkeStructure, trace: list | None):
        self.K = structure
        self.n = structure.n
        self.src, self.dst = structure.edge_arrays
        self.trace = trace

    def ex(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[self.src[v[self.dst]]] = True
        return out

    def eu(self, a: np.ndarray, b: np.ndarray, label: str = "EU") -> np.ndarray:
        z = b.copy()
        iterates = [z]
        for _ in range(self.n + 1):
            nxt = b | (a & self.ex(z))
            if np.array_equal(nxt, z):
                break
            z = nxt
            iterates.append(z)
        else:
            raise AssertionError("least fixpoint did not stabilize")
        self._record(label, iterates)
        return z

    def eg(self, a: np.ndarray, label: str = "EG") -> np.ndarray:
        z = a.copy()
        iterates = [z]
        for _ in range(self.n + 1):
            nxt = a & self.ex(z)
            if np.array_equal(nxt, z):
                break
            z = nxt
            iterates.append(z)
        else:
            raise AssertionError("greatest fixpoint did not stabilize")
        self._record(label, iterates)
        return z

    def ef(self, a: np.ndarray) -> np.ndarray:
        return self.eu(np.ones(self.n, dtype=bool), a, "EF")

    def efi(self, a: np.ndarray) -> np.ndarray:
        index = self.K.graph_index
        seeds = np.zeros(self.n, dtype=bool)
        for v in np.flatnonzero(a):
            if index.nontrivial[index.comp[v]]:
                seeds[v] = True
        return self.eu(np.ones(self.n, dtype=bool), seeds, "EFi")

    def egi(self, a: np.ndarray) -> np.ndarray:
        return self.ef(self.eg(a))

    def _record(self, label, iterates):
        if self.trace is not None:
            self.trace.append((label, iterates))


def _operand(body):
    return body.arg.state


def _operands(body):
    return body.left.state, body.right.state


def check_ctl(structure: KripkeStructure, f: StateFormula,
              trace: list | None = None) -> LabelTable:
    """Label every state with every subformula of a CTL or ECTL formula.

    ``trace``, when given, receives ``(operator, iterates)`` for each
    fixpoint computation.
    """
    family = syntactic_class(f)
    if family not in (PROPOSITIONAL, CTL, ECTL):
        raise FragmentError(f"labelling engine needs CTL or ECTL shape, got {family}")
    vec = _Vectors(structure, trace)
    table = LabelTable(structure)
    _label(f, structure, vec, table)
    table.counters["entries"] = len(table) * structure.n
    return table


def _label(f, K, vec, table):
    order = []
    stack = [(f, False)]
    seen = set()
    while stack:
        node, done = stack.pop()
        if node in seen:
            continue
        if done:
            seen.add(node)
            order.append(node)
            continue
        stack.append((node, True))
        stack.extend((c, False) for c in reversed(_state_children(node)))
    for node in order:
        table.add(node, _row(node, K, vec, table))


def _state_children(s):
    if isinstance(s, (Atom, Const)):
        return ()
    if isinstance(s, Not):
        return (s.arg,)
    if isinstance(s, (And, Or)):
        return (s.left, s.right)
    body = s.body
    if isinstance(body, (U, R)):
        return _operands(body)
    return (_operand(body),)


def _row(node, K, vec, table) -> np.ndarray:
    if isinstance(node, Atom):
        return K.atom_vector(node.name)
    if isinstance(node, Const):
        return np.full(K.n, node.value, dtype=bool)
    if isinstance(node, Not):
        return ~table.row(node.arg)
    if isinstance(node, And):
        return table.row(node.left) & table.row(node.right)
    if isinstance(node, Or):
        return table.row(node.left) | table.row(node.right)
    q, body = node.quantifier, node.body
    if isinstance(body, (U, R)):
        a, b = (table.row(s) for s in _operands(body))
    else:
        a = table.row(_operand(body))
    exist = q == "E"
    if isinstance(body, X):
        return vec.ex(a) if exist else ~vec.ex(~a)
    if isinstance(body, F):
        return vec.ef(a) if exist else ~vec.eg(~a)
    if isinstance(body, G):
        return vec.eg(a) if exist else ~vec.ef(~a)
    if isinstance(body, Finf):
        return vec.efi(a) if exist else ~vec.egi(~a)
    if isinstance(body, Ginf):
        return vec.egi(a) if exist else ~vec.efi(~a)
    if isinstance(body, U):
        if exist:
            return vec.eu(a, b)
        return _au(vec, a, b)
    if isinstance(body, R):
        if exist:
            return ~_au(vec, ~a, ~b)
        return ~vec.eu(~a, ~b)
    raise FragmentError(f"unexpected path operator in {node}")


def _au(vec, a, b):
    # A[a U b] = not E[~b U (~a & ~b)] and not EG ~b
    return ~vec.eu(~b, ~a & ~b) & ~vec.eg(~b)


def ctl_truth(structure: KripkeStructure, f: StateFormula) -> dict:
    return check_ctl(structure, f).as_dict()

