"""Pieces shared by the checking engines."""

from __future__ import annotations

import numpy as np

from ..formula import (
    And,
    Atom,
    Const,
    Not,
    Or,
    PathQuant,
    StateFormula,
    children,
)
from ..kripke import KripkeStructure


class FragmentError(ValueError):
    """The formula lies outside the fragment an engine accepts."""


class UnsupportedFormula(FragmentError):
    """The formula needs full CTL* model checking."""


class LabelTable:
    """Truth of state subformulas at every state.

    Subformulas are indexed in bottom-up evaluation order; the last one is
    the checked formula.  Each row is written once.
    """

    def __init__(self, structure: KripkeStructure):
        self.structure = structure
        self.formulas: list[StateFormula] = []
        self.rows: list[np.ndarray] = []
        self._index: dict = {}
        self.counters: dict = {}

    def add(self, f: StateFormula, row: np.ndarray) -> int:
        if f in self._index:
            raise ValueError(f"row for {f} already written")
        row = np.asarray(row, dtype=bool)
        row.setflags(write=False)
        self._index[f] = len(self.formulas)
        self.formulas.append(f)
        self.rows.append(row)
        return self._index[f]

    def __contains__(self, f) -> bool:
        return f in self._index

    def __len__(self):
        return len(self.formulas)

    def index_of(self, f: StateFormula) -> int:
        return self._index[f]

    def row(self, f: StateFormula | None = None) -> np.ndarray:
        return self.rows[-1] if f is None else self.rows[self._index[f]]

    @property
    def root(self) -> StateFormula:
        return self.formulas[-1]

    def __getitem__(self, key) -> bool:
        i, state = key
        return bool(self.rows[i][self.structure.check_state(state)])

    def holds(self, state: str, f: StateFormula | None = None) -> bool:
        return bool(self.row(f)[self.structure.check_state(state)])

    def satisfying(self, f: StateFormula | None = None) -> list:
        row = self.row(f)
        return [s for s, v in zip(self.structure.states, row) if v]

    def as_dict(self, f: StateFormula | None = None) -> dict:
        row = self.row(f)
        return {s: bool(v) for s, v in zip(self.structure.states, row)}


def prop_vector(structure: KripkeStructure, f: StateFormula) -> np.ndarray:
    """Truth vector of a quantifier-free state formula."""
    if isinstance(f, Atom):
        return structure.atom_vector(f.name)
    if isinstance(f, Const):
        return np.full(structure.n, f.value, dtype=bool)
    if isinstance(f, Not):
        return ~prop_vector(structure, f.arg)
    if isinstance(f, And):
        return prop_vector(structure, f.left) & prop_vector(structure, f.right)
    if isinstance(f, Or):
        return prop_vector(structure, f.left) | prop_vector(structure, f.right)
    raise FragmentError(f"not propositional: {f}")


def prop_holds(labels: frozenset, f: StateFormula) -> bool:
    if isinstance(f, Atom):
        return f.name in labels
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not prop_holds(labels, f.arg)
    if isinstance(f, And):
        return prop_holds(labels, f.left) and prop_holds(labels, f.right)
    if isinstance(f, Or):
        return prop_holds(labels, f.left) or prop_holds(labels, f.right)
    raise FragmentError(f"not propositional: {f}")


def state_subformulas(f: StateFormula) -> list:
    """Distinct state subformulas in post-order (operands before operators)."""
    order, seen = [], set()
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            if isinstance(node, StateFormula) and node not in seen:
                seen.add(node)
                order.append(node)
            continue
        if isinstance(node, StateFormula) and node in seen:
            continue
        stack.append((node, True))
        for c in reversed(children(node)):
            stack.append((c, False))
    return order


def innermost_quantified(f: StateFormula) -> list:
    """Distinct path-quantified subformulas without nested quantifiers."""
    out = []
    for g in state_subformulas(f):
        if isinstance(g, PathQuant) and not any(
                isinstance(h, PathQuant) for h in state_subformulas_of_path(g.body)):
            out.append(g)
    return out


def state_subformulas_of_path(p) -> list:
    out = []
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, StateFormula):
            out.append(node)
        stack.extend(children(node))
    return out
