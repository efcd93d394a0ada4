"""Labelling with fresh propositions for CTL+ and ECTL+.

Innermost path-quantified subformulas are decided at every state, replaced
by fresh propositions ``__ps<k>`` and the labelling is extended, until the
formula is propositional.  ``A chi`` is decided as the complement of
``E`` applied to the negation normal form of ``not chi``.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..formula import (
    CTL,
    CTLPLUS,
    CTLSTAR,
    PROPOSITIONAL,
    Atom,
    Embed,
    PAnd,
    PathFormula,
    PNot,
    POr,
    StateFormula,
    X,
    is_propositional,
    map_state,
    path_negate,
    path_nnf,
    syntactic_class,
    token_set,
    walk,
)
from ..kripke import KripkeStructure
from .common import (
    FragmentError,
    LabelTable,
    UnsupportedFormula,
    innermost_quantified,
    prop_holds,
    prop_vector,
)
from .tableau import Tableau

FRESH_PREFIX = "__ps"
AEX_TOKENS = frozenset({"A", "E", "X"})


def _fresh_names(structure: KripkeStructure, f: StateFormula):
    taken = structure.alphabet | {node.name for node in walk(f) if isinstance(node, Atom)}
    for k in itertools.count():
        name = f"{FRESH_PREFIX}{k}"
        if name not in taken:
            yield name


def _label_loop(structure: KripkeStructure, f: StateFormula, decide_exists) -> LabelTable:
    table = LabelTable(structure)
    names = _fresh_names(structure, f)
    labels = [set(lab) for lab in structure.labels]
    restore: dict = {}

    def original(g: StateFormula) -> StateFormula:
        return map_state(g, lambda node: restore.get(node.name) if isinstance(node, Atom) else None)

    current = f
    rounds = 0
    calls = 0
    while True:
        layer = innermost_quantified(current)
        if not layer:
            break
        rounds += 1
        K_round = KripkeStructure(structure.states, structure.transitions,
                                  tuple(frozenset(lab) for lab in labels))
        replace = {}
        for q in layer:
            if q.quantifier == "E":
                row = decide_exists(K_round, q.body)
            else:
                row = ~decide_exists(K_round, path_negate(q.body))
            calls += structure.n
            name = next(names)
            atom = Atom(name)
            for v in np.flatnonzero(row):
                labels[v].add(name)
            full = original(q)
            restore[name] = full
            if full not in table:
                table.add(full, row)
            replace[q] = atom
        current = map_state(current, lambda node: replace.get(node))
    final_labels = tuple(frozenset(lab) for lab in labels)
    root_row = np.array([prop_holds(lab, current) for lab in final_labels], dtype=bool)
    if f not in table:
        table.add(f, root_row)
    elif table.root != f or not np.array_equal(table.row(f), root_row):
        raise AssertionError("root formula labelled out of order")
    table.counters.update(rounds=rounds, path_checks=calls, entries=len(table) * structure.n)
    return table


# ------------------------------------------------------------ {A, E, X}

def _progress(p: PathFormula, labels: frozenset):
    """Consume one position; returns a bool or the obligation for the next position."""
    if isinstance(p, Embed):
        return prop_holds(labels, p.state)
    if isinstance(p, PNot):
        r = _progress(p.arg, labels)
        return (not r) if isinstance(r, bool) else PNot(r)
    if isinstance(p, (PAnd, POr)):
        is_and = isinstance(p, PAnd)
        left = _progress(p.left, labels)
        if isinstance(left, bool) and left != is_and:
            return left
        right = _progress(p.right, labels)
        if isinstance(right, bool) and right != is_and:
            return right
        if isinstance(left, bool):
            return right
        if isinstance(right, bool):
            return left
        return PAnd(left, right) if is_and else POr(left, right)
    if isinstance(p, X):
        return p.arg
    raise FragmentError(f"operator outside {{A,E,X}} in {p}")


def _exists_next_paths(K: KripkeStructure, chi: PathFormula) -> np.ndarray:
    memo: dict = {}

    def search(w: int, obligation: PathFormula) -> bool:
        key = (w, obligation)
        if key in memo:
            return memo[key]
        r = _progress(obligation, K.labels[w])
        if isinstance(r, bool):
            result = r
        else:
            result = any(search(v, r) for v in K.succ[w])
        memo[key] = result
        return result

    return np.array([search(w, chi) for w in range(K.n)], dtype=bool)


def check_ctlplus_aex(structure: KripkeStructure, f: StateFormula) -> LabelTable:
    """Label CTL+ formulas whose operators are among A, E and X."""
    family = syntactic_class(f)
    if family not in (PROPOSITIONAL, CTL, CTLPLUS) or not token_set(f) <= AEX_TOKENS:
        raise FragmentError("engine needs CTL+ with operator tokens among {A,E,X}")
    return _label_loop(structure, f, _exists_next_paths)


# ------------------------------------------------------------- general

def _tableau_exists(K: KripkeStructure, chi: PathFormula) -> np.ndarray:
    cache: dict = {}

    def leaf(s: StateFormula):
        if s not in cache:
            cache[s] = prop_vector(K, s)
        return cache[s]

    return Tableau(K, path_nnf(chi), leaf).exists()


def check_ctlplus_general(structure: KripkeStructure, f: StateFormula) -> LabelTable:
    """Label CTL+ / ECTL+ formulas using the tableau as path oracle."""
    family = syntactic_class(f)
    if family == CTLSTAR:
        raise UnsupportedFormula("formula is outside ECTL+; full CTL* is not supported")
    return _label_loop(structure, f, _tableau_exists)


def exists_path_tableau(structure: KripkeStructure, w: str, chi: PathFormula,
                        base: LabelTable | None = None) -> bool:
    """Is there a path from ``w`` satisfying ``chi``?

    Embedded state formulas are looked up in ``base`` when present there,
    otherwise evaluated with :func:`check_ctlplus_general`.
    """
    i = structure.check_state(w)
    rows: dict = {}

    def leaf(s: StateFormula):
        if s in rows:
            return rows[s]
        if base is not None and s in base:
            row = base.row(s)
        elif is_propositional(s):
            row = prop_vector(structure, s)
        else:
            row = check_ctlplus_general(structure, s).row()
        rows[s] = row
        return row

    return bool(Tableau(structure, path_nnf(chi), leaf).exists()[i])
