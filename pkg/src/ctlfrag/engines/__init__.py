"""Model checking engines and the dispatcher that picks among them."""

from __future__ import annotations

import numpy as np

from ..formula import (
    CTL,
    CTLPLUS,
    CTLSTAR,
    ECTL,
    PROPOSITIONAL,
    PathQuant,
    StateFormula,
    syntactic_class,
    token_set,
)
from ..kripke import KripkeStructure
from .common import FragmentError, LabelTable, UnsupportedFormula, prop_vector
from .ctlplus import (
    AEX_TOKENS,
    check_ctlplus_aex,
    check_ctlplus_general,
    exists_path_tableau,
)
from .labelling import check_ctl, ctl_truth
from .tableau import Tableau, exists_path_vector
from .topdown import TopDownChecker, check_topdown_pos, topdown_fragment

PROPOSITIONAL_ENGINE = "propositional"
TOPDOWN = "topdown"
LABELLING = "labelling"
CTLPLUS_AEX = "ctlplus-aex"
CTLPLUS_GENERAL = "ctlplus"
ORACLE = "oracle"
ENGINES = (PROPOSITIONAL_ENGINE, TOPDOWN, LABELLING, CTLPLUS_AEX, CTLPLUS_GENERAL, ORACLE)


def select_engine(f: StateFormula) -> str:
    """Cheapest engine that accepts ``f``."""
    family = syntactic_class(f)
    if family == CTLSTAR:
        raise UnsupportedFormula("formula is outside ECTL+; full CTL* is not supported")
    if family == PROPOSITIONAL:
        return PROPOSITIONAL_ENGINE
    if topdown_fragment(f) is not None:
        return TOPDOWN
    if family in (CTL, ECTL):
        return LABELLING
    if family == CTLPLUS and token_set(f) <= AEX_TOKENS:
        return CTLPLUS_AEX
    return CTLPLUS_GENERAL


def applicable_engines(f: StateFormula) -> list[str]:
    """Every exact engine that accepts ``f``, cheapest first (the oracle excluded)."""
    family = syntactic_class(f)
    if family == CTLSTAR:
        return []
    out = []
    if family == PROPOSITIONAL:
        out.append(PROPOSITIONAL_ENGINE)
    if topdown_fragment(f) is not None:
        out.append(TOPDOWN)
    if family in (PROPOSITIONAL, CTL, ECTL):
        out.append(LABELLING)
    if family in (PROPOSITIONAL, CTL, CTLPLUS) and token_set(f) <= AEX_TOKENS:
        out.append(CTLPLUS_AEX)
    out.append(CTLPLUS_GENERAL)
    return out


def run_engine(structure: KripkeStructure, f: StateFormula,
               engine: str = "auto") -> tuple[np.ndarray, str, dict]:
    """Truth vector of ``f``, the engine that produced it, and work counters."""
    if engine == "auto":
        engine = select_engine(f)
    if engine == PROPOSITIONAL_ENGINE:
        if syntactic_class(f) != PROPOSITIONAL:
            raise FragmentError("formula is not propositional")
        return prop_vector(structure, f), engine, {"entries": structure.n}
    if engine == TOPDOWN:
        checker = TopDownChecker(structure, f)
        row = np.array([checker.holds(s) for s in structure.states], dtype=bool)
        return row, engine, {"calls": checker.calls,
                             "entries": sum(len(m) - m.count(0) for m in checker.memo)}
    if engine in (LABELLING, CTLPLUS_AEX, CTLPLUS_GENERAL):
        run = {LABELLING: check_ctl, CTLPLUS_AEX: check_ctlplus_aex,
               CTLPLUS_GENERAL: check_ctlplus_general}[engine]
        table = run(structure, f)
        return table.row(), engine, dict(table.counters)
    if engine == ORACLE:
        from ..oracle import Oracle, OracleIndeterminate
        oracle = Oracle(structure)
        values = oracle.values(f)
        for s, v in zip(structure.states, values):
            if v is None:
                raise OracleIndeterminate(s, 0)
        calls = sum(1 for g in oracle._memo if isinstance(g, PathQuant))
        return np.array(values, dtype=bool), engine, {"oracle_calls": calls,
                                                      "entries": len(oracle._memo) * structure.n}
    raise ValueError(f"unknown engine {engine!r}; expected one of {', '.join(ENGINES)}")


def check(structure: KripkeStructure, f: StateFormula, engine: str = "auto") -> np.ndarray:
    """Truth vector of ``f`` over all states, aligned with ``structure.states``.

    ``engine="oracle"`` may leave states undecided; those raise
    :class:`~ctlfrag.oracle.OracleIndeterminate`.
    """
    return run_engine(structure, f, engine)[0]


__all__ = [
    "CTLPLUS_AEX", "CTLPLUS_GENERAL", "ENGINES", "FragmentError",
    "LABELLING", "LabelTable", "ORACLE", "PROPOSITIONAL_ENGINE", "TOPDOWN",
    "Tableau", "TopDownChecker", "UnsupportedFormula", "applicable_engines",
    "check", "check_ctl", "check_ctlplus_aex", "check_ctlplus_general",
    "check_topdown_pos", "ctl_truth", "run_engine", "exists_path_tableau", "exists_path_vector",
    "select_engine", "topdown_fragment",
]
