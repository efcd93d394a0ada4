"""Model checking for fragments of CTL, ECTL and CTL+ with complexity classification."""

from .classifier import (
    ComplexityVerdict,
    FragmentProfile,
    classify,
    classify_formula,
    profile_of,
)
from .engines import (
    FragmentError,
    UnsupportedFormula,
    applicable_engines,
    check,
    check_ctl,
    check_ctlplus_aex,
    check_ctlplus_general,
    check_topdown_pos,
    run_engine,
    select_engine,
)
from .formula import (
    negation_discipline,
    operator_set,
    syntactic_class,
    to_nnf,
    to_text,
    token_set,
)
from .kripke import (
    KripkeStructure,
    elim_atomic_negation,
    load_kripke,
    parse_kripke,
    reflexive_closure,
)
from .oracle import OracleIndeterminate, eval_oracle, exists_path_lasso, oracle_table
from .parser import FormulaSyntaxError, parse_formula

__all__ = [
    "ComplexityVerdict", "FormulaSyntaxError", "FragmentError", "FragmentProfile",
    "KripkeStructure", "OracleIndeterminate", "UnsupportedFormula",
    "applicable_engines", "check", "check_ctl", "check_ctlplus_aex",
    "check_ctlplus_general", "check_topdown_pos", "classify", "classify_formula",
    "elim_atomic_negation", "eval_oracle", "exists_path_lasso", "load_kripke",
    "negation_discipline", "operator_set", "oracle_table", "parse_formula",
    "parse_kripke", "profile_of", "reflexive_closure", "run_engine", "select_engine",
    "syntactic_class", "to_nnf", "to_text", "token_set",
]
