import itertools

import pytest
from hypothesis import given, settings
from support import (
    ECTL_OPS,
    ctl_formulas,
    kripke_structures,
    plus_formulas,
    state_formula_trees,
)

from ctlfrag.formula import (
    CTL,
    CTLPLUS,
    CTLSTAR,
    ECTL,
    PROPOSITIONAL,
    TRUE,
    And,
    Atom,
    Embed,
    F,
    G,
    Not,
    PathQuant,
    U,
    canonical,
    negation_discipline,
    operator_set,
    size,
    syntactic_class,
    to_nnf,
    to_text,
    token_set,
    walk,
)
from ctlfrag.kripke import KripkeStructure
from ctlfrag.oracle import oracle_table
from ctlfrag.parser import FormulaSyntaxError, parse_formula, parse_path


def test_parse_nested_ctl():
    f = parse_formula("AG EF p")
    assert f == PathQuant("A", G(Embed(PathQuant("E", F(Embed(Atom("p")))))))


def test_parse_constant():
    assert parse_formula("true") == TRUE


def test_parse_until_with_compound_operand():
    f = parse_formula("E[p U (q & ~r)]")
    assert f == PathQuant("E", U(Embed(Atom("p")), Embed(And(Atom("q"), Not(Atom("r"))))))


@pytest.mark.parametrize("text, family", [
    ("AG EF p", CTL),
    ("A(G p & F q)", CTLPLUS),
    ("A G F p", CTLSTAR),
    ("p | ~q", PROPOSITIONAL),
    ("E Fi p", ECTL),
])
def test_syntactic_class(text, family):
    assert syntactic_class(parse_formula(text)) == family


@pytest.mark.parametrize("text, ops", [
    ("AG EF p", {"AG", "EF"}),
    ("p & ~q", set()),
    ("A(G p & F q)", {"A", "G", "F"}),
])
def test_operator_set(text, ops):
    assert operator_set(parse_formula(text)) == ops


@pytest.mark.parametrize("text, disc", [
    ("EF p", "mon"), ("EF ~p", "an"), ("~EF p", "full"), ("EF p & ~(q | r)", "pos"),
])
def test_negation_discipline(text, disc):
    assert negation_discipline(parse_formula(text)) == disc


def test_token_set_splits_paired_operators():
    assert token_set(parse_formula("AG EF p")) == {"A", "G", "E", "F"}
    assert token_set(parse_formula("A(G p & F q)")) == {"A", "G", "F"}


@pytest.mark.parametrize("text, expected", [
    ("~EX p", "AX ~p"),
    ("~E[p U q]", "A[~p R ~q]"),
    ("~(p & EF q)", "~p | AG ~q"),
])
def test_nnf_examples(text, expected):
    assert to_nnf(parse_formula(text)) == parse_formula(expected)


def _all_structures(max_states, props=("p", "q")):
    """Every structure up to ``max_states`` states over ``props`` (edges and labels)."""
    label_sets = [frozenset(c) for r in range(len(props) + 1)
                  for c in itertools.combinations(props, r)]
    for n in range(1, max_states + 1):
        states = [f"s{i}" for i in range(n)]
        succ_sets = [s for r in range(1, n + 1) for s in itertools.combinations(states, r)]
        for succs in itertools.product(succ_sets, repeat=n):
            trans = [(u, v) for u, vs in zip(states, succs) for v in vs]
            for labs in itertools.product(label_sets, repeat=n):
                yield KripkeStructure.build(states, trans, dict(zip(states, labs)))


def test_nnf_example_equivalent_on_small_structures():
    lhs = parse_formula("~(p & EF q)")
    rhs = parse_formula("~p | AG ~q")
    count = 0
    for K in _all_structures(2):
        assert oracle_table(K, lhs) == oracle_table(K, rhs)
        count += 1
    assert count > 100


def test_syntax_errors_carry_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("EF (p &")
    assert info.value.line == 1 and info.value.column > 1
    with pytest.raises(FormulaSyntaxError):
        parse_formula("F p")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("E[p U]")


def test_parse_path_formula():
    assert parse_path("F p & G q") is not None


@settings(max_examples=300, deadline=None)
@given(state_formula_trees())
def test_print_parse_round_trip(f):
    assert parse_formula(to_text(f)) == f


@settings(max_examples=200, deadline=None)
@given(plus_formulas(depth=3, tokens=("A", "E", "X", "F", "G", "U", "R", "Fi", "Gi")))
def test_print_parse_round_trip_plus(f):
    assert canonical(parse_formula(to_text(f))) == canonical(f)


@settings(max_examples=200, deadline=None)
@given(ctl_formulas(depth=4, ops=ECTL_OPS))
def test_nnf_pushes_negation_to_atoms(f):
    g = to_nnf(f)
    assert negation_discipline(g) in ("mon", "an")
    assert syntactic_class(g) in (syntactic_class(f), PROPOSITIONAL) or syntactic_class(f) == PROPOSITIONAL
    assert to_nnf(g) == g


@settings(max_examples=150, deadline=None)
@given(kripke_structures(5), plus_formulas(depth=3))
def test_nnf_preserves_truth(K, f):
    assert oracle_table(K, to_nnf(f)) == oracle_table(K, f)


@settings(max_examples=200, deadline=None)
@given(ctl_formulas(depth=4, ops=ECTL_OPS))
def test_double_negation_normal_form(f):
    assert to_nnf(Not(Not(f))) == to_nnf(f)


def test_size_counts_nodes():
    f = parse_formula("EF p")
    # path/state glue nodes are not counted
    assert size(f) == sum(1 for n in walk(f) if not isinstance(n, Embed))
