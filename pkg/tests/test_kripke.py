
import pytest
from hypothesis import given, settings
from support import ECTL_OPS, ctl_formulas, kripke_structures

from ctlfrag.formula import negation_discipline
from ctlfrag.kripke import (
    KripkeError,
    KripkeStructure,
    ModelSyntaxError,
    TotalityError,
    build_index,
    elim_atomic_negation,
    kripke_from_json,
    kripke_to_json,
    kripke_to_text,
    parse_kripke,
    reflexive_closure,
)
from ctlfrag.oracle import oracle_table
from ctlfrag.parser import parse_formula
from ctlfrag.reductions import AlternatingGame, diamond_chain, gen_game_eg_only


def brute_closure(K):
    """Transitive closure by repeated squaring over explicit pairs."""
    pairs = set(K.transitions)
    while True:
        extra = {(a, d) for (a, b) in pairs for (c, d) in pairs if b == c} - pairs
        if not extra:
            return pairs
        pairs |= extra


def test_single_loop_is_valid():
    K = KripkeStructure.build(["s0"], [("s0", "s0")], {"s0": {"p"}})
    assert K.n == 1 and K.label("s0") == {"p"}


def test_dead_end_names_the_state():
    with pytest.raises(TotalityError, match="s1"):
        KripkeStructure.build(["s0", "s1"], [("s0", "s1")], {})


def test_repair_adds_self_loop():
    K = KripkeStructure.build(["s0", "s1"], [("s0", "s1")], {}, repair=True)
    assert ("s1", "s1") in K.transitions


def test_diamond_m1():
    K = diamond_chain(1)
    assert K.n == 4 and len(K.transitions) == 5
    assert all(K.label(s) == {s} for s in K.states)


def test_reach_single_loop():
    K = KripkeStructure.build(["s"], [("s", "s")], {})
    idx = build_index(K)
    assert idx.reach_pairs() == {("s", "s")}
    assert idx.cyclic == {"s"}


def test_reach_chain():
    K = KripkeStructure.build(["s0", "s1"], [("s0", "s1"), ("s1", "s1")], {})
    idx = build_index(K)
    assert idx.cyclic == {"s1"}
    assert idx.reaches("s0", "s1") and not idx.reaches("s1", "s0")


def test_eg_only_structure_traps_and_sink_are_cyclic():
    g = AlternatingGame("A", [["r"], ["v0", "v1"]], {"r": ["v0", "v1"]}, ["v0"])
    K = gen_game_eg_only(g).structure
    closure = brute_closure(K)
    cyclic = {s for s in K.states if (s, s) in closure}
    assert build_index(K).cyclic == cyclic
    assert {"z:1", "sink"} <= cyclic
    leaf_copies = [s for s in K.states if s.split(":")[-1] in ("v0", "v1")]
    assert leaf_copies and all((s, "sink") in closure for s in leaf_copies)


@settings(max_examples=200, deadline=None)
@given(kripke_structures(7))
def test_index_matches_brute_force(K):
    closure = brute_closure(K)
    idx = build_index(K)
    assert idx.proper_reach_pairs() == closure
    assert idx.reach_pairs() == closure | {(s, s) for s in K.states}
    assert idx.cyclic == {s for s in K.states if (s, s) in closure}


def test_reflexive_closure_idempotent():
    K = KripkeStructure.build(["a"], [("a", "a")], {})
    assert reflexive_closure(K).transitions == K.transitions


def test_reflexive_closure_chain():
    K = KripkeStructure.build(["s0", "s1"], [("s0", "s1"), ("s1", "s1")], {})
    assert set(reflexive_closure(K).transitions) - set(K.transitions) == {("s0", "s0")}


def test_reflexive_closure_diamond_count():
    K = diamond_chain(1)
    missing = sum(1 for s in K.states if (s, s) not in K.transitions)
    assert len(reflexive_closure(K).transitions) == len(K.transitions) + missing


def test_elim_negated_atom():
    K = KripkeStructure.build(["s"], [("s", "s")], {"s": set()})
    K2, f2 = elim_atomic_negation(K, parse_formula("~p"))
    assert f2 == parse_formula("q_p")
    assert K2.label("s") == {"q_p"}


def test_elim_under_ef():
    K = KripkeStructure.build(["s0", "s1"], [("s0", "s1"), ("s1", "s1")],
                              {"s0": {"p"}, "s1": set()})
    f = parse_formula("EF ~p")
    K2, f2 = elim_atomic_negation(K, f)
    assert f2 == parse_formula("EF q_p")
    assert oracle_table(K2, f2)["s0"] is True == oracle_table(K, f)["s0"]


def test_elim_negation_free_is_identity_on_formula():
    K = KripkeStructure.build(["s"], [("s", "s")], {"s": {"p"}})
    f = parse_formula("AG p")
    K2, f2 = elim_atomic_negation(K, f)
    assert f2 == f and K2.states == K.states


def test_elim_rejects_full_negation():
    K = KripkeStructure.build(["s"], [("s", "s")], {})
    with pytest.raises(ValueError):
        elim_atomic_negation(K, parse_formula("~EF p"))


@settings(max_examples=150, deadline=None)
@given(kripke_structures(6), ctl_formulas(depth=4, ops=ECTL_OPS, negation="an"))
def test_elim_preserves_truth(K, f):
    K2, f2 = elim_atomic_negation(K, f)
    assert negation_discipline(f2) == "mon"
    assert oracle_table(K2, f2) == oracle_table(K, f)


MODEL = """kripke
# two states
states: a b
trans: a->b b->a
label: a: p q
"""


def test_text_format():
    K = parse_kripke(MODEL)
    assert K.states == ("a", "b") or list(K.states) == ["a", "b"]
    assert K.label("a") == {"p", "q"} and K.label("b") == set()


@pytest.mark.parametrize("text, line", [
    ("states: a\n", 1),
    ("kripke\nstates: a a\n", 2),
    ("kripke\nstates: a\ntrans: a-b\n", 3),
    ("kripke\nstates: a\nfoo: x\n", 3),
])
def test_text_format_errors(text, line):
    with pytest.raises(ModelSyntaxError) as info:
        parse_kripke(text)
    assert info.value.line == line


def test_undeclared_state_in_transition():
    with pytest.raises(KripkeError):
        parse_kripke("kripke\nstates: a\ntrans: a->b\n")


@settings(max_examples=100, deadline=None)
@given(kripke_structures(6))
def test_formats_round_trip(K):
    for K2 in (parse_kripke(kripke_to_text(K)), kripke_from_json(kripke_to_json(K))):
        assert list(K2.states) == list(K.states)
        assert set(K2.transitions) == set(K.transitions)
        assert all(K2.label(s) == K.label(s) for s in K.states)
