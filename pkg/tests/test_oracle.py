import random

import pytest
from hypothesis import given, settings
from support import kripke_structures, random_kripke, random_path, randoms

from ctlfrag.formula import Embed, Finf, PathQuant
from ctlfrag.kripke import KripkeStructure, parse_kripke, reflexive_closure
from ctlfrag.oracle import (
    Lasso,
    Oracle,
    OracleIndeterminate,
    ef_inf_closed_form,
    eval_oracle,
    exists_path_lasso,
    lasso_satisfies,
    oracle_table,
)
from ctlfrag.parser import parse_formula, parse_path
from ctlfrag.reductions import AlternatingGame, diamond_chain, gen_game_ax_ex

FOUR = parse_kripke("""kripke
states: s0 s1 s2 s3
trans: s0->s1 s0->s2 s1->s1 s2->s3 s3->s2 s3->s0
label: s0: p
label: s1: q
label: s2: p q
""")

# frozen from exhaustive lasso enumeration at bound 8 on FOUR (states s0..s3)
FROZEN_PATHS = [
    ("F q & G p", [False, False, False, False]),
    ("G F p", [True, False, True, True]),
    ("F G q", [True, True, True, True]),
    ("[p U q]", [True, True, True, False]),
    ("X X q", [True, True, True, True]),
    ("Fi (p & q)", [True, False, True, True]),
    ("Gi ~p", [True, True, True, True]),
    ("[p R q] | X ~p", [True, True, True, False]),
    ("F p & F ~p & G (p | q)", [True, False, False, False]),
    ("F (p & X ~p) & Gi ~q", [False, False, False, False]),
]


def loop(label):
    return KripkeStructure.build(["s"], [("s", "s")], {"s": set(label)})


def test_constant_path():
    K = loop("p")
    assert lasso_satisfies(K, Lasso((), ("s",)), parse_path("G p"))


def test_once_versus_infinitely_often():
    K = KripkeStructure.build(["s0", "s1"], [("s0", "s1"), ("s1", "s1")], {"s0": {"p"}})
    lasso = Lasso(("s0",), ("s1",))
    assert lasso_satisfies(K, lasso, parse_path("F p"))
    assert not lasso_satisfies(K, lasso, parse_path("Fi p"))


def test_until_on_lasso():
    K = KripkeStructure.build(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "c")],
                              {"a": {"p"}, "b": {"p"}, "c": {"q"}})
    assert lasso_satisfies(K, Lasso(("a", "b"), ("c",)), parse_path("[p U q]"))


def test_invalid_lasso_rejected():
    K = KripkeStructure.build(["a", "b"], [("a", "b"), ("b", "b")], {})
    with pytest.raises(ValueError):
        lasso_satisfies(K, Lasso((), ("a",)), parse_path("G p"))


def test_next_true_everywhere():
    K = FOUR
    assert all(exists_path_lasso(K, s, parse_path("X true"), 2) for s in K.states)


def test_globally_false_nowhere():
    assert not any(exists_path_lasso(FOUR, s, parse_path("G false"), 4) for s in FOUR.states)


def test_bound_must_be_positive():
    with pytest.raises(ValueError):
        exists_path_lasso(FOUR, "s0", parse_path("F p"), 0)


@pytest.mark.parametrize("a, b", [("x1", "x2"), ("x1", "nx1"), ("nx1", "nx2"), ("x2", "nx2")])
def test_diamond_collects_both(a, b):
    K = diamond_chain(2)
    chi = parse_path(f"F {a} & F {b}")
    different_variables = a[-1] != b[-1]
    assert exists_path_lasso(K, "y0", chi, 6) == different_variables
    assert eval_oracle(K, "y0", PathQuant("E", chi)) == different_variables


@pytest.mark.parametrize("chi, values", FROZEN_PATHS)
def test_frozen_path_values(chi, values):
    f = PathQuant("E", parse_path(chi))
    assert [oracle_table(FOUR, f)[s] for s in FOUR.states] == values


def test_ag_p_on_loop():
    assert eval_oracle(loop("p"), "s", parse_formula("AG p"))


def test_until_with_unreachable_goal():
    K = KripkeStructure.build(["a", "b"], [("a", "b"), ("b", "b")], {"a": {"p"}, "b": {"p"}})
    assert not eval_oracle(K, "a", parse_formula("E[p U q]"))


def test_ag_ef_on_two_cycle():
    K = KripkeStructure.build(["a", "b"], [("a", "b"), ("b", "a")], {"a": {"p"}})
    assert eval_oracle(K, "a", parse_formula("AG EF p"))
    assert eval_oracle(K, "b", parse_formula("AG EF p"))


def test_tiny_bound_is_indeterminate_not_wrong():
    K = KripkeStructure.build([f"s{i}" for i in range(4)],
                              [(f"s{i}", f"s{i + 1}") for i in range(3)] + [("s3", "s3")],
                              {"s3": {"p"}})
    f = parse_formula("EF p")
    with pytest.raises(OracleIndeterminate):
        eval_oracle(K, "s0", f, bound=1)
    assert eval_oracle(K, "s0", f, bound=1, escalate=True, cap=8)


def test_witnesses_are_genuine_lassos():
    oracle = Oracle(FOUR)
    oracle.values(parse_formula("E(F p & F ~p & G (p | q))"))
    assert oracle.witnesses
    for (chi, state), lasso in oracle.witnesses.items():
        assert lasso.states()[0] == state
        assert lasso_satisfies(FOUR, lasso, chi)


@settings(max_examples=120, deadline=None)
@given(kripke_structures(3), randoms)
def test_oracle_agrees_with_lasso_enumeration(K, rng):
    f = PathQuant("E", random_path(rng, 2, ("E", "X", "F", "G", "U", "R", "Fi", "Gi")))
    bound = K.n + 1
    oracle = Oracle(K)
    table = dict(zip(K.states, oracle.values(f)))
    for s in K.states:
        found = exists_path_lasso(K, s, f.body, bound)
        # enumeration is sound at any bound and complete once the witness fits
        if found:
            assert table[s] is True
        witness = oracle.witnesses.get((f.body, s))
        if witness is not None and max(len(witness.prefix), len(witness.cycle)) <= bound:
            assert found


def test_ef_inf_on_reflexive_game_structure():
    g = AlternatingGame("E", [["r"], ["a", "b"]], {"r": ["a", "b"]}, ["b"])
    K = reflexive_closure(gen_game_ax_ex(g).structure)
    f = PathQuant("E", Finf(Embed(parse_formula("t"))))
    assert eval_oracle(K, "r", f) is True
    g2 = AlternatingGame("E", [["r"], ["a", "b"]], {"r": ["a", "b"]}, [])
    K2 = reflexive_closure(gen_game_ax_ex(g2).structure)
    assert eval_oracle(K2, "r", f) is False


def test_ef_inf_closed_form_random():
    rng = random.Random(3)
    for _ in range(100):
        K = random_kripke(rng, 6)
        alpha = [s for s in K.states if rng.random() < 0.3]
        want = ef_inf_closed_form(K, alpha)
        f = PathQuant("E", Finf(Embed(parse_formula(" | ".join(alpha) if alpha else "false"))))
        K2 = KripkeStructure.build(K.states, K.transitions, {s: {s} for s in K.states})
        assert oracle_table(K2, f) == want
