"""Random structures and formulas shared by the property and acceptance tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from ctlfrag.formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    F,
    Finf,
    G,
    Ginf,
    Not,
    Or,
    PathQuant,
    R,
    U,
    X,
    embed,
    p_and,
    p_not,
    p_or,
)
from ctlfrag.kripke import KripkeStructure, reflexive_closure

PROPS = ("p", "q", "r")

UNARY = {"X": X, "F": F, "G": G, "Fi": Finf, "Gi": Ginf}
BINARY = {"U": U, "R": R}

CTL_OPS = ("AX", "EX", "AF", "EF", "AG", "EG", "AU", "EU", "AR", "ER")
ECTL_OPS = CTL_OPS + ("AFi", "EFi", "AGi", "EGi")


def random_kripke(rng: random.Random, max_states: int = 6, props=PROPS,
                  max_out: int = 3) -> KripkeStructure:
    n = rng.randint(1, max_states)
    states = [f"s{i}" for i in range(n)]
    trans = []
    for u in states:
        for v in rng.sample(states, rng.randint(1, min(max_out, n))):
            trans.append((u, v))
    labels = {s: {p for p in props if rng.random() < 0.4} for s in states}
    return KripkeStructure.build(states, trans, labels)


def random_reflexive(rng: random.Random, max_states: int = 6) -> KripkeStructure:
    return reflexive_closure(random_kripke(rng, max_states))


def _leaf(rng, negation, props):
    roll = rng.random()
    if roll < 0.08:
        return rng.choice((TRUE, FALSE))
    a = Atom(rng.choice(props))
    if negation != "mon" and rng.random() < 0.3:
        return Not(a)
    return a


def random_ctl(rng: random.Random, depth: int, ops=CTL_OPS, negation: str = "full",
               props=PROPS):
    """A state formula over the paired operators ``ops`` of height at most ``depth``."""
    if depth <= 0 or rng.random() < 0.2:
        return _leaf(rng, negation, props)
    kinds = ["and", "or", "op", "op", "op"]
    if negation == "full":
        kinds.append("not")
    elif negation == "pos":
        kinds.append("propnot")
    kind = rng.choice(kinds) if ops else rng.choice(["and", "or"])
    sub = lambda: random_ctl(rng, depth - 1, ops, negation, props)
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    if kind == "not":
        return Not(sub())
    if kind == "propnot":
        return Not(random_ctl(rng, depth - 1, (), "full", props))
    op = rng.choice(ops)
    quant, temporal = op[0], op[1:]
    if temporal in BINARY:
        body = BINARY[temporal](embed(sub()), embed(sub()))
    else:
        body = UNARY[temporal](embed(sub()))
    return PathQuant(quant, body)


def _random_path(rng, depth, tokens, negation, props, budget):
    temporal = [t for t in tokens if t in UNARY or t in BINARY]
    if budget[0] <= 1 or depth <= 0 or rng.random() < 0.45:
        budget[0] -= 1
        sub = lambda: embed(random_plus(rng, depth - 1, tokens, negation, props))
        t = rng.choice(temporal)
        if t in BINARY:
            return BINARY[t](sub(), sub())
        return UNARY[t](sub())
    kinds = ["and", "or"] + (["not"] if negation == "full" else [])
    kind = rng.choice(kinds)
    part = lambda: _random_path(rng, depth, tokens, negation, props, budget)
    if kind == "and":
        return p_and(part(), part())
    if kind == "or":
        return p_or(part(), part())
    return p_not(part())


def random_plus(rng: random.Random, depth: int, tokens=("A", "E", "X", "F", "G", "U", "R"),
                negation: str = "full", props=PROPS, max_temporal: int = 3):
    """A CTL+ state formula over the separate tokens ``tokens``."""
    quants = [t for t in tokens if t in ("A", "E")]
    if depth <= 0 or rng.random() < 0.2 or not quants:
        return _leaf(rng, negation, props)
    kinds = ["and", "or", "q", "q", "q"]
    if negation == "full":
        kinds.append("not")
    kind = rng.choice(kinds)
    sub = lambda: random_plus(rng, depth - 1, tokens, negation, props, max_temporal)
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    if kind == "not":
        return Not(sub())
    body = _random_path(rng, depth, tokens, negation, props, [max_temporal])
    return PathQuant(rng.choice(quants), body)


# ------------------------------------------------------------ strategies

randoms = st.randoms(use_true_random=False)


@st.composite
def kripke_structures(draw, max_states=6):
    return random_kripke(draw(randoms), max_states)


@st.composite
def ctl_formulas(draw, depth=3, ops=CTL_OPS, negation="full"):
    return random_ctl(draw(randoms), depth, ops, negation)


@st.composite
def plus_formulas(draw, depth=3, tokens=("A", "E", "X", "F", "G", "U", "R"), negation="full"):
    return random_plus(draw(randoms), depth, tokens, negation)


def atoms_strategy():
    return st.sampled_from(PROPS).map(Atom)


def state_formula_trees(max_leaves=12):
    """Genuinely shrinkable CTL/ECTL trees for syntax round trips."""
    leaf = st.one_of(atoms_strategy(), st.sampled_from((TRUE, FALSE)))

    def extend(children):
        unary = st.builds(lambda q, op, a: PathQuant(q, UNARY[op](embed(a))),
                          st.sampled_from("AE"), st.sampled_from(sorted(UNARY)), children)
        binary = st.builds(lambda q, op, a, b: PathQuant(q, BINARY[op](embed(a), embed(b))),
                           st.sampled_from("AE"), st.sampled_from(sorted(BINARY)),
                           children, children)
        return st.one_of(st.builds(Not, children), st.builds(And, children, children),
                         st.builds(Or, children, children), unary, binary)

    return st.recursive(leaf, extend, max_leaves=max_leaves)


def random_path(rng: random.Random, depth: int = 2,
                tokens=("A", "E", "X", "F", "G", "U", "R"), negation: str = "full",
                max_temporal: int = 3):
    """A Boolean combination of temporal operators over state formulas."""
    return _random_path(rng, depth, tokens, negation, PROPS, [max_temporal])
