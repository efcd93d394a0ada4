"""Acceptance criteria 1-9, one test each, each with its runtime budget.

Every test records a single PASS/FAIL line that is repeated in the
terminal summary.  Failing criteria are left failing.
"""

from __future__ import annotations

import itertools
import json
import random
import time
import warnings
from pathlib import Path

import numpy as np
import pytest
from support import (
    CTL_OPS,
    ECTL_OPS,
    random_ctl,
    random_kripke,
    random_path,
    random_plus,
    random_reflexive,
)

from ctlfrag.classifier import CLASS_RANK, FragmentProfile, classify
from ctlfrag.engines import (
    CTLPLUS_AEX,
    CTLPLUS_GENERAL,
    LABELLING,
    TOPDOWN,
    applicable_engines,
    check,
    check_ctl,
    check_topdown_pos,
)
from ctlfrag.formula import (
    CTL,
    CTLPLUS,
    ECTL,
    TRUE,
    And,
    F,
    Finf,
    G,
    Not,
    Or,
    PathQuant,
    R,
    U,
    embed,
    negation_discipline,
    operator_set,
    p_not,
    size,
)
from ctlfrag.kripke import KripkeStructure, elim_atomic_negation
from ctlfrag.oracle import Oracle, ef_inf_closed_form
from ctlfrag.reductions import (
    CIRCUIT_GENERATORS,
    CNF_GENERATORS,
    GAME_GENERATORS,
    to_ectl_instance,
)
from ctlfrag.reductions.battery import (
    enumerate_3cnf,
    enumerate_circuits,
    input_vectors,
    random_games,
)

pytestmark = pytest.mark.acceptance

GOLDEN = Path(__file__).parent / "golden" / "classification.json"


def _truth(h) -> bool:
    return bool(check(h.structure, h.formula)[h.structure.index[h.start]])


def _finish(record, n: int, ok: bool, budget: float, elapsed: float, detail: str):
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    record(f"criterion {n}: {status} ({detail}; {elapsed:.2f}s of {budget:g}s budget)")
    assert ok, detail
    assert within, f"took {elapsed:.2f}s, budget {budget}s"


# ----------------------------------------------------------------------- 1

def test_criterion_1_classification_table(acceptance_line):
    golden = json.loads(GOLDEN.read_text())
    t0 = time.perf_counter()
    wrong = []
    for key, (cls, theorem) in golden.items():
        family, ops, disc = key.split("|")
        v = classify(FragmentProfile(family, frozenset(o for o in ops.split(",") if o), disc))
        if (v.complexity_class, v.theorem) != (cls, theorem):
            wrong.append(key)
    ctl_cases = sum(1 for k in golden if k.startswith("CTL|"))

    # mon = an = pos at every operator set
    identity_breaks = 0
    monotone_breaks = 0
    subsets = [frozenset(c) for r in range(11) for c in itertools.combinations(CTL_OPS, r)]
    for ops in subsets:
        classes = {classify(FragmentProfile(CTL, ops, d)).complexity_class
                   for d in ("mon", "an", "pos")}
        identity_breaks += len(classes) != 1
    for disc in ("mon", "an", "pos", "full"):
        rank = {ops: CLASS_RANK[classify(FragmentProfile(CTL, ops, disc)).complexity_class]
                for ops in subsets}
        for ops in subsets:
            for extra in CTL_OPS:
                if extra not in ops and rank[ops | {extra}] < rank[ops]:
                    monotone_breaks += 1
    # Fi/Gi normalization is a table identity
    norm_breaks = 0
    inf = {"AFi": "AF", "EFi": "EF", "AGi": "AG", "EGi": "EG"}
    for r in range(5):
        for extra in itertools.combinations(inf, r):
            for base in subsets[::7]:
                for disc in ("mon", "pos", "full"):
                    a = classify(FragmentProfile(ECTL, base | set(extra), disc))
                    b = classify(FragmentProfile(CTL, base | {inf[e] for e in extra}, disc))
                    norm_breaks += a.complexity_class != b.complexity_class
    elapsed = time.perf_counter() - t0
    ok = not wrong and not identity_breaks and not monotone_breaks and not norm_breaks \
        and ctl_cases == 4096
    _finish(acceptance_line, 1, ok, 1.0, elapsed,
            f"{len(golden) - len(wrong)}/{len(golden)} golden rows ({ctl_cases} CTL), "
            f"identity breaks {identity_breaks}, monotonicity breaks {monotone_breaks}, "
            f"normalization breaks {norm_breaks}")


# ----------------------------------------------------------------------- 2

def _laws(a, b, chi):
    """Pairs of formulas that must agree at every state."""
    na, nb = Not(a), Not(b)
    ea, eb = embed(a), embed(b)
    return [
        ("E/A duality", PathQuant("E", chi), Not(PathQuant("A", p_not(chi)))),
        ("A/E duality", PathQuant("A", chi), Not(PathQuant("E", p_not(chi)))),
        ("F = true U", PathQuant("E", F(ea)), PathQuant("E", U(embed(TRUE), ea))),
        ("F = true U (A)", PathQuant("A", F(ea)), PathQuant("A", U(embed(TRUE), ea))),
        ("G/F duality", PathQuant("E", G(ea)), Not(PathQuant("A", F(embed(na))))),
        ("G/F duality (A)", PathQuant("A", G(ea)), Not(PathQuant("E", F(embed(na))))),
        ("U/R duality", PathQuant("E", R(ea, eb)), Not(PathQuant("A", U(embed(na), embed(nb))))),
        ("U/R duality (A)", PathQuant("A", R(ea, eb)), Not(PathQuant("E", U(embed(na), embed(nb))))),
        ("AU expansion", PathQuant("A", U(ea, eb)),
         And(PathQuant("A", F(eb)), Not(PathQuant("E", U(embed(nb), embed(And(na, nb))))))),
        ("ER expansion", PathQuant("E", R(ea, eb)),
         Or(PathQuant("E", G(eb)), PathQuant("E", U(eb, embed(And(a, b)))))),
    ]


def test_criterion_2_semantics_laws(acceptance_line):
    rng = random.Random(20261016)
    t0 = time.perf_counter()
    violations, indeterminate, comparisons = {}, 0, 0
    for _ in range(1000):
        K = random_kripke(rng, 6)
        a = random_ctl(rng, 2, CTL_OPS)
        b = random_ctl(rng, 2, CTL_OPS)
        chi = random_path(rng, 2)
        oracle = Oracle(K)
        for name, lhs, rhs in _laws(a, b, chi):
            left, right = oracle.values(lhs), oracle.values(rhs)
            for u, v in zip(left, right):
                if u is None or v is None:
                    indeterminate += 1
                elif u != v:
                    violations[name] = violations.get(name, 0) + 1
                comparisons += 1
    elapsed = time.perf_counter() - t0
    ok = not violations and indeterminate == 0
    _finish(acceptance_line, 2, ok, 60.0, elapsed,
            f"{comparisons} pointwise comparisons, violations {violations or 0}, "
            f"indeterminate {indeterminate}")


# ----------------------------------------------------------------------- 3

def _engine_rows(K, f, engine):
    if engine == TOPDOWN:
        return np.array([check_topdown_pos(K, s, f) for s in K.states])
    return check(K, f, engine)


def _agreement_battery(rng, engine, make_formula, count=1000):
    disagreements, indeterminate, pairs = 0, 0, {}
    for _ in range(count):
        K = random_kripke(rng, 6)
        f = make_formula()
        assert engine in applicable_engines(f), (engine, f)
        main = _engine_rows(K, f, engine)
        for other in applicable_engines(f):
            if other == engine:
                continue
            pairs[other] = pairs.get(other, 0) + 1
            disagreements += int(np.sum(main != check(K, f, other)))
        ref = Oracle(K).values(f)
        pairs["oracle"] = pairs.get("oracle", 0) + 1
        for mine, theirs in zip(main, ref):
            if theirs is None:
                indeterminate += 1
            elif bool(mine) != theirs:
                disagreements += 1
    return disagreements, indeterminate, pairs


def test_criterion_3_engine_agreement(acceptance_line):
    rng = random.Random(7)
    t0 = time.perf_counter()
    batteries = {
        LABELLING: lambda: random_ctl(rng, 3, ECTL_OPS),
        TOPDOWN: lambda: random_ctl(rng, 3, rng.choice((("EX", "EF", "EFi"), ("AX", "AG", "AGi"))),
                                    rng.choice(("mon", "an", "pos"))),
        CTLPLUS_AEX: lambda: _plus_only(rng, ("A", "E", "X")),
        CTLPLUS_GENERAL: lambda: _plus_only(rng, ("A", "E", "X", "F", "G", "U", "R", "Fi", "Gi")),
    }
    total_dis, total_ind, total_states, summary = 0, 0, 0, []
    for engine, make in batteries.items():
        if engine == TOPDOWN:
            make = _retry(make, lambda f: TOPDOWN in applicable_engines(f))
        dis, ind, pairs = _agreement_battery(rng, engine, make)
        total_dis += dis
        total_ind += ind
        total_states += 1000 * 6
        summary.append(f"{engine}: pairs {pairs}, disagreements {dis}, indeterminate {ind}")
    elapsed = time.perf_counter() - t0
    ok = total_dis == 0 and total_ind < 0.01 * total_states
    _finish(acceptance_line, 3, ok, 300.0, elapsed, "; ".join(summary))


def _retry(make, accept):
    def go():
        while True:
            f = make()
            if accept(f):
                return f
    return go


def _plus_only(rng, tokens):
    """A formula that really is CTL+ (not plain CTL) over ``tokens``."""
    from ctlfrag.formula import ECTLPLUS, syntactic_class
    while True:
        f = random_plus(rng, 3, tokens)
        if syntactic_class(f) in (CTLPLUS, ECTLPLUS) or rng.random() < 0.1:
            return f


# ----------------------------------------------------------------------- 4

def test_criterion_4_circuit_reductions(acceptance_line):
    t0 = time.perf_counter()
    circuits = list(enumerate_circuits(max_nodes=8, max_inputs=3, num_vars=3))
    wrong, total = {}, 0
    for c in circuits:
        for x in input_vectors(3):
            for name, gen in CIRCUIT_GENERATORS.items():
                h = gen(c, x)
                want = not c.evaluate(x) if name == "circuit-ax" else c.evaluate(x)
                total += 1
                if h.expected != want or _truth(h) != want:
                    wrong[name] = wrong.get(name, 0) + 1
    elapsed = time.perf_counter() - t0
    _finish(acceptance_line, 4, not wrong, 120.0, elapsed,
            f"{len(circuits)} circuits x 8 inputs x 3 generators = {total} instances, "
            f"wrong {wrong or 0}")


# ----------------------------------------------------------------------- 5

def test_criterion_5_game_reductions(acceptance_line):
    from ctlfrag.reductions import game_value
    t0 = time.perf_counter()
    games = random_games(random.Random(5), 500, max_depth=4, max_nodes=12)
    wrong, not_eg_only = {}, 0
    for g in games:
        value = game_value(g)
        for name, gen in GAME_GENERATORS.items():
            h = gen(g)
            if h.expected != value or _truth(h) != value:
                wrong[name] = wrong.get(name, 0) + 1
            if name == "game-eg" and not operator_set(h.formula) <= {"EG"}:
                not_eg_only += 1
    elapsed = time.perf_counter() - t0
    _finish(acceptance_line, 5, not wrong and not not_eg_only, 120.0, elapsed,
            f"{len(games)} games x 3 generators, wrong {wrong or 0}, "
            f"non-EG-only formulas {not_eg_only}")


# ----------------------------------------------------------------------- 6

def test_criterion_6_cnf_reductions(acceptance_line):
    t0 = time.perf_counter()
    formulas = list(enumerate_3cnf(max_vars=2, max_clauses=3))
    wrong = {}
    for cnf in formulas:
        sat = cnf.satisfiable()
        for name, gen in CNF_GENERATORS.items():
            h = gen(cnf)
            if h.expected != sat or _truth(h) != sat:
                wrong[name] = wrong.get(name, 0) + 1
    elapsed = time.perf_counter() - t0
    _finish(acceptance_line, 6, not wrong, 120.0, elapsed,
            f"{len(formulas)} formulas x 2 generators, wrong {wrong or 0}")


# ----------------------------------------------------------------------- 7

def test_criterion_7_ectl_lift(acceptance_line):
    t0 = time.perf_counter()
    broken, total = {}, 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for c in enumerate_circuits(max_nodes=8, max_inputs=3, num_vars=3):
            for x in input_vectors(3):
                for name, gen in CIRCUIT_GENERATORS.items():
                    h = to_ectl_instance(gen(c, x))
                    total += 1
                    if _truth(h) != h.expected:
                        broken[name] = broken.get(name, 0) + 1
        for g in random_games(random.Random(5), 500, max_depth=4, max_nodes=12):
            for name, gen in GAME_GENERATORS.items():
                h = to_ectl_instance(gen(g))
                total += 1
                if _truth(h) != h.expected:
                    broken[name] = broken.get(name, 0) + 1

    rng = random.Random(77)
    closed_form_wrong = 0
    for _ in range(500):
        K = random_reflexive(rng, 6)
        alpha = random_ctl(rng, 1, CTL_OPS)
        want = ef_inf_closed_form(K, [s for s, v in zip(K.states, check(K, alpha)) if v])
        ef_inf = PathQuant("E", Finf(embed(alpha)))
        got = Oracle(K).values(ef_inf)
        closed_form_wrong += sum(1 for s, v in zip(K.states, got) if v != want[s])
    elapsed = time.perf_counter() - t0
    ok = not broken and not closed_form_wrong
    _finish(acceptance_line, 7, ok, 120.0, elapsed,
            f"{total} lifted instances, expected value lost in {broken or 0}; "
            f"EFi closed form mismatches {closed_form_wrong} on 500 reflexive structures")


# ----------------------------------------------------------------------- 8

def test_criterion_8_atomic_negation_elimination(acceptance_line):
    rng = random.Random(8)
    t0 = time.perf_counter()
    changed, still_negated = 0, 0
    for _ in range(1000):
        K = random_kripke(rng, 6)
        f = random_ctl(rng, 4, ECTL_OPS, "an")
        assert negation_discipline(f) in ("mon", "an")
        K2, f2 = elim_atomic_negation(K, f)
        if negation_discipline(f2) != "mon":
            still_negated += 1
        before = Oracle(K).values(f)
        after = check(K2, f2)
        changed += sum(1 for u, v in zip(before, after) if u is None or u != bool(v))
    elapsed = time.perf_counter() - t0
    _finish(acceptance_line, 8, not changed and not still_negated, 60.0, elapsed,
            f"1000 instances, pointwise changes {changed}, outputs with negation {still_negated}")


# ----------------------------------------------------------------------- 9

def _big_structure(rng, n=10_000):
    states = [f"w{i}" for i in range(n)]
    trans = [(states[i], states[rng.randrange(n)]) for i in range(n) for _ in range(2)]
    labels = {s: {p for p in ("p", "q", "r") if rng.random() < 0.2} for s in states}
    return KripkeStructure.build(states, trans, labels)


def _sized_pos_formula(rng, target=100):
    while True:
        f = random_ctl(rng, 12, ("EX", "EF"), "an")
        if target <= size(f) <= target + 5:
            return f


def test_criterion_9_performance(acceptance_line):
    rng = random.Random(9)
    K = _big_structure(rng)
    f = _sized_pos_formula(rng)
    assert operator_set(f) <= {"EX", "EF"}
    t0 = time.perf_counter()
    top = np.array([check_topdown_pos(K, s, f) for s in K.states[:1]])
    t_single = time.perf_counter() - t0
    t0 = time.perf_counter()
    from ctlfrag.engines import TopDownChecker
    checker = TopDownChecker(K, f)
    top_all = np.array([checker.holds(s) for s in K.states])
    t_top = time.perf_counter() - t0 + t_single
    t0 = time.perf_counter()
    lab = check_ctl(K, f).row()
    t_lab = time.perf_counter() - t0
    agree = bool(np.array_equal(top_all, lab)) and bool(top[0] == lab[0])
    ok = agree and t_top < 2.0 and t_lab < 10.0
    status = "PASS" if ok else "FAIL"
    acceptance_line(f"criterion 9: {status} (|W|={K.n}, |f|={size(f)}; top-down all states "
                    f"{t_top:.2f}s of 2s, labelling {t_lab:.2f}s of 10s, agree {agree})")
    assert agree
    assert t_top < 2.0
    assert t_lab < 10.0
