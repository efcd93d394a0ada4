"""Enumerators for the source objects behind the hardness batteries."""

from __future__ import annotations

import itertools

from .circuits import AND_GATE, OR_GATE, MonotoneCircuit
from .cnf import Cnf3
from .games import AlternatingGame, random_game


def _covers(options, below: int, max_k: int):
    """Sets of distinct gates (as predecessor tuples) that read every node below."""
    for k in range(1, max_k + 1):
        for combo in itertools.combinations(options, k):
            used = set().union(*(set(c) for c in combo))
            if len(used) == below:
                yield combo


def _layer_options(kind: str, below: int) -> list:
    if kind == OR_GATE:
        return [c for r in range(1, below + 1) for c in itertools.combinations(range(below), r)]
    return [(a, b) for a in range(below) for b in range(a, below)]


def enumerate_circuits(max_nodes: int = 8, max_inputs: int = 3, num_vars: int = 3):
    """Every leveled alternating circuit with at most ``max_nodes`` nodes.

    Nodes include the input gates; each input layer is a set of at most
    ``max_inputs`` distinct literals over ``num_vars`` variables.  Gates
    in a layer are distinct, AND gates read an unordered pair (possibly the
    same node twice) and OR gates a nonempty set.
    """
    literals = [(v, neg) for v in range(1, num_vars + 1) for neg in (False, True)]

    def layers_above(j: int, below: int, budget: int):
        kind = OR_GATE if j % 2 == 0 else AND_GATE
        if j == 0:
            if kind == OR_GATE and budget >= 1:
                yield [(tuple(range(below)),)]
            return
        # every layer above j needs at least one gate
        for gates in _covers(_layer_options(kind, below), below, budget - j):
            for upper in layers_above(j - 1, len(gates), budget - len(gates)):
                yield upper + [gates]

    for depth in range(1, max_nodes):
        for s in range(1, max_inputs + 1):
            for lits in itertools.combinations(literals, s):
                for layers in layers_above(depth - 1, s, max_nodes - s):
                    yield _assemble(layers, lits, num_vars)


def _assemble(layers, lits, num_vars) -> MonotoneCircuit:
    names = [[f"g{j}_{k}" for k in range(len(layer))] for j, layer in enumerate(layers)]
    inputs = {f"i{k}": lit for k, lit in enumerate(lits)}
    input_names = list(inputs)
    gates = {}
    for j, layer in enumerate(layers):
        kind = OR_GATE if j % 2 == 0 else AND_GATE
        below = names[j + 1] if j + 1 < len(layers) else input_names
        for k, preds in enumerate(layer):
            gates[names[j][k]] = (kind, [below[q] for q in preds])
    return MonotoneCircuit(gates, inputs, "g0_0", num_vars)


def input_vectors(num_vars: int):
    return list(itertools.product((0, 1), repeat=num_vars))


def random_games(rng, count: int, max_depth: int = 4, max_nodes: int = 12):
    games = []
    while len(games) < count:
        depth = rng.randint(0, max_depth)
        polarity = rng.choice(("E", "A"))
        try:
            games.append(random_game(rng, depth, max_nodes, polarity))
        except ValueError:
            continue
    return games


def enumerate_3cnf(max_vars: int = 2, max_clauses: int = 3):
    """All 3CNFs up to clause and literal order: clauses are sorted literal
    triples (repetition allowed), formulas are sets of distinct clauses."""
    for m in range(1, max_vars + 1):
        lits = [l for v in range(1, m + 1) for l in (v, -v)]
        triples = list(itertools.combinations_with_replacement(sorted(lits), 3))
        # formulas that do not mention variable m were already produced for m - 1
        triples_m = triples
        for k in range(1, max_clauses + 1):
            for clauses in itertools.combinations(triples_m, k):
                if any(abs(l) == m for c in clauses for l in c):
                    yield Cnf3(m, clauses)


__all__ = [
    "AlternatingGame", "enumerate_3cnf", "enumerate_circuits", "input_vectors",
    "random_games",
]
