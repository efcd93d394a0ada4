"""Leveled alternating games and their encodings as model checking instances.

A game has levels ``0..p``; level 0 holds the root, edges go from level
``j`` to level ``j+1`` only, and polarity alternates starting from the
root's.  Universal nodes have exactly two ordered successors.  The value
of a node is computed bottom-up: a leaf wins iff it is accepting, an
existential node iff some successor wins, a universal node iff both do.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..formula import (
    And,
    Atom,
    F,
    G,
    Or,
    PathQuant,
    StateFormula,
    X,
    disj,
    embed,
)
from ..kripke import KripkeStructure
from .instance import HardnessInstance, Provenance, digest

EXISTENTIAL, UNIVERSAL = "E", "A"


class GameError(ValueError):
    """The game violates the leveled alternating shape."""


@dataclass(frozen=True)
class AlternatingGame:
    polarity: str
    levels: tuple
    edges: dict
    accepting: frozenset

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(tuple(level) for level in self.levels))
        object.__setattr__(self, "edges", {u: tuple(vs) for u, vs in self.edges.items()})
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        self._validate()

    def _validate(self):
        if self.polarity not in (EXISTENTIAL, UNIVERSAL):
            raise GameError(f"root polarity must be 'E' or 'A', got {self.polarity!r}")
        if not self.levels or len(self.levels[0]) != 1:
            raise GameError("level 0 must hold exactly one root node")
        level_of = {}
        for j, nodes in enumerate(self.levels):
            if not nodes:
                raise GameError(f"level {j} is empty")
            for v in nodes:
                if v in level_of:
                    raise GameError(f"node {v!r} appears on more than one level")
                level_of[v] = j
        p = self.depth
        for u, vs in self.edges.items():
            if u not in level_of:
                raise GameError(f"edge from unknown node {u!r}")
            for v in vs:
                if v not in level_of:
                    raise GameError(f"edge to unknown node {v!r}")
                if level_of[v] != level_of[u] + 1:
                    raise GameError(f"edge {u!r} -> {v!r} skips or reverses a level")
            if len(set(vs)) != len(vs):
                raise GameError(f"node {u!r} lists a successor twice")
        for v, j in level_of.items():
            succ = self.edges.get(v, ())
            if j == p:
                if succ:
                    raise GameError(f"leaf {v!r} has successors")
            elif not succ:
                raise GameError(f"inner node {v!r} has no successor")
            elif self.polarity_at(j) == UNIVERSAL and len(succ) != 2:
                raise GameError(f"universal node {v!r} needs exactly two successors, has {len(succ)}")
        stray = self.accepting - set(self.levels[p])
        if stray:
            raise GameError(f"accepting nodes not on the last level: {sorted(stray)}")
        object.__setattr__(self, "_level_of", level_of)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def root(self) -> str:
        return self.levels[0][0]

    @property
    def nodes(self) -> tuple:
        return tuple(v for level in self.levels for v in level)

    def level(self, v: str) -> int:
        return self._level_of[v]

    def polarity_at(self, j: int) -> str:
        if j % 2 == 0:
            return self.polarity
        return UNIVERSAL if self.polarity == EXISTENTIAL else EXISTENTIAL

    def successors(self, v: str) -> tuple:
        return self.edges.get(v, ())

    def as_json(self) -> dict:
        return {
            "polarity": self.polarity,
            "levels": [list(level) for level in self.levels],
            "edges": {u: list(vs) for u, vs in sorted(self.edges.items())},
            "accepting": sorted(self.accepting),
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlternatingGame":
        try:
            return cls(data["polarity"], data["levels"], data.get("edges", {}),
                       data.get("accepting", ()))
        except (KeyError, TypeError, AttributeError) as exc:
            raise GameError(f"malformed game description: {exc}") from None


def load_game(path: str | Path) -> AlternatingGame:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GameError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from None
    return AlternatingGame.from_json(data)


def game_values(g: AlternatingGame) -> dict:
    """Winning status of every node, evaluated bottom-up."""
    value = {}
    for j in range(g.depth, -1, -1):
        pol = g.polarity_at(j)
        for v in g.levels[j]:
            succ = g.successors(v)
            if j == g.depth:
                value[v] = v in g.accepting
            elif pol == EXISTENTIAL:
                value[v] = any(value[w] for w in succ)
            else:
                value[v] = all(value[w] for w in succ)
    return value


def game_value(g: AlternatingGame) -> bool:
    return game_values(g)[g.root]


def _d(j: int) -> Atom:
    return Atom(f"d{j}")


T = Atom("t")


def _others(i: int, top: int) -> StateFormula:
    """Disjunction of the time stamps ``d_j`` for ``j`` in ``0..top`` except ``i``."""
    return disj([_d(j) for j in range(top + 1) if j != i])


def _provenance(name: str, g: AlternatingGame) -> Provenance:
    return Provenance(name, digest(g.as_json()))


def _plain_structure(g: AlternatingGame, stamps: bool) -> KripkeStructure:
    trans = [(u, v) for u in g.nodes for v in g.successors(u)]
    trans += [(v, v) for v in g.levels[g.depth]]
    labels = {}
    for v in g.nodes:
        lab = {f"d{g.level(v)}"} if stamps else set()
        if v in g.accepting:
            lab.add("t")
        labels[v] = lab
    return KripkeStructure.build(g.nodes, trans, labels)


def gen_game_ax_ex(g: AlternatingGame) -> HardnessInstance:
    """Nested ``AX``/``EX`` over the game graph; no Boolean connectives."""
    f: StateFormula = T
    for i in range(g.depth, 0, -1):
        f = PathQuant(g.polarity_at(i - 1), X(embed(f)))
    return HardnessInstance(_plain_structure(g, stamps=False), g.root, f,
                            game_value(g), _provenance("game-ax-ex", g))


def gen_game_af_eg(g: AlternatingGame) -> HardnessInstance:
    """``AF(d_i & x)`` for universal steps and ``EG(D_i | x)`` for existential ones."""
    p = g.depth
    f: StateFormula = T
    for i in range(p, 0, -1):
        if g.polarity_at(i - 1) == UNIVERSAL:
            f = PathQuant("A", F(embed(And(_d(i), f))))
        else:
            f = PathQuant("E", G(embed(Or(_others(i, p), f))))
    return HardnessInstance(_plain_structure(g, stamps=True), g.root, f,
                            game_value(g), _provenance("game-af-eg", g))


def gen_game_eg_only(g: AlternatingGame) -> HardnessInstance:
    """Encoding with ``EG`` as the only temporal operator.

    Every game node ``v`` gets a plain copy.  A universal node ``u`` with
    ordered successors ``k, k'`` leads only to a dedicated copy of ``k``,
    from there through a bridge (label ``b_i``) to a dedicated copy of
    ``k'`` and on into a trap (label ``z_i``) for its step ``i``.  The only
    path satisfying ``EG(d_{i-1} | (d_i & x) | b_i | z_i)`` from ``u`` runs
    through both copies.  Leaves lead to a sink stamped ``d_{p+1}``, so a
    leaf copy cannot stall the universal check.  Bridges, traps and the
    sink carry no stamp of any step they do not belong to, which keeps the
    extra edges invisible to inner formulas.
    """
    p = g.depth
    states: list[str] = []
    trans: list[tuple[str, str]] = []
    labels: dict = {}

    def stamp(v):
        lab = {f"d{g.level(v)}"}
        if v in g.accepting:
            lab.add("t")
        return lab

    plain = {v: f"n:{v}" for v in g.nodes}
    first, bridge, second = {}, {}, {}
    for v in g.nodes:
        states.append(plain[v])
        labels[plain[v]] = stamp(v)
    for u in g.nodes:
        j = g.level(u)
        if j < p and g.polarity_at(j) == UNIVERSAL:
            k, k2 = g.successors(u)
            first[u], bridge[u], second[u] = f"f:{u}", f"b:{u}", f"s:{u}"
            states += [first[u], bridge[u], second[u]]
            labels[first[u]] = stamp(k)
            labels[bridge[u]] = {f"b{j + 1}"}
            labels[second[u]] = stamp(k2)
    sink = "sink"
    states.append(sink)
    labels[sink] = {f"d{p + 1}"}
    trans.append((sink, sink))
    traps = sorted({g.level(u) + 1 for u in first})
    for i in traps:
        states.append(f"z:{i}")
        labels[f"z:{i}"] = {f"z{i}"}
        trans.append((f"z:{i}", f"z:{i}"))

    def game_edges(copy: str, v: str):
        j = g.level(v)
        if j == p:
            trans.append((copy, sink))
        elif g.polarity_at(j) == EXISTENTIAL:
            trans.extend((copy, plain[w]) for w in g.successors(v))
        else:
            trans.append((copy, first[v]))

    for v in g.nodes:
        game_edges(plain[v], v)
    for u in first:
        k, k2 = g.successors(u)
        game_edges(first[u], k)
        game_edges(second[u], k2)
        trans.append((first[u], bridge[u]))
        trans.append((bridge[u], second[u]))
        trans.append((second[u], f"z:{g.level(u) + 1}"))

    f: StateFormula = T
    for i in range(p, 0, -1):
        if g.polarity_at(i - 1) == UNIVERSAL:
            body = disj([_d(i - 1), And(_d(i), f), Atom(f"b{i}"), Atom(f"z{i}")])
        else:
            body = Or(_others(i, p + 1), f)
        f = PathQuant("E", G(embed(body)))
    structure = KripkeStructure.build(states, trans, labels)
    return HardnessInstance(structure, plain[g.root], f, game_value(g),
                            _provenance("game-eg", g))


def random_game(rng, depth: int, max_nodes: int, polarity: str | None = None,
                accept_prob: float = 0.5) -> AlternatingGame:
    """A random valid game of the given depth with at most ``max_nodes`` nodes."""
    if polarity is None:
        polarity = rng.choice((EXISTENTIAL, UNIVERSAL))
    pol = [polarity if j % 2 == 0 else (UNIVERSAL if polarity == EXISTENTIAL else EXISTENTIAL)
           for j in range(depth)]
    sizes = [2 if q == UNIVERSAL else 1 for q in pol]
    spare = max_nodes - 1 - sum(sizes)
    if spare < 0:
        raise GameError("max_nodes too small for the requested depth")
    for j in range(depth):
        extra = rng.randint(0, min(spare, 2))
        sizes[j] += extra
        spare -= extra
    levels = [["r"]]
    edges: dict = {}
    counter = 0
    for j in range(depth):
        children = [f"v{counter + i}" for i in range(sizes[j])]
        counter += sizes[j]
        for u in levels[j]:
            k = 2 if pol[j] == UNIVERSAL else rng.randint(1, min(2, len(children)))
            edges[u] = rng.sample(children, k)
        levels.append(children)
    accepting = [v for v in levels[-1] if rng.random() < accept_prob]
    return AlternatingGame(polarity, levels, edges, accepting)
