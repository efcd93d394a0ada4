"""Kripke structures: validation, graph index, file formats and relabelling."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .formula import (
    AN,
    Atom,
    Const,
    Not,
    StateFormula,
    atoms,
    discipline_leq,
    map_state,
    negation_discipline,
)
from .graphs import nontrivial_components, tarjan_scc


class KripkeError(ValueError):
    """Malformed structure or model file."""


class TotalityError(KripkeError):
    def __init__(self, state: str):
        super().__init__(f"state {state!r} has no successor (transition relation is not total)")
        self.state = state


class ModelSyntaxError(KripkeError):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


@dataclass(frozen=True, eq=True)
class KripkeStructure:
    """Finite Kripke structure ``(W, R, eta)`` with a total transition relation.

    ``labels`` is aligned with ``states``.  Use :meth:`build` to construct
    from a label mapping.
    """

    states: tuple
    transitions: frozenset
    labels: tuple

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            seen = set()
            for s in self.states:
                if s in seen:
                    raise KripkeError(f"duplicate state {s!r}")
                seen.add(s)
        if not self.states:
            raise KripkeError("a Kripke structure needs at least one state")
        if len(self.labels) != len(self.states):
            raise KripkeError("labels must be aligned with states")
        known = set(self.states)
        for u, v in self.transitions:
            for end in (u, v):
                if end not in known:
                    raise KripkeError(f"transition {u}->{v} uses unknown state {end!r}")
        has_succ = {u for u, _ in self.transitions}
        for s in self.states:
            if s not in has_succ:
                raise TotalityError(s)

    @classmethod
    def build(cls, states: Iterable[str], transitions: Iterable[tuple[str, str]],
              labels: Mapping[str, Iterable[str]] | None = None,
              repair: bool = False) -> "KripkeStructure":
        """Construct and validate; ``repair`` adds self-loops on sink states."""
        states = tuple(states)
        transitions = set(transitions)
        labels = labels or {}
        known = set(states)
        for s in labels:
            if s not in known:
                raise KripkeError(f"label for unknown state {s!r}")
        if repair:
            has_succ = {u for u, _ in transitions}
            transitions |= {(s, s) for s in states if s not in has_succ}
        return cls(states, frozenset(transitions),
                   tuple(frozenset(labels.get(s, ())) for s in states))

    # ---- lookups

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @property
    def n(self) -> int:
        return len(self.states)

    @cached_property
    def succ(self) -> tuple:
        out = [[] for _ in self.states]
        idx = self.index
        for u, v in self.transitions:
            out[idx[u]].append(idx[v])
        return tuple(tuple(sorted(row)) for row in out)

    @cached_property
    def pred(self) -> tuple:
        out = [[] for _ in self.states]
        for u, row in enumerate(self.succ):
            for v in row:
                out[v].append(u)
        return tuple(tuple(row) for row in out)

    @cached_property
    def edge_arrays(self) -> tuple:
        """``(src, dst)`` integer arrays, one entry per transition."""
        src = [u for u, row in enumerate(self.succ) for _ in row]
        dst = [v for row in self.succ for v in row]
        return np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)

    @cached_property
    def alphabet(self) -> frozenset:
        return frozenset().union(*self.labels)

    def label(self, state: str) -> frozenset:
        return self.labels[self.index[state]]

    @property
    def labelling(self) -> dict:
        return dict(zip(self.states, self.labels))

    def successors(self, state: str) -> list:
        return [self.states[v] for v in self.succ[self.index[state]]]

    def atom_vector(self, name: str) -> np.ndarray:
        """Boolean vector of the states labelled with ``name``."""
        return np.array([name in lab for lab in self.labels], dtype=bool)

    def check_state(self, state: str) -> int:
        try:
            return self.index[state]
        except KeyError:
            raise KripkeError(f"unknown state {state!r}") from None

    @cached_property
    def graph_index(self) -> "GraphIndex":
        return GraphIndex(self)

    def __repr__(self):
        return f"KripkeStructure(|W|={len(self.states)}, |R|={len(self.transitions)})"


class GraphIndex:
    """Reachability facts of a structure, computed over its SCC condensation.

    ``reach`` is the reflexive-transitive closure of the transition relation,
    ``proper_reach`` the transitive closure, and ``cyclic`` the states lying
    on some cycle.  Reachability sets are kept as integer bitsets and built
    lazily; the condensation itself is available eagerly.
    """

    def __init__(self, structure: KripkeStructure):
        self.structure = structure
        n = structure.n
        succ = structure.succ
        self.comp, self.comps = tarjan_scc(n, succ)
        self.nontrivial = nontrivial_components(succ, self.comp, self.comps)
        comp_succ = [set() for _ in self.comps]
        for u in range(n):
            cu = self.comp[u]
            for v in succ[u]:
                cv = self.comp[v]
                if cv != cu:
                    comp_succ[cu].add(cv)
        self.comp_succ = [sorted(s) for s in comp_succ]

    @cached_property
    def _comp_reach(self) -> list:
        bits = []
        for c, members in enumerate(self.comps):
            b = 0
            for v in members:
                b |= 1 << v
            for d in self.comp_succ[c]:
                b |= bits[d]
            bits.append(b)
        return bits

    def reach_bits(self, v: int) -> int:
        return self._comp_reach[self.comp[v]]

    def proper_reach_bits(self, v: int) -> int:
        c = self.comp[v]
        if self.nontrivial[c]:
            return self._comp_reach[c]
        b = 0
        for d in self.comp_succ[c]:
            b |= self._comp_reach[d]
        return b

    @cached_property
    def cyclic_mask(self) -> list:
        return [self.nontrivial[self.comp[v]] for v in range(self.structure.n)]

    @property
    def cyclic(self) -> frozenset:
        names = self.structure.states
        return frozenset(names[v] for v, flag in enumerate(self.cyclic_mask) if flag)

    def _decode(self, bits: int) -> frozenset:
        names = self.structure.states
        out = []
        v = 0
        while bits:
            if bits & 1:
                out.append(names[v])
            bits >>= 1
            v += 1
        return frozenset(out)

    def reach(self, state: str) -> frozenset:
        return self._decode(self.reach_bits(self.structure.check_state(state)))

    def proper_reach(self, state: str) -> frozenset:
        return self._decode(self.proper_reach_bits(self.structure.check_state(state)))

    def reaches(self, u: str, v: str) -> bool:
        idx = self.structure.index
        return bool(self.reach_bits(idx[u]) >> idx[v] & 1)

    def proper_reaches(self, u: str, v: str) -> bool:
        idx = self.structure.index
        return bool(self.proper_reach_bits(idx[u]) >> idx[v] & 1)

    def reach_pairs(self) -> frozenset:
        return frozenset((u, v) for u in self.structure.states for v in self.reach(u))

    def proper_reach_pairs(self) -> frozenset:
        return frozenset((u, v) for u in self.structure.states for v in self.proper_reach(u))


def build_index(structure: KripkeStructure) -> GraphIndex:
    return structure.graph_index


def reflexive_closure(structure: KripkeStructure) -> KripkeStructure:
    loops = {(s, s) for s in structure.states}
    return KripkeStructure(structure.states, structure.transitions | loops, structure.labels)


# ------------------------------------------------------ negation elimination

def negated_name(p: str, prefix: str = "q_") -> str:
    return prefix + p


def elim_atomic_negation(structure: KripkeStructure, f: StateFormula,
                         prefix: str = "q_") -> tuple[KripkeStructure, StateFormula]:
    """Replace each negated atom ``~p`` by a fresh atom ``q_p`` labelling the complement.

    Every state gets ``q_p`` exactly when it lacks ``p``, for every
    proposition ``p`` of ``f`` or of the structure.  The result formula is
    negation-free and satisfied at the same states.
    """
    if not discipline_leq(negation_discipline(f), AN):
        raise ValueError("formula has negations above atomic level; apply to_nnf first")
    props = sorted(atoms(f) | structure.alphabet)
    fresh = {p: negated_name(p, prefix) for p in props}
    taken = set(props)
    for p, q in fresh.items():
        if q in taken:
            raise KripkeError(f"fresh proposition {q!r} for ~{p} already in use")

    def rewrite(node):
        if isinstance(node, Not):
            arg = node.arg
            if isinstance(arg, Atom):
                return Atom(fresh[arg.name])
            if isinstance(arg, Const):
                return Const(not arg.value)
        return None

    g = map_state(f, rewrite)
    new_labels = tuple(
        lab | frozenset(fresh[p] for p in props if p not in lab)
        for lab in structure.labels
    )
    return KripkeStructure(structure.states, structure.transitions, new_labels), g


# ------------------------------------------------------------- file formats

_NAME = re.compile(r"[^\s:#]+\Z")


def parse_kripke(text: str, repair: bool = False) -> KripkeStructure:
    """Parse the line-oriented model format or its JSON mirror."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelSyntaxError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        return kripke_from_json(data, repair=repair)
    return _parse_lines(text, repair)


def load_kripke(path: str | Path, repair: bool = False) -> KripkeStructure:
    return parse_kripke(Path(path).read_text(), repair=repair)


def _parse_lines(text: str, repair: bool) -> KripkeStructure:
    header_seen = False
    states: list[str] = []
    declared = set()
    trans: list[tuple[str, str]] = []
    labels: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line != "kripke":
                raise ModelSyntaxError("expected header 'kripke'", lineno)
            header_seen = True
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ModelSyntaxError(f"expected 'states:', 'trans:' or 'label:', got {line!r}", lineno)
        key = key.strip()
        if key == "states":
            for name in rest.split():
                if not _NAME.match(name) or "->" in name:
                    raise ModelSyntaxError(f"invalid state name {name!r}", lineno)
                if name in declared:
                    raise ModelSyntaxError(f"duplicate state {name!r}", lineno)
                declared.add(name)
                states.append(name)
        elif key == "trans":
            for item in rest.split():
                u, arrow, v = item.partition("->")
                if not arrow or not u or not v:
                    raise ModelSyntaxError(f"malformed transition {item!r}", lineno)
                trans.append((u, v))
        elif key == "label":
            state, sep2, props = rest.partition(":")
            state = state.strip()
            if not sep2 or not state:
                raise ModelSyntaxError("expected 'label: <state>: <props...>'", lineno)
            if state in labels:
                raise ModelSyntaxError(f"second label line for state {state!r}", lineno)
            labels[state] = props.split()
        else:
            raise ModelSyntaxError(f"unknown section {key!r}", lineno)
    if not header_seen:
        raise ModelSyntaxError("empty model file", 1)
    for u, v in trans:
        for end in (u, v):
            if end not in declared:
                raise KripkeError(f"transition {u}->{v} uses undeclared state {end!r}")
    return KripkeStructure.build(states, trans, labels, repair=repair)


def _sorted_transitions(structure: KripkeStructure) -> list:
    names = structure.states
    return [(names[u], names[v]) for u, row in enumerate(structure.succ) for v in row]


def kripke_to_text(structure: KripkeStructure) -> str:
    lines = ["kripke", "states: " + " ".join(structure.states)]
    pairs = _sorted_transitions(structure)
    for i in range(0, len(pairs), 8):
        lines.append("trans: " + " ".join(f"{u}->{v}" for u, v in pairs[i:i + 8]))
    for s, lab in zip(structure.states, structure.labels):
        if lab:
            lines.append(f"label: {s}: " + " ".join(sorted(lab)))
    return "\n".join(lines) + "\n"


def kripke_to_json(structure: KripkeStructure) -> dict:
    return {
        "states": list(structure.states),
        "trans": [[u, v] for u, v in _sorted_transitions(structure)],
        "labels": {s: sorted(lab) for s, lab in zip(structure.states, structure.labels)},
    }


def kripke_from_json(data: dict, repair: bool = False) -> KripkeStructure:
    try:
        states = list(data["states"])
        trans = [tuple(pair) for pair in data["trans"]]
        labels = dict(data.get("labels", {}))
    except (KeyError, TypeError) as exc:
        raise ModelSyntaxError(f"JSON model is missing field {exc}", 1) from None
    if any(len(pair) != 2 for pair in trans):
        raise ModelSyntaxError("each JSON transition must be a pair", 1)
    seen = set()
    for s in states:
        if s in seen:
            raise KripkeError(f"duplicate state {s!r}")
        seen.add(s)
    return KripkeStructure.build(states, trans, labels, repair=repair)


def _dot_quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return '"' + escaped + '"'


def kripke_to_dot(structure: KripkeStructure, name: str = "K") -> str:
    lines = [f"digraph {_dot_quote(name)} {{"]
    for s, lab in zip(structure.states, structure.labels):
        text = s + ("\n{" + ", ".join(sorted(lab)) + "}" if lab else "")
        lines.append(f"  {_dot_quote(s)} [label={_dot_quote(text)}];")
    for u, v in _sorted_transitions(structure):
        lines.append(f"  {_dot_quote(u)} -> {_dot_quote(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
