"""Leveled monotone circuits and their encodings as model checking instances.

Netlist format, one declaration per line, ``#`` starts a comment::

    gate <id> OR <pred> [<pred> ...]
    gate <id> AND <pred1> <pred2>
    input <id> <variable> [neg]
    vars <n>

The first ``gate`` line is the output.  ``vars`` optionally declares more
variables than the inputs mention.  Layers are numbered by distance
from the output; OR gates sit on even layers, AND gates on odd layers and
all inputs on the deepest layer.  Variables are numbered from 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..formula import And, Atom, F, Not, PathQuant, StateFormula, X, embed, to_nnf
from ..kripke import KripkeStructure, elim_atomic_negation
from .instance import HardnessInstance, Provenance, digest

AND_GATE, OR_GATE = "AND", "OR"


class CircuitError(ValueError):
    """Malformed netlist or a circuit that is not leveled and alternating."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class MonotoneCircuit:
    gates: dict
    inputs: dict
    output: str
    arity: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "gates", {g: (k, tuple(p)) for g, (k, p) in self.gates.items()})
        object.__setattr__(self, "inputs", {i: (int(v), bool(n)) for i, (v, n) in self.inputs.items()})
        object.__setattr__(self, "_levels", self._layer())
        used = max(v for v, _ in self.inputs.values())
        if self.arity is None:
            object.__setattr__(self, "arity", used)
        elif self.arity < used:
            raise CircuitError(f"declared {self.arity} variables but an input reads variable {used}")

    def _layer(self) -> dict:
        if self.output not in self.gates:
            raise CircuitError(f"output {self.output!r} is not a gate")
        clash = set(self.gates) & set(self.inputs)
        if clash:
            raise CircuitError(f"ids used for both gates and inputs: {sorted(clash)}")
        for i, (var, _) in self.inputs.items():
            if var < 1:
                raise CircuitError(f"input {i!r} refers to variable {var}; variables start at 1")
        level = {self.output: 0}
        order = [self.output]
        for u in order:
            kind, preds = self.gates[u]
            if kind not in (AND_GATE, OR_GATE):
                raise CircuitError(f"gate {u!r} has unknown kind {kind!r}")
            want = OR_GATE if level[u] % 2 == 0 else AND_GATE
            if kind != want:
                raise CircuitError(f"gate {u!r} on layer {level[u]} must be {want}; layers do not alternate")
            if kind == AND_GATE and len(preds) != 2:
                raise CircuitError(f"AND gate {u!r} needs fan-in 2, has {len(preds)}")
            if kind == OR_GATE and not preds:
                raise CircuitError(f"OR gate {u!r} has no inputs")
            for v in preds:
                if v not in self.gates and v not in self.inputs:
                    raise CircuitError(f"gate {u!r} reads unknown node {v!r}")
                if v in level:
                    if level[v] != level[u] + 1:
                        raise CircuitError(f"node {v!r} is read from two different layers")
                else:
                    level[v] = level[u] + 1
                    if v in self.gates:
                        order.append(v)
        unused = (set(self.gates) | set(self.inputs)) - set(level)
        if unused:
            raise CircuitError(f"circuit is not connected; unused nodes {sorted(unused)}")
        depth = max(level.values())
        for i in self.inputs:
            if level[i] != depth:
                raise CircuitError(f"input {i!r} is on layer {level[i]}, inputs belong on layer {depth}")
        for g in self.gates:
            if level[g] == depth:
                raise CircuitError(f"gate {g!r} has no inputs below it")
        return level

    @property
    def depth(self) -> int:
        return max(self._levels.values())

    @property
    def num_vars(self) -> int:
        return self.arity

    def level(self, node: str) -> int:
        return self._levels[node]

    def nodes_at(self, j: int) -> list:
        return [v for v, lv in self._levels.items() if lv == j]

    def input_value(self, node: str, x) -> bool:
        var, neg = self.inputs[node]
        return bool(x[var - 1]) != neg

    def evaluate(self, x) -> bool:
        if len(x) != self.num_vars:
            raise CircuitError(f"input vector has {len(x)} bits, circuit reads {self.num_vars}")
        value = {}
        for j in range(self.depth, -1, -1):
            for v in self.nodes_at(j):
                if v in self.inputs:
                    value[v] = self.input_value(v, x)
                else:
                    kind, preds = self.gates[v]
                    vals = [value[u] for u in preds]
                    value[v] = all(vals) if kind == AND_GATE else any(vals)
        return value[self.output]

    def as_json(self) -> dict:
        return {"output": self.output, "vars": self.arity,
                "gates": {g: [k, list(p)] for g, (k, p) in sorted(self.gates.items())},
                "inputs": {i: [v, n] for i, (v, n) in sorted(self.inputs.items())}}

    def to_netlist(self) -> str:
        lines = []
        order = [self.output] + sorted(g for g in self.gates if g != self.output)
        for g in order:
            kind, preds = self.gates[g]
            lines.append(f"gate {g} {kind} {' '.join(preds)}")
        for i, (var, neg) in sorted(self.inputs.items()):
            lines.append(f"input {i} {var}" + (" neg" if neg else ""))
        lines.append(f"vars {self.arity}")
        return "\n".join(lines) + "\n"


def parse_netlist(text: str) -> MonotoneCircuit:
    gates: dict = {}
    inputs: dict = {}
    output = None
    arity = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "gate":
            if len(parts) < 3:
                raise CircuitError("expected 'gate <id> <AND|OR> <pred...>'", lineno)
            gid, kind = parts[1], parts[2].upper()
            if gid in gates or gid in inputs:
                raise CircuitError(f"duplicate id {gid!r}", lineno)
            gates[gid] = (kind, tuple(parts[3:]))
            output = output or gid
        elif parts[0] == "input":
            if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "neg"):
                raise CircuitError("expected 'input <id> <variable> [neg]'", lineno)
            iid = parts[1]
            if iid in gates or iid in inputs:
                raise CircuitError(f"duplicate id {iid!r}", lineno)
            try:
                var = int(parts[2])
            except ValueError:
                raise CircuitError(f"variable must be a positive integer, got {parts[2]!r}", lineno) from None
            inputs[iid] = (var, len(parts) == 4)
        elif parts[0] == "vars":
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise CircuitError("expected 'vars <n>' with n >= 1", lineno)
            arity = int(parts[1])
        else:
            raise CircuitError(f"unknown declaration {parts[0]!r}", lineno)
    if output is None:
        raise CircuitError("netlist declares no gate")
    if not inputs:
        raise CircuitError("netlist declares no input")
    return MonotoneCircuit(gates, inputs, output, arity)


def load_netlist(path: str | Path) -> MonotoneCircuit:
    return parse_netlist(Path(path).read_text())


def parse_bits(text: str) -> tuple:
    bits = text.replace(",", "").replace(" ", "")
    if not bits or set(bits) - {"0", "1"}:
        raise CircuitError(f"input vector must be a string of 0/1, got {text!r}")
    return tuple(int(b) for b in bits)


# ------------------------------------------------------------- structure

def _copy(v: str, i: int) -> str:
    return f"{v}.{i}"


def _circuit_structure(c: MonotoneCircuit, x, stamps: bool) -> KripkeStructure:
    states, trans, labels = [], [], {}
    # AND gates keep one state; OR gates and inputs get two copies
    for v in sorted(c.gates):
        kind, preds = c.gates[v]
        stamp = {f"d{c.level(v)}"} if stamps and c.level(v) >= 1 else set()
        if kind == AND_GATE:
            states.append(v)
            labels[v] = stamp
            for i, u in enumerate(preds, 1):
                trans.append((v, _copy(u, i)))
        else:
            for i in (1, 2):
                s = _copy(v, i)
                states.append(s)
                labels[s] = {str(i)} | stamp
                for u in preds:
                    # inputs directly below an OR layer are entered through the same copy
                    trans.append((s, _copy(u, i) if u in c.inputs else u))
    for v in sorted(c.inputs):
        stamp = {f"d{c.level(v)}"} if stamps else set()
        for i in (1, 2):
            s = _copy(v, i)
            states.append(s)
            labels[s] = {str(i)} | stamp | ({"t"} if c.input_value(v, x) else set())
            trans.append((s, s))
    return KripkeStructure.build(states, trans, labels)


def _provenance(name: str, c: MonotoneCircuit, x) -> Provenance:
    return Provenance(name, digest({"circuit": c.as_json(), "input": list(x)}))


def _check_input(c: MonotoneCircuit, x) -> tuple:
    x = tuple(int(b) for b in x)
    if len(x) != c.num_vars or set(x) - {0, 1}:
        raise CircuitError(f"input vector must have {c.num_vars} bits")
    return x


def ex_formula(depth: int) -> StateFormula:
    f: StateFormula = Atom("t")
    for i in range(depth - 1, -1, -1):
        if i % 2 == 0:
            f = PathQuant("E", X(embed(f)))
        else:
            f = And(PathQuant("E", X(embed(And(Atom("1"), f)))),
                    PathQuant("E", X(embed(And(Atom("2"), f)))))
    return f


def ef_formula(depth: int) -> StateFormula:
    f: StateFormula = Atom("t")
    for i in range(depth - 1, -1, -1):
        d = Atom(f"d{i + 1}")
        if i % 2 == 0:
            f = PathQuant("E", F(embed(And(d, f))))
        else:
            f = And(PathQuant("E", F(embed(And(And(d, Atom("1")), f)))),
                    PathQuant("E", F(embed(And(And(d, Atom("2")), f)))))
    return f


def gen_circuit_ex(c: MonotoneCircuit, x) -> HardnessInstance:
    x = _check_input(c, x)
    return HardnessInstance(_circuit_structure(c, x, stamps=False), _copy(c.output, 1),
                            ex_formula(c.depth), c.evaluate(x),
                            _provenance("circuit-ex", c, x), {"input": "".join(map(str, x))})


def gen_circuit_ef(c: MonotoneCircuit, x) -> HardnessInstance:
    x = _check_input(c, x)
    return HardnessInstance(_circuit_structure(c, x, stamps=True), _copy(c.output, 1),
                            ef_formula(c.depth), c.evaluate(x),
                            _provenance("circuit-ef", c, x), {"input": "".join(map(str, x))})


def gen_circuit_ax(c: MonotoneCircuit, x) -> HardnessInstance:
    """Complemented ``EX`` instance: negation pushed inward, then negated atoms renamed."""
    x = _check_input(c, x)
    structure = _circuit_structure(c, x, stamps=False)
    negated = to_nnf(Not(ex_formula(c.depth)))
    structure, f = elim_atomic_negation(structure, negated)
    return HardnessInstance(structure, _copy(c.output, 1), f, not c.evaluate(x),
                            _provenance("circuit-ax", c, x), {"input": "".join(map(str, x))})
