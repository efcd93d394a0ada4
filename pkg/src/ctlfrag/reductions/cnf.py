"""3CNF formulas, DIMACS input and the diamond-chain path encodings.

The structure is a chain of diamonds ``y0 -> {x1, nx1} -> y1 -> ... -> ym``
with a loop on ``ym``; every state is labelled with its own name.  A path
from ``y0`` picks one of ``xi`` / ``nxi`` per variable, i.e. an assignment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

from ..formula import (
    Atom,
    F,
    G,
    PathQuant,
    StateFormula,
    disj,
    embed,
    p_conj,
    p_disj,
)
from ..kripke import KripkeStructure
from .instance import HardnessInstance, Provenance, digest

RECONSTRUCTED = "reconstructed"


class CnfError(ValueError):
    """Malformed DIMACS input or a clause that is not a literal triple."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Cnf3:
    """Conjunction of clauses, each exactly three nonzero DIMACS literals."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(int(l) for l in c) for c in self.clauses))
        if self.num_vars < 1:
            raise CnfError("formula needs at least one variable")
        if not self.clauses:
            raise CnfError("formula needs at least one clause")
        for c in self.clauses:
            if len(c) == 0:
                raise CnfError("empty clause")
            if len(c) != 3:
                raise CnfError(f"clause {list(c)} does not have exactly 3 literal slots")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise CnfError(f"literal {lit} out of range 1..{self.num_vars}")

    def satisfied_by(self, assignment) -> bool:
        return all(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in c)
                   for c in self.clauses)

    def satisfiable(self) -> bool:
        """Brute force over all assignments."""
        return any(self.satisfied_by(a)
                   for a in itertools.product((0, 1), repeat=self.num_vars))

    def as_json(self) -> dict:
        return {"vars": self.num_vars, "clauses": [list(c) for c in self.clauses]}

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Cnf3:
    num_vars = num_clauses = None
    clauses: list = []
    current: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError("expected 'p cnf <vars> <clauses>'", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise CnfError("header counts must be integers", lineno) from None
            continue
        if num_vars is None:
            raise CnfError("clause before the 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CnfError(f"invalid literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise CnfError("empty clause", lineno)
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        raise CnfError("missing 'p cnf' header")
    if num_clauses is not None and num_clauses != len(clauses):
        raise CnfError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    return Cnf3(num_vars, tuple(clauses))


def load_dimacs(path: str | Path) -> Cnf3:
    return parse_dimacs(Path(path).read_text())


# ----------------------------------------------------------- structure

def literal_state(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"nx{-lit}"


def complement_state(lit: int) -> str:
    return literal_state(-lit)


def diamond_chain(m: int) -> KripkeStructure:
    states = ["y0"]
    trans = []
    for i in range(1, m + 1):
        states += [f"x{i}", f"nx{i}", f"y{i}"]
        trans += [(f"y{i - 1}", f"x{i}"), (f"x{i}", f"y{i}"),
                  (f"y{i - 1}", f"nx{i}"), (f"nx{i}", f"y{i}")]
    trans.append((f"y{m}", f"y{m}"))
    return KripkeStructure.build(states, trans, {s: {s} for s in states})


def _provenance(name: str, cnf: Cnf3, flags=()) -> Provenance:
    return Provenance(name, digest(cnf.as_json()), tuple(flags))


def eg_formula(cnf: Cnf3) -> StateFormula:
    """``E`` of: every clause has a literal whose complement the path never visits."""
    everything = sorted(diamond_chain(cnf.num_vars).alphabet)

    def avoid(lit):
        banned = complement_state(lit)
        return G(embed(disj([Atom(a) for a in everything if a != banned])))

    return PathQuant("E", p_conj([p_disj([avoid(l) for l in c]) for c in cnf.clauses]))


def ef_formula(cnf: Cnf3) -> StateFormula:
    """``E`` of: every clause has a literal whose state the path visits."""
    return PathQuant("E", p_conj([
        p_disj([F(embed(Atom(literal_state(l)))) for l in c]) for c in cnf.clauses]))


def gen_3cnf_ctlplus_eg(cnf: Cnf3) -> HardnessInstance:
    return HardnessInstance(diamond_chain(cnf.num_vars), "y0", eg_formula(cnf),
                            cnf.satisfiable(), _provenance("3cnf-eg", cnf))


def gen_3cnf_ctlplus_ef(cnf: Cnf3) -> HardnessInstance:
    """Visit-a-literal encoding; the formula shape is reconstructed, not quoted."""
    return HardnessInstance(diamond_chain(cnf.num_vars), "y0", ef_formula(cnf),
                            cnf.satisfiable(), _provenance("3cnf-ef", cnf, (RECONSTRUCTED,)))
