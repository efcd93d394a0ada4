"""Two-sorted temporal formula AST with printing and syntactic analysis.

State formulas are evaluated at a state, path formulas along an infinite
path.  ``Embed`` is the only way back from the path sort to the state sort.

Path-level Boolean nodes whose operands are all ``Embed`` are collapsed into
a single ``Embed`` of the corresponding state formula by the helper
constructors ``p_not``, ``p_and`` and ``p_or``.  The parser only produces
collapsed trees, which is what makes printing and re-parsing exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Union


class StateFormula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


class PathFormula:
    __slots__ = ()

    def __str__(self) -> str:
        return path_to_text(self)


# ---------------------------------------------------------------- state sort

@dataclass(frozen=True, slots=True, repr=False)
class Atom(StateFormula):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, slots=True, repr=False)
class Const(StateFormula):
    value: bool

    def __repr__(self):
        return "TRUE" if self.value else "FALSE"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True, slots=True)
class Not(StateFormula):
    arg: StateFormula


@dataclass(frozen=True, slots=True)
class And(StateFormula):
    left: StateFormula
    right: StateFormula


@dataclass(frozen=True, slots=True)
class Or(StateFormula):
    left: StateFormula
    right: StateFormula


@dataclass(frozen=True, slots=True)
class PathQuant(StateFormula):
    quantifier: str  # "A" or "E"
    body: PathFormula

    def __post_init__(self):
        if self.quantifier not in ("A", "E"):
            raise ValueError(f"unknown path quantifier {self.quantifier!r}")


# ----------------------------------------------------------------- path sort

@dataclass(frozen=True, slots=True)
class Embed(PathFormula):
    state: StateFormula


@dataclass(frozen=True, slots=True)
class PNot(PathFormula):
    arg: PathFormula


@dataclass(frozen=True, slots=True)
class PAnd(PathFormula):
    left: PathFormula
    right: PathFormula


@dataclass(frozen=True, slots=True)
class POr(PathFormula):
    left: PathFormula
    right: PathFormula


@dataclass(frozen=True, slots=True)
class X(PathFormula):
    arg: PathFormula


@dataclass(frozen=True, slots=True)
class F(PathFormula):
    arg: PathFormula


@dataclass(frozen=True, slots=True)
class G(PathFormula):
    arg: PathFormula


@dataclass(frozen=True, slots=True)
class Finf(PathFormula):
    """Infinitely often."""
    arg: PathFormula


@dataclass(frozen=True, slots=True)
class Ginf(PathFormula):
    """Almost always."""
    arg: PathFormula


@dataclass(frozen=True, slots=True)
class U(PathFormula):
    left: PathFormula
    right: PathFormula


@dataclass(frozen=True, slots=True)
class R(PathFormula):
    left: PathFormula
    right: PathFormula


Formula = Union[StateFormula, PathFormula]

UNARY_TEMPORAL = (X, F, G, Finf, Ginf)
BINARY_TEMPORAL = (U, R)
TEMPORAL = UNARY_TEMPORAL + BINARY_TEMPORAL

OP_TOKEN = {X: "X", F: "F", G: "G", Finf: "Fi", Ginf: "Gi", U: "U", R: "R"}
TOKEN_OP = {v: k for k, v in OP_TOKEN.items()}

# all ten paired operators of plain CTL, in a fixed order
CTL_OPERATORS = ("AX", "EX", "AF", "EF", "AG", "EG", "AU", "EU", "AR", "ER")
ECTL_OPERATORS = ("AFi", "EFi", "AGi", "EGi")
PLUS_TOKENS = ("A", "E", "X", "F", "G", "U", "R")
ECTL_PLUS_TOKENS = ("Fi", "Gi")


# ------------------------------------------------------- smart constructors

def embed(s: StateFormula) -> Embed:
    return Embed(s)


def p_not(a: PathFormula) -> PathFormula:
    if isinstance(a, Embed):
        return Embed(Not(a.state))
    return PNot(a)


def p_and(a: PathFormula, b: PathFormula) -> PathFormula:
    if isinstance(a, Embed) and isinstance(b, Embed):
        return Embed(And(a.state, b.state))
    return PAnd(a, b)


def p_or(a: PathFormula, b: PathFormula) -> PathFormula:
    if isinstance(a, Embed) and isinstance(b, Embed):
        return Embed(Or(a.state, b.state))
    return POr(a, b)


def conj(items: Iterable[StateFormula]) -> StateFormula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    out = None
    for item in items:
        out = item if out is None else And(out, item)
    return TRUE if out is None else out


def disj(items: Iterable[StateFormula]) -> StateFormula:
    """Left-nested disjunction; the empty disjunction is ``false``."""
    out = None
    for item in items:
        out = item if out is None else Or(out, item)
    return FALSE if out is None else out


def p_conj(items: Iterable[PathFormula]) -> PathFormula:
    out = None
    for item in items:
        out = item if out is None else p_and(out, item)
    return Embed(TRUE) if out is None else out


def p_disj(items: Iterable[PathFormula]) -> PathFormula:
    out = None
    for item in items:
        out = item if out is None else p_or(out, item)
    return Embed(FALSE) if out is None else out


def atom(name: str) -> Atom:
    return Atom(name)


def canonical(f: Formula) -> Formula:
    """Rebuild ``f`` with the collapsing constructors applied everywhere."""
    if isinstance(f, StateFormula):
        return _canon_state(f)
    return _canon_path(f)


def _canon_state(s):
    if isinstance(s, (Atom, Const)):
        return s
    if isinstance(s, Not):
        return Not(_canon_state(s.arg))
    if isinstance(s, And):
        return And(_canon_state(s.left), _canon_state(s.right))
    if isinstance(s, Or):
        return Or(_canon_state(s.left), _canon_state(s.right))
    return PathQuant(s.quantifier, _canon_path(s.body))


def _canon_path(p):
    if isinstance(p, Embed):
        return Embed(_canon_state(p.state))
    if isinstance(p, PNot):
        return p_not(_canon_path(p.arg))
    if isinstance(p, PAnd):
        return p_and(_canon_path(p.left), _canon_path(p.right))
    if isinstance(p, POr):
        return p_or(_canon_path(p.left), _canon_path(p.right))
    if isinstance(p, UNARY_TEMPORAL):
        return type(p)(_canon_path(p.arg))
    return type(p)(_canon_path(p.left), _canon_path(p.right))


# ------------------------------------------------------------- traversal

def children(f: Formula) -> tuple:
    if isinstance(f, (Atom, Const)):
        return ()
    if isinstance(f, (Not, PNot, X, F, G, Finf, Ginf)):
        return (f.arg,)
    if isinstance(f, (And, Or, PAnd, POr, U, R)):
        return (f.left, f.right)
    if isinstance(f, PathQuant):
        return (f.body,)
    if isinstance(f, Embed):
        return (f.state,)
    raise TypeError(f"not a formula: {f!r}")


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal over both sorts."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def size(f: Formula) -> int:
    """Number of logical symbols; ``Embed`` is bookkeeping and not counted."""
    return sum(1 for node in walk(f) if not isinstance(node, Embed))


def atoms(f: Formula) -> frozenset:
    return frozenset(node.name for node in walk(f) if isinstance(node, Atom))


def is_propositional(f: Formula) -> bool:
    return not any(isinstance(node, (PathQuant,) + TEMPORAL) for node in walk(f))


def quantifier_depth(f: Formula) -> int:
    """Nesting depth of path quantifiers."""
    memo = {}

    def depth(node):
        key = id(node)
        if key in memo:
            return memo[key]
        inner = max((depth(c) for c in children(node)), default=0)
        d = inner + 1 if isinstance(node, PathQuant) else inner
        memo[key] = d
        return d

    return depth(f)


def temporal_count(chi: PathFormula) -> int:
    """Temporal operators of a path formula outside its embedded state formulas."""
    count = 0
    stack = [chi]
    while stack:
        node = stack.pop()
        if isinstance(node, Embed):
            continue
        if isinstance(node, TEMPORAL):
            count += 1
        stack.extend(children(node))
    return count


def map_state(f: StateFormula, fn: Callable[[StateFormula], StateFormula | None]) -> StateFormula:
    """Bottom-up rewrite of state nodes; ``fn`` returning None keeps the node."""

    def go_state(s):
        if isinstance(s, (Atom, Const)):
            rebuilt = s
        elif isinstance(s, Not):
            rebuilt = Not(go_state(s.arg))
        elif isinstance(s, And):
            rebuilt = And(go_state(s.left), go_state(s.right))
        elif isinstance(s, Or):
            rebuilt = Or(go_state(s.left), go_state(s.right))
        else:
            rebuilt = PathQuant(s.quantifier, go_path(s.body))
        out = fn(rebuilt)
        return rebuilt if out is None else out

    def go_path(p):
        if isinstance(p, Embed):
            return Embed(go_state(p.state))
        if isinstance(p, PNot):
            return p_not(go_path(p.arg))
        if isinstance(p, PAnd):
            return p_and(go_path(p.left), go_path(p.right))
        if isinstance(p, POr):
            return p_or(go_path(p.left), go_path(p.right))
        if isinstance(p, UNARY_TEMPORAL):
            return type(p)(go_path(p.arg))
        return type(p)(go_path(p.left), go_path(p.right))

    return go_state(f)


def map_temporal(f: StateFormula, table: dict) -> StateFormula:
    """Replace temporal node classes according to ``table`` (e.g. ``{F: Finf}``)."""

    def go_state(s):
        if isinstance(s, (Atom, Const)):
            return s
        if isinstance(s, Not):
            return Not(go_state(s.arg))
        if isinstance(s, And):
            return And(go_state(s.left), go_state(s.right))
        if isinstance(s, Or):
            return Or(go_state(s.left), go_state(s.right))
        return PathQuant(s.quantifier, go_path(s.body))

    def go_path(p):
        if isinstance(p, Embed):
            return Embed(go_state(p.state))
        if isinstance(p, PNot):
            return PNot(go_path(p.arg))
        if isinstance(p, PAnd):
            return PAnd(go_path(p.left), go_path(p.right))
        if isinstance(p, POr):
            return POr(go_path(p.left), go_path(p.right))
        cls = table.get(type(p), type(p))
        if isinstance(p, UNARY_TEMPORAL):
            return cls(go_path(p.arg))
        return cls(go_path(p.left), go_path(p.right))

    return go_state(f)


# ---------------------------------------------------------------- printing

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset(
    ["true", "false", "A", "E", "X", "F", "G", "U", "R", "Fi", "Gi"]
    + [q + op for q in "AE" for op in ("X", "F", "G", "Fi", "Gi")]
)

_OR, _AND, _UNARY = 1, 2, 3


def atom_text(name: str) -> str:
    if _IDENT.match(name) and name not in KEYWORDS:
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_text(f: StateFormula) -> str:
    """Concrete syntax for a state formula; ``parse_formula`` inverts it."""
    return _fmt_state(f, 0)


def path_to_text(p: PathFormula) -> str:
    return _fmt_path(p, 0)


def _wrap(text, own, needed):
    return f"({text})" if own < needed else text


def _fmt_state(s, needed):
    if isinstance(s, Atom):
        return atom_text(s.name)
    if isinstance(s, Const):
        return "true" if s.value else "false"
    if isinstance(s, Not):
        return "~" + _fmt_state(s.arg, _UNARY)
    if isinstance(s, And):
        return _wrap(f"{_fmt_state(s.left, _AND)} & {_fmt_state(s.right, _UNARY)}", _AND, needed)
    if isinstance(s, Or):
        return _wrap(f"{_fmt_state(s.left, _OR)} | {_fmt_state(s.right, _AND)}", _OR, needed)
    if isinstance(s, PathQuant):
        return _fmt_quant(s)
    raise TypeError(f"not a state formula: {s!r}")


def _fmt_quant(s):
    q, body = s.quantifier, s.body
    if isinstance(body, UNARY_TEMPORAL):
        return f"{q}{OP_TOKEN[type(body)]} {_fmt_path(body.arg, _UNARY)}"
    if isinstance(body, BINARY_TEMPORAL):
        return f"{q}{_fmt_path(body, _UNARY)}"
    inner = _fmt_path(body, _UNARY)
    sep = "" if inner[0] in "([" else " "
    return f"{q}{sep}{inner}"


def _fmt_path(p, needed):
    if isinstance(p, Embed):
        return _fmt_state(p.state, needed)
    if isinstance(p, PNot):
        return "~" + _fmt_path(p.arg, _UNARY)
    if isinstance(p, PAnd):
        return _wrap(f"{_fmt_path(p.left, _AND)} & {_fmt_path(p.right, _UNARY)}", _AND, needed)
    if isinstance(p, POr):
        return _wrap(f"{_fmt_path(p.left, _OR)} | {_fmt_path(p.right, _AND)}", _OR, needed)
    if isinstance(p, UNARY_TEMPORAL):
        return f"{OP_TOKEN[type(p)]} {_fmt_path(p.arg, _UNARY)}"
    if isinstance(p, BINARY_TEMPORAL):
        return f"[{_fmt_path(p.left, _OR)} {OP_TOKEN[type(p)]} {_fmt_path(p.right, _OR)}]"
    raise TypeError(f"not a path formula: {p!r}")


# ------------------------------------------------------- syntactic analysis

PROPOSITIONAL = "propositional"
CTL = "CTL"
ECTL = "ECTL"
CTLPLUS = "CTLplus"
ECTLPLUS = "ECTLplus"
CTLSTAR = "CTLstar"

FAMILIES = (PROPOSITIONAL, CTL, ECTL, CTLPLUS, ECTLPLUS, CTLSTAR)

MON, AN, POS, FULL = "mon", "an", "pos", "full"
DISCIPLINES = (MON, AN, POS, FULL)
_DISC_RANK = {d: i for i, d in enumerate(DISCIPLINES)}


def discipline_leq(a: str, b: str) -> bool:
    return _DISC_RANK[a] <= _DISC_RANK[b]


def _is_inf(node) -> bool:
    return isinstance(node, (Finf, Ginf))


def _ctl_body(body: PathFormula) -> bool:
    if isinstance(body, UNARY_TEMPORAL):
        return isinstance(body.arg, Embed)
    if isinstance(body, BINARY_TEMPORAL):
        return isinstance(body.left, Embed) and isinstance(body.right, Embed)
    return False


def _plus_body(body: PathFormula) -> bool:
    """Boolean combinations of single temporal operators over state formulas.

    ``X`` may be nested (``X X p``); other temporal operators take state
    formulas only.
    """
    if isinstance(body, Embed):
        return True
    if isinstance(body, PNot):
        return _plus_body(body.arg)
    if isinstance(body, (PAnd, POr)):
        return _plus_body(body.left) and _plus_body(body.right)
    if isinstance(body, X):
        return _x_body(body.arg)
    return _ctl_body(body)


def _x_body(body: PathFormula) -> bool:
    if isinstance(body, Embed):
        return True
    if isinstance(body, PNot):
        return _x_body(body.arg)
    if isinstance(body, (PAnd, POr)):
        return _x_body(body.left) and _x_body(body.right)
    if isinstance(body, X):
        return _x_body(body.arg)
    return False


def syntactic_class(f: StateFormula) -> str:
    """Least logic family containing ``f``."""
    quants = [n for n in walk(f) if isinstance(n, PathQuant)]
    temporal_free_path = all(
        not isinstance(n, TEMPORAL) for n in walk(f)
    )
    if not quants and temporal_free_path:
        return PROPOSITIONAL
    if any(isinstance(n, TEMPORAL) for n in _outside_quantifiers(f)):
        return CTLSTAR
    uses_inf = any(_is_inf(n) for n in walk(f))
    if all(_ctl_body(q.body) for q in quants):
        return ECTL if uses_inf else CTL
    if all(_plus_body(q.body) for q in quants):
        return ECTLPLUS if uses_inf else CTLPLUS
    return CTLSTAR


def _outside_quantifiers(f):
    """Nodes reachable from ``f`` without entering a path quantifier."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        if not isinstance(node, PathQuant):
            stack.extend(children(node))


def operator_set(f: StateFormula) -> frozenset:
    """Operator tokens used by ``f``.

    Paired tokens (``AG``, ``EFi``, ...) for CTL-shaped formulas, separate
    quantifier and temporal tokens otherwise.
    """
    family = syntactic_class(f)
    if family == PROPOSITIONAL:
        return frozenset()
    if family in (CTL, ECTL):
        ops = set()
        for node in walk(f):
            if isinstance(node, PathQuant):
                ops.add(node.quantifier + OP_TOKEN[type(node.body)])
        return frozenset(ops)
    return token_set(f)


def token_set(f: StateFormula) -> frozenset:
    """Quantifier and temporal tokens of ``f``, never paired."""
    out = set()
    for node in walk(f):
        if isinstance(node, PathQuant):
            out.add(node.quantifier)
        elif isinstance(node, TEMPORAL):
            out.add(OP_TOKEN[type(node)])
    return frozenset(out)


def negation_discipline(f: StateFormula) -> str:
    """Least negation discipline (mon <= an <= pos <= full) containing ``f``."""
    level = MON
    for node in walk(f):
        if isinstance(node, (Not, PNot)):
            arg = node.arg
            if isinstance(arg, Embed):
                arg = arg.state
            if isinstance(arg, (Atom, Const)):
                found = AN
            elif is_propositional(arg):
                found = POS
            else:
                return FULL
            if _DISC_RANK[found] > _DISC_RANK[level]:
                level = found
    return level


# ---------------------------------------------------- negation normal form

_DUAL_UNARY = {X: X, F: G, G: F, Finf: Ginf, Ginf: Finf}
_DUAL_BINARY = {U: R, R: U}


def to_nnf(f: StateFormula) -> StateFormula:
    """Push negations down to atoms using the standard dualities."""
    return _nnf_state(f)


def negate(f: StateFormula) -> StateFormula:
    """NNF of the negation of ``f``."""
    return _neg_state(f)


def path_nnf(p: PathFormula) -> PathFormula:
    return _nnf_path(p)


def path_negate(p: PathFormula) -> PathFormula:
    """NNF of the negation of the path formula ``p``."""
    return _neg_path(p)


def _nnf_state(s):
    if isinstance(s, (Atom, Const)):
        return s
    if isinstance(s, Not):
        return _neg_state(s.arg)
    if isinstance(s, And):
        return And(_nnf_state(s.left), _nnf_state(s.right))
    if isinstance(s, Or):
        return Or(_nnf_state(s.left), _nnf_state(s.right))
    return PathQuant(s.quantifier, _nnf_path(s.body))


def _neg_state(s):
    if isinstance(s, Atom):
        return Not(s)
    if isinstance(s, Const):
        return Const(not s.value)
    if isinstance(s, Not):
        return _nnf_state(s.arg)
    if isinstance(s, And):
        return Or(_neg_state(s.left), _neg_state(s.right))
    if isinstance(s, Or):
        return And(_neg_state(s.left), _neg_state(s.right))
    dual = "E" if s.quantifier == "A" else "A"
    return PathQuant(dual, _neg_path(s.body))


def _nnf_path(p):
    if isinstance(p, Embed):
        return Embed(_nnf_state(p.state))
    if isinstance(p, PNot):
        return _neg_path(p.arg)
    if isinstance(p, PAnd):
        return p_and(_nnf_path(p.left), _nnf_path(p.right))
    if isinstance(p, POr):
        return p_or(_nnf_path(p.left), _nnf_path(p.right))
    if isinstance(p, UNARY_TEMPORAL):
        return type(p)(_nnf_path(p.arg))
    return type(p)(_nnf_path(p.left), _nnf_path(p.right))


def _neg_path(p):
    if isinstance(p, Embed):
        return Embed(_neg_state(p.state))
    if isinstance(p, PNot):
        return _nnf_path(p.arg)
    if isinstance(p, PAnd):
        return p_or(_neg_path(p.left), _neg_path(p.right))
    if isinstance(p, POr):
        return p_and(_neg_path(p.left), _neg_path(p.right))
    if isinstance(p, UNARY_TEMPORAL):
        return _DUAL_UNARY[type(p)](_neg_path(p.arg))
    return _DUAL_BINARY[type(p)](_neg_path(p.left), _neg_path(p.right))


def dual_token(token: str) -> str:
    """Dual of an operator token under negation (``AG`` <-> ``EF``, ``U`` <-> ``R``)."""
    single = {"A": "E", "E": "A", "X": "X", "F": "G", "G": "F",
              "U": "R", "R": "U", "Fi": "Gi", "Gi": "Fi"}
    if token in single:
        return single[token]
    return single[token[0]] + single[token[1:]]
