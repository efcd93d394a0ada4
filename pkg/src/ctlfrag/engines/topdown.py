"""Demand-driven checking for positive CTL over {EX, EF, EFi} and its dual.

The nondeterministic stack algorithm for these fragments guesses a
disjunct, a successor, a reachable state or a reachable cycle.  Here each
guess becomes a memoized existential search over (subformula, state)
pairs.  EF and EFi are answered per strongly connected component of the
structure and shared by all members, so each operator node costs
O(|W| + |R|) in total.
"""

from __future__ import annotations

from ..formula import (
    CTL,
    ECTL,
    POS,
    PROPOSITIONAL,
    And,
    Embed,
    F,
    Finf,
    Or,
    PathQuant,
    StateFormula,
    X,
    discipline_leq,
    is_propositional,
    negate,
    negation_discipline,
    operator_set,
    syntactic_class,
)
from ..kripke import KripkeStructure
from .common import FragmentError, prop_holds

EXISTENTIAL = frozenset({"EX", "EF", "EFi"})
UNIVERSAL = frozenset({"AX", "AG", "AGi"})

_PROP, _AND, _OR, _EX, _EF, _EFI = range(6)


def topdown_fragment(f: StateFormula) -> str | None:
    """``"E"`` or ``"A"`` when ``f`` is in the fragment, otherwise None."""
    if syntactic_class(f) not in (PROPOSITIONAL, CTL, ECTL):
        return None
    if not discipline_leq(negation_discipline(f), POS):
        return None
    ops = operator_set(f)
    if ops <= EXISTENTIAL:
        return "E"
    if ops <= UNIVERSAL:
        return "A"
    return None


class TopDownChecker:
    """Answers ``K, w |= f`` for many states of one structure, sharing memo tables."""

    def __init__(self, structure: KripkeStructure, f: StateFormula):
        side = topdown_fragment(f)
        if side is None:
            raise FragmentError(
                "top-down engine needs positive CTL over {EX,EF,EFi} or {AX,AG,AGi}")
        self.K = structure
        self.negated = side == "A"
        target = negate(f) if self.negated else f
        self.kinds: list[int] = []
        self.args: list[tuple] = []
        self.props: list = []
        self._ids: dict = {}
        self.root = self._compile(target)
        n = structure.n
        self.memo = [bytearray(n) for _ in self.kinds]
        self.index = structure.graph_index if any(
            k in (_EF, _EFI) for k in self.kinds) else None
        self.comp_memo = [dict() for _ in self.kinds]
        self.calls = 0

    def _compile(self, s) -> int:
        if s in self._ids:
            return self._ids[s]
        if is_propositional(s):
            kind, args, prop = _PROP, (), s
        elif isinstance(s, And):
            kind, args, prop = _AND, (self._compile(s.left), self._compile(s.right)), None
        elif isinstance(s, Or):
            kind, args, prop = _OR, (self._compile(s.left), self._compile(s.right)), None
        elif isinstance(s, PathQuant) and s.quantifier == "E" and isinstance(s.body.arg, Embed):
            body = s.body
            kind = {X: _EX, F: _EF, Finf: _EFI}.get(type(body))
            if kind is None:
                raise FragmentError(f"operator outside the fragment in {s}")
            args, prop = (self._compile(body.arg.state),), None
        else:
            raise FragmentError(f"negated temporal subformula in {s}")
        i = len(self.kinds)
        self.kinds.append(kind)
        self.args.append(args)
        self.props.append(prop)
        self._ids[s] = i
        return i

    def holds(self, state: str) -> bool:
        w = self.K.check_state(state)
        value = self._eval(self.root, w)
        return not value if self.negated else value

    def _eval(self, node: int, w: int) -> bool:
        cached = self.memo[node][w]
        if cached:
            return cached == 2
        self.calls += 1
        kind = self.kinds[node]
        if kind == _PROP:
            result = prop_holds(self.K.labels[w], self.props[node])
        elif kind == _AND:
            a, b = self.args[node]
            result = self._eval(a, w) and self._eval(b, w)
        elif kind == _OR:
            a, b = self.args[node]
            result = self._eval(a, w) or self._eval(b, w)
        elif kind == _EX:
            a = self.args[node][0]
            result = any(self._eval(a, v) for v in self.K.succ[w])
        else:
            result = self._reach(node, self.index.comp[w])
        self.memo[node][w] = 2 if result else 1
        return result

    def _component_hit(self, node: int, c: int) -> bool:
        a = self.args[node][0]
        if self.kinds[node] == _EFI and not self.index.nontrivial[c]:
            return False
        return any(self._eval(a, v) for v in self.index.comps[c])

    def _reach(self, node: int, start: int) -> bool:
        """Is some component below ``start`` (inclusive) a hit for ``node``?"""
        memo = self.comp_memo[node]
        if start in memo:
            return memo[start]
        comp_succ = self.index.comp_succ
        local: dict = {}
        stack = [start]
        while stack:
            c = stack[-1]
            if c in memo:
                stack.pop()
                continue
            if c not in local:
                local[c] = self._component_hit(node, c)
                if local[c]:
                    memo[c] = True
                    stack.pop()
                    continue
                pending = [d for d in comp_succ[c] if d not in memo]
                if pending:
                    stack.extend(pending)
                    continue
            memo[c] = any(memo[d] for d in comp_succ[c])
            stack.pop()
        return memo[start]


def check_topdown_pos(structure: KripkeStructure, w0: str, f: StateFormula) -> bool:
    """Truth of ``f`` at ``w0`` for the positive {EX,EF,EFi} / {AX,AG,AGi} fragments."""
    return TopDownChecker(structure, f).holds(w0)
