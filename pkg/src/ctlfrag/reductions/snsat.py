"""Formula families for the sequentially nested satisfiability reduction.

Only the formulas are produced; no Kripke structure is generated.

``build_snsat_psi`` returns two sequences indexed by ``k = 0 .. 2n-1``:
``psi[k]`` uses full negation and ``F``, while ``psi_prime[k]`` is
negation-free above atoms and uses only ``A``, ``E`` and ``G``.  For odd
``k`` the primed formula rewrites ``psi[k]``; for even ``k >= 2`` it
rewrites ``~psi[k]``.

Literals are strings ``"x3"``, ``"~x3"``, ``"z1"``, ``"~z1"``.  The
proposition of a negative literal is the barred atom (``xb3``, ``zb1``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    F,
    G,
    Not,
    Or,
    PathQuant,
    StateFormula,
    children,
    conj,
    disj,
    embed,
    p_and,
    p_conj,
    p_disj,
    p_not,
    p_or,
    token_set,
)

_LIT = re.compile(r"(~?)([xz])([1-9][0-9]*)\Z")
_SUFFIXES = ("00", "01", "10", "11")


class SnsatError(ValueError):
    """Malformed literal or clause list."""


def _parse_literal(lit: str) -> tuple[bool, str, int]:
    m = _LIT.match(lit.strip())
    if not m:
        raise SnsatError(f"literal must look like x3, ~x3, z1 or ~z1, got {lit!r}")
    return m.group(1) == "", m.group(2), int(m.group(3))


def literal_atom(lit: str) -> Atom:
    positive, kind, i = _parse_literal(lit)
    return Atom(f"{kind}{i}" if positive else f"{kind}b{i}")


def complement_atom(lit: str) -> Atom:
    positive, kind, i = _parse_literal(lit)
    return Atom(f"{kind}b{i}" if positive else f"{kind}{i}")


def x(i):
    return Atom(f"x{i}")


def xb(i):
    return Atom(f"xb{i}")


def c(i):
    return Atom(f"c{i}")


def s(i, suffix):
    return Atom(f"s{i}_{suffix}")


@dataclass(frozen=True)
class SnsatFormulas:
    psi: tuple
    psi_prime: tuple
    alphabet: tuple


def alphabet(n: int, p: int) -> tuple:
    props = []
    for i in range(1, n + 1):
        props += [x(i), xb(i), c(i)] + [s(i, b) for b in _SUFFIXES]
    for i in range(1, p + 1):
        props += [Atom(f"z{i}"), Atom(f"zb{i}")]
    return tuple(props)


def build_snsat_psi(n: int, phis) -> SnsatFormulas:
    """Formulas for ``n`` nested CNFs ``phis[0..n-1]`` (each a list of literal lists)."""
    if n < 1:
        raise SnsatError("n must be at least 1")
    phis = [[list(clause) for clause in phi] for phi in phis]
    if len(phis) != n:
        raise SnsatError(f"expected {n} clause lists, got {len(phis)}")
    z_max = 0
    for i, phi in enumerate(phis, 1):
        for clause in phi:
            if not clause:
                raise SnsatError("empty clause")
            for lit in clause:
                _, kind, j = _parse_literal(lit)
                if kind == "x" and j > n:
                    raise SnsatError(f"literal {lit} refers to x{j}, only x1..x{n} exist")
                if kind == "z":
                    z_max = max(z_max, j)
    phi_set = alphabet(n, z_max)
    idx = range(1, n + 1)

    def big_or_except(*excluded):
        return disj([a for a in phi_set if a not in excluded])

    any_xb = disj([xb(i) for i in idx])
    any_x = disj([x(i) for i in idx])
    any_c = disj([c(i) for i in idx])
    any_s = disj([s(i, b) for i in idx for b in _SUFFIXES])
    no_s = conj([Not(s(i, b)) for i in idx for b in _SUFFIXES])

    psi: list[StateFormula] = [TRUE]
    for k in range(1, 2 * n):
        prev = psi[k - 1]
        part_a = G(embed(Or(Not(any_xb), PathQuant("E", p_and(
            p_not(F(embed(any_s))), F(embed(And(any_x, Not(prev)))))))))
        part_b = G(embed(conj([Not(c(i)) for i in idx])))
        part_c = p_conj([
            p_or(p_not(F(embed(x(i)))),
                 p_conj([p_disj([F(embed(literal_atom(l))) for l in clause])
                         for clause in phis[i - 1]]))
            for i in idx])
        psi.append(PathQuant("E", p_conj([part_a, part_b, part_c])))

    prime: list[StateFormula] = [TRUE]
    for k in range(1, 2 * n):
        prev = prime[k - 1]
        if k % 2 == 1:
            # prev stands for the negation of psi[k-1]; psi[0] is true
            negated_prev = FALSE if k == 1 else prev
            part_a = G(embed(Or(conj([Not(xb(i)) for i in idx]), PathQuant("E", p_and(
                G(embed(no_s)), G(embed(disj([any_xb, any_c, negated_prev]))))))))
            part_b = G(embed(conj([Not(c(i)) for i in idx])))
            part_c = p_conj([
                p_or(G(embed(Not(x(i)))),
                     p_conj([p_disj([G(embed(big_or_except(complement_atom(l)))) for l in clause])
                             for clause in phis[i - 1]]))
                for i in idx])
            prime.append(PathQuant("E", p_conj([part_a, part_b, part_c])))
        else:
            part_a = p_disj([
                G(embed(Or(big_or_except(xb(i)), PathQuant("A", p_or(
                    G(embed(big_or_except(c(i)))), G(embed(Or(c(i), prev))))))))
                for i in idx])
            part_b = p_disj([
                G(embed(big_or_except(s(i, "00"), s(i, "01"), s(i - 1, "01"), s(i - 1, "11"))))
                for i in range(2, n + 1)])
            part_c = p_disj([
                p_and(G(embed(big_or_except(xb(i)))),
                      p_disj([p_conj([G(embed(Not(literal_atom(l)))) for l in clause])
                              for clause in phis[i - 1]]))
                for i in idx])
            prime.append(PathQuant("A", p_disj([part_a, part_b, part_c])))
    return SnsatFormulas(tuple(psi), tuple(prime), tuple(a.name for a in phi_set))


def dag_size(f) -> int:
    """Number of distinct subformulas (shared subterms counted once)."""
    seen = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(children(node))
    return len(seen)


def uses_only(f, tokens) -> bool:
    """Are all quantifiers and temporal operators of ``f`` among ``tokens``?"""
    return token_set(f) <= frozenset(tokens)

