"""Complexity classification of model checking fragments.

A fragment is a logic family, a set of operator tokens and a negation
discipline.  :func:`classify` maps it to the completeness class of its
model checking problem, the result that establishes it and the engine this
package uses for formulas in it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engines import (
    CTLPLUS_AEX,
    CTLPLUS_GENERAL,
    LABELLING,
    PROPOSITIONAL_ENGINE,
    TOPDOWN,
    select_engine,
)
from .engines.topdown import EXISTENTIAL, UNIVERSAL
from .formula import (
    CTL,
    CTL_OPERATORS,
    CTLPLUS,
    CTLSTAR,
    DISCIPLINES,
    ECTL,
    ECTL_OPERATORS,
    ECTL_PLUS_TOKENS,
    ECTLPLUS,
    FULL,
    PLUS_TOKENS,
    PROPOSITIONAL,
    StateFormula,
    negation_discipline,
    operator_set,
    syntactic_class,
)

NC1, LOGCFL, P, NP, CONP, DELTAP2 = "NC1", "LOGCFL", "P", "NP", "coNP", "DeltaP2"
CLASSES = (NC1, LOGCFL, P, NP, CONP, DELTAP2)
# NP and coNP are incomparable; everything else is a chain
CLASS_RANK = {NC1: 0, LOGCFL: 1, P: 2, NP: 3, CONP: 3, DELTAP2: 4}

CITATIONS = ("Thm 3.1", "Thm 3.2", "Thm 3.4", "Thm 4.1", "Thm 4.2", "Thm 4.3", "Cor 4.4")

_INF_TO_FIN = {"AFi": "AF", "EFi": "EF", "AGi": "AG", "EGi": "EG", "Fi": "F", "Gi": "G"}
_PURE_BEYOND_X = frozenset({"F", "G", "U", "R"})


class ClassificationError(ValueError):
    """The profile is malformed or outside the classified families."""


@dataclass(frozen=True)
class FragmentProfile:
    family: str
    operators: frozenset = field(default_factory=frozenset)
    discipline: str = FULL

    def __post_init__(self):
        object.__setattr__(self, "operators", frozenset(self.operators))
        if self.discipline not in DISCIPLINES:
            raise ClassificationError(f"unknown negation discipline {self.discipline!r}")


@dataclass(frozen=True)
class ComplexityVerdict:
    complexity_class: str
    theorem: str
    rule: str
    engine: str
    completeness: str = "complete"

    def __post_init__(self):
        if self.theorem not in CITATIONS:
            raise ValueError(f"unknown citation {self.theorem!r}")

    def as_json(self) -> dict:
        return {"class": self.complexity_class, "completeness": self.completeness,
                "theorem": self.theorem, "rule": self.rule, "engine": self.engine}

    def __str__(self):
        return f"{self.complexity_class}-{self.completeness} ({self.theorem}: {self.rule})"


def normalize_infinitary(tokens) -> frozenset:
    """Replace each infinitely-often token by its plain counterpart."""
    return frozenset(_INF_TO_FIN.get(t, t) for t in tokens)


def profile_of(f: StateFormula) -> FragmentProfile:
    return FragmentProfile(syntactic_class(f), operator_set(f), negation_discipline(f))


def classify(profile: FragmentProfile) -> ComplexityVerdict:
    family, ops, disc = profile.family, profile.operators, profile.discipline
    if family == CTLSTAR:
        raise ClassificationError("CTL* fragments are not classified")
    if family in (PROPOSITIONAL, CTL, ECTL):
        allowed = set(CTL_OPERATORS) | (set(ECTL_OPERATORS) if family == ECTL else set())
        bad = ops - allowed
        if bad:
            raise ClassificationError(
                f"{family} profile lists tokens outside its paired operators: {sorted(bad)}")
        if family == PROPOSITIONAL and ops:
            raise ClassificationError("propositional profile must have no operators")
        return _classify_ctl(family, ops, disc)
    if family in (CTLPLUS, ECTLPLUS):
        allowed = set(PLUS_TOKENS) | (set(ECTL_PLUS_TOKENS) if family == ECTLPLUS else set())
        bad = ops - allowed
        if bad:
            raise ClassificationError(
                f"{family} profile lists tokens outside its separate operators: {sorted(bad)}")
        if not ops & {"A", "E"}:
            raise ClassificationError(
                f"{family} profile needs at least one path quantifier")
        return _classify_plus(family, ops, disc)
    raise ClassificationError(f"unknown family {family!r}")


def _ctl_engine(ops: frozenset, disc: str) -> str:
    if not ops:
        return PROPOSITIONAL_ENGINE
    if disc != FULL and (ops <= EXISTENTIAL or ops <= UNIVERSAL):
        return TOPDOWN
    return LABELLING


def _classify_ctl(family: str, ops: frozenset, disc: str) -> ComplexityVerdict:
    engine = _ctl_engine(ops, disc)
    t = normalize_infinitary(ops)
    if disc == FULL:
        theorem = "Thm 3.1"
        if not t:
            cls, rule = NC1, "no temporal operators: propositional formula evaluation"
        else:
            cls, rule = P, "nonempty operator set with unrestricted negation"
    else:
        # LOGCFL cases cite the positive theorem directly; P-hardness for mon/an
        # goes through the discipline equivalence
        if not t:
            theorem = "Thm 3.1"
            cls, rule = NC1, "no temporal operators: formula evaluation"
        elif t <= {"EX", "EF"}:
            theorem = "Thm 3.2"
            cls, rule = LOGCFL, "operators within {EX,EF}"
        elif t <= {"AX", "AG"}:
            theorem = "Thm 3.2"
            cls, rule = LOGCFL, "operators within {AX,AG}"
        else:
            theorem = "Thm 3.2" if disc == "pos" else "Thm 3.4"
            hard = sorted(t - {"EX", "EF", "AX", "AG"})
            mixed = "" if hard else "; mixes the existential and universal sides"
            cls = P
            rule = f"operators beyond {{EX,EF}} and {{AX,AG}}: {', '.join(hard) or 'none'}{mixed}"
        if disc != "pos":
            rule += f" ({disc} discipline equivalent to pos)"
    if family == ECTL and ops != t:
        rule = f"after replacing Fi by F and Gi by G: {rule}; underlying {theorem}"
        theorem = "Thm 4.1"
    return ComplexityVerdict(cls, theorem, rule, engine)


def _classify_plus(family: str, ops: frozenset, disc: str) -> ComplexityVerdict:
    t = normalize_infinitary(ops)
    engine = CTLPLUS_AEX if ops <= {"A", "E", "X"} and family == CTLPLUS else CTLPLUS_GENERAL
    pure = sorted(t & _PURE_BEYOND_X)
    if disc == FULL:
        theorem = "Thm 4.2"
        if t <= {"A", "E"}:
            cls, rule = NC1, "only path quantifiers: formula evaluation"
        elif t <= {"A", "E", "X"}:
            cls, rule = P, "path quantifiers with X only"
        else:
            cls, rule = DELTAP2, f"pure temporal operators beyond X: {', '.join(pure)}"
    else:
        theorem = "Thm 4.3"
        if t <= {"A", "E"}:
            cls, rule = NC1, "only path quantifiers: monotone formula evaluation"
        elif t in ({"A", "X"}, {"E", "X"}):
            cls, rule = LOGCFL, f"a single path quantifier with X: {{{', '.join(sorted(t))}}}"
        elif t == {"A", "E", "X"}:
            cls, rule = P, "both path quantifiers with X only"
        elif "E" in t and "A" not in t:
            cls, rule = NP, f"existential only, pure temporal operators beyond X: {', '.join(pure)}"
        elif "A" in t and "E" not in t:
            cls, rule = CONP, f"universal only, pure temporal operators beyond X: {', '.join(pure)}"
        else:
            cls, rule = DELTAP2, f"both path quantifiers, pure temporal operators beyond X: {', '.join(pure)}"
        if disc != "pos":
            rule += f" ({disc} discipline, classified as pos)"
    if pure and set(pure) & {"U", "R"}:
        rule += "; U and R count as pure operators beyond X"
    if family == ECTLPLUS:
        rule = f"after replacing Fi by F and Gi by G: {rule}; underlying {theorem}"
        theorem = "Cor 4.4"
    return ComplexityVerdict(cls, theorem, rule, engine)


def classify_formula(f: StateFormula) -> ComplexityVerdict:
    """Verdict for the fragment that ``f`` belongs to."""
    profile = profile_of(f)
    if profile.family == CTLSTAR:
        raise ClassificationError("formula is outside ECTL+; CTL* fragments are not classified")
    verdict = classify(profile)
    engine = select_engine(f)
    if engine != verdict.engine:
        raise AssertionError(f"engine mismatch for {f}: {verdict.engine} vs {engine}")
    return verdict
