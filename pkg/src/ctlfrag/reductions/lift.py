"""Transfer of F/G instances to their infinitely-often counterparts."""

from __future__ import annotations

import warnings

from ..formula import F, Finf, G, Ginf, map_temporal, walk
from ..kripke import reflexive_closure
from .instance import HardnessInstance


class LiftWarning(UserWarning):
    """The instance has no F or G to substitute and is passed through."""


LIFT_FLAG = "ectl-lift"


def to_ectl_instance(h: HardnessInstance) -> HardnessInstance:
    """Reflexive closure of the structure, ``F`` -> ``Fi`` and ``G`` -> ``Gi`` in the formula.

    The expected value is carried over unchanged.  Instances without ``F``
    or ``G`` are returned as they are, with a :class:`LiftWarning`.
    """
    if not any(isinstance(node, (F, G)) for node in walk(h.formula)):
        warnings.warn(f"{h.provenance.generator} instance has no F or G; passed through",
                      LiftWarning, stacklevel=2)
        return h
    formula = map_temporal(h.formula, {F: Finf, G: Ginf})
    prov = h.provenance
    lifted = HardnessInstance(reflexive_closure(h.structure), h.start, formula, h.expected,
                              prov, dict(h.meta, lifted_from=prov.generator))
    return lifted.with_provenance(generator=f"{prov.generator}+{LIFT_FLAG}",
                                  flags=prov.flags + (LIFT_FLAG,))
