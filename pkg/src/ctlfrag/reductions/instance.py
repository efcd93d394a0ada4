"""Hardness instances and their on-disk bundle format.

A bundle is a directory holding ``model.kripke`` (line format),
``formula.txt`` and ``manifest.json`` with the start state, the expected
truth value and the provenance of the instance.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..formula import StateFormula, to_text
from ..kripke import KripkeStructure, kripke_to_text, load_kripke
from ..parser import parse_formula

MODEL_FILE = "model.kripke"
FORMULA_FILE = "formula.txt"
MANIFEST_FILE = "manifest.json"
MANIFEST_VERSION = 1


class BundleError(ValueError):
    """A bundle directory is missing files or holds inconsistent data."""


def digest(obj) -> str:
    """Stable short hash of a JSON-serializable source object."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class Provenance:
    generator: str
    source_digest: str
    flags: tuple = ()
    notes: tuple = ()

    def as_json(self) -> dict:
        return {"generator": self.generator, "source_digest": self.source_digest,
                "flags": list(self.flags), "notes": list(self.notes)}

    @classmethod
    def from_json(cls, data: dict) -> "Provenance":
        return cls(data["generator"], data["source_digest"],
                   tuple(data.get("flags", ())), tuple(data.get("notes", ())))


@dataclass(frozen=True)
class HardnessInstance:
    structure: KripkeStructure
    start: str
    formula: StateFormula
    expected: bool
    provenance: Provenance
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.structure.check_state(self.start)

    def with_provenance(self, **changes) -> "HardnessInstance":
        return replace(self, provenance=replace(self.provenance, **changes))


def write_bundle(instance: HardnessInstance, directory: str | Path) -> Path:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    (out / MODEL_FILE).write_text(kripke_to_text(instance.structure))
    (out / FORMULA_FILE).write_text(to_text(instance.formula) + "\n")
    manifest = {
        "version": MANIFEST_VERSION,
        "start": instance.start,
        "expected": instance.expected,
        "provenance": instance.provenance.as_json(),
        "model": MODEL_FILE,
        "formula": FORMULA_FILE,
        "meta": instance.meta,
    }
    (out / MANIFEST_FILE).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return out


def read_bundle(directory: str | Path) -> HardnessInstance:
    src = Path(directory)
    try:
        manifest = json.loads((src / MANIFEST_FILE).read_text())
        structure = load_kripke(src / manifest.get("model", MODEL_FILE))
        formula = parse_formula((src / manifest.get("formula", FORMULA_FILE)).read_text())
        return HardnessInstance(structure, manifest["start"], formula,
                                bool(manifest["expected"]),
                                Provenance.from_json(manifest["provenance"]),
                                manifest.get("meta", {}))
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise BundleError(f"unreadable bundle {src}: {exc}") from exc


def is_bundle(directory: str | Path) -> bool:
    return (Path(directory) / MANIFEST_FILE).is_file()
