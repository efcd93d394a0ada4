"""Regenerate classification.json from the theorem statements.

Deliberately shares no code with ``ctlfrag.classifier``: every branch
below is a direct transcription of one stated case.  Run from the
repository root: ``python3 tests/golden/derive_classification.py``.
"""

import itertools
import json
from pathlib import Path

CTL_OPS = ["AX", "EX", "AF", "EF", "AG", "EG", "AU", "EU", "AR", "ER"]
PLUS = ["A", "E", "X", "F", "G", "U", "R"]
DISCS = ["mon", "an", "pos", "full"]


def ctl_case(ops, disc):
    ops = set(ops)
    if not ops:
        return "NC1", "Thm 3.1"
    if disc == "full":
        return "P", "Thm 3.1"
    if ops <= {"EX", "EF"} or ops <= {"AX", "AG"}:
        return "LOGCFL", "Thm 3.2"
    return "P", "Thm 3.2" if disc == "pos" else "Thm 3.4"


def plus_case(ops, disc):
    ops = set(ops)
    if disc == "full":
        if ops <= {"A", "E"}:
            return "NC1", "Thm 4.2"
        if ops <= {"A", "E", "X"}:
            return "P", "Thm 4.2"
        return "DeltaP2", "Thm 4.2"
    if ops <= {"A", "E"}:
        return "NC1", "Thm 4.3"
    if ops in ({"A", "X"}, {"E", "X"}):
        return "LOGCFL", "Thm 4.3"
    if ops == {"A", "E", "X"}:
        return "P", "Thm 4.3"
    pure = bool(ops & {"F", "G", "U", "R"})
    if pure and "E" in ops and "A" not in ops:
        return "NP", "Thm 4.3"
    if pure and "A" in ops and "E" not in ops:
        return "coNP", "Thm 4.3"
    return "DeltaP2", "Thm 4.3"


def subsets(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def main():
    table = {}
    for ops in subsets(CTL_OPS):
        for d in DISCS:
            table[f"CTL|{','.join(ops)}|{d}"] = ctl_case(ops, d)
    for ops in subsets(PLUS):
        if not {"A", "E"} & set(ops):
            continue
        for d in DISCS:
            table[f"CTLplus|{','.join(ops)}|{d}"] = plus_case(ops, d)
    out = Path(__file__).with_name("classification.json")
    out.write_text(json.dumps(table, indent=0, sort_keys=True) + "\n")
    print(f"{len(table)} entries -> {out}")


if __name__ == "__main__":
    main()
