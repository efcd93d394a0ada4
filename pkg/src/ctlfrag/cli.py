"""Command-line frontend: check, classify, generate, oracle, corpus-verify.

Machine-readable JSON goes to standard output, messages for humans to
standard error.  Exit codes are part of the interface:

====  ==========================================
0     formula true / command succeeded
1     formula false
2     usage, parse or input error
3     formula outside the requested engine's fragment
4     oracle indeterminate at its bound
5     corpus or generator verification mismatch
====  ==========================================
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import engines
from .classifier import ClassificationError, FragmentProfile, classify, classify_formula
from .engines import FragmentError, applicable_engines, run_engine, select_engine
from .formula import (
    CTL,
    CTLPLUS,
    DISCIPLINES,
    ECTL,
    ECTLPLUS,
    FULL,
    PROPOSITIONAL,
    PathQuant,
    StateFormula,
    temporal_count,
    to_text,
    walk,
)
from .kripke import KripkeError, KripkeStructure, load_kripke
from .oracle import CAP_ENV, Oracle
from .parser import FormulaSyntaxError, parse_formula
from .reductions import (
    CIRCUIT_GENERATORS,
    CNF_GENERATORS,
    GAME_GENERATORS,
    GENERATOR_NAMES,
    BundleError,
    CircuitError,
    CnfError,
    GameError,
    SnsatError,
    build_snsat_psi,
    is_bundle,
    load_dimacs,
    load_game,
    load_netlist,
    parse_bits,
    read_bundle,
    to_ectl_instance,
    write_bundle,
)

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_FRAGMENT, EXIT_INDETERMINATE, EXIT_MISMATCH = range(6)

# documented comfort zone of the oracle
ORACLE_MAX_STATES = 8
ORACLE_MAX_TEMPORAL = 4

ENGINE_CHOICES = ("auto",) + engines.ENGINES
FAMILY_NAMES = {"propositional": PROPOSITIONAL, "ctl": CTL, "ectl": ECTL,
                "ctlplus": CTLPLUS, "ectlplus": ECTLPLUS}
CONFIG_KEYS = {"engine", "state", "bound", "cap", "jobs", "escalate"}


def load_schema(name: str) -> dict:
    """Shipped JSON schema for one output kind: report, verdict, manifest, oracle, corpus, snsat."""
    ref = importlib.resources.files("ctlfrag") / "schemas" / f"{name}.schema.json"
    return json.loads(ref.read_text())


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


@dataclass
class RunReport:
    engine: str
    state: str
    classification: dict | None
    timings: dict = field(default_factory=dict)
    counters: dict = field(default_factory=dict)
    verdict: bool | None = None
    table: dict | None = None

    def as_json(self) -> dict:
        out = {"engine": self.engine, "state": self.state,
               "classification": self.classification,
               "timings": self.timings, "counters": self.counters}
        if self.verdict is not None:
            out["verdict"] = self.verdict
        if self.table is not None:
            out["table"] = self.table
        return out


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


# ----------------------------------------------------------------- config

def read_config(path: str | Path) -> dict:
    """``key = value`` lines; ``#`` comments; quotes around values are stripped."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("_", "-")
        if not sep:
            raise CliError(f"{path}:{lineno}: expected key = value")
        if key not in CONFIG_KEYS:
            raise CliError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip().strip('"').strip("'")
    return out


def _apply_config(args: argparse.Namespace, config: dict) -> None:
    """Fill options the user left unset; flags always win."""
    for key, value in config.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr) or getattr(args, attr) not in (None, "auto"):
            continue
        if attr in ("bound", "cap", "jobs"):
            value = int(value)
        elif attr == "escalate":
            value = value.lower() in ("1", "true", "yes", "on")
        setattr(args, attr, value)


# ----------------------------------------------------------------- inputs

def _load_model(path: str, repair: bool) -> KripkeStructure:
    try:
        return load_kripke(path, repair=repair)
    except OSError as exc:
        raise CliError(f"cannot read model: {exc}") from None
    except KripkeError as exc:
        raise CliError(f"model {path}: {exc}") from None


def _load_formula(text: str) -> StateFormula:
    """A formula string, or ``@path`` / an existing file path holding one."""
    source = text
    if text.startswith("@"):
        source = Path(text[1:]).read_text()
    elif os.path.isfile(text):
        source = Path(text).read_text()
    try:
        return parse_formula(source)
    except FormulaSyntaxError as exc:
        raise CliError(f"formula: {exc}") from None


def _verdict_json(f: StateFormula) -> dict | None:
    try:
        return classify_formula(f).as_json()
    except (ClassificationError, FragmentError):
        return None


def _max_temporal(f: StateFormula) -> int:
    return max((temporal_count(n.body) for n in walk(f) if isinstance(n, PathQuant)), default=0)


def _oracle_fits(K: KripkeStructure, f: StateFormula) -> bool:
    return K.n <= ORACLE_MAX_STATES and _max_temporal(f) <= ORACLE_MAX_TEMPORAL


def _warn_oracle_size(K: KripkeStructure, f: StateFormula) -> None:
    if not _oracle_fits(K, f):
        _say(f"warning: oracle is meant for at most {ORACLE_MAX_STATES} states and "
             f"{ORACLE_MAX_TEMPORAL} temporal operators per quantifier; this may be slow")


# ------------------------------------------------------------------ check

def cmd_check(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    K = _load_model(args.model, args.repair)
    f = _load_formula(args.formula)
    t1 = time.perf_counter()
    state = args.state or K.states[0]
    try:
        K.check_state(state)
    except KripkeError as exc:
        raise CliError(str(exc)) from None
    K.graph_index
    t2 = time.perf_counter()

    engine = args.engine or "auto"
    if engine == "auto":
        try:
            engine = select_engine(f)
        except FragmentError as exc:
            raise CliError(str(exc), EXIT_FRAGMENT) from None
    elif engine != engines.ORACLE and engine not in applicable_engines(f):
        raise CliError(f"engine {engine!r} does not accept this formula "
                       f"(applicable: {', '.join(applicable_engines(f)) or 'none'})",
                       EXIT_FRAGMENT)
    if engine == engines.ORACLE:
        _warn_oracle_size(K, f)
        return _check_with_oracle(args, K, f, state, t0, t1, t2)
    try:
        row, engine, counters = run_engine(K, f, engine)
    except FragmentError as exc:
        raise CliError(str(exc), EXIT_FRAGMENT) from None
    t3 = time.perf_counter()
    report = RunReport(engine, state, _verdict_json(f),
                       {"parse": t1 - t0, "index": t2 - t1, "check": t3 - t2},
                       dict(counters, oracle_calls=counters.get("oracle_calls", 0)),
                       verdict=bool(row[K.index[state]]))
    if args.all_states:
        report.table = {s: bool(v) for s, v in zip(K.states, row)}
    _emit(report.as_json())
    _say(f"{state}: {'true' if report.verdict else 'false'} ({engine})")
    return EXIT_TRUE if report.verdict else EXIT_FALSE


def _check_with_oracle(args, K, f, state, t0, t1, t2) -> int:
    oracle = Oracle(K, args.bound, args.escalate, args.cap)
    values = oracle.values(f)
    t3 = time.perf_counter()
    counters = {"oracle_calls": sum(1 for g in oracle._memo if isinstance(g, PathQuant)),
                "entries": len(oracle._memo) * K.n}
    value = values[K.index[state]]
    report = RunReport(engines.ORACLE, state, _verdict_json(f),
                       {"parse": t1 - t0, "index": t2 - t1, "check": t3 - t2}, counters,
                       verdict=value)
    if args.all_states:
        report.table = dict(zip(K.states, values))
    _emit(report.as_json())
    if value is None:
        _say(f"{state}: indeterminate at the lasso bound")
        return EXIT_INDETERMINATE
    _say(f"{state}: {'true' if value else 'false'} (oracle)")
    return EXIT_TRUE if value else EXIT_FALSE


# --------------------------------------------------------------- classify

def _parse_ops(text: str) -> frozenset:
    return frozenset(t.strip() for t in text.replace(" ", ",").split(",") if t.strip())


def cmd_classify(args: argparse.Namespace) -> int:
    try:
        if args.formula is not None:
            if args.family or args.ops is not None or args.discipline:
                raise CliError("give either a formula or profile flags, not both")
            verdict = classify_formula(_load_formula(args.formula))
        else:
            family = FAMILY_NAMES.get((args.family or "ctl").lower())
            if family is None:
                raise CliError(f"unknown family {args.family!r}; "
                               f"expected one of {', '.join(FAMILY_NAMES)}")
            verdict = classify(FragmentProfile(family, _parse_ops(args.ops or ""),
                                               args.discipline or FULL))
    except ClassificationError as exc:
        raise CliError(str(exc)) from None
    except FragmentError as exc:
        raise CliError(str(exc), EXIT_FRAGMENT) from None
    _emit(verdict.as_json())
    _say(str(verdict))
    return EXIT_TRUE


# --------------------------------------------------------------- generate

def _generate(args: argparse.Namespace):
    name, src = args.generator, args.source
    try:
        if name in GAME_GENERATORS:
            return GAME_GENERATORS[name](load_game(src))
        if name in CIRCUIT_GENERATORS:
            if args.input is None:
                raise CliError(f"{name} needs --input with the circuit's input bits")
            return CIRCUIT_GENERATORS[name](load_netlist(src), parse_bits(args.input))
        if name in CNF_GENERATORS:
            return CNF_GENERATORS[name](load_dimacs(src))
        if name == "ectl-lift":
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                lifted = to_ectl_instance(read_bundle(src))
            for w in caught:
                _say(f"warning: {w.message}")
            return lifted
    except OSError as exc:
        raise CliError(f"cannot read source: {exc}") from None
    except (GameError, CircuitError, CnfError, BundleError) as exc:
        raise CliError(f"source {src}: {exc}") from None
    raise CliError(f"unknown generator {name!r}")


def _generate_snsat(args: argparse.Namespace) -> int:
    try:
        data = json.loads(Path(args.source).read_text())
        formulas = build_snsat_psi(int(data["n"]), data["phis"])
    except OSError as exc:
        raise CliError(f"cannot read source: {exc}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, SnsatError) as exc:
        raise CliError(f"source {args.source}: {exc}") from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "psi.txt").write_text("".join(to_text(f) + "\n" for f in formulas.psi))
    (out / "psi_prime.txt").write_text("".join(to_text(f) + "\n" for f in formulas.psi_prime))
    manifest = {"generator": "snsat-psi", "n": int(data["n"]),
                "count": len(formulas.psi), "alphabet": list(formulas.alphabet),
                "files": ["psi.txt", "psi_prime.txt"]}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    _emit(manifest)
    _say(f"wrote {len(formulas.psi)} formula pairs to {out}")
    return EXIT_TRUE


def cmd_generate(args: argparse.Namespace) -> int:
    if args.generator == "snsat-psi":
        return _generate_snsat(args)
    instance = _generate(args)
    out = write_bundle(instance, args.out)
    manifest = json.loads((out / "manifest.json").read_text())
    if args.verify:
        engine = select_engine(instance.formula)
        got = bool(run_engine(instance.structure, instance.formula, engine)[0]
                   [instance.structure.index[instance.start]])
        manifest_out = dict(manifest, verified={"engine": engine, "value": got})
        _emit(manifest_out)
        if got != instance.expected:
            _say(f"verification failed: {engine} says {got}, expected {instance.expected}")
            return EXIT_MISMATCH
        _say(f"wrote {out} (verified with {engine})")
        return EXIT_TRUE
    _emit(manifest)
    _say(f"wrote {out}")
    return EXIT_TRUE


# ----------------------------------------------------------------- oracle

def cmd_oracle(args: argparse.Namespace) -> int:
    K = _load_model(args.model, args.repair)
    f = _load_formula(args.formula)
    state = args.state or K.states[0]
    try:
        K.check_state(state)
    except KripkeError as exc:
        raise CliError(str(exc)) from None
    _warn_oracle_size(K, f)
    oracle = Oracle(K, args.bound, args.escalate, args.cap)
    values = oracle.values(f)
    witnesses = [{"state": s, "path": to_text(PathQuant("E", chi)),
                  "prefix": list(l.prefix), "cycle": list(l.cycle)}
                 for (chi, s), l in oracle.witnesses.items()]
    value = values[K.index[state]]
    _emit({"state": state, "value": value, "table": dict(zip(K.states, values)),
           "witnesses": witnesses})
    if value is None:
        _say(f"{state}: indeterminate at the lasso bound")
        return EXIT_INDETERMINATE
    _say(f"{state}: {'true' if value else 'false'}")
    return EXIT_TRUE if value else EXIT_FALSE


# ---------------------------------------------------------- corpus-verify

def _find_bundles(root: Path) -> list:
    if is_bundle(root):
        return [root]
    return sorted(p.parent for p in root.rglob("manifest.json") if is_bundle(p.parent))


def verify_bundle(path: str) -> dict:
    """Check one bundle with the selected engine and, when small, the oracle."""
    try:
        h = read_bundle(path)
    except BundleError as exc:
        return {"bundle": path, "error": str(exc)}
    K, w, f = h.structure, h.start, h.formula
    entry = {"bundle": path, "generator": h.provenance.generator, "expected": h.expected}
    try:
        engine = select_engine(f)
        entry["engine"] = engine
        entry["engine_value"] = bool(run_engine(K, f, engine)[0][K.index[w]])
    except FragmentError as exc:
        return dict(entry, error=str(exc))
    if _oracle_fits(K, f):
        value = Oracle(K).values(f)[K.index[w]]
        entry["oracle_value"] = "indeterminate" if value is None else value
    agree = entry["engine_value"] == h.expected
    if isinstance(entry.get("oracle_value"), bool):
        agree = agree and entry["oracle_value"] == h.expected
    entry["agree"] = agree
    return entry


def cmd_corpus_verify(args: argparse.Namespace) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        raise CliError(f"{root} is not a directory")
    t0 = time.perf_counter()
    paths = [str(p) for p in _find_bundles(root)]
    jobs = args.jobs or 1
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(verify_bundle, paths, chunksize=8))
    else:
        results = [verify_bundle(p) for p in paths]
    errors = [r for r in results if "error" in r]
    mismatches = [r for r in results if r.get("agree") is False]
    summary = {
        "directory": str(root),
        "instances": len(results),
        "agreements": sum(1 for r in results if r.get("agree")),
        "mismatches": mismatches,
        "errors": errors,
        "oracle_checked": sum(1 for r in results if isinstance(r.get("oracle_value"), bool)),
        "oracle_indeterminate": sum(1 for r in results if r.get("oracle_value") == "indeterminate"),
        "timings": {"total": time.perf_counter() - t0},
    }
    _emit(summary)
    _say(f"{summary['agreements']}/{len(results)} instances agree, "
         f"{len(mismatches)} mismatches, {len(errors)} unreadable")
    if errors:
        return EXIT_USAGE
    return EXIT_MISMATCH if mismatches else EXIT_TRUE


# ----------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ctlfrag", description=__doc__.split("\n\n")[0])
    parser.add_argument("--config", help="key = value file with option defaults")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_opts(p):
        p.add_argument("model", help="Kripke structure file (line format or JSON)")
        p.add_argument("formula", help="formula text, or @file")
        p.add_argument("--state", help="state to report (default: first declared)")
        p.add_argument("--repair", action="store_true",
                       help="add self-loops to dead-end states instead of rejecting them")

    def oracle_opts(p):
        p.add_argument("--bound", type=int, help="lasso length bound")
        p.add_argument("--cap", type=int,
                       help=f"escalation cap (default from ${CAP_ENV} or 4x the bound)")
        p.add_argument("--escalate", action="store_true", default=None,
                       help="accept witnesses up to the cap")

    p = sub.add_parser("check", help="model check a formula")
    model_opts(p)
    p.add_argument("--engine", choices=ENGINE_CHOICES, help="engine (default: auto)")
    p.add_argument("--all-states", action="store_true", help="include the per-state table")
    oracle_opts(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("classify", help="complexity class of a fragment")
    p.add_argument("formula", nargs="?", help="formula text, or @file")
    p.add_argument("--family", help=", ".join(FAMILY_NAMES))
    p.add_argument("--ops", help="comma-separated operator tokens, e.g. EX,EF or A,G")
    p.add_argument("--discipline", choices=DISCIPLINES)
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("generate", help="write a hardness instance bundle")
    p.add_argument("generator", choices=GENERATOR_NAMES)
    p.add_argument("source", help="game JSON, netlist, DIMACS file, bundle dir or SNSAT JSON")
    p.add_argument("out", help="output directory")
    p.add_argument("--input", help="circuit input bits, e.g. 101")
    p.add_argument("--verify", action="store_true", help="re-check the expected value")
    p.set_defaults(run=cmd_generate)

    p = sub.add_parser("oracle", help="evaluate with the reference oracle")
    model_opts(p)
    oracle_opts(p)
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("corpus-verify", help="re-check every bundle under a directory")
    p.add_argument("directory")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.set_defaults(run=cmd_corpus_verify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.config:
            _apply_config(args, read_config(args.config))
        if getattr(args, "escalate", False) is None:
            args.escalate = False
        if getattr(args, "engine", None) not in (None, *ENGINE_CHOICES):
            raise CliError(f"unknown engine {args.engine!r}")
        return args.run(args)
    except CliError as exc:
        _say(f"error: {exc}")
        return exc.code
    except FileNotFoundError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
