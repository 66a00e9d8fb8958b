"""Command-line front end.

Every command reads one or more JSON state files (``-`` for stdin) holding a
state object ``{"n": 3, "amplitudes": [[re, im], ...]}`` or a list of them,
and writes one report per state.  ``sweep`` generates its own states.

Exit codes: 0 success, 1 input error, 2 identity violation.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any

import numpy as np

from . import __version__
from .canonical import acin_canonical, ghz_two_term, symmetric_form, weak_asymmetric
from .classification import (
    PARTY_NAMES, classify, default_eps, is_real, minimal_decomposition, real_basis,
    real_six_lbps,
)
from .errors import StateFormatError, TriqubitError
from .fourqubit import hdet_pencil_roots4, reduce_all_roots, reduce_to_twelve
from .invariants import check_identities, i_values, invariant_report, j_values
from .state import PureState3, PureState4, haar_random_states, normalize

COMMANDS = ("canon", "invariants", "classify", "minimal", "ghz", "symmetric", "real",
            "reduce4", "sweep")


# -- output -----------------------------------------------------------------

def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def dumps(obj: Any) -> str:
    """Compact JSON with insertion-ordered keys and 17 significant digits."""
    obj = _plain(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, list):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return "null"
        return format(obj + 0.0, ".17g")  # drops the sign of -0.0
    return json.dumps(obj)


def _table(obj: Any, prefix: str = "") -> list[str]:
    obj = _plain(obj)
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            lines += _table(v, f"{prefix}.{k}" if prefix else k)
        return lines
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj) and len(obj) > 2:
        lines = []
        for i, v in enumerate(obj):
            lines += _table(v, f"{prefix}[{i}]")
        return lines
    text = dumps(obj) if not isinstance(obj, float) else f"{obj:.10g}"
    return [f"{prefix:<40} {text}"]


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "table":
        out.write("\n".join(_table(report)) + "\n\n")
    else:
        out.write(dumps(report) + "\n")


# -- input ------------------------------------------------------------------

def _parse_amplitude(a, where: str) -> complex:
    if isinstance(a, (int, float)) and not isinstance(a, bool):
        return complex(a)
    if isinstance(a, list) and len(a) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in a):
        return complex(a[0], a[1])
    raise StateFormatError(f"{where}: amplitude {a!r} is not a number or [re, im] pair")


def parse_state(obj: Any, where: str = "input"):
    if not isinstance(obj, dict) or "amplitudes" not in obj:
        raise StateFormatError(f"{where}: expected an object with an 'amplitudes' field")
    amps = obj["amplitudes"]
    if not isinstance(amps, list):
        raise StateFormatError(f"{where}: 'amplitudes' must be a list")
    n = obj.get("n", 3 if len(amps) == 8 else 4 if len(amps) == 16 else None)
    if n not in (3, 4):
        raise StateFormatError(f"{where}: n must be 3 or 4, got {n!r}")
    if len(amps) != 2**n:
        raise StateFormatError(f"{where}: n = {n} needs {2**n} amplitudes, got {len(amps)}")
    raw = [_parse_amplitude(a, f"{where}[{i}]") for i, a in enumerate(amps)]
    try:
        return normalize(raw)
    except TriqubitError as exc:
        raise StateFormatError(f"{where}: {exc}") from exc


def load_states(path: str) -> list:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    items = data if isinstance(data, list) else [data]
    return [parse_state(obj, f"{path}#{k}") for k, obj in enumerate(items)]


# -- commands ---------------------------------------------------------------

def _need3(state) -> PureState3:
    if not isinstance(state, PureState3):
        raise StateFormatError("command expects a three-qubit state")
    return state


def cmd_canon(state, args) -> dict:
    cf = acin_canonical(_need3(state))
    return {"canonical": cf.to_json(), "weakAsymmetric": weak_asymmetric(cf).to_json()}


def cmd_invariants(state, args) -> dict:
    return invariant_report(_need3(state))


def _party_constructions(state) -> list:
    out = []
    t = np.asarray(state.tensor)
    for p in PARTY_NAMES:
        cf = acin_canonical(state, p)
        form = cf.gauge.forward(t)
        out.append({"party": p, "lambdas": list(cf.lambdas), "phi": cf.phi,
                    "nonzero": int(np.sum(np.abs(form) > 1e-8))})
    return out


def cmd_classify(state, args) -> dict:
    state = _need3(state)
    cls = classify(state, args.epsilon)
    report = cls.to_json()
    report["decomposition"] = minimal_decomposition(state, cls, args.epsilon).to_json()
    real = is_real(state, args.epsilon)
    report["real"] = {"isReal": real.isReal, "witness": real.witness}
    if args.all_parties:
        report["constructions"] = _party_constructions(state)
    return report


def cmd_minimal(state, args) -> dict:
    state = _need3(state)
    cls = classify(state, args.epsilon)
    dec = minimal_decomposition(state, cls, args.epsilon)
    report = {"type": cls.label, "nu": cls.nu, "construction": dec.kind,
              "decomposition": dec.to_json()}
    if args.all_parties:
        report["constructions"] = _party_constructions(state)
    return report


def cmd_ghz(state, args) -> dict:
    return ghz_two_term(_need3(state)).to_json()


def cmd_symmetric(state, args) -> dict:
    return symmetric_form(_need3(state), seed=args.seed).to_json()


def cmd_real(state, args) -> dict:
    state = _need3(state)
    decision = is_real(state, args.epsilon)
    report = decision.to_json()
    report["residuals"] = list(decision.residuals)
    if decision.isReal:
        report.update(real_basis(state, args.epsilon).to_json())
        report["sixTerm"] = real_six_lbps(state, args.epsilon).to_json()
    return report


def cmd_reduce4(state, args) -> dict:
    if not isinstance(state, PureState4):
        raise StateFormatError("reduce4 expects a four-qubit state")
    roots = hdet_pencil_roots4(state)
    report = reduce_to_twelve(state).to_json()
    report["identicallyZeroPencil"] = roots.identically_zero
    if args.all_roots:
        report["allRoots"] = [f.to_json() for f in reduce_all_roots(state)]
    return report


def cmd_sweep(args) -> tuple[dict, int]:
    x = haar_random_states(args.samples, args.seed)
    i = i_values(x)
    j = j_values(x)
    ledger = check_identities(j, i=i)
    counts = {k: int(np.size(v) - np.count_nonzero(v)) for k, v in ledger.items()}
    total = sum(counts.values())
    report = {"samples": args.samples, "seed": args.seed, "violations": total,
              "ledger": counts}
    return report, 0 if total == 0 else 2


HANDLERS = {"canon": cmd_canon, "invariants": cmd_invariants, "classify": cmd_classify,
            "minimal": cmd_minimal, "ghz": cmd_ghz, "symmetric": cmd_symmetric,
            "real": cmd_real, "reduce4": cmd_reduce4}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="triqubit",
                                     description="Canonical forms and invariants of qubit states.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("inputs", nargs="*", help="JSON state files, '-' for stdin")
    parser.add_argument("--epsilon", type=float, default=None,
                        help="classification tolerance (default: $TRIQUBIT_EPSILON or 1e-8)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--format", choices=("json", "table"), default="json")
    parser.add_argument("--all-parties", action="store_true")
    parser.add_argument("--all-roots", action="store_true")
    return parser


def _error(message: str) -> None:
    sys.stderr.write(dumps({"error": message}) + "\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.epsilon is None:
        try:
            args.epsilon = default_eps()
        except ValueError:
            _error("TRIQUBIT_EPSILON is not a number")
            return 1
    if not 0 < args.epsilon <= 1e-2:
        _error(f"epsilon must lie in (0, 1e-2], got {args.epsilon}")
        return 1
    if args.samples < 1:
        _error("samples must be at least 1")
        return 1
    if args.command == "sweep":
        report, code = cmd_sweep(args)
        emit(report, args.format)
        return code
    if not args.inputs:
        _error(f"{args.command} needs at least one input file")
        return 1
    code = 0
    try:
        states = [s for path in args.inputs for s in load_states(path)]
    except (TriqubitError, OSError) as exc:
        _error(str(exc))
        return 1
    for state in states:
        try:
            report = HANDLERS[args.command](state, args)
        except TriqubitError as exc:
            _error(f"{type(exc).__name__}: {exc}")
            code = max(code, 1)
            continue
        emit(report, args.format)
        identities = report.get("identities") if isinstance(report, dict) else None
        if identities and not all(identities.values()):
            code = 2
    return code


if __name__ == "__main__":
    sys.exit(main())
