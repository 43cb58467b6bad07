"""JSON command-line front end.

Reads one request document from stdin (or ``--file``), dispatches on its
``command`` field and writes a single JSON response to stdout.  Exit codes:
0 on success, 1 on malformed input, 2 on domain errors (non-invertible
input, stability failures, unsupported rings).  Rationals are serialized as
strings; responses are key-sorted so identical requests produce identical
bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from .coeff import RingSpec, ring_new
from .errors import EngineError, ParseError
from .forms import form_from_json, res
from .laurent import Window, decompose, series_from_json
from .symbol import additive_symbol, cc, tame_symbol
from .universal import PhiKey, check_integrality, check_weight_zero, phi_coefficients
from .witt import IndexSet, WittVector, ghost, witt_pair
from .checks import SUITES, default_ring


def _ring_from(doc):
    return ring_new(RingSpec.from_json(doc.get("ring", {"base": "Q"})))


def _series_list(ring, docs):
    return [series_from_json(ring, doc) for doc in docs]


def _cmd_cc(doc, args):
    ring = _ring_from(doc)
    entries = _series_list(ring, doc["tuple"])
    value, trace = cc(entries, max_doublings=args.window_doublings, want_trace=True)
    return {"value": str(value), "branch_trace": trace}


def _cmd_nu(doc, args):
    ring = _ring_from(doc)
    entries = _series_list(ring, doc["tuple"])
    return {"value": additive_symbol(entries)}


def _cmd_res(doc, args):
    ring = _ring_from(doc)
    n = int(doc["n"])
    form = form_from_json(ring, n, doc["form"])
    return {"value": str(res(form))}


def _cmd_decompose(doc, args):
    ring = _ring_from(doc)
    f = series_from_json(ring, doc["series"])
    dec = decompose(f)
    return dec.to_json()


def _cmd_tame(doc, args):
    ring = _ring_from(doc)
    f, g = _series_list(ring, doc["tuple"])
    return {"value": str(tame_symbol(f, g))}


def _cmd_witt_pair(doc, args):
    ring = _ring_from(doc)
    fs = _series_list(ring, doc["f"])
    index_set = IndexSet(tuple(sorted(int(i) for i in doc["S"])))
    coords = {int(i): series_from_json(ring, s) for i, s in doc["g"]["coords"].items()}
    vector = WittVector(index_set, coords)
    out = witt_pair(fs, vector, max_doublings=args.window_doublings)
    ghosts = ghost(out)
    integral = all(c.ring.base != "Q" or
                   all(s.denominator == 1 for s in c.terms.values())
                   for c in out.coords.values())
    return {"coords": {str(i): str(out.coords[i]) for i in out.S},
            "ghost": {str(i): str(ghosts.ghost[i]) for i in out.S},
            "integral": integral}


def _cmd_phi(doc, args):
    n = int(doc["n"])
    key = PhiKey(n, tuple(int(j) for j in doc.get("j", range(1, n + 1))))
    degree = int(doc.get("degree", args.degree or 4))
    win = doc.get("window")
    if win is None:
        window = Window.cube(n, 3)
    else:
        window = Window(tuple(int(x) for x in win["lo"]), tuple(int(x) for x in win["hi"]))
    series = phi_coefficients(key, degree, window, max_doublings=args.window_doublings)
    return {"coefficients": series.to_json(),
            "integral": check_integrality(series)["integral"],
            "weight_zero": check_weight_zero(series)["weight_zero"]}


def _cmd_check(doc, args):
    name = doc.get("suite")
    if name not in SUITES:
        raise ParseError(f"unknown suite {name!r}; have {sorted(SUITES)}")
    seed = int(doc.get("seed", args.seed or 0))
    trials = int(doc.get("trials", args.trials or 20))
    n = int(doc.get("n", 1))
    if name == "phi_integrality":
        report = SUITES[name](n=n, degree=int(doc.get("degree", args.degree or 4)),
                              radius=int(doc.get("radius", 3)))
    elif name == "sgn_agreement":
        report = SUITES[name](n=n, bound=int(doc.get("bound", 3)),
                              samples=int(doc.get("samples", 10000)), seed=seed)
    else:
        ring = _ring_from(doc) if "ring" in doc else default_ring()
        report = SUITES[name](ring, n=n, trials=trials, seed=seed)
    report["ok_suite"] = report["passed"] == report["trials"] and not report["failures"]
    return report


_COMMANDS = {
    "cc": _cmd_cc,
    "nu": _cmd_nu,
    "res": _cmd_res,
    "decompose": _cmd_decompose,
    "tame": _cmd_tame,
    "witt-pair": _cmd_witt_pair,
    "phi": _cmd_phi,
    "check": _cmd_check,
}


def _emit(payload, pretty):
    text = json.dumps(payload, sort_keys=True, indent=2 if pretty else None)
    sys.stdout.write(text + "\n")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="ccsym",
        description="exact higher Contou-Carrere symbols, residues and Witt pairings")
    parser.add_argument("--file", help="read the JSON request from a file instead of stdin")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--window-doublings", type=int, default=6)
    parser.add_argument("--degree", type=int, default=None)
    parser.add_argument("--json-pretty", action="store_true")
    args = parser.parse_args(argv)

    try:
        raw = open(args.file).read() if args.file else sys.stdin.read()
        doc = json.loads(raw)
        command = doc["command"]
        handler = _COMMANDS.get(command)
        if handler is None:
            raise ParseError(f"unknown command {command!r}; have {sorted(_COMMANDS)}")
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ParseError) as exc:
        detail = exc.detail if isinstance(exc, ParseError) else str(exc)
        _emit({"ok": False, "error": {"kind": "ParseError", "detail": detail}}, False)
        return 1

    try:
        result = handler(doc, args)
    except ParseError as exc:
        _emit({"ok": False, "error": {"kind": "ParseError", "detail": exc.detail}},
              args.json_pretty)
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        _emit({"ok": False, "error": {"kind": "ParseError", "detail": str(exc)}},
              args.json_pretty)
        return 1
    except EngineError as exc:
        _emit({"ok": False, "error": {"kind": exc.kind, "detail": exc.detail}},
              args.json_pretty)
        return 2
    payload = {"ok": True}
    payload.update(result)
    _emit(payload, args.json_pretty)
    return 0


if __name__ == "__main__":
    sys.exit(main())
