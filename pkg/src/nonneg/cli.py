"""Command-line driver: ``nonneg prove|classify|isolate|corpus run``.

Exit codes: 0 proved or classified, 1 disproved, 2 unknown (or an ambiguous
classification), 3 error. A corpus run exits 1 when a verdict disagrees with
``expected.json`` in the corpus directory.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .classifier import ClassificationResult, format_condition, real_root_classification, refine_condition
from .errors import BadInput, NonnegError
from .expr import parse_poly, variables
from .polyring import Ring, poly_normalize, to_text
from .prover import DISPROVED, PROVED, PROVED_GENERIC_CLOSURE, UNKNOWN, Verdict, prove
from .problemfile import ClassifyRequest, load_problem
from .realroots import isolate_roots

CLASSIFIED = "CLASSIFIED"
AMBIGUOUS = "AMBIGUOUS"
ERROR = "ERROR"

EXIT = {PROVED: 0, PROVED_GENERIC_CLOSURE: 0, CLASSIFIED: 0, DISPROVED: 1, UNKNOWN: 2, AMBIGUOUS: 2, ERROR: 3}

UNIFORM_LINE = "There is always given number of real solution(s)!"


# --- formatting -------------------------------------------------------------------
def _proviso(border) -> list:
    lines = ["PROVIDED THAT"]
    lines += [f"  {to_text(f)} != 0" for f in border.factors] or ["  (no condition)"]
    return lines


def format_result(result, mode: str = "text", name: str = "", timing: bool = True) -> str:
    """Render a ``Verdict`` or ``ClassificationResult`` as text or JSON."""
    if mode == "json":
        if isinstance(result, Verdict):
            body = result.to_json(timing=timing)
        else:
            body = result.to_json()
            body["status"] = classification_status(result)
        if name:
            body = {"name": name, **body}
        return json.dumps(body, indent=2, sort_keys=True)
    if mode != "text":
        raise BadInput(f"unknown output mode {mode!r}")
    if isinstance(result, Verdict):
        return _verdict_text(result, name)
    return _classification_text(result, name)


def classification_status(res: ClassificationResult) -> str:
    return AMBIGUOUS if res.condition is None else CLASSIFIED


def _verdict_text(v: Verdict, name: str) -> str:
    head = f"{name}: {v.status}" if name else v.status
    lines = [head]
    if v.status in (PROVED, PROVED_GENERIC_CLOSURE) and v.border is not None:
        lines.append("hypotheses and the negated goal have no real solution off the border:")
        lines.append(UNIFORM_LINE)
        lines += _proviso(v.border)
        if v.status == PROVED_GENERIC_CLOSURE:
            lines.append("the goal is non-strict, so by continuity it also holds where the proviso fails")
        else:
            lines.append("every border factor was settled by boundary recursion")
    elif v.status == DISPROVED and v.witness is not None:
        w = v.witness.to_json()
        lines.append("counterexample:")
        for k, val in w["param_values"].items():
            lines.append(f"  {k} = {val}")
        for k, (lo, hi) in w["unknown_boxes"].items():
            lines.append(f"  {k} in [{lo}, {hi}]")
        goal = w["certificate"].get("goal")
        if goal:
            lines.append(f"  goal value in [{goal['lo']}, {goal['hi']}]")
    if v.reason:
        lines.append(f"reason: {v.reason}")
    return "\n".join(lines)


def _classification_text(res: ClassificationResult, name: str) -> str:
    lines = [f"{name}: {classification_status(res)}"] if name else []
    if res.uniform:
        n = res.counts[0] if res.cells else 0
        lines.append(UNIFORM_LINE)
        lines.append(f"number of real solutions: {n}")
        lines += _proviso(res.border)
        return "\n".join(lines)
    if res.condition is None:
        lines.append("cells with the same factor signs have different counts; no sign condition")
        lines.append("counts: " + ", ".join(str(c) for c in sorted(set(res.counts))))
        lines += _proviso(res.border)
        return "\n".join(lines)
    lines.append(f"the number of real solutions is {res.target} if and only if")
    lines.append(f"  {res.condition_text}")
    lines += _proviso(res.border)
    if res.refinements:
        lines.append("including the border:")
        lines.append(f"  {format_condition(res.refined_condition)}")
    return "\n".join(lines)


# --- running single problems ------------------------------------------------------
def run_file(path, closure: str = "generic", depth: int = 3):
    """Load and solve one problem file; returns ``(status, result)``."""
    req = load_problem(path)
    if isinstance(req, ClassifyRequest):
        res = real_root_classification(req.system, req.target)
        if depth > 0 and not res.uniform:
            refine_condition(res, depth=1)
        return classification_status(res), res
    v = prove(replace(req, closure=closure, depth=depth))
    return v.status, v


# --- corpus -----------------------------------------------------------------------
def _load_expected(root: Path) -> dict:
    f = root / "expected.json"
    return json.loads(f.read_text()) if f.exists() else {}


def _corpus_entry(args) -> dict:
    path, closure, depth = args
    name = Path(path).stem
    t0 = time.perf_counter()
    entry = {"name": name}
    try:
        status, res = run_file(path, closure, depth)
        entry["status"] = status
        if isinstance(res, Verdict):
            entry["mode"] = "prove"
            entry["border"] = res.border.summary() if res.border is not None else None
            entry["cells"] = sum(n.get("cells", 0) for n in res.trace)
            entry["reason"] = res.reason
            if res.witness is not None:
                entry["witness"] = res.witness.to_json()
        else:
            entry["mode"] = "classify"
            entry["border"] = res.border.summary()
            entry["cells"] = len(res.cells)
            entry["condition"] = res.condition_text
            entry["refined_condition"] = format_condition(res.refined_condition)
    except NonnegError as e:
        entry.update(status=ERROR, reason=f"{e.code}: {e}")
    entry["seconds"] = round(time.perf_counter() - t0, 3)
    return entry


def run_corpus(directory, long: bool = False, workers: int = 1, closure: str = "generic", depth: int = 3,
               timing: bool = True) -> dict:
    """Run every ``*.prob`` file in ``directory``; report entries are sorted
    by name whatever the completion order."""
    root = Path(directory)
    if not root.is_dir():
        raise BadInput(f"{directory} is not a directory")
    expected = _load_expected(root)
    files = sorted(root.glob("*.prob"))
    todo, skipped = [], []
    for f in files:
        if expected.get(f.stem, {}).get("long") and not long:
            skipped.append(f.stem)
        else:
            todo.append((str(f), closure, depth))
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_corpus_entry, todo))
    else:
        entries = [_corpus_entry(t) for t in todo]
    entries.sort(key=lambda e: e["name"])
    mismatches = 0
    for e in entries:
        exp = expected.get(e["name"])
        if exp is None:
            e["match"] = None
            continue
        ok = exp.get("status") == e["status"]
        if "condition" in exp:
            ok = ok and exp["condition"] == e.get("refined_condition")
        e["expected"] = exp.get("status")
        e["match"] = ok
        mismatches += not ok
    if not timing:
        for e in entries:
            e.pop("seconds", None)
    return {
        "problems": entries,
        "skipped": skipped,
        "summary": {"run": len(entries), "mismatches": mismatches, "errors": sum(e["status"] == ERROR for e in entries)},
    }


def _corpus_text(report: dict) -> str:
    lines = []
    for e in report["problems"]:
        mark = {True: "ok", False: "MISMATCH", None: "-"}[e["match"]]
        t = f"  {e['seconds']:.2f}s" if "seconds" in e else ""
        extra = f"  [{e['refined_condition']}]" if e.get("mode") == "classify" else ""
        lines.append(f"{e['name']:<10} {e['status']:<24} {mark}{t}{extra}")
    for s in report["skipped"]:
        lines.append(f"{s:<10} skipped (long; use --long)")
    sm = report["summary"]
    lines.append(f"{sm['run']} run, {sm['mismatches']} mismatched, {sm['errors']} errors")
    return "\n".join(lines)


# --- isolate ----------------------------------------------------------------------
def isolate_text(text: str) -> tuple:
    node = parse_poly(text)
    names = variables(node)
    if len(names) > 1:
        raise BadInput(f"isolate needs a univariate polynomial, got variables {names}")
    ring = Ring(tuple(sorted(names)) or ("x",))
    f = poly_normalize(node, ring)
    return to_text(f), isolate_roots(f)


# --- entry point ------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nonneg", description="prove polynomial inequalities by real root classification")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--closure", choices=("full", "generic"), default="generic")
    common.add_argument("--depth", type=int, default=3, help="boundary recursion depth limit")
    common.add_argument("--seed", type=int, default=0, help="seed for the random property harness only")
    common.add_argument("--no-timing", action="store_true", help="omit wall-clock fields")
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("prove", parents=[common], help="prove or refute a goal")
    p.add_argument("file")
    c = sub.add_parser("classify", parents=[common], help="classify the number of real solutions")
    c.add_argument("file")
    i = sub.add_parser("isolate", parents=[common], help="isolate the real roots of a univariate polynomial")
    i.add_argument("poly")
    cp = sub.add_parser("corpus", help="corpus operations")
    csub = cp.add_subparsers(dest="corpus_cmd", required=True)
    r = csub.add_parser("run", parents=[common], help="run every problem file in a directory")
    r.add_argument("dir")
    r.add_argument("--long", action="store_true", help="include long-running problems")
    r.add_argument("--workers", type=int, default=1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.cmd in ("prove", "classify"):
            status, res = run_file(args.file, args.closure, args.depth)
            mode = "classify" if isinstance(res, ClassificationResult) else "prove"
            if mode != args.cmd:
                raise BadInput(f"{args.file} is a {mode} problem; use 'nonneg {mode}'")
            print(format_result(res, "json" if args.json else "text", Path(args.file).stem, not args.no_timing), file=out)
            return EXIT[status]
        if args.cmd == "isolate":
            text, ivs = isolate_text(args.poly)
            if args.json:
                print(json.dumps({"poly": text, "roots": [iv.to_json() for iv in ivs]}, indent=2), file=out)
            else:
                print(f"{text}: {len(ivs)} real root(s)", file=out)
                for iv in ivs:
                    print(f"  [{iv.lo}, {iv.hi}]", file=out)
            return 0
        report = run_corpus(args.dir, args.long, args.workers, args.closure, args.depth, not args.no_timing)
        if args.json:
            print(json.dumps(report, indent=2, sort_keys=True), file=out)
        else:
            print(_corpus_text(report), file=out)
        return 1 if report["summary"]["mismatches"] else 0
    except NonnegError as e:
        msg = {"status": ERROR, "code": e.code, "message": str(e), **{k: str(v) for k, v in e.details.items()}}
        if getattr(args, "json", False):
            print(json.dumps(msg, indent=2, sort_keys=True), file=out)
        else:
            print(f"error [{e.code}]: {e}", file=sys.stderr)
        return EXIT[ERROR]
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT[ERROR]


if __name__ == "__main__":
    sys.exit(main())
