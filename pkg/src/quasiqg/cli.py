"""Command-line entry point: ``quasiqg <command> ...``.

Exit codes: 0 success, 1 a verification check failed, 2 some check is
unverified (and none failed), 3 bad input (parse errors, invalid files).
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from . import greenring as gr
from . import homalg as ha
from . import repcore as rc
from .cyclo import make_context
from .verify import DEFAULT_SEED, FAULTS, SUITES, ConfigError, SuiteConfig, run_suite

EXIT_INPUT = 3


class InputError(Exception):
    """Bad user input; the message already carries position information."""


def _int(text: str) -> int:
    return int(text, 0)


def _odd_n(text: str) -> int:
    n = _int(text)
    if n <= 2 or n % 2 == 0:
        raise argparse.ArgumentTypeError(f"n must be an odd integer > 2, got {n}")
    return n


def _int_list(text: str) -> list[int]:
    out = []
    pos = 0
    for piece in text.split(","):
        try:
            out.append(int(piece.strip()))
        except ValueError:
            raise InputError(f"--params: expected an integer at position {pos}: {text!r}") from None
        pos += len(piece) + 1
    return out


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_module(path: str, n: int | None = None) -> rc.Representation:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object with keys n, dim, label, E, F, K")
    try:
        M = rc.from_json(data)
    except (rc.ModuleError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if n is not None and M.n != n:
        raise InputError(f"{path}: module has n={M.n} but --n {n} was given")
    return M


def _write_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=1) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def format_counter(parts: Counter) -> str:
    items = sorted(parts.items(), key=lambda kv: (type(kv[0]).__name__, str(kv[0])))
    return " + ".join(str(lab) if k == 1 else f"{k}*{lab}" for lab, k in items) or "0"


def _parse_expr(ring: gr.GreenRing, text: str) -> gr.GreenElem:
    try:
        return ring.parse(text)
    except gr.ExpressionError as exc:
        pos = getattr(exc, "pos", None)
        caret = f"\n  {text}\n  {' ' * pos}^" if isinstance(pos, int) else ""
        raise InputError(f"{exc}{caret}") from None
    except gr.GreenError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands

_KIND_ARITY = {"simple": 1, "block-simple": 2, "proj": 1, "syzygy": 3, "regular": 2}


def build_module(n: int, kind: str, params: list[int]) -> rc.Representation:
    if len(params) != _KIND_ARITY[kind]:
        raise InputError(f"--kind {kind} takes {_KIND_ARITY[kind]} parameter(s), got {len(params)}")
    ctx = make_context(n)
    try:
        if kind == "regular":
            i, j = params
            if not (1 <= i <= n - 1 and 1 <= j <= n):
                raise rc.ModuleError(f"regular module needs 1 <= i <= {n - 1}, 1 <= j <= {n}")
            return rc.regular_submodule(ctx, i, j)
        return ha.construct(rc.make_label(kind, n, *params), ctx)
    except rc.ModuleError as exc:
        raise InputError(str(exc)) from None


def cmd_build_module(args) -> int:
    M = build_module(args.n, args.kind, _int_list(args.params))
    _write_json(rc.to_json(M), args.out)
    return 0


def cmd_tensor(args) -> int:
    A = _load_module(args.a)
    B = _load_module(args.b, A.n)
    _write_json(rc.to_json(rc.tensor(A, B)), args.out)
    return 0


def cmd_decompose(args) -> int:
    M = _load_module(args.module)
    try:
        parts = ha.identify(M, seed=args.seed)
    except ha.ClaimUnverified as exc:
        print(f"unverified: {exc}", file=sys.stderr)
        print(json.dumps(exc.diagnostics, default=str, sort_keys=True), file=sys.stderr)
        return 2
    print(format_counter(parts))
    if args.witness:
        W = ha.verify_claim(M, parts, seed=args.seed)
        _write_json({"source": format_counter(parts), "map": [[a.to_strings() for a in row]
                                                               for row in W.matrix().rows]}, args.witness)
    return 0


def cmd_verify(args) -> int:
    try:
        cfg = SuiteConfig(n=args.n, seed=args.seed, s_max=args.s_max, suites=tuple(args.suite),
                          samples=args.samples, tensor_samples=args.tensor_samples,
                          crosscheck_samples=args.crosscheck_samples, output=args.report,
                          threads=args.threads, fault=args.fault, timings=args.timings)
    except ConfigError as exc:
        raise InputError(str(exc)) from None

    def progress(rec):
        if not args.quiet:
            print(f"{rec['status']:<10} {rec['id']}", file=sys.stderr)

    report = run_suite(cfg, progress)
    if not args.report:
        sys.stdout.write(report.text())
    c = report.counts
    print(f"{c['pass']} pass, {c['fail']} fail, {c['unverified']} unverified of {c['total']}", file=sys.stderr)
    return report.exit_code


def cmd_green(args) -> int:
    ring = gr.green_ring(args.n)
    if args.green_cmd == "mul":
        print(_parse_expr(ring, args.a) * _parse_expr(ring, args.b))
    elif args.green_cmd == "reduce":
        print(_parse_expr(ring, args.expr))
    elif args.green_cmd == "check-presentations":
        results = ring.check_relations(args.s_max)
        stable = gr.StableRing(ring)
        bad_stable = [(name, str(stable.reduce_raw(raw))) for name, raw in stable.relations(args.s_max)
                      if not stable.reduce_raw(raw).is_zero()]
        results["stable"] = bad_stable
        total = 0
        for key, bad in results.items():
            print(f"{key}: {'ok' if not bad else f'{len(bad)} nonzero residues'}")
            for name, res in bad:
                print(f"  {name} -> {res}")
            total += len(bad)
        if args.audit:
            with open(args.audit, "w", encoding="utf-8") as fh:
                fh.write(ring.audit_text(args.s_max))
        return 1 if total else 0
    return 0


def cmd_export(args) -> int:
    if args.green is not None:
        ring = gr.green_ring(args.n)
        _write_json({"n": args.n, "terms": _parse_expr(ring, args.green).to_records()}, args.out)
        return 0
    try:
        label = rc.parse_label(args.label, args.n)
        M = ha.construct(label, make_context(args.n))
    except (rc.ModuleError, ha.ClaimUnverified) as exc:
        raise InputError(str(exc)) from None
    _write_json(rc.to_json(M), args.out)
    return 0


def cmd_import(args) -> int:
    data = _load_json(args.file)
    if isinstance(data, dict) and "terms" in data:
        try:
            ring = gr.green_ring(int(data["n"]))
            elem = ring.from_records(data["terms"])
        except (KeyError, TypeError, ValueError, gr.GreenError) as exc:
            raise InputError(f"{args.file}: {exc}") from None
        print(elem)
        return 0
    M = _load_module(args.file)
    blocks = sorted(rc.block_parts(M))
    label = rc._label_str(M.label) if M.label is not None else "-"
    print(f"n={M.n} dim={M.dim} label={label} blocks={blocks} valid")
    return 0


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code (2 means unverified)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_odd_n, default=argparse.SUPPRESS, help="odd n > 2 (default 3)")
    common.add_argument("--seed", type=_int, default=argparse.SUPPRESS, help="global seed (default 0xC0FFEE)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes")

    p = _Parser(prog="quasiqg", parents=[common],
                                description="Exact computations for the small quasi-quantum group at odd n.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-module", parents=[common], help="construct a module and write its JSON")
    b.add_argument("--kind", required=True, choices=sorted(_KIND_ARITY))
    b.add_argument("--params", required=True, help="comma-separated integers, e.g. 1,0")
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_build_module)

    t = sub.add_parser("tensor", parents=[common], help="tensor two module files")
    t.add_argument("a")
    t.add_argument("b")
    t.add_argument("--out", default=None)
    t.set_defaults(func=cmd_tensor)

    d = sub.add_parser("decompose", parents=[common], help="print the indecomposable summands of a module")
    d.add_argument("module")
    d.add_argument("--witness", default=None, help="write the witness isomorphism here")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", parents=[common], help="run the verification suites")
    v.add_argument("--suite", action="append", choices=list(SUITES) + ["all"], default=None)
    v.add_argument("--s-max", type=int, default=4)
    v.add_argument("--samples", type=int, default=20)
    v.add_argument("--tensor-samples", type=int, default=60)
    v.add_argument("--crosscheck-samples", type=int, default=30)
    v.add_argument("--report", default=None, help="write JSON lines here instead of stdout")
    v.add_argument("--timings", action="store_true", help="record wall times (breaks byte-determinism)")
    v.add_argument("--fault", choices=FAULTS, default=None, help=argparse.SUPPRESS)
    v.add_argument("--quiet", action="store_true")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("green", parents=[common], help="Green-ring arithmetic")
    gsub = g.add_subparsers(dest="green_cmd", required=True)
    gm = gsub.add_parser("mul", parents=[common])
    gm.add_argument("a")
    gm.add_argument("b")
    gr_ = gsub.add_parser("reduce", parents=[common])
    gr_.add_argument("expr")
    gc = gsub.add_parser("check-presentations", parents=[common])
    gc.add_argument("--s-max", type=int, default=2)
    gc.add_argument("--audit", default=None, help="write every relation generator to this file")
    g.set_defaults(func=cmd_green)

    e = sub.add_parser("export", parents=[common], help="write a labelled module or Green-ring element as JSON")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--label", help="e.g. V2, V(1,0), P1, Omega^+2(V1)")
    src.add_argument("--green", help="Green-ring expression")
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_export)

    i = sub.add_parser("import", parents=[common], help="load and validate a JSON file")
    i.add_argument("file")
    i.set_defaults(func=cmd_import)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.n = getattr(args, "n", 3)
    args.seed = getattr(args, "seed", DEFAULT_SEED)
    args.threads = getattr(args, "threads", 1)
    if getattr(args, "suite", "absent") is None:
        args.suite = ["all"]
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
