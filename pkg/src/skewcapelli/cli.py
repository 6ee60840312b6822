"""Command-line driver: ``skewcapelli <command> [options]``.

Exit codes: 0 pass, 1 identity or suite failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import os
import signal
import sys
import time
from typing import Dict, List, Optional

from . import capelli
from .opmatrix import build_phi
from .pfaffian import BACKENDS, GUARDS, PfaffianError, pf_anti, pfaffian
from .suite import PROPERTIES, run_suite
from .textio import TextParseError, parse_element, parse_matrix
from .weyl import WeylElement

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Timeout(Exception):
    pass


@contextlib.contextmanager
def time_limit(seconds: Optional[float]):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def _raise(signum, frame):
        raise Timeout(f"time limit of {seconds} s exceeded")

    old = signal.signal(signal.SIGALRM, _raise)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _check_guard(backend: str, n: int, max_dim: Optional[int]) -> None:
    if n < 1:
        raise UsageError(f"--n must be >= 1 (got {n})")
    limit = max_dim if max_dim is not None else GUARDS.get(backend)
    if limit is not None and 2 * n > limit:
        raise UsageError(f"2n = {2 * n} exceeds the {backend} guard {limit}; raise --max-dim to override")


def _backend_kw(args, backend: str) -> Dict:
    kw: Dict = {}
    if args.max_dim is not None:
        kw["max_dim"] = args.max_dim
    if backend == "restricted":
        kw["workers"] = args.threads
    return kw


def _term_lines(e: WeylElement) -> List[str]:
    return [str(WeylElement.from_monomial(e.n, m, p)) for m, p in e.sorted_terms()]


# --- commands -------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.backend not in ("restricted", "forms", "full"):
        raise UsageError(f"verify needs a noncommutative backend, not {args.backend!r}")
    _check_guard(args.backend, args.n, args.max_dim)
    report = capelli.main_identity_check(args.n, args.backend, **_backend_kw(args, args.backend))
    payload = report.to_json()
    payload["pf"] = str(report.pf)
    _emit(args, payload, report.to_text())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_gamma(args) -> int:
    try:
        op = capelli.gamma(args.n, args.k)
    except capelli.CapelliError as exc:
        raise UsageError(str(exc))
    lines = _term_lines(op.element)
    text = "\n".join([f"Gamma_{op.k} for n = {op.n}: {len(lines)} term(s)"] + ["  " + t for t in lines])
    _emit(args, {"n": op.n, "k": op.k, "term_count": len(lines), "text": str(op.element),
                 "element": op.element.to_json()}, text)
    return EXIT_OK


def cmd_hermite(args) -> int:
    if args.m < 0:
        raise UsageError("--m must be >= 0")
    data = capelli.hermite_data(args.m)
    ok = capelli.hermite_relation_check(args.m)
    _emit(args, {"m": args.m, "hermite": data.hermite.to_json(), "a_poly": data.a_poly.to_json(),
                 "text": str(data), "relation": ok}, str(data))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_symbol(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    lhs = capelli.symbol_pfaffian(args.n)
    ok = capelli.symbol_identity_check(args.n)
    text = f"sigma Pf(Phi~(u)) = {lhs}\nidentity: {'PASS' if ok else 'FAIL'}"
    _emit(args, {"n": args.n, "pass": ok, "symbol": str(lhs)}, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_pfaffian(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}")
    try:
        spec = parse_matrix(text)
    except TextParseError as exc:
        raise UsageError(f"{args.file}: {exc}")
    X = spec.matrix
    kw = _backend_kw(args, args.backend) if args.backend != "commutative" else {}
    try:
        result = (pf_anti if spec.anti else pfaffian)(X, args.backend, **kw)
    except PfaffianError as exc:
        raise UsageError(f"{args.file}: {exc}")
    payload = {"dim": X.dim, "n": X.n, "kind": "anti" if spec.anti else "alt", "backend": args.backend,
               "pfaffian": str(result)}
    status = EXIT_OK
    lines = [f"Pf = {result}"]
    if args.expect is not None:
        try:
            expected = parse_element(args.expect, X.n)
        except TextParseError as exc:
            raise UsageError(f"--expect: {exc}")
        match = expected == result
        payload["expected"] = str(expected)
        payload["match"] = match
        lines.append(f"expected {expected}: {'MATCH' if match else 'MISMATCH'}")
        status = EXIT_OK if match else EXIT_FAIL
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_suite(args) -> int:
    names = args.only or None
    if names:
        unknown = [n for n in names if n not in PROPERTIES]
        if unknown:
            raise UsageError(f"unknown properties: {', '.join(unknown)}")
    results = run_suite(args.seed, names)
    failing = [r.name for r in results if not r.ok]
    lines = [f"{r.name}: {r.passed}/{r.total} {'PASS' if r.ok else 'FAIL'}" for r in results]
    lines.append(f"suite (seed {args.seed}): {len(results) - len(failing)}/{len(results)} properties pass")
    if failing:
        lines.append("failing: " + ", ".join(failing))
    payload = {"seed": args.seed, "pass": not failing, "failing": failing,
               "properties": [{"name": r.name, "passed": r.passed, "total": r.total} for r in results]}
    _emit(args, payload, "\n".join(lines))
    return EXIT_FAIL if failing else EXIT_OK


def cmd_bench(args) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError("need 1 <= --n-min <= --n-max")
    backends = args.backends or ["full", "restricted", "forms"]
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        X = build_phi(n)
        ref = None
        for b in backends:
            limit = args.max_dim if args.max_dim is not None else GUARDS[b]
            if 2 * n > limit:
                rows.append({"n": n, "backend": b, "status": "skipped", "millis": None})
                continue
            t0 = time.perf_counter()
            pf = pf_anti(X, b, **_backend_kw(args, b))
            ms = round((time.perf_counter() - t0) * 1000, 3)
            ref = pf if ref is None else ref
            rows.append({"n": n, "backend": b, "status": "ok" if pf == ref else "mismatch", "millis": ms})
    text = [f"{'n':>3}  {'backend':<11} {'millis':>12}  status"]
    for r in rows:
        ms = "-" if r["millis"] is None else f"{r['millis']:.3f}"
        text.append(f"{r['n']:>3}  {r['backend']:<11} {ms:>12}  {r['status']}")
    _emit(args, {"rows": rows}, "\n".join(text))
    return EXIT_FAIL if any(r["status"] == "mismatch" for r in rows) else EXIT_OK


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes for the restricted backend (default: machine parallelism)")
    common.add_argument("--max-dim", type=int, default=None, help="override the backend dimension guard (2n)")
    common.add_argument("--timeout-secs", type=float, default=None)

    p = argparse.ArgumentParser(prog="skewcapelli",
                                description="Exact verification of the skew Capelli Pfaffian identities.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="check Pf(Phi(u)) = sum a_{n-2k}(u) Gamma_k")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--backend", choices=BACKENDS, default="restricted")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gamma", parents=[common], help="print Gamma_k")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.set_defaults(func=cmd_gamma)

    h = sub.add_parser("hermite", parents=[common], help="print H_m and a_m(u)")
    h.add_argument("--m", type=int, required=True)
    h.set_defaults(func=cmd_hermite)

    s = sub.add_parser("symbol", parents=[common], help="check the principal-symbol identity")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_symbol)

    f = sub.add_parser("pfaffian", parents=[common], help="Pfaffian of a matrix file")
    f.add_argument("file")
    f.add_argument("--backend", choices=BACKENDS, default="restricted")
    f.add_argument("--expect", default=None, help="expected result; mismatch exits 1")
    f.set_defaults(func=cmd_pfaffian)

    q = sub.add_parser("suite", parents=[common], help="seeded invariant suite over all modules")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--only", nargs="*", metavar="NAME", help="restrict to these properties")
    q.set_defaults(func=cmd_suite)

    b = sub.add_parser("bench", parents=[common], help="time the Pfaffian backends on Phi(u)")
    b.add_argument("--n-min", type=int, default=1)
    b.add_argument("--n-max", type=int, default=4)
    b.add_argument("--backends", nargs="*", choices=("full", "restricted", "forms"))
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with time_limit(args.timeout_secs):
            return args.func(args)
    except UsageError as exc:
        print(f"skewcapelli {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Timeout as exc:
        print(f"skewcapelli {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
