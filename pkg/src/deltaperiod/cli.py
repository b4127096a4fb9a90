"""Command-line front end: ``deltaperiod <subcommand> ...``.

Exit codes: 0 success, 2 usage, 3 numerical tolerance failure,
4 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, archimedean, eulerprod, localfactors, mcoeffs, padic, qseries
from .primes import is_prime, primes_upto

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE, EXIT_INTERNAL = 0, 2, 3, 4

TOLERANCE_ERRORS = (
    eulerprod.TailToleranceError,
    archimedean.BesselToleranceError,
    localfactors.DivergenceError,
)
INTERNAL_ERRORS = (
    mcoeffs.DecompositionError,
    qseries.RamanujanBoundError,
    padic.StabilizationError,
)


def fmt_json(x):
    """Round floats to 12 significant digits, recursively; complex -> {re, im}."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.12g}")
    if isinstance(x, complex):
        return {"re": fmt_json(x.real), "im": fmt_json(x.imag)}
    if isinstance(x, dict):
        return {str(k): fmt_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt_json(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj) -> str:
    return json.dumps(fmt_json(obj), indent=2, ensure_ascii=False) + "\n"


def fmt_cell(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    if isinstance(x, complex):
        return f"{x.real:.6g}{x.imag:+.6g}j"
    return str(x)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return dumps(rows)
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([r[c] if isinstance(r[c], int) else fmt_cell(r[c]) for c in cols])
        return buf.getvalue()
    cells = [[fmt_cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands


def cmd_tau(max_n: int, fmt: str = "csv") -> str:
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    rows = [{"n": n, "tau": t} for n, t in enumerate(qseries.tau_table(max_n), start=1)]
    if fmt == "json":
        return json.dumps([[r["n"], r["tau"]] for r in rows]) + "\n"
    return render(rows, fmt)


def _prime_list(args) -> list[int]:
    if args.p is not None:
        if not is_prime(args.p):
            raise ValueError(f"{args.p} is not prime")
        return [args.p]
    return [int(p) for p in primes_upto(args.max_p)]


def cmd_satake(primes: list[int], fmt: str) -> str:
    rows = []
    for p in primes:
        d = localfactors.delta_satake(p)
        rows.append({"p": p, "tau": qseries.tau(p), "t": d.t, "s2": d.s2})
    return render(rows, fmt)


def cmd_local(primes: list[int], fmt: str) -> str:
    rows = [localfactors.normalized_factor(localfactors.delta_satake(p)).to_dict() for p in primes]
    return render(rows, fmt)


def cmd_invariant(prime_bound: int, fmt: str = "json", tolerance: float | None = None, threads: int = 1) -> str:
    if prime_bound < 2:
        raise ValueError("prime bound must be >= 2")
    if prime_bound < 100:
        # too few primes for the invariant; report the finite product and flag the tail
        tilde = eulerprod.tilde_lambda_partial(prime_bound=prime_bound, threads=threads)
        tail = eulerprod.invariant_tail_estimate(prime_bound)
        out = {
            "prime_bound": prime_bound,
            "n_primes": len(primes_upto(prime_bound)),
            "tilde_partial": tilde,
            "finite_part": tilde / eulerprod.L_AD_REFERENCE,
            "tail_estimate": tail,
            "flags": ["prime bound below 100: finite part only, tail estimate is large"],
        }
        if tolerance is not None and tail > tolerance:
            raise eulerprod.TailToleranceError(f"tail estimate {tail:.3e} exceeds tolerance {tolerance:.3e}")
    else:
        rep = eulerprod.invariant_lambda(prime_bound, tolerance=tolerance, threads=threads)
        out = {
            "prime_bound": rep.prime_bound,
            "n_primes": rep.n_primes,
            "tilde_partial": rep.tilde_partial,
            "finite_part": rep.finite_part,
            "archimedean_part": rep.archimedean_part,
            "value": rep.value,
            "tail_estimate": rep.tail_estimate,
            "L_reference": rep.L_reference,
        }
    if fmt == "json":
        return dumps(out)
    return render([{k: v for k, v in out.items() if not isinstance(v, list)}], fmt)


def cmd_invariant_table(bounds: list[int], fmt: str = "csv", threads: int = 1) -> str:
    rows = [{"N": N, "tilde_partial": t, "running_value": v}
            for N, t, v in eulerprod.convergence_table(bounds, threads=threads)]
    return render(rows, fmt)


def cmd_bessel(order: int, z: float, fmt: str = "json") -> str:
    val = archimedean.bessel_J(order, z)
    out = {"order": order, "z": z, "value": val.value, "error_bound": val.error_bound,
           "regime": val.regime, "terms": val.terms}
    return dumps(out) if fmt == "json" else render([out], fmt)


def cmd_jfun(family: str, param: float, x: float, fmt: str = "json") -> str:
    if family == "disc":
        d = int(param)
        if d != param:
            raise ValueError("discrete series parameter d must be an integer")
        value = archimedean.j_discrete(d, x)
    else:
        value = archimedean.j_principal(param, x)
    out = {"family": family, "param": param, "x": x, "value": value}
    return dumps(out) if fmt == "json" else render([out], fmt)


def cmd_mcoeffs(max_k: int, fmt: str = "table") -> str:
    table = mcoeffs.solve_mkl(max_k)
    width = max(len(table[k]) for k in range(1, max_k + 1))
    negatives = table.negative_entries()
    if fmt == "json":
        return dumps({"max_k": max_k, "rows": {str(k): table[k] for k in range(1, max_k + 1)},
                      "negative_entries": negatives})
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "l", "m"])
        for k in range(1, max_k + 1):
            for l, m in enumerate(table[k]):
                w.writerow([k, l, m])
        return buf.getvalue()
    # triangular layout, zero cells left blank
    cell = max(len(str(m)) for k in range(1, max_k + 1) for m in table[k])
    cell = max(cell, len(str(width - 1)))
    head = "k\\l".rjust(4) + " |" + "".join(str(l).rjust(cell + 1) for l in range(width))
    lines = [head, "-" * len(head)]
    for k in range(1, max_k + 1):
        cells = "".join((str(m) if m else "").rjust(cell + 1) for m in table[k])
        lines.append(str(k).rjust(4) + " |" + cells)
    if negatives:
        lines.append(f"NEGATIVE ENTRIES: {negatives}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def cmd_padic_bessel(p: int, theta: float, shells: int, fmt: str = "json") -> str:
    b = cmath.exp(1j * theta)
    res = padic.bessel_j1_oracle(p, b, shells)
    closed = padic.bessel_j1_closed(p, b)
    stable = padic.bessel_j1_oracle(p, b, shells + 1)["value"]
    out = {
        "p": p,
        "theta": theta,
        "shells": shells,
        "value": res["value"],
        "closed_form": closed,
        "abs_error": abs(res["value"] - closed),
        "drift_next_shell": abs(stable - res["value"]),
        "inner_cutoff": res["inner_cutoff"],
        "shell_contributions": {str(k): v for k, v in res["shells"].items()},
    }
    return dumps(out) if fmt == "json" else render([{k: v for k, v in out.items() if not isinstance(v, dict)}], fmt)


def cmd_padic_compose(p: int, level: int, chi_log: complex, vmin: int, vmax: int, fmt: str = "json") -> str:
    chi = padic.UnramCharacter(cmath.exp(chi_log))
    rows = []
    for f in padic.basis_indicators(p, level, range(vmin, vmax + 1)):
        (v, u), = f.support
        res = padic.kirillov_compose_oracle(f, chi, level)
        rows.append({"v": v, "u": u, "value": res["value"], "expected": res["expected"],
                     "abs_error": abs(res["value"] - res["expected"]), "drift": res["drift"]})
    if fmt == "json":
        return dumps({"p": p, "level": level, "chi_at_p": chi.value_at_p,
                      "max_abs_error": max(r["abs_error"] for r in rows), "rows": rows})
    return render(rows, fmt)


# ---------------------------------------------------------------- reproduction


@dataclass
class RunManifest:
    command: str
    parameters: dict
    versions: dict
    prime_bound: int
    outputs: list[str] = field(default_factory=list)
    timing: dict = field(default_factory=dict)


def _versions() -> dict:
    import gmpy2
    import scipy

    return {"deltaperiod": __version__, "python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__, "gmpy2": gmpy2.version()}


def reproduce_appendix_a(prime_bound: int = 100_000, outdir: Path | None = None) -> tuple[str, RunManifest]:
    timing = {}
    t0 = time.perf_counter()
    conv = eulerprod.hundred_primes_convention()
    timing["first_hundred"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    adj = eulerprod.adjoint_accumulator(prime_bound)
    timing["adjoint"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    inv = eulerprod.invariant_lambda(prime_bound)
    timing["invariant"] = time.perf_counter() - t0
    L = eulerprod.L_AD_REFERENCE
    lines = [
        "Period invariant of the Ramanujan cusp form Delta, psi(x) = exp(2 pi i x)",
        "",
        f"tilde lambda^f over the first 100 primes : {conv['first_k_primes=100']:.6f}   (reference 1.49154)",
        f"tilde lambda^f over primes p <= 100      : {conv['prime_bound=100']:.6f}",
        f"  convention matching the reference digits: {conv['matching_convention']}",
        f"prod_(p <= {prime_bound}) L(1, pi_p, Ad)      : {adj.value:.6f}   (reference {L:.11f})",
        f"  |difference| = {abs(adj.value - L):.3e}, tail estimate = {L * math.expm1(adj.tail_estimate):.3e}",
        f"2 pi J_11(4 pi) = j_(pi_6)(1)             : {inv.archimedean_part:.6f}   (reference 1.8305)",
        f"lambda(Delta, psi) with p <= {prime_bound}     : {inv.value:.6f}   (reference 4.32145)",
        f"  finite part {inv.finite_part:.6f}, log tail bound {inv.tail_estimate:.3e}",
        "",
    ]
    report = "\n".join(lines)
    manifest = RunManifest(
        command="reproduce-appendix-a",
        parameters={"prime_bound": prime_bound},
        versions=_versions(),
        prime_bound=prime_bound,
        timing=timing,
    )
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)
        data = {"hundred_primes": conv, "adjoint_partial": adj.value, "adjoint_tail_log": adj.tail_estimate,
                "invariant": inv.to_dict()}
        (outdir / "appendix_a.txt").write_text(report, encoding="utf-8")
        (outdir / "appendix_a.json").write_text(dumps(data), encoding="utf-8")
        manifest.outputs = [str(outdir / "appendix_a.txt"), str(outdir / "appendix_a.json")]
        (outdir / "manifest.json").write_text(dumps(asdict(manifest)), encoding="utf-8")
    return report, manifest


# ---------------------------------------------------------------- parsing


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _bound(text: str) -> int:
    # accepts 100000 or 1e5
    v = float(text)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return int(v)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="deltaperiod", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p, default):
        p.add_argument("--format", choices=["table", "csv", "json"], default=default)

    p = sub.add_parser("tau", help="table of tau(n)")
    p.add_argument("--max-n", type=_bound, required=True)
    fmt(p, "csv")

    for name, helptext in (("satake", "normalized Hecke eigenvalues"), ("local", "local factor reports")):
        p = sub.add_parser(name, help=helptext)
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("-p", "--p", type=int)
        g.add_argument("--max-p", type=_bound)
        fmt(p, "table")

    p = sub.add_parser("invariant", help="regularized Euler product and lambda(Delta, psi)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--prime-bound", type=_bound)
    g.add_argument("--table", type=_int_list)
    p.add_argument("--json", action="store_true", help="same as --format json")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--threads", type=int, default=1)
    fmt(p, None)

    p = sub.add_parser("bessel", help="classical J-Bessel function")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--arg", type=float, required=True)
    fmt(p, "json")

    p = sub.add_parser("jfun", help="Bessel function of a GL(2,R) representation")
    p.add_argument("--family", choices=["disc", "princ"], required=True)
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    fmt(p, "json")

    p = sub.add_parser("mcoeffs", help="exponents m_kl of the Euler-factor identity")
    p.add_argument("--max-k", type=int, required=True)
    fmt(p, "table")

    p = sub.add_parser("padic-oracle", help="p-adic character-sum oracles")
    osub = p.add_subparsers(dest="oracle", required=True)
    q = osub.add_parser("bessel", help="j(1) for an unramified principal series")
    q.add_argument("-p", type=int, required=True)
    q.add_argument("--theta", type=float, default=0.0, help="b = exp(i theta)")
    q.add_argument("--shells", type=int, default=1)
    fmt(q, "json")
    q = osub.add_parser("compose", help="Whittaker -> Hecke -> Whittaker on basis indicators")
    q.add_argument("-p", type=int, required=True)
    q.add_argument("--level", type=int, required=True)
    q.add_argument("--chi-log", type=complex, default=0j, help="chi(p) = exp(c)")
    q.add_argument("--vmin", type=int, default=-1)
    q.add_argument("--vmax", type=int, default=1)
    fmt(q, "json")

    p = sub.add_parser("reproduce-appendix-a", help="full numerical pipeline for Delta")
    p.add_argument("--prime-bound", type=_bound, default=100_000)
    p.add_argument("--out", type=Path, default=None)
    return ap


def _dispatch(args) -> str:
    if args.command == "tau":
        return cmd_tau(args.max_n, args.format)
    if args.command == "satake":
        return cmd_satake(_prime_list(args), args.format)
    if args.command == "local":
        return cmd_local(_prime_list(args), args.format)
    if args.command == "invariant":
        if args.table is not None:
            return cmd_invariant_table(args.table, args.format or "csv", args.threads)
        f = "json" if args.json else (args.format or "table")
        return cmd_invariant(args.prime_bound, f, args.tolerance, args.threads)
    if args.command == "bessel":
        return cmd_bessel(args.order, args.arg, args.format)
    if args.command == "jfun":
        return cmd_jfun(args.family, args.param, args.x, args.format)
    if args.command == "mcoeffs":
        return cmd_mcoeffs(args.max_k, args.format)
    if args.command == "padic-oracle":
        for name in ("p",):
            if not is_prime(getattr(args, name)):
                raise ValueError(f"{getattr(args, name)} is not prime")
        if args.oracle == "bessel":
            return cmd_padic_bessel(args.p, args.theta, args.shells, args.format)
        return cmd_padic_compose(args.p, args.level, args.chi_log, args.vmin, args.vmax, args.format)
    if args.command == "reproduce-appendix-a":
        report, _ = reproduce_appendix_a(args.prime_bound, args.out)
        return report
    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        out = _dispatch(args)
    except TOLERANCE_ERRORS as e:
        print(f"deltaperiod: tolerance failure: {e}", file=sys.stderr)
        return EXIT_TOLERANCE
    except INTERNAL_ERRORS as e:
        print(f"deltaperiod: internal consistency failure: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as e:
        print(f"deltaperiod: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
