"""Command-line front end: analyze, emit, scan and mc.

Every command builds a list of tab-separated ``kind\\tkey=value...`` records
under a versioned header. ``--format records`` prints them as is; the default
human format is rendered from the same records.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, gf2
from .circuit import emit_naive_verification, emit_preparation, emit_verification, save_circuit
from .codes import BUILTIN_NAMES, CodeFormatError, builtin, load_code
from .cosets import EnumerationBoundError, check_ft_condition
from .paulisim import NoiseModel, exhaustive_scan, fit_scaling, monte_carlo, scaling_points
from .scheduler import schedule, w_max

REPORT_HEADER = "# ftfilter-report v1"
DEFAULT_EPS = (3e-3, 1e-2, 3e-2)

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2


class InputError(Exception):
    pass


def _load(args):
    try:
        if args.code_file:
            return load_code(args.code_file)
        return builtin(args.code)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    except (OSError, CodeFormatError) as exc:
        raise InputError(str(exc)) from None


def _emit(args, command: str, records: list[str]) -> None:
    lines = [f"{REPORT_HEADER} command={command}", *records]
    if args.format == "records":
        text = "\n".join(lines) + "\n"
    else:
        text = _human(lines)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _human(lines: list[str]) -> str:
    out = []
    for line in lines[1:]:
        kind, *fields = line.split("\t")
        if kind == "matrix":
            out.append(fields[0].split("=", 1)[1])
            continue
        if kind == "text":
            out.append(fields[0].split("=", 1)[1].replace("\\n", "\n").rstrip("\n"))
            continue
        out.append(f"{kind:<12} " + "  ".join(f.replace("=", ": ", 1) for f in fields))
    return "\n".join(out) + "\n"


def _matrix_records(label: str, M) -> list[str]:
    return [f"matrix\t{label}={gf2.bitstring(row)}" for row in gf2.as_bits(M)]


def _circuit(args, spec):
    if args.naive:
        return emit_naive_verification(spec.H, args.tm)
    return emit_verification(spec, T_m=args.tm)


def cmd_analyze(args) -> int:
    spec = _load(args)
    t = spec.t if args.t is None else args.t
    records = [f"code\tname={spec.name}\tn={spec.n}\tk_w={spec.k_w}\tr={spec.r}\tt={t}"]
    if args.naive:
        H = spec.H
        records.append("checks\tform=as_given")
    else:
        sf = gf2.to_standard_form(spec.H)
        H = sf.matrix
        records.append(
            f"checks\tform=standard\tperm={','.join(map(str, sf.perm))}\tidentity_perm={int(sf.is_identity_perm)}"
        )
        records += _matrix_records("A", sf.A)
    report = check_ft_condition(H, t)
    records += report.to_records()
    _emit(args, "analyze", records)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_emit(args) -> int:
    spec = _load(args)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    records = []
    prep = emit_preparation(spec)
    verify = _circuit(args, spec)
    base = spec.name + ("_naive" if args.naive else "")
    prep_path = outdir / f"{spec.name}_prep.circuit"
    verify_path = outdir / f"{base}_verify.circuit"
    save_circuit(prep, prep_path)
    save_circuit(verify, verify_path)
    if spec.r == 0:
        records.append("warning\tmessage=code has no checks; verification circuit is empty")
    sf = gf2.to_standard_form(spec.H) if spec.r else None
    if sf is not None and not args.naive:
        sched = schedule(sf.A)
        sched_path = outdir / f"{spec.name}_schedule.txt"
        sched_path.write_text(sched.render())
        records.append(f"schedule\tfile={sched_path}\tN={sched.N}\tw_max={w_max(sf.A)}")
        records.append("text\trectangle=" + sched.render().replace("\n", "\\n"))
    records.append(f"circuit\trole=preparation\tfile={prep_path}\tdepth={prep.duration}")
    records.append(
        f"circuit\trole={verify.label}\tfile={verify_path}\tduration={verify.duration}"
        f"\tT_m={verify.meas_time}\tcz={verify.count('CZ')}\tverifiers={verify.n_verifier}"
    )
    _emit(args, "emit", records)
    return EXIT_OK


def cmd_scan(args) -> int:
    spec = _load(args)
    c = _circuit(args, spec)
    try:
        results = exhaustive_scan(c, spec, args.kmax, inject_arbitrary=args.inject)
    except EnumerationBoundError as exc:
        raise InputError(str(exc)) from None
    records = [
        f"scan\tcode={spec.name}\tcircuit={c.label}\tk_max={args.kmax}\tinject={int(args.inject)}"
        f"\tconvention={args.convention}"
    ]
    n_viol = 0
    for res in results:
        viol = res.violations if args.convention == "total" else res.strict_violations
        records.append(
            f"level\tk={res.k}\tevents={len(res)}\tviolations_total={len(res.violations)}"
            f"\tviolations_strict={len(res.strict_violations)}"
        )
        for (inj, acc, w), cnt in sorted(res.histogram().items()):
            if acc:
                records.append(f"accepted\tk={res.k}\tinjected={int(inj)}\teffective_weight={w}\tcount={cnt}")
        for i in viol[: args.max_listed]:
            d = res.describe(i)
            faults = ";".join(f"{kind}@{time}{list(qs)}:{p}" for _, kind, time, qs, p in d["faults"]) or "-"
            records.append(
                f"violation\tk={d['k']}\tinjected={d['injected']}\tfaults={faults}"
                f"\tresidual={d['residual']}\teffective_weight={d['effective_weight']}"
            )
        n_viol += len(viol)
    records.append(f"summary\tviolations={n_viol}\tverdict={'pass' if n_viol == 0 else 'fail'}")
    _emit(args, "scan", records)
    return EXIT_OK if n_viol == 0 else EXIT_VIOLATION


def cmd_mc(args) -> int:
    spec = _load(args)
    eps_list = list(args.eps)
    if any(not 0 < e <= 1 for e in eps_list):
        raise InputError("epsilon values must lie in (0, 1]")
    if args.trials < 1:
        raise InputError("trials must be >= 1")
    c = _circuit(args, spec)
    results = [monte_carlo(c, spec, NoiseModel(e, inject=args.inject), args.trials, args.seed) for e in eps_list]
    records = [
        f"mc_run\tcode={spec.name}\tcircuit={c.label}\ttrials={args.trials}\tseed={args.seed}"
        f"\tinject={int(args.inject)}"
    ]
    for res in results:
        records += res.to_records()
    if len(set(eps_list)) < 2:
        records.append("notice\tmessage=fit skipped: need at least two epsilon values")
    else:
        weights = sorted({w for res in results for (acc, w) in res.counts if acc and w > 0})
        report = fit_scaling(scaling_points(results, weights))
        records += [r for r in report.to_records() if r.startswith("fit")]
    _emit(args, "mc", records)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftfilter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, naive_help):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--code", default="rep5", help=f"builtin code ({', '.join(BUILTIN_NAMES)})")
        src.add_argument("--code-file", help="code file with name/t header and G:/H: blocks")
        p.add_argument("--naive", action="store_true", help=naive_help)
        p.add_argument("--format", choices=("text", "records"), default="text")
        p.add_argument("--output", help="write the report here instead of stdout")

    naive_circuit = "use the checks of H as given (sequential CZs) instead of the standard form"
    p = sub.add_parser("analyze", help="standard form and coset fault-tolerance condition")
    common(p, "check H as given instead of its standard form")
    p.add_argument("--t", type=int, default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("emit", help="write preparation and verification circuits and the schedule")
    common(p, naive_circuit)
    p.add_argument("--tm", type=int, default=1, help="measurement time T_m")
    p.add_argument("--outdir", default=".")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("scan", help="exhaustive fault scan of the verification network")
    common(p, naive_circuit)
    p.add_argument("--tm", type=int, default=1)
    p.add_argument("--kmax", type=int, default=1)
    p.add_argument("--inject", action="store_true", help="also sweep every input X error")
    p.add_argument(
        "--convention",
        choices=("total", "strict"),
        default="total",
        help="violation rule: weight > faults incl. input error (total) or > circuit faults only (strict)",
    )
    p.add_argument("--max-listed", type=int, default=20)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("mc", help="Monte Carlo campaign and scaling fits")
    common(p, naive_circuit)
    p.add_argument("--tm", type=int, default=1)
    p.add_argument("--eps", type=float, nargs="+", default=list(DEFAULT_EPS))
    p.add_argument("--trials", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject", action="store_true", help="worst-case input error with probability epsilon")
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"ftfilter: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"ftfilter: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
