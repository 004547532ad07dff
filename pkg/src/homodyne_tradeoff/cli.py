"""Command-line front end: ``curve``, ``validate`` and ``mc`` subcommands.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .curves import CURVE_KINDS, CSV_COLUMNS, CurveSpec, curve_filename, export, generate_curve
from .errors import NumericalError
from .fidelities import (
    GaussianCoherent,
    Single,
    ThermalFock,
    avg_id_fidelities,
    disturbance_fidelity_coherent,
    info_fidelity_coherent,
)
from .montecarlo import RunConfig, empirical_id_fidelities
from .phase_space import Fock
from .scheme import SchemeParams

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homodyne-tradeoff",
        description="Fidelity trade-offs of feed-forward double-homodyne measurement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curve", help="sweep the beam-splitter angle and write a trade-off curve")
    c.add_argument("kind", choices=CURVE_KINDS)
    c.add_argument("--eta", type=float, default=1.0, help="detector efficiency")
    c.add_argument("--omega", type=float, nargs="+", default=[1.0], help="Gaussian ensemble width(s)")
    c.add_argument("--nbar", type=float, nargs="+", default=[1.0], help="thermal mean photon number(s)")
    c.add_argument("--fock-n", type=int, nargs="+", default=[1], help="Fock number(s)")
    c.add_argument("--universal", action="store_true", help="use universal settings (coherent only)")
    c.add_argument("--steps", type=int, default=200, help="number of angles in (0, pi/2]")
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--out", help="output file (single curve) or directory; stdout if omitted")

    v = sub.add_parser("validate", help="run the closed-form/quadrature validation suite")
    v.add_argument("--omega", type=float, default=1e3, help="width for the universal-limit check")
    v.add_argument("--out", help="write the report as JSON to this path")

    m = sub.add_parser("mc", help="Monte Carlo information/disturbance fidelities")
    m.add_argument("--eta", type=float, default=1.0)
    m.add_argument("--phi", type=float, default=math.pi / 2, help="beam-splitter angle (rad)")
    m.add_argument("--kappa", type=float, default=1.0)
    m.add_argument("--gain", type=float, default=1.0)
    m.add_argument("--beta", type=complex, default=1 + 0j, help="coherent amplitude, e.g. 1+0.5j")
    m.add_argument("--omega", type=float, help="draw amplitudes from a Gaussian of this width instead")
    m.add_argument("--trials", type=int, default=100_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--format", choices=("csv", "json"), default="json")
    m.add_argument("--out")
    return parser


def _curve_specs(args) -> list[CurveSpec]:
    if args.kind in ("id-coherent", "ed-coherent"):
        omegas = args.omega[:1] if args.universal else args.omega
        ensembles = [GaussianCoherent(w) for w in omegas]
    elif args.kind == "ed-fock":
        ensembles = [Single(Fock(n)) for n in args.fock_n]
    else:
        ensembles = [ThermalFock(nb) for nb in args.nbar]
    return [
        CurveSpec(args.kind, args.eta, ens, phi_steps=args.steps, universal=args.universal)
        for ens in ensembles
    ]


def _cmd_curve(args, parser) -> int:
    try:
        specs = _curve_specs(args)
    except ValueError as exc:
        parser.error(str(exc))
    out = Path(args.out) if args.out else None
    to_dir = out is not None and (len(specs) > 1 or out.is_dir() or out.suffix == "")
    if to_dir:
        out.mkdir(parents=True, exist_ok=True)
    for spec in specs:
        points = generate_curve(spec)
        if out is None:
            if args.format == "csv":
                w = csv.writer(sys.stdout, lineterminator="\n")
                w.writerow(CSV_COLUMNS)
                for pt in points:
                    w.writerow([format(v, ".12g") for v in pt])
            else:
                buf = io.StringIO()
                print(json.dumps({"points": [pt._asdict() for pt in points]}), file=buf)
                sys.stdout.write(buf.getvalue())
            continue
        path = out / curve_filename(spec, args.format) if to_dir else out
        export(points, args.format, path, spec=spec)
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_validate(args) -> int:
    from .validation import run_validation

    report = run_validation(omega_limit=args.omega, progress=lambda r: print(r.line(), flush=True))
    print(report.format().splitlines()[-1])
    if args.out:
        doc = [
            {"name": r.name, "passed": r.passed, "max_deviation": r.max_deviation,
             "tolerance": r.tolerance, "points": r.points, "detail": r.detail}
            for r in report.results
        ]
        Path(args.out).write_text(json.dumps(doc, indent=1))
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _cmd_mc(args, parser) -> int:
    try:
        p = SchemeParams(args.eta, args.phi, args.kappa, args.gain)
        cfg = RunConfig(args.trials, args.seed, args.workers)
        source = GaussianCoherent(args.omega) if args.omega else args.beta
    except ValueError as exc:
        parser.error(str(exc))
    G, F = empirical_id_fidelities(source, p, cfg)
    if args.omega:
        analytic = avg_id_fidelities(p.eta, p.phi, args.omega, p.kappa, p.g)[:2]
    else:
        analytic = (info_fidelity_coherent(p, args.beta), disturbance_fidelity_coherent(p, args.beta))
    rows = [
        {"fidelity": name, "mean": est.mean, "std_error": est.std_error,
         "trials": est.trials, "analytic": ref}
        for name, est, ref in (("G", G, analytic[0]), ("F", F, analytic[1]))
    ]
    if args.format == "json":
        meta = {"eta": p.eta, "phi": p.phi, "kappa": p.kappa, "g": p.g, "seed": args.seed,
                "trials": args.trials, "workers": args.workers,
                "source": {"omega": args.omega} if args.omega else {"beta": [args.beta.real, args.beta.imag]}}
        text = json.dumps({"metadata": meta, "estimates": rows}, indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "curve":
            return _cmd_curve(args, parser)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_mc(args, parser)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
