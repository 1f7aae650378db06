"""Command line front end.

Exit codes: 0 success, 2 when a space claimed G.O. is found NotGO, 1 on errors
(bad input, failed verification, catalog mismatches).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import catalog, go, sim, specfile, structure
from . import linalg as la
from .lie import LieAlgebraError
from .report import Report
from .space import SpecError, validate

EXIT_OK, EXIT_ERROR, EXIT_NOT_GO = 0, 1, 2


class CliError(Exception):
    pass


def load(target: str):
    """A spec file path or a catalog ``name[:params]``; returns ``(spec, entry or None)``."""
    if os.path.exists(target):
        return specfile.parse(target), None
    name = catalog.parse_target(target)[0]
    if name not in catalog.names():
        raise CliError(f"{target!r} is neither a readable file nor a catalog entry "
                       f"(known: {', '.join(catalog.names())})")
    entry = catalog.build_target(target)
    return entry.spec, entry


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_check_go(args) -> int:
    spec, _ = load(args.target)
    v = go.check_go(spec, args.samples, args.seed)
    _emit(go.verdict_report(spec, v).render())
    if isinstance(v, go.NotGO) and spec.flags.get("go"):
        return EXIT_NOT_GO
    return EXIT_OK


def cmd_analyze(args) -> int:
    spec, entry = load(args.target)
    if entry is not None:
        rep = catalog.run_all(entry, args.samples, args.seed)
        _emit(rep.render())
        if rep["check_go"]["verdict"] == "NotGO" and spec.flags.get("go"):
            return EXIT_NOT_GO
        return EXIT_OK if rep["expected"]["mismatches"] == 0 else EXIT_ERROR
    rep = Report(f"analyze {spec.name}".strip())
    rep.add("validate", validate(spec))
    v = go.check_go(spec, args.samples, args.seed)
    rep.add("check_go", go.verdict_report(spec, v))
    rep.add("skew", go.skew_consequence(spec))
    rep.add("decompose", structure.decompose(spec))
    _emit(rep.render())
    if isinstance(v, go.NotGO) and spec.flags.get("go"):
        return EXIT_NOT_GO
    return EXIT_OK


def cmd_decompose(args) -> int:
    spec, entry = load(args.target)
    theta = entry.theta if entry is not None else None
    rep = structure.decompose(spec, theta=theta)
    _emit(rep.render())
    failed = rep.get("rn_decompose")
    return EXIT_ERROR if failed is not None and failed.ok is False else EXIT_OK


def _parse_vector(text: str) -> list[Fraction]:
    try:
        return [la.frac(t.strip()) for t in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise CliError(f"bad vector {text!r}: expected comma-separated rationals") from None


def cmd_simulate(args) -> int:
    spec, _ = load(args.target)
    coords = _parse_vector(args.X)
    if len(coords) != spec.m.dim:
        raise CliError(f"--X needs {spec.m.dim} coordinates (basis of m), got {len(coords)}")
    try:
        t_end = float(la.frac(args.t))
    except (ValueError, ZeroDivisionError):
        raise CliError(f"bad --t value {args.t!r}") from None
    if args.steps < 1:
        raise CliError("--steps must be at least 1")
    model = sim.group_model(spec)
    X = spec.from_m(coords)
    traj = model.geodesic(X, t_end, args.steps)
    rep = Report(f"simulate {spec.name}".strip())
    rep.value("model", model.kind)
    rep.value("X", spec.label(X))
    rep.value("t_end", t_end)
    rep.value("steps", args.steps)
    rep.value("speed_start", model.metric.speed(traj.velocities[0]))
    rep.value("speed_drift", sim.speed_drift(model.metric, traj))
    cert = go.geodesic_vector(spec, X)
    if cert is None:
        rep.value("geodesic_vector", "none (X is not a geodesic vector direction)")
    else:
        rep.value("Z", spec.label(cert.Z))
        orbit = model.orbit(X, cert.Z, traj.times)
        rep.value("orbit_deviation", sim.compare(traj, orbit))
    if args.out:
        sim.write_trajectory(traj, args.out)
        rep.value("written", args.out)
        rep.value("columns", ",".join(traj.columns()))
    _emit(rep.render())
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.names():
            extra = catalog.PARAM_HELP.get(name)
            _emit(f"{name}" + (f"  [{extra}]" if extra else ""))
        return EXIT_OK
    if not args.name:
        raise CliError("catalog emit needs an entry name")
    entry = catalog.build_target(args.name)
    text = specfile.emit(entry.spec)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        _emit(text.rstrip("\n"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="goorbit", description="Geodesic orbit spaces: exact checks and decompositions.")
    sub = p.add_subparsers(dest="command", required=True)

    def target(sp):
        sp.add_argument("target", help="spec file path or catalog entry name[:p1,p2]")

    def sampling(sp):
        sp.add_argument("--samples", type=int, default=100)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("analyze", help="all checks; catalog entries are compared with expected flags")
    target(sp)
    sampling(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("check-go", help="G.O. verdict with certificate")
    target(sp)
    sampling(sp)
    sp.set_defaults(func=cmd_check_go)

    sp = sub.add_parser("decompose", help="structure decomposition report")
    target(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("simulate", help="integrate a geodesic and compare with its orbit curve")
    target(sp)
    sp.add_argument("--X", required=True, help="initial direction, comma-separated coordinates in the basis of m")
    sp.add_argument("--t", default="1", help="end time (rational)")
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--out", help="write the trajectory as comma-separated text")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("catalog", help="list or emit built-in entries")
    sp.add_argument("action", choices=("list", "emit"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 1) < 1:
        print("error: --samples must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except specfile.SpecFileError as exc:
        for d in exc.diagnostics:
            print(f"{args.target}:{d}", file=sys.stderr)
        return EXIT_ERROR
    except (CliError, catalog.CatalogError, SpecError, LieAlgebraError, structure.StructureError,
            sim.SimulationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
