"""Command-line interface.

Exit codes: 0 success, 1 usage or domain errors, 2 for results that
left floating-point range (a truncated orbit still writes its finite
prefix before exiting with 2).
"""
from __future__ import annotations

import argparse
import sys

from .errors import DomainError, RangeError, RegimeError
from .exchange import ExtendedExchangeMatrix, mutation_class
from .export import export_csv, export_json
from .levelset import levelset_points
from .orbits import OrbitKind, StartPolicy, iterate_orbit, scan_grid
from .params import Params
from .svg import RenderSpec, render_svg
from .tropical import PointPL, detect_period

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; route it through our codes
    def error(self, message):
        raise _UsageError(message)


def _write_out(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _params_from(args) -> Params:
    return Params(args.p, args.q)


def _add_params_args(sp):
    sp.add_argument("--p", type=float, required=True, help="first exponent, positive")
    sp.add_argument("--q", type=float, required=True, help="second exponent, positive")


def _add_output_args(sp, formats=("csv", "json", "svg")):
    sp.add_argument("--format", choices=formats, default=formats[0])
    sp.add_argument("--out", default=None, help="output path (default stdout)")


def _orbit_text(orbit, fmt: str) -> str:
    if fmt == "csv":
        return export_csv(orbit)
    if fmt == "json":
        return export_json(orbit)
    return render_svg(orbit, RenderSpec())


def _cmd_orbit(args) -> int:
    orbit = iterate_orbit(
        _params_from(args), OrbitKind.RATIONAL, (args.x0, args.y0), args.steps
    )
    _write_out(_orbit_text(orbit, args.format), args.out)
    if orbit.truncated:
        print(
            f"orbit left float range at step {orbit.truncated_at}; "
            f"wrote the finite prefix",
            file=sys.stderr,
        )
        return 2
    return 0


def _cmd_trop_orbit(args) -> int:
    orbit = iterate_orbit(
        _params_from(args), OrbitKind.TROPICAL, (args.s0, args.t0), args.steps
    )
    _write_out(_orbit_text(orbit, args.format), args.out)
    if orbit.truncated:
        print(
            f"orbit left float range at step {orbit.truncated_at}; "
            f"wrote the finite prefix",
            file=sys.stderr,
        )
        return 2
    return 0


def _cmd_period(args) -> int:
    period = detect_period(
        _params_from(args), PointPL(args.s0, args.t0), args.max_steps
    )
    print("none" if period is None else str(period))
    return 0


_SCAN_KEYS = {
    "p-min": float,
    "p-max": float,
    "q-min": float,
    "q-max": float,
    "resolution": int,
    "steps": int,
    "kind": str,
    "seed": int,
    "count": int,
}


def _read_scan_config(path) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, val = (x.strip() for x in line.partition("="))
            if key not in _SCAN_KEYS:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _SCAN_KEYS[key](val)
            except ValueError:
                raise DomainError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
    return values


def _cmd_scan(args) -> int:
    cfg = {
        "p-min": 0.5,
        "p-max": 2.0,
        "q-min": 0.5,
        "q-max": 2.0,
        "resolution": 5,
        "steps": 1000,
        "kind": "rational",
        "seed": None,
        "count": 1,
    }
    if args.config is not None:
        cfg.update(_read_scan_config(args.config))
    # explicit flags win over the config file
    for flag, key in (
        ("p_min", "p-min"),
        ("p_max", "p-max"),
        ("q_min", "q-min"),
        ("q_max", "q-max"),
        ("resolution", "resolution"),
        ("steps", "steps"),
        ("kind", "kind"),
        ("seed", "seed"),
        ("count", "count"),
    ):
        v = getattr(args, flag)
        if v is not None:
            cfg[key] = v
    try:
        kind = OrbitKind(cfg["kind"])
    except ValueError:
        raise DomainError(f"kind must be rational or tropical, got {cfg['kind']!r}") from None
    if cfg["seed"] is None:
        policy = StartPolicy(points=((1.0, 1.0),))
    else:
        policy = StartPolicy(seed=int(cfg["seed"]), count=int(cfg["count"]))
    table = scan_grid(
        (cfg["p-min"], cfg["p-max"]),
        (cfg["q-min"], cfg["q-max"]),
        int(cfg["resolution"]),
        kind,
        int(cfg["steps"]),
        policy,
    )
    _write_out(export_json(table), args.out)
    return 0


def _cmd_levelset(args) -> int:
    pieces = levelset_points(
        _params_from(args), args.level, samples_per_piece=args.samples
    )
    if args.format == "svg":
        text = render_svg(pieces, RenderSpec())
    elif args.format == "json":
        payload = [[list(pt) for pt in piece] for piece in pieces]
        from .export import _emit

        text = _emit({"level": float(args.level), "pieces": payload}) + "\n"
    else:
        lines = ["piece,index,s,t"]
        from .export import fmt_float

        for pi, piece in enumerate(pieces):
            for idx, (s, t) in enumerate(piece):
                lines.append(f"{pi},{idx},{fmt_float(s)},{fmt_float(t)}")
        text = "\n".join(lines) + "\n"
    _write_out(text, args.out)
    return 0


def _parse_rows(text: str):
    rows = []
    if text:
        for chunk in text.split(";"):
            parts = chunk.split(",")
            if len(parts) != 2:
                raise DomainError(f"each row needs two entries, got {chunk!r}")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise DomainError(f"bad row entry in {chunk!r}") from None
    return tuple(rows)


def _cmd_matclass(args) -> int:
    seed = ExtendedExchangeMatrix.from_exponents(
        args.p, args.q, rows=_parse_rows(args.rows), negated=args.negated
    )
    result = mutation_class(seed, cap=args.cap)
    if args.full:
        text = export_json(result)
    else:
        from .export import _emit

        text = _emit({"size": result.size, "complete": result.complete}) + "\n"
    _write_out(text, args.out)
    return 0


def _cmd_verify(args) -> int:
    from .acceptance import run_all

    return 0 if run_all() else 1


def _build_parser() -> _Parser:
    parser = _Parser(prog="mutdyn", description="Planar exchange-map dynamics toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("orbit", help="iterate the birational map on the positive quadrant")
    _add_params_args(sp)
    sp.add_argument("--x0", type=float, required=True)
    sp.add_argument("--y0", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    _add_output_args(sp)
    sp.set_defaults(func=_cmd_orbit)

    sp = sub.add_parser("trop-orbit", help="iterate the piecewise-linear map on the plane")
    _add_params_args(sp)
    sp.add_argument("--s0", type=float, required=True)
    sp.add_argument("--t0", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    _add_output_args(sp)
    sp.set_defaults(func=_cmd_trop_orbit)

    sp = sub.add_parser("period", help="detect the period of a piecewise-linear orbit")
    _add_params_args(sp)
    sp.add_argument("--s0", type=float, required=True)
    sp.add_argument("--t0", type=float, required=True)
    sp.add_argument("--max-steps", type=int, default=1000)
    sp.set_defaults(func=_cmd_period)

    sp = sub.add_parser("scan", help="growth verdicts over a parameter grid")
    sp.add_argument("--config", default=None, help="key=value file; flags override it")
    sp.add_argument("--p-min", dest="p_min", type=float, default=None)
    sp.add_argument("--p-max", dest="p_max", type=float, default=None)
    sp.add_argument("--q-min", dest="q_min", type=float, default=None)
    sp.add_argument("--q-max", dest="q_max", type=float, default=None)
    sp.add_argument("--resolution", type=int, default=None)
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--kind", choices=("rational", "tropical"), default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--count", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_scan)

    sp = sub.add_parser("levelset", help="sample a level set of the conserved function")
    _add_params_args(sp)
    sp.add_argument("--level", type=float, required=True)
    sp.add_argument("--samples", type=int, default=256)
    _add_output_args(sp)
    sp.set_defaults(func=_cmd_levelset)

    sp = sub.add_parser("matclass", help="mutation class of an extended exchange matrix")
    _add_params_args(sp)
    sp.add_argument("--rows", default="", help='extra rows as "a,b;c,d"')
    sp.add_argument("--cap", type=int, default=10**5)
    sp.add_argument("--negated", action="store_true", help="start from the negated block")
    sp.add_argument("--full", action="store_true", help="include every matrix in the output")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_matclass)

    sp = sub.add_parser("verify", help="run the acceptance checks and report each one")
    sp.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (DomainError, RegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RangeError as exc:
        print(f"range error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
