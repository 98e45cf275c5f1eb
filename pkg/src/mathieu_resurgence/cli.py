"""Command-line front end: coefficient tables, spectra, width comparisons,
and plot-ready datasets, reproducibly and machine-readable first.

Exit codes: 0 success, 2 domain error, 3 convergence failure, 64 usage.
Every emitted payload carries a metadata header (package version, the
resolved configuration, truncation orders, precision) so a run can be
reproduced byte for byte; no timestamps on purpose.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from fractions import Fraction as Q

from . import __version__
from . import benderwu, oracle, spectral, widths, zerodim
from .errors import ConvergenceError, DomainError

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _q_str(x: Q) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _series_rows(series, var_name: str):
    rows = []
    for n in range(series.order + 1):
        poly = series[n]
        rows.append(
            {
                "power": n,
                "variable": var_name,
                "coefficients_in_B": [_q_str(c) for c in poly.c] or ["0"],
            }
        )
    return rows


def _emit(payload: dict, args) -> None:
    meta = {
        "version": __version__,
        "command": payload.pop("_command"),
        "config": payload.pop("_config"),
    }
    if args.pretty:
        text = _to_pretty(payload, meta)
    elif args.format == "json":
        text = json.dumps({"metadata": meta, **payload}, sort_keys=True, indent=None)
    else:
        text = _to_csv(payload, meta)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _to_csv(payload: dict, meta: dict) -> str:
    lines = [f"# {k} = {json.dumps(v, sort_keys=True)}" for k, v in sorted(meta.items())]
    rows = payload.get("rows", [])
    if rows:
        keys = list(rows[0].keys())
        lines.append(",".join(keys))
        for r in rows:
            lines.append(",".join(_csv_cell(r[k]) for k in keys))
    else:
        lines.append(json.dumps(payload, sort_keys=True))
    return "\n".join(lines) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return '"' + ";".join(str(x) for x in v) + '"'
    return str(v)


def _to_pretty(payload: dict, meta: dict) -> str:
    lines = [f"{meta['command']}  (v{meta['version']})"]
    rows = payload.get("rows", [])
    if rows:
        keys = list(rows[0].keys())
        cells = [[_csv_cell(r[k]) for k in keys] for r in rows]
        widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
        lines.append("  ".join(k.ljust(w) for k, w in zip(keys, widths)))
        for c in cells:
            lines.append("  ".join(x.ljust(w) for x, w in zip(c, widths)))
    for k, v in payload.items():
        if k != "rows":
            lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def _cache_dir() -> str | None:
    return os.environ.get("MATHIEU_RESURGENCE_CACHE")


def _cached(key: dict, compute):
    """Content-addressed cache of expensive exact computations."""
    root = _cache_dir()
    if not root:
        return compute()
    os.makedirs(root, exist_ok=True)
    digest = hashlib.sha256(
        json.dumps(key, sort_keys=True).encode()
    ).hexdigest()[:24]
    path = os.path.join(root, digest + ".json")
    if os.path.exists(path):
        with open(path) as fh:
            return json.load(fh)
    value = compute()
    with open(path, "w") as fh:
        json.dump(value, fh, sort_keys=True)
    return value


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write to file instead of stdout")
    common.add_argument("--pretty", action="store_true", help="human-oriented table")

    p = _Parser(prog="mathieu-resurgence", description=__doc__, parents=[common])
    subs = p.add_subparsers(dest="command", required=True)

    def sub_parser(name, **kw):
        return subs.add_parser(name, parents=[common], **kw)

    class _Sub:
        add_parser = staticmethod(sub_parser)

    sub = _Sub()

    s = sub.add_parser("pert", help="weak-coupling band-location series")
    s.add_argument("--order", type=int, default=5)
    s.add_argument("--poly", action="store_true", help="exact rationals in B")
    s.add_argument("--N", type=int, help="evaluate at integer level N")
    s.add_argument("--hbar", type=float)

    s = sub.add_parser("strong", help="strong-coupling gap edges / expansion")
    s.add_argument("--N", type=int, default=1)
    s.add_argument("--order", type=int, default=8)
    s.add_argument("--hbar", type=float)

    s = sub.add_parser("pinst", help="one-instanton fluctuation series")
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--N", type=int)

    s = sub.add_parser("zjj", help="quantization-function tables")
    s.add_argument("--order", type=int, default=4)

    s = sub.add_parser("actions", help="WKB action expansions")
    s.add_argument("--region", choices=("well", "high"), default="well")
    s.add_argument("--n", type=int, default=0, help="WKB order")
    s.add_argument("--order", type=int, default=6)

    s = sub.add_parser("spectrum", help="numeric band edges at one hbar")
    s.add_argument("--hbar", type=float, required=True)
    s.add_argument("--bands", type=int, default=5)

    s = sub.add_parser("figure1", help="band edges over an hbar grid")
    s.add_argument("--hbar-min", type=float, default=0.3)
    s.add_argument("--hbar-max", type=float, default=3.0)
    s.add_argument("--points", type=int, default=28)
    s.add_argument("--bands", type=int, default=19)

    s = sub.add_parser("figure2", help="band edges over a Q grid near u = 1")
    s.add_argument("--q-min", type=float, default=2.0)
    s.add_argument("--q-max", type=float, default=60.0)
    s.add_argument("--points", type=int, default=30)
    s.add_argument("--bands", type=int, default=12)

    s = sub.add_parser("widths", help="asymptotic width vs numeric oracle")
    s.add_argument("--kind", choices=("band", "gap"), required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--hbar", type=float, required=True)
    s.add_argument("--order", type=int, default=3)

    s = sub.add_parser("zerodim", help="saddle expansions and resurgence checks")
    s.add_argument("--m", type=str, default="1/4", help="elliptic parameter (fraction)")
    s.add_argument("--order", type=int, default=8)
    s.add_argument("--check", choices=("rows", "relation", "borel"), default="rows")
    s.add_argument("--hbar", type=float, action="append")

    s = sub.add_parser("benderwu", help="perturbative oracle series")
    s.add_argument("--potential", choices=("mathieu", "lame"), default="mathieu")
    s.add_argument("--m", type=str, default="1/2")
    s.add_argument("--N", type=int, default=0)
    s.add_argument("--order", type=int, default=6)
    s.add_argument("--poly", action="store_true")
    return p


def _parse_fraction(text: str) -> Q:
    if "/" in text:
        num, den = text.split("/")
        return Q(int(num), int(den))
    return Q(int(text))


def _run_pert(args) -> dict:
    series = spectral.u_pert(args.order)
    out: dict = {"rows": _series_rows(series, "hbar")}
    if args.N is not None:
        ev = series.eval_at_B(Q(2 * args.N + 1, 2))
        out["at_N"] = {
            "N": args.N,
            "coefficients": [_q_str(ev[n].const_value()) for n in range(ev.order + 1)],
        }
        if args.hbar:
            out["at_N"]["value"] = float(series(args.hbar, Q(2 * args.N + 1, 2)))
    return out


def _run_strong(args) -> dict:
    edges = spectral.gap_edge_series(args.N, args.order)
    rows = []
    for name, ser in (("upper", edges.upper), ("lower", edges.lower)):
        if ser is None:
            continue
        rows.append(
            {
                "edge": name,
                "q_coefficients": [_q_str(ser[j].const_value())
                                   for j in range(ser.order + 1)],
            }
        )
    out = {"rows": rows, "note": "u = (hbar^2/8) * sum_j c_j q^j, q = 4/hbar^2"}
    if args.hbar:
        out["at_hbar"] = {
            "hbar": args.hbar,
            "upper_u": edges.u_upper(args.hbar),
            **({"lower_u": edges.u_lower(args.hbar)} if edges.lower else {}),
        }
    return out


def _run_pinst(args) -> dict:
    P = widths.p_inst(args.order)
    out: dict = {"rows": _series_rows(P, "hbar")}
    if args.N is not None:
        B = Q(2 * args.N + 1, 2)
        ev = P.eval_at_B(B)
        # rendered as a series in (hbar/8), the customary instanton unit
        out["at_N_in_hbar_over_8"] = [
            _q_str(ev[n].const_value() * Q(8) ** n) for n in range(ev.order + 1)
        ]
    return out


def _run_zjj(args) -> dict:
    z = spectral.zjj_construct(args.order)
    return {
        "rows": [],
        "E_of_B": _series_rows(z.E_of_B, "hbar"),
        "B_of_E": _series_rows(z.B_of_E, "hbar"),
        "A_of_B": _series_rows(z.A_of_B, "hbar"),
        "A_of_E": _series_rows(z.A_of_E, "hbar"),
        "A_pole": "16/hbar",
    }


def _run_actions(args) -> dict:
    from . import actions as actions_mod

    ser = actions_mod.action_series(args.region, args.n, args.order)
    if args.region == "well":
        rows = [
            {"power_of_u_plus_1": k, "coefficient": _q_str(ser.well[k].const_value())}
            for k in range(ser.well.order + 1)
        ]
    else:
        rows = [
            {"half_power_of_2u": h, "coefficient": _q_str(c)}
            for h, c in ser.high.items()
        ]
    return {"rows": rows}


def _run_spectrum(args) -> dict:
    pts = oracle.band_edges(args.hbar, args.bands)
    rows = [
        {
            "hbar": p.hbar,
            "Q": 4 / p.hbar ** 2,
            "N": p.N,
            "edge": p.edge,
            "u": float(p.u),
            "err": 10.0 ** (-p.converged_digits),
        }
        for p in pts
    ]
    return {"rows": rows}


def _run_figure1(args) -> dict:
    import numpy as np

    grid = list(np.geomspace(args.hbar_min, args.hbar_max, args.points))
    rows = oracle.figure1_dataset(grid, N_max=args.bands)
    return {"rows": rows, "reference_lines_u": [-1.0, 1.0]}


def _run_figure2(args) -> dict:
    import numpy as np

    grid = list(np.linspace(args.q_min, args.q_max, args.points))
    rows = oracle.figure2_dataset(grid, N_max=args.bands)
    verticals = []
    for N in range(1, args.bands + 1):
        for sgn in (-1, 1):
            verticals.append(
                {"N": N, "sign": sgn, "Q": math.pi ** 2 / 16 * (N + sgn * 0.25) ** 2}
            )
    return {
        "rows": rows,
        "reference_lines_u": [-1.0, 1.0],
        "edge_crossing_verticals": verticals,
        "top_split_curves": "u = 1 +- pi*hbar/16",
    }


def _run_widths(args) -> dict:
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if args.kind == "band":
            est = widths.band_width(args.hbar, args.N, order=args.order)
        else:
            est = widths.gap_width(args.hbar, args.N)
    num = oracle.width_num(args.hbar, args.N, args.kind)
    return {
        "rows": [
            {
                "kind": args.kind,
                "N": args.N,
                "hbar": args.hbar,
                "asymptotic_leading": est.leading,
                "asymptotic_with_fluctuations": est.with_fluctuations,
                "oracle": num["width"],
                "oracle_error_bound": num["error_bound"],
                "ratio": est.with_fluctuations / num["width"]
                if args.kind == "band"
                else est.leading / num["width"],
            }
        ]
    }


def _run_zerodim(args) -> dict:
    m = _parse_fraction(args.m)
    if args.check == "rows":
        sym = zerodim.lame_vacuum_symbolic(args.order)
        return {
            "rows": [
                {"r": r, "coefficient_at_m": _q_str(p(m)), "poly_in_m": [_q_str(c) for c in p.c] or ["0"]}
                for r, p in enumerate(sym)
            ]
        }
    if args.check == "relation":
        rep = zerodim.exact_relation_check(m, range(8, args.order + 1, 4))
        return {"rows": rep["rows"], "max_rel_defect": rep["max_rel_defect"]}
    hbars = args.hbar or [0.2, 0.1, 0.05]
    rows = zerodim.borel_lateral_check(m, hbars)
    return {"rows": rows}


def _run_benderwu(args) -> dict:
    if args.potential == "mathieu":
        V = benderwu.mathieu_well_potential(2 * args.order + 4)
    else:
        V = benderwu.lame_potential(_parse_fraction(args.m), 2 * args.order + 4)
    if args.poly:
        series = benderwu.polynomial_in_N(V, args.order)
        return {"rows": _series_rows(series, "hbar")}
    series = benderwu.rs_series(V, args.N, args.order)
    return {
        "rows": [
            {"power": n, "coefficient": _q_str(series[n].const_value())}
            for n in range(series.order + 1)
        ]
    }


_RUNNERS = {
    "pert": _run_pert,
    "strong": _run_strong,
    "pinst": _run_pinst,
    "zjj": _run_zjj,
    "actions": _run_actions,
    "spectrum": _run_spectrum,
    "figure1": _run_figure1,
    "figure2": _run_figure2,
    "widths": _run_widths,
    "zerodim": _run_zerodim,
    "benderwu": _run_benderwu,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("command",)}
    try:
        payload = _cached(
            {"command": args.command, "config": {k: str(v) for k, v in config.items()}},
            lambda: _RUNNERS[args.command](args),
        )
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        sys.stderr.write(f"convergence failure: {exc}\n")
        return EXIT_CONVERGENCE
    payload["_command"] = args.command
    payload["_config"] = {k: str(v) for k, v in config.items()}
    _emit(payload, args)
    return EXIT_OK
