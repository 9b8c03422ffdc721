"""Command-line front end: trajectories, correlation scans, figure
reproduction, and the validation suite.

Exit codes: 0 success, 1 validation failure, 2 usage/configuration error,
3 numerical invariant violation.  All CSV output uses 12 significant
digits and '\\n' line endings, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .checks import run_checks
from .correlations import discord_hs_oracle, discord_lower_bound, negativity
from .dfs import (
    coefficients_closed_form,
    coefficients_ode_series,
    reduced_pair_state,
)
from .figures import save_line_plot
from .lindblad import IntegratorConfig, ModelParams, integrate
from .linalg import (
    DensityMatrix,
    InvariantViolation,
    basis_state,
    hermitian_eigenvalues,
)

MEASURE_ORDER = ("negativity", "discord_lb", "discord_oracle")

# sweep conventions for the four reproduced figures
PAIR_SWEEP = ((1.0, 1.0), (1.0, 0.5), (1.0, 0.1))
SIZE_SWEEP = (2, 3, 4, 5, 6)
FIGURES = {
    "fig2": ("negativity", "pairs"),
    "fig3": ("negativity", "sizes"),
    "fig4": ("discord_lb", "pairs"),
    "fig5": ("discord_lb", "sizes"),
}
FIGURE_GRID_POINTS = 501
FIGURE_T_MAX = 5.0


class UsageError(Exception):
    """Bad flag/config input; maps to exit code 2."""


def _fmt(value) -> str:
    return format(float(value), ".12g")


def _write_csv(out: str, header, rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(cell) for cell in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as handle:
            handle.write(text)


def _time_grid(t_max: float, t_steps: int) -> np.ndarray:
    if t_steps < 2:
        raise UsageError(f"t-steps must be at least 2, got {t_steps}")
    if t_max <= 0.0:
        raise UsageError(f"t-max must be positive, got {t_max}")
    return np.linspace(0.0, t_max, t_steps)


def _model_params(n: int, a2: float, a3: float) -> ModelParams:
    try:
        return ModelParams(n, a2, a3)
    except ValueError as err:
        raise UsageError(str(err)) from err


def _initial_state(n: int) -> DensityMatrix:
    return DensityMatrix.from_pure(basis_state(3 ** (n - 1), 3 ** n), (3,) * n)


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        values = [int(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError as err:
        raise UsageError(f"{what} must be comma-separated integers: {err}")
    if not values:
        raise UsageError(f"{what} must be nonempty")
    return values


def _parse_measures(text: str) -> list[str]:
    requested = [tok.strip() for tok in text.split(",") if tok.strip()]
    if not requested:
        raise UsageError("measures must be nonempty")
    unknown = sorted(set(requested) - set(MEASURE_ORDER))
    if unknown:
        raise UsageError(
            f"unknown measures {unknown}; choose from {list(MEASURE_ORDER)}")
    return [m for m in MEASURE_ORDER if m in requested]


def cmd_evolve(args) -> int:
    params = _model_params(args.n, args.a2, args.a3)
    grid = _time_grid(args.t_max, args.t_steps)
    if args.dt <= 0.0:
        raise UsageError(f"dt must be positive, got {args.dt}")

    if args.method == "closed-form":
        header = ("t", "a0", "a1", "a2", "a3")
        rows = [(t, c.a0, c.a1, c.a2, c.a3)
                for t, c in ((t, coefficients_closed_form(params, t))
                             for t in grid)]
    elif args.method == "ode":
        header = ("t", "a0", "a1", "a2", "a3")
        series = coefficients_ode_series(params, grid, dt=args.dt)
        rows = [(c.t, c.a0, c.a1, c.a2, c.a3) for c in series]
    else:  # oracle: brute-force integration with full-state diagnostics
        spacing = grid[1] - grid[0]
        per_sample = max(1, int(round(spacing / args.dt)))
        cfg = IntegratorConfig(t_end=float(grid[-1]), dt=spacing / per_sample,
                               record_every=per_sample)
        samples = integrate(_initial_state(params.n), params, cfg)
        header = ("t", "trace", "purity", "min_eigenvalue",
                  "pop_ground", "pop_initial")
        start = 3 ** (params.n - 1)
        rows = []
        for t, state in samples:
            mat = state.matrix
            rows.append((
                t,
                mat.trace().real,
                (mat @ mat).trace().real,
                hermitian_eigenvalues(mat).min(),
                mat[0, 0].real,
                mat[start, start].real,
            ))
    _write_csv(args.out, header, rows)
    return 0


def _measure_values(pair: DensityMatrix, measures, seed: int) -> dict:
    values = {}
    if "negativity" in measures:
        values["negativity"] = negativity(pair)
    if "discord_lb" in measures:
        values["discord_lb"] = discord_lower_bound(pair)
    if "discord_oracle" in measures:
        values["discord_oracle"] = discord_hs_oracle(pair, seed=seed)
    return values


def cmd_scan(args) -> int:
    n_values = _parse_int_list(args.n, "n")
    if any(n < 2 for n in n_values):
        raise UsageError("scan needs n >= 2 (a pair of qutrits)")
    measures = _parse_measures(args.measures)
    grid = _time_grid(args.t_max, args.t_steps)
    if args.emit_svg and args.out == "-":
        raise UsageError("--emit-svg needs --out pointing at a file")

    header = ("t", "n", "a2", "a3", *measures)
    rows = []
    curves = {(n, m): [] for n in n_values for m in measures}
    for n in n_values:
        params = _model_params(n, args.a2, args.a3)
        for t in grid:
            pair = reduced_pair_state(coefficients_closed_form(params, t),
                                      params)
            values = _measure_values(pair, measures, args.seed)
            rows.append((t, n, args.a2, args.a3,
                         *(values[m] for m in measures)))
            for m in measures:
                curves[(n, m)].append(values[m])
    _write_csv(args.out, header, rows)
    if args.emit_svg:
        svg_path = os.path.splitext(args.out)[0] + ".svg"
        labelled = [(f"n={n} {m}", curves[(n, m)])
                    for n in n_values for m in measures]
        save_line_plot(svg_path, grid, labelled, "t", "measure value",
                       f"pairwise measures, A2={args.a2:g}, A3={args.a3:g}")
    return 0


def _figure_curves(measure: str, mode: str, grid: np.ndarray):
    evaluate = negativity if measure == "negativity" else discord_lower_bound
    curves = []
    if mode == "pairs":
        for a2, a3 in PAIR_SWEEP:
            params = ModelParams(2, a2, a3)
            ys = [evaluate(reduced_pair_state(
                coefficients_closed_form(params, t), params)) for t in grid]
            curves.append((f"A2={a2:g}, A3={a3:g}",
                           f"{measure}_a2_{a2:g}_a3_{a3:g}", ys))
    else:
        for n in SIZE_SWEEP:
            params = ModelParams(n, 1.0, 1.0)
            ys = [evaluate(reduced_pair_state(
                coefficients_closed_form(params, t), params)) for t in grid]
            curves.append((f"n={n}", f"{measure}_n{n}", ys))
    return curves


def cmd_reproduce_figures(args) -> int:
    which = list(args.which) if args.which else list(FIGURES)
    os.makedirs(args.out, exist_ok=True)
    grid = np.linspace(0.0, FIGURE_T_MAX, FIGURE_GRID_POINTS)
    ylabels = {"negativity": "negativity",
               "discord_lb": "discord lower bound"}
    for name in which:
        measure, mode = FIGURES[name]
        curves = _figure_curves(measure, mode, grid)
        csv_path = os.path.join(args.out, f"{name}.csv")
        header = ("t", *(column for _, column, _ in curves))
        rows = [(t, *(ys[i] for _, _, ys in curves))
                for i, t in enumerate(grid)]
        _write_csv(csv_path, header, rows)
        scope = ("two qutrits, varying decay rates" if mode == "pairs"
                 else "n qutrits, A2=A3=1")
        svg_path = save_line_plot(
            os.path.join(args.out, f"{name}.svg"), grid,
            [(label, ys) for label, _, ys in curves],
            "t", ylabels[measure], f"{ylabels[measure]} vs time ({scope})")
        print(f"wrote {csv_path}")
        print(f"wrote {svg_path}")
    return 0


def cmd_validate(args) -> int:
    skip = tuple(tok.strip() for tok in args.skip.split(",") if tok.strip())
    results = run_checks(skip=skip)
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        line = (f"{verdict} {r.check}: observed {r.observed:.3e}, "
                f"tolerance {r.tolerance:.1e}")
        if r.note:
            line += f" ({r.note})"
        print(line, file=sys.stderr)
    payload = [{"check": r.check, "tolerance": r.tolerance,
                "observed": r.observed, "pass": r.passed} for r in results]
    text = json.dumps(payload, indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as handle:
            handle.write(text)
    failing = [r.check for r in results if not r.passed]
    if failing:
        print(f"failing checks: {', '.join(failing)}", file=sys.stderr)
        return 1
    return 0


def _config_tokens(path: str) -> list[str]:
    if not os.path.exists(path):
        raise UsageError(f"config file not found: {path}")
    tokens = []
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(
                    f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("_", "-")
            if key == "emit-svg":
                if value.lower() in ("1", "true", "yes"):
                    tokens.append("--emit-svg")
                elif value.lower() not in ("0", "false", "no"):
                    raise UsageError(
                        f"{path}:{lineno}: emit-svg must be a boolean")
            else:
                tokens.extend((f"--{key}", value))
    return tokens


def _inject_config(argv: list[str]) -> list[str]:
    """Splice config-file tokens in right after the subcommand.

    Flags given on the command line come later, so they override the file
    (argparse keeps the last occurrence).
    """
    config_path = None
    cleaned = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a file path")
            config_path = argv[i + 1]
            i += 2
        elif tok.startswith("--config="):
            config_path = tok.split("=", 1)[1]
            i += 1
        else:
            cleaned.append(tok)
            i += 1
    if config_path is None:
        return cleaned
    for pos, tok in enumerate(cleaned):
        if not tok.startswith("-"):
            return (cleaned[:pos + 1] + _config_tokens(config_path)
                    + cleaned[pos + 1:])
    raise UsageError("--config requires a subcommand")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qutritsim",
        description="collective qutrit dissipation: trajectories, pairwise "
                    "correlation scans, figure reproduction, validation")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help=argparse.SUPPRESS)
        p.add_argument("--out", default="-",
                       help="output path, '-' for stdout (default)")

    ev = sub.add_parser("evolve", help="one trajectory as CSV")
    ev.add_argument("--n", type=int, default=2, help="number of qutrits")
    ev.add_argument("--a2", type=float, default=1.0)
    ev.add_argument("--a3", type=float, default=1.0)
    ev.add_argument("--t-max", type=float, default=5.0)
    ev.add_argument("--t-steps", type=int, default=501)
    ev.add_argument("--method", default="closed-form",
                    choices=("closed-form", "ode", "oracle"))
    ev.add_argument("--dt", type=float, default=1e-3,
                    help="integrator step for ode/oracle methods")
    common(ev)
    ev.set_defaults(func=cmd_evolve)

    sc = sub.add_parser("scan", help="pairwise correlation measures as CSV")
    sc.add_argument("--n", default="2",
                    help="comma-separated qutrit counts, e.g. 2,3,4")
    sc.add_argument("--a2", type=float, default=1.0)
    sc.add_argument("--a3", type=float, default=1.0)
    sc.add_argument("--t-max", type=float, default=5.0)
    sc.add_argument("--t-steps", type=int, default=501)
    sc.add_argument("--measures", default="negativity,discord_lb")
    sc.add_argument("--seed", type=int, default=0,
                    help="seed for the discord oracle optimizer")
    sc.add_argument("--emit-svg", action="store_true",
                    help="also render an SVG next to the CSV")
    common(sc)
    sc.set_defaults(func=cmd_scan)

    rf = sub.add_parser("reproduce-figures",
                        help="render the reference figures as CSV + SVG")
    rf.add_argument("which", nargs="*", choices=tuple(FIGURES), default=None,
                    help="subset of fig2 fig3 fig4 fig5 (default: all)")
    rf.add_argument("--config", help=argparse.SUPPRESS)
    rf.add_argument("--out", default="figures", help="output directory")
    rf.set_defaults(func=cmd_reproduce_figures)

    va = sub.add_parser("validate", help="run the validation suite")
    va.add_argument("--skip", default="",
                    help="comma-separated check-name prefixes to skip")
    common(va)
    va.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        argv = _inject_config(list(argv))
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except InvariantViolation as err:
        print(f"invariant violation: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
