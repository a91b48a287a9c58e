"""Command-line workflows: solve, simulate, compare, oracle, conditions.

Emits plot-ready CSV curves (no plotting here).  Exit codes: 0 success,
1 config error, 2 size limit, 3 solver failure, 4 oracle failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields

import numpy as np

from .canonical import (
    OracleError,
    SolverError,
    build_problem,
    matrix_k1_oracle,
    oracle_z_grid,
    solve_alpha,
)
from .espectrum import monte_carlo_spectrum, smoothed_density
from .inversion import auto_grid, cdf_from_density, density_curve
from .lattice import LatticeSpec, SizeLimitError, expected_degree, node_count
from .metrics import compare as compare_curves
from .percolation import girko_conditions

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SIZE = 2
EXIT_SOLVER = 3
EXIT_ORACLE = 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    dims: tuple[int, ...]
    probs: tuple[float, ...]
    trials: int = 50
    seed: int = 0
    grid_points: int = 2000
    margin: float = 0.1
    epsilon: float | None = None  # None means 2x grid spacing
    normalized: bool = False
    output_path: str = "curves.csv"

    def spec(self) -> LatticeSpec:
        try:
            return LatticeSpec(dims=self.dims, probs=self.probs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad dims {text!r}: {exc}") from exc


def _parse_probs(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad probs {text!r}: {exc}") from exc


def _parse_epsilon(text: str):
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError as exc:
        raise ConfigError(f"bad epsilon {text!r}") from exc
    if value <= 0:
        raise ConfigError("epsilon must be positive")
    return value


def _parse_z_list(text: str) -> list[complex]:
    out = []
    for token in text.split(","):
        token = token.strip().replace("i", "j")
        try:
            out.append(complex(token))
        except ValueError as exc:
            raise ConfigError(f"bad complex value {token!r}") from exc
    return out


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON file with RunConfig keys; flags override")
    parser.add_argument("--dims", help="comma-separated lattice sizes, e.g. 30,50")
    parser.add_argument("--probs", help="comma-separated link probabilities, e.g. 0.7,0.5")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--grid-points", type=int, dest="grid_points")
    parser.add_argument("--margin", type=float)
    parser.add_argument("--epsilon", help="smoothing width or 'auto' (2x grid spacing)")
    parser.add_argument("--normalized", action="store_true", default=None)
    parser.add_argument("--output", dest="output_path")


def _load_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                values.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(values) - {f.name for f in fields(RunConfig)}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for name in ("dims", "probs", "trials", "seed", "grid_points", "margin",
                 "epsilon", "normalized", "output_path"):
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    if "dims" not in values or "probs" not in values:
        raise ConfigError("dims and probs are required (flags or config file)")
    if isinstance(values["dims"], str):
        values["dims"] = _parse_dims(values["dims"])
    if isinstance(values["probs"], str):
        values["probs"] = _parse_probs(values["probs"])
    if isinstance(values.get("epsilon"), str):
        values["epsilon"] = _parse_epsilon(values["epsilon"])
    values["dims"] = tuple(int(v) for v in values["dims"])
    values["probs"] = tuple(float(v) for v in values["probs"])
    cfg = RunConfig(**values)
    if len(cfg.dims) != len(cfg.probs):
        raise ConfigError("dims and probs must have the same length")
    if cfg.trials < 1:
        raise ConfigError("trials must be >= 1")
    if cfg.grid_points < 16:
        raise ConfigError("grid_points must be >= 16")
    cfg.spec()
    return cfg


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _write_csv(path: str, columns: dict[str, np.ndarray]) -> None:
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for row in zip(*arrays):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _grid_and_eps(cfg: RunConfig, problem):
    grid = auto_grid(problem, points=cfg.grid_points, margin=cfg.margin)
    eps = cfg.epsilon if cfg.epsilon is not None else 2.0 * float(np.median(np.diff(grid)))
    return grid, eps


def _deterministic_stieltjes_fn(problem):
    # warm-start each grid point from the previous solution
    state = {"alpha": None}

    def fn(z):
        sol = solve_alpha(problem, z, initial=state["alpha"])
        state["alpha"] = sol.alpha_principal
        return sol.alpha_principal

    return fn


def _deterministic_curves(cfg: RunConfig, problem, grid, eps):
    dens = density_curve(_deterministic_stieltjes_fn(problem), grid, eps,
                         label="deterministic")
    return cdf_from_density(dens)


def _empirical_curves(cfg: RunConfig, spec, grid, eps):
    # the CDF is integrated from the smoothed density, with the same eps as
    # the deterministic curve, so the two sides are compared like for like
    scale = np.sqrt(expected_degree(spec)) if cfg.normalized else 1.0
    pooled = monte_carlo_spectrum(
        spec, cfg.seed, cfg.trials, normalized=cfg.normalized, scale=scale
    )
    curve = cdf_from_density(smoothed_density(pooled, grid, eps))
    return pooled, curve.density, curve.cdf


def cmd_solve(cfg: RunConfig) -> int:
    problem = build_problem(cfg.spec())
    grid, eps = _grid_and_eps(cfg, problem)
    curve = _deterministic_curves(cfg, problem, grid, eps)
    _write_csv(cfg.output_path, {"x": grid, "f_det": curve.density, "F_det": curve.cdf})
    print(f"wrote deterministic curves to {cfg.output_path} (epsilon={eps:.6g})")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    spec = cfg.spec()
    problem = build_problem(spec)
    grid, eps = _grid_and_eps(cfg, problem)
    _, dens, cdf = _empirical_curves(cfg, spec, grid, eps)
    _write_csv(cfg.output_path, {"x": grid, "f_emp": dens, "F_emp": cdf})
    print(
        f"wrote empirical curves ({cfg.trials} trials, seed {cfg.seed}) "
        f"to {cfg.output_path} (epsilon={eps:.6g})"
    )
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    from .inversion import SpectralCurve

    spec = cfg.spec()
    problem = build_problem(spec)
    grid, eps = _grid_and_eps(cfg, problem)
    if cfg.normalized:
        # Theorem-3 mode: sqrt(gamma)-scaled row-normalized vs scaled
        # adjacency, both empirical.  The reference (scaled) curve occupies
        # the det columns so the CSV schema stays fixed.
        scale = np.sqrt(expected_degree(spec))
        ref = monte_carlo_spectrum(spec, cfg.seed, cfg.trials, normalized=False,
                                   scale=scale)
        lo = min(ref.eigenvalues.min(), -scale) - 10 * eps
        hi = max(ref.eigenvalues.max(), scale) + 10 * eps
        grid = np.linspace(lo, hi, cfg.grid_points)
        eps = cfg.epsilon if cfg.epsilon is not None else 2.0 * float(np.median(np.diff(grid)))
        ref_curve = cdf_from_density(smoothed_density(ref, grid, eps))
        det = SpectralCurve(grid=grid, cdf=ref_curve.cdf, density=ref_curve.density,
                            epsilon=eps, label="scaled empirical")
    else:
        det = _deterministic_curves(cfg, problem, grid, eps)
    _, emp_dens, emp_cdf = _empirical_curves(cfg, spec, grid, eps)
    emp = SpectralCurve(grid=grid, cdf=emp_cdf, density=emp_dens, epsilon=eps,
                        label="empirical")
    report = compare_curves(det, emp)
    _write_csv(cfg.output_path, {
        "x": grid, "f_det": det.density, "F_det": det.cdf,
        "f_emp": emp_dens, "F_emp": emp_cdf,
    })
    print(
        f"kolmogorov={report.kolmogorov:.6g} levy={report.levy:.6g} "
        f"grid_points={report.grid_points}"
    )
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, z_list: list[complex] | None) -> int:
    spec = cfg.spec()
    if node_count(spec) > 600:
        raise SizeLimitError(f"oracle requires N <= 600, got {node_count(spec)}")
    problem = build_problem(spec)
    zs = z_list if z_list else oracle_z_grid()
    worst = 0.0
    for z in zs:
        s_scalar = solve_alpha(problem, z).alpha_principal
        s_matrix = matrix_k1_oracle(spec, z, tol=1e-12)
        diff = abs(s_scalar - s_matrix)
        worst = max(worst, diff)
        print(f"z={z:.6g} |solve_alpha - matrix_k1_oracle| = {diff:.3e}")
    if worst > 1e-8:
        print(f"FAIL: worst disagreement {worst:.3e} exceeds 1e-08")
        return EXIT_ORACLE
    print(f"OK: worst disagreement {worst:.3e}")
    return EXIT_OK


def cmd_conditions(cfg: RunConfig) -> int:
    report = girko_conditions(cfg.spec())
    print(f"mean_row_sum={report.mean_row_sum:.17g}")
    print(f"variance_row_sum={report.variance_row_sum:.17g}")
    print(f"max_entry_bound={report.max_entry_bound:.17g}")
    print(f"min_scaled_variance={report.min_scaled_variance:.17g}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="percolattice",
        description="Deterministic-equivalent spectra of percolated lattice graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("solve", "deterministic CDF/density curves via the canonical system"),
        ("simulate", "Monte Carlo empirical CDF/density curves"),
        ("compare", "both pipelines on a shared grid, plus distances"),
        ("oracle", "scalar solver vs matrix-level canonical iteration"),
        ("conditions", "applicability condition values"),
    ):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        if name == "oracle":
            p.add_argument("--z", help="comma-separated complex points, e.g. 0.2+0.7i")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _load_config(args)
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "compare":
            return cmd_compare(cfg)
        if args.command == "oracle":
            zs = _parse_z_list(args.z) if args.z else None
            return cmd_oracle(cfg, zs)
        if args.command == "conditions":
            return cmd_conditions(cfg)
        raise ConfigError(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SizeLimitError as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OracleError as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except ValueError as exc:
        # size rejections from the eigensolve path carry plain ValueError
        if "eigensolve refused" in str(exc):
            print(f"size limit: {exc}", file=sys.stderr)
            return EXIT_SIZE
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
