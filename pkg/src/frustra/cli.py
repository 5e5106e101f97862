"""Command-line front end: analyze / sweep / xy-scan / monogamy.

Exit codes: 0 success, 1 usage or input error, 2 numerical or tolerance
failure, 3 conjecture violation found.  All outputs are deterministic
functions of (inputs, flags, seed); the FRUSTRA_SEED environment
variable overrides --seed when set.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import correlations, eigen, harness, metrics, xychain
from .errors import NumericalError, ValidationError
from .model import build_hamiltonian, load_model

MONOGAMY_TOL = 1e-3

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VIOLATION = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the exit-code contract wants 1."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frustra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[], help="classify a model file as FF/INES/NON_INES")
    p.add_argument("model_file")
    p.add_argument("--state", default="mmgs",
                   help="mmgs | index:k | superpose:a,b (complex coefficients)")
    p.add_argument("--tol-degeneracy", type=float, default=eigen.DEGENERACY_TOL)
    p.add_argument("--tol-equality", type=float, default=metrics.EQUALITY_TOL)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="random-model conjecture sweep")
    p.add_argument("--class", dest="model_class", required=True,
                   choices=["xyz", "xxz", "xxx"])
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--homogeneous", action="store_true")
    p.add_argument("--no-gauge", action="store_true")
    p.add_argument("--no-pt", action="store_true")
    p.add_argument("--single-axis-gauge", action="store_true",
                   help="one parity axis per model instead of per site")
    p.add_argument("--inject-geometric", action="store_true",
                   help="negative control: slot 0 becomes a geometrically frustrated triangle")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("xy-scan", help="thermodynamic-limit XY chain scan")
    p.add_argument("--gamma-from", type=float, required=True)
    p.add_argument("--gamma-to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_xy_scan)

    p = sub.add_parser("monogamy", help="monogamy residuals on random tripartite states")
    p.add_argument("--dims", required=True, help="dS,dR,dA (product <= 64)")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=32)
    p.set_defaults(func=cmd_monogamy)

    return parser


def _seed_from_env(seed: int) -> int:
    env = os.environ.get("FRUSTRA_SEED")
    return int(env) if env else seed


def _emit(lines) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def cmd_analyze(args) -> int:
    model = load_model(args.model_file)
    rho = None
    scope = None
    state = args.state.strip()
    if state != "mmgs":
        H = build_hamiltonian(model)
        gs = eigen.ground_space(H, tol=args.tol_degeneracy)
        if state.startswith("index:"):
            k = int(state.split(":", 1)[1])
            if not 0 <= k < gs.degeneracy:
                raise ValidationError(f"state index {k} out of range, d_G={gs.degeneracy}")
            psi = gs.basis[:, k]
        elif state.startswith("superpose:"):
            parts = state.split(":", 1)[1].split(",")
            if len(parts) != 2:
                raise ValidationError("superpose needs two coefficients a,b")
            a, b = complex(parts[0]), complex(parts[1])
            if gs.degeneracy < 2:
                raise ValidationError("superpose needs a degenerate ground space")
            psi = a * gs.basis[:, 0] + b * gs.basis[:, 1]
            psi = psi / np.linalg.norm(psi)
        else:
            raise ValidationError(f"unknown --state {args.state!r}")
        rho = np.outer(psi, psi.conj())
        scope = f"local:{state}"
    result = metrics.analyze_state(
        model, rho, tol_eq=args.tol_equality, tol_degeneracy=args.tol_degeneracy, scope=scope
    )
    lines = [metrics.CSV_HEADER]
    lines.extend(r.csv_row() for r in result.records)
    lines.append(f"verdict={result.verdict} scope={result.scope.split(':')[0]}")
    _emit(lines)
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = harness.SweepConfig(
        model_class=args.model_class,
        sites=args.sites,
        count=args.count,
        seed=_seed_from_env(args.seed),
        homogeneous=args.homogeneous,
        apply_gauges=not args.no_gauge,
        apply_pt=not args.no_pt,
        single_axis_gauge=args.single_axis_gauge,
        inject_geometric=args.inject_geometric,
    )
    report = harness.sweep(config, jobs=args.jobs)
    _emit(report.csv_lines())
    return EXIT_VIOLATION if report.rejected else EXIT_OK


def cmd_xy_scan(args) -> int:
    points = xychain.scan(args.gamma_from, args.gamma_to, args.steps)
    lines = [xychain.CSV_HEADER]
    lines.extend(p.csv_row() for p in points)
    _emit(lines)
    return EXIT_OK


def cmd_monogamy(args) -> int:
    dims = tuple(int(x) for x in args.dims.split(","))
    if len(dims) != 3 or any(d < 1 for d in dims):
        raise ValidationError(f"--dims needs three positive integers, got {args.dims!r}")
    if int(np.prod(dims)) > 64:
        raise ValidationError(f"dims product {np.prod(dims)} exceeds 64")
    if args.trials < 1:
        raise ValidationError("--trials must be >= 1")
    seed = _seed_from_env(args.seed)
    config = correlations.OptimizerConfig(restarts=args.restarts, seed=seed)
    lines = ["trial,epsilon,E,C,residual"]
    worst = 0.0
    for t in range(args.trials):
        rng = np.random.default_rng([seed, t])
        puri = correlations.random_tripartite(dims, rng)
        rep = correlations.monogamy_residual(puri, d=1, config_e=config)
        worst = max(worst, abs(rep.residual))
        lines.append(
            f"{t},{rep.epsilon:.12g},{rep.roof:.12g},{rep.classical:.12g},{rep.residual:.12g}"
        )
    lines.append(f"max_abs_residual,{worst:.12g}")
    _emit(lines)
    return EXIT_NUMERICAL if worst > MONOGAMY_TOL else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        sys.stderr.write(f"frustra: {exc}\n")
        return EXIT_USAGE
    except NumericalError as exc:
        sys.stderr.write(f"frustra: numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except FileNotFoundError as exc:
        sys.stderr.write(f"frustra: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
