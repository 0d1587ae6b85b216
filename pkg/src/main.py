import os
import sys
import argparse
from pathlib import Path

import numpy as np
import pandas as pd
import yaml

from .curves import corpus, read_curve, write_curve
from .energy import EnergyQuadrature, evaluate_energy, variation_pairing
from .flow import FlowConfig, FlowStatus, run_flow
from .gradient import Truncation, h_gamma
from .majorants import (
    analyticity_fit,
    derivative_ladder,
    dominance_check,
    fit_majorant_params,
    fourier_decay,
    majorant_sequence,
)
from .spectral import BhtQuery, bht, bht_constants, bound_check, build_table
from .utils import config, logger
from .utils.errors import FlowError, MoebiusError
from .utils.logger import LEVEL_ENV, set_level
from .utils.output import dumps, write_csv, write_json


def emit(payload):
    print(dumps(payload))


def run_energy(args, command):
    curve = read_curve(args.input)
    quad = EnergyQuadrature.from_config(args.n)
    if args.diagonal_rule:
        quad = EnergyQuadrature(quad.n_outer, quad.n_inner, args.diagonal_rule)
    report = evaluate_energy(curve, quad)
    logger.info(f"{report}")
    emit(report.to_dict())


def run_gradient(args, command):
    curve = read_curve(args.input)
    n = args.n or int(config.get("gradient", "n_samples"))
    trunc = Truncation.from_grid(args.eps_cells or int(config.get("gradient", "eps_cells")), n)
    report = h_gamma(curve, trunc, args.method, n)
    logger.info(f"{report}")
    summary = report.summary()
    if args.pair:
        summary["first_variation"] = variation_pairing(report.h, read_curve(args.pair))
    if args.out:
        write_csv(args.out, report.to_frame(), command)
    emit(summary)


def run_lambda(args, command):
    table = build_table(args.max_k, args.prefactor)
    if args.out:
        write_csv(args.out, table.to_frame(), command)
    emit({"max_k": table.max_k, "prefactor": table.prefactor, "c_tilde": table.c_tilde,
          "lambda_min": float(np.min(table.lam)), "lambda_max": float(np.max(table.lam)),
          "all_positive": bool(np.all(table.lam > 0))})


def run_bht(args, command):
    f, g = read_curve(args.f), read_curve(args.g)
    query = BhtQuery(args.s1, args.s2, args.eps, args.method or config.get_or("spectral", "bht", "method"))
    result = bht(f, g, query, args.n)
    bound = bound_check(f, g, query, bht_constants(args.m), args.n)
    if args.out:
        k = result.wavenumbers
        frame = pd.DataFrame({"k": k, "re": result.coeffs[:, 0].real, "im": result.coeffs[:, 0].imag})
        write_csv(args.out, frame, command)
    emit({"method": query.method.value, "s1": query.s1, "s2": query.s2, "eps": query.eps,
          "max_freq": result.max_freq, "bound": bound.to_dict()})


def run_flow_command(args, command):
    curve = read_curve(args.input)
    cfg = FlowConfig.from_config(max_steps=args.steps, tau=args.tau, scheme=args.scheme)
    result = run_flow(curve, cfg, args.out, command)
    if result.status is FlowStatus.TAU_UNDERFLOW:
        raise FlowError("time step underflowed before convergence",
                        {"step": result.state.step, "energy": result.state.energy})
    emit({key: result.diagnostics[key] for key in ("status", "steps", "energy", "residual", "analytic_signature")})


def run_diagnose(args, command):
    curve = read_curve(args.input)
    ladder = derivative_ladder(curve, args.order)
    params = fit_majorant_params(ladder)
    majorants = majorant_sequence(params, args.order)
    dominance = dominance_check(ladder, majorants)
    fit = analyticity_fit(ladder.a)
    decay = fourier_decay(curve)

    summary = {"params": params.to_dict(), "dominance": dominance.to_dict(), "ladder_fit": fit.to_dict(),
               "decay": decay.to_dict()}
    if args.out:
        out = Path(args.out)
        frame = ladder.to_frame().assign(a_tilde=majorants, ratio=dominance.ratios, C=params.C,
                                         r_gamma=params.r_gamma, a0=params.a0)
        write_csv(out / "ladder.csv", frame, command)
        write_csv(out / "decay.csv", decay.to_frame(curve).assign(slope=decay.slope), command)
        write_json(out / "diagnose.json", summary, command)
    emit(summary)


def run_selftest_command(args, command):
    from .selftest import results_frame, run_selftest
    results = run_selftest(args.seed)
    frame = results_frame(results)
    print(frame.to_string(index=False))
    failed = int((~frame["passed"]).sum())
    logger.info(f"Selftest: {len(results) - failed} passed, {failed} failed")
    return 1 if failed else 0


def run_corpus(args, command):
    out = Path(args.out)
    seed = args.seed if args.seed is not None else int(config.get_or(12345, "runtime", "seed"))
    curves = {
        "circle": corpus.unit_circle(),
        "ellipse": corpus.ellipse(),
        "nonuniform_circle": corpus.nonuniform_circle(),
        "perturbed_circle": corpus.perturbed_circle(0.05, 2),
        "spatial_circle": corpus.perturbed_circle(0.04, 2, dim=3, lift=0.02),
        "trefoil": corpus.trefoil(),
        "random": corpus.random_curve(seed),
    }
    paths = {name: str(write_curve(curve, out / f"{name}.json", command)) for name, curve in curves.items()}
    logger.info(f"Wrote {len(paths)} curves to {out}")
    emit({"curves": paths})


def _prefactor(value):
    try:
        return float(value)
    except ValueError:
        return value


def build_parser():
    parser = argparse.ArgumentParser(description='Moebius energy analyticity toolkit')
    parser.add_argument('--config', help='Path to config.yaml (overrides MOEBIUS_CONFIG)')
    parser.add_argument('--seed', type=int, help='Seed for randomized suites and corpus curves')
    parser.add_argument('--verbose', action='store_true', help='Debug logging')
    parser.add_argument('--quiet', action='store_true', help='Warnings and errors only')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('energy', help='Moebius energy of a curve')
    p.add_argument('--in', dest='input', required=True, help='Curve JSON file')
    p.add_argument('--n', type=int, help='Grid size in both variables')
    p.add_argument('--diagonal-rule', choices=['taylor_limit', 'skip_cell'])
    p.set_defaults(handler=run_energy)

    p = sub.add_parser('gradient', help='Decomposition H = P(Q + R1 + R2) on a grid')
    p.add_argument('--in', dest='input', required=True, help='Unit-speed curve JSON file')
    p.add_argument('--n', type=int, help='Grid size')
    p.add_argument('--eps-cells', type=int, help='Truncation eps = cells / n')
    p.add_argument('--method', choices=['direct', 'spectral_q', 'kernel_form'], default='direct')
    p.add_argument('--pair', help='Curve JSON used as variation direction h')
    p.add_argument('--out', help='CSV output file')
    p.set_defaults(handler=run_gradient)

    p = sub.add_parser('lambda', help='Multiplier constants lambda_k')
    p.add_argument('--max-k', type=int, required=True)
    p.add_argument('--prefactor', type=_prefactor, help="'consistent', 'printed' or a number")
    p.add_argument('--out', help='CSV output file')
    p.set_defaults(handler=run_lambda)

    p = sub.add_parser('bht', help='Truncated bilinear Hilbert transform of two scalar functions')
    p.add_argument('--f', required=True, help='Scalar curve JSON file')
    p.add_argument('--g', required=True, help='Scalar curve JSON file')
    p.add_argument('--s1', type=float, required=True)
    p.add_argument('--s2', type=float, required=True)
    p.add_argument('--eps', type=float, required=True)
    p.add_argument('--method', choices=['spectral', 'direct'])
    p.add_argument('--m', type=float, help='Sobolev order of the bound check')
    p.add_argument('--n', type=int, help='Grid size of the direct path')
    p.add_argument('--out', help='CSV output file')
    p.set_defaults(handler=run_bht)

    p = sub.add_parser('flow', help='Gradient flow towards a critical curve')
    p.add_argument('--in', dest='input', required=True, help='Curve JSON file')
    p.add_argument('--steps', type=int, help='Maximum number of steps')
    p.add_argument('--tau', type=float, help='Initial time step')
    p.add_argument('--scheme', choices=['semi_implicit', 'explicit'])
    p.add_argument('--out', required=True, help='Output directory')
    p.set_defaults(handler=run_flow_command)

    p = sub.add_parser('diagnose', help='Derivative ladder, majorants and Fourier decay of a curve')
    p.add_argument('--in', dest='input', required=True, help='Curve JSON file')
    p.add_argument('--order', type=int, default=8, help='Highest derivative order l')
    p.add_argument('--out', help='Output directory')
    p.set_defaults(handler=run_diagnose)

    p = sub.add_parser('selftest', help='Run the identity suites')
    p.set_defaults(handler=run_selftest_command)

    p = sub.add_parser('corpus', help='Write the example curves as JSON')
    p.add_argument('--out', required=True, help='Output directory')
    p.set_defaults(handler=run_corpus)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.config:
        try:
            config.reload(args.config)
        except (OSError, yaml.YAMLError) as e:
            parser.error(f"cannot load config {args.config}: {e}")
    if args.seed is not None:
        config.set(args.seed, "runtime", "seed")
    if args.verbose:
        set_level("DEBUG")
    elif args.quiet:
        set_level("WARNING")
    else:
        set_level(os.getenv(LEVEL_ENV) or config.get_or("INFO", "runtime", "log_level"))

    try:
        status = args.handler(args, argv)
    except MoebiusError as e:
        logger.error(f"{args.command} failed ({e.category}): {e}")
        emit(e.to_dict())
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
