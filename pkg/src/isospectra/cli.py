"""Command line front end.

Five subcommands: ``curve`` (u, beta, s tables), ``spectrum`` (density
profiles and deformation functions), ``gas`` (Metropolis sampling runs),
``haar`` (unconstrained Gaussian draws) and ``transitions`` (branch point
detection).  Every run writes its artifacts plus a JSON manifest recording
the command, parameters, seed, artifact list, package version and wall
time.  Exit codes: 0 success, 2 invalid input, 3 quality gate failure under
--strict.  Data artifacts are byte identical across reruns with equal
inputs; the manifest differs only in its duration field.
"""

import argparse
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._io import write_csv, write_json
from .analytic_spectra import (U_CRITICAL, U_EVAPORATION, beta_of_u,
                               entropy_density_s, evaporated_spectrum,
                               mp_density, phase_of_u, sigma, u_of_beta)
from .coulomb_gas import (ChainConfig, empirical_spectrum, parse_chain_config,
                          run_chain, write_samples_csv)
from .empirics import Histogram, l1_distance, summarize
from .haar_ensemble import sample_spectra
from .quadrature import deformation_g, deformation_g_tilde
from .transitions import detect_transitions

SEED_ENV = "ISOSPECTRA_SEED"


def _env_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError("%s must be an integer, got %r" % (SEED_ENV, raw))


def _resolve_seed(flag_value, default=0):
    if flag_value is not None:
        return int(flag_value)
    env = _env_seed()
    return env if env is not None else default


def _parse_range(text):
    """LO:HI:COUNT (or LO:HI with 101 points, or a single value)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2]) if len(parts) == 3 else 101
    except (ValueError, IndexError):
        raise ValueError("range must be LO:HI:COUNT, got %r" % text)
    if len(parts) > 3:
        raise ValueError("range must be LO:HI:COUNT, got %r" % text)
    if count < 1:
        raise ValueError("grid is empty (count = %d)" % count)
    if hi < lo:
        raise ValueError("range must be increasing")
    return np.linspace(lo, hi, count)


def _manifest(path, command, params, seed, artifacts, t0):
    write_json(path, {
        "command": command,
        "parameters": params,
        "seed": seed,
        "artifacts": [str(a) for a in artifacts],
        "version": __version__,
        "duration_seconds": round(time.monotonic() - t0, 3),
    })


def _phase_label(u):
    if abs(u - U_CRITICAL) < 1e-9:
        return "boundary_gapped_gapless"
    if abs(u - U_EVAPORATION) < 1e-9:
        return "boundary_gapless_evaporated"
    return phase_of_u(u).value


def cmd_curve(args):
    t0 = time.monotonic()
    if (args.u is None) == (args.beta is None):
        raise ValueError("provide exactly one of --u or --beta")
    n_dim = args.n_dim
    log_n = math.log(n_dim)
    rows = []
    if args.u is not None:
        for u in _parse_range(args.u):
            u = float(u)
            if u <= 0.0:
                raise ValueError("u grid must stay positive (s diverges at u = 0)")
            if u > log_n:
                raise ValueError("u = %g exceeds ln(n_dim) = %g" % (u, log_n))
            s = entropy_density_s(u, n_dim)
            beta = beta_of_u(u) if u <= U_EVAPORATION else float("nan")
            rows.append((u, beta, s, n_dim * n_dim * s, _phase_label(u)))
    else:
        for beta in _parse_range(args.beta):
            beta = float(beta)
            u = u_of_beta(beta)
            s = entropy_density_s(u, n_dim)
            rows.append((u, beta, s, n_dim * n_dim * s, _phase_label(u)))
    out = Path(args.out)
    write_csv(out, ["u", "beta", "s", "n2_s", "phase"], rows)
    _manifest(out.with_suffix(out.suffix + ".manifest.json"), "curve",
              {"u": args.u, "beta": args.beta, "n_dim": n_dim},
              None, [out], t0)
    return 0


def cmd_spectrum(args):
    t0 = time.monotonic()
    points = int(args.points)
    if points < 1:
        raise ValueError("need at least one grid point")
    out = Path(args.out)
    if args.deformation is not None:
        xs = -1.0 + 2.0 * (np.arange(1, points + 1) - 0.5) / points
        if args.deformation == "gtilde":
            vals = deformation_g_tilde(xs)
        else:
            try:
                eta = float(args.deformation)
            except ValueError:
                raise ValueError("--deformation takes 'gtilde' or a numeric eta >= 1")
            vals = deformation_g(xs, eta)
        write_csv(out, ["x", "value"], zip(xs, vals))
        _manifest(out.with_suffix(out.suffix + ".manifest.json"), "spectrum",
                  {"deformation": args.deformation, "points": points},
                  None, [out], t0)
        return 0
    if (args.beta is None) == (args.u is None):
        raise ValueError("provide exactly one of --beta, --u or --deformation")
    if args.beta is not None:
        density = sigma(args.beta)
        kind = "bulk"
    else:
        u = float(args.u)
        if u <= 0.0:
            raise ValueError("u must be positive")
        if u <= U_EVAPORATION:
            density = sigma(beta_of_u(u))
            kind = "bulk"
        else:
            density = evaporated_spectrum(u, args.n_dim)
            kind = "sea"
    a, b = density.support.a, density.support.b
    lam = a + (b - a) * (np.arange(1, points + 1) - 0.5) / points
    vals = np.atleast_1d(density.eval(lam))
    rows = [(kind, float(l), float(v)) for l, v in zip(lam, vals)]
    if density.atom is not None:
        rows.append(("atom", density.atom.position, density.atom.weight))
    write_csv(out, ["kind", "lambda", "sigma"], rows)
    _manifest(out.with_suffix(out.suffix + ".manifest.json"), "spectrum",
              {"beta": args.beta, "u": args.u, "n_dim": args.n_dim,
               "points": points, "rescaling": density.rescaling},
              None, [out], t0)
    return 0


def cmd_gas(args):
    t0 = time.monotonic()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    overrides = {"beta": args.beta, "n_dim": args.n_dim, "steps": args.steps,
                 "burn_in": args.burn_in, "thinning": args.thin, "seed": args.seed}
    env = _env_seed()
    defaults = {"seed": env} if env is not None else None
    if args.config is not None:
        config = parse_chain_config(args.config, defaults=defaults, **overrides)
    else:
        if args.beta is None or args.n_dim is None:
            raise ValueError("without --config, --beta and --n-dim are required")
        kw = {k: v for k, v in overrides.items() if v is not None}
        if "seed" not in kw and env is not None:
            kw["seed"] = env
        config = ChainConfig(**kw)
    result = run_chain(config)
    samples_path = out / "samples.csv"
    write_samples_csv(samples_path, result)
    density = sigma(config.beta)
    hist = empirical_spectrum(result, bins=40, upper=1.05 * density.support.b)
    stats = summarize(result)
    stats.update({
        "beta": config.beta, "seed": config.seed, "steps": config.steps,
        "burn_in": config.burn_in, "thinning": config.thinning,
        "l1_vs_analytic": l1_distance(hist, density),
        "move_scale_used": result.move_scale_used,
        "mistuned": result.mistuned,
        "max_sum_drift": result.max_sum_drift,
        "max_logw_drift": result.max_logw_drift,
    })
    summary_path = out / "summary.json"
    write_json(summary_path, stats)
    _manifest(out / "manifest.json", "gas",
              {"config": args.config, "beta": config.beta, "n_dim": config.n_dim,
               "steps": config.steps, "burn_in": config.burn_in,
               "thinning": config.thinning},
              config.seed, [samples_path, summary_path], t0)
    if args.strict and result.mistuned:
        print("gas chain mistuned (acceptance %.3f); failing under --strict"
              % result.acceptance_rate, file=sys.stderr)
        return 3
    return 0


def cmd_haar(args):
    t0 = time.monotonic()
    if args.n_dim < 2:
        raise ValueError("n_dim must be at least 2")
    if args.draws < 1:
        raise ValueError("need at least one draw")
    seed = _resolve_seed(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    spectra = sample_spectra(args.n_dim, args.draws, rng)
    spectra_path = out / "spectra.csv"
    write_csv(spectra_path,
              ["lambda_%d" % (k + 1) for k in range(args.n_dim)], spectra)
    page = math.log(args.n_dim) - 0.5
    hist = Histogram.from_samples(spectra.ravel() * args.n_dim,
                                  bins=40, lo=0.0, hi=4.2)
    stats = summarize(spectra)
    stats.update({
        "draws": int(args.draws), "seed": seed,
        "page_mean_reference": page,
        "page_deviation": stats["mean_entropy"] - page,
        "l1_vs_mp": l1_distance(hist, mp_density()),
    })
    summary_path = out / "summary.json"
    write_json(summary_path, stats)
    _manifest(out / "manifest.json", "haar",
              {"n_dim": args.n_dim, "draws": args.draws},
              seed, [spectra_path, summary_path], t0)
    return 0


def cmd_transitions(args):
    t0 = time.monotonic()
    report = detect_transitions(args.n_dim)
    payload = {
        "n_dim": int(args.n_dim),
        "u_c": report.u_c,
        "detected": [{"u_star": u, "order": k} for u, k in report.detected],
        "table": [{"u_star": r.u_star, "order": r.order, "left": r.left,
                   "right": r.right, "jump": r.jump, "noise": r.noise,
                   "flagged": r.flagged} for r in report.table],
    }
    out = Path(args.out)
    write_json(out, payload)
    _manifest(out.with_suffix(out.suffix + ".manifest.json"), "transitions",
              {"n_dim": args.n_dim}, None, [out], t0)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="isospectra",
        description="Typical entanglement spectra at fixed entropy: tables, "
                    "densities, sampling and transition detection.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="tabulate u, beta, s and N^2 s over a grid")
    p.add_argument("--u", help="entropy deficit grid LO:HI:COUNT")
    p.add_argument("--beta", help="multiplier grid LO:HI:COUNT")
    p.add_argument("--n-dim", type=int, default=50)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("spectrum", help="tabulate a spectral density or deformation function")
    p.add_argument("--beta", type=float)
    p.add_argument("--u", type=float)
    p.add_argument("--n-dim", type=int, default=50)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--deformation", metavar="ETA|gtilde",
                   help="emit the deformation function instead of a density")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("gas", help="run the Metropolis gas sampler")
    p.add_argument("--config", help="key=value chain config file")
    p.add_argument("--beta", type=float)
    p.add_argument("--n-dim", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--thin", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--strict", action="store_true",
                   help="exit 3 when the chain reports itself mistuned")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gas)

    p = sub.add_parser("haar", help="draw unconstrained Gaussian spectra")
    p.add_argument("--n-dim", type=int, required=True)
    p.add_argument("--draws", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_haar)

    p = sub.add_parser("transitions", help="scan s(u) for derivative jumps")
    p.add_argument("--n-dim", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_transitions)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
