"""Command-line interface.

Subcommands: simulate, sample-ensemble, ldlr, detect, power, md-count,
bounds, suite, phase-diagram.  Exit codes: 0 success, 1 a suite assertion
failed, 2 configuration error.  The environment variable
``GROUPSYNCH_BUDGET`` overrides the default enumeration budget.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bounds as bounds_mod
from . import ldlr as ldlr_mod
from .detect import (DetectorConfig, calibrate_threshold, detect as run_detect,
                     power_curve)
from . import models as models_mod
from .ensembles import EnsembleKind, sample
from .errors import ConfigError, GroupsynchError
from .experiments import ExperimentConfig, run, write_csv
from .groups import build_catalog

EXIT_OK = 0
EXIT_ASSERT = 1
EXIT_CONFIG = 2


def _budget(default: int = ldlr_mod.DEFAULT_BUDGET) -> int:
    return int(os.environ.get("GROUPSYNCH_BUDGET", default))


def _matrix_to_json(m: np.ndarray):
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data])


def _obs_to_json(obs: models_mod.SynchObservation) -> dict:
    return {
        "model": obs.model,
        "n": obs.n,
        "seed": obs.seed,
        "freqs": [{
            "label": f.label, "snr": f.snr, "dim": f.dim, "type": f.type_tag,
            "matrix": _matrix_to_json(f.matrix),
        } for f in obs.freqs],
    }


def _obs_from_json(data) -> models_mod.SynchObservation:
    freqs = tuple(
        models_mod.FrequencyObservation(
            _matrix_from_json(f["matrix"]), f["snr"], f["dim"], f["type"], f["label"])
        for f in data["freqs"])
    return models_mod.SynchObservation(freqs, data["model"], data["n"],
                                       data.get("seed"))


def _write_json(path, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path in (None, "-"):
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _parse_model(args) -> models_mod.Model:
    snr = args.snr[0] if len(args.snr) == 1 else 0.0
    if args.model == "circle":
        return models_mod.Model("circle", L=args.L, snr=snr)
    if args.model == "cyclic":
        return models_mod.Model("cyclic", L=args.L, snr=snr)
    group, full = build_catalog(args.group)
    return models_mod.Model("group", snr=snr, group=group,
                            irreps=full.nonredundant())


def _cmd_simulate(args) -> int:
    if args.model == "circle":
        obs = models_mod.sample_gsynch_circle(args.L, args.snr, args.n, args.seed)
    elif args.model == "cyclic":
        lam = args.snr if len(args.snr) > 1 else args.snr[0]
        obs = models_mod.sample_gsynch_cyclic(args.L, lam, args.n, args.seed)
    else:
        group, full = build_catalog(args.group)
        lam = args.snr if len(args.snr) > 1 else args.snr[0]
        obs = models_mod.sample_gsynch_group(group, full.nonredundant(), lam,
                                             args.n, args.seed)
    _write_json(args.out, _obs_to_json(obs))
    return EXIT_OK


def _cmd_sample_ensemble(args) -> int:
    noise = sample(EnsembleKind(args.kind, args.n), args.seed)
    _write_json(args.out, {
        "kind": args.kind, "n": args.n, "seed": args.seed,
        "matrix": _matrix_to_json(noise.entries),
    })
    return EXIT_OK


def _cmd_ldlr(args) -> int:
    budget = _budget()
    if args.prior == "circle" and args.method in ("exact", "brute"):
        raise ConfigError("prior", "count-based routes cover the cyclic prior; "
                                   "use --method md or mc for the circle prior")
    if args.method == "exact":
        rep = ldlr_mod.ldlr_exact_multinomial(args.L, args.n, args.snr, args.D,
                                              exact=args.rational,
                                              statistic=args.statistic,
                                              budget=budget)
    elif args.method == "brute":
        rep = ldlr_mod.ldlr_bruteforce_signals(args.L, args.n, args.snr, args.D,
                                               exact=args.rational,
                                               statistic=args.statistic,
                                               budget=budget)
    elif args.method == "md":
        rep = ldlr_mod.ldlr_from_md(args.prior, args.L, args.n, args.snr, args.D,
                                    exact=args.rational,
                                    budget=_budget(ldlr_mod.MD_BUDGET))
    else:
        model = models_mod.Model(args.prior if args.prior != "circle" else "circle",
                                 L=args.L, snr=args.snr)
        rep = ldlr_mod.ldlr_montecarlo_overlap(model, args.n, args.D,
                                               args.samples, seed=args.seed)
    payload = {
        "params": rep.params, "method": rep.method,
        "terms": [float(t) for t in rep.terms],
        "cumulative": float(rep.cumulative),
    }
    if rep.stderr is not None:
        payload["stderr"] = list(rep.stderr)
    _write_json(args.out, payload)
    if args.csv:
        rows = [{"d": d, "term": float(t)} for d, t in enumerate(rep.terms)]
        write_csv(args.csv, rows, columns=["d", "term"])
    return EXIT_OK


def _cmd_md_count(args) -> int:
    counts = [ldlr_mod.md_count(args.prior, args.L, args.n, d,
                                _budget(ldlr_mod.MD_BUDGET))
              for d in range(args.D + 1)]
    _write_json(args.out, {"prior": args.prior, "L": args.L, "n": args.n,
                           "counts": counts})
    return EXIT_OK


def _cmd_detect(args) -> int:
    with open(args.infile) as fh:
        obs = _obs_from_json(json.load(fh))
    model_name = obs.model.split("(")[0]
    if model_name == "circle":
        model = models_mod.Model("circle", L=len(obs.freqs), snr=0.0)
    elif model_name == "cyclic":
        L = int(obs.model.split("L=")[1].rstrip(")"))
        model = models_mod.Model("cyclic", L=L, snr=0.0)
    else:
        raise ConfigError("in", f"cannot rebuild a null model for {obs.model!r}; "
                                "group observations need library-level calibration")
    config = DetectorConfig(alpha=args.alpha,
                                       calibration_trials=args.calib_trials)
    threshold = calibrate_threshold(model, obs.n, config, seed=args.seed)
    verdict = run_detect(obs, threshold)
    _write_json(args.out, {
        "label": verdict.label,
        "threshold": verdict.threshold,
        "per_frequency": list(verdict.per_frequency),
        "alpha": args.alpha,
    })
    return EXIT_OK


def _cmd_power(args) -> int:
    model = _parse_model(args)
    config = DetectorConfig(alpha=args.alpha,
                                       calibration_trials=args.calib_trials)
    rows = power_curve(model, args.n, _parse_grid(args.snr_grid),
                                  args.trials, config, seed=args.seed)
    if args.out and args.out.endswith(".csv"):
        write_csv(args.out, rows)
    else:
        _write_json(args.out, rows)
    return EXIT_OK


def _parse_grid(spec: str):
    if ":" in spec:
        a, b, step = (float(x) for x in spec.split(":"))
        return [round(a + i * step, 12) for i in range(int((b - a) / step + 1.5))
                if a + i * step <= b + 1e-12]
    return [float(x) for x in spec.split(",")]


def _cmd_bounds(args) -> int:
    failures = []
    if args.which in ("clt", "all"):
        res = bounds_mod.check_clt_moment_bound(
            ("bernoulli", args.p) if args.distribution == "bernoulli"
            else "rademacher", args.n, args.alpha)
        print(f"clt-moment: lhs={res.lhs:.6g} rhs={res.rhs:.6g} "
              f"holds={res.holds}")
        if not res.holds:
            failures.append("clt")
    if args.which in ("t-recursion", "all"):
        res = bounds_mod.check_t_recursion(args.L, args.n, args.k,
                                           args.alpha_vec, args.gamma)
        print(f"t-recursion: worst lhs={res.lhs:.6g} rhs={res.rhs:.6g} "
              f"holds={res.holds} witness={res.detail['worst_tuple']}")
        if not res.holds:
            failures.append("t-recursion")
    if args.which in ("l3", "all"):
        for res in bounds_mod.check_l3_moment_bound(args.n, args.dmax):
            print(f"l3-moment d={res.detail['d']}: lhs={res.lhs:.6g} "
                  f"rhs={res.rhs:.6g} holds={res.holds}")
            if not res.holds:
                failures.append(f"l3:d={res.detail['d']}")
    return EXIT_OK if not failures else EXIT_ASSERT


def _cmd_suite(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
        override = {}
        if args.seed is not None:
            override["seed"] = args.seed
        if override or args.csv or args.manifest:
            data = cfg.canonical()
            data.update(override)
            data["out"] = {"csv": args.csv or cfg.out_csv,
                           "manifest": args.manifest or cfg.out_manifest}
            cfg = ExperimentConfig.from_dict(data)
    else:
        cfg = ExperimentConfig.from_dict({
            "kind": args.kind, "seed": args.seed if args.seed is not None else 0,
            "out": {"csv": args.csv, "manifest": args.manifest},
        })
    result = run(cfg)
    for failure in result.failures:
        print(f"FAIL {failure}", file=sys.stderr)
    print(f"{cfg.kind}: {len(result.rows)} rows, "
          f"{len(result.failures)} failures, hash {cfg.hash()}")
    return result.exit_code


def _cmd_phase_diagram(args) -> int:
    cfg = ExperimentConfig.from_dict({
        "kind": "phase-diagram",
        "seed": args.seed,
        "params": {"L_grid": [int(x) for x in args.L_grid.split(",")],
                   "snr_grid": _parse_grid(args.snr_grid),
                   "n": args.n, "trials": args.trials},
        "out": {"csv": args.out, "manifest": args.manifest},
    })
    result = run(cfg)
    print(f"phase-diagram: {len(result.rows)} rows -> {args.out}")
    return result.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupsynch",
        description="Multi-frequency synchronization models, LDLR second "
                    "moments, and spectral detection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample a synchronization observation")
    p.add_argument("--model", choices=("circle", "cyclic", "group"), required=True)
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--group", default="dihedral(3)",
                   help="catalog name for --model group")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="snr", type=lambda s: [float(x) for x in s.split(",")],
                   default=[1.0], help="signal strength, scalar or csv per frequency")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sample-ensemble", help="sample a Gaussian Hermitian matrix")
    p.add_argument("--kind", choices=("GOE", "GUE", "GSE"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_sample_ensemble)

    p = sub.add_parser("ldlr", help="degree-D likelihood-ratio second moment")
    p.add_argument("--method", choices=("exact", "brute", "md", "mc"), required=True)
    p.add_argument("--prior", choices=("circle", "cyclic"), default="cyclic")
    p.add_argument("--statistic", choices=("pearson", "all_frequencies"),
                   default="pearson")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="snr", type=float, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--rational", action="store_true")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--csv", default=None, help="also write the term table as CSV")
    p.set_defaults(func=_cmd_ldlr)

    p = sub.add_parser("md-count", help="zero-sum tuple-family cardinalities")
    p.add_argument("--prior", choices=("circle", "cyclic"), required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_md_count)

    p = sub.add_parser("detect", help="spectral test on a stored observation")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--calib-trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("power", help="empirical power over a signal-strength grid")
    p.add_argument("--model", choices=("circle", "cyclic", "group"), required=True)
    p.add_argument("--L", type=int, default=1)
    p.add_argument("--group", default="dihedral(3)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda-grid", dest="snr_grid", required=True,
                   help="a:b:step or comma-separated values")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--calib-trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help=".csv path or JSON to stdout")
    p.set_defaults(func=_cmd_power, snr=[0.0])

    p = sub.add_parser("bounds", help="run one of the moment-inequality checks")
    p.add_argument("--which", choices=("clt", "t-recursion", "l3", "all"),
                   default="all")
    p.add_argument("--distribution", choices=("rademacher", "bernoulli"),
                   default="rademacher")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--L", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--alpha-vec", type=lambda s: [float(x) for x in s.split(",")],
                   default=[1.0, 1.0])
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--dmax", type=int, default=5)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("suite", help="run a configured experiment suite")
    p.add_argument("--config", default=None, help="JSON config path")
    p.add_argument("--kind", choices=("oracle-suite", "bound-suite",
                                      "equivalence-suite", "ldlr-sweep",
                                      "power-sweep"), default="oracle-suite")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--csv", default=None)
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=_cmd_suite)

    p = sub.add_parser("phase-diagram", help="emit phase-boundary markers and LDLR values")
    p.add_argument("--L-grid", default="3,5,7,9,11,13")
    p.add_argument("--lambda-grid", dest="snr_grid", default="0.6:1.2:0.2")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=_cmd_phase_diagram)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GroupsynchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSERT


if __name__ == "__main__":
    sys.exit(main())
