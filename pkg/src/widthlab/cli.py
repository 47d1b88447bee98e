"""Command-line entry points.

Verbs:
  estimate  one-off mean-width / critical-dimension queries for a body
  check     a single inclusion certificate (ball, enclosing ball, or cube)
  run       execute an experiment suite from a JSON config
  report    summarize an existing output directory

Exit codes: 0 pass, 1 fail/refuted, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bodies import BodyError, body_from_descriptor
from .ensembles import ConfigError
from .harness import _dump_json, parse_config, run_suite, summarize
from .inclusion import InclusionOpts, ball_in_body, body_in_ball, cube_in_body
from .widths import critical_dimension, eps_critical_dimension, mean_width


def _load_body(spec: str):
    if spec.lstrip().startswith("{"):
        desc = json.loads(spec)
    else:
        with open(spec, "r", encoding="utf-8") as fh:
            desc = json.load(fh)
    return body_from_descriptor(desc)


def _cmd_estimate(args) -> int:
    body = _load_body(args.body)
    est = mean_width(body, args.samples, args.seed)
    out = {"dim": body.dim, "mean_width": est.mean, "std_error": est.std_error,
           "samples": est.samples, "euclidean_radius": body.euclidean_radius(),
           "critical_dimension": critical_dimension(body, est)}
    if args.eps is not None:
        out["eps_critical_dimension"] = eps_critical_dimension(
            out["critical_dimension"], args.eps)
    print(_dump_json(out), end="")
    return 0


def _cmd_check(args) -> int:
    body = _load_body(args.body)
    opts = InclusionOpts(seed=args.seed)
    given = [v is not None for v in (args.inner_radius, args.outer_radius, args.cube_side)]
    if sum(given) != 1:
        raise ConfigError("check needs exactly one of "
                          "--inner-radius, --outer-radius, --cube-side")
    if args.inner_radius is not None:
        cert = ball_in_body(body, args.inner_radius, opts)
    elif args.outer_radius is not None:
        cert = body_in_ball(body, args.outer_radius, opts)
    else:
        cert = cube_in_body(body, args.cube_side, opts)
    print(cert.to_json())
    return 1 if cert.status == "refuted" else 0


def _cmd_run(args) -> int:
    configs = parse_config(args.config)
    if args.seed is not None:
        for cfg in configs:
            cfg.master_seed = args.seed
    if args.trials_override is not None:
        if args.trials_override < 1:
            raise ConfigError("--trials-override must be >= 1")
        for cfg in configs:
            cfg.trials = args.trials_override
    manifest = run_suite(configs, args.out, args.parallelism, args.config)
    for eid in manifest.verdicts:
        print(f"{eid}: {manifest.verdicts[eid]}")
    for eid, msg in manifest.errors.items():
        print(f"{eid}: ERROR {msg}", file=sys.stderr)
    return 1 if manifest.failed else 0


def _cmd_report(args) -> int:
    summary = summarize(args.out)
    print(_dump_json(summary), end="")
    bad = any(v == "FAIL" for v in summary["verdicts"].values())
    return 1 if (bad or summary["errors"] or summary["integrity"] != "ok") else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="widthlab",
                                description="Numerical experiments for random "
                                            "projections of convex bodies.")
    sub = p.add_subparsers(dest="verb", required=True)

    pe = sub.add_parser("estimate", help="mean width and critical dimension")
    pe.add_argument("--body", required=True,
                    help="JSON body descriptor (inline or a file path)")
    pe.add_argument("--samples", type=int, default=10_000)
    pe.add_argument("--seed", type=int, default=0)
    pe.add_argument("--eps", type=float, default=None)
    pe.set_defaults(func=_cmd_estimate)

    pc = sub.add_parser("check", help="one inclusion certificate")
    pc.add_argument("--body", required=True)
    pc.add_argument("--inner-radius", type=float, default=None,
                    help="verify r * B_2 inside the body")
    pc.add_argument("--outer-radius", type=float, default=None,
                    help="verify the body inside R * B_2")
    pc.add_argument("--cube-side", type=float, default=None,
                    help="verify r * B_inf inside the body")
    pc.add_argument("--seed", type=int, default=0)
    pc.set_defaults(func=_cmd_check)

    pr = sub.add_parser("run", help="run an experiment suite")
    pr.add_argument("--config", required=True)
    pr.add_argument("--out", required=True)
    pr.add_argument("--seed", type=int, default=None,
                    help="override every experiment's master seed")
    pr.add_argument("--parallelism", type=int, default=1)
    pr.add_argument("--trials-override", type=int, default=None)
    pr.set_defaults(func=_cmd_run)

    ps = sub.add_parser("report", help="summarize an existing run directory")
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=_cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, BodyError, FileNotFoundError,
            json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
