"""Command-line entry point: ``complexons <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import complexon as cx
from . import simplicial as sc
from .cutnorm import (
    MultiArray,
    cut_norm,
    d_cut,
    d_cut_d,
    delta_cut,
    weak_regularity_partition,
)
from .experiments import EXPERIMENTS, complexes_up_to, make_config, parse_model, run
from .homomorphism import t_hom, t_hom_complexon, t_ind_complexon, t_ind_finite
from .sampling import sample_complex


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--alphas", default=None, help="comma separated weights, e.g. 1/2,1/4")
    p.add_argument("--dmax", type=int, default=None)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", dest="mode", action="store_const", const="exact")
    g.add_argument("--heuristic", dest="mode", action="store_const", const="heuristic")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="complexons", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("model", parents=[common], help="print a zoo or file complexon")
    p.add_argument("spec")
    p.add_argument("--blocks", type=int, default=None, help="project onto this many equal blocks")

    p = sub.add_parser("sample", parents=[common], help="sample K(n, W) as a facet list")
    p.add_argument("n", type=int)
    p.add_argument("spec")

    p = sub.add_parser("density", parents=[common], help="homomorphism density of F")
    p.add_argument("F", help="facet-list file")
    p.add_argument("target", help="model spec, complexon file or facet-list file")
    p.add_argument("--method", default="exact-step", choices=("exact-step", "monte-carlo"))
    p.add_argument("--induced", action="store_true")
    p.add_argument("--samples", type=int, default=100_000)

    p = sub.add_parser("cutnorm", parents=[common], help="cut norm of an array or of a difference")
    p.add_argument("inputs", nargs="+", help="one array file (.npy or text) or two complexons")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--one-sided", action="store_true")

    p = sub.add_parser("cutdist", parents=[common], help="labeled distance and unlabeled sandwich")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--budget", type=int, default=40320)

    p = sub.add_parser("regularize", parents=[common], help="weak regularity partition")
    p.add_argument("spec")
    p.add_argument("--blocks", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--grid", type=int, default=64)

    for name, helptext in (("verify", "run an experiment"), ("hyper", "hypergraph experiments")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        choices = list(EXPERIMENTS) if name == "verify" else ["equivalence", "ul"]
        p.add_argument("experiment", choices=choices)
        p.add_argument("--n-grid", default=None, help="comma separated vertex counts")
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--model", default=None)
        p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                       help="runner parameter; VALUE is read as JSON when possible")
    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _alphas(text, D):
    if text:
        return cx.WeightSequence.parse(text)
    return cx.WeightSequence.default(D)


def _load_target(arg: str, D: int | None):
    if os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
        if text.lstrip().startswith("complexon"):
            return cx.loads(text)
        return sc.loads(text)
    return parse_model(arg, D)


def _as_num(x):
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def cmd_model(args):
    W = parse_model(args.spec, args.dmax)
    if args.blocks:
        W = cx.project(W, [Fraction(i, args.blocks) for i in range(1, args.blocks)])
    if not isinstance(W, (cx.StepComplexon, cx.HomogeneousComplexon)):
        raise ValueError("this complexon has no finite text form; pass --blocks to project it")
    _emit(cx.dumps(W), args.out)
    return 0


def cmd_sample(args):
    W = parse_model(args.spec, args.dmax)
    seed = 0 if args.seed is None else args.seed
    _emit(sample_complex(args.n, W, seed).dumps(), args.out)
    return 0


def cmd_density(args):
    with open(args.F) as fh:
        F = sc.loads(fh.read())
    target = _load_target(args.target, args.dmax)
    if isinstance(target, sc.SimplicialComplex):
        res = t_ind_finite(F, target) if args.induced else t_hom(F, target)
    else:
        fn = t_ind_complexon if args.induced else t_hom_complexon
        kw = {"samples": args.samples, "seed": args.seed or 0} if args.method == "monte-carlo" else {}
        res = fn(F, target, args.method, **kw)
    out = {"value": _as_num(res.value), "method": res.method}
    if res.std_error is not None:
        out["std_error"] = res.std_error
    _emit(json.dumps(out) + "\n", args.out)
    return 0


def _read_array(path: str) -> np.ndarray:
    if path.endswith(".npy"):
        return np.load(path)
    return np.loadtxt(path, ndmin=2)


def cmd_cutnorm(args):
    mode = args.mode or "auto"
    if len(args.inputs) == 1:
        cv = cut_norm(MultiArray(_read_array(args.inputs[0])), mode, seed=args.seed or 0,
                      one_sided=args.one_sided)
    elif len(args.inputs) == 2:
        U, W = (_load_target(a, args.dmax) for a in args.inputs)
        cv = d_cut_d(U, W, args.dim, mode, seed=args.seed or 0)
    else:
        raise ValueError("give one array or two complexons")
    cert = cv.certificate
    _emit(json.dumps({"value": _as_num(cv.value), "exactness": cv.exactness,
                      "certificate": [list(S) for S in cert]}) + "\n", args.out)
    return 0


def cmd_cutdist(args):
    U, W = (_load_target(a, args.dmax) for a in (args.first, args.second))
    U = pixel_if_complex(U)
    W = pixel_if_complex(W)
    D = max(U.max_dim, W.max_dim)
    a = _alphas(args.alphas, D)
    mode = args.mode or "auto"
    labeled = d_cut(U, W, a, mode)
    res = delta_cut(U, W, a, budget=args.budget, seed=args.seed or 0, mode=mode,
                    F_list=complexes_up_to(3, min(D, 2)))
    _emit(json.dumps({"labeled": _as_num(labeled.value), "upper": _as_num(res.upper.value),
                      "lower": _as_num(res.lower), "search": res.search,
                      "permutation": list(res.permutation), "exactness": res.upper.exactness}) + "\n",
          args.out)
    return 0


def pixel_if_complex(X):
    if isinstance(X, sc.SimplicialComplex):
        return cx.pixel_complexon(X)
    return X


def cmd_regularize(args):
    W = parse_model(args.spec, args.dmax) if not os.path.exists(args.spec) else _load_target(args.spec, args.dmax)
    res = weak_regularity_partition(W, blocks=args.blocks, epsilon=args.epsilon, d=args.dmax or 1,
                                    grid=args.grid, seed=args.seed or 0)
    _emit(json.dumps({"blocks": res.blocks, "cells": [list(c) for c in res.cells],
                      "measured": {str(k): v for k, v in res.measured.items()},
                      "bound": res.bound, "converged": res.converged}) + "\n", args.out)
    return 0


def _params(items) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ValueError(f"expected KEY=VALUE, got {item!r}")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def cmd_verify(args, name=None):
    name = name or args.experiment
    overrides = {"seed": args.seed, "trials": args.trials, "samples": args.samples, "model": args.model,
                 "params": _params(args.param)}
    if args.n_grid:
        overrides["n_grid"] = tuple(int(x) for x in args.n_grid.split(","))
    if args.alphas:
        overrides["alphas"] = tuple(cx.WeightSequence.parse(args.alphas).alphas)
    if args.mode:
        overrides["mode"] = args.mode
    report = run(make_config(name, **overrides))
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
    return 0 if report.ok else 1


def cmd_hyper(args):
    name = {"equivalence": "hypergraph-equivalence", "ul": "ul-convergence"}[args.experiment]
    return cmd_verify(args, name)


COMMANDS = {
    "model": cmd_model,
    "sample": cmd_sample,
    "density": cmd_density,
    "cutnorm": cmd_cutnorm,
    "cutdist": cmd_cutdist,
    "regularize": cmd_regularize,
    "verify": cmd_verify,
    "hyper": cmd_hyper,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
