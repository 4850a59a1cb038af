"""Command-line interface: ``causaltree {simulate,weights,learn,kl,count,roc}``.

Exit codes: 0 success, 2 usage error, 3 data or validation error, 4 numerical error.
"""

import argparse
import json
import sys

from . import __version__
from .errors import NumericalError, ValidationError
from .info import build_weights, gaussian_kl, tree_to_gaussian
from .io import (
    atomic_write,
    file_digest,
    read_model,
    read_tree,
    read_weights,
    roc_to_csv,
    samples_to_csv,
    tree_to_dict,
    tree_to_dot,
    weights_to_csv,
)
from .model import build_covariance, sample
from .roc import run_experiment
from .trees import best_causal_tree, count_dependencies, kruskal_max_tree

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4


def _manifest(args, **inputs):
    digests = " ".join(f"{k}={file_digest(v)}" for k, v in inputs.items())
    seed = getattr(args, "seed", None)
    line = f"causaltree {__version__} subcommand={args.command}"
    if seed is not None:
        line += f" seed={seed}"
    return [f"{line} {digests}".rstrip()]


def cmd_simulate(args):
    model = read_model(args.model)
    x = sample(model, args.seed, args.count)
    atomic_write(args.out, samples_to_csv(x, model.layout, _manifest(args, model=args.model)))


def cmd_weights(args):
    K = build_covariance(read_model(args.model))
    W = build_weights(K, args.kind)
    atomic_write(args.out, weights_to_csv(W, _manifest(args, model=args.model)))


def cmd_learn(args):
    W, labels = read_weights(args.weights)
    tree = best_causal_tree(W) if args.mode == "causal" else kruskal_max_tree(W)
    doc = tree_to_dict(tree, labels, _manifest(args, weights=args.weights))
    atomic_write(args.out, json.dumps(doc, indent=2) + "\n")
    if args.dot:
        atomic_write(args.dot, tree_to_dot(tree, labels))


def cmd_kl(args):
    K = build_covariance(read_model(args.model))
    tree = read_tree(args.tree)
    print(f"{gaussian_kl(K, tree_to_gaussian(K, tree)):.12g}")


def cmd_count(args):
    m, n = args.m, args.n
    print(f"full {count_dependencies(m, n, 'full')}")
    print(f"causal {count_dependencies(m, n, 'causal')}")
    print(f"chowliu {count_dependencies(m, n, 'chowliu_var')}")
    print(f"note: causal counts same-time cross-process dependencies; "
          f"without them the count is {count_dependencies(m, n, 'causal_strict')}")


def cmd_roc(args):
    m0, m1 = read_model(args.model0), read_model(args.model1)
    curves = run_experiment(m0, m1, trials=args.trials, seed=args.seed)
    manifest = _manifest(args, model0=args.model0, model1=args.model1)
    atomic_write(args.out, roc_to_csv(curves, manifest))
    for name, c in curves.items():
        print(f"auc_{name} {c.auc:.6f}")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def build_parser():
    p = argparse.ArgumentParser(prog="causaltree", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"causaltree {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="draw samples from a model file")
    s.add_argument("--model", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--count", type=_positive_int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("weights", help="pairwise information weights of a model")
    s.add_argument("--model", required=True)
    s.add_argument("--kind", choices=["di", "mi", "mivar"], default="di")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("learn", help="best causal tree or Chow-Liu tree from a weights file")
    s.add_argument("--weights", required=True)
    s.add_argument("--mode", choices=["causal", "chowliu"], default="causal")
    s.add_argument("--out", required=True)
    s.add_argument("--dot")
    s.set_defaults(func=cmd_learn)

    s = sub.add_parser("kl", help="KL divergence from a model to its tree approximation")
    s.add_argument("--model", required=True)
    s.add_argument("--tree", required=True)
    s.set_defaults(func=cmd_kl)

    s = sub.add_parser("count", help="variable dependency counts")
    s.add_argument("--m", type=_positive_int, required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("roc", help="hypothesis-testing ROC curves for two models")
    s.add_argument("--model0", required=True)
    s.add_argument("--model1", required=True)
    s.add_argument("--trials", type=_positive_int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_roc)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except NumericalError as exc:
        print(f"causaltree {args.command}: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValidationError, OSError) as exc:
        print(f"causaltree {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
