"""Batch command-line front end: JSON in, CSV/JSON/SVG out.

Data goes to standard output or ``--out``; errors go to standard error.
Exit codes: 0 success, 1 parse/validation error, 2 verification found a
theorem violation, 3 a falsification probe failed to find its counterexample.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import properties
from .guessing import BudgetExceededError, experiment_csv, ranking_function
from .lattice import NotMajorizedError, join, meet, representative
from .lorenz import LorenzCurve, build_curve, curve_csv
from .measures import Atom, DensityPair, FiniteDistribution, ValidationError
from .renyi import alpha_sweep, renyi_divergence
from .transforms import Channel, Partition, apply, coarsen

_BASES = {"e": 1.0, "2": math.log(2.0)}


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _pair_from_file(path: str) -> DensityPair:
    doc = _load_json(path)
    try:
        atoms = tuple(
            Atom(str(a["label"]), float(a["p"]), float(a["q"])) for a in doc["atoms"]
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: expected {{'atoms': [{{'label','p','q'}}...]}}: {exc}")
    return DensityPair(atoms)


def _dist_from_file(path: str) -> FiniteDistribution:
    doc = _load_json(path)
    try:
        items = [(str(a["label"]), float(a["p"])) for a in doc["atoms"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: expected {{'atoms': [{{'label','p'}}...]}}: {exc}")
    return FiniteDistribution(tuple(l for l, _ in items), tuple(w for _, w in items))


def _channel_from_file(path: str) -> Channel:
    doc = _load_json(path)
    try:
        return Channel(
            tuple(doc["input_labels"]),
            tuple(doc["output_labels"]),
            tuple(tuple(float(v) for v in row) for row in doc["matrix"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: expected channel JSON with labels and matrix: {exc}")


def _partition_from_file(path: str) -> Partition:
    doc = _load_json(path)
    try:
        return Partition(tuple(tuple(b) for b in doc["blocks"]))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: expected {{'blocks': [[labels...]...]}}: {exc}")


def _parse_alpha(text: str) -> float:
    text = text.strip().lower()
    if text in ("inf", "infinity", "oo"):
        return math.inf
    return float(text)


def _fmt(value: float, base: str, precision: int) -> str:
    if value == math.inf:
        return "inf"
    return f"{value / _BASES[base]:.{precision}f}"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _curve_json(curve: LorenzCurve) -> dict:
    return {
        "segments": [{"width": w, "slope": s} for w, s in curve.segments],
        "singular_p": curve.singular_p,
    }


def _pair_json(pair: DensityPair) -> dict:
    return {"atoms": [{"label": a.label, "p": a.p, "q": a.q} for a in pair.atoms]}


def _curve_svg(curve: LorenzCurve) -> str:
    """Static plot: lower curve, diagonal, and the symmetric upper curve."""
    size, margin = 400, 40

    def x(u):
        return margin + u * size

    def y(v):
        return margin + (1.0 - v) * size

    def poly(points):
        return " ".join(f"{x(u):.2f},{y(v):.2f}" for u, v in points)

    lower = curve.vertices()
    upper = [(1.0 - u, 1.0 - v) for u, v in reversed(lower)]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size + 2 * margin} {size + 2 * margin}">',
        f'<rect x="{margin}" y="{margin}" width="{size}" height="{size}" fill="none" stroke="#888"/>',
        f'<line x1="{x(0):.2f}" y1="{y(0):.2f}" x2="{x(1):.2f}" y2="{y(1):.2f}" stroke="#bbb" stroke-dasharray="4 4"/>',
        f'<polyline points="{poly(lower)}" fill="none" stroke="#1f77b4" stroke-width="2"/>',
        f'<polyline points="{poly(upper)}" fill="none" stroke="#d62728" stroke-width="2"/>',
    ]
    if curve.singular_p > 0.0:
        parts.append(
            f'<text x="{x(0.55):.2f}" y="{y(0.02):.2f}" font-size="12">'
            f"singular P-mass {curve.singular_p:.6g}</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_div(args) -> int:
    pair = _pair_from_file(args.pair)
    result = renyi_divergence(pair, _parse_alpha(args.alpha))
    _emit(_fmt(result.value, args.base, args.precision) + "\n", args.out)
    return 0


def cmd_sweep(args) -> int:
    pair = _pair_from_file(args.pair)
    grid = [_parse_alpha(a) for a in args.alphas.split(",")]
    lines = ["alpha,divergence"]
    for res in alpha_sweep(pair, grid):
        alpha_txt = "inf" if res.order == math.inf else f"{res.order:g}"
        lines.append(f"{alpha_txt},{_fmt(res.value, args.base, args.precision)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_lorenz(args) -> int:
    pair = _pair_from_file(args.pair)
    curve = build_curve(pair)
    _emit(curve_csv(curve), args.out)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(_curve_svg(curve))
    return 0


def cmd_lattice(args) -> int:
    a = build_curve(_pair_from_file(args.pair1))
    b = build_curve(_pair_from_file(args.pair2))
    curve = meet(a, b) if args.op == "meet" else join(a, b)
    doc = {
        "operation": args.op,
        "curve": _curve_json(curve),
        "representative": _pair_json(representative(curve)),
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_markov_op(args) -> int:
    p2 = _dist_from_file(args.source)
    p1 = _dist_from_file(args.target)
    from .lattice import construct_markov_operator

    channel = construct_markov_operator(p2, p1)
    doc = {
        "input_labels": list(channel.input_labels),
        "output_labels": list(channel.output_labels),
        "matrix": [list(row) for row in channel.matrix],
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_guess(args) -> int:
    pair = _pair_from_file(args.pair)
    text = experiment_csv(pair, args.rho, args.n_max, max_type_classes=args.budget)
    _emit(text, args.out)
    return 0


def cmd_rank(args) -> int:
    pair = _pair_from_file(args.pair)
    profile = ranking_function(pair)
    ratios = {a.label: a.p / a.q for a in pair.atoms}
    lines = ["label,ratio,rank"]
    for label, rank in profile.ranks:
        lines.append(f"{label},{ratios[label]:.12g},{rank:.12g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_dpi(args) -> int:
    pair = _pair_from_file(args.pair)
    if args.channel:
        mapped = apply(_channel_from_file(args.channel), pair)
    else:
        mapped = coarsen(pair, _partition_from_file(args.partition))
    alpha = _parse_alpha(args.alpha)
    before = renyi_divergence(pair, alpha).value
    after = renyi_divergence(mapped, alpha).value
    lines = [
        "alpha,divergence_input,divergence_output",
        f"{args.alpha},{_fmt(before, args.base, args.precision)},{_fmt(after, args.base, args.precision)}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    reports = properties.run_all(args.seed, instances=args.instances)
    _emit(properties.reports_to_json(reports, args.seed) + "\n", args.out)
    for r in reports:
        status = "ok" if r.passed else "FAIL"
        print(f"{status:4s} {r.kind:7s} {r.name} violations={r.violations}", file=sys.stderr)
    return properties.exit_code(reports)


def _add_common(sub, out_default=None):
    sub.add_argument("--out", default=out_default, help="write output to this path instead of stdout")
    sub.add_argument("--base", choices=("e", "2"), default="e", help="log base for display")
    sub.add_argument("--precision", type=int, default=6, choices=range(1, 16), metavar="1..15")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyikit",
        description="Divergences, Lorenz curves, lattice operations, and guessing experiments "
        "over finite discrete distributions.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("div", help="divergence of a pair at one order")
    s.add_argument("pair")
    s.add_argument("--alpha", required=True)
    _add_common(s)
    s.set_defaults(func=cmd_div)

    s = subs.add_parser("sweep", help="divergences along an order grid")
    s.add_argument("pair")
    s.add_argument("--alphas", default="0,0.5,1,2,inf", help="comma-separated ascending orders")
    _add_common(s)
    s.set_defaults(func=cmd_sweep)

    s = subs.add_parser("lorenz", help="curve breakpoint CSV and optional SVG plot")
    s.add_argument("pair")
    s.add_argument("--svg", help="also write an SVG plot to this path")
    _add_common(s)
    s.set_defaults(func=cmd_lorenz)

    s = subs.add_parser("lattice", help="meet or join of two pairs' curves")
    s.add_argument("pair1")
    s.add_argument("pair2")
    s.add_argument("--op", choices=("meet", "join"), required=True)
    _add_common(s)
    s.set_defaults(func=cmd_lattice)

    s = subs.add_parser("markov-op", help="doubly stochastic matrix mapping source to target")
    s.add_argument("source", help="distribution JSON that majorizes the target")
    s.add_argument("target", help="distribution JSON to be reached")
    _add_common(s)
    s.set_defaults(func=cmd_markov_op)

    s = subs.add_parser("guess", help="i.i.d. guessing-moment experiment CSV")
    s.add_argument("pair")
    s.add_argument("--rho", type=float, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--budget", type=int, default=2_000_000, help="max type classes per n")
    _add_common(s)
    s.set_defaults(func=cmd_guess)

    s = subs.add_parser("rank", help="per-atom ranking values CSV")
    s.add_argument("pair")
    _add_common(s)
    s.set_defaults(func=cmd_rank)

    s = subs.add_parser("dpi", help="divergence before/after a channel or partition")
    s.add_argument("pair")
    group = s.add_mutually_exclusive_group(required=True)
    group.add_argument("--channel", help="channel JSON file")
    group.add_argument("--partition", help="partition JSON file")
    s.add_argument("--alpha", required=True)
    _add_common(s)
    s.set_defaults(func=cmd_dpi)

    s = subs.add_parser("verify", help="run the full verification harness")
    s.add_argument("--seed", type=int, default=properties.DEFAULT_SEED)
    s.add_argument("--instances", type=int, default=None, help="override per-check instance counts")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, NotMajorizedError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
