"""Command-line entry point: ``coarse-abelian <subcommand> ...``.

Exit status: 0 when every check passes, 1 when a bound is violated or a
relation refuted, 2 on usage and parse errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .certificates import (
    certify_dyadic_split,
    certify_odd_split,
    certify_rational_split,
    certify_standardize,
    certify_transfer,
    odd_sample,
    standard_transfer_pairs,
)
from .chains import Scales, standard_chain, standardize
from .groups import (
    CoarseError,
    Localized,
    Prufer,
    enumerate_ball,
    format_value,
    invariants,
    parse_descriptor,
    parse_element,
    parse_value,
)
from .norms import ChainUltraNorm, DyadicNorm, PruferNorm, PseudoUltraNorm, WordNorm, default_norm
from .splitting import (
    RationalSplit,
    ScaleError,
    Transfer,
    dyadic_split,
    dyadic_unsplit,
    odd_pair_for,
    odd_split,
    power_split,
    transfer_bound,
)
from .verify import (
    classify,
    decomposition_uniqueness,
    embeddable,
    generated_subgroup,
    growth,
    growth_compare,
    norm_axioms,
    scale_component,
    short_elements,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
_NEGATIVE = re.compile(r"^-\d[\d/]*$")


class Report:
    """Tabular result plus summary fields; rendered as table, CSV or JSON."""

    def __init__(self, title: str, columns: Sequence[str] = (), rows: Sequence[Sequence] = (), passed: bool = True):
        self.title = title
        self.columns = list(columns)
        self.rows = [[_text(v) for v in row] for row in rows]
        self.summary: dict[str, Any] = {}
        self.passed = passed

    def add(self, key: str, value: Any) -> None:
        self.summary[key] = _jsonable(value)

    def render(self, fmt: str, inputs: dict) -> str:
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(self.columns)
            writer.writerows(self.rows)
            return buf.getvalue()
        if fmt == "json":
            doc = {
                "tool": "coarse-abelian",
                "version": __version__,
                "input": inputs,
                "title": self.title,
                "columns": self.columns,
                "rows": self.rows,
                "summary": self.summary,
                "passed": self.passed,
            }
            return json.dumps(doc, sort_keys=True, indent=2) + "\n"
        lines = [self.title]
        if self.columns:
            widths = [max(len(c), *(len(r[i]) for r in self.rows)) if self.rows else len(c) for i, c in enumerate(self.columns)]
            lines.append("  ".join(c.ljust(w) for c, w in zip(self.columns, widths)).rstrip())
            for r in self.rows:
                lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        for k, v in self.summary.items():
            lines.append(f"{k}: {_text(v)}")
        lines.append("result: " + ("pass" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def _text(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, str):
        return v
    if isinstance(v, (list, dict)):
        return json.dumps(_jsonable(v), sort_keys=True)
    return format_value(v) if isinstance(v, (int, Fraction, tuple)) else str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_jsonable(x) for x in v]
    return str(v)


# ---------------------------------------------------------------------------
# argument helpers


def parse_grid(text: str) -> list[Fraction]:
    """"1..8" or a comma list of rationals."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return [Fraction(k) for k in range(int(lo), int(hi) + 1)]
    return [Fraction(t.strip()) for t in text.split(",") if t.strip()]


def parse_schedule(text: str | None):
    if text is None or text == "diagonal":
        return None
    return [int(t) for t in text.split(",") if t.strip()]


def parse_scales(text: str | None) -> Scales | None:
    if text is None:
        return None
    return Scales.parse(text)


def compare_function(text: str):
    text = text.replace(" ", "")
    if text == "1":
        return lambda n: 1
    if text == "n":
        return lambda n: n
    if text.startswith("n^"):
        k = int(text[2:])
        return lambda n: n**k
    if text == "2^n":
        return lambda n: 2**n
    raise argparse.ArgumentTypeError(f"unknown comparison function {text!r}; use 1, n, n^k or 2^n")


def build_norm(G, metric: str, bound: int | None, scales=None, schedule=None, unchecked: bool = False):
    if metric == "default":
        return default_norm(G, bound)
    if metric == "word":
        return WordNorm(G, radius_cap=10 * (bound or 100))
    if metric == "dyadic":
        if G != Localized(2):
            raise CoarseError("the dyadic metric lives on Z[1/2]")
        return DyadicNorm()
    if metric == "prufer":
        if not isinstance(G, Prufer):
            raise CoarseError("the Prufer metric lives on Prufer(p)")
        return PruferNorm(G.p)
    if metric == "ultra":
        return ChainUltraNorm(standard_chain(G, scales=scales, schedule=schedule))
    if metric == "pseudo":
        return PseudoUltraNorm(odd_pair_for(G, schedule, scales, check_scales=not unchecked))
    raise CoarseError(f"unknown metric {metric!r}")


def _elements(G, texts: Sequence[str]) -> list:
    return [parse_element(G, t) for t in texts]


# ---------------------------------------------------------------------------
# subcommands


def cmd_norm(args) -> Report:
    G = parse_descriptor(args.group)
    N = build_norm(G, args.metric, args.bound, parse_scales(args.scales), parse_schedule(args.schedule))
    rows = [(G.format(x), N(x)) for x in _elements(G, args.elements)]
    return Report(f"{args.metric} norm on {G.text()}", ["element", "norm"], rows)


def cmd_dist(args) -> Report:
    G = parse_descriptor(args.group)
    N = build_norm(G, args.metric, args.bound, parse_scales(args.scales), parse_schedule(args.schedule))
    a, b = _elements(G, [args.a, args.b])
    rep = Report(f"{args.metric} distance on {G.text()}", ["a", "b", "distance"], [(G.format(a), G.format(b), N.distance(a, b))])
    return rep


def cmd_ball(args) -> Report:
    G = parse_descriptor(args.group)
    elements = enumerate_ball(G, args.bound)
    if args.metric:
        N = build_norm(G, args.metric, args.bound, parse_scales(args.scales), parse_schedule(args.schedule))
        rows = [(G.format(x), N(x)) for x in elements]
        return Report(f"truncation of {G.text()} at bound {args.bound}", ["element", "norm"], rows)
    return Report(f"truncation of {G.text()} at bound {args.bound}", ["element"], [(G.format(x),) for x in elements])


def cmd_decompose(args) -> Report:
    G = parse_descriptor(args.group)
    pair = odd_pair_for(G, parse_schedule(args.schedule), parse_scales(args.scales))
    rows = []
    for x in _elements(G, args.elements):
        d = pair.decompose(x)
        rows.append((G.format(x), d.text(pair.ext.sub), pair.norm(x)))
    rep = Report(f"decomposition over {pair.text()}", ["element", "decomposition", "norm"], rows)
    return rep


def cmd_split(args) -> Report:
    kind = args.kind
    if kind == "dyadic":
        G = Localized(2)
        rows = []
        for x in _elements(G, args.elements):
            m, q = dyadic_split(x)
            rows.append((G.format(x), f"({m},{q})", dyadic_unsplit(m, q)))
        return Report("dyadic split", ["element", "image", "section"], rows)
    if kind == "power":
        rows = []
        for t in args.elements:
            xs = parse_value(t)
            xs = xs if isinstance(xs, tuple) else (xs,)
            xs = tuple(Localized(2).canon(v) for v in xs)
            rows.append((format_value(xs), "(" + ",".join(f"({m},{q})" for m, q in power_split(xs)) + ")"))
        return Report("power split", ["element", "image"], rows)
    if kind == "rational":
        F = RationalSplit(parse_schedule(args.schedule))
        rows = []
        for t in args.elements:
            x = Fraction(parse_value(t))
            z, q = F(x)
            rows.append((format_value(x), f"({z},{q})", F.inverse(z, q)))
        return Report("rational split", ["element", "image", "section"], rows)
    if kind == "odd":
        if not args.group:
            raise CoarseError("split odd needs --group")
        G = parse_descriptor(args.group)
        pair = odd_pair_for(G, parse_schedule(args.schedule))
        rows = []
        for x in _elements(G, args.elements):
            h, q = odd_split(pair, x)
            rows.append((G.format(x), f"({pair.ext.sub.format(h)},{pair.ext.quotient.format(q)})"))
        return Report(f"odd split over {pair.text()}", ["element", "image"], rows)
    raise CoarseError(f"unknown split kind {kind!r}")


def cmd_transfer(args) -> Report:
    A = parse_descriptor(args.source)
    B = parse_descriptor(args.target)
    pa = odd_pair_for(A, parse_schedule(args.schedule))
    pb = odd_pair_for(B, parse_schedule(args.schedule))
    T = Transfer(pa, pb)
    rows = [(A.format(x), B.format(T(x))) for x in _elements(A, args.elements)]
    rep = Report(f"transfer {pa.text()} -> {pb.text()}", ["element", "image"], rows)
    for K in args.bound_at or []:
        rep.add(f"C_{K}", transfer_bound(pa, pb, Fraction(K)))
    return rep


def cmd_components(args) -> Report:
    G = parse_descriptor(args.group)
    N = build_norm(G, args.metric, args.bound, parse_scales(args.scales), parse_schedule(args.schedule))
    trunc = enumerate_ball(G, args.bound)
    rows = []
    ok = True
    for s in parse_grid(args.s):
        comp = scale_component(N, trunc, s)
        sub = generated_subgroup(G, short_elements(N, trunc, s), trunc)
        ok &= comp == sub
        rows.append((s, len(comp), len(sub), comp == sub, len(comp) == len(trunc)))
    rep = Report(
        f"scale components of the identity in {G.text()} (bound {args.bound}, {len(trunc)} elements)",
        ["s", "component", "generated", "equal", "fills_truncation"],
        rows,
        passed=ok,
    )
    return rep


def cmd_growth(args) -> Report:
    G = parse_descriptor(args.group)
    N = build_norm(G, args.metric, args.bound, parse_scales(args.scales), parse_schedule(args.schedule))
    table = growth(G, N, Fraction(args.s), args.n_max, args.bound, args.metric)
    rep = Report(f"growth of {G.text()} at s = {table.s}", ["n", "count"], table.rows())
    if args.compare:
        cmp = growth_compare(table.counts, compare_function(args.compare), start=args.start)
        rep.add("compare", args.compare)
        rep.add("witness_C", cmp.witness)
        rep.add("half_range_C", cmp.half_witness)
        rep.add("verdict", cmp.verdict)
        rep.add("note", cmp.note)
        rep.passed = cmp.consistent
    return rep


def _control_report(title: str, cert) -> Report:
    rows = [(r.delta, r.eps_max, r.predicted, r.passed) for r in cert.rows]
    rep = Report(title, ["delta", "eps_max", "predicted", "pass"], rows, passed=cert.passed)
    rep.add("sample_size", cert.sample_size)
    rep.add("monotone", cert.monotone)
    if cert.displacement is not None:
        rep.add("displacement", list(cert.displacement))
        rep.add("displacement_predicted", list(cert.displacement_predicted))
    for k, v in sorted(cert.notes.items()):
        rep.add(k, v)
    failing = [r for r in cert.rows if not r.passed]
    if failing:
        rep.add("first_violation", [format_value(w) for w in failing[0].witness])
    return rep


def cmd_verify(args) -> Report:
    target = args.target
    if target == "dyadic-split":
        cert = certify_dyadic_split(args.bound or 16, parse_grid(args.grid or "1..8"), Fraction(args.slack))
        rep = _control_report("dyadic split certificate", cert)
        rep.passed = cert.passed and cert.notes["section_exact"]
        return rep
    if target == "rational-split":
        cert = certify_rational_split(tuple(parse_schedule(args.schedule or "3,3")), args.den, args.bound or 8, parse_grid(args.grid or "1..8"))
        rep = _control_report("rational split certificate", cert.control)
        rep.add("quotient_exact", cert.quotient_exact)
        rep.add("integers_fixed", cert.integers_fixed)
        rep.add("section_exact", cert.section_exact)
        rep.passed = cert.passed
        return rep
    if target == "transfer":
        pa, pb = standard_transfer_pairs()
        Ks = parse_grid(args.grid or "1..3")
        cert = certify_transfer(pa, pb, Ks, h_bound=args.bound or 3, top=args.top or 3)
        rep = Report(
            f"transfer certificate {pa.text()} -> {pb.text()}",
            ["delta", "eps_max", "predicted", "pass"],
            cert.rows,
            passed=cert.passed,
        )
        rep.add("sample_size", cert.sample_size)
        rep.add("injective", cert.injective)
        rep.add("image_matches", cert.image_matches)
        rep.add("inverse_exact", cert.inverse_exact)
        return rep
    if target == "odd-split":
        G = parse_descriptor(args.group or "Z[1/3]")
        pair = odd_pair_for(G, parse_schedule(args.schedule))
        res = certify_odd_split(pair, args.bound or 2, args.top or 2)
        rep = Report(f"odd split certificate over {pair.text()}", passed=res.pop("passed"))
        for k, v in res.items():
            rep.add(k, v)
        return rep
    if target == "norm-axioms":
        G = parse_descriptor(args.group)
        sample = enumerate_ball(G, args.bound or 3)
        try:
            N = build_norm(G, args.metric, args.bound, parse_scales(args.scales), parse_schedule(args.schedule), args.unchecked)
            report = norm_axioms(N, sample)
        except ScaleError as exc:
            rep = Report(f"norm axioms for {args.metric} on {G.text()}", passed=False)
            rep.add("inadmissible_scales", str(exc))
            return rep
        rep = Report(f"norm axioms for {args.metric} on {G.text()}", passed=report.passed)
        rep.add("sample_size", report.sample_size)
        rep.add("pairs_checked", report.triangle_checked)
        rep.add("identity_violations", len(report.identity_violations))
        rep.add("symmetry_violations", len(report.symmetry_violations))
        rep.add("triangle_violations", len(report.triangle_violations))
        if report.triangle_violations:
            rep.add("first_triangle_violation", [G.format(v) for v in report.triangle_violations[0]])
        return rep
    if target == "uniqueness":
        G = parse_descriptor(args.group or "Z[1/3]")
        pair = odd_pair_for(G, parse_schedule(args.schedule))
        top = args.top or 2
        sample = odd_sample(pair, args.bound or 2, top)
        report = decomposition_uniqueness(pair, sample, top)
        rep = Report(f"decomposition uniqueness over {pair.text()}", passed=report.passed)
        rep.add("elements", report.checked)
        rep.add("candidates_per_element", report.candidates)
        rep.add("failures", len(report.failures))
        return rep
    if target == "standardize":
        G = parse_descriptor(args.group or "CyclicSum([4,6])")
        cert = certify_standardize(G, args.bound or 4, parse_scales(args.scales))
        rep = Report(f"standardization of {cert.source}", passed=cert.passed)
        rep.add("target", cert.target)
        rep.add("indexes", cert.indexes)
        rep.add("block_products", cert.block_products)
        rep.add("elements", cert.elements)
        rep.add("bijective", cert.bijective)
        rep.add("isometric", cert.isometric)
        return rep
    raise CoarseError(f"unknown verify target {target!r}")


def _verdict_report(kind: str, A, B, v) -> Report:
    rep = Report(f"{kind} {A.text()} vs {B.text()}", ["left", "right", "verdict", "rule"], [(A.text(), B.text(), v.verdict, v.rule)])
    rep.add("left_invariants", v.left.as_dict())
    rep.add("right_invariants", v.right.as_dict())
    return rep


def cmd_classify(args) -> Report:
    A, B = parse_descriptor(args.a), parse_descriptor(args.b)
    return _verdict_report("classify", A, B, classify(A, B))


def cmd_embed(args) -> Report:
    A, B = parse_descriptor(args.a), parse_descriptor(args.b)
    return _verdict_report("embed", A, B, embeddable(A, B))


def cmd_invariants(args) -> Report:
    rows = []
    for text in args.groups:
        G = parse_descriptor(text)
        r = invariants(G).as_dict()
        rows.append((G.text(), r["torsion_free_rank"], r["finitely_generated"], r["cd_q"], r["asdim"]))
    return Report("invariants", ["group", "rank", "finitely_generated", "cd_q", "asdim"], rows)


def cmd_standardize(args) -> Report:
    G = parse_descriptor(args.group)
    S = standardize(G, parse_scales(args.scales))
    rows = [(G.format(x), S.target.format(S.forward(x))) for x in enumerate_ball(G, args.bound)]
    rep = Report(f"standardization {G.text()} -> {S.target.text()}", ["element", "image"], rows)
    rep.add("target", S.target.text())
    rep.add("chain", [list(r) for r in S.chain.rows(args.bound if not S.chain.finite else None)])
    return rep


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.add_argument("--out", help="write the report here instead of stdout")


def _metric_opts(p: argparse.ArgumentParser, metric_default: str | None = "default") -> None:
    p.add_argument("--metric", default=metric_default, choices=["default", "word", "dyadic", "prufer", "ultra", "pseudo"])
    p.add_argument("--scales", help="scale prefix K_1,K_2,... (affine continuation)")
    p.add_argument("--schedule", help="odd denominator schedule, e.g. 3,3 (default: diagonal)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coarse-abelian", description="Exact coarse geometry of countable abelian groups.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON file with the subcommand and its options")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="evaluate a norm")
    p.add_argument("--group", required=True)
    p.add_argument("--bound", type=int, default=100)
    _metric_opts(p)
    p.add_argument("elements", nargs="+")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("dist", help="distance between two elements")
    p.add_argument("--group", required=True)
    p.add_argument("--bound", type=int, default=100)
    _metric_opts(p)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("ball", help="list a finite truncation")
    p.add_argument("--group", required=True)
    p.add_argument("--bound", type=int, required=True)
    _metric_opts(p, None)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("decompose", help="balanced decomposition over the canonical odd pair")
    p.add_argument("--group", required=True)
    p.add_argument("--scales")
    p.add_argument("--schedule")
    p.add_argument("elements", nargs="+")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("split", help="evaluate a splitting map")
    p.add_argument("kind", choices=["dyadic", "power", "rational", "odd"])
    p.add_argument("--group")
    p.add_argument("--schedule")
    p.add_argument("elements", nargs="+")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("transfer", help="transfer between odd pairs with equal indexes")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--schedule")
    p.add_argument("--bound-at", type=Fraction, action="append", help="also report C_K at this K")
    p.add_argument("elements", nargs="*")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("components", help="s-scale components of the identity")
    p.add_argument("--group", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--s", required=True, help="scale or comma list of scales")
    _metric_opts(p)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("growth", help="growth table n -> count")
    p.add_argument("--group", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--compare", help="candidate f: 1, n, n^k or 2^n")
    p.add_argument("--start", type=int, default=1)
    _metric_opts(p)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("verify", help="run a certification")
    p.add_argument(
        "target",
        choices=["dyadic-split", "odd-split", "transfer", "rational-split", "norm-axioms", "uniqueness", "standardize"],
    )
    p.add_argument("--group")
    p.add_argument("--bound", type=int)
    p.add_argument("--grid")
    p.add_argument("--top", type=int)
    p.add_argument("--den", type=int, default=72)
    p.add_argument("--slack", default="0", help="added to the predicted control bound delta (dyadic-split)")
    p.add_argument("--unchecked", action="store_true", help="skip the scale admissibility check")
    _metric_opts(p)
    p.set_defaults(func=cmd_verify)

    for name, func, helptext in (("classify", cmd_classify, "coarse equivalence verdict"), ("embed", cmd_embed, "coarse embedding verdict")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("a")
        p.add_argument("b")
        p.set_defaults(func=func)

    p = sub.add_parser("invariants", help="rank, finite generation, cd_Q, asdim")
    p.add_argument("groups", nargs="+")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("standardize", help="map a locally finite group onto a prime cyclic sum")
    p.add_argument("--group", required=True)
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--scales")
    p.set_defaults(func=cmd_standardize)

    for action in sub.choices.values():
        _common(action)
    return parser


def config_argv(path: str) -> list[str]:
    """Translate a JSON config into the equivalent argument list.

    Keys: "command", optional "target"/"kind", optional "args" (positional
    list); every other key becomes --key value (true booleans become bare
    flags, lists repeat the flag).
    """
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict) or "command" not in cfg:
        raise CoarseError(f"{path}: config must be an object with a 'command' key")
    cfg = dict(cfg)
    argv = [str(cfg.pop("command"))]
    for key in ("target", "kind"):
        if key in cfg:
            argv.append(str(cfg.pop(key)))
    positionals = [str(a) for a in cfg.pop("args", [])]
    for key in sorted(cfg):
        value = cfg[key]
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif value is False or value is None:
            continue
        elif isinstance(value, list):
            for v in value:
                argv.extend([flag, str(v)])
        else:
            argv.extend([flag, str(value)])
    return argv + positionals


def _inputs(args: argparse.Namespace) -> dict:
    return {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in ("func", "out", "config")}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if "--config" in argv:
        i = argv.index("--config")
        try:
            path = argv[i + 1]
        except IndexError:
            print("error: --config needs a path", file=sys.stderr)
            return EXIT_USAGE
        rest = argv[:i] + argv[i + 2 :]
        try:
            base = config_argv(path)
        except (OSError, ValueError, CoarseError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        # flags given after the config on the command line override it
        argv = base + rest
    # Element arguments such as -11/4 would otherwise be taken for options;
    # a leading space keeps them positional and the element parser ignores it.
    argv = [" " + a if _NEGATIVE.match(a) else a for a in argv]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    for key, value in vars(args).items():
        if isinstance(value, list):
            setattr(args, key, [v.strip() if isinstance(v, str) else v for v in value])
    try:
        report = args.func(args)
    except (CoarseError, ValueError, ZeroDivisionError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = report.render(args.format, _inputs(args))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
