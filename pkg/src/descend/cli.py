"""Command-line interface: ``descend analyze|compare|dump-cfg|replay``.

Exit status is 0 on success, 1 when the analysis reports a problem (bad
source, unsound result, replay mismatch) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .compare import aggregate, compare_results, delta_eq, render_rows, render_table
from .domains import DOMAIN_IDS
from .fixpoint import AnalysisConfig, ConfigError, FixpointError, analyze
from .frontend import ParseError, build_cfg, parse
from .frontend.cfg import select_widening_points
from .lattice import DEFAULT_K
from .oracle import DEFAULT_BOUND, OracleInfeasible, check_soundness, collect
from .replay import GOLDEN_DIR, PROGRAMS_DIR, replay

EXIT_OK, EXIT_DIAG, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Diagnostic(Exception):
    pass


def corpus_dir() -> Path:
    return Path(os.environ.get("DESCEND_CORPUS") or PROGRAMS_DIR)


def resolve_source(name: str) -> Path:
    """A path as given, or else relative to the corpus directory."""
    p = Path(name)
    if p.exists():
        return p
    alt = corpus_dir() / name
    return alt if alt.exists() else p


def load_cfg(name: str):
    path = resolve_source(name)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise Diagnostic(f"{name}: cannot read file: {exc.strerror or exc}") from None
    try:
        return build_cfg(parse(text)), path
    except ParseError as exc:
        raise Diagnostic(exc.format(str(name))) from None


def parse_wp(text: Optional[str]):
    if text is None:
        return None
    try:
        return tuple(int(t.strip().lstrip("x")) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"--wp expects comma-separated node ids, got {text!r}") from None


def parse_spec(spec: str):
    """``A`` or ``A:D`` into (asc, desc)."""
    parts = spec.split(":")
    if len(parts) > 2 or not all(parts):
        raise UsageError(f"bad domain spec {spec!r}; expected A or A:D")
    for p in parts:
        if p not in DOMAIN_IDS:
            raise UsageError(f"unknown domain {p!r} (choose from {', '.join(DOMAIN_IDS)})")
    return parts[0], parts[-1] if len(parts) == 2 else None


def make_config(args, asc: str, desc: Optional[str]) -> AnalysisConfig:
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    if args.delay < 0:
        raise UsageError("--delay must be non-negative")
    return AnalysisConfig(
        asc=asc,
        desc=desc,
        k=args.k,
        widening_delay=args.delay,
        wp_override=parse_wp(args.wp),
        narrowing=args.narrowing,
        wp_strategy=args.wp_strategy,
        max_disjuncts=args.max_disjuncts,
    )


# -- subcommands ---------------------------------------------------------------


def render_text(result, name: str, trace: bool) -> str:
    cfg = result.cfg
    counts = result.sweep_counts()
    wp = ", ".join(cfg.label(n) for n in sorted(result.wp)) or "none"
    out = [
        f"# {name}: {result.config.label}, k = {result.config.k}, WP = {{{wp}}}",
        f"# ascending sweeps: {counts['asc']}, descending sweeps: {counts['desc']}",
    ]
    if trace:
        for p in result.phases:
            dom = result.pair.asc if p.phase == "ascending" else result.pair.desc
            for i, x in enumerate(p.sweeps, start=1):
                title = p.phase if p.phase == "transfer" else f"{p.phase} sweep {i}"
                out.append(f"[{title}]")
                out.extend(f"  {cfg.label(n)} = {dom.render(x[n])}" for n in cfg.nodes)
        out.append("[final]")
    out.extend(f"{'  ' if trace else ''}{cfg.label(n)} = {result.render(n)}" for n in cfg.nodes)
    return "\n".join(out) + "\n"


def cmd_analyze(args) -> int:
    if args.a:
        if args.asc or args.desc:
            raise UsageError("--a cannot be combined with --asc/--desc")
        asc, desc = parse_spec(args.a)
    else:
        asc, desc = args.asc or "box", args.desc
    cfg, path = load_cfg(args.source)
    if args.dump_cfg:
        wp = parse_wp(args.wp) or select_widening_points(cfg, args.wp_strategy)
        sys.stdout.write(cfg.to_dot(wp))
        return EXIT_OK
    result = analyze(cfg, make_config(args, asc, desc))
    if args.format == "json":
        sys.stdout.write(result.to_json_text())
    else:
        sys.stdout.write(render_text(result, args.source, args.trace))
    if args.oracle:
        return run_oracle(result, args.bound)
    return EXIT_OK


def run_oracle(result, bound: int) -> int:
    try:
        concrete = collect(result.cfg, bound)
    except OracleInfeasible as exc:
        print(f"oracle: skipped, {exc}", file=sys.stderr)
        return EXIT_DIAG
    bad = check_soundness(result.final, result.domain, concrete)
    print(f"# oracle (bound {bound}): {concrete.total()} states, {len(bad)} violations", file=sys.stderr)
    for v in bad[:20]:
        print(f"unsound: {v}", file=sys.stderr)
    return EXIT_DIAG if bad else EXIT_OK


def _corpus_files() -> list:
    files = sorted(p.name for p in corpus_dir().glob("*.mini"))
    if not files:
        raise Diagnostic(f"no .mini programs in corpus directory {corpus_dir()}")
    return files


def cmd_compare(args) -> int:
    spec_a, spec_b = parse_spec(args.a), parse_spec(args.b)
    sources = args.sources or _corpus_files()
    conf_a, conf_b = make_config(args, *spec_a), make_config(args, *spec_b)
    # ΔEQ: EQ% of (a vs b) minus EQ% of (baseline vs b); "A:D vs D" implies baseline A
    baseline = None
    if args.baseline:
        baseline = make_config(args, *parse_spec(args.baseline))
    elif spec_a[1] and spec_a[1] != spec_a[0] and spec_b == (spec_a[1], None):
        baseline = make_config(args, spec_a[0], None)
    reports, base_reports = [], []
    skipped = []
    for name in sources:
        cfg, _ = load_cfg(name)
        try:
            ra = analyze(cfg, conf_a)
            rb = analyze(cfg, conf_b)
        except ConfigError as exc:
            if args.sources:
                raise
            skipped.append(f"{name}: {exc}")
            continue
        reports.append(compare_results(ra, rb, name))
        if baseline:
            base_reports.append(compare_results(analyze(cfg, baseline), rb, name))
    for s in skipped:
        print(f"skipped {s}", file=sys.stderr)
    if not reports:
        raise Diagnostic("compare: no program could be analyzed under both configurations")
    total = aggregate(reports)
    if baseline:
        total.delta_eq = delta_eq(total, aggregate(base_reports))
    timing = not args.no_timing
    if args.format == "json":
        sys.stdout.write(json.dumps(total.to_json(timing), indent=2) + "\n")
    else:
        sys.stdout.write(render_rows(total))
        sys.stdout.write(render_table([total], timing))
    return EXIT_OK


def cmd_dump_cfg(args) -> int:
    cfg, _ = load_cfg(args.source)
    wp = parse_wp(args.wp)
    if wp is None:
        wp = select_widening_points(cfg, args.wp_strategy)
    sys.stdout.write(cfg.to_dot(wp))
    return EXIT_OK


def cmd_replay(args) -> int:
    outcomes = replay(Path(args.golden), Path(args.programs), update=args.update)
    status = EXIT_OK
    for o in outcomes:
        if o.ok:
            print(f"ok       {o.name}")
            continue
        status = EXIT_DIAG
        if o.error:
            print(f"error    {o.name}: {o.error}", file=sys.stderr)
        else:
            print(f"mismatch {o.name}")
            sys.stdout.write(o.diff)
    return status


# -- argument parsing -----------------------------------------------------------


def _analysis_flags(p: argparse.ArgumentParser):
    p.add_argument("--k", type=int, default=DEFAULT_K, help=f"descending sweeps (default {DEFAULT_K})")
    p.add_argument("--delay", type=int, default=0, help="sweeps of plain lub before widening")
    p.add_argument("--wp", help="widening points as comma-separated node ids, e.g. 3 or x3,x7")
    p.add_argument("--wp-strategy", choices=("body", "head"), default="body",
                   help="automatic widening points: loop-body entries (default) or loop heads")
    p.add_argument("--narrowing", choices=("auto", "glb"), default="auto",
                   help="auto: the domain's own narrowing if any; glb: always glb frozen after k")
    p.add_argument("--max-disjuncts", type=int, default=None,
                   help="collapse a powerset value to its hull above this size")
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="descend", description="Numerical invariants by abstract interpretation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="compute invariants for a program")
    p.add_argument("source")
    p.add_argument("--asc", choices=DOMAIN_IDS, help="ascending domain (default box)")
    p.add_argument("--desc", choices=DOMAIN_IDS, help="descending domain (default: same as --asc)")
    p.add_argument("--a", metavar="A[:D]", help="compact form of --asc A --desc D")
    _analysis_flags(p)
    p.add_argument("--trace", action="store_true", help="print every sweep")
    p.add_argument("--oracle", action="store_true", help="check the result against the bounded concrete semantics")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND, help=f"oracle bound (default {DEFAULT_BOUND})")
    p.add_argument("--dump-cfg", action="store_true", help="print the CFG in DOT format instead")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="classify widening points of two configurations")
    p.add_argument("sources", nargs="*", help="programs (default: every .mini in the corpus)")
    p.add_argument("--a", required=True, metavar="A[:D]", help="first configuration (DOM1)")
    p.add_argument("--b", required=True, metavar="A[:D]", help="second configuration (DOM2)")
    p.add_argument("--baseline", metavar="A[:D]", help="configuration whose EQ%% against DOM2 ΔEQ is measured from")
    p.add_argument("--no-timing", action="store_true", help="omit timings for reproducible output")
    _analysis_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("dump-cfg", help="print the CFG in DOT format")
    p.add_argument("source")
    p.add_argument("--wp")
    p.add_argument("--wp-strategy", choices=("body", "head"), default="body")
    p.set_defaults(func=cmd_dump_cfg)

    p = sub.add_parser("replay", help="re-run the worked examples against golden files")
    p.add_argument("--golden", default=str(GOLDEN_DIR))
    p.add_argument("--programs", default=str(PROGRAMS_DIR))
    p.add_argument("--update", action="store_true", help="rewrite the golden files")
    p.set_defaults(func=cmd_replay)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"descend: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Diagnostic as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DIAG
    except FixpointError as exc:
        print(f"descend: analysis failed: {exc}", file=sys.stderr)
        return EXIT_DIAG


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
