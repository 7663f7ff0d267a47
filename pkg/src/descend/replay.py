"""Re-run the worked examples and diff them against frozen renderings."""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .fixpoint import AnalysisConfig, AnalysisResult, analyze
from .frontend import build_cfg, parse

PROGRAMS_DIR = Path(str(resources.files("descend") / "programs"))
GOLDEN_DIR = Path(str(resources.files("descend") / "golden"))


class MissingFixture(FileNotFoundError):
    pass


def _load(programs_dir: Path, name: str):
    path = programs_dir / name
    if not path.is_file():
        raise MissingFixture(f"missing fixture program {path}")
    return build_cfg(parse(path.read_text(encoding="utf-8")))


def _table(rows: list) -> list:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def _columns(result: AnalysisResult) -> list:
    """(title, domain, assignment) for first and last sweep of each phase."""
    cols = []
    for p in result.phases:
        dom = result.pair.asc if p.phase == "ascending" else result.pair.desc
        if p.phase == "transfer":
            cols.append(("transfer", dom, p.sweeps[0]))
            continue
        tag = "asc" if p.phase == "ascending" else "dsc"
        cols.append((f"{tag}/1", dom, p.sweeps[0]))
        if p.count > 1:
            what = "post-fixpoint" if tag == "asc" else "final"
            cols.append((f"{tag}/{p.count} ({what})", dom, p.sweeps[-1]))
    return cols


def _node_table(title: str, result: AnalysisResult) -> str:
    cols = _columns(result)
    rows = [["node"] + [c[0] for c in cols]]
    for n in result.cfg.nodes:
        rows.append([result.cfg.label(n)] + [dom.render(x[n]) for _, dom, x in cols])
    return "\n".join([title, *_table(rows)]) + "\n"


def counter_itv(programs_dir: Path = PROGRAMS_DIR) -> str:
    cfg = _load(programs_dir, "counter.mini")
    r = analyze(cfg, AnalysisConfig("itv", k=2, widening_delay=0, wp_override=(3,)))
    return _node_table("# itv on counter.mini; WP = {x3}; widening delay 0; k = 2", r)


def counter_iset(programs_dir: Path = PROGRAMS_DIR) -> str:
    cfg = _load(programs_dir, "counter.mini")
    r = analyze(cfg, AnalysisConfig("itv", "iset", k=2, wp_override=(3,)))
    return _node_table("# itv ascending, iset descending, on counter.mini; WP = {x3}; k = 2", r)


FIB_VARS = ("P", "F", "K")


def _project(env, names) -> str:
    return ", ".join(f"{v} in {env[v]}" for v in names)


def _fib_value(dom, value, names) -> str:
    if isinstance(value, frozenset):
        keys = {tuple((e[v].lo, e[v].hi) for v in names): e for e in value}
        return "{" + "; ".join(_project(keys[k], names) for k in sorted(keys)) + "}"
    return "bot" if value.values is None else _project(value, names)


def fib_descent(programs_dir: Path = PROGRAMS_DIR) -> str:
    cfg = _load(programs_dir, "fib.mini")
    lines = ["# fib.mini (N = 7); value at the widening point projected on P, F, K; k = 10"]
    rows = []
    for label, conf in (
        ("box", AnalysisConfig("box", k=10)),
        ("box:bset", AnalysisConfig("box", "bset", k=10)),
    ):
        r = analyze(cfg, conf)
        (wp,) = sorted(r.wp)
        for p in r.phases:
            if p.phase == "ascending" and label != "box":
                continue  # identical to the box rows
            dom = r.pair.asc if p.phase == "ascending" else r.pair.desc
            dom_name = "bset" if p.phase != "ascending" and label != "box" else "box"
            tag = {"ascending": "asc", "transfer": "dsc", "descending": "dsc"}[p.phase]
            prev = None
            for i, x in enumerate(p.sweeps):
                step = 0 if p.phase == "transfer" else i + 1
                text = _fib_value(dom, x[wp], FIB_VARS)
                last = i == p.count - 1 and p.phase != "transfer"
                if last and text == prev and p.stabilized:
                    kind = "post-fixpoint" if tag == "asc" else "fixpoint"
                    text = f"same value (detected {kind} in {dom_name})"
                else:
                    prev = text
                rows.append([dom_name, f"{tag}/{step}", text])
    return "\n".join(lines + _table(rows)) + "\n"


REPLAYS = {"counter_itv.txt": counter_itv, "counter_iset.txt": counter_iset, "fib_descent.txt": fib_descent}


@dataclass
class ReplayOutcome:
    name: str
    ok: bool
    diff: str = ""
    error: Optional[str] = None


def replay(golden_dir: Path = GOLDEN_DIR, programs_dir: Path = PROGRAMS_DIR, update: bool = False) -> list:
    """Regenerate each rendering and compare it byte for byte with its golden file."""
    out = []
    for name, fn in REPLAYS.items():
        golden = Path(golden_dir) / name
        try:
            text = fn(Path(programs_dir))
        except MissingFixture as exc:
            out.append(ReplayOutcome(name, False, error=str(exc)))
            continue
        if update:
            golden.write_text(text, encoding="utf-8")
        if not golden.is_file():
            out.append(ReplayOutcome(name, False, error=f"missing golden file {golden}"))
            continue
        expected = golden.read_text(encoding="utf-8")
        if expected == text:
            out.append(ReplayOutcome(name, True))
        else:
            diff = "".join(difflib.unified_diff(
                expected.splitlines(keepends=True), text.splitlines(keepends=True),
                fromfile=f"golden/{name}", tofile=f"actual/{name}",
            ))
            out.append(ReplayOutcome(name, False, diff=diff))
    return out
