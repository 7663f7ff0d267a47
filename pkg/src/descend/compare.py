"""Per-widening-point precision comparison of two analyses.

Invariants are compared by the lattice order after embedding both values
in a common domain (sets of boxes, or parity with parity). A value split
into more disjuncts therefore counts as more precise even when it
describes the same integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .fixpoint import AnalysisConfig, AnalysisResult, ConfigError, analyze
from .frontend.cfg import Cfg
from .galois import common_embedding
from .domains import PowersetDomain

KINDS = ("EQ", "LT", "GT", "UN")
HEADER_NOTE = "comparison by lattice order in a common domain (disjunct splits count as gains)"


def _common(d1, d2):
    t1, e1 = common_embedding(d1)
    t2, e2 = common_embedding(d2)
    if isinstance(t1, PowersetDomain) != isinstance(t2, PowersetDomain) or (
        not isinstance(t1, PowersetDomain) and type(t1) is not type(t2)
    ):
        raise ConfigError(f"no common domain for {d1.name} and {d2.name}")
    return t1, e1, e2


def classify(v1, d1, v2, d2) -> str:
    """EQ, LT (first strictly stronger), GT (first strictly weaker) or UN."""
    target, e1, e2 = _common(d1, d2)
    a, b = e1(v1), e2(v2)
    below, above = target.leq(a, b), target.leq(b, a)
    if below and above:
        return "EQ"
    if below:
        return "LT"
    if above:
        return "GT"
    return "UN"


@dataclass
class Row:
    program: str
    node: int
    kind: str
    first: str
    second: str


@dataclass
class ComparisonReport:
    dom1: str
    dom2: str
    rows: list = field(default_factory=list)
    seconds: tuple = (0.0, 0.0)
    delta_eq: Optional[float] = None

    @property
    def counts(self) -> dict:
        out = {k: 0 for k in KINDS}
        for r in self.rows:
            out[r.kind] += 1
        return out

    @property
    def total(self) -> int:
        return len(self.rows)

    @property
    def percentages(self) -> dict:
        n = self.total
        return {k: (100.0 * c / n if n else 0.0) for k, c in self.counts.items()}

    def programs(self) -> list:
        """Per-program counts, in first-seen order."""
        seen: dict = {}
        for r in self.rows:
            seen.setdefault(r.program, {k: 0 for k in KINDS})[r.kind] += 1
        return [{"program": p, "wp": sum(c.values()), **c} for p, c in seen.items()]

    def to_json(self, timing: bool = True) -> dict:
        return {
            "note": HEADER_NOTE,
            "dom1": self.dom1,
            "dom2": self.dom2,
            "wp": self.total,
            "counts": self.counts,
            "percentages": {k: round(v, 1) for k, v in self.percentages.items()},
            "delta_eq": None if self.delta_eq is None else round(self.delta_eq, 1),
            "time": {"dom1": round(self.seconds[0], 4), "dom2": round(self.seconds[1], 4)} if timing else None,
            "programs": self.programs(),
            "rows": [
                {"program": r.program, "node": r.node, "class": r.kind, "dom1": r.first, "dom2": r.second}
                for r in self.rows
            ],
        }


def compare_results(r1: AnalysisResult, r2: AnalysisResult, program: str = "") -> ComparisonReport:
    if r1.wp != r2.wp:
        raise ConfigError(
            f"widening points differ: {sorted(r1.wp)} vs {sorted(r2.wp)}"
        )
    d1, d2 = r1.domain, r2.domain
    rows = [
        Row(program, n, classify(r1.final[n], d1, r2.final[n], d2), d1.render(r1.final[n]), d2.render(r2.final[n]))
        for n in sorted(r1.wp)
    ]
    return ComparisonReport(r1.config.label, r2.config.label, rows, (r1.seconds, r2.seconds))


def compare_runs(cfg: Cfg, configs: Sequence[AnalysisConfig], program: str = "") -> ComparisonReport:
    """Analyze *cfg* under both configurations and classify each widening point."""
    if len(configs) != 2:
        raise ConfigError("compare needs exactly two configurations")
    c1, c2 = configs
    return compare_results(analyze(cfg, c1), analyze(cfg, c2), program)


def delta_eq(decoupled_vs_d: ComparisonReport, coarse_vs_d: ComparisonReport) -> float:
    """EQ percentage gained by descending in D instead of staying in A."""
    return decoupled_vs_d.percentages["EQ"] - coarse_vs_d.percentages["EQ"]


def aggregate(reports: Sequence[ComparisonReport]) -> ComparisonReport:
    """Concatenate the rows of reports over the same two configurations."""
    if not reports:
        return ComparisonReport("", "")
    labels = {(r.dom1, r.dom2) for r in reports}
    if len(labels) > 1:
        raise ConfigError(f"cannot aggregate reports over different domains: {sorted(labels)}")
    rows = [row for r in reports for row in r.rows]
    seconds = (sum(r.seconds[0] for r in reports), sum(r.seconds[1] for r in reports))
    return ComparisonReport(reports[0].dom1, reports[0].dom2, rows, seconds)


def render_table(reports: Sequence[ComparisonReport], timing: bool = True) -> str:
    """Aligned text table: one line per report, percentages of widening points.

    With ``timing=False`` the time columns print ``-`` so the output is
    reproducible byte for byte.
    """
    head = ["DOM1", "DOM2", "#WP", "EQ", "LT", "GT", "UN", "ΔEQ", "Time1", "Time2"]
    lines = [head]
    for r in reports:
        p = r.percentages
        lines.append([
            r.dom1,
            r.dom2,
            str(r.total),
            *(f"{p[k]:.1f}" for k in KINDS),
            "-" if r.delta_eq is None else f"{r.delta_eq:.1f}",
            f"{r.seconds[0]:.3f}" if timing else "-",
            f"{r.seconds[1]:.3f}" if timing else "-",
        ])
    widths = [max(len(row[i]) for row in lines) for i in range(len(head))]
    out = [f"# {HEADER_NOTE}", "# EQ/LT/GT/UN in % of widening points; Time in seconds"]
    for row in lines:
        cells = [c.ljust(w) if i < 2 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths))]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out) + "\n"


def render_rows(report: ComparisonReport) -> str:
    out = []
    for r in report.rows:
        prefix = f"{r.program}: " if r.program else ""
        out.append(f"{prefix}x{r.node} {r.kind}  {report.dom1}: {r.first}  {report.dom2}: {r.second}")
    return "\n".join(out) + ("\n" if out else "")
