"""Equation systems over a CFG and their ascending/descending solvers.

Each phase runs whole sweeps over the nodes in numbering order; within a
sweep every equation reads the newest values (Gauss-Seidel). A snapshot of
the full assignment is kept after each sweep.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional

from .frontend.cfg import Cfg, select_widening_points
from .galois import DomainPair, PairError, make_pair
from .lattice import DEFAULT_K, GlbNarrowing, narrowing_for

MAX_ASCENDING_SWEEPS = 1000


class FixpointError(RuntimeError):
    """The solver could not establish a property it relies on."""


class ConfigError(ValueError):
    """An analysis configuration that cannot be run."""


@dataclass
class EquationSystem:
    """``x_i = lub of transfer(e)(x_src)`` over the edges entering node ``i``."""

    cfg: Cfg
    domain: object
    wp: frozenset
    init: object = None  # value of the entry node; top when None

    def __post_init__(self):
        if self.init is None:
            self.init = self.domain.top()

    def rhs(self, node: int, x: dict):
        d = self.domain
        if node == self.cfg.entry:
            return self.init
        out = d.bottom()
        for e in self.cfg.preds[node]:
            out = d.lub(out, d.transfer(e.transfer, x[e.src]))
        return out

    def bottom_assignment(self) -> dict:
        return {n: self.domain.bottom() for n in self.cfg.nodes}

    def is_post_fixpoint(self, x: dict) -> bool:
        """Whether ``rhs_i(x) ⊑ x_i`` for every node."""
        return all(self.domain.leq(self.rhs(n, x), x[n]) for n in self.cfg.nodes)

    def is_fixpoint(self, x: dict) -> bool:
        return all(self.domain.equal(self.rhs(n, x), x[n]) for n in self.cfg.nodes)

    def with_domain(self, domain, init=None) -> "EquationSystem":
        return EquationSystem(self.cfg, domain, self.wp, init)


@dataclass
class PhaseTrace:
    phase: str  # "ascending", "transfer" or "descending"
    sweeps: list = field(default_factory=list)
    stabilized: bool = False

    @property
    def count(self) -> int:
        return len(self.sweeps)


def is_post_fixpoint(sys: EquationSystem, x: dict) -> bool:
    return sys.is_post_fixpoint(x)


def ascend(sys: EquationSystem, widening_delay: int = 0, max_sweeps: int = MAX_ASCENDING_SWEEPS):
    """Iterate with widening at the widening points and lub elsewhere.

    Stops after the first sweep whose result is a post-fixpoint. The first
    *widening_delay* sweeps use lub everywhere.
    """
    d = sys.domain
    if not d.has_widening:
        raise ConfigError(f"{d.name} can only be used in the descending phase")
    x = sys.bottom_assignment()
    trace = PhaseTrace("ascending")
    for sweep in range(1, max_sweeps + 1):
        widen = sweep > widening_delay
        for n in sys.cfg.nodes:
            v = sys.rhs(n, x)
            x[n] = d.widen(x[n], v) if widen and n in sys.wp else d.lub(x[n], v)
        trace.sweeps.append(dict(x))
        if sys.is_post_fixpoint(x):
            trace.stabilized = True
            return x, trace
    raise FixpointError(
        f"ascending phase on {d.name} did not stabilize within {max_sweeps} sweeps"
    )


def descend(sys: EquationSystem, start: dict, k: int = DEFAULT_K, narrowing=None, check_start: bool = True):
    """Iterate downwards from the post-fixpoint *start* for at most *k* sweeps.

    Widening points use *narrowing* (the domain's own when it has one,
    otherwise glb frozen after *k* uses), other nodes use glb. Stops early
    once a sweep changes nothing or leaves a fixpoint of the system.
    """
    if k < 0:
        raise ConfigError("k must be non-negative")
    d = sys.domain
    if check_start and not sys.is_post_fixpoint(start):
        raise FixpointError("descending phase must start from a post-fixpoint")
    nar = narrowing or narrowing_for(d, k)
    x = dict(start)
    trace = PhaseTrace("descending", stabilized=k == 0)
    for _ in range(k):
        changed = False
        for n in sys.cfg.nodes:
            v = sys.rhs(n, x)
            new = nar.narrow(x[n], v, key=n) if n in sys.wp else d.glb(x[n], v)
            if not d.equal(new, x[n]):
                changed = True
            x[n] = new
        trace.sweeps.append(dict(x))
        if not changed or sys.is_fixpoint(x):
            trace.stabilized = True
            break
    return x, trace


@dataclass(frozen=True)
class AnalysisConfig:
    asc: str
    desc: Optional[str] = None  # None means the same as asc
    k: int = DEFAULT_K
    widening_delay: int = 0
    wp_override: Optional[tuple] = None
    narrowing: str = "auto"  # "auto": native when available; "glb": always glb
    wp_strategy: str = "body"
    max_disjuncts: Optional[int] = None

    @property
    def desc_id(self) -> str:
        return self.desc or self.asc

    @property
    def label(self) -> str:
        return self.asc if self.desc_id == self.asc else f"{self.asc}:{self.desc_id}"

    def validate(self):
        if self.k < 0:
            raise ConfigError("k must be non-negative")
        if self.widening_delay < 0:
            raise ConfigError("widening delay must be non-negative")
        if self.narrowing not in ("auto", "glb"):
            raise ConfigError(f"unknown narrowing mode {self.narrowing!r}")


@dataclass
class AnalysisResult:
    cfg: Cfg
    config: AnalysisConfig
    pair: DomainPair
    wp: frozenset
    post_fixpoint: dict  # ascending result, in the ascending domain
    transferred: dict  # the same, mapped into the descending domain
    final: dict
    phases: list
    seconds: float

    @property
    def domain(self):
        return self.pair.desc

    def render(self, node: int) -> str:
        return self.domain.render(self.final[node])

    def sweep_counts(self) -> dict:
        counts = {"asc": 0, "desc": 0}
        for p in self.phases:
            if p.phase == "ascending":
                counts["asc"] = p.count
            elif p.phase == "descending":
                counts["desc"] = p.count
        return counts

    def to_json(self) -> dict:
        def dump(phase, x):
            dom = self.pair.asc if phase == "ascending" else self.pair.desc
            return {str(n): dom.render(x[n]) for n in self.cfg.nodes}

        return {
            "nodes": [{"id": n, "label": self.cfg.label(n)} for n in self.cfg.nodes],
            "widening_points": sorted(self.wp),
            "domains": {"asc": self.pair.asc.name, "desc": self.pair.desc.name},
            "phases": [
                {"phase": p.phase, "sweeps": [dump(p.phase, s) for s in p.sweeps]}
                for p in self.phases
            ],
            "final": dump("descending", self.final),
            "stabilized": all(p.stabilized for p in self.phases),
            "sweep_counts": self.sweep_counts(),
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"


def resolve_wp(cfg: Cfg, config: AnalysisConfig) -> frozenset:
    if config.wp_override is not None:
        wp = frozenset(config.wp_override)
        unknown = sorted(wp - set(cfg.nodes))
        if unknown:
            raise ConfigError(f"widening point(s) {unknown} are not CFG nodes")
        return wp
    try:
        return select_widening_points(cfg, config.wp_strategy)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def check_transfer_post_fixpoint(sys_a: EquationSystem, sys_d: EquationSystem, pair: DomainPair, x: dict) -> bool:
    """Whether the image of the post-fixpoint *x* is a post-fixpoint in the
    descending domain."""
    return sys_d.is_post_fixpoint({n: pair.gamma(v) for n, v in x.items()})


def check_descent_precision(sys_a: EquationSystem, sys_d: EquationSystem, pair: DomainPair, x: dict, k: int) -> bool:
    """Whether ``k`` glb-descending sweeps in the finer domain from ``γ(x)``
    stay below ``γ`` of ``k`` glb-descending sweeps in the coarse domain."""
    lo, _ = descend(sys_d, {n: pair.gamma(v) for n, v in x.items()}, k,
                    narrowing=GlbNarrowing(sys_d.domain, k))
    hi, _ = descend(sys_a, x, k, narrowing=GlbNarrowing(sys_a.domain, k))
    return all(sys_d.domain.leq(lo[n], pair.gamma(hi[n])) for n in sys_a.cfg.nodes)


# operation names used by the interface documentation
check_lemma1 = check_transfer_post_fixpoint
check_prop1 = check_descent_precision


def make_pair_for(cfg: Cfg, config: AnalysisConfig) -> DomainPair:
    try:
        return make_pair(config.asc, config.desc_id, cfg.variables, config.max_disjuncts)
    except (PairError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def analyze(cfg: Cfg, config: AnalysisConfig) -> AnalysisResult:
    """Classical analysis when both domains agree, decoupled otherwise."""
    config.validate()
    pair = make_pair_for(cfg, config)
    wp = resolve_wp(cfg, config)
    t0 = time.perf_counter()
    sys_a = EquationSystem(cfg, pair.asc, wp)
    x_asc, asc_trace = ascend(sys_a, config.widening_delay)
    phases = [asc_trace]
    if pair.is_identity:
        sys_d, start = sys_a, x_asc
    else:
        sys_d = sys_a.with_domain(pair.desc, pair.gamma(sys_a.init))
        start = {n: pair.gamma(v) for n, v in x_asc.items()}
        phases.append(PhaseTrace("transfer", [dict(start)], True))
        if not sys_d.is_post_fixpoint(start):
            raise FixpointError(
                f"transferred post-fixpoint is not a post-fixpoint in {pair.desc.name}; "
                "the lifted transfer functions are unsound"
            )
    force_glb = config.narrowing == "glb"
    nar = narrowing_for(pair.desc, config.k, force_glb=force_glb)
    final, dsc_trace = descend(sys_d, start, config.k, narrowing=nar, check_start=pair.is_identity)
    phases.append(dsc_trace)
    return AnalysisResult(
        cfg=cfg,
        config=config,
        pair=pair,
        wp=wp,
        post_fixpoint=x_asc,
        transferred=start,
        final=final,
        phases=phases,
        seconds=time.perf_counter() - t0,
    )


def analyze_classical(cfg: Cfg, domain_id: str, config: Optional[AnalysisConfig] = None, **kw) -> AnalysisResult:
    base = config or AnalysisConfig(domain_id, **kw)
    return analyze(cfg, AnalysisConfig(**{**base.__dict__, "asc": domain_id, "desc": None}))


def analyze_decoupled(cfg: Cfg, asc_id: str, desc_id: str, config: Optional[AnalysisConfig] = None, **kw) -> AnalysisResult:
    base = config or AnalysisConfig(asc_id, **kw)
    return analyze(cfg, AnalysisConfig(**{**base.__dict__, "asc": asc_id, "desc": desc_id}))
