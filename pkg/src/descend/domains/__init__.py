"""Abstract domains and the id registry used by the driver and CLI."""

from __future__ import annotations

from typing import Sequence

from .env import BoxDomain, Env, EnvDomain, ParityEnvDomain
from .interval import BOTTOM, TOP, INF, Interval, IntervalDomain
from .interval import add as itv_add
from .interval import narrow as itv_narrow
from .interval import widen as itv_widen
from .parity import Parity, ParityDomain
from .parity import add as par_add
from .powerset import (
    PowersetDomain,
    pset_glb,
    pset_leq,
    pset_lub,
    pset_normalize,
    pset_transfer,
)

DOMAIN_IDS = ("par", "itv", "box", "iset", "bset")
POWERSET_IDS = ("iset", "bset")
SINGLE_VARIABLE_IDS = ("itv", "iset")


class DomainError(ValueError):
    """An unknown domain id, or one that does not fit the program."""


def make_domain(domain_id: str, variables: Sequence[str], max_disjuncts=None):
    """Instantiate domain *domain_id* over the program *variables*.

    ``itv`` and ``iset`` are the one-variable views of ``box`` and
    ``bset``: values print as bare intervals.
    """
    variables = tuple(variables)
    if domain_id not in DOMAIN_IDS:
        raise DomainError(f"unknown domain {domain_id!r} (choose from {', '.join(DOMAIN_IDS)})")
    if domain_id in SINGLE_VARIABLE_IDS and len(variables) != 1:
        raise DomainError(
            f"domain {domain_id!r} needs a program with exactly one variable, "
            f"this one has {len(variables)}; use {'box' if domain_id == 'itv' else 'bset'}"
        )
    if domain_id == "par":
        return ParityEnvDomain(variables)
    if domain_id == "itv":
        return BoxDomain(variables, name="itv", scalar_view=True)
    if domain_id == "box":
        return BoxDomain(variables)
    base = make_domain("itv" if domain_id == "iset" else "box", variables)
    return PowersetDomain(base, name=domain_id, max_disjuncts=max_disjuncts)


__all__ = [
    "BOTTOM", "TOP", "INF", "Interval", "IntervalDomain", "Parity", "ParityDomain",
    "Env", "EnvDomain", "BoxDomain", "ParityEnvDomain", "PowersetDomain",
    "DomainError", "make_domain", "DOMAIN_IDS", "POWERSET_IDS",
    "par_add", "itv_widen", "itv_narrow", "itv_add",
    "pset_normalize", "pset_lub", "pset_leq", "pset_glb", "pset_transfer",
]
