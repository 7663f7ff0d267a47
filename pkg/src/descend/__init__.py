"""Numerical invariants by abstract interpretation, with the descending phase
optionally run on a more precise domain than the ascending one."""

__version__ = "0.1.0"
