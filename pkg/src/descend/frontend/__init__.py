from .ast import Program
from .cfg import Cfg, Edge, build_cfg, select_widening_points
from .parser import ParseError, parse

__all__ = ["Cfg", "Edge", "ParseError", "Program", "build_cfg", "parse", "select_widening_points"]
