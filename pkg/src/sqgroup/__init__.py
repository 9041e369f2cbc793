"""Exact computations with square groups, presquare groups and quadratic functors."""

from .abelian import AbHom, FgAbGroup, cyclic, parse_group
from .nil2 import Nil2Group
from .psg import PreSquareGroup

__all__ = ["AbHom", "FgAbGroup", "Nil2Group", "PreSquareGroup", "cyclic", "parse_group"]
__version__ = "0.1.0"
