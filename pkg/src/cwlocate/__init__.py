"""Exact eigenvalue location for graphs of bounded (slick) clique-width."""

__version__ = "0.1.0"

from .engine import MatrixSpec, diagonalize
from .expr import (
    LabeledGraph, ParseError, SlickExpr, ClassicExpr, evaluate, format_expr, parse_classic,
    parse_expr, parse_slick,
)
from .spectral import Inertia, count_eigenvalues, inertia, multiplicity, parse_interval
from .translate import classic_to_slick, eta_to_slick, slick_to_classic
