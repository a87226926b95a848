"""Equation solving with certified arithmetic and tagged rewriting traces."""

from .expr import Domain, Equation, Interval
from .parse import ParseError, parse_domain, parse_equation, parse_expression, render_json
from .solver import SolutionSet, SolveConfig, solve

__all__ = [
    "Domain",
    "Equation",
    "Interval",
    "ParseError",
    "SolutionSet",
    "SolveConfig",
    "parse_domain",
    "parse_equation",
    "parse_expression",
    "render_json",
    "solve",
]
__version__ = "0.1.0"
