"""Rigorous global optimization: interval branch-and-contract cooperating with differential evolution."""

from .coop import Certificate, SolverConfig, Status, orchestrate
from .expr import Problem, parse_problem

__version__ = "0.1.0"

__all__ = ["Certificate", "Problem", "SolverConfig", "Status", "orchestrate", "parse_problem"]
