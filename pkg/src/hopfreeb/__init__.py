"""Leafwise cohomology of the affine Reeb flow on the Hopf manifold S^n x S^1.

The main entry points are :func:`obstruction`, :func:`solve_cohomological_equation`,
the invariant distributions in :mod:`hopfreeb.distributions` and the seminorm
diagnostics in :mod:`hopfreeb.frechet`.
"""

from .atlas import TrigPoly, builtin_names, field_from_spec, random_trigpoly
from .contraction import NecessaryConditionViolated, gamma_class, solve_contraction
from .distributions import DistributionV, lift_distribution, orbit_distribution, xstar
from .fields import FieldE, FieldEStar, FieldM, FieldV, apply_X, derivative, mean_V, seminorm
from .frechet import AppendixProfile, appendix_pair, convergence_table, nonsmoothness_witness
from .geometry import CoverPoint, HopfModel, HopfPoint, TransversalPoint, flow, gamma, lift, project
from .grids import GridSpec
from .pipeline import ObstructionClass, SolveReport, obstruction, solve_cohomological_equation, verify_solution

__version__ = "0.1.0"

__all__ = [
    "AppendixProfile", "CoverPoint", "DistributionV", "FieldE", "FieldEStar", "FieldM", "FieldV",
    "GridSpec", "HopfModel", "HopfPoint", "NecessaryConditionViolated", "ObstructionClass",
    "SolveReport", "TransversalPoint", "TrigPoly", "apply_X", "appendix_pair", "builtin_names",
    "convergence_table", "derivative", "field_from_spec", "flow", "gamma", "gamma_class", "lift",
    "lift_distribution", "mean_V", "nonsmoothness_witness", "obstruction", "orbit_distribution",
    "project", "random_trigpoly", "seminorm", "solve_cohomological_equation", "solve_contraction",
    "verify_solution", "xstar",
]
