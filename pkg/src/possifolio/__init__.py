"""Fuzzy random portfolio selection via possibility-based chance constraints."""

from .exact import Solution, brute_force_grid, solve_exact
from .frv import STANDARD_NORMAL, FuzzyRandomReturn, ScalarDistribution, quantile, realize, sample
from .fuzzy import (LRFuzzyNumber, ReferenceFunction, alpha_cut, membership,
                    possibility_ge_crisp, possibility_ge_fuzzy)
from .harmony import HSParams, solve_hs
from .model import (PortfolioInstance, aggregate_return, load_fixture, load_instance,
                    save_instance, validate)
from .montecarlo import estimate_constraint_chance, estimate_objective_chance
from .reduction import ChanceLevels, ReducedLP, reduce

__version__ = "0.1.0"
