"""Placement solvers and optimality certificates."""
from .base_solver import BaseSolver, Design, TIE_BREAK_RULE, select_best
from .certificates import guarantee_factor, matroid_half_bound, nemhauser_bound, nemhauser_factor, online_bound
from .exhaustive import ExhaustiveSolver, exhaustive_opt
from .greedy import GreedySolver, greedy
from .lazy_greedy import LazyGreedySolver, lazy_greedy
from .matroid_greedy import MatroidGreedySolver, matroid_greedy

SOLVERS = {
    'greedy': GreedySolver,
    'lazy': LazyGreedySolver,
    'exhaustive': ExhaustiveSolver,
}

__all__ = [
    'BaseSolver',
    'Design',
    'ExhaustiveSolver',
    'GreedySolver',
    'LazyGreedySolver',
    'MatroidGreedySolver',
    'SOLVERS',
    'TIE_BREAK_RULE',
    'exhaustive_opt',
    'greedy',
    'guarantee_factor',
    'lazy_greedy',
    'matroid_greedy',
    'matroid_half_bound',
    'nemhauser_bound',
    'nemhauser_factor',
    'online_bound',
    'select_best',
]
