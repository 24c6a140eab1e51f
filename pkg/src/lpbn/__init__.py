"""Static analysis of ground normal logic programs through their Boolean-network encoding."""

from .analyzer import AnalysisOptions, AnalysisReport, CountInterval, analyze, construct_complementary_pair, solve
from .bn import BooleanNetwork, encode, fixed_points, influence_graph
from .errors import BudgetExceeded, Inapplicable, SoundnessError
from .fixpoint import least_fixpoint, stable_via_lfp
from .program import ParseError, Program, Rule, format_program, is_stable_model, parse_program
from .sgraph import Sign, SignedDigraph, dependence_graph

__version__ = "0.1.0"
