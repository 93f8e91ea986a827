"""Renyi divergences, the Lorenz-curve majorization lattice, and guessing moments
on finite discrete distributions, with a seeded verification harness and CLI."""

from .guessing import (
    BudgetExceededError,
    RankingProfile,
    compare_ranking_vs_permutations,
    guessing_bound,
    iid_experiment,
    is_guessing_function,
    moment,
    ranking_function,
)
from .lattice import NotMajorizedError, construct_markov_operator, join, meet, representative
from .lorenz import (
    LorenzCurve,
    OrderingRelation,
    Segment,
    build_curve,
    compare,
    curve_csv,
    divergence_from_curve,
    is_rearrangement,
    upper_curve_slopes,
)
from .measures import (
    Atom,
    DensityPair,
    FiniteDistribution,
    ValidationError,
    make_pair,
    product,
    random_pair,
)
from .properties import CheckReport, run_all
from .renyi import (
    DivergenceResult,
    alpha_sweep,
    chi_sq,
    hellinger_sq,
    kl,
    power_divergence,
    renyi_divergence,
    separation_distance,
    total_variation,
)
from .transforms import (
    Channel,
    Partition,
    additivity_check,
    apply,
    coarsen,
    partition_channel,
    partition_sweep,
    random_channel,
    refines,
)

__version__ = "0.1.0"
