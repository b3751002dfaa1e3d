"""Constant-space streaming estimators of Shannon entropy."""

from .distributions import FamilySpec, Pmf, exact_entropy, interval_masses, materialize, sample
from .errors import (
    CapacityExceeded,
    DomainError,
    InstanceTooLarge,
    InvalidParameter,
    MalformedPartition,
    NormalizationError,
    VacuousPartition,
)
from .general import (
    GeneralParams,
    IntervalPartition,
    build_partition,
    gen_cond_exp,
    gen_est_int,
    gen_est_prob_int,
    general_params,
    iterlog,
    log_star,
    run_general,
    theory_constant_check,
)
from .harness import Constants, RunConfig, RunReport, monte_carlo_success, run_config
from .oracles import (
    ClassifierModel,
    binom_recip_expectation,
    decompose_entropy,
    exact_estint_probs,
    exact_genestint_probs,
    exact_mean_simple,
    hoeffding_bound,
    plug_in_estimate,
    random_hoeffding_bound,
)
from .simple import SimpleParams, bias_bound, concentration_bound, run_simple, simple_params
from .stream import RegisterFile, SymbolStream, high_water
from .two_interval import (
    TwoIntervalParams,
    cond_exp,
    est_int,
    est_prob_int,
    run_two_interval,
    two_interval_params,
)

__version__ = "0.1.0"
