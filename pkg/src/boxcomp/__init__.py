"""Toolkit for two-input, two-output bipartite correlation boxes.

Construct boxes and deterministic strategies, measure CHSH values and
signal/indeterminacy trade-offs, decompose boxes over communication
vertices, certify randomness under signaling, and reproduce singlet
statistics by Monte Carlo.
"""

from .boxcore import (
    CorrelationBox,
    DeterministicStrategy,
    INPUT_PAIRS,
    PRScope,
    Relabelling,
    STRATEGY_NAMES,
    all_relabellings,
    all_scopes,
    apply_relabelling,
    dump_box,
    enumerate_deterministic,
    infer_scope,
    is_nonsignaling,
    load_box,
    mix,
    pr_box,
    relabel_strategy,
    scope_relabelling,
    scope_strategies,
    strategy_box,
    strategy_name,
)
from .certify import (
    Certificate,
    SuiteCheck,
    SuiteReport,
    certified_indeterminacy_bound,
    complementarity_report,
    entropic_complementarity,
    max_marginal_bias_zero_signal,
    relaxed_bell_check,
    run_property_suite,
)
from .decompose import (
    Decomposition,
    ResourceSpec,
    SignedSignals,
    conditional_lower_bounds,
    lp_vertices,
    min_comm_cost,
    pironio_bound,
    random_feasible_box,
    random_resource_spec,
    resource_box,
    signed_signals,
)
from .errors import (
    BoxFormatError,
    BoxInvariantError,
    DomainError,
    Infeasible,
    NumericalError,
    ScopeError,
    WeightError,
)
from .measures import (
    MeasureReport,
    SignalReport,
    binary_entropy,
    chsh,
    chsh_max,
    correlators,
    entropic_indeterminacy,
    entropic_indeterminacy_per_setting,
    entropic_signal,
    entropic_signal_lower_bound,
    indeterminacy,
    indeterminacy_per_setting,
    measure_report,
    signal,
    two_point_mutual_information,
)
from .simulate import (
    CHUNK,
    Direction,
    SweepPoint,
    TrialData,
    chunk_xor_counts,
    run_resource,
    sample_direction,
    sgn01,
    simulate_singlet,
    sweep_angles,
    trial_records,
    write_sweep_csv,
)

__version__ = "0.1.0"
