"""Rainbow-free k-colourability of k-uniform hypergraphs.

A colouring with k colours is rainbow-free when it uses every colour but
no hyperedge attains all of them. This package bundles exact decision
procedures for that property, a reproducible random hypergraph model, and
a Monte Carlo harness for the phase transition around the threshold edge
probability (k-1) * ln(n) / n.
"""

from .errors import (
    CapacityError,
    InconsistencyError,
    InvalidInputError,
    NotBracketedError,
    ParseError,
    RainbowFreeError,
)
from .experiments import (
    DEFAULT_ALPHAS,
    CrossingEstimate,
    DominanceReport,
    ExpectationReport,
    SweepConfig,
    SweepRecord,
    derive_trial_seed,
    estimate_crossing,
    format_csv,
    isotonic_nonincreasing,
    records_to_json,
    run_sweep,
    type1_dominance,
    validate_expectation,
    wilson_interval,
    write_csv,
)
from .hypergraph import (
    Colouring,
    Hypergraph,
    SizeSignature,
    classify_signature,
    format_instance,
    induced_subhypergraph,
    is_disconnected,
    is_rainbow_free,
    parse_instance,
    repeated_induced,
)
from .random_model import (
    RandomModelParams,
    expected_type1_count,
    sample,
    threshold_p_star,
)
from .solver import (
    CountResult,
    Decision,
    RecoveryResult,
    count_rainbow_free,
    count_type1_colourings,
    decide_oracle,
    decide_peel,
    decide_type1,
    recover_colouring,
)

__version__ = "0.1.0"
