from .generators import random_density, random_state, rng_for
from .serialization import (
    load_matrix,
    load_report,
    matrix_to_payload,
    payload_to_channel,
    payload_to_matrix,
    channel_to_payload,
    save_matrix,
    save_report,
)
from .suites import (
    ConfigError,
    DEFAULT_TOLERANCES,
    SUITE_ORDER,
    SuiteConfig,
    make_config,
    recheck_counterexample,
    resolve_seed,
    run_suite,
)

__all__ = [
    "ConfigError",
    "DEFAULT_TOLERANCES",
    "SUITE_ORDER",
    "SuiteConfig",
    "channel_to_payload",
    "load_matrix",
    "load_report",
    "make_config",
    "matrix_to_payload",
    "payload_to_channel",
    "payload_to_matrix",
    "random_density",
    "random_state",
    "recheck_counterexample",
    "resolve_seed",
    "rng_for",
    "run_suite",
    "save_matrix",
    "save_report",
]
