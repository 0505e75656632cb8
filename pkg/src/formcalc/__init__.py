"""Functional calculus of positive quadratic forms on finite-dimensional
spaces, operator interpolation and geometric means, relative entropy on
matrix algebras, and verification suites for the monotonicity of relative
entropy under unital Schwarz maps."""

from .algebra import (
    AlgebraDescriptor,
    State,
    form_left,
    form_right,
    functional_value,
    hs_inner,
    make_state,
    subalgebra_injection,
    unvec,
    vec,
)
from .channels import (
    KrausChannel,
    LinearMapOnAlgebra,
    apply,
    check_positive_unital,
    check_schwarz,
    diagonal_pinching,
    embed_tensor_identity,
    from_kraus,
    injection_channel,
    pinching_channel,
    pullback_form_vs_state_form_gap,
    pullback_state,
    random_unital_cp,
    schwarz_defect,
    transpose_map,
)
from .entropy import (
    LimitSchedule,
    gamma_states,
    relative_entropy,
    relative_entropy_functional,
    relative_entropy_limit,
)
from .hermlin import (
    DimensionMismatchError,
    EigenDecomposition,
    LoewnerResult,
    NotPSDError,
    SpectralDomainError,
    ValidationError,
    apply_hermitian_function,
    apply_spectral_function,
    herm_eig,
    hermitian_part,
    loewner_leq,
    matrix_log_support,
    matrix_pinv,
    matrix_power,
    matrix_sqrt,
    psd_project,
    support_projector,
    validate_hermitian,
)
from .qforms import (
    CompatibleRepresentation,
    HomogeneousFunction,
    QuadraticForm,
    SesquilinearForm,
    build_compatible_representation,
    evaluate_form,
    functional_calculus_form,
    geometric_mean,
    interpolate,
    is_dominated,
    pullback_form,
    random_dominated_form,
)
from .harness import (
    SuiteConfig,
    load_matrix,
    make_config,
    random_density,
    recheck_counterexample,
    run_suite,
    save_matrix,
    save_report,
)

__version__ = "0.1.0"
