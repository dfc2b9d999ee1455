from .cone import ConeSpec, LossReport, MembershipReport, avoids_partial_loss, lower_prevision_from_cone, membership, natex_cone
from .core import (
    AssessmentSet,
    ConditionalAssessment,
    ConditioningFamily,
    Event,
    Gamble,
    Instance,
    ProductSpace,
    Query,
    Space,
    cylindrical_extension,
    indicator,
    serialize_instance,
    validate_instance,
)
from .envelope import (
    CredalPolytope,
    LinearPrevision,
    MassFunction,
    cdd_vertices,
    credal_vertices,
    grid_oracle_check,
    linear_prevision_from_mass,
    lower_envelope_value,
    p_axiom_suite,
)
from .errors import (
    IncoherentError,
    InstanceError,
    LpWitnessError,
    NatexError,
    PreconditionError,
    QueryError,
    ScopeError,
    SpaceMismatchError,
)
from .lowprev import (
    CoherenceReport,
    NaturalExtension,
    Verdict,
    check_coherence,
    check_coherence_direct,
    is_coherent_extension,
    lp_axiom_suite,
    natural_extension_value,
    upper_natural_extension_value,
)
from .measurable import NotMeasurable, SimpleDecomposition, is_measurable, is_simple_measurable, threshold_condition
from .product import (
    JointCone,
    JointModel,
    MarginalQuery,
    build_joint_generators,
    closure_invariance_check,
    generators_desirable_check,
    independence_check,
    independent_domain,
    joint_avoids_partial_loss,
    joint_value,
    lower_upper_joint,
    marginal_consistency_check,
)
from .verify import (
    SuiteConfig,
    check_external_additivity,
    check_factorisation,
    check_theorem_factadd,
    product_expectation,
    run_property_suite,
)

__all__ = [
    "AssessmentSet",
    "CoherenceReport",
    "ConditionalAssessment",
    "ConditioningFamily",
    "ConeSpec",
    "CredalPolytope",
    "Event",
    "Gamble",
    "IncoherentError",
    "Instance",
    "InstanceError",
    "JointCone",
    "JointModel",
    "LinearPrevision",
    "LossReport",
    "LpWitnessError",
    "MarginalQuery",
    "MassFunction",
    "MembershipReport",
    "NatexError",
    "NaturalExtension",
    "NotMeasurable",
    "PreconditionError",
    "ProductSpace",
    "Query",
    "QueryError",
    "ScopeError",
    "SimpleDecomposition",
    "Space",
    "SpaceMismatchError",
    "SuiteConfig",
    "Verdict",
    "avoids_partial_loss",
    "build_joint_generators",
    "cdd_vertices",
    "check_coherence",
    "check_coherence_direct",
    "check_external_additivity",
    "check_factorisation",
    "check_theorem_factadd",
    "closure_invariance_check",
    "credal_vertices",
    "cylindrical_extension",
    "generators_desirable_check",
    "grid_oracle_check",
    "independence_check",
    "independent_domain",
    "indicator",
    "is_coherent_extension",
    "is_measurable",
    "is_simple_measurable",
    "joint_avoids_partial_loss",
    "joint_value",
    "linear_prevision_from_mass",
    "lower_envelope_value",
    "lower_prevision_from_cone",
    "lower_upper_joint",
    "lp_axiom_suite",
    "marginal_consistency_check",
    "membership",
    "natex_cone",
    "natural_extension_value",
    "p_axiom_suite",
    "product_expectation",
    "run_property_suite",
    "serialize_instance",
    "threshold_condition",
    "upper_natural_extension_value",
    "validate_instance",
]
