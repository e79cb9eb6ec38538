"""Secure multi-party computation of Boolean functions with a balance scale and coins."""

from .apparatus import (
    Bag,
    Coin,
    CustomWeightPiece,
    ProtocolIntegrityError,
    RandomSource,
    ScaleOutcome,
    Weight,
    compare,
    find_marked,
    shuffle,
    total_weight,
)
from .engine import (
    ExecutionTrace,
    ProtocolKind,
    ProtocolPlan,
    ResourceCount,
    compile_spec,
    execute,
    plan_and,
    plan_general,
    plan_symmetric,
    plan_threshold,
)
from .functions import (
    And,
    Negated,
    PlayerInputs,
    SpecError,
    Symmetric,
    Threshold,
    TruthTable,
    classify,
    complement,
    evaluate,
)
from .verification import (
    VerificationReport,
    ViewDistribution,
    audit_resources,
    check_correctness,
    check_security,
    enumerate_randomness,
    view_distribution,
)

__version__ = "0.1.0"
