"""Broad learning networks with exact incremental and decremental training.

The library maintains the ridge solution of a flat random-feature network
under four kinds of structural change, without ever retraining: adding
nodes, adding samples, pruning nodes, and unlearning samples.  Every update
is algebraically exact, so the weights always match a from-scratch solve on
the surviving data to rounding.
"""

from .decremental import (
    InputRemovalBatch,
    NodeRemovalPlan,
    remove_inputs_f,
    remove_inputs_q,
    remove_nodes,
)
from .errors import (
    BroadLearnError,
    ConfigurationError,
    CorruptFile,
    DimensionMismatch,
    FactorizationFailure,
    IndexOutOfRange,
    InvalidConfig,
    LabelMismatch,
    MalformedInput,
    NotPositiveDefinite,
    NotSymmetric,
    NumericalError,
    ParseError,
    ScheduleInvalid,
    SingularFactor,
    SingularInnerMatrix,
    SingularTrailingBlock,
    VersionMismatch,
)
from .incremental import add_inputs_f, add_inputs_q, add_nodes
from .linalg import (
    inverse_cholesky,
    retriangularize,
    tri_solve,
    upper_cholesky,
)
from .model import (
    BlsNetwork,
    ExpandedMatrix,
    build_network,
    expand,
    grow_enhancement,
    prune_enhancement,
    sigmoid,
)
from .ridge import (
    InputState,
    NodeState,
    RidgeSolution,
    init_input_state,
    init_node_state,
    ridge_solve,
)

__version__ = "0.1.0"

__all__ = [
    "BlsNetwork",
    "BroadLearnError",
    "ConfigurationError",
    "CorruptFile",
    "DimensionMismatch",
    "ExpandedMatrix",
    "FactorizationFailure",
    "IndexOutOfRange",
    "InputRemovalBatch",
    "InputState",
    "InvalidConfig",
    "LabelMismatch",
    "MalformedInput",
    "NodeRemovalPlan",
    "NodeState",
    "NotPositiveDefinite",
    "NotSymmetric",
    "NumericalError",
    "ParseError",
    "RidgeSolution",
    "ScheduleInvalid",
    "SingularFactor",
    "SingularInnerMatrix",
    "SingularTrailingBlock",
    "VersionMismatch",
    "add_inputs_f",
    "add_inputs_q",
    "add_nodes",
    "build_network",
    "expand",
    "grow_enhancement",
    "init_input_state",
    "init_node_state",
    "inverse_cholesky",
    "prune_enhancement",
    "remove_inputs_f",
    "remove_inputs_q",
    "remove_nodes",
    "retriangularize",
    "ridge_solve",
    "sigmoid",
    "tri_solve",
    "upper_cholesky",
]
