"""Extended oracle algorithms, exact query counts and the sum-over-histories picture."""

from types import ModuleType as _ModuleType

from .algorithms import (
    RunReport,
    SimonResult,
    SimonSample,
    backdating_check,
    derive_partitions,
    grover_iterate,
    run_extended,
    run_minute,
    simon_sample_loop,
)
from .errors import DomainError
from .families import BUILTIN_NAMES, FunctionFamily, OracleFunction, builtin, parse_family, serialize_family, validate_family
from .gf2 import solve_mod2
from .histories import (
    History,
    HistoryBundle,
    assign_phases,
    enumerate_histories,
    maximize_entanglement,
    shortcut_bundle,
    sum_histories,
)
from .kernels import backend
from .query import (
    AdvancedInfo,
    DecisionTreeResult,
    Mode,
    RuleVerdict,
    advanced_query_complexity,
    check_fifty_percent_rule,
    classical_query_complexity,
)
from .readout import ReadoutUnitary, conditional_x_states, synthesize_readout, verify_correlation
from .state import (
    PhaseAssignment,
    RegisterLayout,
    StateVector,
    VPreparation,
    apply_oracle,
    collapse,
    entanglement_entropy,
    measure_distribution,
    prepare_extended,
)

__version__ = "0.1.0"

__all__ = [n for n, v in dict(globals()).items() if not n.startswith("_") and not isinstance(v, _ModuleType)]
