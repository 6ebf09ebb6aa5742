"""Construction and verification of chain sequences a_n = g_n (1 - g_{n-1})."""

from .chain import (
    ChainVerdict,
    ParameterRun,
    RefutedRun,
    VerdictKind,
    closed_form_g31,
    limit_witness_g,
    maximal_parameters,
    minimal_parameters,
    verdict,
    verify_parameters,
)
from .numeric import Backend, BackendMismatch, DenominatorOverflow, Tolerance, approx_eq, to_float
from .sequences import (
    Constant,
    EpsilonForm,
    EpsilonRule,
    OscExample31,
    PQPeriodic,
    UserTable,
    epsilon_of,
    parse_family,
    term,
)

__version__ = "0.1.0"
