"""Toeplitz-operator sequences and kernel identities on Segal-Bargmann type spaces.

Subpackages by space: :mod:`.fock`, :mod:`.hermite_bergman`, :mod:`.twisted`,
:mod:`.compact_group`; shared engines in :mod:`.quadrature` and :mod:`.specfun`.
"""
from .core import (
    BOUNDED,
    INCONCLUSIVE,
    UNBOUNDED,
    DecayBudget,
    SequenceReport,
    SpaceParams,
    SymbolSpec,
    classify_verdict,
    parse_symbol,
    render_symbol,
)
from .errors import (
    AccuracyError,
    ConstraintError,
    DivergenceError,
    InsufficientDataError,
    RangeError,
    SBTError,
    SingularityError,
    SymbolParseError,
)
from .kernels import BACKEND
from .scaled import ScaledValue

__version__ = "0.1.0"
