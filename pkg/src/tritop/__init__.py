"""Lower-triangular Toeplitz matrices held as their first column.

Inversion (naive recurrence and Newton doubling), fundamental-matrix
identities, decay classification, p-norm and decay-rate analysis, and
numerical checks of the structural results on inverse sequences.
"""

__version__ = "0.1.0"

from tritop._backend import BACKEND
from tritop.convolution import ConvPlan, Method, conv_full, conv_truncated
from tritop.errors import (
    ConvergenceError,
    InsufficientDataError,
    SingularMatrixError,
    TritopError,
    ValidationError,
)
from tritop.inverse import (
    FundamentalResult,
    InverseMethod,
    InverseResult,
    fundamental,
    invert,
    invert_naive,
    invert_newton,
    residual_ab,
    residual_au,
    verify_uu,
)
from tritop.norms import (
    DecayFit,
    HolderExponents,
    PNormValue,
    estimate_decay_rate,
    generalized_holder_check,
    holder_check,
    pnorm,
    slow_decay_witness,
    young_convolution_check,
    young_product_check,
)
from tritop.sequences import Decay, DecaySource, GeneratorSpec, Kind, RealSeq, SeqClass, classify, generate
from tritop.theorems import TheoremId, TheoremReport, run_suite
