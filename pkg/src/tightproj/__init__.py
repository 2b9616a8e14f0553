"""Tight projections of frames and positive operators."""

__version__ = "0.1.0"

from ._accel import default_backend
from .errors import (
    CertificateError,
    ContractError,
    ConvergenceError,
    InfeasibleAlphaError,
    InsufficientTruncationError,
    InvalidInputError,
    ModelError,
    NotApplicableError,
    ObstructionError,
    PartitionExhaustedError,
    TightProjError,
)
from .finite_codim import CofiniteProjection, finite_codim_projection, rank_of_translate
from .intervals import IntervalSet
from .linalg import (
    EigenDecomp,
    FrameSpec,
    Projection,
    SymMatrix,
    TightnessCertificate,
    compress,
    frame_bounds,
    frame_operator,
    jacobi_eigh,
    project_frame,
    verify_tight,
)
from .multop import (
    BlockSystem,
    MultOpSpec,
    PartitionScheme,
    block_eigenvalues,
    essential_range_pair,
    partition_preimage,
    symmetric_dyadic_partition,
    tighten_multop,
)
from .pairing import (
    Pair,
    PairingPlan,
    Singleton,
    build_pairing,
    choose_alpha,
    eigenspace_projection,
    pairing_projection,
    tighten,
)
from .spectrum import (
    Classification,
    LimitPoint,
    SpectrumModel,
    Verdict,
    classify,
    find_alpha_infinite,
    fk_membership,
    truncated_plan,
)
