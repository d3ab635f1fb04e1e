"""Wavelet-packet reduction of polled switch registers, with a Gaussian
detector verifying that reduced registers keep their atypical behavior."""

__version__ = "0.1.0"

from .errors import (
    AlignmentError,
    ContractError,
    FamilyMismatchError,
    InputError,
    InsufficientDataError,
    MonotonicityError,
    ParseError,
    PolicyError,
    RegwaveError,
    UnknownFamilyError,
    UnknownPortError,
)
from .gaussian import (
    AnomalyReport,
    FeatureVector,
    GaussianModel,
    calibrate,
    detect,
    fit,
    probabilities,
    probability,
    select_threshold,
)
from .metrics import ComparisonReport, jaccard, prd, rmse
from .reducer import (
    PacketNode,
    ReducedRegister,
    ReductionPolicy,
    compression_ratio,
    decompose,
    synthesize,
)
from .telemetry import (
    AnomalyScenario,
    Burst,
    Collector,
    PortCounters,
    RegisterStore,
    StatsReply,
    StatsRequest,
    SwitchSim,
    TrafficProfile,
    deltas,
    poll,
    select_server_ports,
)
from .wavelets import (
    FAMILIES,
    FilterPair,
    analysis_step,
    energy,
    make_filter_pair,
    synthesis_step,
)

__all__ = [
    "AlignmentError",
    "AnomalyReport",
    "AnomalyScenario",
    "Burst",
    "Collector",
    "ComparisonReport",
    "ContractError",
    "FAMILIES",
    "FamilyMismatchError",
    "FeatureVector",
    "FilterPair",
    "GaussianModel",
    "InputError",
    "InsufficientDataError",
    "MonotonicityError",
    "PacketNode",
    "ParseError",
    "PolicyError",
    "PortCounters",
    "ReducedRegister",
    "ReductionPolicy",
    "RegisterStore",
    "RegwaveError",
    "StatsReply",
    "StatsRequest",
    "SwitchSim",
    "TrafficProfile",
    "UnknownFamilyError",
    "UnknownPortError",
    "analysis_step",
    "calibrate",
    "compression_ratio",
    "decompose",
    "deltas",
    "detect",
    "energy",
    "fit",
    "jaccard",
    "make_filter_pair",
    "poll",
    "prd",
    "probabilities",
    "probability",
    "rmse",
    "select_server_ports",
    "select_threshold",
    "synthesis_step",
    "synthesize",
]
