"""Biphoton polarization qutrits and frequency-nondegenerate ququarts.

Pure-state toolkit for photon pairs from collinear downconversion: state
construction, density and reduced density matrices, Schmidt decompositions,
entanglement quantifiers (Schmidt parameter, concurrence, I-concurrence,
subsystem entropy), single-photon polarization, polarizer-frame rotations,
simulated beam-splitter coincidence counting and two-basis state
reconstruction.  Closed forms are cross-checked against brute-force partial
traces throughout.
"""

from . import jsonio, measurement, qutrit, ququart, reconstruct, tensor
from .measurement import CoincidenceRecord, ExperimentConfig
from .qutrit import (
    BellCoefficients,
    EntanglementReport,
    PolarizationReport,
    QutritState,
    ZeroState,
    make_qutrit,
)
from .ququart import QuquartReport, QuquartState, TwoQubitModelReport, make_ququart
from .reconstruct import (
    Inconsistent,
    IncompleteRecord,
    MagnitudeEstimate,
    MalformedRecord,
    PhaseUnobservable,
    ReconstructionResult,
)
from .tensor import (
    BadDimension,
    ConsistencyError,
    NotHermitian,
    SchmidtDecomposition,
)

__version__ = "0.1.0"

__all__ = [
    "BadDimension",
    "BellCoefficients",
    "CoincidenceRecord",
    "ConsistencyError",
    "EntanglementReport",
    "ExperimentConfig",
    "IncompleteRecord",
    "Inconsistent",
    "MagnitudeEstimate",
    "MalformedRecord",
    "NotHermitian",
    "PhaseUnobservable",
    "PolarizationReport",
    "QuquartReport",
    "QuquartState",
    "QutritState",
    "ReconstructionResult",
    "SchmidtDecomposition",
    "TwoQubitModelReport",
    "ZeroState",
    "jsonio",
    "make_ququart",
    "make_qutrit",
    "measurement",
    "qutrit",
    "ququart",
    "reconstruct",
    "tensor",
]
