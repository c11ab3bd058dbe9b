"""State-vector simulation of QFT-based circular convolution circuits.

Subpackages by role: :mod:`qconv.numerics` (classical DFT and convolution
oracle), :mod:`qconv.simulator` (register operations), :mod:`qconv.qft`,
:mod:`qconv.convolution` (the pipelines) and :mod:`qconv.cli`.
"""

from .convolution import (
    FrequencyResponse,
    MagnitudeDiagonal,
    PhaseBank,
    PipelineResult,
    conv1_matrix,
    convolve_2qubit,
    convolve_abstract,
    convolve_ideal_filter,
    convolve_with_zero_workaround,
)
from .errors import (
    AnnihilationError,
    ImpossibleOutcomeError,
    InvalidLengthError,
    NonUnitaryError,
    OrderingError,
    QConvError,
    UndefinedPhaseError,
    ZeroNormError,
)
from .numerics import circular_convolve, dft, idft, normalize
from .qft import iqft, qft
from .simulator import Permutation, StateVector

__version__ = "0.1.0"
