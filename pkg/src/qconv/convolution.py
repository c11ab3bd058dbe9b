"""Circular convolution pipelines built from the QFT.

A signal ``f`` is loaded as the amplitudes of a register, transformed with
the QFT, multiplied by a known frequency response ``H`` and transformed
back. Multiplication by ``H`` is split into a unitary part (the phases of
``H``, applied as controlled single-qubit rotations) and a magnitude part
``D = diag(|H_p|)``. ``D`` is not unitary. It is realized in two ways here:

* abstractly, as a diagonal followed by renormalization (what a successful
  measurement would leave behind), for any response;
* exactly, for ideal filters with ``|H_p|`` in {0, 1}, by adding an ancilla
  qubit, moving the stop-band amplitudes into the ancilla = 1 half with a
  permutation, running the inverse QFT only on the surviving half and
  post-selecting the ancilla.

Every pipeline returns a :class:`PipelineResult`. ``scale_A`` there is
``sqrt(sum_p |Y_p|^2) = sqrt(N * sum_n |y_n|^2)``, so the true convolution is
``recovered_y = scale_A / sqrt(N) * output_state``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import qft as qft_mod
from .errors import (
    AnnihilationError,
    InvalidLengthError,
    OrderingError,
    UndefinedPhaseError,
)
from .numerics import as_signal, circular_convolve, dft, idft
from .qft import CONJUGATE_PAIRS, NATURAL, PAIRED, controlled_iqft, iqft, qft
from .simulator import (
    Permutation,
    StateVector,
    apply_diagonal,
    apply_gate,
    apply_permutation,
    apply_two_level,
    extend_with_ancilla,
    is_unitary,
    operator_matrix,
    postselect,
)

SYMMETRY_TOL = 1e-10
ZERO_PHASE_TOL = 1e-12
ANNIHILATION_TOL = 1e-14
UNIT_NORM_TOL = 1e-10
WORKAROUND_CONSTANTS = (1.0, 2.0, 3.0)
WORKAROUND_MARGIN = 1e-6

AFTER_PHASES = "after_phases"
BEFORE_PHASES = "before_phases"

LOWPASS = "lowpass"
HIGHPASS = "highpass"
LOWPASS_BAND = (0, 1, 7)
HIGHPASS_BAND = (2, 3, 4, 5, 6)


@dataclass(frozen=True)
class FrequencyResponse:
    """Frequency characteristic ``H_p`` of an LTI system, natural order."""

    values: np.ndarray

    def __post_init__(self):
        values = as_signal(self.values).copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_impulse(cls, h) -> FrequencyResponse:
        return cls(dft(h))

    @classmethod
    def identity(cls, n: int) -> FrequencyResponse:
        return cls(np.ones(n))

    @classmethod
    def example1(cls) -> FrequencyResponse:
        """Two-tap moving average, ``h = [1, 1, 0, 0, 0, 0, 0, 0] / 2``."""
        return cls.from_impulse(np.array([1, 1, 0, 0, 0, 0, 0, 0]) / 2)

    @classmethod
    def lowpass12(cls) -> FrequencyResponse:
        """Ideal 8-point low-pass with pass-band phases of +-pi/12."""
        H = np.zeros(8, dtype=complex)
        H[0] = 1.0
        H[1] = np.exp(1j * np.pi / 12)
        H[7] = np.exp(-1j * np.pi / 12)
        return cls(H)

    @classmethod
    def highpass(cls) -> FrequencyResponse:
        H = np.ones(8, dtype=complex)
        H[list(LOWPASS_BAND)] = 0.0
        return cls(H)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def phases(self) -> np.ndarray:
        """``arg(H_p)``, reported as 0 where ``H_p`` vanishes."""
        return np.where(self.magnitudes > ZERO_PHASE_TOL, np.angle(self.values), 0.0)

    @property
    def unit_phases(self) -> np.ndarray:
        return np.exp(1j * self.phases)

    @property
    def real_impulse(self) -> bool:
        """True when ``H_{N-p} = conj(H_p)``, i.e. the impulse response is real."""
        H = self.values
        mirrored = np.conj(H[(-np.arange(self.n)) % self.n])
        return bool(np.max(np.abs(H - mirrored)) <= SYMMETRY_TOL)

    def impulse_response(self) -> np.ndarray:
        return idft(self.values)

    def shifted(self, const: float) -> FrequencyResponse:
        return FrequencyResponse(self.values + const)


@dataclass(frozen=True)
class PhaseBank:
    """Phases of H1, H2, H3 and signs of H0, H4 for the 3-qubit phase circuit."""

    phi1: float
    phi2: float
    phi3: float
    s0: int = 1
    s4: int = 1

    def gates(self) -> dict[int, np.ndarray]:
        """U0 .. U3 keyed by index. U0 = diag(s4, s0), Uk = diag(e^-i phi_k, e^i phi_k)."""

        def rot(phi):
            return np.diag([np.exp(-1j * phi), np.exp(1j * phi)])

        return {
            0: np.diag([complex(self.s4), complex(self.s0)]),
            1: rot(self.phi1),
            2: rot(self.phi2),
            3: rot(self.phi3),
        }


# control pattern (qubit 1, qubit 2) selecting each bank entry in the
# conjugate-pairs layout: (F7, F1) | (F6, F2) | (F5, F3) | (F4, F0)
BANK_CONTROLS = {1: (0, 0), 2: (0, 1), 3: (1, 0), 0: (1, 1)}


@dataclass(frozen=True)
class MagnitudeDiagonal:
    entries: np.ndarray
    ordering: str = NATURAL

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float).copy()
        if np.any(entries < 0):
            raise ValueError("magnitude diagonal entries must be non-negative")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_response(cls, H: FrequencyResponse, ordering: str = NATURAL) -> MagnitudeDiagonal:
        seq = qft_mod.ordering_sequence(ordering, H.n)
        return cls(H.magnitudes[list(seq)], ordering)


@dataclass(frozen=True)
class PipelineResult:
    """Outcome of a convolution pipeline.

    ``output_state`` is the register after the inverse QFT (and after
    post-selection, for the ancilla pipelines). For the zero workaround it
    holds the shifted convolution ``y' = y + offset * f`` and ``recovered_y``
    already has the offset removed.
    """

    output_state: StateVector
    scale_A: float
    success_probability: float
    recovered_y: np.ndarray
    offset: float = 0.0
    steps: dict[str, StateVector] = field(default_factory=dict, repr=False, compare=False)


def _unit_signal(f) -> StateVector:
    if isinstance(f, StateVector):
        f = f.amps
    f = as_signal(f)
    norm = np.linalg.norm(f)
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"input signal must have unit norm, got {norm:.12g}")
    return StateVector(f)


def _as_response(H) -> FrequencyResponse:
    return H if isinstance(H, FrequencyResponse) else FrequencyResponse(H)


def _sign(x: complex) -> int:
    return -1 if x.real < 0 else 1


def phases_from_response(H: FrequencyResponse) -> PhaseBank:
    H = _as_response(H)
    if H.n != 8:
        raise InvalidLengthError(f"the phase bank is defined for N = 8, got N = {H.n}")
    if not H.real_impulse:
        raise ValueError("phase bank needs a conjugate-symmetric response (real impulse)")
    for k in (1, 2, 3):
        if H.magnitudes[k] <= ZERO_PHASE_TOL:
            raise UndefinedPhaseError(
                f"H_{k} = 0 has no phase; use convolve_with_zero_workaround or "
                "convolve_abstract(use_phase_bank=False)"
            )
    phi = np.angle(H.values)
    return PhaseBank(
        float(phi[1]), float(phi[2]), float(phi[3]),
        s0=_sign(H.values[0]), s4=_sign(H.values[4]),
    )


def pointwise_qubit_multiply(a, b) -> tuple[np.ndarray, float]:
    """Multiply a one-qubit state by known amplitudes ``(b0, b1)`` and renormalize."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2,) or b.shape != (2,):
        raise InvalidLengthError("pointwise qubit multiply takes two 2-vectors")
    prod = a * b
    A = float(np.linalg.norm(prod))
    if A <= ANNIHILATION_TOL:
        raise AnnihilationError("the product state vanishes")
    return prod / A, A


def unit_determinant_diagonal(b0: float, b1: float) -> np.ndarray:
    """``diag(b0, b1) / sqrt(b0 * b1)``, scaled to determinant 1."""
    if not (b0 > 0 and b1 > 0):
        raise ValueError(f"both entries must be positive, got ({b0}, {b1})")
    return np.diag([b0, b1]).astype(complex) / np.sqrt(b0 * b1)


def apply_phase_bank(s: StateVector, bank: PhaseBank) -> StateVector:
    """Controlled U0..U3 on qubit 3 of an 8-amplitude conjugate-pairs state."""
    if s.dim != 8:
        raise InvalidLengthError(f"phase bank acts on 3 qubits, got {s.num_qubits}")
    s.require_ordering(CONJUGATE_PAIRS)
    for k, U in bank.gates().items():
        q1, q2 = BANK_CONTROLS[k]
        s = apply_gate(s, U, 3, {1: q1, 2: q2})
    return s


def apply_magnitude_diagonal(s: StateVector, d: MagnitudeDiagonal) -> tuple[StateVector, float]:
    """Scale amplitude p by ``d[p]`` and renormalize; returns ``(state, A)``.

    ``A = sqrt(sum_p |d_p amps_p|^2)`` is the norm before renormalization.
    """
    if s.ordering != d.ordering:
        raise OrderingError(f"diagonal is in {d.ordering!r} order, state is {s.ordering!r}")
    raw = apply_diagonal(s, d.entries, allow_nonunitary=True)
    A = raw.norm()
    if A <= ANNIHILATION_TOL:
        raise AnnihilationError("the filter removes the entire input spectrum")
    return raw.with_amps(raw.amps / A), A


def _result(out: StateVector, A: float, prob: float, steps, offset=0.0, f=None) -> PipelineResult:
    n = out.dim
    y = A / np.sqrt(n) * out.amps
    if offset:
        y = y - offset * f
    return PipelineResult(out, float(A), float(prob), y, float(offset), steps)


def _uses_phase_bank(H: FrequencyResponse) -> bool:
    return (
        H.n == 8
        and H.real_impulse
        and bool(np.all(H.magnitudes[1:4] > ZERO_PHASE_TOL))
    )


def convolve_abstract(f, H, d_placement: str = AFTER_PHASES,
                      use_phase_bank: bool | None = None) -> PipelineResult:
    """Convolve ``f`` with the impulse response behind ``H`` using the abstract D.

    With ``use_phase_bank`` (the default when N = 8, the response is
    conjugate symmetric and H1..H3 are nonzero) the circuit runs the paired
    QFT, regroups into conjugate pairs, applies the controlled phase bank
    and then permutes to natural order. Otherwise a natural-order QFT is
    followed by a per-index phase diagonal, which works for any N = 2**r and
    any complex ``H``.

    ``d_placement`` puts the magnitude diagonal after the phases (on the
    natural-order state) or before them (on the conjugate-pairs state in
    the bank circuit). The two commute.
    """
    s = _unit_signal(f)
    H = _as_response(H)
    if H.n != s.dim:
        raise InvalidLengthError(f"signal has {s.dim} samples, response has {H.n}")
    if d_placement not in (AFTER_PHASES, BEFORE_PHASES):
        raise ValueError(f"unknown d_placement {d_placement!r}")
    if use_phase_bank is None:
        use_phase_bank = _uses_phase_bank(H)
    steps: dict[str, StateVector] = {}

    if use_phase_bank:
        bank = phases_from_response(H)
        s = qft(s, PAIRED)
        steps["qft"] = s
        s = apply_permutation(s, qft_mod.paired_to_pairs(), CONJUGATE_PAIRS)
        steps["pairs"] = s
        if d_placement == BEFORE_PHASES:
            s, A = apply_magnitude_diagonal(s, MagnitudeDiagonal.from_response(H, CONJUGATE_PAIRS))
            steps["magnitudes"] = s
        s = apply_phase_bank(s, bank)
        steps["phases"] = s
        s = apply_permutation(s, qft_mod.pairs_to_natural(8), NATURAL)
        steps["natural"] = s
    else:
        s = qft(s, NATURAL)
        steps["qft"] = s
        if d_placement == BEFORE_PHASES:
            s, A = apply_magnitude_diagonal(s, MagnitudeDiagonal.from_response(H))
            steps["magnitudes"] = s
        s = apply_diagonal(s, H.unit_phases)
        steps["phases"] = s

    if d_placement == AFTER_PHASES:
        s, A = apply_magnitude_diagonal(s, MagnitudeDiagonal.from_response(H))
        steps["magnitudes"] = s
    out = iqft(s, NATURAL)
    return _result(out, A * np.sqrt(out.dim), 1.0, steps)


def convolve_with_zero_workaround(f, H, const: float | None = None) -> PipelineResult:
    """Convolve through ``H' = H + const`` when ``H`` has zeros.

    Adding a constant to ``H`` adds ``const * delta`` to the impulse
    response, so the circuit produces ``y' = y + const * f`` and ``y`` is
    recovered classically. Without an explicit ``const`` the first of
    1, 2, 3 that keeps every ``|H_p + const|`` above 1e-6 is used.
    """
    H = _as_response(H)
    if const is None:
        for c in WORKAROUND_CONSTANTS:
            if np.min(np.abs(H.values + c)) > WORKAROUND_MARGIN:
                const = c
                break
        else:
            raise AnnihilationError(
                f"no constant in {WORKAROUND_CONSTANTS} moves every H_p away from zero"
            )
    s = _unit_signal(f)
    shifted = convolve_abstract(s, H.shifted(const))
    return _result(shifted.output_state, shifted.scale_A, 1.0, shifted.steps,
                   offset=const, f=s.amps)


def build_lowpass_p4() -> Permutation:
    """Swap i <-> 8 + i for the stop-band indices 2..6 of a 16-amplitude register."""
    return Permutation.from_cycles(16, *[(i, 8 + i) for i in HIGHPASS_BAND])


def build_highpass_p4() -> Permutation:
    """Swap i <-> 8 + i for the low-band indices 0, 1, 7."""
    return Permutation.from_cycles(16, *[(i, 8 + i) for i in LOWPASS_BAND])


LOWPASS_PHASE = np.pi / 12
LOWPASS_U1 = np.diag([np.exp(-1j * LOWPASS_PHASE), np.exp(1j * LOWPASS_PHASE)])


def _ideal_filter_plan(kind: str, shared_register: bool) -> tuple[bool, Permutation, int]:
    """(apply the U1 phase gate?, P4, ancilla value that carries the result)."""
    if kind == LOWPASS:
        return True, build_lowpass_p4(), 0
    if kind == HIGHPASS:
        if shared_register:
            # low-pass circuit, inverse QFT on the discarded half instead
            return True, build_lowpass_p4(), 1
        return False, build_highpass_p4(), 0
    raise ValueError(f"unknown filter kind {kind!r}")


def ideal_filter_response(kind: str) -> FrequencyResponse:
    """Response actually realized by :func:`convolve_ideal_filter`."""
    if kind == LOWPASS:
        return FrequencyResponse.lowpass12()
    if kind == HIGHPASS:
        return FrequencyResponse.highpass()
    raise ValueError(f"unknown filter kind {kind!r}")


def _spectrum_stage(s: StateVector, with_phase: bool) -> StateVector:
    """QFT in paired order, regroup to natural order, optional U1 on levels (7, 1)."""
    s = qft(s, PAIRED)
    s = apply_permutation(s, qft_mod.paired_to_natural(), NATURAL)
    if with_phase:
        # U1 acts on span{|111>, |001>}: F7 gets e^{-i pi/12}, F1 gets e^{+i pi/12}
        s = apply_two_level(s, LOWPASS_U1, 7, 1)
    return s


def ideal_filter_premeasurement(f, kind: str, shared_register: bool = False) -> StateVector:
    """The 4-qubit register right before the ancilla is measured."""
    with_phase, p4, control = _ideal_filter_plan(kind, shared_register)
    s = _unit_signal(f)
    if s.dim != 8:
        raise InvalidLengthError(f"ideal filter circuits are 3-qubit, got N = {s.dim}")
    s = _spectrum_stage(s, with_phase)
    s = extend_with_ancilla(s)
    s = apply_permutation(s, p4)
    return controlled_iqft(s, control).retag(None)


def convolve_ideal_filter(f, kind: str, shared_register: bool = False) -> PipelineResult:
    """Exact unitary circuit for the ideal 8-point low-pass or high-pass filter.

    The stop band is moved into the other half of an ancilla-extended
    register, so after the controlled inverse QFT the wanted convolution
    sits in one half and is extracted by post-selecting the ancilla. The
    success probability equals the fraction of spectral energy in the pass
    band.

    ``shared_register=True`` (high-pass only) reuses the low-pass circuit and
    runs the inverse QFT on the ancilla = 1 half instead.
    """
    _, _, control = _ideal_filter_plan(kind, shared_register)
    pre = ideal_filter_premeasurement(f, kind, shared_register)
    out, prob = postselect(pre, 1, control)
    A = np.sqrt(out.dim * prob)
    return _result(out, A, prob, {"premeasurement": pre})


def _on_lower_register(op: Callable[[StateVector], StateVector]) -> Callable[[StateVector], StateVector]:
    """Lift a map on r qubits to r + 1 qubits acting identically on both ancilla halves."""

    def lifted(s: StateVector) -> StateVector:
        halves = s.amps.reshape(2, -1)
        out = [op(StateVector(half)).amps for half in halves]
        return StateVector(np.concatenate(out))

    return lifted


def ideal_filter_circuit_matrix(kind: str, shared_register: bool = False) -> np.ndarray:
    """Dense 16x16 matrix of the ideal-filter circuit up to the measurement.

    Built by pushing every basis state through the gate sequence with the
    ancilla present from the start, independently of the pipeline code path.
    """
    with_phase, p4, control = _ideal_filter_plan(kind, shared_register)
    spectrum = _on_lower_register(lambda s: _spectrum_stage(s, with_phase).retag(None))

    def circuit(s: StateVector) -> StateVector:
        s = spectrum(s)
        s = apply_permutation(s, p4)
        return controlled_iqft(s, control)

    return operator_matrix(circuit, 4)


def two_qubit_permutation() -> Permutation:
    """The transposition (0 3) taking F3, F1, F2, F0 to natural order."""
    return Permutation.from_cycles(4, (0, 3))


def convolve_2qubit(f, H) -> PipelineResult:
    """4-point convolution with a real impulse response.

    QFT in the (F3, F1, F2, F0) layout, diag(e^-i phi1, e^i phi1) on qubit 2
    when qubit 1 is 0 and diag(sign H2, sign H0) when it is 1, the
    transposition (0 3) to natural order, then D = diag(|H0|, |H1|, |H2|, |H1|).
    """
    s = _unit_signal(f)
    H = _as_response(H)
    if s.dim != 4 or H.n != 4:
        raise InvalidLengthError("convolve_2qubit needs 4-point signal and response")
    if not H.real_impulse:
        raise ValueError("convolve_2qubit needs a conjugate-symmetric response (real impulse)")
    phi1 = float(H.phases[1])
    steps: dict[str, StateVector] = {}
    s = qft(s, CONJUGATE_PAIRS)
    steps["qft"] = s
    s = apply_gate(s, np.diag([np.exp(-1j * phi1), np.exp(1j * phi1)]), 2, {1: 0})
    s = apply_gate(s, np.diag([_sign(H.values[2]), _sign(H.values[0])]), 2, {1: 1})
    steps["phases"] = s
    s = apply_permutation(s, two_qubit_permutation(), NATURAL)
    steps["natural"] = s
    d = MagnitudeDiagonal(H.magnitudes[[0, 1, 2, 1]], NATURAL)
    s, A = apply_magnitude_diagonal(s, d)
    steps["magnitudes"] = s
    out = iqft(s, NATURAL)
    return _result(out, A * 2.0, 1.0, steps)


def conv1_matrix(h0: float, h1: float) -> tuple[np.ndarray, bool]:
    """The 2x2 matrix ``[[h0, h1], [h1, h0]] / sqrt(h0^2 + h1^2)`` and whether it is unitary.

    Its Gram matrix has off-diagonal ``2 h0 h1 / (h0^2 + h1^2)``, so it is
    unitary only when one of the taps is zero.
    """
    norm2 = h0 * h0 + h1 * h1
    if norm2 <= 0:
        raise ValueError("impulse response is zero")
    U = np.array([[h0, h1], [h1, h0]], dtype=complex) / np.sqrt(norm2)
    return U, is_unitary(U, tol=1e-10)


def oracle_convolution(f, H) -> np.ndarray:
    """Classical reference ``f (*) h`` with ``h = idft(H)``, via the time-domain double loop."""
    H = _as_response(H)
    return circular_convolve(f, H.impulse_response())


def passband_probability(f, kind: str) -> float:
    """Fraction of spectral energy of ``f`` inside the filter's pass band."""
    F = dft(f)
    band = LOWPASS_BAND if kind == LOWPASS else HIGHPASS_BAND
    return float(np.sum(np.abs(F[list(band)]) ** 2) / np.sum(np.abs(F) ** 2))

