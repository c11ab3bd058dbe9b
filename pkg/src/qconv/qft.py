"""Quantum Fourier transform on the state-vector simulator.

The transform uses the same sign as the classical DFT in
:mod:`qconv.numerics`, ``amps'[p] = N**-0.5 * sum_n amps[n] exp(-2j*pi*n*p/N)``.
It is built gate by gate (Hadamards, controlled phase rotations and a final
qubit reversal), so it can be checked against the dense DFT matrix.

Spectral layouts ("orderings"):

``natural``
    position ``p`` holds F_p.
``paired``
    N = 8 only, positions hold F7, F3, F5, F1, F6, F2, F4, F0, the order in
    which the paired 3-qubit QFT produces its outputs.
``conjugate_pairs``
    conjugate partners side by side, (F_{N-1}, F_1), (F_{N-2}, F_2), ...,
    (F_{N/2}, F_0). For N = 8 that is F7, F1, F6, F2, F5, F3, F4, F0 and for
    N = 4 it is F3, F1, F2, F0.
"""

from __future__ import annotations

import numpy as np

from .errors import OrderingError
from .simulator import (
    H,
    Permutation,
    StateVector,
    apply_gate,
    apply_permutation,
    apply_swap,
    phase_gate,
)

NATURAL = "natural"
PAIRED = "paired"
CONJUGATE_PAIRS = "conjugate_pairs"

PAIRED3_SEQUENCE = (7, 3, 5, 1, 6, 2, 4, 0)
ORDERINGS = (NATURAL, PAIRED, CONJUGATE_PAIRS)


def conjugate_pairs_sequence(n: int) -> tuple[int, ...]:
    seq: list[int] = []
    for p in range(1, n // 2):
        seq += [n - p, p]
    return tuple(seq + [n // 2, 0])


def ordering_sequence(ordering: str, n: int) -> tuple[int, ...]:
    """Frequency index held at each position of the given layout."""
    if ordering == NATURAL:
        return tuple(range(n))
    if ordering == PAIRED:
        if n != 8:
            raise OrderingError(f"the paired ordering exists for N = 8 only, got N = {n}")
        return PAIRED3_SEQUENCE
    if ordering == CONJUGATE_PAIRS:
        return conjugate_pairs_sequence(n)
    raise OrderingError(f"unknown ordering {ordering!r}")


def natural_to(ordering: str, n: int) -> Permutation:
    return Permutation.to_sequence(ordering_sequence(ordering, n))


def to_natural(ordering: str, n: int) -> Permutation:
    return Permutation.from_sequence(ordering_sequence(ordering, n))


def paired_to_pairs() -> Permutation:
    """Paired QFT output order -> conjugate-pairs order (N = 8)."""
    return to_natural(PAIRED, 8).then(natural_to(CONJUGATE_PAIRS, 8))


def pairs_to_natural(n: int = 8) -> Permutation:
    """Conjugate-pairs order -> natural order.

    For N = 8 this is the output rearrangement placed in front of the
    magnitude operator; for N = 4 it is the transposition (0 3).
    """
    return to_natural(CONJUGATE_PAIRS, n)


def paired_to_natural() -> Permutation:
    """Paired QFT output order -> natural order, via the conjugate-pairs order."""
    return paired_to_pairs().then(pairs_to_natural(8))


def _fourier_circuit(s: StateVector, sign: int, first: int = 1, controls=None) -> StateVector:
    """Textbook QFT network on qubits ``first .. s.num_qubits``.

    ``sign = -1`` gives the transform with kernel exp(-2*pi*i*n*p/N);
    ``sign = +1`` gives its adjoint (the DFT matrix is symmetric). Extra
    ``controls`` are attached to every gate.
    """
    extra = dict(controls or {})
    last = s.num_qubits
    m = last - first + 1
    for j in range(first, last + 1):
        s = apply_gate(s, H, j, extra)
        for k in range(2, last - j + 2):
            theta = sign * 2 * np.pi / 2**k
            s = apply_gate(s, phase_gate(theta), j, {**extra, j + k - 1: 1})
    for a in range(m // 2):
        s = apply_swap(s, first + a, last - a, extra)
    return s


def qft(s: StateVector, ordering: str = NATURAL) -> StateVector:
    """Forward transform of a time-domain register, output tagged ``ordering``."""
    if s.ordering is not None:
        raise OrderingError(f"qft expects time-domain input, state is tagged {s.ordering!r}")
    seq = ordering_sequence(ordering, s.dim)
    out = _fourier_circuit(s, -1).retag(NATURAL)
    if ordering == NATURAL:
        return out
    return apply_permutation(out, Permutation.to_sequence(seq), ordering)


def iqft(s: StateVector, ordering: str = NATURAL) -> StateVector:
    """Adjoint of :func:`qft` for the same ordering; the result is untagged.

    Untagged input is read as being laid out in ``ordering``.
    """
    if s.ordering is not None and s.ordering != ordering:
        raise OrderingError(f"iqft({ordering!r}) applied to a state tagged {s.ordering!r}")
    seq = ordering_sequence(ordering, s.dim)
    if ordering != NATURAL:
        s = apply_permutation(s, Permutation.from_sequence(seq))
    return _fourier_circuit(s.retag(None), +1)


def controlled_iqft(s: StateVector, control_value: int) -> StateVector:
    """Natural-order IQFT on qubits 2..r+1, active only where qubit 1 equals ``control_value``."""
    if s.num_qubits < 2:
        raise ValueError("controlled IQFT needs a control qubit plus at least one target")
    if control_value not in (0, 1):
        raise ValueError(f"control value must be 0 or 1, got {control_value!r}")
    return _fourier_circuit(s, +1, first=2, controls={1: control_value})


def controlled_qft(s: StateVector, control_value: int) -> StateVector:
    if s.num_qubits < 2:
        raise ValueError("controlled QFT needs a control qubit plus at least one target")
    return _fourier_circuit(s, -1, first=2, controls={1: control_value})


def qft_matrix(n: int) -> np.ndarray:
    """Dense unitary DFT/sqrt(N), built independently of the gate network."""
    idx = np.arange(n)
    return np.exp(-2j * np.pi * (np.outer(idx, idx) % n) / n) / np.sqrt(n)
