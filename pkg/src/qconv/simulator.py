"""Dense state-vector simulator for small registers.

Qubits are numbered from 1, and qubit 1 is the most significant bit of the
basis-state index. With an ancilla prepended as qubit 1, the state vector
is therefore ``[block where ancilla = 0 ; block where ancilla = 1]``.

States are immutable values; every operation returns a new
:class:`StateVector`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    ImpossibleOutcomeError,
    InvalidLengthError,
    NonUnitaryError,
    OrderingError,
)
from .numerics import num_qubits_for

UNITARY_TOL = 1e-12
IMPOSSIBLE_PROBABILITY = 1e-14

X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
I2 = np.eye(2, dtype=complex)


def phase_gate(theta: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)


def unitarity_error(m) -> float:
    """``max |(M^dagger M - I)_ij|``."""
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def is_unitary(m, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and unitarity_error(m) <= tol


@dataclass(frozen=True)
class StateVector:
    """Amplitudes of an r-qubit register.

    ``ordering`` tags how spectral amplitudes are laid out (``"natural"``,
    ``"paired"``, ``"conjugate_pairs"``); ``None`` means plain time-domain
    or untagged data. The norm is not enforced here because the abstract
    magnitude operator passes through un-normalized intermediates.
    """

    amps: np.ndarray
    ordering: str | None = None

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        num_qubits_for(amps.size)
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def basis(cls, index: int, num_qubits: int, ordering: str | None = None) -> StateVector:
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps, ordering)

    @property
    def num_qubits(self) -> int:
        return self.amps.size.bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def with_amps(self, amps, ordering=...) -> StateVector:
        """Copy with new amplitudes; the ordering tag is kept unless given."""
        return StateVector(amps, self.ordering if ordering is ... else ordering)

    def retag(self, ordering: str | None) -> StateVector:
        return StateVector(self.amps, ordering)

    def require_ordering(self, ordering: str | None) -> None:
        if self.ordering != ordering:
            raise OrderingError(f"state is tagged {self.ordering!r}, expected {ordering!r}")

    def __len__(self) -> int:
        return self.amps.size


@dataclass(frozen=True)
class Permutation:
    """Bijection on basis indices: ``mapping[i]`` is where amplitude ``i`` goes."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(i) for i in self.mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError(f"not a permutation: {mapping}")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Permutation:
        """Build from disjoint cycles, so ``from_cycles(4, (0, 3))`` swaps 0 and 3."""
        mapping = list(range(n))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                mapping[a] = b
        return cls(tuple(mapping))

    @classmethod
    def to_sequence(cls, sequence: Sequence[int]) -> Permutation:
        """Natural order -> the layout where position ``j`` holds item ``sequence[j]``."""
        return cls(tuple(int(j) for j in np.argsort(sequence)))

    @classmethod
    def from_sequence(cls, sequence: Sequence[int]) -> Permutation:
        """Layout where position ``j`` holds item ``sequence[j]`` -> natural order."""
        return cls(tuple(sequence))

    def __len__(self) -> int:
        return len(self.mapping)

    def inverse(self) -> Permutation:
        inv = [0] * len(self)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(tuple(inv))

    def then(self, other: Permutation) -> Permutation:
        """Apply ``self`` first, then ``other``."""
        if len(other) != len(self):
            raise InvalidLengthError("permutation sizes differ")
        return Permutation(tuple(other.mapping[j] for j in self.mapping))

    def is_involution(self) -> bool:
        return self.then(self) == Permutation.identity(len(self))

    def matrix(self) -> np.ndarray:
        """0/1 matrix ``P`` with ``P @ v`` equal to the permuted vector."""
        n = len(self)
        m = np.zeros((n, n))
        m[list(self.mapping), list(range(n))] = 1.0
        return m


def _normalize_controls(controls, num_qubits: int, target: int | None) -> dict[int, int]:
    if controls is None:
        return {}
    items = controls.items() if isinstance(controls, Mapping) else controls
    pattern: dict[int, int] = {}
    for qubit, bit in items:
        qubit = int(qubit)
        if not 1 <= qubit <= num_qubits:
            raise IndexError(f"control qubit {qubit} out of range 1..{num_qubits}")
        if qubit == target:
            raise ValueError(f"qubit {qubit} is both control and target")
        if qubit in pattern:
            raise ValueError(f"qubit {qubit} listed twice in controls")
        if bit not in (0, 1):
            raise ValueError(f"control value must be 0 or 1, got {bit!r}")
        pattern[qubit] = int(bit)
    return pattern


def apply_gate(
    s: StateVector,
    g,
    target: int,
    controls: Mapping[int, int] | Iterable[tuple[int, int]] | None = None,
    *,
    allow_nonunitary: bool = False,
) -> StateVector:
    """Apply the 2x2 matrix ``g`` to ``target`` wherever the control bits match.

    ``controls`` maps qubit -> required bit, so ``{1: 0, 2: 1}`` is an open
    circle on qubit 1 and a bullet on qubit 2.
    """
    g = np.asarray(g, dtype=complex)
    if g.shape != (2, 2):
        raise ValueError(f"gate must be 2x2, got {g.shape}")
    if not allow_nonunitary and not is_unitary(g):
        raise NonUnitaryError("gate is not unitary; pass allow_nonunitary=True to force it")
    r = s.num_qubits
    if not 1 <= target <= r:
        raise IndexError(f"target qubit {target} out of range 1..{r}")
    pattern = _normalize_controls(controls, r, target)

    psi = s.amps.reshape([2] * r).copy()
    index = [slice(None)] * r
    for qubit, bit in pattern.items():
        index[qubit - 1] = bit
    index = tuple(index)
    # control axes disappear from the sliced view, shifting the target axis
    axis = target - 1 - sum(1 for q in pattern if q < target)
    sub = np.moveaxis(np.tensordot(g, psi[index], axes=([1], [axis])), 0, axis)
    psi[index] = sub
    return s.with_amps(psi.reshape(-1))


def apply_swap(s: StateVector, a: int, b: int, controls=None) -> StateVector:
    """SWAP of qubits ``a`` and ``b`` as three (optionally controlled) CNOTs."""
    pattern = _normalize_controls(controls, s.num_qubits, None)
    for t, c in ((b, a), (a, b), (b, a)):
        s = apply_gate(s, X, t, {**pattern, c: 1})
    return s


def apply_two_level(s: StateVector, g, i: int, j: int, *, allow_nonunitary: bool = False) -> StateVector:
    """Apply the 2x2 ``g`` on span{|i>, |j>}, with |i> as the first basis vector."""
    g = np.asarray(g, dtype=complex)
    if not allow_nonunitary and not is_unitary(g):
        raise NonUnitaryError("gate is not unitary")
    if i == j or not (0 <= i < s.dim and 0 <= j < s.dim):
        raise IndexError(f"invalid level pair ({i}, {j})")
    amps = s.amps.copy()
    amps[[i, j]] = g @ s.amps[[i, j]]
    return s.with_amps(amps)


def apply_permutation(s: StateVector, p: Permutation, ordering=...) -> StateVector:
    """``out[p(i)] = in[i]``; optionally retag the result."""
    if len(p) != s.dim:
        raise InvalidLengthError(f"permutation of size {len(p)} applied to {s.dim} amplitudes")
    out = np.empty_like(s.amps)
    out[list(p.mapping)] = s.amps
    return s.with_amps(out, ordering)


def apply_diagonal(s: StateVector, entries, *, allow_nonunitary: bool = False) -> StateVector:
    """Multiply amplitude ``k`` by ``entries[k]``. No renormalization."""
    d = np.asarray(entries, dtype=complex)
    if d.shape != (s.dim,):
        raise InvalidLengthError(f"diagonal of length {d.size} for {s.dim} amplitudes")
    if not allow_nonunitary and np.max(np.abs(np.abs(d) - 1.0)) > UNITARY_TOL:
        raise NonUnitaryError("diagonal has entries off the unit circle")
    return s.with_amps(d * s.amps)


def apply_dense(s: StateVector, m, *, allow_nonunitary: bool = False) -> StateVector:
    """Plain matrix-vector product with a full ``2**r x 2**r`` matrix."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (s.dim, s.dim):
        raise InvalidLengthError(f"matrix of shape {m.shape} for {s.dim} amplitudes")
    if not allow_nonunitary and not is_unitary(m):
        raise NonUnitaryError("matrix is not unitary")
    return s.with_amps(m @ s.amps)


def extend_with_ancilla(s: StateVector) -> StateVector:
    """Prepend a new most-significant qubit in |0>: ``[amps ; 0 ... 0]``."""
    return s.with_amps(np.concatenate([s.amps, np.zeros_like(s.amps)]))


def outcome_probability(s: StateVector, qubit: int, outcome: int) -> float:
    r = s.num_qubits
    if not 1 <= qubit <= r:
        raise IndexError(f"qubit {qubit} out of range 1..{r}")
    branch = np.take(s.amps.reshape([2] * r), outcome, axis=qubit - 1)
    return float(np.sum(np.abs(branch) ** 2))


def postselect(s: StateVector, qubit: int, outcome: int) -> tuple[StateVector, float]:
    """Condition on ``qubit`` measuring ``outcome``.

    Returns the surviving branch, renormalized and with the measured qubit
    removed, together with the probability of that outcome. The probability
    is relative to the squared norm of ``s``.
    """
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    r = s.num_qubits
    if r < 2:
        raise ValueError("post-selection needs at least two qubits")
    if not 1 <= qubit <= r:
        raise IndexError(f"qubit {qubit} out of range 1..{r}")
    branch = np.take(s.amps.reshape([2] * r), outcome, axis=qubit - 1).reshape(-1)
    weight = float(np.sum(np.abs(branch) ** 2))
    total = float(np.sum(np.abs(s.amps) ** 2))
    probability = weight / total if total > 0 else 0.0
    if probability < IMPOSSIBLE_PROBABILITY:
        raise ImpossibleOutcomeError(
            f"outcome {outcome} on qubit {qubit} has probability {probability:.3e}"
        )
    return s.with_amps(branch / np.sqrt(weight)), probability


def operator_matrix(op: Callable[[StateVector], StateVector], num_qubits: int,
                    ordering: str | None = None) -> np.ndarray:
    """Dense matrix of a linear state map, built column by column from basis states."""
    dim = 2**num_qubits
    cols = [op(StateVector.basis(k, num_qubits, ordering)).amps for k in range(dim)]
    return np.column_stack(cols)
