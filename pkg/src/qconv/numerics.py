"""Classical reference numerics: DFT, inverse DFT and circular convolution.

Every routine here is a direct O(N^2) summation. Lengths in this package
never exceed 32, and these functions are the oracle the quantum pipelines
are checked against, so they are kept deliberately simple.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidLengthError, ZeroNormError

DEFAULT_TOL = 1e-10


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def num_qubits_for(length: int) -> int:
    """Return r such that ``length == 2**r``; raise for anything else.

    A length of 1 is rejected: a signal needs at least one qubit.
    """
    if length < 2 or not is_power_of_two(length):
        raise InvalidLengthError(f"length {length} is not a power of two >= 2")
    return length.bit_length() - 1


def as_signal(values) -> np.ndarray:
    """Coerce ``values`` into a finite 1-D complex array of power-of-two length."""
    arr = np.asarray(values, dtype=complex)
    if arr.ndim != 1:
        raise InvalidLengthError(f"expected a 1-D vector, got shape {arr.shape}")
    num_qubits_for(arr.size)
    if not np.all(np.isfinite(arr)):
        raise ValueError("signal contains NaN or Inf")
    return arr


def twiddle(n: int) -> complex:
    """The exponential coefficient exp(-2*pi*i/n)."""
    return complex(np.exp(-2j * np.pi / n))


def dft_matrix(n: int) -> np.ndarray:
    """Dense matrix M with ``M[p, k] = W**(p*k)`` and ``W = exp(-2*pi*i/n)``."""
    idx = np.arange(n)
    # reduce the exponent mod n before exponentiating to keep the angles small
    return np.exp(-2j * np.pi * (np.outer(idx, idx) % n) / n)


def dft(f) -> np.ndarray:
    """N-point DFT, ``F[p] = sum_n f[n] W**(n*p)``, natural order."""
    f = as_signal(f)
    return dft_matrix(f.size) @ f


def idft(F) -> np.ndarray:
    """Inverse of :func:`dft`: ``f[n] = (1/N) sum_p F[p] W**(-n*p)``."""
    F = as_signal(F)
    return dft_matrix(F.size).conj() @ F / F.size


def circular_convolve(f, h) -> np.ndarray:
    """Circular convolution ``y[n] = sum_k f[k] h[(n - k) mod N]``.

    Evaluated as the plain double loop in the time domain; it never goes
    through a transform.
    """
    f = as_signal(f)
    h = as_signal(h)
    if f.size != h.size:
        raise InvalidLengthError(f"length mismatch: {f.size} vs {h.size}")
    n = f.size
    y = np.zeros(n, dtype=complex)
    for i in range(n):
        acc = 0j
        for k in range(n):
            acc += f[k] * h[(i - k) % n]
        y[i] = acc
    return y


def normalize(v) -> tuple[np.ndarray, float]:
    """Return ``(v / ||v||, ||v||)``; a zero vector raises :class:`ZeroNormError`."""
    v = np.asarray(v, dtype=complex)
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not np.isfinite(norm):
        raise ZeroNormError("cannot normalize a zero vector")
    return v / norm, norm


def max_abs_diff(a, b) -> float:
    """Largest componentwise deviation, max over max(|d.real|, |d.imag|)."""
    d = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    if d.size == 0:
        return 0.0
    return float(max(np.max(np.abs(d.real)), np.max(np.abs(d.imag))))


def allclose(a, b, tol: float = DEFAULT_TOL) -> bool:
    return max_abs_diff(a, b) <= tol


def random_unit_signal(n: int, rng: np.random.Generator, real: bool = False) -> np.ndarray:
    """Gaussian random vector of length ``n`` scaled to unit norm."""
    v = rng.standard_normal(n)
    if not real:
        v = v + 1j * rng.standard_normal(n)
    return normalize(v)[0]
