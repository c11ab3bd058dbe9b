"""Figures written next to CLI reports.

Everything renders with the non-interactive Agg backend straight to files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGSIZE = (6.4, 3.6)

plt.rcParams.update({
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 9,
})


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_amplitudes(path, amps, title: str = "") -> Path:
    """Stem plot of real and imaginary parts of a state or signal."""
    amps = np.asarray(amps, dtype=complex)
    idx = np.arange(amps.size)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.stem(idx - 0.1, amps.real, linefmt="C0-", markerfmt="C0o", basefmt="k-", label="re")
    ax.stem(idx + 0.1, amps.imag, linefmt="C1-", markerfmt="C1s", basefmt="k-", label="im")
    ax.set_xticks(idx)
    ax.set_xlabel("basis state")
    ax.set_ylabel("amplitude")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", frameon=False)
    return _save(fig, path)


def plot_comparison(path, recovered, oracle, title: str = "") -> Path:
    """Circuit output against the classical convolution, with the deviation."""
    recovered = np.asarray(recovered, dtype=complex)
    oracle = np.asarray(oracle, dtype=complex)
    idx = np.arange(recovered.size)
    fig, (ax, ax_err) = plt.subplots(2, 1, figsize=(6.4, 5.0), sharex=True,
                                     gridspec_kw={"height_ratios": [3, 1]})
    ax.plot(idx, oracle.real, "k-", lw=1, label="oracle re")
    ax.plot(idx, oracle.imag, "k--", lw=1, label="oracle im")
    ax.plot(idx, recovered.real, "C0o", label="circuit re")
    ax.plot(idx, recovered.imag, "C1s", label="circuit im")
    ax.set_ylabel("y[n]")
    ax.legend(loc="best", frameon=False, ncol=2)
    if title:
        ax.set_title(title)
    err = np.abs(recovered - oracle)
    ax_err.semilogy(idx, np.maximum(err, 1e-18), "C3.-")
    ax_err.set_ylabel("|deviation|")
    ax_err.set_xlabel("n")
    ax_err.set_xticks(idx)
    return _save(fig, path)


def plot_impulse_response(path, h, title: str = "") -> Path:
    """Impulse response, as stored and periodically shifted to the center."""
    h = np.real_if_close(np.asarray(h, dtype=complex), tol=1e6)
    n = h.size
    idx = np.arange(n)
    fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(8.0, 3.2))
    ax_a.stem(idx, np.real(h), basefmt="k-")
    ax_a.set_title("(a)")
    ax_a.set_xlabel("n")
    centered = np.arange(-(n // 2), n - n // 2)
    ax_b.stem(centered, np.real(h)[centered % n], basefmt="k-")
    ax_b.set_title("(b)")
    ax_b.set_xlabel("n")
    if title:
        fig.suptitle(title)
    return _save(fig, path)


def plot_spectrum(path, values, title: str = "") -> Path:
    """Magnitude and phase of a frequency response."""
    values = np.asarray(values, dtype=complex)
    idx = np.arange(values.size)
    fig, (ax_m, ax_p) = plt.subplots(2, 1, figsize=(6.4, 4.4), sharex=True)
    ax_m.stem(idx, np.abs(values), basefmt="k-")
    ax_m.set_ylabel("|H_p|")
    phase = np.where(np.abs(values) > 1e-12, np.angle(values), np.nan)
    ax_p.plot(idx, phase, "C1o")
    ax_p.set_ylabel("arg H_p")
    ax_p.set_xlabel("p")
    ax_p.set_xticks(idx)
    if title:
        ax_m.set_title(title)
    return _save(fig, path)
