"""Signal files and report serialization.

Signal files are UTF-8 text with one sample per line or comma-separated
samples. Complex samples are written ``a+bi`` / ``a-bi`` (``j`` also
accepted); anything after ``#`` is a comment.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .errors import SignalFormatError
from .numerics import as_signal, normalize


def parse_complex(token: str) -> complex:
    t = token.strip().replace(" ", "")
    if not t:
        raise SignalFormatError("empty sample")
    if t[-1] in "iIjJ":
        t = t[:-1] + "j"
    try:
        value = complex(t)
    except ValueError:
        raise SignalFormatError(f"cannot parse {token.strip()!r} as a number") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise SignalFormatError(f"non-finite sample {token.strip()!r}")
    return value


def parse_signal_text(text: str) -> np.ndarray:
    samples: list[complex] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split(",")
        if tokens[-1].strip() == "":
            tokens = tokens[:-1]
        for tok in tokens:
            try:
                samples.append(parse_complex(tok))
            except SignalFormatError as exc:
                raise SignalFormatError(f"line {lineno}: {exc}") from None
    return as_signal(np.array(samples, dtype=complex))


def parse_signal_file(path, normalize_signal: bool = True) -> tuple[np.ndarray, float]:
    """Read a signal file; returns ``(samples, original_norm)``.

    With ``normalize_signal`` the samples are scaled to unit norm. A zero
    signal raises :class:`~qconv.errors.ZeroNormError` either way.
    """
    samples = parse_signal_text(Path(path).read_text(encoding="utf-8"))
    unit, norm = normalize(samples)
    return (unit if normalize_signal else samples), norm


def complex_list(values) -> list[dict[str, float]]:
    return [{"re": float(v.real), "im": float(v.imag)} for v in np.asarray(values, dtype=complex)]


def complex_array(items) -> np.ndarray:
    return np.array([complex(d["re"], d["im"]) for d in items], dtype=complex)


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False)


def amplitudes_csv(values) -> str:
    """Rows of ``index,re,im,magnitude``."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "re", "im", "magnitude"])
    for k, v in enumerate(np.asarray(values, dtype=complex)):
        writer.writerow([k, repr(float(v.real)), repr(float(v.imag)), repr(float(abs(v)))])
    return buf.getvalue()


def table_csv(rows: list[dict], columns: list[str]) -> str:
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
