"""Command-line front end.

Every command prints one report (JSON by default, CSV with ``--format csv``)
to stdout. Exit codes: 0 all deviations within tolerance, 1 tolerance
failure, 2 usage or input error, 3 pipeline error (annihilated spectrum,
impossible post-selection, ...).
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import convolution as conv
from .errors import QConvError
from .io import (
    amplitudes_csv,
    complex_list,
    dumps_report,
    parse_signal_file,
    parse_signal_text,
    table_csv,
)
from .numerics import as_signal, circular_convolve, dft, idft, max_abs_diff, normalize
from .qft import ORDERINGS, ordering_sequence, qft
from .simulator import StateVector, apply_dense

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE, EXIT_PIPELINE = 0, 1, 2, 3

COMMANDS = ("qft", "convolve", "ideal-filter", "conv2", "conv1", "oracle", "compare", "reproduce-paper")
PIPELINES = ("abstract", "workaround", "ideal-lowpass", "ideal-highpass", "conv2")
FILTER_PRESETS = ("example1", "lowpass12", "highpass", "identity")
DEFAULT_TOL = 1e-10
PUBLISHED_TOL = 1e-4

_NAMED_SIGNAL = re.compile(r"^(delta|alt|ramp|ones)(\d+)$")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    signal: str | None = None
    filter: str | None = None
    filter_domain: str = "time"
    kind: str = conv.LOWPASS
    fmt: str = "json"
    tol: float | None = None
    placement: str = conv.AFTER_PHASES
    ordering: str = "natural"
    pipeline: str = "abstract"
    workaround: bool = False
    shared_register: bool = False
    h0: float | None = None
    h1: float | None = None
    plot_dir: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("tolerance must be positive")

    @property
    def tolerance(self) -> float:
        if self.tol is not None:
            return self.tol
        return PUBLISHED_TOL if self.command == "reproduce-paper" else DEFAULT_TOL


# -- input resolution -------------------------------------------------------

def named_signal(name: str) -> np.ndarray | None:
    m = _NAMED_SIGNAL.match(name)
    if not m:
        return None
    kind, n = m.group(1), int(m.group(2))
    if kind == "delta":
        v = np.zeros(n)
        v[0] = 1.0
    elif kind == "alt":
        v = (-1.0) ** np.arange(n)
    elif kind == "ramp":
        v = np.arange(1, n + 1, dtype=float)
    else:
        v = np.ones(n)
    return v.astype(complex)


def load_signal(spec: str | None) -> tuple[np.ndarray, float]:
    """Unit-norm samples and the original norm for a signal name or file."""
    if spec is None:
        raise UsageError("this command needs --signal")
    raw = named_signal(spec)
    try:
        if raw is not None:
            return normalize(as_signal(raw))
        path = Path(spec)
        if not path.is_file():
            raise UsageError(f"no such signal file or named signal: {spec!r}")
        return parse_signal_file(path)
    except ValueError as exc:
        raise UsageError(f"signal {spec!r}: {exc}") from None


def load_filter(spec: str | None, n: int, domain: str = "time") -> conv.FrequencyResponse:
    if spec is None:
        raise UsageError("this command needs --filter")
    presets = {
        "example1": conv.FrequencyResponse.example1,
        "lowpass12": conv.FrequencyResponse.lowpass12,
        "highpass": conv.FrequencyResponse.highpass,
    }
    try:
        if spec == "identity":
            H = conv.FrequencyResponse.identity(n)
        elif spec in presets:
            H = presets[spec]()
        elif spec[:2] in ("h=", "H="):
            values = parse_signal_text(spec[2:])
            H = conv.FrequencyResponse(values if spec[0] == "H" else dft(values))
        else:
            path = Path(spec)
            if not path.is_file():
                raise UsageError(f"unknown filter {spec!r}; presets are {', '.join(FILTER_PRESETS)}")
            values = parse_signal_text(path.read_text(encoding="utf-8"))
            H = conv.FrequencyResponse(values if domain == "freq" else dft(values))
    except ValueError as exc:
        raise UsageError(f"filter {spec!r}: {exc}") from None
    if H.n != n:
        raise UsageError(f"filter {spec!r} has {H.n} points but the signal has {n}")
    return H


# -- commands ----------------------------------------------------------------

def _report(cfg: RunConfig, inputs: dict, amplitudes, *, ordering=None, scale_A=None,
            success_probability=None, dev=None, recovered_y=None, **extra) -> dict:
    report = {
        "command": cfg.command,
        "inputs": inputs,
        "ordering": ordering,
        "amplitudes": complex_list(amplitudes) if amplitudes is not None else [],
        "scale_A": None if scale_A is None else float(scale_A),
        "success_probability": None if success_probability is None else float(success_probability),
        "oracle_max_abs_dev": None if dev is None else float(dev),
        "pass": dev is None or dev <= cfg.tolerance,
    }
    if recovered_y is not None:
        report["recovered_y"] = complex_list(recovered_y)
    report.update(extra)
    return report


def _run_pipeline(name: str, f: np.ndarray, cfg: RunConfig):
    """Run a named pipeline on unit-norm ``f``; returns (result, response)."""
    n = f.size
    if name == "abstract":
        H = load_filter(cfg.filter, n, cfg.filter_domain)
        return conv.convolve_abstract(f, H, cfg.placement), H
    if name == "workaround":
        H = load_filter(cfg.filter, n, cfg.filter_domain)
        return conv.convolve_with_zero_workaround(f, H), H
    if name in ("ideal-lowpass", "ideal-highpass"):
        kind = name.split("-", 1)[1]
        return conv.convolve_ideal_filter(f, kind, cfg.shared_register), conv.ideal_filter_response(kind)
    if name == "conv2":
        H = load_filter(cfg.filter, n, cfg.filter_domain)
        return conv.convolve_2qubit(f, H), H
    raise UsageError(f"unknown pipeline {name!r}")


def _pipeline_report(cfg: RunConfig, pipeline: str, signal_spec: str, figures: list) -> dict:
    f, norm = load_signal(signal_spec)
    result, H = _run_pipeline(pipeline, f, cfg)
    recovered = result.recovered_y * norm
    oracle = circular_convolve(f * norm, H.impulse_response())
    dev = max_abs_diff(recovered, oracle)
    inputs = {"signal": signal_spec, "signal_norm": norm, "pipeline": pipeline,
              "filter": cfg.filter if pipeline not in ("ideal-lowpass", "ideal-highpass") else None}
    if pipeline == "abstract":
        inputs["d_placement"] = cfg.placement
    if pipeline.startswith("ideal"):
        inputs["shared_register"] = cfg.shared_register
    if result.offset:
        inputs["offset"] = result.offset
    if cfg.plot_dir:
        stem = f"{cfg.command}_{Path(signal_spec).stem}"
        figures.append(str(_plots().plot_amplitudes(
            Path(cfg.plot_dir) / f"{stem}_state.png", result.output_state.amps,
            f"{pipeline}: output state")))
        figures.append(str(_plots().plot_comparison(
            Path(cfg.plot_dir) / f"{stem}_comparison.png", recovered, oracle,
            f"{pipeline} vs circular convolution")))
    return _report(cfg, inputs, result.output_state.amps, ordering="time",
                   scale_A=result.scale_A, success_probability=result.success_probability,
                   dev=dev, recovered_y=recovered)


def _plots():
    from . import plotting

    return plotting


def cmd_qft(cfg: RunConfig, figures: list) -> dict:
    f, norm = load_signal(cfg.signal)
    if cfg.ordering not in ORDERINGS:
        raise UsageError(f"unknown ordering {cfg.ordering!r}")
    out = qft(StateVector(f), cfg.ordering)
    seq = ordering_sequence(cfg.ordering, f.size)
    expected = (dft(f) / np.sqrt(f.size))[list(seq)]
    dev = max_abs_diff(out.amps, expected)
    if cfg.plot_dir:
        figures.append(str(_plots().plot_amplitudes(
            Path(cfg.plot_dir) / "qft_state.png", out.amps, f"QFT ({cfg.ordering} order)")))
    return _report(cfg, {"signal": cfg.signal, "signal_norm": norm}, out.amps,
                   ordering=cfg.ordering, dev=dev, sequence=list(seq))


def cmd_convolve(cfg: RunConfig, figures: list) -> dict:
    return _pipeline_report(cfg, "workaround" if cfg.workaround else "abstract", cfg.signal, figures)


def cmd_ideal_filter(cfg: RunConfig, figures: list) -> dict:
    if cfg.kind not in (conv.LOWPASS, conv.HIGHPASS):
        raise UsageError(f"unknown filter kind {cfg.kind!r}")
    return _pipeline_report(cfg, f"ideal-{cfg.kind}", cfg.signal, figures)


def cmd_conv2(cfg: RunConfig, figures: list) -> dict:
    return _pipeline_report(cfg, "conv2", cfg.signal, figures)


def cmd_conv1(cfg: RunConfig, figures: list) -> dict:
    if cfg.h0 is None or cfg.h1 is None:
        raise UsageError("conv1 needs --h0 and --h1")
    U, unitary = conv.conv1_matrix(cfg.h0, cfg.h1)
    extra = {"matrix": [complex_list(row) for row in U], "is_unitary": unitary}
    inputs = {"h0": cfg.h0, "h1": cfg.h1, "signal": cfg.signal}
    if cfg.signal is None:
        return _report(cfg, inputs, None, **extra)
    f, norm = load_signal(cfg.signal)
    if f.size != 2:
        raise UsageError("conv1 takes a 2-point signal")
    inputs["signal_norm"] = norm
    out = apply_dense(StateVector(f), U, allow_nonunitary=True)
    oracle, _ = normalize(circular_convolve(f, [cfg.h0, cfg.h1]))
    return _report(cfg, inputs, out.amps, ordering="time",
                   dev=max_abs_diff(out.amps, oracle), **extra)


def cmd_oracle(cfg: RunConfig, figures: list) -> dict:
    f, norm = load_signal(cfg.signal)
    H = load_filter(cfg.filter, f.size, cfg.filter_domain)
    y = circular_convolve(f * norm, H.impulse_response())
    via_dft = idft(dft(f * norm) * H.values)
    if cfg.plot_dir:
        figures.append(str(_plots().plot_amplitudes(
            Path(cfg.plot_dir) / "oracle_y.png", y, "circular convolution")))
    return _report(cfg, {"signal": cfg.signal, "signal_norm": norm, "filter": cfg.filter},
                   y, ordering="time", dev=max_abs_diff(y, via_dft))


def cmd_compare(cfg: RunConfig, figures: list) -> dict:
    if cfg.signal is None:
        raise UsageError("compare needs --signal")
    if cfg.pipeline not in PIPELINES:
        raise UsageError(f"unknown pipeline {cfg.pipeline!r}")
    path = Path(cfg.signal)
    if not path.is_dir():
        return _pipeline_report(cfg, cfg.pipeline, cfg.signal, figures)
    results = []
    for file in sorted(p for p in path.iterdir() if p.is_file()):
        try:
            results.append(_pipeline_report(cfg, cfg.pipeline, str(file), figures))
        except QConvError as exc:
            results.append({"inputs": {"signal": str(file)}, "error": _error_object(exc), "pass": False})
    devs = [r["oracle_max_abs_dev"] for r in results if r.get("oracle_max_abs_dev") is not None]
    return {
        "command": cfg.command,
        "inputs": {"signal_dir": cfg.signal, "pipeline": cfg.pipeline, "filter": cfg.filter},
        "ordering": "time",
        "amplitudes": [],
        "scale_A": None,
        "success_probability": None,
        "oracle_max_abs_dev": max(devs) if devs else None,
        "pass": bool(results) and all(r["pass"] for r in results),
        "results": results,
    }


def published_checks(tol: float = PUBLISHED_TOL) -> list[dict]:
    """Recompute the printed numbers of both worked examples."""
    rows: list[dict] = []

    def check(name, expected, actual):
        dev = abs(float(actual) - float(expected))
        rows.append({"name": name, "expected": float(expected), "actual": float(actual),
                     "abs_dev": dev, "tol": tol, "pass": dev <= tol})

    # moving-average example
    H1 = conv.FrequencyResponse.example1()
    printed = {0: 1 + 0j, 1: 0.8536 - 0.3536j, 2: 0.5 - 0.5j, 3: 0.1464 - 0.3536j, 4: 0j}
    for p, v in printed.items():
        check(f"example1.H{p}.re", v.real, H1.values[p].real)
        check(f"example1.H{p}.im", v.imag, H1.values[p].imag)
    for k, mag in enumerate([0.9239, 0.7071, 0.3827], start=1):
        check(f"example1.|H{k}|", mag, H1.magnitudes[k])
    bank = conv.phases_from_response(H1)
    for k, phi in enumerate([-0.3927, -0.7854, -1.1781], start=1):
        check(f"example1.phi{k}", phi, getattr(bank, f"phi{k}"))
    diag = conv.MagnitudeDiagonal.from_response(H1, "conjugate_pairs").entries
    for k, v in enumerate([0.9239, 0.9239, 0.7071, 0.7071, 0.3827, 0.3827, 0, 1]):
        check(f"example1.D[{k}]", v, diag[k])
    delta = np.zeros(8, dtype=complex)
    delta[0] = 1
    res = conv.convolve_abstract(delta, H1)
    for k, v in enumerate([0.5, 0.5, 0, 0, 0, 0, 0, 0]):
        check(f"example1.delta_response[{k}]", v, res.recovered_y[k].real)

    # ideal low-pass example; h1 and h2 follow the closed form (1 + 2 cos(pi n/4 + pi/12)) / 8
    h = conv.FrequencyResponse.lowpass12().impulse_response()
    printed_h = [2.9319, 2.0, 0.4824, -0.7321, -0.9319, 0.0, 1.5176, 2.7321]
    for n, v in enumerate(printed_h):
        check(f"example2.h{n}*8", v, h[n].real * 8)
    low = conv.convolve_ideal_filter(delta, conv.LOWPASS)
    check("example2.lowpass_probability(delta)", 3 / 8, low.success_probability)
    h_unit, _ = normalize(h)
    check("example2.lowpass_state(delta)", 0.0, max_abs_diff(low.output_state.amps, h_unit))
    alt = (-1.0) ** np.arange(8) / np.sqrt(8)
    high = conv.convolve_ideal_filter(alt, conv.HIGHPASS)
    check("example2.highpass_probability(alt)", 1.0, high.success_probability)
    check("example2.highpass_state(alt)", 0.0, max_abs_diff(high.output_state.amps, alt))
    printed_p2 = np.array([[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]])
    p2 = conv.two_qubit_permutation()
    check("two_qubit.P2_matrix", 0.0, np.max(np.abs(p2.matrix() - printed_p2)))
    check("two_qubit.P2_involution", 1.0, float(p2.is_involution()))
    return rows


def cmd_reproduce(cfg: RunConfig, figures: list) -> dict:
    rows = published_checks(cfg.tolerance)
    if cfg.plot_dir:
        plots = _plots()
        out = Path(cfg.plot_dir)
        low = conv.FrequencyResponse.lowpass12()
        figures.append(str(plots.plot_impulse_response(
            out / "lowpass12_impulse_response.png", low.impulse_response(),
            "ideal low-pass impulse response")))
        figures.append(str(plots.plot_spectrum(
            out / "example1_response.png", conv.FrequencyResponse.example1().values,
            "two-tap moving average")))
    dev = max(r["abs_dev"] for r in rows)
    return {
        "command": cfg.command,
        "inputs": {},
        "ordering": None,
        "amplitudes": [],
        "scale_A": None,
        "success_probability": None,
        "oracle_max_abs_dev": dev,
        "pass": all(r["pass"] for r in rows),
        "checks": rows,
    }


HANDLERS = {
    "qft": cmd_qft,
    "convolve": cmd_convolve,
    "ideal-filter": cmd_ideal_filter,
    "conv2": cmd_conv2,
    "conv1": cmd_conv1,
    "oracle": cmd_oracle,
    "compare": cmd_compare,
    "reproduce-paper": cmd_reproduce,
}


def _error_object(exc: BaseException) -> dict:
    return {"type": type(exc).__name__, "message": str(exc)}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns ``(exit_code, report)``."""
    figures: list[str] = []
    try:
        report = HANDLERS[cfg.command](cfg, figures)
    except UsageError as exc:
        return EXIT_USAGE, {"command": cfg.command, "error": _error_object(exc), "pass": False}
    except QConvError as exc:
        return EXIT_PIPELINE, {"command": cfg.command, "error": _error_object(exc), "pass": False}
    if figures:
        report["figures"] = figures
    return (EXIT_OK if report["pass"] else EXIT_TOLERANCE), report


def render(report: dict, fmt: str) -> str:
    if fmt == "json" or "error" in report:
        return dumps_report(report)
    if "checks" in report:
        return table_csv(report["checks"], ["name", "expected", "actual", "abs_dev", "tol", "pass"])
    if "results" in report:
        rows = [{"signal": r["inputs"]["signal"], "oracle_max_abs_dev": r.get("oracle_max_abs_dev"),
                 "success_probability": r.get("success_probability"), "pass": r["pass"]}
                for r in report["results"]]
        return table_csv(rows, ["signal", "oracle_max_abs_dev", "success_probability", "pass"])
    values = report["amplitudes"]
    return amplitudes_csv([complex(v["re"], v["im"]) for v in values])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qconv", description="QFT-based circular convolution circuits checked against a classical oracle.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=float, default=None,
                        help="tolerance for oracle deviations (default 1e-10, 1e-4 for reproduce-paper)")
    common.add_argument("--plot-dir", default=None, help="also write PNG figures into this directory")
    signal = argparse.ArgumentParser(add_help=False)
    signal.add_argument("--signal", help="signal file, or delta<N> / alt<N> / ramp<N> / ones<N>")
    filt = argparse.ArgumentParser(add_help=False)
    filt.add_argument("--filter", help=f"preset ({', '.join(FILTER_PRESETS)}), h=... / H=... inline values, or a file")
    filt.add_argument("--filter-domain", choices=("time", "freq"), default="time",
                      help="whether a filter file holds the impulse response or H_p")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("qft", parents=[common, signal], help="QFT of a signal")
    p.add_argument("--ordering", choices=ORDERINGS, default="natural")
    p = sub.add_parser("convolve", parents=[common, signal, filt], help="abstract-D convolution pipeline")
    p.add_argument("--placement", choices=(conv.AFTER_PHASES, conv.BEFORE_PHASES), default=conv.AFTER_PHASES)
    p.add_argument("--workaround", action="store_true", help="shift H by a constant to avoid zeros")
    p = sub.add_parser("ideal-filter", parents=[common, signal], help="ancilla circuit for ideal filters")
    p.add_argument("--kind", choices=(conv.LOWPASS, conv.HIGHPASS), default=conv.LOWPASS)
    p.add_argument("--shared-register", action="store_true",
                   help="high-pass through the low-pass circuit with the IQFT on the ancilla=1 half")
    sub.add_parser("conv2", parents=[common, signal, filt], help="2-qubit convolution scheme")
    p = sub.add_parser("conv1", parents=[common, signal], help="1-qubit convolution matrix")
    p.add_argument("--h0", type=float, required=True)
    p.add_argument("--h1", type=float, required=True)
    sub.add_parser("oracle", parents=[common, signal, filt], help="classical circular convolution")
    p = sub.add_parser("compare", parents=[common, signal, filt], help="pipeline vs oracle")
    p.add_argument("--pipeline", choices=PIPELINES, default="abstract")
    p.add_argument("--placement", choices=(conv.AFTER_PHASES, conv.BEFORE_PHASES), default=conv.AFTER_PHASES)
    p.add_argument("--shared-register", action="store_true")
    sub.add_parser("reproduce-paper", parents=[common], help="recompute both worked examples")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields})


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"qconv: {exc}", file=sys.stderr)
        return EXIT_USAGE
    code, report = run(cfg)
    if "error" in report:
        print(f"qconv: {report['error']['type']}: {report['error']['message']}", file=sys.stderr)
    sys.stdout.write(render(report, cfg.fmt).rstrip("\n") + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
