import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qconv.cli import (
    EXIT_OK,
    EXIT_PIPELINE,
    EXIT_TOLERANCE,
    EXIT_USAGE,
    RunConfig,
    UsageError,
    main,
    published_checks,
    run,
)
from qconv.errors import InvalidLengthError, SignalFormatError, ZeroNormError
from qconv.io import complex_array, dumps_report, parse_complex, parse_signal_file, parse_signal_text


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- signal files ------------------------------------------------------------

def test_parse_delta_file(tmp_path):
    path = tmp_path / "delta.txt"
    path.write_text("1,0,0,0,0,0,0,0\n")
    f, norm = parse_signal_file(path)
    assert norm == 1.0
    np.testing.assert_array_equal(f, np.eye(8)[0])


def test_parse_complex_entries(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("# complex samples\n0.5+0.5i\n0.5-0.5i  # trailing comment\n-0.5j\n0\n")
    f, norm = parse_signal_file(path, normalize_signal=False)
    np.testing.assert_array_equal(f, [0.5 + 0.5j, 0.5 - 0.5j, -0.5j, 0])
    assert norm == pytest.approx(np.sqrt(1.25))
    unit, _ = parse_signal_file(path)
    assert np.linalg.norm(unit) == pytest.approx(1.0, abs=1e-15)


def test_parse_errors(tmp_path):
    path = tmp_path / "six.txt"
    path.write_text("\n".join(["1"] * 6))
    with pytest.raises(InvalidLengthError):
        parse_signal_file(path)
    with pytest.raises(SignalFormatError):
        parse_signal_text("1\nabc\n")
    with pytest.raises(SignalFormatError):
        parse_complex("inf")
    path.write_text("0,0,0,0\n")
    with pytest.raises(ZeroNormError):
        parse_signal_file(path)


def test_parse_trailing_comma_and_mixed_layout():
    np.testing.assert_array_equal(parse_signal_text("1, 2,\n3,4,\n"), [1, 2, 3, 4])


def test_invalid_length_file_is_usage_error(tmp_path, capsys):
    path = tmp_path / "six.txt"
    path.write_text("\n".join(["1"] * 6))
    code, out, err = call(capsys, "qft", "--signal", str(path))
    assert code == EXIT_USAGE
    assert json.loads(out)["error"]["type"] == "UsageError"
    assert "6" in err


# -- reports -----------------------------------------------------------------

def test_convolve_example1_delta(capsys):
    code, out, _ = call(capsys, "convolve", "--filter", "example1", "--signal", "delta8")
    assert code == EXIT_OK
    report = json.loads(out)
    y = complex_array(report["recovered_y"])
    np.testing.assert_allclose(y, [0.5, 0.5, 0, 0, 0, 0, 0, 0], atol=1e-12)
    assert report["pass"] is True
    for key in ("command", "inputs", "ordering", "amplitudes", "scale_A",
                "success_probability", "oracle_max_abs_dev", "pass"):
        assert key in report


def test_ideal_filter_probability(capsys):
    code, out, _ = call(capsys, "ideal-filter", "--kind", "lowpass", "--signal", "delta8")
    assert code == EXIT_OK
    assert json.loads(out)["success_probability"] == pytest.approx(0.375, abs=1e-15)


def test_json_round_trip_is_exact(capsys):
    _, out, _ = call(capsys, "convolve", "--filter", "example1", "--signal", "ramp8")
    report = json.loads(out)
    assert dumps_report(json.loads(dumps_report(report))) == out.rstrip("\n")
    again = json.loads(out)
    for a, b in zip(report["amplitudes"], again["amplitudes"]):
        assert a["re"] == b["re"] and a["im"] == b["im"]
    _, report2 = run(RunConfig("convolve", signal="ramp8", filter="example1"))
    assert json.loads(dumps_report(report2)) == report


def test_exit_code_tolerance_failure(capsys):
    code, out, _ = call(capsys, "convolve", "--filter", "example1", "--signal", "ramp8", "--tol", "1e-30")
    report = json.loads(out)
    assert report["oracle_max_abs_dev"] > 1e-30
    assert code == EXIT_TOLERANCE and report["pass"] is False


def test_exit_code_pipeline_error(capsys):
    code, out, err = call(capsys, "ideal-filter", "--kind", "lowpass", "--signal", "alt8")
    assert code == EXIT_PIPELINE
    assert json.loads(out)["error"]["type"] == "ImpossibleOutcomeError"
    assert "ImpossibleOutcomeError" in err
    code, out, _ = call(capsys, "convolve", "--filter", "H=0,0,0,0", "--signal", "ramp4")
    assert code == EXIT_PIPELINE
    assert json.loads(out)["error"]["type"] == "AnnihilationError"


def test_workaround_handles_zero_filter(capsys):
    code, out, _ = call(capsys, "convolve", "--workaround", "--filter", "H=0,0,0,0", "--signal", "ramp4")
    assert code == EXIT_OK
    np.testing.assert_allclose(complex_array(json.loads(out)["recovered_y"]), 0, atol=1e-12)


def test_usage_errors(capsys):
    assert call(capsys, "convolve", "--filter", "nosuch", "--signal", "delta8")[0] == EXIT_USAGE
    assert call(capsys, "convolve", "--filter", "example1", "--signal", "delta4")[0] == EXIT_USAGE
    assert call(capsys, "qft", "--signal", "delta8", "--tol", "-1")[0] == EXIT_USAGE
    assert call(capsys, "qft")[0] == EXIT_USAGE
    with pytest.raises(UsageError):
        RunConfig("bogus")


def test_reproduce_command(capsys):
    code, out, _ = call(capsys, "reproduce-paper")
    report = json.loads(out)
    assert code == EXIT_OK and report["pass"]
    assert report["oracle_max_abs_dev"] <= 1e-4
    names = {row["name"] for row in report["checks"]}
    assert {"example1.phi1", "example1.D[7]", "example2.h0*8", "example2.lowpass_probability(delta)"} <= names
    assert all(row["pass"] for row in published_checks())


def test_reproduce_command_csv(capsys):
    code, out, _ = call(capsys, "reproduce-paper", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK
    assert rows and all(r["pass"] == "True" for r in rows)


def test_qft_csv_and_orderings(capsys):
    code, out, _ = call(capsys, "qft", "--signal", "delta8", "--ordering", "paired", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK
    assert [r["index"] for r in rows] == [str(i) for i in range(8)]
    assert all(float(r["re"]) == pytest.approx(1 / np.sqrt(8)) for r in rows)
    _, out, _ = call(capsys, "qft", "--signal", "ramp8", "--ordering", "conjugate_pairs")
    assert json.loads(out)["sequence"] == [7, 1, 6, 2, 5, 3, 4, 0]


def test_conv1(capsys):
    code, out, _ = call(capsys, "conv1", "--h0", "0.6", "--h1", "0.8")
    report = json.loads(out)
    assert code == EXIT_OK and report["is_unitary"] is False
    code, out, _ = call(capsys, "conv1", "--h0", "0", "--h1", "2", "--signal", "ramp2")
    report = json.loads(out)
    assert report["is_unitary"] is True and code == EXIT_OK
    np.testing.assert_allclose(complex_array(report["amplitudes"]), np.array([2, 1]) / np.sqrt(5), atol=1e-15)


def test_conv2_and_oracle(capsys):
    code, out, _ = call(capsys, "conv2", "--filter", "h=0.3,-1,0.5,2", "--signal", "ramp4")
    assert code == EXIT_OK
    code, out, _ = call(capsys, "oracle", "--filter", "h=0.3,-1,0.5,2", "--signal", "ramp4")
    y = complex_array(json.loads(out)["amplitudes"])
    f = np.arange(1, 5)
    h = np.array([0.3, -1, 0.5, 2])
    expected = [sum(f[k] * h[(n - k) % 4] for k in range(4)) for n in range(4)]
    np.testing.assert_allclose(y, expected, atol=1e-12)


def test_filter_file_domains(tmp_path, capsys):
    freq = tmp_path / "H.txt"
    freq.write_text("1\n0.8535533905932737-0.35355339059327373i\n0.5-0.5i\n0.14644660940672624-0.35355339059327373i\n"
                    "1e-300\n0.14644660940672624+0.35355339059327373i\n0.5+0.5i\n0.8535533905932737+0.35355339059327373i\n")
    code, out, _ = call(capsys, "convolve", "--filter", str(freq), "--filter-domain", "freq", "--signal", "delta8")
    assert code == EXIT_OK
    np.testing.assert_allclose(complex_array(json.loads(out)["recovered_y"]), [0.5, 0.5, 0, 0, 0, 0, 0, 0], atol=1e-12)


def test_compare_directory(tmp_path, capsys):
    (tmp_path / "a.txt").write_text("1,2,3,4,5,6,7,8\n")
    (tmp_path / "b.txt").write_text("0.5+0.5i, 0, 0, 1, 0, 0, 0, -1\n")
    code, out, _ = call(capsys, "compare", "--pipeline", "ideal-highpass", "--signal", str(tmp_path))
    report = json.loads(out)
    assert code == EXIT_OK
    assert len(report["results"]) == 2 and report["oracle_max_abs_dev"] <= 1e-10
    code, out, _ = call(capsys, "compare", "--pipeline", "abstract", "--filter", "example1",
                        "--signal", str(tmp_path), "--format", "csv")
    assert code == EXIT_OK
    assert len(list(csv.DictReader(io.StringIO(out)))) == 2


def test_compare_directory_reports_failures(tmp_path, capsys):
    (tmp_path / "alt.txt").write_text("1,-1,1,-1,1,-1,1,-1\n")
    code, out, _ = call(capsys, "compare", "--pipeline", "ideal-lowpass", "--signal", str(tmp_path))
    report = json.loads(out)
    assert code == EXIT_TOLERANCE
    assert report["results"][0]["error"]["type"] == "ImpossibleOutcomeError"


def test_plot_dir_writes_figures(tmp_path, capsys):
    code, out, _ = call(capsys, "ideal-filter", "--signal", "delta8", "--plot-dir", str(tmp_path))
    figures = json.loads(out)["figures"]
    assert code == EXIT_OK and len(figures) == 2
    for name in figures:
        with open(name, "rb") as fh:
            assert fh.read(8) == b"\x89PNG\r\n\x1a\n"
    code, out, _ = call(capsys, "reproduce-paper", "--plot-dir", str(tmp_path / "paper"))
    assert code == EXIT_OK and len(json.loads(out)["figures"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qconv.cli", "qft", "--signal", "delta4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
