"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` to see the lines inline, or
``python3 tests/test_acceptance.py`` for the bare summary.
"""

import time

import numpy as np
import pytest

from qconv.convolution import (
    AFTER_PHASES,
    BEFORE_PHASES,
    HIGHPASS,
    LOWPASS,
    FrequencyResponse,
    MagnitudeDiagonal,
    PhaseBank,
    build_highpass_p4,
    build_lowpass_p4,
    conv1_matrix,
    convolve_2qubit,
    convolve_abstract,
    convolve_ideal_filter,
    convolve_with_zero_workaround,
    ideal_filter_circuit_matrix,
    phases_from_response,
    two_qubit_permutation,
)
from qconv.numerics import circular_convolve, dft, idft, max_abs_diff, random_unit_signal
from qconv.qft import (
    CONJUGATE_PAIRS,
    NATURAL,
    PAIRED,
    controlled_iqft,
    ordering_sequence,
    paired_to_natural,
    paired_to_pairs,
    pairs_to_natural,
    qft,
)
from qconv.simulator import (
    H as HADAMARD,
    X,
    StateVector,
    apply_permutation,
    operator_matrix,
    phase_gate,
    unitarity_error,
)

SEED = 7_20_2024


def emit(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line, flush=True)
    return line


# -- criteria ----------------------------------------------------------------

def criterion_1():
    start = time.perf_counter()
    H = dft(np.array([1, 1, 0, 0, 0, 0, 0, 0]) / 2)
    printed = {0: 1, 1: 0.8536 - 0.3536j, 2: 0.5 - 0.5j, 3: 0.1464 - 0.3536j, 4: 0}
    dev = max(max(abs(H[p].real - v.real), abs(H[p].imag - complex(v).imag)) for p, v in printed.items())
    bank = phases_from_response(FrequencyResponse(H))
    phis = np.array([bank.phi1, bank.phi2, bank.phi3])
    dev = max(dev, np.max(np.abs(phis - [-0.3927, -0.7854, -1.1781])))
    diag = MagnitudeDiagonal.from_response(FrequencyResponse(H), CONJUGATE_PAIRS).entries
    dev = max(dev, np.max(np.abs(diag - [0.9239, 0.9239, 0.7071, 0.7071, 0.3827, 0.3827, 0, 1])))
    elapsed = time.perf_counter() - start
    return dev <= 1e-4 and elapsed < 1.0, f"max dev {dev:.2e} (tol 1e-4), {elapsed * 1e3:.1f} ms (limit 1 s)"


def criterion_2():
    Hlp = np.zeros(8, dtype=complex)
    Hlp[0], Hlp[1], Hlp[7] = 1, np.exp(1j * np.pi / 12), np.exp(-1j * np.pi / 12)
    h8 = idft(Hlp) * 8
    printed = {0: 2.9319, 3: -0.7321, 4: -0.9319, 5: 0.0, 6: 1.5176, 7: 2.7321}
    dev_printed = max(abs(h8[n] - v) for n, v in printed.items())
    closed = 1 + 2 * np.cos(np.pi * np.arange(8) / 4 + np.pi / 12)
    dev_closed = max(abs(h8[1] - 2.0), abs(h8[2] - 0.4824), np.max(np.abs(h8 - closed)))
    ok = dev_printed / 8 <= 2e-4 and dev_closed / 8 <= 2e-4
    return ok, f"printed-values dev {dev_printed / 8:.2e}, h1/h2 closed-form dev {dev_closed / 8:.2e} (tol 2e-4)"


def criterion_3():
    rng = np.random.default_rng(SEED + 3)
    dev = 0.0
    for n in (2, 4, 8, 16, 32):
        for _ in range(20):
            f = random_unit_signal(n, rng)
            dev = max(dev, max_abs_diff(qft(StateVector(f)).amps, dft(f) / np.sqrt(n)))
            cp = qft(StateVector(f), CONJUGATE_PAIRS).amps
            dev = max(dev, max_abs_diff(cp, (dft(f) / np.sqrt(n))[list(ordering_sequence(CONJUGATE_PAIRS, n))]))
    for _ in range(20):
        f = random_unit_signal(8, rng)
        F = dft(f) / np.sqrt(8)
        out = qft(StateVector(f), PAIRED)
        dev = max(dev, max_abs_diff(out.amps, F[[7, 3, 5, 1, 6, 2, 4, 0]]))
        pairs = apply_permutation(out, paired_to_pairs(), CONJUGATE_PAIRS)
        dev = max(dev, max_abs_diff(pairs.amps, F[[7, 1, 6, 2, 5, 3, 4, 0]]))
        nat = apply_permutation(pairs, pairs_to_natural(), NATURAL)
        dev = max(dev, max_abs_diff(nat.amps, F))
    # placement is exact: a labelled spectrum is routed without arithmetic
    labels = np.arange(8) + 100j
    routed = apply_permutation(StateVector(labels[[7, 3, 5, 1, 6, 2, 4, 0]]), paired_to_natural())
    exact = np.array_equal(routed.amps, labels)
    ok = dev <= 1e-12 and exact
    return ok, f"max dev {dev:.2e} (tol 1e-12), paired layout routing exact: {exact}"


def criterion_4():
    rng = np.random.default_rng(SEED + 4)
    start = time.perf_counter()
    impulses = [rng.standard_normal(2 ** (1 + i % 5)) for i in range(50)]
    dev = agree = 0.0
    count = 0
    for i in range(200):
        h = impulses[i % 50]
        f = random_unit_signal(h.size, rng)
        H = FrequencyResponse.from_impulse(h)
        a = convolve_abstract(f, H, AFTER_PHASES)
        b = convolve_abstract(f, H, BEFORE_PHASES)
        oracle = circular_convolve(f, h)
        dev = max(dev, max_abs_diff(a.recovered_y, oracle), max_abs_diff(b.recovered_y, oracle))
        agree = max(agree, max_abs_diff(a.output_state.amps, b.output_state.amps))
        count += 1
    elapsed = time.perf_counter() - start
    ok = dev <= 1e-10 and agree <= 1e-12 and elapsed < 10.0
    return ok, (f"{count} cases, oracle dev {dev:.2e} (tol 1e-10), placement gap {agree:.2e} (tol 1e-12), "
                f"{elapsed:.2f} s (limit 10 s)")


def criterion_5():
    rng = np.random.default_rng(SEED + 5)
    bands = {LOWPASS: [0, 1, 7], HIGHPASS: [2, 3, 4, 5, 6]}
    impulses = {kind: FrequencyResponse.lowpass12().impulse_response() if kind == LOWPASS
                else FrequencyResponse.highpass().impulse_response() for kind in bands}
    state_dev = prob_dev = 0.0
    cases = 0
    while cases < 100:
        f = random_unit_signal(8, rng)
        F = dft(f)
        energy = np.abs(F) ** 2
        if min(energy[b].sum() for b in bands.values()) <= 1e-6:
            continue
        cases += 1
        for kind, band in bands.items():
            y = circular_convolve(f, impulses[kind])
            expected_prob = energy[band].sum() / energy.sum()
            variants = (False, True) if kind == HIGHPASS else (False,)
            for shared in variants:
                res = convolve_ideal_filter(f, kind, shared)
                state_dev = max(state_dev, max_abs_diff(res.output_state.amps, y / np.linalg.norm(y)))
                prob_dev = max(prob_dev, abs(res.success_probability - expected_prob))
    delta = np.zeros(8, dtype=complex)
    delta[0] = 1
    p_delta = convolve_ideal_filter(delta, LOWPASS).success_probability
    delta_ok = abs(p_delta - 3 / 8) <= 1e-15
    ok = state_dev <= 1e-10 and prob_dev <= 1e-12 and delta_ok
    return ok, (f"state dev {state_dev:.2e} (tol 1e-10), probability dev {prob_dev:.2e} (tol 1e-12), "
                f"delta low-pass probability {p_delta!r}")


def criterion_6():
    rng = np.random.default_rng(SEED + 6)
    H = FrequencyResponse.example1()
    h = np.array([1, 1, 0, 0, 0, 0, 0, 0]) / 2
    dev = 0.0
    offsets = set()
    for _ in range(100):
        f = random_unit_signal(8, rng)
        res = convolve_with_zero_workaround(f, H)
        offsets.add(res.offset)
        dev = max(dev, max_abs_diff(res.recovered_y, circular_convolve(f, h)))
    ok = dev <= 1e-10 and offsets == {1.0}
    return ok, f"100 cases, oracle dev {dev:.2e} (tol 1e-10), offsets used {sorted(offsets)}"


def criterion_7():
    rng = np.random.default_rng(SEED + 7)
    worst = 0.0
    gates = [HADAMARD, X, phase_gate(np.pi / 12), phase_gate(-np.pi / 12)]
    for bank in [phases_from_response(FrequencyResponse.example1())] + [
            PhaseBank(*rng.uniform(-np.pi, np.pi, 3), s0=-1, s4=1) for _ in range(20)]:
        gates.extend(bank.gates().values())
    for g in gates:
        worst = max(worst, unitarity_error(g))
    perms = [build_lowpass_p4(), build_highpass_p4(), two_qubit_permutation(),
             paired_to_pairs(), pairs_to_natural(), paired_to_natural(), pairs_to_natural(4)]
    for p in perms:
        worst = max(worst, unitarity_error(p.matrix().astype(complex)))
    for value in (0, 1):
        worst = max(worst, unitarity_error(operator_matrix(lambda s: controlled_iqft(s, value), 4)))
    for kind, shared in ((LOWPASS, False), (HIGHPASS, False), (HIGHPASS, True)):
        worst = max(worst, unitarity_error(ideal_filter_circuit_matrix(kind, shared)))
    # conv1 flag agrees with the product test, including edge cases
    mismatches = 0
    cases = [(1, 0), (0, 1), (0.6, 0.8), (1e-11, 1), (1e-9, 1), (-2, 0)]
    cases += [tuple(rng.standard_normal(2)) for _ in range(200)]
    for h0, h1 in cases:
        _, unitary = conv1_matrix(h0, h1)
        if unitary != (abs(h0 * h1) <= 1e-10):
            mismatches += 1
    ok = worst <= 1e-12 and mismatches == 0
    return ok, f"max |U^H U - I| {worst:.2e} (tol 1e-12), conv1 flag mismatches {mismatches}/{len(cases)}"


def criterion_8():
    rng = np.random.default_rng(SEED + 8)
    dev = 0.0
    for _ in range(100):
        h = rng.standard_normal(4)
        f = random_unit_signal(4, rng)
        res = convolve_2qubit(f, FrequencyResponse.from_impulse(h))
        dev = max(dev, max_abs_diff(res.recovered_y, circular_convolve(f, h)))
    p2 = two_qubit_permutation()
    printed = np.array([[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]])
    matrix_ok = np.array_equal(p2.matrix(), printed) and p2 == p2.inverse()
    ok = dev <= 1e-10 and matrix_ok
    return ok, f"100 cases, oracle dev {dev:.2e} (tol 1e-10), P2 printed matrix and self-inverse: {matrix_ok}"


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, detail = CRITERIA[number]()
    with capsys.disabled():
        print()
        emit(number, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = [CRITERIA[k]() for k in sorted(CRITERIA)]
    for k, (ok, detail) in zip(sorted(CRITERIA), results):
        emit(k, ok, detail)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
