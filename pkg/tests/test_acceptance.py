"""Acceptance gate: every headline claim, at its stated tolerance.

Each test prints one PASS line (visible with ``pytest -s``); a failure in
any of them means the package does not reproduce the quantitative record.
"""

import itertools
import json
import math
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from collapselab import bell, cat, lhv, measurement, monty
from collapselab.lhv import ChshSettings, LhvModel
from collapselab.mc import StreamSpec, TrialStream
from collapselab.qlin import (
    DensityMatrix,
    PureState,
    TensorSpace,
    evolve,
    partial_trace,
    tensor_product,
)

from conftest import monty_win_oracle, random_density

MAX_VIOLATION = ChshSettings.maximal_violation()
TWO_SQRT_TWO = 2.0 * math.sqrt(2.0)


def _passed(criterion: int, text: str) -> None:
    print(f"ACCEPTANCE {criterion} PASS: {text}")


def test_criterion_1_chsh_quantum_violation():
    s = bell.chsh_quantum(MAX_VIOLATION)
    assert abs(abs(s) - TWO_SQRT_TWO) <= 1e-9

    n = 1_000_000
    s_hat, stderr = bell.empirical_chsh(MAX_VIOLATION, n, StreamSpec(42, 0))
    assert abs(s_hat - s) <= 5 * stderr
    _passed(1, f"|S| = {abs(s):.12f} = 2*sqrt(2); empirical {s_hat:.6f} within 5 sigma at n=10^6/term")


def test_criterion_2_correlation_table():
    expected = {0.0: -1.0, 45.0: -1.0 / math.sqrt(2.0), 90.0: 0.0, 180.0: 1.0}
    for delta, value in expected.items():
        report = bell.correlation(0.0, delta)
        assert abs(report.exact_value - value) <= 1e-10, f"C({delta}) = {report.exact_value}"
    _passed(2, "C(0)=-1, C(45)=-1/sqrt(2), C(90)=0, C(180)=+1 within 1e-10")


def test_criterion_3_lhv_bound():
    # randomized fleet: 10,000 models covering 1..32 hidden states
    spec = StreamSpec(42, 0)
    worst = 0.0
    for i in range(10_000):
        n_lambdas = 1 + (i % 32)
        model = lhv.random_model(n_lambdas, MAX_VIOLATION, TrialStream(spec, i))
        worst = max(worst, abs(lhv.chsh_exact(model)))
    assert worst <= 2.0 + 1e-12

    # exhaustive enumeration: all 2^8 deterministic single-lambda assignments
    # over the four angles on each side
    angles = MAX_VIOLATION.as_tuple()
    for bits in itertools.product((1, -1), repeat=8):
        model = LhvModel(
            lambdas=(0,),
            pmf=np.array([1.0]),
            settings_a_deg=angles,
            settings_b_deg=angles,
            response_a=np.array(bits[:4]).reshape(4, 1),
            response_b=np.array(bits[4:]).reshape(4, 1),
        )
        s = lhv.chsh_exact(model, pairing=(0, 1, 2, 3))
        assert abs(s) <= 2.0 + 1e-12

    # pointwise identity: the 16-pattern truth table only ever gives +/-2
    values = set()
    for a, ap, b, bp in itertools.product((1, -1), repeat=4):
        model = LhvModel(
            lambdas=(0,),
            pmf=np.array([1.0]),
            settings_a_deg=(0.0, 90.0),
            settings_b_deg=(45.0, -45.0),
            response_a=np.array([[a], [ap]]),
            response_b=np.array([[b], [bp]]),
        )
        values.add(lhv.identity_check(model, 0))
    assert values == {-2, 2}
    _passed(3, f"10,000 random + 256 exhaustive models: max |S| = {worst:.12f} <= 2; identity in {{-2,+2}}")


def test_criterion_4_monty_classic_and_generalized():
    assert monty.win_probability(3, 1, "switch") == Fraction(2, 3)
    assert monty.win_probability(3, 1, "stay") == Fraction(1, 3)

    n = 1_000_000
    sigma = math.sqrt((1 / 3) * (2 / 3) / n)
    stay = monty.empirical_win_rate(3, 1, "stay", n, StreamSpec(42, 0))
    switch = monty.empirical_win_rate(3, 1, "switch", n, StreamSpec(42, 1))
    assert abs(stay.mean - 1 / 3) <= 5 * sigma
    assert abs(switch.mean - 2 / 3) <= 5 * sigma

    big = 1_000_000
    assert monty.win_probability(big, big - 2, "switch") == Fraction(big - 1, big)
    assert float(monty.win_probability(big, big - 2, "switch")) == pytest.approx(0.999999)
    _passed(4, f"classic 1/3 vs 2/3 (MC at 10^6 within 5 sigma = {5*sigma:.5f}); switch at n=10^6, k=n-2 is 0.999999")


def test_criterion_5_monty_oracle_equivalence():
    checked = 0
    for n in range(3, 8):
        for k in range(1, n - 1):
            for strategy in ("stay", "switch"):
                assert monty.win_probability(n, k, strategy) == monty_win_oracle(n, k, strategy)
                checked += 1
    _passed(5, f"exhaustive enumeration equals closed form exactly in all {checked} (n<=7, k, strategy) cases")


def test_criterion_6_dephasing_spin_example():
    psi = PureState(TensorSpace((2,)), np.array([0.6, 0.8])).density()
    dephased = measurement.dephasing_channel(psi, measurement.spin_projectors(0.0))
    assert dephased.matrix[0, 0] == psi.matrix[0, 0]
    assert dephased.matrix[1, 1] == psi.matrix[1, 1]
    assert abs(dephased.matrix[0, 1]) < 1e-15
    assert abs(dephased.matrix[1, 0]) < 1e-15
    _passed(6, "spin-example channel keeps populations and zeroes coherences (< 1e-15)")


def test_criterion_7_unitary_channel_equivalence():
    rng = np.random.default_rng(7)
    for dim in (2, 3):
        pointer0 = np.zeros((dim, dim), dtype=complex)
        pointer0[0, 0] = 1.0
        for _ in range(100):
            rho = DensityMatrix(TensorSpace((dim,)), random_density(rng, dim))
            g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            q, _ = np.linalg.qr(g)
            pset = measurement.ProjectorSet(
                TensorSpace((dim,)),
                tuple(range(dim)),
                tuple(np.outer(q[:, k], q[:, k].conj()) for k in range(dim)),
            )
            u = measurement.ideal_measurement_unitary(pset, pointer_dim=dim)
            joint = DensityMatrix(TensorSpace((dim, dim)), tensor_product(rho.matrix, pointer0))
            traced = partial_trace(evolve(joint, u), keep=(0,))
            direct = measurement.dephasing_channel(rho, pset)
            assert np.max(np.abs(traced.matrix - direct.matrix)) <= 1e-10
    _passed(7, "pointer coupling + trace-out equals the projector sandwich for 100 qubit and 100 qutrit states")


def test_criterion_8_cat_invariants():
    for t in (0.0, 1.0, 40.0):
        for report in cat.run_stages(t).values():
            assert abs(report.purity_full - 1.0) <= 1e-10

    final = cat.run_stages(1.0)["after_seeing"]
    assert abs(final.observer_pmf()["happy"] - 0.5) <= 1e-12
    assert abs(final.observer_pmf()["shocked"] - 0.5) <= 1e-12
    assert final.agreement == 1.0

    long_wait = cat.run_stages(40.0)["after_seeing"]
    assert abs(long_wait.observer_pmf()["shocked"] - 1.0) <= 1e-10
    _passed(8, "purity 1 at every stage; t=1 gives 1/2-1/2 with agreement exactly 1; t=40 gives certain shock")


def test_criterion_9_cli_reproducibility():
    cases = [
        ("chsh-quantum", "--trials", "1000"),
        ("chsh-lhv", "--random", "10", "--trials", "0"),
        ("correlations", "--trials", "1000"),
        ("monty", "--trials", "1000"),
        ("cat", "--time", "1"),
        ("measure", "--spin", "0.6", "0.8", "--basis", "spin"),
    ]
    for case in cases:
        outputs = set()
        for workers in ("1", "4"):
            for _ in range(2):
                result = subprocess.run(
                    [sys.executable, "-m", "collapselab", *case,
                     "--format", "json", "--seed", "42", "--workers", workers],
                    capture_output=True,
                    text=True,
                    timeout=300,
                )
                assert result.returncode == 0, result.stderr
                outputs.add(result.stdout)
        assert len(outputs) == 1, f"{case[0]} output varies across reruns/workers"
        json.loads(outputs.pop())
    _passed(9, "all six subcommands emit byte-identical JSON across reruns and worker counts")
