"""Quantum side of the Bell experiment.

The two-spin singlet state gives the correlation ``<ab> = -cos(tA - tB)``
between analyzers at angles ``tA`` and ``tB``; at the right four angles the
four-term combination reaches magnitude ``2 sqrt(2)``, past the classical
bound of 2.  Angles are degrees at every public interface and radians only
internally, matching :func:`collapselab.measurement.spin_projectors`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .lhv import ChshSettings
from .mc import StreamBlock, StreamSpec, TrialStream, TrialSummary, run_batches
from .measurement import (
    MeasurementOutcome,
    born_distribution,
    product_projectors,
    spin_axis,
    spin_projectors,
)
from .qlin import DensityMatrix, PureState, TensorSpace, expectation, tensor_product

TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)

CLOSED_FORM_ATOL = 1e-10


@dataclass(frozen=True)
class CorrelationReport:
    """Exact and (optionally) empirical ``<ab>`` for one pair of analyzer angles."""

    theta_a_deg: float
    theta_b_deg: float
    exact_value: float
    closed_form: float
    n_trials: int | None = None
    empirical: float | None = None
    stderr: float | None = None

    def __post_init__(self) -> None:
        if abs(self.exact_value - self.closed_form) > CLOSED_FORM_ATOL:
            raise ValueError(
                f"trace formula {self.exact_value!r} disagrees with closed form {self.closed_form!r}"
            )
        if abs(self.exact_value) > 1.0 + 1e-12:
            raise ValueError(f"correlation {self.exact_value!r} outside [-1, 1]")

    def to_json(self) -> dict:
        return {
            "theta_a_deg": self.theta_a_deg,
            "theta_b_deg": self.theta_b_deg,
            "exact": self.exact_value,
            "closed_form": self.closed_form,
            "empirical": self.empirical,
            "stderr": self.stderr,
            "n": self.n_trials,
        }


CSV_HEADER = "theta_a_deg,theta_b_deg,exact,closed_form,empirical,stderr,n"


def report_csv_row(report: CorrelationReport) -> str:
    empirical = "" if report.empirical is None else repr(report.empirical)
    stderr = "" if report.stderr is None else repr(report.stderr)
    n = "" if report.n_trials is None else str(report.n_trials)
    return (
        f"{report.theta_a_deg!r},{report.theta_b_deg!r},"
        f"{report.exact_value!r},{report.closed_form!r},{empirical},{stderr},{n}"
    )


def singlet() -> DensityMatrix:
    """The zero-angular-momentum two-spin state ``(|ud> - |du>) / sqrt(2)``."""
    amps = np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128) / math.sqrt(2.0)
    return PureState(TensorSpace((2, 2)), amps).density()


def correlation(theta_a_deg: float, theta_b_deg: float) -> CorrelationReport:
    """Exact ``<ab>`` from the trace formula, cross-filled with ``-cos`` form."""
    obs = tensor_product(
        spin_axis(math.radians(theta_a_deg)), spin_axis(math.radians(theta_b_deg))
    )
    exact = expectation(singlet(), obs)
    closed = -math.cos(math.radians(theta_a_deg - theta_b_deg))
    return CorrelationReport(float(theta_a_deg), float(theta_b_deg), exact, closed)


def pair_distribution(theta_a_deg: float, theta_b_deg: float) -> list[MeasurementOutcome]:
    """Born distribution of the joint spin measurement; labels are (a, b) signs."""
    joint = product_projectors(
        spin_projectors(math.radians(theta_a_deg)),
        spin_projectors(math.radians(theta_b_deg)),
    )
    return born_distribution(singlet(), joint)


def correlation_from_distribution(theta_a_deg: float, theta_b_deg: float) -> float:
    """``<ab>`` summed from the 4-outcome pmf; cross-check of :func:`correlation`."""
    return sum(out.label[0] * out.label[1] * out.probability for out in pair_distribution(theta_a_deg, theta_b_deg))


def chsh_quantum(settings: ChshSettings) -> float:
    """Four-term combination of singlet correlations at the given settings."""
    ta, tap, tb, tbp = settings.as_tuple()
    return (
        correlation(ta, tb).exact_value
        + correlation(ta, tbp).exact_value
        + correlation(tap, tb).exact_value
        - correlation(tap, tbp).exact_value
    )


def _pair_tables(theta_a_deg: float, theta_b_deg: float):
    outcomes = pair_distribution(theta_a_deg, theta_b_deg)
    cumulative = np.cumsum([out.probability for out in outcomes])
    labels = [out.label for out in outcomes]
    return cumulative, labels


def sample_singlet_pair(
    theta_a_deg: float, theta_b_deg: float, stream: TrialStream
) -> tuple[int, int]:
    """One joint outcome ``(a, b)`` drawn from the Born distribution."""
    cumulative, labels = _pair_tables(theta_a_deg, theta_b_deg)
    j = int(np.searchsorted(cumulative, stream.u01(), side="right"))
    a, b = labels[min(j, len(labels) - 1)]
    return int(a), int(b)


def sample_singlet_pairs(
    theta_a_deg: float, theta_b_deg: float, n: int, spec: StreamSpec
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sampler; trial ``i`` equals :func:`sample_singlet_pair` on trial ``i``."""
    cumulative, labels = _pair_tables(theta_a_deg, theta_b_deg)
    block = StreamBlock(spec, 0, n)
    j = np.searchsorted(cumulative, block.uniforms(0), side="right")
    j = np.minimum(j, len(labels) - 1)
    a_values = np.array([a for a, _ in labels], dtype=np.int64)
    b_values = np.array([b for _, b in labels], dtype=np.int64)
    return a_values[j], b_values[j]


def _product_batch(cumulative: np.ndarray, products: np.ndarray, block: StreamBlock) -> np.ndarray:
    j = np.searchsorted(cumulative, block.uniforms(0), side="right")
    return products[np.minimum(j, len(products) - 1)]


def empirical_correlation(
    theta_a_deg: float,
    theta_b_deg: float,
    n_trials: int,
    spec: StreamSpec,
    workers: int = 1,
) -> TrialSummary:
    """Monte Carlo ``<ab>``; the exact trace-formula value is the oracle."""
    cumulative, labels = _pair_tables(theta_a_deg, theta_b_deg)
    products = np.array([a * b for a, b in labels], dtype=np.float64)
    return run_batches(
        lambda block: _product_batch(cumulative, products, block), n_trials, spec, workers
    )


def empirical_chsh(
    settings: ChshSettings,
    n_per_term: int,
    spec: StreamSpec,
    workers: int = 1,
) -> tuple[float, float]:
    """Monte Carlo CHSH value and standard error, one substream per term."""
    ta, tap, tb, tbp = settings.as_tuple()
    terms = [(ta, tb, +1), (ta, tbp, +1), (tap, tb, +1), (tap, tbp, -1)]
    total = 0.0
    var = 0.0
    for offset, (angle_a, angle_b, sign) in enumerate(terms):
        summary = empirical_correlation(angle_a, angle_b, n_per_term, spec.substream(offset), workers)
        total += sign * summary.mean
        var += summary.stderr ** 2
    return total, math.sqrt(var)


def with_empirical(report: CorrelationReport, summary: TrialSummary) -> CorrelationReport:
    return replace(
        report, n_trials=summary.n_trials, empirical=summary.mean, stderr=summary.stderr
    )
