"""Projective measurement machinery.

Covers Born-rule outcome distributions, conditioning on an outcome, the
dephasing channel ``rho -> sum_a P_a rho P_a``, the pointer-coupling unitary
``sum_a P_a (x) D_a``, and the two concrete projector families used by the
experiments here: spin along an analyzer angle and ring momentum modes.

The analyzer convention is fixed once: angles live in the x-z plane, with
``n(theta) = (sin theta, 0, cos theta)``, so ``theta = 0`` is the z axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .qlin import (
    ATOL,
    DensityMatrix,
    TensorSpace,
    UnitaryOperator,
    dagger,
    tensor_product,
)

PROB_FLOOR = 1e-12    # below this an outcome has no conditional state

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class ProjectorSet:
    """Complete family of mutually orthogonal projectors with outcome labels.

    Labels are attached data, not matrix indices; they carry physical values
    (spin signs, momentum values) into reports.
    """

    space: TensorSpace
    labels: tuple[Hashable, ...]
    projectors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.projectors):
            raise ValueError("labels and projectors must have the same length")
        if len(self.projectors) == 0:
            raise ValueError("a measurement needs at least one projector")
        d = self.space.dim
        frozen = []
        for label, p in zip(self.labels, self.projectors):
            p = np.asarray(p, dtype=np.complex128)
            if p.shape != (d, d):
                raise ValueError(f"projector for label {label!r} has shape {p.shape}, expected {(d, d)}")
            if np.max(np.abs(p - dagger(p))) > ATOL:
                raise ValueError(f"projector for label {label!r} is not Hermitian")
            if np.max(np.abs(p @ p - p)) > ATOL:
                raise ValueError(f"projector for label {label!r} is not idempotent")
            out = p.copy()
            out.setflags(write=False)
            frozen.append(out)
        for i in range(len(frozen)):
            for j in range(i + 1, len(frozen)):
                if np.max(np.abs(frozen[i] @ frozen[j])) > ATOL:
                    raise ValueError(
                        f"projectors {self.labels[i]!r} and {self.labels[j]!r} are not orthogonal"
                    )
        total = sum(frozen)
        if np.max(np.abs(total - np.eye(d))) > ATOL:
            raise ValueError("projectors do not sum to the identity")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "projectors", tuple(frozen))

    def __len__(self) -> int:
        return len(self.projectors)


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    """One branch of a measurement: label, probability, conditional state.

    ``conditional_state`` is None when the branch probability is below
    :data:`PROB_FLOOR`; renormalizing a null projection is undefined.
    """

    label: Hashable
    probability: float
    conditional_state: DensityMatrix | None


def born_distribution(rho: DensityMatrix, measurement: ProjectorSet) -> list[MeasurementOutcome]:
    """Outcome probabilities ``p_a = trace(P_a rho P_a)`` and conditional states."""
    if rho.space.dims != measurement.space.dims:
        raise ValueError(
            f"space mismatch: state {rho.space.dims} vs measurement {measurement.space.dims}"
        )
    outcomes = []
    for label, p in zip(measurement.labels, measurement.projectors):
        projected = p @ rho.matrix @ p
        prob = float(np.trace(projected).real)
        if prob > PROB_FLOOR:
            conditional = DensityMatrix(rho.space, projected / prob)
        else:
            conditional = None
        outcomes.append(MeasurementOutcome(label, prob, conditional))
    return outcomes


def dephasing_channel(rho: DensityMatrix, measurement: ProjectorSet) -> DensityMatrix:
    """Measurement without readout: ``rho -> sum_a P_a rho P_a``.

    Blocks commuting with the measurement are preserved, coherences between
    different outcomes are removed, turning a superposition into a mixture.
    """
    if rho.space.dims != measurement.space.dims:
        raise ValueError(
            f"space mismatch: state {rho.space.dims} vs measurement {measurement.space.dims}"
        )
    total = np.zeros_like(rho.matrix)
    for p in measurement.projectors:
        total = total + p @ rho.matrix @ p
    return DensityMatrix(rho.space, total)


def _cyclic_shift(dim: int, amount: int) -> np.ndarray:
    shift = np.zeros((dim, dim), dtype=np.complex128)
    for q in range(dim):
        shift[(q + amount) % dim, q] = 1.0
    return shift


def ideal_measurement_unitary(measurement: ProjectorSet, pointer_dim: int) -> UnitaryOperator:
    """Pointer-coupling unitary ``sum_a P_a (x) D_a``.

    ``D_a`` is the cyclic shift by the outcome's position ``a`` on a
    ``pointer_dim``-dimensional pointer register, so a pointer prepared in
    ``|0>`` ends up recording the outcome index: ``|0> -> |a>``.
    """
    n_outcomes = len(measurement)
    if pointer_dim < n_outcomes:
        raise ValueError(
            f"pointer dimension {pointer_dim} cannot record {n_outcomes} outcomes"
        )
    d = measurement.space.dim
    u = np.zeros((d * pointer_dim, d * pointer_dim), dtype=np.complex128)
    for a, p in enumerate(measurement.projectors):
        u += tensor_product(p, _cyclic_shift(pointer_dim, a))
    return UnitaryOperator(measurement.space.joined(TensorSpace((pointer_dim,))), u)


def spin_axis(theta: float) -> np.ndarray:
    """Spin observable ``n(theta) . sigma`` for an analyzer in the x-z plane."""
    if not math.isfinite(theta):
        raise ValueError("analyzer angle must be finite")
    return math.sin(theta) * SIGMA_X + math.cos(theta) * SIGMA_Z


def spin_projectors(theta: float) -> ProjectorSet:
    """Projectors ``(I +/- n(theta).sigma) / 2`` with labels +1 / -1.

    ``theta`` is in radians; degree-valued interfaces convert before calling.
    """
    axis = spin_axis(theta)
    eye = np.eye(2, dtype=np.complex128)
    return ProjectorSet(
        TensorSpace((2,)),
        labels=(+1, -1),
        projectors=((eye + axis) / 2, (eye - axis) / 2),
    )


def ring_momentum_projectors(n_sites: int) -> ProjectorSet:
    """Projectors onto the discrete Fourier modes of an n-site ring.

    Mode ``k`` is ``v_k(x) = exp(i 2 pi k x / n) / sqrt(n)`` and is labeled
    by its momentum value ``k * 2 pi / n``.
    """
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    x = np.arange(n_sites)
    projectors = []
    labels = []
    for k in range(n_sites):
        mode = np.exp(2j * math.pi * k * x / n_sites) / math.sqrt(n_sites)
        projectors.append(np.outer(mode, mode.conj()))
        labels.append(k * 2.0 * math.pi / n_sites)
    return ProjectorSet(TensorSpace((n_sites,)), tuple(labels), tuple(projectors))


def position_projectors(n_sites: int) -> ProjectorSet:
    """Projectors onto the n site states, labeled 1..n."""
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    eye = np.eye(n_sites, dtype=np.complex128)
    projectors = tuple(np.outer(eye[x], eye[x]) for x in range(n_sites))
    return ProjectorSet(TensorSpace((n_sites,)), tuple(range(1, n_sites + 1)), projectors)


def product_projectors(a: ProjectorSet, b: ProjectorSet) -> ProjectorSet:
    """Joint measurement of two subsystems; labels are (label_a, label_b) pairs."""
    labels = []
    projectors = []
    for la, pa in zip(a.labels, a.projectors):
        for lb, pb in zip(b.labels, b.projectors):
            labels.append((la, lb))
            projectors.append(tensor_product(pa, pb))
    return ProjectorSet(a.space.joined(b.space), tuple(labels), tuple(projectors))


def outcomes_to_json(outcomes: Sequence[MeasurementOutcome]) -> list[dict]:
    """Outcome list as ``[{"label": ..., "p": ...}]`` in measurement order."""
    out = []
    for outcome in outcomes:
        label = outcome.label
        if isinstance(label, (np.integer,)):
            label = int(label)
        elif isinstance(label, (np.floating,)):
            label = float(label)
        out.append({"label": label, "p": float(outcome.probability)})
    return out
