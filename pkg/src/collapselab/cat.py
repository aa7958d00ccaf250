"""The decaying-nucleus / cat / observer story as explicit unitaries.

The universe is a 2 x 2 x 3 space: nucleus (up = undecayed, down = decayed),
cat (alive / dead), observer memory (ignorant / happy / shocked).  Waiting
entangles nucleus and cat; looking entangles the observer with the cat.  The
full state stays pure through every stage; "collapse" is only what the
story looks like from inside one factor.

Waiting time is measured in half-lives: survival probability ``2**-t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qlin import (
    DensityMatrix,
    PureState,
    TensorSpace,
    UnitaryOperator,
    evolve,
    matrix_to_json,
    partial_trace,
    purity,
    tensor_product,
)

CAT_SPACE = TensorSpace((2, 2, 3))

NUCLEUS_LABELS = ("up", "down")              # up = undecayed (radioactive), down = decayed
CAT_LABELS = ("alive", "dead")               # q = +1, -1
OBSERVER_LABELS = ("ignorant", "happy", "shocked")   # Q = 0, +1, -1

PURITY_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class CatUniverse:
    """Pure state of nucleus (x) cat (x) observer."""

    state: DensityMatrix

    def __post_init__(self) -> None:
        if self.state.space.dims != CAT_SPACE.dims:
            raise ValueError(f"cat universe needs dims {CAT_SPACE.dims}, got {self.state.space.dims}")
        p = purity(self.state)
        if abs(p - 1.0) > PURITY_ATOL:
            raise ValueError(f"cat universe must stay pure, purity = {p!r}")

    def after(self, u: UnitaryOperator) -> "CatUniverse":
        return CatUniverse(evolve(self.state, u))


def initial_state() -> CatUniverse:
    """Product state: undecayed nucleus, alive cat, ignorant observer."""
    amps = np.zeros(12, dtype=np.complex128)
    amps[0] = 1.0    # index (0,0,0) = up, alive, ignorant
    return CatUniverse(PureState(CAT_SPACE, amps).density())


def u_waiting(t: float) -> UnitaryOperator:
    """Decay for ``t`` half-lives, correlating the cat with the nucleus.

    Rotates |up, alive> toward |down, dead> with survival amplitude
    ``sqrt(2**-t)``; the observer factor is untouched.  At t = 1 the two
    branches have equal weight; for large t the decay is effectively certain.
    """
    if not math.isfinite(t) or t < 0:
        raise ValueError(f"waiting time must be >= 0, got {t!r}")
    survive = math.sqrt(2.0 ** (-t))
    decay = math.sqrt(1.0 - 2.0 ** (-t))
    # Rotation in the span of |up,alive> (index 0) and |down,dead> (index 3)
    # of the 4-dim nucleus-cat block; identity on the other two levels.
    block = np.eye(4, dtype=np.complex128)
    block[0, 0] = survive
    block[3, 0] = decay
    block[0, 3] = -decay
    block[3, 3] = survive
    return UnitaryOperator(CAT_SPACE, tensor_product(block, np.eye(3)))


def u_seeing() -> UnitaryOperator:
    """Opening the box: the observer memory records the cat's condition.

    Controlled on the cat: alive flips ignorant <-> happy, dead flips
    ignorant <-> shocked.  The swap completion on the unused memory level is
    the arbitrary-but-fixed unitary filler; no valid story ever reaches it.
    """
    swap_ignorant_happy = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=np.complex128)
    swap_ignorant_shocked = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=np.complex128)
    alive = np.diag([1.0, 0.0]).astype(np.complex128)
    dead = np.diag([0.0, 1.0]).astype(np.complex128)
    cat_observer = tensor_product(alive, swap_ignorant_happy) + tensor_product(
        dead, swap_ignorant_shocked
    )
    return UnitaryOperator(CAT_SPACE, tensor_product(np.eye(2), cat_observer))


@dataclass(frozen=True, eq=False)
class StageReport:
    """Read-only diagnostics of one stage of the story."""

    reduced_nucleus: DensityMatrix
    reduced_cat: DensityMatrix
    reduced_observer: DensityMatrix
    purity_full: float
    purity_nucleus: float
    purity_cat: float
    purity_observer: float
    joint_cat_observer: np.ndarray     # 2 x 3 pmf over (q, Q), normalized
    agreement: float                   # P(alive, happy) + P(dead, shocked)

    def cat_pmf(self) -> dict[str, float]:
        return {label: float(self.joint_cat_observer[i].sum()) for i, label in enumerate(CAT_LABELS)}

    def observer_pmf(self) -> dict[str, float]:
        return {
            label: float(self.joint_cat_observer[:, i].sum())
            for i, label in enumerate(OBSERVER_LABELS)
        }

    def to_json(self) -> dict:
        return {
            "purity_full": self.purity_full,
            "purity_nucleus": self.purity_nucleus,
            "purity_cat": self.purity_cat,
            "purity_observer": self.purity_observer,
            "reduced_nucleus": matrix_to_json(self.reduced_nucleus.matrix),
            "reduced_cat": matrix_to_json(self.reduced_cat.matrix),
            "reduced_observer": matrix_to_json(self.reduced_observer.matrix),
            "cat_pmf": self.cat_pmf(),
            "observer_pmf": self.observer_pmf(),
            "joint_cat_observer": [[float(p) for p in row] for row in self.joint_cat_observer],
            "agreement": self.agreement,
        }


def stage_report(universe: CatUniverse) -> StageReport:
    """Reduced states, purities, and the (cat, observer) joint pmf.

    The joint pmf is the diagonal of the cat-observer reduced state,
    renormalized by its own sum so it is a true pmf; branches that are never
    populated stay at exactly zero, which keeps the agreement probability
    exact in both perfectly correlated and uncorrelated stages.
    """
    rho = universe.state
    reduced_nucleus = partial_trace(rho, (0,))
    reduced_cat = partial_trace(rho, (1,))
    reduced_observer = partial_trace(rho, (2,))
    cat_observer = partial_trace(rho, (1, 2))
    diag = np.real(np.diag(cat_observer.matrix)).reshape(2, 3)
    joint = diag / diag.sum()
    joint.setflags(write=False)
    # Complement form: the mismatch cells of a perfectly correlated stage are
    # exactly zero, so the agreement comes out exactly 1 for every t.
    mismatch = float(joint[0, 0] + joint[0, 2] + joint[1, 0] + joint[1, 1])
    agreement = 1.0 - mismatch
    return StageReport(
        reduced_nucleus=reduced_nucleus,
        reduced_cat=reduced_cat,
        reduced_observer=reduced_observer,
        purity_full=purity(rho),
        purity_nucleus=purity(reduced_nucleus),
        purity_cat=purity(reduced_cat),
        purity_observer=purity(reduced_observer),
        joint_cat_observer=joint,
        agreement=agreement,
    )


def run_stages(t: float) -> dict[str, StageReport]:
    """The full story at waiting time ``t``: initial, after waiting, after seeing."""
    start = initial_state()
    waited = start.after(u_waiting(t))
    seen = waited.after(u_seeing())
    return {
        "initial": stage_report(start),
        "after_waiting": stage_report(waited),
        "after_seeing": stage_report(seen),
    }
