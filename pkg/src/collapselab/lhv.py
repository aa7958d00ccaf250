"""Local-hidden-variable models as finite, fully explicit objects.

A model is a finite set of hidden states with a probability mass function
and deterministic +/-1 response tables, one per local analyzer setting.
Locality is structural: the A-side table simply has no axis for the B-side
setting, so a response cannot depend on the distant choice.

Everything about a model can be computed exactly by enumeration, which is
what makes the four-term correlation combination a hard bound here: for any
model and any choice of settings its magnitude never exceeds 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable

import numpy as np

from .mc import StreamBlock, StreamSpec, TrialStream, run_batches

PMF_ATOL = 1e-12

Pairing = tuple[int, int, int, int]
DEFAULT_PAIRING: Pairing = (0, 1, 0, 1)


@dataclass(frozen=True)
class ChshSettings:
    """The four analyzer angles, in degrees (converted only at use sites)."""

    theta_a_deg: float
    theta_a_prime_deg: float
    theta_b_deg: float
    theta_b_prime_deg: float

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")

    @classmethod
    def maximal_violation(cls) -> "ChshSettings":
        """The angle tuple where the singlet's |S| reaches 2*sqrt(2)."""
        return cls(0.0, 90.0, 45.0, -45.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.theta_a_deg, self.theta_a_prime_deg, self.theta_b_deg, self.theta_b_prime_deg)


def _check_table(table: np.ndarray, n_settings: int, n_lambdas: int, name: str) -> np.ndarray:
    arr = np.asarray(table)
    if arr.shape != (n_settings, n_lambdas):
        raise ValueError(f"{name} must have shape {(n_settings, n_lambdas)}, got {arr.shape}")
    if not np.all((arr == 1) | (arr == -1)):
        raise ValueError(f"{name} entries must be exactly +1 or -1")
    return arr.astype(np.int64)


@dataclass(frozen=True, eq=False)
class LhvModel:
    """Finite hidden-variable space with pmf and deterministic response tables."""

    lambdas: tuple[Hashable, ...]
    pmf: np.ndarray
    settings_a_deg: tuple[float, ...]
    settings_b_deg: tuple[float, ...]
    response_a: np.ndarray   # shape (n A-settings, n lambdas), entries +/-1
    response_b: np.ndarray   # shape (n B-settings, n lambdas), entries +/-1

    def __post_init__(self) -> None:
        lambdas = tuple(self.lambdas)
        if len(lambdas) == 0:
            raise ValueError("model needs at least one hidden state")
        try:
            unique = len(set(lambdas))
        except TypeError:
            raise ValueError("hidden-state labels must be hashable") from None
        if unique != len(lambdas):
            raise ValueError("hidden-state labels must be unique")
        try:
            pmf = np.asarray(self.pmf, dtype=np.float64).reshape(-1)
        except (TypeError, ValueError):
            raise ValueError("pmf must be an array of numbers") from None
        if pmf.size != len(lambdas):
            raise ValueError(f"pmf length {pmf.size} != number of hidden states {len(lambdas)}")
        if not np.all(np.isfinite(pmf)):
            raise ValueError("pmf entries must be finite numbers")
        if np.any(pmf < 0):
            raise ValueError("pmf entries must be >= 0")
        total = float(pmf.sum())
        if abs(total - 1.0) > PMF_ATOL:
            raise ValueError(f"pmf sums to {total!r}, not 1")
        try:
            settings_a = tuple(float(t) for t in self.settings_a_deg)
            settings_b = tuple(float(t) for t in self.settings_b_deg)
        except (TypeError, ValueError):
            raise ValueError("settings must be numeric angles in degrees") from None
        if not all(math.isfinite(t) for t in settings_a + settings_b):
            raise ValueError("settings must be finite angles in degrees")
        if len(settings_a) == 0 or len(settings_b) == 0:
            raise ValueError("each side needs at least one setting")
        resp_a = _check_table(self.response_a, len(settings_a), len(lambdas), "response_a")
        resp_b = _check_table(self.response_b, len(settings_b), len(lambdas), "response_b")
        pmf.setflags(write=False)
        resp_a.setflags(write=False)
        resp_b.setflags(write=False)
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "pmf", pmf)
        object.__setattr__(self, "settings_a_deg", settings_a)
        object.__setattr__(self, "settings_b_deg", settings_b)
        object.__setattr__(self, "response_a", resp_a)
        object.__setattr__(self, "response_b", resp_b)

    @property
    def n_lambdas(self) -> int:
        return len(self.lambdas)

    @cached_property
    def _cumulative_pmf(self) -> np.ndarray:
        return np.cumsum(self.pmf)

    def _check_setting(self, idx: int, side: str) -> int:
        settings = self.settings_a_deg if side == "a" else self.settings_b_deg
        if not 0 <= idx < len(settings):
            raise ValueError(f"{side}-side setting index {idx} out of range")
        return idx

    def lambda_index(self, label: Hashable) -> int:
        try:
            return self.lambdas.index(label)
        except ValueError:
            raise ValueError(f"unknown hidden-state label {label!r}") from None


def correlation_exact(model: LhvModel, a_idx: int, b_idx: int) -> float:
    """Exact ``<ab>`` for one setting pair: pmf-weighted sum over hidden states."""
    a_idx = model._check_setting(a_idx, "a")
    b_idx = model._check_setting(b_idx, "b")
    products = model.response_a[a_idx] * model.response_b[b_idx]
    return float(np.dot(model.pmf, products))


def chsh_exact(model: LhvModel, pairing: Pairing = DEFAULT_PAIRING) -> float:
    """Exact four-term combination ``<ab> + <ab'> + <a'b> - <a'b'>``."""
    a, ap, b, bp = pairing
    return (
        correlation_exact(model, a, b)
        + correlation_exact(model, a, bp)
        + correlation_exact(model, ap, b)
        - correlation_exact(model, ap, bp)
    )


def identity_check(model: LhvModel, lam: Hashable, pairing: Pairing = DEFAULT_PAIRING) -> int:
    """Pointwise value of ``ab + ab' + a'b - a'b'`` for one hidden state.

    For +/-1 responses this is +2 or -2; anything else means the tables are
    corrupted, which the defensive check turns into an error.
    """
    j = model.lambda_index(lam)
    a_idx, ap_idx, b_idx, bp_idx = pairing
    a = int(model.response_a[model._check_setting(a_idx, "a")][j])
    ap = int(model.response_a[model._check_setting(ap_idx, "a")][j])
    b = int(model.response_b[model._check_setting(b_idx, "b")][j])
    bp = int(model.response_b[model._check_setting(bp_idx, "b")][j])
    value = a * b + a * bp + ap * b - ap * bp
    if value not in (-2, 2):
        raise RuntimeError(f"response tables corrupted: identity value {value}")
    return value


def sample_trial(model: LhvModel, a_idx: int, b_idx: int, stream: TrialStream) -> tuple[int, int]:
    """One run of the experiment: draw a hidden state, read both responses."""
    a_idx = model._check_setting(a_idx, "a")
    b_idx = model._check_setting(b_idx, "b")
    j = int(np.searchsorted(model._cumulative_pmf, stream.u01(), side="right"))
    j = min(j, model.n_lambdas - 1)
    return int(model.response_a[a_idx][j]), int(model.response_b[b_idx][j])


def _product_batch(model: LhvModel, a_idx: int, b_idx: int, block: StreamBlock) -> np.ndarray:
    """Vectorized a*b outcomes; draw-for-draw identical to :func:`sample_trial`."""
    j = np.searchsorted(model._cumulative_pmf, block.uniforms(0), side="right")
    j = np.minimum(j, model.n_lambdas - 1)
    products = (model.response_a[a_idx] * model.response_b[b_idx]).astype(np.float64)
    return products[j]


def empirical_correlation(
    model: LhvModel,
    a_idx: int,
    b_idx: int,
    n_trials: int,
    spec: StreamSpec,
    workers: int = 1,
):
    """Monte Carlo ``<ab>`` as a TrialSummary; oracle is :func:`correlation_exact`."""
    a_idx = model._check_setting(a_idx, "a")
    b_idx = model._check_setting(b_idx, "b")
    return run_batches(
        lambda block: _product_batch(model, a_idx, b_idx, block), n_trials, spec, workers
    )


def empirical_chsh(
    model: LhvModel,
    n_per_term: int,
    spec: StreamSpec,
    workers: int = 1,
    pairing: Pairing = DEFAULT_PAIRING,
) -> tuple[float, float]:
    """Monte Carlo CHSH value and its standard error.

    Each of the four terms runs on its own substream, so the estimate is
    reproducible regardless of evaluation order or worker count.
    """
    a, ap, b, bp = pairing
    terms = [(a, b, +1), (a, bp, +1), (ap, b, +1), (ap, bp, -1)]
    total = 0.0
    var = 0.0
    for offset, (ai, bi, sign) in enumerate(terms):
        summary = empirical_correlation(model, ai, bi, n_per_term, spec.substream(offset), workers)
        total += sign * summary.mean
        var += summary.stderr ** 2
    return total, math.sqrt(var)


def random_model(n_lambdas: int, settings: ChshSettings, stream: TrialStream) -> LhvModel:
    """Random valid model: positive normalized pmf, fair-coin response tables."""
    if n_lambdas < 1:
        raise ValueError("n_lambdas must be >= 1")
    # 1 - u01 lies in (0, 1], so the pmf entries are strictly positive.
    weights = np.array([1.0 - stream.u01() for _ in range(n_lambdas)])
    pmf = weights / weights.sum()
    settings_a = (settings.theta_a_deg, settings.theta_a_prime_deg)
    settings_b = (settings.theta_b_deg, settings.theta_b_prime_deg)

    def table(n_settings: int) -> np.ndarray:
        draws = [[stream.u01() for _ in range(n_lambdas)] for _ in range(n_settings)]
        return np.where(np.asarray(draws) < 0.5, 1, -1)

    return LhvModel(
        lambdas=tuple(range(n_lambdas)),
        pmf=pmf,
        settings_a_deg=settings_a,
        settings_b_deg=settings_b,
        response_a=table(2),
        response_b=table(2),
    )


def model_to_json(model: LhvModel) -> dict:
    return {
        "lambdas": list(model.lambdas),
        "pmf": [float(p) for p in model.pmf],
        "settings_a_deg": list(model.settings_a_deg),
        "settings_b_deg": list(model.settings_b_deg),
        "response_a": model.response_a.tolist(),
        "response_b": model.response_b.tolist(),
    }


def model_from_json(obj: dict) -> LhvModel:
    """Build a model from its JSON form, enforcing every invariant."""
    if not isinstance(obj, dict):
        raise ValueError("model JSON must be an object")
    required = ("lambdas", "pmf", "settings_a_deg", "settings_b_deg", "response_a", "response_b")
    missing = [key for key in required if key not in obj]
    if missing:
        raise ValueError(f"model JSON missing fields: {', '.join(missing)}")
    return LhvModel(
        lambdas=tuple(obj["lambdas"]),
        pmf=np.asarray(obj["pmf"], dtype=np.float64),
        settings_a_deg=tuple(obj["settings_a_deg"]),
        settings_b_deg=tuple(obj["settings_b_deg"]),
        response_a=np.asarray(obj["response_a"]),
        response_b=np.asarray(obj["response_b"]),
    )
