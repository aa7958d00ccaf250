"""Generalized Monty Hall game: exact posteriors and win rates, plus Monte Carlo.

The game: a car hides behind one of ``n`` doors, the player picks one, the
host (who knows where the car is) opens ``k`` doors that hide no car and are
not the pick, choosing uniformly among the legal sets, and the player either
stays or switches to a uniformly chosen remaining closed door.

Conditioning on what the host revealed is an ordinary Bayes update of a
classical distribution; nothing moves, only the bookkeeping changes.  Doors
are 0-indexed internally; reports label them 1..n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np

from .mc import StreamBlock, StreamSpec, TrialStream, TrialSummary, run_batches

Strategy = Literal["stay", "switch"]

POSTERIOR_ATOL = 1e-12


def _check_game(n_doors: int, k_opened: int) -> None:
    if n_doors < 3:
        raise ValueError(f"need at least 3 doors, got {n_doors}")
    if not 1 <= k_opened <= n_doors - 2:
        raise ValueError(f"k must satisfy 1 <= k <= n-2, got k={k_opened} for n={n_doors}")


@dataclass(frozen=True)
class HostPolicy:
    """Uniform host: every legal set of k doors is opened with equal probability.

    Legal sets exclude the player's pick and the car door.  Only the relative
    weight between car positions matters for the posterior:
    ``P(open O | car = pick)`` is smaller than ``P(open O | car = d)`` for a
    closed door d by the factor ``(n - 1 - k) / (n - 1)``.
    """

    def relative_weight(self, n_doors: int, k_opened: int, car_is_pick: bool) -> Fraction:
        if car_is_pick:
            return Fraction(n_doors - 1 - k_opened, n_doors - 1)
        return Fraction(1)


@dataclass(frozen=True)
class MontyInstance:
    """One observed game situation: the pick and the set of opened doors."""

    n_doors: int
    k_opened: int
    player_pick: int
    opened: frozenset[int]
    prior: np.ndarray | None = field(default=None)

    def __post_init__(self) -> None:
        _check_game(self.n_doors, self.k_opened)
        if not 0 <= self.player_pick < self.n_doors:
            raise ValueError(f"pick {self.player_pick} out of range")
        opened = frozenset(int(d) for d in self.opened)
        if len(opened) != self.k_opened:
            raise ValueError(f"opened set has {len(opened)} doors, expected {self.k_opened}")
        if any(not 0 <= d < self.n_doors for d in opened):
            raise ValueError("opened set contains an out-of-range door")
        if self.player_pick in opened:
            raise ValueError("host never opens the player's pick")
        if self.prior is None:
            prior = np.full(self.n_doors, 1.0 / self.n_doors)
        else:
            prior = np.array(self.prior, dtype=np.float64, copy=True).reshape(-1)
            if prior.size != self.n_doors:
                raise ValueError(f"prior length {prior.size} != number of doors {self.n_doors}")
            if not np.all(np.isfinite(prior)):
                raise ValueError("prior entries must be finite")
            if np.any(prior < 0) or abs(float(prior.sum()) - 1.0) > POSTERIOR_ATOL:
                raise ValueError("prior must be a probability vector")
        prior.setflags(write=False)
        object.__setattr__(self, "opened", opened)
        object.__setattr__(self, "prior", prior)


def posterior(instance: MontyInstance, policy: HostPolicy = HostPolicy()) -> np.ndarray:
    """Exact Bayes update ``P(car = d | opened)``.

    Weights are accumulated in exact rational arithmetic (float priors embed
    exactly), so symmetric cases come out symbolically clean: with a uniform
    prior the pick keeps exactly ``1/n``.
    """
    weights = [Fraction(0)] * instance.n_doors
    for door in range(instance.n_doors):
        if door in instance.opened:
            continue
        prior = Fraction(float(instance.prior[door]))
        if prior == 0:
            continue
        weights[door] = prior * policy.relative_weight(
            instance.n_doors, instance.k_opened, door == instance.player_pick
        )
    total = sum(weights)
    if total == 0:
        raise ValueError("observation has zero probability under the prior")
    return np.array([float(w / total) for w in weights])


def win_probability(n_doors: int, k_opened: int, strategy: Strategy) -> Fraction:
    """Exact win probability: ``1/n`` for stay, ``(n-1) / (n (n-k-1))`` for switch."""
    _check_game(n_doors, k_opened)
    if strategy == "stay":
        return Fraction(1, n_doors)
    if strategy == "switch":
        return Fraction(n_doors - 1, n_doors * (n_doors - k_opened - 1))
    raise ValueError(f"unknown strategy {strategy!r}")


def simulate_game(n_doors: int, k_opened: int, strategy: Strategy, stream: TrialStream) -> bool:
    """Play one game and report whether the player wins the car.

    The pick is door 0 (symmetry makes the choice irrelevant).  The switch
    target is uniform over the m = n-1-k doors left closed; the car is among
    them exactly when it is not the pick, so hitting it has probability 1/m
    regardless of which particular doors the host opened.  Only that hit
    indicator is drawn; door identities never affect the outcome.
    """
    _check_game(n_doors, k_opened)
    if strategy not in ("stay", "switch"):
        raise ValueError(f"unknown strategy {strategy!r}")
    car = stream.randint(n_doors)
    if strategy == "stay":
        return car == 0
    m = n_doors - 1 - k_opened
    return car != 0 and stream.randint(m) == 0


def _win_batch(n_doors: int, k_opened: int, strategy: Strategy, block: StreamBlock) -> np.ndarray:
    """Vectorized games; trial-for-trial identical to :func:`simulate_game`."""
    car = block.randints(n_doors, 0)
    if strategy == "stay":
        return (car == 0).astype(np.float64)
    m = n_doors - 1 - k_opened
    hit = block.randints(m, 1) == 0
    return ((car != 0) & hit).astype(np.float64)


def empirical_win_rate(
    n_doors: int,
    k_opened: int,
    strategy: Strategy,
    n_games: int,
    spec: StreamSpec,
    workers: int = 1,
) -> TrialSummary:
    """Monte Carlo win rate; :func:`win_probability` is the oracle."""
    _check_game(n_doors, k_opened)
    if strategy not in ("stay", "switch"):
        raise ValueError(f"unknown strategy {strategy!r}")
    return run_batches(
        lambda block: _win_batch(n_doors, k_opened, strategy, block), n_games, spec, workers
    )


def posterior_to_json(instance: MontyInstance, probs: np.ndarray, max_doors: int = 64) -> dict:
    """Posterior restricted to closed doors, 1-indexed, truncated for huge games."""
    closed = [d for d in range(instance.n_doors) if d not in instance.opened]
    listed = closed[:max_doors]
    return {
        "pick_door": instance.player_pick + 1,
        "pick_prob": float(probs[instance.player_pick]),
        "closed_doors": [[d + 1, float(probs[d])] for d in listed],
        "n_closed": len(closed),
        "truncated": len(closed) > len(listed),
    }
