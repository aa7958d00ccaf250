"""Reproducible Monte Carlo harness.

Every random draw in this package is a pure function of
``(master_seed, stream_id, trial_index, draw_index)``.  The mapping is a
SplitMix64-style chain of mix/add steps, which gives random access: trial
``i`` never has to replay trials ``0..i-1``, so splitting work across any
number of workers cannot change a single bit of the output.  The same
formulas are implemented once on Python ints (:class:`TrialStream`) and
once on uint64 numpy arrays (:class:`StreamBlock`); the two agree exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
_U01_SCALE = 2.0 ** -53

# Fixed batch granularity for chunked execution.  Results are assembled in
# trial order, so this constant only bounds memory, never the output.
CHUNK = 1 << 16


def _mix64(x: int) -> int:
    """SplitMix64 finalizer on a Python int (mod 2**64)."""
    x &= _MASK64
    x ^= x >> 30
    x = (x * _MIX_A) & _MASK64
    x ^= x >> 27
    x = (x * _MIX_B) & _MASK64
    x ^= x >> 31
    return x


def _mix64_array(x: np.ndarray) -> np.ndarray:
    """Vectorized :func:`_mix64` on a uint64 array."""
    x = x.copy()
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX_A)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX_B)
    x ^= x >> np.uint64(31)
    return x


@dataclass(frozen=True)
class StreamSpec:
    """Identifies one logical random stream: ``(master_seed, stream_id)``."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.master_seed, int) or not isinstance(self.stream_id, int):
            raise ValueError("master_seed and stream_id must be integers")
        if self.stream_id < 0:
            raise ValueError("stream_id must be >= 0")

    @cached_property
    def key(self) -> int:
        return _mix64(_mix64(self.master_seed & _MASK64) + ((self.stream_id + 1) * _GAMMA & _MASK64))

    def substream(self, offset: int) -> "StreamSpec":
        """A sibling stream; used to give independent experiments their own ids."""
        return StreamSpec(self.master_seed, self.stream_id + offset)


class TrialStream:
    """Scalar per-trial stream.

    Draw ``d`` of trial ``i`` is ``mix64(trial_key(i) + (d+1)*GAMMA)``; the
    stream is stateful only in the draw counter.
    """

    __slots__ = ("_trial_key", "_draw")

    def __init__(self, spec: StreamSpec, trial_index: int):
        if trial_index < 0:
            raise ValueError("trial_index must be >= 0")
        self._trial_key = _mix64(spec.key + ((trial_index + 1) * _GAMMA & _MASK64))
        self._draw = 0

    def u01(self) -> float:
        """Next uniform in [0, 1)."""
        bits = _mix64(self._trial_key + ((self._draw + 1) * _GAMMA & _MASK64))
        self._draw += 1
        return (bits >> 11) * _U01_SCALE

    def randint(self, n: int) -> int:
        """Next uniform integer in ``[0, n)`` (floor of n * u01)."""
        if n < 1:
            raise ValueError("n must be >= 1")
        return min(int(self.u01() * n), n - 1)


class StreamBlock:
    """Vectorized view of trials ``[start, start + count)`` of a stream.

    ``uniforms(d)[j]`` equals the value a :class:`TrialStream` for trial
    ``start + j`` returns on its ``(d+1)``-th call to ``u01``.
    """

    def __init__(self, spec: StreamSpec, start: int, count: int):
        if start < 0 or count < 0:
            raise ValueError("start and count must be >= 0")
        idx = np.arange(start, start + count, dtype=np.uint64)
        self._trial_keys = _mix64_array(np.uint64(spec.key) + (idx + np.uint64(1)) * np.uint64(_GAMMA))
        self.start = start
        self.count = count

    def uniforms(self, draw_index: int) -> np.ndarray:
        """Uniform [0, 1) array for one draw index across all trials in the block."""
        bits = _mix64_array(self._trial_keys + np.uint64(((draw_index + 1) * _GAMMA) & _MASK64))
        return (bits >> np.uint64(11)).astype(np.float64) * _U01_SCALE

    def randints(self, n: int, draw_index: int) -> np.ndarray:
        """Uniform integer array in ``[0, n)`` for one draw index."""
        if n < 1:
            raise ValueError("n must be >= 1")
        raw = (self.uniforms(draw_index) * n).astype(np.int64)
        return np.minimum(raw, n - 1)


@dataclass(frozen=True)
class TrialSummary:
    """Summary statistics of a batch of scalar trial outcomes."""

    n_trials: int
    mean: float
    stderr: float
    ci95: tuple[float, float]

    def to_json(self, spec: StreamSpec | None = None, workers: int | None = None) -> dict:
        """JSON-ready dict; seed and worker count are recorded for audit."""
        out: dict = {
            "n_trials": self.n_trials,
            "mean": self.mean,
            "stderr": self.stderr,
            "ci95": [self.ci95[0], self.ci95[1]],
        }
        if spec is not None:
            out["master_seed"] = spec.master_seed
            out["stream_id"] = spec.stream_id
        if workers is not None:
            out["workers"] = workers
        return out


def _summarize(values: np.ndarray) -> TrialSummary:
    n = int(values.size)
    mean = float(values.mean())
    if n > 1:
        stderr = float(values.std(ddof=1) / math.sqrt(n))
    else:
        stderr = 0.0
    return TrialSummary(n, mean, stderr, (mean - 1.96 * stderr, mean + 1.96 * stderr))


def _chunk_ranges(n: int) -> list[tuple[int, int]]:
    return [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]


def _gather(tasks: list[Callable[[], np.ndarray]], workers: int) -> np.ndarray:
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda f: f(), tasks))
    else:
        parts = [f() for f in tasks]
    return np.concatenate(parts) if len(parts) > 1 else parts[0]


def run_trials(
    trial: Callable[[TrialStream], float],
    n: int,
    spec: StreamSpec,
    workers: int = 1,
) -> TrialSummary:
    """Run ``trial`` n times; the result is independent of ``workers``.

    ``trial`` must be a pure function of the stream it is handed.  Outcomes
    are assembled in trial order and reduced with numpy's fixed pairwise
    summation, so the summary is bit-identical for any worker count.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")

    def make_task(start: int, stop: int) -> Callable[[], np.ndarray]:
        def task() -> np.ndarray:
            return np.array(
                [float(trial(TrialStream(spec, i))) for i in range(start, stop)],
                dtype=np.float64,
            )
        return task

    tasks = [make_task(s, e) for s, e in _chunk_ranges(n)]
    return _summarize(_gather(tasks, workers))


def run_batches(
    batch: Callable[[StreamBlock], np.ndarray],
    n: int,
    spec: StreamSpec,
    workers: int = 1,
) -> TrialSummary:
    """Vectorized counterpart of :func:`run_trials`.

    ``batch`` receives a :class:`StreamBlock` and must return one float per
    trial in the block.  Chunk boundaries are fixed by :data:`CHUNK`, never
    by ``workers``, so the determinism contract is the same.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")

    def make_task(start: int, stop: int) -> Callable[[], np.ndarray]:
        def task() -> np.ndarray:
            out = np.asarray(batch(StreamBlock(spec, start, stop - start)), dtype=np.float64)
            if out.shape != (stop - start,):
                raise ValueError("batch function returned wrong number of values")
            return out
        return task

    tasks = [make_task(s, e) for s, e in _chunk_ranges(n)]
    return _summarize(_gather(tasks, workers))
