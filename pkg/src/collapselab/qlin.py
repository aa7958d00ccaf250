"""Dense complex linear algebra on small multipartite Hilbert spaces.

Conventions used throughout the package:

* subsystem 0 is the slowest-varying (leftmost) Kronecker factor;
* all containers are immutable values, operations return fresh objects;
* angles never appear here, only dimensions and matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ATOL = 1e-10          # tolerance for algebraic identities (Hermiticity, trace, norms)
EIG_FLOOR = -1e-9     # eigenvalue floor for positive-semidefiniteness checks


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def _require_finite(arr: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{what} contains non-finite entries")


def _as_square(matrix: np.ndarray, what: str) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {m.shape}")
    _require_finite(m, what)
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def is_hermitian(m: np.ndarray, atol: float = ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - dagger(m))) <= atol)


@dataclass(frozen=True)
class TensorSpace:
    """Ordered subsystem dimensions of a multipartite Hilbert space."""

    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if len(dims) == 0:
            raise ValueError("TensorSpace needs at least one subsystem")
        if any(d < 1 for d in dims):
            raise ValueError(f"subsystem dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def check_indices(self, indices: Sequence[int]) -> tuple[int, ...]:
        idx = tuple(int(i) for i in indices)
        for i in idx:
            if i < 0 or i >= len(self.dims):
                raise ValueError(f"subsystem index {i} out of range for dims {self.dims}")
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate subsystem indices in {idx}")
        return idx

    def joined(self, other: "TensorSpace") -> "TensorSpace":
        return TensorSpace(self.dims + other.dims)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over a :class:`TensorSpace`."""

    space: TensorSpace
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.space.dim:
            raise ValueError(f"amplitude length {amps.size} != space dimension {self.space.dim}")
        _require_finite(amps, "amplitudes")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > ATOL:
            raise ValueError(f"state not normalized: sum |psi|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", _freeze(amps))

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.space, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix with space metadata."""

    space: TensorSpace
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _as_square(self.matrix, "density matrix")
        if m.shape[0] != self.space.dim:
            raise ValueError(f"matrix dimension {m.shape[0]} != space dimension {self.space.dim}")
        if np.max(np.abs(m - dagger(m))) > ATOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"density matrix trace {tr!r} is not 1 within tolerance")
        smallest = float(np.linalg.eigvalsh(m)[0])
        if smallest < EIG_FLOOR:
            raise ValueError(f"density matrix has negative eigenvalue {smallest!r}")
        object.__setattr__(self, "matrix", _freeze(m))


@dataclass(frozen=True, eq=False)
class UnitaryOperator:
    """Unitary matrix with space metadata."""

    space: TensorSpace
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _as_square(self.matrix, "unitary")
        if m.shape[0] != self.space.dim:
            raise ValueError(f"matrix dimension {m.shape[0]} != space dimension {self.space.dim}")
        defect = np.max(np.abs(dagger(m) @ m - np.eye(m.shape[0])))
        if defect > ATOL:
            raise ValueError(f"operator is not unitary: max |U^dag U - I| = {float(defect)!r}")
        object.__setattr__(self, "matrix", _freeze(m))


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the left factor as the slow (subsystem-0) index."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    _require_finite(a, "left factor")
    _require_finite(b, "right factor")
    return np.kron(a, b)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not in ``keep`` (kept order follows the space)."""
    keep_idx = sorted(rho.space.check_indices(tuple(keep)))
    if len(keep_idx) == 0:
        raise ValueError("keep must name at least one subsystem")

    dims = list(rho.space.dims)
    n = len(dims)
    traced = [i for i in range(n) if i not in keep_idx]
    tensor = rho.matrix.reshape(dims + dims)
    for i in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=i, axis2=i + len(dims))
        dims.pop(i)
    kept_space = TensorSpace(tuple(rho.space.dims[i] for i in keep_idx))
    return DensityMatrix(kept_space, tensor.reshape(kept_space.dim, kept_space.dim))


def evolve(rho: DensityMatrix, u: UnitaryOperator) -> DensityMatrix:
    """Unitary conjugation ``rho -> U rho U^dag``."""
    if rho.space.dims != u.space.dims:
        raise ValueError(f"space mismatch: state {rho.space.dims} vs unitary {u.space.dims}")
    return DensityMatrix(rho.space, u.matrix @ rho.matrix @ dagger(u.matrix))


def expectation(rho: DensityMatrix, obs: np.ndarray) -> float:
    """Expectation value ``trace(rho A)`` of a Hermitian observable."""
    a = _as_square(obs, "observable")
    if a.shape[0] != rho.space.dim:
        raise ValueError(f"observable dimension {a.shape[0]} != state dimension {rho.space.dim}")
    if not is_hermitian(a):
        raise ValueError("observable is not Hermitian within tolerance")
    value = complex(np.trace(rho.matrix @ a))
    if abs(value.imag) > ATOL:
        raise ValueError(f"expectation value has non-negligible imaginary part {value.imag!r}")
    return value.real


def purity(rho: DensityMatrix) -> float:
    """``trace(rho^2)``; 1 for pure states, 1/d for the maximally mixed state."""
    return float(np.trace(rho.matrix @ rho.matrix).real)


def basis_state(dim: int, index: int) -> np.ndarray:
    """Standard basis column vector ``|index>`` of the given dimension."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def matrix_to_json(m: np.ndarray) -> dict:
    """Matrix as ``{rows, cols, entries}`` with row-major ``[re, im]`` pairs."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"entry count {len(entries)} != rows*cols = {rows * cols}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return flat.reshape(rows, cols)
