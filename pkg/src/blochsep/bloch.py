"""Hilbert-Schmidt expansion of multipartite density matrices.

A state on dimensions (d_0, ..., d_{N-1}) is expanded over tensor products of
the SU(d_k) generator bases.  The stored data are the N coherence vectors

    s^(k)_a = (d_k / 2) Tr(rho_k g_a)

and, for every subsystem subset S with |S| >= 2, the real correlation tensor

    t_{a_1...a_M} = (prod_{k in S} d_k / 2^M) Tr(rho_S (g_{a_1} x ... x g_{a_M}))

computed from the reduced state rho_S.  Together with the implicit identity
coefficient this is a complete, invertible parameterization; see
:func:`reconstruct`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
import math
import string

import numpy as np

from .errors import NumericIntegrityError
from .states import DensityMatrix, partial_trace
from .su_basis import build_basis
from .tolerances import IMAG_TOL

__all__ = [
    "BlochData",
    "bloch_vector",
    "correlation_tensor",
    "decompose",
    "reconstruct",
    "ball_radii",
    "empty_bloch_data",
]


@dataclass
class BlochData:
    """Coherence vectors and correlation tensors of one state.

    ``singles[k]`` is the length d_k^2 - 1 coherence vector of subsystem k;
    ``tensors[subset]`` is the correlation tensor of the ascending index
    tuple ``subset``.  A complete expansion holds 2^N - 1 components.
    """

    dims: tuple
    singles: dict
    tensors: dict

    @property
    def component_count(self) -> int:
        return len(self.singles) + len(self.tensors)


def _generator_stack(d: int) -> np.ndarray:
    return build_basis(d).generators


@lru_cache(maxsize=None)
def _stack_with_identity(d: int) -> np.ndarray:
    gens = _generator_stack(d)
    arr = np.concatenate([np.eye(d, dtype=complex)[None], gens])
    arr.flags.writeable = False
    return arr


def _real_part(arr: np.ndarray, what: str) -> np.ndarray:
    resid = float(np.abs(arr.imag).max()) if arr.size else 0.0
    if resid > IMAG_TOL:
        raise NumericIntegrityError(
            f"{what} carries imaginary residue {resid:.3e} above tolerance {IMAG_TOL:g}"
        )
    return np.ascontiguousarray(arr.real)


def _expectation_tensor(matrix: np.ndarray, dims: tuple) -> np.ndarray:
    """Generator expectations Tr(rho (g_{a_1} x ... x g_{a_M})) for all index
    combinations at once, contracted one mode at a time."""
    m = len(dims)
    lower = string.ascii_lowercase
    i_idx = lower[:m]
    j_idx = lower[m : 2 * m]
    a_idx = string.ascii_uppercase[:m]
    subs = [i_idx + j_idx]
    operands = [matrix.reshape(dims + dims)]
    for k, d in enumerate(dims):
        subs.append(a_idx[k] + j_idx[k] + i_idx[k])
        operands.append(_generator_stack(d))
    spec = ",".join(subs) + "->" + a_idx
    return np.einsum(spec, *operands, optimize=True)


def _check_subset(rho: DensityMatrix, subset, min_size: int) -> tuple:
    subset = tuple(sorted({int(k) for k in subset}))
    if len(subset) < min_size:
        raise ValueError(f"subset {subset} too small (need at least {min_size} subsystems)")
    if subset[0] < 0 or subset[-1] >= rho.n_parties:
        raise ValueError(f"subset {subset} out of range for {rho.n_parties} parties")
    return subset


def bloch_vector(rho: DensityMatrix, k: int) -> np.ndarray:
    """Coherence vector of subsystem ``k`` (0-based)."""
    (k,) = _check_subset(rho, (k,), 1)
    red = partial_trace(rho, [k])
    d = red.dims[0]
    raw = np.einsum("ij,aji->a", red.matrix, _generator_stack(d), optimize=True)
    return _real_part(0.5 * d * raw, f"coherence vector of subsystem {k}")


def correlation_tensor(rho: DensityMatrix, subset) -> np.ndarray:
    """Correlation tensor of the given subsystem subset (|subset| >= 2).

    The result for subset S equals the full-set tensor of the reduced state
    on S: expectations only involve the marginal.
    """
    subset = _check_subset(rho, subset, 2)
    red = partial_trace(rho, subset)
    raw = _expectation_tensor(red.matrix, red.dims)
    prefactor = math.prod(d / 2.0 for d in red.dims)
    return _real_part(prefactor * raw, f"correlation tensor of subset {subset}")


def decompose(rho: DensityMatrix) -> BlochData:
    """Full expansion: every coherence vector and every subset tensor."""
    n = rho.n_parties
    singles = {k: bloch_vector(rho, k) for k in range(n)}
    tensors = {}
    for size in range(2, n + 1):
        for subset in combinations(range(n), size):
            tensors[subset] = correlation_tensor(rho, subset)
    return BlochData(dims=rho.dims, singles=singles, tensors=tensors)


def empty_bloch_data(dims) -> BlochData:
    """All-zero expansion on ``dims``; reconstructs to the maximally mixed
    state."""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    singles = {k: np.zeros(dims[k] ** 2 - 1) for k in range(n)}
    tensors = {}
    for size in range(2, n + 1):
        for subset in combinations(range(n), size):
            tensors[subset] = np.zeros(tuple(dims[k] ** 2 - 1 for k in subset))
    return BlochData(dims=dims, singles=singles, tensors=tensors)


def reconstruct(data: BlochData) -> DensityMatrix:
    """Rebuild the density matrix from a complete expansion.

    Inverse of :func:`decompose` up to rounding.  Raises ValueError on shape
    mismatches and InvalidStateError if the coefficients do not describe a
    physical state.
    """
    dims = tuple(int(d) for d in data.dims)
    n = len(dims)
    if 2 * n > len(string.ascii_lowercase):
        raise ValueError(f"too many subsystems ({n}) for reconstruction")
    sizes = tuple(d * d for d in dims)
    coeff = np.zeros(sizes)
    coeff[(0,) * n] = 1.0
    if sorted(data.singles) != list(range(n)):
        raise ValueError("singles must hold exactly one vector per subsystem")
    for k in range(n):
        s = np.asarray(data.singles[k], dtype=float)
        if s.shape != (dims[k] ** 2 - 1,):
            raise ValueError(
                f"coherence vector of subsystem {k} has shape {s.shape}, "
                f"expected ({dims[k] ** 2 - 1},)"
            )
        pos = tuple(slice(1, None) if j == k else 0 for j in range(n))
        coeff[pos] = s
    expected = sorted(
        subset for size in range(2, n + 1) for subset in combinations(range(n), size)
    )
    if sorted(data.tensors) != expected:
        raise ValueError("tensors must hold exactly one entry per subset of size >= 2")
    for subset, t in data.tensors.items():
        t = np.asarray(t, dtype=float)
        want = tuple(dims[k] ** 2 - 1 for k in subset)
        if t.shape != want:
            raise ValueError(
                f"correlation tensor of subset {subset} has shape {t.shape}, expected {want}"
            )
        pos = tuple(slice(1, None) if j in subset else 0 for j in range(n))
        coeff[pos] = t
    lower = string.ascii_lowercase
    i_idx = lower[:n]
    j_idx = lower[n : 2 * n]
    a_idx = string.ascii_uppercase[:n]
    subs = [a_idx]
    operands = [coeff]
    for k, d in enumerate(dims):
        subs.append(a_idx[k] + i_idx[k] + j_idx[k])
        operands.append(_stack_with_identity(d))
    spec = ",".join(subs) + "->" + i_idx + j_idx
    total = int(np.prod(dims))
    mat = np.einsum(spec, *operands, optimize=True).reshape(total, total)
    return DensityMatrix(dims, mat / total)


def ball_radii(d: int) -> tuple:
    """Radii (r, R) of the largest ball inside and the smallest ball around
    the set of coherence vectors of single-system states: every vector with
    norm <= r gives a positive semidefinite (1/d)(I + v . g), and every state
    has norm <= R.  Both equal 1 exactly when d = 2."""
    if d < 2:
        raise ValueError(f"subsystem dimension must be at least 2, got {d}")
    return math.sqrt(d / (2.0 * (d - 1))), math.sqrt(d * (d - 1) / 2.0)
