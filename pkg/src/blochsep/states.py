"""Density matrices on tensor-product spaces and the bundled example states.

Subsystems are indexed 0..N-1 and levels 0..d-1.  The composite basis is the
usual Kronecker order: basis label (i_0, ..., i_{N-1}) maps to row
sum_k i_k * prod_{l>k} d_l, i.e. subsystem 0 is the most significant digit.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
import math

import numpy as np

from .errors import InvalidStateError
from .tolerances import EXACT_TOL, PSD_TOL

HERM_TOL = EXACT_TOL
TRACE_TOL = EXACT_TOL
PURITY_TOL = 1e-9


def validate_density(matrix, dims) -> None:
    """Raise InvalidStateError naming the first violated requirement."""
    try:
        dims = tuple(int(d) for d in dims)
    except (TypeError, ValueError):
        raise InvalidStateError("dims must be a sequence of integers")
    if len(dims) == 0:
        raise InvalidStateError("dims must name at least one subsystem")
    if any(d < 2 for d in dims):
        raise InvalidStateError(f"every subsystem dimension must be at least 2, got {dims}")
    m = np.asarray(matrix)
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise InvalidStateError(
            f"matrix shape {m.shape} does not match dims {dims} (need {total}x{total})"
        )
    if not np.isfinite(m).all():
        raise InvalidStateError("matrix contains non-finite entries")
    herm = np.abs(m - m.conj().T).max()
    if herm > HERM_TOL:
        raise InvalidStateError(f"matrix is not Hermitian (max deviation {herm:.3e})")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace is {tr:.12g}, expected 1")
    evals = np.linalg.eigvalsh(m)
    if evals[0] < -PSD_TOL:
        raise InvalidStateError(
            f"matrix is not positive semidefinite (min eigenvalue {evals[0]:.3e})"
        )


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """An N-partite density matrix together with its subsystem dimensions.

    Validated on construction (Hermitian, unit trace, positive semidefinite
    within tolerance).  The stored array is a read-only copy.
    """

    dims: tuple
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        validate_density(self.matrix, dims)
        m = np.array(self.matrix, dtype=complex)
        m.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)

    def is_pure(self, tol: float = PURITY_TOL) -> bool:
        return self.purity() >= 1.0 - tol


def kron(*matrices) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not matrices:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, matrices)


def basis_ket(levels, dims) -> np.ndarray:
    """Computational basis vector |levels> on subsystems of sizes ``dims``."""
    dims = tuple(int(d) for d in dims)
    levels = tuple(int(x) for x in levels)
    if len(levels) != len(dims):
        raise ValueError("one level per subsystem required")
    for x, d in zip(levels, dims):
        if not 0 <= x < d:
            raise ValueError(f"level {x} out of range for dimension {d}")
    vec = np.zeros(int(np.prod(dims)), dtype=complex)
    vec[np.ravel_multi_index(levels, dims)] = 1.0
    return vec


def projector(vec) -> np.ndarray:
    """Rank-1 projector |v><v| of a normalized vector."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep`` (0-based indices).

    The kept subsystems appear in ascending index order in the result.
    """
    keep = sorted({int(k) for k in keep})
    n = rho.n_parties
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"subsystem index out of range in {keep} for {n} parties")
    if len(keep) == n:
        return rho
    traced = [k for k in range(n) if k not in keep]
    dims = rho.dims
    t = rho.matrix.reshape(dims + dims)
    perm = keep + traced + [n + k for k in keep] + [n + k for k in traced]
    dk = int(np.prod([dims[k] for k in keep]))
    dt = int(np.prod([dims[k] for k in traced]))
    block = t.transpose(perm).reshape(dk, dt, dk, dt)
    reduced = np.einsum("itjt->ij", block)
    return DensityMatrix(tuple(dims[k] for k in keep), reduced)


def maximally_mixed(dims) -> DensityMatrix:
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    return DensityMatrix(dims, np.eye(total, dtype=complex) / total)


def ghz(n_parties: int, d: int = 2) -> DensityMatrix:
    """Projector onto (1/sqrt(d)) sum_k |k...k> on n_parties systems."""
    if n_parties < 2:
        raise ValueError("ghz needs at least 2 parties")
    if d < 2:
        raise ValueError("ghz needs local dimension at least 2")
    dims = (d,) * n_parties
    vec = np.zeros(d**n_parties, dtype=complex)
    for k in range(d):
        vec += basis_ket((k,) * n_parties, dims)
    vec /= math.sqrt(d)
    return DensityMatrix(dims, projector(vec))


def _w_vector(n_parties: int) -> np.ndarray:
    dims = (2,) * n_parties
    vec = np.zeros(2**n_parties, dtype=complex)
    for k in range(n_parties):
        levels = [0] * n_parties
        levels[k] = 1
        vec += basis_ket(levels, dims)
    return vec / math.sqrt(n_parties)


def w_state(n_parties: int) -> DensityMatrix:
    """Projector onto the equal superposition of single-excitation kets."""
    if n_parties < 2:
        raise ValueError("w_state needs at least 2 parties")
    return DensityMatrix((2,) * n_parties, projector(_w_vector(n_parties)))


def noisy(state: DensityMatrix, p: float) -> DensityMatrix:
    """Mix a pure state with white noise: (1-p)/D * I + p * state."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise weight p must lie in [0, 1], got {p}")
    if not state.is_pure():
        raise ValueError(f"noisy expects a pure state (purity {state.purity():.6f})")
    total = state.dim
    m = (1.0 - p) / total * np.eye(total) + p * state.matrix
    return DensityMatrix(state.dims, m)


def reduced_w_noisy(n_parties: int, n_removed: int, p: float) -> DensityMatrix:
    """White-noise W mixture after tracing out ``n_removed`` of ``n_parties``
    qubits:

        (1-p)/2^m I + (n/N) p |0...0><0...0| + ((N-n)/N) p |W_m><W_m|

    with m = N - n remaining qubits.  Agrees with partially tracing
    ``noisy(w_state(N), p)``.
    """
    if n_parties < 2:
        raise ValueError("reduced_w_noisy needs at least 2 parties")
    if not 1 <= n_removed < n_parties:
        raise ValueError(
            f"n_removed must satisfy 1 <= n < N, got n={n_removed}, N={n_parties}"
        )
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise weight p must lie in [0, 1], got {p}")
    m_left = n_parties - n_removed
    dims = (2,) * m_left
    total = 2**m_left
    ground = basis_ket((0,) * m_left, dims)
    if m_left == 1:
        w_vec = basis_ket((1,), dims)
    else:
        w_vec = _w_vector(m_left)
    mat = (
        (1.0 - p) / total * np.eye(total)
        + (n_removed / n_parties) * p * projector(ground)
        + (m_left / n_parties) * p * projector(w_vec)
    )
    return DensityMatrix(dims, mat)


def bell_states() -> list:
    """The four Bell vectors on two qubits, in the order phi+, phi-, psi+,
    psi-."""
    dims = (2, 2)
    k00 = basis_ket((0, 0), dims)
    k01 = basis_ket((0, 1), dims)
    k10 = basis_ket((1, 0), dims)
    k11 = basis_ket((1, 1), dims)
    s = math.sqrt(0.5)
    return [s * (k00 + k11), s * (k00 - k11), s * (k01 + k10), s * (k01 - k10)]


def smolin() -> DensityMatrix:
    """Four-qubit Smolin state: the uniform mixture of the four products of a
    Bell state on qubits (0,1) with the same Bell state on qubits (2,3)."""
    mat = np.zeros((16, 16), dtype=complex)
    for b in bell_states():
        pb = projector(b)
        mat += np.kron(pb, pb)
    return DensityMatrix((2, 2, 2, 2), mat / 4.0)


def duer_be4() -> DensityMatrix:
    """Four-qubit bound entangled state of Duer: a GHZ projector mixed with
    the eight single-excitation / single-hole basis projectors."""
    dims = (2, 2, 2, 2)
    mat = np.array(ghz(4).matrix)
    for k in range(4):
        one = [0, 0, 0, 0]
        one[k] = 1
        hole = [1 - x for x in one]
        mat = mat + 0.5 * (projector(basis_ket(one, dims)) + projector(basis_ket(hole, dims)))
    return DensityMatrix(dims, mat / 5.0)


def state_234() -> DensityMatrix:
    """A pure state on dimensions (2, 3, 4) with four equal-weight terms,
    each single-subsystem marginal maximally mixed on its support."""
    dims = (2, 3, 4)
    vec = 0.5 * (
        basis_ket((0, 0, 1), dims)
        + basis_ket((0, 1, 2), dims)
        + basis_ket((1, 0, 3), dims)
        + basis_ket((1, 2, 3), dims)
    )
    return DensityMatrix(dims, projector(vec))


@dataclass(frozen=True)
class ZooSpec:
    """A named example-state family plus its parameters.

    ``noise`` may be left None for families that take a noise weight; the
    value can then be supplied per call to :meth:`build`, which is how
    threshold searches sweep it.
    """

    family: str
    parties: int | None = None
    levels: int | None = None
    noise: float | None = None
    removed: int | None = None
    dims: tuple | None = None

    @property
    def noise_parameterized(self) -> bool:
        return self.family in _NOISY_FAMILIES

    def build(self, noise: float | None = None) -> DensityMatrix:
        p = self.noise if noise is None else noise
        fam = self.family
        if fam in ("ghz", "ghz-noisy"):
            n = _required(self.parties, fam, "parties")
            base = ghz(n, self.levels or 2)
        elif fam == "qutrit-ghz-noisy":
            n = _required(self.parties, fam, "parties")
            base = ghz(n, 3)
        elif fam == "werner":
            base = ghz(2, 2)
        elif fam in ("w", "w-noisy"):
            base = w_state(_required(self.parties, fam, "parties"))
        elif fam == "reduced-w-noisy":
            n = _required(self.parties, fam, "parties")
            r = _required(self.removed, fam, "removed")
            return reduced_w_noisy(n, r, _required(p, fam, "noise"))
        elif fam in ("state-234", "psi-234"):
            base = state_234()
        elif fam == "state-234-noisy":
            base = state_234()
        elif fam == "smolin":
            return smolin()
        elif fam == "duer4":
            return duer_be4()
        elif fam == "mixed":
            return maximally_mixed(_required(self.dims, fam, "dims"))
        else:
            raise ValueError(f"unknown state family {fam!r} (known: {', '.join(zoo_families())})")
        if fam in _NOISY_FAMILIES:
            return noisy(base, _required(p, fam, "noise"))
        return base


_NOISY_FAMILIES = frozenset(
    ["ghz-noisy", "qutrit-ghz-noisy", "werner", "w-noisy", "reduced-w-noisy", "state-234-noisy"]
)


def _required(value, family, name):
    if value is None:
        raise ValueError(f"family {family!r} needs parameter {name!r}")
    return value


def zoo_families() -> tuple:
    return (
        "ghz",
        "ghz-noisy",
        "qutrit-ghz-noisy",
        "werner",
        "w",
        "w-noisy",
        "reduced-w-noisy",
        "psi-234",
        "state-234-noisy",
        "smolin",
        "duer4",
        "mixed",
    )


def zoo_state(family: str, **params) -> DensityMatrix:
    """Convenience wrapper: build a zoo state from keyword parameters."""
    if "dims" in params and params["dims"] is not None:
        params["dims"] = tuple(params["dims"])
    return ZooSpec(family=family, **params).build()
