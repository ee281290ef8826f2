"""Dense real tensors: cyclic matricization, Ky Fan norms, weighted rank-1
(Kruskal) forms and the even-parity sign tables used by the constructive
separable decomposition.

Tensors are plain ``numpy.ndarray`` objects.  Matricization uses the
backward-cyclic column convention: the mode-``n`` unfolding has rows indexed
by mode ``n`` and columns running over the remaining modes in the cyclic
order ``(n+1, ..., M-1, 0, ..., n-1)`` with the last of these varying
fastest.  All mode unfoldings of one tensor are column permutations of each
other across conventions, so the norms computed here do not depend on that
choice; the entrywise layout does, and it is pinned by the tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import string

import numpy as np

from .tolerances import EXACT_TOL, RANK_CUTOFF

__all__ = [
    "unfold",
    "fold",
    "singular_values",
    "matrix_kyfan",
    "tensor_kyfan",
    "outer_product",
    "is_supersymmetric",
    "khatri_rao",
    "KruskalForm",
    "kruskal_to_tensor",
    "kruskal_unfold",
    "verify_complete_orthogonality",
    "find_orthogonal_kruskal",
    "kyfan_via_kruskal",
    "sign_table",
]


def _as_tensor(tensor, min_order=2):
    t = np.asarray(tensor, dtype=float)
    if t.ndim < min_order:
        raise ValueError(
            f"tensor of order {t.ndim} not supported here (need order >= {min_order})"
        )
    if not np.isfinite(t).all():
        raise ValueError("tensor contains non-finite entries")
    return t


def unfold(tensor, mode: int) -> np.ndarray:
    """Matricize ``tensor`` along ``mode`` (0-based).

    Rows are indexed by ``mode``; columns run over the remaining modes in
    cyclic order starting after ``mode``, last index fastest.
    """
    t = _as_tensor(tensor)
    if not 0 <= mode < t.ndim:
        raise ValueError(f"mode {mode} out of range for order-{t.ndim} tensor")
    axes = np.roll(np.arange(t.ndim), -mode)
    return t.transpose(axes).reshape(t.shape[mode], -1)


def fold(matrix, mode: int, shape) -> np.ndarray:
    """Inverse of :func:`unfold`: rebuild the tensor of ``shape`` from its
    mode-``mode`` unfolding."""
    shape = tuple(int(s) for s in shape)
    m = np.asarray(matrix, dtype=float)
    order = len(shape)
    if not 0 <= mode < order:
        raise ValueError(f"mode {mode} out of range for order-{order} tensor")
    if m.shape != (shape[mode], int(np.prod(shape)) // shape[mode]):
        raise ValueError(f"matrix shape {m.shape} does not match tensor shape {shape}")
    cyc = tuple(np.roll(np.arange(order), -mode))
    t = m.reshape(tuple(shape[a] for a in cyc))
    return t.transpose(np.argsort(cyc))


def singular_values(matrix) -> np.ndarray:
    """Singular values of a real matrix, descending."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2:
        raise ValueError("singular_values expects a matrix")
    if not np.isfinite(m).all():
        raise ValueError("matrix contains non-finite entries")
    return np.linalg.svd(m, compute_uv=False)


def matrix_kyfan(matrix) -> float:
    """Ky Fan norm of a matrix: the sum of its singular values."""
    return float(singular_values(matrix).sum())


def tensor_kyfan(tensor, supersymmetric: bool = False) -> float:
    """Ky Fan norm of a tensor: the largest singular-value sum over all mode
    unfoldings.

    With ``supersymmetric=True`` only the first unfolding is computed; for a
    tensor invariant under all mode permutations every unfolding shares the
    same singular spectrum, so this is a pure shortcut.  The caller is
    responsible for the symmetry claim (see :func:`is_supersymmetric`).
    """
    t = _as_tensor(tensor)
    modes = (0,) if supersymmetric else range(t.ndim)
    return max(matrix_kyfan(unfold(t, m)) for m in modes)


def outer_product(parts) -> np.ndarray:
    """Outer product of a sequence of vectors (or tensors).

    The result has the concatenated shape of the inputs; for vectors
    u, v, w this is the order-3 tensor with entries u_i v_j w_k.
    """
    parts = [np.asarray(p, dtype=float) for p in parts]
    if not parts:
        raise ValueError("outer_product needs at least one operand")
    out = parts[0]
    for p in parts[1:]:
        out = np.multiply.outer(out, p)
    return out


def is_supersymmetric(tensor, tol: float = 1e-12) -> bool:
    """True when the tensor is invariant under every permutation of its modes.

    Tensors with unequal mode dimensions cannot be permutation invariant and
    yield False.  Invariance under all adjacent transpositions suffices, so
    only order - 1 comparisons are made.
    """
    t = _as_tensor(tensor)
    if len(set(t.shape)) != 1:
        return False
    scale = max(1.0, float(np.abs(t).max()))
    for m in range(t.ndim - 1):
        axes = list(range(t.ndim))
        axes[m], axes[m + 1] = axes[m + 1], axes[m]
        if not np.allclose(t, t.transpose(axes), rtol=0.0, atol=tol * scale):
            return False
    return True


def khatri_rao(matrices) -> np.ndarray:
    """Column-wise Kronecker product of matrices sharing a column count.

    Column ``r`` of the result is the Kronecker chain of the ``r``-th columns
    of the inputs, left to right.
    """
    mats = [np.asarray(m, dtype=float) for m in matrices]
    if not mats:
        raise ValueError("khatri_rao needs at least one matrix")
    cols = mats[0].shape[1]
    for m in mats:
        if m.ndim != 2 or m.shape[1] != cols:
            raise ValueError("all inputs must be matrices with the same column count")
    out = mats[0]
    for m in mats[1:]:
        out = (out[:, None, :] * m[None, :, :]).reshape(-1, cols)
    return out


@dataclass
class KruskalForm:
    """Weighted sum of rank-1 outer products.

    ``factors[m]`` has shape ``(I_m, R)``; its column ``r`` is the mode-``m``
    vector of term ``r``.  ``orthogonal`` records whether complete
    orthogonality (orthonormal columns in every mode) has been verified; it
    is set by :func:`verify_complete_orthogonality`.
    """

    weights: np.ndarray
    factors: list = field(default_factory=list)
    orthogonal: bool = False

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if self.weights.size and self.weights.min() < 0:
            raise ValueError("term weights must be nonnegative")
        self.factors = [np.asarray(f, dtype=float) for f in self.factors]
        if not self.factors:
            raise ValueError("a Kruskal form needs at least one mode")
        for f in self.factors:
            if f.ndim != 2 or f.shape[1] != self.rank:
                raise ValueError(
                    "every factor matrix must have one column per term "
                    f"(expected {self.rank} columns, got shape {f.shape})"
                )

    @property
    def rank(self) -> int:
        return int(self.weights.size)

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def shape(self) -> tuple:
        return tuple(f.shape[0] for f in self.factors)


def _term_subscript(order: int) -> str:
    letters = string.ascii_uppercase[:order]
    ins = ["r"] + [c + "r" for c in letters]
    return ",".join(ins) + "->" + "".join(letters)


def kruskal_to_tensor(form: KruskalForm) -> np.ndarray:
    """Assemble the dense tensor sum_r w_r (u_r^(0) o u_r^(1) o ...)."""
    return np.einsum(
        _term_subscript(form.order), form.weights, *form.factors, optimize=True
    )


def kruskal_unfold(form: KruskalForm, mode: int) -> np.ndarray:
    """Mode unfolding of a Kruskal form assembled factor-wise.

    Equals ``unfold(kruskal_to_tensor(form), mode)`` entrywise: the column
    basis is the Khatri-Rao chain of the other modes' factors taken in the
    same cyclic order the unfolding uses for its columns.
    """
    order = form.order
    if not 0 <= mode < order:
        raise ValueError(f"mode {mode} out of range for order-{order} form")
    rest = [form.factors[m] for m in list(range(mode + 1, order)) + list(range(mode))]
    if rest:
        v = khatri_rao(rest)
    else:
        v = np.ones((1, form.rank))
    return (form.factors[mode] * form.weights) @ v.T


def verify_complete_orthogonality(form: KruskalForm, tol: float = EXACT_TOL) -> bool:
    """Check that every mode's factor columns are orthonormal.

    Stores the outcome on ``form.orthogonal`` and returns it.
    """
    ok = True
    eye = np.eye(form.rank)
    for f in form.factors:
        if np.abs(f.T @ f - eye).max() > tol:
            ok = False
            break
    form.orthogonal = ok
    return ok


def find_orthogonal_kruskal(tensor, tol: float = RANK_CUTOFF):
    """Return a completely orthogonal Kruskal form of ``tensor`` or None.

    Order-2 tensors always admit one through the singular value
    decomposition.  For order >= 3 only tensors that are exactly diagonal
    (nonzero entries confined to equal-index positions, which requires equal
    mode dimensions) are decomposed here; anything else returns None.  The
    returned form has ``orthogonal=True`` and strictly positive weights.
    """
    t = _as_tensor(tensor)
    scale = float(np.abs(t).max())
    if scale == 0.0:
        form = KruskalForm(
            np.zeros(0), [np.zeros((n, 0)) for n in t.shape], orthogonal=True
        )
        return form
    if t.ndim == 2:
        u, s, vt = np.linalg.svd(t, full_matrices=False)
        keep = s > tol * s[0]
        return KruskalForm(s[keep], [u[:, keep], vt[keep].T], orthogonal=True)
    if len(set(t.shape)) != 1:
        return None
    d = t.shape[0]
    idx = (np.arange(d),) * t.ndim
    diag = t[idx]
    off = t.copy()
    off[idx] = 0.0
    if np.abs(off).max() > tol * scale:
        return None
    keep = np.flatnonzero(np.abs(diag) > tol * scale)
    weights = np.abs(diag[keep])
    factors = []
    for m in range(t.ndim):
        f = np.zeros((d, keep.size))
        for col, i in enumerate(keep):
            f[i, col] = np.sign(diag[i]) if m == 0 else 1.0
        factors.append(f)
    return KruskalForm(weights, factors, orthogonal=True)


def kyfan_via_kruskal(form: KruskalForm) -> float:
    """Ky Fan norm of a completely orthogonal form: the sum of its weights.

    For such a form every mode unfolding has the weights as its singular
    values, so the maximum over modes collapses to a plain sum.
    """
    if not form.orthogonal:
        raise ValueError(
            "kyfan_via_kruskal needs a form whose complete orthogonality "
            "has been verified (run verify_complete_orthogonality first)"
        )
    return float(form.weights.sum())


def sign_table(n_parties: int) -> np.ndarray:
    """Even-parity sign table with 2^(N-1) rows and N columns of +-1.

    Column c < N-1 alternates blocks of 2^(N-2-c) plus ones and minus ones;
    the last column is the product of the others, so every row carries an
    even number of minus signs.  Over any proper nonempty column subset the
    row-wise products sum to zero, which is what cancels the unwanted
    lower-order terms when the table drives a product-state average.
    """
    if n_parties < 2:
        raise ValueError("sign tables are defined for at least 2 columns")
    rows = 1 << (n_parties - 1)
    table = np.ones((rows, n_parties), dtype=int)
    for c in range(n_parties - 1):
        block = 1 << (n_parties - 2 - c)
        table[:, c] = np.where((np.arange(rows) // block) % 2 == 0, 1, -1)
    table[:, -1] = table[:, :-1].prod(axis=1)
    return table
