"""Separability tests built on Ky Fan norms of the correlation tensors.

Three kinds of statement are implemented:

* a necessary criterion: for every fully separable state the Ky Fan norm of
  the full correlation tensor stays below a bound fixed by the subsystem
  dimensions, so exceeding the bound certifies entanglement (and the same
  holds subset-wise for the reduced states);
* an exact criterion for N-qubit states whose only nonvanishing expansion
  component is the full correlation tensor, provided that tensor admits a
  completely orthogonal rank-1 decomposition;
* a sufficient criterion: if a weighted sum of all component norms stays
  at or below one, the state is separable, and an explicit mixture of
  product states witnessing this is constructed from even-parity sign
  tables.

Norm-versus-bound comparisons respect a small guard band; results inside
the band are reported inconclusive with ``borderline=True`` rather than
pretending to a resolution the arithmetic cannot support.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
import math
import time

import numpy as np

from .bloch import ball_radii, bloch_vector, correlation_tensor, decompose
from .errors import CriterionUnavailableError
from .states import DensityMatrix, ZooSpec, kron, partial_trace
from .su_basis import build_basis
from .tensors import (
    find_orthogonal_kruskal,
    is_supersymmetric,
    kyfan_via_kruskal,
    outer_product,
    sign_table,
    tensor_kyfan,
)
from .tolerances import BOUND_GUARD, ZERO_COMPONENT_TOL

__all__ = [
    "Decision",
    "Verdict",
    "SubsetRecord",
    "SufficiencyRecord",
    "AnalysisReport",
    "SeparableDecomposition",
    "separability_bound",
    "necessary_test",
    "subset_scan",
    "is_pure_product",
    "factor_pure_state",
    "qubit_exact_test",
    "sufficiency_lhs",
    "sufficiency_test",
    "separable_decomposition",
    "assemble_decomposition",
    "threshold_search",
    "noise_threshold_table",
]

PURE_TOL = 1e-9
FACTOR_TOL = 1e-8


class Decision(str, Enum):
    ENTANGLED = "entangled"
    SEPARABLE = "separable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one criterion on one state (or reduced state).

    ``norm_value`` and ``bound_value`` document the comparison that decided;
    ``borderline`` marks a comparison inside the guard band; ``reason`` is a
    short code explaining an inconclusive outcome where one applies.
    """

    decision: Decision
    norm_value: float | None
    bound_value: float | None
    criterion: str
    borderline: bool = False
    reason: str | None = None


@dataclass(frozen=True)
class SubsetRecord:
    subset: tuple
    norm: float
    bound: float
    verdict: Verdict


@dataclass(frozen=True)
class SufficiencyRecord:
    lhs: float | None
    available: bool
    decision: Decision
    reason: str | None = None


@dataclass
class AnalysisReport:
    dims: tuple
    records: list
    sufficiency: SufficiencyRecord | None = None
    exact_qubit: Verdict | None = None
    elapsed_seconds: float = 0.0


@dataclass(frozen=True)
class SeparableDecomposition:
    """Explicit mixture of product states plus a maximally mixed remainder.

    Every term is a pair (weight, factor vectors), one coherence vector per
    subsystem; a zero vector stands for the maximally mixed factor.  All
    factor vectors lie inside their subsystem's inball, so each term is a
    valid product state, and the weights together with ``identity_weight``
    sum to one.
    """

    dims: tuple
    terms: tuple
    identity_weight: float


def separability_bound(dims) -> float:
    """Largest full-tensor Ky Fan norm a fully separable state on ``dims``
    can reach: sqrt(prod_k d_k (d_k - 1) / 2^N).  Equals 1 for qubits."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2:
        raise ValueError("the bound concerns at least 2 subsystems")
    if any(d < 2 for d in dims):
        raise ValueError(f"every subsystem dimension must be at least 2, got {dims}")
    return math.sqrt(math.prod(d * (d - 1) / 2.0 for d in dims))


def _norm_verdict(norm: float, bound: float, criterion: str, guard: float) -> Verdict:
    if norm > bound + guard:
        return Verdict(Decision.ENTANGLED, norm, bound, criterion)
    if norm > bound - guard:
        return Verdict(
            Decision.INCONCLUSIVE, norm, bound, criterion, borderline=True
        )
    return Verdict(Decision.INCONCLUSIVE, norm, bound, criterion)


def necessary_test(
    rho: DensityMatrix, subset=None, guard: float = BOUND_GUARD
) -> Verdict:
    """Compare the Ky Fan norm of a correlation tensor with the separable
    bound.  ``subset=None`` means the full system; a proper subset tests the
    reduced state, whose entanglement also rules out full separability of
    ``rho``.  Never returns Separable: the criterion is only necessary."""
    if subset is None:
        subset = tuple(range(rho.n_parties))
    t = correlation_tensor(rho, subset)
    sub_dims = tuple(rho.dims[k] for k in sorted(set(int(x) for x in subset)))
    symmetric = len(set(sub_dims)) == 1 and is_supersymmetric(t)
    norm = tensor_kyfan(t, supersymmetric=symmetric)
    return _norm_verdict(norm, separability_bound(sub_dims), "necessary-norm", guard)


def _select_subsets(n_parties: int, selector) -> list:
    if isinstance(selector, str):
        if selector == "full":
            return [tuple(range(n_parties))]
        if selector == "all":
            sizes = range(2, n_parties + 1)
        elif selector == "pairs":
            sizes = (2,)
        else:
            raise ValueError(f"unknown subset selector {selector!r}")
        return [s for m in sizes for s in combinations(range(n_parties), m)]
    if isinstance(selector, int):
        if not 2 <= selector <= n_parties:
            raise ValueError(f"subset size must lie in [2, {n_parties}], got {selector}")
        return list(combinations(range(n_parties), selector))
    subsets = sorted(
        {tuple(sorted(set(int(k) for k in s))) for s in selector},
        key=lambda s: (len(s), s),
    )
    for s in subsets:
        if len(s) < 2 or s[0] < 0 or s[-1] >= n_parties:
            raise ValueError(f"invalid subset {s} for {n_parties} parties")
    return subsets


def subset_scan(
    rho: DensityMatrix, subsets="all", guard: float = BOUND_GUARD
) -> AnalysisReport:
    """Run the necessary norm test on each selected subsystem subset.

    ``subsets`` may be "all" (every subset of size >= 2), "full", "pairs",
    an integer size, or an explicit iterable of index tuples.
    """
    start = time.perf_counter()
    records = []
    for subset in _select_subsets(rho.n_parties, subsets):
        v = necessary_test(rho, subset, guard)
        records.append(SubsetRecord(subset, v.norm_value, v.bound_value, v))
    return AnalysisReport(
        dims=rho.dims, records=records, elapsed_seconds=time.perf_counter() - start
    )


def _require_pure(rho: DensityMatrix, what: str) -> None:
    if not rho.is_pure(PURE_TOL):
        raise ValueError(f"{what} expects a pure state (purity {rho.purity():.9f})")


def is_pure_product(rho: DensityMatrix, tol: float = FACTOR_TOL) -> bool:
    """True when a pure state is a full product of single-subsystem states,
    detected as the full correlation tensor coinciding with the outer product
    of the coherence vectors."""
    _require_pure(rho, "is_pure_product")
    if rho.n_parties < 2:
        raise ValueError("is_pure_product needs at least 2 subsystems")
    t = correlation_tensor(rho, range(rho.n_parties))
    singles = [bloch_vector(rho, k) for k in range(rho.n_parties)]
    return float(np.linalg.norm(t - outer_product(singles))) <= tol


def factor_pure_state(rho: DensityMatrix, tol: float = FACTOR_TOL) -> list:
    """Partition the subsystems of a pure state into irreducible blocks.

    A subset splits off when its marginal is itself pure; the search tries
    subsets in increasing size up to half the current block (a larger pure
    subset always has a pure complement, so nothing is missed) and recurses
    into both halves.  Returns the blocks as ascending index tuples.
    """
    _require_pure(rho, "factor_pure_state")
    blocks = []
    _split_blocks(rho, list(range(rho.n_parties)), blocks, tol)
    return sorted(blocks)


def _split_blocks(rho: DensityMatrix, labels, out, tol) -> None:
    n = len(labels)
    if n == 1:
        out.append((labels[0],))
        return
    for size in range(1, n // 2 + 1):
        for local in combinations(range(n), size):
            red = partial_trace(rho, local)
            if red.purity() >= 1.0 - tol:
                rest = [i for i in range(n) if i not in local]
                _split_blocks(red, [labels[i] for i in local], out, tol)
                _split_blocks(
                    partial_trace(rho, rest), [labels[i] for i in rest], out, tol
                )
                return
    out.append(tuple(labels))


def qubit_exact_test(rho: DensityMatrix, guard: float = BOUND_GUARD) -> Verdict:
    """Exact separability decision for the qubit class with only top-order
    correlations.

    Applies to N-qubit states whose coherence vectors and proper-subset
    tensors all vanish and whose full tensor admits a completely orthogonal
    rank-1 decomposition.  On that class the state is separable exactly when
    the Ky Fan norm (the decomposition's weight sum) is at most 1.  Unmet
    preconditions yield Inconclusive with a reason code.
    """
    crit = "qubit-exact"
    if rho.n_parties < 2 or any(d != 2 for d in rho.dims):
        return Verdict(
            Decision.INCONCLUSIVE, None, 1.0, crit, reason="not-a-multiqubit-state"
        )
    data = decompose(rho)
    for k in range(rho.n_parties):
        if np.linalg.norm(data.singles[k]) > ZERO_COMPONENT_TOL:
            return Verdict(
                Decision.INCONCLUSIVE, None, 1.0, crit, reason="coherence-vectors-nonzero"
            )
    full = tuple(range(rho.n_parties))
    for subset, t in data.tensors.items():
        if subset != full and np.linalg.norm(t) > ZERO_COMPONENT_TOL:
            return Verdict(
                Decision.INCONCLUSIVE,
                None,
                1.0,
                crit,
                reason="lower-order-tensors-nonzero",
            )
    form = find_orthogonal_kruskal(data.tensors[full])
    if form is None:
        return Verdict(
            Decision.INCONCLUSIVE, None, 1.0, crit, reason="no-orthogonal-decomposition"
        )
    norm = kyfan_via_kruskal(form)
    if norm > 1.0 + guard:
        return Verdict(Decision.ENTANGLED, norm, 1.0, crit)
    if norm < 1.0 - guard:
        return Verdict(Decision.SEPARABLE, norm, 1.0, crit)
    return Verdict(Decision.INCONCLUSIVE, norm, 1.0, crit, borderline=True)


def _component_coefficient(dims, subset) -> float:
    return math.sqrt(math.prod(2.0 * (dims[k] - 1) / dims[k] for k in subset))


def _sufficiency_parts(rho: DensityMatrix):
    """Shared workhorse for the sufficiency sum and the decomposition.

    Returns (lhs, single_parts, subset_parts) or (None, failing_subset, None)
    when some order >= 3 tensor has no completely orthogonal decomposition.
    """
    data = decompose(rho)
    dims = rho.dims
    total = 0.0
    single_parts = []
    for k in sorted(data.singles):
        s = data.singles[k]
        nrm = float(np.linalg.norm(s))
        total += _component_coefficient(dims, (k,)) * nrm
        single_parts.append((k, nrm, s))
    subset_parts = []
    for subset in sorted(data.tensors, key=lambda s: (len(s), s)):
        form = find_orthogonal_kruskal(data.tensors[subset])
        if form is None:
            return None, subset, None
        total += _component_coefficient(dims, subset) * float(form.weights.sum())
        subset_parts.append((subset, form))
    return total, single_parts, subset_parts


def sufficiency_lhs(rho: DensityMatrix) -> float | None:
    """Weighted sum of all component norms entering the sufficient criterion:

        sum_k c_k ||s^(k)|| + sum_S c_S ||T^S||_KF,   c_S = sqrt(prod 2(d-1)/d).

    Pair tensors use the singular value decomposition; tensors of order >= 3
    need a completely orthogonal decomposition, and when any of them lacks
    one the whole sum is unavailable (None).
    """
    total, _, parts = _sufficiency_parts(rho)
    return None if parts is None else total


def sufficiency_test(rho: DensityMatrix, slack: float = 1e-10) -> Verdict:
    """Sufficient criterion: lhs <= 1 certifies separability.  A larger sum
    or an unavailable decomposition is merely inconclusive."""
    crit = "sufficiency-sum"
    total, detail, parts = _sufficiency_parts(rho)
    if parts is None:
        return Verdict(
            Decision.INCONCLUSIVE,
            None,
            1.0,
            crit,
            reason=f"no-orthogonal-decomposition:{detail}",
        )
    if total <= 1.0 + slack:
        return Verdict(Decision.SEPARABLE, total, 1.0, crit)
    return Verdict(Decision.INCONCLUSIVE, total, 1.0, crit, reason="sum-exceeds-one")


WEIGHT_CUTOFF = 1e-12


def separable_decomposition(rho: DensityMatrix) -> SeparableDecomposition:
    """Materialize the mixture of product states promised by the sufficient
    criterion.

    Each nonzero coherence vector contributes one product term; each rank-1
    term of a subset tensor's orthogonal decomposition contributes 2^(M-1)
    sign-balanced product terms whose lower-order contributions cancel
    row-wise.  Factor vectors are rescaled onto the subsystem inball so each
    factor is a valid state, and the leftover weight goes to the maximally
    mixed state.  Raises CriterionUnavailableError when the criterion does
    not apply (sum above one or a decomposition missing).
    """
    total, detail, subset_parts = _sufficiency_parts(rho)
    if subset_parts is None:
        raise CriterionUnavailableError(
            f"correlation tensor of subset {detail} has no completely "
            "orthogonal rank-1 decomposition"
        )
    if total > 1.0 + 1e-10:
        raise CriterionUnavailableError(
            f"weighted component norm sum {total:.12g} exceeds 1; "
            "the sufficient criterion does not apply"
        )
    dims = rho.dims
    n = len(dims)
    inball = [ball_radii(d)[0] for d in dims]
    vec_sizes = [d * d - 1 for d in dims]

    def blank():
        return [np.zeros(sz) for sz in vec_sizes]

    terms = []
    for k, nrm, s in detail:
        if nrm <= WEIGHT_CUTOFF:
            continue
        factors = blank()
        factors[k] = inball[k] * (s / nrm)
        terms.append((_component_coefficient(dims, (k,)) * nrm, tuple(factors)))
    for subset, form in subset_parts:
        m = len(subset)
        coef = _component_coefficient(dims, subset)
        table = sign_table(m)
        share = 1.0 / table.shape[0]
        for j in range(form.rank):
            weight = coef * float(form.weights[j]) * share
            if weight <= WEIGHT_CUTOFF:
                continue
            base = [
                inball[k] * form.factors[pos][:, j] for pos, k in enumerate(subset)
            ]
            for row in table:
                factors = blank()
                for pos, k in enumerate(subset):
                    factors[k] = row[pos] * base[pos]
                terms.append((weight, tuple(factors)))
    return SeparableDecomposition(
        dims=dims, terms=tuple(terms), identity_weight=1.0 - total
    )


def assemble_decomposition(dec: SeparableDecomposition) -> DensityMatrix:
    """Turn a separable decomposition back into its density matrix."""
    dims = dec.dims
    total_dim = int(np.prod(dims))
    acc = dec.identity_weight / total_dim * np.eye(total_dim, dtype=complex)
    stacks = [build_basis(d).generators for d in dims]
    for weight, factors in dec.terms:
        mats = []
        for k, d in enumerate(dims):
            v = np.asarray(factors[k], dtype=float)
            mats.append((np.eye(d) + np.tensordot(v, stacks[k], axes=1)) / d)
        acc = acc + weight * kron(*mats)
    return DensityMatrix(dims, acc)


_CRITERION_KEYS = ("t1", "c1", "c2", "p2")


def _criterion_predicate(criterion: str, subsets):
    """Map a criterion key to 'state is flagged' (no longer candidate
    separable by that test)."""
    if criterion == "t1":
        return lambda rho: necessary_test(rho).decision is Decision.ENTANGLED
    if criterion == "c1":
        return lambda rho: any(
            r.verdict.decision is Decision.ENTANGLED
            for r in subset_scan(rho, subsets).records
        )
    if criterion == "c2":
        return lambda rho: qubit_exact_test(rho).decision is Decision.ENTANGLED
    if criterion == "p2":
        return lambda rho: sufficiency_test(rho).decision is not Decision.SEPARABLE
    raise ValueError(f"unknown criterion {criterion!r} (known: {', '.join(_CRITERION_KEYS)})")


def threshold_search(
    family, criterion: str = "t1", tol: float = 1e-6, subsets="all"
) -> float | None:
    """Locate the noise weight p in [0, 1] where a criterion's verdict flips.

    ``family`` is either a ZooSpec with a free noise parameter or a callable
    p -> DensityMatrix.  Zoo families have expansion data affine in p, so the
    flip is unique and plain bisection applies; arbitrary callables are first
    scanned on a 1e-3 grid for the earliest flip bracket, which still assumes
    no flip hides between grid points.  Returns None when the verdict never
    flips on [0, 1], and 0.0 when the state is flagged already at p = 0.
    """
    if isinstance(family, ZooSpec):
        if not family.noise_parameterized:
            raise ValueError(f"family {family.family!r} has no noise parameter to sweep")
        build = lambda p: family.build(noise=p)
        monotone = True
    elif callable(family):
        build = family
        monotone = False
    else:
        raise TypeError("family must be a ZooSpec or a callable p -> DensityMatrix")
    flagged = _criterion_predicate(criterion, subsets)
    lo, hi = 0.0, 1.0
    f_lo = flagged(build(lo))
    f_hi = flagged(build(hi))
    if f_lo:
        return 0.0
    if not f_hi:
        return None
    if not monotone:
        grid = np.linspace(0.0, 1.0, 1001)
        bracket = None
        for a, b in zip(grid[:-1], grid[1:]):
            if flagged(build(float(b))):
                bracket = (float(a), float(b))
                break
        if bracket is None:
            return None
        lo, hi = bracket
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if flagged(build(mid)):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def noise_threshold_table(max_parties: int = 6, tol: float = 1e-6) -> list:
    """Entanglement thresholds of the white-noise GHZ and W families for
    3..max_parties qubits under the necessary norm test.  Returns rows of
    (family, parties, threshold)."""
    rows = []
    for fam in ("ghz-noisy", "w-noisy"):
        for n in range(3, max_parties + 1):
            p_star = threshold_search(ZooSpec(fam, parties=n), "t1", tol)
            rows.append((fam, n, p_star))
    return rows
