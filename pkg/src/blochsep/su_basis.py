"""Generator bases of SU(d): the generalized Gell-Mann matrices.

The basis is enumerated in a fixed order so that serialized coefficients are
reproducible: first the symmetric pair matrices E_jk + E_kj for index pairs
j < k in lexicographic order, then the antisymmetric pairs -i(E_jk - E_kj) in
the same pair order, then the d - 1 diagonal matrices.  For d = 2 this yields
exactly (sigma_x, sigma_y, sigma_z).

All generators are Hermitian, traceless and normalized to Tr(g_i g_j) =
2 delta_ij.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    """Ordered basis of the d^2 - 1 traceless Hermitian SU(d) generators."""

    d: int
    generators: np.ndarray  # shape (d*d - 1, d, d), complex

    def __len__(self) -> int:
        return self.generators.shape[0]


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """Antisymmetric (f) and symmetric (g) structure constants of SU(d).

    They satisfy g_i g_j = (2/d) delta_ij I + sum_k (i f_ijk + g_ijk) g_k,
    which is what :func:`structure_constants` extracts from triple-product
    traces.
    """

    d: int
    f: np.ndarray  # shape (n, n, n) with n = d*d - 1
    g: np.ndarray


@lru_cache(maxsize=None)
def build_basis(d: int) -> GeneratorBasis:
    """Return the generator basis for one subsystem of dimension ``d``.

    Results are cached and the arrays are read-only.
    """
    if d < 2:
        raise ValueError(f"subsystem dimension must be at least 2, got {d}")
    mats = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            mats.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1.0j
            m[k, j] = 1.0j
            mats.append(m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        coeff = math.sqrt(2.0 / (l * (l + 1)))
        for q in range(l):
            m[q, q] = coeff
        m[l, l] = -l * coeff
        mats.append(m)
    arr = np.stack(mats)
    arr.flags.writeable = False
    return GeneratorBasis(d=d, generators=arr)


def structure_constants(basis: GeneratorBasis) -> StructureConstants:
    """Extract f and g from the triple-product traces Tr(g_a g_b g_c).

    The trace equals 2 g_abc + 2i f_abc, so the real and imaginary parts
    divided by two give the two constant tensors.
    """
    gens = basis.generators
    triple = np.einsum("aij,bjk,cki->abc", gens, gens, gens, optimize=True)
    f = triple.imag / 2.0
    g = triple.real / 2.0
    f.flags.writeable = False
    g.flags.writeable = False
    return StructureConstants(d=basis.d, f=f, g=g)
