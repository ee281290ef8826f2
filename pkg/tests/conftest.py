"""Shared helpers for the test suite."""

import numpy as np

from blochsep import DensityMatrix, kron


def random_density(rng, dims, rank=None):
    """Random full-rank (or rank-limited) density matrix via a Wishart draw."""
    total = int(np.prod(dims))
    r = rank or total
    g = rng.normal(size=(total, r)) + 1j * rng.normal(size=(total, r))
    mat = g @ g.conj().T
    return DensityMatrix(dims, mat / np.trace(mat).real)


def random_unitary(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    # fix the phase so the distribution is Haar
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_pure_product(rng, dims):
    mats = []
    for d in dims:
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        v /= np.linalg.norm(v)
        mats.append(np.outer(v, v.conj()))
    return kron(*mats)


def random_separable(rng, dims, n_terms=4):
    """Convex mixture of random pure product states."""
    weights = rng.dirichlet(np.ones(n_terms))
    mat = sum(w * random_pure_product(rng, dims) for w in weights)
    return DensityMatrix(dims, mat)
