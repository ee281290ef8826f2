"""Shared numeric tolerance constants.

Two tiers: EXACT_TOL for algebraic identities that hold to rounding error
(orthogonality relations, reconstructions from closed forms), ACCUM_TOL for
quantities assembled from many floating-point terms.
"""

EXACT_TOL = 1e-10

ACCUM_TOL = 1e-8

# slack below zero allowed for eigenvalues of a positive semidefinite matrix
PSD_TOL = 1e-9

# |imaginary part| above this in a coefficient that must be real is an error
IMAG_TOL = 1e-8

# singular values below RANK_CUTOFF * sigma_max count as zero for rank purposes
RANK_CUTOFF = 1e-12

# guard band around norm-vs-bound comparisons; verdicts inside the band are
# reported inconclusive with a borderline flag instead of picking a side
BOUND_GUARD = 1e-9

# a Bloch component with norm at or below this is treated as vanishing when a
# criterion requires certain components to be exactly zero
ZERO_COMPONENT_TOL = 1e-9
