"""Coherence-vector and correlation-tensor analysis of multipartite density
matrices, with matricization-based separability tests.

The core objects: generator bases of SU(d) (:mod:`blochsep.su_basis`), dense
real tensors with cyclic matricization and Ky Fan norms
(:mod:`blochsep.tensors`), validated density matrices and an example-state
zoo (:mod:`blochsep.states`), the expansion itself (:mod:`blochsep.bloch`)
and the separability criteria built on it (:mod:`blochsep.criteria`).
"""

from .bloch import (
    BlochData,
    ball_radii,
    bloch_vector,
    correlation_tensor,
    decompose,
    empty_bloch_data,
    reconstruct,
)
from .criteria import (
    AnalysisReport,
    Decision,
    SeparableDecomposition,
    SubsetRecord,
    SufficiencyRecord,
    Verdict,
    assemble_decomposition,
    factor_pure_state,
    is_pure_product,
    necessary_test,
    noise_threshold_table,
    qubit_exact_test,
    separability_bound,
    separable_decomposition,
    subset_scan,
    sufficiency_lhs,
    sufficiency_test,
    threshold_search,
)
from .errors import (
    BlochSepError,
    CriterionUnavailableError,
    InvalidStateError,
    NumericIntegrityError,
)
from .states import (
    DensityMatrix,
    ZooSpec,
    basis_ket,
    bell_states,
    duer_be4,
    ghz,
    kron,
    maximally_mixed,
    noisy,
    partial_trace,
    projector,
    reduced_w_noisy,
    smolin,
    state_234,
    validate_density,
    w_state,
    zoo_families,
    zoo_state,
)
from .stateio import load_state, save_state
from .su_basis import GeneratorBasis, StructureConstants, build_basis, structure_constants
from .tensors import (
    KruskalForm,
    find_orthogonal_kruskal,
    fold,
    is_supersymmetric,
    khatri_rao,
    kruskal_to_tensor,
    kruskal_unfold,
    kyfan_via_kruskal,
    matrix_kyfan,
    outer_product,
    sign_table,
    singular_values,
    tensor_kyfan,
    unfold,
    verify_complete_orthogonality,
)

__version__ = "0.1.0"
