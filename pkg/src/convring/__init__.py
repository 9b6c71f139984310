"""Exact multiplication tables of the convolution ring of unipotent bundles
on elliptic curves, equivalently the Green ring of Z_p acting on F_p-spaces."""

from .formal_group import (
    GroupLaw,
    LawError,
    additive_law,
    evaluate_on_nilpotents,
    law_from_json,
    multiplicative_law,
    validate_law,
)
from .kernel import (
    HilbertProfile,
    Multiplicities,
    RankProfile,
    char_zero_product,
    hilbert_profile,
    max_block_index,
    multiplicities_from_hilbert,
    multiplicities_from_ranks,
    operator_rank_profile,
    product_multiplicities,
    rank_profile,
    unipotent_tensor_multiplicities,
)
from .modp import (
    Characteristic,
    QAdicDigits,
    binomial_exact,
    lucas_binomial_mod,
    lucas_zero_block,
    q_adic_digits,
)
from .ring import (
    CacheMiss,
    ProductTable,
    RingElement,
    basis,
    char_zero_polynomial_coordinates,
    product_table,
    ring_add,
    ring_mul,
    ring_neg,
    scalar_mul,
)
from .subring import (
    AlmostConstantSequence,
    NotInImage,
    SubringElement,
    almost_constant_embedding,
    conductor_check,
    conductor_generator,
    fiber_ring_check,
    idempotent_check,
    image_membership,
    localization_check,
    phi_map,
    phi_matrix,
    phi_preimage,
    smith_normal_form,
    square_leading_term_check,
    structure_report,
    subring_mul,
)

__version__ = "0.1.0"
