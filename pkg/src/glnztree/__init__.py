"""Finite-state automorphisms of rooted trees, with an exact embedding of
GL(n, Z) into the 2^n-ary tree and a rank-2 free group over the binary one."""

from .errors import (
    AlphabetMismatch,
    GlnzTreeError,
    InvalidAlphabet,
    InvalidIndex,
    InvalidLetter,
    NotReduced,
    NotUnimodular,
    ParseError,
    RefinementMismatch,
    ShapeError,
)
from .glnz import (
    IntMatrix,
    SignFlip,
    Transposition,
    Transvection,
    base_permutation,
    bits_from_letter,
    elementary_to_automorphism,
    expected_states,
    factor_from_json,
    factor_product,
    factor_to_json,
    factorize,
    factors_from_json,
    factors_to_json,
    generator_automorphism,
    letter_from_bits,
    phi,
)
from .mealy import RefinementMap, TreeAutomorphism, identity_automorphism
from .sanov import (
    FreenessReport,
    GroupWord,
    binary_generators,
    block_code,
    coarse_machines,
    constructed_edges,
    depth_conjugacy_check,
    evaluate_group_word,
    figure_diff,
    freeness_check,
    sanov_generators,
)

__version__ = "0.1.0"

__all__ = [
    "AlphabetMismatch",
    "FreenessReport",
    "GlnzTreeError",
    "GroupWord",
    "IntMatrix",
    "InvalidAlphabet",
    "InvalidIndex",
    "InvalidLetter",
    "NotReduced",
    "NotUnimodular",
    "ParseError",
    "RefinementMap",
    "RefinementMismatch",
    "ShapeError",
    "SignFlip",
    "Transposition",
    "Transvection",
    "TreeAutomorphism",
    "base_permutation",
    "binary_generators",
    "bits_from_letter",
    "block_code",
    "coarse_machines",
    "constructed_edges",
    "depth_conjugacy_check",
    "elementary_to_automorphism",
    "evaluate_group_word",
    "expected_states",
    "factor_from_json",
    "factor_product",
    "factor_to_json",
    "factorize",
    "factors_from_json",
    "factors_to_json",
    "figure_diff",
    "freeness_check",
    "generator_automorphism",
    "identity_automorphism",
    "letter_from_bits",
    "phi",
    "sanov_generators",
    "__version__",
]
