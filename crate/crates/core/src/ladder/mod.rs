//! Reduction of coefficient matrices to matching form and the resulting
//! ladder decompositions.

mod decompose;
mod ops;
mod reduce;
mod search;

pub use decompose::{
    apply_to_bases, check_nestedness_precondition, decompose, decompose_in_bases, decompose_with,
    verify_decomposition, DecomposeError, DecompositionMismatch, LadderDecomposition,
    NestednessCheck, Summand,
};
pub use ops::{replay, AdmissibleOp, OpKind};
pub use reduce::{
    is_matching_form, reduce_to_matching_form, reduce_with, PivotChoice, Preference,
    ReductionFailure, ReductionStrategy,
};
pub use search::{exhaustive_matching_search, SearchOutcome};
