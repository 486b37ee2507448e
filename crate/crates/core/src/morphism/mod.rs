//! Morphisms of persistence modules, their coefficient matrices and
//! interleaving checks.

mod certify;
mod ladder;
mod single;

pub use certify::{
    check_delta_invertible, check_interleaving, interleaving_to_invertible,
    invertible_to_interleaving, triangle_report, InterleavingCertificate, PairKind, Triangle,
    TriangleReport,
};
pub use ladder::{failing_squares, validate_ladder, LadderModule};
pub use single::{compose_single, from_single_matrix, to_single_matrix, MorphismMatrix};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::persistence::{Interval, PersistenceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("component at {index} has shape {found:?}, expected {expected:?}")]
    ComponentShape {
        index: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("coefficient matrix has shape {found:?} for {gens:?} generators")]
    MatrixShape {
        gens: (usize, usize),
        found: (usize, usize),
    },
    #[error("modules are over different fields")]
    FieldMismatch,
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("square {from}->{} does not commute", from + 1)]
    SquareFails { from: i64 },
    #[error("triangle {triangle} fails at t = {index}")]
    TriangleFails { triangle: Triangle, index: i64 },
    #[error("nonzero coefficient from {col} to {row} although {row} is not overlapped by {col}")]
    SupportViolation { row: Interval, col: Interval },
    #[error("no column generator {0}")]
    UnknownGenerator(usize),
    #[error("negative shift {0}")]
    NegativeDelta(i64),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
