//! Persistence modules on the integer grid, barcodes and barcode bases.

mod basis;
mod interval;
mod module;

pub use basis::{reduce_to_barcode_basis, BarGenerator, BarcodeBasis, BasisChange};
pub use interval::{
    interval_lex_leq, interval_overlap, interval_strictly_nested, nestedness, Barcode, Interval,
    Nestedness,
};
pub use module::PersistenceModule;

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PersistenceError {
    #[error("interval [{birth},{death}] has birth after death")]
    InvalidInterval { birth: i64, death: i64 },
    #[error("{dims} dimensions need {} maps, got {maps}", dims.saturating_sub(1))]
    MapCount { dims: usize, maps: usize },
    #[error("map into index {index} has shape {found:?}, expected {expected:?}")]
    MapShape {
        index: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix field differs from module field")]
    FieldMismatch,
    #[error("indices {i}..{j} outside module range {start}..{end}")]
    IndexOutOfRange {
        i: i64,
        j: i64,
        start: i64,
        end: i64,
    },
    #[error("window {lo}..{hi} does not contain support {support:?}")]
    WindowTooSmall {
        lo: i64,
        hi: i64,
        support: (i64, i64),
    },
    #[error("not a barcode basis: {0}")]
    NotBarcodeBasis(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
