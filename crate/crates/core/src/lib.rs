//! Exact ladder decompositions of morphisms between persistence modules.
//!
//! A morphism `Φ: V -> W` of one-parameter persistence modules over the
//! integer grid is brought into a pair of barcode bases, written as a single
//! coefficient matrix, and reduced to matching form with operations that
//! keep both bases valid. The result is a direct sum of elementary ladder
//! modules and an induced partial matching of barcodes.

// Reduction failures carry an exact scalar and a diagnostic string.
#![allow(clippy::result_large_err)]

pub mod algebra;
pub mod coarse;
pub mod fixtures;
pub mod ladder;
pub mod matching;
pub mod morphism;
pub mod persistence;
pub mod synth;
