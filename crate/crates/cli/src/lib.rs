//! Command line driver for laddermod: file formats, diagrams and the
//! `barcode`, `decompose`, `match` and `verify` commands.

pub mod commands;
pub mod diagram;
pub mod format;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use laddermod::algebra::Field;
use laddermod::coarse::{CoarseError, CoarseVariant};
use laddermod::morphism::MorphismError;
use thiserror::Error;

pub use commands::{run, Report, Status};

#[derive(Debug, Parser)]
#[command(
    name = "laddermod",
    version,
    about = "Ladder decompositions of persistence module morphisms"
)]
pub struct Cli {
    /// Field for files without a `field` line: `rational` or `prime P`.
    #[arg(long, global = true, env = "LADDERMOD_FIELD", value_parser = format::parse_field)]
    pub field: Option<Field>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the barcode of a module (or of both modules of a morphism).
    Barcode {
        input: PathBuf,
        /// Also print a text diagram.
        #[arg(long)]
        text: bool,
        /// Write an SVG diagram to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Decompose a morphism into elementary ladder modules.
    Decompose {
        input: PathBuf,
        /// Interleaving parameter; needs a candidate inverse.
        #[arg(long)]
        delta: Option<i64>,
        /// Morphism file whose forward part is the candidate inverse.
        #[arg(long)]
        inverse: Option<PathBuf>,
        /// Length threshold for a coarse decomposition.
        #[arg(long)]
        q: Option<i64>,
        /// Which side loses its short bars: target, source or both.
        #[arg(long, default_value = "both", value_parser = parse_variant)]
        variant: CoarseVariant,
        /// Double the grid so that an odd q can be used.
        #[arg(long)]
        refine: bool,
    },
    /// Print the partial matchings induced by morphisms.
    Match {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Ladder decomposition or the image-based (bl) construction.
        #[arg(long, value_enum, default_value_t = Method::Ladder)]
        method: Method,
        /// Print both methods and compare them across inputs.
        #[arg(long)]
        compare: bool,
    },
    /// Check the interleaving triangles of a candidate pair.
    Verify {
        input: PathBuf,
        /// Check both triangle families at this δ.
        #[arg(long)]
        delta: Option<i64>,
        /// Smallest δ up to this bound for which the pair certifies.
        #[arg(long)]
        scan_delta_max: Option<i64>,
        /// Morphism file whose forward part is the candidate inverse.
        #[arg(long)]
        inverse: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ladder,
    Bl,
}

fn parse_variant(s: &str) -> Result<CoarseVariant, String> {
    s.parse()
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Format {
        path: String,
        source: format::FormatError,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Coarse(#[from] CoarseError),
}
