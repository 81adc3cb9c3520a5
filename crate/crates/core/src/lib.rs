//! Stokes data of differential operators with simple singularity symbols.
//!
//! The pipeline runs symbol -> Newton polygon -> growth diagram -> Stokes word.
//! Alongside it, Dynkin diagrams give planar bipartite graphs whose generic
//! connections realize point configurations in projective space.

pub mod bipartite;
pub mod exact;
pub mod flags;
pub mod growth;
pub mod lattice;
pub mod poly;
pub mod render;
pub mod report;
pub mod words;

use thiserror::Error;

/// Any error of the library, tagged with the module that raised it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("poly: {0}")]
    Poly(#[from] poly::PolyError),
    #[error("lattice: {0}")]
    Lattice(#[from] lattice::LatticeError),
    #[error("growth: {0}")]
    Growth(#[from] growth::GrowthError),
    #[error("words: {0}")]
    Words(#[from] words::WordError),
    #[error("flags: {0}")]
    Flags(#[from] flags::FlagError),
    #[error("bipartite: {0}")]
    Bipartite(#[from] bipartite::BipartiteError),
}

pub use report::{run_pipeline, AnalysisReport, PipelineInput};
