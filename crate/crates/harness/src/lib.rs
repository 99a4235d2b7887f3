//! Randomized verification of the geometry library's theorems.
//!
//! Each suite draws germs from a named stratum, runs one theorem's two sides
//! against each other, and collects the outcomes in a [`TrialReport`]. Trials
//! are driven by per-index RNG streams, so any failure can be replayed from
//! the suite seed and the trial index alone, independent of scheduling.

pub mod oracle;
pub mod report;
pub mod sampler;
pub mod suites;

pub use oracle::{oracle_point_vs_conic, ConicSide};
pub use report::{TrialFailure, TrialReport};
pub use sampler::{random_germ, GermClass, Sampler};
pub use suites::{default_trials, run_suite, SUITES};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Rejection sampling hit its cap without producing a member of the
    /// requested stratum.
    #[error("stratum too thin for sampler: {0}")]
    SamplerExhausted(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    /// The position oracle only speaks about nondegenerate ellipses and
    /// parabolas.
    #[error("degenerate locus: {0}")]
    DegenerateLocus(String),
    /// The oracle's exact leg and its sampling leg disagreed, which means a
    /// bug in the oracle itself rather than in the library under test.
    #[error("oracle legs disagree: {0}")]
    OracleInconsistent(String),
    #[error(transparent)]
    Geom(#[from] curvloci::GeomError),
}
