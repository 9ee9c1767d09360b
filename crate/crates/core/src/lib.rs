//! Spectral statistics of partially transposed random density matrices.
//!
//! The crate samples pure states of tripartite systems, reduces them to a
//! two-block density matrix, applies the partial transpose and studies the
//! resulting spectrum: negativity and log-negativity, exact moment formulas,
//! Marchenko-Pastur and semicircle reference densities, Tracy-Widom
//! extreme-value statistics of the minimum eigenvalue, and the same pipeline
//! applied to eigenstates of three coupled quantum kicked rotors.
//!
//! Everything is seeded and reproducible: a `(master_seed, trial_index)` pair
//! pins every sample bit-for-bit regardless of how many worker threads run.

extern crate blas_src;

pub mod airy;
pub mod ensembles;
pub mod error;
pub mod harness;
pub mod laws;
pub mod linalg;
pub mod measures;
pub mod numerics;
pub mod ode;
pub mod qstate;
pub mod rotor;
pub mod tracy_widom;

pub use ensembles::{BetaClass, GaussEnsembleParams, SeedSpec};
pub use error::{Error, Result};
pub use harness::{EnsembleSummary, ExperimentConfig, HistogramTable};
pub use laws::{DensityCurve, LawTag, ModelGeometry, Regime};
pub use measures::MeasureReport;
pub use qstate::{Field, HermitianOperator, PartitionDims, PureState, SpectrumSample};
pub use rotor::{FloquetOperator, RotorParams};
pub use tracy_widom::{CriticalFit, TWTable};
