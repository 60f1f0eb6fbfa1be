//! Measurement-basis schedules for learning two-local sparse Pauli-Lindblad
//! noise models, and a simulated cycle-benchmarking learning loop.
//!
//! The crate is split into an exact combinatorial part and a numerical part:
//!
//! - [`pauli`]: Pauli strings, anticommutation, weights, three-row column substrings.
//! - [`topology`]: qubit connectivity graphs, maximum clique, degeneracy, 4-coloring.
//! - [`scheduler`]: the nine-basis table construction, the logarithmic
//!   complete-graph construction, coverage verification and a local-search minimizer.
//! - [`spl_model`]: model terms and rates, Pauli fidelities and a dense oracle.
//! - [`cb_sim`]: decay-curve simulation, decay fits and rate recovery by NNLS.
//!
//! Numerical types are generic over [`Real`]; the aliases below fix the scalar
//! to `f64`, which is what the command-line tool uses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cb_sim;
mod error;
pub mod linalg;
pub mod nnls;
pub mod pauli;
pub mod scalar;
pub mod scheduler;
pub mod spl_model;
pub mod topology;

pub use error::{Error, Result};
pub use pauli::{ColumnSubstring, PauliAxis, PauliString};
pub use scalar::Real;
pub use scheduler::{CoverageReport, MeasurementSchedule};
pub use topology::{Coloring, TopologyGraph};

pub type SplTermF64 = spl_model::SplTerm<f64>;
pub type SplModelF64 = spl_model::SplModel<f64>;
pub type FidelityTableF64 = spl_model::FidelityTable<f64>;
pub type CbConfigF64 = cb_sim::CbConfig<f64>;
pub type DecayCurveF64 = cb_sim::DecayCurve<f64>;
pub type FitResultF64 = cb_sim::FitResult<f64>;

pub type SplModelF32 = spl_model::SplModel<f32>;
pub type FitResultF32 = cb_sim::FitResult<f32>;
