//! Experiment harness for the gridflow solvers: configuration handling and
//! the three experiment families (Cauchy convergence tables, solver
//! complexity traces, long-time evolutions with scaling fits).

pub mod complexity;
pub mod config;
pub mod converge;
pub mod error;
pub mod evolve;
pub mod interp;
pub mod slope;

pub use complexity::{complexity_study, ComplexityTrace};
pub use config::{
    resolve_complexity, resolve_converge, resolve_evolve, ComplexityParams, ConvergeKind,
    ConvergeParams, EvolveKind, EvolveParams, FileConfig, InitKind,
};
pub use converge::{cauchy_convergence, RateTableRow};
pub use error::{HarnessError, Result};
pub use evolve::{evolve, EvolveSummary};
pub use interp::interpolate_coarse_to_fine;
pub use slope::log_log_slope;
