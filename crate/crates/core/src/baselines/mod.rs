//! Classical baselines: a WalkSAT local-search solver measured in flips,
//! and ingestion of timing logs produced by external solvers.

mod timings;
mod walksat;

pub use timings::{ingest_timings, ExternalTimings, IngestError, TimingFormat};
pub use walksat::{walksat_solve, walksat_solve_with_assignment, WalkSatConfig};
