//! Dynamical-system solver laboratory for 3-SAT.
//!
//! The crate bundles everything needed to study time-to-solution (TTS)
//! statistics of a digital memcomputing machine (DMM) next to a classical
//! local-search baseline:
//!
//! - [`instance`]: DIMACS CNF parsing/writing and a planted-solution
//!   random 3-SAT generator.
//! - [`dmm`]: the continuous DMM flow field (clause constraint, gradient
//!   and rigidity terms, short/long memory dynamics).
//! - [`integrate`]: fixed-step forward Euler (with optional additive
//!   Gaussian noise on the memories) and deterministic RK4, solution
//!   detection and trajectory logging.
//! - [`baselines`]: a WalkSAT solver measured in flips, plus ingestion of
//!   externally produced solver timing logs.
//! - [`stats`]: inverse Gaussian / exponential / Weibull fitting,
//!   Kolmogorov-Smirnov screening, relative variance with bootstrap
//!   errors, and power-law scaling fits.
//! - [`harness`]: reproducible experiment sweeps, presets, and analysis
//!   reports persisted as CSV/JSON.

pub mod baselines;
pub mod dmm;
pub mod harness;
pub mod instance;
pub mod integrate;
pub mod seeding;
pub mod stats;
