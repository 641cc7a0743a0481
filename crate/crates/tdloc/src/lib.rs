//! Joint position and velocity estimation of a mobile source from round-trip
//! time-delay measurements.
//!
//! A source moving at constant velocity emits a signal that each of `M`
//! fixed sensors reflects back; the measured round-trip delays determine the
//! initial position `u` and velocity `v`. The nonconvex weighted
//! least-squares problem is lifted to a semidefinite program, and three
//! estimators are provided:
//!
//! * [`estimators::rsdp`] — the relaxation obtained by dropping the rank-one
//!   constraint;
//! * [`estimators::pf_sdp`] — a penalized variant whose trace penalty drives
//!   the solution toward rank one;
//! * [`estimators::apf_sdp`] — an adaptive loop that grows the penalty until
//!   the rank-one test passes and backtracks when a weighted-chi-square
//!   threshold flags an excessive penalty.
//!
//! Supporting modules: [`scenario`] (data model and scenario files),
//! [`forward`] (measurement synthesis and an independent delay oracle),
//! [`linearize`] (linear system and constraint assembly), [`sdp`] (a dense
//! interior-point solver), [`analysis`] (Cramér–Rao bound and error
//! statistics), and [`harness`] (seeded Monte Carlo experiment runner).
//!
//! See the crate `examples/` directory for one runnable walkthrough per
//! capability.

pub mod analysis;
pub mod estimators;
pub mod forward;
pub mod harness;
pub mod linearize;
pub mod scenario;
pub mod sdp;

pub use estimators::{apf_sdp, pf_sdp, rsdp, EstimateResult, PenaltyConfig};
pub use forward::{simulate_measurements, TdMeasurements};
pub use scenario::{builtin, load_scenario, NoiseSpec, ParamVector, Scenario};
