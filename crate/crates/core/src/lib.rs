//! Physical-layer jamming against BPSK/QPSK victims, and online learners that
//! pick the jamming strategy from packet-level error feedback.
//!
//! The crate is split along the simulation pipeline:
//!
//! * [`signal`]: unit-energy constellations, symbol sources, minimum-distance detection.
//! * [`channel`]: per-symbol Monte Carlo of the jammed AWGN channel and the jammer's cost.
//! * [`analytic`]: closed-form error probabilities and the pulsed-jamming optimum.
//! * [`bandit`]: action space, per-arm context features, linear Thompson sampling, UCB-1.
//! * [`harness`]: seeded experiments, CSV/JSON logs.

pub mod analytic;
pub mod bandit;
pub mod channel;
mod error;
pub mod harness;
pub mod signal;

pub use error::{Error, Result};
