//! Linear additive Markov processes (LAMPs) over finite state spaces.
//!
//! A LAMP of order `k` is described by a row-stochastic matrix `P` and a
//! kernel `w` over backward lags `1..=k`. The next state is drawn by first
//! picking a lag `q ~ w` and then moving from the state observed `q` steps
//! back according to the matching row of `P`.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`markov`]: validated transition matrices, stationary distributions,
//!   entropy rates and seeded simulation of first-order chains.
//! - [`lamp`]: the LAMP transition law, simulation, entropy rate and
//!   log-loss scoring.
//! - [`graph`]: strongly connected components, largest-component
//!   restriction and induced irreducibility.
//! - [`corpus`]: sequence corpora and their preprocessing pipeline.
//! - [`fitting`]: first-order counting fits and EM fitting of LAMPs.
//! - [`estimators`]: the seven entropy estimators and the `p_artificial`
//!   sweep with plateau detection.
//! - [`dependence`]: lagged Cramér's V dependency profiles.
#![cfg_attr(not(test), no_std)]
// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod corpus;
pub mod dependence;
pub mod error;
pub mod estimators;
pub mod fitting;
pub mod graph;
pub mod lamp;
pub mod markov;
pub mod rng;
pub mod state;

pub use crate::corpus::SequenceCorpus;
pub use crate::error::{Error, Result};
pub use crate::lamp::{Kernel, LampModel};
pub use crate::markov::{InitialState, StationaryDistribution, TransitionMatrix};
pub use crate::state::StateSpace;
