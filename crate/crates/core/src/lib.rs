//! A desk-scale laboratory for sequential binary prediction.
//!
//! The crate implements, with exact rational arithmetic throughout:
//!
//! * foundational types for bits, finite strings, probabilities,
//!   measures, semi-measures, and predictors ([`bits`], [`prob`],
//!   [`measure`], [`predictor`]);
//! * a catalog of concrete computable measures ([`hypotheses`]) and
//!   Bayesian mixtures over finite pools with the equivalent
//!   posterior-weight aggregator ([`mixture`]);
//! * log-loss scoring, regret, and the exact mixture-optimality bound
//!   ([`scoring`]);
//! * two executable diagonal adversaries ([`diagonal`]);
//! * the MONO monotone-machine VM with resource-bounded algorithmic
//!   probability, description sets, and program-length complexity
//!   ([`monovm`]);
//! * LZ76 complexity and its induced prior predictor ([`lzprior`]);
//! * seeded sampling and reliability traces ([`sample`], [`rng`]).
//!
//! Probabilities are never floats: every comparison downstream of a
//! theorem statement is decided on exact rationals, and decimal
//! renderings exist only for display.

pub mod bits;
pub mod diagonal;
pub mod hypotheses;
pub mod lzprior;
pub mod measure;
pub mod mixture;
pub mod monovm;
pub mod predictor;
pub mod prob;
pub mod rng;
pub mod sample;
pub mod scoring;

pub use bits::{Bit, FiniteString};
pub use prob::Prob;
