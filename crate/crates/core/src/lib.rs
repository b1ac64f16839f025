//! Online dual edge coloring: algorithms, optimal oracles, adversarial
//! inputs and value-redistribution certificates for competitive ratios.
//!
//! The charging code is generic over [`Scalar`]; the aliases below fix it to
//! exact rationals or `f64`.

pub mod adversaries;
pub mod charging;
pub mod error;
pub mod graph;
pub mod harness;
pub mod online;
pub mod opt;
pub mod scalar;

pub use error::{Error, Result};
pub use graph::{Assignment, Color, ColorSet, EdgeId, Graph, GraphClass, PartialColoring, VertexId};
pub use online::{
    AlgorithmId, Decision, FirstFit, NextFit, OnlineAlgorithm, RandomParity, RngStream, Trace,
};
pub use opt::{opt, OptWitness};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Exact = num_rational::Ratio<i128>;

pub type ExactLedger = charging::ChargeLedger<Exact>;
pub type FloatLedger = charging::ChargeLedger<f64>;
pub type ExactVerdict = charging::VerdictReport<Exact>;
pub type FloatVerdict = charging::VerdictReport<f64>;
