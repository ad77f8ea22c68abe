//! Exact-arithmetic toolkit for the James Tree space `JT`.
//!
//! Vectors are finitely supported functions on the dyadic tree with rational
//! coordinates. The crate computes `||x||_JT^2` by dynamic programming over
//! `ran(x)`, checks it against a brute-force oracle, enumerates norming
//! partitions, decides whether a vector is separated, certifies extremality
//! (with a perturbation witness when the answer is negative), and provides
//! the greedy machinery for positive vectors.

pub mod dot;
pub mod error;
pub mod extremality;
pub mod greedy;
pub mod norm;
pub mod rational;
pub mod tree;
pub mod vector;
pub mod wire;

pub use error::{JtError, Result};
pub use norm::{
    constrained_norm_sq, enumerate_norming, gap, jt_norm_sq, oracle_norm_sq, score, Constraint,
    NormResult, Partition, DEFAULT_ORACLE_CAP,
};
pub use rational::Rational;
pub use tree::{Node, NodeSet, Segment, DEFAULT_MAX_DEPTH};
pub use vector::TreeVector;
