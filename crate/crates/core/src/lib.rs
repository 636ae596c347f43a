//! Quantitative symmetric monoidal theories.
//!
//! Typed string-diagram terms, quantale-valued distances, matrix and
//! stochastic-matrix semantics, and derivation certificates that witness
//! distances between diagrams.

pub mod quantale;
pub mod rational;
pub mod diagram;
pub mod semantics;
pub mod theory;
pub mod distance;
pub mod certify;
pub mod cartesian;
pub mod sample;
pub mod selftest;

pub use rational::{q, Rational};
