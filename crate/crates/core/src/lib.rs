//! Simulation and verification tools for alignment of sparse correlated
//! Erdős–Rényi graph pairs.
//!
//! The crate samples correlated pairs, decomposes their intersection graph
//! into components, classifies small tree components up to isomorphism and
//! builds random automorphisms that permute isomorphic trees. The
//! [`harness`] module runs the Monte Carlo experiments that check the
//! resulting limit laws at finite size.

pub mod automorphism;
pub mod components;
pub mod error;
pub mod formats;
pub mod harness;
pub mod model;
pub mod seed;

pub use error::{Error, Result};
pub use seed::Seed;
