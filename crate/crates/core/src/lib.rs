//! Greedy sparse recovery with support-set fusion.
//!
//! [`pursuits`] holds orthogonal matching pursuit and subspace pursuit, both
//! accepting an initial support, and the fusion schemes FuGP and IFuGP that
//! combine them. [`ensemble`], [`metrics`] and [`bench`] make up a seeded
//! Monte Carlo harness measuring support recovery and SRER against the
//! measurement fraction `M/N`.

pub mod bench;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod pursuits;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, SparseEstimate, SupportSet};
pub use pursuits::{fugp, ifugp, omp, sp, Algorithm, PursuitConfig};
