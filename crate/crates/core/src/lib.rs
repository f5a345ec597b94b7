//! Exact computation of reduced non-Archimedean A-discriminant amoebae.
//!
//! The pipeline runs from a support matrix `A` (or directly a kernel matrix
//! `B`) and a prime `p` to an exact piecewise-linear planar graph when
//! `m = 2`, and counts the connected components of its complement.
//!
//! Module map:
//!
//! - [`linalg`]: `Â`, integer kernels, Gauss-Jordan affine changes of variables.
//! - [`padic`]: valuations and canonical p-adic digits of rationals.
//! - [`trop`]: the parametric valuation map, its tropicalization and the
//!   witness procedure choosing an approximating index set.
//! - [`amoeba`]: zeros, digit trees, closed-form curves and graph assembly for `m = 2`.
//! - [`arrangement`]: complement component counting and its oracles.
//! - [`extremal`]: the family of supports with quadratically many components.
//! - [`render`]: SVG and DOT output.

pub mod amoeba;
pub mod arrangement;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod linalg;
pub mod matrix;
pub mod padic;
pub mod rational;
pub mod render;
pub mod trop;

pub use error::{Error, Result};
pub use matrix::{IntMatrix, RatMatrix};
pub use padic::{Prime, ValOrInf};
pub use rational::Rational;
