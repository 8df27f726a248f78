//! Jacobians of argmin solutions of parametric quadratics by unrolled
//! differentiation of first-order methods, together with the residual
//! polynomial machinery that predicts their burn-in and convergence.

pub mod cli;
pub mod error;
pub mod methods;
pub mod polynomials;
pub mod problems;
pub mod unroll;
pub mod verify;

pub use error::{Error, Result};
