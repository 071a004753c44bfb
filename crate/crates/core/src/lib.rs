//! Exact discrete Fenchel duality for integrally convex functions.
//!
//! Everything is computed with arbitrary precision integers and rationals:
//! integral convexity checks, conjugates, subdifferentials with box
//! constraints, integral subgradients, min-max certificates and
//! bisubmodular min-max formulas.

pub mod arith;
pub mod bisubmodular;
pub mod cli;
pub mod error;
pub mod fenchel;
pub mod fixtures;
pub mod functions;
pub mod integral_convexity;
pub mod io;
pub mod lp;
pub mod subdifferential;

pub use arith::{ExtInt, IntegralBox, LatticePoint, Rational};
pub use error::{Error, Result};
pub use functions::{Orientation, SeparableFunction, TableFunction};
