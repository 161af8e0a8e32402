//! Newton solvers for polynomial-only algebraic systems
//! `f(u) = L·u + Σ_m N⁽ᵐ⁾(u) + b = 0`.
//!
//! Besides the standard Newton step, the crate provides a step that rewrites
//! `f(u)` through the homogeneity identity `J⁽ᵐ⁾(u)·u = m·N⁽ᵐ⁾(u)` and so
//! never evaluates the highest-degree nonlinear term. See [`newton`].

pub mod counters;
pub mod error;
pub mod exit;
pub mod io;
pub mod matrix;
pub mod newton;
pub mod poly_system;
pub mod problems;
pub mod registry;
pub mod report;

pub use counters::EvalCounters;
pub use error::{Error, Result};
pub use matrix::{DenseMatrix, LuFactorization};
pub use newton::{solve, IterationTrace, Scheme, SolveStatus, SolverConfig};
pub use poly_system::{Evaluator, HomogeneousTerm, PolynomialSystem, RawTerm, TermEntry};
pub use problems::ProblemSpec;

pub type JacobianMatrix = DenseMatrix;
