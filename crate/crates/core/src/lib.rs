//! Exp-Minus-Log expressions.
//!
//! Every expression is either the constant `1` or `E(a, b) = exp(a) - log(b)`.
//! This crate parses and enumerates these trees, compiles ordinary
//! closed-form terms into them, evaluates them with certified error bounds,
//! and carries a small dovetailing demonstrator for a halting probability
//! over a toy machine family.

pub mod cli;
pub mod el;
pub mod gauss;
pub mod identities;
pub mod omega;
pub mod rigor;
pub mod syntax;

pub use gauss::GaussianRational;
pub use syntax::{EmlExpr, NodePath, Side};
