//! Closed-form terms and their compilation to pure EML.

pub mod compile;
pub mod term;

pub use compile::{
    apply_template, compile, compile_gaussian, compile_int, subst_add, subst_exp, subst_inv, subst_log,
    subst_mul, subst_neg, subst_zero, CompiledExpr, Provenance, Template, TemplateKind,
};
pub use term::{parse_term, ElTerm, TermParseError};
