//! Rigorous arithmetic: dyadic rationals, outward-rounded intervals, complex
//! boxes, and the certified evaluator.

pub mod cbox;
pub mod decimal;
pub mod dyadic;
pub mod elementary;
pub mod interval;

pub use cbox::{ComplexBox, BoxError};
pub use dyadic::{Dyadic, Round};
pub use interval::Interval;
pub mod eval;

pub use eval::{eval, eval_compiled, EvalLimits, EvalOutcome};
