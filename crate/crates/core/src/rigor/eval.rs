//! Certified evaluation of EML expressions.
//!
//! Subtrees are evaluated bottom-up into complex boxes. Two facts are
//! threaded alongside each box:
//!
//! - whether the node only matters through `exp` of it, in which case its
//!   value is only needed modulo `2 pi i` and a logarithm may be taken on
//!   any branch;
//! - a certificate that the imaginary part is exactly `q pi` for a small
//!   rational `q`, which lets a later `log` see a certified real argument
//!   (positive, or negative for the `ln|b| + i pi` case) instead of a box
//!   that touches the cut.

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::cbox::{self, BoxError, ComplexBox};
use super::dyadic::Dyadic;
use super::elementary;
use super::interval::Interval;
use crate::el::{CompiledExpr, Provenance};
use crate::gauss::GaussianRational;
use crate::syntax::{EmlExpr, NodePath, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalLimits {
    /// Requested width `2^-target_bits` of the result.
    pub target_bits: u32,
    pub max_working_bits: u32,
    /// Number of precision doublings after the first attempt.
    pub max_refinements: u32,
}

impl EvalLimits {
    pub fn new(target_bits: u32) -> EvalLimits {
        EvalLimits {
            target_bits,
            max_working_bits: (4 * target_bits).max(4096),
            max_refinements: 8,
        }
    }
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits::new(64)
    }
}

pub const UNDEFINED_REASON: &str = "log argument exactly zero";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalOutcome {
    Value(ComplexBox),
    UndefinedAt { path: NodePath, reason: &'static str },
    BranchUndecided { path: NodePath, last_box: ComplexBox },
}

impl EvalOutcome {
    pub fn value(&self) -> Option<&ComplexBox> {
        match self {
            EvalOutcome::Value(b) => Some(b),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Normal,
    /// Value is consumed only through `exp`.
    ModTwoPiI,
}

#[derive(Clone)]
struct NodeVal {
    bx: ComplexBox,
    /// `Im = q pi` exactly (modulo `2 pi` in `ModTwoPiI` mode).
    q: Option<Ratio<i64>>,
    exact: Option<GaussianRational>,
}

enum Fail {
    Undefined(NodePath),
    /// Retrying at higher precision may help.
    Undecided(NodePath, ComplexBox),
    /// Retrying never helps.
    Overflow(NodePath, ComplexBox),
}

struct Ctx<'a> {
    annotations: Option<&'a Provenance>,
    prec: u32,
    path: NodePath,
}

fn reduce_mod_two(q: Ratio<i64>) -> Ratio<i64> {
    let two = Ratio::from_integer(2);
    let mut r = q - (q / two).floor() * two;
    if r > Ratio::one() {
        r -= two;
    }
    r
}

fn pi_times(q: Ratio<i64>, prec: u32) -> Interval {
    if q.is_zero() {
        return Interval::zero();
    }
    let w = prec + 8;
    elementary::pi(w)
        .mul_int(&(*q.numer()).into(), w)
        .div_int(*q.denom(), prec)
}

fn exact_val(v: &GaussianRational, prec: u32) -> NodeVal {
    NodeVal {
        bx: ComplexBox::from_rationals(&v.re, &v.im, prec),
        q: v.im.is_zero().then(Ratio::zero),
        exact: Some(v.clone()),
    }
}

impl Ctx<'_> {
    fn annotation(&self) -> Option<&GaussianRational> {
        self.annotations.and_then(|m| m.get(&self.path))
    }

    fn child(&mut self, side: Side, e: &EmlExpr, mode: Mode) -> Result<NodeVal, Fail> {
        self.path.push(side);
        let r = self.node(e, mode);
        self.path.pop();
        r
    }

    fn node(&mut self, e: &EmlExpr, mode: Mode) -> Result<NodeVal, Fail> {
        if let Some(v) = self.annotation() {
            return Ok(exact_val(v, self.prec));
        }
        let (alpha, beta) = match e.children() {
            None => return Ok(exact_val(&GaussianRational::one(), self.prec)),
            Some(c) => c,
        };
        let p = self.prec;
        let a = self.child(Side::Alpha, alpha, Mode::ModTwoPiI)?;
        let b = self.child(Side::Beta, beta, Mode::Normal)?;

        // exp(a), real when Im a is a certified multiple of pi
        let exp_real = a.q.filter(|q| q.is_integer());
        let ex = match exp_real {
            Some(n) => cbox::real_exp(&a.bx.re, p).map(|r| {
                let r = if n.to_integer() % 2 == 0 { r } else { r.neg() };
                ComplexBox::real(r)
            }),
            None => cbox::box_exp(&a.bx, p),
        };
        let ex = match ex {
            Ok(x) => x,
            Err(_) => {
                let path = self.path.alpha();
                return Err(if a.bx.re.mig() > Dyadic::pow2(cbox::EXP_MAGNITUDE_BOUND_BITS) {
                    Fail::Overflow(path, a.bx)
                } else {
                    Fail::Undecided(path, a.bx)
                });
            }
        };

        let (lg, q_log) = self.log(&b, mode)?;
        let mut bx = cbox::box_sub(&ex, &lg, p);
        let mut q = match (exp_real, q_log) {
            (Some(_), Some(ql)) => Some(-ql),
            _ => None,
        };
        if mode == Mode::ModTwoPiI {
            q = q.map(reduce_mod_two);
        }
        if let Some(q) = q {
            bx.im = pi_times(q, p);
        }
        Ok(NodeVal { bx, q, exact: None })
    }

    /// `log b` (modulo `2 pi i` when `mode` allows), with a certificate for
    /// its imaginary part when one is available.
    fn log(&self, b: &NodeVal, mode: Mode) -> Result<(ComplexBox, Option<Ratio<i64>>), Fail> {
        let p = self.prec;
        let here = || self.path.beta();
        if let Some(v) = &b.exact {
            if v.is_zero() {
                return Err(Fail::Undefined(here()));
            }
            if v.is_negative_real() {
                let lg = cbox::box_log_negative_real(&v.re, p).expect("negative real");
                return Ok((lg, Some(Ratio::one())));
            }
            let lg = cbox::box_log(&b.bx, p).map_err(|_| Fail::Undecided(here(), b.bx.clone()))?;
            return Ok((lg, v.arg_over_pi()));
        }
        if b.q == Some(Ratio::zero()) {
            let re = &b.bx.re;
            if re.is_positive() {
                let l = elementary::ln(re, p);
                return Ok((ComplexBox::real(l), Some(Ratio::zero())));
            }
            if re.is_negative() {
                let l = elementary::ln(&re.neg(), p);
                return Ok((ComplexBox::new(l, cbox::pi_box(p).re), Some(Ratio::one())));
            }
            return Err(Fail::Undecided(here(), b.bx.clone()));
        }
        match cbox::box_log(&b.bx, p) {
            Ok(lg) => Ok((lg, None)),
            Err(BoxError::CutViolation) if mode == Mode::ModTwoPiI && avoids_positive_axis(&b.bx) => {
                // log(-z) + i pi agrees with log z up to 2 pi i
                let mut lg = cbox::box_log(&b.bx.neg(), p).map_err(|_| Fail::Undecided(here(), b.bx.clone()))?;
                lg.im = lg.im.add(&cbox::pi_box(p).re, p);
                Ok((lg, None))
            }
            Err(_) => Err(Fail::Undecided(here(), b.bx.clone())),
        }
    }
}

/// Disjoint from `[0, inf)`.
fn avoids_positive_axis(b: &ComplexBox) -> bool {
    b.re.is_negative() || b.im.is_positive() || b.im.is_negative()
}

/// Depth of `expr` with annotated subtrees counted as leaves.
fn effective_depth(expr: &EmlExpr, annotations: Option<&Provenance>) -> usize {
    let Some(ann) = annotations.filter(|m| !m.is_empty()) else {
        return expr.depth();
    };
    let mut best = 0;
    let mut stack = vec![(expr, NodePath::root(), 0usize)];
    while let Some((e, path, d)) = stack.pop() {
        if ann.contains_key(&path) {
            best = best.max(d);
            continue;
        }
        match e.children() {
            None => best = best.max(d),
            Some((a, b)) => {
                stack.push((a, path.alpha(), d + 1));
                stack.push((b, path.beta(), d + 1));
            }
        }
    }
    best
}

/// First working precision tried: the target plus guard bits growing with
/// the depth of the part that actually gets evaluated.
pub fn start_precision(expr: &EmlExpr, annotations: Option<&Provenance>, limits: &EvalLimits) -> u32 {
    let depth = effective_depth(expr, annotations).min(1 << 16) as u32;
    (limits.target_bits + 16 + 4 * depth).min(limits.max_working_bits.max(limits.target_bits))
}

const BIG_STACK_DEPTH: usize = 512;

/// Evaluates `expr`, using `annotations` as exact values for the subtrees
/// they name.
pub fn eval(expr: &EmlExpr, annotations: Option<&Provenance>, limits: &EvalLimits) -> EvalOutcome {
    if expr.depth() > BIG_STACK_DEPTH {
        let stack = 4096 * expr.depth().max(1 << 12);
        return std::thread::scope(|s| {
            std::thread::Builder::new()
                .stack_size(stack)
                .spawn_scoped(s, || eval_inner(expr, annotations, limits))
                .expect("spawn evaluator thread")
                .join()
                .expect("evaluator thread")
        });
    }
    eval_inner(expr, annotations, limits)
}

fn eval_inner(expr: &EmlExpr, annotations: Option<&Provenance>, limits: &EvalLimits) -> EvalOutcome {
    let target = Dyadic::pow2(-(limits.target_bits as i64));
    let cap = limits.max_working_bits.max(limits.target_bits);
    let mut prec = start_precision(expr, annotations, limits);
    let mut last = None;
    for _ in 0..=limits.max_refinements {
        let mut ctx = Ctx {
            annotations: annotations.filter(|m| !m.is_empty()),
            prec,
            path: NodePath::root(),
        };
        match ctx.node(expr, Mode::Normal) {
            Ok(v) => {
                if v.bx.width() <= target {
                    return EvalOutcome::Value(v.bx);
                }
                last = Some((NodePath::root(), v.bx));
            }
            Err(Fail::Undefined(path)) => {
                return EvalOutcome::UndefinedAt {
                    path,
                    reason: UNDEFINED_REASON,
                }
            }
            Err(Fail::Overflow(path, last_box)) => return EvalOutcome::BranchUndecided { path, last_box },
            Err(Fail::Undecided(path, b)) => last = Some((path, b)),
        }
        if prec >= cap {
            break;
        }
        prec = (prec * 2).min(cap);
    }
    let (path, last_box) = last.expect("at least one attempt");
    EvalOutcome::BranchUndecided { path, last_box }
}

/// Evaluates a compiled expression with its provenance as annotations.
pub fn eval_compiled(c: &CompiledExpr, limits: &EvalLimits) -> EvalOutcome {
    eval(&c.expr, Some(&c.provenance), limits)
}
