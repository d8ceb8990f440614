//! Compilation of closed-form terms to pure EML.
//!
//! Every construct is reduced to the seven substitution templates below.
//! Alongside the tree, the compiler records exact Gaussian-rational values
//! for subterms built from integers, `i`, and field operations, keyed by
//! the subterm's position in the output. An exact value is recorded only
//! when the template is known to produce it on the principal branch.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::term::ElTerm;
use crate::gauss::GaussianRational;
use crate::rigor::elementary;
use crate::syntax::{EmlExpr, NodePath, Side};

/// Exact values of subexpressions, keyed by position.
pub type Provenance = BTreeMap<NodePath, GaussianRational>;

pub const EXP_TEMPLATE: &str = "E(x,1)";
pub const LOG_TEMPLATE: &str = "E(1,E(E(1,x),1))";
pub const ZERO_TEMPLATE: &str = "E(1,E(E(1,1),1))";
pub const MUL_TEMPLATE: &str = "E(E(1,E(E(E(1,E(E(1,E(1,x)),1)),y),1)),1)";
pub const ADD_TEMPLATE: &str = "E(1,E(E(E(1,E(E(1,E(1,E(x,1))),1)),E(y,1)),1))";
pub const NEG_TEMPLATE: &str = "E(E(1,E(E(1,E(1,E(x,1))),1)),E(E(1,1),1))";
pub const INV_TEMPLATE: &str = "E(E(E(1,E(E(1,E(1,x)),1)),E(E(1,1),1)),1)";

#[derive(Debug)]
enum Shape {
    One,
    Hole(usize),
    E(Box<Shape>, Box<Shape>),
}

/// A parsed substitution template with the positions of its holes.
#[derive(Debug)]
pub struct Template {
    shape: Shape,
    holes: Vec<NodePath>,
}

impl Template {
    fn parse(text: &str) -> Template {
        fn go(b: &[u8], i: &mut usize, path: &mut NodePath, holes: &mut Vec<(usize, NodePath)>) -> Shape {
            let c = b[*i];
            *i += 1;
            match c {
                b'1' => Shape::One,
                b'x' | b'y' => {
                    let h = (c - b'x') as usize;
                    holes.push((h, path.clone()));
                    Shape::Hole(h)
                }
                b'E' => {
                    assert_eq!(b[*i], b'(');
                    *i += 1;
                    path.push(Side::Alpha);
                    let a = go(b, i, path, holes);
                    path.pop();
                    assert_eq!(b[*i], b',');
                    *i += 1;
                    path.push(Side::Beta);
                    let bb = go(b, i, path, holes);
                    path.pop();
                    assert_eq!(b[*i], b')');
                    *i += 1;
                    Shape::E(Box::new(a), Box::new(bb))
                }
                _ => panic!("bad template character {}", c as char),
            }
        }
        let mut holes = Vec::new();
        let mut i = 0;
        let shape = go(text.as_bytes(), &mut i, &mut NodePath::root(), &mut holes);
        assert_eq!(i, text.len());
        holes.sort_by_key(|(h, _)| *h);
        Template {
            shape,
            holes: holes.into_iter().map(|(_, p)| p).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.holes.len()
    }

    /// Position of hole `k` (`x` is 0, `y` is 1).
    pub fn hole_path(&self, k: usize) -> &NodePath {
        &self.holes[k]
    }

    pub fn instantiate(&self, args: &[&EmlExpr]) -> EmlExpr {
        assert_eq!(args.len(), self.arity(), "template arity");
        fn go(s: &Shape, args: &[&EmlExpr]) -> EmlExpr {
            match s {
                Shape::One => EmlExpr::One,
                Shape::Hole(h) => args[*h].clone(),
                Shape::E(a, b) => EmlExpr::e(go(a, args), go(b, args)),
            }
        }
        go(&self.shape, args)
    }
}

macro_rules! template {
    ($name:ident, $text:expr) => {
        fn $name() -> &'static Template {
            static T: OnceLock<Template> = OnceLock::new();
            T.get_or_init(|| Template::parse($text))
        }
    };
}

template!(exp_t, EXP_TEMPLATE);
template!(log_t, LOG_TEMPLATE);
template!(mul_t, MUL_TEMPLATE);
template!(add_t, ADD_TEMPLATE);
template!(neg_t, NEG_TEMPLATE);
template!(inv_t, INV_TEMPLATE);

/// Which template a composite is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemplateKind {
    Exp,
    Log,
    Mul,
    Add,
    Neg,
    Inv,
}

impl TemplateKind {
    pub fn template(self) -> &'static Template {
        match self {
            TemplateKind::Exp => exp_t(),
            TemplateKind::Log => log_t(),
            TemplateKind::Mul => mul_t(),
            TemplateKind::Add => add_t(),
            TemplateKind::Neg => neg_t(),
            TemplateKind::Inv => inv_t(),
        }
    }
}

/// `exp(x) = E(x,1)`.
pub fn subst_exp(x: &EmlExpr) -> EmlExpr {
    exp_t().instantiate(&[x])
}

/// `log(x) = E(1,E(E(1,x),1))`.
pub fn subst_log(x: &EmlExpr) -> EmlExpr {
    log_t().instantiate(&[x])
}

/// `0 = E(1,E(E(1,1),1))`.
pub fn subst_zero() -> EmlExpr {
    crate::syntax::parse(ZERO_TEMPLATE).expect("zero template")
}

pub fn subst_mul(x: &EmlExpr, y: &EmlExpr) -> EmlExpr {
    mul_t().instantiate(&[x, y])
}

pub fn subst_add(x: &EmlExpr, y: &EmlExpr) -> EmlExpr {
    add_t().instantiate(&[x, y])
}

pub fn subst_neg(x: &EmlExpr) -> EmlExpr {
    neg_t().instantiate(&[x])
}

pub fn subst_inv(x: &EmlExpr) -> EmlExpr {
    inv_t().instantiate(&[x])
}

/// An EML encoding together with what is known exactly about it.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledExpr {
    pub expr: EmlExpr,
    /// Exact value of the whole expression, when known.
    pub exact: Option<GaussianRational>,
    /// Exact values of subexpressions (including the root when `exact` is
    /// set).
    pub provenance: Provenance,
}

impl CompiledExpr {
    pub fn new(expr: EmlExpr, exact: Option<GaussianRational>, mut provenance: Provenance) -> Self {
        if let Some(v) = &exact {
            provenance.insert(NodePath::root(), v.clone());
        }
        CompiledExpr {
            expr,
            exact,
            provenance,
        }
    }

    fn one() -> Self {
        CompiledExpr::new(EmlExpr::One, Some(GaussianRational::one()), Provenance::new())
    }

    fn zero() -> Self {
        CompiledExpr::new(subst_zero(), Some(GaussianRational::zero()), Provenance::new())
    }

    /// Leaf with a known exact value but no annotated interior.
    pub fn annotated(expr: EmlExpr, exact: GaussianRational) -> Self {
        CompiledExpr::new(expr, Some(exact), Provenance::new())
    }

    /// Drops the root annotation, keeping interior ones.
    pub fn without_root_annotation(mut self) -> Self {
        self.exact = None;
        self.provenance.remove(&NodePath::root());
        self
    }
}

/// Instantiates `kind` with compiled arguments, shifting their provenance
/// under the hole positions. The result carries no root annotation.
pub fn apply_template(kind: TemplateKind, args: &[&CompiledExpr]) -> CompiledExpr {
    let t = kind.template();
    let exprs: Vec<&EmlExpr> = args.iter().map(|a| &a.expr).collect();
    let expr = t.instantiate(&exprs);
    let mut provenance = Provenance::new();
    for (k, a) in args.iter().enumerate() {
        let base = t.hole_path(k);
        for (p, v) in &a.provenance {
            provenance.insert(p.under(base), v.clone());
        }
    }
    CompiledExpr::new(expr, None, provenance)
}

fn with_exact(mut c: CompiledExpr, exact: Option<GaussianRational>) -> CompiledExpr {
    if let Some(v) = exact {
        c.provenance.insert(NodePath::root(), v.clone());
        c.exact = Some(v);
    }
    c
}

/// True when `|q| < pi`, decided exactly for rational `q`.
fn abs_below_pi(q: &BigRational) -> bool {
    let a = q.abs();
    if a < BigRational::from_integer(3.into()) {
        return true;
    }
    if a > BigRational::from_integer(4.into()) {
        return false;
    }
    let mut prec = 64;
    loop {
        let p = elementary::pi(prec);
        if a < p.lo().to_rational() {
            return true;
        }
        if a > p.hi().to_rational() {
            return false;
        }
        // a rational is never equal to pi
        prec *= 2;
    }
}

fn exp_of(x: &CompiledExpr) -> CompiledExpr {
    let exact = x.exact.as_ref().filter(|v| v.is_zero()).map(|_| GaussianRational::one());
    with_exact(apply_template(TemplateKind::Exp, &[x]), exact)
}

fn log_of(x: &CompiledExpr) -> CompiledExpr {
    let exact = x.exact.as_ref().filter(|v| v.is_one()).map(|_| GaussianRational::zero());
    with_exact(apply_template(TemplateKind::Log, &[x]), exact)
}

fn mul_of(x: &CompiledExpr, y: &CompiledExpr) -> CompiledExpr {
    let exact = match (&x.exact, &y.exact) {
        (Some(a), Some(b)) => Some(a.mul(b)),
        _ => None,
    };
    with_exact(apply_template(TemplateKind::Mul, &[x, y]), exact)
}

fn add_of(x: &CompiledExpr, y: &CompiledExpr) -> CompiledExpr {
    // exact only while Im(x+y) stays inside the principal strip
    let exact = match (&x.exact, &y.exact) {
        (Some(a), Some(b)) => Some(a.add(b)).filter(|s| abs_below_pi(&s.im)),
        _ => None,
    };
    with_exact(apply_template(TemplateKind::Add, &[x, y]), exact)
}

fn neg_of(x: &CompiledExpr) -> CompiledExpr {
    let exact = x
        .exact
        .as_ref()
        .filter(|v| abs_below_pi(&v.im))
        .map(GaussianRational::neg);
    with_exact(apply_template(TemplateKind::Neg, &[x]), exact)
}

fn inv_of(x: &CompiledExpr) -> CompiledExpr {
    let exact = x.exact.as_ref().and_then(GaussianRational::inv);
    with_exact(apply_template(TemplateKind::Inv, &[x]), exact)
}

fn two() -> CompiledExpr {
    add_of(&CompiledExpr::one(), &CompiledExpr::one())
}

/// Integer encoding by binary doubling: `2m` is `2 * m` and `2m+1` is
/// `2 * m + 1`, so each bit adds a bounded number of nodes.
fn int_of(n: &BigInt) -> CompiledExpr {
    if n.is_zero() {
        return CompiledExpr::zero();
    }
    if n.is_one() {
        return CompiledExpr::one();
    }
    if n.is_negative() {
        return neg_of(&int_of(&-n));
    }
    let (m, b) = n.div_rem(&BigInt::from(2));
    let even = if m.is_one() { two() } else { mul_of(&two(), &int_of(&m)) };
    if b.is_zero() {
        even
    } else {
        add_of(&even, &CompiledExpr::one())
    }
}

/// `i*pi`, as `-1 * log(-1)`: the log template maps `-1` to `-i*pi`, and the
/// multiplication template is exact on every input.
fn i_pi() -> CompiledExpr {
    let minus_one = neg_of(&CompiledExpr::one());
    mul_of(&minus_one, &log_of(&minus_one))
}

fn const_i() -> &'static CompiledExpr {
    static I: OnceLock<CompiledExpr> = OnceLock::new();
    I.get_or_init(|| {
        let half = inv_of(&two());
        let c = exp_of(&mul_of(&i_pi(), &half));
        with_exact(c, Some(GaussianRational::i()))
    })
}

fn const_pi() -> &'static CompiledExpr {
    static PI: OnceLock<CompiledExpr> = OnceLock::new();
    PI.get_or_init(|| mul_of(&i_pi(), &inv_of(const_i())))
}

/// Compiles a term to pure EML.
pub fn compile(term: &ElTerm) -> CompiledExpr {
    match term {
        ElTerm::Lit1 => CompiledExpr::one(),
        ElTerm::LitInt(n) => int_of(n),
        ElTerm::ConstE => CompiledExpr::new(EmlExpr::euler(), None, Provenance::new()),
        ElTerm::ConstI => const_i().clone(),
        ElTerm::ConstPi => const_pi().clone(),
        ElTerm::Exp(t) => exp_of(&compile(t)),
        ElTerm::Log(t) => log_of(&compile(t)),
        ElTerm::Neg(t) => neg_of(&compile(t)),
        ElTerm::Inv(t) => inv_of(&compile(t)),
        ElTerm::Add(a, b) => add_of(&compile(a), &compile(b)),
        ElTerm::Sub(a, b) => add_of(&compile(a), &neg_of(&compile(b))),
        ElTerm::Mul(a, b) => mul_of(&compile(a), &compile(b)),
        ElTerm::Div(a, b) => mul_of(&compile(a), &inv_of(&compile(b))),
        ElTerm::Pow(a, b) => {
            let base = compile(a);
            let expo = compile(b);
            let c = exp_of(&mul_of(&expo, &log_of(&base)));
            // exp(n log x) = x^n for every branch of log when n is an integer
            let exact = match (&base.exact, expo.exact.as_ref().and_then(GaussianRational::as_integer)) {
                (Some(x), Some(n)) if !x.is_zero() => n
                    .to_i64()
                    .filter(|n| n.unsigned_abs() <= 4096)
                    .and_then(|n| x.pow(n)),
                _ => None,
            };
            with_exact(c, exact)
        }
    }
}

/// Compiles the integer `n`.
pub fn compile_int(n: &BigInt) -> CompiledExpr {
    int_of(n)
}

/// Compiles an exact Gaussian rational as `re + im * i`.
///
/// The addition template only returns the true sum while the imaginary
/// part stays inside the principal strip, so for larger `im` the value is
/// built as `2^j * (re/2^j + (im/2^j) i)` through the always-exact product.
pub fn compile_gaussian(v: &GaussianRational) -> CompiledExpr {
    let part = |q: &BigRational| -> CompiledExpr {
        let n = int_of(q.numer());
        if q.denom().is_one() {
            n
        } else {
            mul_of(&n, &inv_of(&int_of(q.denom())))
        }
    };
    if v.im.is_zero() {
        return part(&v.re);
    }
    let im_term = |im: &BigRational| mul_of(&part(im), const_i());
    if v.re.is_zero() {
        return im_term(&v.im);
    }
    let three = BigRational::from_integer(3.into());
    let mut scale = BigInt::one();
    while v.im.abs() / BigRational::from_integer(scale.clone()) >= three {
        scale <<= 1;
    }
    let s = BigRational::from_integer(scale.clone());
    let w = add_of(&part(&(&v.re / &s)), &im_term(&(&v.im / &s)));
    let c = if scale.is_one() { w } else { mul_of(&int_of(&scale), &w) };
    debug_assert_eq!(c.exact.as_ref(), Some(v));
    c
}
