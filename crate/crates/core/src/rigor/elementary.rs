//! Rigorous real elementary functions on intervals.
//!
//! Every function returns an interval guaranteed to contain the image of
//! its argument. Series are summed in interval arithmetic and closed off
//! with an explicit bound on the truncated tail. The `prec` arguments are
//! significant bits for the output endpoints; internal working precision
//! adds guard bits as required by each argument reduction.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive};

use super::dyadic::{Dyadic, Round};
use super::interval::Interval;

static PI_CACHE: Mutex<Option<(u32, Interval)>> = Mutex::new(None);
static LN2_CACHE: Mutex<Option<(u32, Interval)>> = Mutex::new(None);

fn cached(cache: &Mutex<Option<(u32, Interval)>>, prec: u32, compute: fn(u32) -> Interval) -> Interval {
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some((p, v)) = guard.as_ref() {
        if *p >= prec {
            return v.round(prec);
        }
    }
    let p = prec.div_ceil(256) * 256;
    let v = compute(p);
    *guard = Some((p, v.clone()));
    v.round(prec)
}

fn guard_bits(prec: u32) -> u32 {
    prec + 20
}

fn tiny(w: u32) -> Dyadic {
    Dyadic::pow2(-(i64::from(w) + 2))
}

/// Sum of `x^(2n+1)/(2n+1)` for `n >= 0`, with alternating signs when
/// `alternating` (arctangent) or without (inverse hyperbolic tangent).
/// Requires `|x| <= 1/2`.
fn odd_series(x: &Interval, w: u32, alternating: bool) -> Interval {
    let x2 = x.sqr(w);
    let mut power = x.clone();
    let mut sum = x.clone();
    let eps = tiny(w);
    let mut n: i64 = 1;
    loop {
        power = power.mul(&x2, w);
        let term = power.div_int(2 * n + 1, w);
        let bound = term.mag();
        if bound < eps {
            // alternating: first omitted term bounds the tail; otherwise the
            // tail is a geometric majorant with ratio <= 1/4.
            let tail = if alternating { bound } else { bound.shl(1) };
            return sum.add(&Interval::symmetric(tail), w);
        }
        sum = if alternating && n % 2 == 1 {
            sum.sub(&term, w)
        } else {
            sum.add(&term, w)
        };
        n += 1;
    }
}

fn compute_pi(prec: u32) -> Interval {
    let w = guard_bits(prec);
    let fifth = Interval::one().div_int(5, w);
    let inv239 = Interval::one().div_int(239, w);
    let a = odd_series(&fifth, w, true).shl(4);
    let b = odd_series(&inv239, w, true).shl(2);
    a.sub(&b, w).round(prec)
}

fn compute_ln2(prec: u32) -> Interval {
    let w = guard_bits(prec);
    let third = Interval::one().div_int(3, w);
    odd_series(&third, w, false).shl(1).round(prec)
}

/// Enclosure of pi.
pub fn pi(prec: u32) -> Interval {
    cached(&PI_CACHE, prec, compute_pi)
}

/// Enclosure of ln 2.
pub fn ln2(prec: u32) -> Interval {
    cached(&LN2_CACHE, prec, compute_ln2)
}

fn exp_point(x: &Dyadic, prec: u32) -> Interval {
    if x.is_zero() {
        return Interval::one();
    }
    let t = (prec.sqrt() as i64).max(8);
    let s = (x.magnitude_bits() + t).max(0);
    let w = prec + s as u32 + 24;
    let r = Interval::point(x.shl(-s));
    let mut sum = Interval::one();
    let mut term = Interval::one();
    let eps = tiny(w);
    let mut n = 1;
    loop {
        term = term.mul(&r, w).div_int(n, w);
        let bound = term.mag();
        if bound < eps {
            // |r| < 1/2, so the tail is at most twice the first omitted term
            sum = sum.add(&Interval::symmetric(bound.shl(1)), w);
            break;
        }
        sum = sum.add(&term, w);
        n += 1;
    }
    for _ in 0..s {
        sum = sum.sqr(w);
    }
    sum.round(prec)
}

/// `exp` on an interval; monotone, so evaluated at the endpoints.
pub fn exp(x: &Interval, prec: u32) -> Interval {
    if x.is_point() {
        return exp_point(x.lo(), prec);
    }
    let lo = exp_point(x.lo(), prec);
    let hi = exp_point(x.hi(), prec);
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

fn ln_point(x: &Dyadic, prec: u32) -> Interval {
    assert!(x.is_positive(), "ln of a nonpositive value");
    let k = x.magnitude_bits() - 1;
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let w = prec + kbits + 24;
    let scaled = ln2(w + kbits).mul_int(&BigInt::from(k), w);
    let y = x.shl(-k);
    if y == Dyadic::one() {
        return scaled.round(prec);
    }
    let j = prec.sqrt() / 2 + 2;
    let w = w + j;
    let mut y = Interval::point(y);
    for _ in 0..j {
        y = y.sqrt(w);
    }
    let one = Interval::one();
    let t = y.sub(&one, w).div(&y.add(&one, w), w);
    let lny = odd_series(&t, w, false).shl(i64::from(j) + 1);
    lny.add(&scaled, w).round(prec)
}

/// Natural logarithm of a positive interval.
pub fn ln(x: &Interval, prec: u32) -> Interval {
    assert!(x.is_positive(), "ln of an interval reaching zero or below");
    if x.is_point() {
        return ln_point(x.lo(), prec);
    }
    let lo = ln_point(x.lo(), prec);
    let hi = ln_point(x.hi(), prec);
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

/// Arctangent of an interval inside `[0, 1]`.
fn atan_unit(x: &Interval, prec: u32) -> Interval {
    let j = prec.sqrt() / 2 + 2;
    let w = prec + j + 24;
    let one = Interval::one();
    let mut x = x.clone();
    for _ in 0..j {
        // atan(x) = 2 atan(x / (1 + sqrt(1 + x^2)))
        let root = x.sqr(w).add(&one, w).sqrt(w);
        x = x.div(&root.add(&one, w), w);
    }
    odd_series(&x, w, true).shl(i64::from(j)).round(prec)
}

fn atan_point(x: &Dyadic, prec: u32) -> Interval {
    if x.is_zero() {
        return Interval::zero();
    }
    if x.is_negative() {
        return atan_point(&-x, prec).neg();
    }
    let w = prec + 8;
    if *x <= Dyadic::one() {
        return atan_unit(&Interval::point(x.clone()), w).round(prec);
    }
    let inv = Interval::one().div(&Interval::point(x.clone()), w);
    let inv = inv
        .intersect(&Interval::new(Dyadic::zero(), Dyadic::one()))
        .expect("reciprocal of a value above one");
    pi(w).shl(-1).sub(&atan_unit(&inv, w), w).round(prec)
}

/// Arctangent of an interval; monotone, so evaluated at the endpoints.
pub fn atan(x: &Interval, prec: u32) -> Interval {
    if x.is_point() {
        return atan_point(x.lo(), prec);
    }
    let lo = atan_point(x.lo(), prec);
    let hi = atan_point(x.hi(), prec);
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

/// Taylor series of sine and cosine for `|r| <= 1`.
fn sin_cos_series(r: &Interval, w: u32) -> (Interval, Interval) {
    let r2 = r.sqr(w);
    let eps = tiny(w);

    let mut sin = r.clone();
    let mut term = r.clone();
    let mut n: i64 = 1;
    loop {
        term = term.mul(&r2, w).div_int((2 * n) * (2 * n + 1), w).neg();
        let bound = term.mag();
        if bound < eps {
            sin = sin.add(&Interval::symmetric(bound), w);
            break;
        }
        sin = sin.add(&term, w);
        n += 1;
    }

    let mut cos = Interval::one();
    let mut term = Interval::one();
    let mut n: i64 = 1;
    loop {
        term = term.mul(&r2, w).div_int((2 * n - 1) * (2 * n), w).neg();
        let bound = term.mag();
        if bound < eps {
            cos = cos.add(&Interval::symmetric(bound), w);
            break;
        }
        cos = cos.add(&term, w);
        n += 1;
    }
    (sin, cos)
}

fn sin_cos_point(x: &Dyadic, prec: u32) -> (Interval, Interval) {
    if x.is_zero() {
        return (Interval::zero(), Interval::one());
    }
    let mb = x.magnitude_bits().max(0) as u32;
    let w = prec + 24;
    let wp = w + mb + 8;
    let half_pi = pi(wp).shl(-1);
    let q = Interval::point(x.clone()).div(&half_pi, mb + 32);
    let k: BigInt = (&q.mid() + &Dyadic::pow2(-1)).floor();
    let r = Interval::point(x.clone()).sub(&half_pi.mul_int(&k, wp), wp);
    let (s, c) = sin_cos_series(&r, w);
    let quadrant = (&k % BigInt::from(4)).abs().to_u8().unwrap_or(0);
    let quadrant = if k.is_negative() { (4 - quadrant) % 4 } else { quadrant };
    let (s, c) = match quadrant {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    };
    (s.round(prec), c.round(prec))
}

fn clamp_unit(x: Interval) -> Interval {
    let unit = Interval::new(Dyadic::from_i64(-1), Dyadic::one());
    x.intersect(&unit).unwrap_or(unit)
}

/// Sine and cosine of an interval, from the midpoint values widened by the
/// radius (both functions are 1-Lipschitz).
pub fn sin_cos(x: &Interval, prec: u32) -> (Interval, Interval) {
    if x.is_point() {
        return sin_cos_point(x.lo(), prec);
    }
    let (s, c) = sin_cos_point(&x.mid(), prec + 4);
    let rad = x.radius().round(prec, Round::Up);
    (
        clamp_unit(s.inflate(&rad).round(prec)),
        clamp_unit(c.inflate(&rad).round(prec)),
    )
}
