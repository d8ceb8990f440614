//! Axis-aligned complex enclosures and the principal-branch operations on
//! them.

use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use super::dyadic::Dyadic;
use super::elementary;
use super::interval::Interval;

/// `exp` refuses arguments whose real part exceeds this in magnitude.
pub const EXP_MAGNITUDE_BOUND_BITS: i64 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BoxError {
    #[error("exp argument real part exceeds 2^{EXP_MAGNITUDE_BOUND_BITS} in magnitude")]
    OverflowGuard,
    #[error("log argument meets the branch cut or zero")]
    CutViolation,
    #[error("value is not a negative real rational")]
    NotNegativeReal,
}

/// Rectangle `[re_lo, re_hi] + i [im_lo, im_hi]` with dyadic corners.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub fn new(re: Interval, im: Interval) -> ComplexBox {
        ComplexBox { re, im }
    }

    pub fn real(re: Interval) -> ComplexBox {
        ComplexBox {
            re,
            im: Interval::zero(),
        }
    }

    pub fn point(re: Dyadic, im: Dyadic) -> ComplexBox {
        ComplexBox {
            re: Interval::point(re),
            im: Interval::point(im),
        }
    }

    pub fn from_i64(v: i64) -> ComplexBox {
        ComplexBox::real(Interval::from_i64(v))
    }

    /// Outward enclosure of `re + i im`.
    pub fn from_rationals(re: &BigRational, im: &BigRational, prec: u32) -> ComplexBox {
        ComplexBox {
            re: Interval::from_rational(re, prec),
            im: Interval::from_rational(im, prec),
        }
    }

    pub fn re_lo(&self) -> &Dyadic {
        self.re.lo()
    }
    pub fn re_hi(&self) -> &Dyadic {
        self.re.hi()
    }
    pub fn im_lo(&self) -> &Dyadic {
        self.im.lo()
    }
    pub fn im_hi(&self) -> &Dyadic {
        self.im.hi()
    }

    /// Larger of the two side lengths.
    pub fn width(&self) -> Dyadic {
        let a = self.re.width();
        let b = self.im.width();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn contains(&self, re: &Dyadic, im: &Dyadic) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_rational(&self, re: &BigRational, im: &BigRational) -> bool {
        self.re.contains_rational(re) && self.im.contains_rational(im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn subset_of(&self, other: &ComplexBox) -> bool {
        self.re.subset_of(&other.re) && self.im.subset_of(&other.im)
    }

    pub fn intersects(&self, other: &ComplexBox) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn inflate(&self, r: &Dyadic) -> ComplexBox {
        ComplexBox {
            re: self.re.inflate(r),
            im: self.im.inflate(r),
        }
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    /// True when the box is disjoint from the closed slit `(-inf, 0]`.
    pub fn avoids_branch_cut(&self) -> bool {
        self.re.is_positive() || self.im.is_positive() || self.im.is_negative()
    }
}

pub fn box_add(a: &ComplexBox, b: &ComplexBox, prec: u32) -> ComplexBox {
    ComplexBox {
        re: a.re.add(&b.re, prec),
        im: a.im.add(&b.im, prec),
    }
}

pub fn box_sub(a: &ComplexBox, b: &ComplexBox, prec: u32) -> ComplexBox {
    ComplexBox {
        re: a.re.sub(&b.re, prec),
        im: a.im.sub(&b.im, prec),
    }
}

pub fn box_mul(a: &ComplexBox, b: &ComplexBox, prec: u32) -> ComplexBox {
    let w = prec + 4;
    let re = a.re.mul(&b.re, w).sub(&a.im.mul(&b.im, w), prec);
    let im = a.re.mul(&b.im, w).add(&a.im.mul(&b.re, w), prec);
    ComplexBox { re, im }
}

fn check_exp_bound(re: &Interval) -> Result<(), BoxError> {
    if re.mag() > Dyadic::pow2(EXP_MAGNITUDE_BOUND_BITS) {
        Err(BoxError::OverflowGuard)
    } else {
        Ok(())
    }
}

/// `exp(re)` as an interval, for callers that know the argument is real.
pub fn real_exp(re: &Interval, prec: u32) -> Result<Interval, BoxError> {
    check_exp_bound(re)?;
    Ok(elementary::exp(re, prec))
}

/// `exp(re + i im) = e^re (cos im + i sin im)`.
pub fn box_exp(a: &ComplexBox, prec: u32) -> Result<ComplexBox, BoxError> {
    check_exp_bound(&a.re)?;
    let w = prec + 4;
    let modulus = elementary::exp(&a.re, w);
    if a.im.is_point() && a.im.lo().is_zero() {
        return Ok(ComplexBox::real(modulus.round(prec)));
    }
    let (s, c) = elementary::sin_cos(&a.im, w);
    Ok(ComplexBox {
        re: modulus.mul(&c, prec),
        im: modulus.mul(&s, prec),
    })
}

/// Argument of the single point `x + i y`, assumed off `(-inf, 0]`.
fn arg_point(x: &Dyadic, y: &Dyadic, prec: u32) -> Interval {
    let w = prec + 4;
    let xi = Interval::point(x.clone());
    let yi = Interval::point(y.clone());
    if x.is_positive() {
        if y.is_zero() {
            return Interval::zero();
        }
        return elementary::atan(&yi.div(&xi, w), prec);
    }
    // x <= 0 and y != 0
    let half_pi = elementary::pi(w).shl(-1);
    let t = elementary::atan(&xi.div(&yi, w), w);
    if y.is_positive() {
        half_pi.sub(&t, prec)
    } else {
        half_pi.neg().sub(&t, prec)
    }
}

/// Principal logarithm of a box disjoint from `(-inf, 0]`.
///
/// The real part is `ln |z|` over the range of `|z|^2`. For the imaginary
/// part, a box that is small next to its distance from 0 uses the argument
/// at the centre widened by `radius / min |z|` (the gradient of `arg` has
/// size `1/|z|`); otherwise the hull over the four corners, which bounds
/// the argument on the whole rectangle once the slit is excluded.
pub fn box_log(a: &ComplexBox, prec: u32) -> Result<ComplexBox, BoxError> {
    if !a.avoids_branch_cut() {
        return Err(BoxError::CutViolation);
    }
    let w = prec + 8;
    let modsq = a.re.sqr(w).add(&a.im.sqr(w), w);
    let re = elementary::ln(&modsq, w).shl(-1).round(prec);
    let lo_abs = Interval::point(a.re.mig()).sqr(w).add(&Interval::point(a.im.mig()).sqr(w), w);
    let min_abs = lo_abs.lo().sqrt(w, super::dyadic::Round::Down);
    let radius = &a.re.radius() + &a.im.radius();
    let small = !radius.is_zero() && radius.shl(12) <= min_abs;
    let im = if radius.is_zero() {
        arg_point(a.re_lo(), a.im_lo(), prec)
    } else if small {
        let (xm, ym) = (a.re.mid(), a.im.mid());
        let slope = radius.div(&min_abs, w, super::dyadic::Round::Up);
        arg_point(&xm, &ym, prec).inflate(&slope).round(prec)
    } else {
        let mut im: Option<Interval> = None;
        for x in [a.re_lo(), a.re_hi()] {
            for y in [a.im_lo(), a.im_hi()] {
                let t = arg_point(x, y, prec);
                im = Some(match im {
                    None => t,
                    Some(h) => h.hull(&t),
                });
            }
        }
        im.expect("four corners")
    };
    Ok(ComplexBox { re, im })
}

/// `ln |b| + i pi` for an exact negative rational `b`.
pub fn box_log_negative_real(b: &BigRational, prec: u32) -> Result<ComplexBox, BoxError> {
    if !b.is_negative() {
        return Err(BoxError::NotNegativeReal);
    }
    let w = prec + 8;
    let num = Interval::point(Dyadic::from_int(b.numer().abs()));
    let den = Interval::point(Dyadic::from_int(b.denom().clone()));
    let re = elementary::ln(&num, w).sub(&elementary::ln(&den, w), prec);
    Ok(ComplexBox {
        re,
        im: pi_box(prec).re,
    })
}

/// Real-axis box containing pi, of width at most `2^(1-prec)`.
pub fn pi_box(prec: u32) -> ComplexBox {
    ComplexBox::real(elementary::pi(prec + 4))
}

/// Rounded enclosure of a box at `prec` bits.
pub fn box_round(a: &ComplexBox, prec: u32) -> ComplexBox {
    ComplexBox {
        re: a.re.round(prec),
        im: a.im.round(prec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn in_box(b: &ComplexBox, re: f64, im: f64, tol: f64) -> bool {
        b.re_lo().to_f64() - tol <= re
            && re <= b.re_hi().to_f64() + tol
            && b.im_lo().to_f64() - tol <= im
            && im <= b.im_hi().to_f64() + tol
    }

    #[test]
    fn subtraction_cases() {
        let d = box_sub(&ComplexBox::from_i64(3), &ComplexBox::from_i64(1), 32);
        assert_eq!(d, ComplexBox::from_i64(2));
        let a = ComplexBox::new(
            Interval::new(Dyadic::from_i64(1), Dyadic::from_i64(2)),
            Interval::zero(),
        );
        assert!(box_sub(&a, &a, 32).contains_zero());
    }

    #[test]
    fn multiplication_by_i() {
        let p = 40;
        let a = ComplexBox::real(Interval::new(Dyadic::one(), &Dyadic::one() + &Dyadic::pow2(-p)));
        let i = ComplexBox::point(Dyadic::zero(), Dyadic::one());
        let m = box_mul(&a, &i, 64);
        assert!(m.contains(&Dyadic::zero(), &Dyadic::one()));
        assert!(m.width() <= Dyadic::pow2(-p));
        assert_eq!(m.re, Interval::zero());
    }

    #[test]
    fn exp_examples() {
        let p = 64;
        let one = box_exp(&ComplexBox::from_i64(0), p).unwrap();
        assert!(one.contains(&Dyadic::one(), &Dyadic::zero()));
        assert!(one.width() <= Dyadic::pow2(1 - i64::from(p)));
        let e = box_exp(&ComplexBox::from_i64(1), p).unwrap();
        assert!(in_box(&e, std::f64::consts::E, 0.0, 1e-15));
        let ipi = ComplexBox::new(Interval::zero(), pi_box(100).re);
        let m1 = box_exp(&ipi, 90).unwrap();
        assert!(m1.contains(&Dyadic::from_i64(-1), &Dyadic::zero()));
        let huge = ComplexBox::real(Interval::point(Dyadic::pow2(21)));
        assert_eq!(box_exp(&huge, 64), Err(BoxError::OverflowGuard));
    }

    #[test]
    fn log_examples() {
        let z = box_log(&ComplexBox::from_i64(1), 64).unwrap();
        assert!(z.contains(&Dyadic::zero(), &Dyadic::zero()));
        let e = box_exp(&ComplexBox::from_i64(1), 120).unwrap();
        let one = box_log(&e, 100).unwrap();
        assert!(one.contains(&Dyadic::one(), &Dyadic::zero()));
        let straddle = ComplexBox::new(
            Interval::from_i64(-2),
            Interval::new(Dyadic::from_i64(-1), Dyadic::one()),
        );
        assert_eq!(box_log(&straddle, 64), Err(BoxError::CutViolation));
        assert_eq!(box_log(&ComplexBox::from_i64(0), 64), Err(BoxError::CutViolation));
        assert!(box_log(&ComplexBox::from_i64(-1), 64).is_err());
        let q = box_log(&ComplexBox::point(Dyadic::from_i64(-1), Dyadic::one()), 80).unwrap();
        assert!(in_box(&q, 2f64.sqrt().ln(), 0.75 * std::f64::consts::PI, 1e-15));
        let q = box_log(&ComplexBox::point(Dyadic::from_i64(-1), Dyadic::from_i64(-1)), 80).unwrap();
        assert!(in_box(&q, 2f64.sqrt().ln(), -0.75 * std::f64::consts::PI, 1e-15));
    }

    #[test]
    fn log_on_negative_reals() {
        let l = box_log_negative_real(&rat(-1, 1), 64).unwrap();
        assert!(in_box(&l, 0.0, std::f64::consts::PI, 1e-17));
        assert!(l.re.contains(&Dyadic::zero()));
        let l = box_log_negative_real(&rat(-1, 2), 64).unwrap();
        assert!(in_box(&l, -std::f64::consts::LN_2, std::f64::consts::PI, 1e-15));
        assert_eq!(box_log_negative_real(&rat(3, 1), 64), Err(BoxError::NotNegativeReal));
    }

    #[test]
    fn pi_box_contract() {
        let p = pi_box(10);
        assert!(p.re_lo().to_f64() >= 3.140 && p.re_hi().to_f64() <= 3.143);
        assert!(pi_box(64).width() <= Dyadic::pow2(-63));
        for prec in [16u32, 40, 100] {
            let outer = pi_box(prec).inflate(&Dyadic::pow2(-i64::from(prec)));
            assert!(pi_box(prec + 1).subset_of(&outer));
        }
    }
}
