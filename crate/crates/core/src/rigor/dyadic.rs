//! Exact dyadic rationals `mantissa * 2^exponent` with directed rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// A dyadic rational in canonical form: the mantissa is odd, or the value
/// is zero with exponent zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

fn floor_shr(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    if m.sign() != Sign::Minus {
        m >> s
    } else {
        let mask = (BigInt::one() << s) - 1u32;
        -((-m + mask) >> s)
    }
}

fn shr_rounded(m: &BigInt, s: u64, dir: Round) -> BigInt {
    match dir {
        Round::Down => floor_shr(m, s),
        Round::Up => -floor_shr(&-m, s),
    }
}

fn div_rounded(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => n.div_floor(d),
        Round::Up => -((-n).div_floor(d)),
    }
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Dyadic {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Dyadic {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_int(v: BigInt) -> Dyadic {
        Dyadic::new(v, 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Dyadic {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Smallest `t` with `|self| < 2^t`; `i64::MIN` for zero.
    pub fn magnitude_bits(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.mantissa.bits() as i64 + self.exponent
        }
    }

    /// Multiplication by `2^k`, exact.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    /// Rounds to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mantissa.bits();
        let prec = u64::from(prec.max(1));
        if bits <= prec {
            return self.clone();
        }
        let s = bits - prec;
        Dyadic::new(shr_rounded(&self.mantissa, s, dir), self.exponent + s as i64)
    }

    /// `self / other` rounded to `prec` bits. Panics on division by zero.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = i64::from(prec.max(1)) + other.mantissa.bits() as i64
            - self.mantissa.bits() as i64
            + 2;
        let shift = want.max(0);
        let num = &self.mantissa << shift as u64;
        let q = div_rounded(&num, &other.mantissa, dir);
        Dyadic::new(q, self.exponent - other.exponent - shift).round(prec, dir)
    }

    /// Square root of a nonnegative value rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut m = self.mantissa.clone();
        let mut e = self.exponent;
        if e.rem_euclid(2) == 1 {
            m <<= 1u32;
            e -= 1;
        }
        let need = 2 * i64::from(prec.max(1)) + 4 - m.bits() as i64;
        let mut shift = need.max(0);
        if shift % 2 == 1 {
            shift += 1;
        }
        let scaled = m << shift as u64;
        let mut r = scaled.sqrt();
        if dir == Round::Up && &r * &r != scaled {
            r += 1u32;
        }
        Dyadic::new(r, (e - shift) / 2).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            floor_shr(&self.mantissa, (-self.exponent) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as u64,
            )
        }
    }

    /// Directed rounding of a rational to `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Dyadic {
        let n = Dyadic::from_int(q.numer().clone());
        let d = Dyadic::from_int(q.denom().clone());
        n.div(&d, prec, dir)
    }

    /// Nearest `f64`, up to double rounding; for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&self.mantissa >> drop as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exponent + drop;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Midpoint of two dyadics, exact.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).shl(-1)
    }

    /// Exact fraction text, e.g. `3/8`, `-5`, or `7/2^200` for large
    /// denominators.
    pub fn to_fraction_string(&self) -> String {
        if self.exponent >= 0 {
            return self.floor().to_string();
        }
        let k = -self.exponent;
        if k <= 128 {
            format!("{}/{}", self.mantissa, BigInt::one() << k as u64)
        } else {
            format!("{}/2^{}", self.mantissa, k)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 || self.is_zero() {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}*2^{}", self.mantissa, self.exponent)
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ma, mb) = (self.magnitude_bits(), other.magnitude_bits());
        if ma != mb {
            let by_mag = ma.cmp(&mb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &rhs.mantissa << (rhs.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_i64(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn canonical_form() {
        let x = d(12, 0);
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 2);
        assert_eq!(d(0, 17), Dyadic::zero());
    }

    #[test]
    fn directed_rounding() {
        // 7 = 111b rounded to 2 bits
        assert_eq!(d(7, 0).round(2, Round::Down), d(6, 0));
        assert_eq!(d(7, 0).round(2, Round::Up), d(8, 0));
        assert_eq!(d(-7, 0).round(2, Round::Down), d(-8, 0));
        assert_eq!(d(-7, 0).round(2, Round::Up), d(-6, 0));
    }

    #[test]
    fn division_brackets() {
        let one = Dyadic::one();
        let three = d(3, 0);
        let lo = one.div(&three, 64, Round::Down);
        let hi = one.div(&three, 64, Round::Up);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!(hi.to_rational() - lo.to_rational() < d(1, -64).to_rational());
    }

    #[test]
    fn sqrt_brackets() {
        let two = d(2, 0);
        let lo = two.sqrt(80, Round::Down);
        let hi = two.sqrt(80, Round::Up);
        assert!(&lo * &lo < two && two < &hi * &hi);
        assert_eq!(d(9, 4).sqrt(10, Round::Up), d(3, 2));
    }

    #[test]
    fn fractions() {
        assert_eq!(d(3, -3).to_fraction_string(), "3/8");
        assert_eq!(d(-5, 0).to_fraction_string(), "-5");
    }

    proptest! {
        #[test]
        fn ordering_matches_rationals(a in -1000i64..1000, ea in -40i64..40, b in -1000i64..1000, eb in -40i64..40) {
            let x = d(a, ea);
            let y = d(b, eb);
            prop_assert_eq!(x.cmp(&y), x.to_rational().cmp(&y.to_rational()));
            prop_assert_eq!((&x + &y).to_rational(), x.to_rational() + y.to_rational());
            prop_assert_eq!((&x * &y).to_rational(), x.to_rational() * y.to_rational());
        }

        #[test]
        fn rounding_is_directed(m in any::<i64>(), e in -64i64..64, p in 1u32..70) {
            let x = d(m, e);
            prop_assert!(x.round(p, Round::Down) <= x);
            prop_assert!(x.round(p, Round::Up) >= x);
        }
    }
}
