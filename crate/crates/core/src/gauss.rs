//! Exact Gaussian rationals `re + i im`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        GaussianRational {
            re: BigRational::from_integer(n.into()),
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.im.is_zero() && self.re.is_integer()).then(|| self.re.to_integer())
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussianRational {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussianRational {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn neg(&self) -> Self {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn pow(&self, n: i64) -> Option<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        Some(acc)
    }

    /// The principal argument divided by pi, when it is one of the values
    /// readable exactly off the axes and diagonals.
    pub fn arg_over_pi(&self) -> Option<Ratio<i64>> {
        let zero = BigRational::zero();
        let (re, im) = (&self.re, &self.im);
        let r = |n, d| Some(Ratio::new(n, d));
        if self.is_zero() {
            return None;
        }
        if im.is_zero() {
            return if re > &zero { r(0, 1) } else { r(1, 1) };
        }
        if re.is_zero() {
            return if im > &zero { r(1, 2) } else { r(-1, 2) };
        }
        if re.abs() == im.abs() {
            return match (re > &zero, im > &zero) {
                (true, true) => r(1, 4),
                (true, false) => r(-1, 4),
                (false, true) => r(3, 4),
                (false, false) => r(-3, 4),
            };
        }
        None
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", fmt_rational(&self.im));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{} {} {}i",
            fmt_rational(&self.re),
            sign,
            fmt_rational(&self.im.abs())
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    #[test]
    fn field_ops() {
        assert_eq!(GaussianRational::i().mul(&GaussianRational::i()), g(-1, 0));
        let x = g(3, -4);
        assert_eq!(x.mul(&x.inv().unwrap()), GaussianRational::one());
        assert_eq!(g(2, 0).pow(10).unwrap(), g(1024, 0));
        assert_eq!(g(0, 1).pow(-1).unwrap(), g(0, -1));
        assert!(g(0, 0).inv().is_none());
    }

    #[test]
    fn exact_arguments() {
        assert_eq!(g(-3, 0).arg_over_pi(), Some(Ratio::new(1, 1)));
        assert_eq!(g(0, -2).arg_over_pi(), Some(Ratio::new(-1, 2)));
        assert_eq!(g(-2, 2).arg_over_pi(), Some(Ratio::new(3, 4)));
        assert_eq!(g(1, 2).arg_over_pi(), None);
    }

    #[test]
    fn display() {
        assert_eq!(g(1, -2).to_string(), "1 - 2i");
        assert_eq!(g(0, 1).to_string(), "1i");
        assert_eq!(GaussianRational::new(BigRational::new(1.into(), 3.into()), BigRational::zero()).to_string(), "1/3");
    }
}
