//! Closed real intervals with dyadic endpoints and outward rounding.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Round};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Interval {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_i64(v: i64) -> Interval {
        Interval::point(Dyadic::from_i64(v))
    }

    pub fn zero() -> Interval {
        Interval::from_i64(0)
    }

    pub fn one() -> Interval {
        Interval::from_i64(1)
    }

    /// Outward-rounded enclosure of a rational.
    pub fn from_rational(q: &BigRational, prec: u32) -> Interval {
        if q.is_integer() {
            return Interval::point(Dyadic::from_int(q.to_integer()));
        }
        Interval {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
        }
    }

    /// `[-r, r]`.
    pub fn symmetric(r: Dyadic) -> Interval {
        let r = r.abs();
        Interval { lo: -&r, hi: r }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    /// Half the width, exact.
    pub fn radius(&self) -> Dyadic {
        self.width().shl(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Dyadic {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            self.hi.abs()
        }
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| Interval {
            lo: lo.clone(),
            hi: hi.clone(),
        })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if self.lo < other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi > other.hi { &self.hi } else { &other.hi };
        Interval {
            lo: lo.clone(),
            hi: hi.clone(),
        }
    }

    /// Widens both ends by `r >= 0`.
    pub fn inflate(&self, r: &Dyadic) -> Interval {
        Interval {
            lo: &self.lo - r,
            hi: &self.hi + r,
        }
    }

    pub fn round(&self, prec: u32) -> Interval {
        Interval {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, other: &Interval, prec: u32) -> Interval {
        Interval {
            lo: (&self.lo + &other.lo).round(prec, Round::Down),
            hi: (&self.hi + &other.hi).round(prec, Round::Up),
        }
    }

    pub fn sub(&self, other: &Interval, prec: u32) -> Interval {
        Interval {
            lo: (&self.lo - &other.hi).round(prec, Round::Down),
            hi: (&self.hi - &other.lo).round(prec, Round::Up),
        }
    }

    pub fn mul(&self, other: &Interval, prec: u32) -> Interval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().expect("nonempty");
        let hi = cands.iter().max().expect("nonempty");
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
        }
    }

    pub fn sqr(&self, prec: u32) -> Interval {
        let lo = self.mig();
        let hi = self.mag();
        Interval {
            lo: (&lo * &lo).round(prec, Round::Down),
            hi: (&hi * &hi).round(prec, Round::Up),
        }
    }

    /// Exact scaling by `2^k`.
    pub fn shl(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo.shl(k),
            hi: self.hi.shl(k),
        }
    }

    pub fn mul_int(&self, n: &BigInt, prec: u32) -> Interval {
        self.mul(&Interval::point(Dyadic::from_int(n.clone())), prec)
    }

    /// Panics if `other` contains zero.
    pub fn div(&self, other: &Interval, prec: u32) -> Interval {
        assert!(!other.contains_zero(), "interval division by an interval containing zero");
        let (a, b) = (&self.lo, &self.hi);
        let (c, d) = (&other.lo, &other.hi);
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (n, m) in [(a, c), (a, d), (b, c), (b, d)] {
            let l = n.div(m, prec, Round::Down);
            let h = n.div(m, prec, Round::Up);
            if lo.as_ref().is_none_or(|x| &l < x) {
                lo = Some(l);
            }
            if hi.as_ref().is_none_or(|x| &h > x) {
                hi = Some(h);
            }
        }
        Interval {
            lo: lo.expect("four candidates"),
            hi: hi.expect("four candidates"),
        }
    }

    pub fn div_int(&self, n: i64, prec: u32) -> Interval {
        self.div(&Interval::from_i64(n), prec)
    }

    /// Panics on negative input.
    pub fn sqrt(&self, prec: u32) -> Interval {
        assert!(!self.lo.is_negative(), "sqrt of an interval with negative part");
        Interval {
            lo: self.lo.sqrt(prec, Round::Down),
            hi: self.hi.sqrt(prec, Round::Up),
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}
