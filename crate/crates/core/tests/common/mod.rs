//! Reference evaluator for tests: plain high-precision floating point on
//! the principal branch, independent of the crate's interval code.
#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use eml::rigor::ComplexBox;
use eml::EmlExpr;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug)]
pub struct C {
    pub re: BigFloat,
    pub im: BigFloat,
}

pub struct Oracle {
    pub p: usize,
    cc: Consts,
}

pub fn to_rational(x: &BigFloat) -> BigRational {
    let (words, n, sign, e, _) = match x.as_raw_parts() {
        Some(parts) => parts,
        None => panic!("oracle produced a non-finite value"),
    };
    let mut m = BigInt::zero();
    for w in words.iter().rev() {
        m = (m << 64) + BigInt::from(*w);
    }
    if m.is_zero() {
        return BigRational::zero();
    }
    let shift = e as i64 - n as i64;
    let v = if shift >= 0 {
        BigRational::from_integer(m << shift as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-shift) as usize)
    };
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

impl Oracle {
    pub fn new(p: usize) -> Oracle {
        Oracle {
            p,
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.p)
    }

    pub fn rational(&mut self, q: &BigRational) -> BigFloat {
        let mut parse = |n: &BigInt| BigFloat::parse(&n.to_string(), Radix::Dec, self.p + 64, RM, &mut self.cc);
        let (n, d) = (parse(q.numer()), parse(q.denom()));
        n.div(&d, self.p, RM)
    }

    pub fn c_rational(&mut self, re: &BigRational, im: &BigRational) -> C {
        C {
            re: self.rational(re),
            im: self.rational(im),
        }
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    pub fn exp(&mut self, z: &C) -> C {
        let p = self.p;
        let m = z.re.exp(p, RM, &mut self.cc);
        C {
            re: m.mul(&z.im.cos(p, RM, &mut self.cc), p, RM),
            im: m.mul(&z.im.sin(p, RM, &mut self.cc), p, RM),
        }
    }

    /// Magnitude below which a floating component is treated as an exact
    /// zero that rounding has disturbed.
    fn noise(&self, scale: &BigFloat) -> BigFloat {
        let eps = BigFloat::from_f64(2f64.powi(-(self.p as i32) / 2), self.p);
        let one = BigFloat::from_u64(1, self.p);
        eps.mul(&scale.abs().max(&one), self.p, RM)
    }

    /// Principal logarithm; `None` when the argument is (numerically) zero.
    pub fn log(&mut self, z: &C) -> Option<C> {
        let p = self.p;
        let mut im = z.im.clone();
        // a value that is exactly on the negative axis in exact arithmetic
        // picks up rounding noise here; snap it back onto the axis
        if z.re.is_negative() && im.abs().cmp(&self.noise(&z.re)).is_some_and(|c| c < 0) {
            im = BigFloat::from_u64(0, p);
        }
        let r2 = z.re.mul(&z.re, p, RM).add(&im.mul(&im, p, RM), p, RM);
        let tiny = BigFloat::from_f64(2f64.powi(-(p as i32) / 2), p);
        if r2.cmp(&tiny).is_some_and(|c| c < 0) {
            return None;
        }
        let re = r2.ln(p, RM, &mut self.cc).div(&BigFloat::from_u64(2, p), p, RM);
        let pi = self.pi();
        let half_pi = pi.div(&BigFloat::from_u64(2, p), p, RM);
        let arg = if z.re.is_zero() {
            if im.is_negative() {
                half_pi.neg()
            } else {
                half_pi
            }
        } else {
            let t = im.div(&z.re, p, RM).atan(p, RM, &mut self.cc);
            if z.re.is_positive() {
                t
            } else if im.is_negative() {
                t.sub(&pi, p, RM)
            } else {
                t.add(&pi, p, RM)
            }
        };
        Some(C { re, im: arg })
    }

    pub fn sub(&self, a: &C, b: &C) -> C {
        C {
            re: a.re.sub(&b.re, self.p, RM),
            im: a.im.sub(&b.im, self.p, RM),
        }
    }

    /// `exp(a) - log(b)`.
    pub fn eml(&mut self, a: &C, b: &C) -> Option<C> {
        let l = self.log(b)?;
        let e = self.exp(a);
        Some(self.sub(&e, &l))
    }

    pub fn one(&self) -> C {
        C {
            re: self.int(1),
            im: self.int(0),
        }
    }

    pub fn eval(&mut self, e: &EmlExpr) -> Option<C> {
        match e.children() {
            None => Some(self.one()),
            Some((a, b)) => {
                let va = self.eval(a)?;
                let vb = self.eval(b)?;
                self.eml(&va, &vb)
            }
        }
    }

    /// Evaluates at doubling precision until two successive results agree
    /// to within `2^-agree_bits`.
    pub fn eval_converged(e: &EmlExpr, agree_bits: u32) -> Option<C> {
        let tol = BigRational::new(BigInt::one(), BigInt::one() << agree_bits as usize);
        let mut p = 256;
        let mut prev = Oracle::new(p).eval(e)?;
        while p < 1 << 15 {
            p *= 2;
            let next = Oracle::new(p).eval(e)?;
            let d = |a: &BigFloat, b: &BigFloat| (to_rational(a) - to_rational(b)).abs();
            if d(&prev.re, &next.re) <= tol && d(&prev.im, &next.im) <= tol {
                return Some(next);
            }
            prev = next;
        }
        panic!("oracle did not converge for {}", e.render());
    }

    /// Evaluates template text over `1`, `E(.,.)` and holes `x`, `y`.
    pub fn eval_template(&mut self, text: &str, holes: &[C]) -> Option<C> {
        fn go(o: &mut Oracle, b: &[u8], i: &mut usize, holes: &[C]) -> Option<C> {
            let c = b[*i];
            *i += 1;
            match c {
                b'1' => Some(o.one()),
                b'x' => Some(holes[0].clone()),
                b'y' => Some(holes[1].clone()),
                b'E' => {
                    *i += 1;
                    let a = go(o, b, i, holes);
                    *i += 1;
                    let bb = go(o, b, i, holes);
                    *i += 1;
                    o.eml(&a?, &bb?)
                }
                _ => panic!("unexpected {}", c as char),
            }
        }
        let mut i = 0;
        go(self, text.as_bytes(), &mut i, holes)
    }
}

/// True when `v` lies in `b` widened by `2^-slack_bits`.
pub fn box_holds(b: &ComplexBox, v: &C, slack_bits: u32) -> bool {
    let slack = BigRational::new(BigInt::one(), BigInt::one() << slack_bits as usize);
    let re = to_rational(&v.re);
    let im = to_rational(&v.im);
    let inside = |lo: BigRational, hi: BigRational, x: &BigRational| lo - &slack <= *x && *x <= hi + &slack;
    inside(b.re_lo().to_rational(), b.re_hi().to_rational(), &re) && inside(b.im_lo().to_rational(), b.im_hi().to_rational(), &im)
}

/// Largest axis distance between `v` and the box centre.
pub fn distance_to_mid(b: &ComplexBox, v: &C) -> BigRational {
    let dr = (to_rational(&v.re) - b.re.mid().to_rational()).abs();
    let di = (to_rational(&v.im) - b.im.mid().to_rational()).abs();
    if dr > di {
        dr
    } else {
        di
    }
}

pub fn f64_of(x: &BigFloat) -> f64 {
    use num_traits::ToPrimitive;
    to_rational(x).to_f64().unwrap_or(f64::NAN)
}
