//! Decimal rendering of enclosures that never shows an uncertified digit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::cbox::ComplexBox;
use super::interval::Interval;

fn pow10(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), n as usize)
}

/// `q` rounded to the nearest multiple of `10^-n`, ties away from zero.
fn round_to_digits(q: &BigRational, n: u32) -> BigInt {
    let scaled = q * BigRational::from_integer(pow10(n));
    let twice = (&scaled * BigRational::from_integer(2.into())).abs();
    let t = twice.to_integer();
    let r = (t + 1u8).div_floor(&BigInt::from(2));
    if scaled.is_negative() {
        -r
    } else {
        r
    }
}

fn digits_text(m: &BigInt, n: u32) -> String {
    let neg = m.is_negative();
    let s = m.abs().to_string();
    let n = n as usize;
    let body = if n == 0 {
        s
    } else if s.len() > n {
        format!("{}.{}", &s[..s.len() - n], &s[s.len() - n..])
    } else {
        format!("0.{}{}", "0".repeat(n - s.len()), s)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Largest `n` such that the interval lies within `v +- 10^-n`, where `v`
/// is the midpoint rounded to `n` digits; together with that `v`.
pub fn certified_digits(iv: &Interval) -> (u32, BigInt) {
    let lo = iv.lo().to_rational();
    let hi = iv.hi().to_rational();
    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
    let width = &hi - &lo;
    // a dyadic with exponent -k has exactly k decimal places
    let max_n = (-iv.lo().exponent()).max(-iv.hi().exponent()).max(0) as u32;
    let mut best = (0, round_to_digits(&mid, 0));
    let mut n = 0u32;
    while n <= max_n {
        let ulp = BigRational::new(BigInt::one(), pow10(n));
        // two ulps narrower than the interval: no further n can succeed
        if width > &ulp * BigRational::from_integer(2.into()) {
            break;
        }
        let v = round_to_digits(&mid, n);
        let vq = BigRational::new(v.clone(), pow10(n));
        if lo >= &vq - &ulp && hi <= &vq + &ulp {
            best = (n, v);
        }
        n += 1;
    }
    best
}

/// Upper bound for a nonnegative rational in three-significant-digit
/// scientific notation.
fn sci_upper(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let ten = BigRational::from_integer(10.into());
    let mut e: i64 = 0;
    let mut x = r.clone();
    while x >= ten {
        x /= &ten;
        e += 1;
    }
    while x < BigRational::one() {
        x *= &ten;
        e -= 1;
    }
    let m = (x * BigRational::from_integer(100.into())).ceil().to_integer();
    let (m, e) = if m >= BigInt::from(1000) { (BigInt::from(100), e + 1) } else { (m, e) };
    let s = m.to_string();
    format!("{}.{}e{}", &s[..1], &s[1..], e)
}

/// `midpoint +- radius` with only certified digits in the midpoint.
pub fn format_interval(iv: &Interval) -> String {
    let (n, v) = certified_digits(iv);
    let radius = iv.radius().to_rational();
    format!("{} ± {}", digits_text(&v, n), sci_upper(&radius))
}

/// Every digit of a dyadic rational; the expansion always terminates.
pub fn format_dyadic(d: &super::dyadic::Dyadic) -> String {
    let e = d.exponent();
    if e >= 0 {
        return (d.mantissa() << e as u64).to_string();
    }
    // m / 2^k = m 5^k / 10^k
    let k = (-e) as u32;
    let scaled = d.mantissa() * num_traits::pow(BigInt::from(5), k as usize);
    digits_text(&scaled, k)
}

/// Rendering of a box as `re` or `re + im i`.
pub fn format_box(b: &ComplexBox) -> String {
    if b.im.is_point() && b.im.lo().is_zero() {
        return format_interval(&b.re);
    }
    format!("({}) + ({})i", format_interval(&b.re), format_interval(&b.im))
}

/// Exact dyadic endpoints.
pub fn format_exact(b: &ComplexBox) -> String {
    format!(
        "re ∈ [{}, {}], im ∈ [{}, {}]",
        b.re_lo().to_fraction_string(),
        b.re_hi().to_fraction_string(),
        b.im_lo().to_fraction_string(),
        b.im_hi().to_fraction_string()
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigor::dyadic::Dyadic;

    fn iv(lo: f64, hi: f64) -> Interval {
        let d = |x: f64| Dyadic::from_rational(&BigRational::from_float(x).unwrap(), 200, crate::rigor::Round::Down);
        Interval::new(d(lo), d(hi))
    }

    #[test]
    fn digits() {
        assert_eq!(format_interval(&iv(2.0, 2.0)), "2 ± 0");
        assert_eq!(format_interval(&iv(0.375, 0.375)), "0.375 ± 0");
        let s = format_interval(&iv(3.14159, 3.14160));
        assert!(s.starts_with("3.1416 ± ") || s.starts_with("3.14159 ± "), "{s}");
        let s = format_interval(&iv(-0.26, -0.24));
        assert!(s.starts_with("-0.3 ± 1.01e-2"), "{s}");
    }

    #[test]
    fn never_overclaims() {
        for (lo, hi) in [(0.1, 0.3), (0.999, 1.001), (123.4, 123.9), (-5.0, 5.0)] {
            let i = iv(lo, hi);
            let (n, v) = certified_digits(&i);
            let vq = BigRational::new(v, pow10(n));
            let ulp = BigRational::new(BigInt::one(), pow10(n));
            assert!(i.lo().to_rational() >= &vq - &ulp || n == 0);
            assert!(i.hi().to_rational() <= &vq + &ulp || n == 0);
        }
    }

    #[test]
    fn exact_dyadic_text() {
        assert_eq!(format_dyadic(&Dyadic::new(BigInt::from(-3), -3)), "-0.375");
        assert_eq!(format_dyadic(&Dyadic::new(BigInt::from(5), 2)), "20");
        assert_eq!(format_dyadic(&Dyadic::pow2(-10)), "0.0009765625");
    }

    #[test]
    fn radius_text() {
        assert_eq!(sci_upper(&BigRational::new(1.into(), 3.into())), "3.34e-1");
        assert_eq!(sci_upper(&BigRational::from_integer(1000.into())), "1.00e3");
        assert_eq!(sci_upper(&BigRational::new(9999.into(), 10000.into())), "1.00e0");
    }
}
