//! The reference evaluator agrees with published constants.

mod common;

use common::{f64_of, to_rational, Oracle};
use eml::syntax::parse;
use num_rational::BigRational;
use num_traits::Signed;

const E_DIGITS: &str = "2.71828182845904523536028747135266249775724709369995";

fn decimal(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap();
    let den = num_traits::pow(num_bigint::BigInt::from(10), frac.len());
    BigRational::new(format!("{int}{frac}").parse().unwrap(), den)
}

#[test]
fn euler_number() {
    let mut o = Oracle::new(256);
    let v = o.eval(&parse("E(1,1)").unwrap()).unwrap();
    let err = (to_rational(&v.re) - decimal(E_DIGITS)).abs();
    assert!(err < BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), 49)));
    assert_eq!(f64_of(&v.im), 0.0);
}

#[test]
fn zero_and_branch_cut() {
    let mut o = Oracle::new(256);
    let z = o.eval(&parse("E(1,E(E(1,1),1))").unwrap()).unwrap();
    assert!(f64_of(&z.re).abs() < 1e-60);
    // log(-1) through the template is -i pi; log of an exact -1 is +i pi
    let minus_one = o.c_rational(&BigRational::from_integer((-1).into()), &BigRational::from_integer(0.into()));
    let t = o.eval_template(eml::el::compile::LOG_TEMPLATE, &[minus_one.clone()]).unwrap();
    assert!((f64_of(&t.im) + std::f64::consts::PI).abs() < 1e-12);
    let l = o.log(&minus_one).unwrap();
    assert!((f64_of(&l.im) - std::f64::consts::PI).abs() < 1e-12);
    assert!(o.log(&o.one().clone()).is_some());
}

#[test]
fn mul_template() {
    let mut o = Oracle::new(192);
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let x = o.c_rational(&q(-58, 16), &q(-47, 16));
    let y = o.c_rational(&q(-41, 16), &q(-53, 16));
    let r = o.eval_template(eml::el::compile::MUL_TEMPLATE, &[x, y]).unwrap();
    assert!((f64_of(&r.re) + 0.44140625).abs() < 1e-12);
    assert!((f64_of(&r.im) - 19.53515625).abs() < 1e-12);
}
