mod common;

use common::{box_holds, to_rational, Oracle, C};
use eml::el::{apply_template, compile_gaussian, compile_int, subst_zero, CompiledExpr, TemplateKind};
use eml::rigor::cbox::{box_exp, box_log, box_log_negative_real, box_mul, box_sub, pi_box};
use eml::rigor::{eval, eval_compiled, BoxError, ComplexBox, Dyadic, EvalLimits, EvalOutcome, Interval};
use eml::syntax::{parse, unrank};
use eml::{EmlExpr, GaussianRational, NodePath};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pt(n: i64) -> ComplexBox {
    ComplexBox::from_i64(n)
}

#[test]
fn box_arithmetic() {
    assert!(box_sub(&pt(3), &pt(1), 64).contains_rational(&q(2, 1), &q(0, 1)));
    let a = ComplexBox::new(Interval::new(Dyadic::from_i64(1), &Dyadic::one() + &Dyadic::pow2(-64)), Interval::from_i64(2));
    assert!(box_sub(&a, &a, 64).contains_zero());
    let thin = ComplexBox::real(Interval::new(Dyadic::one(), &Dyadic::one() + &Dyadic::pow2(-64)));
    let i = ComplexBox::point(Dyadic::zero(), Dyadic::one());
    let p = box_mul(&thin, &i, 64);
    assert!(p.contains_rational(&q(0, 1), &q(1, 1)));
    assert!(p.width() <= Dyadic::pow2(-63));
}

#[test]
fn exp_and_log_boxes() {
    let one = box_exp(&pt(0), 64).unwrap();
    assert!(one.contains_rational(&q(1, 1), &q(0, 1)));
    assert!(one.width() <= Dyadic::pow2(-63));

    let mut o = Oracle::new(256);
    let e = o.exp(&o.one());
    assert!(box_holds(&box_exp(&pt(1), 128).unwrap(), &e, 300));

    let ipi = ComplexBox::new(Interval::zero(), pi_box(128).re);
    assert!(box_exp(&ipi, 128).unwrap().contains_rational(&q(-1, 1), &q(0, 1)));

    assert!(box_log(&pt(1), 64).unwrap().contains_zero());
    let e_box = box_exp(&pt(1), 128).unwrap();
    assert!(box_log(&e_box, 128).unwrap().contains_rational(&q(1, 1), &q(0, 1)));

    let straddle = ComplexBox::new(Interval::from_i64(-1), Interval::new(-Dyadic::pow2(-10), Dyadic::pow2(-10)));
    assert_eq!(box_log(&straddle, 64), Err(BoxError::CutViolation));
}

#[test]
fn negative_real_log() {
    let mut o = Oracle::new(256);
    let pi = o.pi();
    let b = box_log_negative_real(&q(-1, 1), 128).unwrap();
    assert!(box_holds(&b, &C { re: o.int(0), im: pi.clone() }, 300));
    let half = o.c_rational(&q(1, 2), &q(0, 1));
    let ln_half = o.log(&half).unwrap();
    let b = box_log_negative_real(&q(-1, 2), 128).unwrap();
    assert!(box_holds(&b, &C { re: ln_half.re, im: pi }, 300));
    assert_eq!(box_log_negative_real(&q(1, 2), 64), Err(BoxError::NotNegativeReal));
}

#[test]
fn pi_enclosures() {
    let p10 = pi_box(10);
    assert!(p10.re_lo().to_rational() >= q(3140, 1000) && p10.re_hi().to_rational() <= q(3143, 1000));
    assert!(pi_box(64).width() <= Dyadic::pow2(-63));
    let pi = to_rational(&Oracle::new(512).pi());
    let mut prev = pi_box(8);
    for p in [16, 32, 64, 128, 256] {
        let b = pi_box(p);
        assert!(b.re.contains_rational(&pi));
        assert!(b.width() <= prev.width());
        prev = b;
    }
}

#[test]
fn evaluator_examples() {
    let lim = EvalLimits::new(64);
    let e = eval(&EmlExpr::euler(), None, &lim);
    let b = e.value().unwrap();
    assert!(b.width() <= Dyadic::pow2(-64));
    let want = Oracle::eval_converged(&EmlExpr::euler(), 200).unwrap();
    assert!(box_holds(b, &want, 300));

    let zero = eval(&subst_zero(), None, &lim);
    assert!(zero.value().unwrap().contains_zero());

    let c = CompiledExpr::annotated(subst_zero(), GaussianRational::zero());
    let mut prov = std::collections::BTreeMap::new();
    for (p, v) in &c.provenance {
        prov.insert(p.under(&NodePath::root().beta()), v.clone());
    }
    let expr = EmlExpr::e(EmlExpr::One, subst_zero());
    match eval(&expr, Some(&prov), &lim) {
        EvalOutcome::UndefinedAt { path, .. } => assert_eq!(path, NodePath::root().beta()),
        other => panic!("{other:?}"),
    }

    // e - log(-1) = e - i pi through the negative-real case
    let minus_one = compile_int(&BigInt::from(-1));
    let mut prov = std::collections::BTreeMap::new();
    for (p, v) in &minus_one.provenance {
        prov.insert(p.under(&NodePath::root().beta()), v.clone());
    }
    let expr = EmlExpr::e(EmlExpr::One, minus_one.expr.clone());
    let b = eval(&expr, Some(&prov), &lim).value().cloned().unwrap();
    let mut o = Oracle::new(256);
    let want = C { re: o.exp(&o.one()).re, im: o.pi().neg() };
    assert!(box_holds(&b, &want, 300));
}

#[test]
fn compiled_examples() {
    let lim = EvalLimits::new(40);
    let six = eval_compiled(&compile_int(&BigInt::from(6)), &lim);
    assert!(six.value().unwrap().contains_rational(&q(6, 1), &q(0, 1)));
    let third = apply_template(TemplateKind::Inv, &[&compile_int(&BigInt::from(3))]);
    let b = eval_compiled(&third, &lim).value().cloned().unwrap();
    assert!(b.contains_rational(&q(1, 3), &q(0, 1)));
    let log0 = apply_template(TemplateKind::Log, &[&compile_gaussian(&GaussianRational::zero())]);
    assert!(matches!(eval_compiled(&log0, &lim), EvalOutcome::UndefinedAt { .. }));
}

#[test]
fn width_contract_and_determinism() {
    for n in [1u32, 5, 17, 40, 99, 250] {
        let e = unrank(&BigUint::from(n));
        for k in [8, 33, 90] {
            let a = eval(&e, None, &EvalLimits::new(k));
            let b = eval(&e, None, &EvalLimits::new(k));
            assert_eq!(a, b);
            if let EvalOutcome::Value(v) = a {
                assert!(v.width() <= Dyadic::pow2(-(k as i64)), "rank {n} k {k}");
            }
        }
    }
}

#[test]
fn soundness_on_small_ranks() {
    let mut checked = 0;
    for n in 0u32..150 {
        let e = unrank(&BigUint::from(n));
        let out = eval(&e, None, &EvalLimits::new(40));
        match &out {
            EvalOutcome::Value(b) => {
                let v = Oracle::eval_converged(&e, 160).expect("oracle defined where a value is returned");
                assert!(box_holds(b, &v, 200), "{}", e.render());
                checked += 1;
            }
            // no annotations, so an exact zero can only show up as undecided
            EvalOutcome::UndefinedAt { .. } => panic!("undefined without annotations: {}", e.render()),
            EvalOutcome::BranchUndecided { .. } => {}
        }
    }
    assert!(checked > 80, "{checked}");
}

#[test]
fn deep_chain_does_not_overflow_the_stack() {
    // exp(exp(...exp(1)...)) would explode, so nest on the log side instead
    let mut e = EmlExpr::One;
    for _ in 0..400 {
        e = EmlExpr::e(EmlExpr::One, EmlExpr::e(e, EmlExpr::One));
    }
    let out = eval(&e, None, &EvalLimits::new(16));
    assert!(matches!(out, EvalOutcome::Value(_) | EvalOutcome::BranchUndecided { .. }));
    assert!(parse(&e.render()).is_ok());
}
