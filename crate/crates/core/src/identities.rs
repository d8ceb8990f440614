//! Numerical check of the substitution templates against direct
//! arithmetic on seeded random samples.
//!
//! Each sample is an exact Gaussian rational on a 1/16 grid. Its encoding
//! is annotated with that exact value, so only the template body is
//! evaluated and the comparison isolates the template itself.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::el::{apply_template, compile_gaussian, TemplateKind};
use crate::gauss::GaussianRational;
use crate::rigor::cbox::{self, ComplexBox};
use crate::rigor::{eval, Dyadic, EvalLimits, EvalOutcome};

pub const DEFAULT_SEED: u64 = u64::from_be_bytes(*b"\0EML5EED");
pub const DEFAULT_SAMPLES: usize = 200;
pub const TOLERANCE_BITS: u32 = 40;

const REF_BITS: u32 = 160;

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub name: &'static str,
    pub domain: &'static str,
    pub samples: usize,
    pub passed: usize,
    /// A few failing samples, for display.
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.passed == self.samples
    }
}

fn grid(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-64i64..=64)), BigInt::from(16))
}

fn sample(rng: &mut ChaCha8Rng, accept: impl Fn(&GaussianRational) -> bool) -> GaussianRational {
    loop {
        let z = GaussianRational::new(grid(rng), grid(rng));
        if accept(&z) {
            return z;
        }
    }
}

/// A rational just below pi.
fn below_pi() -> BigRational {
    BigRational::new(314.into(), 100.into())
}

fn in_strip(q: &BigRational) -> bool {
    let b = below_pi();
    *q < b && *q > -b
}

fn exact_box(v: &GaussianRational) -> ComplexBox {
    ComplexBox::from_rationals(&v.re, &v.im, REF_BITS)
}

/// Largest distance between a point of `a` and a point of `b`, per axis.
fn spread(a: &ComplexBox, b: &ComplexBox) -> Dyadic {
    let d = |x: &crate::rigor::Interval, y: &crate::rigor::Interval| {
        let u = x.hi() - y.lo();
        let v = y.hi() - x.lo();
        if u > v {
            u
        } else {
            v
        }
    };
    let r = d(&a.re, &b.re);
    let i = d(&a.im, &b.im);
    if r > i {
        r
    } else {
        i
    }
}

fn limits() -> EvalLimits {
    EvalLimits::new(TOLERANCE_BITS + 8)
}

/// Evaluates a template applied to exactly annotated arguments.
pub fn eval_template(kind: TemplateKind, args: &[&GaussianRational], lim: &EvalLimits) -> EvalOutcome {
    let enc: Vec<_> = args.iter().map(|v| compile_gaussian(v)).collect();
    let refs: Vec<_> = enc.iter().collect();
    let c = apply_template(kind, &refs);
    eval(&c.expr, Some(&c.provenance), lim)
}

fn agrees(got: &EvalOutcome, want: &ComplexBox) -> Result<(), String> {
    match got {
        EvalOutcome::Value(b) => {
            let s = spread(b, want);
            if s <= Dyadic::pow2(-(TOLERANCE_BITS as i64)) {
                Ok(())
            } else {
                Err(format!("off by {:e}", s.to_f64()))
            }
        }
        other => Err(format!("{other:?}")),
    }
}

/// `got - want` lies within tolerance of `2 pi i k` for some integer
/// `k != 0`.
fn shifted(got: &EvalOutcome, want: &ComplexBox) -> Result<(), String> {
    let b = got.value().ok_or_else(|| format!("{got:?}"))?;
    let diff = cbox::box_sub(b, want, REF_BITS);
    let two_pi = cbox::pi_box(REF_BITS).re.shl(1);
    let k = diff.im.mid().to_f64() / two_pi.mid().to_f64();
    let k = k.round() as i64;
    if k == 0 {
        return Err("no branch shift".into());
    }
    let shift = ComplexBox::new(crate::rigor::Interval::zero(), two_pi.mul_int(&k.into(), REF_BITS));
    let tol = Dyadic::pow2(-(TOLERANCE_BITS as i64));
    if spread(&diff, &shift) <= tol {
        Ok(())
    } else {
        Err(format!("not a multiple of 2 pi i (k = {k})"))
    }
}

struct Case {
    name: &'static str,
    domain: &'static str,
    run: fn(&mut ChaCha8Rng, &EvalLimits) -> Result<(), String>,
}

fn nonzero(z: &GaussianRational) -> bool {
    !z.is_zero()
}

fn cases() -> Vec<Case> {
    vec![
        Case {
            name: "mul",
            domain: "x, y nonzero",
            run: |rng, lim| {
                let x = sample(rng, nonzero);
                let y = sample(rng, nonzero);
                agrees(&eval_template(TemplateKind::Mul, &[&x, &y], lim), &exact_box(&x.mul(&y)))
            },
        },
        Case {
            name: "inv",
            domain: "x nonzero",
            run: |rng, lim| {
                let x = sample(rng, nonzero);
                agrees(&eval_template(TemplateKind::Inv, &[&x], lim), &exact_box(&x.inv().expect("nonzero")))
            },
        },
        Case {
            name: "add",
            domain: "|Im(x+y)| < pi",
            run: |rng, lim| {
                let x = sample(rng, nonzero);
                let y = sample(rng, |y| nonzero(y) && in_strip(&(&x.im + &y.im)));
                agrees(&eval_template(TemplateKind::Add, &[&x, &y], lim), &exact_box(&x.add(&y)))
            },
        },
        Case {
            name: "neg",
            domain: "|Im x| < pi",
            run: |rng, lim| {
                let x = sample(rng, |x| nonzero(x) && in_strip(&x.im));
                agrees(&eval_template(TemplateKind::Neg, &[&x], lim), &exact_box(&x.neg()))
            },
        },
        Case {
            name: "log",
            domain: "x off (-inf, 0]",
            run: |rng, lim| {
                let x = sample(rng, |x| nonzero(x) && !x.is_negative_real());
                let want = cbox::box_log(&exact_box(&x), REF_BITS).map_err(|e| e.to_string())?;
                agrees(&eval_template(TemplateKind::Log, &[&x], lim), &want)
            },
        },
        Case {
            name: "exp",
            domain: "all x",
            run: |rng, lim| {
                let x = sample(rng, |_| true);
                let want = cbox::box_exp(&exact_box(&x), REF_BITS).map_err(|e| e.to_string())?;
                agrees(&eval_template(TemplateKind::Exp, &[&x], lim), &want)
            },
        },
        Case {
            name: "add (outside strip)",
            domain: "|Im(x+y)| > pi: off by 2 pi i k",
            run: |rng, lim| {
                let x = sample(rng, |x| x.im > BigRational::from_integer(2.into()));
                let y = sample(rng, |y| {
                    let s = &x.im + &y.im;
                    s > BigRational::from_integer(4.into())
                });
                shifted(&eval_template(TemplateKind::Add, &[&x, &y], lim), &exact_box(&x.add(&y)))
            },
        },
        Case {
            name: "neg (outside strip)",
            domain: "|Im x| > pi: off by 2 pi i k",
            run: |rng, lim| {
                let x = sample(rng, |x| x.im.abs() > BigRational::new(13.into(), 4.into()));
                shifted(&eval_template(TemplateKind::Neg, &[&x], lim), &exact_box(&x.neg()))
            },
        },
    ]
}

/// Runs every identity on `samples` samples drawn from `seed`.
pub fn run_suite(seed: u64, samples: usize) -> Vec<IdentityReport> {
    let lim = limits();
    cases()
        .into_iter()
        .enumerate()
        .map(|(i, case)| {
            // one stream per identity, so the sample count of one does not
            // shift the samples of another
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut passed = 0;
            let mut failures = Vec::new();
            for n in 0..samples {
                match (case.run)(&mut rng, &lim) {
                    Ok(()) => passed += 1,
                    Err(e) if failures.len() < 3 => failures.push(format!("sample {n}: {e}")),
                    Err(_) => {}
                }
            }
            IdentityReport {
                name: case.name,
                domain: case.domain,
                samples,
                passed,
                failures,
            }
        })
        .collect()
}
