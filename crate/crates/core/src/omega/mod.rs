//! Lower bounds on the halting probability of a toy prefix-free machine by
//! dovetailing, and halting decisions read off a prefix of that probability.
//!
//! The toy probabilities here are computable; the point is the enumeration
//! mechanics, not any non-computability claim.

pub mod machines;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::rigor::Dyadic;
pub use machines::{gamma_decode, gamma_encode, gamma_len, machine_by_name, machine_names, EvenCountdown, GammaCollatz, Step, ToyMachine};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaltRecord {
    pub program: String,
    pub payload: u64,
    pub steps: u64,
}

/// Exact lower bound after one more halt.
#[derive(Clone, Debug)]
pub struct OmegaBound {
    pub mass: Dyadic,
    log: Arc<Vec<HaltRecord>>,
    len: usize,
    /// Dovetail round in which the latest halt happened.
    pub dovetail_steps: u64,
}

impl OmegaBound {
    /// Programs halted so far, in order of halting.
    pub fn halted(&self) -> &[HaltRecord] {
        &self.log[..self.len]
    }

    pub fn latest(&self) -> &HaltRecord {
        &self.log[self.len - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("code {0} is a proper prefix of code {1}")]
    PrefixViolation(String, String),
    #[error("prefix {0:?} is not a nonempty bit string")]
    BadPrefix(String),
    #[error("accumulated mass {mass} exceeds the bound {bound} allowed by the prefix")]
    InconsistentPrefix { mass: String, bound: String },
    #[error("dovetail budget of {budget} rounds exhausted at mass {mass}, needed {needed}")]
    BudgetExhausted { budget: u64, mass: String, needed: String },
}

/// Kraft sum over all valid codes of length at most `max_len`, after
/// checking that no code is a prefix of another.
pub fn kraft_check(machine: &dyn ToyMachine, max_len: u32) -> Result<Dyadic, OmegaError> {
    let mut codes = machine.codes_up_to(max_len);
    codes.sort();
    // in sorted order a prefix sits right before some string extending it
    for w in codes.windows(2) {
        if w[1].starts_with(w[0].as_str()) {
            return Err(OmegaError::PrefixViolation(w[0].clone(), w[1].clone()));
        }
    }
    let mut sum = Dyadic::zero();
    for c in &codes {
        sum = &sum + &Dyadic::pow2(-(c.len() as i64));
    }
    Ok(sum)
}

/// Halts that happen within `budget` rounds, in schedule order.
///
/// Round `r` admits program `r` and then gives one step to each admitted
/// program still running, so program `j` takes its `s`-th step in round
/// `j + s - 1`.
fn halt_events(machine: &dyn ToyMachine, budget: u64) -> Vec<(u64, HaltRecord)> {
    let mut ev = Vec::new();
    for j in 1..=budget {
        let payload = machine.nth_payload(j);
        if let Some(s) = machine.halts_within(payload, budget - j + 1) {
            ev.push((
                j + s - 1,
                HaltRecord {
                    program: machine.nth_program(j),
                    payload,
                    steps: s,
                },
            ));
        }
    }
    // stable: programs halting in the same round appear in admission order
    ev.sort_by_key(|(round, _)| *round);
    ev
}

/// Fair dovetailing for `budget` rounds; one bound per halt.
pub fn dovetail(machine: &dyn ToyMachine, budget: u64) -> Vec<OmegaBound> {
    assert!(budget >= 1, "budget must be positive");
    let events = halt_events(machine, budget);
    let rounds: Vec<u64> = events.iter().map(|(r, _)| *r).collect();
    let log = Arc::new(events.into_iter().map(|(_, h)| h).collect::<Vec<_>>());
    let mut mass = Dyadic::zero();
    let mut out = Vec::with_capacity(log.len());
    for (i, h) in log.iter().enumerate() {
        mass = &mass + &Dyadic::pow2(-(h.program.len() as i64));
        out.push(OmegaBound {
            mass: mass.clone(),
            log: Arc::clone(&log),
            len: i + 1,
            dovetail_steps: rounds[i],
        });
    }
    out
}

/// How the supplied bits relate to the true halting probability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrefixReading {
    /// The bits are the leading binary digits: value <= omega < value + 2^-n.
    #[default]
    Truncated,
    /// The bits spell omega exactly.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Halts { steps: u64 },
    Loops,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub reading: PrefixReading,
    /// Decide programs up to this length; defaults to the prefix length.
    pub max_len: Option<u32>,
    pub budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            reading: PrefixReading::Truncated,
            max_len: None,
            budget: 1 << 22,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub verdicts: BTreeMap<String, Verdict>,
    /// Mass at the moment the decision was made.
    pub mass: Dyadic,
    pub dovetail_steps: u64,
}

fn bits_value(bits: &str) -> Result<Dyadic, OmegaError> {
    if bits.is_empty() || !bits.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(OmegaError::BadPrefix(bits.to_string()));
    }
    let m = BigInt::parse_bytes(bits.as_bytes(), 2).expect("binary digits");
    Ok(Dyadic::new(m, -(bits.len() as i64)))
}

/// Decides halting for every valid program of length at most the chosen
/// bound from a prefix of the halting probability.
///
/// Once the mass is close enough to the probability that a single further
/// halt of a short program would overshoot it, every short program still
/// running never halts.
pub fn halting_from_omega_prefix(machine: &dyn ToyMachine, omega_bits: &str, opts: &SolveOptions) -> Result<Solution, OmegaError> {
    let v = bits_value(omega_bits)?;
    let n = omega_bits.len() as u32;
    let max_len = opts.max_len.unwrap_or(n);
    let q = Dyadic::pow2(-(max_len as i64));
    let (upper, resolved): (Dyadic, Box<dyn Fn(&Dyadic) -> bool>) = match opts.reading {
        PrefixReading::Truncated => {
            let hi = &v + &Dyadic::pow2(-(n as i64));
            let need = &hi - &q;
            (hi, Box::new(move |m: &Dyadic| *m >= need))
        }
        PrefixReading::Exact => {
            let need = &v - &q;
            (v.clone(), Box::new(move |m: &Dyadic| *m > need))
        }
    };
    let finish = |mass: Dyadic, halted: &[HaltRecord], steps: u64| {
        let mut verdicts: BTreeMap<String, Verdict> = machine
            .codes_up_to(max_len)
            .into_iter()
            .map(|c| (c, Verdict::Loops))
            .collect();
        for h in halted {
            if let Some(slot) = verdicts.get_mut(&h.program) {
                *slot = Verdict::Halts { steps: h.steps };
            }
        }
        Solution {
            verdicts,
            mass,
            dovetail_steps: steps,
        }
    };
    let zero = Dyadic::zero();
    if resolved(&zero) {
        return Ok(finish(zero, &[], 0));
    }
    // schedules for smaller budgets are prefixes of larger ones
    let mut budget = opts.budget.min(1 << 12);
    let mut mass = Dyadic::zero();
    loop {
        let bounds = dovetail(machine, budget);
        for b in &bounds {
            let over = match opts.reading {
                PrefixReading::Truncated => b.mass >= upper,
                PrefixReading::Exact => b.mass > upper,
            };
            if over {
                return Err(OmegaError::InconsistentPrefix {
                    mass: b.mass.to_fraction_string(),
                    bound: upper.to_fraction_string(),
                });
            }
            if resolved(&b.mass) {
                return Ok(finish(b.mass.clone(), b.halted(), b.dovetail_steps));
            }
        }
        if let Some(b) = bounds.last() {
            mass = b.mass.clone();
        }
        if budget >= opts.budget {
            break;
        }
        budget = budget.saturating_mul(4).min(opts.budget);
    }
    let needed = &upper - &q;
    Err(OmegaError::BudgetExhausted {
        budget: opts.budget,
        mass: mass.to_fraction_string(),
        needed: needed.to_fraction_string(),
    })
}
