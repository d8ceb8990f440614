//! Toy prefix-free machines over Elias-gamma program codes.
//!
//! These are deliberately not universal. Their halting sets are simple, and
//! for the even-countdown machine the halting probability is exactly 1/4,
//! which makes it a ground truth for the dovetailing code.

/// Elias-gamma code of `n >= 1`: `floor(log2 n)` zeros, then `n` in binary.
pub fn gamma_encode(n: u64) -> String {
    assert!(n >= 1, "gamma code needs a positive payload");
    let bin = format!("{n:b}");
    format!("{}{}", "0".repeat(bin.len() - 1), bin)
}

/// Inverse of [`gamma_encode`] on complete codes; `None` for anything else.
pub fn gamma_decode(bits: &str) -> Option<u64> {
    let zeros = bits.bytes().take_while(|&b| b == b'0').count();
    let rest = &bits[zeros..];
    if rest.len() != zeros + 1 || zeros >= 64 || !rest.bytes().all(|b| b == b'0' || b == b'1') {
        return None;
    }
    u64::from_str_radix(rest, 2).ok()
}

pub fn gamma_len(n: u64) -> u32 {
    2 * (63 - n.leading_zeros()) + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Continue(u128),
    Halt,
}

pub trait ToyMachine: Send + Sync {
    fn name(&self) -> &'static str;

    fn decode(&self, bits: &str) -> Option<u64> {
        gamma_decode(bits)
    }

    /// Program admitted in dovetail round `r` (from 1).
    fn nth_program(&self, r: u64) -> String {
        gamma_encode(r)
    }

    /// Payload of program `r`.
    fn nth_payload(&self, r: u64) -> u64 {
        r
    }

    fn start(&self, payload: u64) -> u128;

    /// One step; `step_index` counts from 1.
    fn step(&self, payload: u64, state: u128, step_index: u64) -> Step;

    /// Steps needed to halt, if at most `max_steps`.
    fn halts_within(&self, payload: u64, max_steps: u64) -> Option<u64> {
        let mut s = self.start(payload);
        for i in 1..=max_steps {
            match self.step(payload, s, i) {
                Step::Halt => return Some(i),
                Step::Continue(t) => s = t,
            }
        }
        None
    }

    /// The exact halting probability, when it is known in closed form.
    fn known_omega(&self) -> Option<(u64, u64)> {
        None
    }

    /// All valid codes of length at most `max_len`, shortest first.
    fn codes_up_to(&self, max_len: u32) -> Vec<String> {
        let mut out = Vec::new();
        let mut n = 1u64;
        while n < u64::MAX && gamma_len(n) <= max_len {
            out.push(gamma_encode(n));
            n += 1;
        }
        out
    }
}

/// Payload `n`; state counts down by two; halts on reaching 0, so even
/// payloads halt after `n/2` steps and odd ones spin at 1 forever.
pub struct EvenCountdown;

impl ToyMachine for EvenCountdown {
    fn name(&self) -> &'static str {
        "even-countdown"
    }

    fn start(&self, payload: u64) -> u128 {
        payload as u128
    }

    fn step(&self, _payload: u64, state: u128, _step_index: u64) -> Step {
        match state {
            2 => Step::Halt,
            1 => Step::Continue(1),
            m => Step::Continue(m - 2),
        }
    }

    /// Even payloads of gamma length `2k+1` number `2^(k-1)` and each weighs
    /// `2^-(2k+1)`, so block `k` contributes `2^-(k+2)` and the total is 1/4.
    fn known_omega(&self) -> Option<(u64, u64)> {
        Some((1, 4))
    }

    fn halts_within(&self, payload: u64, max_steps: u64) -> Option<u64> {
        let s = payload / 2;
        (payload.is_multiple_of(2) && s <= max_steps).then_some(s)
    }
}

/// Payload `n` runs the Collatz map and halts on reaching 1.
pub struct GammaCollatz;

impl ToyMachine for GammaCollatz {
    fn name(&self) -> &'static str {
        "gamma-collatz"
    }

    fn start(&self, payload: u64) -> u128 {
        payload as u128
    }

    fn step(&self, _payload: u64, state: u128, _step_index: u64) -> Step {
        if state == 1 {
            return Step::Halt;
        }
        if state.is_multiple_of(2) {
            return Step::Continue(state / 2);
        }
        // an orbit leaving u128 is treated as running forever
        match state.checked_mul(3).and_then(|t| t.checked_add(1)) {
            Some(t) => Step::Continue(t),
            None => Step::Continue(state),
        }
    }
}

pub fn machine_names() -> &'static [&'static str] {
    &["even-countdown", "gamma-collatz"]
}

pub fn machine_by_name(name: &str) -> Option<Box<dyn ToyMachine>> {
    match name {
        "even-countdown" => Some(Box::new(EvenCountdown)),
        "gamma-collatz" => Some(Box::new(GammaCollatz)),
        _ => None,
    }
}
