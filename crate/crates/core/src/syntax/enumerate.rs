//! Bijection between the naturals and EML expressions.
//!
//! Expressions are ordered by number of `E` nodes. Inside the class of
//! size `k`, `E(a,b)` trees are grouped by the size of `a`, largest first;
//! within a group the order is lexicographic on (class-local index of `a`,
//! class-local index of `b`).

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::EmlExpr;

/// Lazily grown table of Catalan numbers.
struct Catalan(Vec<BigUint>);

impl Catalan {
    fn new() -> Self {
        Catalan(vec![BigUint::one()])
    }

    fn get(&mut self, k: usize) -> &BigUint {
        while self.0.len() <= k {
            let n = self.0.len() - 1;
            // C(n+1) = C(n) * 2(2n+1) / (n+2)
            let next = self.0[n].clone() * BigUint::from(2 * (2 * n + 1)) / BigUint::from(n + 2);
            self.0.push(next);
        }
        &self.0[k]
    }
}

/// The `k`-th Catalan number.
pub fn catalan(k: usize) -> BigUint {
    Catalan::new().get(k).clone()
}

/// Number of expressions with exactly `k` `E` nodes.
pub fn class_size(k: usize) -> BigUint {
    catalan(k)
}

/// Index of `expr` in the enumeration.
pub fn rank(expr: &EmlExpr) -> BigUint {
    let mut cat = Catalan::new();
    let (k, local) = local_rank(expr, &mut cat);
    let mut offset = BigUint::zero();
    for c in 0..k {
        offset += cat.get(c);
    }
    offset + local
}

fn local_rank(expr: &EmlExpr, cat: &mut Catalan) -> (usize, BigUint) {
    match expr {
        EmlExpr::One => (0, BigUint::zero()),
        EmlExpr::E(a, b) => {
            let (i, ra) = local_rank(a, cat);
            let (j, rb) = local_rank(b, cat);
            let k = i + j + 1;
            // groups with a larger alpha come first
            let mut idx = BigUint::zero();
            for left in (i + 1..k).rev() {
                idx += cat.get(left).clone() * cat.get(k - 1 - left);
            }
            idx += ra * cat.get(j) + rb;
            (k, idx)
        }
    }
}

/// The expression with index `n`.
pub fn unrank(n: &BigUint) -> EmlExpr {
    let mut cat = Catalan::new();
    let mut rest = n.clone();
    let mut k = 0;
    loop {
        let size = cat.get(k).clone();
        if rest < size {
            break;
        }
        rest -= size;
        k += 1;
    }
    local_unrank(k, rest, &mut cat)
}

fn local_unrank(k: usize, mut idx: BigUint, cat: &mut Catalan) -> EmlExpr {
    if k == 0 {
        return EmlExpr::One;
    }
    for left in (0..k).rev() {
        let right = k - 1 - left;
        let cr = cat.get(right).clone();
        let size = cat.get(left).clone() * &cr;
        if idx < size {
            let (ra, rb) = idx.div_rem(&cr);
            let a = local_unrank(left, ra, cat);
            let b = local_unrank(right, rb, cat);
            return EmlExpr::e(a, b);
        }
        idx -= size;
    }
    unreachable!("index exceeds class size")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn first_ranks() {
        assert_eq!(unrank(&u(0)), EmlExpr::One);
        assert_eq!(unrank(&u(1)).render(), "E(1,1)");
        assert_eq!(unrank(&u(2)).render(), "E(E(1,1),1)");
        assert_eq!(unrank(&u(3)).render(), "E(1,E(1,1))");
        assert_eq!(rank(&EmlExpr::One), u(0));
        assert_eq!(rank(&EmlExpr::euler()), u(1));
    }

    #[test]
    fn catalan_values() {
        let expect = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012];
        for (k, c) in expect.iter().enumerate() {
            assert_eq!(catalan(k), u(*c));
        }
    }

    #[test]
    fn ordering_is_by_size() {
        let mut last = 0;
        for n in 0..2000u64 {
            let k = unrank(&u(n)).e_count();
            assert!(k >= last);
            last = k;
        }
    }

    #[test]
    fn large_round_trip() {
        let t = parse("E(E(E(1,1),E(1,E(1,1))),E(1,E(E(1,1),1)))").unwrap();
        assert_eq!(unrank(&rank(&t)), t);
        let n = u(4096);
        assert_eq!(rank(&unrank(&n)), n);
        let big = BigUint::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        assert_eq!(rank(&unrank(&big)), big);
    }
}
