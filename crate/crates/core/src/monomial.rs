//! Packed monomials and monomial orders.
//!
//! A monomial stores up to eight exponents, one byte each. Every exponent and the
//! total degree stay below 128, which keeps byte-parallel comparisons exact.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 8;
pub const MAX_DEGREE: u32 = 127;

const HIGH: u64 = 0x8080_8080_8080_8080;
const ONES: u64 = 0x0101_0101_0101_0101;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::Unsupported(format!(
                "at most {MAX_VARS} variables, got {}",
                exps.len()
            )));
        }
        let total: u32 = exps.iter().sum();
        if total > MAX_DEGREE {
            return Err(Error::DegreeOverflow(MAX_DEGREE));
        }
        let mut v = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            v |= (e as u64) << (8 * i);
        }
        Ok(Monomial(v))
    }

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS);
        Monomial(1u64 << (8 * i))
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        assert!(i < MAX_VARS && e <= MAX_DEGREE);
        Monomial((e as u64) << (8 * i))
    }

    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xff) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0.wrapping_mul(ONES) >> 56) as u32
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn raw(self) -> u64 {
        self.0
    }

    /// Product. Panics if the total degree would exceed the packed range.
    #[inline]
    pub fn mul(self, other: Self) -> Self {
        assert!(
            self.degree() + other.degree() <= MAX_DEGREE,
            "monomial degree overflow"
        );
        Monomial(self.0 + other.0)
    }

    pub fn checked_mul(self, other: Self) -> Option<Self> {
        (self.degree() + other.degree() <= MAX_DEGREE).then(|| Monomial(self.0 + other.0))
    }

    /// `self | other`
    #[inline]
    pub fn divides(self, other: Self) -> bool {
        ((other.0 | HIGH).wrapping_sub(self.0) & HIGH) == HIGH
    }

    #[inline]
    pub fn div(self, divisor: Self) -> Option<Self> {
        divisor.divides(self).then(|| Monomial(self.0 - divisor.0))
    }

    #[inline]
    fn ge_mask(a: u64, b: u64) -> u64 {
        // byte lane is 0xff where a >= b
        let m = ((a | HIGH).wrapping_sub(b) & HIGH) >> 7;
        m.wrapping_mul(0xff)
    }

    #[inline]
    pub fn lcm(self, other: Self) -> Self {
        let m = Self::ge_mask(self.0, other.0);
        Monomial((self.0 & m) | (other.0 & !m))
    }

    #[inline]
    pub fn gcd(self, other: Self) -> Self {
        let m = Self::ge_mask(self.0, other.0);
        Monomial((other.0 & m) | (self.0 & !m))
    }

    pub fn is_coprime(self, other: Self) -> bool {
        self.gcd(other).is_one()
    }

    /// Permute variables: exponent of variable `i` moves to `perm[i]`.
    pub fn permute(self, perm: &[usize]) -> Self {
        let mut v = 0u64;
        for (i, &p) in perm.iter().enumerate() {
            v |= (self.exponent(i) as u64) << (8 * p);
        }
        Monomial(v)
    }

    /// All monomials of total degree `d` in `nvars` variables, in descending grevlex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::ONE);
            }
            return out;
        }
        let mut exps = vec![0u32; nvars];
        fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == exps.len() {
                exps[i] = left;
                out.push(Monomial::from_exponents(exps).expect("degree in range"));
                return;
            }
            for e in (0..=left).rev() {
                exps[i] = e;
                rec(i + 1, left - e, exps, out);
            }
        }
        if d <= MAX_DEGREE {
            rec(0, d, &mut exps, &mut out);
        }
        let ord = MonomialOrder::grevlex();
        out.sort_by(|a, b| ord.cmp(*b, *a));
        out
    }

    pub fn count_of_degree(nvars: usize, d: u32) -> usize {
        binomial((d as usize) + nvars - 1, nvars - 1)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{:?}", self.exponents(MAX_VARS))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    #[default]
    Grevlex,
    Grlex,
}

/// Graded monomial order with an optional relabelling of the variables.
///
/// `perm[i]` is the position variable `i` takes before the plain order is applied,
/// so under grevlex the variable sent to the highest position is the cheapest one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    perm: Option<Vec<usize>>,
}

impl MonomialOrder {
    pub fn grevlex() -> Self {
        MonomialOrder { kind: OrderKind::Grevlex, perm: None }
    }

    pub fn grlex() -> Self {
        MonomialOrder { kind: OrderKind::Grlex, perm: None }
    }

    pub fn with_permutation(kind: OrderKind, perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[p] = true;
        }
        let identity = perm.iter().enumerate().all(|(i, &p)| i == p);
        Ok(MonomialOrder { kind, perm: (!identity).then_some(perm) })
    }

    pub fn is_default(&self) -> bool {
        self.kind == OrderKind::Grevlex && self.perm.is_none()
    }

    #[inline]
    pub fn cmp(&self, a: Monomial, b: Monomial) -> Ordering {
        let (a, b) = match &self.perm {
            None => (a, b),
            Some(p) => (a.permute(p), b.permute(p)),
        };
        match a.degree().cmp(&b.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        if a.0 == b.0 {
            return Ordering::Equal;
        }
        match self.kind {
            OrderKind::Grevlex => {
                // the last differing exponent decides, smaller exponent wins
                let x = a.0 ^ b.0;
                let byte = (63 - x.leading_zeros()) / 8;
                let ea = (a.0 >> (8 * byte)) & 0xff;
                let eb = (b.0 >> (8 * byte)) & 0xff;
                eb.cmp(&ea)
            }
            OrderKind::Grlex => {
                let x = a.0 ^ b.0;
                let byte = x.trailing_zeros() / 8;
                let ea = (a.0 >> (8 * byte)) & 0xff;
                let eb = (b.0 >> (8 * byte)) & 0xff;
                ea.cmp(&eb)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn basic_ops() {
        let a = m(&[2, 0, 1]);
        let b = m(&[1, 3, 0]);
        assert_eq!(a.degree(), 3);
        assert_eq!(a.lcm(b), m(&[2, 3, 1]));
        assert_eq!(a.gcd(b), m(&[1, 0, 0]));
        assert!(m(&[1, 0, 1]).divides(a));
        assert!(!b.divides(a));
        assert_eq!(a.div(m(&[2, 0, 0])), Some(m(&[0, 0, 1])));
        assert!(m(&[0, 0, 5]).is_coprime(m(&[3, 1, 0])));
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::grevlex();
        // x^2 > xy > y^2 > xz > yz > z^2
        let seq = [m(&[2, 0, 0]), m(&[1, 1, 0]), m(&[0, 2, 0]), m(&[1, 0, 1]), m(&[0, 1, 1]), m(&[0, 0, 2])];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(w[0], w[1]), Ordering::Greater, "{:?} {:?}", w[0], w[1]);
        }
        assert_eq!(Monomial::all_of_degree(3, 2), seq.to_vec());
        let g = MonomialOrder::grlex();
        assert_eq!(g.cmp(m(&[1, 0, 1]), m(&[0, 2, 0])), Ordering::Greater);
    }

    #[test]
    fn permuted_order() {
        // z first: then x is cheapest under grevlex
        let o = MonomialOrder::with_permutation(OrderKind::Grevlex, vec![2, 1, 0]).unwrap();
        assert_eq!(o.cmp(m(&[0, 0, 2]), m(&[2, 0, 0])), Ordering::Greater);
    }

    proptest::proptest! {
        #[test]
        fn swar_matches_scalar(a in proptest::collection::vec(0u32..16, 8), b in proptest::collection::vec(0u32..16, 8)) {
            let (ma, mb) = (m(&a), m(&b));
            let div = a.iter().zip(&b).all(|(x, y)| x <= y);
            proptest::prop_assert_eq!(ma.divides(mb), div);
            let l: Vec<u32> = a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect();
            proptest::prop_assert_eq!(ma.lcm(mb).exponents(8), l);
            proptest::prop_assert_eq!(ma.degree(), a.iter().sum::<u32>());
        }

        #[test]
        fn order_is_multiplicative(a in proptest::collection::vec(0u32..5, 4), b in proptest::collection::vec(0u32..5, 4), c in proptest::collection::vec(0u32..5, 4)) {
            for o in [MonomialOrder::grevlex(), MonomialOrder::grlex()] {
                let (ma, mb, mc) = (m(&a), m(&b), m(&c));
                proptest::prop_assert_eq!(o.cmp(ma, mb), o.cmp(ma.mul(mc), mb.mul(mc)));
            }
        }
    }
}
