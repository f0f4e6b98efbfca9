//! Coefficient fields: exact rationals and prime fields.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A commutative field with exact arithmetic.
///
/// `inv` panics on zero; callers check `is_zero` first.
pub trait Field:
    Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// 0 for Q, p for F_p.
    const CHARACTERISTIC: u64;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    /// Image of a rational number; `None` when the denominator vanishes.
    fn from_rational(q: &Rational) -> Option<Self>;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }
    /// Short name such as `Q` or `F_32003`.
    fn label() -> String;

    /// The value as a rational number, for fields of characteristic zero.
    fn to_rational(&self) -> Option<Rational> {
        None
    }

    /// Multiplier bringing a nonzero coefficient vector to its preferred scale:
    /// monic by default, a primitive integer vector with positive leading entry over Q.
    fn normalizer(coeffs: &[&Self]) -> Self {
        coeffs[0].inv()
    }
}

#[derive(Clone, Debug)]
enum Repr {
    // den > 0, gcd(num, den) = 1, num != i64::MIN
    Small(i64, i64),
    // never fits in Small
    Big(Box<BigRational>),
}

/// Exact rational number. Small values stay on machine integers.
#[derive(Clone, Debug)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_integer(v: i64) -> Self {
        if v == i64::MIN {
            return Self::from_big(BigRational::from_integer(BigInt::from(v)));
        }
        Rational(Repr::Small(v, 1))
    }

    fn from_i128(mut n: i128, mut d: i128) -> Self {
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        if fits(n) && fits(d) {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            ))))
        }
    }

    /// Wrap an already reduced big rational, shrinking it if possible.
    pub fn from_big(q: BigRational) -> Self {
        let q = if q.denom().is_negative() {
            BigRational::new(q.numer().clone(), q.denom().clone())
        } else {
            q
        };
        if let (Some(n), Some(d)) = (q.numer().to_i64(), q.denom().to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small(n, d));
            }
        }
        Rational(Repr::Big(Box::new(q)))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// Returns the value as i64 when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            Field::neg(self)
        } else {
            self.clone()
        }
    }

    /// Floor of the value.
    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, d) => BigInt::from(n.div_floor(d)),
            Repr::Big(b) => b.floor().to_integer(),
        }
    }

    fn big_op(&self, rhs: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        Self::from_big(f(&self.to_big(), &rhs.to_big()))
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}
impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational(Repr::Small(0, 1))
    }
}

impl Field for Rational {
    const CHARACTERISTIC: u64 = 0;

    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v)
    }
    fn from_rational(q: &Rational) -> Option<Self> {
        Some(q.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, 1), Repr::Small(c, 1)) => {
                let s = *a as i128 + *c as i128;
                if fits(s) {
                    Rational(Repr::Small(s as i64, 1))
                } else {
                    Self::from_i128(s, 1)
                }
            }
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a * d).checked_add(c * b) {
                    Some(n) => Self::from_i128(n, b * d),
                    None => self.big_op(rhs, |x, y| x + y),
                }
            }
            _ => self.big_op(rhs, |x, y| x + y),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let g1 = gcd_u128(a.unsigned_abs() as u128, *d as u128).max(1) as i128;
                let g2 = gcd_u128(c.unsigned_abs() as u128, *b as u128).max(1) as i128;
                let n = (*a as i128 / g1) * (*c as i128 / g2);
                let m = (*b as i128 / g2) * (*d as i128 / g1);
                if n == 0 {
                    return Self::zero();
                }
                if fits(n) && fits(m) {
                    Rational(Repr::Small(n as i64, m as i64))
                } else {
                    Self::from_i128(n, m)
                }
            }
            _ => self.big_op(rhs, |x, y| x * y),
        }
    }
    fn neg(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
            Repr::Big(b) => Self::from_big(-(**b).clone()),
        }
    }
    fn inv(&self) -> Self {
        match &self.0 {
            Repr::Small(0, _) => panic!("inverse of zero"),
            Repr::Small(n, d) => {
                if *n < 0 {
                    Rational(Repr::Small(-d, -n))
                } else {
                    Rational(Repr::Small(*d, *n))
                }
            }
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }
    fn label() -> String {
        "Q".to_string()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn normalizer(coeffs: &[&Self]) -> Self {
        // lcm of denominators, then gcd of the cleared numerators
        let mut small = true;
        let mut l: i128 = 1;
        for c in coeffs {
            match &c.0 {
                Repr::Small(_, d) => {
                    let g = gcd_u128(l as u128, *d as u128) as i128;
                    match (l / g).checked_mul(*d as i128) {
                        Some(v) if v <= i64::MAX as i128 => l = v,
                        _ => {
                            small = false;
                            break;
                        }
                    }
                }
                Repr::Big(_) => {
                    small = false;
                    break;
                }
            }
        }
        let sign_neg = coeffs[0].signum() < 0;
        if small {
            let mut g: u128 = 0;
            let mut ok = true;
            for c in coeffs {
                if let Repr::Small(n, d) = &c.0 {
                    let v = (*n as i128) * (l / *d as i128);
                    g = gcd_u128(g, v.unsigned_abs());
                    if g == 1 {
                        break;
                    }
                } else {
                    ok = false;
                }
            }
            if ok && g != 0 {
                let f = Rational::from_i128(if sign_neg { -l } else { l }, g as i128);
                return f;
            }
        }
        let mut lb = BigInt::from(1);
        for c in coeffs {
            lb = lb.lcm(&c.denom());
        }
        let mut gb = BigInt::zero();
        for c in coeffs {
            gb = gb.gcd(&(c.numer() * (&lb / c.denom())));
        }
        if sign_neg {
            lb = -lb;
        }
        Rational::from_big(BigRational::new(lb, gb))
    }

}


impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let (n, d) = (parse(n)?, parse(d)?);
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Rational::from_big(BigRational::new(n, d)))
            }
            None => Ok(Rational::from_big(BigRational::from_integer(parse(s)?))),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

macro_rules! rational_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Field::$f(self, rhs)
            }
        }
        impl std::ops::$tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Field::$f(&self, &rhs)
            }
        }
    };
}
rational_binop!(Add, add, add);
rational_binop!(Sub, sub, sub);
rational_binop!(Mul, mul, mul);
rational_binop!(Div, div, div);

impl std::ops::Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Field::neg(&self)
    }
}

/// Element of the prime field F_P. `P` must be an odd prime below 2^63.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Fp<const P: u64 = 2147483647>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }
    pub fn value(self) -> u64 {
        self.0
    }
    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = Field::mul(&acc, &base);
            }
            base = Field::mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    fn from_big(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("reduced residue fits"))
    }
}

impl<const P: u64> Field for Fp<P> {
    const CHARACTERISTIC: u64 = P;

    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn is_one(&self) -> bool {
        self.0 == 1
    }
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn from_rational(q: &Rational) -> Option<Self> {
        let d = Self::from_big(&q.denom());
        if d.is_zero() {
            return None;
        }
        Some(Self::from_big(&q.numer()).div(&d))
    }
    fn add(&self, rhs: &Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
    fn sub(&self, rhs: &Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
    fn mul(&self, rhs: &Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P - 2)
    }
    fn label() -> String {
        format!("F_{P}")
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // symmetric representative reads better for small negatives
        if self.0 > P / 2 {
            write!(f, "-{}", P - self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl<const P: u64> Serialize for Fp<P> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Map a rational into a field, failing when the denominator vanishes.
pub fn rational_into<F: Field>(q: &Rational) -> Result<F> {
    F::from_rational(q).ok_or_else(|| Error::NotRepresentable(q.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arith() {
        let a = Rational::new(1, 2);
        let b = Rational::new(1, 3);
        assert_eq!(&a + &b, Rational::new(5, 6));
        assert_eq!(&a - &b, Rational::new(1, 6));
        assert_eq!(&a * &b, Rational::new(1, 6));
        assert_eq!(&a / &b, Rational::new(3, 2));
        assert_eq!(Rational::new(-4, -6), Rational::new(2, 3));
        assert_eq!(Rational::new(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn normalizer_gives_primitive_integers() {
        let v = [Rational::new(-2, 3), Rational::new(4, 9), Rational::from_integer(2)];
        let refs: Vec<&Rational> = v.iter().collect();
        let f = Rational::normalizer(&refs);
        let scaled: Vec<Rational> = v.iter().map(|c| c * &f).collect();
        assert_eq!(scaled, vec![Rational::from_integer(3), Rational::from_integer(-2), Rational::from_integer(-9)]);

        let big = [Rational::from_big(BigRational::new(BigInt::from(10).pow(30u32), BigInt::from(7)))];
        let refs: Vec<&Rational> = big.iter().collect();
        assert!((&big[0] * &Rational::normalizer(&refs)).is_one());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let m = Rational::from_integer(i64::MIN);
        assert_eq!(Field::neg(&Field::neg(&m)), m);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-7", "3/4", "-123456789012345678901234567891/2"] {
            let q: Rational = s.parse().unwrap();
            assert_eq!(q.to_string(), s);
        }
        assert!("1/0".parse::<Rational>().is_err());
        let q: Rational = "6/4".parse().unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), "\"3/2\"");
    }

    #[test]
    fn prime_field() {
        type F = Fp<7>;
        let a = F::from_i64(3);
        assert_eq!(a.inv(), F::from_i64(5));
        assert_eq!(F::from_i64(-1).value(), 6);
        assert_eq!(F::from_rational(&Rational::new(1, 2)), Some(F::from_i64(4)));
        assert_eq!(F::from_rational(&Rational::new(1, 7)), None);
        assert_eq!(F::from_i64(6).to_string(), "-1");
    }

    proptest::proptest! {
        #[test]
        fn field_axioms_q(a in -1_000_000i64..1_000_000, b in 1i64..1000, c in -1_000_000i64..1_000_000, d in 1i64..1000) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            proptest::prop_assert_eq!(x.to_big() + y.to_big(), (&x + &y).to_big());
            proptest::prop_assert_eq!(x.to_big() * y.to_big(), (&x * &y).to_big());
            if !y.is_zero() {
                proptest::prop_assert_eq!(&(&x / &y) * &y, x.clone());
            }
        }

        #[test]
        fn big_values_agree(a in proptest::num::i64::ANY, b in proptest::num::i64::ANY, c in 1i64..i64::MAX) {
            let x = Rational::new(a, c);
            let y = Rational::from_integer(b);
            let expect = x.to_big() * y.to_big() + y.to_big();
            proptest::prop_assert_eq!(x.mul(&y).add(&y).to_big(), expect);
        }

        #[test]
        fn fp_inverse(a in 1i64..2147483647) {
            let x = Fp::<2147483647>::from_i64(a);
            proptest::prop_assert!(x.mul(&x.inv()).is_one());
        }
    }
}
