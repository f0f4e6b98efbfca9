//! Sparse multivariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder, MAX_VARS};
use crate::scalar::{Field, Rational};

/// Polynomial with terms kept in strictly descending grevlex order, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial<F: Field> {
    nvars: usize,
    terms: Vec<(Monomial, F)>,
}

#[inline]
pub(crate) fn grevlex_cmp(a: Monomial, b: Monomial) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    let (x, y) = (a.raw(), b.raw());
    if x == y {
        return Ordering::Equal;
    }
    let byte = (63 - (x ^ y).leading_zeros()) / 8;
    ((y >> (8 * byte)) & 0xff).cmp(&((x >> (8 * byte)) & 0xff))
}

/// Whether a polynomial is homogeneous.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(u32),
    Inhomogeneous,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((Monomial::ONE, c));
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        Polynomial { nvars, terms: vec![(Monomial::var(i), F::one())] }
    }

    pub fn monomial(nvars: usize, m: Monomial, c: F) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Linear form `sum coeffs[i] x_i`.
    pub fn linear_form(coeffs: &[F]) -> Self {
        Self::from_terms(
            coeffs.len(),
            coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(i), c.clone())),
        )
    }

    /// Build from arbitrary terms; like monomials are combined.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut v: Vec<(Monomial, F)> = terms.into_iter().collect();
        v.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        let mut out: Vec<(Monomial, F)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, F)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, F)> {
        self.terms.first()
    }

    /// Leading term with respect to an arbitrary order.
    pub fn leading_term_in(&self, ord: &MonomialOrder) -> Option<&(Monomial, F)> {
        if ord.is_default() {
            return self.terms.first();
        }
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let Some((m, _)) = self.terms.first() else {
            return Homogeneity::Zero;
        };
        let d = m.degree();
        if self.terms.iter().all(|(m, _)| m.degree() == d) {
            Homogeneity::Homogeneous(d)
        } else {
            Homogeneity::Inhomogeneous
        }
    }

    pub fn coefficient(&self, m: Monomial) -> F {
        self.terms
            .binary_search_by(|(t, _)| grevlex_cmp(m, *t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| F::zero())
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials live in different rings");
    }

    /// `self + c * m * other`, the workhorse of every reduction.
    pub fn add_scaled(&self, c: &F, m: Monomial, other: &Self) -> Self {
        self.check_vars(other);
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            if j == b.len() {
                out.extend_from_slice(&a[i..]);
                break;
            }
            let bm = b[j].0.mul(m);
            if i == a.len() {
                out.push((bm, c.mul(&b[j].1)));
                j += 1;
                continue;
            }
            match grevlex_cmp(a[i].0, bm) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bm, c.mul(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = a[i].1.add(&c.mul(&b[j].1));
                    if !s.is_zero() {
                        out.push((bm, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { nvars: self.nvars, terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&F::one(), Monomial::ONE, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&F::one().neg(), Monomial::ONE, other)
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, a.mul(c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return large.mul_monomial(*m, c);
        }
        let mut acc: HashMap<Monomial, F> = HashMap::with_capacity(self.len() * other.len());
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                let e = acc.entry(m1.mul(*m2)).or_insert_with(F::zero);
                *e = e.add(&c1.mul(c2));
            }
        }
        Self::from_terms(self.nvars, acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Make the leading coefficient one.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn exact_divide(&self, divisor: &Self) -> Option<Self> {
        self.check_vars(divisor);
        let (dm, dc) = divisor.terms.first()?;
        let dinv = dc.inv();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let q = m.div(*dm)?;
            let qc = c.mul(&dinv);
            rem = rem.add_scaled(&qc.neg(), q, divisor);
            quot.push((q, qc));
        }
        Some(Polynomial { nvars: self.nvars, terms: quot })
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(i);
            (e > 0).then(|| (m.div(Monomial::var(i)).unwrap(), c.mul(&F::from_i64(e as i64))))
        });
        Self::from_terms(self.nvars, terms)
    }

    pub fn evaluate(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars);
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exponent(i) {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitute `x_i -> images[i]`; the result lives in the ring of the images.
    pub fn substitute(&self, images: &[Polynomial<F>]) -> Result<Polynomial<F>> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: images.len() });
        }
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<Polynomial<F>>> = images.iter().map(|p| vec![Polynomial::one(p.nvars), p.clone()]).collect();
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for i in 0..self.nvars {
                let e = m.exponent(i) as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&powers[i][e]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Homogenize with a new last variable.
    pub fn homogenize(&self) -> Polynomial<F> {
        let d = self.degree().unwrap_or(0);
        let z = self.nvars;
        Polynomial::from_terms(
            self.nvars + 1,
            self.terms.iter().map(|(m, c)| (m.mul(Monomial::var_pow(z, d - m.degree())), c.clone())),
        )
    }

    /// Set the last variable to one.
    pub fn dehomogenize(&self) -> Polynomial<F> {
        let z = self.nvars - 1;
        Polynomial::from_terms(
            z,
            self.terms.iter().map(|(m, c)| {
                let e = m.exponent(z);
                (m.div(Monomial::var_pow(z, e)).unwrap(), c.clone())
            }),
        )
    }

    /// Map coefficients into another field.
    pub fn map_coefficients<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Polynomial<G>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let g = f(c)?;
            if !g.is_zero() {
                terms.push((*m, g));
            }
        }
        Some(Polynomial { nvars: self.nvars, terms })
    }

    /// Print with explicit variable names.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut cs = c.to_string();
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if k == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (i, name) in names.iter().enumerate().take(self.nvars) {
                match m.exponent(i) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                s.push_str(&cs);
            } else {
                if cs != "1" {
                    s.push_str(&cs);
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

/// Default variable names: x, y, z for up to three variables, else x1..xn.
pub fn default_var_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&default_var_names(self.nvars)))
    }
}

impl<F: Field> Serialize for Polynomial<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parse a polynomial such as `x^2 - 3/2*x*y + 1` over the given variable names.
pub fn parse_polynomial(s: &str, names: &[&str]) -> Result<Polynomial<Rational>> {
    let n = names.len();
    let err = || Error::Parse(format!("cannot parse polynomial {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err());
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && !(i > 0 && compact[..i].ends_with('^')) {
            if !cur.is_empty() {
                pieces.push((neg, std::mem::take(&mut cur)));
            } else if i > 0 {
                return Err(err());
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(err());
    }
    pieces.push((neg, cur));
    let mut terms = Vec::new();
    for (neg, piece) in pieces {
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; n];
        for factor in piece.split('*') {
            let (base, e) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<u32>().map_err(|_| err())?),
                None => (factor, 1),
            };
            if let Some(i) = names.iter().position(|v| *v == base) {
                exps[i] += e;
            } else {
                let q: Rational = base.parse()?;
                for _ in 0..e {
                    coeff = coeff.mul(&q);
                }
            }
        }
        if neg {
            coeff = coeff.neg();
        }
        terms.push((Monomial::from_exponents(&exps)?, coeff));
    }
    Ok(Polynomial::from_terms(n, terms))
}

/// A derivation `sum theta_i d/dx_i`, stored by its coordinate polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DerivationVector<F: Field> {
    pub coords: Vec<Polynomial<F>>,
}

impl<F: Field> DerivationVector<F> {
    pub fn new(coords: Vec<Polynomial<F>>) -> Self {
        DerivationVector { coords }
    }

    pub fn zero(nvars: usize) -> Self {
        DerivationVector { coords: vec![Polynomial::zero(nvars); nvars] }
    }

    /// The Euler derivation `sum x_i d/dx_i`.
    pub fn euler(nvars: usize) -> Self {
        DerivationVector { coords: (0..nvars).map(|i| Polynomial::var(nvars, i)).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|p| p.is_zero())
    }

    /// Polynomial degree of a homogeneous derivation.
    pub fn degree(&self) -> Homogeneity {
        let mut d = None;
        for p in &self.coords {
            match p.homogeneity() {
                Homogeneity::Zero => {}
                Homogeneity::Inhomogeneous => return Homogeneity::Inhomogeneous,
                Homogeneity::Homogeneous(e) => match d {
                    None => d = Some(e),
                    Some(x) if x != e => return Homogeneity::Inhomogeneous,
                    _ => {}
                },
            }
        }
        d.map_or(Homogeneity::Zero, Homogeneity::Homogeneous)
    }

    /// `theta(f) = sum theta_i * df/dx_i`.
    pub fn apply(&self, f: &Polynomial<F>) -> Polynomial<F> {
        let mut acc = Polynomial::zero(f.nvars());
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&f.derivative(i)));
            }
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        DerivationVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        DerivationVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale_poly(&self, f: &Polynomial<F>) -> Self {
        DerivationVector { coords: self.coords.iter().map(|a| a.mul(f)).collect() }
    }
}

impl<F: Field> Serialize for DerivationVector<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coords.iter().map(|p| p.to_string()).collect();
        v.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use proptest::prelude::*;

    type Q = Rational;

    fn p(s: &str) -> Polynomial<Q> {
        parse_polynomial(s, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let f = p("x^2 - 3/2*x*y + 1");
        assert_eq!(f.to_string(), "x^2 - 3/2*x*y + 1");
        assert_eq!(p("-y + x").to_string(), "x - y");
        assert_eq!(p("2*x*x").to_string(), "2*x^2");
        assert!(parse_polynomial("x +", &["x"]).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = p("x + y");
        let b = p("x - y");
        assert_eq!(a.mul(&b), p("x^2 - y^2"));
        assert_eq!(p("x^2 - y^2").exact_divide(&a), Some(b.clone()));
        assert_eq!(p("x^2 + y^2").exact_divide(&a), None);
        assert_eq!(a.pow(3).derivative(0), a.pow(2).scale(&Q::from_i64(3)));
        assert_eq!(p("x^2*y + z").homogeneity(), Homogeneity::Inhomogeneous);
        assert_eq!(p("x^2*y + z^3").homogeneity(), Homogeneity::Homogeneous(3));
    }

    #[test]
    fn homogenize_round_trip() {
        let f = parse_polynomial("x^2 + y + 1", &["x", "y"]).unwrap();
        let h = f.homogenize();
        assert_eq!(h, p("x^2 + y*z + z^2"));
        assert_eq!(h.dehomogenize(), f);
    }

    #[test]
    fn substitution() {
        let f = p("x*y");
        let img = vec![p("x + z"), p("y"), p("z")];
        assert_eq!(f.substitute(&img).unwrap(), p("x*y + y*z"));
    }

    #[test]
    fn derivation_apply() {
        let e = DerivationVector::euler(3);
        let f = p("x^2*y - z^3");
        assert_eq!(e.apply(&f), f.scale(&Q::from_i64(3)));
        let g: Polynomial<Fp<7>> = f.map_coefficients(|c| Fp::from_rational(c)).unwrap();
        assert_eq!(DerivationVector::euler(3).apply(&g), g.scale(&Fp::from_i64(3)));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial<Q>> {
        proptest::collection::vec((0u32..4, 0u32..4, 0u32..4, -5i64..6), 0..6).prop_map(|ts| {
            Polynomial::from_terms(3, ts.into_iter().map(|(a, b, c, k)| (Monomial::from_exponents(&[a, b, c]).unwrap(), Q::from_i64(k))))
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            if !b.is_zero() {
                prop_assert_eq!(a.mul(&b).exact_divide(&b), Some(a.clone()));
            }
        }

        #[test]
        fn derivation_is_leibniz(a in arb_poly(), b in arb_poly(), t in proptest::collection::vec(arb_poly(), 3)) {
            let th = DerivationVector::new(t);
            let lhs = th.apply(&a.mul(&b));
            let rhs = th.apply(&a).mul(&b).add(&a.mul(&th.apply(&b)));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(th.apply(&a.add(&b)), th.apply(&a).add(&th.apply(&b)));
        }

        #[test]
        fn print_parse_round_trip(a in arb_poly()) {
            prop_assert_eq!(p(&a.to_string()), a);
        }
    }
}
