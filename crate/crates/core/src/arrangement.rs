//! Hyperplane arrangements, multiarrangements and the surgery operations on them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rootsys::RootSystem;
use crate::scalar::{rational_into, Field, Rational};

/// The hyperplane `sum coeffs[i] x_i + constant = 0`, scaled so that the first
/// nonzero coefficient is one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hyperplane {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl Hyperplane {
    pub fn new(coeffs: Vec<Rational>, constant: Rational) -> Result<Self> {
        let Some(lead) = coeffs.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::InvalidInput("hyperplane with zero normal vector".into()));
        };
        let inv = lead.inv();
        Ok(Hyperplane {
            coeffs: coeffs.iter().map(|c| c.mul(&inv)).collect(),
            constant: constant.mul(&inv),
        })
    }

    /// Linear hyperplane from integer coefficients.
    pub fn linear(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Rational::from_i64(c)).collect(), Rational::zero())
    }

    /// Affine hyperplane `sum coeffs[i] x_i = value`.
    pub fn affine(coeffs: &[i64], value: i64) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Rational::from_i64(c)).collect(), Rational::from_i64(-value))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_linear(&self) -> bool {
        self.constant.is_zero()
    }

    /// Index of the first nonzero coefficient (which equals one).
    pub fn pivot(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).expect("normalized hyperplane")
    }

    /// The defining form as a polynomial; the constant becomes a constant term.
    pub fn form<F: Field>(&self) -> Result<Polynomial<F>> {
        let n = self.dim();
        let mut p = Polynomial::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p = p.add(&Polynomial::var(n, i).scale(&rational_into::<F>(c)?));
            }
        }
        if !self.constant.is_zero() {
            p = p.add(&Polynomial::constant(n, rational_into::<F>(&self.constant)?));
        }
        Ok(p)
    }

    /// Trace on `self` of another hyperplane, in the pivot chart of `self`.
    /// `None` when the two are parallel or equal.
    pub fn trace_of(&self, other: &Hyperplane) -> Option<Hyperplane> {
        let p = self.pivot();
        let b = &other.coeffs[p];
        let coeffs: Vec<Rational> = (0..self.dim())
            .filter(|&i| i != p)
            .map(|i| other.coeffs[i].sub(&b.mul(&self.coeffs[i])))
            .collect();
        let constant = other.constant.sub(&b.mul(&self.constant));
        Hyperplane::new(coeffs, constant).ok()
    }

    /// Basis of the direction space of a linear hyperplane in the pivot chart:
    /// one vector `e_i - a_i e_p` for each non-pivot coordinate `i`.
    pub fn chart_basis(&self) -> Vec<Vec<Rational>> {
        let p = self.pivot();
        (0..self.dim())
            .filter(|&i| i != p)
            .map(|i| {
                let mut v = vec![Rational::zero(); self.dim()];
                v[i] = Rational::one();
                v[p] = self.coeffs[i].neg();
                v
            })
            .collect()
    }

    pub fn format_with(&self, names: &[String]) -> String {
        let mut terms: Vec<(Rational, String)> =
            self.coeffs.iter().zip(names).map(|(c, n)| (c.clone(), n.clone())).collect();
        terms.push((self.constant.clone(), String::new()));
        let mut s = String::new();
        for (c, n) in terms {
            if c.is_zero() {
                continue;
            }
            let neg = c.signum() < 0;
            let mag = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if n.is_empty() {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&format!("{mag}*"));
                }
                s.push_str(&n);
            }
        }
        s.push_str(" = 0");
        s
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&crate::poly::default_var_names(self.dim())))
    }
}

/// A finite set of distinct hyperplanes in `K^dim`, kept in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrangement {
    pub dim: usize,
    pub central: bool,
    pub hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    fn build(dim: usize, central: bool, mut hs: Vec<Hyperplane>) -> Result<Self> {
        for h in &hs {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.dim() });
            }
            if central && !h.is_linear() {
                return Err(Error::InvalidInput(format!("central arrangement with affine hyperplane {h}")));
            }
        }
        hs.sort();
        hs.dedup();
        Ok(Arrangement { dim, central, hyperplanes: hs })
    }

    pub fn new_central(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        Self::build(dim, true, hyperplanes)
    }

    pub fn new_affine(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        Self::build(dim, false, hyperplanes)
    }

    /// Re-validate after deserialization: normalizes, sorts and dedupes.
    pub fn normalized(self) -> Result<Self> {
        let hs = self
            .hyperplanes
            .into_iter()
            .map(|h| Hyperplane::new(h.coeffs, h.constant))
            .collect::<Result<Vec<_>>>()?;
        Self::build(self.dim, self.central, hs)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let a: Arrangement = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        a.normalized()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("arrangement serializes")
    }

    /// Coordinate hyperplanes `x_i = 0`.
    pub fn boolean(dim: usize) -> Self {
        let hs = (0..dim)
            .map(|i| {
                let mut c = vec![0; dim];
                c[i] = 1;
                Hyperplane::linear(&c).unwrap()
            })
            .collect();
        Self::build(dim, true, hs).unwrap()
    }

    /// The Weyl arrangement of a root system, on its essential space.
    pub fn weyl(rs: &RootSystem) -> Self {
        let hs = rs.roots.iter().map(|r| Hyperplane::linear(&r.form).unwrap()).collect();
        Self::build(rs.dim(), true, hs).unwrap()
    }

    /// The affine arrangement `{alpha = k : alpha positive, a <= k <= b}`.
    pub fn deformation(rs: &RootSystem, a: i64, b: i64) -> Result<Self> {
        if a > b {
            return Err(Error::InvalidInput(format!("empty interval [{a}, {b}]")));
        }
        Self::deformation_by(rs, |_| (a, b))
    }

    /// Deformation with an interval chosen per root.
    pub fn deformation_by(rs: &RootSystem, interval: impl Fn(&crate::rootsys::Root) -> (i64, i64)) -> Result<Self> {
        let mut hs = Vec::new();
        for r in &rs.roots {
            let (a, b) = interval(r);
            for k in a..=b {
                hs.push(Hyperplane::affine(&r.form, k)?);
            }
        }
        Self::build(rs.dim(), false, hs)
    }

    /// Homogenize with a new last coordinate `z` and add `z = 0`.
    pub fn cone(&self) -> Result<Self> {
        if self.central {
            return Err(Error::InvalidInput("arrangement is already central".into()));
        }
        let n = self.dim + 1;
        let mut hs: Vec<Hyperplane> = self
            .hyperplanes
            .iter()
            .map(|h| {
                let mut c = h.coeffs.clone();
                c.push(h.constant.clone());
                Hyperplane::new(c, Rational::zero()).unwrap()
            })
            .collect();
        let mut z = vec![0; n];
        z[n - 1] = 1;
        hs.push(Hyperplane::linear(&z)?);
        Self::build(n, true, hs)
    }

    /// Remove the hyperplane at infinity and dehomogenize.
    pub fn decone(&self) -> Result<Self> {
        self.require_central()?;
        let n = self.dim;
        let mut hs = Vec::new();
        for h in &self.hyperplanes {
            let c = &h.coeffs[..n - 1];
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            hs.push(Hyperplane::new(c.to_vec(), h.coeffs[n - 1].clone())?);
        }
        Self::build(n - 1, false, hs)
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn index_of(&self, h: &Hyperplane) -> Option<usize> {
        self.hyperplanes.binary_search(h).ok()
    }

    pub fn contains(&self, h: &Hyperplane) -> bool {
        self.index_of(h).is_some()
    }

    fn require_central(&self) -> Result<()> {
        if self.central {
            Ok(())
        } else {
            Err(Error::InvalidInput("operation needs a central arrangement".into()))
        }
    }

    pub fn delete(&self, h: &Hyperplane) -> Result<Self> {
        let i = self.index_of(h).ok_or_else(|| Error::InvalidInput(format!("{h} is not in the arrangement")))?;
        let mut out = self.clone();
        out.hyperplanes.remove(i);
        Ok(out)
    }

    pub fn add(&self, h: &Hyperplane) -> Result<Self> {
        if self.contains(h) {
            return Err(Error::InvalidInput(format!("{h} is already in the arrangement")));
        }
        let mut hs = self.hyperplanes.clone();
        hs.push(h.clone());
        Self::build(self.dim, self.central, hs)
    }

    pub fn forms<F: Field>(&self) -> Result<Vec<Polynomial<F>>> {
        self.hyperplanes.iter().map(|h| h.form()).collect()
    }

    /// Product of the defining forms.
    pub fn defining_polynomial<F: Field>(&self) -> Result<Polynomial<F>> {
        let mut q = Polynomial::one(self.dim);
        for f in self.forms::<F>()? {
            q = q.mul(&f);
        }
        Ok(q)
    }

    /// Distinct traces of the other hyperplanes on `h`, with the indices of the
    /// hyperplanes producing each trace. `h` need not belong to the arrangement.
    pub fn traces(&self, h: &Hyperplane) -> BTreeMap<Hyperplane, Vec<usize>> {
        let mut out: BTreeMap<Hyperplane, Vec<usize>> = BTreeMap::new();
        for (i, k) in self.hyperplanes.iter().enumerate() {
            if k == h {
                continue;
            }
            if let Some(t) = h.trace_of(k) {
                out.entry(t).or_default().push(i);
            }
        }
        out
    }

    /// Number of distinct traces on `h` (for `h` outside, the number of
    /// intersection points of a line with a line arrangement).
    pub fn trace_count(&self, h: &Hyperplane) -> usize {
        self.traces(h).len()
    }

    /// The restriction to `h` in the pivot chart of `h`.
    pub fn restrict(&self, h: &Hyperplane) -> Result<Self> {
        if !self.contains(h) {
            return Err(Error::InvalidInput(format!("{h} is not in the arrangement")));
        }
        let traces = self.traces(h).into_keys().collect();
        Self::build(self.dim - 1, self.central, traces)
    }

    /// Restriction with multiplicities counting coincident traces.
    pub fn ziegler_restriction(&self, h: &Hyperplane) -> Result<Multiarrangement> {
        self.require_central()?;
        if !self.contains(h) {
            return Err(Error::InvalidInput(format!("{h} is not in the arrangement")));
        }
        let traces = self.traces(h);
        let arr = Self::build(self.dim - 1, true, traces.keys().cloned().collect())?;
        let mult = arr.hyperplanes.iter().map(|t| traces[t].len() as u32).collect();
        Multiarrangement::new(arr, mult)
    }

    /// Terao's polynomial: the product of the forms of the hyperplanes other than
    /// `h` that are not the chosen representative of their trace. The
    /// representative of a trace is its lexicographically smallest hyperplane.
    pub fn terao_b_polynomial<F: Field>(&self, h: &Hyperplane) -> Result<Polynomial<F>> {
        self.require_central()?;
        if !self.contains(h) {
            return Err(Error::InvalidInput(format!("{h} is not in the arrangement")));
        }
        let mut b = Polynomial::one(self.dim);
        for idx in self.traces(h).values() {
            // indices are ascending, so the first one is the representative
            for &i in &idx[1..] {
                b = b.mul(&self.hyperplanes[i].form()?);
            }
        }
        Ok(b)
    }

    /// Hyperplanes containing the subspace cut out by the rows of `flat`.
    pub fn localize(&self, flat: &Flat) -> Result<Self> {
        self.require_central()?;
        let hs = self.hyperplanes.iter().filter(|h| flat.lies_in(h)).cloned().collect();
        Self::build(self.dim, true, hs)
    }

    /// Rank of the arrangement (dimension of the span of the normals).
    pub fn rank(&self) -> usize {
        Flat::from_normals(self.dim, self.hyperplanes.iter().map(|h| h.coeffs.clone())).codim()
    }

    /// Express a central arrangement in coordinates on the quotient by its center.
    pub fn essentialize(&self) -> Result<Self> {
        self.require_central()?;
        let f = Flat::from_normals(self.dim, self.hyperplanes.iter().map(|h| h.coeffs.clone()));
        let hs = self
            .hyperplanes
            .iter()
            .map(|h| Hyperplane::new(f.pivots.iter().map(|&p| h.coeffs[p].clone()).collect(), Rational::zero()))
            .collect::<Result<Vec<_>>>()?;
        Self::build(f.codim(), true, hs)
    }

    pub fn var_names(&self) -> Vec<String> {
        crate::poly::default_var_names(self.dim)
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.var_names();
        let parts: Vec<String> = self.hyperplanes.iter().map(|h| h.format_with(&names)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A central arrangement with a positive multiplicity on each hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Multiarrangement {
    pub arrangement: Arrangement,
    pub multiplicities: Vec<u32>,
}

impl Multiarrangement {
    pub fn new(arrangement: Arrangement, multiplicities: Vec<u32>) -> Result<Self> {
        if !arrangement.central {
            return Err(Error::InvalidInput("multiarrangements are central".into()));
        }
        if multiplicities.len() != arrangement.len() {
            return Err(Error::DimensionMismatch { expected: arrangement.len(), found: multiplicities.len() });
        }
        if multiplicities.iter().any(|&m| m == 0) {
            return Err(Error::InvalidInput("multiplicities must be positive".into()));
        }
        Ok(Multiarrangement { arrangement, multiplicities })
    }

    pub fn simple(arrangement: Arrangement) -> Result<Self> {
        let n = arrangement.len();
        Self::new(arrangement, vec![1; n])
    }

    /// `|m|`, the sum of the multiplicities.
    pub fn total(&self) -> u32 {
        self.multiplicities.iter().sum()
    }
}

/// A linear subspace, stored as the reduced row echelon form of its equations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    pub dim: usize,
    pub equations: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

impl Flat {
    /// The whole space.
    pub fn full(dim: usize) -> Self {
        Flat { dim, equations: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_normals(dim: usize, normals: impl IntoIterator<Item = Vec<Rational>>) -> Self {
        let mut f = Flat::full(dim);
        for v in normals {
            f.add_equation(&v);
        }
        f
    }

    pub fn codim(&self) -> usize {
        self.equations.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (row, &p) in self.equations.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x = x.sub(&c.mul(r));
                    }
                }
            }
        }
        v
    }

    /// Whether the normal vector lies in the span of the equations.
    pub fn spans(&self, normal: &[Rational]) -> bool {
        self.reduce(normal).iter().all(|x| x.is_zero())
    }

    /// Whether the flat is contained in the (linear) hyperplane.
    pub fn lies_in(&self, h: &Hyperplane) -> bool {
        self.spans(&h.coeffs)
    }

    /// Intersect with one more hyperplane; returns whether the codimension grew.
    pub fn add_equation(&mut self, normal: &[Rational]) -> bool {
        let mut v = self.reduce(normal);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv();
        for x in v.iter_mut() {
            *x = x.mul(&inv);
        }
        for row in self.equations.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x = x.sub(&c.mul(y));
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.equations.insert(pos, v);
        true
    }

    pub fn intersect(&self, h: &Hyperplane) -> Flat {
        let mut f = self.clone();
        f.add_equation(&h.coeffs);
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b2() -> RootSystem {
        "B2".parse().unwrap()
    }

    #[test]
    fn counts() {
        let a = Arrangement::deformation(&b2(), 0, 2).unwrap();
        assert_eq!(a.len(), 12);
        assert_eq!(a.cone().unwrap().len(), 13);
        let a3: RootSystem = "A3".parse().unwrap();
        assert_eq!(Arrangement::deformation(&a3, 0, 2).unwrap().cone().unwrap().len(), 19);
        for k in 0..3 {
            for j in 1..5 {
                let a = Arrangement::deformation(&b2(), -k, k + j).unwrap();
                assert_eq!(a.len() as i64, 4 * (2 * k + j + 1));
            }
        }
        assert!(Arrangement::deformation(&b2(), 3, 1).is_err());
        assert!(Arrangement::weyl(&b2()).cone().is_err());
    }

    #[test]
    fn normalization_and_json() {
        let h = Hyperplane::new(vec![Rational::from_i64(2), Rational::from_i64(-4)], Rational::from_i64(6)).unwrap();
        assert_eq!(h.coeffs, vec![Rational::from_i64(1), Rational::from_i64(-2)]);
        assert_eq!(h.constant, Rational::from_i64(3));
        let a = Arrangement::deformation(&b2(), -1, 2).unwrap().cone().unwrap();
        let back = Arrangement::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
        let one = Arrangement::new_affine(1, vec![Hyperplane::affine(&[1], 1).unwrap()]).unwrap();
        let c = one.cone().unwrap();
        assert_eq!(c.to_string(), "{y = 0, x - y = 0}");
    }

    #[test]
    fn restriction_and_ziegler() {
        let b = Arrangement::boolean(3);
        let z = Hyperplane::linear(&[0, 0, 1]).unwrap();
        let x = Hyperplane::linear(&[1, 0, 0]).unwrap();
        assert_eq!(b.restrict(&x).unwrap(), Arrangement::boolean(2));
        let zr = b.ziegler_restriction(&z).unwrap();
        assert_eq!(zr.multiplicities, vec![1, 1]);
        let c = Arrangement::deformation(&b2(), 0, 1).unwrap().cone().unwrap();
        let zr = c.ziegler_restriction(&z).unwrap();
        assert_eq!(zr.arrangement.len(), 4);
        assert_eq!(zr.multiplicities, vec![2; 4]);
        assert_eq!(zr.total() as usize, c.len() - 1);
        let q = b.terao_b_polynomial::<Rational>(&z).unwrap();
        assert_eq!(q, Polynomial::one(3));
    }

    #[test]
    fn localize_and_essentialize() {
        let b = Arrangement::boolean(3);
        let f = Flat::from_normals(3, [vec![1, 0, 0], vec![0, 1, 0]].map(|v| v.into_iter().map(Rational::from_i64).collect()));
        let loc = b.localize(&f).unwrap();
        assert_eq!(loc.len(), 2);
        let e = loc.essentialize().unwrap();
        assert_eq!(e, Arrangement::boolean(2));
        assert_eq!(b.localize(&Flat::full(3)).unwrap().len(), 0);
    }

    proptest! {
        #[test]
        fn b_degree_plus_restriction(k in 0i64..2, j in 1i64..4, pick in 0usize..100) {
            let a = Arrangement::deformation(&b2(), -k, k + j).unwrap().cone().unwrap();
            let h = a.hyperplanes[pick % a.len()].clone();
            let b = a.terao_b_polynomial::<Rational>(&h).unwrap();
            let r = a.restrict(&h).unwrap();
            prop_assert_eq!(r.len() + b.degree().unwrap() as usize, a.len() - 1);
            let z = a.ziegler_restriction(&h).unwrap();
            prop_assert_eq!(z.total() as usize, a.len() - 1);
            prop_assert_eq!(a.delete(&h).unwrap().add(&h).unwrap(), a.clone());
        }
    }
}
