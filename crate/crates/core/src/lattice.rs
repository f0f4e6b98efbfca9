//! Intersection lattices, Möbius functions and characteristic polynomials.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::arrangement::{Arrangement, Flat, Hyperplane};
use crate::error::{Error, Result};
use crate::logder::{exponents_if_free, Freeness};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// One element of the lattice.
#[derive(Clone, Debug)]
pub struct LatticeFlat {
    pub flat: Flat,
    /// Indices of the hyperplanes containing the flat.
    pub hyperplanes: Vec<usize>,
    pub mobius: i64,
    /// Indices (one level up) of the flats covering this one from above,
    /// i.e. the flats of codimension one less that contain it.
    pub covered_by: Vec<usize>,
    bits: Bits,
}

/// Flats of a central arrangement grouped by codimension.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    pub dim: usize,
    pub levels: Vec<Vec<LatticeFlat>>,
}

/// Lattice of a central arrangement; affine arrangements are coned first.
pub fn intersection_lattice(a: &Arrangement) -> Result<IntersectionLattice> {
    let a = if a.central { a.clone() } else { a.cone()? };
    let n = a.len();
    let top = LatticeFlat {
        flat: Flat::full(a.dim),
        hyperplanes: Vec::new(),
        mobius: 1,
        covered_by: Vec::new(),
        bits: Bits::new(n),
    };
    let mut levels = vec![vec![top]];
    loop {
        let prev = levels.last().unwrap();
        let mut index: HashMap<Flat, usize> = HashMap::new();
        let mut next: Vec<LatticeFlat> = Vec::new();
        for (xi, x) in prev.iter().enumerate() {
            for (hi, h) in a.hyperplanes.iter().enumerate() {
                if x.bits.get(hi) {
                    continue;
                }
                let y = x.flat.intersect(h);
                let yi = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        let mut bits = Bits::new(n);
                        let mut hs = Vec::new();
                        for (k, g) in a.hyperplanes.iter().enumerate() {
                            if y.lies_in(g) {
                                bits.set(k);
                                hs.push(k);
                            }
                        }
                        next.push(LatticeFlat { flat: y.clone(), hyperplanes: hs, mobius: 0, covered_by: Vec::new(), bits });
                        index.insert(y, next.len() - 1);
                        next.len() - 1
                    }
                };
                if !next[yi].covered_by.contains(&xi) {
                    next[yi].covered_by.push(xi);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        for y in next.iter_mut() {
            y.covered_by.sort_unstable();
            let mut s = 0;
            for level in &levels {
                for x in level {
                    if x.bits.subset_of(&y.bits) {
                        s += x.mobius;
                    }
                }
            }
            y.mobius = -s;
        }
        next.sort_by(|p, q| p.hyperplanes.cmp(&q.hyperplanes));
        // covered_by indices refer to the previous level, which is already fixed
        levels.push(next);
    }
    Ok(IntersectionLattice { dim: a.dim, levels })
}

impl IntersectionLattice {
    pub fn rank(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn flats(&self, codim: usize) -> &[LatticeFlat] {
        self.levels.get(codim).map_or(&[], |v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn characteristic_polynomial(&self) -> CharPoly {
        let mut coeffs = vec![0i64; self.dim + 1];
        for (c, level) in self.levels.iter().enumerate() {
            for x in level {
                coeffs[self.dim - c] += x.mobius;
            }
        }
        CharPoly::from_ascending(coeffs)
    }
}

/// An integer polynomial in `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharPoly {
    /// Coefficients, highest degree first.
    pub coefficients: Vec<i64>,
    /// `χ / (t - 1)`, when the division is exact and `χ` is nonzero.
    pub reduced: Option<Vec<i64>>,
}

impl CharPoly {
    fn from_ascending(mut asc: Vec<i64>) -> Self {
        while asc.len() > 1 && *asc.last().unwrap() == 0 {
            asc.pop();
        }
        let reduced = divide_by_t_minus_one(&asc);
        let desc = |v: &[i64]| v.iter().rev().copied().collect::<Vec<_>>();
        CharPoly { coefficients: desc(&asc), reduced: reduced.map(|r| desc(&r)) }
    }

    /// Coefficients lowest degree first.
    pub fn ascending(&self) -> Vec<i64> {
        self.coefficients.iter().rev().copied().collect()
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, t: i64) -> i128 {
        horner(&self.coefficients, t)
    }

    /// `χ₀(t) = χ(t) / (t - 1)` evaluated at `t`.
    pub fn reduced_eval(&self, t: i64) -> Result<i128> {
        match &self.reduced {
            Some(r) => Ok(horner(r, t)),
            None => Err(Error::InvalidInput("characteristic polynomial is not divisible by t - 1".into())),
        }
    }

    /// Whether `χ(t) = Π (t - d_i)`.
    pub fn factors_as(&self, exponents: &[i64]) -> bool {
        let mut asc = vec![1i64];
        for &d in exponents {
            let mut next = vec![0i64; asc.len() + 1];
            for (i, c) in asc.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= d * c;
            }
            asc = next;
        }
        asc == self.ascending()
    }

    pub fn sub(&self, other: &CharPoly) -> CharPoly {
        let (a, b) = (self.ascending(), other.ascending());
        let mut out = vec![0; a.len().max(b.len())];
        for (i, c) in a.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in b.iter().enumerate() {
            out[i] -= c;
        }
        CharPoly::from_ascending(out)
    }
}

fn horner(desc: &[i64], t: i64) -> i128 {
    desc.iter().fold(0i128, |acc, &c| acc * t as i128 + c as i128)
}

fn divide_by_t_minus_one(asc: &[i64]) -> Option<Vec<i64>> {
    if asc.iter().all(|&c| c == 0) {
        return None;
    }
    // synthetic division from the top
    let n = asc.len() - 1;
    if n == 0 {
        return None;
    }
    let mut q = vec![0i64; n];
    let mut carry = 0i64;
    for i in (1..=n).rev() {
        carry += asc[i];
        q[i - 1] = carry;
    }
    (carry + asc[0] == 0).then_some(q)
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = n - i;
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "t")?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `χ(A; t)`; affine arrangements use `χ(cA; t) = (t - 1) χ(A; t)`.
pub fn characteristic_polynomial(a: &Arrangement) -> Result<CharPoly> {
    if a.central {
        return Ok(intersection_lattice(a)?.characteristic_polynomial());
    }
    let cone = intersection_lattice(a)?.characteristic_polynomial();
    match cone.reduced {
        Some(r) => Ok(CharPoly::from_ascending(r.iter().rev().copied().collect())),
        None => Err(Error::VerificationFailed("cone polynomial not divisible by t - 1".into())),
    }
}

/// Check `χ(A) = χ(A \ H) - χ(A^H)`.
pub fn deletion_restriction_holds(a: &Arrangement, h: &Hyperplane) -> Result<bool> {
    let chi = characteristic_polynomial(a)?;
    let del = characteristic_polynomial(&a.delete(h)?)?;
    let res = characteristic_polynomial(&a.restrict(h)?)?;
    Ok(chi == del.sub(&res))
}

/// Outcome of a local freeness scan along a hyperplane.
#[derive(Clone, Debug, Serialize)]
pub struct LocalFreenessReport {
    pub hyperplane: String,
    pub codim: usize,
    pub checked: usize,
    /// Flats whose localization is not free, each given by its hyperplanes.
    pub non_free: Vec<Vec<String>>,
}

impl LocalFreenessReport {
    pub fn passed(&self) -> bool {
        self.non_free.is_empty()
    }
}

/// Whether `A_X` is free for every flat `X ⊂ H` of codimension `codim` other than the center.
pub fn is_locally_free_along<F: Field>(a: &Arrangement, h: &Hyperplane, codim: usize) -> Result<LocalFreenessReport> {
    if !a.central {
        return Err(Error::InvalidInput("local freeness needs a central arrangement".into()));
    }
    let hi = a.index_of(h).ok_or_else(|| Error::InvalidInput(format!("{h} is not in the arrangement")))?;
    let lat = intersection_lattice(a)?;
    let center_codim = lat.rank();
    let mut report = LocalFreenessReport { hyperplane: h.to_string(), codim, checked: 0, non_free: Vec::new() };
    if codim == center_codim {
        return Ok(report);
    }
    for x in lat.flats(codim) {
        if !x.bits.get(hi) {
            continue;
        }
        report.checked += 1;
        if codim <= 2 {
            continue;
        }
        let local = a.localize(&x.flat)?.essentialize()?;
        if let Freeness::NotFree { .. } = exponents_if_free::<F>(&local)? {
            report.non_free.push(x.hyperplanes.iter().map(|&k| a.hyperplanes[k].to_string()).collect());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootSystem;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    #[test]
    fn boolean_plane() {
        let lat = intersection_lattice(&Arrangement::boolean(2)).unwrap();
        let mus: Vec<i64> = lat.levels.iter().flatten().map(|x| x.mobius).collect();
        assert_eq!(mus, vec![1, -1, -1, 1]);
    }

    #[test]
    fn pencil_of_lines() {
        let hs = (0..5).map(|i| Hyperplane::linear(&[1, i]).unwrap()).collect();
        let a = Arrangement::new_central(2, hs).unwrap();
        let lat = intersection_lattice(&a).unwrap();
        assert_eq!(lat.flats(2).len(), 1);
        assert_eq!(lat.flats(2)[0].mobius, 4);
    }

    #[test]
    fn boolean_space() {
        let chi = characteristic_polynomial(&Arrangement::boolean(3)).unwrap();
        assert_eq!(chi.coefficients, vec![1, -3, 3, -1]);
        assert_eq!(chi.to_string(), "t^3 - 3t^2 + 3t - 1");
    }

    #[test]
    fn cone_of_b2_weyl() {
        let rs: RootSystem = "B2".parse().unwrap();
        let a = Arrangement::deformation(&rs, 0, 0).unwrap().cone().unwrap();
        assert_eq!(a.len(), 5);
        let chi = characteristic_polynomial(&a).unwrap();
        assert_eq!(chi.reduced, Some(vec![1, -4, 3]));
    }

    #[test]
    fn affine_divides_cone() {
        let rs: RootSystem = "A2".parse().unwrap();
        let a = Arrangement::deformation(&rs, 0, 1).unwrap();
        let chi = characteristic_polynomial(&a).unwrap();
        let cone = characteristic_polynomial(&a.cone().unwrap()).unwrap();
        assert_eq!(cone.reduced.as_ref(), Some(&chi.coefficients));
    }

    #[test]
    fn generic_quadruple_not_free() {
        let hs = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]].iter().map(|c| Hyperplane::linear(c).unwrap()).collect();
        let a = Arrangement::new_central(3, hs).unwrap();
        assert!(matches!(exponents_if_free::<Rational>(&a).unwrap(), Freeness::NotFree { .. }));
        // adding a fourth coordinate plane makes the quadruple a codimension three localization
        let hs4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 0], [0, 0, 0, 1]]
            .iter()
            .map(|c| Hyperplane::linear(c).unwrap())
            .collect();
        let b = Arrangement::new_central(4, hs4).unwrap();
        let h = Hyperplane::linear(&[1, 0, 0, 0]).unwrap();
        let rep = is_locally_free_along::<Rational>(&b, &h, 3).unwrap();
        assert_eq!(rep.non_free.len(), 1);
        assert_eq!(rep.non_free[0].len(), 4);
    }

    #[test]
    fn free_arrangement_is_locally_free() {
        let rs: RootSystem = "A3".parse().unwrap();
        let a = Arrangement::weyl(&rs);
        let chi = characteristic_polynomial(&a).unwrap();
        assert!(chi.factors_as(&[1, 2, 3]));
        for h in &a.hyperplanes {
            let rep = is_locally_free_along::<Rational>(&a, h, 2).unwrap();
            assert!(rep.passed());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn mobius_recursion_and_vanishing(a in -1i64..1, b in 0i64..2, pick in 0usize..8) {
            let rs: RootSystem = "B2".parse().unwrap();
            let arr = Arrangement::deformation(&rs, a, b).unwrap().cone().unwrap();
            let lat = intersection_lattice(&arr).unwrap();
            let chi = lat.characteristic_polynomial();
            prop_assert_eq!(chi.eval(1), 0);
            for w in chi.coefficients.windows(2) {
                prop_assert!(w[0] == 0 || w[1] == 0 || (w[0] > 0) != (w[1] > 0));
            }
            let h = arr.hyperplanes[pick % arr.len()].clone();
            prop_assert!(deletion_restriction_holds(&arr, &h).unwrap());
        }
    }
}
