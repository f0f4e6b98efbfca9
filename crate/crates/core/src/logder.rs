//! Logarithmic derivation modules `D(A)`, their Euler complement `D_0(A)`,
//! Saito's criterion and freeness detection.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::arrangement::{Arrangement, Hyperplane, Multiarrangement};
use crate::error::{Error, Result};
use crate::groebner::{kernel_of_map, minimalize, ModuleElement};
use crate::linalg::SparseEchelon;
use crate::monomial::Monomial;
use crate::poly::{DerivationVector, Homogeneity, Polynomial};
use crate::resolution::{BettiTable, FreeResolution};
use crate::scalar::{rational_into, Field, Fp, Rational};

/// A graded submodule of `Der S = S^n` given by minimal homogeneous generators.
#[derive(Clone, Debug)]
pub struct DerivationModule<F: Field> {
    pub nvars: usize,
    /// Minimal generators, by ascending degree.
    pub generators: Vec<DerivationVector<F>>,
    resolution: OnceLock<Arc<FreeResolution<F>>>,
}

impl<F: Field> DerivationModule<F> {
    pub fn from_generators(nvars: usize, gens: Vec<DerivationVector<F>>) -> Result<Self> {
        let elems: Vec<ModuleElement<F>> = gens.iter().map(|g| g.coords.clone()).collect();
        let keep = minimalize(&vec![0; nvars], &elems)?;
        let generators = keep.into_iter().map(|i| gens[i].clone()).collect();
        Ok(DerivationModule { nvars, generators, resolution: OnceLock::new() })
    }

    /// Polynomial degrees of the minimal generators, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.generators.iter().map(|g| derivation_degree(g)).collect();
        d.sort();
        d
    }

    pub fn elements(&self) -> Vec<ModuleElement<F>> {
        self.generators.iter().map(|g| g.coords.clone()).collect()
    }

    /// Minimal free resolution, computed once.
    pub fn resolution(&self) -> Result<Arc<FreeResolution<F>>> {
        if let Some(r) = self.resolution.get() {
            return Ok(r.clone());
        }
        let r = Arc::new(FreeResolution::of_submodule(self.nvars, &vec![0; self.nvars], &self.elements())?);
        Ok(self.resolution.get_or_init(|| r).clone())
    }

    pub fn betti(&self) -> Result<BettiTable> {
        Ok(self.resolution()?.betti())
    }

    pub fn projective_dimension(&self) -> Result<usize> {
        Ok(self.resolution()?.length())
    }
}

fn derivation_degree<F: Field>(g: &DerivationVector<F>) -> i64 {
    match g.degree() {
        Homogeneity::Homogeneous(d) => d as i64,
        _ => 0,
    }
}

/// Intersect a module with `{theta : alpha^m divides theta(alpha)}`.
fn impose<F: Field>(nvars: usize, gens: &[DerivationVector<F>], alpha: &Polynomial<F>, m: u32) -> Result<Vec<DerivationVector<F>>> {
    let target = alpha.pow(m);
    let mut cols = Vec::with_capacity(gens.len() + 1);
    let mut src = Vec::with_capacity(gens.len() + 1);
    let mut already = true;
    for g in gens {
        let v = g.apply(alpha);
        if !v.is_zero() && v.exact_divide(&target).is_none() {
            already = false;
        }
        src.push(derivation_degree(g) + 0);
        cols.push(vec![v]);
    }
    if already {
        return Ok(gens.to_vec());
    }
    cols.push(vec![target.neg()]);
    src.push(m as i64);
    let ker = kernel_of_map(&[0], &cols, &src)?;
    let mut out = Vec::with_capacity(ker.len());
    for k in ker {
        let mut theta = DerivationVector::zero(nvars);
        for (f, g) in k.iter().zip(gens) {
            if !f.is_zero() {
                theta = theta.add(&g.scale_poly(f));
            }
        }
        if !theta.is_zero() {
            out.push(primitive(theta));
        }
    }
    let elems: Vec<ModuleElement<F>> = out.iter().map(|g| g.coords.clone()).collect();
    let keep = minimalize(&vec![0; nvars], &elems)?;
    Ok(keep.into_iter().map(|i| out[i].clone()).collect())
}

/// Rescale so that the coefficients are coprime integers (over Q) or the
/// leading one is one (over F_p).
fn primitive<F: Field>(theta: DerivationVector<F>) -> DerivationVector<F> {
    let coeffs: Vec<&F> = theta.coords.iter().flat_map(|p| p.terms().iter().map(|(_, c)| c)).collect();
    if coeffs.is_empty() {
        return theta;
    }
    let c = F::normalizer(&coeffs);
    DerivationVector::new(theta.coords.iter().map(|p| p.scale(&c)).collect())
}

fn standard_basis<F: Field>(n: usize) -> Vec<DerivationVector<F>> {
    (0..n)
        .map(|i| {
            let mut d = DerivationVector::zero(n);
            d.coords[i] = Polynomial::one(n);
            d
        })
        .collect()
}

type CacheKey = (TypeId, u8, Multiarrangement);
type Cache = RwLock<HashMap<CacheKey, Arc<dyn Any + Send + Sync>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

fn memo<F: Field, T: Clone + Send + Sync + 'static>(
    kind: u8,
    key: &Multiarrangement,
    compute: impl FnOnce() -> Result<T>,
) -> Result<T> {
    let k = (TypeId::of::<F>(), kind, key.clone());
    if let Some(v) = cache().read().expect("cache lock").get(&k) {
        if let Some(t) = v.downcast_ref::<T>() {
            return Ok(t.clone());
        }
    }
    let v = compute()?;
    cache().write().expect("cache lock").insert(k, Arc::new(v.clone()));
    Ok(v)
}

/// `D(A, m)` for a multiarrangement, by imposing one hyperplane at a time.
pub fn multi_derivation_module<F: Field>(ma: &Multiarrangement) -> Result<DerivationModule<F>> {
    memo::<F, DerivationModule<F>>(0, ma, || {
        let n = ma.arrangement.dim;
        let mut gens = standard_basis::<F>(n);
        for (h, &m) in ma.arrangement.hyperplanes.iter().zip(&ma.multiplicities) {
            gens = impose(n, &gens, &h.form()?, m)?;
        }
        gens.sort_by_key(|g| derivation_degree(g));
        Ok(DerivationModule { nvars: n, generators: gens, resolution: OnceLock::new() })
    })
}

/// `D(A)` of a central arrangement.
pub fn derivation_module<F: Field>(a: &Arrangement) -> Result<DerivationModule<F>> {
    if !a.central {
        return Err(Error::InvalidInput("D(A) needs a central arrangement; cone it first".into()));
    }
    multi_derivation_module(&Multiarrangement::simple(a.clone())?)
}

/// `D(A)` from a single kernel computation with one auxiliary multiplier per
/// hyperplane: syzygies of `theta(alpha_H) - h_H alpha_H^{m_H} = 0`.
pub fn derivation_module_single_kernel<F: Field>(ma: &Multiarrangement) -> Result<DerivationModule<F>> {
    let a = &ma.arrangement;
    let n = a.dim;
    let forms = a.forms::<F>()?;
    let r = forms.len();
    // columns: n coordinate derivations, then one auxiliary generator per hyperplane
    let mut cols: Vec<ModuleElement<F>> = Vec::new();
    let mut src = Vec::new();
    for i in 0..n {
        let col: Vec<Polynomial<F>> = forms.iter().map(|f| f.derivative(i)).collect();
        cols.push(col);
        src.push(0);
    }
    for (j, (f, &m)) in forms.iter().zip(&ma.multiplicities).enumerate() {
        let mut col = vec![Polynomial::zero(n); r];
        col[j] = f.pow(m).neg();
        cols.push(col);
        src.push(m as i64 - 1);
    }
    // theta has polynomial degree e in coordinate i; theta(alpha) has degree e, so
    // the targets sit in degree 0 with the derivations in degree 0 as well
    let target = vec![0; r];
    // auxiliary h_H of degree e - m with alpha^m of degree m: shift of the source is m - 0
    let src: Vec<i64> = src.iter().enumerate().map(|(i, &s)| if i < n { s } else { s + 1 }).collect();
    let ker = kernel_of_map(&target, &cols, &src)?;
    let gens: Vec<DerivationVector<F>> = ker
        .into_iter()
        .map(|k| DerivationVector::new(k[..n].to_vec()))
        .filter(|t| !t.is_zero())
        .collect();
    DerivationModule::from_generators(n, gens).map(|mut m| {
        m.generators.sort_by_key(|g| derivation_degree(g));
        m
    })
}

/// `theta(Q)/Q = sum_H theta(alpha_H)/alpha_H`, checked to be exact.
pub fn log_divergence<F: Field>(a: &Arrangement, theta: &DerivationVector<F>) -> Result<Polynomial<F>> {
    let mut acc = Polynomial::zero(a.dim);
    for f in a.forms::<F>()? {
        let v = theta.apply(&f);
        let q = v
            .exact_divide(&f)
            .ok_or_else(|| Error::VerificationFailed("derivation is not logarithmic".into()))?;
        acc = acc.add(&q);
    }
    Ok(acc)
}

/// Project onto `D_0(A) = {theta : theta(Q) = 0}` along the Euler derivation.
pub fn euler_projection<F: Field>(a: &Arrangement, theta: &DerivationVector<F>) -> Result<DerivationVector<F>> {
    let n = F::from_i64(a.len() as i64);
    if n.is_zero() {
        return Err(Error::Unsupported("field characteristic divides |A|".into()));
    }
    let g = log_divergence(a, theta)?.scale(&n.inv());
    Ok(theta.sub(&DerivationVector::euler(a.dim).scale_poly(&g)))
}

/// `D_0(A)`, the complement of `S theta_E` in `D(A)`.
pub fn d0_module<F: Field>(a: &Arrangement) -> Result<DerivationModule<F>> {
    let key = Multiarrangement::simple(a.clone())?;
    memo::<F, DerivationModule<F>>(1, &key, || {
        let d = derivation_module::<F>(a)?;
        if a.is_empty() {
            return Err(Error::InvalidInput("empty arrangement".into()));
        }
        let mut gens = Vec::new();
        for g in &d.generators {
            let p = euler_projection(a, g)?;
            if !p.is_zero() {
                gens.push(primitive(p));
            }
        }
        let mut m = DerivationModule::from_generators(a.dim, gens)?;
        m.generators.sort_by_key(|g| derivation_degree(g));
        Ok(m)
    })
}

/// Dimension of `D(A, m)` in polynomial degree `d` by plain linear algebra:
/// the kernel of `theta -> (theta(alpha_H) mod alpha_H^{m_H})_H` on `S_d^n`.
pub fn oracle_dimension<F: Field>(ma: &Multiarrangement, d: u32) -> Result<usize> {
    let a = &ma.arrangement;
    let n = a.dim;
    let monos = Monomial::all_of_degree(n, d);
    let unknowns = n * monos.len();
    // per hyperplane: change coordinates so that alpha becomes the pivot variable
    // and keep the coefficients of monomials with pivot exponent below m
    let mut columns: Vec<Vec<(usize, F)>> = vec![Vec::new(); unknowns];
    let mut offset = 0usize;
    for (h, &m) in a.hyperplanes.iter().zip(&ma.multiplicities) {
        let p = h.pivot();
        let coeffs: Vec<F> = h.coeffs.iter().map(rational_into::<F>).collect::<Result<_>>()?;
        // x_p = y_p - sum_{i != p} a_i y_i, x_i = y_i otherwise
        let images: Vec<Polynomial<F>> = (0..n)
            .map(|i| {
                if i == p {
                    let mut img = Polynomial::var(n, p);
                    for (j, c) in coeffs.iter().enumerate() {
                        if j != p && !c.is_zero() {
                            img = img.sub(&Polynomial::var(n, j).scale(c));
                        }
                    }
                    img
                } else {
                    Polynomial::var(n, i)
                }
            })
            .collect();
        let mut index: HashMap<Monomial, usize> = HashMap::new();
        for (mi, mono) in monos.iter().enumerate() {
            let img = Polynomial::monomial(n, *mono, F::one()).substitute(&images)?;
            let kept: Vec<(usize, F)> = img
                .terms()
                .iter()
                .filter(|(t, _)| t.exponent(p) < m)
                .map(|(t, c)| {
                    let k = index.len();
                    (*index.entry(*t).or_insert(k), c.clone())
                })
                .collect();
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let col = &mut columns[i * monos.len() + mi];
                col.extend(kept.iter().map(|(r, v)| (offset + r, v.mul(c))));
            }
        }
        // reserve enough rows for every monomial that could appear
        offset += Monomial::count_of_degree(n, d + 1).max(index.len() + 1);
    }
    let mut ech = SparseEchelon::new();
    for col in columns {
        ech.insert(col);
    }
    Ok(unknowns - ech.rank())
}

/// Exact `dim_Q D(A)_d` where possible, by reduction modulo `p = 2^31 - 1`.
///
/// Reduction can only lower ranks, so the span of monomial multiples of
/// `gens` (checked logarithmic over Q) bounds the dimension from below and
/// the modular kernel bounds it from above. Returns `(lower, upper)`; the
/// dimension is exact when they meet.
pub fn dimension_bounds(
    ma: &Multiarrangement,
    gens: &[DerivationVector<Rational>],
    d: u32,
) -> Result<(usize, usize)> {
    type P = Fp<2147483647>;
    let a = &ma.arrangement;
    let n = a.dim;
    for g in gens {
        for (h, &m) in a.hyperplanes.iter().zip(&ma.multiplicities) {
            let f: Polynomial<Rational> = h.form()?;
            if g.apply(&f).exact_divide(&f.pow(m)).is_none() {
                return Err(Error::VerificationFailed("generator is not logarithmic".into()));
            }
        }
    }
    let monos = Monomial::all_of_degree(n, d);
    let index: HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut ech = SparseEchelon::<P>::new();
    for g in gens {
        let e = match g.degree() {
            Homogeneity::Homogeneous(e) => e,
            Homogeneity::Zero => continue,
            _ => return Err(Error::InvalidInput("generator is not homogeneous".into())),
        };
        if e > d {
            continue;
        }
        for mu in Monomial::all_of_degree(n, d - e) {
            let mut row = Vec::new();
            for (i, c) in g.coords.iter().enumerate() {
                for (t, q) in c.terms() {
                    let v = P::from_rational(q)
                        .ok_or_else(|| Error::Unsupported("coefficient not invertible modulo p".into()))?;
                    row.push((i * monos.len() + index[&t.mul(mu)], v));
                }
            }
            ech.insert(row);
        }
    }
    Ok((ech.rank(), oracle_dimension::<P>(ma, d)?))
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn polynomial_determinant<F: Field>(m: &[Vec<Polynomial<F>>], nvars: usize) -> Polynomial<F> {
    let n = m.len();
    match n {
        0 => Polynomial::one(nvars),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Polynomial::zero(nvars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial<F>>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect()).collect();
                let term = m[0][j].mul(&polynomial_determinant(&minor, nvars));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Outcome of Saito's criterion.
#[derive(Clone, Debug, Serialize)]
pub struct SaitoCertificate {
    pub passed: bool,
    pub degrees: Vec<i64>,
    /// `det = c * Q(A)` when `passed`.
    pub scalar: Option<String>,
}

/// Saito's criterion: `n` logarithmic derivations form a basis iff their
/// coefficient determinant is a nonzero multiple of `Q(A)`.
pub fn saito_check<F: Field>(a: &Arrangement, thetas: &[DerivationVector<F>]) -> Result<SaitoCertificate> {
    let n = a.dim;
    if thetas.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: thetas.len() });
    }
    for t in thetas {
        log_divergence(a, t)?;
    }
    let degrees: Vec<i64> = thetas.iter().map(|t| derivation_degree(t)).collect();
    let m: Vec<Vec<Polynomial<F>>> = (0..n).map(|i| thetas.iter().map(|t| t.coords[i].clone()).collect()).collect();
    let det = polynomial_determinant(&m, n);
    let q = a.defining_polynomial::<F>()?;
    let scalar = match (det.leading_term(), q.leading_term()) {
        (Some((dm, dc)), Some((qm, qc))) if dm == qm => {
            let c = dc.div(qc);
            (q.scale(&c) == det).then(|| c.to_string())
        }
        _ => None,
    };
    Ok(SaitoCertificate { passed: scalar.is_some(), degrees, scalar })
}

/// Freeness verdict read off the minimal resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Freeness {
    Free { exponents: Vec<i64> },
    NotFree { projective_dimension: usize, betti: BettiTable },
}

impl Freeness {
    pub fn exponents(&self) -> Option<&[i64]> {
        match self {
            Freeness::Free { exponents } => Some(exponents),
            _ => None,
        }
    }
}

pub fn exponents_if_free<F: Field>(a: &Arrangement) -> Result<Freeness> {
    let d = derivation_module::<F>(a)?;
    // a module with exactly rank-many generators is free
    if d.generators.len() == a.dim {
        return Ok(Freeness::Free { exponents: d.degrees() });
    }
    let res = d.resolution()?;
    if res.length() == 0 {
        Ok(Freeness::Free { exponents: d.degrees() })
    } else {
        Ok(Freeness::NotFree { projective_dimension: res.length(), betti: res.betti() })
    }
}

/// Exponents of a multiarrangement in two variables (always free).
pub fn multi_exponents<F: Field>(ma: &Multiarrangement) -> Result<(i64, i64)> {
    if ma.arrangement.dim != 2 {
        return Err(Error::InvalidInput("multi_exponents needs two variables".into()));
    }
    let d = multi_derivation_module::<F>(ma)?;
    let deg = d.degrees();
    if deg.len() != 2 {
        return Err(Error::VerificationFailed(format!("expected two generators, found {}", deg.len())));
    }
    Ok((deg[0], deg[1]))
}

/// Shape of a strictly plus-one generated module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpogCertificate {
    pub exponents: Vec<i64>,
    pub level: i64,
    /// The unique relation, as coefficients on the minimal generators.
    pub relation: Vec<String>,
}

/// Detect SPOG: `0 -> S(-d-1) -> S(-d_1)+...+S(-d_l)+S(-d) -> D(A) -> 0`.
pub fn is_spog<F: Field>(a: &Arrangement) -> Result<Option<SpogCertificate>> {
    let d = derivation_module::<F>(a)?;
    if d.generators.len() != a.dim + 1 {
        return Ok(None);
    }
    let res = d.resolution()?;
    if res.length() != 1 || res.shifts[1].len() != 1 {
        return Ok(None);
    }
    let syz_deg = res.shifts[1][0];
    let level = syz_deg - 1;
    let mut degs = res.shifts[0].clone();
    let Some(pos) = degs.iter().rposition(|&x| x == level) else {
        return Ok(None);
    };
    degs.remove(pos);
    degs.sort();
    let relation = res.differentials[0][0].iter().map(|p| p.to_string()).collect();
    Ok(Some(SpogCertificate { exponents: degs, level, relation }))
}

/// Whether every generator is logarithmic along every hyperplane.
pub fn is_logarithmic<F: Field>(a: &Arrangement, theta: &DerivationVector<F>) -> Result<bool> {
    for h in &a.hyperplanes {
        let f: Polynomial<F> = h.form()?;
        if theta.apply(&f).exact_divide(&f).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience: the form of a hyperplane in a given field.
pub fn form_of<F: Field>(h: &Hyperplane) -> Result<Polynomial<F>> {
    h.form()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootSystem;
    use crate::scalar::Rational;

    type Q = Rational;

    #[test]
    fn boolean_is_free() {
        let b = Arrangement::boolean(3);
        let d = derivation_module::<Q>(&b).unwrap();
        assert_eq!(d.degrees(), vec![1, 1, 1]);
        let cert = saito_check(&b, &d.generators).unwrap();
        assert!(cert.passed);
        let d0 = d0_module::<Q>(&b).unwrap();
        assert_eq!(d0.degrees(), vec![1, 1]);
        assert_eq!(exponents_if_free::<Q>(&b).unwrap(), Freeness::Free { exponents: vec![1, 1, 1] });
        let e = DerivationVector::<Q>::euler(3);
        assert!(!saito_check(&b, &[e.clone(), e.clone(), e]).unwrap().passed);
    }

    #[test]
    fn modular_bounds_meet_on_weyl_cones() {
        let a = Arrangement::deformation(&"B2".parse().unwrap(), 0, 2).unwrap().cone().unwrap();
        let ma = Multiarrangement::simple(a.clone()).unwrap();
        let gens = derivation_module::<Q>(&a).unwrap().generators;
        for d in 0..10 {
            let (lo, hi) = dimension_bounds(&ma, &gens, d).unwrap();
            assert_eq!(lo, hi);
            assert_eq!(lo, oracle_dimension::<Q>(&ma, d).unwrap());
        }
        // dropping a generator only lowers the lower bound
        let (lo, hi) = dimension_bounds(&ma, &gens[1..], 9).unwrap();
        assert!(lo < hi);
        // a non-logarithmic field is refused
        let bad = vec![DerivationVector::new(vec![Polynomial::one(3), Polynomial::zero(3), Polynomial::zero(3)])];
        assert!(dimension_bounds(&ma, &bad, 3).is_err());
    }

    #[test]
    fn pencils() {
        for n in 2..=6i64 {
            let hs = (0..n).map(|i| Hyperplane::linear(&[1, i]).unwrap()).collect();
            let a = Arrangement::new_central(2, hs).unwrap();
            let d = derivation_module::<Q>(&a).unwrap();
            assert_eq!(d.degrees(), vec![1, n - 1]);
            for deg in 0..=(n as u32 + 1) {
                let ma = Multiarrangement::simple(a.clone()).unwrap();
                let expect = (deg as i64 + 1 - 1).max(0) + (deg as i64 - n + 2).max(0);
                assert_eq!(oracle_dimension::<Q>(&ma, deg).unwrap() as i64, expect, "n={n} d={deg}");
            }
        }
    }

    #[test]
    fn single_kernel_agrees() {
        let rs: RootSystem = "B2".parse().unwrap();
        let a = Arrangement::deformation(&rs, 0, 1).unwrap().cone().unwrap();
        let ma = Multiarrangement::simple(a.clone()).unwrap();
        let x = derivation_module::<Q>(&a).unwrap();
        let y = derivation_module_single_kernel::<Q>(&ma).unwrap();
        assert_eq!(x.degrees(), y.degrees());
    }

    #[test]
    fn multi_exponents_small() {
        let a = Arrangement::new_central(2, vec![Hyperplane::linear(&[1, 0]).unwrap(), Hyperplane::linear(&[0, 1]).unwrap(), Hyperplane::linear(&[1, -1]).unwrap()]).unwrap();
        let ma = Multiarrangement::simple(a.clone()).unwrap();
        assert_eq!(multi_exponents::<Q>(&ma).unwrap(), (1, 2));
        let ma2 = Multiarrangement::new(a, vec![2, 2, 2]).unwrap();
        assert_eq!(multi_exponents::<Q>(&ma2).unwrap(), (3, 3));
    }
}
