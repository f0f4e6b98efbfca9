//! The rank two bundle `E` on the projective plane obtained from `D₀` of a line
//! arrangement: Chern classes, stability, splitting types on lines and
//! jumping line scans.
//!
//! Splitting types are read off the restricted presentation
//! `0 -> A|_L -> B|_L -> E|_L -> 0` on `P¹`. For each twist,
//! `h⁰(E|_L(d)) = h⁰(B(d)) - h⁰(A(d)) + dim ker(H¹(A(d)) -> H¹(B(d)))`, where
//! `H¹(O(e))` is spanned by the Laurent monomials `s^-i t^-j` with `i, j ≥ 1`,
//! `i + j = -e`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arrangement::{Arrangement, Hyperplane};
use crate::error::{Error, Result};
use crate::linalg::SparseEchelon;
use crate::poly::Polynomial;
use crate::resolution::{BettiTable, FreeResolution};
use crate::scalar::{Field, Fp, Rational};

/// Chern classes of a rank two bundle, for the stated twist of `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChernClasses {
    pub c1: i64,
    pub c2: i64,
    pub twist: i64,
}

impl ChernClasses {
    /// Classes of the twist by `t` more.
    pub fn twisted(&self, t: i64) -> ChernClasses {
        ChernClasses { c1: self.c1 + 2 * t, c2: self.c2 + t * self.c1 + t * t, twist: self.twist + t }
    }
}

/// Chern classes of the sheafification of a module with the given Betti
/// table, twisted by `twist`. Each summand `S(-a)` contributes `1 - a h`,
/// with alternating powers along the resolution.
pub fn chern_from_betti(b: &BettiTable, twist: i64) -> Result<ChernClasses> {
    let mut rank = 0i64;
    // truncated series 1 + c1 h + c2 h^2
    let (mut c1, mut c2) = (0i64, 0i64);
    for (i, d, count) in b.iter() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        rank += sign * count as i64;
        for _ in 0..count {
            if sign > 0 {
                // multiply by 1 - d h
                c2 -= d * c1;
                c1 -= d;
            } else {
                // multiply by 1 + d h + d^2 h^2
                c2 += d * c1 + d * d;
                c1 += d;
            }
        }
    }
    if rank != 2 {
        return Err(Error::InvalidInput(format!("module has rank {rank}, not 2")));
    }
    Ok(ChernClasses { c1, c2, twist: 0 }.twisted(twist))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    SemistableNotStable,
    Unstable,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub verdict: Stability,
    /// The twist bringing `c₁` to 0 or -1.
    pub twist: i64,
    pub c1_normalized: i64,
    /// `h⁰` of the normalized bundle and of its twist by -1.
    pub h0: i64,
    pub h0_below: i64,
}

/// Stability of `E` from the Hilbert function of `D₀` (which equals
/// `⊕ H⁰(E(d))` since `D₀` is reflexive). For normalized `c₁ = 0`, `E` is stable
/// iff `h⁰ = 0` and semistable iff `h⁰(-1) = 0`; for `c₁ = -1` both reduce
/// to `h⁰ = 0`.
pub fn stability_check(d0: &BettiTable, n_lines: usize) -> Result<StabilityReport> {
    let c1 = 1 - n_lines as i64;
    let twist = (-c1).div_euclid(2);
    let c1_normalized = c1 + 2 * twist;
    let h0 = d0.hilbert_function(3, twist);
    let h0_below = d0.hilbert_function(3, twist - 1);
    let verdict = match (c1_normalized, h0, h0_below) {
        (_, 0, _) => Stability::Stable,
        (0, _, 0) => Stability::SemistableNotStable,
        _ => Stability::Unstable,
    };
    Ok(StabilityReport { verdict, twist, c1_normalized, h0, h0_below })
}

/// A line in the projective plane, as a primitive integer form with positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    pub coeffs: [i64; 3],
}

impl Serialize for ProjLine {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            coeffs: &'a [i64; 3],
        }
        Repr { coeffs: &self.coeffs }.serialize(s)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl ProjLine {
    pub fn new(coeffs: [i64; 3]) -> Result<Self> {
        let g = coeffs.iter().fold(0, |g, &c| gcd(g, c));
        if g == 0 {
            return Err(Error::InvalidInput("zero linear form".into()));
        }
        let lead = coeffs.iter().find(|&&c| c != 0).unwrap().signum();
        Ok(ProjLine { coeffs: coeffs.map(|c| c / g * lead) })
    }

    pub fn from_hyperplane(h: &Hyperplane) -> Result<Self> {
        if h.dim() != 3 || !h.is_linear() {
            return Err(Error::InvalidInput(format!("{h} is not a line of the projective plane")));
        }
        let refs: Vec<&Rational> = h.coeffs.iter().collect();
        let scale = Rational::normalizer(&refs);
        let mut c = [0i64; 3];
        for (out, q) in c.iter_mut().zip(&h.coeffs) {
            *out = q.mul(&scale).to_i64().ok_or_else(|| Error::InvalidInput("coefficient too large".into()))?;
        }
        ProjLine::new(c)
    }

    pub fn to_hyperplane(&self) -> Hyperplane {
        Hyperplane::linear(&self.coeffs).expect("nonzero form")
    }

    /// Two integer points spanning the line; `(s, t) -> s p + t q` parametrizes it.
    pub fn parametrization(&self) -> [[i64; 3]; 2] {
        let [a, b, c] = self.coeffs;
        if a != 0 {
            [[-b, a, 0], [-c, 0, a]]
        } else if b != 0 {
            [[1, 0, 0], [0, -c, b]]
        } else {
            [[1, 0, 0], [0, 1, 0]]
        }
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&c, v) in self.coeffs.iter().zip(["x", "y", "z"]) {
            if c == 0 {
                continue;
            }
            let sign = match (first, c < 0) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{v}")?;
            } else {
                write!(f, "{sign}{mag}{v}")?;
            }
            first = false;
        }
        write!(f, " = 0")
    }
}

/// The presentation of `D₀` pulled back to a line: `matrix[j][i]` is the
/// coefficient of generator `i` in relation `j`, a form in `(s, t)` of degree
/// `syzygy_degrees[j] - generator_degrees[i]`.
#[derive(Clone, Debug)]
pub struct RestrictedPresentation<F: Field> {
    pub generator_degrees: Vec<i64>,
    pub syzygy_degrees: Vec<i64>,
    pub matrix: Vec<Vec<Polynomial<F>>>,
}

fn require_pd_at_most_one<F: Field>(res: &FreeResolution<F>) -> Result<()> {
    if res.nvars != 3 {
        return Err(Error::InvalidInput("bundles live on the projective plane: three variables".into()));
    }
    if res.length() > 1 {
        return Err(Error::InvalidInput(format!("projective dimension {} exceeds one", res.length())));
    }
    Ok(())
}

pub fn restrict_to_line<F: Field>(res: &FreeResolution<F>, line: &ProjLine) -> Result<RestrictedPresentation<F>> {
    require_pd_at_most_one(res)?;
    let [p, q] = line.parametrization();
    let images: Vec<Polynomial<F>> = (0..3)
        .map(|i| {
            Polynomial::var(2, 0).scale(&F::from_i64(p[i])).add(&Polynomial::var(2, 1).scale(&F::from_i64(q[i])))
        })
        .collect();
    let matrix = match res.differentials.first() {
        Some(cols) => cols
            .iter()
            .map(|col| col.iter().map(|e| e.substitute(&images)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(RestrictedPresentation {
        generator_degrees: res.shifts[0].clone(),
        syzygy_degrees: res.shifts.get(1).cloned().unwrap_or_default(),
        matrix,
    })
}

fn h0(e: i64) -> i64 {
    (e + 1).max(0)
}

fn h1(e: i64) -> i64 {
    (-e - 1).max(0)
}

impl<F: Field> RestrictedPresentation<F> {
    pub fn c1(&self) -> i64 {
        self.syzygy_degrees.iter().sum::<i64>() - self.generator_degrees.iter().sum::<i64>()
    }

    /// Coefficients reduced into another field, when all are representable.
    pub fn reduce<G: Field>(&self) -> Option<RestrictedPresentation<G>> {
        let to = |c: &F| c.to_rational().and_then(|q| G::from_rational(&q));
        let matrix = self
            .matrix
            .iter()
            .map(|col| col.iter().map(|e| e.map_coefficients(to)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(RestrictedPresentation {
            generator_degrees: self.generator_degrees.clone(),
            syzygy_degrees: self.syzygy_degrees.clone(),
            matrix,
        })
    }

    /// Whether the matrix has full column rank at one of a few fixed points.
    pub fn generically_injective(&self) -> bool {
        let points = [(1, 2), (3, 7), (1234, 5678), (-17, 29)];
        points.iter().any(|&(s, t)| {
            let pt = [F::from_i64(s), F::from_i64(t)];
            let mut ech = SparseEchelon::<F>::new();
            for col in &self.matrix {
                ech.insert(col.iter().map(|e| e.evaluate(&pt)).enumerate().filter(|(_, v)| !v.is_zero()).collect());
            }
            ech.rank() == self.matrix.len()
        })
    }

    /// `h⁰(E|_L(d))`.
    pub fn h0(&self, d: i64) -> i64 {
        let hb: i64 = self.generator_degrees.iter().map(|&a| h0(d - a)).sum();
        let ha: i64 = self.syzygy_degrees.iter().map(|&b| h0(d - b)).sum();
        hb - ha + self.h1_kernel(d)
    }

    /// Dimension of the kernel of `H¹(A(d)) -> H¹(B(d))`.
    fn h1_kernel(&self, d: i64) -> i64 {
        // offsets of the target basis: summand i, basis s^-u t^-(n-u) for u = 1..n-1
        let mut offsets = Vec::new();
        let mut total = 0i64;
        for &a in &self.generator_degrees {
            offsets.push(total);
            total += h1(d - a);
        }
        let mut ech = SparseEchelon::<F>::new();
        let mut source_dim = 0i64;
        for (j, &b) in self.syzygy_degrees.iter().enumerate() {
            let n = b - d;
            if n < 2 {
                continue;
            }
            for u in 1..n {
                let v = n - u;
                source_dim += 1;
                let mut col: BTreeMap<usize, F> = BTreeMap::new();
                for (i, &a) in self.generator_degrees.iter().enumerate() {
                    let target_n = a - d;
                    if target_n < 2 {
                        continue;
                    }
                    for (m, c) in self.matrix[j][i].terms() {
                        let (es, et) = (m.exponent(0) as i64 - u, m.exponent(1) as i64 - v);
                        if es <= -1 && et <= -1 {
                            let row = (offsets[i] + (-es) - 1) as usize;
                            let e = col.entry(row).or_insert_with(F::zero);
                            *e = e.add(c);
                        }
                    }
                }
                ech.insert(col.into_iter().collect());
            }
        }
        source_dim - ech.rank() as i64
    }
}

/// `(e₁, e₂)` with `E|_L ≅ O(e₁) ⊕ O(e₂)`, `e₁ ≤ e₂`.
///
/// Over Q a line is first tried modulo a prime: if the reduced presentation is
/// still injective and already has no sections one twist below the balanced
/// splitting, the same holds over Q (sections can only appear on
/// reduction), so the splitting is balanced. Other lines are computed exactly.
pub fn splitting_type<F: Field>(res: &FreeResolution<F>, line: &ProjLine) -> Result<(i64, i64)> {
    let p = restrict_to_line(res, line)?;
    if F::CHARACTERISTIC == 0 {
        if let Some(split) = balanced_by_reduction(&p) {
            return Ok(split);
        }
    }
    split_exactly(&p, line)
}

fn balanced_by_reduction<F: Field>(p: &RestrictedPresentation<F>) -> Option<(i64, i64)> {
    let q = p.reduce::<Fp>()?;
    if !q.generically_injective() {
        return None;
    }
    let c1 = p.c1();
    let e2 = c1.div_euclid(2) + c1.rem_euclid(2);
    (q.h0(-e2 - 1) == 0).then_some((c1 - e2, e2))
}

fn split_exactly<F: Field>(p: &RestrictedPresentation<F>, line: &ProjLine) -> Result<(i64, i64)> {
    let c1 = p.c1();
    let max_a = p.generator_degrees.iter().copied().max().unwrap_or(0);
    // E|_L is a quotient of ⊕ O(-a), so e₁ ≥ -max a and e₂ ≤ c₁ + max a
    let lo = -(c1 + max_a);
    let hi = (-c1).div_euclid(2) + 1;
    let mut found = None;
    for d in lo..=hi {
        if p.h0(d) > 0 {
            found = Some(d);
            break;
        }
    }
    let d = found.ok_or_else(|| Error::VerificationFailed(format!("no sections on {line} up to twist {hi}")))?;
    let e2 = -d;
    let e1 = c1 - e2;
    // the split form must reproduce h⁰ at the twists where the smaller summand matters
    for t in [-e1 - 1, -e1, -e1 + 1] {
        if p.h0(t) != h0(t + e1) + h0(t + e2) {
            return Err(Error::VerificationFailed(format!("inconsistent cohomology on {line} at twist {t}")));
        }
    }
    Ok((e1, e2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// `c₁ = 0` after twisting.
    F,
    /// `c₁` odd; reported for `E` itself.
    E,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub line: ProjLine,
    pub splitting: [i64; 2],
    pub order: i64,
    pub normalization: Normalization,
    pub splitting_e: [i64; 2],
}

impl SplittingReport {
    pub fn from_splitting(line: ProjLine, (e1, e2): (i64, i64)) -> Self {
        let c1 = e1 + e2;
        let (splitting, normalization) = if c1 % 2 == 0 {
            let t = -c1 / 2;
            ([e1 + t, e2 + t], Normalization::F)
        } else {
            ([e1, e2], Normalization::E)
        };
        SplittingReport { line, splitting, order: (e2 - e1) / 2, normalization, splitting_e: [e1, e2] }
    }
}

/// Splitting `(-n + t, 1 - t)` (sorted) predicted from counts: `t = |A^H|` for
/// a line of the arrangement, valid when `n - t ≤ ⌊n/2⌋`; `t = |A ∩ L|` for
/// any other line, valid when `n - t ≥ ⌈n/2⌉`.
pub fn predicted_splitting(n: usize, t: usize, member: bool) -> Option<(i64, i64)> {
    let (n, t) = (n as i64, t as i64);
    let holds = if member { n - t <= n / 2 } else { n - t >= (n + 1) / 2 };
    holds.then(|| {
        let (a, b) = (t - n, 1 - t);
        (a.min(b), a.max(b))
    })
}

/// Prediction for a line against a given arrangement.
pub fn predicted_splitting_for(a: &Arrangement, line: &ProjLine) -> Option<(i64, i64)> {
    let h = line.to_hyperplane();
    predicted_splitting(a.len(), a.trace_count(&h), a.contains(&h))
}

/// Every line of the arrangement, the extra lines, and `n_random` seeded
/// random lines with coefficients in `[-9, 9]`, without repetition.
pub fn candidate_lines(a: &Arrangement, extra: &[ProjLine], n_random: usize, seed: u64) -> Result<Vec<ProjLine>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |l: ProjLine, out: &mut Vec<ProjLine>| {
        if seen.insert(l.clone()) {
            out.push(l);
        }
    };
    for h in &a.hyperplanes {
        push(ProjLine::from_hyperplane(h)?, &mut out);
    }
    for l in extra {
        push(l.clone(), &mut out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn = 0;
    while drawn < n_random {
        let c = [rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(-9..=9)];
        let Ok(l) = ProjLine::new(c) else { continue };
        if a.contains(&l.to_hyperplane()) || out.contains(&l) {
            continue;
        }
        push(l, &mut out);
        drawn += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct JumpingScan {
    pub seed: u64,
    pub reports: Vec<SplittingReport>,
    pub max_order: i64,
    /// Lines attaining `max_order`.
    pub maximal_lines: Vec<ProjLine>,
    /// Lines whose order exceeds the stated bound.
    pub exceeding: Vec<ProjLine>,
}

/// Splitting types on all candidates, computed in parallel.
pub fn jumping_scan<F: Field>(
    res: &FreeResolution<F>,
    candidates: &[ProjLine],
    bound: Option<i64>,
    seed: u64,
) -> Result<JumpingScan> {
    require_pd_at_most_one(res)?;
    let reports: Vec<SplittingReport> = candidates
        .par_iter()
        .map(|l| Ok(SplittingReport::from_splitting(l.clone(), splitting_type(res, l)?)))
        .collect::<Result<_>>()?;
    let max_order = reports.iter().map(|r| r.order).max().unwrap_or(0);
    let maximal_lines = reports.iter().filter(|r| r.order == max_order).map(|r| r.line.clone()).collect();
    let exceeding =
        reports.iter().filter(|r| bound.is_some_and(|b| r.order > b)).map(|r| r.line.clone()).collect();
    Ok(JumpingScan { seed, reports, max_order, maximal_lines, exceeding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logder::d0_module;

    type Q = Rational;

    #[test]
    fn boolean_chern() {
        let t = BettiTable::from_entries([(0, 1, 2)]);
        let c = chern_from_betti(&t, 0).unwrap();
        assert_eq!((c.c1, c.c2), (-2, 1));
        assert_eq!(stability_check(&t, 3).unwrap().verdict, Stability::SemistableNotStable);
    }

    #[test]
    fn twisting_is_consistent() {
        let t = BettiTable::from_entries([(0, 9, 2), (0, 10, 2), (1, 11, 2)]);
        let c = chern_from_betti(&t, 0).unwrap();
        assert_eq!(c.twisted(8), chern_from_betti(&t, 8).unwrap());
        assert_eq!((c.twisted(8).c1, c.twisted(8).c2), (0, 4));
    }

    #[test]
    fn rank_is_checked() {
        let t = BettiTable::from_entries([(0, 1, 3)]);
        assert!(chern_from_betti(&t, 0).is_err());
    }

    #[test]
    fn line_normalization() {
        let l = ProjLine::new([0, -2, 6]).unwrap();
        assert_eq!(l.coeffs, [0, 1, -3]);
        assert_eq!(l.to_string(), "y - 3z = 0");
        let h = Hyperplane::linear(&[2, 3, 1]).unwrap();
        assert_eq!(ProjLine::from_hyperplane(&h).unwrap().coeffs, [2, 3, 1]);
        for c in [[1, 2, 3], [0, 1, -3], [0, 0, 1]] {
            let l = ProjLine::new(c).unwrap();
            for p in l.parametrization() {
                assert_eq!(p.iter().zip(&l.coeffs).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn boolean_splitting() {
        let a = Arrangement::boolean(3);
        let d0 = d0_module::<Q>(&a).unwrap();
        let res = d0.resolution().unwrap();
        for c in [[1, 0, 0], [1, 1, 1], [2, -3, 5]] {
            let l = ProjLine::new(c).unwrap();
            assert_eq!(splitting_type(&res, &l).unwrap(), (-1, -1));
        }
        assert_eq!(predicted_splitting_for(&a, &ProjLine::new([1, 0, 0]).unwrap()), Some((-1, -1)));
        assert_eq!(predicted_splitting_for(&a, &ProjLine::new([1, 1, 1]).unwrap()), None);
    }

    #[test]
    fn restriction_to_infinity_keeps_leading_forms() {
        // the line z = 0 is parametrized by (s, t) -> (s, t, 0)
        let hs = [[1, 0, 0], [1, 0, -1], [0, 1, 0], [0, 1, -1], [0, 0, 1]];
        let a = Arrangement::new_central(3, hs.iter().map(|c| Hyperplane::linear(c).unwrap()).collect()).unwrap();
        let res = d0_module::<Q>(&a).unwrap().resolution().unwrap();
        let p = restrict_to_line(&res, &ProjLine::new([0, 0, 1]).unwrap()).unwrap();
        assert_eq!(p.c1(), 1 - a.len() as i64);
        assert_eq!(p.generator_degrees, res.shifts[0]);
        assert_eq!(ProjLine::new([0, 0, 1]).unwrap().parametrization(), [[1, 0, 0], [0, 1, 0]]);
    }
}
