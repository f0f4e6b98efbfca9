//! Addition and deletion tools: Terao deletion, the multiple deletion
//! theorems, Yoshinaga's criterion, B-sequence bookkeeping, Betti transfer
//! along a single deletion or addition, SPOG multiple deletion and deletion
//! chains guarded by local freeness.
//!
//! Certificates annotate direct computations. A failed hypothesis is reported
//! in the certificate, never raised.

use serde::Serialize;

use crate::arrangement::{Arrangement, Flat, Hyperplane, Multiarrangement};
use crate::error::{Error, Result};
use crate::lattice::{characteristic_polynomial, is_locally_free_along, LocalFreenessReport};
use crate::logder::{derivation_module, exponents_if_free, multi_exponents, oracle_dimension};
use crate::monomial::binomial;
use crate::resolution::BettiTable;
use crate::rootsys::RootSystem;
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeletionTheorem {
    Terao,
    Mdt,
    Mdt2,
    Yoshinaga,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeletionCertificate {
    pub theorem: DeletionTheorem,
    pub hyperplane: String,
    /// `|A|`.
    pub size: usize,
    /// `|A^H|`.
    pub restriction_size: usize,
    /// Exponents of `A` (for Yoshinaga: none, the input freeness is the question).
    pub input_exponents: Option<Vec<i64>>,
    /// Exponents the theorem predicts (for Yoshinaga: of `A` itself when free).
    pub output_exponents: Option<Vec<i64>>,
    /// `χ₀(A; 0)` and the Ziegler exponents, for Yoshinaga.
    pub chi0_at_zero: Option<i64>,
    pub ziegler_exponents: Option<(i64, i64)>,
    pub hypothesis_holds: bool,
    pub failure: Option<String>,
    /// Whether a direct computation reproduces `output_exponents`.
    pub confirmed: Option<bool>,
}

impl DeletionCertificate {
    fn new(theorem: DeletionTheorem, a: &Arrangement, h: &Hyperplane) -> Self {
        DeletionCertificate {
            theorem,
            hyperplane: h.format_with(&a.var_names()),
            size: a.len(),
            restriction_size: a.trace_count(h),
            input_exponents: None,
            output_exponents: None,
            chi0_at_zero: None,
            ziegler_exponents: None,
            hypothesis_holds: false,
            failure: None,
            confirmed: None,
        }
    }

    fn fail(mut self, why: impl Into<String>) -> Self {
        self.hypothesis_holds = false;
        self.failure = Some(why.into());
        self
    }

    /// Hypothesis held and the direct computation agrees.
    pub fn certified(&self) -> bool {
        self.hypothesis_holds && self.confirmed == Some(true)
    }

    /// `|A| - |A^H|`.
    pub fn difference(&self) -> i64 {
        self.size as i64 - self.restriction_size as i64
    }
}

fn free_exponents<F: Field>(a: &Arrangement) -> Result<Option<Vec<i64>>> {
    Ok(exponents_if_free::<F>(a)?.exponents().map(|e| e.to_vec()))
}

fn confirm<F: Field>(a: &Arrangement, expected: &[i64]) -> Result<bool> {
    Ok(free_exponents::<F>(a)?.as_deref() == Some(expected))
}

fn require_member(a: &Arrangement, h: &Hyperplane) -> Result<()> {
    if !a.central {
        return Err(Error::InvalidInput("needs a central arrangement".into()));
    }
    if !a.contains(h) {
        return Err(Error::InvalidInput(format!("{h} is not in the arrangement")));
    }
    Ok(())
}

fn sorted(mut v: Vec<i64>) -> Vec<i64> {
    v.sort();
    v
}

/// Terao's deletion theorem: `A` free, `A^H` free with exponents `exp(A)`
/// minus one entry `d` gives `A \ H` free with `d` replaced by `d - 1`.
pub fn terao_deletion_step<F: Field>(a: &Arrangement, h: &Hyperplane) -> Result<DeletionCertificate> {
    require_member(a, h)?;
    let mut cert = DeletionCertificate::new(DeletionTheorem::Terao, a, h);
    let Some(exp) = free_exponents::<F>(a)? else {
        return Ok(cert.fail("arrangement is not free"));
    };
    cert.input_exponents = Some(exp.clone());
    let Some(rexp) = free_exponents::<F>(&a.restrict(h)?)? else {
        return Ok(cert.fail("restriction is not free"));
    };
    let mut rest = exp.clone();
    for e in &rexp {
        match rest.iter().position(|x| x == e) {
            Some(i) => {
                rest.remove(i);
            }
            None => return Ok(cert.fail(format!("restriction exponents {rexp:?} are not contained in {exp:?}"))),
        }
    }
    if rest.len() != 1 {
        return Ok(cert.fail("restriction does not drop exactly one exponent"));
    }
    let d = rest[0];
    let mut out = exp.clone();
    let i = out.iter().position(|&x| x == d).unwrap();
    out[i] -= 1;
    let out = sorted(out);
    cert.hypothesis_holds = true;
    cert.confirmed = Some(confirm::<F>(&a.delete(h)?, &out)?);
    cert.output_exponents = Some(out);
    Ok(cert)
}

/// Exponents `(1, d_2, ..., d_l)` with `1 < d_2`, as required by the
/// multiple deletion theorems.
fn split_exponents(exp: &[i64]) -> Option<&[i64]> {
    match exp {
        [1, rest @ ..] if rest.first().is_some_and(|&d| d > 1) => Some(rest),
        _ => None,
    }
}

/// Multiple deletion: `exp(A) = (1, d_2, ...)` and `|A| - |A^H| = d_2`
/// give `A \ H` free with `d_2` decremented.
pub fn mdt_step<F: Field>(a: &Arrangement, h: &Hyperplane) -> Result<DeletionCertificate> {
    require_member(a, h)?;
    let mut cert = DeletionCertificate::new(DeletionTheorem::Mdt, a, h);
    let Some(exp) = free_exponents::<F>(a)? else {
        return Ok(cert.fail("arrangement is not free"));
    };
    cert.input_exponents = Some(exp.clone());
    let Some(rest) = split_exponents(&exp) else {
        return Ok(cert.fail(format!("exponents {exp:?} are not of the form (1, d2, ...) with d2 > 1")));
    };
    let d2 = rest[0];
    if cert.difference() != d2 {
        let diff = cert.difference();
        return Ok(cert.fail(format!("|A| - |A^H| = {diff} differs from d2 = {d2}")));
    }
    let mut out = exp.clone();
    out[1] -= 1;
    let out = sorted(out);
    cert.hypothesis_holds = true;
    cert.confirmed = Some(confirm::<F>(&a.delete(h)?, &out)?);
    cert.output_exponents = Some(out);
    Ok(cert)
}

/// Second multiple deletion: `1 < d_2 < d_3` and `|A| - |A^H| = d_3` give
/// `A \ H` free with `d_3` decremented.
pub fn mdt2_step<F: Field>(a: &Arrangement, h: &Hyperplane) -> Result<DeletionCertificate> {
    require_member(a, h)?;
    let mut cert = DeletionCertificate::new(DeletionTheorem::Mdt2, a, h);
    let Some(exp) = free_exponents::<F>(a)? else {
        return Ok(cert.fail("arrangement is not free"));
    };
    cert.input_exponents = Some(exp.clone());
    let Some(rest) = split_exponents(&exp) else {
        return Ok(cert.fail(format!("exponents {exp:?} are not of the form (1, d2, ...) with d2 > 1")));
    };
    if rest.len() < 2 {
        return Ok(cert.fail("needs at least three exponents"));
    }
    let (d2, d3) = (rest[0], rest[1]);
    if d2 >= d3 {
        return Ok(cert.fail(format!("needs d2 < d3, found d2 = {d2}, d3 = {d3}")));
    }
    if cert.difference() != d3 {
        let diff = cert.difference();
        return Ok(cert.fail(format!("|A| - |A^H| = {diff} differs from d3 = {d3}")));
    }
    let mut out = exp.clone();
    out[2] -= 1;
    let out = sorted(out);
    cert.hypothesis_holds = true;
    cert.confirmed = Some(confirm::<F>(&a.delete(h)?, &out)?);
    cert.output_exponents = Some(out);
    Ok(cert)
}

/// Yoshinaga's criterion in rank three: with Ziegler exponents `(d_1, d_2)`
/// along `H`, `A` is free iff `χ₀(A; 0) = d_1 d_2`.
///
/// `hypothesis_holds` carries the verdict; `output_exponents` is `(1, d_1, d_2)`
/// when free.
pub fn yoshinaga_check<F: Field>(a: &Arrangement, h: &Hyperplane) -> Result<DeletionCertificate> {
    require_member(a, h)?;
    if a.dim != 3 || a.rank() != 3 {
        return Err(Error::InvalidInput("Yoshinaga's criterion needs an essential arrangement in three variables".into()));
    }
    let mut cert = DeletionCertificate::new(DeletionTheorem::Yoshinaga, a, h);
    let (d1, d2) = multi_exponents::<F>(&a.ziegler_restriction(h)?)?;
    let chi0 = characteristic_polynomial(a)?.reduced_eval(0)? as i64;
    cert.ziegler_exponents = Some((d1, d2));
    cert.chi0_at_zero = Some(chi0);
    let out = sorted(vec![1, d1, d2]);
    if chi0 == d1 * d2 {
        cert.hypothesis_holds = true;
        cert.confirmed = Some(confirm::<F>(a, &out)?);
        cert.output_exponents = Some(out);
    } else {
        cert.failure = Some(format!("χ₀(0) = {chi0} but d1 d2 = {}", d1 * d2));
        // the criterion also predicts non-freeness
        cert.confirmed = Some(free_exponents::<F>(a)?.is_none());
    }
    Ok(cert)
}

/// One degree of the B-sequence bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BSequenceRow {
    pub degree: u32,
    pub d0_full: usize,
    pub d0_deleted: usize,
    /// `dim D₀(A \ H)_d - dim D₀(A)_d`, the image of the boundary map.
    pub deficit: usize,
    /// `dim (S/α_H)_{d - deg B}`.
    pub target: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BSequenceReport {
    pub hyperplane: String,
    pub deg_b: i64,
    pub rows: Vec<BSequenceRow>,
    /// The boundary map never exceeds its target (always true for an exact sequence).
    pub exact: bool,
    /// The boundary map is onto in every degree of the window.
    pub surjective: bool,
}

/// Degreewise comparison of `D₀(A)` and `D₀(A \ H)` against the target of the
/// boundary map `D(A \ H) -> (S/α_H)[-deg B]`, using the linear algebra oracle.
pub fn b_sequence_report<F: Field>(
    a: &Arrangement,
    h: &Hyperplane,
    window: std::ops::RangeInclusive<u32>,
) -> Result<BSequenceReport> {
    require_member(a, h)?;
    let n = a.dim;
    let deg_b = a.len() as i64 - 1 - a.trace_count(h) as i64;
    let full = Multiarrangement::simple(a.clone())?;
    let deleted = Multiarrangement::simple(a.delete(h)?)?;
    // D = S θ_E ⊕ D₀
    let d0 = |ma: &Multiarrangement, d: u32| -> Result<usize> {
        let euler = if d >= 1 { binomial((d - 1) as usize + n - 1, n - 1) } else { 0 };
        Ok(oracle_dimension::<F>(ma, d)? - euler)
    };
    let mut rows = Vec::new();
    for d in window {
        let (f, g) = (d0(&full, d)?, d0(&deleted, d)?);
        let e = d as i64 - deg_b;
        let target = if e >= 0 { binomial(e as usize + n - 2, n - 2) } else { 0 };
        rows.push(BSequenceRow { degree: d, d0_full: f, d0_deleted: g, deficit: g - f, target });
    }
    let exact = rows.iter().all(|r| r.deficit <= r.target);
    let surjective = rows.iter().all(|r| r.deficit == r.target);
    Ok(BSequenceReport { hyperplane: h.format_with(&a.var_names()), deg_b, rows, exact, surjective })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferLemma {
    Delete,
    Add,
}

/// Predicted Betti table of `D₀` after deleting or adding one line.
#[derive(Clone, Debug, Serialize)]
pub struct BettiPrediction {
    pub lemma: TransferLemma,
    pub hyperplane: String,
    pub d: i64,
    pub max_generator_degree: Option<i64>,
    pub max_syzygy_degree: Option<i64>,
    pub hypothesis_holds: bool,
    pub predicted: Option<BettiTable>,
}

fn transfer(
    lemma: TransferLemma,
    hyperplane: String,
    d: i64,
    current: &BettiTable,
    syz_slack: i64,
    shift: i64,
) -> Result<BettiPrediction> {
    if current.projective_dimension().unwrap_or(0) > 1 {
        return Err(Error::InvalidInput("transfer lemmas need projective dimension at most one".into()));
    }
    let max_gen = current.degrees(0).into_iter().max();
    let max_syz = current.degrees(1).into_iter().max();
    let holds = max_gen.is_none_or(|g| d > g) && max_syz.is_none_or(|s| s < d + syz_slack);
    let predicted = holds.then(|| {
        let mut t = current.shifted(shift);
        t.add(0, d, 1);
        t.add(1, d + 1, 1);
        t
    });
    Ok(BettiPrediction {
        lemma,
        hyperplane,
        d,
        max_generator_degree: max_gen,
        max_syzygy_degree: max_syz,
        hypothesis_holds: holds,
        predicted,
    })
}

fn require_line_arrangement(a: &Arrangement) -> Result<()> {
    if !a.central || a.dim != 3 {
        return Err(Error::InvalidInput("transfer lemmas need a central arrangement in three variables".into()));
    }
    Ok(())
}

/// Deleting `H` from a line arrangement whose `D₀` has Betti table `current`:
/// with `d = |A| - 1 - |A^H|` above every generator degree and every syzygy
/// degree below `d + 3`, one generator of degree `d` and one syzygy of degree
/// `d + 1` appear.
pub fn predict_betti_delete(a: &Arrangement, h: &Hyperplane, current: &BettiTable) -> Result<BettiPrediction> {
    require_line_arrangement(a)?;
    require_member(a, h)?;
    let d = a.len() as i64 - 1 - a.trace_count(h) as i64;
    transfer(TransferLemma::Delete, h.format_with(&a.var_names()), d, current, 3, 0)
}

/// Adding `H` (not in `A`) to a line arrangement whose `D₀` has Betti table
/// `current`: with `d = |(A ∪ H)^H| - 1` above every generator degree and
/// every syzygy degree below `d + 2`, the table shifts by one and gains a
/// generator of degree `d` and a syzygy of degree `d + 1`.
pub fn predict_betti_add(a: &Arrangement, h: &Hyperplane, current: &BettiTable) -> Result<BettiPrediction> {
    require_line_arrangement(a)?;
    if a.contains(h) {
        return Err(Error::InvalidInput(format!("{h} is already in the arrangement")));
    }
    let d = a.trace_count(h) as i64 - 1;
    transfer(TransferLemma::Add, h.format_with(&a.var_names()), d, current, 2, 1)
}

/// Prediction for deleting several hyperplanes from a free arrangement at once.
#[derive(Clone, Debug, Serialize)]
pub struct SpogPrediction {
    pub exponents: Vec<i64>,
    /// `e_i = |A| - |A^{H_i}| - 1`.
    pub levels: Vec<i64>,
    /// Predicted resolution of `D(A \ {H_i})`.
    pub predicted_d: BettiTable,
    /// The same with the Euler summand removed.
    pub predicted_d0: BettiTable,
    /// Each `A \ H_i` is non-free, so the predicted resolution is minimal.
    pub minimal: bool,
}

/// With `A` free and `|A_{H_i ∩ H_j}| = 2` for all pairs, `D(A \ {H_i})` has
/// the resolution `0 -> ⊕ S[-e_i - 1] -> ⊕ S[-d_i] ⊕ ⊕ S[-e_i] -> D -> 0`.
pub fn spog_multiple_deletion<F: Field>(a: &Arrangement, hs: &[Hyperplane]) -> Result<SpogPrediction> {
    for h in hs {
        require_member(a, h)?;
    }
    for (i, hi) in hs.iter().enumerate() {
        for hj in &hs[i + 1..] {
            if hi == hj {
                return Err(Error::InvalidInput(format!("{hi} is listed twice")));
            }
            let x = Flat::from_normals(a.dim, [hi.coeffs.clone(), hj.coeffs.clone()]);
            let c = a.localize(&x)?.len();
            if c != 2 {
                return Err(Error::HypothesisFailed(format!("{c} hyperplanes contain the intersection of {hi} and {hj}")));
            }
        }
    }
    let exponents = free_exponents::<F>(a)?.ok_or_else(|| Error::HypothesisFailed("arrangement is not free".into()))?;
    let levels: Vec<i64> = hs.iter().map(|h| a.len() as i64 - a.trace_count(h) as i64 - 1).collect();
    let mut predicted_d = BettiTable::new();
    for &d in &exponents {
        predicted_d.add(0, d, 1);
    }
    for &e in &levels {
        predicted_d.add(0, e, 1);
        predicted_d.add(1, e + 1, 1);
    }
    let mut predicted_d0 = predicted_d.clone();
    if exponents.first() == Some(&1) {
        predicted_d0 = BettiTable::from_entries(
            predicted_d.iter().map(|(i, d, c)| (i, d, if i == 0 && d == 1 { c - 1 } else { c })),
        );
    }
    let mut minimal = true;
    for h in hs {
        // more than rank-many minimal generators rules out freeness
        if derivation_module::<F>(&a.delete(h)?)?.generators.len() <= a.dim {
            minimal = false;
        }
    }
    Ok(SpogPrediction { exponents, levels, predicted_d, predicted_d0, minimal })
}

/// One deletion in a chain.
#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub deleted: String,
    pub height: i64,
    pub size_after: usize,
    pub local_freeness: LocalFreenessReport,
    /// Direct projective dimension after the step, when requested.
    pub projective_dimension: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub start_exponents: Option<Vec<i64>>,
    pub steps: Vec<ChainStep>,
    /// Where the chain stopped: the step and the non-free flat.
    pub aborted: Option<(usize, Vec<String>)>,
    /// `pd ≤ 1` follows for the final arrangement when every gate passed.
    pub concluded_pd_at_most_one: bool,
    pub final_projective_dimension: Option<usize>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.concluded_pd_at_most_one && self.final_projective_dimension.is_some_and(|p| p <= 1)
    }
}

/// Height of the root whose (coned) translate is `h`, if any.
pub fn root_height(rs: &RootSystem, h: &Hyperplane) -> Option<i64> {
    let n = rs.dim();
    if h.dim() != n && h.dim() != n + 1 {
        return None;
    }
    rs.roots
        .iter()
        .find(|r| {
            let lin = Hyperplane::linear(&r.form).expect("roots are nonzero");
            lin.coeffs[..] == h.coeffs[..n]
        })
        .map(|r| r.height)
}

/// Deletes `order` from the free arrangement `start` one hyperplane at a time,
/// highest root first (ties lexicographic), checking local freeness in
/// codimension three along each hyperplane before it is removed. With
/// `direct_steps`, the projective dimension after each step is computed too.
pub fn verify_deletion_chain<F: Field>(
    rs: &RootSystem,
    start: &Arrangement,
    order: &[Hyperplane],
    direct_steps: bool,
) -> Result<ChainReport> {
    let mut keyed = Vec::new();
    for h in order {
        let height = root_height(rs, h).ok_or_else(|| Error::InvalidInput(format!("{h} is not a root translate")))?;
        keyed.push((height, h.clone()));
    }
    keyed.sort_by(|(ha, a), (hb, b)| hb.cmp(ha).then_with(|| a.cmp(b)));
    let start_exponents = free_exponents::<F>(start)?;
    let mut report = ChainReport {
        start_exponents: start_exponents.clone(),
        steps: Vec::new(),
        aborted: None,
        concluded_pd_at_most_one: false,
        final_projective_dimension: None,
    };
    if start_exponents.is_none() {
        return Ok(report);
    }
    let names = start.var_names();
    let mut a = start.clone();
    for (i, (height, h)) in keyed.iter().enumerate() {
        let lf = is_locally_free_along::<F>(&a, h, 3)?;
        a = a.delete(h)?;
        let failed = lf.non_free.first().cloned();
        let pd = if direct_steps { Some(derivation_module::<F>(&a)?.projective_dimension()?) } else { None };
        report.steps.push(ChainStep {
            deleted: h.format_with(&names),
            height: *height,
            size_after: a.len(),
            local_freeness: lf,
            projective_dimension: pd,
        });
        if let Some(flat) = failed {
            report.aborted = Some((i, flat));
            return Ok(report);
        }
    }
    report.concluded_pd_at_most_one = true;
    report.final_projective_dimension = Some(match report.steps.last().and_then(|s| s.projective_dimension) {
        Some(p) => p,
        None => derivation_module::<F>(&a)?.projective_dimension()?,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logder::d0_module;
    use crate::scalar::Rational;

    type Q = Rational;

    fn plane(c: &[i64]) -> Hyperplane {
        Hyperplane::linear(c).unwrap()
    }

    #[test]
    fn boolean_terao() {
        let a = Arrangement::boolean(3);
        let c = terao_deletion_step::<Q>(&a, &plane(&[0, 0, 1])).unwrap();
        assert!(c.certified());
        assert_eq!(c.output_exponents, Some(vec![0, 1, 1]));
    }

    #[test]
    fn boolean_yoshinaga() {
        let a = Arrangement::boolean(3);
        let c = yoshinaga_check::<Q>(&a, &plane(&[0, 0, 1])).unwrap();
        assert_eq!(c.ziegler_exponents, Some((1, 1)));
        assert_eq!(c.chi0_at_zero, Some(1));
        assert!(c.certified());
    }

    #[test]
    fn mdt_rejects_wrong_difference() {
        // x, y, z, x - y, x - z, y - z: exponents (1, 2, 3), |A| - |A^H| = 3
        let hs = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, -1, 0], [1, 0, -1], [0, 1, -1]];
        let a = Arrangement::new_central(3, hs.iter().map(|c| plane(c)).collect()).unwrap();
        let c = mdt_step::<Q>(&a, &plane(&[1, -1, 0])).unwrap();
        assert_eq!(c.input_exponents, Some(vec![1, 2, 3]));
        assert_eq!(c.difference(), 3);
        assert!(!c.hypothesis_holds);
        let c2 = mdt2_step::<Q>(&a, &plane(&[1, -1, 0])).unwrap();
        assert!(c2.certified());
        assert_eq!(c2.output_exponents, Some(vec![1, 2, 2]));
    }

    #[test]
    fn transfer_rejects_low_degree() {
        let a = Arrangement::boolean(3);
        let current = BettiTable::from_entries([(0, 1, 2)]);
        let p = predict_betti_delete(&a, &plane(&[0, 0, 1]), &current).unwrap();
        assert_eq!(p.d, 0);
        assert!(!p.hypothesis_holds);
        assert!(p.predicted.is_none());
        let q = predict_betti_add(&a, &plane(&[1, 1, 1]), &current).unwrap();
        assert_eq!(q.d, 2);
        assert!(q.hypothesis_holds);
    }

    #[test]
    fn b_sequence_boolean() {
        let a = Arrangement::boolean(3);
        let r = b_sequence_report::<Q>(&a, &plane(&[0, 0, 1]), 0..=4).unwrap();
        assert_eq!(r.deg_b, 0);
        assert!(r.exact && r.surjective);
    }

    #[test]
    fn spog_single_deletion_from_braid() {
        let hs = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, -1, 0], [1, 0, -1], [0, 1, -1]];
        let a = Arrangement::new_central(3, hs.iter().map(|c| plane(c)).collect()).unwrap();
        // deleting x leaves a free arrangement: the prediction is not minimal
        let p = spog_multiple_deletion::<Q>(&a, &[plane(&[1, 0, 0])]).unwrap();
        assert_eq!(p.levels, vec![2]);
        assert!(!p.minimal);
        assert!(spog_multiple_deletion::<Q>(&a, &[plane(&[1, 0, 0]), plane(&[0, 1, 0])]).is_err());
        let d0 = d0_module::<Q>(&a.delete(&plane(&[1, 0, 0])).unwrap()).unwrap();
        assert_eq!(d0.degrees(), vec![2, 2]);
    }
}
