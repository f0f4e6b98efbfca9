//! The arrangement families behind the main computations: the B₂ chains
//! between a free Catalan/Shi-type start and `c𝒜^{[-k,k+j]}`, the A₃ chain of
//! multiple deletions, and height-ordered deletion chains for simply laced types.

use serde::Serialize;

use crate::arrangement::{Arrangement, Hyperplane};
use crate::error::{Error, Result};
use crate::freeness::{
    mdt2_step, mdt_step, predict_betti_add, predict_betti_delete, spog_multiple_deletion, terao_deletion_step,
    yoshinaga_check, BettiPrediction, DeletionCertificate, SpogPrediction, TransferLemma,
};
use crate::logder::{d0_module, exponents_if_free};
use crate::resolution::BettiTable;
use crate::rootsys::{Root, RootSystem, RootType};
use crate::scalar::Field;

/// The coned translate `α = s`, i.e. `α - s z = 0`.
pub fn translate(root: &Root, s: i64) -> Hyperplane {
    let mut c = root.form.clone();
    c.push(-s);
    Hyperplane::linear(&c).expect("roots are nonzero")
}

/// `c𝒜^{[a,b]}` for a root system.
pub fn coned_deformation(rs: &RootSystem, a: i64, b: i64) -> Result<Arrangement> {
    Arrangement::deformation(rs, a, b)?.cone()
}

/// Free resolution table of a free module with the given generator degrees.
fn free_table(degrees: &[i64]) -> BettiTable {
    BettiTable::from_entries(degrees.iter().map(|&d| (0, d, 1)))
}

/// `D₀` table of a free arrangement: the exponents without one Euler `1`.
pub fn free_d0_table(exponents: &[i64]) -> BettiTable {
    let mut e = exponents.to_vec();
    if let Some(i) = e.iter().position(|&x| x == 1) {
        e.remove(i);
    }
    free_table(&e)
}

/// `c𝒜^{[-k,k+j]}` of type B₂ with `j = 2m + r`, and the chain of line
/// arrangements `B_0, ..., B_m = c𝒜^{[-k,k+j]}` in coordinates `(x, y, z)`.
///
/// `B_u` adds the lines `y = s z` for `s` in `[-k-m+u, -k-1]` and removes those
/// with `s` in `[k+m+u+r+1, k+2m+r]`. Going from `B_u` to `B_{u+1}` deletes
/// `H_u: y = (-k-m+u) z` and adds `L_u: y = (k+m+u+r+1) z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct B2Family {
    pub k: i64,
    pub j: i64,
    pub m: i64,
    pub r: i64,
}

impl B2Family {
    pub fn new(k: i64, j: i64) -> Result<Self> {
        if k < 0 || j < 1 {
            return Err(Error::InvalidInput(format!("need k >= 0 and j >= 1, got k = {k}, j = {j}")));
        }
        Ok(B2Family { k, j, m: j / 2, r: j % 2 })
    }

    pub fn root_system() -> RootSystem {
        RootSystem::new(RootType::B, 2).expect("B2 exists")
    }

    /// `c𝒜^{[-k,k+j]}`.
    pub fn target(&self) -> Result<Arrangement> {
        coned_deformation(&Self::root_system(), -self.k, self.k + self.j)
    }

    /// The line `y = s z`.
    pub fn line(s: i64) -> Hyperplane {
        Hyperplane::linear(&[0, 1, -s]).expect("nonzero")
    }

    pub fn h_line(&self, u: i64) -> Hyperplane {
        Self::line(-self.k - self.m + u)
    }

    pub fn l_line(&self, u: i64) -> Hyperplane {
        Self::line(self.k + self.m + u + self.r + 1)
    }

    pub fn chain_member(&self, u: i64) -> Result<Arrangement> {
        if !(0..=self.m).contains(&u) {
            return Err(Error::InvalidInput(format!("u = {u} outside [0, {}]", self.m)));
        }
        let (k, m, r) = (self.k, self.m, self.r);
        let mut a = self.target()?;
        for s in (-k - m + u)..=(-k - 1) {
            a = a.add(&Self::line(s))?;
        }
        for s in (k + m + u + r + 1)..=(k + 2 * m + r) {
            a = a.delete(&Self::line(s))?;
        }
        Ok(a)
    }

    /// The free start `B_0`.
    pub fn start(&self) -> Result<Arrangement> {
        self.chain_member(0)
    }

    /// Exponents of `B_0`.
    pub fn start_exponents(&self) -> Vec<i64> {
        let (k, m, r) = (self.k, self.m, self.r);
        let mut e = vec![1, 4 * k + 4 * m + 1 + 3 * r, 4 * k + 4 * m + 3 + r];
        e.sort();
        e
    }

    /// `|c𝒜^{[-k,k+j]}| = 8k + 4j + 5`.
    pub fn size(&self) -> usize {
        (8 * self.k + 4 * self.j + 5) as usize
    }

    /// Betti table of `D₀(c𝒜^{[-k,k+j]})` read off the chain.
    pub fn expected_betti(&self) -> BettiTable {
        let (k, m) = (self.k, self.m);
        let mut t = BettiTable::new();
        if self.r == 0 {
            t.add(0, 4 * k + 5 * m + 1, 1);
            for i in 1..=m {
                t.add(0, 4 * k + 5 * m + 1 + i, 2);
            }
            t.add(1, 4 * k + 5 * m + 3, 1);
            for i in 2..=m {
                t.add(1, 4 * k + 5 * m + 2 + i, 2);
            }
        } else {
            for i in 0..=m {
                t.add(0, 4 * k + 5 * m + 4 + i, 2);
            }
            for i in 1..=m {
                t.add(1, 4 * k + 5 * m + 5 + i, 2);
            }
        }
        t
    }

    /// The published layout of the same table, whose syzygy rows sit one
    /// degree lower than the chain gives. Kept for comparison only.
    pub fn stated_betti(&self) -> BettiTable {
        let (k, m, r) = (self.k, self.m, self.r);
        let base = 1 + 5 * m + 3 * r + 4 * k;
        let mut t = BettiTable::new();
        t.add(0, base, (1 + r) as usize);
        for d in base + 1..=1 + 6 * m + 3 * r + 4 * k {
            t.add(0, d, 2);
        }
        t.add(1, base + 1, (1 + r) as usize);
        for d in base + 2..=1 + 6 * m + 3 * r + 4 * k {
            t.add(1, d, 2);
        }
        t
    }

    /// `F = E(4k + 2j + 2)` has `c₁ = 0`.
    pub fn twist(&self) -> i64 {
        4 * self.k + 2 * self.j + 2
    }

    pub fn expected_c2(&self) -> i64 {
        let (m, r) = (self.m, self.r);
        2 * m * m + 2 * m * r + r - 1
    }

    /// Jumping order of `H_u` and `L_u`.
    pub fn jumping_order(&self, u: i64) -> i64 {
        2 * u + self.r + 1
    }

    /// `y = (k + j) z` and `y = (-k - 1) z`.
    pub fn maximal_jumping_lines(&self) -> [Hyperplane; 2] {
        [Self::line(self.k + self.j), Self::line(-self.k - 1)]
    }

    /// Runs the chain, computing `D₀` directly at every step and comparing it
    /// with the transfer lemmas (or Terao deletion where the lemma does not apply).
    pub fn chain<F: Field>(&self) -> Result<B2ChainReport> {
        let start = self.start()?;
        let start_free = exponents_if_free::<F>(&start)?.exponents().map(|e| e.to_vec());
        let mut current = d0_module::<F>(&start)?.betti()?;
        let start_betti = current.clone();
        let mut steps = Vec::new();
        for u in 0..self.m {
            let a = self.chain_member(u)?;
            let h = self.h_line(u);
            let deleted = a.delete(&h)?;
            let direct = d0_module::<F>(&deleted)?.betti()?;
            let prediction = predict_betti_delete(&a, &h, &current)?;
            let (terao, predicted) = match &prediction.predicted {
                Some(p) => (None, Some(p.clone())),
                None => {
                    let cert = terao_deletion_step::<F>(&a, &h)?;
                    let p = cert.output_exponents.as_deref().filter(|_| cert.certified()).map(free_d0_table);
                    (Some(cert), p)
                }
            };
            steps.push(B2ChainStep {
                u,
                action: TransferLemma::Delete,
                hyperplane: h.to_string(),
                matches: predicted.as_ref() == Some(&direct),
                direct: direct.clone(),
                prediction,
                terao,
            });
            current = direct;

            let l = self.l_line(u);
            let added = deleted.add(&l)?;
            if added != self.chain_member(u + 1)? {
                return Err(Error::VerificationFailed(format!("chain step {u} does not land on the next member")));
            }
            let direct = d0_module::<F>(&added)?.betti()?;
            let prediction = predict_betti_add(&deleted, &l, &current)?;
            steps.push(B2ChainStep {
                u,
                action: TransferLemma::Add,
                hyperplane: l.to_string(),
                matches: prediction.predicted.as_ref() == Some(&direct),
                direct: direct.clone(),
                prediction,
                terao: None,
            });
            current = direct;
        }
        Ok(B2ChainReport { family: *self, start_exponents: start_free, start_betti, steps, final_betti: current })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct B2ChainStep {
    pub u: i64,
    pub action: TransferLemma,
    pub hyperplane: String,
    pub direct: BettiTable,
    pub prediction: BettiPrediction,
    /// Used when the transfer lemma does not apply to a deletion.
    pub terao: Option<DeletionCertificate>,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct B2ChainReport {
    pub family: B2Family,
    pub start_exponents: Option<Vec<i64>>,
    pub start_betti: BettiTable,
    pub steps: Vec<B2ChainStep>,
    pub final_betti: BettiTable,
}

impl B2ChainReport {
    pub fn all_match(&self) -> bool {
        self.steps.iter().all(|s| s.matches)
    }
}

fn root_by_ambient<'a>(rs: &'a RootSystem, ambient: &[i64]) -> Result<&'a Root> {
    rs.roots
        .iter()
        .find(|r| r.ambient == ambient)
        .ok_or_else(|| Error::InvalidInput(format!("no positive root {ambient:?}")))
}

/// The A₃ chain from the free Shi arrangement `c𝒜^{[-k-1,k+2]}` to
/// `c𝒜^{[-k,k+2]}`: three certified single deletions, then the three
/// simple-root translates removed at once.
#[derive(Clone, Debug, Serialize)]
pub struct A3ChainReport {
    pub k: i64,
    pub mdt: DeletionCertificate,
    pub mdt2: DeletionCertificate,
    /// Yoshinaga on the restriction that feeds the Terao step.
    pub yoshinaga: DeletionCertificate,
    pub terao: DeletionCertificate,
    pub spog: SpogPrediction,
    pub direct_d0: BettiTable,
}

impl A3ChainReport {
    pub fn passed(&self) -> bool {
        self.mdt.certified()
            && self.mdt2.certified()
            && self.yoshinaga.certified()
            && self.terao.certified()
            && self.spog.minimal
            && self.spog.predicted_d0 == self.direct_d0
    }
}

pub fn a3_chain<F: Field>(k: i64) -> Result<A3ChainReport> {
    let rs = RootSystem::new(RootType::A, 3)?;
    let s = -k - 1;
    let start = coned_deformation(&rs, s, k + 2)?;
    let h1 = translate(root_by_ambient(&rs, &[1, 0, 0, -1])?, s);
    let h2 = translate(root_by_ambient(&rs, &[1, 0, -1, 0])?, s);
    let h3 = translate(root_by_ambient(&rs, &[0, 1, 0, -1])?, s);
    let mdt = mdt_step::<F>(&start, &h1)?;
    let a0 = start.delete(&h1)?;
    let mdt2 = mdt2_step::<F>(&a0, &h2)?;
    let a1 = a0.delete(&h2)?;
    let restricted = a1.restrict(&h3)?;
    let z = Hyperplane::linear(&[0, 0, 0, 1])?;
    let z_trace = h3.trace_of(&z).ok_or_else(|| Error::VerificationFailed("z = 0 is parallel to H".into()))?;
    let yoshinaga = yoshinaga_check::<F>(&restricted, &z_trace)?;
    let terao = terao_deletion_step::<F>(&a1, &h3)?;
    let a2 = a1.delete(&h3)?;
    let simple: Vec<Hyperplane> = rs.simple_roots().into_iter().map(|r| translate(r, s)).collect();
    let spog = spog_multiple_deletion::<F>(&a2, &simple)?;
    let mut target = a2.clone();
    for h in &simple {
        target = target.delete(h)?;
    }
    debug_assert_eq!(target, coned_deformation(&rs, -k, k + 2)?);
    let direct_d0 = d0_module::<F>(&target)?.betti()?;
    Ok(A3ChainReport { k, mdt, mdt2, yoshinaga, terao, spog, direct_d0 })
}

/// Start and deletion order for the height-ordered chain from
/// `c𝒜^{[-k-1,k+2]}` to `c𝒜^{[-k,k+2]}`: the translates `α = -k-1`.
pub fn shi_chain(rs: &RootSystem, k: i64) -> Result<(Arrangement, Vec<Hyperplane>)> {
    let start = coned_deformation(rs, -k - 1, k + 2)?;
    Ok((start, rs.roots.iter().map(|r| translate(r, -k - 1)).collect()))
}

/// Chain from the Shi arrangement `c𝒜^{[-k,k+1]}` down to the Catalan
/// arrangement `c𝒜^{[-k,k]}` by removing the translates `α = k+1`.
pub fn catalan_chain(rs: &RootSystem, k: i64) -> Result<(Arrangement, Vec<Hyperplane>)> {
    let start = coned_deformation(rs, -k, k + 1)?;
    Ok((start, rs.roots.iter().map(|r| translate(r, k + 1)).collect()))
}

/// Exponents of `c𝒜^{[-k,k+1]}` (Shi) and `c𝒜^{[-k,k]}` (Catalan).
pub fn shi_exponents(rs: &RootSystem, k: i64) -> Vec<i64> {
    let h = rs.coxeter_number();
    let mut e = vec![1];
    e.extend(std::iter::repeat((k + 1) * h).take(rs.rank));
    e
}

pub fn catalan_exponents(rs: &RootSystem, k: i64) -> Vec<i64> {
    let h = rs.coxeter_number();
    let mut e = vec![1];
    e.extend(rs.exponents().iter().map(|&m| k * h + m));
    e.sort();
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b2_sizes() {
        for k in 0..2 {
            for j in 2..6 {
                let f = B2Family::new(k, j).unwrap();
                assert_eq!(f.target().unwrap().len(), f.size());
                for u in 0..=f.m {
                    assert_eq!(f.chain_member(u).unwrap().len(), f.size());
                }
                assert_eq!(f.start_exponents().iter().sum::<i64>(), f.size() as i64);
                assert_eq!(f.chain_member(f.m).unwrap(), f.target().unwrap());
            }
        }
    }

    #[test]
    fn b2_tables_agree_in_shape() {
        for j in 2..6 {
            let f = B2Family::new(0, j).unwrap();
            let (e, s) = (f.expected_betti(), f.stated_betti());
            assert_eq!(e.total(0), (2 * f.m + 1 + f.r) as usize);
            assert_eq!(e.total(1), (2 * f.m + f.r - 1) as usize);
            assert_eq!(e.degrees(0), s.degrees(0));
            assert_eq!(e.degrees(1), s.degrees(1).iter().map(|d| d + 1).collect::<Vec<_>>());
        }
    }

    #[test]
    fn maximal_lines_close_the_family() {
        let f = B2Family::new(1, 3).unwrap();
        assert_eq!(f.h_line(f.m - 1), B2Family::line(-2));
        assert_eq!(f.l_line(f.m - 1), B2Family::line(4));
        assert_eq!(f.jumping_order(f.m - 1), f.j - 1);
    }

    #[test]
    fn catalan_and_shi_exponent_sums() {
        for t in ["A2", "A3", "B2"] {
            let rs: RootSystem = t.parse().unwrap();
            for k in 0..2 {
                let n = rs.roots.len() as i64;
                assert_eq!(shi_exponents(&rs, k).iter().sum::<i64>(), (2 * k + 2) * n + 1);
                assert_eq!(catalan_exponents(&rs, k).iter().sum::<i64>(), (2 * k + 1) * n + 1);
            }
        }
    }
}
