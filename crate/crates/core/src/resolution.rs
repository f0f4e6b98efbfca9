//! Minimal graded free resolutions and their Betti tables.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certify::certified_resolution;
use crate::error::{Error, Result};
use crate::groebner::{apply_map, element_degree, kernel_of_map, minimalize, ModuleElement};
use crate::monomial::binomial;
use crate::scalar::Field;

/// Graded Betti numbers: `count` copies of `S(-degree)` in homological position `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BettiTable {
    entries: BTreeMap<(usize, i64), usize>,
}

#[derive(Serialize, Deserialize)]
struct BettiEntry {
    i: usize,
    degree: i64,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct BettiJson {
    betti: Vec<BettiEntry>,
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (usize, i64, usize)>) -> Self {
        let mut t = BettiTable::new();
        for (i, d, c) in entries {
            t.add(i, d, c);
        }
        t
    }

    pub fn add(&mut self, i: usize, degree: i64, count: usize) {
        if count > 0 {
            *self.entries.entry((i, degree)).or_insert(0) += count;
        }
    }

    pub fn get(&self, i: usize, degree: i64) -> usize {
        self.entries.get(&(i, degree)).copied().unwrap_or(0)
    }

    pub fn total(&self, i: usize) -> usize {
        self.entries.iter().filter(|((j, _), _)| *j == i).map(|(_, c)| c).sum()
    }

    /// Iterate over `(i, degree, count)` in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, usize)> + '_ {
        self.entries.iter().map(|(&(i, d), &c)| (i, d, c))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn projective_dimension(&self) -> Option<usize> {
        self.entries.keys().map(|(i, _)| *i).max()
    }

    /// Degrees of the `i`-th free module, with multiplicity, ascending.
    pub fn degrees(&self, i: usize) -> Vec<i64> {
        self.iter()
            .filter(|(j, _, _)| *j == i)
            .flat_map(|(_, d, c)| std::iter::repeat(d).take(c))
            .collect()
    }

    /// Every degree moved by `delta`.
    pub fn shifted(&self, delta: i64) -> BettiTable {
        BettiTable::from_entries(self.iter().map(|(i, d, c)| (i, d + delta, c)))
    }

    /// Hilbert function of the resolved module in degree `d` over `nvars` variables.
    pub fn hilbert_function(&self, nvars: usize, d: i64) -> i64 {
        let mut s = 0i64;
        for (i, deg, c) in self.iter() {
            if d >= deg {
                let dim = binomial((d - deg) as usize + nvars - 1, nvars - 1) as i64;
                let sign = if i % 2 == 0 { 1 } else { -1 };
                s += sign * c as i64 * dim;
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("betti table serializes")
    }

    /// Table with rows indexed by homological position `i` and columns by `r`,
    /// the entry counting summands `S(-(i + r))`.
    pub fn to_text(&self) -> String {
        if self.entries.is_empty() {
            return "(zero module)\n".into();
        }
        let rmin = self.iter().map(|(i, d, _)| d - i as i64).min().unwrap();
        let rmax = self.iter().map(|(i, d, _)| d - i as i64).max().unwrap();
        let imax = self.projective_dimension().unwrap();
        let width = self
            .iter()
            .map(|(_, _, c)| c.to_string().len())
            .chain([rmax.to_string().len(), rmin.to_string().len()])
            .max()
            .unwrap()
            .max(1);
        let mut s = String::from("i\\r");
        for r in rmin..=rmax {
            s.push_str(&format!(" {r:>width$}"));
        }
        s.push('\n');
        for i in 0..=imax {
            s.push_str(&format!("{i:>3}"));
            for r in rmin..=rmax {
                let c = self.get(i, i as i64 + r);
                let cell = if c == 0 { ".".to_string() } else { c.to_string() };
                s.push_str(&format!(" {cell:>width$}"));
            }
            s.push('\n');
        }
        s.push_str("entry (i, r) counts summands S(-(i+r)) in position i\n");
        s
    }
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BettiJson { betti: self.iter().map(|(i, degree, count)| BettiEntry { i, degree, count }).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BettiJson::deserialize(d)?;
        Ok(BettiTable::from_entries(j.betti.into_iter().map(|e| (e.i, e.degree, e.count))))
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A minimal free resolution `0 -> F_p -> ... -> F_0 -> M -> 0` of a submodule
/// `M` of a free module.
#[derive(Clone, Debug)]
pub struct FreeResolution<F: Field> {
    pub nvars: usize,
    pub ambient_shifts: Vec<i64>,
    /// Minimal generators of `M`, the images of the basis of `F_0`.
    pub generators: Vec<ModuleElement<F>>,
    /// Degrees of the basis of each `F_i`.
    pub shifts: Vec<Vec<i64>>,
    /// `differentials[i]` has the columns of `F_{i+1} -> F_i`.
    pub differentials: Vec<Vec<ModuleElement<F>>>,
    pub method: ResolutionMethod,
}

/// How the syzygies were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolutionMethod {
    /// Iterated kernels through Gröbner bases.
    Groebner,
    /// Degreewise linear algebra guided by a modular resolution, certified acyclic.
    CertifiedLinearAlgebra,
}

impl<F: Field> FreeResolution<F> {
    /// Resolve the submodule generated by `gens`.
    ///
    /// Over Q the certified linear algebra route is tried first; it falls back to
    /// Gröbner bases whenever the certificate is inconclusive.
    pub fn of_submodule(nvars: usize, ambient_shifts: &[i64], gens: &[ModuleElement<F>]) -> Result<Self> {
        let keep = minimalize(ambient_shifts, gens)?;
        let generators: Vec<ModuleElement<F>> = keep.iter().map(|&i| gens[i].clone()).collect();
        let mut gen_shifts = Vec::new();
        for g in &generators {
            gen_shifts.push(element_degree(g, ambient_shifts)?.expect("minimal generators are nonzero"));
        }
        if let Some((shifts, differentials)) = certified_resolution(nvars, ambient_shifts, &generators, &gen_shifts)? {
            return Ok(FreeResolution {
                nvars,
                ambient_shifts: ambient_shifts.to_vec(),
                generators,
                shifts,
                differentials,
                method: ResolutionMethod::CertifiedLinearAlgebra,
            });
        }
        Self::by_groebner(nvars, ambient_shifts, generators, gen_shifts)
    }

    /// Resolve through Gröbner bases only; `generators` must be minimal.
    pub fn by_groebner(
        nvars: usize,
        ambient_shifts: &[i64],
        generators: Vec<ModuleElement<F>>,
        gen_shifts: Vec<i64>,
    ) -> Result<Self> {
        let mut shifts = vec![gen_shifts];
        let mut differentials = Vec::new();
        let mut target = ambient_shifts.to_vec();
        let mut cols = generators.clone();
        loop {
            let src = shifts.last().unwrap().clone();
            if cols.is_empty() {
                break;
            }
            let ker = kernel_of_map(&target, &cols, &src)?;
            if ker.is_empty() {
                break;
            }
            let mut degs = Vec::new();
            for k in &ker {
                degs.push(element_degree(k, &src)?.expect("kernel generators are nonzero"));
            }
            if shifts.len() > nvars + 1 {
                return Err(Error::VerificationFailed("resolution longer than the number of variables".into()));
            }
            differentials.push(ker.clone());
            shifts.push(degs);
            target = src;
            cols = ker;
        }
        Ok(FreeResolution {
            nvars,
            ambient_shifts: ambient_shifts.to_vec(),
            generators,
            shifts,
            differentials,
            method: ResolutionMethod::Groebner,
        })
    }

    pub fn betti(&self) -> BettiTable {
        let mut t = BettiTable::new();
        for (i, s) in self.shifts.iter().enumerate() {
            for &d in s {
                t.add(i, d, 1);
            }
        }
        t
    }

    pub fn length(&self) -> usize {
        self.differentials.len()
    }

    /// Check that consecutive maps compose to zero and that every map is homogeneous.
    pub fn is_complex(&self) -> bool {
        let mut prev_cols = &self.generators;
        let mut prev_rank = self.ambient_shifts.len();
        for d in &self.differentials {
            for col in d {
                let img = apply_map(prev_cols, col, self.nvars, prev_rank);
                if img.iter().any(|p| !p.is_zero()) {
                    return false;
                }
            }
            prev_rank = prev_cols.len();
            prev_cols = d;
        }
        true
    }
}
