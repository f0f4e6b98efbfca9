//! Exact linear algebra: incremental sparse row echelon forms and dense nullspaces.

use std::collections::HashMap;

use crate::error::Result;
use crate::groebner::{element_degree, ModuleElement};
use crate::monomial::Monomial;
use crate::scalar::Field;

/// Rows are kept reduced against earlier pivots, each normalized to a leading one.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F: Field> {
    pivot_of: HashMap<usize, usize>,
    rows: Vec<Vec<(usize, F)>>,
}

impl<F: Field> Default for SparseEchelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> SparseEchelon<F> {
    pub fn new() -> Self {
        SparseEchelon { pivot_of: HashMap::new(), rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn axpy(row: &[(usize, F)], c: &F, other: &[(usize, F)]) -> Vec<(usize, F)> {
        let mut out = Vec::with_capacity(row.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < other.len() {
            if j == other.len() || (i < row.len() && row[i].0 < other[j].0) {
                out.push(row[i].clone());
                i += 1;
            } else if i == row.len() || other[j].0 < row[i].0 {
                out.push((other[j].0, c.mul(&other[j].1)));
                j += 1;
            } else {
                let s = row[i].1.add(&c.mul(&other[j].1));
                if !s.is_zero() {
                    out.push((row[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    /// Reduce a row against the stored pivots (leading entries only).
    pub fn reduce(&self, mut row: Vec<(usize, F)>) -> Vec<(usize, F)> {
        row.sort_by_key(|e| e.0);
        row.retain(|e| !e.1.is_zero());
        let mut start = 0;
        while start < row.len() {
            let (col, c) = (row[start].0, row[start].1.clone());
            match self.pivot_of.get(&col) {
                Some(&p) => {
                    let tail = Self::axpy(&row[start..], &c.neg(), &self.rows[p]);
                    row.truncate(start);
                    row.extend(tail);
                }
                None => start += 1,
            }
        }
        row
    }

    /// Insert a row; returns whether it was independent of the previous ones.
    pub fn insert(&mut self, row: Vec<(usize, F)>) -> bool {
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        let inv = row[0].1.inv();
        for e in &mut row {
            e.1 = e.1.mul(&inv);
        }
        self.pivot_of.insert(row[0].0, self.rows.len());
        self.rows.push(row);
        true
    }
}

/// Rank of a list of sparse rows.
pub fn sparse_rank<F: Field>(rows: impl IntoIterator<Item = Vec<(usize, F)>>) -> usize {
    let mut e = SparseEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..ncols {
                    if !m[r][k].is_zero() {
                        let v = m[i][k].sub(&f.mul(&m[r][k]));
                        m[i][k] = v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{v : M v = 0}` for a dense matrix with `ncols` columns.
pub fn nullspace<F: Field>(m: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = a[r][free].neg();
        }
        out.push(v);
    }
    out
}

pub fn dense_rank<F: Field>(m: &[Vec<F>], ncols: usize) -> usize {
    let mut a = m.to_vec();
    rref(&mut a, ncols).len()
}

/// Dimension of the degree `d` part of the submodule generated by `gens`,
/// computed from the span of the monomial multiples without Gröbner bases.
pub fn hilbert_function<F: Field>(shifts: &[i64], gens: &[ModuleElement<F>], nvars: usize, d: i64) -> Result<usize> {
    let mut index: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut ech = SparseEchelon::new();
    for g in gens {
        let Some(e) = element_degree(g, shifts)? else { continue };
        if e > d {
            continue;
        }
        for m in Monomial::all_of_degree(nvars, (d - e) as u32) {
            let mut row = Vec::new();
            for (c, p) in g.iter().enumerate() {
                for (t, a) in p.terms() {
                    let key = (c, t.mul(m));
                    let n = index.len();
                    let col = *index.entry(key).or_insert(n);
                    row.push((col, a.clone()));
                }
            }
            ech.insert(row);
        }
    }
    Ok(ech.rank())
}
