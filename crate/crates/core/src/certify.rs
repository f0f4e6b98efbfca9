//! Resolutions over Q assembled by degreewise linear algebra and certified with
//! the Buchsbaum–Eisenbud acyclicity criterion.
//!
//! A resolution over F_p of the reduced generators predicts where syzygies live.
//! Each differential is then built exactly over Q one degree at a time, choosing
//! generators independent modulo the multiples of lower ones, so the complex is
//! minimal by construction. Acyclicity needs two facts about every map `φ_k`:
//!
//! * `rank φ_k + rank φ_{k+1} = rank G_k`. Ranks at a rational point bound the
//!   generic ranks from below and `φ_k φ_{k+1} = 0` bounds their sum from above.
//! * `grade I_{r_k}(φ_k) ≥ k`. The minors are reduced mod p after clearing
//!   denominators. Reduction can only enlarge the Hilbert function of the
//!   quotient, so a codimension seen mod p is a lower bound over Q.
//!
//! Any inconclusive step returns `None` and the caller falls back to Gröbner bases.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::groebner::{groebner_basis, ModuleElement};
use crate::linalg::{dense_rank, SparseEchelon};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::resolution::FreeResolution;
use crate::scalar::{Field, Fp};

const TAG: usize = 1 << 48;
const MINOR_ATTEMPTS: usize = 400;

/// Shifts and differentials of a certified minimal resolution of the module
/// generated by `gens`, which must already be a minimal generating set.
pub(crate) fn certified_resolution<F: Field>(
    nvars: usize,
    ambient_shifts: &[i64],
    gens: &[ModuleElement<F>],
    gen_shifts: &[i64],
) -> Result<Option<(Vec<Vec<i64>>, Vec<Vec<ModuleElement<F>>>)>> {
    if F::CHARACTERISTIC != 0 || gens.is_empty() {
        return Ok(None);
    }
    let Some(reduced) = gens.iter().map(|g| reduce_element(g)).collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    let modular = FreeResolution::<Fp>::of_submodule(nvars, ambient_shifts, &reduced)?;
    let mut expect = modular.shifts[0].clone();
    let mut found = gen_shifts.to_vec();
    expect.sort_unstable();
    found.sort_unstable();
    if expect != found {
        return Ok(None);
    }

    let mut shifts = vec![gen_shifts.to_vec()];
    let mut differentials: Vec<Vec<ModuleElement<F>>> = Vec::new();
    let mut cols = gens.to_vec();
    for predicted in &modular.shifts[1..] {
        let (Some(&lo), Some(&hi)) = (predicted.iter().min(), predicted.iter().max()) else {
            break;
        };
        let src = shifts.last().unwrap().clone();
        let ker = kernel_in_degrees(nvars, &cols, &src, lo..=hi)?;
        if ker.is_empty() {
            return Ok(None);
        }
        let degs: Vec<i64> = ker.iter().map(|(d, _)| *d).collect();
        let ker: Vec<ModuleElement<F>> = ker.into_iter().map(|(_, v)| v).collect();
        differentials.push(ker.clone());
        shifts.push(degs);
        cols = ker;
    }

    let mut maps: Vec<&[ModuleElement<F>]> = vec![gens];
    maps.extend(differentials.iter().map(|d| d.as_slice()));
    if !acyclic(nvars, &maps)? {
        return Ok(None);
    }
    Ok(Some((shifts, differentials)))
}

fn reduce_element<F: Field>(g: &ModuleElement<F>) -> Option<ModuleElement<Fp>> {
    g.iter().map(|p| p.map_coefficients(|c| Fp::from_rational(&c.to_rational()?))).collect()
}

/// Minimal generators, with their degrees, of the kernel of `cols` in the given
/// range of degrees.
pub(crate) fn kernel_in_degrees<F: Field>(
    nvars: usize,
    cols: &[ModuleElement<F>],
    src: &[i64],
    degrees: RangeInclusive<i64>,
) -> Result<Vec<(i64, ModuleElement<F>)>> {
    let mut chosen: Vec<(i64, ModuleElement<F>)> = Vec::new();
    for d in degrees {
        let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
        for (j, &s) in src.iter().enumerate() {
            if d >= s {
                unknowns.extend(Monomial::all_of_degree(nvars, (d - s) as u32).into_iter().map(|m| (j, m)));
            }
        }
        if unknowns.is_empty() {
            continue;
        }
        let position: HashMap<(usize, Monomial), usize> =
            unknowns.iter().enumerate().map(|(u, &key)| (key, u)).collect();

        let mut image_index: HashMap<(usize, Monomial), usize> = HashMap::new();
        let mut ech = SparseEchelon::<F>::new();
        let mut kernel = Vec::new();
        for (u, &(j, m)) in unknowns.iter().enumerate() {
            let mut row = Vec::new();
            for (c, p) in cols[j].iter().enumerate() {
                for (t, a) in p.terms() {
                    let n = image_index.len();
                    let col = *image_index.entry((c, t.mul(m))).or_insert(n);
                    row.push((col, a.clone()));
                }
            }
            row.push((TAG + u, F::one()));
            let red = ech.reduce(row);
            if red.first().is_some_and(|e| e.0 >= TAG) {
                kernel.push(red.iter().map(|(c, v)| (c - TAG, v.clone())).collect::<Vec<_>>());
            }
            ech.insert(red);
        }
        if kernel.is_empty() {
            continue;
        }

        let mut span = SparseEchelon::<F>::new();
        for (e, g) in chosen.iter().filter(|(e, _)| *e < d) {
            for mu in Monomial::all_of_degree(nvars, (d - e) as u32) {
                let mut row = Vec::new();
                for (j, p) in g.iter().enumerate() {
                    for (t, a) in p.terms() {
                        row.push((position[&(j, t.mul(mu))], a.clone()));
                    }
                }
                span.insert(row);
            }
        }
        for k in kernel {
            if span.insert(k.clone()) {
                let mut parts: Vec<Vec<(Monomial, F)>> = vec![Vec::new(); src.len()];
                for (u, v) in k {
                    let (j, m) = unknowns[u];
                    parts[j].push((m, v));
                }
                let coeffs: Vec<&F> = parts.iter().flatten().map(|(_, v)| v).collect();
                let scale = F::normalizer(&coeffs);
                let elem = parts
                    .into_iter()
                    .map(|t| Polynomial::from_terms(nvars, t.into_iter().map(|(m, v)| (m, v.mul(&scale)))))
                    .collect();
                chosen.push((d, elem));
            }
        }
    }
    Ok(chosen)
}

/// Buchsbaum–Eisenbud for `0 -> G_L -> ... -> G_1 -> G_0`, where `maps[k-1]`
/// holds the columns of `φ_k : G_k -> G_{k-1}`.
fn acyclic<F: Field>(nvars: usize, maps: &[&[ModuleElement<F>]]) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let point: Vec<F> = (0..nvars).map(|_| F::from_i64(rng.gen_range(-997..=997))).collect();
    let ranks: Vec<usize> = maps.iter().map(|m| rank_at(m, &point)).collect();
    for k in 0..maps.len() {
        let g_k = maps[k].len();
        let next = ranks.get(k + 1).copied().unwrap_or(0);
        if ranks[k] + next != g_k {
            return Ok(false);
        }
    }
    for (k, m) in maps.iter().enumerate().skip(1) {
        if !grade_at_least(nvars, m, ranks[k], k + 1, &mut rng)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn rank_at<F: Field>(cols: &[ModuleElement<F>], point: &[F]) -> usize {
    let rows: Vec<Vec<F>> = cols.iter().map(|c| c.iter().map(|p| p.evaluate(point)).collect()).collect();
    let width = cols.first().map_or(0, |c| c.len());
    dense_rank(&rows, width)
}

/// Whether the ideal of `r`-minors has codimension at least `k`, judged mod p.
fn grade_at_least<F: Field>(
    nvars: usize,
    cols: &[ModuleElement<F>],
    r: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    if r == 0 {
        return Ok(true);
    }
    if k > nvars {
        return Ok(false);
    }
    let mut reduced = Vec::with_capacity(cols.len());
    for c in cols {
        let coeffs: Vec<&F> = c.iter().flat_map(|p| p.terms().iter().map(|(_, a)| a)).collect();
        if coeffs.is_empty() {
            reduced.push(c.iter().map(|_| Polynomial::zero(nvars)).collect::<Vec<_>>());
            continue;
        }
        let scale = F::normalizer(&coeffs);
        let scaled: Vec<Polynomial<F>> = c.iter().map(|p| p.scale(&scale)).collect();
        match reduce_element(&scaled) {
            Some(v) => reduced.push(v),
            None => return Ok(false),
        }
    }
    let nrows = reduced[0].len();
    let ncols = reduced.len();
    let subsets = |n: usize, rng: &mut ChaCha8Rng| {
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..r {
            let j = rng.gen_range(i..n);
            idx.swap(i, j);
        }
        let mut s = idx[..r].to_vec();
        s.sort_unstable();
        s
    };
    let mut seen = std::collections::HashSet::new();
    let mut minors: Vec<ModuleElement<Fp>> = Vec::new();
    for _ in 0..MINOR_ATTEMPTS {
        let rs = subsets(nrows, rng);
        let cs = subsets(ncols, rng);
        if !seen.insert((rs.clone(), cs.clone())) {
            continue;
        }
        let mat: Vec<Vec<Polynomial<Fp>>> =
            rs.iter().map(|&i| cs.iter().map(|&j| reduced[j][i].clone()).collect()).collect();
        let det = determinant(mat);
        if det.is_zero() {
            continue;
        }
        minors.push(vec![det]);
        if minors.len() >= k && codimension(nvars, &minors)? >= k {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Fraction-free elimination over a polynomial ring.
pub(crate) fn determinant<F: Field>(mut m: Vec<Vec<Polynomial<F>>>) -> Polynomial<F> {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(0);
    }
    let nvars = m[0][0].nvars();
    let mut prev = Polynomial::one(nvars);
    let mut negate = false;
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Polynomial::zero(nvars);
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.exact_divide(&prev).expect("Bareiss quotients are exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Codimension of a homogeneous ideal, from the leading monomials of a Gröbner basis.
pub(crate) fn codimension<F: Field>(nvars: usize, gens: &[ModuleElement<F>]) -> Result<usize> {
    let gb = groebner_basis(&[0], gens)?;
    let leads: Vec<Monomial> = gb.iter().filter_map(|g| g[0].leading_term().map(|t| t.0)).collect();
    if leads.iter().any(|m| m.degree() == 0) {
        return Ok(nvars + 1);
    }
    // dimension = largest set of variables containing the support of no leading monomial
    let mut dim = 0;
    for mask in 0u32..(1 << nvars) {
        let size = mask.count_ones() as usize;
        if size <= dim {
            continue;
        }
        let avoids = leads.iter().all(|m| (0..nvars).any(|i| m.exponent(i) > 0 && mask & (1 << i) == 0));
        if avoids {
            dim = size;
        }
    }
    Ok(nvars - dim)
}
