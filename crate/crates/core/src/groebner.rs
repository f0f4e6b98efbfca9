//! Gröbner bases for homogeneous submodules of graded free modules.
//!
//! Elements of a free module `F = S(-a_1) + ... + S(-a_r)` are vectors of
//! polynomials. The engine runs a degree-by-degree Buchberger algorithm with the
//! Gebauer–Möller criteria, which also yields minimal generating sets and kernels
//! of homogeneous maps.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{grevlex_cmp, Homogeneity, Polynomial};
use crate::scalar::Field;

/// An element of a free module: one polynomial per basis vector.
pub type ModuleElement<F> = Vec<Polynomial<F>>;

thread_local! {
    static BUDGET: Cell<Option<u64>> = const { Cell::new(None) };
    static STEPS: Cell<u64> = const { Cell::new(0) };
}

/// Run `f` with a cap on the number of reduction steps performed on this thread.
pub fn with_step_budget<T>(limit: Option<u64>, f: impl FnOnce() -> T) -> T {
    let prev = BUDGET.with(|b| b.replace(limit));
    let prev_steps = STEPS.with(|s| s.replace(0));
    let out = f();
    BUDGET.with(|b| b.set(prev));
    STEPS.with(|s| s.set(prev_steps));
    out
}

/// Reduction steps used on this thread since the innermost budget was installed.
pub fn steps_used() -> u64 {
    STEPS.with(|s| s.get())
}

#[inline]
fn tick() -> Result<()> {
    let n = STEPS.with(|s| {
        let n = s.get() + 1;
        s.set(n);
        n
    });
    match BUDGET.with(|b| b.get()) {
        Some(limit) if n > limit => Err(Error::BudgetExceeded(limit)),
        _ => Ok(()),
    }
}

/// Shifted degree of a homogeneous module element, `None` for zero.
pub fn element_degree<F: Field>(v: &[Polynomial<F>], shifts: &[i64]) -> Result<Option<i64>> {
    let mut d = None;
    for (p, s) in v.iter().zip(shifts) {
        match p.homogeneity() {
            Homogeneity::Zero => {}
            Homogeneity::Inhomogeneous => return Err(Error::NotHomogeneous),
            Homogeneity::Homogeneous(e) => {
                let e = e as i64 + s;
                match d {
                    None => d = Some(e),
                    Some(x) if x != e => return Err(Error::NotHomogeneous),
                    _ => {}
                }
            }
        }
    }
    Ok(d)
}

/// Term order on `(component, monomial)` pairs: elimination block, then shifted
/// degree, then position over term (or term over position) with grevlex.
#[derive(Clone, Debug)]
pub(crate) struct ModuleOrder {
    pub shift: Vec<i64>,
    pub block: Vec<u32>,
    pub pot: bool,
}

impl ModuleOrder {
    pub fn new(shift: Vec<i64>) -> Self {
        let n = shift.len();
        ModuleOrder { shift, block: vec![0; n], pot: true }
    }

    #[inline]
    pub fn cmp(&self, a: (u32, Monomial), b: (u32, Monomial)) -> Ordering {
        let (ca, cb) = (a.0 as usize, b.0 as usize);
        match self.block[cb].cmp(&self.block[ca]) {
            Ordering::Equal => {}
            o => return o,
        }
        let da = a.1.degree() as i64 + self.shift[ca];
        let db = b.1.degree() as i64 + self.shift[cb];
        match da.cmp(&db) {
            Ordering::Equal => {}
            o => return o,
        }
        if self.pot {
            b.0.cmp(&a.0).then_with(|| grevlex_cmp(a.1, b.1))
        } else {
            grevlex_cmp(a.1, b.1).then_with(|| b.0.cmp(&a.0))
        }
    }
}

/// Sparse module vector, terms strictly descending in the module order.
#[derive(Clone, Debug)]
pub(crate) struct SVec<F: Field> {
    pub terms: Vec<(u32, Monomial, F)>,
}

impl<F: Field> SVec<F> {
    pub fn from_element(v: &[Polynomial<F>], ord: &ModuleOrder) -> Self {
        let mut terms: Vec<(u32, Monomial, F)> = v
            .iter()
            .enumerate()
            .flat_map(|(c, p)| p.terms().iter().map(move |(m, a)| (c as u32, *m, a.clone())))
            .collect();
        terms.sort_by(|x, y| ord.cmp((y.0, y.1), (x.0, x.1)));
        SVec { terms }
    }

    pub fn to_element(&self, rank: usize, nvars: usize, offset: u32) -> ModuleElement<F> {
        let mut parts: Vec<Vec<(Monomial, F)>> = vec![Vec::new(); rank];
        for (c, m, a) in &self.terms {
            parts[(c - offset) as usize].push((*m, a.clone()));
        }
        parts.into_iter().map(|t| Polynomial::from_terms(nvars, t)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> (u32, Monomial) {
        let t = &self.terms[0];
        (t.0, t.1)
    }

    pub fn monic(mut self) -> Self {
        if let Some(first) = self.terms.first() {
            if !first.2.is_one() {
                let inv = first.2.inv();
                for t in &mut self.terms {
                    t.2 = t.2.mul(&inv);
                }
            }
        }
        self
    }

    /// `self[..start] + (self[start..] + c * m * other)`; the prefix is untouched
    /// because every term of `m * other` is below `self.terms[start]`.
    fn axpy_from(&self, start: usize, c: &F, m: Monomial, other: &Self, ord: &ModuleOrder) -> Self {
        let a = &self.terms;
        let b = &other.terms;
        let mut out = Vec::with_capacity(a.len() + b.len());
        out.extend_from_slice(&a[..start]);
        let (mut i, mut j) = (start, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() {
                out.extend_from_slice(&a[i..]);
                break;
            }
            let bm = b[j].1.mul(m);
            if i == a.len() {
                out.push((b[j].0, bm, c.mul(&b[j].2)));
                j += 1;
                continue;
            }
            match ord.cmp((a[i].0, a[i].1), (b[j].0, bm)) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, bm, c.mul(&b[j].2)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = a[i].2.add(&c.mul(&b[j].2));
                    if !v.is_zero() {
                        out.push((a[i].0, bm, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        SVec { terms: out }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Options for a Buchberger run.
#[derive(Clone, Debug, Default)]
pub(crate) struct GbOptions {
    /// Skip pairs whose leading terms both lie in a block at least this large.
    pub skip_block: Option<u32>,
    /// Stop after finishing this shifted degree.
    pub degree_limit: Option<i64>,
    /// Reduce tails as well as leading terms.
    pub tail_reduce: bool,
}

pub(crate) struct GbOutcome<F: Field> {
    pub basis: Vec<SVec<F>>,
    /// Indices of the inputs that were not redundant, in input order per degree.
    pub minimal_inputs: Vec<usize>,
}

struct Engine<'a, F: Field> {
    ord: &'a ModuleOrder,
    opts: &'a GbOptions,
    basis: Vec<SVec<F>>,
    lead: Vec<(u32, Monomial)>,
    by_comp: Vec<Vec<usize>>,
    pairs: BTreeMap<i64, Vec<Pair>>,
    rank_one: bool,
}

impl<'a, F: Field> Engine<'a, F> {
    fn degree_of(&self, c: u32, m: Monomial) -> i64 {
        m.degree() as i64 + self.ord.shift[c as usize]
    }

    fn find_reducer(&self, c: u32, m: Monomial) -> Option<usize> {
        let mut best: Option<usize> = None;
        for &g in &self.by_comp[c as usize] {
            if self.lead[g].1.divides(m) {
                match best {
                    Some(b) if self.basis[b].terms.len() <= self.basis[g].terms.len() => {}
                    _ => best = Some(g),
                }
            }
        }
        best
    }

    fn reduce(&self, mut f: SVec<F>) -> Result<SVec<F>> {
        let mut pos = 0;
        while pos < f.terms.len() {
            let (c, m, lf) = {
                let t = &f.terms[pos];
                (t.0, t.1, t.2.clone())
            };
            match self.find_reducer(c, m) {
                Some(g) => {
                    tick()?;
                    let q = m.div(self.lead[g].1).expect("divisor checked");
                    f = f.axpy_from(pos, &lf.neg(), q, &self.basis[g], self.ord);
                }
                None => {
                    if pos == 0 && !self.opts.tail_reduce {
                        return Ok(f);
                    }
                    pos += 1;
                }
            }
        }
        Ok(f)
    }

    fn spoly(&self, p: &Pair) -> SVec<F> {
        let (gi, gj) = (&self.basis[p.i], &self.basis[p.j]);
        let mi = p.lcm.div(self.lead[p.i].1).unwrap();
        let mj = p.lcm.div(self.lead[p.j].1).unwrap();
        let scaled = SVec { terms: gi.terms.iter().map(|(c, m, a)| (*c, m.mul(mi), a.clone())).collect() };
        // both are monic, so the leading terms cancel
        let mut out = scaled.axpy_from(0, &F::one().neg(), mj, gj, self.ord);
        if out.terms.first().map(|t| (t.0, t.1)) == Some((self.lead[p.i].0, p.lcm)) {
            out.terms.remove(0);
        }
        out
    }

    fn insert(&mut self, h: SVec<F>) {
        let h = h.monic();
        let (hc, hm) = h.lead();
        let new = self.basis.len();
        let hblock = self.ord.block[hc as usize];
        let skip = self.opts.skip_block.is_some_and(|b| hblock >= b);

        // Criterion B on existing pairs.
        for list in self.pairs.values_mut() {
            list.retain(|p| {
                if self.lead[p.i].0 != hc || !hm.divides(p.lcm) {
                    return true;
                }
                let li = self.lead[p.i].1.lcm(hm);
                let lj = self.lead[p.j].1.lcm(hm);
                li == p.lcm || lj == p.lcm
            });
        }
        self.pairs.retain(|_, v| !v.is_empty());

        let mut cands: Vec<(Pair, bool)> = Vec::new();
        if !skip {
            for &g in &self.by_comp[hc as usize] {
                let gm = self.lead[g].1;
                let coprime = self.rank_one && gm.is_coprime(hm);
                cands.push((Pair { i: g, j: new, lcm: gm.lcm(hm) }, coprime));
            }
        }
        // Criterion M: drop pairs whose lcm is a proper multiple of another lcm.
        let lcms: Vec<Monomial> = cands.iter().map(|c| c.0.lcm).collect();
        cands.retain(|(p, _)| !lcms.iter().any(|l| *l != p.lcm && l.divides(p.lcm)));
        // Criterion F with the product criterion folded in.
        cands.sort_by(|a, b| grevlex_cmp(a.0.lcm, b.0.lcm).then(a.0.i.cmp(&b.0.i)));
        let mut kept = Vec::new();
        let mut k = 0;
        while k < cands.len() {
            let mut e = k;
            let mut any_coprime = false;
            while e < cands.len() && cands[e].0.lcm == cands[k].0.lcm {
                any_coprime |= cands[e].1;
                e += 1;
            }
            if !any_coprime {
                kept.push(cands[k].0);
            }
            k = e;
        }
        for p in kept {
            let d = self.degree_of(hc, p.lcm);
            self.pairs.entry(d).or_default().push(p);
        }

        self.lead.push((hc, hm));
        self.by_comp[hc as usize].push(new);
        self.basis.push(h);
    }
}

/// Degree-by-degree Buchberger run over homogeneous inputs.
pub(crate) fn buchberger<F: Field>(
    ord: &ModuleOrder,
    inputs: Vec<SVec<F>>,
    opts: &GbOptions,
) -> Result<GbOutcome<F>> {
    let rank = ord.shift.len();
    let mut engine = Engine {
        ord,
        opts,
        basis: Vec::new(),
        lead: Vec::new(),
        by_comp: vec![Vec::new(); rank],
        pairs: BTreeMap::new(),
        rank_one: rank == 1,
    };
    let mut queue: BTreeMap<i64, Vec<(usize, SVec<F>)>> = BTreeMap::new();
    for (idx, v) in inputs.into_iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let (c, m) = v.lead();
        let d = m.degree() as i64 + ord.shift[c as usize];
        queue.entry(d).or_default().push((idx, v));
    }
    let mut minimal = Vec::new();
    loop {
        let dp = engine.pairs.keys().next().copied();
        let di = queue.keys().next().copied();
        let d = match (dp, di) {
            (None, None) => break,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        if opts.degree_limit.is_some_and(|l| d > l) {
            break;
        }
        while let Some(list) = engine.pairs.get_mut(&d) {
            let Some(p) = list.pop() else {
                engine.pairs.remove(&d);
                continue;
            };
            if list.is_empty() {
                engine.pairs.remove(&d);
            }
            let s = engine.spoly(&p);
            let r = engine.reduce(s)?;
            if !r.is_zero() {
                engine.insert(r);
            }
        }
        if let Some(items) = queue.remove(&d) {
            for (idx, v) in items {
                let r = engine.reduce(v)?;
                if !r.is_zero() {
                    minimal.push(idx);
                    engine.insert(r);
                }
            }
        }
    }
    Ok(GbOutcome { basis: engine.basis, minimal_inputs: minimal })
}

fn check_ring<F: Field>(gens: &[ModuleElement<F>], rank: usize) -> Result<usize> {
    let mut nvars = None;
    for g in gens {
        if g.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: g.len() });
        }
        for p in g {
            match nvars {
                None => nvars = Some(p.nvars()),
                Some(n) if n != p.nvars() => {
                    return Err(Error::InvalidInput("mixed polynomial rings".into()))
                }
                _ => {}
            }
        }
    }
    Ok(nvars.unwrap_or(0))
}

/// A Gröbner basis of the submodule generated by `gens` in the free module with
/// the given degree shifts (position over term, grevlex, graded by shifted degree).
pub fn groebner_basis<F: Field>(shifts: &[i64], gens: &[ModuleElement<F>]) -> Result<Vec<ModuleElement<F>>> {
    let nvars = check_ring(gens, shifts.len())?;
    let ord = ModuleOrder::new(shifts.to_vec());
    let mut inputs = Vec::new();
    for g in gens {
        element_degree(g, shifts)?;
        inputs.push(SVec::from_element(g, &ord));
    }
    let opts = GbOptions { tail_reduce: true, ..Default::default() };
    let out = buchberger(&ord, inputs, &opts)?;
    Ok(out.basis.iter().map(|v| v.to_element(shifts.len(), nvars, 0)).collect())
}

/// Indices of a minimal generating subset of homogeneous generators.
pub fn minimalize<F: Field>(shifts: &[i64], gens: &[ModuleElement<F>]) -> Result<Vec<usize>> {
    check_ring(gens, shifts.len())?;
    let ord = ModuleOrder::new(shifts.to_vec());
    let mut inputs = Vec::new();
    for g in gens {
        element_degree(g, shifts)?;
        inputs.push(SVec::from_element(g, &ord));
    }
    let max_deg = gens
        .iter()
        .filter_map(|g| element_degree(g, shifts).ok().flatten())
        .max();
    let opts = GbOptions { degree_limit: max_deg, ..Default::default() };
    let mut idx = buchberger(&ord, inputs, &opts)?.minimal_inputs;
    idx.sort_by_key(|&i| (element_degree(&gens[i], shifts).ok().flatten(), i));
    Ok(idx)
}

/// Minimal generators of the kernel of the homogeneous map `S^m -> F` sending the
/// `j`-th basis vector (of degree `source_shifts[j]`) to `columns[j]`.
///
/// Rows of the matrix are imposed one at a time, so every Gröbner computation
/// involves a rank one target.
pub fn kernel_of_map<F: Field>(
    target_shifts: &[i64],
    columns: &[ModuleElement<F>],
    source_shifts: &[i64],
) -> Result<Vec<ModuleElement<F>>> {
    if target_shifts.len() <= 1 {
        return kernel_extended(target_shifts, columns, source_shifts);
    }
    if columns.len() != source_shifts.len() {
        return Err(Error::DimensionMismatch { expected: source_shifts.len(), found: columns.len() });
    }
    let nvars = check_ring(columns, target_shifts.len())?;
    let m = source_shifts.len();
    // current kernel generators, as elements of S^m
    let mut gens: Vec<ModuleElement<F>> = (0..m)
        .map(|j| {
            let mut v = vec![Polynomial::zero(nvars); m];
            v[j] = Polynomial::one(nvars);
            v
        })
        .collect();
    for (r, &tshift) in target_shifts.iter().enumerate() {
        let row: Vec<&Polynomial<F>> = columns.iter().map(|c| &c[r]).collect();
        let images: Vec<ModuleElement<F>> = gens
            .iter()
            .map(|g| {
                let mut acc = Polynomial::zero(nvars);
                for (f, e) in g.iter().zip(&row) {
                    if !f.is_zero() && !e.is_zero() {
                        acc = acc.add(&f.mul(e));
                    }
                }
                vec![acc]
            })
            .collect();
        if images.iter().all(|v| v[0].is_zero()) {
            continue;
        }
        let degs: Vec<i64> = gens
            .iter()
            .map(|g| element_degree(g, source_shifts).map(|d| d.expect("kernel generators are nonzero")))
            .collect::<Result<_>>()?;
        let ker = kernel_extended(&[tshift], &images, &degs)?;
        let mut next = Vec::with_capacity(ker.len());
        for k in ker {
            let v = apply_map(&gens, &k, nvars, m);
            if v.iter().any(|p| !p.is_zero()) {
                next.push(v);
            }
        }
        let keep = minimalize(source_shifts, &next)?;
        gens = keep.into_iter().map(|i| next[i].clone()).collect();
        if gens.is_empty() {
            break;
        }
    }
    Ok(gens)
}

/// Kernel through one Gröbner basis of the graph module in `F + S^m` under an
/// elimination order.
pub fn kernel_extended<F: Field>(
    target_shifts: &[i64],
    columns: &[ModuleElement<F>],
    source_shifts: &[i64],
) -> Result<Vec<ModuleElement<F>>> {
    if columns.len() != source_shifts.len() {
        return Err(Error::DimensionMismatch { expected: source_shifts.len(), found: columns.len() });
    }
    let nvars = check_ring(columns, target_shifts.len())?;
    for (c, &s) in columns.iter().zip(source_shifts) {
        if let Some(d) = element_degree(c, target_shifts)? {
            if d != s {
                return Err(Error::InvalidInput(format!(
                    "map is not homogeneous: column of degree {d} on a generator of degree {s}"
                )));
            }
        }
    }
    let r0 = target_shifts.len();
    let m = source_shifts.len();
    let mut shift = target_shifts.to_vec();
    shift.extend_from_slice(source_shifts);
    let mut block = vec![0u32; r0];
    block.extend(std::iter::repeat(1).take(m));
    let ord = ModuleOrder { shift, block, pot: true };
    let mut inputs = Vec::with_capacity(m);
    for (j, c) in columns.iter().enumerate() {
        let mut v = SVec::from_element(c, &ord);
        v.terms.push(((r0 + j) as u32, Monomial::ONE, F::one()));
        inputs.push(v);
    }
    let opts = GbOptions { skip_block: Some(1), tail_reduce: true, ..Default::default() };
    let out = buchberger(&ord, inputs, &opts)?;
    let kernel: Vec<ModuleElement<F>> = out
        .basis
        .iter()
        .filter(|v| ord.block[v.lead().0 as usize] == 1)
        .map(|v| v.to_element(m, nvars, r0 as u32))
        .collect();
    let keep = minimalize(source_shifts, &kernel)?;
    Ok(keep.into_iter().map(|i| kernel[i].clone()).collect())
}

/// Normal form of `v` with respect to a Gröbner basis produced by [`groebner_basis`].
pub fn normal_form<F: Field>(shifts: &[i64], basis: &[ModuleElement<F>], v: &ModuleElement<F>) -> Result<ModuleElement<F>> {
    let nvars = check_ring(std::slice::from_ref(v), shifts.len())?;
    let ord = ModuleOrder::new(shifts.to_vec());
    let opts = GbOptions { tail_reduce: true, ..Default::default() };
    let mut engine = Engine {
        ord: &ord,
        opts: &opts,
        basis: Vec::new(),
        lead: Vec::new(),
        by_comp: vec![Vec::new(); shifts.len()],
        pairs: BTreeMap::new(),
        rank_one: false,
    };
    for b in basis {
        let s = SVec::from_element(b, &ord).monic();
        if s.is_zero() {
            continue;
        }
        let (c, m) = s.lead();
        engine.lead.push((c, m));
        engine.by_comp[c as usize].push(engine.basis.len());
        engine.basis.push(s);
    }
    let r = engine.reduce(SVec::from_element(v, &ord))?;
    Ok(r.to_element(shifts.len(), nvars, 0))
}

/// Apply the matrix with the given columns to a vector of coefficients.
pub fn apply_map<F: Field>(columns: &[ModuleElement<F>], coeffs: &[Polynomial<F>], nvars: usize, rank: usize) -> ModuleElement<F> {
    let mut out = vec![Polynomial::zero(nvars); rank];
    for (c, f) in columns.iter().zip(coeffs) {
        if f.is_zero() {
            continue;
        }
        for (o, p) in out.iter_mut().zip(c) {
            *o = o.add(&p.mul(f));
        }
    }
    out
}
