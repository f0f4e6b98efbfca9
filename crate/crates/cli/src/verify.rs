//! `verify`: each task checks one stated result on a parameter grid. Tasks are
//! independent and run on the rayon pool; each one is single threaded.

use std::collections::BTreeSet;
use std::time::Instant;

use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};
use weylres::arrangement::Hyperplane;
use weylres::families::{a3_chain, shi_chain, shi_exponents, B2Family};
use weylres::freeness::{verify_deletion_chain, yoshinaga_check};
use weylres::groebner::with_step_budget;
use weylres::logder::{d0_module, derivation_module, saito_check};
use weylres::resolution::BettiTable;
use weylres::rootsys::{RootSystem, RootType};
use weylres::sheaf::{
    candidate_lines, chern_from_betti, jumping_scan, predicted_splitting_for, stability_check, JumpingScan, ProjLine,
    Stability,
};
use weylres::{Error, Field, Result};

use crate::field::{with_field, FieldMode};
use crate::{exit_code_for, Global, Outcome, EXIT_CAP, EXIT_USAGE, EXIT_VERIFY};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TaskId {
    #[value(name = "a2-pd1")]
    A2Pd1,
    #[value(name = "a3-resolution")]
    A3Resolution,
    #[value(name = "ade-pd1")]
    AdePd1,
    #[value(name = "b2-betti")]
    B2Betti,
    #[value(name = "b2-chern")]
    B2Chern,
    #[value(name = "b2-jumping")]
    B2Jumping,
    #[value(name = "b2-distinct")]
    B2Distinct,
    #[value(name = "shi-catalan-free")]
    ShiCatalanFree,
}

impl TaskId {
    pub fn name(self) -> &'static str {
        match self {
            TaskId::A2Pd1 => "a2-pd1",
            TaskId::A3Resolution => "a3-resolution",
            TaskId::AdePd1 => "ade-pd1",
            TaskId::B2Betti => "b2-betti",
            TaskId::B2Chern => "b2-chern",
            TaskId::B2Jumping => "b2-jumping",
            TaskId::B2Distinct => "b2-distinct",
            TaskId::ShiCatalanFree => "shi-catalan-free",
        }
    }
}

pub struct Params {
    pub k: Option<i64>,
    pub j: Option<i64>,
    pub kprime: Option<i64>,
    pub rtype: Option<String>,
    pub random_lines: usize,
}

/// One concrete task instance.
#[derive(Clone, Debug)]
pub struct Task {
    pub id: TaskId,
    pub k: i64,
    pub j: Option<i64>,
    pub kprime: Option<i64>,
    pub rtype: Option<String>,
}

impl Task {
    fn params(&self) -> Value {
        let mut p = json!({ "k": self.k });
        if let Some(j) = self.j {
            p["j"] = json!(j);
        }
        if let Some(kp) = self.kprime {
            p["kprime"] = json!(kp);
        }
        if let Some(t) = &self.rtype {
            p["type"] = json!(t);
        }
        p
    }

    fn label(&self) -> String {
        let mut s = format!("{}", self.id.name());
        if let Some(t) = &self.rtype {
            s.push_str(&format!(" {t}"));
        }
        s.push_str(&format!(" k={}", self.k));
        if let Some(kp) = self.kprime {
            s.push_str(&format!(" k'={kp}"));
        }
        if let Some(j) = self.j {
            s.push_str(&format!(" j={j}"));
        }
        s
    }
}

const K_MAX: i64 = 2;
const J_MAX: i64 = 6;

fn check_k(k: i64) -> Result<i64> {
    if (0..=K_MAX).contains(&k) {
        Ok(k)
    } else {
        Err(Error::InvalidInput(format!("k = {k} outside [0, {K_MAX}]")))
    }
}

fn check_j(j: i64, lo: i64) -> Result<i64> {
    if (lo..=J_MAX).contains(&j) {
        Ok(j)
    } else {
        Err(Error::InvalidInput(format!("j = {j} outside [{lo}, {J_MAX}]")))
    }
}

/// Expands the requested tasks over their default grids where a parameter is
/// missing.
pub fn expand(ids: &[TaskId], p: &Params) -> Result<Vec<Task>> {
    let ks: Vec<i64> = match p.k {
        Some(k) => vec![check_k(k)?],
        None => vec![0, 1],
    };
    let js = |lo: i64| -> Result<Vec<i64>> {
        match p.j {
            Some(j) => Ok(vec![check_j(j, lo)?]),
            None => Ok((lo.max(2)..=5).collect()),
        }
    };
    let mut out = Vec::new();
    for &id in ids {
        let task = |k: i64, j: Option<i64>| Task { id, k, j, kprime: None, rtype: None };
        match id {
            TaskId::A2Pd1 | TaskId::A3Resolution => out.extend(ks.iter().map(|&k| task(k, None))),
            TaskId::AdePd1 => {
                let t = p.rtype.clone().unwrap_or_else(|| "A3".into());
                let rs: RootSystem = t.parse()?;
                if rs.rtype == RootType::B {
                    return Err(Error::InvalidInput(format!("{t} is not simply laced")));
                }
                if rs.rank > 4 {
                    return Err(Error::InvalidInput(format!("rank {} is beyond desk scale", rs.rank)));
                }
                out.extend(ks.iter().map(|&k| Task { rtype: Some(rs.to_string()), ..task(k, None) }));
            }
            TaskId::B2Betti | TaskId::B2Chern | TaskId::ShiCatalanFree => {
                for &k in &ks {
                    out.extend(js(2)?.into_iter().map(|j| task(k, Some(j))));
                }
            }
            TaskId::B2Jumping => {
                for &k in &ks {
                    out.extend(js(3)?.into_iter().map(|j| task(k, Some(j))));
                }
            }
            TaskId::B2Distinct => {
                let k = check_k(p.k.unwrap_or(0))?;
                let kp = check_k(p.kprime.unwrap_or(k + 1))?;
                if kp == k {
                    return Err(Error::InvalidInput("b2-distinct needs k != kprime".into()));
                }
                let j = check_j(p.j.unwrap_or(3), 3)?;
                out.push(Task { kprime: Some(kp), ..task(k, Some(j)) });
            }
        }
    }
    Ok(out)
}

/// Evidence and verdict of one task.
pub struct Verdict {
    pub passed: bool,
    pub summary: String,
    pub evidence: Value,
}

/// `y = s z` for lines through `(1 : 0 : 0)`, the generic form otherwise.
pub fn line_label(l: &ProjLine) -> String {
    match l.coeffs {
        [0, 1, 0] => "y=0".into(),
        [0, 1, 1] => "y=-z".into(),
        [0, 1, -1] => "y=z".into(),
        [0, 1, c] => format!("y={}z", -c),
        [0, 0, 1] => "z=0".into(),
        _ => l.to_string(),
    }
}

fn pd1_chain<F: Field>(rtype: &str, k: i64) -> Result<Verdict> {
    let rs: RootSystem = rtype.parse()?;
    let (start, order) = shi_chain(&rs, k)?;
    let report = verify_deletion_chain::<F>(&rs, &start, &order, false)?;
    let expected_start = shi_exponents(&rs, k + 1);
    let start_ok = report.start_exponents.as_deref() == Some(&expected_start[..]);
    let pd = report.final_projective_dimension;
    let passed = start_ok && report.passed() && pd == Some(1);
    let summary = match &report.aborted {
        Some((i, flat)) => format!("chain stopped at step {i}: not locally free along {}", flat.join(", ")),
        None => format!(
            "start exp {:?}, {} local freeness gates passed, pd {}",
            expected_start,
            report.steps.len(),
            pd.map_or("?".into(), |p| p.to_string())
        ),
    };
    Ok(Verdict { passed, summary, evidence: json!({ "expected_start_exponents": expected_start, "chain": report }) })
}

fn a3_resolution<F: Field>(k: i64) -> Result<Verdict> {
    let expected = BettiTable::from_entries([(0, 4 * k + 7, 6), (1, 4 * k + 8, 3)]);
    let chain = a3_chain::<F>(k)?;
    let passed = chain.passed() && chain.direct_d0 == expected;
    let summary = format!(
        "D0 betti {}, certificates {}",
        compact(&chain.direct_d0),
        if chain.passed() { "all hold" } else { "incomplete" }
    );
    Ok(Verdict { passed, summary, evidence: json!({ "expected": expected, "chain": chain }) })
}

/// `{deg: count}` per homological position.
pub fn compact(b: &BettiTable) -> String {
    let pd = b.projective_dimension().unwrap_or(0);
    let parts: Vec<String> = (0..=pd)
        .map(|i| {
            let e: Vec<String> = b.iter().filter(|(p, _, _)| *p == i).map(|(_, d, c)| format!("{d}:{c}")).collect();
            format!("{{{}}}", e.join(", "))
        })
        .collect();
    parts.join(" <- ")
}

fn b2_betti<F: Field>(k: i64, j: i64) -> Result<Verdict> {
    let fam = B2Family::new(k, j)?;
    let chain = fam.chain::<F>()?;
    let expected = fam.expected_betti();
    let stated = fam.stated_betti();
    let b = &chain.final_betti;
    let (m, r) = (fam.m as usize, fam.r as usize);
    let shape = b.projective_dimension() == Some(1) && b.total(0) == 2 * m + 1 + r && b.total(1) == 2 * m + r - 1;
    let start_ok = chain.start_exponents.as_deref() == Some(&fam.start_exponents()[..]);
    let passed = chain.all_match() && *b == expected && shape && start_ok;
    let mut summary = format!("D0 betti {}", compact(b));
    if stated != expected {
        summary.push_str(&format!("; published layout {} differs", compact(&stated)));
    }
    let evidence = json!({
        "expected": expected,
        "published_layout": stated,
        "published_layout_matches": stated == *b,
        "chain": chain,
    });
    Ok(Verdict { passed, summary, evidence })
}

fn b2_chern<F: Field>(k: i64, j: i64) -> Result<Verdict> {
    let fam = B2Family::new(k, j)?;
    let b = d0_module::<F>(&fam.target()?)?.betti()?;
    let c = chern_from_betti(&b, fam.twist())?;
    let st = stability_check(&b, fam.size())?;
    let expected = if j == 2 { Stability::SemistableNotStable } else { Stability::Stable };
    let passed = c.c1 == 0 && c.c2 == fam.expected_c2() && st.verdict == expected;
    let summary = format!("c1 = {}, c2 = {} (expected {}), {:?}", c.c1, c.c2, fam.expected_c2(), st.verdict);
    Ok(Verdict { passed, summary, evidence: json!({ "betti": b, "chern": c, "stability": st }) })
}

fn b2_scan<F: Field>(fam: &B2Family, n_random: usize, seed: u64) -> Result<JumpingScan> {
    let target = fam.target()?;
    let res = d0_module::<F>(&target)?.resolution()?;
    let mut extra = Vec::new();
    for u in 0..fam.m {
        extra.push(ProjLine::from_hyperplane(&fam.h_line(u))?);
        extra.push(ProjLine::from_hyperplane(&fam.l_line(u))?);
    }
    let candidates = candidate_lines(&target, &extra, n_random, seed)?;
    jumping_scan::<F>(&res, &candidates, Some(fam.j - 1), seed)
}

fn order_on(scan: &JumpingScan, h: &Hyperplane) -> Result<Option<i64>> {
    let l = ProjLine::from_hyperplane(h)?;
    Ok(scan.reports.iter().find(|r| r.line == l).map(|r| r.order))
}

fn expected_maximal(fam: &B2Family) -> Result<BTreeSet<ProjLine>> {
    fam.maximal_jumping_lines().iter().map(ProjLine::from_hyperplane).collect()
}

fn b2_jumping<F: Field>(k: i64, j: i64, n_random: usize, seed: u64) -> Result<Verdict> {
    let fam = B2Family::new(k, j)?;
    let target = fam.target()?;
    let scan = b2_scan::<F>(&fam, n_random, seed)?;
    let mut family = Vec::new();
    let mut family_ok = true;
    for u in 0..fam.m {
        let (h, l) = (order_on(&scan, &fam.h_line(u))?, order_on(&scan, &fam.l_line(u))?);
        let want = fam.jumping_order(u);
        // the stated range is 1 <= u <= m - 1; u = 0 is recorded only
        if u >= 1 && (h != Some(want) || l != Some(want)) {
            family_ok = false;
        }
        family.push(json!({ "u": u, "expected": want, "h_order": h, "l_order": l }));
    }
    let observed: BTreeSet<ProjLine> = scan.maximal_lines.iter().cloned().collect();
    let maximal_ok = observed == expected_maximal(&fam)?;
    let mut disagreements = Vec::new();
    for r in &scan.reports {
        if let Some((a, b)) = predicted_splitting_for(&target, &r.line) {
            if [a, b] != r.splitting_e {
                disagreements.push(line_label(&r.line));
            }
        }
    }
    let passed = family_ok && maximal_ok && scan.max_order == j - 1 && scan.exceeding.is_empty() && disagreements.is_empty();
    let labels: Vec<String> = scan.maximal_lines.iter().map(line_label).collect();
    let summary = format!(
        "{} lines, max order {} on {}{}",
        scan.reports.len(),
        scan.max_order,
        labels.join(", "),
        if disagreements.is_empty() { String::new() } else { format!("; count predictions fail on {}", disagreements.join(", ")) }
    );
    let evidence = json!({
        "jumping_lines": labels,
        "max_order": scan.max_order,
        "family": family,
        "prediction_disagreements": disagreements,
        "scan": scan,
    });
    Ok(Verdict { passed, summary, evidence })
}

fn b2_distinct<F: Field>(k: i64, kp: i64, j: i64, n_random: usize, seed: u64) -> Result<Verdict> {
    let (f1, f2) = (B2Family::new(k, j)?, B2Family::new(kp, j)?);
    let b1 = d0_module::<F>(&f1.target()?)?.betti()?;
    let b2 = d0_module::<F>(&f2.target()?)?.betti()?;
    let shifted_equal = b1.shifted(4 * (kp - k)) == b2;
    let s1 = b2_scan::<F>(&f1, n_random, seed)?;
    let s2 = b2_scan::<F>(&f2, n_random, seed)?;
    let m1: BTreeSet<ProjLine> = s1.maximal_lines.iter().cloned().collect();
    let m2: BTreeSet<ProjLine> = s2.maximal_lines.iter().cloned().collect();
    let disjoint = m1.is_disjoint(&m2);
    let orders_ok = s1.max_order == j - 1 && s2.max_order == j - 1;
    let passed = shifted_equal && disjoint && orders_ok;
    let show = |s: &BTreeSet<ProjLine>| s.iter().map(line_label).collect::<Vec<_>>();
    let summary = format!(
        "betti {} shifted by {}: {}; jumping lines {:?} vs {:?}",
        compact(&b1),
        4 * (kp - k),
        if shifted_equal { "equal" } else { "different" },
        show(&m1),
        show(&m2)
    );
    let evidence = json!({
        "betti": [b1, b2],
        "shift": 4 * (kp - k),
        "shifted_equal": shifted_equal,
        "jumping_lines": [show(&m1), show(&m2)],
        "max_orders": [s1.max_order, s2.max_order],
        "disjoint": disjoint,
    });
    Ok(Verdict { passed, summary, evidence })
}

fn shi_catalan_free<F: Field>(k: i64, j: i64) -> Result<Verdict> {
    let fam = B2Family::new(k, j)?;
    let start = fam.start()?;
    let exps = fam.start_exponents();
    let d = derivation_module::<F>(&start)?;
    let saito = if d.generators.len() == 3 { Some(saito_check::<F>(&start, &d.generators)?) } else { None };
    let saito_ok = saito.as_ref().is_some_and(|s| {
        let mut deg = s.degrees.clone();
        deg.sort();
        s.passed && deg == exps
    });
    let z = Hyperplane::linear(&[0, 0, 1])?;
    let yosh = yoshinaga_check::<F>(&start, &z)?;
    let yosh_ok = yosh.hypothesis_holds && yosh.output_exponents.as_deref() == Some(&exps[..]);
    let passed = saito_ok && yosh_ok && yosh.confirmed == Some(true);
    let summary = format!(
        "exp {:?}: saito {}, yoshinaga chi0(0) = {} vs {:?}",
        exps,
        if saito_ok { "ok" } else { "FAILED" },
        yosh.chi0_at_zero.unwrap_or_default(),
        yosh.ziegler_exponents.unwrap_or_default()
    );
    Ok(Verdict { passed, summary, evidence: json!({ "exponents": exps, "saito": saito, "yoshinaga": yosh }) })
}

fn run_task<F: Field>(t: &Task, p: &Params, seed: u64) -> Result<Verdict> {
    let j = || t.j.ok_or_else(|| Error::InvalidInput("missing j".into()));
    match t.id {
        TaskId::A2Pd1 => pd1_chain::<F>("A2", t.k),
        TaskId::AdePd1 => pd1_chain::<F>(t.rtype.as_deref().unwrap_or("A3"), t.k),
        TaskId::A3Resolution => a3_resolution::<F>(t.k),
        TaskId::B2Betti => b2_betti::<F>(t.k, j()?),
        TaskId::B2Chern => b2_chern::<F>(t.k, j()?),
        TaskId::B2Jumping => b2_jumping::<F>(t.k, j()?, p.random_lines, seed),
        TaskId::B2Distinct => {
            b2_distinct::<F>(t.k, t.kprime.unwrap_or(t.k + 1), j()?, p.random_lines, seed)
        }
        TaskId::ShiCatalanFree => shi_catalan_free::<F>(t.k, j()?),
    }
}

pub fn run(g: &Global, field: FieldMode, ids: &[TaskId], p: &Params) -> Result<Outcome> {
    let tasks = expand(ids, p)?;
    let results: Vec<(Task, std::result::Result<Verdict, Error>, u128)> = tasks
        .into_par_iter()
        .map(|t| {
            let start = Instant::now();
            let v = with_step_budget(g.max_gb_steps, || with_field!(field, F => run_task::<F>(&t, p, g.seed)));
            (t, v, start.elapsed().as_millis())
        })
        .collect();
    let mut code = 0u8;
    let mut text = String::new();
    let mut items = Vec::new();
    let mut n_pass = 0;
    for (t, v, ms) in &results {
        let secs = *ms as f64 / 1000.0;
        match v {
            Ok(v) => {
                if v.passed {
                    n_pass += 1;
                } else {
                    code = code.max(EXIT_VERIFY);
                }
                let tag = if v.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{tag} {}  {}  ({secs:.1} s)\n", t.label(), v.summary));
                items.push(json!({
                    "task": t.id.name(),
                    "params": t.params(),
                    "status": if v.passed { "pass" } else { "fail" },
                    "passed": v.passed,
                    "evidence": v.evidence,
                    "elapsed_ms": ms,
                }));
            }
            Err(e) => {
                let c = exit_code_for(e);
                let status = if c == EXIT_CAP { "truncated" } else { "error" };
                code = code.max(match c {
                    EXIT_USAGE => EXIT_USAGE,
                    EXIT_CAP => EXIT_CAP,
                    _ => EXIT_VERIFY,
                });
                text.push_str(&format!("{} {}  {e}  ({secs:.1} s)\n", status.to_uppercase(), t.label()));
                items.push(json!({
                    "task": t.id.name(),
                    "params": t.params(),
                    "status": status,
                    "passed": false,
                    "error": e.to_string(),
                    "elapsed_ms": ms,
                }));
            }
        }
    }
    // a failure outranks a truncation
    if results.iter().any(|(_, v, _)| matches!(v, Ok(v) if !v.passed)) {
        code = EXIT_VERIFY;
    }
    text.push_str(&format!("{n_pass}/{} passed (field {}", results.len(), field.name()));
    if field.probabilistic() {
        text.push_str(", probabilistic");
    }
    text.push_str(&format!(", seed {})\n", g.seed));
    let json = json!({
        "field": field.name(),
        "probabilistic": field.probabilistic(),
        "seed": g.seed,
        "passed": code == 0,
        "results": items,
    });
    Ok(Outcome { json, text, code, diagnostic: false })
}
