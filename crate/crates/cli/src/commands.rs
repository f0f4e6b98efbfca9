use std::path::Path;

use serde_json::{json, Value};
use weylres::arrangement::Arrangement;
use weylres::families::B2Family;
use weylres::groebner::with_step_budget;
use weylres::lattice::characteristic_polynomial;
use weylres::logder::{d0_module, derivation_module, oracle_dimension, saito_check, DerivationModule, Freeness};
use weylres::resolution::BettiTable;
use weylres::rootsys::RootSystem;
use weylres::sheaf::{candidate_lines, jumping_scan};
use weylres::{Error, Field, Result};

use crate::field::{with_field, FieldMode};
use crate::{Family, Global, ModuleKind, Outcome, EXIT_ORACLE, EXIT_VERIFY};

pub fn read_arrangement(path: &Path) -> Result<Arrangement> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Arrangement::from_json(&s)
}

fn require_central(a: &Arrangement) -> Result<()> {
    if a.hyperplanes.iter().all(|h| h.is_linear()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("arrangement is not central; cone it first".into()))
    }
}

pub fn parse_interval(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::Parse(format!("interval {s:?} is not of the form a:b")))?;
    let a: i64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad interval start {a:?}")))?;
    let b: i64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad interval end {b:?}")))?;
    if a > b {
        return Err(Error::InvalidInput(format!("empty interval {a}:{b}")));
    }
    Ok((a, b))
}

pub fn build(
    rtype: Option<&str>,
    interval: Option<&str>,
    cone: bool,
    family: Option<Family>,
    k: i64,
    j: i64,
    u: i64,
) -> Result<Outcome> {
    let a = match family {
        Some(Family::B2Start) => B2Family::new(k, j)?.start()?,
        Some(Family::B2Member) => B2Family::new(k, j)?.chain_member(u)?,
        None => {
            let rs: RootSystem = rtype.ok_or_else(|| Error::InvalidInput("--type or --family is required".into()))?.parse()?;
            match interval {
                Some(iv) => {
                    let (lo, hi) = parse_interval(iv)?;
                    let a = Arrangement::deformation(&rs, lo, hi)?;
                    if cone {
                        a.cone()?
                    } else {
                        a
                    }
                }
                None => Arrangement::weyl(&rs),
            }
        }
    };
    let json: Value = serde_json::from_str(&a.to_json()).expect("arrangement json is valid");
    Ok(Outcome::ok(json, a.to_json()))
}

fn module_of<F: Field>(a: &Arrangement, kind: ModuleKind) -> Result<DerivationModule<F>> {
    match kind {
        ModuleKind::D => derivation_module::<F>(a),
        ModuleKind::D0 => d0_module::<F>(a),
    }
}

/// Text layout: one row per degree, generator and syzygy counts side by side.
pub fn betti_text(b: &BettiTable) -> String {
    let pd = b.projective_dimension().unwrap_or(0);
    let mut degrees: Vec<i64> = b.iter().map(|(_, d, _)| d).collect();
    degrees.sort();
    degrees.dedup();
    let header: Vec<String> = (0..=pd)
        .map(|i| match i {
            0 => "generators".to_string(),
            1 => "syzygies".to_string(),
            i => format!("F{i}"),
        })
        .collect();
    let mut s = format!("{:>6}", "degree");
    for h in &header {
        s.push_str(&format!("  {h:>10}"));
    }
    s.push('\n');
    for d in degrees {
        s.push_str(&format!("{d:>6}"));
        for i in 0..=pd {
            let c = b.get(i, d);
            let cell = if c == 0 { String::new() } else { c.to_string() };
            s.push_str(&format!("  {cell:>10}"));
        }
        s.push('\n');
    }
    s
}

fn exponents_text(e: &[i64]) -> String {
    let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Exponents of `D` from a free `D` or `D₀` table.
fn exponents_from(kind: ModuleKind, b: &BettiTable) -> Vec<i64> {
    let mut e = b.degrees(0);
    if kind == ModuleKind::D0 {
        e.push(1);
        e.sort();
    }
    e
}

/// Degreewise comparison of the resolution's Hilbert function with kernel
/// dimensions, up to two degrees past the largest Betti degree.
pub fn oracle_mismatches<F: Field>(a: &Arrangement, kind: ModuleKind, b: &BettiTable) -> Result<Vec<Value>> {
    let n = a.dim;
    let ma = weylres::arrangement::Multiarrangement::simple(a.clone())?;
    let top = b.iter().map(|(_, d, _)| d).max().unwrap_or(0) + 2;
    let mut bad = Vec::new();
    for d in 0..=top {
        let mut oracle = oracle_dimension::<F>(&ma, d as u32)? as i64;
        if kind == ModuleKind::D0 && d >= 1 {
            // D = S θ_E ⊕ D₀ with θ_E of degree 1
            oracle -= binomial(d as usize - 1 + n - 1, n - 1);
        }
        let hf = b.hilbert_function(n, d);
        if oracle != hf {
            bad.push(json!({ "degree": d, "oracle": oracle, "resolution": hf }));
        }
    }
    Ok(bad)
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn kind_name(kind: ModuleKind) -> &'static str {
    match kind {
        ModuleKind::D => "d",
        ModuleKind::D0 => "d0",
    }
}

pub fn betti(g: &Global, field: FieldMode, file: &Path, kind: ModuleKind, oracle: bool) -> Result<Outcome> {
    let a = read_arrangement(file)?;
    require_central(&a)?;
    let (b, mismatches) = with_step_budget(g.max_gb_steps, || {
        with_field!(field, F => {
            let m = module_of::<F>(&a, kind)?;
            let b = m.betti()?;
            let mm = if oracle { Some(oracle_mismatches::<F>(&a, kind, &b)?) } else { None };
            Ok::<_, Error>((b, mm))
        })
    })?;
    let pd = b.projective_dimension().unwrap_or(0);
    let mut text = if pd == 0 {
        format!("free, exp {}\n", exponents_text(&exponents_from(kind, &b)))
    } else {
        format!("pd {pd}\n")
    };
    text.push_str(&betti_text(&b));
    let mut json = json!({
        "module": kind_name(kind),
        "field": field.name(),
        "probabilistic": field.probabilistic(),
        "projective_dimension": pd,
        "free": pd == 0,
        "betti": b.to_json()["betti"],
    });
    if pd == 0 {
        json["exponents"] = json!(exponents_from(kind, &b));
    }
    let mut code = 0;
    if let Some(mm) = mismatches {
        let ok = mm.is_empty();
        json["oracle"] = json!({ "agrees": ok, "mismatches": mm });
        text.push_str(if ok { "oracle: agrees\n" } else { "oracle: MISMATCH\n" });
        for m in &mm {
            text.push_str(&format!("  degree {}: oracle {} resolution {}\n", m["degree"], m["oracle"], m["resolution"]));
        }
        if !ok {
            code = EXIT_ORACLE;
        }
    }
    Ok(Outcome { json, text, code, diagnostic: false })
}

pub fn free(g: &Global, field: FieldMode, file: &Path) -> Result<Outcome> {
    let a = read_arrangement(file)?;
    require_central(&a)?;
    let (verdict, saito) = with_step_budget(g.max_gb_steps, || {
        with_field!(field, F => {
            let verdict = weylres::logder::exponents_if_free::<F>(&a)?;
            let saito = match verdict {
                Freeness::Free { .. } => Some(saito_check::<F>(&a, &derivation_module::<F>(&a)?.generators)?),
                _ => None,
            };
            Ok::<_, Error>((verdict, saito))
        })
    })?;
    let mut json = json!({ "field": field.name(), "probabilistic": field.probabilistic() });
    let text = match &verdict {
        Freeness::Free { exponents } => format!(
            "free, exp {}\nsaito determinant: {}\n",
            exponents_text(exponents),
            match &saito {
                Some(s) if s.passed => format!("{} * Q", s.scalar.as_deref().unwrap_or("?")),
                _ => "FAILED".into(),
            }
        ),
        Freeness::NotFree { projective_dimension, betti } => {
            format!("not free, pd {projective_dimension}\n{}", betti_text(betti))
        }
    };
    json["freeness"] = serde_json::to_value(&verdict).expect("serializes");
    json["saito"] = serde_json::to_value(&saito).expect("serializes");
    let code = if saito.as_ref().is_some_and(|s| !s.passed) { EXIT_VERIFY } else { 0 };
    Ok(Outcome { json, text, code, diagnostic: false })
}

pub fn chi(file: &Path) -> Result<Outcome> {
    let a = read_arrangement(file)?;
    let c = characteristic_polynomial(&a)?;
    let fmt = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let mut text = format!("chi: [{}]\n", fmt(&c.coefficients));
    if let Some(r) = &c.reduced {
        text.push_str(&format!("chi0: [{}]\n", fmt(r)));
    }
    Ok(Outcome::ok(serde_json::to_value(&c).expect("serializes"), text))
}

pub fn jump(g: &Global, field: FieldMode, file: &Path, random_lines: usize, max_order: Option<i64>) -> Result<Outcome> {
    let a = read_arrangement(file)?;
    require_central(&a)?;
    if a.dim != 3 {
        return Err(Error::InvalidInput("jumping lines need an arrangement in three variables".into()));
    }
    let candidates = candidate_lines(&a, &[], random_lines, g.seed)?;
    let scan = with_step_budget(g.max_gb_steps, || {
        with_field!(field, F => {
            let res = d0_module::<F>(&a)?.resolution()?;
            jumping_scan::<F>(&res, &candidates, max_order, g.seed)
        })
    })?;
    let mut text = format!("{} lines, seed {}\n", scan.reports.len(), scan.seed);
    for r in &scan.reports {
        text.push_str(&format!(
            "{:<16} splitting ({}, {}) order {}\n",
            r.line.to_string(),
            r.splitting[0],
            r.splitting[1],
            r.order
        ));
    }
    let lines: Vec<String> = scan.maximal_lines.iter().map(|l| l.to_string()).collect();
    text.push_str(&format!("max order {} on {}\n", scan.max_order, lines.join(", ")));
    let code = if scan.exceeding.is_empty() {
        0
    } else {
        text.push_str(&format!("{} lines exceed the bound\n", scan.exceeding.len()));
        EXIT_VERIFY
    };
    let mut json = serde_json::to_value(&scan).expect("serializes");
    json["field"] = json!(field.name());
    Ok(Outcome { json, text, code, diagnostic: false })
}

pub fn export(g: &Global, field: FieldMode, file: &Path, kind: ModuleKind) -> Result<Outcome> {
    let a = read_arrangement(file)?;
    require_central(&a)?;
    let (gens, degrees, syz, shifts, betti) = with_step_budget(g.max_gb_steps, || {
        with_field!(field, F => {
            let m = module_of::<F>(&a, kind)?;
            let res = m.resolution()?;
            let show = |v: &Vec<weylres::Polynomial<F>>| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
            let gens: Vec<Vec<String>> = res.generators.iter().map(show).collect();
            let syz: Vec<Vec<Vec<String>>> = res.differentials.iter().map(|d| d.iter().map(show).collect()).collect();
            Ok::<_, Error>((gens, res.shifts[0].clone(), syz, res.shifts.clone(), res.betti()))
        })
    })?;
    let json = json!({
        "module": kind_name(kind),
        "field": field.name(),
        "variables": a.var_names(),
        "generators": gens,
        "generator_degrees": degrees,
        "differentials": syz,
        "shifts": shifts,
        "betti": betti.to_json()["betti"],
    });
    let mut text = format!("variables: {}\n", a.var_names().join(" "));
    for (i, (gen, d)) in gens.iter().zip(&degrees).enumerate() {
        text.push_str(&format!("g{i} (degree {d}): [{}]\n", gen.join(", ")));
    }
    for (level, cols) in syz.iter().enumerate() {
        for (c, col) in cols.iter().enumerate() {
            text.push_str(&format!("d{} column {c}: [{}]\n", level + 1, col.join(", ")));
        }
    }
    Ok(Outcome::ok(json, text))
}
