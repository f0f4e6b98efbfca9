use weylres::arrangement::{Arrangement, Hyperplane};
use weylres::families::{a3_chain, catalan_chain, catalan_exponents, shi_chain, shi_exponents, B2Family};
use weylres::freeness::{verify_deletion_chain, yoshinaga_check};
use weylres::lattice::characteristic_polynomial;
use weylres::logder::{d0_module, derivation_module, exponents_if_free, saito_check};
use weylres::rootsys::RootSystem;
use weylres::sheaf::{
    candidate_lines, chern_from_betti, jumping_scan, predicted_splitting_for, splitting_type, stability_check,
    ProjLine, Stability,
};
use weylres::Rational;

type Q = Rational;

#[test]
fn b2_chain_small() {
    for (k, j) in [(0, 2), (0, 3), (1, 2)] {
        let fam = B2Family::new(k, j).unwrap();
        let report = fam.chain::<Q>().unwrap();
        assert!(report.all_match(), "k = {k}, j = {j}");
        assert_eq!(report.start_exponents.as_deref(), Some(&fam.start_exponents()[..]));
        assert_eq!(report.final_betti, fam.expected_betti());
        assert_eq!(fam.target().unwrap().len(), fam.size());
    }
}

#[test]
fn b2_starts_are_free_by_two_criteria() {
    for (k, j) in [(0, 2), (0, 3), (1, 2)] {
        let fam = B2Family::new(k, j).unwrap();
        let start = fam.start().unwrap();
        let exps = fam.start_exponents();
        let d = derivation_module::<Q>(&start).unwrap();
        let cert = saito_check::<Q>(&start, &d.generators).unwrap();
        assert!(cert.passed);
        let z = Hyperplane::linear(&[0, 0, 1]).unwrap();
        let y = yoshinaga_check::<Q>(&start, &z).unwrap();
        assert!(y.certified());
        assert_eq!(y.output_exponents.as_deref(), Some(&exps[..]));
        // the lattice side: χ factors over the exponents
        assert!(characteristic_polynomial(&start).unwrap().factors_as(&exps));
    }
}

#[test]
fn chern_and_stability() {
    for (k, j) in [(0, 2), (0, 3), (1, 3)] {
        let fam = B2Family::new(k, j).unwrap();
        let b = d0_module::<Q>(&fam.target().unwrap()).unwrap().betti().unwrap();
        let c = chern_from_betti(&b, fam.twist()).unwrap();
        assert_eq!((c.c1, c.c2), (0, fam.expected_c2()));
        let st = stability_check(&b, fam.size()).unwrap();
        let want = if j == 2 { Stability::SemistableNotStable } else { Stability::Stable };
        assert_eq!(st.verdict, want);
    }
}

#[test]
fn splitting_respects_degree_and_counts() {
    let fam = B2Family::new(0, 3).unwrap();
    let a = fam.target().unwrap();
    let res = d0_module::<Q>(&a).unwrap().resolution().unwrap();
    let c1 = 1 - a.len() as i64;
    let lines = candidate_lines(&a, &[], 10, 3).unwrap();
    for l in &lines {
        let (e1, e2) = splitting_type(&res, l).unwrap();
        assert_eq!(e1 + e2, c1, "{l}");
        assert!(e1 <= e2);
        if let Some(p) = predicted_splitting_for(&a, l) {
            assert_eq!(p, (e1, e2), "{l}");
        }
    }
    let scan = jumping_scan(&res, &lines, Some(fam.j - 1), 3).unwrap();
    assert!(scan.exceeding.is_empty());
    assert_eq!(scan.max_order, fam.j - 1);
    let l = ProjLine::from_hyperplane(&fam.maximal_jumping_lines()[0]).unwrap();
    assert!(scan.maximal_lines.contains(&l));
}

#[test]
fn a3_chain_k0() {
    let r = a3_chain::<Q>(0).unwrap();
    assert!(r.passed());
}

#[test]
fn shi_chains_reach_pd_one() {
    for t in ["A2", "B2"] {
        let rs: RootSystem = t.parse().unwrap();
        let (start, order) = shi_chain(&rs, 0).unwrap();
        let r = verify_deletion_chain::<Q>(&rs, &start, &order, true).unwrap();
        assert_eq!(r.start_exponents.as_deref(), Some(&shi_exponents(&rs, 1)[..]));
        assert!(r.passed(), "{t}");
        assert_eq!(r.final_projective_dimension, Some(1));
    }
}

#[test]
fn catalan_chain_ends_free() {
    // removing α = 1 from c𝒜^{[0,1]} in height order lands on the Catalan
    // arrangement c𝒜^{[0,0]}, the coned Weyl arrangement
    for t in ["A2", "B2"] {
        let rs: RootSystem = t.parse().unwrap();
        let (start, order) = catalan_chain(&rs, 0).unwrap();
        let r = verify_deletion_chain::<Q>(&rs, &start, &order, true).unwrap();
        assert!(r.aborted.is_none(), "{t}");
        assert_eq!(r.final_projective_dimension, Some(0));
        let mut end: Arrangement = start.clone();
        for h in &order {
            end = end.delete(h).unwrap();
        }
        let e = exponents_if_free::<Q>(&end).unwrap();
        assert_eq!(e.exponents(), Some(&catalan_exponents(&rs, 0)[..]));
    }
}
