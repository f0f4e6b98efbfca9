use weylres::arrangement::Arrangement;
use weylres::families::{coned_deformation, B2Family};
use weylres::logder::d0_module;
use weylres::resolution::{BettiTable, FreeResolution, ResolutionMethod};
use weylres::rootsys::RootSystem;
use weylres::{Field, Fp, Rational};

type Q = Rational;

fn groebner_betti<F: Field>(a: &Arrangement) -> BettiTable {
    let d0 = d0_module::<F>(a).unwrap();
    let res = d0.resolution().unwrap();
    let alt = FreeResolution::by_groebner(a.dim, &vec![0; a.dim], res.generators.clone(), res.shifts[0].clone())
        .unwrap();
    assert_eq!(alt.method, ResolutionMethod::Groebner);
    assert!(alt.is_complex());
    alt.betti()
}

#[test]
fn certified_and_groebner_agree() {
    let b2: RootSystem = "B2".parse().unwrap();
    let a3: RootSystem = "A3".parse().unwrap();
    let cases = [
        coned_deformation(&b2, 0, 2).unwrap(),
        coned_deformation(&b2, 0, 3).unwrap(),
        coned_deformation(&b2, -1, 3).unwrap(),
        Arrangement::boolean(3),
    ];
    for a in &cases {
        let res = d0_module::<Q>(a).unwrap().resolution().unwrap();
        assert!(res.is_complex());
        assert_eq!(res.betti(), groebner_betti::<Q>(a), "{a}");
    }
    // Gröbner bases over Q blow up on this one; the modular run stays exact
    let a = coned_deformation(&a3, 0, 2).unwrap();
    let res = d0_module::<Q>(&a).unwrap().resolution().unwrap();
    assert_eq!(res.method, ResolutionMethod::CertifiedLinearAlgebra);
    assert_eq!(res.betti(), groebner_betti::<Fp<2147483647>>(&a));
}

#[test]
fn modular_tables_match_rational_ones() {
    let b2: RootSystem = "B2".parse().unwrap();
    for (lo, hi) in [(0, 2), (0, 3), (-1, 3), (0, 4)] {
        let a = coned_deformation(&b2, lo, hi).unwrap();
        let q = d0_module::<Q>(&a).unwrap().betti().unwrap();
        let p = d0_module::<Fp<2147483647>>(&a).unwrap().betti().unwrap();
        let s = d0_module::<Fp<32003>>(&a).unwrap().betti().unwrap();
        assert_eq!(q, p);
        assert_eq!(q, s);
    }
}

#[test]
fn a3_table() {
    // β_{0,7} = 6 and β_{1,8} = 3
    let a = coned_deformation(&"A3".parse().unwrap(), 0, 2).unwrap();
    let b = d0_module::<Q>(&a).unwrap().betti().unwrap();
    assert_eq!(b, BettiTable::from_entries([(0, 7, 6), (1, 8, 3)]));
}

#[test]
fn b2_rank_and_first_chern_class() {
    // a rank two bundle: β₀ - β₁ = 2, and c₁(E) = 1 - |A| read off the degrees
    for (k, j) in [(0, 2), (0, 3), (1, 2), (0, 4)] {
        let fam = B2Family::new(k, j).unwrap();
        let b = d0_module::<Q>(&fam.target().unwrap()).unwrap().betti().unwrap();
        assert_eq!(b.total(0) as i64 - b.total(1) as i64, 2);
        let c1: i64 = -b.degrees(0).iter().sum::<i64>() + b.degrees(1).iter().sum::<i64>();
        assert_eq!(c1, 1 - fam.size() as i64);
    }
}
