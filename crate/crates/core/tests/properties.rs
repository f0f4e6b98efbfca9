//! Property suites checked against independent oracles: degreewise kernels,
//! determinants, point counts over a finite field and the Leibniz rule.

use std::collections::BTreeSet;

use proptest::prelude::*;
use weylres::arrangement::{Arrangement, Hyperplane, Multiarrangement};
use weylres::families::coned_deformation;
use weylres::lattice::characteristic_polynomial;
use weylres::logder::{d0_module, derivation_module, exponents_if_free, oracle_dimension, saito_check, Freeness};
use weylres::rootsys::RootSystem;
use weylres::{DerivationVector, Field, Monomial, Polynomial, Rational};

type Q = Rational;

/// A prime above every minor of a 3x3 matrix with entries in `[-2, 2]`
/// (Hadamard gives at most 41), so reduction mod `P` keeps the lattice.
const P: i64 = 53;

fn dedup_central(forms: Vec<[i64; 3]>) -> Option<Arrangement> {
    let hs: BTreeSet<Hyperplane> = forms.iter().filter_map(|c| Hyperplane::linear(c).ok()).collect();
    if hs.len() < 3 {
        return None;
    }
    Arrangement::new_central(3, hs.into_iter().collect()).ok()
}

fn arb_lines() -> impl Strategy<Value = Arrangement> {
    proptest::collection::vec(proptest::array::uniform3(-2i64..=2), 3..8).prop_filter_map("degenerate", dedup_central)
}

/// Random sub-arrangements (with `z = 0`) of `c𝒜^{[-1,1]}` for A2 or B2.
fn arb_weyl_subarrangement() -> impl Strategy<Value = Arrangement> {
    (prop_oneof![Just("A2"), Just("B2")], proptest::collection::vec(any::<bool>(), 16)).prop_filter_map(
        "too small",
        |(t, keep)| {
            let rs: RootSystem = t.parse().unwrap();
            let full = coned_deformation(&rs, -1, 1).unwrap();
            let z = Hyperplane::linear(&[0, 0, 1]).unwrap();
            let mut hs: Vec<Hyperplane> =
                full.hyperplanes.iter().zip(keep.iter().cycle()).filter(|(_, &k)| k).map(|(h, _)| h.clone()).collect();
            if !hs.contains(&z) {
                hs.push(z);
            }
            (hs.len() >= 4).then(|| Arrangement::new_central(3, hs).unwrap())
        },
    )
}

fn arb_arrangement() -> impl Strategy<Value = Arrangement> {
    prop_oneof![arb_lines(), arb_weyl_subarrangement()]
}

fn binomial(n: i64, k: i64) -> i64 {
    if n < k || k < 0 {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn integer_forms(a: &Arrangement) -> Vec<[i64; 3]> {
    a.hyperplanes
        .iter()
        .map(|h| {
            let refs: Vec<&Rational> = h.coeffs.iter().collect();
            let s = Rational::normalizer(&refs);
            let mut c = [0; 3];
            for (o, q) in c.iter_mut().zip(&h.coeffs) {
                *o = q.mul(&s).to_i64().unwrap();
            }
            c
        })
        .collect()
}

fn eval_mod(c: &[i64; 3], x: [i64; 3]) -> i64 {
    (c[0] * x[0] + c[1] * x[1] + c[2] * x[2]).rem_euclid(P)
}

/// `#{x in F_P^3 : x off every hyperplane}`, and the same count inside `on`.
fn point_counts(forms: &[[i64; 3]], on: &[i64; 3]) -> (i128, i128) {
    let (mut off, mut off_on) = (0, 0);
    for a in 0..P {
        for b in 0..P {
            for c in 0..P {
                let x = [a, b, c];
                let on_h = eval_mod(on, x) == 0;
                let others = forms.iter().filter(|f| *f != on).all(|f| eval_mod(f, x) != 0);
                if others && !on_h {
                    off += 1;
                }
                if others && on_h {
                    off_on += 1;
                }
            }
        }
    }
    (off, off_on)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_dimensions_match_hilbert_function(a in arb_arrangement()) {
        let n = a.dim as i64;
        let ma = Multiarrangement::simple(a.clone()).unwrap();
        let d = derivation_module::<Q>(&a).unwrap();
        let d0 = d0_module::<Q>(&a).unwrap();
        let (bd, bd0) = (d.betti().unwrap(), d0.betti().unwrap());
        let top = bd.iter().chain(bd0.iter()).map(|(_, deg, _)| deg).max().unwrap() + 2;
        for deg in 0..=top {
            let oracle = oracle_dimension::<Q>(&ma, deg as u32).unwrap() as i64;
            prop_assert_eq!(bd.hilbert_function(3, deg), oracle, "D in degree {}", deg);
            // D = S θ_E ⊕ D₀
            let euler = binomial(deg - 1 + n - 1, n - 1);
            prop_assert_eq!(bd0.hilbert_function(3, deg) + euler, oracle, "D0 in degree {}", deg);
        }
        prop_assert!(d0.resolution().unwrap().is_complex());
    }

    #[test]
    fn free_certificates_have_saito_determinants(a in arb_arrangement()) {
        if let Freeness::Free { exponents } = exponents_if_free::<Q>(&a).unwrap() {
            let d = derivation_module::<Q>(&a).unwrap();
            let cert = saito_check::<Q>(&a, &d.generators).unwrap();
            prop_assert!(cert.passed);
            let mut deg = cert.degrees.clone();
            deg.sort();
            prop_assert_eq!(&deg, &exponents);
            prop_assert_eq!(exponents.iter().sum::<i64>(), a.len() as i64);
            // Terao factorization, from the lattice side
            prop_assert!(characteristic_polynomial(&a).unwrap().factors_as(&exponents));
        }
    }

    #[test]
    fn euler_split(a in arb_arrangement()) {
        let q = a.defining_polynomial::<Q>().unwrap();
        for g in &d0_module::<Q>(&a).unwrap().generators {
            prop_assert!(g.apply(&q).is_zero());
        }
        let e = DerivationVector::<Q>::euler(3);
        let eq = e.apply(&q);
        prop_assert_eq!(eq, q.scale(&Q::from_i64(a.len() as i64)));
    }

    #[test]
    fn derivation_is_leibniz(
        coords in proptest::collection::vec(arb_poly(), 3),
        f in arb_poly(),
        g in arb_poly(),
    ) {
        let theta = DerivationVector::new(coords);
        let lhs = theta.apply(&f.mul(&g));
        let rhs = f.mul(&theta.apply(&g)).add(&g.mul(&theta.apply(&f)));
        prop_assert_eq!(lhs, rhs);
        // and linear
        prop_assert_eq!(theta.apply(&f.add(&g)), theta.apply(&f).add(&theta.apply(&g)));
    }
}

fn arb_poly() -> impl Strategy<Value = Polynomial<Q>> {
    proptest::collection::vec((0u32..4, 0u32..4, 0u32..4, -5i64..6), 0..6).prop_map(|ts| {
        Polynomial::from_terms(
            3,
            ts.into_iter().map(|(a, b, c, k)| (Monomial::from_exponents(&[a, b, c]).unwrap(), Q::from_i64(k))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    /// `χ(A) = χ(A \ H) - χ(A^H)`, with both sides also matched against point
    /// counts over `F_53`.
    #[test]
    fn deletion_restriction(a in arb_lines(), pick in 0usize..16) {
        let h = a.hyperplanes[pick % a.len()].clone();
        let chi = characteristic_polynomial(&a).unwrap();
        let del = characteristic_polynomial(&a.delete(&h).unwrap()).unwrap();
        let res = characteristic_polynomial(&a.restrict(&h).unwrap()).unwrap();
        prop_assert_eq!(&chi, &del.sub(&res));

        let forms = integer_forms(&a);
        let hf = integer_forms(&Arrangement::new_central(3, vec![h.clone()]).unwrap())[0];
        let (off, off_on) = point_counts(&forms, &hf);
        prop_assert_eq!(chi.eval(P), off);
        prop_assert_eq!(res.eval(P), off_on);
        prop_assert_eq!(del.eval(P), off + off_on);
    }
}
