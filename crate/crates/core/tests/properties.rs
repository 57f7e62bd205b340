use proptest::prelude::*;

use quartic_mahler::arith::is_squarefree;
use quartic_mahler::exactfield::FieldElement;
use quartic_mahler::fields::{canonicalize_biquadratic, classify_cyclic, QuarticField};
use quartic_mahler::measure::{mahler_measure, theoretical_bounds, PrecisionContext};
use quartic_mahler::rootsofunity::{build_generator, torsion_case, Root};
use quartic_mahler::search::quick_measure;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn sf(range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = i64> {
    range.prop_filter("square-free, not ±1", |&d| d.abs() > 1 && is_squarefree(d.abs()))
}

fn biquadratic() -> impl Strategy<Value = QuarticField> {
    (sf(-60..=60), sf(-60..=60))
        .prop_filter_map("distinct quadratic subfields", |(a, b)| canonicalize_biquadratic(a, b).ok().map(Into::into))
}

fn cyclic() -> impl Strategy<Value = QuarticField> {
    let shapes = [(1, 2, 5), (2, 1, 5), (1, 4, 17), (4, 1, 17), (2, 3, 13), (3, 2, 13), (1, 1, 2), (5, 2, 29)];
    ((-15i64..=15), 0..shapes.len())
        .prop_filter_map("valid cyclic parameters", move |(a, i)| {
            let (b, c, d) = shapes[i];
            classify_cyclic(a, b, c, d).ok().map(Into::into)
        })
}

fn field() -> impl Strategy<Value = QuarticField> {
    prop_oneof![biquadratic(), cyclic()]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn measure_invariant_under_sign_and_conjugation(f in field(), x in prop::array::uniform4(-3i64..=3)) {
        // Integer coordinates in (1, √r1, √r2, √r3) or (1, √D, ρ, σ) are integral.
        let u = FieldElement::from_ints(f.basis(), x);
        prop_assert!(u.is_integral().unwrap());
        prop_assume!(u.is_primitive());
        let m = mahler_measure(&u, &ctx()).unwrap();
        prop_assert!(m >= 1.0 - 1e-12);
        let neg = mahler_measure(&u.neg(), &ctx()).unwrap();
        prop_assert!((m - neg).abs() <= 1e-9 * m);
        for c in u.conjugates() {
            let mc = mahler_measure(&c, &ctx()).unwrap();
            prop_assert!((m - mc).abs() <= 1e-9 * m);
        }
        let q = quick_measure(&f, &x.map(|v| 4 * v)).unwrap();
        prop_assert!((m - q).abs() <= 1e-6 * m);
    }

    #[test]
    fn product_matches_complex_product(f in field(), x in prop::array::uniform4(-8i64..=8), y in prop::array::uniform4(-8i64..=8)) {
        let u = FieldElement::from_quarters(f.basis(), x);
        let v = FieldElement::from_quarters(f.basis(), y);
        let p = u.mul(&v).unwrap();
        let want = u.to_complex() * v.to_complex();
        prop_assert!((p.to_complex() - want).norm() <= 1e-9 * (1.0 + want.norm()));
        prop_assert_eq!(u.mul(&v).unwrap(), v.mul(&u).unwrap());
    }

    #[test]
    fn minimal_polynomial_vanishes(f in field(), x in prop::array::uniform4(-8i64..=8)) {
        let u = FieldElement::from_quarters(f.basis(), x);
        prop_assume!(!u.is_rational());
        let poly = u.minimal_polynomial();
        let z = u.to_complex();
        let val = (0..=poly.degree()).rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, i| {
            acc * z + num_complex::Complex64::new(num_traits::ToPrimitive::to_f64(&poly.coeff(i)).unwrap(), 0.0)
        });
        let scale: f64 = (0..=poly.degree())
            .map(|i| num_traits::ToPrimitive::to_f64(&poly.coeff(i)).unwrap().abs() * z.norm().max(1.0).powi(i as i32))
            .sum();
        prop_assert!(val.norm() <= 1e-9 * scale, "{} at {}", poly, z);
    }

    #[test]
    fn bound_set_is_consistent(f in field()) {
        let b = theoretical_bounds(&f);
        prop_assert!(b.lower() <= b.upper.value);
        prop_assert!(b.lower_terms.iter().all(|t| t.value > 0.0));
    }

    #[test]
    fn torsion_generators_are_integral_and_primitive(k in 2u64..2000, omega in any::<bool>()) {
        prop_assume!(is_squarefree(k as i64));
        let root = if omega { Root::Omega } else { Root::I };
        prop_assume!(!(omega && k == 3));
        let g = build_generator(torsion_case(k, root).unwrap()).unwrap();
        prop_assert!(g.alpha.is_integral().unwrap() && g.alpha.is_primitive());
        let m = g.measure(&ctx()).unwrap();
        prop_assert!(m <= g.c_k() * (1.0 + 1e-12), "k={} {} M={} c_K={}", k, root, m, g.c_k());
    }
}
