use proptest::prelude::*;
use splint_core::character;
use splint_core::qseries::ScalarSeries;
use splint_core::splint;
use splint_core::{Rational, RootSystem, Weight};

const ALGEBRAS: [&str; 6] = ["A1", "A2", "B2", "G2", "A3", "C3"];

fn algebra() -> impl Strategy<Value = RootSystem> {
    prop::sample::select(ALGEBRAS.to_vec()).prop_map(|s| RootSystem::parse(s).unwrap())
}

fn algebra_and_labels(max: i64) -> impl Strategy<Value = (RootSystem, Vec<i64>)> {
    algebra().prop_flat_map(move |rs| {
        let r = rs.rank();
        (Just(rs), prop::collection::vec(0..=max, r))
    })
}

fn integral_weight(rs: &RootSystem, coords: &[i64]) -> Weight {
    rs.weight_from_labels(coords).unwrap()
}

fn scalar_series() -> impl Strategy<Value = ScalarSeries> {
    (prop::collection::vec((0i64..12, -5i64..5), 0..8), 4i64..12).prop_map(|(terms, cut)| {
        let mut s = ScalarSeries::zero(Rational::from_integer(cut));
        for (e, c) in terms {
            s.add_term(Rational::new(e, 2), Rational::from_integer(c));
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reflections_preserve_inner_product((rs, a) in algebra_and_labels(4), b in prop::collection::vec(-3i64..4, 3)) {
        let x = integral_weight(&rs, &a);
        let yl: Vec<i64> = b.into_iter().take(rs.rank()).chain(std::iter::repeat(0)).take(rs.rank()).collect();
        let y = integral_weight(&rs, &yl);
        for i in 0..rs.rank() {
            let lhs = rs.inner_product(&rs.reflect(i, &x), &rs.reflect(i, &y)).unwrap();
            prop_assert_eq!(lhs, rs.inner_product(&x, &y).unwrap());
        }
    }

    #[test]
    fn orbit_is_reflection_invariant((rs, a) in algebra_and_labels(2)) {
        let mu = integral_weight(&rs, &a);
        let orbit: std::collections::BTreeSet<Weight> =
            rs.weyl_orbit(&mu).unwrap().into_iter().map(|(w, _)| w).collect();
        prop_assert_eq!(rs.weyl_order() % orbit.len() as u64, 0);
        for w in &orbit {
            for i in 0..rs.rank() {
                prop_assert!(orbit.contains(&rs.reflect(i, w)));
            }
        }
    }

    #[test]
    fn dominant_representative_is_dominant((rs, a) in algebra_and_labels(3), flips in prop::collection::vec(0usize..4, 0..6)) {
        let mu = integral_weight(&rs, &a);
        let mut w = mu.clone();
        for f in flips {
            w = rs.reflect(f % rs.rank(), &w);
        }
        let (dom, _, _) = rs.dominant_representative(&w);
        prop_assert!(rs.is_dominant(&dom));
        prop_assert_eq!(dom, mu);
    }

    #[test]
    fn freudenthal_agrees_with_weyl((rs, a) in algebra_and_labels(3)) {
        let mu = integral_weight(&rs, &a);
        prop_assume!(rs.inner_product(rs.rho(), &mu).unwrap() <= Rational::from_integer(12));
        let f = character::freudenthal_character(&rs, &mu).unwrap();
        let w = character::character_via_weyl(&rs, &mu).unwrap();
        prop_assert_eq!(&*f, &w);
        prop_assert_eq!(f.total() as u64, character::weyl_dimension(&rs, &mu).unwrap());
    }

    #[test]
    fn characters_are_weyl_invariant((rs, a) in algebra_and_labels(2)) {
        let mu = integral_weight(&rs, &a);
        let ch = character::freudenthal_character(&rs, &mu).unwrap();
        for i in 0..rs.rank() {
            prop_assert_eq!(ch.map_weights(|w| rs.reflect(i, w)), (*ch).clone());
        }
    }

    #[test]
    fn product_decomposes_into_dimensions((rs, a) in algebra_and_labels(1), (_, b) in algebra_and_labels(1)) {
        let bl: Vec<i64> = b.into_iter().chain(std::iter::repeat(0)).take(rs.rank()).collect();
        let x = integral_weight(&rs, &a);
        let y = integral_weight(&rs, &bl);
        let prod = character::freudenthal_character(&rs, &x).unwrap().mul(&character::freudenthal_character(&rs, &y).unwrap());
        let parts = character::decompose(&rs, &prod).unwrap();
        let mut total = 0u64;
        for (nu, c) in &parts {
            prop_assert!(*c > 0);
            total += *c as u64 * character::weyl_dimension(&rs, nu).unwrap();
        }
        prop_assert_eq!(total, prod.total() as u64);
        prop_assert_eq!(parts, character::decompose_by_denominator(&rs, &prod));
    }

    #[test]
    fn splint_branching_keeps_dimension(idx in 0usize..4, labels in prop::collection::vec(0i64..3, 3)) {
        let entry = &splint::catalog_entries()[idx];
        let s = &entry.splint;
        let g = s.ambient();
        let mu = g.weight_from_labels(&labels[..g.rank()]).unwrap();
        prop_assume!(g.inner_product(g.rho(), &mu).unwrap() <= Rational::from_integer(14));
        let sub = s.subalgebra().unwrap();
        let direct = splint::branch_direct(g, &sub, &mu).unwrap();
        prop_assert_eq!(direct.total_dimension(&sub).unwrap(), character::weyl_dimension(g, &mu).unwrap());
        if matches!(entry.branching, splint::SplintBranching::Verified { .. }) {
            prop_assert_eq!(splint::branch_via_splint(s, &mu).unwrap(), direct);
        }
    }

    #[test]
    fn series_ring_laws(a in scalar_series(), b in scalar_series(), c in scalar_series()) {
        let cut = a.cutoff().min(b.cutoff()).min(c.cutoff());
        let t = |s: &ScalarSeries| s.truncate(cut);
        prop_assert_eq!(t(&a.mul(&b)), t(&b.mul(&a)));
        prop_assert_eq!(t(&a.mul(&b).mul(&c)), t(&a.mul(&b.mul(&c))));
        prop_assert_eq!(t(&a.mul(&b.add(&c))), t(&a.mul(&b).add(&a.mul(&c))));
        prop_assert_eq!(t(&a.add(&b).sub(&b)), t(&a));
    }

    #[test]
    fn group_ring_division_inverts_multiplication((rs, a) in algebra_and_labels(2)) {
        let mu = integral_weight(&rs, &a);
        let ch = character::freudenthal_character(&rs, &mu).unwrap();
        let d = character::weyl_denominator(&rs);
        let q = ch.mul(&d).div_exact(&d, |w| rs.height(w)).unwrap();
        prop_assert_eq!(&q, &*ch);
    }
}
