use std::collections::BTreeSet;

use garside::builtins::{artin_symmetric, dihedral_chamber, dual_braid, rank2_counterexample};
use garside::conjugacy::{are_conjugate, fixed_subgerm, summit_set, SearchOptions};
use garside::divided::{subdivision_iso, DividedGerm};
use garside::free::{invert, is_greedy, multiply, normal_form, phi_on_morphism, NormalForm};
use garside::germ::{parse_germ, validate};
use garside::nerve::{check_cyclic_identities, count_factorizations, garside_dimension, ZPolynomial};
use garside::{GarsideGerm, ObjectId, SimpleId};
use proptest::prelude::*;

fn germs() -> Vec<GarsideGerm> {
    vec![
        validate(artin_symmetric(4).unwrap()).unwrap(),
        validate(dual_braid(4).unwrap()).unwrap(),
        validate(dihedral_chamber(4).unwrap()).unwrap(),
        validate(rank2_counterexample()).unwrap(),
        DividedGerm::build(&validate(artin_symmetric(3).unwrap()).unwrap(), 2)
            .unwrap()
            .germ()
            .clone(),
    ]
}

fn a3() -> GarsideGerm {
    validate(artin_symmetric(4).unwrap()).unwrap()
}

fn a2() -> GarsideGerm {
    validate(artin_symmetric(3).unwrap()).unwrap()
}

/// A composable walk of simples from `x`, choosing by the given indices.
fn walk(g: &GarsideGerm, x: ObjectId, picks: &[usize]) -> Vec<SimpleId> {
    let mut at = x;
    picks
        .iter()
        .map(|&i| {
            let row = g.simples_from(at);
            let s = row[i % row.len()];
            at = g.target(s);
            s
        })
        .collect()
}

fn element(g: &GarsideGerm, x: ObjectId, picks: &[usize], k: i64) -> NormalForm {
    normal_form(g, x, &walk(g, x, picks), k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn meet_and_join_are_bounds(which in 0usize..5, obj in 0usize..64, i in 0usize..64, j in 0usize..64) {
        let gs = germs();
        let g = &gs[which];
        let x = ObjectId((obj % g.object_count()) as u32);
        let row = g.simples_from(x);
        let (a, b) = (row[i % row.len()], row[j % row.len()]);
        let (meet, join) = (g.meet(a, b).unwrap(), g.join(a, b).unwrap());
        let divides = |u, v| g.left_divides(u, v).unwrap();
        prop_assert!(divides(meet, a) && divides(meet, b));
        prop_assert!(divides(a, join) && divides(b, join));
        for &c in row {
            if divides(c, a) && divides(c, b) {
                prop_assert!(divides(c, meet));
            }
            if divides(a, c) && divides(b, c) {
                prop_assert!(divides(join, c));
            }
        }
    }

    #[test]
    fn complement_and_phi(which in 0usize..5, obj in 0usize..64, i in 0usize..64) {
        let gs = germs();
        let g = &gs[which];
        let x = ObjectId((obj % g.object_count()) as u32);
        let row = g.simples_from(x);
        let s = row[i % row.len()];
        prop_assert_eq!(g.product(s, g.complement(s)), Some(g.delta(x)));
        let phi = g.phi(s);
        prop_assert_eq!(g.length(phi), g.length(s));
        prop_assert_eq!(g.complement(g.complement(s)), phi);
    }

    #[test]
    fn normal_forms_compose(u in prop::collection::vec(0usize..32, 0..6), v in prop::collection::vec(0usize..32, 0..6),
                            k in -2i64..3, l in -2i64..3) {
        let g = a3();
        let x = ObjectId(0);
        let (f, h) = (element(&g, x, &u, k), element(&g, x, &v, l));
        prop_assert!(is_greedy(&g, &f) && is_greedy(&g, &h));
        let fh = multiply(&g, &f, &h).unwrap();
        prop_assert!(is_greedy(&g, &fh));
        if k == 0 && l == 0 {
            let mut both = walk(&g, x, &u);
            both.extend(walk(&g, x, &v));
            prop_assert_eq!(normal_form(&g, x, &both, 0).unwrap(), fh.clone());
        }
        prop_assert_eq!(invert(&g, &invert(&g, &f)), f.clone());
        prop_assert_eq!(multiply(&g, &fh, &invert(&g, &h)).unwrap(), f.clone());
        let phi = |e: &NormalForm| phi_on_morphism(&g, e, 1);
        prop_assert_eq!(phi(&fh), multiply(&g, &phi(&f), &phi(&h)).unwrap());
    }

    #[test]
    fn multi_object_normal_forms(which in 2usize..5, obj in 0usize..64, picks in prop::collection::vec(0usize..64, 0..8), k in -2i64..3) {
        let gs = germs();
        let g = &gs[which];
        let x = ObjectId((obj % g.object_count()) as u32);
        let f = element(g, x, &picks, k);
        prop_assert!(is_greedy(g, &f));
        prop_assert_eq!(f.target(g), g.phi_power_obj(walk(g, x, &picks).last().map_or(x, |&s| g.target(s)), k));
        prop_assert!(multiply(g, &f, &invert(g, &f)).unwrap().is_identity());
    }

    #[test]
    fn theta_is_multiplicative(m in 1usize..4, u in prop::collection::vec(0usize..8, 0..4), v in prop::collection::vec(0usize..8, 0..4),
                               k in -1i64..2) {
        let g = a2();
        let d = DividedGerm::build(&g, m).unwrap();
        let x = ObjectId(0);
        let (f, h) = (element(&g, x, &u, k), element(&g, x, &v, 0));
        let lhs = d.theta_morphism(&multiply(&g, &f, &h).unwrap()).unwrap();
        let rhs = multiply(d.germ(), &d.theta_morphism(&f).unwrap(), &d.theta_morphism(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn interpolation_reproduces_samples(values in prop::collection::vec(-1000i128..1000, 1..7)) {
        let z = ZPolynomial::interpolate(&values);
        prop_assert!(z.degree() < values.len());
        for (i, &v) in values.iter().enumerate() {
            prop_assert_eq!(z.eval(i as i64 + 1), v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugates_are_recognized(u in prop::collection::vec(0usize..24, 1..4), k in -1i64..2, c in prop::collection::vec(0usize..24, 0..3),
                                 ck in -1i64..2) {
        let g = a3();
        let x = ObjectId(0);
        let f = element(&g, x, &u, k);
        let conj = element(&g, x, &c, ck);
        let h = multiply(&g, &multiply(&g, &invert(&g, &conj), &f).unwrap(), &conj).unwrap();
        let opts = SearchOptions::default();
        let w = are_conjugate(&g, &f, &h, &opts).unwrap();
        prop_assert!(w.is_some_and(|w| w.verify(&g)));
        let elements = |e: &NormalForm| -> BTreeSet<NormalForm> {
            summit_set(&g, e, &opts).unwrap().elements.into_iter().map(|s| s.element).collect()
        };
        prop_assert_eq!(elements(&f), elements(&h));
    }
}

#[test]
fn germ_text_round_trips() {
    for g in germs() {
        let text = g.to_text();
        let again = validate(parse_germ(&text).unwrap()).unwrap();
        assert_eq!(again.to_text(), text);
    }
}

#[test]
fn divided_objects_count_factorizations() {
    for g in [
        a2(),
        validate(dual_braid(3).unwrap()).unwrap(),
        validate(dihedral_chamber(3).unwrap()).unwrap(),
    ] {
        for m in 1..=4 {
            let d = DividedGerm::build(&g, m).unwrap();
            assert_eq!(d.germ().object_count() as u128, count_factorizations(&g, m).total);
        }
    }
}

#[test]
fn grouping_isomorphisms() {
    let g = validate(dual_braid(3).unwrap()).unwrap();
    for (e, q) in [(1, 2), (2, 2), (2, 3), (3, 2)] {
        let iso = subdivision_iso(&g, e, q).unwrap();
        assert_eq!(iso.fine.germ().object_count(), iso.coarse.germ().object_count());
    }
}

#[test]
fn cyclic_identities_in_larger_germs() {
    for g in [
        validate(dual_braid(4).unwrap()).unwrap(),
        a3(),
        validate(dihedral_chamber(5).unwrap()).unwrap(),
    ] {
        let report = check_cyclic_identities(&g, 2);
        assert!(report.holds(), "{:?}", report.failures.first());
    }
}

#[test]
fn divided_dimensions() {
    let g = a2();
    for m in 1..=4 {
        let d = DividedGerm::build(&g, m).unwrap();
        assert_eq!(garside_dimension(d.germ()), garside_dimension(&g), "m = {m}");
    }
}

#[test]
fn fixed_divided_dimension_bound() {
    let bases = [
        a2(),
        a3(),
        validate(dual_braid(3).unwrap()).unwrap(),
        validate(dual_braid(4).unwrap()).unwrap(),
        validate(dihedral_chamber(3).unwrap()).unwrap(),
    ];
    let mut nonempty = 0;
    for g in &bases {
        let fixed = fixed_subgerm(g, &g.phi_automorphism(1)).unwrap();
        for m in 1..=3 {
            let d = DividedGerm::build(g, m).unwrap();
            let c = d.germ();
            let sub = fixed_subgerm(c, &c.phi_automorphism(1)).unwrap();
            if sub.subgerm.object_count() > 0 {
                nonempty += 1;
                assert!(
                    m * garside_dimension(&sub.subgerm) <= garside_dimension(&fixed.subgerm),
                    "m = {m}"
                );
            }
        }
    }
    assert!(nonempty > 0);
}
