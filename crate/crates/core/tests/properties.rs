use std::sync::Arc;

use orient_duality::literal::{class_to_json, hom_to_json, parse_class, parse_hom, parse_morphism};
use orient_duality::verify::{test_morphisms, DegreeWindow, Sampler};
use orient_duality::{
    duality_to_coh, duality_to_hom, fgl_eval, pair, CoeffRing, CohClass, Morphism, RingElem, RingKind, Space, Theory,
};
use proptest::prelude::*;

const N: u32 = 6;

fn kind(i: usize) -> RingKind {
    RingKind::ALL[i % RingKind::ALL.len()]
}

fn space(i: usize) -> Space {
    const SPACES: [&[u32]; 5] = [&[1], &[2], &[1, 1], &[2, 1], &[]];
    Space::new(SPACES[i % SPACES.len()].to_vec())
}

fn ring(i: usize) -> Arc<CoeffRing> {
    CoeffRing::new(kind(i), N).unwrap()
}

fn theory(i: usize) -> Theory {
    Theory::new(kind(i), N).unwrap()
}

fn all() -> DegreeWindow {
    DegreeWindow::all()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(k in 0usize..3, seed: u64) {
        let r = ring(k);
        let mut s = Sampler::new(seed);
        let (a, b, c) = (s.coefficient(&r), s.coefficient(&r), s.coefficient(&r));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, RingElem::zero(&r));
        prop_assert_eq!(&a * &RingElem::one(&r), a.clone());
        prop_assert_eq!(RingElem::parse(&r, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn cup_is_commutative_and_associative(k in 0usize..3, x in 0usize..5, seed: u64) {
        let (r, x) = (ring(k), space(x));
        let mut s = Sampler::new(seed);
        let (a, b, c) = (s.coh(&x, &r, all()), s.coh(&x, &r, all()), s.coh(&x, &r, all()));
        prop_assert_eq!(a.cup(&b).unwrap(), b.cup(&a).unwrap());
        prop_assert_eq!(a.cup(&b).unwrap().cup(&c).unwrap(), a.cup(&b.cup(&c).unwrap()).unwrap());
        prop_assert_eq!(a.cup(&b.add(&c).unwrap()).unwrap(), a.cup(&b).unwrap().add(&a.cup(&c).unwrap()).unwrap());
    }

    #[test]
    fn pullback_is_a_ring_map(k in 0usize..3, x in 0usize..5, seed: u64) {
        let (r, x) = (ring(k), space(x));
        let mut s = Sampler::new(seed);
        for (_, f) in test_morphisms(&x) {
            let (a, b) = (s.coh(f.target(), &r, all()), s.coh(f.target(), &r, all()));
            let lhs = f.pullback(&a.cup(&b).unwrap()).unwrap();
            let rhs = f.pullback(&a).unwrap().cup(&f.pullback(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs, "{}", f);
            prop_assert_eq!(f.pullback(&a.add(&b).unwrap()).unwrap(), f.pullback(&a).unwrap().add(&f.pullback(&b).unwrap()).unwrap());
        }
    }

    #[test]
    fn euler_class_is_additive(k in 0usize..3, d1 in -2i64..3, d2 in -2i64..3, e1 in -2i64..3, e2 in -2i64..3) {
        let t = theory(k);
        let x = Space::new(vec![2, 1]);
        let lhs = t.euler(&x, &[d1 + e1, d2 + e2]).unwrap();
        let rhs = fgl_eval(t.law(), &t.euler(&x, &[d1, d2]).unwrap(), &t.euler(&x, &[e1, e2]).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pushforward_projection_formula(k in 0usize..3, x in 0usize..5, seed: u64) {
        let (t, x) = (theory(k), space(x));
        let mut s = Sampler::new(seed);
        for (name, f) in test_morphisms(&x) {
            let a = s.coh(f.source(), t.ring(), all());
            let b = s.coh(f.target(), t.ring(), all());
            let lhs = t.pushforward(&f, &f.pullback(&b).unwrap().cup(&a).unwrap()).unwrap();
            let rhs = b.cup(&t.pushforward(&f, &a).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs, "{}", name);
        }
    }

    #[test]
    fn pushforward_is_functorial(k in 0usize..3, x in 0usize..5, seed: u64) {
        let (t, x) = (theory(k), space(x));
        let mut s = Sampler::new(seed);
        for (_, f) in test_morphisms(&x) {
            let a = s.coh(f.source(), t.ring(), all());
            let g = Morphism::structure_map(f.target());
            let gf = f.then(&g).unwrap();
            let lhs = t.pushforward(&gf, &a).unwrap();
            let rhs = t.pushforward(&g, &t.pushforward(&f, &a).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs, "{}", f);
        }
    }

    #[test]
    fn duality_round_trips(k in 0usize..3, x in 0usize..5, seed: u64) {
        let (t, x) = (theory(k), space(x));
        let mut s = Sampler::new(seed);
        let alpha = s.coh(&x, t.ring(), all());
        prop_assert_eq!(duality_to_coh(&t, &duality_to_hom(&t, &alpha).unwrap()).unwrap(), alpha.clone());
        let a = s.hom(&x, t.ring(), all());
        prop_assert_eq!(duality_to_hom(&t, &duality_to_coh(&t, &a).unwrap()).unwrap(), a.clone());
        let beta = s.coh(&x, t.ring(), all());
        let lhs = pair(&beta, &duality_to_hom(&t, &alpha).unwrap()).unwrap();
        let rhs = pair(&alpha, &duality_to_hom(&t, &beta).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn literals_round_trip(k in 0usize..3, x in 0usize..5, seed: u64) {
        let (r, x) = (ring(k), space(x));
        let mut s = Sampler::new(seed);
        let a = s.coh(&x, &r, all());
        prop_assert_eq!(parse_class(&class_to_json(&a).to_string(), &x, &r).unwrap(), a);
        let h = s.hom(&x, &r, all());
        prop_assert_eq!(parse_hom(&hom_to_json(&h).to_string(), &x, &r).unwrap(), h);
        for (_, f) in test_morphisms(&x) {
            prop_assert_eq!(parse_morphism(&f.to_string(), f.source()).unwrap(), f);
        }
    }
}

#[test]
fn universal_law_is_a_formal_group_law() {
    let t = theory(2);
    let r = t.ring();
    let x = Space::new(vec![2, 2, 2]);
    let z = |i| CohClass::zeta(&x, r, i).unwrap();
    let (a, b, c) = (z(0), z(1), z(2));
    let f = |p: &CohClass, q: &CohClass| fgl_eval(t.law(), p, q).unwrap();
    assert_eq!(f(&a, &b), f(&b, &a));
    assert_eq!(f(&f(&a, &b), &c), f(&a, &f(&b, &c)));
    assert_eq!(f(&a, &CohClass::zero(&x, r)), a);
}
