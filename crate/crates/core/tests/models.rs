mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use presburger::arith::Int;
use presburger::models::zadjoin;
use presburger::ResidueSequence;

use common::{divisible_models, presburger_models};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_axioms(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for (name, m) in presburger_models().into_iter().chain(divisible_models()) {
            let [x, y, w] = [0; 3].map(|_| m.random_element(&mut rng, 5));
            let xy = m.add(&x, &y).unwrap();
            prop_assert_eq!(&xy, &m.add(&y, &x).unwrap(), "{}", name);
            prop_assert_eq!(m.add(&xy, &w).unwrap(), m.add(&x, &m.add(&y, &w).unwrap()).unwrap(), "{}", name);
            prop_assert_eq!(m.add(&x, &m.neg(&x).unwrap()).unwrap(), m.zero(), "{}", name);
            prop_assert_eq!(
                m.compare(&x, &y).unwrap(),
                m.compare(&m.add(&x, &w).unwrap(), &m.add(&y, &w).unwrap()).unwrap(),
                "{}", name
            );
        }
    }

    #[test]
    fn division_axiom(seed in any::<u64>(), n in 1u64..=20) {
        let mut rng = StdRng::seed_from_u64(seed);
        for (name, m) in presburger_models() {
            let x = m.random_element(&mut rng, 8);
            let mut hits = 0;
            for i in 0..n {
                let xi = m.sub(&x, &m.from_int(i as i64).unwrap()).unwrap();
                if let Some(y) = m.solve_div(&xi, n).unwrap() {
                    prop_assert_eq!(m.mul_int(&Int::from(n), &y).unwrap(), xi, "{}", name);
                    hits += 1;
                }
            }
            prop_assert_eq!(hits, 1, "{} {}", name, x);
        }
    }

    #[test]
    fn residue_is_additive(seed in any::<u64>(), n in 1u64..60) {
        let mut rng = StdRng::seed_from_u64(seed);
        for (name, m) in presburger_models() {
            let (x, y) = (m.random_element(&mut rng, 8), m.random_element(&mut rng, 8));
            let lhs = m.residue(&m.add(&x, &y).unwrap(), n).unwrap();
            let rhs = (m.residue(&x, n).unwrap() + m.residue(&y, n).unwrap()) % n;
            prop_assert_eq!(lhs, rhs, "{}", name);
        }
    }

    #[test]
    fn plain_decomposition(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for (name, m) in presburger_models() {
            if name == "Z[enc{0,3}]" {
                continue;
            }
            let x = m.random_element(&mut rng, 8);
            let (v, z) = m.decompose_plain(&x).unwrap();
            for n in 1..=50 {
                prop_assert_eq!(m.residue(&v, n).unwrap(), 0, "{}", name);
            }
            prop_assert_eq!(m.add(&v, &m.from_int(z).unwrap()).unwrap(), x, "{}", name);
        }
    }

    #[test]
    fn canonical_forms_decide_equivalence(
        a1 in -3i64..=3, z1 in -3i64..=3, n1 in 1u64..=4,
        a2 in -3i64..=3, z2 in -3i64..=3, n2 in 1u64..=4,
        s in prop::collection::btree_set(0u64..6, 0..3),
    ) {
        let r = ResidueSequence::encode_set(s);
        let (a1, z1, a2, z2) = (Int::from(a1), Int::from(z1), Int::from(a2), Int::from(z2));
        let eq = zadjoin::equivalent(&r, (&a1, &z1, n1), (&a2, &z2, n2));
        let c1 = zadjoin::canonical(&r, a1.clone(), z1.clone(), n1);
        let c2 = zadjoin::canonical(&r, a2.clone(), z2.clone(), n2);
        prop_assert_eq!(eq, c1 == c2);
        prop_assert!(zadjoin::equivalent(&r, (&a1, &z1, n1), (&c1.0, &c1.1, c1.2)));
    }
}

#[test]
fn discreteness() {
    let mut rng = StdRng::seed_from_u64(17);
    for (name, m) in presburger_models() {
        for _ in 0..1000 {
            let x = m.random_element(&mut rng, 6);
            let z: i64 = rng.gen_range(-7..=7);
            let lo = m.compare(&m.from_int(z).unwrap(), &x).unwrap();
            let hi = m.compare(&x, &m.from_int(z + 1).unwrap()).unwrap();
            assert!(!(lo == Ordering::Less && hi == Ordering::Less), "{name}: {x} lies in ({z}, {})", z + 1);
        }
    }
}
