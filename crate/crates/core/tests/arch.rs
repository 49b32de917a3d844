mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use presburger::arch::{self, ArchOrdering, Dependence, IsoOptions};
use presburger::arith::Int;
use presburger::{Model, Order, ResidueSequence};

use common::{divisible_models, presburger_models};

fn flip(o: ArchOrdering) -> ArchOrdering {
    match o {
        ArchOrdering::MuchLess => ArchOrdering::MuchGreater,
        ArchOrdering::MuchGreater => ArchOrdering::MuchLess,
        ArchOrdering::Equiv => ArchOrdering::Equiv,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn arch_compare_is_a_strict_weak_order(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for (name, m) in presburger_models().into_iter().chain(divisible_models()) {
            let xs: Vec<_> = (0..3)
                .map(|_| m.random_element(&mut rng, 5))
                .filter(|x| m.sign(x).unwrap() != Ordering::Equal)
                .collect();
            for a in &xs {
                prop_assert_eq!(arch::arch_compare(&m, a, a).unwrap(), ArchOrdering::Equiv, "{}", name);
                for b in &xs {
                    let ab = arch::arch_compare(&m, a, b).unwrap();
                    prop_assert_eq!(flip(ab), arch::arch_compare(&m, b, a).unwrap(), "{}", name);
                    for c in &xs {
                        let bc = arch::arch_compare(&m, b, c).unwrap();
                        let ac = arch::arch_compare(&m, a, c).unwrap();
                        if ab == bc {
                            prop_assert_eq!(ac, ab, "{}: {} {} {}", name, a, b, c);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn equivalence_matches_a_bounded_search(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for (name, m) in presburger_models() {
            let (x, y) = (m.random_element(&mut rng, 4), m.random_element(&mut rng, 4));
            if m.sign(&x).unwrap() == Ordering::Equal || m.sign(&y).unwrap() == Ordering::Equal {
                continue;
            }
            // a bounded search can only confirm equivalence
            if arch::arch_equiv_bruteforce(&m, &x, &y, 64).unwrap() {
                prop_assert_eq!(arch::arch_compare(&m, &x, &y).unwrap(), ArchOrdering::Equiv, "{}", name);
            }
        }
    }

    #[test]
    fn dependence_equations_are_exact_and_unique(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = Model::pl(Order::finite(2));
        let basis = [m.one().unwrap(), m.pi_embed(0).unwrap(), m.pi_embed(1).unwrap()];
        let g = m.random_element(&mut rng, 3);
        prop_assume!(m.sign(&g).unwrap() != Ordering::Equal);
        let Dependence::Equation(eq) = arch::dependence(&m, &g, &basis).unwrap() else {
            return Err(TestCaseError::fail("independent"));
        };
        prop_assert_eq!(m.mul_int(&eq.m, &g).unwrap(), arch::combine(&m, &eq.coeffs, &basis).unwrap());
        for other in arch::dependence_bruteforce(&m, &g, &basis, 10).unwrap() {
            prop_assert_eq!(&other, &eq);
        }
    }

    #[test]
    fn automorphisms_fix_and_move_as_promised(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = Model::pl(Order::finite(4));
        let p = m.random_element(&mut rng, 4);
        let fix: Vec<u64> = (0..4).filter(|_| rng.gen_bool(0.4)).collect();
        let Ok(g) = arch::build_automorphism(&m, &fix, &p) else {
            return Ok(());
        };
        prop_assert_eq!(g.apply(&m, &p).unwrap(), m.pi_embed(g.target).unwrap());
        for &a in &fix {
            prop_assert_eq!(g.apply(&m, &m.pi_embed(a).unwrap()).unwrap(), m.pi_embed(a).unwrap());
        }
        let probes: Vec<_> = (0..8).map(|_| m.random_element(&mut rng, 5)).collect();
        for x in &probes {
            prop_assert_eq!(&g.apply_inverse(&m, &g.apply(&m, x).unwrap()).unwrap(), x);
            for y in &probes {
                let before = m.compare(x, y).unwrap();
                let after = m.compare(&g.apply(&m, x).unwrap(), &g.apply(&m, y).unwrap()).unwrap();
                prop_assert_eq!(before, after);
            }
        }
    }

    #[test]
    fn isomorphisms_preserve_structure(seed in any::<u64>(), s in prop::collection::btree_set(0u64..10, 0..4), shift in -20i64..20) {
        let mut rng = StdRng::seed_from_u64(seed);
        let r = ResidueSequence::encode_set(s);
        let src = Model::zadjoin(r.clone());
        let dst = Model::zadjoin(r.shift(shift));
        let image = dst.sub(&dst.x().unwrap(), &dst.from_int(shift).unwrap()).unwrap();
        let probes: Vec<_> = (0..6).map(|_| src.random_element(&mut rng, 6)).collect();
        let mut all = probes.clone();
        for x in &probes {
            for y in &probes {
                all.push(src.add(x, y).unwrap());
            }
        }
        let graph = arch::build_isomorphism(&src, &dst, &[src.x().unwrap()], &[image], &all, IsoOptions::default()).unwrap();
        let f = |i: usize| &graph[i].1;
        for i in 0..6 {
            for j in 0..6 {
                prop_assert_eq!(&dst.add(f(i), f(j)).unwrap(), f(6 + 6 * i + j));
                prop_assert_eq!(src.compare(&probes[i], &probes[j]).unwrap(), dst.compare(f(i), f(j)).unwrap());
            }
            for n in 1..=30 {
                prop_assert_eq!(src.residue(&probes[i], n).unwrap(), dst.residue(f(i), n).unwrap());
            }
        }
    }
}

#[test]
fn recovered_orders() {
    for k in 0..5 {
        let m = Model::pl(Order::finite(k));
        let rec = arch::recover_order(&m, arch::default_sample(&m, 24, k), 1000).unwrap();
        assert_eq!(rec.order, Order::finite(k));
        for w in rec.representatives.windows(2) {
            assert_eq!(arch::arch_compare(&m, &w[0], &w[1]).unwrap(), ArchOrdering::MuchLess);
        }
    }
    // no nonzero element of Z[enc{1}] has all residues 0; X - 7 does in Z[rho(7)]
    let z = Model::zadjoin(ResidueSequence::encode_set([1]));
    let rec = arch::recover_order(&z, arch::default_sample(&z, 24, 3), 1000).unwrap();
    assert_eq!(rec.order, Order::finite(0));
    let z = Model::zadjoin(ResidueSequence::of_integer(7));
    let x7 = z.sub(&z.x().unwrap(), &z.from_int(Int::from(7)).unwrap()).unwrap();
    let rec = arch::recover_order(&z, [x7], 1000).unwrap();
    assert_eq!(rec.order, Order::finite(1));
}
