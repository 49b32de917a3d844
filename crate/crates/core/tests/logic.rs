mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use presburger::arith::{Int, Rat};
use presburger::logic::{self, sharp::sharp_variables, Env};
use presburger::models::Tau;
use presburger::{Model, Order};

use common::{presburger_models, random_formula, random_order_formula, random_sentence, ZOracle};

fn free_x(seed: u64, depth: usize) -> logic::Formula {
    let mut rng = StdRng::seed_from_u64(seed);
    random_formula(&mut rng, &mut vec!["x".to_string()], depth)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decide_agrees_with_brute_force(seed in any::<u64>(), depth in 1usize..=3) {
        let f = random_sentence(&mut StdRng::seed_from_u64(seed), depth);
        let decided = logic::decide_sentence(&f).unwrap();
        prop_assert_eq!(decided, ZOracle::default().eval(&f, &mut HashMap::new()), "{}", f);
    }

    #[test]
    fn elimination_preserves_meaning(seed in any::<u64>(), depth in 0usize..=2) {
        let f = free_x(seed, depth);
        let g = logic::eliminate_quantifiers(&f).unwrap();
        prop_assert!(g.is_quantifier_free());
        prop_assert!(g.free_vars().is_subset(&f.free_vars()), "{} -> {}", f, g);
        let mut oracle = ZOracle::default();
        for k in -12..=12 {
            let mut env = HashMap::from([("x".to_string(), k)]);
            prop_assert_eq!(oracle.eval(&f, &mut env), oracle.eval(&g, &mut env), "{} -> {} at {}", f, g, k);
        }
    }

    #[test]
    fn theory_is_model_independent(seed in any::<u64>(), k in -9i64..=9) {
        let f = free_x(seed, 2);
        let g = logic::eliminate_quantifiers(&f).unwrap();
        let truth = ZOracle::default().eval(&f, &mut HashMap::from([("x".to_string(), k as i128)]));
        for (name, m) in presburger_models() {
            let env = Env::from([("x".to_string(), m.from_int(k).unwrap())]);
            prop_assert_eq!(logic::eval_qf(&m, &g, &env).unwrap(), truth, "{}: {}", name, g);
            prop_assert_eq!(logic::eval_formula(&m, &f, &env).unwrap(), truth, "{}: {}", name, f);
        }
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let f = free_x(seed, 3);
        let text = f.to_string();
        // parsing gives every binder its own name; after that printing is stable
        let back = logic::parse(&text).unwrap();
        let normal = back.to_string();
        prop_assert_eq!(logic::parse(&normal).unwrap().to_string(), normal);
        prop_assert_eq!(back.quantifier_depth(), f.quantifier_depth());
        let mut oracle = ZOracle::default();
        for k in -4..=4 {
            let mut env = HashMap::from([("x".to_string(), k)]);
            prop_assert_eq!(oracle.eval(&f, &mut env), oracle.eval(&back, &mut env), "{}", text);
        }
    }

    #[test]
    fn sharp_preserves_depth(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_formula(&mut rng, &mut vec!["x".to_string()], 3);
        let tau = Tau {
            indices: (0..k as u64).collect(),
            coeffs: (0..k).map(|_| Rat::new(Int::from(rng.gen_range(-6..=6)), Int::from(rng.gen_range(1..=6)))).collect(),
            z: Int::from(rng.gen_range(-9..=9)),
        };
        let g = logic::substitute_sharp(&f, "x", &tau);
        prop_assert_eq!(g.quantifier_depth(), f.quantifier_depth());
        prop_assert!(!g.free_vars().contains("x"));
    }

    #[test]
    fn sharp_lemma(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = Model::pl(Order::finite(3));
        let f = random_formula(&mut rng, &mut vec!["x".to_string()], 2);
        let p = m.random_element(&mut rng, 6);
        let lhs = logic::eval_formula(&m, &f, &Env::from([("x".to_string(), p.clone())])).unwrap();
        let tau = m.tau_decompose(&p).unwrap();
        prop_assert_eq!(&tau.apply(&m, &tau.indices).unwrap(), &p);
        let g = logic::substitute_sharp(&f, "x", &tau);
        let env: Env = sharp_variables(&f, "x", tau.coeffs.len())
            .into_iter()
            .zip(&tau.indices)
            .map(|(v, &l)| (v, m.pi_embed(l).unwrap()))
            .collect();
        prop_assert_eq!(logic::eval_formula(&m, &g, &env).unwrap(), lhs, "{} / {}", f, g);
    }

    #[test]
    fn translation_on_finite_orders(seed in any::<u64>(), depth in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut scope = Vec::new();
        let f = random_order_formula(&mut rng, &mut scope, depth);
        prop_assume!(f.free_vars().is_empty());
        let star = logic::translate_star(&f).unwrap();
        for k in 0..=6 {
            let order = Order::finite(k);
            let direct = logic::eval_in_order(&order, &f, &HashMap::new()).unwrap();
            let via = logic::eval_star(&Model::pl(order), &star, &Env::new()).unwrap();
            prop_assert_eq!(direct, via, "{} in finite:{}", f, k);
        }
    }
}

#[test]
fn starred_formulas_need_the_starred_evaluator() {
    let f = logic::parse("E x. x <* y").unwrap();
    assert!(logic::eliminate_quantifiers(&f).is_err());
    let m = Model::pl(Order::omega());
    assert!(logic::eval_star(&m, &f, &Env::new()).is_err());
}
