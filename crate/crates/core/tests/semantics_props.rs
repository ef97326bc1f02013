mod common;

use common::{any_model, formula, full, model, static_full, Shape};
use plausikit::semantics::{is_valid_on, truth_set, Evaluator};
use plausikit::{parse, reference, Formula, Fragment, Model, Op};
use proptest::prelude::*;

fn uniform() -> impl Strategy<Value = Model> {
    model(Shape { max_states: 4, agents: 2, uniform: true, connected: false })
}

fn uniform_connected() -> impl Strategy<Value = Model> {
    model(Shape { max_states: 4, agents: 2, uniform: true, connected: true })
}

fn kbc() -> Fragment {
    Fragment::of(&[Op::K, Op::Bc])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_reference(m in any_model(), f in formula(full(), 2, 4)) {
        let fast: Vec<usize> = truth_set(&m, &f).unwrap().ones().collect();
        prop_assert_eq!(fast, reference::truth_states(&m, &f));
    }

    #[test]
    fn negation_flips(m in any_model(), f in formula(full(), 2, 3)) {
        let mut e = Evaluator::new(&m);
        let pos = e.truth_set(&f).unwrap();
        let neg = e.truth_set(&Formula::not(f)).unwrap();
        prop_assert!(pos.is_disjoint(&neg));
        prop_assert_eq!(pos.count_ones(..) + neg.count_ones(..), m.num_states());
    }

    #[test]
    fn plain_belief_uses_minimal_states_of_the_class(m in any_model()) {
        let set = truth_set(&m, &parse("B[a | true] p").unwrap()).unwrap();
        let p = m.valuation("p");
        for w in 0..m.num_states() {
            let direct = m.min_set(0, w, &m.eq_class(0, w)).is_subset(&p);
            prop_assert_eq!(set.contains(w), direct);
        }
    }

    #[test]
    fn introspection_on_uniform_models(m in uniform(), a in formula(kbc(), 2, 2), f in formula(kbc(), 2, 2)) {
        let b = Formula::cond("a", a, f);
        prop_assert!(is_valid_on(&m, &Formula::implies(b.clone(), Formula::know("a", b))).unwrap());
    }

    #[test]
    fn gt_definition_of_belief_on_uniform_models(m in uniform(), a in formula(static_full(), 2, 2), f in formula(static_full(), 2, 2)) {
        let lhs = Formula::cond("a", a.clone(), f.clone());
        let rhs = Formula::know("a", Formula::implies(Formula::and(a.clone(), Formula::not(Formula::gt_dia("a", a))), f));
        prop_assert!(is_valid_on(&m, &Formula::iff(lhs, rhs)).unwrap());
    }

    #[test]
    fn safe_definition_of_belief(m in uniform_connected(), a in formula(static_full(), 2, 2), f in formula(static_full(), 2, 2)) {
        let lhs = Formula::cond("b", a.clone(), f.clone());
        let rhs = Formula::implies(
            Formula::khat("b", a.clone()),
            Formula::khat("b", Formula::and(a.clone(), Formula::safe("b", Formula::implies(a, f)))),
        );
        prop_assert!(is_valid_on(&m, &Formula::iff(lhs, rhs)).unwrap());
    }
}
