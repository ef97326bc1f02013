mod common;

use common::{any_model, formula, full, model, static_full, Shape};
use plausikit::semantics::{is_valid_on, truth_set};
use plausikit::translate::{reduce_dynamic, translate_gt, translate_safe, RewriteMeasure};
use plausikit::{parse, reference, Formula, Fragment, Model, Op};
use proptest::prelude::*;

/// The eight reduction biconditionals for operators, instantiated with the
/// given announcement/upgrade precondition, condition and body.
fn reduction_axioms(phi: &Formula, alpha: &Formula, psi: &Formula) -> Vec<Formula> {
    let a = "a";
    let ann = |x: Formula| Formula::announce(phi.clone(), x);
    let up = |x: Formula| Formula::upgrade(phi.clone(), x);
    let imp = Formula::implies;
    let and = Formula::and;
    let not = Formula::not;
    let up_box = |boxed: fn(&str, Formula) -> Formula| {
        Formula::iff(
            up(boxed(a, psi.clone())),
            and(
                imp(phi.clone(), boxed(a, imp(phi.clone(), up(psi.clone())))),
                imp(
                    not(phi.clone()),
                    and(
                        boxed(a, imp(not(phi.clone()), up(psi.clone()))),
                        Formula::know(a, imp(phi.clone(), up(psi.clone()))),
                    ),
                ),
            ),
        )
    };
    let cond = and(phi.clone(), up(alpha.clone()));
    vec![
        Formula::iff(ann(Formula::know(a, psi.clone())), imp(phi.clone(), Formula::know(a, ann(psi.clone())))),
        Formula::iff(
            ann(Formula::cond(a, alpha.clone(), psi.clone())),
            imp(phi.clone(), Formula::cond(a, and(phi.clone(), ann(alpha.clone())), ann(psi.clone()))),
        ),
        Formula::iff(ann(Formula::safe(a, psi.clone())), imp(phi.clone(), Formula::safe(a, ann(psi.clone())))),
        Formula::iff(up(Formula::know(a, psi.clone())), Formula::know(a, up(psi.clone()))),
        Formula::iff(
            up(Formula::cond(a, alpha.clone(), psi.clone())),
            Formula::or(
                and(Formula::khat(a, cond.clone()), Formula::cond(a, cond.clone(), up(psi.clone()))),
                and(not(Formula::khat(a, cond)), Formula::cond(a, up(alpha.clone()), up(psi.clone()))),
            ),
        ),
        up_box(|a, x| Formula::safe(a, x)),
        Formula::iff(ann(Formula::gt(a, psi.clone())), imp(phi.clone(), Formula::gt(a, ann(psi.clone())))),
        up_box(|a, x| Formula::gt(a, x)),
    ]
}

fn kbc() -> Fragment {
    Fragment::of(&[Op::K, Op::Bc])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn reduction_is_sound(m in any_model(), f in formula(full(), 2, 3)) {
        let (g, trace) = reduce_dynamic(&f);
        prop_assert!(g.is_static());
        prop_assert_eq!(trace.replay(&f), Some(g.clone()));
        let got: Vec<usize> = truth_set(&m, &g).unwrap().ones().collect();
        prop_assert_eq!(got, reference::truth_states(&m, &f), "{} => {}", f, g);
    }

    #[test]
    fn measure_decreases(f in formula(full(), 2, 3)) {
        let (_, trace) = reduce_dynamic(&f);
        let mut current = f;
        for step in &trace.steps {
            let mut next = current.clone();
            *next.at_mut(&step.path).unwrap() = step.after.clone();
            prop_assert!(RewriteMeasure::of(&next).less_than(&RewriteMeasure::of(&current)));
            current = next;
        }
    }

    #[test]
    fn reduction_axioms_are_valid(
        m in any_model(),
        phi in formula(full(), 2, 1),
        alpha in formula(full(), 2, 1),
        psi in formula(full(), 2, 1),
    ) {
        for ax in reduction_axioms(&phi, &alpha, &psi) {
            prop_assert!(is_valid_on(&m, &ax).unwrap(), "{}", ax);
        }
    }

    #[test]
    fn gt_translation_on_uniform_models(
        m in model(Shape { max_states: 4, agents: 2, uniform: true, connected: false }),
        f in formula(kbc(), 2, 3),
    ) {
        let g = translate_gt(&f).unwrap();
        prop_assert!(g.fragment().is_subset(Fragment::of(&[Op::K, Op::Gt])));
        prop_assert_eq!(truth_set(&m, &f).unwrap(), truth_set(&m, &g).unwrap());
    }

    #[test]
    fn safe_translation_on_uniform_connected_models(
        m in model(Shape { max_states: 4, agents: 2, uniform: true, connected: true }),
        f in formula(kbc().with(Op::Bplus), 2, 3),
    ) {
        let g = translate_safe(&f).unwrap();
        prop_assert!(g.fragment().is_subset(Fragment::of(&[Op::K, Op::Bplus])));
        prop_assert_eq!(truth_set(&m, &f).unwrap(), truth_set(&m, &g).unwrap());
    }

    #[test]
    fn translations_leave_other_formulas_alone(f in formula(static_full().without(Op::Bc), 2, 3)) {
        if f.fragment().is_subset(Fragment::of(&[Op::K])) {
            prop_assert_eq!(translate_gt(&f).unwrap(), f.clone());
        }
        if !f.fragment().contains(Op::Gt) {
            prop_assert_eq!(translate_safe(&f).unwrap(), f);
        }
    }
}

#[test]
fn worked_reductions() {
    for (input, output) in [
        ("[! p] K[a] q", "p -> K[a](p -> q)"),
        ("[up p] K[a] q", "K[a] q"),
        ("K[a] q", "K[a] q"),
    ] {
        assert_eq!(reduce_dynamic(&parse(input).unwrap()).0, parse(output).unwrap(), "{input}");
    }
}

#[test]
fn translations_need_their_preconditions() {
    let non_uniform = Model::from_json(
        r#"{"states":["v","w"],"agents":["a"],
            "epist":{"a":[["v","v"],["v","w"],["w","v"],["w","w"]]},
            "plaus":{"a":{"v":[["v","v"],["w","w"]],"w":[["v","v"],["v","w"],["w","w"]]}},
            "valuation":{"p":["v","w"],"q":["v"]}}"#,
    )
    .unwrap();
    assert!(!non_uniform.is_uniform());
    let f = parse("B[a | p] q").unwrap();
    let g = translate_gt(&f).unwrap();
    assert!(!is_valid_on(&non_uniform, &Formula::iff(f.clone(), g)).unwrap());

    let unconnected = Model::from_json(
        r#"{"states":["v","w"],"agents":["a"],
            "epist":{"a":[["v","v"],["v","w"],["w","v"],["w","w"]]},
            "plaus":{"a":{"v":[["v","v"],["w","w"]],"w":[["v","v"],["w","w"]]}},
            "valuation":{"p":["w"]}}"#,
    )
    .unwrap();
    assert!(unconnected.is_uniform() && !unconnected.is_locally_connected());
    let f = parse("B[a | true] p").unwrap();
    let g = translate_safe(&f).unwrap();
    assert!(!is_valid_on(&unconnected, &Formula::iff(f, g)).unwrap());
}
