mod common;

use common::{any_model, model, Shape};
use plausikit::{Model, StateSet};
use proptest::prelude::*;

fn subsets(n: usize) -> impl Iterator<Item = StateSet> {
    (0u32..(1 << n)).map(move |mask| {
        let mut s = StateSet::with_capacity(n);
        for w in 0..n {
            if mask & (1 << w) != 0 {
                s.insert(w);
            }
        }
        s
    })
}

fn uniform_oracle(m: &Model) -> bool {
    for i in 0..m.agents().len() {
        for w in 0..m.num_states() {
            for v in 0..m.num_states() {
                if m.epist(i).contains(w, v) {
                    for x in 0..m.num_states() {
                        for y in 0..m.num_states() {
                            if m.le(i, w, x, y) != m.le(i, v, x, y) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

fn connected_oracle(m: &Model) -> bool {
    for i in 0..m.agents().len() {
        for w in 0..m.num_states() {
            for v in 0..m.num_states() {
                if m.epist(i).contains(w, v) && !m.le(i, w, w, v) && !m.le(i, w, v, w) {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn min_sets_nonempty_and_match_strict_form(m in any_model()) {
        let strict = m.strict();
        for i in 0..m.agents().len() {
            for w in 0..m.num_states() {
                for x in subsets(m.num_states()) {
                    let a = m.min_set(i, w, &x);
                    prop_assert!(a.is_subset(&x));
                    if !x.is_clear() {
                        prop_assert!(!a.is_clear());
                    }
                    prop_assert_eq!(a, strict.min_set(i, w, &x));
                }
            }
        }
    }

    #[test]
    fn strict_parts_partition_the_order(m in any_model()) {
        let s = m.strict();
        for i in 0..m.agents().len() {
            for w in 0..m.num_states() {
                let (lt, eqv) = (&s.lt[i][w], &s.eqv[i][w]);
                prop_assert_eq!(&lt.union(eqv), m.plaus(i, w));
                prop_assert!(lt.intersection(eqv).is_empty());
            }
        }
    }

    #[test]
    fn structural_checks_agree_with_double_loops(m in any_model()) {
        prop_assert_eq!(m.is_uniform(), uniform_oracle(&m));
        prop_assert_eq!(m.is_locally_connected(), connected_oracle(&m));
        prop_assert!(m.is_image_finite());
    }

    #[test]
    fn generated_constraints_hold(m in model(Shape { max_states: 4, agents: 2, uniform: true, connected: true })) {
        prop_assert!(m.is_uniform());
        prop_assert!(m.is_locally_connected());
    }

    #[test]
    fn json_round_trip(m in any_model()) {
        let text = m.to_json();
        let back = Model::from_json(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_json(), text);
        prop_assert!(m.violations().is_empty());
    }
}

#[test]
fn equivalence_classes() {
    let m = Model::from_json(
        r#"{"states":["u","v","w"],"agents":["a"],
            "epist":{"a":[["u","u"],["v","v"],["v","w"],["w","v"],["w","w"]]},
            "plaus":{"a":{"u":[["u","u"],["v","v"],["w","w"]],"v":[["u","u"],["v","v"],["w","w"]],
                          "w":[["u","u"],["v","v"],["w","w"]]}},
            "valuation":{}}"#,
    )
    .unwrap();
    let u = m.state_id("u").unwrap();
    let w = m.state_id("w").unwrap();
    assert_eq!(m.names_of(&m.eq_class(0, u)), ["u"]);
    assert_eq!(m.names_of(&m.eq_class(0, w)), ["v", "w"]);
    assert!(m.is_uniform());
    assert!(!m.is_locally_connected());
}
