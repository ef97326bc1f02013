//! A deliberately naive evaluator used as a test oracle.
//!
//! Works state by state with no memoization. Dynamic operators are handled by
//! relativizing queries through a stack of pending updates instead of
//! building transformed models, so it shares no code path with
//! [`crate::semantics`] or [`crate::dynamics`] beyond the model accessors.
//! Exponential in the nesting of dynamic operators; only for small inputs.

use crate::model::Model;
use crate::syntax::Formula;

#[derive(Clone, Copy)]
enum View<'a> {
    Base(&'a Model),
    Announced(&'a View<'a>, &'a Formula),
    Upgraded(&'a View<'a>, &'a Formula),
}

impl<'a> View<'a> {
    fn base(&self) -> &'a Model {
        match self {
            View::Base(m) => m,
            View::Announced(v, _) | View::Upgraded(v, _) => v.base(),
        }
    }

    fn alive(&self, w: usize) -> bool {
        match self {
            View::Base(_) => true,
            View::Announced(v, f) => v.alive(w) && eval(v, w, f),
            View::Upgraded(v, _) => v.alive(w),
        }
    }

    fn epist(&self, i: usize, x: usize, y: usize) -> bool {
        self.base().epist(i).contains(x, y)
    }

    fn le(&self, i: usize, at: usize, x: usize, y: usize) -> bool {
        match self {
            View::Base(m) => m.le(i, at, x, y),
            View::Announced(v, _) => v.le(i, at, x, y),
            View::Upgraded(v, f) => {
                let (fx, fy) = (eval(v, x, f), eval(v, y, f));
                (fx == fy && v.le(i, at, x, y)) || (fx && !fy)
            }
        }
    }

    fn accessible(&self, i: usize, w: usize) -> Vec<usize> {
        (0..self.base().num_states())
            .filter(|&v| self.alive(v) && self.epist(i, w, v))
            .collect()
    }
}

fn eval(view: &View<'_>, w: usize, f: &Formula) -> bool {
    let m = view.base();
    let agent = |a: &str| m.agent_id(a).expect("formula agents exist in the model");
    match f {
        Formula::Atom(p) => m.valuation(p).contains(w),
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Not(a) => !eval(view, w, a),
        Formula::And(a, b) => eval(view, w, a) && eval(view, w, b),
        Formula::Or(a, b) => eval(view, w, a) || eval(view, w, b),
        Formula::Implies(a, b) => !eval(view, w, a) || eval(view, w, b),
        Formula::Know(i, a) => {
            let i = agent(i);
            view.accessible(i, w).into_iter().all(|v| eval(view, v, a))
        }
        Formula::SafeBelief(i, a) => {
            let i = agent(i);
            view.accessible(i, w)
                .into_iter()
                .filter(|&v| view.le(i, w, v, w))
                .all(|v| eval(view, v, a))
        }
        Formula::GtBox(i, a) => {
            let i = agent(i);
            view.accessible(i, w)
                .into_iter()
                .filter(|&v| view.le(i, w, v, w) && !view.le(i, w, w, v))
                .all(|v| eval(view, v, a))
        }
        Formula::CondBelief(i, c, a) => {
            let i = agent(i);
            let x: Vec<usize> = view.accessible(i, w).into_iter().filter(|&v| eval(view, v, c)).collect();
            x.iter()
                .filter(|&&v| x.iter().all(|&y| !view.le(i, w, y, v) || view.le(i, w, v, y)))
                .all(|&v| eval(view, v, a))
        }
        Formula::Announce(pre, body) => {
            !eval(view, w, pre) || eval(&View::Announced(view, pre), w, body)
        }
        Formula::Upgrade(pre, body) => eval(&View::Upgraded(view, pre), w, body),
    }
}

/// `m, w ⊨ f`. Panics if `f` mentions an agent `m` lacks.
pub fn holds(m: &Model, w: usize, f: &Formula) -> bool {
    eval(&View::Base(m), w, f)
}

/// Indices of the states where `f` holds.
pub fn truth_states(m: &Model, f: &Formula) -> Vec<usize> {
    (0..m.num_states()).filter(|&w| holds(m, w, f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics;
    use crate::syntax::parse;

    #[test]
    fn agrees_on_small_model() {
        let m = Model::from_json(
            r#"{"states":["u","v","w"],"agents":["a"],
                "epist":{"a":[["u","u"],["v","v"],["v","w"],["w","v"],["w","w"]]},
                "plaus":{"a":{"u":[["u","u"],["v","v"],["w","w"]],
                              "v":[["u","u"],["v","v"],["w","v"],["w","w"]],
                              "w":[["u","u"],["v","v"],["v","w"],["w","w"]]}},
                "valuation":{"p":["w"],"q":["u","v"]}}"#,
        )
        .unwrap();
        for s in [
            "B[a | true] p",
            "Bplus[a] q",
            "GtDia[a] q",
            "[! ~p] K[a] q",
            "[up p] B[a | true] p",
            "[up q][! p | q] Gt[a] false",
        ] {
            let f = parse(s).unwrap();
            let fast = semantics::truth_set(&m, &f).unwrap();
            assert_eq!(truth_states(&m, &f), fast.ones().collect::<Vec<_>>(), "{s}");
        }
    }
}
