//! Model checking of the full language on finite models.
//!
//! Truth sets are computed bottom-up. Dynamic operators are evaluated by
//! materializing the transformed model, cached per (model, truth set of the
//! announced or upgraded formula) for the lifetime of an [`Evaluator`].

use std::borrow::Cow;
use std::collections::HashMap;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::model::{Model, StateSet};
use crate::syntax::Formula;

/// `{w | [w]_i ⊆ x}`
pub fn know_set(m: &Model, agent: usize, x: &StateSet) -> StateSet {
    let mut out = m.empty_set();
    for w in 0..m.num_states() {
        if m.epist(agent).successors(w).is_subset(x) {
            out.insert(w);
        }
    }
    out
}

/// `{w | every v in [w]_i with v <=_{i,w} w is in x}`
pub fn safe_set(m: &Model, agent: usize, x: &StateSet) -> StateSet {
    let mut out = m.empty_set();
    for w in 0..m.num_states() {
        if m.epist(agent)
            .successors(w)
            .ones()
            .all(|v| !m.le(agent, w, v, w) || x.contains(v))
        {
            out.insert(w);
        }
    }
    out
}

/// `{w | every v in [w]_i with v <_{i,w} w is in x}`
pub fn gt_set(m: &Model, agent: usize, x: &StateSet) -> StateSet {
    let mut out = m.empty_set();
    for w in 0..m.num_states() {
        if m.epist(agent)
            .successors(w)
            .ones()
            .all(|v| !m.lt(agent, w, v, w) || x.contains(v))
        {
            out.insert(w);
        }
    }
    out
}

/// `{w | Min_{<=_{i,w}}(condition ∩ [w]_i) ⊆ x}`
pub fn cond_set(m: &Model, agent: usize, condition: &StateSet, x: &StateSet) -> StateSet {
    let mut out = m.empty_set();
    for w in 0..m.num_states() {
        let mut candidates = m.eq_class(agent, w);
        candidates.intersect_with(condition);
        if m.min_set(agent, w, &candidates).is_subset(x) {
            out.insert(w);
        }
    }
    out
}

pub fn complement(m: &Model, x: &StateSet) -> StateSet {
    let mut out = m.all_states();
    out.difference_with(x);
    out
}

/// Fails with [`Error::UnknownAgent`] if `f` mentions an agent `m` lacks.
pub fn check_agents(m: &Model, f: &Formula) -> Result<()> {
    for a in f.agents() {
        m.agent_id(&a)?;
    }
    Ok(())
}

struct Announced<'m> {
    /// Original index of each surviving state.
    kept: Vec<usize>,
    eval: Evaluator<'m>,
}

/// Evaluates formulas on one model, reusing transformed models across calls.
pub struct Evaluator<'m> {
    model: Cow<'m, Model>,
    announced: HashMap<StateSet, Option<Box<Announced<'m>>>>,
    upgraded: HashMap<StateSet, Box<Evaluator<'m>>>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Self {
        Self::with(Cow::Borrowed(model))
    }

    fn with(model: Cow<'m, Model>) -> Self {
        Evaluator { model, announced: HashMap::new(), upgraded: HashMap::new() }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// `⟦f⟧`
    pub fn truth_set(&mut self, f: &Formula) -> Result<StateSet> {
        check_agents(&self.model, f)?;
        Ok(self.eval(f, &mut HashMap::new()))
    }

    pub fn holds(&mut self, w: usize, f: &Formula) -> Result<bool> {
        if w >= self.model.num_states() {
            return Err(Error::UnknownState(format!("#{w}")));
        }
        Ok(self.truth_set(f)?.contains(w))
    }

    fn eval<'f>(&mut self, f: &'f Formula, memo: &mut HashMap<&'f Formula, StateSet>) -> StateSet {
        if let Some(s) = memo.get(f) {
            return s.clone();
        }
        let m: &Model = &self.model;
        let agent = |a: &str| m.agent_id(a).expect("agents checked before evaluation");
        let result = match f {
            Formula::Atom(p) => m.valuation(p),
            Formula::Top => m.all_states(),
            Formula::Bot => m.empty_set(),
            Formula::Not(a) => {
                let x = self.eval(a, memo);
                complement(&self.model, &x)
            }
            Formula::And(a, b) => {
                let mut x = self.eval(a, memo);
                x.intersect_with(&self.eval(b, memo));
                x
            }
            Formula::Or(a, b) => {
                let mut x = self.eval(a, memo);
                x.union_with(&self.eval(b, memo));
                x
            }
            Formula::Implies(a, b) => {
                let x = self.eval(a, memo);
                let mut out = complement(&self.model, &x);
                out.union_with(&self.eval(b, memo));
                out
            }
            Formula::Know(i, a) => {
                let i = agent(i);
                let x = self.eval(a, memo);
                know_set(&self.model, i, &x)
            }
            Formula::SafeBelief(i, a) => {
                let i = agent(i);
                let x = self.eval(a, memo);
                safe_set(&self.model, i, &x)
            }
            Formula::GtBox(i, a) => {
                let i = agent(i);
                let x = self.eval(a, memo);
                gt_set(&self.model, i, &x)
            }
            Formula::CondBelief(i, c, a) => {
                let i = agent(i);
                let cx = self.eval(c, memo);
                let x = self.eval(a, memo);
                cond_set(&self.model, i, &cx, &x)
            }
            Formula::Announce(pre, body) => {
                let pre_set = self.eval(pre, memo);
                let mut out = complement(&self.model, &pre_set);
                let Evaluator { model, announced, .. } = self;
                let entry = announced.entry(pre_set.clone()).or_insert_with(|| {
                    dynamics::announce_set(model, &pre_set).map(|(sub, kept)| {
                        Box::new(Announced { kept, eval: Evaluator::with(Cow::Owned(sub)) })
                    })
                });
                // an empty announcement makes [!φ]ψ true everywhere, and
                // `out` is then already every state
                if let Some(a) = entry {
                    let inner = a.eval.eval(body, &mut HashMap::new());
                    for x in inner.ones() {
                        out.insert(a.kept[x]);
                    }
                }
                out
            }
            Formula::Upgrade(pre, body) => {
                let pre_set = self.eval(pre, memo);
                let Evaluator { model, upgraded, .. } = self;
                let sub = upgraded.entry(pre_set.clone()).or_insert_with(|| {
                    Box::new(Evaluator::with(Cow::Owned(dynamics::upgrade_set(model, &pre_set))))
                });
                sub.eval(body, &mut HashMap::new())
            }
        };
        memo.insert(f, result.clone());
        result
    }
}

/// `⟦f⟧^m`
pub fn truth_set(m: &Model, f: &Formula) -> Result<StateSet> {
    Evaluator::new(m).truth_set(f)
}

/// `m, w ⊨ f`, with `w` given by name.
pub fn holds(m: &Model, w: &str, f: &Formula) -> Result<bool> {
    let w = m.state_id(w)?;
    Ok(truth_set(m, f)?.contains(w))
}

/// The least state falsifying `f`, if any.
pub fn falsifying_state(m: &Model, f: &Formula) -> Result<Option<usize>> {
    let set = truth_set(m, f)?;
    Ok((0..m.num_states()).find(|&w| !set.contains(w)))
}

/// `m ⊨ f`
pub fn is_valid_on(m: &Model, f: &Formula) -> Result<bool> {
    Ok(falsifying_state(m, f)?.is_none())
}
