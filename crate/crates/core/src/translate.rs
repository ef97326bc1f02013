//! Formula rewriting: elimination of announcements and upgrades by reduction
//! axioms, and elimination of conditional belief in favour of `K` with `Gt`
//! or `K` with `Bplus`.

use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Fragment, Op};

/// Names of the rewrite rules. `Ann*` rules rewrite `[!φ]ψ` and `Up*` rules
/// rewrite `[↑φ]ψ`, by the main connective of `ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    AnnBase,
    AnnNot,
    AnnAnd,
    AnnOr,
    AnnImplies,
    AnnK,
    AnnBc,
    AnnBplus,
    AnnGt,
    UpBase,
    UpNot,
    UpAnd,
    UpOr,
    UpImplies,
    UpK,
    UpBc,
    UpBplus,
    UpGt,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::AnnBase => "ann-base",
            Rule::AnnNot => "ann-not",
            Rule::AnnAnd => "ann-and",
            Rule::AnnOr => "ann-or",
            Rule::AnnImplies => "ann-implies",
            Rule::AnnK => "ann-K",
            Rule::AnnBc => "ann-Bc",
            Rule::AnnBplus => "ann-Bplus",
            Rule::AnnGt => "ann-Gt",
            Rule::UpBase => "up-base",
            Rule::UpNot => "up-not",
            Rule::UpAnd => "up-and",
            Rule::UpOr => "up-or",
            Rule::UpImplies => "up-implies",
            Rule::UpK => "up-K",
            Rule::UpBc => "up-Bc",
            Rule::UpBplus => "up-Bplus",
            Rule::UpGt => "up-Gt",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One rewrite: the subformula at `path` was `before` and became `after`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub path: Vec<usize>,
    pub rule: Rule,
    pub before: Formula,
    pub after: Formula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    /// Applies the steps to `input`; `None` if some step does not match.
    pub fn replay(&self, input: &Formula) -> Option<Formula> {
        let mut f = input.clone();
        for step in &self.steps {
            let node = f.at_mut(&step.path)?;
            if *node != step.before {
                return None;
            }
            *node = step.after.clone();
        }
        Some(f)
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            let path: Vec<String> = s.path.iter().map(|p| p.to_string()).collect();
            writeln!(f, "{}. {} at [{}]: {}  =>  {}", k + 1, s.rule, path.join(","), s.before, s.after)?;
        }
        Ok(())
    }
}

/// Termination measure for [`reduce_dynamic`]: the number of dynamic nodes
/// with a dynamic node strictly below them, then the multiset of body sizes
/// of the innermost dynamic nodes. Compared lexicographically, the multiset
/// part under the multiset extension of `<` on sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteMeasure {
    pub outer: usize,
    /// Sorted in decreasing order.
    pub bodies: Vec<usize>,
}

impl RewriteMeasure {
    pub fn of(f: &Formula) -> RewriteMeasure {
        let mut m = RewriteMeasure { outer: 0, bodies: Vec::new() };
        collect_measure(f, &mut m);
        m.bodies.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    /// Strictly smaller than `other`.
    pub fn less_than(&self, other: &RewriteMeasure) -> bool {
        if self.outer != other.outer {
            return self.outer < other.outer;
        }
        multiset_less(&self.bodies, &other.bodies)
    }
}

// Returns whether `f` contains a dynamic node.
fn collect_measure(f: &Formula, m: &mut RewriteMeasure) -> bool {
    let mut below = false;
    for c in f.children() {
        below |= collect_measure(c, m);
    }
    match f {
        Formula::Announce(_, body) | Formula::Upgrade(_, body) => {
            if below {
                m.outer += 1;
            } else {
                m.bodies.push(body.size());
            }
            true
        }
        _ => below,
    }
}

/// Dershowitz–Manna ordering on multisets of naturals, both sorted descending:
/// `a < b` iff `a ≠ b` and every element of `a − b` is below some element of
/// `b − a`.
fn multiset_less(a: &[usize], b: &[usize]) -> bool {
    let (mut only_a, mut only_b) = (Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x > y => {
                only_a.push(*x);
                i += 1;
            }
            (Some(_), Some(y)) => {
                only_b.push(*y);
                j += 1;
            }
            (Some(x), None) => {
                only_a.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                only_b.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    if only_a.is_empty() && only_b.is_empty() {
        return false;
    }
    let top_b = only_b.iter().max().copied();
    only_a.iter().all(|x| top_b.is_some_and(|y| *x < y))
}

// Path of the first dynamic node in post-order, which has no dynamic node
// below it.
fn innermost_redex(f: &Formula, path: &mut Vec<usize>) -> bool {
    for (k, c) in f.children().into_iter().enumerate() {
        path.push(k);
        if innermost_redex(c, path) {
            return true;
        }
        path.pop();
    }
    matches!(f, Formula::Announce(..) | Formula::Upgrade(..))
}

fn rewrite_announce(pre: &Formula, body: &Formula) -> (Rule, Formula) {
    use Formula as F;
    let ann = |x: &Formula| F::announce(pre.clone(), x.clone());
    let guard = |x: Formula| F::implies(pre.clone(), x);
    match body {
        F::Atom(_) | F::Top | F::Bot => (Rule::AnnBase, guard(body.clone())),
        F::Not(x) => (Rule::AnnNot, guard(F::not(ann(x)))),
        F::And(a, b) => (Rule::AnnAnd, F::and(ann(a), ann(b))),
        F::Or(a, b) => (Rule::AnnOr, F::or(ann(a), ann(b))),
        F::Implies(a, b) => (Rule::AnnImplies, F::implies(ann(a), ann(b))),
        F::Know(i, x) => (Rule::AnnK, guard(F::know(i.clone(), ann(x)))),
        F::CondBelief(i, c, x) => (
            Rule::AnnBc,
            guard(F::cond(i.clone(), F::and(pre.clone(), ann(c)), ann(x))),
        ),
        F::SafeBelief(i, x) => (Rule::AnnBplus, guard(F::safe(i.clone(), ann(x)))),
        F::GtBox(i, x) => (Rule::AnnGt, guard(F::gt(i.clone(), ann(x)))),
        F::Announce(..) | F::Upgrade(..) => unreachable!("redex bodies are static"),
    }
}

fn rewrite_upgrade(pre: &Formula, body: &Formula) -> (Rule, Formula) {
    use Formula as F;
    let up = |x: &Formula| F::upgrade(pre.clone(), x.clone());
    let not_pre = || F::not(pre.clone());
    // (φ → □(φ → [↑φ]x)) ∧ (¬φ → (□(¬φ → [↑φ]x) ∧ K(φ → [↑φ]x)))
    let plausibility_box = |i: &String, x: &Formula, boxed: fn(String, Formula) -> Formula| {
        F::and(
            F::implies(pre.clone(), boxed(i.clone(), F::implies(pre.clone(), up(x)))),
            F::implies(
                not_pre(),
                F::and(
                    boxed(i.clone(), F::implies(not_pre(), up(x))),
                    F::know(i.clone(), F::implies(pre.clone(), up(x))),
                ),
            ),
        )
    };
    match body {
        F::Atom(_) | F::Top | F::Bot => (Rule::UpBase, body.clone()),
        F::Not(x) => (Rule::UpNot, F::not(up(x))),
        F::And(a, b) => (Rule::UpAnd, F::and(up(a), up(b))),
        F::Or(a, b) => (Rule::UpOr, F::or(up(a), up(b))),
        F::Implies(a, b) => (Rule::UpImplies, F::implies(up(a), up(b))),
        F::Know(i, x) => (Rule::UpK, F::know(i.clone(), up(x))),
        F::CondBelief(i, c, x) => {
            let zone = F::and(pre.clone(), up(c));
            let reachable = F::khat(i.clone(), zone.clone());
            (
                Rule::UpBc,
                F::or(
                    F::and(reachable.clone(), F::cond(i.clone(), zone, up(x))),
                    F::and(F::not(reachable), F::cond(i.clone(), up(c), up(x))),
                ),
            )
        }
        F::SafeBelief(i, x) => (Rule::UpBplus, plausibility_box(i, x, F::safe)),
        F::GtBox(i, x) => (Rule::UpGt, plausibility_box(i, x, F::gt)),
        F::Announce(..) | F::Upgrade(..) => unreachable!("redex bodies are static"),
    }
}

/// Rewrites `f` into an equivalent static formula, always rewriting the
/// innermost, then leftmost, dynamic node.
pub fn reduce_dynamic(f: &Formula) -> (Formula, RewriteTrace) {
    let mut out = f.clone();
    let mut trace = RewriteTrace::default();
    let mut path = Vec::new();
    loop {
        path.clear();
        if !innermost_redex(&out, &mut path) {
            return (out, trace);
        }
        let node = out.at_mut(&path).expect("path found by search");
        let (rule, after) = match &*node {
            Formula::Announce(pre, body) => rewrite_announce(pre, body),
            Formula::Upgrade(pre, body) => rewrite_upgrade(pre, body),
            _ => unreachable!("search stops at dynamic nodes"),
        };
        let before = std::mem::replace(node, after.clone());
        trace.steps.push(RewriteStep { path: path.clone(), rule, before, after });
    }
}

fn require(f: &Formula, allowed: Fragment) -> Result<()> {
    if f.fragment().is_subset(allowed) {
        Ok(())
    } else {
        Err(Error::OutsideFragment { formula: f.to_string(), fragment: allowed.to_string() })
    }
}

/// Replaces every node with `g`, children first. Conditions are rewritten
/// before the enclosing node is handed to `g`.
fn map_bottom_up(f: &Formula, g: &impl Fn(Formula) -> Formula) -> Formula {
    let mut node = f.clone();
    for k in 0..f.children().len() {
        let child = node.child_mut(k).expect("child index in range");
        *child = map_bottom_up(child, g);
    }
    g(node)
}

/// `B_i^α φ ↦ K_i((α ∧ ¬⟨>_i⟩α) → φ)`. Input in `{K, Bc}`, output in
/// `{K, Gt}`; equivalent on uniform models.
pub fn translate_gt(f: &Formula) -> Result<Formula> {
    require(f, Fragment::of(&[Op::K, Op::Bc]))?;
    Ok(map_bottom_up(f, &|node| match node {
        Formula::CondBelief(i, a, x) => Formula::know(
            i.clone(),
            Formula::implies(Formula::and((*a).clone(), Formula::not(Formula::gt_dia(i, *a))), *x),
        ),
        other => other,
    }))
}

/// `B_i^α φ ↦ (K̂_i α → K̂_i(α ∧ B_i^+(α → φ)))`. Input in `{K, Bc, Bplus}`,
/// output in `{K, Bplus}`; equivalent on uniform, locally connected models.
pub fn translate_safe(f: &Formula) -> Result<Formula> {
    require(f, Fragment::of(&[Op::K, Op::Bc, Op::Bplus]))?;
    Ok(map_bottom_up(f, &|node| match node {
        Formula::CondBelief(i, a, x) => Formula::implies(
            Formula::khat(i.clone(), (*a).clone()),
            Formula::khat(
                i.clone(),
                Formula::and((*a).clone(), Formula::safe(i, Formula::implies(*a, *x))),
            ),
        ),
        other => other,
    }))
}
