//! Simultaneously definable truth-set pairs.
//!
//! For two models and a static fragment, the family is the least set of pairs
//! `(X ⊆ W, X' ⊆ W')` containing `(W, W')` and every atom pair, closed under
//! complement, intersection and the fragment's modal operators applied to
//! both sides at once. Each member is `(⟦α⟧, ⟦α⟧')` for the formula its
//! generator log replays to, and every formula of the fragment has its pair
//! of truth sets in the family.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{Model, StateSet};
use crate::semantics::{complement, gt_set, know_set, safe_set};
use crate::syntax::{Formula, Fragment, Op};

pub const DEFAULT_CAP: usize = 4096;

/// How a member was produced; indices refer to earlier members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Top,
    Atom(String),
    Not(usize),
    And(usize, usize),
    Know(usize, usize),
    Safe(usize, usize),
    Gt(usize, usize),
    /// Agent, condition, body.
    Cond(usize, usize, usize),
}

#[derive(Clone, Debug)]
pub struct PairFamily {
    agents: Vec<String>,
    members: Vec<(StateSet, StateSet)>,
    generators: Vec<Generator>,
    /// `mins[agent][member]`: per-state minimal sets of the member as a
    /// condition, left then right. Filled only for fragments with `Bc`.
    mins: Vec<Vec<(Vec<StateSet>, Vec<StateSet>)>>,
}

impl PairFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[(StateSet, StateSet)] {
        &self.members
    }

    pub fn generator(&self, k: usize) -> &Generator {
        &self.generators[k]
    }

    pub fn contains(&self, left: &StateSet, right: &StateSet) -> bool {
        self.members.iter().any(|(x, y)| x == left && y == right)
    }

    /// A formula whose truth sets are member `k`.
    pub fn formula(&self, k: usize) -> Formula {
        let agent = |a: usize| self.agents[a].clone();
        match &self.generators[k] {
            Generator::Top => Formula::Top,
            Generator::Atom(p) => Formula::atom(p.clone()),
            Generator::Not(a) => Formula::not(self.formula(*a)),
            Generator::And(a, b) => Formula::and(self.formula(*a), self.formula(*b)),
            Generator::Know(i, a) => Formula::know(agent(*i), self.formula(*a)),
            Generator::Safe(i, a) => Formula::safe(agent(*i), self.formula(*a)),
            Generator::Gt(i, a) => Formula::gt(agent(*i), self.formula(*a)),
            Generator::Cond(i, c, a) => Formula::cond(agent(*i), self.formula(*c), self.formula(*a)),
        }
    }

    /// The first member containing exactly one of `w` (left) and `v` (right).
    pub fn separating(&self, w: usize, v: usize) -> Option<usize> {
        self.members.iter().position(|(x, y)| x.contains(w) != y.contains(v))
    }

    /// Per-state minimal sets of member `k` used as a condition by `agent`.
    pub(crate) fn mins(&self, agent: usize, k: usize) -> &(Vec<StateSet>, Vec<StateSet>) {
        &self.mins[agent][k]
    }

    pub(crate) fn has_mins(&self) -> bool {
        !self.mins.is_empty()
    }
}

fn min_sets(m: &Model, agent: usize, condition: &StateSet) -> Vec<StateSet> {
    (0..m.num_states())
        .map(|w| {
            let mut x = m.eq_class(agent, w);
            x.intersect_with(condition);
            m.min_set(agent, w, &x)
        })
        .collect()
}

fn cond_with(m: &Model, mins: &[StateSet], body: &StateSet) -> StateSet {
    let mut out = m.empty_set();
    for (w, min) in mins.iter().enumerate() {
        if min.is_subset(body) {
            out.insert(w);
        }
    }
    out
}

struct Builder {
    cap: usize,
    family: PairFamily,
    index: HashMap<(StateSet, StateSet), usize>,
}

impl Builder {
    fn add(&mut self, pair: (StateSet, StateSet), generator: Generator) -> Result<()> {
        if self.index.contains_key(&pair) {
            return Ok(());
        }
        if self.family.members.len() >= self.cap {
            return Err(Error::FamilyCap { cap: self.cap });
        }
        self.index.insert(pair.clone(), self.family.members.len());
        self.family.members.push(pair);
        self.family.generators.push(generator);
        Ok(())
    }
}

/// Computes the definable-pair family of a static fragment, failing with
/// [`Error::FamilyCap`] once more than `cap` members appear.
pub fn definable_pairs(left: &Model, right: &Model, fragment: Fragment, cap: usize) -> Result<PairFamily> {
    super::same_agents(left, right)?;
    if !fragment.is_static() {
        return Err(Error::OutsideFragment {
            formula: "definable-pair closure".into(),
            fragment: fragment.to_string(),
        });
    }
    let agents = left.agents().to_vec();
    let n_agents = agents.len();
    let with_bc = fragment.contains(Op::Bc);
    let mut b = Builder {
        cap,
        family: PairFamily {
            agents,
            members: Vec::new(),
            generators: Vec::new(),
            mins: if with_bc { vec![Vec::new(); n_agents] } else { Vec::new() },
        },
        index: HashMap::new(),
    };
    b.add((left.all_states(), right.all_states()), Generator::Top)?;
    let atoms: BTreeSet<&str> = left.atoms().chain(right.atoms()).collect();
    for p in atoms {
        b.add((left.valuation(p), right.valuation(p)), Generator::Atom(p.to_string()))?;
    }

    let unary: Vec<Op> = [Op::K, Op::Bplus, Op::Gt].into_iter().filter(|op| fragment.contains(*op)).collect();
    let mut k = 0;
    while k < b.family.members.len() {
        let (x, y) = b.family.members[k].clone();
        b.add((complement(left, &x), complement(right, &y)), Generator::Not(k))?;
        for &op in &unary {
            for i in 0..n_agents {
                let (pair, generator) = match op {
                    Op::K => ((know_set(left, i, &x), know_set(right, i, &y)), Generator::Know(i, k)),
                    Op::Bplus => ((safe_set(left, i, &x), safe_set(right, i, &y)), Generator::Safe(i, k)),
                    _ => ((gt_set(left, i, &x), gt_set(right, i, &y)), Generator::Gt(i, k)),
                };
                b.add(pair, generator)?;
            }
        }
        if with_bc {
            for i in 0..n_agents {
                let mins = (min_sets(left, i, &x), min_sets(right, i, &y));
                b.family.mins[i].push(mins);
            }
        }
        for j in 0..=k {
            let (u, v) = b.family.members[j].clone();
            let mut l = x.clone();
            l.intersect_with(&u);
            let mut r = y.clone();
            r.intersect_with(&v);
            b.add((l, r), Generator::And(j, k))?;
            if with_bc {
                for i in 0..n_agents {
                    for (c, body) in [(k, j), (j, k)] {
                        let (ml, mr) = &b.family.mins[i][c];
                        let (bl, br) = &b.family.members[body];
                        let pair = (cond_with(left, ml, bl), cond_with(right, mr, br));
                        b.add(pair, Generator::Cond(i, c, body))?;
                    }
                }
            }
        }
        k += 1;
    }
    Ok(b.family)
}
