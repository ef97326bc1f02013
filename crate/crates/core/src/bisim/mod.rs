//! Bisimulations between two models, parameterized by a static fragment.
//!
//! `K`, `Bplus` and `Gt` contribute structural zig/zag clauses over the
//! accessible sets `[w]`, `{v ∈ [w] | v ≤_w w}` and `{v ∈ [w] | v <_w w}`.
//! `Bc` contributes one zig/zag clause per condition, with conditions ranging
//! over the fragment's [`PairFamily`]: the minimal sets of each definable
//! condition must be matched. All clauses are monotone in the relation, so
//! the largest bisimulation is reached by deleting violating pairs from the
//! atom-respecting full relation until nothing changes.

mod family;

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

pub use family::{definable_pairs, Generator, PairFamily, DEFAULT_CAP};

use crate::error::{Error, Result};
use crate::model::{Model, StateSet};
use crate::syntax::{Formula, Fragment, Op};

pub(crate) fn same_agents(left: &Model, right: &Model) -> Result<()> {
    if left.agents() == right.agents() {
        Ok(())
    } else {
        Err(Error::AgentMismatch { left: left.agents().to_vec(), right: right.agents().to_vec() })
    }
}

/// A relation `Z ⊆ W × W'` by state index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    right_size: usize,
    rows: Vec<FixedBitSet>,
}

impl Relation {
    pub fn empty(left_size: usize, right_size: usize) -> Self {
        Relation { right_size, rows: vec![FixedBitSet::with_capacity(right_size); left_size] }
    }

    pub fn full(left_size: usize, right_size: usize) -> Self {
        let mut r = Self::empty(left_size, right_size);
        for row in &mut r.rows {
            row.insert_range(..);
        }
        r
    }

    /// The identity on one model.
    pub fn identity(size: usize) -> Self {
        let mut r = Self::empty(size, size);
        for w in 0..size {
            r.insert(w, w);
        }
        r
    }

    /// From state names, failing with [`Error::BadPair`] on unknown names.
    pub fn from_names<'a>(
        left: &Model,
        right: &Model,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut r = Self::empty(left.num_states(), right.num_states());
        for (x, y) in pairs {
            match (left.state_id(x), right.state_id(y)) {
                (Ok(a), Ok(b)) => r.insert(a, b),
                _ => return Err(Error::BadPair(x.to_string(), y.to_string())),
            }
        }
        Ok(r)
    }

    pub fn left_size(&self) -> usize {
        self.rows.len()
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn contains(&self, w: usize, v: usize) -> bool {
        self.rows[w].contains(v)
    }

    pub fn insert(&mut self, w: usize, v: usize) {
        self.rows[w].insert(v);
    }

    pub fn remove(&mut self, w: usize, v: usize) {
        self.rows[w].set(v, false);
    }

    pub fn row(&self, w: usize) -> &FixedBitSet {
        &self.rows[w]
    }

    /// Pairs in lexicographic index order, which is name order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(w, row)| row.ones().map(move |v| (w, v)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    fn columns(&self) -> Vec<FixedBitSet> {
        let mut cols = vec![FixedBitSet::with_capacity(self.left_size()); self.right_size];
        for (w, v) in self.pairs() {
            cols[v].insert(w);
        }
        cols
    }

    pub fn to_names(&self, left: &Model, right: &Model) -> Vec<(String, String)> {
        self.pairs()
            .map(|(w, v)| (left.state_name(w).to_string(), right.state_name(v).to_string()))
            .collect()
    }

    pub fn to_doc(&self, left: &Model, right: &Model, left_ref: &str, right_ref: &str) -> RelationDoc {
        RelationDoc { left: left_ref.to_string(), right: right_ref.to_string(), pairs: self.to_names(left, right) }
    }
}

/// Relation file contents: references to the two model files and the pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub left: String,
    pub right: String,
    pub pairs: Vec<(String, String)>,
}

impl RelationDoc {
    pub fn resolve(&self, left: &Model, right: &Model) -> Result<Relation> {
        Relation::from_names(left, right, self.pairs.iter().map(|(x, y)| (x.as_str(), y.as_str())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clause {
    Atoms,
    Zig(Op),
    Zag(Op),
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::Atoms => f.write_str("atoms"),
            Clause::Zig(op) => write!(f, "{op} zig"),
            Clause::Zag(op) => write!(f, "{op} zag"),
        }
    }
}

/// The condition of a failing `Bc` clause, with its truth sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub formula: Formula,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

/// The first violated clause, for the lexicographically least failing pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub clause: Clause,
    pub pair: (String, String),
    pub agent: Option<String>,
    /// The atom of a failing atoms clause.
    pub atom: Option<String>,
    /// The state with no partner on the other side.
    pub unmatched: Option<String>,
    pub condition: Option<Condition>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} clause fails at ({}, {})", self.clause, self.pair.0, self.pair.1)?;
        if let Some(p) = &self.atom {
            write!(f, " on atom {p}")?;
        }
        if let Some(a) = &self.agent {
            write!(f, " for agent {a}")?;
        }
        if let Some(c) = &self.condition {
            write!(f, " under condition {}", c.formula)?;
        }
        if let Some(s) = &self.unmatched {
            write!(f, ": {s} has no related counterpart")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Box<Witness>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

/// One family of zig/zag clauses: for `(w, w')` the sets `left[w]` and
/// `right[w']` must be matched through the relation.
struct Clauses<'f> {
    op: Op,
    agent: usize,
    member: Option<usize>,
    left: &'f [StateSet],
    right: &'f [StateSet],
}

fn accessible(m: &Model, op: Op, agent: usize) -> Vec<StateSet> {
    (0..m.num_states())
        .map(|w| {
            let mut out = m.empty_set();
            for v in m.epist(agent).successors(w).ones() {
                let keep = match op {
                    Op::K => true,
                    Op::Bplus => m.le(agent, w, v, w),
                    _ => m.lt(agent, w, v, w),
                };
                if keep {
                    out.insert(v);
                }
            }
            out
        })
        .collect()
}

/// Everything needed to test pairs against a fragment's clauses.
pub struct Checker<'m> {
    left: &'m Model,
    right: &'m Model,
    atoms: Vec<String>,
    family: Option<PairFamily>,
    structural: Vec<(Op, usize, Vec<StateSet>, Vec<StateSet>)>,
}

impl<'m> Checker<'m> {
    /// Prepares the clauses of a static fragment; builds the definable-pair
    /// family when the fragment contains `Bc`.
    pub fn new(left: &'m Model, right: &'m Model, fragment: Fragment, cap: usize) -> Result<Self> {
        same_agents(left, right)?;
        if !fragment.is_static() {
            return Err(Error::OutsideFragment {
                formula: "bisimulation clauses".into(),
                fragment: fragment.to_string(),
            });
        }
        let atoms: BTreeSet<&str> = left.atoms().chain(right.atoms()).collect();
        let family = if fragment.contains(Op::Bc) {
            Some(definable_pairs(left, right, fragment, cap)?)
        } else {
            None
        };
        let mut structural = Vec::new();
        for op in [Op::K, Op::Bplus, Op::Gt] {
            if fragment.contains(op) {
                for i in 0..left.agents().len() {
                    structural.push((op, i, accessible(left, op, i), accessible(right, op, i)));
                }
            }
        }
        Ok(Checker {
            left,
            right,
            atoms: atoms.into_iter().map(str::to_string).collect(),
            family,
            structural,
        })
    }

    pub fn family(&self) -> Option<&PairFamily> {
        self.family.as_ref()
    }

    fn clauses(&self) -> Vec<Clauses<'_>> {
        let structural = |op: Op| {
            self.structural.iter().filter(move |(o, ..)| *o == op).map(move |(_, i, l, r)| Clauses {
                op,
                agent: *i,
                member: None,
                left: l.as_slice(),
                right: r.as_slice(),
            })
        };
        let mut out: Vec<Clauses<'_>> = structural(Op::K).collect();
        if let Some(fam) = self.family.as_ref().filter(|f| f.has_mins()) {
            for i in 0..self.left.agents().len() {
                for k in 0..fam.len() {
                    let (l, r) = fam.mins(i, k);
                    out.push(Clauses { op: Op::Bc, agent: i, member: Some(k), left: l, right: r });
                }
            }
        }
        out.extend(structural(Op::Bplus));
        out.extend(structural(Op::Gt));
        out
    }

    fn atoms_agree(&self, w: usize, v: usize) -> Option<&str> {
        self.atoms
            .iter()
            .find(|p| self.left.valuation(p).contains(w) != self.right.valuation(p).contains(v))
            .map(String::as_str)
    }

    /// The atom-respecting full relation.
    pub fn atom_relation(&self) -> Relation {
        let mut z = Relation::empty(self.left.num_states(), self.right.num_states());
        for w in 0..self.left.num_states() {
            for v in 0..self.right.num_states() {
                if self.atoms_agree(w, v).is_none() {
                    z.insert(w, v);
                }
            }
        }
        z
    }

    fn witness(&self, w: usize, v: usize, clause: Clause) -> Witness {
        Witness {
            clause,
            pair: (self.left.state_name(w).to_string(), self.right.state_name(v).to_string()),
            agent: None,
            atom: None,
            unmatched: None,
            condition: None,
        }
    }

    fn check_pair(
        &self,
        z: &Relation,
        cols: &[FixedBitSet],
        clauses: &[Clauses<'_>],
        w: usize,
        v: usize,
    ) -> Option<Witness> {
        if let Some(p) = self.atoms_agree(w, v) {
            let mut wit = self.witness(w, v, Clause::Atoms);
            wit.atom = Some(p.to_string());
            return Some(wit);
        }
        for c in clauses {
            let (sl, sr) = (&c.left[w], &c.right[v]);
            let zig = sl.ones().find(|&x| z.row(x).is_disjoint(sr));
            let zag = sr.ones().find(|&y| cols[y].is_disjoint(sl));
            let (clause, unmatched) = match (zig, zag) {
                (Some(x), _) => (Clause::Zig(c.op), self.left.state_name(x)),
                (None, Some(y)) => (Clause::Zag(c.op), self.right.state_name(y)),
                (None, None) => continue,
            };
            let mut wit = self.witness(w, v, clause);
            wit.agent = Some(self.left.agents()[c.agent].clone());
            wit.unmatched = Some(unmatched.to_string());
            if let (Some(k), Some(fam)) = (c.member, &self.family) {
                let (x, y) = &fam.members()[k];
                wit.condition = Some(Condition {
                    formula: fam.formula(k),
                    left: self.left.names_of(x),
                    right: self.right.names_of(y),
                });
            }
            return Some(wit);
        }
        None
    }

    /// Whether `z` satisfies every clause of the fragment.
    pub fn check(&self, z: &Relation) -> Verdict {
        let cols = z.columns();
        let clauses = self.clauses();
        for (w, v) in z.pairs() {
            if let Some(wit) = self.check_pair(z, &cols, &clauses, w, v) {
                return Verdict::Fails(Box::new(wit));
            }
        }
        Verdict::Holds
    }

    /// The largest relation satisfying every clause.
    pub fn greatest(&self) -> Relation {
        let mut z = self.atom_relation();
        let clauses = self.clauses();
        loop {
            let cols = z.columns();
            let bad: Vec<(usize, usize)> = z
                .pairs()
                .filter(|&(w, v)| self.check_pair(&z, &cols, &clauses, w, v).is_some())
                .collect();
            if bad.is_empty() {
                return z;
            }
            for (w, v) in bad {
                z.remove(w, v);
            }
        }
    }
}

fn structural_only(fragment: Fragment) -> Result<()> {
    if fragment.is_subset(Fragment::of(&[Op::K, Op::Bplus, Op::Gt])) {
        Ok(())
    } else {
        Err(Error::OutsideFragment { formula: "structural bisimulation".into(), fragment: fragment.to_string() })
    }
}

/// Checks the atoms clause and the zig/zag clauses of `K`, `Bplus` and `Gt`
/// present in `fragment`.
pub fn check_structural(left: &Model, right: &Model, z: &Relation, fragment: Fragment) -> Result<Verdict> {
    structural_only(fragment)?;
    Ok(Checker::new(left, right, fragment, DEFAULT_CAP)?.check(z))
}

/// The largest structural bisimulation for `fragment ⊆ {K, Bplus, Gt}`.
pub fn greatest_structural(left: &Model, right: &Model, fragment: Fragment) -> Result<Relation> {
    structural_only(fragment)?;
    Ok(Checker::new(left, right, fragment, DEFAULT_CAP)?.greatest())
}

/// Checks a fragment containing `Bc`: the structural clauses of its other
/// operators plus the `Bc` clauses with conditions from the fragment.
pub fn check_bc(left: &Model, right: &Model, z: &Relation, fragment: Fragment, cap: usize) -> Result<Verdict> {
    if !fragment.contains(Op::Bc) {
        return Err(Error::OutsideFragment { formula: "conditional-belief bisimulation".into(), fragment: fragment.to_string() });
    }
    Ok(Checker::new(left, right, fragment, cap)?.check(z))
}

/// Checks any static fragment.
pub fn check(left: &Model, right: &Model, z: &Relation, fragment: Fragment, cap: usize) -> Result<Verdict> {
    Ok(Checker::new(left, right, fragment, cap)?.check(z))
}

/// The largest bisimulation for any static fragment.
pub fn greatest(left: &Model, right: &Model, fragment: Fragment, cap: usize) -> Result<Relation> {
    Ok(Checker::new(left, right, fragment, cap)?.greatest())
}

/// `≡_F`: all pairs that agree on every formula of the fragment.
pub fn equivalence(left: &Model, right: &Model, fragment: Fragment, cap: usize) -> Result<Relation> {
    let fam = definable_pairs(left, right, fragment, cap)?;
    Ok(equivalence_in(&fam, left, right))
}

fn equivalence_in(fam: &PairFamily, left: &Model, right: &Model) -> Relation {
    let mut z = Relation::empty(left.num_states(), right.num_states());
    for w in 0..left.num_states() {
        for v in 0..right.num_states() {
            if fam.separating(w, v).is_none() {
                z.insert(w, v);
            }
        }
    }
    z
}

/// Whether the two states agree on every formula of the fragment; if not, a
/// formula true at exactly one of them.
pub fn distinguishing_formula(
    left: &Model,
    w: usize,
    right: &Model,
    v: usize,
    fragment: Fragment,
    cap: usize,
) -> Result<Option<Formula>> {
    let fam = definable_pairs(left, right, fragment, cap)?;
    Ok(fam.separating(w, v).map(|k| fam.formula(k)))
}

/// `w ≡_F v`
pub fn modal_equiv(left: &Model, w: usize, right: &Model, v: usize, fragment: Fragment, cap: usize) -> Result<bool> {
    Ok(distinguishing_formula(left, w, right, v, fragment, cap)?.is_none())
}

/// `≡_{K,Bc}` and whether it is a `{K, Bc}`-bisimulation.
#[derive(Clone, Debug)]
pub struct HmReport {
    pub relation: Relation,
    pub verdict: Verdict,
}

pub fn hennessy_milner(left: &Model, right: &Model, cap: usize) -> Result<HmReport> {
    let checker = Checker::new(left, right, Fragment::of(&[Op::K, Op::Bc]), cap)?;
    let fam = checker.family().expect("fragment contains Bc");
    let relation = equivalence_in(fam, left, right);
    let verdict = checker.check(&relation);
    Ok(HmReport { relation, verdict })
}
