//! Counterexample models for the undefinability results, with their expected
//! verdicts, and stored models on which the belief translations fail. Entries
//! are embedded at build time and re-verified against the live toolkit.

use std::fmt;

use plausikit::bisim::{
    check, equivalence, greatest, greatest_structural, check_structural, hennessy_milner, Relation, DEFAULT_CAP,
};
use plausikit::semantics::{falsifying_state, truth_set};
use plausikit::translate::{translate_gt, translate_safe};
use plausikit::{parse, Formula, Fragment, Model, ModelDoc};
use serde::Deserialize;

use crate::exhaustive::{visit_models, Orders};

const ENTRIES: [(&str, &str); 3] = [
    ("thm14", include_str!("../corpus/thm14.json")),
    ("thm15", include_str!("../corpus/thm15.json")),
    ("thm21", include_str!("../corpus/thm21.json")),
];

const COUNTEREXAMPLES: &str = include_str!("../corpus/counterexamples.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Side {
    Left,
    Right,
}

type NamePair = (String, String);

/// One stored verdict.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
pub enum Expect {
    /// Whether the stored relation is a bisimulation for the fragment.
    Bisimulation { fragment: String, holds: bool },
    /// Pairs in and out of the largest bisimulation for the fragment.
    Greatest { fragment: String, contains: Vec<NamePair>, excludes: Vec<NamePair> },
    Truth { side: Side, state: String, formula: String, value: bool },
    /// Whether the two states agree on every formula of the fragment.
    Equivalent { fragment: String, left: String, right: String, value: bool },
    /// The formula holds at exactly one of the two states.
    Distinguishes { formula: String, left: String, right: String },
    /// Whether modal equivalence for `{K, Bc}` is a bisimulation, and pairs it
    /// must contain.
    HennessyMilner { holds: bool, contains: Vec<NamePair> },
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expect::Bisimulation { fragment, holds } => {
                write!(f, "Z is {}a {{{fragment}}}-bisimulation", if *holds { "" } else { "not " })
            }
            Expect::Greatest { fragment, contains, excludes } => {
                write!(f, "greatest {{{fragment}}}-bisimulation contains {contains:?}, excludes {excludes:?}")
            }
            Expect::Truth { side, state, formula, value } => {
                let side = if *side == Side::Left { "left" } else { "right" };
                write!(f, "{side}, {state} |= {formula} is {value}")
            }
            Expect::Equivalent { fragment, left, right, value } => {
                write!(f, "{left} and {right} {} on {{{fragment}}}", if *value { "agree" } else { "differ" })
            }
            Expect::Distinguishes { formula, left, right } => write!(f, "{formula} separates {left} from {right}"),
            Expect::HennessyMilner { holds, contains } => {
                write!(f, "{{K, Bc}}-equivalence is {}a bisimulation containing {contains:?}", if *holds { "" } else { "not " })
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    name: String,
    description: String,
    left: ModelDoc,
    right: ModelDoc,
    relation: Vec<NamePair>,
    expect: Vec<Expect>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub description: String,
    pub left: Model,
    pub right: Model,
    pub relation: Relation,
    pub expect: Vec<Expect>,
}

/// The result of re-deriving one stored verdict.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub entry: String,
    pub expect: Expect,
    /// `None` if the live result matches, otherwise what was found.
    pub mismatch: Option<String>,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mismatch {
            None => write!(f, "ok   {}: {}", self.entry, self.expect),
            Some(found) => write!(f, "FAIL {}: {}; found {found}", self.entry, self.expect),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("corpus entry {name}: {source}")]
    Malformed { name: String, source: anyhow::Error },
    #[error("corpus regression:\n{}", .0.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("\n"))]
    Mismatch(Vec<Outcome>),
}

fn parse_entry(text: &str) -> anyhow::Result<CorpusEntry> {
    let doc: EntryDoc = serde_json::from_str(text)?;
    let left = Model::from_doc(&doc.left)?;
    let right = Model::from_doc(&doc.right)?;
    let relation = Relation::from_names(&left, &right, doc.relation.iter().map(|(x, y)| (x.as_str(), y.as_str())))?;
    Ok(CorpusEntry { name: doc.name, description: doc.description, left, right, relation, expect: doc.expect })
}

/// The stored entries, without verification.
pub fn entries() -> Result<Vec<CorpusEntry>, CorpusError> {
    ENTRIES
        .iter()
        .map(|(name, text)| parse_entry(text).map_err(|source| CorpusError::Malformed { name: name.to_string(), source }))
        .collect()
}

/// The stored entries, each verdict re-derived. Any mismatch is an error
/// listing every failing verdict.
pub fn load_corpus() -> Result<Vec<CorpusEntry>, CorpusError> {
    let all = entries()?;
    let failed: Vec<Outcome> = all.iter().flat_map(verify).filter(|o| !o.ok()).collect();
    if failed.is_empty() {
        Ok(all)
    } else {
        Err(CorpusError::Mismatch(failed))
    }
}

/// Re-derives every stored verdict of `entry`.
pub fn verify(entry: &CorpusEntry) -> Vec<Outcome> {
    entry
        .expect
        .iter()
        .map(|e| Outcome { entry: entry.name.clone(), expect: e.clone(), mismatch: evaluate(entry, e).err() })
        .collect()
}

fn fragment(text: &str) -> Result<Fragment, String> {
    text.parse().map_err(|e| format!("bad fragment {text}: {e}"))
}

fn formula(text: &str) -> Result<Formula, String> {
    parse(text).map_err(|e| e.to_string())
}

fn state(m: &Model, name: &str) -> Result<usize, String> {
    m.state_id(name).map_err(|e| e.to_string())
}

fn verdict(holds: bool) -> String {
    if holds { "true".into() } else { "false".into() }
}

/// `Ok(())` if the live toolkit agrees with `e`, otherwise what it found.
fn evaluate(entry: &CorpusEntry, e: &Expect) -> Result<(), String> {
    let (l, r) = (&entry.left, &entry.right);
    let err = |x: plausikit::Error| x.to_string();
    let pair = |(x, y): &NamePair| Ok::<_, String>((state(l, x)?, state(r, y)?));
    match e {
        Expect::Bisimulation { fragment: f, holds } => {
            let v = check(l, r, &entry.relation, fragment(f)?, DEFAULT_CAP).map_err(err)?;
            if v.holds() == *holds {
                Ok(())
            } else {
                Err(v.witness().map_or_else(|| "a bisimulation".to_string(), |w| w.to_string()))
            }
        }
        Expect::Greatest { fragment: f, contains, excludes } => {
            let z = greatest(l, r, fragment(f)?, DEFAULT_CAP).map_err(err)?;
            for p in contains {
                let (w, v) = pair(p)?;
                if !z.contains(w, v) {
                    return Err(format!("{p:?} missing"));
                }
            }
            for p in excludes {
                let (w, v) = pair(p)?;
                if z.contains(w, v) {
                    return Err(format!("{p:?} present"));
                }
            }
            Ok(())
        }
        Expect::Truth { side, state: s, formula: f, value } => {
            let m = if *side == Side::Left { l } else { r };
            let got = truth_set(m, &formula(f)?).map_err(err)?.contains(state(m, s)?);
            if got == *value { Ok(()) } else { Err(verdict(got)) }
        }
        Expect::Equivalent { fragment: f, left, right, value } => {
            let (w, v) = pair(&(left.clone(), right.clone()))?;
            let got = equivalence(l, r, fragment(f)?, DEFAULT_CAP).map_err(err)?.contains(w, v);
            if got == *value { Ok(()) } else { Err(verdict(got)) }
        }
        Expect::Distinguishes { formula: f, left, right } => {
            let (w, v) = pair(&(left.clone(), right.clone()))?;
            let f = formula(f)?;
            let (a, b) = (truth_set(l, &f).map_err(err)?.contains(w), truth_set(r, &f).map_err(err)?.contains(v));
            if a != b { Ok(()) } else { Err(format!("both {}", verdict(a))) }
        }
        Expect::HennessyMilner { holds, contains } => {
            let report = hennessy_milner(l, r, DEFAULT_CAP).map_err(err)?;
            if report.verdict.holds() != *holds {
                return Err(report.verdict.witness().map_or_else(|| "a bisimulation".to_string(), |w| w.to_string()));
            }
            for p in contains {
                let (w, v) = pair(p)?;
                if !report.relation.contains(w, v) {
                    return Err(format!("{p:?} missing"));
                }
            }
            Ok(())
        }
    }
}

/// Which belief translation a counterexample is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Translation {
    Gt,
    Safe,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CounterexampleDoc {
    name: String,
    description: String,
    model: ModelDoc,
    translation: Translation,
    formula: String,
    uniform: bool,
    locally_connected: bool,
    fails_at: String,
}

/// A model outside a translation's model class on which the translation
/// changes the meaning of a formula.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub name: String,
    pub description: String,
    pub model: Model,
    pub translation: Translation,
    pub formula: Formula,
    pub uniform: bool,
    pub locally_connected: bool,
    pub fails_at: String,
}

impl Counterexample {
    /// `formula <-> translation(formula)`.
    pub fn biconditional(&self) -> Formula {
        let image = match self.translation {
            Translation::Gt => translate_gt(&self.formula),
            Translation::Safe => translate_safe(&self.formula),
        }
        .expect("stored formulas are in the translation's fragment");
        Formula::iff(self.formula.clone(), image)
    }

    /// Checks the stored class flags and that the biconditional first fails
    /// at the stored state.
    pub fn verify(&self) -> Result<(), String> {
        if self.model.is_uniform() != self.uniform {
            return Err(format!("uniform is {}", self.model.is_uniform()));
        }
        if self.model.is_locally_connected() != self.locally_connected {
            return Err(format!("locally connected is {}", self.model.is_locally_connected()));
        }
        let first = falsifying_state(&self.model, &self.biconditional()).map_err(|e| e.to_string())?;
        match first.map(|w| self.model.state_name(w)) {
            Some(w) if w == self.fails_at => Ok(()),
            Some(w) => Err(format!("first fails at {w}")),
            None => Err("biconditional is valid".into()),
        }
    }
}

pub fn counterexamples() -> Vec<Counterexample> {
    let docs: Vec<CounterexampleDoc> = serde_json::from_str(COUNTEREXAMPLES).expect("embedded counterexamples parse");
    docs.into_iter()
        .map(|d| Counterexample {
            model: Model::from_doc(&d.model).expect("embedded counterexample models are valid"),
            formula: parse(&d.formula).expect("embedded formulas parse"),
            name: d.name,
            description: d.description,
            translation: d.translation,
            uniform: d.uniform,
            locally_connected: d.locally_connected,
            fails_at: d.fails_at,
        })
        .collect()
}

/// Designated states of a candidate: `w, v` in a left model and the matching
/// `w', v'` in a right model.
#[derive(Clone, Debug)]
pub struct Thm14Witness {
    pub left: Model,
    pub right: Model,
    pub w: usize,
    pub v: usize,
    pub w2: usize,
    pub v2: usize,
    pub relation: Relation,
}

fn min_of_p(m: &Model, w: usize) -> plausikit::StateSet {
    let mut x = m.eq_class(0, w);
    x.intersect_with(&m.valuation("p"));
    m.min_set(0, w, &x)
}

fn left_roles(m: &Model) -> Vec<(usize, usize)> {
    let (p, q) = (m.valuation("p"), m.valuation("q"));
    let mut out = Vec::new();
    if p.intersection(&q).count() < 2 {
        return out;
    }
    for w in 0..m.num_states() {
        let min = min_of_p(m, w);
        for v in (0..m.num_states()).filter(|&v| v != w) {
            let incomparable = !m.le(0, w, w, v) && !m.le(0, w, v, w);
            let both = [w, v].iter().all(|&x| p.contains(x) && q.contains(x));
            if incomparable && both && min.count_ones(..) == 2 && min.contains(w) && min.contains(v) {
                out.push((w, v));
            }
        }
    }
    out
}

fn right_roles(m: &Model) -> Vec<(usize, usize)> {
    let q = m.valuation("q");
    let mut out = Vec::new();
    if m.valuation("p").difference(&q).count() == 0 {
        return out;
    }
    for w in 0..m.num_states() {
        let min = min_of_p(m, w);
        for v in (0..m.num_states()).filter(|&v| v != w) {
            if min.count_ones(..) == 2 && min.contains(w) && min.contains(v) && !q.contains(v) {
                out.push((w, v));
            }
        }
    }
    out
}

/// The first pair of models, by total then left state count and enumeration
/// order, meeting the stated constraints with a `{K, Bplus}`-bisimulation
/// linking `w` and `w'`. The relation is a smallest such bisimulation, found
/// by trying subsets of the greatest one in order of size.
pub fn thm14_search(max_states: usize) -> Option<Thm14Witness> {
    let frag = Fragment::of(&[plausikit::Op::K, plausikit::Op::Bplus]);
    let mut sizes: Vec<(usize, usize)> =
        (1..=max_states).flat_map(|l| (1..=max_states).map(move |r| (l, r))).collect();
    sizes.sort_by_key(|&(l, r)| (l + r, l));
    type Candidates = Vec<(Model, Vec<(usize, usize)>)>;
    let candidates = |n: usize, roles: fn(&Model) -> Vec<(usize, usize)>| {
        let mut out = Vec::new();
        visit_models(n, &["p", "q"], Orders::Any, |m| {
            let r = roles(&m);
            if !r.is_empty() {
                out.push((m, r));
            }
        });
        out
    };
    let mut left_cache: Vec<Option<Candidates>> = vec![None; max_states + 1];
    let mut right_cache: Vec<Option<Candidates>> = vec![None; max_states + 1];
    for (nl, nr) in sizes {
        let rights = right_cache[nr].get_or_insert_with(|| candidates(nr, right_roles));
        if rights.is_empty() {
            continue;
        }
        let lefts = left_cache[nl].get_or_insert_with(|| candidates(nl, left_roles));
        for (left, lroles) in lefts.iter() {
            for (right, rroles) in right_cache[nr].as_ref().expect("filled").iter() {
                let z = greatest_structural(left, right, frag).expect("same agents");
                for &(w, v) in lroles {
                    for &(w2, v2) in rroles {
                        if z.contains(w, w2) {
                            let relation = smallest_within(left, right, &z, (w, w2), frag);
                            return Some(Thm14Witness {
                                left: left.clone(),
                                right: right.clone(),
                                w,
                                v,
                                w2,
                                v2,
                                relation,
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

fn smallest_within(left: &Model, right: &Model, z: &Relation, pair: (usize, usize), frag: Fragment) -> Relation {
    let pairs: Vec<(usize, usize)> = z.pairs().filter(|&p| p != pair).collect();
    let mut masks: Vec<u32> = (0..1u32 << pairs.len()).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let mut r = Relation::empty(left.num_states(), right.num_states());
        r.insert(pair.0, pair.1);
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                r.insert(a, b);
            }
        }
        if check_structural(left, right, &r, frag).expect("same agents").holds() {
            return r;
        }
    }
    z.clone()
}

/// Renames states through `name`, keeping everything else.
pub fn rename(m: &Model, name: impl Fn(usize) -> String) -> Model {
    let by_name = |s: &str| name(m.state_id(s).expect("own state"));
    let doc = m.to_doc();
    let pairs = |v: &[(String, String)]| v.iter().map(|(x, y)| (by_name(x), by_name(y))).collect();
    let renamed = ModelDoc {
        states: doc.states.iter().map(|s| by_name(s)).collect(),
        agents: doc.agents.clone(),
        epist: doc.epist.iter().map(|(a, v)| (a.clone(), pairs(v))).collect(),
        plaus: doc
            .plaus
            .iter()
            .map(|(a, per)| (a.clone(), per.iter().map(|(s, v)| (by_name(s), pairs(v))).collect()))
            .collect(),
        valuation: doc.valuation.iter().map(|(p, ext)| (p.clone(), ext.iter().map(|s| by_name(s)).collect())).collect(),
    };
    Model::from_doc(&renamed).expect("renaming keeps models valid")
}

impl Thm14Witness {
    /// The witness with states renamed to `w, v, u` on the left and
    /// `W, V, U` on the right, as stored in the corpus.
    pub fn canonical(&self) -> (Model, Model, Vec<NamePair>) {
        let role = |w: usize, v: usize, names: [&'static str; 3]| {
            move |x: usize| {
                if x == w {
                    names[0].to_string()
                } else if x == v {
                    names[1].to_string()
                } else {
                    names[2].to_string()
                }
            }
        };
        let (ln, rn) = (role(self.w, self.v, ["w", "v", "u"]), role(self.w2, self.v2, ["W", "V", "U"]));
        let left = rename(&self.left, ln);
        let right = rename(&self.right, rn);
        let mut pairs: Vec<NamePair> = self.relation.pairs().map(|(x, y)| (ln(x), rn(y))).collect();
        pairs.sort();
        (left, right, pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_verifies() {
        let all = load_corpus().unwrap();
        assert_eq!(all.iter().map(|e| e.name.as_str()).collect::<Vec<_>>(), ["thm14", "thm15", "thm21"]);
    }

    #[test]
    fn counterexamples_verify() {
        let all = counterexamples();
        assert_eq!(all.len(), 2);
        for c in &all {
            c.verify().unwrap_or_else(|e| panic!("{}: {e}", c.name));
        }
    }

    #[test]
    fn search_reproduces_stored_thm14() {
        let found = thm14_search(3).expect("a witness exists within 3 states");
        let (left, right, pairs) = found.canonical();
        let stored = entries().unwrap().into_iter().find(|e| e.name == "thm14").unwrap();
        assert_eq!(left, stored.left);
        assert_eq!(right, stored.right);
        let mut stored_pairs = stored.relation.to_names(&stored.left, &stored.right);
        stored_pairs.sort();
        assert_eq!(pairs, stored_pairs);
    }

    #[test]
    fn mismatches_are_reported() {
        let mut entry = entries().unwrap().remove(1);
        entry.expect = vec![Expect::Truth {
            side: Side::Left,
            state: "w".into(),
            formula: "Bplus[a] p".into(),
            value: false,
        }];
        let out = verify(&entry);
        assert_eq!(out[0].mismatch.as_deref(), Some("true"));
        assert!(out[0].to_string().starts_with("FAIL thm15"));
    }
}
