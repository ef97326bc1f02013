//! Formulas of the static and dynamic language, their concrete syntax, and
//! language fragments.

mod enumerate;
mod fragment;
mod parser;
mod printer;

pub use enumerate::{enumerate, enumerate_all};
pub use fragment::{Fragment, Op};
pub use parser::{parse, ParseError};

use std::collections::BTreeSet;

/// Abstract syntax. `Or`, `Implies`, `Top` and `Bot` are kept as nodes for
/// readability; the duals `Khat` and `GtDia` exist only in the concrete syntax.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `K_i φ`
    Know(String, Box<Formula>),
    /// `B_i^α φ`: condition first, then body.
    CondBelief(String, Box<Formula>, Box<Formula>),
    /// `B_i^+ φ`
    SafeBelief(String, Box<Formula>),
    /// `[>_i] φ`
    GtBox(String, Box<Formula>),
    /// `[!φ] ψ`
    Announce(Box<Formula>, Box<Formula>),
    /// `[↑φ] ψ`
    Upgrade(Box<Formula>, Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Implies(Box::new(a), Box::new(b))
    }

    /// `(a -> b) & (b -> a)`
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn know(agent: impl Into<String>, f: Formula) -> Formula {
        Know(agent.into(), Box::new(f))
    }

    /// `~K_i ~f`
    pub fn khat(agent: impl Into<String>, f: Formula) -> Formula {
        Formula::not(Formula::know(agent, Formula::not(f)))
    }

    pub fn cond(agent: impl Into<String>, condition: Formula, body: Formula) -> Formula {
        CondBelief(agent.into(), Box::new(condition), Box::new(body))
    }

    /// Plain belief, `B_i^⊤`.
    pub fn belief(agent: impl Into<String>, body: Formula) -> Formula {
        Formula::cond(agent, Top, body)
    }

    pub fn safe(agent: impl Into<String>, f: Formula) -> Formula {
        SafeBelief(agent.into(), Box::new(f))
    }

    pub fn gt(agent: impl Into<String>, f: Formula) -> Formula {
        GtBox(agent.into(), Box::new(f))
    }

    /// `~[>_i] ~f`
    pub fn gt_dia(agent: impl Into<String>, f: Formula) -> Formula {
        Formula::not(Formula::gt(agent, Formula::not(f)))
    }

    pub fn announce(pre: Formula, body: Formula) -> Formula {
        Announce(Box::new(pre), Box::new(body))
    }

    pub fn upgrade(pre: Formula, body: Formula) -> Formula {
        Upgrade(Box::new(pre), Box::new(body))
    }

    /// Direct subformulas, left to right (condition before body).
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Atom(_) | Top | Bot => vec![],
            Not(a) | Know(_, a) | SafeBelief(_, a) | GtBox(_, a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | CondBelief(_, a, b) | Announce(a, b) | Upgrade(a, b) => {
                vec![a, b]
            }
        }
    }

    pub(crate) fn child_mut(&mut self, index: usize) -> Option<&mut Formula> {
        match (self, index) {
            (Not(a) | Know(_, a) | SafeBelief(_, a) | GtBox(_, a), 0) => Some(a),
            (And(a, _) | Or(a, _) | Implies(a, _) | CondBelief(_, a, _) | Announce(a, _) | Upgrade(a, _), 0) => Some(a),
            (And(_, b) | Or(_, b) | Implies(_, b) | CondBelief(_, _, b) | Announce(_, b) | Upgrade(_, b), 1) => Some(b),
            _ => None,
        }
    }

    /// Subterm at a path of child indices.
    pub fn at(&self, path: &[usize]) -> Option<&Formula> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i).and_then(|c| c.at(rest)),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Formula> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.child_mut(i).and_then(|c| c.at_mut(rest)),
        }
    }

    /// Height of the tree; leaves have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// The operator kind of this node, if it is modal or dynamic.
    pub fn op(&self) -> Option<Op> {
        match self {
            Know(..) => Some(Op::K),
            CondBelief(..) => Some(Op::Bc),
            SafeBelief(..) => Some(Op::Bplus),
            GtBox(..) => Some(Op::Gt),
            Announce(..) => Some(Op::Ann),
            Upgrade(..) => Some(Op::Up),
            _ => None,
        }
    }

    /// Smallest fragment containing every operator kind occurring in `self`.
    pub fn fragment(&self) -> Fragment {
        let mut frag = Fragment::EMPTY;
        self.visit(&mut |f| {
            if let Some(op) = f.op() {
                frag.insert(op);
            }
        });
        frag
    }

    /// No announcement or upgrade nodes.
    pub fn is_static(&self) -> bool {
        self.fragment().is_static()
    }

    pub fn agents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Know(a, _) | CondBelief(a, _, _) | SafeBelief(a, _) | GtBox(a, _) => {
                out.insert(a.clone());
            }
            _ => {}
        });
        out
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Atom(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
