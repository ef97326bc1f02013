use std::fmt;
use std::str::FromStr;

/// Modal and dynamic operator kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    K,
    Bc,
    Bplus,
    Gt,
    Ann,
    Up,
}

impl Op {
    pub const ALL: [Op; 6] = [Op::K, Op::Bc, Op::Bplus, Op::Gt, Op::Ann, Op::Up];

    pub fn name(self) -> &'static str {
        match self {
            Op::K => "K",
            Op::Bc => "Bc",
            Op::Bplus => "Bplus",
            Op::Gt => "Gt",
            Op::Ann => "Ann",
            Op::Up => "Up",
        }
    }

    pub fn is_dynamic(self) -> bool {
        matches!(self, Op::Ann | Op::Up)
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Op::ALL
            .into_iter()
            .find(|op| op.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown operator `{s}` (expected one of K, Bc, Bplus, Gt, Ann, Up)"))
    }
}

/// A set of operator kinds naming a sublanguage: a formula belongs to the
/// fragment iff each of its modal and dynamic nodes does. Boolean structure is
/// always allowed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fragment(u8);

impl Fragment {
    pub const EMPTY: Fragment = Fragment(0);

    pub fn of(ops: &[Op]) -> Fragment {
        let mut f = Fragment::EMPTY;
        for &op in ops {
            f.insert(op);
        }
        f
    }

    pub fn contains(self, op: Op) -> bool {
        self.0 & op.bit() != 0
    }

    pub fn insert(&mut self, op: Op) {
        self.0 |= op.bit();
    }

    pub fn with(mut self, op: Op) -> Fragment {
        self.insert(op);
        self
    }

    pub fn without(self, op: Op) -> Fragment {
        Fragment(self.0 & !op.bit())
    }

    pub fn union(self, other: Fragment) -> Fragment {
        Fragment(self.0 | other.0)
    }

    pub fn is_subset(self, other: Fragment) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_static(self) -> bool {
        !self.contains(Op::Ann) && !self.contains(Op::Up)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn ops(self) -> impl Iterator<Item = Op> {
        Op::ALL.into_iter().filter(move |&op| self.contains(op))
    }

    /// The static fragment that dynamic formulas of `self` reduce into:
    /// announcement and upgrade are dropped, and upgrade adds `K` when it can
    /// meet a doxastic operator (its reduction axioms mention `K`).
    pub fn reduced(self) -> Fragment {
        let mut out = self.without(Op::Ann).without(Op::Up);
        if self.contains(Op::Up)
            && (self.contains(Op::Bc) || self.contains(Op::Bplus) || self.contains(Op::Gt))
        {
            out.insert(Op::K);
        }
        out
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.ops().map(Op::name).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

impl fmt::Debug for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Fragment {
    type Err = String;

    /// Comma-separated operator names, e.g. `K,Bplus`. Braces are optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut f = Fragment::EMPTY;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            f.insert(part.parse()?);
        }
        Ok(f)
    }
}
