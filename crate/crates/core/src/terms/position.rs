use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::Var;

/// One step from a node to one of its children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selector {
    LamBody,
    AppFun,
    AppArg,
    CutContent,
    CutBody,
    SubtrContent,
    SubtrBody,
}

impl Selector {
    pub const ALL: [Selector; 7] = [
        Selector::LamBody,
        Selector::AppFun,
        Selector::AppArg,
        Selector::CutContent,
        Selector::CutBody,
        Selector::SubtrContent,
        Selector::SubtrBody,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Selector::LamBody => "lam-body",
            Selector::AppFun => "app-fun",
            Selector::AppArg => "app-arg",
            Selector::CutContent => "cut-content",
            Selector::CutBody => "cut-body",
            Selector::SubtrContent => "subtr-content",
            Selector::SubtrBody => "subtr-body",
        }
    }

    pub fn from_name(s: &str) -> Option<Selector> {
        Selector::ALL.into_iter().find(|sel| sel.name() == s)
    }

    /// Whether the child sits under a binder of its parent.
    pub fn is_binding(self) -> bool {
        matches!(
            self,
            Selector::LamBody | Selector::CutBody | Selector::SubtrBody
        )
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A path from the root of a term to a sub-term; encodes a context with a
/// single hole.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(pub Vec<Selector>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, sel: Selector) -> Self {
        let mut p = self.0.clone();
        p.push(sel);
        Position(p)
    }

    pub fn extend(&self, tail: &[Selector]) -> Self {
        let mut p = self.0.clone();
        p.extend_from_slice(tail);
        Position(p)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn selectors(&self) -> &[Selector] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(s: &str) -> Option<Position> {
        let s = s.trim();
        if s.is_empty() || s == "root" {
            return Some(Position::root());
        }
        s.split('/')
            .map(Selector::from_name)
            .collect::<Option<Vec<_>>>()
            .map(Position)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.0.iter().map(|s| s.name()).collect()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, sel) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            f.write_str(sel.name())?;
        }
        Ok(())
    }
}

/// Which of the two term languages a value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Calculus {
    Natural,
    Vanilla,
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calculus::Natural => "natural",
            Calculus::Vanilla => "vanilla",
        })
    }
}

/// Structure shared by natural and vanilla terms.
pub trait Term: Clone + Eq + Hash + fmt::Display + fmt::Debug + Send + Sync + Sized {
    const CALCULUS: Calculus;

    fn free_vars(&self) -> BTreeSet<Var>;

    /// Every variable occurring in the term: free, bound, and binders.
    fn all_vars(&self) -> BTreeSet<Var>;

    /// Number of constructors.
    fn size(&self) -> usize;

    /// A representative of the α-class: binders renumbered in pre-order.
    fn canonical(&self) -> Self;

    fn alpha_eq(&self, other: &Self) -> bool {
        if self.size() != other.size() {
            return false;
        }
        self.canonical() == other.canonical()
    }

    fn is_value(&self) -> bool;

    /// Children in left-to-right order.
    fn children(&self) -> Vec<(Selector, &Self)>;

    /// The binder a selector passes under, if any.
    fn binder_for(&self, sel: Selector) -> Option<&Var>;

    fn child(&self, sel: Selector) -> Option<&Self> {
        self.children()
            .into_iter()
            .find(|(s, _)| *s == sel)
            .map(|(_, c)| c)
    }

    fn with_child(&self, sel: Selector, new: Self) -> Option<Self>;

    fn subterm(&self, pos: &Position) -> Option<&Self> {
        let mut cur = self;
        for &sel in pos.selectors() {
            cur = cur.child(sel)?;
        }
        Some(cur)
    }

    /// Capturing replacement of the sub-term at `pos`.
    fn replace_at(&self, pos: &Position, new: Self) -> Option<Self> {
        fn go<T: Term>(t: &T, path: &[Selector], new: T) -> Option<T> {
            match path.split_first() {
                None => Some(new),
                Some((&sel, rest)) => {
                    let c = t.child(sel)?;
                    let c2 = go(c, rest, new)?;
                    t.with_child(sel, c2)
                }
            }
        }
        go(self, pos.selectors(), new)
    }

    /// All positions in pre-order, children left to right.
    fn positions(&self) -> Vec<Position> {
        fn go<T: Term>(t: &T, cur: &mut Vec<Selector>, out: &mut Vec<Position>) {
            out.push(Position(cur.clone()));
            for (sel, c) in t.children() {
                cur.push(sel);
                go(c, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Variables bound by the binders crossed on the way to `pos`.
    fn binders_along(&self, pos: &Position) -> Option<Vec<Var>> {
        let mut cur = self;
        let mut out = Vec::new();
        for &sel in pos.selectors() {
            if let Some(b) = cur.binder_for(sel) {
                out.push(b.clone());
            }
            cur = cur.child(sel)?;
        }
        Some(out)
    }

    /// Renames free occurrences of `from` to `to`; `to` must not be captured,
    /// which holds when it is fresh for the term.
    fn rename_free(&self, from: &Var, to: &Var) -> Self;
}

/// Picks a base name for canonical binders that clashes with no free variable.
pub(crate) fn canonical_base(free: &BTreeSet<Var>) -> String {
    let mut base = String::from("_");
    while free.iter().any(|v| v.name() == base) {
        base.push('_');
    }
    base
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn position_text_round_trip() {
        let p = Position(vec![
            Selector::CutBody,
            Selector::SubtrContent,
            Selector::AppArg,
        ]);
        assert_eq!(p.to_string(), "cut-body/subtr-content/app-arg");
        assert_eq!(Position::parse(&p.to_string()), Some(p));
        assert_eq!(Position::parse("root"), Some(Position::root()));
        assert_eq!(Position::parse("nope"), None);
    }

    #[test]
    fn prefix() {
        let p = Position(vec![Selector::CutBody]);
        let q = p.child(Selector::LamBody);
        assert!(p.is_prefix_of(&q));
        assert!(!q.is_prefix_of(&p));
        assert!(Position::root().is_prefix_of(&p));
    }
}
