//! Left contexts: stacks of cut and subtraction frames around a hole.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::natural::NaturalTerm;
use super::position::{Selector, Term};
use super::vanilla::VanillaTerm;
use super::Var;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Frame {
    Cut(VanillaTerm, Var),
    Subtr(Var, VanillaTerm, Var),
}

impl Frame {
    pub fn binder(&self) -> &Var {
        match self {
            Frame::Cut(_, x) | Frame::Subtr(_, _, x) => x,
        }
    }

    /// Selector leading from the frame's node into the hole side.
    pub fn body_selector(&self) -> Selector {
        match self {
            Frame::Cut(..) => Selector::CutBody,
            Frame::Subtr(..) => Selector::SubtrBody,
        }
    }

    fn wrap(&self, body: VanillaTerm) -> VanillaTerm {
        match self {
            Frame::Cut(c, x) => VanillaTerm::Cut(Arc::new(c.clone()), x.clone(), Arc::new(body)),
            Frame::Subtr(y, c, x) => {
                VanillaTerm::Subtr(y.clone(), Arc::new(c.clone()), x.clone(), Arc::new(body))
            }
        }
    }
}

/// A vanilla left context. The first frame is outermost.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LeftCtx(pub Vec<Frame>);

impl LeftCtx {
    pub fn empty() -> Self {
        LeftCtx(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.0
    }

    pub fn binders(&self) -> Vec<Var> {
        self.0.iter().map(|f| f.binder().clone()).collect()
    }

    /// Path from the outermost frame to the hole.
    pub fn hole_path(&self) -> Vec<Selector> {
        self.0.iter().map(Frame::body_selector).collect()
    }
}

/// A natural substitution context: explicit substitutions only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SubstCtx(pub Vec<(NaturalTerm, Var)>);

impl SubstCtx {
    pub fn empty() -> Self {
        SubstCtx(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn binders(&self) -> Vec<Var> {
        self.0.iter().map(|(_, x)| x.clone()).collect()
    }
}

/// Plugs `t` into the hole. Capturing.
pub fn plug(l: &LeftCtx, t: VanillaTerm) -> VanillaTerm {
    l.0.iter().rev().fold(t, |acc, f| f.wrap(acc))
}

pub fn plug_natural(l: &SubstCtx, t: NaturalTerm) -> NaturalTerm {
    l.0.iter().rev().fold(t, |acc, (c, x)| {
        NaturalTerm::ESub(Arc::new(c.clone()), x.clone(), Arc::new(acc))
    })
}

/// The unique decomposition `t = L<v>` with `v` a value.
pub fn split(t: &VanillaTerm) -> (LeftCtx, VanillaTerm) {
    let mut frames = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            VanillaTerm::Var(_) | VanillaTerm::Lam(..) => return (LeftCtx(frames), cur.clone()),
            VanillaTerm::Cut(c, x, b) => {
                frames.push(Frame::Cut((**c).clone(), x.clone()));
                cur = b;
            }
            VanillaTerm::Subtr(y, c, x, b) => {
                frames.push(Frame::Subtr(y.clone(), (**c).clone(), x.clone()));
                cur = b;
            }
        }
    }
}

/// Peels explicit substitutions: `t = L<u>` with `u` not an ES.
pub fn split_natural(t: &NaturalTerm) -> (SubstCtx, NaturalTerm) {
    let mut frames = Vec::new();
    let mut cur = t;
    while let NaturalTerm::ESub(c, x, b) = cur {
        frames.push(((**c).clone(), x.clone()));
        cur = b;
    }
    (SubstCtx(frames), cur.clone())
}

/// `t = L<v>` with `v` a natural value, if such a split exists.
pub fn split_natural_value(t: &NaturalTerm) -> Option<(SubstCtx, NaturalTerm)> {
    let (l, u) = split_natural(t);
    u.is_value().then_some((l, u))
}

/// Renames the binders of the left spine of `t` that occur in `avoid`, so
/// that plugging another term under the spine cannot capture those names.
pub fn freshen_spine_vanilla(t: &VanillaTerm, avoid: &BTreeSet<Var>) -> VanillaTerm {
    let mut all = t.all_vars();
    all.extend(avoid.iter().cloned());
    go_spine_v(t, avoid, &mut all)
}

fn go_spine_v(t: &VanillaTerm, avoid: &BTreeSet<Var>, all: &mut BTreeSet<Var>) -> VanillaTerm {
    match t {
        VanillaTerm::Var(_) | VanillaTerm::Lam(..) => t.clone(),
        VanillaTerm::Cut(c, x, b) => {
            let (x, b) = rebind_v(x, b, avoid, all);
            VanillaTerm::Cut(c.clone(), x, Arc::new(go_spine_v(&b, avoid, all)))
        }
        VanillaTerm::Subtr(y, c, x, b) => {
            let (x, b) = rebind_v(x, b, avoid, all);
            VanillaTerm::Subtr(
                y.clone(),
                c.clone(),
                x,
                Arc::new(go_spine_v(&b, avoid, all)),
            )
        }
    }
}

fn rebind_v(
    x: &Var,
    b: &VanillaTerm,
    avoid: &BTreeSet<Var>,
    all: &mut BTreeSet<Var>,
) -> (Var, VanillaTerm) {
    if !avoid.contains(x) {
        return (x.clone(), b.clone());
    }
    let x2 = x.renamed(all);
    all.insert(x2.clone());
    let b2 = b.rename_free(x, &x2);
    (x2, b2)
}

pub fn freshen_spine_natural(t: &NaturalTerm, avoid: &BTreeSet<Var>) -> NaturalTerm {
    let mut all = t.all_vars();
    all.extend(avoid.iter().cloned());
    go_spine_n(t, avoid, &mut all)
}

fn go_spine_n(t: &NaturalTerm, avoid: &BTreeSet<Var>, all: &mut BTreeSet<Var>) -> NaturalTerm {
    match t {
        NaturalTerm::ESub(c, x, b) => {
            let (x, b) = if avoid.contains(x) {
                let x2 = x.renamed(all);
                all.insert(x2.clone());
                let b2 = b.rename_free(x, &x2);
                (x2, b2)
            } else {
                (x.clone(), (**b).clone())
            };
            NaturalTerm::ESub(c.clone(), x, Arc::new(go_spine_n(&b, avoid, all)))
        }
        _ => t.clone(),
    }
}

/// Brute-force decomposition oracle, independent of `split`: every position
/// of `t` whose enclosing context is a left context and whose sub-term is a
/// value gives one decomposition.
pub fn all_decompositions(t: &VanillaTerm) -> Vec<(LeftCtx, VanillaTerm)> {
    let mut out = Vec::new();
    for pos in t.positions() {
        let sub = t.subterm(&pos).expect("position comes from t");
        if !sub.is_value() {
            continue;
        }
        let mut frames = Vec::new();
        let mut cur = t;
        let mut is_left = true;
        for &sel in pos.selectors() {
            match (cur, sel) {
                (VanillaTerm::Cut(c, x, _), Selector::CutBody) => {
                    frames.push(Frame::Cut((**c).clone(), x.clone()))
                }
                (VanillaTerm::Subtr(y, c, x, _), Selector::SubtrBody) => {
                    frames.push(Frame::Subtr(y.clone(), (**c).clone(), x.clone()))
                }
                _ => {
                    is_left = false;
                    break;
                }
            }
            cur = cur.child(sel).expect("valid path");
        }
        if is_left {
            out.push((LeftCtx(frames), sub.clone()));
        }
    }
    out
}

#[derive(Serialize)]
struct FrameJson {
    kind: &'static str,
    head: Option<String>,
    content: String,
    binder: String,
}

impl LeftCtx {
    pub fn to_json(&self) -> serde_json::Value {
        let frames: Vec<FrameJson> = self
            .0
            .iter()
            .map(|f| match f {
                Frame::Cut(c, x) => FrameJson {
                    kind: "cut",
                    head: None,
                    content: c.to_string(),
                    binder: x.to_string(),
                },
                Frame::Subtr(y, c, x) => FrameJson {
                    kind: "subtr",
                    head: Some(y.to_string()),
                    content: c.to_string(),
                    binder: x.to_string(),
                },
            })
            .collect();
        serde_json::to_value(frames).expect("frames serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_vanilla;

    fn v(s: &str) -> VanillaTerm {
        parse_vanilla(s).unwrap()
    }

    #[test]
    fn split_examples() {
        let (l, val) = split(&v(r"\x. x"));
        assert!(l.is_empty());
        assert_eq!(val, v(r"\x. x"));

        let (l, val) = split(&v("let x = s in let y = z @ u in w"));
        assert_eq!(
            l.0,
            vec![
                Frame::Cut(v("s"), Var::parse("x")),
                Frame::Subtr(Var::parse("z"), v("u"), Var::parse("y")),
            ]
        );
        assert_eq!(val, v("w"));
    }

    #[test]
    fn plug_examples() {
        assert_eq!(plug(&LeftCtx::empty(), v("t")), v("t"));
        let l = LeftCtx(vec![Frame::Cut(v("y"), Var::parse("x"))]);
        assert_eq!(plug(&l, v("x")), v("let x = y in x"));
        let t = v(r"let x = y in \z. z");
        let (l, val) = split(&t);
        assert_eq!(plug(&l, val), t);
    }

    #[test]
    fn spine_freshening_renames_only_clashing_binders() {
        let t = v("let x = a in let y = b @ x in y");
        let avoid: BTreeSet<Var> = [Var::parse("y")].into_iter().collect();
        let f = freshen_spine_vanilla(&t, &avoid);
        assert_eq!(f, v("let x = a in let y1 = b @ x in y1"));
    }
}
