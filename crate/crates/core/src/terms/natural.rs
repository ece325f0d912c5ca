//! Natural λ-terms with explicit substitutions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::position::{canonical_base, Calculus, Selector, Term};
use super::{subst, Var};

/// `x | \x. t | t s | let x = s in t`.
///
/// `ESub(content, binder, body)` binds `binder` in `body` only.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum NaturalTerm {
    Var(Var),
    Lam(Var, Arc<NaturalTerm>),
    App(Arc<NaturalTerm>, Arc<NaturalTerm>),
    ESub(Arc<NaturalTerm>, Var, Arc<NaturalTerm>),
}

impl NaturalTerm {
    pub fn var(x: impl Into<Var>) -> Self {
        NaturalTerm::Var(x.into())
    }

    pub fn lam(x: impl Into<Var>, body: NaturalTerm) -> Self {
        NaturalTerm::Lam(x.into(), Arc::new(body))
    }

    pub fn app(f: NaturalTerm, a: NaturalTerm) -> Self {
        NaturalTerm::App(Arc::new(f), Arc::new(a))
    }

    pub fn esub(content: NaturalTerm, x: impl Into<Var>, body: NaturalTerm) -> Self {
        NaturalTerm::ESub(Arc::new(content), x.into(), Arc::new(body))
    }

    /// Number of application nodes.
    pub fn app_count(&self) -> usize {
        match self {
            NaturalTerm::Var(_) => 0,
            NaturalTerm::Lam(_, b) => b.app_count(),
            NaturalTerm::App(f, a) => 1 + f.app_count() + a.app_count(),
            NaturalTerm::ESub(c, _, b) => c.app_count() + b.app_count(),
        }
    }

    pub fn esub_count(&self) -> usize {
        match self {
            NaturalTerm::Var(_) => 0,
            NaturalTerm::Lam(_, b) => b.esub_count(),
            NaturalTerm::App(f, a) => f.esub_count() + a.esub_count(),
            NaturalTerm::ESub(c, _, b) => 1 + c.esub_count() + b.esub_count(),
        }
    }

    /// α-renames binders so that they are pairwise distinct and avoid both
    /// `avoid` and the free variables. Binders that already satisfy this keep
    /// their names.
    pub fn with_distinct_binders(&self, avoid: &BTreeSet<Var>) -> NaturalTerm {
        let mut used: BTreeSet<Var> = avoid.iter().cloned().chain(self.free_vars()).collect();
        let mut pool: BTreeSet<Var> = used.iter().cloned().chain(self.all_vars()).collect();
        self.distinct(&mut used, &mut pool)
    }

    fn distinct(&self, used: &mut BTreeSet<Var>, pool: &mut BTreeSet<Var>) -> NaturalTerm {
        match self {
            NaturalTerm::Var(_) => self.clone(),
            NaturalTerm::Lam(x, b) => {
                let (x, b) = claim(x, &**b, used, pool);
                NaturalTerm::Lam(x, Arc::new(b.distinct(used, pool)))
            }
            NaturalTerm::App(f, a) => NaturalTerm::App(
                Arc::new(f.distinct(used, pool)),
                Arc::new(a.distinct(used, pool)),
            ),
            NaturalTerm::ESub(c, x, b) => {
                let c = c.distinct(used, pool);
                let (x, b) = claim(x, &**b, used, pool);
                NaturalTerm::ESub(Arc::new(c), x, Arc::new(b.distinct(used, pool)))
            }
        }
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            NaturalTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            NaturalTerm::Lam(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            NaturalTerm::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            NaturalTerm::ESub(c, x, b) => {
                c.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn collect_all(&self, out: &mut BTreeSet<Var>) {
        match self {
            NaturalTerm::Var(x) => {
                out.insert(x.clone());
            }
            NaturalTerm::Lam(x, b) => {
                out.insert(x.clone());
                b.collect_all(out);
            }
            NaturalTerm::App(f, a) => {
                f.collect_all(out);
                a.collect_all(out);
            }
            NaturalTerm::ESub(c, x, b) => {
                out.insert(x.clone());
                c.collect_all(out);
                b.collect_all(out);
            }
        }
    }

    fn canon(&self, base: &str, env: &mut BTreeMap<Var, Vec<Var>>, next: &mut u32) -> NaturalTerm {
        match self {
            NaturalTerm::Var(x) => NaturalTerm::Var(
                env.get(x)
                    .and_then(|s| s.last())
                    .cloned()
                    .unwrap_or_else(|| x.clone()),
            ),
            NaturalTerm::Lam(x, b) => {
                let nx = bind(base, x, env, next);
                let nb = b.canon(base, env, next);
                unbind(x, env);
                NaturalTerm::Lam(nx, Arc::new(nb))
            }
            NaturalTerm::App(f, a) => {
                let nf = f.canon(base, env, next);
                let na = a.canon(base, env, next);
                NaturalTerm::App(Arc::new(nf), Arc::new(na))
            }
            NaturalTerm::ESub(c, x, b) => {
                let nx = next_binder(base, next);
                let nc = c.canon(base, env, next);
                env.entry(x.clone()).or_default().push(nx.clone());
                let nb = b.canon(base, env, next);
                unbind(x, env);
                NaturalTerm::ESub(Arc::new(nc), nx, Arc::new(nb))
            }
        }
    }
}

pub(crate) fn claim<T: Term>(
    x: &Var,
    body: &T,
    used: &mut BTreeSet<Var>,
    pool: &mut BTreeSet<Var>,
) -> (Var, T) {
    if used.insert(x.clone()) {
        pool.insert(x.clone());
        return (x.clone(), body.clone());
    }
    let x2 = x.renamed(pool);
    pool.insert(x2.clone());
    used.insert(x2.clone());
    let body = body.rename_free(x, &x2);
    (x2, body)
}

pub(crate) fn next_binder(base: &str, next: &mut u32) -> Var {
    *next += 1;
    Var::new(base, *next)
}

pub(crate) fn bind(base: &str, x: &Var, env: &mut BTreeMap<Var, Vec<Var>>, next: &mut u32) -> Var {
    let nx = next_binder(base, next);
    env.entry(x.clone()).or_default().push(nx.clone());
    nx
}

pub(crate) fn unbind(x: &Var, env: &mut BTreeMap<Var, Vec<Var>>) {
    if let Some(s) = env.get_mut(x) {
        s.pop();
        if s.is_empty() {
            env.remove(x);
        }
    }
}

impl Term for NaturalTerm {
    const CALCULUS: Calculus = Calculus::Natural;

    fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn size(&self) -> usize {
        match self {
            NaturalTerm::Var(_) => 1,
            NaturalTerm::Lam(_, b) => 1 + b.size(),
            NaturalTerm::App(f, a) => 1 + f.size() + a.size(),
            NaturalTerm::ESub(c, _, b) => 1 + c.size() + b.size(),
        }
    }

    fn canonical(&self) -> Self {
        let base = canonical_base(&self.free_vars());
        self.canon(&base, &mut BTreeMap::new(), &mut 0)
    }

    fn is_value(&self) -> bool {
        matches!(self, NaturalTerm::Var(_) | NaturalTerm::Lam(..))
    }

    fn children(&self) -> Vec<(Selector, &Self)> {
        match self {
            NaturalTerm::Var(_) => vec![],
            NaturalTerm::Lam(_, b) => vec![(Selector::LamBody, &**b)],
            NaturalTerm::App(f, a) => vec![(Selector::AppFun, &**f), (Selector::AppArg, &**a)],
            NaturalTerm::ESub(c, _, b) => {
                vec![(Selector::CutContent, &**c), (Selector::CutBody, &**b)]
            }
        }
    }

    fn binder_for(&self, sel: Selector) -> Option<&Var> {
        match (self, sel) {
            (NaturalTerm::Lam(x, _), Selector::LamBody) => Some(x),
            (NaturalTerm::ESub(_, x, _), Selector::CutBody) => Some(x),
            _ => None,
        }
    }

    fn with_child(&self, sel: Selector, new: Self) -> Option<Self> {
        let new = Arc::new(new);
        Some(match (self, sel) {
            (NaturalTerm::Lam(x, _), Selector::LamBody) => NaturalTerm::Lam(x.clone(), new),
            (NaturalTerm::App(_, a), Selector::AppFun) => NaturalTerm::App(new, a.clone()),
            (NaturalTerm::App(f, _), Selector::AppArg) => NaturalTerm::App(f.clone(), new),
            (NaturalTerm::ESub(_, x, b), Selector::CutContent) => {
                NaturalTerm::ESub(new, x.clone(), b.clone())
            }
            (NaturalTerm::ESub(c, x, _), Selector::CutBody) => {
                NaturalTerm::ESub(c.clone(), x.clone(), new)
            }
            _ => return None,
        })
    }

    fn rename_free(&self, from: &Var, to: &Var) -> Self {
        subst::subst_nd(self, from, &NaturalTerm::Var(to.clone()))
    }
}

impl fmt::Display for NaturalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NaturalTerm::Var(x) => write!(f, "{x}"),
            NaturalTerm::Lam(x, b) => write!(f, "\\{x}. {b}"),
            NaturalTerm::ESub(c, x, b) => {
                if matches!(**c, NaturalTerm::ESub(..)) {
                    write!(f, "let {x} = ({c}) in {b}")
                } else {
                    write!(f, "let {x} = {c} in {b}")
                }
            }
            NaturalTerm::App(fun, arg) => {
                match **fun {
                    NaturalTerm::Var(_) | NaturalTerm::App(..) => write!(f, "{fun}")?,
                    _ => write!(f, "({fun})")?,
                }
                match **arg {
                    NaturalTerm::Var(_) => write!(f, " {arg}"),
                    _ => write!(f, " ({arg})"),
                }
            }
        }
    }
}

impl fmt::Debug for NaturalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_natural;

    fn n(s: &str) -> NaturalTerm {
        parse_natural(s).unwrap()
    }

    fn vars(names: &[&str]) -> BTreeSet<Var> {
        names.iter().map(|s| Var::parse(s)).collect()
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(n(r"\x. x y").free_vars(), vars(&["y"]));
        assert_eq!(n("let x = x in x").free_vars(), vars(&["x"]));
    }

    #[test]
    fn alpha_examples() {
        assert!(n(r"\x. x").alpha_eq(&n(r"\y. y")));
        assert!(n("let x = z in x").alpha_eq(&n("let w = z in w")));
        assert!(!n(r"\x. y").alpha_eq(&n(r"\x. z")));
        // ES content is outside the binder's scope
        assert!(!n("let x = x in x").alpha_eq(&n("let y = x in x")));
        assert!(n(r"\x. \x. x").alpha_eq(&n(r"\y. \z. z")));
        assert!(!n(r"\x. \x. x").alpha_eq(&n(r"\y. \z. y")));
    }

    #[test]
    fn canonical_binders_do_not_capture_free_names() {
        let t = n(r"\x. _1");
        let c = t.canonical();
        assert_eq!(c.free_vars(), vars(&["_1"]));
        assert!(!t.alpha_eq(&n(r"\x. x")));
    }

    #[test]
    fn size_examples() {
        assert_eq!(n("x").size(), 1);
        assert_eq!(n(r"\x. x").size(), 2);
        assert_eq!(n(r"(\x. x) y").size(), 4);
    }

    #[test]
    fn printing() {
        assert_eq!(n(r"(\x. x) (y z) w").to_string(), r"(\x. x) (y z) w");
        assert_eq!(n("x (y z)").to_string(), "x (y z)");
        assert_eq!(
            n("let x = (let y = u in y) in x").to_string(),
            "let x = (let y = u in y) in x"
        );
    }
}
