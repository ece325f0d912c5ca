//! Vanilla λ-terms: proof terms of the plain sequent calculus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::natural::{bind, claim, next_binder, unbind};
use super::position::{canonical_base, Calculus, Selector, Term};
use super::{subst, Var};

/// `x | \x. t | let x = s in t | let x = y @ s in t`.
///
/// `Cut(content, binder, body)` and `Subtr(head, content, binder, body)` bind
/// `binder` in `body` only. The head of a subtraction is a free occurrence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum VanillaTerm {
    Var(Var),
    Lam(Var, Arc<VanillaTerm>),
    Cut(Arc<VanillaTerm>, Var, Arc<VanillaTerm>),
    Subtr(Var, Arc<VanillaTerm>, Var, Arc<VanillaTerm>),
}

impl VanillaTerm {
    pub fn var(x: impl Into<Var>) -> Self {
        VanillaTerm::Var(x.into())
    }

    pub fn lam(x: impl Into<Var>, body: VanillaTerm) -> Self {
        VanillaTerm::Lam(x.into(), Arc::new(body))
    }

    pub fn cut(content: VanillaTerm, x: impl Into<Var>, body: VanillaTerm) -> Self {
        VanillaTerm::Cut(Arc::new(content), x.into(), Arc::new(body))
    }

    pub fn subtr(
        head: impl Into<Var>,
        content: VanillaTerm,
        x: impl Into<Var>,
        body: VanillaTerm,
    ) -> Self {
        VanillaTerm::Subtr(head.into(), Arc::new(content), x.into(), Arc::new(body))
    }

    pub fn cut_count(&self) -> usize {
        match self {
            VanillaTerm::Var(_) => 0,
            VanillaTerm::Lam(_, b) => b.cut_count(),
            VanillaTerm::Cut(c, _, b) => 1 + c.cut_count() + b.cut_count(),
            VanillaTerm::Subtr(_, c, _, b) => c.cut_count() + b.cut_count(),
        }
    }

    pub fn subtr_count(&self) -> usize {
        match self {
            VanillaTerm::Var(_) => 0,
            VanillaTerm::Lam(_, b) => b.subtr_count(),
            VanillaTerm::Cut(c, _, b) => c.subtr_count() + b.subtr_count(),
            VanillaTerm::Subtr(_, c, _, b) => 1 + c.subtr_count() + b.subtr_count(),
        }
    }

    pub fn is_cut_free(&self) -> bool {
        self.cut_count() == 0
    }

    /// α-renames binders so that they are pairwise distinct and avoid both
    /// `avoid` and the free variables. Binders that already satisfy this keep
    /// their names.
    pub fn with_distinct_binders(&self, avoid: &BTreeSet<Var>) -> VanillaTerm {
        let mut used: BTreeSet<Var> = avoid.iter().cloned().chain(self.free_vars()).collect();
        let mut pool: BTreeSet<Var> = used.iter().cloned().chain(self.all_vars()).collect();
        self.distinct(&mut used, &mut pool)
    }

    fn distinct(&self, used: &mut BTreeSet<Var>, pool: &mut BTreeSet<Var>) -> VanillaTerm {
        match self {
            VanillaTerm::Var(_) => self.clone(),
            VanillaTerm::Lam(x, b) => {
                let (x, b) = claim(x, &**b, used, pool);
                VanillaTerm::Lam(x, Arc::new(b.distinct(used, pool)))
            }
            VanillaTerm::Cut(c, x, b) => {
                let c = c.distinct(used, pool);
                let (x, b) = claim(x, &**b, used, pool);
                VanillaTerm::Cut(Arc::new(c), x, Arc::new(b.distinct(used, pool)))
            }
            VanillaTerm::Subtr(y, c, x, b) => {
                let c = c.distinct(used, pool);
                let (x, b) = claim(x, &**b, used, pool);
                VanillaTerm::Subtr(y.clone(), Arc::new(c), x, Arc::new(b.distinct(used, pool)))
            }
        }
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            VanillaTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            VanillaTerm::Lam(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            VanillaTerm::Cut(c, x, b) => {
                c.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            VanillaTerm::Subtr(y, c, x, b) => {
                if !bound.contains(y) {
                    out.insert(y.clone());
                }
                c.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn collect_all(&self, out: &mut BTreeSet<Var>) {
        match self {
            VanillaTerm::Var(x) => {
                out.insert(x.clone());
            }
            VanillaTerm::Lam(x, b) => {
                out.insert(x.clone());
                b.collect_all(out);
            }
            VanillaTerm::Cut(c, x, b) => {
                out.insert(x.clone());
                c.collect_all(out);
                b.collect_all(out);
            }
            VanillaTerm::Subtr(y, c, x, b) => {
                out.insert(y.clone());
                out.insert(x.clone());
                c.collect_all(out);
                b.collect_all(out);
            }
        }
    }

    fn canon(&self, base: &str, env: &mut BTreeMap<Var, Vec<Var>>, next: &mut u32) -> VanillaTerm {
        let look = |x: &Var, env: &BTreeMap<Var, Vec<Var>>| {
            env.get(x)
                .and_then(|s| s.last())
                .cloned()
                .unwrap_or_else(|| x.clone())
        };
        match self {
            VanillaTerm::Var(x) => VanillaTerm::Var(look(x, env)),
            VanillaTerm::Lam(x, b) => {
                let nx = bind(base, x, env, next);
                let nb = b.canon(base, env, next);
                unbind(x, env);
                VanillaTerm::Lam(nx, Arc::new(nb))
            }
            VanillaTerm::Cut(c, x, b) => {
                let nx = next_binder(base, next);
                let nc = c.canon(base, env, next);
                env.entry(x.clone()).or_default().push(nx.clone());
                let nb = b.canon(base, env, next);
                unbind(x, env);
                VanillaTerm::Cut(Arc::new(nc), nx, Arc::new(nb))
            }
            VanillaTerm::Subtr(y, c, x, b) => {
                let ny = look(y, env);
                let nx = next_binder(base, next);
                let nc = c.canon(base, env, next);
                env.entry(x.clone()).or_default().push(nx.clone());
                let nb = b.canon(base, env, next);
                unbind(x, env);
                VanillaTerm::Subtr(ny, Arc::new(nc), nx, Arc::new(nb))
            }
        }
    }
}

impl Term for VanillaTerm {
    const CALCULUS: Calculus = Calculus::Vanilla;

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
            VanillaTerm::Var(_) => 1,
            VanillaTerm::Lam(_, b) => 1 + b.size(),
            VanillaTerm::Cut(c, _, b) | VanillaTerm::Subtr(_, c, _, b) => 1 + c.size() + b.size(),
        }
    }

    fn canonical(&self) -> Self {
        let base = canonical_base(&self.free_vars());
        self.canon(&base, &mut BTreeMap::new(), &mut 0)
    }

    fn is_value(&self) -> bool {
        matches!(self, VanillaTerm::Var(_) | VanillaTerm::Lam(..))
    }

    fn children(&self) -> Vec<(Selector, &Self)> {
        match self {
            VanillaTerm::Var(_) => vec![],
            VanillaTerm::Lam(_, b) => vec![(Selector::LamBody, &**b)],
            VanillaTerm::Cut(c, _, b) => {
                vec![(Selector::CutContent, &**c), (Selector::CutBody, &**b)]
            }
            VanillaTerm::Subtr(_, c, _, b) => {
                vec![(Selector::SubtrContent, &**c), (Selector::SubtrBody, &**b)]
            }
        }
    }

    fn binder_for(&self, sel: Selector) -> Option<&Var> {
        match (self, sel) {
            (VanillaTerm::Lam(x, _), Selector::LamBody) => Some(x),
            (VanillaTerm::Cut(_, x, _), Selector::CutBody) => Some(x),
            (VanillaTerm::Subtr(_, _, x, _), Selector::SubtrBody) => Some(x),
            _ => None,
        }
    }

    fn with_child(&self, sel: Selector, new: Self) -> Option<Self> {
        let new = Arc::new(new);
        Some(match (self, sel) {
            (VanillaTerm::Lam(x, _), Selector::LamBody) => VanillaTerm::Lam(x.clone(), new),
            (VanillaTerm::Cut(_, x, b), Selector::CutContent) => {
                VanillaTerm::Cut(new, x.clone(), b.clone())
            }
            (VanillaTerm::Cut(c, x, _), Selector::CutBody) => {
                VanillaTerm::Cut(c.clone(), x.clone(), new)
            }
            (VanillaTerm::Subtr(y, _, x, b), Selector::SubtrContent) => {
                VanillaTerm::Subtr(y.clone(), new, x.clone(), b.clone())
            }
            (VanillaTerm::Subtr(y, c, x, _), Selector::SubtrBody) => {
                VanillaTerm::Subtr(y.clone(), c.clone(), x.clone(), new)
            }
            _ => return None,
        })
    }

    fn rename_free(&self, from: &Var, to: &Var) -> Self {
        subst::subst_value(&VanillaTerm::Var(to.clone()), from, self)
            .expect("a variable is a value")
    }
}

impl fmt::Display for VanillaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rhs = |c: &VanillaTerm, f: &mut fmt::Formatter<'_>| {
            if c.is_value() {
                write!(f, "{c}")
            } else {
                write!(f, "({c})")
            }
        };
        match self {
            VanillaTerm::Var(x) => write!(f, "{x}"),
            VanillaTerm::Lam(x, b) => write!(f, "\\{x}. {b}"),
            VanillaTerm::Cut(c, x, b) => {
                write!(f, "let {x} = ")?;
                rhs(c, f)?;
                write!(f, " in {b}")
            }
            VanillaTerm::Subtr(y, c, x, b) => {
                write!(f, "let {x} = {y} @ ")?;
                rhs(c, f)?;
                write!(f, " in {b}")
            }
        }
    }
}

impl fmt::Debug for VanillaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}
