//! First-order unification over formulas with metavariables.

use std::fmt;
use std::sync::Arc;

use super::Formula;

#[derive(Clone, PartialEq, Eq)]
pub(crate) enum Ty {
    Meta(usize),
    Atom(Arc<str>),
    Imp(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub(crate) fn imp(a: Ty, b: Ty) -> Ty {
        Ty::Imp(Box::new(a), Box::new(b))
    }

    pub(crate) fn from_formula(f: &Formula) -> Ty {
        match f {
            Formula::Atom(a) => Ty::Atom(a.clone()),
            Formula::Imp(a, b) => Ty::imp(Ty::from_formula(a), Ty::from_formula(b)),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Meta(m) => write!(f, "?{m}"),
            Ty::Atom(a) => f.write_str(a),
            Ty::Imp(a, b) => match **a {
                Ty::Imp(..) => write!(f, "({a}) -> {b}"),
                _ => write!(f, "{a} -> {b}"),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum UnifyFail {
    Occurs,
    Clash,
}

#[derive(Default)]
pub(crate) struct Unifier {
    slots: Vec<Option<Ty>>,
}

impl Unifier {
    pub(crate) fn fresh(&mut self) -> Ty {
        self.slots.push(None);
        Ty::Meta(self.slots.len() - 1)
    }

    /// Follows meta bindings at the head only.
    pub(crate) fn shallow(&self, t: &Ty) -> Ty {
        let mut cur = t.clone();
        while let Ty::Meta(m) = cur {
            match &self.slots[m] {
                Some(next) => cur = next.clone(),
                None => return Ty::Meta(m),
            }
        }
        cur
    }

    pub(crate) fn resolve(&self, t: &Ty) -> Ty {
        match self.shallow(t) {
            Ty::Imp(a, b) => Ty::imp(self.resolve(&a), self.resolve(&b)),
            other => other,
        }
    }

    fn occurs(&self, m: usize, t: &Ty) -> bool {
        match self.shallow(t) {
            Ty::Meta(n) => n == m,
            Ty::Atom(_) => false,
            Ty::Imp(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
        }
    }

    pub(crate) fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), UnifyFail> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (a, b) {
            (Ty::Meta(m), Ty::Meta(n)) if m == n => Ok(()),
            (Ty::Meta(m), t) | (t, Ty::Meta(m)) => {
                if self.occurs(m, &t) {
                    return Err(UnifyFail::Occurs);
                }
                self.slots[m] = Some(t);
                Ok(())
            }
            (Ty::Atom(x), Ty::Atom(y)) => {
                if x == y {
                    Ok(())
                } else {
                    Err(UnifyFail::Clash)
                }
            }
            (Ty::Imp(a1, b1), Ty::Imp(a2, b2)) => {
                self.unify(&a1, &a2)?;
                self.unify(&b1, &b2)
            }
            _ => Err(UnifyFail::Clash),
        }
    }

    /// Resolves and replaces every remaining meta through `name`.
    pub(crate) fn ground(&self, t: &Ty, name: &mut impl FnMut(usize) -> Formula) -> Formula {
        match self.resolve(t) {
            Ty::Meta(m) => name(m),
            Ty::Atom(a) => Formula::Atom(a),
            Ty::Imp(a, b) => Formula::imp(self.ground(&a, name), self.ground(&b, name)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unify_binds_and_detects_cycles() {
        let mut u = Unifier::default();
        let a = u.fresh();
        let b = u.fresh();
        u.unify(&a, &Ty::imp(b.clone(), Ty::Atom("X".into())))
            .unwrap();
        u.unify(&b, &Ty::Atom("Y".into())).unwrap();
        assert_eq!(u.resolve(&a).to_string(), "Y -> X");
        let c = u.fresh();
        assert_eq!(
            u.unify(&c, &Ty::imp(c.clone(), c.clone())),
            Err(UnifyFail::Occurs)
        );
        assert_eq!(
            u.unify(&Ty::Atom("X".into()), &Ty::Atom("Y".into())),
            Err(UnifyFail::Clash)
        );
    }
}
