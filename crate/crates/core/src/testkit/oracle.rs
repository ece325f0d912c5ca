//! Reference substitution: rename every binder apart first, then apply the
//! defining clauses without any capture checks.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::terms::{AnyTerm, Calculus, NaturalTerm, Term, VanillaTerm, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("substituted term must be a value")]
    NotAValue,
    #[error("cannot substitute a {found} term into a {expected} term")]
    CalculusMismatch { expected: Calculus, found: Calculus },
}

struct Renamer {
    avoid: BTreeSet<Var>,
    next: u32,
}

impl Renamer {
    fn new(avoid: BTreeSet<Var>) -> Self {
        Renamer { avoid, next: 0 }
    }

    fn fresh(&mut self) -> Var {
        loop {
            self.next += 1;
            let v = Var::new("o", self.next);
            if !self.avoid.contains(&v) {
                return v;
            }
        }
    }

    fn with<T>(
        &mut self,
        env: &mut HashMap<Var, Vec<Var>>,
        x: &Var,
        f: impl FnOnce(&mut Self, &mut HashMap<Var, Vec<Var>>, Var) -> T,
    ) -> T {
        let y = self.fresh();
        env.entry(x.clone()).or_default().push(y.clone());
        let out = f(self, env, y);
        env.get_mut(x).expect("pushed").pop();
        out
    }

    fn look(env: &HashMap<Var, Vec<Var>>, x: &Var) -> Var {
        env.get(x)
            .and_then(|s| s.last())
            .cloned()
            .unwrap_or_else(|| x.clone())
    }

    fn natural(&mut self, t: &NaturalTerm, env: &mut HashMap<Var, Vec<Var>>) -> NaturalTerm {
        match t {
            NaturalTerm::Var(x) => NaturalTerm::var(Self::look(env, x)),
            NaturalTerm::Lam(x, b) => {
                self.with(env, x, |r, env, y| NaturalTerm::lam(y, r.natural(b, env)))
            }
            NaturalTerm::App(f, a) => NaturalTerm::app(self.natural(f, env), self.natural(a, env)),
            NaturalTerm::ESub(c, x, b) => {
                let c = self.natural(c, env);
                self.with(env, x, |r, env, y| {
                    NaturalTerm::esub(c, y, r.natural(b, env))
                })
            }
        }
    }

    fn vanilla(&mut self, t: &VanillaTerm, env: &mut HashMap<Var, Vec<Var>>) -> VanillaTerm {
        match t {
            VanillaTerm::Var(x) => VanillaTerm::var(Self::look(env, x)),
            VanillaTerm::Lam(x, b) => {
                self.with(env, x, |r, env, y| VanillaTerm::lam(y, r.vanilla(b, env)))
            }
            VanillaTerm::Cut(c, x, b) => {
                let c = self.vanilla(c, env);
                self.with(env, x, |r, env, y| {
                    VanillaTerm::cut(c, y, r.vanilla(b, env))
                })
            }
            VanillaTerm::Subtr(h, c, x, b) => {
                let h = Self::look(env, h);
                let c = self.vanilla(c, env);
                self.with(env, x, |r, env, y| {
                    VanillaTerm::subtr(h, c, y, r.vanilla(b, env))
                })
            }
        }
    }
}

fn avoid_set<T: Term>(t: &T, x: &Var, s: &T) -> BTreeSet<Var> {
    let mut a = t.all_vars();
    a.extend(s.all_vars());
    a.insert(x.clone());
    a
}

/// Textbook substitution of any natural term.
pub fn oracle_subst_nd(t: &NaturalTerm, x: &Var, s: &NaturalTerm) -> NaturalTerm {
    let t = Renamer::new(avoid_set(t, x, s)).natural(t, &mut HashMap::new());
    go_nd(&t, x, s)
}

fn go_nd(t: &NaturalTerm, x: &Var, s: &NaturalTerm) -> NaturalTerm {
    match t {
        NaturalTerm::Var(y) if y == x => s.clone(),
        NaturalTerm::Var(_) => t.clone(),
        NaturalTerm::Lam(y, b) => NaturalTerm::lam(y.clone(), go_nd(b, x, s)),
        NaturalTerm::App(f, a) => NaturalTerm::app(go_nd(f, x, s), go_nd(a, x, s)),
        NaturalTerm::ESub(c, y, b) => NaturalTerm::esub(go_nd(c, x, s), y.clone(), go_nd(b, x, s)),
    }
}

/// Value substitution for vanilla terms, clause by clause.
pub fn oracle_subst_value(
    v: &VanillaTerm,
    x: &Var,
    t: &VanillaTerm,
) -> Result<VanillaTerm, OracleError> {
    if !v.is_value() {
        return Err(OracleError::NotAValue);
    }
    if !t.free_vars().contains(x) {
        return Ok(t.clone());
    }
    let t = Renamer::new(avoid_set(t, x, v)).vanilla(t, &mut HashMap::new());
    Ok(go_sc(&t, x, v))
}

fn go_sc(t: &VanillaTerm, x: &Var, v: &VanillaTerm) -> VanillaTerm {
    match t {
        VanillaTerm::Var(y) if y == x => v.clone(),
        VanillaTerm::Var(_) => t.clone(),
        VanillaTerm::Lam(y, b) => VanillaTerm::lam(y.clone(), go_sc(b, x, v)),
        VanillaTerm::Cut(c, y, b) => VanillaTerm::cut(go_sc(c, x, v), y.clone(), go_sc(b, x, v)),
        VanillaTerm::Subtr(h, c, z, b) if h == x => match v {
            VanillaTerm::Var(y) => {
                VanillaTerm::subtr(y.clone(), go_sc(c, x, v), z.clone(), go_sc(b, x, v))
            }
            VanillaTerm::Lam(y, r) => VanillaTerm::cut(
                VanillaTerm::cut(go_sc(c, x, v), y.clone(), (**r).clone()),
                z.clone(),
                go_sc(b, x, v),
            ),
            _ => unreachable!("checked to be a value"),
        },
        VanillaTerm::Subtr(h, c, z, b) => {
            VanillaTerm::subtr(h.clone(), go_sc(c, x, v), z.clone(), go_sc(b, x, v))
        }
    }
}

/// `t{s/x}` in either calculus.
pub fn oracle_subst(
    calculus: Calculus,
    t: &AnyTerm,
    x: &Var,
    s: &AnyTerm,
) -> Result<AnyTerm, OracleError> {
    match (t, s) {
        (AnyTerm::Natural(t), AnyTerm::Natural(s)) if calculus == Calculus::Natural => {
            Ok(AnyTerm::Natural(oracle_subst_nd(t, x, s)))
        }
        (AnyTerm::Vanilla(t), AnyTerm::Vanilla(s)) if calculus == Calculus::Vanilla => {
            oracle_subst_value(s, x, t).map(AnyTerm::Vanilla)
        }
        _ => {
            let found = if t.calculus() != calculus {
                t.calculus()
            } else {
                s.calculus()
            };
            Err(OracleError::CalculusMismatch {
                expected: calculus,
                found,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{parse_natural, parse_vanilla, subst_nd, subst_value};

    #[test]
    fn agrees_on_the_abstraction_clause() {
        let v = parse_vanilla(r"\y. y").unwrap();
        let t = parse_vanilla("let z = x @ u in z").unwrap();
        let x = Var::from("x");
        let o = oracle_subst_value(&v, &x, &t).unwrap();
        assert!(o.alpha_eq(&subst_value(&v, &x, &t).unwrap()));
        assert!(o.alpha_eq(&parse_vanilla(r"let z = (let y = u in y) in z").unwrap()));
    }

    #[test]
    fn vacuous_is_identity() {
        let t = parse_vanilla(r"\x. let z = y @ x in z").unwrap();
        let v = parse_vanilla("w").unwrap();
        assert_eq!(oracle_subst_value(&v, &"x".into(), &t).unwrap(), t);
    }

    #[test]
    fn natural_capture() {
        let t = parse_natural(r"\y. x y").unwrap();
        let s = parse_natural("y").unwrap();
        let x = Var::from("x");
        assert!(oracle_subst_nd(&t, &x, &s).alpha_eq(&subst_nd(&t, &x, &s)));
        assert!(oracle_subst_nd(&t, &x, &s).alpha_eq(&parse_natural(r"\z. y z").unwrap()));
    }

    #[test]
    fn rejects_non_values() {
        let t = parse_vanilla("x").unwrap();
        let s = parse_vanilla("let z = y in z").unwrap();
        assert_eq!(
            oracle_subst_value(&s, &"x".into(), &t),
            Err(OracleError::NotAValue)
        );
    }
}
