//! Capture-avoiding meta-level substitution for both calculi.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use super::natural::NaturalTerm;
use super::position::Term;
use super::vanilla::VanillaTerm;
use super::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substituted term must be a value")]
    NotAValue,
}

/// `t{s/x}` on natural terms.
///
/// Binders of `t` that would capture a free variable of `s` are renamed.
/// When `x` is not free in `t` the result is `t` itself.
pub fn subst_nd(t: &NaturalTerm, x: &Var, s: &NaturalTerm) -> NaturalTerm {
    let fv_s = s.free_vars();
    go_nd(t, x, s, &fv_s)
}

fn go_nd(t: &NaturalTerm, x: &Var, s: &NaturalTerm, fv_s: &BTreeSet<Var>) -> NaturalTerm {
    if !t.free_vars().contains(x) {
        return t.clone();
    }
    match t {
        NaturalTerm::Var(y) => {
            if y == x {
                s.clone()
            } else {
                t.clone()
            }
        }
        NaturalTerm::Lam(y, b) => {
            let (y, b) = avoid_capture_nd(y, b, x, fv_s, s);
            NaturalTerm::Lam(y, Arc::new(go_nd(&b, x, s, fv_s)))
        }
        NaturalTerm::App(f, a) => NaturalTerm::App(
            Arc::new(go_nd(f, x, s, fv_s)),
            Arc::new(go_nd(a, x, s, fv_s)),
        ),
        NaturalTerm::ESub(c, y, b) => {
            let c2 = go_nd(c, x, s, fv_s);
            if y == x {
                return NaturalTerm::ESub(Arc::new(c2), y.clone(), b.clone());
            }
            let (y, b) = avoid_capture_nd(y, b, x, fv_s, s);
            NaturalTerm::ESub(Arc::new(c2), y, Arc::new(go_nd(&b, x, s, fv_s)))
        }
    }
}

// Lam(y, b) with y == x never reaches here: x would not be free.
fn avoid_capture_nd(
    y: &Var,
    b: &NaturalTerm,
    x: &Var,
    fv_s: &BTreeSet<Var>,
    s: &NaturalTerm,
) -> (Var, NaturalTerm) {
    if !fv_s.contains(y) {
        return (y.clone(), b.clone());
    }
    let mut avoid = b.all_vars();
    avoid.extend(s.all_vars());
    avoid.insert(x.clone());
    avoid.insert(y.clone());
    let y2 = y.renamed(&avoid);
    let b2 = b.rename_free(y, &y2);
    (y2, b2)
}

/// `{v/x}t` on vanilla terms, for a value `v`.
///
/// A variable `v` replaces both right and left occurrences of `x`. An
/// abstraction `\y. r` meeting a subtraction headed by `x` turns it into two
/// nested cuts: `let z = x @ s in t` becomes
/// `let z = (let y = {v/x}s in r) in {v/x}t`.
pub fn subst_value(v: &VanillaTerm, x: &Var, t: &VanillaTerm) -> Result<VanillaTerm, SubstError> {
    if !v.is_value() {
        return Err(SubstError::NotAValue);
    }
    let fv_v = v.free_vars();
    Ok(go_v(t, x, v, &fv_v))
}

fn go_v(t: &VanillaTerm, x: &Var, v: &VanillaTerm, fv_v: &BTreeSet<Var>) -> VanillaTerm {
    if !t.free_vars().contains(x) {
        return t.clone();
    }
    match t {
        VanillaTerm::Var(y) => {
            if y == x {
                v.clone()
            } else {
                t.clone()
            }
        }
        VanillaTerm::Lam(y, b) => {
            let (y, b) = avoid_capture_v(y, b, x, fv_v, v);
            VanillaTerm::Lam(y, Arc::new(go_v(&b, x, v, fv_v)))
        }
        VanillaTerm::Cut(c, y, b) => {
            let c2 = go_v(c, x, v, fv_v);
            if y == x {
                return VanillaTerm::Cut(Arc::new(c2), y.clone(), b.clone());
            }
            let (y, b) = avoid_capture_v(y, b, x, fv_v, v);
            VanillaTerm::Cut(Arc::new(c2), y, Arc::new(go_v(&b, x, v, fv_v)))
        }
        VanillaTerm::Subtr(h, c, z, b) => {
            let c2 = go_v(c, x, v, fv_v);
            let (z, b2) = if z == x {
                (z.clone(), (**b).clone())
            } else {
                let (z, b) = avoid_capture_v(z, b, x, fv_v, v);
                let b = go_v(&b, x, v, fv_v);
                (z, b)
            };
            if h != x {
                return VanillaTerm::Subtr(h.clone(), Arc::new(c2), z, Arc::new(b2));
            }
            match v {
                VanillaTerm::Var(w) => VanillaTerm::Subtr(w.clone(), Arc::new(c2), z, Arc::new(b2)),
                VanillaTerm::Lam(y, r) => VanillaTerm::Cut(
                    Arc::new(VanillaTerm::Cut(Arc::new(c2), y.clone(), r.clone())),
                    z,
                    Arc::new(b2),
                ),
                _ => unreachable!("checked to be a value"),
            }
        }
    }
}

fn avoid_capture_v(
    y: &Var,
    b: &VanillaTerm,
    x: &Var,
    fv_v: &BTreeSet<Var>,
    v: &VanillaTerm,
) -> (Var, VanillaTerm) {
    if !fv_v.contains(y) || !b.free_vars().contains(x) {
        return (y.clone(), b.clone());
    }
    let mut avoid = b.all_vars();
    avoid.extend(v.all_vars());
    avoid.insert(x.clone());
    avoid.insert(y.clone());
    let y2 = y.renamed(&avoid);
    let b2 = b.rename_free(y, &y2);
    (y2, b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{parse_natural, parse_vanilla};

    fn n(s: &str) -> NaturalTerm {
        parse_natural(s).unwrap()
    }

    fn v(s: &str) -> VanillaTerm {
        parse_vanilla(s).unwrap()
    }

    #[test]
    fn natural_examples() {
        let x = Var::parse("x");
        assert_eq!(subst_nd(&n("x y"), &x, &n("z")), n("z y"));
        assert_eq!(subst_nd(&n(r"\x. x"), &x, &n("z")), n(r"\x. x"));
        let r = subst_nd(&n(r"\y. x"), &x, &n("y w"));
        assert_eq!(r.to_string(), r"\y1. y w");
    }

    #[test]
    fn es_content_is_substituted_even_when_binder_shadows() {
        let x = Var::parse("x");
        assert_eq!(
            subst_nd(&n("let x = x in x"), &x, &n("z")),
            n("let x = z in x")
        );
    }

    #[test]
    fn value_clauses() {
        let x = Var::parse("x");
        assert_eq!(subst_value(&v(r"\a. a"), &x, &v("x")).unwrap(), v(r"\a. a"));
        assert_eq!(subst_value(&v("z"), &x, &v("y")).unwrap(), v("y"));
        assert_eq!(
            subst_value(&v("z"), &x, &v("let w = x @ y in w")).unwrap(),
            v("let w = z @ y in w")
        );
        assert_eq!(
            subst_value(&v(r"\y. y"), &x, &v("let w = x @ u in w")).unwrap(),
            v("let w = (let y = u in y) in w")
        );
        assert_eq!(
            subst_value(&v("z"), &x, &v("let w = y @ x in let a = x in a")).unwrap(),
            v("let w = y @ z in let a = z in a")
        );
    }

    #[test]
    fn non_value_is_rejected() {
        let e = subst_value(&v("let a = b in a"), &Var::parse("x"), &v("x")).unwrap_err();
        assert_eq!(e.to_string(), "substituted term must be a value");
    }

    #[test]
    fn value_substitution_avoids_capture() {
        let x = Var::parse("x");
        let r = subst_value(&v("y"), &x, &v(r"\y. x")).unwrap();
        assert!(r.alpha_eq(&v(r"\a. y")));
        let r = subst_value(&v("y"), &x, &v("let y = u @ x in x")).unwrap();
        assert!(r.alpha_eq(&v("let a = u @ y in y")));
    }
}
