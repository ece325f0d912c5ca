//! Checking and inference. Both run one unification pass over the whole
//! term, with metavariables for binder and cut formulas, and then read the
//! derivation off the solved types.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::terms::{AnyTerm, Calculus, NaturalTerm, Position, Selector, VanillaTerm, Var};

use super::derivation::{Derivation, Rule};
use super::unify::{Ty, Unifier, UnifyFail};
use super::{Formula, TypeCtx, TypeError};

#[derive(Default)]
struct Gen {
    u: Unifier,
    base: BTreeMap<Var, Ty>,
    scope: Vec<(Var, Ty)>,
    types: HashMap<Position, Ty>,
}

impl Gen {
    fn lookup(&self, x: &Var, pos: &Position) -> Result<Ty, TypeError> {
        self.scope
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, t)| t.clone())
            .or_else(|| self.base.get(x).cloned())
            .ok_or_else(|| TypeError::UnboundVariable {
                var: x.clone(),
                position: pos.clone(),
            })
    }

    fn unify_at(&mut self, expected: &Ty, found: &Ty, pos: &Position) -> Result<(), TypeError> {
        self.u.unify(expected, found).map_err(|e| match e {
            UnifyFail::Occurs => TypeError::OccursCheck {
                position: pos.clone(),
            },
            UnifyFail::Clash => TypeError::TypeMismatch {
                expected: self.u.resolve(expected).to_string(),
                found: self.u.resolve(found).to_string(),
                position: pos.clone(),
            },
        })
    }

    fn nd(&mut self, t: &NaturalTerm, pos: Position) -> Result<Ty, TypeError> {
        let ty = match t {
            NaturalTerm::Var(x) => self.lookup(x, &pos)?,
            NaturalTerm::Lam(x, b) => {
                let m = self.u.fresh();
                self.scope.push((x.clone(), m.clone()));
                let tb = self.nd(b, pos.child(Selector::LamBody));
                self.scope.pop();
                Ty::imp(m, tb?)
            }
            NaturalTerm::App(f, a) => {
                let tf = self.nd(f, pos.child(Selector::AppFun))?;
                if let Ty::Atom(_) = self.u.shallow(&tf) {
                    return Err(TypeError::NotAFunction {
                        position: pos.child(Selector::AppFun),
                        found: self.u.resolve(&tf).to_string(),
                    });
                }
                let ta = self.nd(a, pos.child(Selector::AppArg))?;
                let r = self.u.fresh();
                self.unify_at(&Ty::imp(ta, r.clone()), &tf, &pos)?;
                r
            }
            NaturalTerm::ESub(c, x, b) => {
                let tc = self.nd(c, pos.child(Selector::CutContent))?;
                self.scope.push((x.clone(), tc));
                let tb = self.nd(b, pos.child(Selector::CutBody));
                self.scope.pop();
                tb?
            }
        };
        self.types.insert(pos, ty.clone());
        Ok(ty)
    }

    fn sc(&mut self, t: &VanillaTerm, pos: Position) -> Result<Ty, TypeError> {
        let ty = match t {
            VanillaTerm::Var(x) => self.lookup(x, &pos)?,
            VanillaTerm::Lam(x, b) => {
                let m = self.u.fresh();
                self.scope.push((x.clone(), m.clone()));
                let tb = self.sc(b, pos.child(Selector::LamBody));
                self.scope.pop();
                Ty::imp(m, tb?)
            }
            VanillaTerm::Cut(c, x, b) => {
                let tc = self.sc(c, pos.child(Selector::CutContent))?;
                self.scope.push((x.clone(), tc));
                let tb = self.sc(b, pos.child(Selector::CutBody));
                self.scope.pop();
                tb?
            }
            VanillaTerm::Subtr(y, c, x, b) => {
                let hy = self.lookup(y, &pos)?;
                if let Ty::Atom(_) = self.u.shallow(&hy) {
                    return Err(TypeError::HeadNotImplication {
                        head: y.clone(),
                        found: self.u.resolve(&hy).to_string(),
                    });
                }
                let tc = self.sc(c, pos.child(Selector::SubtrContent))?;
                let bm = self.u.fresh();
                self.scope.push((x.clone(), bm.clone()));
                let tb = self.sc(b, pos.child(Selector::SubtrBody));
                self.scope.pop();
                let tb = tb?;
                let required = Ty::imp(tc, bm);
                if self.u.unify(&hy, &required).is_err() {
                    return Err(TypeError::ContractionConflict {
                        head: y.clone(),
                        bound: self.u.resolve(&hy).to_string(),
                        required: self.u.resolve(&required).to_string(),
                    });
                }
                tb
            }
        };
        self.types.insert(pos, ty.clone());
        Ok(ty)
    }

    fn formula_at(&self, pos: &Position, name: &mut impl FnMut(usize) -> Formula) -> Formula {
        self.u.ground(&self.types[pos], name)
    }

    fn build_nd(
        &self,
        ctx: &TypeCtx,
        t: &NaturalTerm,
        pos: Position,
        name: &mut impl FnMut(usize) -> Formula,
    ) -> Derivation {
        let formula = self.formula_at(&pos, name);
        let (rule, children) = match t {
            NaturalTerm::Var(_) => (Rule::Ax, vec![]),
            NaturalTerm::Lam(x, b) => {
                let Formula::Imp(a, _) = &formula else {
                    unreachable!("abstraction typed by implication")
                };
                let mut ext = ctx.clone();
                ext.insert(x.clone(), (**a).clone());
                (
                    Rule::ImpR,
                    vec![self.build_nd(&ext, b, pos.child(Selector::LamBody), name)],
                )
            }
            NaturalTerm::App(f, a) => (
                Rule::App,
                vec![
                    self.build_nd(ctx, f, pos.child(Selector::AppFun), name),
                    self.build_nd(ctx, a, pos.child(Selector::AppArg), name),
                ],
            ),
            NaturalTerm::ESub(c, x, b) => {
                let dc = self.build_nd(ctx, c, pos.child(Selector::CutContent), name);
                let mut ext = ctx.clone();
                ext.insert(x.clone(), dc.formula.clone());
                let db = self.build_nd(&ext, b, pos.child(Selector::CutBody), name);
                (Rule::Cut, vec![dc, db])
            }
        };
        Derivation {
            rule,
            ctx: ctx.clone(),
            term: AnyTerm::Natural(t.clone()),
            formula,
            children,
        }
    }

    fn build_sc(
        &self,
        ctx: &TypeCtx,
        t: &VanillaTerm,
        pos: Position,
        name: &mut impl FnMut(usize) -> Formula,
    ) -> Derivation {
        let formula = self.formula_at(&pos, name);
        let (rule, children) = match t {
            VanillaTerm::Var(_) => (Rule::Ax, vec![]),
            VanillaTerm::Lam(x, b) => {
                let Formula::Imp(a, _) = &formula else {
                    unreachable!("abstraction typed by implication")
                };
                let mut ext = ctx.clone();
                ext.insert(x.clone(), (**a).clone());
                (
                    Rule::ImpR,
                    vec![self.build_sc(&ext, b, pos.child(Selector::LamBody), name)],
                )
            }
            VanillaTerm::Cut(c, x, b) => {
                let dc = self.build_sc(ctx, c, pos.child(Selector::CutContent), name);
                let mut ext = ctx.clone();
                ext.insert(x.clone(), dc.formula.clone());
                let db = self.build_sc(&ext, b, pos.child(Selector::CutBody), name);
                (Rule::Cut, vec![dc, db])
            }
            VanillaTerm::Subtr(y, c, x, b) => {
                let dc = self.build_sc(ctx, c, pos.child(Selector::SubtrContent), name);
                let Some(Formula::Imp(_, cod)) = ctx.get(y) else {
                    unreachable!("head typed by implication")
                };
                let mut ext = ctx.clone();
                ext.insert(x.clone(), (**cod).clone());
                let db = self.build_sc(&ext, b, pos.child(Selector::SubtrBody), name);
                (Rule::ImpL, vec![dc, db])
            }
        };
        Derivation {
            rule,
            ctx: ctx.clone(),
            term: AnyTerm::Vanilla(t.clone()),
            formula,
            children,
        }
    }
}

fn default_atom(a: &Formula, ctx: &TypeCtx) -> Formula {
    a.atoms()
        .into_iter()
        .chain(ctx.iter().flat_map(|(_, f)| f.atoms()))
        .next()
        .map(Formula::Atom)
        .unwrap_or_else(|| Formula::atom("X"))
}

fn base_of(ctx: &TypeCtx) -> BTreeMap<Var, Ty> {
    ctx.iter()
        .map(|(x, f)| (x.clone(), Ty::from_formula(f)))
        .collect()
}

/// Checks `ctx ⊢ t : a` in natural deduction with cuts.
///
/// Binders of `t` that clash with `ctx` or with each other are α-renamed
/// first, so the derivation's term may differ from `t` up to α.
pub fn check_nd(ctx: &TypeCtx, t: &NaturalTerm, a: &Formula) -> Result<Derivation, TypeError> {
    let avoid: BTreeSet<Var> = ctx.vars().cloned().collect();
    let t = t.with_distinct_binders(&avoid);
    let mut g = Gen {
        base: base_of(ctx),
        ..Gen::default()
    };
    let ty = g.nd(&t, Position::root())?;
    g.unify_at(&Ty::from_formula(a), &ty, &Position::root())?;
    let d = default_atom(a, ctx);
    Ok(g.build_nd(ctx, &t, Position::root(), &mut |_| d.clone()))
}

/// Checks `ctx ⊢ t : a` in the vanilla sequent calculus, reading the head's
/// implication from the context at each subtraction.
pub fn check_sc(ctx: &TypeCtx, t: &VanillaTerm, a: &Formula) -> Result<Derivation, TypeError> {
    let avoid: BTreeSet<Var> = ctx.vars().cloned().collect();
    let t = t.with_distinct_binders(&avoid);
    let mut g = Gen {
        base: base_of(ctx),
        ..Gen::default()
    };
    let ty = g.sc(&t, Position::root())?;
    g.unify_at(&Ty::from_formula(a), &ty, &Position::root())?;
    let d = default_atom(a, ctx);
    Ok(g.build_sc(ctx, &t, Position::root(), &mut |_| d.clone()))
}

/// Principal type of a term, with fresh atoms for whatever stays
/// unconstrained, and the formulas found for placeholder entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inferred {
    pub formula: Formula,
    pub assignment: BTreeMap<Var, Formula>,
}

impl Inferred {
    /// The context obtained by filling placeholders with their assignment.
    pub fn ctx(&self, entries: &[(Var, Option<Formula>)]) -> TypeCtx {
        entries
            .iter()
            .map(|(x, f)| {
                let f = f.clone().unwrap_or_else(|| self.assignment[x].clone());
                (x.clone(), f)
            })
            .collect()
    }
}

/// Infers a type for `t` under `entries`; `None` entries are placeholders
/// whose formula is inferred too.
pub fn infer(
    calculus: Calculus,
    entries: &[(Var, Option<Formula>)],
    t: &AnyTerm,
) -> Result<Inferred, TypeError> {
    if t.calculus() != calculus {
        return Err(TypeError::CalculusMismatch {
            expected: calculus,
            found: t.calculus(),
        });
    }
    let mut g = Gen::default();
    let mut holes = Vec::new();
    let mut used_atoms: BTreeSet<Arc<str>> = BTreeSet::new();
    for (x, f) in entries {
        let ty = match f {
            Some(f) => {
                used_atoms.extend(f.atoms());
                Ty::from_formula(f)
            }
            None => {
                let m = g.u.fresh();
                holes.push((x.clone(), m.clone()));
                m
            }
        };
        g.base.insert(x.clone(), ty);
    }
    let ty = match t {
        AnyTerm::Natural(n) => g.nd(n, Position::root()),
        AnyTerm::Vanilla(v) => g.sc(v, Position::root()),
    }
    .map_err(|e| match e {
        TypeError::TypeMismatch {
            expected,
            found,
            position,
        } => TypeError::UnificationClash {
            left: expected,
            right: found,
            position,
        },
        other => other,
    })?;
    let mut names: BTreeMap<usize, Formula> = BTreeMap::new();
    let mut counter = 0;
    let mut name = |m: usize| {
        names
            .entry(m)
            .or_insert_with(|| loop {
                counter += 1;
                let cand: Arc<str> = Arc::from(format!("T{counter}"));
                if !used_atoms.contains(&cand) {
                    break Formula::Atom(cand);
                }
            })
            .clone()
    };
    let formula = g.u.ground(&ty, &mut name);
    let assignment = holes
        .into_iter()
        .map(|(x, m)| (x, g.u.ground(&m, &mut name)))
        .collect();
    Ok(Inferred {
        formula,
        assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{parse_natural, parse_vanilla};
    use crate::typing::parse_ctx_entries;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    fn ctx(s: &str) -> TypeCtx {
        TypeCtx::parse(s).unwrap()
    }

    #[test]
    fn identity_checks_in_both_calculi() {
        let d = check_nd(&ctx(""), &parse_natural(r"\x. x").unwrap(), &f("X -> X")).unwrap();
        assert_eq!(d.rules(), vec![Rule::ImpR, Rule::Ax]);
        d.validate().unwrap();
        let d = check_sc(&ctx(""), &parse_vanilla(r"\x. x").unwrap(), &f("X -> X")).unwrap();
        assert_eq!(d.rules(), vec![Rule::ImpR, Rule::Ax]);
        d.validate().unwrap();
    }

    #[test]
    fn explicit_substitution_is_a_cut() {
        let d = check_nd(
            &ctx("x:X"),
            &parse_natural("let y = x in y").unwrap(),
            &f("X"),
        )
        .unwrap();
        assert_eq!(d.rule, Rule::Cut);
        d.validate().unwrap();
    }

    #[test]
    fn self_application_fails() {
        let e = check_nd(&ctx(""), &parse_natural(r"\x. x x").unwrap(), &f("X -> X")).unwrap_err();
        assert!(matches!(
            e,
            TypeError::OccursCheck { .. } | TypeError::TypeMismatch { .. }
        ));
    }

    #[test]
    fn subtraction_uses_left_rule() {
        let t = parse_vanilla("let x = y @ z in x").unwrap();
        let d = check_sc(&ctx("y:X->X, z:X"), &t, &f("X")).unwrap();
        assert_eq!(d.rules(), vec![Rule::ImpL, Rule::Ax, Rule::Ax]);
        d.validate().unwrap();
        let e = check_sc(&ctx("y:X"), &t, &f("X")).unwrap_err();
        assert!(matches!(e, TypeError::HeadNotImplication { .. }));
        let e = check_sc(&ctx("y:X->X, z:Y"), &t, &f("X")).unwrap_err();
        assert!(matches!(e, TypeError::ContractionConflict { .. }));
    }

    #[test]
    fn shadowing_binders_are_renamed() {
        // a reduct of `{\y. y/x}(\y. x)`
        let t = parse_vanilla(r"\y. \y. y").unwrap();
        let d = check_sc(&ctx(""), &t, &f("X -> Y -> Y")).unwrap();
        d.validate().unwrap();
        let t = parse_vanilla(r"\x. x").unwrap();
        check_sc(&ctx("x:Y"), &t, &f("X -> X"))
            .unwrap()
            .validate()
            .unwrap();
    }

    #[test]
    fn inference_examples() {
        let r = infer(
            Calculus::Natural,
            &[],
            &AnyTerm::Natural(parse_natural(r"\x. x").unwrap()),
        )
        .unwrap();
        assert_eq!(r.formula, f("T1 -> T1"));
        let e = infer(
            Calculus::Natural,
            &[],
            &AnyTerm::Natural(parse_natural(r"\x. x x").unwrap()),
        )
        .unwrap_err();
        assert!(matches!(e, TypeError::OccursCheck { .. }));

        let entries = parse_ctx_entries("y:?, z:?").unwrap();
        let t = AnyTerm::Vanilla(parse_vanilla("let x = y @ z in x").unwrap());
        let r = infer(Calculus::Vanilla, &entries, &t).unwrap();
        let z = &r.assignment[&Var::parse("z")];
        assert_eq!(
            r.assignment[&Var::parse("y")],
            Formula::imp(z.clone(), r.formula.clone())
        );
        assert_ne!(*z, r.formula);
    }

    #[test]
    fn unbound_variables_are_reported() {
        let e = check_nd(&ctx(""), &parse_natural("x").unwrap(), &f("X")).unwrap_err();
        assert!(matches!(e, TypeError::UnboundVariable { .. }));
    }
}
