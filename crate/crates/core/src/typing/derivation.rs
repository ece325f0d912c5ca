use std::fmt::{self, Write as _};

use serde::Serialize;
use serde_json::json;

use crate::terms::{AnyTerm, NaturalTerm, VanillaTerm};

use super::{Formula, TypeCtx, TypeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Ax,
    ImpR,
    App,
    Cut,
    ImpL,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Ax => "ax",
            Rule::ImpR => "imp_r",
            Rule::App => "app",
            Rule::Cut => "cut",
            Rule::ImpL => "imp_l",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A typing derivation: the rule at the root, its conclusion and premises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub ctx: TypeCtx,
    pub term: AnyTerm,
    pub formula: Formula,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn height(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(Derivation::height)
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(Derivation::node_count)
            .sum::<usize>()
    }

    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule];
        for c in &self.children {
            out.extend(c.rules());
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rule": self.rule.name(),
            "conclusion": {
                "ctx": serde_json::to_value(&self.ctx).expect("ctx serializes"),
                "term": self.term.to_string(),
                "formula": self.formula.to_string(),
            },
            "children": self.children.iter().map(Derivation::to_json).collect::<Vec<_>>(),
        })
    }

    /// One line per node, premises indented under their conclusion.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        let _ = writeln!(
            out,
            "{:indent$}{}: {} |- {} : {}",
            "",
            self.rule,
            self.ctx,
            self.term,
            self.formula,
            indent = depth * 2
        );
        for c in &self.children {
            c.write_text(depth + 1, out);
        }
    }

    /// Re-checks every node against the rule schemas. Subtraction nodes are
    /// checked against the form with on-the-fly contraction: the conclusion
    /// context must be `Γ ∪ y:A->B` where `Γ` is the premises' context.
    pub fn validate(&self) -> Result<(), TypeError> {
        let bad = |reason: String| TypeError::InvalidDerivation {
            rule: self.rule,
            reason,
        };
        let arity = match self.rule {
            Rule::Ax => 0,
            Rule::ImpR => 1,
            _ => 2,
        };
        if self.children.len() != arity {
            return Err(bad(format!(
                "expected {arity} premises, found {}",
                self.children.len()
            )));
        }
        let prem = |i: usize| &self.children[i];
        let same_ctx = |i: usize, ctx: &TypeCtx| -> Result<(), TypeError> {
            if prem(i).ctx != *ctx {
                return Err(bad(format!(
                    "premise {i} has context {{{}}}, expected {{{ctx}}}",
                    prem(i).ctx
                )));
            }
            Ok(())
        };
        let prem_is = |i: usize, term: &AnyTerm, f: &Formula| -> Result<(), TypeError> {
            if prem(i).term != *term || prem(i).formula != *f {
                return Err(bad(format!(
                    "premise {i} concludes {} : {}, expected {term} : {f}",
                    prem(i).term,
                    prem(i).formula
                )));
            }
            Ok(())
        };
        let fresh_ext = |ctx: &TypeCtx, x: &crate::terms::Var, a: &Formula| {
            if ctx.contains(x) {
                return Err(bad(format!("`{x}` is already in the context")));
            }
            let mut c = ctx.clone();
            c.insert(x.clone(), a.clone());
            Ok(c)
        };
        match (self.rule, &self.term) {
            (Rule::Ax, AnyTerm::Natural(NaturalTerm::Var(x)))
            | (Rule::Ax, AnyTerm::Vanilla(VanillaTerm::Var(x))) => match self.ctx.get(x) {
                Some(a) if *a == self.formula => Ok(()),
                Some(a) => Err(bad(format!("`{x}` has formula {a} in the context"))),
                None => Err(bad(format!("`{x}` is not in the context"))),
            },
            (
                Rule::ImpR,
                t @ (AnyTerm::Natural(NaturalTerm::Lam(..))
                | AnyTerm::Vanilla(VanillaTerm::Lam(..))),
            ) => {
                let (x, body) = match t {
                    AnyTerm::Natural(NaturalTerm::Lam(x, b)) => {
                        (x, AnyTerm::Natural((**b).clone()))
                    }
                    AnyTerm::Vanilla(VanillaTerm::Lam(x, b)) => {
                        (x, AnyTerm::Vanilla((**b).clone()))
                    }
                    _ => unreachable!(),
                };
                let Formula::Imp(a, b) = &self.formula else {
                    return Err(bad(format!("{} is not an implication", self.formula)));
                };
                let ext = fresh_ext(&self.ctx, x, a)?;
                same_ctx(0, &ext)?;
                prem_is(0, &body, b)?;
                prem(0).validate()
            }
            (Rule::App, AnyTerm::Natural(NaturalTerm::App(f, a))) => {
                let arg_ty = prem(1).formula.clone();
                same_ctx(0, &self.ctx)?;
                same_ctx(1, &self.ctx)?;
                prem_is(
                    0,
                    &AnyTerm::Natural((**f).clone()),
                    &Formula::imp(arg_ty.clone(), self.formula.clone()),
                )?;
                prem_is(1, &AnyTerm::Natural((**a).clone()), &arg_ty)?;
                prem(0).validate()?;
                prem(1).validate()
            }
            (
                Rule::Cut,
                t @ (AnyTerm::Natural(NaturalTerm::ESub(..))
                | AnyTerm::Vanilla(VanillaTerm::Cut(..))),
            ) => {
                let (c, x, b) = match t {
                    AnyTerm::Natural(NaturalTerm::ESub(c, x, b)) => (
                        AnyTerm::Natural((**c).clone()),
                        x,
                        AnyTerm::Natural((**b).clone()),
                    ),
                    AnyTerm::Vanilla(VanillaTerm::Cut(c, x, b)) => (
                        AnyTerm::Vanilla((**c).clone()),
                        x,
                        AnyTerm::Vanilla((**b).clone()),
                    ),
                    _ => unreachable!(),
                };
                let cut_ty = prem(0).formula.clone();
                same_ctx(0, &self.ctx)?;
                prem_is(0, &c, &cut_ty)?;
                let ext = fresh_ext(&self.ctx, x, &cut_ty)?;
                same_ctx(1, &ext)?;
                prem_is(1, &b, &self.formula)?;
                prem(0).validate()?;
                prem(1).validate()
            }
            (Rule::ImpL, AnyTerm::Vanilla(VanillaTerm::Subtr(y, c, x, b))) => {
                let gamma = prem(0).ctx.clone();
                let a = prem(0).formula.clone();
                prem_is(0, &AnyTerm::Vanilla((**c).clone()), &a)?;
                let Some(bx) = prem(1).ctx.get(x).cloned() else {
                    return Err(bad(format!("right premise does not bind `{x}`")));
                };
                let ext = fresh_ext(&gamma, x, &bx)?;
                same_ctx(1, &ext)?;
                prem_is(1, &AnyTerm::Vanilla((**b).clone()), &self.formula)?;
                let head_ty = Formula::imp(a, bx);
                let union = match gamma.get(y) {
                    Some(f) if *f != head_ty => {
                        return Err(TypeError::ContractionConflict {
                            head: y.clone(),
                            bound: f.to_string(),
                            required: head_ty.to_string(),
                        })
                    }
                    Some(_) => gamma.clone(),
                    None => fresh_ext(&gamma, y, &head_ty)?,
                };
                if union != self.ctx {
                    return Err(bad(format!(
                        "conclusion context {{{}}} is not {{{gamma}}} ∪ {y}:{head_ty}",
                        self.ctx
                    )));
                }
                prem(0).validate()?;
                prem(1).validate()
            }
            (rule, t) => Err(bad(format!("rule {rule} does not apply to `{t}`"))),
        }
    }
}
