//! Simple types, the natural and vanilla typing systems, inference, and a
//! subject-reduction probe.

mod check;
mod derivation;
mod formula;
mod unify;

use thiserror::Error;

use crate::rewriting::{self, Redex, RuleId};
use crate::terms::{Calculus, Position, VanillaTerm, Var};

pub use check::{check_nd, check_sc, infer, Inferred};
pub use derivation::{Derivation, Rule};
pub use formula::{parse_ctx_entries, Formula, TypeCtx};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{var}` at {position}")]
    UnboundVariable { var: Var, position: Position },
    #[error("type mismatch at {position}: expected {expected}, found {found}")]
    TypeMismatch {
        expected: String,
        found: String,
        position: Position,
    },
    #[error("not a function at {position}: has type {found}")]
    NotAFunction { position: Position, found: String },
    #[error("head `{head}` has type {found}, which is not an implication")]
    HeadNotImplication { head: Var, found: String },
    #[error("head `{head}` is bound at {bound} but the subtraction needs {required}")]
    ContractionConflict {
        head: Var,
        bound: String,
        required: String,
    },
    #[error("occurs check failed at {position}")]
    OccursCheck { position: Position },
    #[error("cannot unify {left} with {right} at {position}")]
    UnificationClash {
        left: String,
        right: String,
        position: Position,
    },
    #[error("`{var}` is bound at {bound}, cannot rebind it at {new}")]
    Rebind {
        var: Var,
        bound: String,
        new: String,
    },
    #[error("expected a {expected} term, found a {found} one")]
    CalculusMismatch { expected: Calculus, found: Calculus },
    #[error("invalid {rule} node: {reason}")]
    InvalidDerivation { rule: Rule, reason: String },
}

/// Outcome of re-typing every one-step cut-elimination reduct.
#[derive(Debug, Clone)]
pub struct SubjectReductionReport {
    pub reducts_checked: usize,
    pub failure: Option<(Redex, VanillaTerm, TypeError)>,
}

impl SubjectReductionReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `ctx ⊢ t : a`, then re-checks each reduct `t →cut u` against the
/// same context and formula. Each reduct's derivation is also validated
/// node by node.
pub fn subject_reduction_probe(
    ctx: &TypeCtx,
    t: &VanillaTerm,
    a: &Formula,
) -> Result<SubjectReductionReport, TypeError> {
    check_sc(ctx, t, a)?;
    let mut report = SubjectReductionReport {
        reducts_checked: 0,
        failure: None,
    };
    for r in rewriting::vanilla_redexes(t, &[RuleId::CutElim]) {
        let u = rewriting::step_vanilla(t, &r).expect("redex comes from the term");
        report.reducts_checked += 1;
        if let Err(e) = check_sc(ctx, &u, a).and_then(|d| d.validate()) {
            report.failure = Some((r, u, e));
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_vanilla;

    #[test]
    fn probe_examples() {
        let g = TypeCtx::parse("y:X").unwrap();
        let r = subject_reduction_probe(
            &g,
            &parse_vanilla("let x = y in x").unwrap(),
            &Formula::atom("X"),
        )
        .unwrap();
        assert!(r.ok());
        assert_eq!(r.reducts_checked, 1);

        let g = TypeCtx::parse("u:X").unwrap();
        let t = parse_vanilla(r"let x = \y. y in let w = x @ u in w").unwrap();
        let r = subject_reduction_probe(&g, &t, &Formula::atom("X")).unwrap();
        assert!(r.ok());
        assert_eq!(r.reducts_checked, 1);

        let g = TypeCtx::parse("y:X->X, z:X").unwrap();
        let t = parse_vanilla("let x = y @ z in x").unwrap();
        let r = subject_reduction_probe(&g, &t, &Formula::atom("X")).unwrap();
        assert_eq!(r.reducts_checked, 0);
    }
}
