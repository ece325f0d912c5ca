//! Translations between natural and vanilla terms, their action on contexts
//! and positions, and step-by-step simulation checkers.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::rewriting::{
    redexes_of, step_natural, step_vanilla, Redex, RewriteError, RuleId, Trace, TraceStatus,
    TraceStep,
};
use crate::terms::{
    split, split_natural, Calculus, Frame, LeftCtx, NaturalTerm, Position, Selector, SubstCtx,
    Term, VanillaTerm, Var,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    NdToSc,
    ScToNd,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::NdToSc => "nd-to-sc",
            Direction::ScToNd => "sc-to-nd",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Natural to vanilla. Each application `t s` becomes
/// `let a = t' in let b = a @ s' in b`; the pair `a`, `b` is chosen per
/// application node in pre-order, avoiding every variable of `t`.
pub fn nd_to_sc(t: &NaturalTerm) -> VanillaTerm {
    nd_to_sc_avoiding(t, &BTreeSet::new())
}

/// Like [`nd_to_sc`], with the fresh names also avoiding `extra`.
pub fn nd_to_sc_avoiding(t: &NaturalTerm, extra: &BTreeSet<Var>) -> VanillaTerm {
    let mut used = t.all_vars();
    used.extend(extra.iter().cloned());
    to_vanilla(t, &mut used)
}

fn take_fresh(base: &str, used: &mut BTreeSet<Var>) -> Var {
    let v = Var::new(base, 0).fresh(used);
    used.insert(v.clone());
    v
}

fn to_vanilla(t: &NaturalTerm, used: &mut BTreeSet<Var>) -> VanillaTerm {
    match t {
        NaturalTerm::Var(x) => VanillaTerm::var(x.clone()),
        NaturalTerm::Lam(x, b) => VanillaTerm::lam(x.clone(), to_vanilla(b, used)),
        NaturalTerm::App(f, s) => {
            let a = take_fresh("a", used);
            let b = take_fresh("b", used);
            let f = to_vanilla(f, used);
            let s = to_vanilla(s, used);
            VanillaTerm::cut(
                f,
                a.clone(),
                VanillaTerm::subtr(a, s, b.clone(), VanillaTerm::var(b)),
            )
        }
        NaturalTerm::ESub(c, x, b) => {
            let c = to_vanilla(c, used);
            VanillaTerm::cut(c, x.clone(), to_vanilla(b, used))
        }
    }
}

/// Vanilla to natural. A subtraction `let x = y @ s in t` becomes the
/// explicit substitution `let x = y s' in t'`.
pub fn sc_to_nd(t: &VanillaTerm) -> NaturalTerm {
    match t {
        VanillaTerm::Var(x) => NaturalTerm::var(x.clone()),
        VanillaTerm::Lam(x, b) => NaturalTerm::lam(x.clone(), sc_to_nd(b)),
        VanillaTerm::Cut(c, x, b) => NaturalTerm::esub(sc_to_nd(c), x.clone(), sc_to_nd(b)),
        VanillaTerm::Subtr(y, c, x, b) => NaturalTerm::esub(
            NaturalTerm::app(NaturalTerm::var(y.clone()), sc_to_nd(c)),
            x.clone(),
            sc_to_nd(b),
        ),
    }
}

pub fn left_ctx_to_natural(l: &LeftCtx) -> SubstCtx {
    SubstCtx(
        l.frames()
            .iter()
            .map(|f| match f {
                Frame::Cut(c, x) => (sc_to_nd(c), x.clone()),
                Frame::Subtr(y, c, x) => (
                    NaturalTerm::app(NaturalTerm::var(y.clone()), sc_to_nd(c)),
                    x.clone(),
                ),
            })
            .collect(),
    )
}

pub fn subst_ctx_to_vanilla(l: &SubstCtx) -> LeftCtx {
    LeftCtx(
        l.0.iter()
            .map(|(c, x)| Frame::Cut(nd_to_sc(c), x.clone()))
            .collect(),
    )
}

/// Where the node at `pos` of a natural term lands in its vanilla image.
pub fn position_to_vanilla(pos: &Position) -> Position {
    let mut out = Vec::new();
    for &sel in pos.selectors() {
        match sel {
            Selector::AppFun => out.push(Selector::CutContent),
            Selector::AppArg => out.extend([Selector::CutBody, Selector::SubtrContent]),
            other => out.push(other),
        }
    }
    Position(out)
}

/// Where the node at `pos` of a vanilla term lands in its natural image.
pub fn position_to_natural(pos: &Position) -> Position {
    let mut out = Vec::new();
    for &sel in pos.selectors() {
        match sel {
            Selector::SubtrContent => out.extend([Selector::CutContent, Selector::AppArg]),
            Selector::SubtrBody => out.push(Selector::CutBody),
            other => out.push(other),
        }
    }
    Position(out)
}

pub fn translate_position(direction: Direction, pos: &Position) -> Position {
    match direction {
        Direction::NdToSc => position_to_vanilla(pos),
        Direction::ScToNd => position_to_natural(pos),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("rule {0} has no simulation in this direction")]
    UnsupportedRule(RuleId),
    #[error("simulation failure: expected {expected}, reached {found}")]
    Diverged { expected: String, found: String },
}

/// One source step and the target steps simulating it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimReport<T> {
    pub source: Calculus,
    pub redex: Redex,
    pub target: Trace<T>,
    /// Translation of the source step's result.
    pub expected: T,
    pub matched: bool,
    pub shape: String,
}

impl<T: Term> SimReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "source": {
                "calculus": self.source.to_string(),
                "rule": self.redex.rule.name(),
                "path": self.redex.at.names(),
            },
            "target": self.target.to_json(),
            "expected": self.expected.to_string(),
            "shape": self.shape,
            "matched": self.matched,
        })
    }
}

fn run_steps<T: Term>(
    start: T,
    plan: Vec<Redex>,
    step: impl Fn(&T, &Redex) -> Result<T, RewriteError>,
) -> Result<Trace<T>, RewriteError> {
    let mut cur = start.clone();
    let mut steps = Vec::new();
    for r in plan {
        cur = step(&cur, &r)?;
        steps.push(TraceStep {
            redex: r,
            result: cur.clone(),
        });
    }
    Ok(Trace {
        initial: start,
        steps,
        status: TraceStatus::Partial,
    })
}

fn finish<T: Term>(
    source: Calculus,
    redex: &Redex,
    target: Trace<T>,
    expected: T,
    shape: String,
) -> Result<SimReport<T>, SimError> {
    if !target.last().alpha_eq(&expected) {
        return Err(SimError::Diverged {
            expected: expected.to_string(),
            found: target.last().to_string(),
        });
    }
    Ok(SimReport {
        source,
        redex: redex.clone(),
        target,
        expected,
        matched: true,
        shape,
    })
}

/// Replays a cut-elimination step of `t` on `sc_to_nd(t)`: one `vs` step at
/// the translated position, then one `dB` per subtraction whose head is the
/// cut variable when the cut value is an abstraction.
pub fn simulate_cut_in_vsc(t: &VanillaTerm, r: &Redex) -> Result<SimReport<NaturalTerm>, SimError> {
    simulate_cut_from(t, r, sc_to_nd(t))
}

fn simulate_cut_from(
    t: &VanillaTerm,
    r: &Redex,
    start: NaturalTerm,
) -> Result<SimReport<NaturalTerm>, SimError> {
    if r.rule != RuleId::CutElim {
        return Err(SimError::UnsupportedRule(r.rule));
    }
    let u = step_vanilla(t, r)?;
    let Some(VanillaTerm::Cut(c, x, body)) = t.subterm(&r.at) else {
        return Err(RewriteError::StaleRedex(r.clone()).into());
    };
    let (l, v) = split(c);
    let at = position_to_natural(&r.at);
    let mut plan = vec![Redex {
        rule: RuleId::VsSub,
        at: at.clone(),
    }];
    if let VanillaTerm::Lam(..) = v {
        let base = at.extend(&vec![Selector::CutBody; l.len()]);
        let mut heads: Vec<Position> = body
            .positions()
            .into_iter()
            .filter(|q| {
                matches!(body.subterm(q), Some(VanillaTerm::Subtr(h, ..)) if h == x)
                    && !body.binders_along(q).expect("own position").contains(x)
            })
            .collect();
        // innermost first, so earlier steps do not move later redexes
        heads.reverse();
        plan.extend(heads.iter().map(|q| {
            Redex {
                rule: RuleId::DbAtDistance,
                at: base
                    .extend(position_to_natural(q).selectors())
                    .child(Selector::CutContent),
            }
        }));
    }
    let shape = format!("vs;dB*{}", plan.len() - 1);
    let target = run_steps(start, plan, step_natural)?;
    finish(Calculus::Vanilla, r, target, sc_to_nd(&u), shape)
}

/// Replays a `dB` or `vs` step of `t` on `nd_to_sc(t)`. A `vs` step is one
/// cut-elimination step; a `dB` step is two, the second removing the
/// correction cut `let b = u in b`.
pub fn simulate_vsc_in_vanilla(
    t: &NaturalTerm,
    r: &Redex,
) -> Result<SimReport<VanillaTerm>, SimError> {
    simulate_vsc_from(t, r, nd_to_sc(t))
}

fn simulate_vsc_from(
    t: &NaturalTerm,
    r: &Redex,
    start: VanillaTerm,
) -> Result<SimReport<VanillaTerm>, SimError> {
    let u = step_natural(t, r)?;
    let at = position_to_vanilla(&r.at);
    let cut = |at: Position| Redex {
        rule: RuleId::CutElim,
        at,
    };
    let plan = match (r.rule, t.subterm(&r.at)) {
        (RuleId::VsSub, _) => vec![cut(at)],
        (RuleId::DbAtDistance, Some(NaturalTerm::App(f, _))) => {
            let frames = split_natural(f).0.len();
            let second = at.extend(&vec![Selector::CutBody; frames]);
            vec![cut(at), cut(second)]
        }
        (rule, _) => return Err(SimError::UnsupportedRule(rule)),
    };
    let shape = vec!["cut"; plan.len()].join(";");
    let target = run_steps(start, plan, step_vanilla)?;
    finish(Calculus::Natural, r, target, nd_to_sc(&u), shape)
}

/// Simulates every step of a natural run, continuing each simulation from
/// the end of the previous one.
pub fn simulate_vsc_run(run: &Trace<NaturalTerm>) -> Result<Vec<SimReport<VanillaTerm>>, SimError> {
    let mut out: Vec<SimReport<VanillaTerm>> = Vec::new();
    let mut src = run.initial.clone();
    let mut cur = nd_to_sc(&src);
    for s in &run.steps {
        let rep = simulate_vsc_from(&src, &s.redex, cur)?;
        cur = rep.target.last().clone();
        src = s.result.clone();
        out.push(rep);
    }
    Ok(out)
}

/// Simulates every step of a cut-elimination run.
pub fn simulate_cut_run(run: &Trace<VanillaTerm>) -> Result<Vec<SimReport<NaturalTerm>>, SimError> {
    let mut out: Vec<SimReport<NaturalTerm>> = Vec::new();
    let mut src = run.initial.clone();
    let mut cur = sc_to_nd(&src);
    for s in &run.steps {
        let rep = simulate_cut_from(&src, &s.redex, cur)?;
        cur = rep.target.last().clone();
        src = s.result.clone();
        out.push(rep);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{renamings} renaming steps leave non-renaming cuts in {term}")]
pub struct ResidualCut {
    pub term: VanillaTerm,
    pub renamings: usize,
}

/// Eliminates renaming cuts, leftmost-outermost, until none is left.
/// Returns the result and the number of steps.
pub fn strip_renaming_cuts(t: &VanillaTerm) -> Result<(VanillaTerm, usize), ResidualCut> {
    let mut cur = t.clone();
    let mut k = 0;
    while let Some(r) = redexes_of(&cur, &[RuleId::RenCut])
        .expect("vanilla rule")
        .into_iter()
        .next()
    {
        cur = step_vanilla(&cur, &r).expect("fresh redex");
        k += 1;
    }
    if cur.is_cut_free() {
        Ok((cur, k))
    } else {
        Err(ResidualCut {
            term: cur,
            renamings: k,
        })
    }
}
