//! Redexes, single steps, strategies, traces and exhaustive reduction graphs
//! for dB/s/vs, Plotkin's βv, and vanilla cut elimination.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::terms::{
    freshen_spine_natural, freshen_spine_vanilla, plug, plug_natural, split, split_natural,
    split_natural_value, subst_nd, subst_value, AnyTerm, Calculus, NaturalTerm, Position, Selector,
    Term, VanillaTerm,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    #[serde(rename = "dB")]
    DbAtDistance,
    #[serde(rename = "s")]
    SSub,
    #[serde(rename = "vs")]
    VsSub,
    #[serde(rename = "betav-weak")]
    BetaVWeak,
    #[serde(rename = "betav")]
    BetaVStrong,
    #[serde(rename = "cut")]
    CutElim,
    #[serde(rename = "ren-cut")]
    RenCut,
}

impl RuleId {
    pub const ALL: [RuleId; 7] = [
        RuleId::DbAtDistance,
        RuleId::SSub,
        RuleId::VsSub,
        RuleId::BetaVWeak,
        RuleId::BetaVStrong,
        RuleId::CutElim,
        RuleId::RenCut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::DbAtDistance => "dB",
            RuleId::SSub => "s",
            RuleId::VsSub => "vs",
            RuleId::BetaVWeak => "betav-weak",
            RuleId::BetaVStrong => "betav",
            RuleId::CutElim => "cut",
            RuleId::RenCut => "ren-cut",
        }
    }

    pub fn calculus(self) -> Calculus {
        match self {
            RuleId::CutElim | RuleId::RenCut => Calculus::Vanilla,
            _ => Calculus::Natural,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named rule sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleSet {
    Sc,
    Vsc,
    PlotkinWeak,
    PlotkinStrong,
    Vanilla,
}

impl RuleSet {
    pub fn rules(self) -> &'static [RuleId] {
        match self {
            RuleSet::Sc => &[RuleId::DbAtDistance, RuleId::SSub],
            RuleSet::Vsc => &[RuleId::DbAtDistance, RuleId::VsSub],
            RuleSet::PlotkinWeak => &[RuleId::BetaVWeak],
            RuleSet::PlotkinStrong => &[RuleId::BetaVStrong],
            RuleSet::Vanilla => &[RuleId::CutElim],
        }
    }

    pub fn calculus(self) -> Calculus {
        match self {
            RuleSet::Vanilla => Calculus::Vanilla,
            _ => Calculus::Natural,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Redex {
    pub rule: RuleId,
    pub at: Position,
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.rule, self.at)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule {rule} does not apply to {found} terms")]
    CalculusMismatch { rule: RuleId, found: Calculus },
    #[error("no {} redex at {}", .0.rule, .0.at)]
    StaleRedex(Redex),
}

/// Terms that carry root rewriting rules.
pub trait Rewrite: Term {
    /// Whether `rule` matches at the root of `self`, reached from the top of
    /// the whole term by `path`.
    fn matches(&self, rule: RuleId, path: &[Selector]) -> bool;

    /// The root step; `None` if the rule does not match.
    fn contract(&self, rule: RuleId) -> Option<Self>;
}

impl Rewrite for NaturalTerm {
    fn matches(&self, rule: RuleId, path: &[Selector]) -> bool {
        match (rule, self) {
            (RuleId::DbAtDistance, NaturalTerm::App(f, _)) => {
                matches!(split_natural(f).1, NaturalTerm::Lam(..))
            }
            (RuleId::SSub, NaturalTerm::ESub(..)) => true,
            (RuleId::VsSub, NaturalTerm::ESub(c, _, _)) => split_natural_value(c).is_some(),
            (RuleId::BetaVStrong, NaturalTerm::App(f, a)) => {
                matches!(**f, NaturalTerm::Lam(..)) && a.is_value()
            }
            (RuleId::BetaVWeak, NaturalTerm::App(f, a)) => {
                !path.contains(&Selector::LamBody)
                    && matches!(**f, NaturalTerm::Lam(..))
                    && a.is_value()
            }
            _ => false,
        }
    }

    fn contract(&self, rule: RuleId) -> Option<Self> {
        if !self.matches(rule, &[]) {
            return None;
        }
        Some(match (rule, self) {
            (RuleId::DbAtDistance, NaturalTerm::App(f, a)) => {
                let f = freshen_spine_natural(f, &a.free_vars());
                let (l, lam) = split_natural(&f);
                let NaturalTerm::Lam(x, body) = lam else {
                    unreachable!()
                };
                plug_natural(&l, NaturalTerm::esub((**a).clone(), x, (*body).clone()))
            }
            (RuleId::SSub, NaturalTerm::ESub(c, x, b)) => subst_nd(b, x, c),
            (RuleId::VsSub, NaturalTerm::ESub(c, x, b)) => {
                let mut avoid = b.free_vars();
                avoid.remove(x);
                let c = freshen_spine_natural(c, &avoid);
                let (l, v) = split_natural_value(&c).expect("matched");
                plug_natural(&l, subst_nd(b, x, &v))
            }
            (RuleId::BetaVStrong | RuleId::BetaVWeak, NaturalTerm::App(f, a)) => {
                let NaturalTerm::Lam(x, body) = &**f else {
                    unreachable!()
                };
                subst_nd(body, x, a)
            }
            _ => unreachable!(),
        })
    }
}

impl Rewrite for VanillaTerm {
    fn matches(&self, rule: RuleId, _path: &[Selector]) -> bool {
        match (rule, self) {
            (RuleId::CutElim, VanillaTerm::Cut(..)) => true,
            (RuleId::RenCut, VanillaTerm::Cut(c, _, _)) => {
                matches!(split(c).1, VanillaTerm::Var(_))
            }
            _ => false,
        }
    }

    fn contract(&self, rule: RuleId) -> Option<Self> {
        if !self.matches(rule, &[]) {
            return None;
        }
        let VanillaTerm::Cut(c, x, b) = self else {
            unreachable!()
        };
        let mut avoid = b.free_vars();
        avoid.remove(x);
        let c = freshen_spine_vanilla(c, &avoid);
        let (l, v) = split(&c);
        Some(plug(
            &l,
            subst_value(&v, x, b).expect("split yields a value"),
        ))
    }
}

fn check_rules<T: Term>(rules: &[RuleId]) -> Result<(), RewriteError> {
    match rules.iter().find(|r| r.calculus() != T::CALCULUS) {
        Some(&rule) => Err(RewriteError::CalculusMismatch {
            rule,
            found: T::CALCULUS,
        }),
        None => Ok(()),
    }
}

fn sorted_rules(rules: &[RuleId]) -> Vec<RuleId> {
    let set: BTreeSet<RuleId> = rules.iter().copied().collect();
    set.into_iter().collect()
}

/// All redexes, positions in pre-order (leftmost-outermost), and at each
/// position rules in their declaration order.
pub fn redexes_of<T: Rewrite>(t: &T, rules: &[RuleId]) -> Result<Vec<Redex>, RewriteError> {
    check_rules::<T>(rules)?;
    let rules = sorted_rules(rules);
    let mut out = Vec::new();
    for pos in t.positions() {
        let sub = t.subterm(&pos).expect("own position");
        for &rule in &rules {
            if sub.matches(rule, pos.selectors()) {
                out.push(Redex {
                    rule,
                    at: pos.clone(),
                });
            }
        }
    }
    Ok(out)
}

pub fn step_of<T: Rewrite>(t: &T, r: &Redex) -> Result<T, RewriteError> {
    check_rules::<T>(&[r.rule])?;
    let stale = || RewriteError::StaleRedex(r.clone());
    let sub = t.subterm(&r.at).ok_or_else(stale)?;
    if !sub.matches(r.rule, r.at.selectors()) {
        return Err(stale());
    }
    let new = sub.contract(r.rule).ok_or_else(stale)?;
    t.replace_at(&r.at, new).ok_or_else(stale)
}

pub fn natural_redexes(t: &NaturalTerm, rules: &[RuleId]) -> Vec<Redex> {
    redexes_of(t, rules).expect("natural rules")
}

pub fn vanilla_redexes(t: &VanillaTerm, rules: &[RuleId]) -> Vec<Redex> {
    redexes_of(t, rules).expect("vanilla rules")
}

pub fn step_natural(t: &NaturalTerm, r: &Redex) -> Result<NaturalTerm, RewriteError> {
    step_of(t, r)
}

pub fn step_vanilla(t: &VanillaTerm, r: &Redex) -> Result<VanillaTerm, RewriteError> {
    step_of(t, r)
}

pub fn redexes(t: &AnyTerm, rules: &[RuleId]) -> Result<Vec<Redex>, RewriteError> {
    match t {
        AnyTerm::Natural(n) => redexes_of(n, rules),
        AnyTerm::Vanilla(v) => redexes_of(v, rules),
    }
}

pub fn step_at(t: &AnyTerm, r: &Redex) -> Result<AnyTerm, RewriteError> {
    match t {
        AnyTerm::Natural(n) => step_of(n, r).map(AnyTerm::Natural),
        AnyTerm::Vanilla(v) => step_of(v, r).map(AnyTerm::Vanilla),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    LeftmostOutermost,
    RightmostInnermost,
}

/// Positions in post-order, children visited right to left.
fn positions_ri<T: Term>(t: &T) -> Vec<Position> {
    fn go<T: Term>(t: &T, cur: &mut Vec<Selector>, out: &mut Vec<Position>) {
        for (sel, c) in t.children().into_iter().rev() {
            cur.push(sel);
            go(c, cur, out);
            cur.pop();
        }
        out.push(Position(cur.clone()));
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

fn choose<T: Rewrite>(
    t: &T,
    rules: &[RuleId],
    strategy: Strategy,
) -> Result<Option<Redex>, RewriteError> {
    let all = redexes_of(t, rules)?;
    Ok(match strategy {
        Strategy::LeftmostOutermost => all.into_iter().next(),
        Strategy::RightmostInnermost => {
            let order: HashMap<Position, usize> = positions_ri(t)
                .into_iter()
                .enumerate()
                .map(|(i, p)| (p, i))
                .collect();
            all.into_iter().min_by_key(|r| order[&r.at])
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceStatus {
    Normal,
    FuelExhausted,
    /// A fixed sequence of steps, not a normalization run.
    Partial,
}

impl fmt::Display for TraceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceStatus::Normal => "normal",
            TraceStatus::FuelExhausted => "fuel-exhausted",
            TraceStatus::Partial => "partial",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep<T> {
    pub redex: Redex,
    pub result: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace<T> {
    pub initial: T,
    pub steps: Vec<TraceStep<T>>,
    pub status: TraceStatus,
}

impl<T: Term> Trace<T> {
    pub fn last(&self) -> &T {
        self.steps
            .last()
            .map(|s| &s.result)
            .unwrap_or(&self.initial)
    }

    pub fn rules(&self) -> Vec<RuleId> {
        self.steps.iter().map(|s| s.redex.rule).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "initial": self.initial.to_string(),
            "steps": self.steps.iter().map(|s| json!({
                "rule": s.redex.rule.name(),
                "path": s.redex.at.names(),
                "result": s.result.to_string(),
            })).collect::<Vec<_>>(),
            "status": self.status.to_string(),
        })
    }

    /// The initial term, then one line per step: rule, position, result.
    pub fn to_text(&self) -> String {
        let mut out = format!("   {}\n", self.initial);
        for s in &self.steps {
            out.push_str(&format!(
                "-> {}  [{} @ {}]\n",
                s.result, s.redex.rule, s.redex.at
            ));
        }
        out.push_str(&format!("status: {}\n", self.status));
        out
    }
}

/// Rewrites with the strategy's first redex until normal or out of fuel.
pub fn normalize<T: Rewrite>(
    t: &T,
    rules: &[RuleId],
    strategy: Strategy,
    fuel: usize,
) -> Result<Trace<T>, RewriteError> {
    let mut cur = t.clone();
    let mut steps = Vec::new();
    loop {
        let Some(r) = choose(&cur, rules, strategy)? else {
            return Ok(Trace {
                initial: t.clone(),
                steps,
                status: TraceStatus::Normal,
            });
        };
        if steps.len() >= fuel {
            return Ok(Trace {
                initial: t.clone(),
                steps,
                status: TraceStatus::FuelExhausted,
            });
        }
        let next = step_of(&cur, &r)?;
        steps.push(TraceStep {
            redex: r,
            result: next.clone(),
        });
        cur = next;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphReport {
    AllPathsTerminate { max_path: usize, nodes: usize },
    CapExceeded { nodes: usize },
    CycleFound { nodes: usize },
}

impl GraphReport {
    pub fn terminates(&self) -> bool {
        matches!(self, GraphReport::AllPathsTerminate { .. })
    }

    pub fn max_path(&self) -> Option<usize> {
        match self {
            GraphReport::AllPathsTerminate { max_path, .. } => Some(*max_path),
            _ => None,
        }
    }
}

impl fmt::Display for GraphReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphReport::AllPathsTerminate { max_path, nodes } => {
                write!(
                    f,
                    "all paths terminate: longest {max_path} steps, {nodes} terms"
                )
            }
            GraphReport::CapExceeded { nodes } => {
                write!(f, "node cap exceeded after {nodes} terms")
            }
            GraphReport::CycleFound { nodes } => write!(f, "cycle found after {nodes} terms"),
        }
    }
}

/// One-step reducts modulo α, in redex order.
pub fn reducts<T: Rewrite>(t: &T, rules: &[RuleId]) -> Result<Vec<T>, RewriteError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in redexes_of(t, rules)? {
        let u = step_of(t, &r)?.canonical();
        if seen.insert(u.clone()) {
            out.push(u);
        }
    }
    Ok(out)
}

enum Stop {
    Cap,
    Cycle,
}

struct Explorer<'a, T> {
    rules: &'a [RuleId],
    cap: usize,
    memo: HashMap<T, usize>,
    on_stack: HashSet<T>,
}

impl<T: Rewrite> Explorer<'_, T> {
    fn seen(&self) -> usize {
        self.memo.len() + self.on_stack.len()
    }

    fn longest(&mut self, t: T) -> Result<usize, Stop> {
        if let Some(&n) = self.memo.get(&t) {
            return Ok(n);
        }
        if self.on_stack.contains(&t) {
            return Err(Stop::Cycle);
        }
        if self.seen() >= self.cap {
            return Err(Stop::Cap);
        }
        self.on_stack.insert(t.clone());
        let mut best = 0;
        for u in reducts(&t, self.rules).expect("rules checked up front") {
            best = best.max(1 + self.longest(u)?);
        }
        self.on_stack.remove(&t);
        self.memo.insert(t, best);
        Ok(best)
    }
}

/// Explores every reduction path from `t`, identifying α-equivalent terms.
pub fn reduction_graph<T: Rewrite>(
    t: &T,
    rules: &[RuleId],
    node_cap: usize,
) -> Result<GraphReport, RewriteError> {
    check_rules::<T>(rules)?;
    let mut ex = Explorer {
        rules,
        cap: node_cap.max(1),
        memo: HashMap::new(),
        on_stack: HashSet::new(),
    };
    Ok(match ex.longest(t.canonical()) {
        Ok(max_path) => GraphReport::AllPathsTerminate {
            max_path,
            nodes: ex.memo.len(),
        },
        Err(Stop::Cap) => GraphReport::CapExceeded { nodes: ex.seen() },
        Err(Stop::Cycle) => GraphReport::CycleFound { nodes: ex.seen() },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalStatus {
    Normal,
    Reducible,
}

pub fn normal_status<T: Rewrite>(t: &T, rules: &[RuleId]) -> Result<NormalStatus, RewriteError> {
    Ok(if redexes_of(t, rules)?.is_empty() {
        NormalStatus::Normal
    } else {
        NormalStatus::Reducible
    })
}

pub fn is_normal<T: Rewrite>(t: &T, rules: &[RuleId]) -> bool {
    matches!(normal_status(t, rules), Ok(NormalStatus::Normal))
}

pub fn is_cut_free(t: &VanillaTerm) -> bool {
    t.is_cut_free()
}
