//! Structural equivalence: moving cuts and subtractions across weak
//! contexts, a bounded search for equivalence, and bisimulation probes.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde_json::json;
use thiserror::Error;

use crate::rewriting::{step_vanilla, vanilla_redexes, Redex, RuleId};
use crate::terms::{Position, Selector, Term, VanillaTerm, Var};

/// A hole position inside a vanilla term that does not cross an abstraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeakCtx {
    pub hole: Position,
}

impl WeakCtx {
    pub fn new(hole: Position) -> Option<WeakCtx> {
        (!hole.selectors().contains(&Selector::LamBody)).then_some(WeakCtx { hole })
    }

    /// Variables captured at the hole.
    pub fn dom(&self, t: &VanillaTerm) -> BTreeSet<Var> {
        t.binders_along(&self.hole)
            .unwrap_or_default()
            .into_iter()
            .collect()
    }

    /// Free variables of the context, not counting the hole.
    pub fn free_vars(&self, t: &VanillaTerm) -> BTreeSet<Var> {
        let marker = Var::new("hole", 0).renamed(&t.all_vars());
        let filled = t
            .replace_at(&self.hole, VanillaTerm::var(marker.clone()))
            .expect("hole inside the term");
        let mut fv = filled.free_vars();
        fv.remove(&marker);
        fv
    }
}

/// Weak hole positions of `t` other than the root.
pub fn weak_holes(t: &VanillaTerm) -> Vec<WeakCtx> {
    t.positions()
        .into_iter()
        .filter(|p| !p.is_root())
        .filter_map(WeakCtx::new)
        .collect()
}

/// The frame being moved: a cut or a subtraction with its hole side removed.
enum Mover {
    Cut(VanillaTerm, Var),
    Subtr(Var, VanillaTerm, Var),
}

impl Mover {
    fn of(t: &VanillaTerm) -> Option<(Mover, &VanillaTerm)> {
        match t {
            VanillaTerm::Cut(c, x, b) => Some((Mover::Cut((**c).clone(), x.clone()), &**b)),
            VanillaTerm::Subtr(y, c, x, b) => {
                Some((Mover::Subtr(y.clone(), (**c).clone(), x.clone()), &**b))
            }
            _ => None,
        }
    }

    fn wrap(&self, body: VanillaTerm) -> VanillaTerm {
        match self {
            Mover::Cut(c, x) => VanillaTerm::cut(c.clone(), x.clone(), body),
            Mover::Subtr(y, c, x) => VanillaTerm::subtr(y.clone(), c.clone(), x.clone(), body),
        }
    }

    fn binder(&self) -> &Var {
        match self {
            Mover::Cut(_, x) | Mover::Subtr(_, _, x) => x,
        }
    }

    /// Variables that must not be captured by the context.
    fn needs(&self) -> BTreeSet<Var> {
        match self {
            Mover::Cut(c, _) => c.free_vars(),
            Mover::Subtr(y, c, _) => {
                let mut s = c.free_vars();
                s.insert(y.clone());
                s
            }
        }
    }

    /// Whether the frame may cross context `w` of `host`.
    fn can_cross(&self, w: &WeakCtx, host: &VanillaTerm) -> bool {
        let dom = w.dom(host);
        !w.free_vars(host).contains(self.binder())
            && !dom.contains(self.binder())
            && self.needs().is_disjoint(&dom)
    }
}

/// Both directions of the root rules at the root of `t`.
fn moves_at_root(t: &VanillaTerm) -> Vec<VanillaTerm> {
    let mut out = Vec::new();
    // push the root frame into a weak context of its body
    if let Some((m, body)) = Mover::of(t) {
        for w in weak_holes(body) {
            if m.can_cross(&w, body) {
                let inner = body.subterm(&w.hole).expect("hole").clone();
                out.push(body.replace_at(&w.hole, m.wrap(inner)).expect("hole"));
            }
        }
    }
    // pull a frame out of a weak context to the root
    for w in weak_holes(t) {
        let Some((m, rest)) = Mover::of(t.subterm(&w.hole).expect("hole")) else {
            continue;
        };
        let host = t.replace_at(&w.hole, rest.clone()).expect("hole");
        if m.can_cross(&w, &host) {
            out.push(m.wrap(host));
        }
    }
    out
}

/// All terms one move away from `t`, at any position, modulo α.
pub fn root_moves(t: &VanillaTerm) -> Vec<VanillaTerm> {
    // distinct binders make the capture side conditions meaningful
    let t = t.canonical();
    let mut seen = HashSet::from([t.clone()]);
    let mut out = Vec::new();
    for p in t.positions() {
        let sub = t.subterm(&p).expect("own position");
        for m in moves_at_root(sub) {
            let u = t.replace_at(&p, m).expect("own position").canonical();
            if seen.insert(u.clone()) {
                out.push(u);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// Terms from `t` to `u`, endpoints included, each one move apart.
    Equivalent(Vec<VanillaTerm>),
    /// Inconclusive: nothing found within the budget.
    NotFound { explored: usize },
}

impl Equivalence {
    pub fn found(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }

    pub fn moves(&self) -> Option<usize> {
        match self {
            Equivalence::Equivalent(p) => Some(p.len() - 1),
            Equivalence::NotFound { .. } => None,
        }
    }
}

/// Breadth-first search for `u` from `t` using at most `budget` moves.
pub fn equiv_bounded(t: &VanillaTerm, u: &VanillaTerm, budget: usize) -> Equivalence {
    let (start, goal) = (t.canonical(), u.canonical());
    let mut parent: HashMap<VanillaTerm, Option<VanillaTerm>> =
        HashMap::from([(start.clone(), None)]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((cur, depth)) = queue.pop_front() {
        if cur == goal {
            let mut path = vec![cur.clone()];
            let mut at = cur;
            while let Some(Some(prev)) = parent.get(&at) {
                path.push(prev.clone());
                at = prev.clone();
            }
            path.reverse();
            return Equivalence::Equivalent(path);
        }
        if depth == budget {
            continue;
        }
        for next in root_moves(&cur) {
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some(cur.clone()));
                queue.push_back((next, depth + 1));
            }
        }
    }
    Equivalence::NotFound {
        explored: parent.len(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A closed square: `step` from one side, matched by `answer` from the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub side: Side,
    pub step: Redex,
    pub reduct: VanillaTerm,
    pub answer: Redex,
    pub answer_reduct: VanillaTerm,
    pub moves: usize,
}

impl Diagram {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "side": match self.side { Side::Left => "left", Side::Right => "right" },
            "step": self.step.to_string(),
            "reduct": self.reduct.to_string(),
            "answer": self.answer.to_string(),
            "answer_reduct": self.answer_reduct.to_string(),
            "moves": self.moves,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("no chain of at most {budget} moves relates the two terms")]
    NotEquivalent { budget: usize },
    #[error("diagram failure: {step} to {reduct} has no matching step")]
    DiagramFailure {
        side: Side,
        step: Redex,
        reduct: VanillaTerm,
    },
}

/// Closes every cut-elimination diagram between equivalent `t` and `u`.
pub fn bisim_probe(
    t: &VanillaTerm,
    u: &VanillaTerm,
    budget: usize,
) -> Result<Vec<Diagram>, ProbeError> {
    if !equiv_bounded(t, u, budget).found() {
        return Err(ProbeError::NotEquivalent { budget });
    }
    let mut out = close(t, u, budget, Side::Left)?;
    out.extend(close(u, t, budget, Side::Right)?);
    Ok(out)
}

fn close(
    t: &VanillaTerm,
    u: &VanillaTerm,
    budget: usize,
    side: Side,
) -> Result<Vec<Diagram>, ProbeError> {
    let answers: Vec<(Redex, VanillaTerm)> = vanilla_redexes(u, &[RuleId::CutElim])
        .into_iter()
        .map(|r| {
            let v = step_vanilla(u, &r).expect("own redex");
            (r, v)
        })
        .collect();
    let mut out = Vec::new();
    for r in vanilla_redexes(t, &[RuleId::CutElim]) {
        let t2 = step_vanilla(t, &r).expect("own redex");
        let hit = answers
            .iter()
            .find_map(|(a, u2)| equiv_bounded(&t2, u2, budget).moves().map(|m| (a, u2, m)));
        match hit {
            Some((a, u2, moves)) => out.push(Diagram {
                side,
                step: r,
                reduct: t2,
                answer: a.clone(),
                answer_reduct: u2.clone(),
                moves,
            }),
            None => {
                return Err(ProbeError::DiagramFailure {
                    side,
                    step: r,
                    reduct: t2,
                })
            }
        }
    }
    Ok(out)
}

/// A step of a mixed sequence: cut elimination or one equivalence move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MixedStep {
    Cut(Redex),
    Move(VanillaTerm),
}

/// Rebuilds a mixed sequence from `t` as cut-elimination steps only,
/// answering each step through the bisimulation. Returns the pure
/// sequence's reducts and the moves relating its end to the mixed end.
pub fn postpone(
    t: &VanillaTerm,
    mixed: &[MixedStep],
    budget: usize,
) -> Result<(Vec<VanillaTerm>, Equivalence), ProbeError> {
    let mut pure = t.clone();
    let mut cur = t.clone();
    let mut trail = Vec::new();
    for s in mixed {
        match s {
            MixedStep::Move(next) => cur = next.clone(),
            MixedStep::Cut(r) => {
                let next = step_vanilla(&cur, r).map_err(|_| ProbeError::DiagramFailure {
                    side: Side::Left,
                    step: r.clone(),
                    reduct: cur.clone(),
                })?;
                let answer = vanilla_redexes(&pure, &[RuleId::CutElim])
                    .into_iter()
                    .map(|a| step_vanilla(&pure, &a).expect("own redex"))
                    .find(|p| equiv_bounded(p, &next, budget).found());
                match answer {
                    Some(p) => {
                        pure = p.clone();
                        trail.push(p);
                    }
                    None => {
                        return Err(ProbeError::DiagramFailure {
                            side: Side::Left,
                            step: r.clone(),
                            reduct: next,
                        })
                    }
                }
                cur = next;
            }
        }
    }
    let link = equiv_bounded(&pure, &cur, budget);
    Ok((trail, link))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_vanilla;

    fn v(s: &str) -> VanillaTerm {
        parse_vanilla(s).unwrap()
    }

    #[test]
    fn independent_cuts_swap() {
        let t = v("let x = s in let y = u in t");
        let swapped = v("let y = u in let x = s in t").canonical();
        assert!(root_moves(&t).contains(&swapped));
        assert_eq!(equiv_bounded(&t, &swapped, 1).moves(), Some(1));
    }

    #[test]
    fn dependent_cuts_stay_put() {
        let t = v("let x = s in let y = x in y");
        let swapped = v("let y = x in let x = s in y").canonical();
        assert!(!root_moves(&t).iter().any(|u| u.alpha_eq(&swapped)));
    }

    #[test]
    fn no_moves_under_abstractions() {
        let t = v(r"let x = s in \z. t");
        let under = v(r"\z. let x = s in t");
        assert!(!root_moves(&t).iter().any(|u| u.alpha_eq(&under)));
        assert!(!equiv_bounded(&t, &under, 6).found());
        assert!(root_moves(&v("x")).is_empty());
    }

    #[test]
    fn cut_moves_into_a_content() {
        let t = v("let x = s in let y = u in t");
        let into = v("let y = (let x = s in u) in t").canonical();
        // x is not free in `t`, so the cut may sink into the content
        assert!(root_moves(&t).contains(&into));
    }

    #[test]
    fn subtraction_head_blocks_capture() {
        let t = v("let z = w in let x = z @ s in x");
        let pushed = v("let x = z @ s in let z = w in x");
        assert!(!root_moves(&t).iter().any(|u| u.alpha_eq(&pushed)));
    }

    #[test]
    fn bisim_closes_on_independent_cuts() {
        let t = v(r"let x = \a. a in let y = \b. b in let z = y @ x in z");
        for u in root_moves(&t) {
            let ds = bisim_probe(&t, &u, 3).unwrap();
            assert!(!ds.is_empty());
        }
        assert!(bisim_probe(&t, &t, 0).is_ok());
    }

    #[test]
    fn postponement_on_a_short_sequence() {
        let t = v(r"let x = \a. a in let y = \b. b in let z = y @ x in z");
        let moved = root_moves(&t)[0].clone();
        let r = vanilla_redexes(&moved, &[RuleId::CutElim])[0].clone();
        let (pure, link) = postpone(&t, &[MixedStep::Move(moved), MixedStep::Cut(r)], 4).unwrap();
        assert_eq!(pure.len(), 1);
        assert!(link.found());
    }
}
