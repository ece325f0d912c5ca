use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::terms::{AnyTerm, Calculus, NaturalTerm, VanillaTerm, Var};
use crate::typing::{check_nd, check_sc, Formula, TypeCtx};

use super::{GenConfig, GenError};

const FREE_NAMES: [&str; 10] = ["x", "y", "w", "u", "v", "p", "q", "r", "s", "t"];

fn free_var(i: usize) -> Var {
    Var::new(
        FREE_NAMES[i % FREE_NAMES.len()],
        (i / FREE_NAMES.len()) as u32,
    )
}

/// Calculus-neutral syntax built by the generators.
#[derive(Clone)]
enum Raw {
    Var(Var),
    Lam(Var, Box<Raw>),
    App(Box<Raw>, Box<Raw>),
    Cut(Box<Raw>, Var, Box<Raw>),
    Subtr(Var, Box<Raw>, Var, Box<Raw>),
}

impl Raw {
    fn natural(&self) -> NaturalTerm {
        match self {
            Raw::Var(x) => NaturalTerm::var(x.clone()),
            Raw::Lam(x, b) => NaturalTerm::lam(x.clone(), b.natural()),
            Raw::App(f, a) => NaturalTerm::app(f.natural(), a.natural()),
            Raw::Cut(c, x, b) => NaturalTerm::esub(c.natural(), x.clone(), b.natural()),
            Raw::Subtr(..) => unreachable!("no subtraction in natural terms"),
        }
    }

    fn vanilla(&self) -> VanillaTerm {
        match self {
            Raw::Var(x) => VanillaTerm::var(x.clone()),
            Raw::Lam(x, b) => VanillaTerm::lam(x.clone(), b.vanilla()),
            Raw::Cut(c, x, b) => VanillaTerm::cut(c.vanilla(), x.clone(), b.vanilla()),
            Raw::Subtr(y, c, x, b) => {
                VanillaTerm::subtr(y.clone(), c.vanilla(), x.clone(), b.vanilla())
            }
            Raw::App(..) => unreachable!("no application in vanilla terms"),
        }
    }

    fn size(&self) -> usize {
        match self {
            Raw::Var(_) => 1,
            Raw::Lam(_, b) => 1 + b.size(),
            Raw::App(f, a) => 1 + f.size() + a.size(),
            Raw::Cut(c, _, b) | Raw::Subtr(_, c, _, b) => 1 + c.size() + b.size(),
        }
    }

    fn into_term(self, calculus: Calculus) -> AnyTerm {
        match calculus {
            Calculus::Natural => AnyTerm::Natural(self.natural()),
            Calculus::Vanilla => AnyTerm::Vanilla(self.vanilla()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    Var,
    Lam,
    App,
    Cut,
    Subtr,
}

impl Shape {
    fn min_size(self) -> usize {
        match self {
            Shape::Var => 1,
            Shape::Lam => 2,
            _ => 3,
        }
    }
}

/// Orders candidates at random, heavier weights first more often.
fn weighted_order<R: Rng>(rng: &mut R, items: &[(Shape, f64)]) -> Vec<Shape> {
    let mut keyed: Vec<(f64, Shape)> = items
        .iter()
        .map(|&(s, w)| (rng.gen::<f64>().powf(1.0 / w), s))
        .collect();
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0));
    keyed.into_iter().map(|(_, s)| s).collect()
}

/// The larger of two uniform draws, so bigger terms are more common.
fn draw_budget<R: Rng>(rng: &mut R, max: usize) -> usize {
    rng.gen_range(1..=max).max(rng.gen_range(1..=max))
}

/// Leaves get rarer as the budget grows, so sizes spread over the range.
fn var_weight(budget: usize) -> f64 {
    2.0 / budget as f64
}

/// Budget of the first of two premises: half, plus the remainder.
/// The second premise gets whatever the first leaves unused.
fn first_half(budget: usize) -> usize {
    let rest = budget - 1;
    rest - rest / 2
}

fn second(budget: usize, first: &Raw) -> usize {
    budget - 1 - first.size()
}

struct Builder<'a> {
    rng: &'a mut ChaCha8Rng,
    calculus: Calculus,
    atoms: &'a [Formula],
    fuel: usize,
    next_binder: u32,
}

impl Builder<'_> {
    fn binder(&mut self) -> Var {
        self.next_binder += 1;
        Var::new("z", self.next_binder - 1)
    }

    fn formula(&mut self, max: usize) -> Formula {
        if max < 3 || self.rng.gen_bool(0.5) {
            return self.atoms.choose(self.rng).expect("atoms").clone();
        }
        let left = self.rng.gen_range(1..=(max - 2));
        let a = self.formula(left);
        let b = self.formula(max - 1 - left);
        Formula::imp(a, b)
    }

    /// A formula for a cut: a subformula of something in scope, or random.
    fn cut_formula(&mut self, ctx: &[(Var, Formula)], goal: &Formula) -> Formula {
        if self.rng.gen_bool(0.5) {
            let mut pool = Vec::new();
            for f in ctx.iter().map(|(_, f)| f).chain(std::iter::once(goal)) {
                collect_subformulas(f, &mut pool);
            }
            pool.choose(self.rng).expect("goal is a subformula").clone()
        } else {
            self.formula(3)
        }
    }

    fn typed(
        &mut self,
        ctx: &mut Vec<(Var, Formula)>,
        goal: &Formula,
        budget: usize,
    ) -> Option<Raw> {
        if self.fuel == 0 {
            return None;
        }
        self.fuel -= 1;
        let heads: Vec<usize> = (0..ctx.len())
            .filter(|&i| matches!(ctx[i].1, Formula::Imp(..)))
            .collect();
        let mut cands = vec![(Shape::Var, var_weight(budget)), (Shape::Cut, 2.0)];
        if matches!(goal, Formula::Imp(..)) {
            cands.push((Shape::Lam, 3.0));
        }
        match self.calculus {
            Calculus::Natural => cands.push((Shape::App, 3.0)),
            Calculus::Vanilla if !heads.is_empty() => cands.push((Shape::Subtr, 3.0)),
            Calculus::Vanilla => {}
        }
        cands.retain(|(s, _)| s.min_size() <= budget);
        for shape in weighted_order(self.rng, &cands) {
            let got = match shape {
                Shape::Var => {
                    let hits: Vec<&Var> = ctx
                        .iter()
                        .filter(|(_, f)| f == goal)
                        .map(|(x, _)| x)
                        .collect();
                    hits.choose(self.rng).map(|x| Raw::Var((*x).clone()))
                }
                Shape::Lam => {
                    let Formula::Imp(a, b) = goal else {
                        unreachable!()
                    };
                    let x = self.binder();
                    ctx.push((x.clone(), (**a).clone()));
                    let body = self.typed(ctx, b, budget - 1);
                    ctx.pop();
                    body.map(|b| Raw::Lam(x, Box::new(b)))
                }
                Shape::Cut => {
                    let a = self.cut_formula(ctx, goal);
                    let c = self.typed(ctx, &a, first_half(budget));
                    match c {
                        Some(c) => {
                            let x = self.binder();
                            ctx.push((x.clone(), a));
                            let body = self.typed(ctx, goal, second(budget, &c));
                            ctx.pop();
                            body.map(|b| Raw::Cut(Box::new(c), x, Box::new(b)))
                        }
                        None => None,
                    }
                }
                Shape::Subtr => {
                    let i = *heads.choose(self.rng).expect("nonempty");
                    let (y, Formula::Imp(a, b)) = ctx[i].clone() else {
                        unreachable!()
                    };
                    match self.typed(ctx, &a, first_half(budget)) {
                        Some(c) => {
                            let x = self.binder();
                            ctx.push((x.clone(), (*b).clone()));
                            let body = self.typed(ctx, goal, second(budget, &c));
                            ctx.pop();
                            body.map(|t| Raw::Subtr(y, Box::new(c), x, Box::new(t)))
                        }
                        None => None,
                    }
                }
                Shape::App => {
                    let a = self.cut_formula(ctx, goal);
                    let f = self.typed(
                        ctx,
                        &Formula::imp(a.clone(), goal.clone()),
                        first_half(budget),
                    );
                    match f {
                        Some(f) => {
                            let rest = second(budget, &f);
                            self.typed(ctx, &a, rest)
                                .map(|s| Raw::App(Box::new(f), Box::new(s)))
                        }
                        None => None,
                    }
                }
            };
            if got.is_some() {
                return got;
            }
        }
        None
    }

    fn untyped(&mut self, scope: &mut Vec<Var>, budget: usize, shapes: &[Shape]) -> Raw {
        let cands: Vec<(Shape, f64)> = shapes
            .iter()
            .filter(|s| s.min_size() <= budget)
            .map(|&s| {
                (
                    s,
                    if s == Shape::Var {
                        var_weight(budget)
                    } else {
                        2.0
                    },
                )
            })
            .collect();
        let shape = weighted_order(self.rng, &cands)[0];
        self.untyped_shape(scope, budget, shapes, shape)
    }

    fn untyped_shape(
        &mut self,
        scope: &mut Vec<Var>,
        budget: usize,
        shapes: &[Shape],
        shape: Shape,
    ) -> Raw {
        match shape {
            Shape::Var => Raw::Var(scope.choose(self.rng).expect("nonempty scope").clone()),
            Shape::Lam => {
                let x = self.binder();
                scope.push(x.clone());
                let b = self.untyped(scope, budget - 1, shapes);
                scope.pop();
                Raw::Lam(x, Box::new(b))
            }
            Shape::App => {
                let f = self.untyped(scope, first_half(budget), shapes);
                let a = self.untyped(scope, second(budget, &f), shapes);
                Raw::App(Box::new(f), Box::new(a))
            }
            Shape::Cut | Shape::Subtr => {
                let head = scope.choose(self.rng).expect("nonempty scope").clone();
                let c = self.untyped(scope, first_half(budget), shapes);
                let x = self.binder();
                scope.push(x.clone());
                let b = self.untyped(scope, second(budget, &c), shapes);
                scope.pop();
                if shape == Shape::Cut {
                    Raw::Cut(Box::new(c), x, Box::new(b))
                } else {
                    Raw::Subtr(head, Box::new(c), x, Box::new(b))
                }
            }
        }
    }
}

fn collect_subformulas(f: &Formula, out: &mut Vec<Formula>) {
    out.push(f.clone());
    if let Formula::Imp(a, b) = f {
        collect_subformulas(a, out);
        collect_subformulas(b, out);
    }
}

/// A checked typing triple `ctx ⊢ term : formula`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typed {
    pub ctx: TypeCtx,
    pub term: AnyTerm,
    pub formula: Formula,
}

impl fmt::Display for Typed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {} : {}", self.ctx, self.term, self.formula)
    }
}

/// Endless stream of well-typed triples. Every triple is re-checked by the
/// type checker before it is emitted.
pub struct TypedStream {
    rng: ChaCha8Rng,
    cfg: GenConfig,
    calculus: Calculus,
    atoms: Vec<Formula>,
    /// Generated triples the checker refused. Nonzero means a generator bug.
    pub rejected: usize,
}

impl TypedStream {
    fn attempt(&mut self) -> Option<Typed> {
        let n_vars = self.rng.gen_range(1..=self.cfg.variable_pool);
        let budget = draw_budget(&mut self.rng, self.cfg.max_size);
        let mut b = Builder {
            rng: &mut self.rng,
            calculus: self.calculus,
            atoms: &self.atoms,
            fuel: 400,
            next_binder: 0,
        };
        let mut ctx: Vec<(Var, Formula)> =
            (0..n_vars).map(|i| (free_var(i), b.formula(3))).collect();
        let goal = b.formula(budget.min(3));
        let raw = b.typed(&mut ctx, &goal, budget)?;
        Some(Typed {
            ctx: ctx.into_iter().collect(),
            term: raw.into_term(self.calculus),
            formula: goal,
        })
    }
}

impl Iterator for TypedStream {
    type Item = Typed;

    fn next(&mut self) -> Option<Typed> {
        loop {
            let Some(t) = self.attempt() else { continue };
            let ok = match &t.term {
                AnyTerm::Natural(n) => check_nd(&t.ctx, n, &t.formula).is_ok(),
                AnyTerm::Vanilla(v) => check_sc(&t.ctx, v, &t.formula).is_ok(),
            };
            if ok {
                return Some(t);
            }
            self.rejected += 1;
        }
    }
}

/// Well-typed triples built top-down by rule, with backtracking.
pub fn gen_typed(calculus: Calculus, cfg: &GenConfig) -> Result<TypedStream, GenError> {
    cfg.validate()?;
    Ok(TypedStream {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        cfg: cfg.clone(),
        calculus,
        atoms: cfg.atom_universe.iter().map(|a| Formula::atom(a)).collect(),
        rejected: 0,
    })
}

pub fn gen_typed_vanilla(
    cfg: &GenConfig,
) -> Result<impl Iterator<Item = (TypeCtx, VanillaTerm, Formula)>, GenError> {
    Ok(gen_typed(Calculus::Vanilla, cfg)?.map(|t| match t.term {
        AnyTerm::Vanilla(v) => (t.ctx, v, t.formula),
        AnyTerm::Natural(_) => unreachable!(),
    }))
}

pub fn gen_typed_natural(
    cfg: &GenConfig,
) -> Result<impl Iterator<Item = (TypeCtx, NaturalTerm, Formula)>, GenError> {
    Ok(gen_typed(Calculus::Natural, cfg)?.map(|t| match t.term {
        AnyTerm::Natural(n) => (t.ctx, n, t.formula),
        AnyTerm::Vanilla(_) => unreachable!(),
    }))
}

fn untyped_stream(
    cfg: &GenConfig,
    calculus: Calculus,
    shapes: &'static [Shape],
    root: Option<&'static [Shape]>,
) -> Result<impl Iterator<Item = AnyTerm>, GenError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cfg = cfg.clone();
    Ok(std::iter::from_fn(move || {
        let budget = draw_budget(&mut rng, cfg.max_size);
        let mut scope: Vec<Var> = (0..cfg.variable_pool).map(free_var).collect();
        let mut b = Builder {
            rng: &mut rng,
            calculus,
            atoms: &[],
            fuel: 0,
            next_binder: 0,
        };
        let raw = match root {
            Some(roots) => {
                let fits: Vec<Shape> = roots
                    .iter()
                    .copied()
                    .filter(|s| s.min_size() <= budget)
                    .collect();
                let shape = *fits.choose(b.rng).expect("variables always fit");
                b.untyped_shape(&mut scope, budget, shapes, shape)
            }
            None => b.untyped(&mut scope, budget, shapes),
        };
        Some(raw.into_term(calculus))
    }))
}

const NATURAL_SHAPES: &[Shape] = &[Shape::Var, Shape::Lam, Shape::App, Shape::Cut];
const VANILLA_SHAPES: &[Shape] = &[Shape::Var, Shape::Lam, Shape::Cut, Shape::Subtr];
const CUT_FREE_SHAPES: &[Shape] = &[Shape::Var, Shape::Lam, Shape::Subtr];
const VALUE_SHAPES: &[Shape] = &[Shape::Var, Shape::Lam];

/// Untyped terms with distinct binders over the variable pool.
pub fn gen_untyped(
    calculus: Calculus,
    cfg: &GenConfig,
) -> Result<impl Iterator<Item = AnyTerm>, GenError> {
    let shapes = match calculus {
        Calculus::Natural => NATURAL_SHAPES,
        Calculus::Vanilla => VANILLA_SHAPES,
    };
    untyped_stream(cfg, calculus, shapes, None)
}

pub fn gen_natural(cfg: &GenConfig) -> Result<impl Iterator<Item = NaturalTerm>, GenError> {
    Ok(
        untyped_stream(cfg, Calculus::Natural, NATURAL_SHAPES, None)?.map(|t| match t {
            AnyTerm::Natural(n) => n,
            AnyTerm::Vanilla(_) => unreachable!(),
        }),
    )
}

pub fn gen_vanilla(cfg: &GenConfig) -> Result<impl Iterator<Item = VanillaTerm>, GenError> {
    Ok(
        untyped_stream(cfg, Calculus::Vanilla, VANILLA_SHAPES, None)?.map(|t| match t {
            AnyTerm::Vanilla(v) => v,
            AnyTerm::Natural(_) => unreachable!(),
        }),
    )
}

/// Vanilla terms without cuts: variables, abstractions and subtractions.
pub fn gen_cut_free(cfg: &GenConfig) -> Result<impl Iterator<Item = VanillaTerm>, GenError> {
    Ok(
        untyped_stream(cfg, Calculus::Vanilla, CUT_FREE_SHAPES, None)?.map(|t| match t {
            AnyTerm::Vanilla(v) => v,
            AnyTerm::Natural(_) => unreachable!(),
        }),
    )
}

/// Values: a variable or an abstraction over an arbitrary body.
pub fn gen_value(
    calculus: Calculus,
    cfg: &GenConfig,
) -> Result<impl Iterator<Item = AnyTerm>, GenError> {
    let shapes = match calculus {
        Calculus::Natural => NATURAL_SHAPES,
        Calculus::Vanilla => VANILLA_SHAPES,
    };
    untyped_stream(cfg, calculus, shapes, Some(VALUE_SHAPES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Term;

    #[test]
    fn typed_streams_are_checked_and_deterministic() {
        let cfg = GenConfig::with_seed(7, 8);
        let a: Vec<Typed> = gen_typed(Calculus::Vanilla, &cfg)
            .unwrap()
            .take(50)
            .collect();
        let b: Vec<Typed> = gen_typed(Calculus::Vanilla, &cfg)
            .unwrap()
            .take(50)
            .collect();
        assert_eq!(a, b);
        let mut s = gen_typed(Calculus::Natural, &cfg).unwrap();
        for t in s.by_ref().take(50) {
            let AnyTerm::Natural(n) = &t.term else {
                panic!()
            };
            assert!(n.size() <= 8);
        }
        assert_eq!(s.rejected, 0);
    }

    #[test]
    fn size_one_yields_variables() {
        let cfg = GenConfig::with_seed(1, 1);
        for t in gen_typed(Calculus::Vanilla, &cfg).unwrap().take(20) {
            let AnyTerm::Vanilla(VanillaTerm::Var(x)) = &t.term else {
                panic!("{t}")
            };
            assert_eq!(t.ctx.get(x), Some(&t.formula));
            assert!(matches!(t.formula, Formula::Atom(_)));
        }
    }

    #[test]
    fn zero_budget_is_exhausted() {
        assert_eq!(
            gen_typed(Calculus::Natural, &GenConfig::with_seed(0, 0)).err(),
            Some(GenError::GenerationExhausted(0))
        );
    }

    #[test]
    fn untyped_shapes() {
        let cfg = GenConfig::with_seed(3, 9);
        assert!(gen_cut_free(&cfg)
            .unwrap()
            .take(200)
            .all(|t| t.is_cut_free() && t.size() <= 9));
        assert!(gen_value(Calculus::Natural, &cfg)
            .unwrap()
            .take(200)
            .all(|t| match t {
                AnyTerm::Natural(n) => n.is_value(),
                AnyTerm::Vanilla(_) => false,
            }));
    }
}
