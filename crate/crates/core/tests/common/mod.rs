#![allow(dead_code)]

use proptest::prelude::*;

use vanilla_core::terms::{AnyTerm, Calculus, NaturalTerm, VanillaTerm, Var};
use vanilla_core::testkit::{
    gen_cut_free, gen_natural, gen_typed_natural, gen_typed_vanilla, gen_value, gen_vanilla,
    GenConfig,
};
use vanilla_core::typing::{Formula, TypeCtx};

fn cfg(seed: u64, max_size: usize) -> GenConfig {
    GenConfig::with_seed(seed, max_size)
}

pub fn vanilla(max_size: usize) -> impl Strategy<Value = VanillaTerm> {
    any::<u64>().prop_map(move |s| gen_vanilla(&cfg(s, max_size)).unwrap().next().unwrap())
}

pub fn natural(max_size: usize) -> impl Strategy<Value = NaturalTerm> {
    any::<u64>().prop_map(move |s| gen_natural(&cfg(s, max_size)).unwrap().next().unwrap())
}

pub fn cut_free(max_size: usize) -> impl Strategy<Value = VanillaTerm> {
    any::<u64>().prop_map(move |s| gen_cut_free(&cfg(s, max_size)).unwrap().next().unwrap())
}

pub fn vanilla_value(max_size: usize) -> impl Strategy<Value = VanillaTerm> {
    any::<u64>().prop_map(move |s| {
        match gen_value(Calculus::Vanilla, &cfg(s, max_size))
            .unwrap()
            .next()
        {
            Some(AnyTerm::Vanilla(v)) => v,
            _ => unreachable!(),
        }
    })
}

pub fn natural_value(max_size: usize) -> impl Strategy<Value = NaturalTerm> {
    any::<u64>().prop_map(move |s| {
        match gen_value(Calculus::Natural, &cfg(s, max_size))
            .unwrap()
            .next()
        {
            Some(AnyTerm::Natural(n)) => n,
            _ => unreachable!(),
        }
    })
}

pub fn typed_vanilla(max_size: usize) -> impl Strategy<Value = (TypeCtx, VanillaTerm, Formula)> {
    any::<u64>().prop_map(move |s| {
        gen_typed_vanilla(&cfg(s, max_size))
            .unwrap()
            .next()
            .unwrap()
    })
}

pub fn typed_natural(max_size: usize) -> impl Strategy<Value = (TypeCtx, NaturalTerm, Formula)> {
    any::<u64>().prop_map(move |s| {
        gen_typed_natural(&cfg(s, max_size))
            .unwrap()
            .next()
            .unwrap()
    })
}

/// A variable from the generators' free pool.
pub fn pool_var() -> impl Strategy<Value = Var> {
    prop::sample::select(vec![Var::from("x"), Var::from("y"), Var::from("w")])
}
