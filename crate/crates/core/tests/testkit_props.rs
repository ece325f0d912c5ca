use proptest::prelude::*;

use vanilla_core::rewriting::{reduction_graph, RuleId};
use vanilla_core::terms::{AnyTerm, Calculus, NaturalTerm, Term, VanillaTerm};
use vanilla_core::testkit::{
    gen_cut_free, gen_typed, gen_typed_vanilla, read_corpus, write_corpus, GenConfig,
};
use vanilla_core::typing::subject_reduction_probe;

#[test]
fn every_constructor_shows_up() {
    let cfg = GenConfig::with_seed(21, 8);
    let (mut var, mut lam, mut cut, mut sub) = (0, 0, 0, 0);
    for t in gen_typed(Calculus::Vanilla, &cfg).unwrap().take(1000) {
        let AnyTerm::Vanilla(t) = t.term else {
            unreachable!()
        };
        for p in t.positions() {
            match t.subterm(&p).unwrap() {
                VanillaTerm::Var(_) => var += 1,
                VanillaTerm::Lam(..) => lam += 1,
                VanillaTerm::Cut(..) => cut += 1,
                VanillaTerm::Subtr(..) => sub += 1,
            }
        }
    }
    assert!(
        var > 0 && lam > 0 && cut > 0 && sub > 0,
        "{var} {lam} {cut} {sub}"
    );

    let (mut var, mut lam, mut app, mut es) = (0, 0, 0, 0);
    for t in gen_typed(Calculus::Natural, &cfg).unwrap().take(1000) {
        let AnyTerm::Natural(t) = t.term else {
            unreachable!()
        };
        for p in t.positions() {
            match t.subterm(&p).unwrap() {
                NaturalTerm::Var(_) => var += 1,
                NaturalTerm::Lam(..) => lam += 1,
                NaturalTerm::App(..) => app += 1,
                NaturalTerm::ESub(..) => es += 1,
            }
        }
    }
    assert!(
        var > 0 && lam > 0 && app > 0 && es > 0,
        "{var} {lam} {app} {es}"
    );
}

#[test]
fn corpus_round_trip() {
    let cfg = GenConfig::with_seed(5, 10);
    let terms: Vec<VanillaTerm> = gen_cut_free(&cfg).unwrap().take(100).collect();
    let text = write_corpus(&cfg, &terms);
    assert!(text.starts_with("# seed=5 max_size=10 atoms=X,Y pool=3\n"));
    let back: Vec<AnyTerm> = read_corpus(Calculus::Vanilla, &text).unwrap();
    assert_eq!(
        back,
        terms.into_iter().map(AnyTerm::Vanilla).collect::<Vec<_>>()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn same_config_same_stream(seed in any::<u64>(), size in 1usize..14) {
        let cfg = GenConfig::with_seed(seed, size);
        let a = write_corpus(&cfg, gen_typed(Calculus::Natural, &cfg).unwrap().take(40));
        let b = write_corpus(&cfg, gen_typed(Calculus::Natural, &cfg).unwrap().take(40));
        prop_assert_eq!(a, b);
        let a = write_corpus(&cfg, gen_cut_free(&cfg).unwrap().take(40));
        let b = write_corpus(&cfg, gen_cut_free(&cfg).unwrap().take(40));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn typed_vanilla_output_is_well_behaved(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed, 10);
        for (g, t, a) in gen_typed_vanilla(&cfg).unwrap().take(10) {
            prop_assert!(t.size() <= 10);
            prop_assert!(subject_reduction_probe(&g, &t, &a).unwrap().ok());
            prop_assert!(reduction_graph(&t, &[RuleId::CutElim], 10_000).unwrap().terminates());
        }
    }
}
