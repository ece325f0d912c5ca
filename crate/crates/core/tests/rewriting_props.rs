mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use vanilla_core::rewriting::{
    is_normal, natural_redexes, normalize, reduction_graph, step_vanilla, vanilla_redexes, RuleId,
    RuleSet, Strategy, TraceStatus,
};
use vanilla_core::terms::{NaturalTerm, Position, Term, VanillaTerm, Var};

fn beta_positions(t: &NaturalTerm) -> BTreeSet<Position> {
    t.positions()
        .into_iter()
        .filter(|p| matches!(t.subterm(p), Some(NaturalTerm::App(f, _)) if matches!(**f, NaturalTerm::Lam(..))))
        .collect()
}

fn positions_of(t: &NaturalTerm, rule: RuleId) -> BTreeSet<Position> {
    natural_redexes(t, &[rule])
        .into_iter()
        .map(|r| r.at)
        .collect()
}

proptest! {
    #[test]
    fn cuts_are_never_stuck(t in vanilla(12)) {
        let has_cut = t.cut_count() > 0;
        prop_assert_eq!(!vanilla_redexes(&t, &[RuleId::CutElim]).is_empty(), has_cut);
        prop_assert_eq!(is_normal(&t, &[RuleId::CutElim]), t.is_cut_free());
    }

    #[test]
    fn sc_normal_forms_have_no_substitutions(t in natural(10)) {
        let run = normalize(&t, RuleSet::Sc.rules(), Strategy::LeftmostOutermost, 200).unwrap();
        if run.status == TraceStatus::Normal {
            prop_assert_eq!(run.last().esub_count(), 0);
        }
    }

    #[test]
    fn beta_restrictions_nest(t in natural(12)) {
        let weak = positions_of(&t, RuleId::BetaVWeak);
        let strong = positions_of(&t, RuleId::BetaVStrong);
        prop_assert!(weak.is_subset(&strong));
        prop_assert!(strong.is_subset(&beta_positions(&t)));
    }

    #[test]
    fn renaming_steps_shrink(t in vanilla(12)) {
        for r in vanilla_redexes(&t, &[RuleId::RenCut]) {
            let u = step_vanilla(&t, &r).unwrap();
            prop_assert!(u.size() < t.size());
        }
    }

    #[test]
    fn root_cut_expansion(s in vanilla(6), t in vanilla(6)) {
        let x = Var::from("x");
        let cut = VanillaTerm::cut(s.clone(), x, t);
        let reduct = step_vanilla(&cut, &vanilla_redexes(&cut, &[RuleId::CutElim])[0]).unwrap();
        let rules = [RuleId::CutElim];
        if reduction_graph(&s, &rules, 2_000).unwrap().terminates()
            && reduction_graph(&reduct, &rules, 2_000).unwrap().terminates()
        {
            prop_assert!(reduction_graph(&cut, &rules, 20_000).unwrap().terminates());
        }
    }

    #[test]
    fn renaming_a_free_variable_keeps_termination(t in vanilla(10), x in pool_var(), y in pool_var()) {
        let rules = [RuleId::CutElim];
        let before = reduction_graph(&t, &rules, 2_000).unwrap();
        if before.terminates() {
            let u = t.rename_free(&x, &y);
            prop_assert!(reduction_graph(&u, &rules, 20_000).unwrap().terminates());
        }
    }

    #[test]
    fn strategies_agree_on_cut_normal_forms((_, t, _) in typed_vanilla(10)) {
        let lo = normalize(&t, &[RuleId::CutElim], Strategy::LeftmostOutermost, 500).unwrap();
        let ri = normalize(&t, &[RuleId::CutElim], Strategy::RightmostInnermost, 500).unwrap();
        prop_assert_eq!(lo.status, TraceStatus::Normal);
        prop_assert_eq!(ri.status, TraceStatus::Normal);
        prop_assert!(lo.last().is_cut_free() && ri.last().is_cut_free());
    }
}
