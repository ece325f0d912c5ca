mod common;

use proptest::prelude::*;

use common::*;
use vanilla_core::rewriting::{
    is_normal, natural_redexes, normalize, vanilla_redexes, RuleId, RuleSet, Strategy, TraceStatus,
};
use vanilla_core::terms::{plug, plug_natural, split, split_natural, subst_nd, subst_value, Term};
use vanilla_core::translate::{
    left_ctx_to_natural, nd_to_sc, sc_to_nd, simulate_cut_in_vsc, simulate_cut_run,
    simulate_vsc_in_vanilla, simulate_vsc_run, strip_renaming_cuts, subst_ctx_to_vanilla,
};

proptest! {
    #[test]
    fn cut_free_images_are_vsc_normal(t in cut_free(12)) {
        prop_assert!(is_normal(&sc_to_nd(&t), RuleSet::Vsc.rules()));
    }

    #[test]
    fn nd_translation_commutes_with_substitution(t in natural(12), v in natural_value(5), x in pool_var()) {
        let lhs = nd_to_sc(&subst_nd(&t, &x, &v));
        let rhs = subst_value(&nd_to_sc(&v), &x, &nd_to_sc(&t)).unwrap();
        prop_assert!(lhs.alpha_eq(&rhs));
    }

    #[test]
    fn sc_translation_commutes_up_to_db(t in vanilla(12), v in vanilla_value(5), x in pool_var()) {
        let start = subst_nd(&sc_to_nd(&t), &x, &sc_to_nd(&v));
        let goal = sc_to_nd(&subst_value(&v, &x, &t).unwrap());
        let run = normalize(&start, &[RuleId::DbAtDistance], Strategy::LeftmostOutermost, 500).unwrap();
        prop_assert_eq!(run.status, TraceStatus::Normal);
        prop_assert!(run.last().alpha_eq(&goal));
    }

    #[test]
    fn contexts_commute_with_plugging(t in vanilla(12), u in vanilla(5), n in natural(12), m in natural(5)) {
        let (l, _) = split(&t);
        prop_assert_eq!(sc_to_nd(&plug(&l, u.clone())), plug_natural(&left_ctx_to_natural(&l), sc_to_nd(&u)));
        let (s, _) = split_natural(&n);
        let lhs = nd_to_sc(&plug_natural(&s, m.clone()));
        let rhs = plug(&subst_ctx_to_vanilla(&s), nd_to_sc(&m));
        prop_assert!(lhs.alpha_eq(&rhs));
    }

    #[test]
    fn step_counts(t in vanilla(12), n in natural(12)) {
        for r in vanilla_redexes(&t, &[RuleId::CutElim]) {
            let rep = simulate_cut_in_vsc(&t, &r).unwrap();
            prop_assert_eq!(rep.target.rules().iter().filter(|&&r| r == RuleId::VsSub).count(), 1);
        }
        for r in natural_redexes(&n, RuleSet::Vsc.rules()) {
            let rep = simulate_vsc_in_vanilla(&n, &r).unwrap();
            let want = if r.rule == RuleId::DbAtDistance { 2 } else { 1 };
            prop_assert_eq!(rep.target.len(), want);
        }
    }

    #[test]
    fn terminating_vsc_runs_map_to_almost_cut_free_ends((_, t, _) in typed_natural(10)) {
        let run = normalize(&t, RuleSet::Vsc.rules(), Strategy::LeftmostOutermost, 500).unwrap();
        prop_assert_eq!(run.status, TraceStatus::Normal);
        let reps = simulate_vsc_run(&run).unwrap();
        let end = reps.last().map(|r| r.target.last().clone()).unwrap_or_else(|| nd_to_sc(&t));
        prop_assert!(end.alpha_eq(&nd_to_sc(run.last())));
        let (stripped, k) = strip_renaming_cuts(&end).unwrap();
        prop_assert!(stripped.is_cut_free());
        prop_assert!(k <= run.last().size());
    }

    #[test]
    fn terminating_cut_runs_map_to_vsc_normal_ends((_, t, _) in typed_vanilla(10)) {
        let run = normalize(&t, &[RuleId::CutElim], Strategy::LeftmostOutermost, 500).unwrap();
        prop_assert_eq!(run.status, TraceStatus::Normal);
        let reps = simulate_cut_run(&run).unwrap();
        let end = reps.last().map(|r| r.target.last().clone()).unwrap_or_else(|| sc_to_nd(&t));
        prop_assert!(is_normal(&end, RuleSet::Vsc.rules()));
    }
}
