mod common;

use proptest::prelude::*;

use common::*;
use vanilla_core::rewriting::{reduction_graph, RuleId};
use vanilla_core::structeq::{bisim_probe, equiv_bounded, root_moves};
use vanilla_core::terms::Term;
use vanilla_core::typing::check_sc;

proptest! {
    #[test]
    fn moves_preserve_shape(t in vanilla(12)) {
        for u in root_moves(&t) {
            prop_assert_eq!(u.free_vars(), t.free_vars());
            prop_assert_eq!(u.size(), t.size());
            prop_assert_eq!(u.cut_count(), t.cut_count());
            prop_assert_eq!(u.subtr_count(), t.subtr_count());
        }
    }

    #[test]
    fn moves_preserve_typing((g, t, a) in typed_vanilla(12)) {
        for u in root_moves(&t) {
            prop_assert!(check_sc(&g, &u, &a).is_ok(), "{} ~ {}", t, u);
        }
    }

    #[test]
    fn moves_are_symmetric(t in vanilla(10)) {
        for u in root_moves(&t) {
            prop_assert!(root_moves(&u).contains(&t.canonical()), "{} ~ {}", t, u);
        }
    }

    #[test]
    fn one_move_is_found_in_one(t in vanilla(10)) {
        for u in root_moves(&t) {
            prop_assert_eq!(equiv_bounded(&t, &u, 1).moves(), Some(1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagrams_close_and_path_lengths_match(t in vanilla(10)) {
        for u in root_moves(&t).into_iter().take(3) {
            prop_assert!(bisim_probe(&t, &u, 3).is_ok());
            let rules = [RuleId::CutElim];
            let gt = reduction_graph(&t, &rules, 3_000).unwrap();
            let gu = reduction_graph(&u, &rules, 3_000).unwrap();
            prop_assert_eq!(gt.max_path(), gu.max_path());
        }
    }
}
