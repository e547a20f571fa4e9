mod common;

use common::expr;
use ideal_conv::ideals::{contains, is_admissible, IdealSpec, Verdict};
use ideal_conv::setexpr::{members, SetExpr};
use proptest::prelude::*;

fn ideal() -> impl Strategy<Value = IdealSpec> {
    prop::sample::select(IdealSpec::catalog())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn downward_closed(i in ideal(), a in expr(), e in expr()) {
        if contains(&i, &a).is_in() {
            let b = a.clone().inter(e.clone());
            prop_assert_ne!(contains(&i, &b).verdict, Verdict::Out, "{} ∩ {} under {}", a, e, i);
        }
    }

    #[test]
    fn closed_under_finite_unions(i in ideal(), a in expr(), b in expr()) {
        if contains(&i, &a).is_in() && contains(&i, &b).is_in() {
            let u = a.clone().union(b.clone());
            prop_assert_ne!(contains(&i, &u).verdict, Verdict::Out, "{} ∪ {} under {}", a, b, i);
        }
    }

    #[test]
    fn complements_of_members_are_not_members(i in ideal(), a in expr()) {
        if contains(&i, &a).is_in() {
            prop_assert_ne!(contains(&i, &a.clone().compl()).verdict, Verdict::In);
        }
    }

    #[test]
    fn fin_members_are_in_every_ideal(i in ideal(), a in expr()) {
        if contains(&IdealSpec::Fin, &a).is_in() {
            prop_assert_ne!(contains(&i, &a).verdict, Verdict::Out);
        }
    }

    #[test]
    fn block_bound_holds_on_windows(a in expr(), n in 1u64..=4096) {
        let v = contains(&IdealSpec::MeetsFinBlocks, &a);
        if v.is_in() {
            let k = v.block_bound.expect("I₂ membership carries a block bound");
            let met = (1..=64u32)
                .filter(|&i| !members(&a.clone().inter(SetExpr::block(i).unwrap()), n).unwrap().is_empty())
                .count();
            prop_assert!(met <= k, "{} meets {} blocks, bound {}", a, met, k);
        }
    }
}

#[test]
fn naturals_are_never_small() {
    for i in IdealSpec::catalog() {
        assert!(contains(&i, &SetExpr::naturals()).is_out(), "{i}");
    }
}

#[test]
fn catalog_is_admissible() {
    for i in IdealSpec::catalog() {
        let r = is_admissible(&i);
        assert!(r.admissible, "{i}: {:?}", r.failures);
    }
}
