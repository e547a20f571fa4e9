#![allow(dead_code)]

use ideal_conv::setexpr::{EveryOther, OnePerBlock, PowersOfTwo, SetExpr, Squares};
use proptest::prelude::*;

pub fn leaf() -> impl Strategy<Value = SetExpr> {
    prop_oneof![
        prop::collection::vec(1u64..200, 0..6).prop_map(|xs| SetExpr::finite(xs).unwrap()),
        (1u64..9).prop_flat_map(|m| (0..m, Just(m))).prop_map(|(r, m)| SetExpr::arith(r, m).unwrap()),
        (1u32..12).prop_map(|i| SetExpr::block(i).unwrap()),
        // heads stay below 256 so finite perturbations cannot move a 2^16
        // prefix ratio by 2^-8
        (1u64..200).prop_map(SetExpr::tail),
        Just(SetExpr::counted(Squares)),
        Just(SetExpr::counted(PowersOfTwo)),
    ]
}

pub fn expr() -> impl Strategy<Value = SetExpr> {
    leaf().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.union(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.inter(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.diff(b)),
            inner.clone().prop_map(SetExpr::compl),
            inner.clone().prop_map(|a| SetExpr::counted(OnePerBlock(a))),
            inner.prop_map(|a| SetExpr::counted(EveryOther(a))),
        ]
    })
}
