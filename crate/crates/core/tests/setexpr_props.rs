mod common;

use common::expr;
use ideal_conv::setexpr::{count_prefix, density, members, DensityResult, PowersOfTwo, SetExpr, Squares};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn has_counted(e: &SetExpr) -> bool {
    match e {
        SetExpr::Counted(_) => true,
        SetExpr::Union(a, b) | SetExpr::Inter(a, b) | SetExpr::Diff(a, b) => has_counted(a) || has_counted(b),
        SetExpr::Compl(a) => has_counted(a),
        _ => false,
    }
}

/// Membership by pointwise evaluation, independent of the window code.
fn naive(e: &SetExpr, n: u64) -> Vec<u64> {
    (1..=n).filter(|&k| e.contains_point(k).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn count_matches_members(e in expr(), n in 1u64..=4096) {
        let m = members(&e, n).unwrap();
        prop_assert_eq!(count_prefix(&e, n).unwrap(), m.len() as u64);
        prop_assert!(m.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn members_match_pointwise(e in expr(), n in 1u64..=600) {
        prop_assert_eq!(members(&e, n).unwrap(), naive(&e, n));
    }

    #[test]
    fn double_complement(e in expr(), n in 1u64..=4096) {
        prop_assert_eq!(members(&e.clone().compl().compl(), n).unwrap(), members(&e, n).unwrap());
    }

    #[test]
    fn de_morgan(a in expr(), b in expr(), n in 1u64..=2048) {
        let lhs = members(&a.clone().union(b.clone()).compl(), n).unwrap();
        let rhs = members(&a.clone().compl().inter(b.clone().compl()), n).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = members(&a.clone().inter(b.clone()).compl(), n).unwrap();
        let rhs = members(&a.compl().union(b.compl()), n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    // Sparse counted sets converge slowly: squares with powers of two has
    // density 0 but ratio 264/2^16 at 2^16, so those are checked further out.
    #[test]
    fn exact_density_matches_prefix_ratio(e in expr()) {
        let n: u64 = if has_counted(&e) { 1 << 20 } else { 1 << 16 };
        if let DensityResult::Exact(d) = density(&e, 1 << 16).unwrap() {
            let ratio = BigRational::new(count_prefix(&e, n).unwrap().into(), n.into());
            let gap = (ratio - d).to_f64().unwrap().abs();
            prop_assert!(gap <= 1.0 / 256.0, "gap {gap} for {e} at {n}");
        }
    }
}

#[test]
fn sparse_union_needs_a_larger_window() {
    let e = SetExpr::counted(Squares).union(SetExpr::counted(PowersOfTwo));
    assert_eq!(density(&e, 1 << 16).unwrap(), DensityResult::Exact(BigRational::from_integer(0.into())));
    assert_eq!(count_prefix(&e, 1 << 16).unwrap(), 264);
}

#[test]
fn blocks_partition_every_prefix() {
    for n in 1..=4096u64 {
        let top = if n <= 1 { 1 } else { 64 - (n - 1).leading_zeros() + 1 };
        let mut seen = vec![0u32; n as usize + 1];
        for i in 1..=top {
            for k in members(&SetExpr::block(i).unwrap(), n).unwrap() {
                seen[k as usize] += 1;
            }
        }
        assert!(seen[1..].iter().all(|&c| c == 1), "n = {n}");
    }
}
