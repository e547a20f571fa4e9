mod common;

use common::expr;
use ideal_conv::ideals::IdealSpec;
use ideal_conv::setexpr::{classify_finiteness, members, Finiteness, SetExpr};
use ideal_conv::topolab::{
    enumerate_topologies, i_closure, is_i_compact, is_i_continuous, is_i_sequential, is_i_us, seq_limits, FinMap,
    FinSeq, FinSpace, MembershipTable,
};
use proptest::prelude::*;

fn all_spaces(max: usize) -> Vec<FinSpace> {
    (1..=max).flat_map(|n| enumerate_topologies(n).unwrap()).collect()
}

/// `{x : every open set around x meets A}`, from the open family directly.
fn classical_closure(s: &FinSpace, a: u32) -> u32 {
    (0..s.len())
        .filter(|&x| s.opens().iter().filter(|&&u| u >> x & 1 == 1).all(|&u| u & a != 0))
        .fold(0, |acc, x| acc | 1 << x)
}

fn t1(s: &FinSpace) -> bool {
    (0..s.len()).all(|x| classical_closure(s, 1 << x) == 1 << x)
}

#[test]
fn topology_counts() {
    let counts: Vec<usize> = (1..=4).map(|n| enumerate_topologies(n).unwrap().len()).collect();
    assert_eq!(counts, [1, 4, 29, 355]);
}

#[test]
fn closure_collapses_to_classical() {
    let spaces = all_spaces(4);
    for i in IdealSpec::catalog() {
        let t = MembershipTable::new(&i);
        for s in &spaces {
            for a in 0..=s.full() {
                assert_eq!(i_closure(s, a, &t), classical_closure(s, a), "{i} on {s}, A = {}", s.fmt_set(a));
            }
        }
    }
}

#[test]
fn finite_spaces_are_compact() {
    let spaces = all_spaces(4);
    for i in IdealSpec::catalog() {
        let t = MembershipTable::new(&i);
        for s in &spaces {
            let r = is_i_compact(s, &t);
            assert!(r.compact, "{i} on {s}: {:?}", r.counterexample);
        }
    }
}

#[test]
fn unique_limits_iff_t1() {
    let spaces = all_spaces(4);
    for i in IdealSpec::catalog() {
        let t = MembershipTable::new(&i);
        for s in &spaces {
            assert_eq!(is_i_us(s, &t), t1(s), "{i} on {s}");
        }
    }
}

#[test]
fn finite_spaces_are_sequential() {
    let spaces = all_spaces(4);
    for i in IdealSpec::catalog() {
        let t = MembershipTable::new(&i);
        assert!(spaces.iter().all(|s| is_i_sequential(s, &t)), "{i}");
    }
}

#[test]
fn continuity_definitions_agree() {
    let spaces = all_spaces(3);
    for i in [IdealSpec::Fin, IdealSpec::EvenFin] {
        let t = MembershipTable::new(&i);
        for x in &spaces {
            for y in &spaces {
                for f in FinMap::all(x, y) {
                    let c = is_i_continuous(&f, &t).unwrap_or_else(|e| panic!("{i}: {e}"));
                    assert_eq!(c, f.is_continuous(), "{i}: {x} -> {y} by {:?}", f.map);
                }
            }
        }
    }
}

fn three_chain() -> FinSpace {
    FinSpace::from_labels(&["a", "b", "c"], &[&[], &["a"], &["a", "b"], &["a", "b", "c"]]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // The residue corpus is complete: a sequence with arbitrary fibers never
    // reaches a limit outside the corpus closure of its range.
    #[test]
    fn corpus_closure_contains_every_limit(
        a in expr(),
        b in expr(),
        i in prop::sample::select(IdealSpec::catalog()),
        space in 0usize..3,
    ) {
        let s = match space {
            0 => three_chain(),
            1 => FinSpace::sierpinski(),
            _ => FinSpace::indiscrete(3).unwrap(),
        };
        let n = s.len();
        let fibers: Vec<(usize, SetExpr)> = if n == 3 {
            vec![(0, a.clone().inter(b.clone())), (1, a.clone().diff(b.clone())), (2, a.compl())]
        } else {
            vec![(0, a.clone()), (1, a.compl())]
        };
        let seq = FinSeq::new(s.clone(), fibers.clone()).unwrap();
        // points attained: fibers not certified empty
        let range = fibers
            .iter()
            .filter(|(_, f)| classify_finiteness(f) != Finiteness::Finite || !members(f, 1 << 12).unwrap().is_empty())
            .fold(0u32, |acc, (x, _)| acc | 1 << x);
        if let Ok(lim) = seq_limits(&seq, &i) {
            let t = MembershipTable::new(&i);
            let closure = i_closure(&s, range, &t);
            prop_assert_eq!(lim.limits & !closure, 0, "{} on {}", i, s);
        }
    }
}
