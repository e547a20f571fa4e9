mod common;

use common::expr;
use ideal_conv::ideals::IdealSpec;
use ideal_conv::seq::{
    default_grid, i_converges, i_eventually_constant, prop26_extract, prop26_sequence, Convergence, Point,
    SeqPresentation,
};
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

const WINDOW: u64 = 1 << 12;

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

/// Closed forms with modest coefficients, so that tails settle well inside
/// the window.
fn closed_form() -> impl Strategy<Value = String> {
    (1i64..5, 1i64..5, -3i64..4).prop_flat_map(|(a, b, c)| {
        prop::sample::select(vec![
            format!("{a}/(n+{b}) + {c}"),
            format!("{c} + (-1)^n/(n+{b})"),
            format!("{a}n + {c}"),
            format!("(-1)^n*{a}"),
            format!("({a}n^2+{b})/(n^2+{b}) + {c}"),
            format!("{c} + {a}/(n^2 - n + {b})"),
            format!("(-1)^n + {c}/n"),
        ])
    })
}

fn candidate() -> impl Strategy<Value = BigRational> {
    (-4i64..5, 1i64..3).prop_map(|(p, d)| q(p, d))
}

/// Classical convergence on the window: for each ε the far set stops before
/// the midpoint.
fn classical(seq: &SeqPresentation, xi: &BigRational) -> bool {
    let values: Vec<BigRational> = (1..=WINDOW)
        .map(|n| match seq.value(n).unwrap() {
            Point::Real(v) => v,
            p => panic!("unexpected value {p}"),
        })
        .collect();
    default_grid().iter().all(|eps| {
        let last = values.iter().rposition(|v| (v - xi).abs() >= *eps);
        last.is_none_or(|i| (i as u64) < WINDOW / 2)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fin_matches_classical(src in closed_form(), xi in candidate()) {
        let seq = SeqPresentation::parse_closed(&src).unwrap();
        let v = i_converges(&seq, &Point::Real(xi.clone()), &IdealSpec::Fin, &default_grid()).unwrap();
        let expected = if classical(&seq, &xi) { Convergence::Converges } else { Convergence::Diverges };
        prop_assert_eq!(v.verdict, expected, "{} to {}", src, xi);
    }

    #[test]
    fn larger_ideals_keep_fin_limits(src in closed_form(), xi in candidate()) {
        let seq = SeqPresentation::parse_closed(&src).unwrap();
        let xi = Point::Real(xi);
        if i_converges(&seq, &xi, &IdealSpec::Fin, &default_grid()).unwrap().verdict == Convergence::Converges {
            for i in [IdealSpec::EvenFin, IdealSpec::DensityZero] {
                let v = i_converges(&seq, &xi, &i, &default_grid()).unwrap();
                prop_assert_ne!(v.verdict, Convergence::Diverges, "{} under {}", src, i);
            }
        }
    }

    #[test]
    fn limits_are_unique(src in closed_form(), a in candidate(), b in candidate()) {
        prop_assume!((&a - &b).abs() > q(1, 128));
        let seq = SeqPresentation::parse_closed(&src).unwrap();
        for i in [IdealSpec::Fin, IdealSpec::EvenFin, IdealSpec::DensityZero] {
            let va = i_converges(&seq, &Point::Real(a.clone()), &i, &default_grid()).unwrap().verdict;
            let vb = i_converges(&seq, &Point::Real(b.clone()), &i, &default_grid()).unwrap().verdict;
            prop_assert!(!(va == Convergence::Converges && vb == Convergence::Converges), "{} has limits {} and {}", src, a, b);
        }
    }

    #[test]
    fn eventually_constant_implies_convergent(a in expr(), i in prop::sample::select(IdealSpec::catalog())) {
        let seq = SeqPresentation::fibers(vec![
            (Point::label("x"), a.clone()),
            (Point::label("y"), a.compl()),
        ]).unwrap();
        if let Some((alpha, _)) = i_eventually_constant(&seq, &i).unwrap() {
            let v = i_converges(&seq, &alpha, &i, &default_grid()).unwrap();
            prop_assert_eq!(v.verdict, Convergence::Converges);
        }
    }

    #[test]
    fn extraction_is_increasing(b in expr()) {
        let seq = prop26_sequence();
        if let Ok(x) = prop26_extract(&seq, &IdealSpec::DensityZero, &b, 1 << 10) {
            prop_assert!(x.indices.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(x.values.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(x.indices.len(), x.values.len());
            for (&n, &v) in x.indices.iter().zip(&x.values) {
                prop_assert_eq!(seq.nat_value(n).unwrap(), v);
                prop_assert!(b.contains_point(v).unwrap());
            }
        }
    }
}
