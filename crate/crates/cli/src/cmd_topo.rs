use ideal_conv::ideals::IdealSpec;
use ideal_conv::onepoint::{
    build_onepoint, circle_converges_by_opens, circle_converges_to_alpha, circle_e, circle_e_upper,
    circle_not_hausdorff, circle_pair, extend_map, grid_injectivity, CirclePoint, Injectivity, PairReport,
    Separation,
};
use ideal_conv::setexpr::SetExpr;
use ideal_conv::topolab::{
    enumerate_topologies, i_closure, is_i_compact, is_i_continuous, is_i_sequential, is_i_us, FinMap, FinSpace,
    MembershipTable,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::dsl::parse_ideal;
use crate::json;
use crate::report::{load_space, space_json, CmdResult, Outcome, UsageError};

const MAX_FAILURES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Property {
    ClosureCollapse,
    Compact,
    UsT1,
    Sequential,
    Continuity,
}

fn classical_closure(s: &FinSpace, a: u32) -> u32 {
    (0..s.len()).filter(|&x| s.min_nbhd(x) & a != 0).fold(0, |acc, x| acc | 1 << x)
}

/// Failures of `prop` on one space, described for the report.
fn check_space(s: &FinSpace, prop: Property, t: &MembershipTable, targets: &[FinSpace]) -> Result<(usize, Vec<String>), UsageError> {
    let mut fails = Vec::new();
    let checked = match prop {
        Property::ClosureCollapse => {
            for a in 0..=s.full() {
                let (i, c) = (i_closure(s, a, t), classical_closure(s, a));
                if i != c {
                    fails.push(format!("{s}: closure of {} is {}, expected {}", s.fmt_set(a), s.fmt_set(i), s.fmt_set(c)));
                }
            }
            s.full() as usize + 1
        }
        Property::Compact => {
            if let Some(c) = is_i_compact(s, t).counterexample {
                fails.push(format!("{s}: {}", c.describe(s)));
            }
            1
        }
        Property::UsT1 => {
            if is_i_us(s, t) != s.is_t1() {
                fails.push(format!("{s}: unique limits {} but T1 {}", is_i_us(s, t), s.is_t1()));
            }
            1
        }
        Property::Sequential => {
            if !is_i_sequential(s, t) {
                fails.push(format!("{s}: an I-closed set is not closed"));
            }
            1
        }
        Property::Continuity => {
            let mut n = 0;
            for y in targets {
                for f in FinMap::all(s, y) {
                    n += 1;
                    match is_i_continuous(&f, t) {
                        Ok(c) if c == f.is_continuous() => {}
                        Ok(c) => fails.push(format!("{s} -> {y} by {:?}: I-continuous {c}", f.map)),
                        Err(e) => fails.push(e.to_string()),
                    }
                }
            }
            n
        }
    };
    Ok((checked, fails))
}

pub fn topolab_check(n: usize, ideal: &str, prop: Property, parallel: bool) -> CmdResult {
    let i = parse_ideal(ideal)?;
    let limit = if prop == Property::Continuity { 3 } else { 4 };
    if n == 0 || n > limit {
        return Err(UsageError(format!("--n must be in 1..={limit} for this property")));
    }
    let t = MembershipTable::new(&i);
    let mut spaces = Vec::new();
    let mut counts = Vec::new();
    for k in 1..=n {
        let v = enumerate_topologies(k)?;
        counts.push(v.len());
        spaces.extend(v);
    }
    let results: Vec<Result<(usize, Vec<String>), UsageError>> = if parallel {
        spaces.par_iter().map(|s| check_space(s, prop, &t, &spaces)).collect()
    } else {
        spaces.iter().map(|s| check_space(s, prop, &t, &spaces)).collect()
    };
    let (mut checked, mut failures) = (0, Vec::new());
    for r in results {
        let (c, f) = r?;
        checked += c;
        failures.extend(f);
    }
    let pass = failures.is_empty();
    let total_failures = failures.len();
    failures.truncate(MAX_FAILURES);
    let report = json!({
        "ideal": i.to_string(),
        "property": format!("{prop:?}"),
        "points": n,
        "topology_counts": counts,
        "spaces": spaces.len(),
        "checked": checked,
        "failure_count": total_failures,
        "failures": failures,
        "pass": pass,
    });
    Ok(Outcome::checked(report, pass))
}

pub fn topolab_inspect(space: &str, ideal: &str) -> CmdResult {
    let s = load_space(space)?;
    let i = parse_ideal(ideal)?;
    let t = MembershipTable::new(&i);
    let closures: serde_json::Map<String, Value> =
        (0..=s.full()).map(|a| (s.fmt_set(a), json!(s.fmt_set(i_closure(&s, a, &t))))).collect();
    let compact = is_i_compact(&s, &t);
    Ok(Outcome::ok(json!({
        "space": space_json(&s),
        "ideal": i.to_string(),
        "t1": s.is_t1(),
        "hausdorff": s.is_hausdorff(),
        "i_unique_limits": is_i_us(&s, &t),
        "i_sequential": is_i_sequential(&s, &t),
        "i_compact": compact.compact,
        "i_closures": closures,
    })))
}

pub fn onepoint_json(base: &FinSpace, i: &IdealSpec) -> Result<Value, UsageError> {
    let x = build_onepoint(base, i)?;
    let t = MembershipTable::new(i);
    Ok(json!({
        "base": space_json(base),
        "ideal": i.to_string(),
        "alpha": x.alpha_label(),
        "extension": space_json(&x.space),
        "base_open": x.base_open(),
        "base_dense": x.base_dense(),
        "restricts_to_base": x.restricts_to_base(),
        "hausdorff": x.is_hausdorff(),
        "i_compact": is_i_compact(&x.space, &t).compact,
    }))
}

pub fn onepoint_build(space: &str, ideal: &str) -> CmdResult {
    let s = load_space(space)?;
    Ok(Outcome::ok(onepoint_json(&s, &parse_ideal(ideal)?)?))
}

pub fn onepoint_extend(source: &str, target: &str, map: &str, ideal: &str) -> CmdResult {
    let (src, tgt) = (load_space(source)?, load_space(target)?);
    let images = map
        .split(',')
        .map(|l| tgt.index(l.trim()))
        .collect::<Result<Vec<usize>, _>>()?;
    let f = FinMap::new(src, tgt, images)?;
    let e = extend_map(&f, &parse_ideal(ideal)?)?;
    let names: Vec<&str> = e.map.map.iter().map(|&y| e.map.target.label(y)).collect();
    Ok(Outcome::ok(json!({
        "extension": { "source": space_json(&e.map.source), "target": space_json(&e.map.target), "images": names },
        "continuous": e.continuous,
        "homeomorphism": e.homeomorphism,
        "proper": {
            "compact_preimages": e.proper.b_pass,
            "compact_preimages_checked": e.proper.b_checked,
            "limit_preimages": e.proper.c_pass,
            "limit_preimages_checked": e.proper.c_checked,
        },
    })))
}

fn injectivity_json(r: &Injectivity) -> Value {
    json!({
        "points": r.points,
        "max_norm_error": json::float(r.max_norm_error),
        "min_distance": json::float(r.min_distance),
        "closest": [json::float(r.closest.0), json::float(r.closest.1)],
        "cyclic_order": r.cyclic_order,
        "injective": r.injective,
    })
}

fn circle_point_json(p: CirclePoint) -> Value {
    match p {
        CirclePoint::Alpha => json!("α"),
        CirclePoint::At(x, y) => json!([json::float(x), json::float(y)]),
    }
}

fn pair_json(r: &PairReport) -> Value {
    let sep = match &r.separation {
        Separation::Arcs { half_width } => json!({ "separated": true, "arc_half_width": json::float(*half_width) }),
        Separation::NotSeparated { steps, half_width, excluded, common } => json!({
            "separated": false,
            "steps": steps,
            "sample": {
                "arc_half_width": json::float(*half_width),
                "excluded": excluded.iter().map(|&p| circle_point_json(p)).collect::<Vec<_>>(),
                "common_point": circle_point_json(*common),
            },
        }),
    };
    json!({ "p": circle_point_json(r.p), "q": circle_point_json(r.q), "separation": sep })
}

#[allow(clippy::type_complexity)]
fn circle_sequences() -> Vec<(&'static str, Vec<(CirclePoint, SetExpr)>, IdealSpec)> {
    let e = CirclePoint::of_real;
    let arith = |r, m| SetExpr::arith(r, m).unwrap();
    vec![
        ("finite fibers", vec![(e(0.0), SetExpr::finite([1, 2, 3]).unwrap()), (CirclePoint::Alpha, SetExpr::Tail(4))], IdealSpec::Fin),
        ("constant e(0)", vec![(e(0.0), SetExpr::naturals())], IdealSpec::EvenFin),
        ("e(0) on evens, e(5) on odds", vec![(e(0.0), SetExpr::evens()), (e(5.0), SetExpr::odds())], IdealSpec::EvenFin),
        ("e(2) on evens, α on odds", vec![(e(2.0), SetExpr::evens()), (CirclePoint::Alpha, SetExpr::odds())], IdealSpec::EvenFin),
        ("e(1) on squares, α elsewhere", vec![
            (e(1.0), SetExpr::counted(ideal_conv::setexpr::Squares)),
            (CirclePoint::Alpha, SetExpr::counted(ideal_conv::setexpr::Squares).compl()),
        ], IdealSpec::DensityZero),
        ("three arcs mod 3", vec![(e(-3.0), arith(0, 3)), (e(0.5), arith(1, 3)), (CirclePoint::Alpha, arith(2, 3))], IdealSpec::DensityZero),
    ]
}

pub fn circle_report() -> Value {
    let table: Vec<Value> = circle_sequences()
        .into_iter()
        .map(|(name, fibers, i)| {
            let rule = circle_converges_to_alpha(&fibers, &i);
            let opens = circle_converges_by_opens(&fibers, &i);
            json!({
                "sequence": name,
                "ideal": i.to_string(),
                "fibers": fibers.iter().map(|(p, f)| json!({ "value": circle_point_json(*p), "indices": f.to_string() })).collect::<Vec<_>>(),
                "converges_to_alpha": json::truth(rule),
                "agrees_with_open_sets": rule == opens,
            })
        })
        .collect();
    let pairs = [
        (CirclePoint::Alpha, CirclePoint::of_real(0.0)),
        (CirclePoint::of_real(0.0), CirclePoint::of_real(5.0)),
        (CirclePoint::Alpha, CirclePoint::of_real(100.0)),
    ];
    let samples: Vec<Value> = [0.0, 1.0, 3.0]
        .iter()
        .map(|&x| {
            let (a, b) = circle_e(x);
            json!({ "x": json::float(x), "e": [json::float(a), json::float(b)] })
        })
        .collect();
    json!({
        "alpha": [json::float(0.0), json::float(-1.0)],
        "e_samples": samples,
        "injectivity": {
            "corrected": injectivity_json(&grid_injectivity(circle_e, -50.0, 50.0, 10_000)),
            "upper_branch": injectivity_json(&grid_injectivity(circle_e_upper, -50.0, 50.0, 10_000)),
        },
        "alpha_convergence": table,
        "not_hausdorff": pair_json(&circle_not_hausdorff()),
        "pairs": pairs.iter().map(|&(p, q)| pair_json(&circle_pair(p, q).expect("distinct"))).collect::<Vec<_>>(),
    })
}

pub fn onepoint_circle(scenario: &str) -> CmdResult {
    if scenario != "paper-final" {
        return Err(UsageError(format!("unknown circle scenario '{scenario}', expected paper-final")));
    }
    Ok(Outcome::ok(circle_report()))
}
