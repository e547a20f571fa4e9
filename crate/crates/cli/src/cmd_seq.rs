use ideal_conv::ideals::{contains, is_admissible, restrict, IdealSpec};
use ideal_conv::seq::{
    default_grid, i_cluster_points, i_converges, i_eventually_constant, is_nonthin, ConvergenceVerdict, Point,
};
use ideal_conv::setexpr::{asymptotic_bounds, classify_finiteness, count_prefix, density, SetExpr};
use ideal_conv::shrink::{check_b_witness, cond_b_witness, cond_c_verify, cond_c_witness, BWitness, CVerdict, CWitness, Family};
use serde_json::{json, Value};

use crate::dsl::{parse_ideal, parse_points, parse_rationals, parse_seq, parse_set};
use crate::json;
use crate::report::{window, CmdResult, Outcome, UsageError};

pub fn density_cmd(set: &str, win: Option<u64>) -> CmdResult {
    let e = parse_set(set)?;
    let w = window(win)?;
    Ok(Outcome::ok(json!({
        "set": e.to_string(),
        "window": w,
        "count_prefix": count_prefix(&e, w)?,
        "finiteness": classify_finiteness(&e).to_string(),
        "density": json::density(&density(&e, w)?),
        "asymptotic": json::asymptotic(&asymptotic_bounds(&e)),
    })))
}

fn ideal_warning(i: &IdealSpec) -> Option<String> {
    match i {
        IdealSpec::Restrict(base, m) => restrict(base, m.clone()).warning,
        _ => None,
    }
}

pub fn ideal_cmd(ideal: &str, set: Option<&str>, admissible: bool) -> CmdResult {
    let i = parse_ideal(ideal)?;
    let mut out = json!({ "ideal": i.to_string() });
    if let Some(w) = ideal_warning(&i) {
        out["warning"] = json!(w);
    }
    if let Some(s) = set {
        let e = parse_set(s)?;
        out["set"] = json!(e.to_string());
        out["membership"] = json::membership(&contains(&i, &e));
    }
    if admissible {
        let r = is_admissible(&i);
        out["admissible"] = json!({ "admissible": r.admissible, "failures": r.failures });
    }
    if set.is_none() && !admissible {
        return Err(UsageError("ideal needs --set or --admissible".into()));
    }
    Ok(Outcome::ok(out))
}

pub fn convergence_json(xi: &Point, v: &ConvergenceVerdict) -> Value {
    json!({
        "limit": json::point(xi),
        "verdict": v.verdict.to_string(),
        "per_epsilon": v.per_epsilon.iter().map(|c| json!({
            "eps": json::rat(&c.eps),
            "far_set": c.set.to_string(),
            "membership": json::membership(&c.membership),
        })).collect::<Vec<_>>(),
    })
}

pub struct AnalyzeArgs<'a> {
    pub seq: &'a str,
    pub ideal: &'a str,
    pub domain: Option<&'a str>,
    pub grid: Option<&'a str>,
    pub limit: Option<&'a str>,
    pub eventually_constant: bool,
    pub cluster: Option<&'a str>,
}

pub fn analyze_cmd(a: &AnalyzeArgs) -> CmdResult {
    let mut seq = parse_seq(a.seq)?;
    if let Some(d) = a.domain {
        seq = seq.with_domain(parse_set(d)?);
    }
    let i = parse_ideal(a.ideal)?;
    let grid = match a.grid {
        Some(g) => parse_rationals(g)?,
        None => default_grid(),
    };
    if a.limit.is_none() && !a.eventually_constant && a.cluster.is_none() {
        return Err(UsageError("analyze needs --limit, --eventually-constant or --cluster".into()));
    }
    let mut out = json!({
        "seq": a.seq,
        "ideal": i.to_string(),
        "domain": seq.domain.to_string(),
        "grid": grid.iter().map(json::rat).collect::<Vec<_>>(),
        "nonthin": json::truth(is_nonthin(&seq, &i)),
    });
    if let Some(l) = a.limit {
        let xi = crate::dsl::parse_point(l)?;
        out["convergence"] = convergence_json(&xi, &i_converges(&seq, &xi, &i, &grid)?);
    }
    if a.eventually_constant {
        out["eventually_constant"] = match i_eventually_constant(&seq, &i)? {
            Some((p, v)) => json!({ "value": json::point(&p), "membership": json::membership(&v) }),
            None => Value::Null,
        };
    }
    if let Some(c) = a.cluster {
        let cands = parse_points(c)?;
        let found = i_cluster_points(&seq, &i, &cands, &grid)?;
        out["cluster_points"] = json!(found.iter().map(json::point).collect::<Vec<_>>());
    }
    Ok(Outcome::ok(out))
}

pub fn c_verdict_json(v: &CVerdict) -> Value {
    match v {
        CVerdict::Consistent { checked } => json!({ "verdict": "consistent", "checked": checked }),
        CVerdict::Refuted { subset, reason } => json!({ "verdict": "refuted", "subset": subset.to_string(), "reason": reason }),
        CVerdict::Inconclusive(why) => json!({ "verdict": "inconclusive", "reason": why }),
    }
}

pub fn c_witness_json(w: &CWitness) -> Value {
    json!({ "ideal": w.ideal.to_string(), "a": w.a.to_string(), "b": w.b.to_string(), "strategy": w.strategy.to_string() })
}

pub fn c_witness_cmd(ideal: &str, set: &str, win: Option<u64>) -> CmdResult {
    let i = parse_ideal(ideal)?;
    let a = parse_set(set)?;
    let w = cond_c_witness(&i, &a)?;
    let v = cond_c_verify(&w, window(win)?)?;
    Ok(Outcome::ok(json!({ "witness": c_witness_json(&w), "verify": c_verdict_json(&v) })))
}

pub fn c_verify_cmd(ideal: &str, set: &str, b: Option<&str>, win: Option<u64>) -> CmdResult {
    let i = parse_ideal(ideal)?;
    let a = parse_set(set)?;
    let w = match b {
        Some(b) => CWitness::custom(i, a, parse_set(b)?),
        None => cond_c_witness(&i, &a)?,
    };
    let w_size = window(win)?;
    let v = cond_c_verify(&w, w_size)?;
    Ok(Outcome::ok(json!({ "witness": c_witness_json(&w), "window": w_size, "verify": c_verdict_json(&v) })))
}

fn parse_family(src: &str) -> Result<Family, UsageError> {
    if src == "tails" {
        return Ok(Family::Tails);
    }
    if let Some(s) = src.strip_prefix("constant:") {
        return Ok(Family::Constant(parse_set(s)?));
    }
    if let Some(s) = src.strip_prefix("cycle:") {
        let sets = s.split(';').map(parse_set).collect::<Result<Vec<SetExpr>, _>>()?;
        return Ok(Family::Cycle(sets));
    }
    Err(UsageError(format!("unknown family '{src}': use tails, constant:<set> or cycle:<set>;<set>")))
}

pub fn b_witness_json(w: &BWitness) -> Result<Value, UsageError> {
    let c = check_b_witness(w)?;
    Ok(json!({
        "ideal": w.ideal.to_string(),
        "family": w.family.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "picks": w.picks.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "union": w.union.to_string(),
        "check": {
            "picks_inside": c.picks_inside,
            "picks_in_ideal": c.picks_in_ideal.iter().map(|v| v.verdict.as_str()).collect::<Vec<_>>(),
            "union_covers_picks": c.union_covers_picks,
            "union": json::membership(&c.union),
            "holds": c.holds(),
        },
    }))
}

pub fn b_witness_cmd(ideal: &str, family: &str, k: usize) -> CmdResult {
    let i = parse_ideal(ideal)?;
    let w = cond_b_witness(&i, &parse_family(family)?, k)?;
    Ok(Outcome::ok(b_witness_json(&w)?))
}
