use std::path::PathBuf;

use ideal_conv::ideals::{contains, IdealSpec};
use ideal_conv::onepoint::{build_with_table, homeo_search};
use ideal_conv::seq::{i_eventually_constant, prop26_counterexample, prop26_extract, Point, SeqPresentation};
use ideal_conv::setexpr::SetExpr;
use ideal_conv::shrink::{cond_c_verify, cond_c_witness, density_candidates, example_corpus, CWitness};
use ideal_conv::topolab::{enumerate_topologies, is_i_compact, MembershipTable};
use serde_json::{json, Value};

use crate::cmd_seq::{c_verdict_json, c_witness_json};
use crate::cmd_topo::{circle_report, topolab_check, Property};
use crate::json;
use crate::report::{CmdResult, Outcome, UsageError};

pub const NAMES: [&str; 6] = ["note-2.2", "example-2.5", "prop-2.6", "thm-2.10-lab", "thm-2.13-lab", "circle-final"];

const WINDOW: u64 = 1 << 12;

/// `ICONV_GOLDEN_DIR`, else the committed goldens next to this crate.
pub fn golden_dir() -> PathBuf {
    std::env::var_os("ICONV_GOLDEN_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/goldens")))
}

fn eventual(seq: &SeqPresentation, i: &IdealSpec) -> Result<Value, UsageError> {
    Ok(match i_eventually_constant(seq, i)? {
        Some((p, v)) => json!({ "value": json::point(&p), "membership": json::membership(&v) }),
        None => Value::Null,
    })
}

fn alternating_sequence() -> Result<Value, UsageError> {
    let seq = SeqPresentation::fibers(vec![(Point::int(0), SetExpr::odds()), (Point::int(1), SetExpr::evens())])?;
    let under_i1 = eventual(&seq, &IdealSpec::EvenFin)?;
    let under_fin = eventual(&seq, &IdealSpec::Fin)?;
    let pass = under_i1.get("value") == Some(&json!("0")) && under_fin.is_null();
    Ok(json!({
        "sequence": "x_n = 0 for odd n, 1 for even n",
        "i1": under_i1,
        "fin": under_fin,
        "pass": pass,
    }))
}

fn shrinking_witnesses() -> Result<Value, UsageError> {
    let mut pass = true;
    let mut rows = Vec::new();
    for i in [IdealSpec::EvenFin, IdealSpec::MeetsFinBlocks, IdealSpec::FinPerBlock] {
        let sets: Vec<SetExpr> = std::iter::once(SetExpr::naturals()).chain(example_corpus(&i)).collect();
        pass &= sets.len() == 11;
        for a in sets {
            let w = cond_c_witness(&i, &a)?;
            let v = cond_c_verify(&w, WINDOW)?;
            pass &= v.is_consistent();
            rows.push(json!({ "witness": c_witness_json(&w), "verify": c_verdict_json(&v) }));
        }
    }
    Ok(json!({ "window": WINDOW, "witnesses": rows, "pass": pass }))
}

fn dyadic_counterexample() -> Result<Value, UsageError> {
    let a = prop26_counterexample(15)?;
    let seq = &a.seq;
    let ext = prop26_extract(seq, &IdealSpec::DensityZero, &SetExpr::naturals(), WINDOW)?;
    let refutations = density_candidates()
        .into_iter()
        .map(|b| {
            let v = cond_c_verify(&CWitness::custom(IdealSpec::DensityZero, SetExpr::naturals(), b.clone()), WINDOW)?;
            Ok(json!({ "b": b.to_string(), "b_membership": json::membership(&contains(&IdealSpec::DensityZero, &b)), "verify": c_verdict_json(&v) }))
        })
        .collect::<Result<Vec<Value>, UsageError>>()?;
    let all_refuted = refutations.iter().all(|r| r["verify"]["verdict"] == "refuted");
    let pass = a.blocks_decreasing && a.longest_increasing <= a.length_bound && all_refuted;
    Ok(json!({
        "k_max": a.k_max,
        "n": a.values.len(),
        "first_values": &a.values[..16],
        "blocks_decreasing": a.blocks_decreasing,
        "longest_increasing": a.longest_increasing,
        "length_bound": a.length_bound,
        "density_bound": json::rat_with_float(&a.density_bound),
        "certificate": a.certificate,
        "greedy_extraction": {
            "window": WINDOW,
            "indices": ext.indices,
            "values": ext.values,
            "range": ext.range.map(|r| r.to_string()),
            "rule": format!("{:?}", ext.rule),
            "membership": json::membership(&ext.verdict),
        },
        "density_zero_refutations": refutations,
        "pass": pass,
    }))
}

fn continuity_lab() -> Result<Value, UsageError> {
    let mut pass = true;
    let mut runs = Vec::new();
    for ideal in ["fin", "i1"] {
        let o = topolab_check(3, ideal, Property::Continuity, true)?;
        pass &= o.ok;
        runs.push(o.report);
    }
    Ok(json!({ "runs": runs, "pass": pass }))
}

fn onepoint_lab() -> Result<Value, UsageError> {
    let t = MembershipTable::new(&IdealSpec::Fin);
    let mut counts = Vec::new();
    let (mut spaces, mut valid, mut open, mut dense, mut compact, mut unique, mut hausdorff) = (0, 0, 0, 0, 0, 0, 0);
    for n in 1..=4 {
        let all = enumerate_topologies(n)?;
        counts.push(all.len());
        for s in all {
            spaces += 1;
            let x = build_with_table(&s, &t)?;
            let y = build_with_table(&s, &t)?;
            valid += 1;
            open += (x.base_open() && x.restricts_to_base()) as usize;
            dense += x.base_dense() as usize;
            compact += is_i_compact(&x.space, &t).compact as usize;
            unique += homeo_search(&x, &y).is_some() as usize;
            hausdorff += (x.is_hausdorff() == s.is_discrete()) as usize;
        }
    }
    let pass = [valid, open, compact, unique, hausdorff].iter().all(|&c| c == spaces);
    Ok(json!({
        "ideal": "fin",
        "topology_counts": counts,
        "spaces": spaces,
        "valid_topology": valid,
        "base_open_and_restricts": open,
        "base_dense": dense,
        "alpha_isolated_note": "every finite base is closed and I-compact, so {α} is open and the base is dense only when empty",
        "i_compact": compact,
        "rebuilds_homeomorphic": unique,
        "hausdorff_iff_discrete": hausdorff,
        "pass": pass,
    }))
}

fn circle_final() -> Value {
    let mut r = circle_report();
    let corrected = r["injectivity"]["corrected"]["injective"] == true;
    let upper = r["injectivity"]["upper_branch"]["injective"] == false;
    let agrees = r["alpha_convergence"].as_array().is_some_and(|t| t.iter().all(|row| row["agrees_with_open_sets"] == true));
    let not_hausdorff = r["not_hausdorff"]["separation"]["separated"] == false;
    r["pass"] = json!(corrected && upper && agrees && not_hausdorff);
    r
}

pub fn build(name: &str) -> Result<Value, UsageError> {
    let body = match name {
        "note-2.2" => alternating_sequence()?,
        "example-2.5" => shrinking_witnesses()?,
        "prop-2.6" => dyadic_counterexample()?,
        "thm-2.10-lab" => continuity_lab()?,
        "thm-2.13-lab" => onepoint_lab()?,
        "circle-final" => circle_final(),
        _ => return Err(UsageError(format!("unknown scenario '{name}', expected one of {}", NAMES.join(", ")))),
    };
    Ok(json!({ "scenario": name, "report": body }))
}

/// Runs a scenario and compares it with its golden file, or rewrites the
/// golden when `update` is set.
pub fn run(name: &str, update: bool) -> CmdResult {
    let report = build(name)?;
    let rendered = json::render(&report);
    let path = golden_dir().join(format!("{name}.json"));
    if update {
        std::fs::create_dir_all(golden_dir())?;
        std::fs::write(&path, &rendered)?;
        return Ok(Outcome::ok(json!({ "scenario": name, "golden": "updated" })));
    }
    let golden = std::fs::read_to_string(&path);
    let matches = golden.as_ref().is_ok_and(|g| *g == rendered);
    let pass = report["report"]["pass"] == true;
    let mut out = report;
    out["golden_match"] = json!(matches);
    if let Err(e) = golden {
        out["golden_error"] = json!(format!("cannot read {}: {e}", path.display()));
    }
    Ok(Outcome::checked(out, matches && pass))
}

pub fn list() -> Outcome {
    Outcome::ok(json!({ "scenarios": NAMES }))
}
