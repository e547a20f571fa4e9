//! Deterministic JSON: keys sorted (serde_json's default map), floats
//! rounded to 12 significant digits, rationals as `"p/q"` strings.

use ideal_conv::ideals::MembershipVerdict;
use ideal_conv::seq::{Point, Truth};
use ideal_conv::setexpr::{AsymptoticBounds, DensityResult};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    // avoid "-0.0"
    json!(if rounded == 0.0 { 0.0 } else { rounded })
}

pub fn rat(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

pub fn rat_with_float(r: &BigRational) -> Value {
    json!({ "exact": rat(r), "approx": float(r.to_f64().unwrap_or(f64::NAN)) })
}

pub fn point(p: &Point) -> Value {
    match p {
        Point::Real(r) => rat(r),
        Point::Plane(x, y) => json!([float(*x), float(*y)]),
        Point::Label(s) => Value::String(s.clone()),
    }
}

pub fn truth(t: Truth) -> Value {
    match t.as_option() {
        Some(b) => Value::Bool(b),
        None => Value::String("unknown".into()),
    }
}

pub fn membership(v: &MembershipVerdict) -> Value {
    let mut m = json!({
        "verdict": v.verdict.as_str(),
        "certificate": v.certificate,
    });
    if let Some(k) = v.block_bound {
        m["block_bound"] = json!(k);
    }
    if !v.witness.is_empty() {
        m["witness"] = json!(v.witness);
    }
    m
}

pub fn density(d: &DensityResult) -> Value {
    match d {
        DensityResult::Exact(v) => json!({ "kind": "exact", "value": rat_with_float(v) }),
        DensityResult::Bounds { lower, upper, window } => json!({
            "kind": "bounds",
            "lower": rat_with_float(lower),
            "upper": rat_with_float(upper),
            "window": window,
        }),
        DensityResult::Unknown => json!({ "kind": "unknown" }),
    }
}

pub fn asymptotic(b: &AsymptoticBounds) -> Value {
    json!({ "lower": rat(&b.lower), "upper": rat(&b.upper) })
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_rounded() {
        assert_eq!(float(0.1 + 0.2).to_string(), "0.3");
        assert_eq!(float(-0.0).to_string(), "0.0");
        assert_eq!(float(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(float(2.5e-13).to_string(), "2.5e-13");
    }

    #[test]
    fn keys_are_sorted() {
        let v = json!({ "zeta": 1, "alpha": 2 });
        assert!(render(&v).find("alpha").unwrap() < render(&v).find("zeta").unwrap());
    }
}
