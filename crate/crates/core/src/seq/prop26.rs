//! Increasing subsequences of index sequences, and the dyadic sequence
//! whose every increasing subsequence has a density-zero range.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{block_coords, Body, Expr, SeqError, SeqPresentation, SeqResult};
use crate::ideals::{contains, IdealSpec, MembershipVerdict, Verdict};
use crate::setexpr::{members, Facts, Finiteness, Listed, SetExpr};

/// `x₁ = 2, x₂ = 1, x_n = 2^{k+1} - (r - 1)` for `n = 2^k + r`.
pub fn prop26_sequence() -> SeqPresentation {
    let formula = Expr::parse("2^(k+1) - (r-1)").expect("static formula");
    let init = [2, 1].map(|v| BigRational::from_integer(BigInt::from(v))).to_vec();
    SeqPresentation::block_formula(formula, init)
}

/// How the range of the extracted subsequence was identified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeRule {
    /// Every element of `B` in the upper half of the scanned value range
    /// was picked, so the range is taken to be `B` minus the listed misses.
    WindowDiff { missed: Vec<u64> },
    /// Values decrease inside each block and block `k` holds values in
    /// `(2^k, 2^{k+1}]`, so an increasing selection takes at most one value
    /// per block and its range has density 0.
    DyadicDecrease,
    Undetermined,
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub indices: Vec<u64>,
    pub values: Vec<u64>,
    pub range: Option<SetExpr>,
    pub rule: RangeRule,
    pub verdict: MembershipVerdict,
}

/// Greedy scan over indices `1..=window`: pick `n` when `x_n ∈ B` and
/// `x_n` exceeds the previous pick. Values above `value_cap` are skipped.
fn greedy(seq: &SeqPresentation, b: &SetExpr, window: u64, value_cap: u64) -> SeqResult<(Vec<u64>, Vec<u64>, usize)> {
    let in_b = b.indicator(value_cap)?;
    let (mut idx, mut vals) = (Vec::new(), Vec::new());
    let mut scanned = 0;
    for n in members(&seq.domain, window)? {
        let v = match seq.nat_value(n) {
            Ok(v) => v,
            Err(SeqError::Presentation(_)) if matches!(seq.body, Body::ClosedForm(_) | Body::BlockFormula { .. }) => {
                continue;
            }
            Err(e) => return Err(e),
        };
        scanned += 1;
        if v <= value_cap && in_b[v as usize] && vals.last().is_none_or(|&l| v > l) {
            idx.push(n);
            vals.push(v);
        }
    }
    Ok((idx, vals, scanned))
}

/// Checks the dyadic-decrease certificate on every block inside `[1..window]`.
fn dyadic_decrease(seq: &SeqPresentation, window: u64) -> SeqResult<bool> {
    if !matches!(seq.body, Body::BlockFormula { .. }) || seq.domain != SetExpr::naturals() {
        return Ok(false);
    }
    let mut k = 1u32;
    while (1u64 << (k + 1)) <= window {
        let lo = (1u64 << k) + 1;
        let hi = 1u64 << (k + 1);
        let mut prev = u64::MAX;
        for n in lo..=hi {
            let v = seq.nat_value(n)?;
            if v >= prev || v <= 1 << k || v > hi {
                return Ok(false);
            }
            prev = v;
        }
        k += 1;
    }
    Ok(k > 2)
}

/// Greedy extraction of an increasing subsequence with values in the
/// witness `B`, with the verdict for its range.
pub fn prop26_extract(
    seq: &SeqPresentation,
    ideal: &IdealSpec,
    witness: &SetExpr,
    window: u64,
) -> SeqResult<Extraction> {
    if window < 4 {
        return Err(SeqError::Argument("window must be at least 4".into()));
    }
    let wv = contains(ideal, witness);
    if wv.is_in() {
        return Err(SeqError::Witness(format!("B = {witness} lies in {ideal}: {}", wv.certificate)));
    }
    let cap = window.saturating_mul(4).min(crate::setexpr::MAX_WINDOW);
    let (indices, values, scanned) = greedy(seq, witness, window, cap)?;

    // B ⊆ range, on values small enough to have been reached
    let reach = (scanned as u64 / 2).max(1);
    let seen: std::collections::BTreeSet<u64> = members(&seq.domain, window)?
        .into_iter()
        .filter_map(|n| seq.nat_value(n).ok())
        .collect();
    if let Some(b) = members(witness, reach)?.into_iter().find(|b| !seen.contains(b)) {
        return Err(SeqError::Witness(format!("{b} ∈ B is not a value of the sequence")));
    }

    let top = values.last().copied().unwrap_or(0);
    let missed: Vec<u64> = if top == 0 {
        Vec::new()
    } else {
        members(witness, top)?.into_iter().filter(|b| values.binary_search(b).is_err()).collect()
    };
    if top > 0 && missed.iter().all(|&m| m <= top / 2) {
        let range = if missed.is_empty() {
            witness.clone()
        } else {
            witness.clone().diff(SetExpr::Finite(missed.clone()))
        };
        let mut verdict = contains(ideal, &range);
        verdict.certificate = format!("range = B minus {} early misses (window {window}); {}", missed.len(), verdict.certificate);
        return Ok(Extraction {
            indices,
            values,
            range: Some(range),
            rule: RangeRule::WindowDiff { missed },
            verdict,
        });
    }
    if dyadic_decrease(seq, window)? {
        let (s, b) = (seq.clone(), witness.clone());
        let gen = move |n: u64| {
            let w = n.saturating_mul(2).saturating_add(2);
            greedy(&s, &b, w, w.saturating_mul(2))
                .map(|(_, v, _)| v)
                .map_err(|e| crate::setexpr::SetError::Malformed(e.to_string()))
        };
        let facts = Facts {
            finiteness: Some(Finiteness::Unknown),
            density: Some(BigRational::zero()),
            profile: None,
            note: Some("at most one value per dyadic block: countBound(N) ≤ log₂N + 2".into()),
            within: None,
        };
        let range = SetExpr::counted(Listed::new("greedy-range", gen, facts));
        let mut verdict = contains(ideal, &range);
        verdict.certificate = format!("values decrease within every block; {}", verdict.certificate);
        return Ok(Extraction {
            indices,
            values,
            range: Some(range),
            rule: RangeRule::DyadicDecrease,
            verdict,
        });
    }
    Ok(Extraction {
        indices,
        values,
        range: None,
        rule: RangeRule::Undetermined,
        verdict: MembershipVerdict {
            verdict: Verdict::Unknown,
            certificate: "range could not be identified".into(),
            block_bound: None,
            witness: Vec::new(),
        },
    })
}

#[derive(Debug, Clone)]
pub struct Prop26Analysis {
    pub seq: SeqPresentation,
    pub k_max: u32,
    /// `x_1, …, x_N` for `N = 2^{k_max+1}`.
    pub values: Vec<u64>,
    pub blocks_decreasing: bool,
    pub longest_increasing: usize,
    pub length_bound: usize,
    /// Upper bound on the range density of any increasing subsequence at `N`.
    pub density_bound: BigRational,
    pub certificate: String,
}

/// Length of the longest strictly increasing subsequence.
pub(crate) fn longest_increasing(xs: &[u64]) -> usize {
    let mut tails: Vec<u64> = Vec::new();
    for &x in xs {
        let i = tails.partition_point(|&t| t < x);
        if i == tails.len() {
            tails.push(x);
        } else {
            tails[i] = x;
        }
    }
    tails.len()
}

pub fn prop26_counterexample(k_max: u32) -> SeqResult<Prop26Analysis> {
    if !(3..=22).contains(&k_max) {
        return Err(SeqError::Argument("k_max must lie in 3..=22".into()));
    }
    let seq = prop26_sequence();
    let n_max = 1u64 << (k_max + 1);
    let values = (1..=n_max).map(|n| seq.nat_value(n)).collect::<SeqResult<Vec<_>>>()?;
    let blocks_decreasing = (3..=n_max).all(|n| {
        let (_, r) = block_coords(n);
        r == 1 || values[n as usize - 1] < values[n as usize - 2]
    });
    let longest = longest_increasing(&values);
    let bound = k_max as usize + 2;
    let certificate = format!(
        "values strictly decrease within each of the {k_max} blocks, so an increasing subsequence \
         takes at most one index per block plus one of x₁, x₂: length ≤ {bound}, range count ≤ {bound} at N = {n_max}"
    );
    Ok(Prop26Analysis {
        seq,
        k_max,
        values,
        blocks_decreasing,
        longest_increasing: longest,
        length_bound: bound,
        density_bound: BigRational::new(BigInt::from(bound), BigInt::from(n_max)),
        certificate,
    })
}
