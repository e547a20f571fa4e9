//! Brute-force oracles for the acceptance run, written against raw bitmask
//! families so that they share no code with the library under test.

/// Whether `opens` (bitmasks over `n` points) is a topology.
pub fn is_topology(n: usize, opens: &[u32]) -> bool {
    let full = (1u32 << n) - 1;
    let has = |m: u32| opens.contains(&m);
    has(0)
        && has(full)
        && opens.iter().all(|&u| u <= full)
        && opens.iter().all(|&u| opens.iter().all(|&v| has(u | v) && has(u & v)))
}

/// Number of labeled topologies on `n ≤ 4` points, by trying every family
/// of subsets.
pub fn count_topologies(n: usize) -> usize {
    assert!(n <= 4);
    let subsets = 1usize << n;
    let mut count = 0;
    for family in 0u64..(1u64 << subsets) {
        let opens: Vec<u32> = (0..subsets as u32).filter(|&s| family >> s & 1 == 1).collect();
        if is_topology(n, &opens) {
            count += 1;
        }
    }
    count
}

/// Smallest closed superset of `a`.
pub fn closure(n: usize, opens: &[u32], a: u32) -> u32 {
    let full = (1u32 << n) - 1;
    let missed = opens.iter().filter(|&&u| u & a == 0).fold(0, |acc, &u| acc | u);
    full & !missed
}

pub fn is_t1(n: usize, opens: &[u32]) -> bool {
    (0..n).all(|x| closure(n, opens, 1 << x) == 1 << x)
}

pub fn is_hausdorff(n: usize, opens: &[u32]) -> bool {
    (0..n).all(|x| {
        (0..n).all(|y| {
            x == y
                || opens.iter().any(|&u| {
                    u >> x & 1 == 1 && opens.iter().any(|&v| v >> y & 1 == 1 && u & v == 0)
                })
        })
    })
}

pub fn preimage(map: &[usize], v: u32) -> u32 {
    map.iter().enumerate().filter(|&(_, &y)| v >> y & 1 == 1).fold(0, |acc, (x, _)| acc | 1 << x)
}

pub fn is_continuous(src: &[u32], tgt: &[u32], map: &[usize]) -> bool {
    tgt.iter().all(|&v| src.contains(&preimage(map, v)))
}

/// `x₁ = 2`, `x₂ = 1`, and for `2^k < n ≤ 2^{k+1}` the values count down
/// from `2^{k+1}`.
pub fn dyadic_value(n: u64) -> u64 {
    match n {
        1 => 2,
        2 => 1,
        _ => {
            let k = 63 - (n - 1).leading_zeros() as u64;
            let r = n - (1 << k);
            (1 << (k + 1)) - (r - 1)
        }
    }
}

/// Maximal strictly decreasing runs of `xs`, as index ranges.
pub fn decreasing_runs(xs: &[u64]) -> Vec<std::ops::Range<usize>> {
    let mut runs = Vec::new();
    let mut start = 0;
    for i in 1..=xs.len() {
        if i == xs.len() || xs[i] >= xs[i - 1] {
            runs.push(start..i);
            start = i;
        }
    }
    runs
}

/// Longest strictly increasing subsequence when each run is strictly
/// decreasing, so a selection takes at most one value per run.
pub fn longest_increasing_by_runs(xs: &[u64], runs: &[std::ops::Range<usize>]) -> usize {
    // (value, length) of the best selection ending at each value so far.
    let mut ends: Vec<(u64, usize)> = Vec::new();
    for r in runs {
        let picks: Vec<(u64, usize)> = xs[r.clone()]
            .iter()
            .map(|&x| (x, 1 + ends.iter().filter(|&&(v, _)| v < x).map(|&(_, l)| l).max().unwrap_or(0)))
            .collect();
        ends.extend(picks);
        ends.sort();
        // Keep only pairs whose length beats every smaller value.
        let mut kept: Vec<(u64, usize)> = Vec::new();
        for (v, l) in ends {
            if kept.last().is_none_or(|&(_, k)| l > k) {
                kept.push((v, l));
            }
        }
        ends = kept;
    }
    ends.iter().map(|&(_, l)| l).max().unwrap_or(0)
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!([1, 2, 3].map(count_topologies), [1, 4, 29]);
    }

    #[test]
    fn dyadic_start() {
        let v: Vec<u64> = (1..=8).map(dyadic_value).collect();
        assert_eq!(v, [2, 1, 4, 3, 8, 7, 6, 5]);
    }

    #[test]
    fn run_lis_matches_plain_lis() {
        let xs: Vec<u64> = (1..=64).map(dyadic_value).collect();
        let mut best = vec![1; xs.len()];
        for i in 0..xs.len() {
            for j in 0..i {
                if xs[j] < xs[i] {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        let runs = decreasing_runs(&xs);
        assert_eq!(runs.len(), 6);
        assert_eq!(longest_increasing_by_runs(&xs, &runs), *best.iter().max().unwrap());
    }
}
