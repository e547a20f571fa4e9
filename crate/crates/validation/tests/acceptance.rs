//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

use std::time::{Duration, Instant};

use ideal_conv::ideals::IdealSpec;
use ideal_conv::onepoint::{
    build_onepoint, circle_converges_by_opens, circle_converges_to_alpha, circle_e, circle_e_upper,
    circle_not_hausdorff, grid_injectivity, homeo_search, CirclePoint, Separation,
};
use ideal_conv::seq::{i_eventually_constant, prop26_counterexample, Point, SeqPresentation};
use ideal_conv::setexpr::{count_prefix, density, members, DensityResult, SetExpr, Squares};
use ideal_conv::shrink::{cond_c_verify, cond_c_witness, density_candidates, example_corpus, CVerdict, CWitness};
use ideal_conv::topolab::{
    enumerate_topologies, i_closure, is_i_compact, is_i_continuous, is_i_us, FinMap, FinSpace, MembershipTable,
};
use ideal_conv_validation as oracle;
use num_bigint::BigInt;
use num_rational::BigRational;

type Check = Result<String, String>;

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn spaces(max: usize) -> Result<Vec<FinSpace>, String> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(enumerate_topologies(n).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn alternating_sequence() -> Check {
    let seq = SeqPresentation::fibers(vec![(Point::int(0), SetExpr::odds()), (Point::int(1), SetExpr::evens())])
        .map_err(|e| e.to_string())?;
    for n in 1..=1000u64 {
        let want = Point::int((n % 2 == 0) as i64);
        ensure(seq.value(n).map_err(|e| e.to_string())?.same(&want), format!("x_{n} is wrong"))?;
    }
    let i1 = i_eventually_constant(&seq, &IdealSpec::EvenFin).map_err(|e| e.to_string())?;
    ensure(matches!(&i1, Some((p, _)) if p.same(&Point::int(0))), "I1 value is not 0")?;
    // Both values recur forever: 2k ~ 1 and 2k+1 ~ 0 for every k.
    ensure((1..500u64).all(|k| seq.value(2 * k).unwrap().same(&Point::int(1)) && seq.value(2 * k + 1).unwrap().same(&Point::int(0))), "not alternating")?;
    let fin = i_eventually_constant(&seq, &IdealSpec::Fin).map_err(|e| e.to_string())?;
    ensure(fin.is_none(), "Fin reports a value")?;
    Ok("I1-eventually constant at 0; Fin finds no value".into())
}

fn shrinking_witnesses() -> Check {
    const W: u64 = 1 << 12;
    let mut total = 0;
    for i in [IdealSpec::EvenFin, IdealSpec::MeetsFinBlocks, IdealSpec::FinPerBlock] {
        let corpus = example_corpus(&i);
        ensure(corpus.len() == 10, format!("{i}: corpus has {} sets", corpus.len()))?;
        for a in std::iter::once(SetExpr::naturals()).chain(corpus) {
            let w = cond_c_witness(&i, &a).map_err(|e| format!("{i} on {a}: {e}"))?;
            let v = cond_c_verify(&w, W).map_err(|e| e.to_string())?;
            ensure(v.is_consistent(), format!("{i} on {a}: {v:?}"))?;
            // B ⊆ A on the window, and the window shows B escaping the
            // ideal in the way its definition asks.
            let b = members(&w.b, W).map_err(|e| e.to_string())?;
            ensure(b.iter().all(|&n| w.a.contains_point(n).unwrap()), format!("{i}: B ⊄ A"))?;
            let mut per_block = [0usize; 13];
            for &n in &b {
                per_block[n.trailing_zeros() as usize] += 1;
            }
            let escapes = match i {
                IdealSpec::EvenFin => b.iter().filter(|&&n| n % 2 == 1).count() >= 10,
                IdealSpec::MeetsFinBlocks => per_block.iter().filter(|&&c| c > 0).count() >= 5,
                _ => per_block.iter().any(|&c| c >= 10),
            };
            ensure(escapes, format!("{i}: B = {} looks inside the ideal", w.b))?;
            total += 1;
        }
    }
    Ok(format!("{total} witnesses consistent at window 2^12"))
}

fn dyadic_counterexample() -> Check {
    let a = prop26_counterexample(15).map_err(|e| e.to_string())?;
    let n = 1usize << 16;
    let xs: Vec<u64> = (1..=n as u64).map(oracle::dyadic_value).collect();
    ensure(a.values == xs, "values differ from the formula")?;
    let runs = oracle::decreasing_runs(&xs);
    ensure(runs.len() == 16, format!("{} decreasing runs", runs.len()))?;
    let lis = oracle::longest_increasing_by_runs(&xs, &runs);
    ensure(lis <= 17 && a.longest_increasing == lis, format!("longest increasing {lis}, library {}", a.longest_increasing))?;
    let bound = BigRational::new(BigInt::from(17), BigInt::from(n));
    ensure(a.density_bound <= bound, format!("density bound {}", a.density_bound))?;
    ensure(BigRational::new(BigInt::from(lis), BigInt::from(n)) <= bound, "densest range too dense")?;
    Ok(format!("longest increasing {lis} ≤ 17, range density ≤ {lis}/65536"))
}

fn density_zero_refutation() -> Check {
    const W: u64 = 1 << 12;
    let cands = density_candidates();
    ensure(cands.len() == 10, "need 10 candidates")?;
    for b in cands {
        let hits = (1..=W).filter(|&n| b.contains_point(n).unwrap()).count();
        ensure(hits * 8 >= W as usize, format!("{b} looks sparse: {hits}/{W}"))?;
        let v = cond_c_verify(&CWitness::custom(IdealSpec::DensityZero, SetExpr::naturals(), b.clone()), W)
            .map_err(|e| e.to_string())?;
        ensure(matches!(v, CVerdict::Refuted { .. }), format!("{b}: {v:?}"))?;
    }
    Ok("all 10 candidates refuted".into())
}

fn topology_counts() -> Result<(), String> {
    for n in 1..=4 {
        let lib = enumerate_topologies(n).map_err(|e| e.to_string())?;
        let want = oracle::count_topologies(n);
        ensure(lib.len() == want, format!("n = {n}: {} vs {want}", lib.len()))?;
        ensure(lib.iter().all(|s| oracle::is_topology(n, s.opens())), "invalid topology enumerated")?;
    }
    Ok(())
}

fn closure_collapse() -> Check {
    topology_counts()?;
    let all = spaces(4)?;
    let mut checked = 0;
    for i in [IdealSpec::Fin, IdealSpec::EvenFin, IdealSpec::MeetsFinBlocks, IdealSpec::FinPerBlock, IdealSpec::DensityZero] {
        let t = MembershipTable::new(&i);
        for s in &all {
            for a in 0..=s.full() {
                ensure(i_closure(s, a, &t) == oracle::closure(s.len(), s.opens(), a), format!("{i} on {s}, {}", s.fmt_set(a)))?;
                checked += 1;
            }
        }
    }
    Ok(format!("counts 1,4,29,355 confirmed; {checked} closures agree"))
}

fn continuity_lab() -> Check {
    let all = spaces(3)?;
    let mut maps = 0;
    for i in [IdealSpec::Fin, IdealSpec::EvenFin] {
        let t = MembershipTable::new(&i);
        for x in &all {
            for y in &all {
                for f in FinMap::all(x, y) {
                    let seq = is_i_continuous(&f, &t).map_err(|e| e.to_string())?;
                    let pre = oracle::is_continuous(x.opens(), y.opens(), &f.map);
                    ensure(seq == pre, format!("{i}: {x} -> {y} by {:?}", f.map))?;
                    maps += 1;
                }
            }
        }
    }
    Ok(format!("{maps} maps agree"))
}

fn onepoint_lab() -> Check {
    let t = MembershipTable::new(&IdealSpec::Fin);
    let all = spaces(4)?;
    let mut undense = 0;
    for s in &all {
        let x = build_onepoint(s, &IdealSpec::Fin).map_err(|e| e.to_string())?;
        let n = x.space.len();
        ensure(oracle::is_topology(n, x.space.opens()), format!("{s}: not a topology"))?;
        ensure(x.space.is_open(x.base_mask()), format!("{s}: base not open"))?;
        ensure(is_i_compact(&x.space, &t).compact, format!("{s}: extension not compact"))?;
        let y = build_onepoint(s, &IdealSpec::Fin).map_err(|e| e.to_string())?;
        ensure(homeo_search(&x, &y).is_some(), format!("{s}: rebuild differs"))?;
        let discrete = s.opens().len() == 1 << s.len();
        ensure(oracle::is_hausdorff(n, x.space.opens()) == discrete, format!("{s}: Hausdorff mismatch"))?;
        if oracle::closure(n, x.space.opens(), x.base_mask()) != x.space.full() {
            undense += 1;
        }
    }
    ensure(
        undense == 0,
        format!(
            "base dense in {} of {} extensions: every finite base is closed and I-compact, so {{α}} is open",
            all.len() - undense,
            all.len()
        ),
    )?;
    Ok(format!("{} extensions checked", all.len()))
}

fn us_t1() -> Check {
    let all = spaces(4)?;
    for i in IdealSpec::catalog() {
        let t = MembershipTable::new(&i);
        for s in &all {
            ensure(is_i_us(s, &t) == oracle::is_t1(s.len(), s.opens()), format!("{i} on {s}"))?;
        }
    }
    Ok(format!("{} ideals × {} spaces", IdealSpec::catalog().len(), all.len()))
}

fn circle() -> Check {
    const N: usize = 10_000;
    let xs: Vec<f64> = (0..N).map(|k| -50.0 + 100.0 * k as f64 / (N - 1) as f64).collect();
    let pts: Vec<(f64, f64)> = xs.iter().map(|&x| circle_e(x)).collect();
    for (&x, &(a, b)) in xs.iter().zip(&pts) {
        ensure(((a * a + b * b).sqrt() - 1.0).abs() <= 1e-9, format!("|e({x})| ≠ 1"))?;
    }
    let mut min = f64::INFINITY;
    for i in 0..N {
        for j in i + 1..N {
            min = min.min((pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1));
        }
    }
    ensure(min > 1e-9, format!("grid images collide: {min}"))?;
    ensure(grid_injectivity(circle_e, -50.0, 50.0, N).injective, "library grid check failed")?;
    let (p, q) = (circle_e_upper(2.0), circle_e_upper(0.8));
    ensure((p.0 - q.0).hypot(p.1 - q.1) < 1e-12, "upper-branch formula separates 2 and 0.8")?;
    ensure(!grid_injectivity(circle_e_upper, -50.0, 50.0, N).injective, "upper-branch formula passes")?;

    let pool = [
        SetExpr::evens(),
        SetExpr::arith(1, 3).unwrap(),
        SetExpr::Block(2),
        SetExpr::finite([1, 4, 9]).unwrap(),
        SetExpr::Tail(30),
        SetExpr::counted(Squares),
        SetExpr::Block(1).union(SetExpr::Tail(100)),
    ];
    let catalog = IdealSpec::catalog();
    let mut seed = 0x2545_f491_u64;
    let mut next = |m: usize| {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 33) as usize % m
    };
    for k in 0..20 {
        let (a, b) = (pool[next(pool.len())].clone(), pool[next(pool.len())].clone());
        let mut point = || match next(5) {
            0 => CirclePoint::Alpha,
            r => CirclePoint::of_real(r as f64 * 1.5 - 4.0),
        };
        let fibers = vec![(point(), a.clone().inter(b.clone())), (point(), a.clone().diff(b)), (point(), a.compl())];
        let i = &catalog[next(catalog.len())];
        let (rule, opens) = (circle_converges_to_alpha(&fibers, i), circle_converges_by_opens(&fibers, i));
        ensure(rule == opens, format!("sequence {k} under {i}: {rule} vs {opens}"))?;
    }
    ensure(matches!(circle_not_hausdorff().separation, Separation::NotSeparated { .. }), "no non-Hausdorff certificate")?;
    Ok(format!("min image distance {min:.3e}; 20 sequences agree"))
}

fn density_engine() -> Check {
    const N: u64 = 1 << 16;
    let tol = BigRational::new(BigInt::from(1), BigInt::from(256));
    let mut sets: Vec<(SetExpr, u64)> = Vec::new();
    for m in 1..=12u64 {
        for r in 0..m {
            sets.push((SetExpr::arith(r, m).unwrap(), (1..=N).filter(|n| n % m == r).count() as u64));
        }
    }
    for i in 1..=16u32 {
        sets.push((SetExpr::Block(i), (1..=N).filter(|n| n.trailing_zeros() == i - 1).count() as u64));
    }
    sets.push((SetExpr::counted(Squares), oracle::isqrt(N)));
    for (e, count) in &sets {
        let DensityResult::Exact(d) = density(e, N).map_err(|x| x.to_string())? else {
            return Err(format!("{e}: density not exact"));
        };
        ensure(count_prefix(e, N).unwrap() == *count, format!("{e}: prefix count"))?;
        let ratio = BigRational::new(BigInt::from(*count), BigInt::from(N));
        let gap = if d > ratio { &d - &ratio } else { &ratio - &d };
        ensure(gap <= tol, format!("{e}: density {d} vs ratio {ratio}"))?;
    }
    let blocks: Vec<SetExpr> = (1..=13).map(SetExpr::Block).collect();
    for n in 1..=1u64 << 12 {
        let hits = blocks.iter().filter(|b| b.contains_point(n).unwrap()).count();
        ensure(hits == 1, format!("{n} lies in {hits} blocks"))?;
    }
    Ok(format!("{} sets within 2^-8; blocks partition [1, 4096]", sets.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("eventual constancy of the alternating sequence", alternating_sequence, 1),
        ("shrinking condition witnesses for I1, I2, I3", shrinking_witnesses, 10),
        ("dyadic sequence with density-zero increasing ranges", dyadic_counterexample, 30),
        ("density-zero ideal refutes every candidate", density_zero_refutation, 10),
        ("closure collapse on small spaces", closure_collapse, 120),
        ("sequential and preimage continuity agree", continuity_lab, 120),
        ("one-point extensions of small spaces", onepoint_lab, 120),
        ("unique limits iff T1", us_t1, 60),
        ("circle as the compactified line", circle, 10),
        ("density engine", density_engine, 10),
    ];
    let mut failed = Vec::new();
    for (k, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match result {
            Ok(msg) if took > Duration::from_secs(*limit) => Err(format!("{msg}, but took {took:.1?} > {limit}s")),
            r => r,
        };
        match result {
            Ok(msg) => println!("criterion {}: PASS {name} ({msg}) [{took:.1?}]", k + 1),
            Err(msg) => {
                println!("criterion {}: FAIL {name} ({msg}) [{took:.1?}]", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
