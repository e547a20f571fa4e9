use super::{FinSpace, TopoError, TopoResult};
use crate::ideals::{contains, IdealSpec, Verdict};
use crate::setexpr::{members, SetExpr};

const MAX_MODULUS: usize = 4;

/// Verdicts of `contains(I, ⋃_{r ∈ mask} Arith(r, m))` for `m ≤ 4`: all a
/// corpus sequence needs to know about its fibers.
#[derive(Debug, Clone)]
pub struct MembershipTable {
    pub ideal: IdealSpec,
    verdicts: Vec<Vec<Verdict>>,
}

/// `⋃_{r ∈ mask} Arith(r, m)`.
pub fn residue_union(m: usize, mask: u32) -> SetExpr {
    if mask == (1 << m) - 1 {
        return SetExpr::naturals();
    }
    SetExpr::union_all((0..m as u64).filter(|r| mask >> r & 1 == 1).map(|r| SetExpr::arith(r, m as u64).unwrap()))
}

impl MembershipTable {
    pub fn new(ideal: &IdealSpec) -> Self {
        let verdicts = (0..=MAX_MODULUS)
            .map(|m| {
                if m == 0 {
                    return Vec::new();
                }
                (0..1u32 << m).map(|mask| contains(ideal, &residue_union(m, mask)).verdict).collect()
            })
            .collect();
        MembershipTable { ideal: ideal.clone(), verdicts }
    }

    pub fn lookup(&self, m: usize, mask: u32) -> Verdict {
        self.verdicts[m][mask as usize]
    }
}

/// Corpus sequence: `x_n = assign[n mod m]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueSeq {
    pub m: usize,
    pub assign: Vec<usize>,
}

impl ResidueSeq {
    /// All assignments of residues mod `m ≤ 4` to the `points` points.
    pub fn corpus(points: usize) -> Vec<ResidueSeq> {
        let mut out = Vec::new();
        for m in 1..=MAX_MODULUS {
            let total = points.pow(m as u32);
            for code in 0..total {
                let mut c = code;
                let assign = (0..m)
                    .map(|_| {
                        let d = c % points;
                        c /= points;
                        d
                    })
                    .collect();
                out.push(ResidueSeq { m, assign });
            }
        }
        out
    }

    /// Residues sent into the point set `target`.
    pub fn residues_in(&self, target: u32) -> u32 {
        (0..self.m).filter(|&r| target >> self.assign[r] & 1 == 1).fold(0, |acc, r| acc | 1 << r)
    }

    /// Points attained.
    pub fn range(&self) -> u32 {
        self.assign.iter().fold(0, |acc, &x| acc | 1 << x)
    }

    pub fn compose(&self, f: &FinMap) -> ResidueSeq {
        ResidueSeq { m: self.m, assign: self.assign.iter().map(|&x| f.map[x]).collect() }
    }

    pub fn to_finseq(&self, space: &FinSpace) -> FinSeq {
        let fibers = (0..space.len())
            .filter_map(|x| {
                let mask = self.residues_in(1 << x);
                (mask != 0).then(|| (x, residue_union(self.m, mask)))
            })
            .collect();
        FinSeq { space: space.clone(), fibers, domain: SetExpr::naturals() }
    }

    pub fn describe(&self, space: &FinSpace) -> String {
        let vals: Vec<&str> = self.assign.iter().map(|&x| space.label(x)).collect();
        format!("x_n = [{}][n mod {}]", vals.join(","), self.m)
    }
}

/// Limits found for a sequence, with points whose status is undecided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub limits: u32,
    pub undecided: u32,
}

fn corpus_limits(space: &FinSpace, t: &MembershipTable, s: &ResidueSeq) -> Limits {
    let mut out = Limits { limits: 0, undecided: 0 };
    for x in 0..space.len() {
        let outside = space.full() & !space.min_nbhd(x);
        match t.lookup(s.m, s.residues_in(outside)) {
            Verdict::In => out.limits |= 1 << x,
            Verdict::Unknown => out.undecided |= 1 << x,
            Verdict::Out => {}
        }
    }
    out
}

fn nonthin(t: &MembershipTable, s: &ResidueSeq) -> bool {
    t.lookup(s.m, (1 << s.m) - 1) == Verdict::Out
}

/// A sequence in a finite space given by its fibers.
#[derive(Debug, Clone)]
pub struct FinSeq {
    pub space: FinSpace,
    pub fibers: Vec<(usize, SetExpr)>,
    pub domain: SetExpr,
}

impl FinSeq {
    pub fn new(space: FinSpace, fibers: Vec<(usize, SetExpr)>) -> TopoResult<Self> {
        if let Some((x, _)) = fibers.iter().find(|(x, _)| *x >= space.len()) {
            return Err(TopoError::Argument(format!("point index {x} outside the space")));
        }
        let domain = SetExpr::union_all(fibers.iter().map(|(_, f)| f.clone()));
        Ok(FinSeq { space, fibers, domain })
    }

    /// Fibers pairwise disjoint on `[1..window]`.
    pub fn validate(&self, window: u64) -> TopoResult<()> {
        let mut seen = vec![false; window as usize + 1];
        for (_, f) in &self.fibers {
            for n in members(f, window)? {
                if std::mem::replace(&mut seen[n as usize], true) {
                    return Err(TopoError::Argument(format!("fibers overlap at {n}")));
                }
            }
        }
        Ok(())
    }

    fn outside(&self, target: u32) -> SetExpr {
        SetExpr::union_all(self.fibers.iter().filter(|(x, _)| target >> x & 1 == 1).map(|(_, f)| f.clone()))
    }
}

/// Limits of a nonthin sequence: `x` is a limit when the indices mapped
/// outside `min_nbhd(x)` form a set in `I/_M`.
pub fn seq_limits(s: &FinSeq, ideal: &IdealSpec) -> TopoResult<Limits> {
    let v = contains(ideal, &s.domain);
    if !v.is_out() {
        return Err(TopoError::Precondition(format!("sequence is not nonthin: domain is {}", v.verdict)));
    }
    let local = ideal.restricted_to(s.domain.clone());
    let sp = &s.space;
    let mut out = Limits { limits: 0, undecided: 0 };
    for x in 0..sp.len() {
        let outside = s.outside(sp.full() & !sp.min_nbhd(x));
        match contains(&local, &outside).verdict {
            Verdict::In => out.limits |= 1 << x,
            Verdict::Unknown => out.undecided |= 1 << x,
            Verdict::Out => {}
        }
    }
    Ok(out)
}

/// Limits of all nonthin corpus sequences with values in `a`.
pub fn i_closure(space: &FinSpace, a: u32, t: &MembershipTable) -> u32 {
    ResidueSeq::corpus(space.len())
        .iter()
        .filter(|s| s.range() & !a == 0 && nonthin(t, s))
        .fold(0, |acc, s| acc | corpus_limits(space, t, s).limits)
}

pub fn is_i_closed(space: &FinSpace, a: u32, t: &MembershipTable) -> bool {
    i_closure(space, a, t) == a
}

pub fn is_i_open(space: &FinSpace, a: u32, t: &MembershipTable) -> bool {
    is_i_closed(space, space.full() & !a, t)
}

/// No nonthin corpus sequence has two limits.
pub fn is_i_us(space: &FinSpace, t: &MembershipTable) -> bool {
    ResidueSeq::corpus(space.len())
        .iter()
        .filter(|s| nonthin(t, s))
        .all(|s| corpus_limits(space, t, s).limits.count_ones() <= 1)
}

/// Every I-closed set is closed.
pub fn is_i_sequential(space: &FinSpace, t: &MembershipTable) -> bool {
    (0..=space.full()).all(|a| !is_i_closed(space, a, t) || space.is_closed(a))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactReport {
    pub compact: bool,
    /// Nonthin corpus sequences for which a convergent nonthin
    /// subsequence was exhibited.
    pub witnessed: usize,
    pub counterexample: Option<ResidueSeq>,
}

/// Every nonthin corpus sequence has a fiber outside `I`; the constant
/// subsequence on that fiber converges to its point, since its exceptional
/// set is empty.
pub fn is_i_compact(space: &FinSpace, t: &MembershipTable) -> CompactReport {
    let mut witnessed = 0;
    for s in ResidueSeq::corpus(space.len()) {
        if !nonthin(t, &s) {
            continue;
        }
        let found = (0..space.len()).any(|x| {
            let fiber = s.residues_in(1 << x);
            fiber != 0 && t.lookup(s.m, fiber) == Verdict::Out
        });
        if !found {
            return CompactReport { compact: false, witnessed, counterexample: Some(s) };
        }
        witnessed += 1;
    }
    CompactReport { compact: true, witnessed, counterexample: None }
}

/// A total map between finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinMap {
    pub source: FinSpace,
    pub target: FinSpace,
    pub map: Vec<usize>,
}

impl FinMap {
    pub fn new(source: FinSpace, target: FinSpace, map: Vec<usize>) -> TopoResult<Self> {
        if map.len() != source.len() {
            return Err(TopoError::Argument(format!("map has {} entries for {} points", map.len(), source.len())));
        }
        if let Some(&y) = map.iter().find(|&&y| y >= target.len()) {
            return Err(TopoError::Argument(format!("image index {y} outside the target")));
        }
        Ok(FinMap { source, target, map })
    }

    pub fn identity(space: &FinSpace) -> Self {
        FinMap { source: space.clone(), target: space.clone(), map: (0..space.len()).collect() }
    }

    /// Every map from `source` to `target`.
    pub fn all(source: &FinSpace, target: &FinSpace) -> Vec<FinMap> {
        let (n, k) = (source.len(), target.len());
        if k == 0 {
            return if n == 0 { vec![FinMap::identity(source)] } else { Vec::new() };
        }
        (0..k.pow(n as u32))
            .map(|mut c| {
                let map = (0..n)
                    .map(|_| {
                        let d = c % k;
                        c /= k;
                        d
                    })
                    .collect();
                FinMap { source: source.clone(), target: target.clone(), map }
            })
            .collect()
    }

    pub fn preimage(&self, b: u32) -> u32 {
        (0..self.source.len()).filter(|&x| b >> self.map[x] & 1 == 1).fold(0, |acc, x| acc | 1 << x)
    }

    pub fn image(&self, a: u32) -> u32 {
        (0..self.source.len()).filter(|&x| a >> x & 1 == 1).fold(0, |acc, x| acc | 1 << self.map[x])
    }

    pub fn is_continuous(&self) -> bool {
        self.target.opens().iter().all(|&v| self.source.is_open(self.preimage(v)))
    }
}

fn continuous_by_sequences(f: &FinMap, t: &MembershipTable) -> bool {
    ResidueSeq::corpus(f.source.len()).iter().filter(|s| nonthin(t, s)).all(|s| {
        let lim = corpus_limits(&f.source, t, s).limits;
        let image_lim = corpus_limits(&f.target, t, &s.compose(f)).limits;
        (0..f.source.len()).all(|x| lim >> x & 1 == 0 || image_lim >> f.map[x] & 1 == 1)
    })
}

fn continuous_by_preimages(f: &FinMap, t: &MembershipTable) -> bool {
    (0..=f.target.full())
        .filter(|&b| is_i_closed(&f.target, b, t))
        .all(|b| is_i_closed(&f.source, f.preimage(b), t))
}

/// I-continuity, computed from sequences and from preimages of I-closed
/// sets; the two must agree.
pub fn is_i_continuous(f: &FinMap, t: &MembershipTable) -> TopoResult<bool> {
    let by_seq = continuous_by_sequences(f, t);
    let by_pre = continuous_by_preimages(f, t);
    if by_seq != by_pre {
        return Err(TopoError::Inconsistent(format!(
            "sequential test says {by_seq}, preimage test says {by_pre} for map {:?}",
            f.map
        )));
    }
    Ok(by_seq)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm212Report {
    /// Preimages of I-compact subsets are I-compact.
    pub b_pass: bool,
    pub b_checked: usize,
    /// Preimages of `x̄ = range ∪ {limit}` are I-compact for convergent
    /// nonthin corpus sequences.
    pub c_pass: bool,
    pub c_checked: usize,
}

pub fn check_thm212_bc(f: &FinMap, t: &MembershipTable) -> TopoResult<Thm212Report> {
    if !is_i_continuous(f, t)? {
        return Err(TopoError::Precondition("map is not I-continuous".into()));
    }
    let compact = |space: &FinSpace, mask: u32| is_i_compact(&space.subspace(mask), t).compact;
    let (mut b_pass, mut b_checked) = (true, 0);
    for b in 0..=f.target.full() {
        if compact(&f.target, b) {
            b_checked += 1;
            b_pass &= compact(&f.source, f.preimage(b));
        }
    }
    let (mut c_pass, mut c_checked) = (true, 0);
    for s in ResidueSeq::corpus(f.target.len()) {
        if !nonthin(t, &s) {
            continue;
        }
        let lim = corpus_limits(&f.target, t, &s).limits;
        for y in (0..f.target.len()).filter(|y| lim >> y & 1 == 1) {
            c_checked += 1;
            c_pass &= compact(&f.source, f.preimage(s.range() | 1 << y));
        }
    }
    Ok(Thm212Report { b_pass, b_checked, c_pass, c_checked })
}
