//! Witnesses for the shrinking conditions.
//!
//! Condition (C) for `I` and `A ∉ I`: some `B ⊆ A` with `B ∉ I` has no
//! infinite subset in `I`. Condition (B) for a family `(Aᵢ)` outside `I`:
//! there are `Bᵢ ⊆ Aᵢ` in `I` whose union is not in `I`.
//!
//! Both conditions quantify over all subsets. Here witnesses are built for
//! the catalog ideals and checked against a finite corpus of subsets.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::ideals::{contains, IdealSpec, MembershipVerdict, Verdict};
use crate::setexpr::{
    classify_finiteness, members, BlockProfile, EveryOther, Facts, Finiteness, Listed, OnePerBlock,
    PowersOfTwo, SetError, SetExpr, SquareIndexed, Squares, Trace, MAX_WINDOW,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShrinkError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no witness strategy applies: {0}")]
    StrategyFailure(String),
    #[error(transparent)]
    Set(#[from] SetError),
}

pub type ShrinkResult<T> = std::result::Result<T, ShrinkError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    OddPart,
    OnePerBlock,
    WithinBlock,
    Custom,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::OddPart => "odd-part",
            Strategy::OnePerBlock => "one-per-block",
            Strategy::WithinBlock => "within-block",
            Strategy::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CWitness {
    pub ideal: IdealSpec,
    pub a: SetExpr,
    pub b: SetExpr,
    pub strategy: Strategy,
}

impl CWitness {
    pub fn custom(ideal: IdealSpec, a: SetExpr, b: SetExpr) -> Self {
        CWitness {
            ideal,
            a,
            b,
            strategy: Strategy::Custom,
        }
    }
}

fn require_out(ideal: &IdealSpec, a: &SetExpr) -> ShrinkResult<()> {
    let v = contains(ideal, a);
    if v.is_out() {
        Ok(())
    } else {
        Err(ShrinkError::Precondition(format!("{a} is {} for {ideal}: {}", v.verdict, v.certificate)))
    }
}

/// Build a condition-(C) witness for `A ∉ I`.
pub fn cond_c_witness(ideal: &IdealSpec, a: &SetExpr) -> ShrinkResult<CWitness> {
    require_out(ideal, a)?;
    let (b, strategy) = match ideal {
        IdealSpec::EvenFin => (a.clone().inter_simplified(SetExpr::odds()), Strategy::OddPart),
        IdealSpec::MeetsFinBlocks => {
            let b = if *a == SetExpr::naturals() {
                SetExpr::counted(PowersOfTwo)
            } else {
                SetExpr::counted(OnePerBlock(a.clone()))
            };
            (b, Strategy::OnePerBlock)
        }
        IdealSpec::FinPerBlock => {
            let j = a.block_profile().first_infinite_block().ok_or_else(|| {
                ShrinkError::StrategyFailure(format!("no block with certified infinite trace in {a}"))
            })?;
            let blk = SetExpr::block(j as u32)
                .map_err(|_| ShrinkError::StrategyFailure(format!("block index {j} out of range")))?;
            let b = if *a == blk { blk } else { a.clone().inter_simplified(blk) };
            (b, Strategy::WithinBlock)
        }
        other => {
            return Err(ShrinkError::StrategyFailure(format!("no condition-(C) construction for {other}")));
        }
    };
    Ok(CWitness {
        ideal: ideal.clone(),
        a: a.clone(),
        b,
        strategy,
    })
}

/// Outcome of checking a (C) witness against the subset corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CVerdict {
    /// No corpus subset is certified in the ideal.
    Consistent { checked: usize },
    /// `subset` is an infinite subset of `B` that lies in the ideal, or
    /// `B` itself fails the witness invariants.
    Refuted { subset: SetExpr, reason: String },
    /// `B` could not be certified outside the ideal.
    Inconclusive(String),
}

impl CVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, CVerdict::Consistent { .. })
    }
}

/// Subsets of `B` tried by [`cond_c_verify`].
pub fn subset_corpus(b: &SetExpr) -> Vec<SetExpr> {
    let mut out = vec![b.clone()];
    for m in 2..=8u64 {
        for r in 0..m {
            out.push(b.clone().inter(SetExpr::arith(r, m).unwrap()));
        }
    }
    for i in 1..=8u32 {
        out.push(b.clone().inter(SetExpr::Block(i)));
    }
    out.push(SetExpr::counted(EveryOther(b.clone())));
    out.push(SquareIndexed::of(b.clone()));
    out
}

/// Ten structured sets of positive density, each outside `I_d`.
pub fn density_candidates() -> Vec<SetExpr> {
    let arith = |r, m| SetExpr::arith(r, m).unwrap();
    vec![
        SetExpr::naturals(),
        SetExpr::evens(),
        SetExpr::odds(),
        arith(1, 3),
        SetExpr::Tail(100),
        SetExpr::Block(1),
        SetExpr::Block(2),
        SetExpr::counted(Squares).compl(),
        arith(0, 5).union(arith(2, 5)),
        SetExpr::counted(PowersOfTwo).compl().inter(arith(1, 4).compl()),
    ]
}

/// The first ten sets outside `ideal` from a fixed pool of structured sets.
pub fn example_corpus(ideal: &IdealSpec) -> Vec<SetExpr> {
    let arith = |r, m| SetExpr::arith(r, m).unwrap();
    let pool = [
        SetExpr::odds(),
        arith(1, 3),
        arith(0, 3),
        SetExpr::Tail(100),
        SetExpr::counted(Squares).compl(),
        arith(0, 5).union(arith(2, 5)),
        SetExpr::counted(PowersOfTwo).compl().inter(arith(1, 4).compl()),
        arith(2, 7),
        arith(1, 5),
        SetExpr::evens().union(arith(3, 4)),
        SetExpr::finite([1, 2, 3]).unwrap().compl(),
        SetExpr::Block(1).union(SetExpr::Block(3)),
        arith(1, 4),
        SetExpr::Block(2).union(arith(1, 6)),
        arith(5, 9),
        SetExpr::Tail(7).diff(arith(0, 11)),
    ];
    pool.into_iter().filter(|a| contains(ideal, a).is_out()).take(10).collect()
}

pub fn cond_c_verify(w: &CWitness, window: u64) -> ShrinkResult<CVerdict> {
    let stray = members(&w.b.clone().diff(w.a.clone()), window)?;
    if let Some(x) = stray.first() {
        return Ok(CVerdict::Refuted {
            subset: w.b.clone(),
            reason: format!("B ⊄ A: {x} ∈ B \\ A"),
        });
    }
    let vb = contains(&w.ideal, &w.b);
    match vb.verdict {
        Verdict::In => {
            return Ok(CVerdict::Refuted {
                subset: w.b.clone(),
                reason: format!("B itself is in {}: {}", w.ideal, vb.certificate),
            })
        }
        Verdict::Unknown => return Ok(CVerdict::Inconclusive(vb.certificate)),
        Verdict::Out => {}
    }
    let mut checked = 0;
    for s in subset_corpus(&w.b) {
        if classify_finiteness(&s) != Finiteness::Infinite {
            continue;
        }
        checked += 1;
        let v = contains(&w.ideal, &s);
        if v.is_in() {
            return Ok(CVerdict::Refuted {
                subset: s,
                reason: format!("infinite subset in {}: {}", w.ideal, v.certificate),
            });
        }
    }
    Ok(CVerdict::Consistent { checked })
}

/// A uniform infinite family `(Aᵢ)_{i≥1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Constant(SetExpr),
    /// `Aᵢ = Tail(i)`.
    Tails,
    /// `Aᵢ = sets[(i - 1) mod len]`.
    Cycle(Vec<SetExpr>),
}

impl Family {
    pub fn member(&self, i: usize) -> SetExpr {
        match self {
            Family::Constant(a) => a.clone(),
            Family::Tails => SetExpr::Tail(i as u64),
            Family::Cycle(v) => v[(i - 1) % v.len()].clone(),
        }
    }

    /// Length of the repeating pattern; for tails the sets only shrink.
    fn period(&self) -> usize {
        match self {
            Family::Cycle(v) => v.len(),
            _ => 1,
        }
    }

    /// The distinct shapes every member is drawn from, plus one
    /// representative for the tails.
    fn shapes(&self, k: usize) -> Vec<SetExpr> {
        match self {
            Family::Constant(a) => vec![a.clone()],
            Family::Tails => (1..=k.max(1)).map(|i| SetExpr::Tail(i as u64)).collect(),
            Family::Cycle(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BWitness {
    pub ideal: IdealSpec,
    pub family: Vec<SetExpr>,
    pub picks: Vec<SetExpr>,
    pub union: SetExpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pick {
    /// Stage `i` takes `count(i)` fresh elements of `Aᵢ ∩ pool`.
    Fresh { per_stage_i: bool, pool: Option<PoolKind> },
    /// Stage `i` takes the least element of `Aᵢ` in each of its first
    /// `i` blocks, ordered by least element.
    Blocks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PoolKind {
    Odd,
    Block(u32),
}

impl PoolKind {
    fn set(self) -> SetExpr {
        match self {
            PoolKind::Odd => SetExpr::odds(),
            PoolKind::Block(j) => SetExpr::Block(j),
        }
    }
}

struct Construction {
    family: Family,
    pick: Pick,
}

impl Construction {
    fn pool(&self, i: usize) -> SetExpr {
        let a = self.family.member(i);
        match self.pick {
            Pick::Fresh { pool: Some(p), .. } => a.inter_simplified(p.set()),
            _ => a,
        }
    }

    /// Stage picks restricted to `[1..n]`, given the elements used so far.
    fn stage(&self, i: usize, n: u64, used: &BTreeSet<u64>) -> Result<Vec<u64>, SetError> {
        match self.pick {
            Pick::Fresh { per_stage_i, .. } => {
                let want = if per_stage_i { i } else { 1 };
                Ok(members(&self.pool(i), n)?
                    .into_iter()
                    .filter(|x| !used.contains(x))
                    .take(want)
                    .collect())
            }
            Pick::Blocks => {
                let mut seen = [false; 64];
                let mut out = Vec::new();
                for x in members(&self.family.member(i), n)? {
                    let v = x.trailing_zeros() as usize;
                    if !seen[v] {
                        seen[v] = true;
                        out.push(x);
                        if out.len() == i {
                            break;
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// `(⋃ Bᵢ) ∩ [1..n]` over the whole infinite family.
    fn union_upto(&self, n: u64) -> Result<Vec<u64>, SetError> {
        let mut used = BTreeSet::new();
        let period = self.family.period();
        match self.pick {
            Pick::Fresh { .. } => {
                let mut idle = 0;
                let mut i = 1;
                // later stages only take elements above n once every
                // member of the pattern has run dry inside the window
                while idle < period {
                    let s = self.stage(i, n, &used)?;
                    idle = if s.is_empty() { idle + 1 } else { 0 };
                    used.extend(s);
                    i += 1;
                }
            }
            Pick::Blocks => {
                // stage i ∩ [1..n] stabilises once i exceeds the 64 blocks,
                // and tail stages only reach elements ≥ i
                let stages = match self.family {
                    Family::Tails => n as usize,
                    _ => 65 * period,
                };
                for i in 1..=stages {
                    used.extend(self.stage(i, n, &used)?);
                }
            }
        }
        Ok(used.into_iter().collect())
    }

    /// Stage `i` in full, widening the window until it is complete.
    fn full_stage(&self, i: usize, used: &BTreeSet<u64>) -> ShrinkResult<Vec<u64>> {
        let want = match self.pick {
            Pick::Fresh { per_stage_i: true, .. } | Pick::Blocks => i,
            Pick::Fresh { .. } => 1,
        };
        let mut n = 1u64 << 10;
        loop {
            let s = self.stage(i, n, used)?;
            if s.len() == want {
                return Ok(s);
            }
            if n >= MAX_WINDOW {
                return Err(ShrinkError::StrategyFailure(format!(
                    "stage {i} found only {} of {want} picks below {MAX_WINDOW}",
                    s.len()
                )));
            }
            n *= 4;
        }
    }
}

fn union_facts(ideal: &IdealSpec, pick: Pick) -> Facts {
    let mut facts = Facts {
        finiteness: Some(Finiteness::Infinite),
        density: None,
        profile: None,
        note: Some("every stage adds a new element, and there are infinitely many stages".into()),
        within: None,
    };
    match (ideal, pick) {
        (_, Pick::Fresh { pool: Some(p), .. }) => {
            let j = match p {
                PoolKind::Odd => 1,
                PoolKind::Block(j) => j as usize,
            };
            let mut explicit = vec![Trace::EMPTY; j];
            explicit[j - 1] = Trace::INFINITE;
            facts.profile = Some(BlockProfile {
                explicit,
                tail: Trace::EMPTY,
                met_hint: Finiteness::Finite,
            });
            facts.within = Some(Box::new(p.set()));
        }
        (_, Pick::Blocks) => {
            facts.profile = Some(BlockProfile {
                explicit: Vec::new(),
                tail: Trace::ANY,
                met_hint: Finiteness::Infinite,
            });
            facts.note = Some("stage i meets i distinct blocks, so the union meets infinitely many".into());
        }
        _ => {}
    }
    facts
}

/// Shared block with a certified infinite trace in every member.
fn shared_block(family: &Family, k: usize) -> Option<u32> {
    let profiles: Vec<BlockProfile> = family.shapes(k).iter().map(|a| a.block_profile()).collect();
    (1..=64u32).find(|&j| profiles.iter().all(|p| p.trace(j as usize).is_infinite()))
}

/// Build the first `k` stages of a condition-(B) witness.
pub fn cond_b_witness(ideal: &IdealSpec, family: &Family, k: usize) -> ShrinkResult<BWitness> {
    if k == 0 {
        return Err(ShrinkError::Precondition("k must be at least 1".into()));
    }
    if let Family::Cycle(v) = family {
        if v.is_empty() {
            return Err(ShrinkError::Precondition("empty family".into()));
        }
    }
    for s in family.shapes(k) {
        require_out(ideal, &s)?;
    }
    let pick = match ideal {
        IdealSpec::Fin => Pick::Fresh { per_stage_i: false, pool: None },
        IdealSpec::EvenFin => Pick::Fresh { per_stage_i: true, pool: Some(PoolKind::Odd) },
        IdealSpec::MeetsFinBlocks => Pick::Blocks,
        IdealSpec::FinPerBlock => {
            let j = shared_block(family, k).ok_or_else(|| {
                ShrinkError::StrategyFailure("no block has a certified infinite trace in every member".into())
            })?;
            Pick::Fresh { per_stage_i: true, pool: Some(PoolKind::Block(j)) }
        }
        other => {
            return Err(ShrinkError::StrategyFailure(format!("no condition-(B) construction for {other}")));
        }
    };
    let c = Construction { family: family.clone(), pick };
    let mut used = BTreeSet::new();
    let mut picks = Vec::with_capacity(k);
    for i in 1..=k {
        let s = c.full_stage(i, &used)?;
        used.extend(s.iter().copied());
        picks.push(SetExpr::Finite(s));
    }
    let facts = union_facts(ideal, pick);
    let name = format!("shrink-b({ideal})");
    let c2 = Construction { family: family.clone(), pick };
    let union = SetExpr::counted(Listed::new(name, move |n| c2.union_upto(n), facts));
    Ok(BWitness {
        ideal: ideal.clone(),
        family: (1..=k).map(|i| family.member(i)).collect(),
        picks,
        union,
    })
}

/// Result of [`check_b_witness`].
#[derive(Debug, Clone)]
pub struct BCheck {
    pub picks_inside: bool,
    pub picks_in_ideal: Vec<MembershipVerdict>,
    pub union: MembershipVerdict,
    /// Every pick is contained in the windowed union.
    pub union_covers_picks: bool,
}

impl BCheck {
    pub fn holds(&self) -> bool {
        self.picks_inside && self.union_covers_picks && self.picks_in_ideal.iter().all(|v| v.is_in()) && self.union.is_out()
    }
}

/// Check the three typed invariants of a (B) witness.
pub fn check_b_witness(w: &BWitness) -> ShrinkResult<BCheck> {
    let mut inside = true;
    let mut top = 1;
    for (b, a) in w.picks.iter().zip(&w.family) {
        if let SetExpr::Finite(xs) = b {
            for &x in xs {
                inside &= a.contains_point(x)?;
                top = top.max(x);
            }
        }
    }
    let u = members(&w.union, top)?;
    let covers = w.picks.iter().all(|b| match b {
        SetExpr::Finite(xs) => xs.iter().all(|x| u.binary_search(x).is_ok()),
        _ => false,
    });
    Ok(BCheck {
        picks_inside: inside,
        picks_in_ideal: w.picks.iter().map(|b| contains(&w.ideal, b)).collect(),
        union: contains(&w.ideal, &w.union),
        union_covers_picks: covers,
    })
}
