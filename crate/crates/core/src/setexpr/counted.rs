use std::sync::Arc;

use num_integer::Roots;
use num_rational::BigRational;
use num_traits::Zero;

use super::{
    asymptotic_bounds, classify_finiteness, members, BlockProfile, Enumeration, Facts, Finiteness,
    Result, SetExpr, Trace,
};

/// The perfect squares `{1, 4, 9, ...}`.
#[derive(Debug, Clone, Copy)]
pub struct Squares;

impl Enumeration for Squares {
    fn name(&self) -> String {
        "squares".into()
    }

    fn generate(&self, n: u64) -> Result<Vec<u64>> {
        Ok((1..=n.sqrt()).map(|k| k * k).collect())
    }

    fn count_bound(&self, n: u64) -> Result<u64> {
        Ok(n.sqrt())
    }

    fn facts(&self) -> Facts {
        // k² has even 2-adic valuation: blocks with odd index are hit
        // infinitely often, the others never.
        let explicit = (1..=16)
            .map(|i| if i % 2 == 1 { Trace::INFINITE } else { Trace::EMPTY })
            .collect();
        Facts {
            finiteness: Some(Finiteness::Infinite),
            density: Some(BigRational::zero()),
            profile: Some(BlockProfile {
                explicit,
                tail: Trace::EMPTY.join(Trace::INFINITE),
                met_hint: Finiteness::Infinite,
            }),
            note: Some("countBound(N) = ⌊√N⌋, so countBound(N)/N → 0".into()),
            within: None,
        }
    }
}

/// `{1, 2, 4, 8, ...}`, the least element of every block.
#[derive(Debug, Clone, Copy)]
pub struct PowersOfTwo;

impl Enumeration for PowersOfTwo {
    fn name(&self) -> String {
        "pow2".into()
    }

    fn generate(&self, n: u64) -> Result<Vec<u64>> {
        Ok((0..64).map(|k| 1u64 << k).take_while(|&x| x <= n).collect())
    }

    fn count_bound(&self, n: u64) -> Result<u64> {
        Ok(if n == 0 { 0 } else { 64 - n.leading_zeros() as u64 })
    }

    fn facts(&self) -> Facts {
        Facts {
            finiteness: Some(Finiteness::Infinite),
            density: Some(BigRational::zero()),
            profile: Some(BlockProfile {
                explicit: Vec::new(),
                tail: Trace::FINITE,
                met_hint: Finiteness::Infinite,
            }),
            note: Some("one element per block; countBound(N) = ⌊log₂N⌋+1".into()),
            within: None,
        }
    }
}

/// The least element of `A ∩ Δᵢ` for every block `Δᵢ` that `A` meets.
#[derive(Debug, Clone)]
pub struct OnePerBlock(pub SetExpr);

impl OnePerBlock {
    fn picks(&self, n: u64) -> Result<Vec<u64>> {
        let mut seen = [false; 64];
        let mut out = Vec::new();
        for x in members(&self.0, n.max(1))? {
            let v = x.trailing_zeros() as usize;
            if !seen[v] {
                seen[v] = true;
                out.push(x);
            }
        }
        Ok(out)
    }
}

impl Enumeration for OnePerBlock {
    fn name(&self) -> String {
        format!("one-per-block({})", self.0)
    }

    fn generate(&self, n: u64) -> Result<Vec<u64>> {
        self.picks(n)
    }

    fn count_bound(&self, n: u64) -> Result<u64> {
        Ok(self.picks(n)?.len() as u64)
    }

    fn facts(&self) -> Facts {
        let inner = self.0.block_profile();
        let met = inner.blocks_met();
        let mut profile = inner.map(Trace::one_per_block);
        profile.met_hint = met;
        Facts {
            finiteness: Some(met),
            density: Some(BigRational::zero()),
            profile: Some(profile),
            note: Some("at most one element per block, so at most ⌊log₂N⌋+1 up to N".into()),
            within: None,
        }
    }
}

/// Every other element of `B`: the 1st, 3rd, 5th, ...
#[derive(Debug, Clone)]
pub struct EveryOther(pub SetExpr);

impl Enumeration for EveryOther {
    fn name(&self) -> String {
        format!("every-other({})", self.0)
    }

    fn generate(&self, n: u64) -> Result<Vec<u64>> {
        Ok(members(&self.0, n.max(1))?.into_iter().step_by(2).collect())
    }

    fn count_bound(&self, n: u64) -> Result<u64> {
        Ok(super::count_prefix(&self.0, n.max(1))?.div_ceil(2))
    }

    fn facts(&self) -> Facts {
        let half = asymptotic_bounds(&self.0)
            .exact_value()
            .map(|d| d / BigRational::from_integer(2.into()));
        Facts {
            finiteness: Some(classify_finiteness(&self.0)),
            density: half,
            profile: Some(self.0.block_profile().map(Trace::any_subset)),
            note: None,
            within: None,
        }
    }
}

/// Elements of `B` at square positions: the 1st, 4th, 9th, ...
#[derive(Debug, Clone)]
pub struct SquareIndexed(pub SetExpr);

impl SquareIndexed {
    /// `SquareIndexed(ℕ)` is just the squares.
    pub fn of(b: SetExpr) -> SetExpr {
        match b {
            SetExpr::Tail(1) => SetExpr::counted(Squares),
            b => SetExpr::counted(SquareIndexed(b)),
        }
    }
}

impl Enumeration for SquareIndexed {
    fn name(&self) -> String {
        format!("square-indexed({})", self.0)
    }

    fn generate(&self, n: u64) -> Result<Vec<u64>> {
        let m = members(&self.0, n.max(1))?;
        Ok((1..).map(|k: usize| k * k).take_while(|&p| p <= m.len()).map(|p| m[p - 1]).collect())
    }

    fn count_bound(&self, n: u64) -> Result<u64> {
        Ok(super::count_prefix(&self.0, n.max(1))?.sqrt())
    }

    fn facts(&self) -> Facts {
        Facts {
            finiteness: Some(classify_finiteness(&self.0)),
            density: Some(BigRational::zero()),
            profile: Some(self.0.block_profile().map(Trace::any_subset)),
            note: Some("countBound(N) = ⌊√|B ∩ [1..N]|⌋ ≤ √N".into()),
            within: None,
        }
    }
}

type Predicate = Arc<dyn Fn(u64) -> Result<bool> + Send + Sync>;

/// A set known only through a membership predicate.
#[derive(Clone)]
pub struct EvalSet {
    name: String,
    pred: Predicate,
    facts: Facts,
}

impl EvalSet {
    pub fn new(name: impl Into<String>, pred: impl Fn(u64) -> Result<bool> + Send + Sync + 'static) -> Self {
        EvalSet {
            name: name.into(),
            pred: Arc::new(pred),
            facts: Facts::default(),
        }
    }

    pub fn with_facts(mut self, facts: Facts) -> Self {
        self.facts = facts;
        self
    }
}

impl Enumeration for EvalSet {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn generate(&self, n: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for k in 1..=n {
            if (self.pred)(k)? {
                out.push(k);
            }
        }
        Ok(out)
    }

    fn count_bound(&self, n: u64) -> Result<u64> {
        Ok(self.generate(n)?.len() as u64)
    }

    fn facts(&self) -> Facts {
        self.facts.clone()
    }
}

type Generator = Arc<dyn Fn(u64) -> Result<Vec<u64>> + Send + Sync>;

/// A set given by a generator closure, with declared facts and a separate
/// counting function.
#[derive(Clone)]
pub struct Listed {
    name: String,
    generator: Generator,
    counter: Option<Arc<dyn Fn(u64) -> Result<u64> + Send + Sync>>,
    facts: Facts,
}

impl Listed {
    pub fn new(
        name: impl Into<String>,
        generator: impl Fn(u64) -> Result<Vec<u64>> + Send + Sync + 'static,
        facts: Facts,
    ) -> Self {
        Listed {
            name: name.into(),
            generator: Arc::new(generator),
            counter: None,
            facts,
        }
    }

    pub fn with_counter(mut self, counter: impl Fn(u64) -> Result<u64> + Send + Sync + 'static) -> Self {
        self.counter = Some(Arc::new(counter));
        self
    }
}

impl Enumeration for Listed {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn generate(&self, n: u64) -> Result<Vec<u64>> {
        Ok((self.generator)(n)?.into_iter().filter(|&x| x <= n).collect())
    }

    fn count_bound(&self, n: u64) -> Result<u64> {
        match &self.counter {
            Some(c) => c(n),
            None => Ok(self.generate(n)?.len() as u64),
        }
    }

    fn facts(&self) -> Facts {
        self.facts.clone()
    }
}
