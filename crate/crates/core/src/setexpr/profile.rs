use std::fmt;

use super::{Finiteness, Periodic, SetExpr};

/// The possible shapes of `A ∩ Δᵢ` for a fixed block: a nonempty subset of
/// {empty, finite nonempty, infinite}.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Trace(u8);

impl Trace {
    pub const EMPTY: Trace = Trace(1);
    pub const FINITE: Trace = Trace(2);
    pub const INFINITE: Trace = Trace(4);
    pub const ANY: Trace = Trace(7);
    pub const AT_MOST_FINITE: Trace = Trace(3);

    /// Either possibility.
    pub fn join(self, other: Trace) -> Trace {
        Trace(self.0 | other.0)
    }

    pub fn may_be_empty(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn may_be_infinite(self) -> bool {
        self.0 & 4 != 0
    }

    /// Definitely finite (possibly empty).
    pub fn is_finite(self) -> bool {
        !self.may_be_infinite()
    }

    pub fn is_infinite(self) -> bool {
        self == Trace::INFINITE
    }

    pub fn is_nonempty(self) -> bool {
        !self.may_be_empty()
    }

    fn atoms(self) -> impl Iterator<Item = u8> {
        [1u8, 2, 4].into_iter().filter(move |a| self.0 & a != 0)
    }

    fn lift(self, other: Trace, op: fn(u8, u8) -> u8) -> Trace {
        let mut out = 0;
        for a in self.atoms() {
            for b in other.atoms() {
                out |= op(a, b);
            }
        }
        Trace(out)
    }

    pub fn union(self, other: Trace) -> Trace {
        self.lift(other, |a, b| match (a, b) {
            (1, 1) => 1,
            (4, _) | (_, 4) => 4,
            _ => 2,
        })
    }

    pub fn inter(self, other: Trace) -> Trace {
        self.lift(other, |a, b| match (a, b) {
            (1, _) | (_, 1) => 1,
            (4, 4) => 7,
            _ => 3,
        })
    }

    /// Complement inside the (infinite) block.
    pub fn compl(self) -> Trace {
        let mut out = 0;
        for a in self.atoms() {
            out |= if a == 4 { 7 } else { 4 };
        }
        Trace(out)
    }

    /// Trace of "at most one element of A per block".
    pub fn one_per_block(self) -> Trace {
        let mut out = 0;
        for a in self.atoms() {
            out |= if a == 1 { 1 } else { 2 };
        }
        Trace(out)
    }

    /// Trace of an arbitrary subset of A.
    pub fn any_subset(self) -> Trace {
        let mut out = 0;
        for a in self.atoms() {
            out |= match a {
                1 => 1,
                2 => 3,
                _ => 7,
            };
        }
        Trace(out)
    }
}

impl fmt::Debug for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .atoms()
            .map(|a| match a {
                1 => "E",
                2 => "F",
                _ => "I",
            })
            .collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Per-block traces: exact status for blocks `1..=explicit.len()`, and a
/// status that holds for every block beyond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockProfile {
    pub explicit: Vec<Trace>,
    pub tail: Trace,
    /// Extra knowledge on how many blocks are met, when the traces alone
    /// cannot tell.
    pub met_hint: Finiteness,
}

impl BlockProfile {
    pub fn unknown() -> Self {
        BlockProfile {
            explicit: Vec::new(),
            tail: Trace::ANY,
            met_hint: Finiteness::Unknown,
        }
    }

    /// Trace of block `i` (1-based).
    pub fn trace(&self, i: usize) -> Trace {
        self.explicit.get(i - 1).copied().unwrap_or(self.tail)
    }

    /// Exact profile of an eventually periodic set given by residues mod
    /// `period`, valid from `start`, plus head elements below `start`.
    pub(crate) fn from_residues(
        period: u64,
        residues: impl Iterator<Item = u64>,
        head: &[u64],
    ) -> Self {
        let a = period.trailing_zeros();
        let low_mask = if a >= 64 { u64::MAX } else { (1u64 << a) - 1 };
        let mut inf_low = vec![false; a as usize];
        let mut inf_high = false;
        for r in residues {
            let low = r & low_mask;
            if low == 0 {
                inf_high = true;
            } else {
                inf_low[low.trailing_zeros() as usize] = true;
            }
        }
        let max_head_block = head.iter().map(|n| n.trailing_zeros() as usize + 1).max().unwrap_or(0);
        let k = (a as usize + 1).max(max_head_block);
        let explicit = (1..=k)
            .map(|i| {
                let v = i - 1;
                let inf = if v < a as usize { inf_low[v] } else { inf_high };
                if inf {
                    Trace::INFINITE
                } else if head.iter().any(|n| n.trailing_zeros() as usize == v) {
                    Trace::FINITE
                } else {
                    Trace::EMPTY
                }
            })
            .collect();
        BlockProfile {
            explicit,
            tail: if inf_high { Trace::INFINITE } else { Trace::EMPTY },
            met_hint: Finiteness::Unknown,
        }
    }

    fn from_periodic(p: &Periodic) -> Self {
        let residues = (0..p.period).filter(|&r| p.residues[r as usize]);
        BlockProfile::from_residues(p.period, residues, &p.head_members())
    }

    pub fn of(e: &SetExpr) -> Self {
        if let Some(p) = e.periodic() {
            return Self::from_periodic(&p);
        }
        match e {
            SetExpr::Finite(xs) => BlockProfile::from_residues(1, std::iter::empty(), xs),
            SetExpr::Arith { residue, modulus } => {
                BlockProfile::from_residues(*modulus, std::iter::once(*residue), &[])
            }
            SetExpr::Block(i) => {
                let mut explicit = vec![Trace::EMPTY; *i as usize];
                explicit[*i as usize - 1] = Trace::INFINITE;
                BlockProfile {
                    explicit,
                    tail: Trace::EMPTY,
                    met_hint: Finiteness::Unknown,
                }
            }
            SetExpr::Tail(_) => BlockProfile {
                explicit: Vec::new(),
                tail: Trace::INFINITE,
                met_hint: Finiteness::Unknown,
            },
            SetExpr::Counted(c) => c.facts().profile.unwrap_or_else(BlockProfile::unknown),
            SetExpr::Union(a, b) => {
                let (pa, pb) = (Self::of(a), Self::of(b));
                let hint = match (pa.blocks_met(), pb.blocks_met()) {
                    (Finiteness::Infinite, _) | (_, Finiteness::Infinite) => Finiteness::Infinite,
                    (Finiteness::Finite, Finiteness::Finite) => Finiteness::Finite,
                    _ => Finiteness::Unknown,
                };
                pa.zip(&pb, Trace::union, hint)
            }
            SetExpr::Inter(a, b) => {
                let (pa, pb) = (Self::of(a), Self::of(b));
                let hint = match (pa.blocks_met(), pb.blocks_met()) {
                    (Finiteness::Finite, _) | (_, Finiteness::Finite) => Finiteness::Finite,
                    _ => Finiteness::Unknown,
                };
                pa.zip(&pb, Trace::inter, hint)
            }
            SetExpr::Diff(a, b) => {
                let (pa, pb) = (Self::of(a), Self::of(b).map(Trace::compl));
                // removing a finite set changes only finitely many blocks
                let hint = match pa.blocks_met() {
                    Finiteness::Finite => Finiteness::Finite,
                    m if super::classify_finiteness(b) == Finiteness::Finite => m,
                    _ => Finiteness::Unknown,
                };
                pa.zip(&pb, Trace::inter, hint)
            }
            SetExpr::Compl(a) => Self::of(a).map(Trace::compl),
        }
    }

    fn zip(&self, other: &BlockProfile, op: fn(Trace, Trace) -> Trace, hint: Finiteness) -> Self {
        let k = self.explicit.len().max(other.explicit.len());
        BlockProfile {
            explicit: (1..=k).map(|i| op(self.trace(i), other.trace(i))).collect(),
            tail: op(self.tail, other.tail),
            met_hint: hint,
        }
    }

    /// Apply a per-block transformation; the blocks-met hint is dropped.
    pub fn map(&self, f: fn(Trace) -> Trace) -> Self {
        BlockProfile {
            explicit: self.explicit.iter().map(|&t| f(t)).collect(),
            tail: f(self.tail),
            met_hint: Finiteness::Unknown,
        }
    }

    /// Whether finitely or infinitely many blocks are met.
    pub fn blocks_met(&self) -> Finiteness {
        if self.tail == Trace::EMPTY {
            Finiteness::Finite
        } else if self.tail.is_nonempty() {
            Finiteness::Infinite
        } else {
            self.met_hint
        }
    }

    /// Upper bound on the number of blocks met, when the tail is empty.
    pub fn met_bound(&self) -> Option<usize> {
        (self.tail == Trace::EMPTY)
            .then(|| self.explicit.iter().filter(|t| **t != Trace::EMPTY).count())
    }

    /// Index of the first block whose trace is certainly infinite.
    pub fn first_infinite_block(&self) -> Option<usize> {
        self.explicit
            .iter()
            .position(|t| t.is_infinite())
            .map(|i| i + 1)
            .or_else(|| self.tail.is_infinite().then_some(self.explicit.len() + 1))
    }

    pub fn finiteness(&self) -> Finiteness {
        if self.first_infinite_block().is_some()
            || self.tail.is_nonempty()
            || self.met_hint == Finiteness::Infinite
        {
            Finiteness::Infinite
        } else if self.tail == Trace::EMPTY && self.explicit.iter().all(|t| t.is_finite()) {
            Finiteness::Finite
        } else {
            Finiteness::Unknown
        }
    }
}
