//! The ideal catalog and certified, three-valued membership.
//!
//! Blocks Δᵢ are the 2-adic valuation classes `{n : v₂(n) = i - 1}`.

use std::fmt;

use crate::setexpr::{asymptotic_bounds, classify_finiteness, members, Finiteness, SetExpr};
use crate::DEFAULT_WINDOW;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealSpec {
    /// I_f: finite sets.
    Fin,
    /// I₁: sets whose odd part is finite, the ideal generated by P(2ℕ) ∪ I_f.
    EvenFin,
    /// I₂: sets meeting only finitely many blocks.
    MeetsFinBlocks,
    /// I₃: sets with finite trace on every block.
    FinPerBlock,
    /// I_d: sets of natural density 0.
    DensityZero,
    /// Sets whose trace is infinite on at most finitely many blocks.
    LocalBlocks,
    /// Trace ideal `{A ⊆ M : A ∈ base}`.
    Restrict(Box<IdealSpec>, SetExpr),
}

impl IdealSpec {
    /// The unrestricted catalog.
    pub fn catalog() -> Vec<IdealSpec> {
        vec![
            IdealSpec::Fin,
            IdealSpec::EvenFin,
            IdealSpec::MeetsFinBlocks,
            IdealSpec::FinPerBlock,
            IdealSpec::DensityZero,
            IdealSpec::LocalBlocks,
        ]
    }

    /// Short CLI name.
    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn restricted_to(&self, m: SetExpr) -> IdealSpec {
        match m {
            SetExpr::Tail(1) => self.clone(),
            m => IdealSpec::Restrict(Box::new(self.clone()), m),
        }
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealSpec::Fin => f.write_str("fin"),
            IdealSpec::EvenFin => f.write_str("i1"),
            IdealSpec::MeetsFinBlocks => f.write_str("i2"),
            IdealSpec::FinPerBlock => f.write_str("i3"),
            IdealSpec::DensityZero => f.write_str("id"),
            IdealSpec::LocalBlocks => f.write_str("local-blocks"),
            IdealSpec::Restrict(b, m) => write!(f, "restrict({b},{m})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    In,
    Out,
    Unknown,
}

impl Verdict {
    pub fn flip(self) -> Verdict {
        match self {
            Verdict::In => Verdict::Out,
            Verdict::Out => Verdict::In,
            Verdict::Unknown => Verdict::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::In => "in",
            Verdict::Out => "out",
            Verdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub verdict: Verdict,
    pub certificate: String,
    /// For I₂ `In` verdicts: the set meets at most this many blocks.
    pub block_bound: Option<usize>,
    /// Windowed elements backing the verdict, if any.
    pub witness: Vec<u64>,
}

impl MembershipVerdict {
    fn new(verdict: Verdict, certificate: impl Into<String>) -> Self {
        MembershipVerdict {
            verdict,
            certificate: certificate.into(),
            block_bound: None,
            witness: Vec::new(),
        }
    }

    fn with_witness(mut self, w: Vec<u64>) -> Self {
        self.witness = w;
        self
    }

    pub fn is_in(&self) -> bool {
        self.verdict == Verdict::In
    }

    pub fn is_out(&self) -> bool {
        self.verdict == Verdict::Out
    }
}

fn first_members(e: &SetExpr, k: usize) -> Vec<u64> {
    members(e, DEFAULT_WINDOW)
        .map(|m| m.into_iter().take(k).collect())
        .unwrap_or_default()
}

/// Decide `A ∈ I`. Sound: `In` and `Out` are only returned with a
/// structural or exact-density justification.
pub fn contains(ideal: &IdealSpec, a: &SetExpr) -> MembershipVerdict {
    match ideal {
        IdealSpec::Fin => match classify_finiteness(a) {
            Finiteness::Finite => MembershipVerdict::new(Verdict::In, "finite by structural rule"),
            Finiteness::Infinite => MembershipVerdict::new(Verdict::Out, "infinite by structural rule"),
            Finiteness::Unknown => MembershipVerdict::new(Verdict::Unknown, "finiteness undecided"),
        },
        IdealSpec::EvenFin => {
            let odd = a.clone().inter(SetExpr::odds());
            match classify_finiteness(&odd) {
                Finiteness::Finite => {
                    MembershipVerdict::new(Verdict::In, "odd part finite: A ⊆ 2ℕ up to a finite set")
                }
                Finiteness::Infinite => MembershipVerdict::new(
                    Verdict::Out,
                    "odd part infinite: A is neither finite nor almost contained in 2ℕ",
                )
                .with_witness(first_members(&odd, 3)),
                Finiteness::Unknown => MembershipVerdict::new(Verdict::Unknown, "odd part finiteness undecided"),
            }
        }
        IdealSpec::MeetsFinBlocks => {
            let p = a.block_profile();
            match p.blocks_met() {
                Finiteness::Finite => {
                    let mut v = MembershipVerdict::new(Verdict::In, "meets finitely many blocks");
                    v.block_bound = p.met_bound();
                    if let Some(k) = v.block_bound {
                        v.certificate = format!("meets at most {k} blocks");
                    }
                    v
                }
                Finiteness::Infinite => MembershipVerdict::new(Verdict::Out, "meets infinitely many blocks"),
                Finiteness::Unknown => MembershipVerdict::new(Verdict::Unknown, "number of blocks met undecided"),
            }
        }
        IdealSpec::FinPerBlock => {
            if classify_finiteness(a) == Finiteness::Finite {
                return MembershipVerdict::new(Verdict::In, "finite set");
            }
            let p = a.block_profile();
            if let Some(j) = p.first_infinite_block() {
                return MembershipVerdict::new(Verdict::Out, format!("trace on block {j} is infinite"));
            }
            if p.tail.is_finite() && p.explicit.iter().all(|t| t.is_finite()) {
                return MembershipVerdict::new(Verdict::In, "every block trace is finite");
            }
            if p.blocks_met() == Finiteness::Finite && classify_finiteness(a) == Finiteness::Infinite {
                return MembershipVerdict::new(
                    Verdict::Out,
                    "infinite set meeting finitely many blocks has an infinite block trace",
                );
            }
            MembershipVerdict::new(Verdict::Unknown, "block traces undecided")
        }
        IdealSpec::LocalBlocks => {
            if classify_finiteness(a) == Finiteness::Finite {
                return MembershipVerdict::new(Verdict::In, "finite set");
            }
            let p = a.block_profile();
            if p.tail.is_finite() {
                let k = p.explicit.iter().filter(|t| t.may_be_infinite()).count();
                return MembershipVerdict::new(
                    Verdict::In,
                    format!("infinite trace possible on at most {k} blocks"),
                );
            }
            if p.tail.is_infinite() {
                return MembershipVerdict::new(
                    Verdict::Out,
                    format!("trace infinite on every block beyond {}", p.explicit.len()),
                );
            }
            MembershipVerdict::new(Verdict::Unknown, "block traces undecided")
        }
        IdealSpec::DensityZero => {
            let b = asymptotic_bounds(a);
            if b.upper_zero() {
                MembershipVerdict::new(Verdict::In, "exact density 0")
            } else if b.lower_positive() {
                let cert = match b.exact_value() {
                    Some(d) => format!("exact density {d} > 0"),
                    None => format!("lower density ≥ {} > 0", b.lower),
                };
                MembershipVerdict::new(Verdict::Out, cert)
            } else {
                MembershipVerdict::new(
                    Verdict::Unknown,
                    format!("density bounds [{}, {}] undecided", b.lower, b.upper),
                )
            }
        }
        IdealSpec::Restrict(base, m) => {
            let (sub, note, wit) = subset_check(a, m);
            match sub {
                Some(false) => MembershipVerdict::new(Verdict::Out, format!("A ⊄ M: {note}")).with_witness(wit),
                Some(true) => {
                    let inner = contains(base, a);
                    MembershipVerdict {
                        certificate: format!("A ⊆ M ({note}); {}", inner.certificate),
                        ..inner
                    }
                }
                None => MembershipVerdict::new(Verdict::Unknown, "subset check undecided"),
            }
        }
    }
}

/// `A ⊆ M`: exact via normal forms, otherwise on the default window.
fn subset_check(a: &SetExpr, m: &SetExpr) -> (Option<bool>, String, Vec<u64>) {
    let d = a.clone().diff(m.clone());
    if let Some(p) = d.periodic() {
        if p.is_empty() {
            return (Some(true), "exact".into(), Vec::new());
        }
        let mut w = p.head_members();
        if w.is_empty() {
            w = first_members(&d, 3);
        }
        w.truncate(3);
        return (Some(false), "exact".into(), w);
    }
    match members(&d, DEFAULT_WINDOW) {
        Ok(xs) if xs.is_empty() => (Some(true), format!("checked on [1..{DEFAULT_WINDOW}]"), Vec::new()),
        Ok(xs) => (
            Some(false),
            format!("elements of A outside M on [1..{DEFAULT_WINDOW}]"),
            xs.into_iter().take(3).collect(),
        ),
        Err(_) => (None, String::new(), Vec::new()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub failures: Vec<String>,
}

/// Singletons `{1}..{2^10}` must be In and ℕ must be Out.
pub fn is_admissible(ideal: &IdealSpec) -> AdmissibilityReport {
    let mut failures = Vec::new();
    for n in 1..=1024u64 {
        let v = contains(ideal, &SetExpr::Finite(vec![n]));
        if !v.is_in() {
            failures.push(format!("singleton {{{n}}} is {}: {}", v.verdict, v.certificate));
            break;
        }
    }
    let v = contains(ideal, &SetExpr::naturals());
    if !v.is_out() {
        failures.push(format!("ℕ is {}: {}", v.verdict, v.certificate));
    }
    AdmissibilityReport {
        admissible: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone)]
pub struct Restriction {
    pub ideal: IdealSpec,
    pub warning: Option<String>,
}

/// The trace ideal `I/_M = {A ⊆ M : A ∈ I}`.
pub fn restrict(ideal: &IdealSpec, m: SetExpr) -> Restriction {
    let warning = (classify_finiteness(&m) == Finiteness::Finite && is_admissible(ideal).admissible)
        .then(|| format!("M = {m} is finite and in {ideal}; the restriction is all of P(M)"));
    Restriction {
        ideal: IdealSpec::Restrict(Box::new(ideal.clone()), m),
        warning,
    }
}
