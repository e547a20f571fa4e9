//! One-point I-compactification of finite spaces, plus a rule-based model
//! of the circle as the compactification of the real line.
//!
//! For a base `X` the extension adds a point `α` with opens
//! `τ ∪ {U ∪ {α} : X∖U closed and I-compact}`. Every finite space is
//! I-compact, so `{α}` itself is always open and `X` is never dense in
//! `X̂` when `X` is nonempty; [`OnePointSpace::base_dense`] reports this.

mod circle;

pub use circle::{
    circle_converges_by_opens, circle_converges_to_alpha, circle_e, circle_e_inverse, circle_e_upper,
    circle_not_hausdorff, circle_pair, grid_injectivity, CirclePoint, Injectivity, PairReport, Separation,
    CIRCLE_ALPHA, CIRCLE_TOLERANCE,
};

use crate::ideals::IdealSpec;
use crate::topolab::{check_thm212_bc, is_i_compact, FinMap, FinSpace, MembershipTable, Thm212Report, TopoError, TopoResult};

/// `X̂` as a finite space whose last point is `α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnePointSpace {
    pub base: FinSpace,
    pub ideal: IdealSpec,
    pub space: FinSpace,
}

impl OnePointSpace {
    pub fn alpha(&self) -> usize {
        self.base.len()
    }

    pub fn alpha_label(&self) -> &str {
        self.space.label(self.alpha())
    }

    pub fn base_mask(&self) -> u32 {
        self.base.full()
    }

    pub fn base_open(&self) -> bool {
        self.space.is_open(self.base_mask())
    }

    /// `α` lies in the closure of the base.
    pub fn base_dense(&self) -> bool {
        self.base.is_empty() || self.space.closure(self.base_mask()) == self.space.full()
    }

    /// Every base open is still open, and the topology on the base is the
    /// original one.
    pub fn restricts_to_base(&self) -> bool {
        self.space.subspace(self.base_mask()).opens() == self.base.opens()
    }

    pub fn is_hausdorff(&self) -> bool {
        self.space.is_hausdorff()
    }
}

fn fresh_alpha(base: &FinSpace) -> String {
    let mut label = String::from("α");
    while base.labels().contains(&label) {
        label.push('\'');
    }
    label
}

pub fn build_onepoint(base: &FinSpace, ideal: &IdealSpec) -> TopoResult<OnePointSpace> {
    build_with_table(base, &MembershipTable::new(ideal))
}

pub fn build_with_table(base: &FinSpace, table: &MembershipTable) -> TopoResult<OnePointSpace> {
    if base.len() >= crate::topolab::MAX_POINTS {
        return Err(TopoError::Argument(format!("base has {} points, no room for α", base.len())));
    }
    let full = base.full();
    let alpha_bit = 1u32 << base.len();
    let mut opens: Vec<u32> = base.opens().to_vec();
    for u in 0..=full {
        let rest = full & !u;
        if base.is_closed(rest) && is_i_compact(&base.subspace(rest), table).compact {
            opens.push(u | alpha_bit);
        }
    }
    let mut labels = base.labels().to_vec();
    labels.push(fresh_alpha(base));
    let space = FinSpace::new(labels, opens)
        .map_err(|e| TopoError::Inconsistent(format!("extension is not a topology: {e}")))?;
    Ok(OnePointSpace { base: base.clone(), ideal: table.ideal.clone(), space })
}

/// A bijection `X̂₁ → X̂₂` fixing base labels and sending `α` to `α`,
/// mapping opens onto opens.
pub fn homeo_search(a: &OnePointSpace, b: &OnePointSpace) -> Option<Vec<usize>> {
    if a.space.len() != b.space.len() || a.space.opens().len() != b.space.opens().len() {
        return None;
    }
    let mut map = Vec::with_capacity(a.space.len());
    for i in 0..a.base.len() {
        map.push(b.base.index(a.base.label(i)).ok()?);
    }
    map.push(b.alpha());
    let image = |m: u32| (0..map.len()).filter(|&i| m >> i & 1 == 1).fold(0u32, |acc, i| acc | 1 << map[i]);
    a.space.opens().iter().all(|&u| b.space.is_open(image(u))).then_some(map)
}

/// The extension of `f` that sends `α_X` to `α_Y`.
#[derive(Debug, Clone)]
pub struct Extension {
    pub map: FinMap,
    pub continuous: bool,
    pub homeomorphism: bool,
    pub proper: Thm212Report,
}

pub fn extend_map(f: &FinMap, ideal: &IdealSpec) -> TopoResult<Extension> {
    let table = MembershipTable::new(ideal);
    let src = build_with_table(&f.source, &table)?;
    let tgt = build_with_table(&f.target, &table)?;
    let mut map = f.map.clone();
    map.push(tgt.alpha());
    let ext = FinMap::new(src.space.clone(), tgt.space.clone(), map)?;
    let continuous = ext.is_continuous();
    let bijective = ext.source.len() == ext.target.len() && ext.image(ext.source.full()) == ext.target.full();
    let homeomorphism =
        continuous && bijective && ext.source.opens().iter().all(|&u| ext.target.is_open(ext.image(u)));
    let proper = check_thm212_bc(f, &table)?;
    Ok(Extension { map: ext, continuous, homeomorphism, proper })
}
