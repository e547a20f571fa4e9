use std::fmt;

use super::{TopoError, TopoResult};

/// Largest supported space.
pub const MAX_POINTS: usize = 6;

/// A finite topological space: labelled points and the family of open
/// sets as bitmasks over point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinSpace {
    labels: Vec<String>,
    opens: Vec<u32>,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '\'')
}

impl FinSpace {
    /// Validate and build. Opens are deduplicated and sorted by size.
    pub fn new(labels: Vec<String>, opens: impl IntoIterator<Item = u32>) -> TopoResult<Self> {
        let n = labels.len();
        if n > MAX_POINTS {
            return Err(TopoError::InvalidSpace(format!("{n} points, at most {MAX_POINTS} supported")));
        }
        for (i, l) in labels.iter().enumerate() {
            if !valid_label(l) {
                return Err(TopoError::InvalidSpace(format!("bad label {l:?}")));
            }
            if labels[..i].contains(l) {
                return Err(TopoError::InvalidSpace(format!("duplicate label {l}")));
            }
        }
        let full = (1u32 << n) - 1;
        let mut opens: Vec<u32> = opens.into_iter().collect();
        if let Some(bad) = opens.iter().find(|&&u| u & !full != 0) {
            return Err(TopoError::InvalidSpace(format!("open set {bad:#b} mentions unknown points")));
        }
        opens.sort_by_key(|&u| (u.count_ones(), u));
        opens.dedup();
        let has = |u: u32| opens.binary_search_by_key(&(u.count_ones(), u), |&v| (v.count_ones(), v)).is_ok();
        if !has(0) || !has(full) {
            return Err(TopoError::InvalidSpace("∅ and the whole space must be open".into()));
        }
        for &u in &opens {
            for &v in &opens {
                if !has(u | v) || !has(u & v) {
                    let s = FinSpace { labels: labels.clone(), opens: Vec::new() };
                    return Err(TopoError::InvalidSpace(format!(
                        "opens not closed under union and intersection: {} and {}",
                        s.fmt_set(u),
                        s.fmt_set(v)
                    )));
                }
            }
        }
        Ok(FinSpace { labels, opens })
    }

    /// Build from labels and open sets given by labels.
    pub fn from_labels(points: &[&str], opens: &[&[&str]]) -> TopoResult<Self> {
        let labels: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let proto = FinSpace { labels: labels.clone(), opens: Vec::new() };
        let masks = opens.iter().map(|o| proto.mask_of(o)).collect::<TopoResult<Vec<_>>>()?;
        FinSpace::new(labels, masks)
    }

    fn default_labels(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    pub fn discrete(n: usize) -> TopoResult<Self> {
        FinSpace::new(FinSpace::default_labels(n), 0..(1u32 << n))
    }

    pub fn indiscrete(n: usize) -> TopoResult<Self> {
        FinSpace::new(FinSpace::default_labels(n), [0, (1u32 << n) - 1])
    }

    /// `{a, b}` with opens `∅, {a}, {a, b}`.
    pub fn sierpinski() -> Self {
        FinSpace::new(FinSpace::default_labels(2), [0, 1, 3]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn opens(&self) -> &[u32] {
        &self.opens
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.len()) - 1
    }

    pub fn index(&self, label: &str) -> TopoResult<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| TopoError::Argument(format!("unknown point {label}")))
    }

    pub fn mask_of(&self, labels: &[&str]) -> TopoResult<u32> {
        labels.iter().try_fold(0u32, |m, l| Ok(m | 1 << self.index(l)?))
    }

    pub fn labels_of(&self, mask: u32) -> Vec<String> {
        (0..self.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.labels[i].clone()).collect()
    }

    pub fn fmt_set(&self, mask: u32) -> String {
        format!("{{{}}}", self.labels_of(mask).join(","))
    }

    pub fn is_open(&self, mask: u32) -> bool {
        self.opens.contains(&mask)
    }

    pub fn is_closed(&self, mask: u32) -> bool {
        self.is_open(self.full() & !mask)
    }

    /// Intersection of all open sets containing point `x`.
    pub fn min_nbhd(&self, x: usize) -> u32 {
        self.opens.iter().filter(|&&u| u >> x & 1 == 1).fold(self.full(), |m, &u| m & u)
    }

    pub fn min_nbhd_of(&self, label: &str) -> TopoResult<u32> {
        Ok(self.min_nbhd(self.index(label)?))
    }

    /// Classical closure `{x : min_nbhd(x) ∩ A ≠ ∅}`.
    pub fn closure(&self, a: u32) -> u32 {
        (0..self.len()).filter(|&x| self.min_nbhd(x) & a != 0).fold(0, |m, x| m | 1 << x)
    }

    pub fn is_t1(&self) -> bool {
        (0..self.len()).all(|x| self.is_closed(1 << x))
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.len()).all(|x| self.min_nbhd(x) == 1 << x)
    }

    /// Distinct points have disjoint neighbourhoods.
    pub fn is_hausdorff(&self) -> bool {
        (0..self.len()).all(|x| (0..x).all(|y| self.min_nbhd(x) & self.min_nbhd(y) == 0))
    }

    /// Subspace topology on the points of `mask`, keeping their order.
    pub fn subspace(&self, mask: u32) -> FinSpace {
        let keep: Vec<usize> = (0..self.len()).filter(|i| mask >> i & 1 == 1).collect();
        let remap = |u: u32| {
            keep.iter().enumerate().filter(|(_, &i)| u >> i & 1 == 1).fold(0u32, |m, (j, _)| m | 1 << j)
        };
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        FinSpace::new(labels, self.opens.iter().map(|&u| remap(u))).expect("subspace of a valid space")
    }

    /// Parse `space{points: a,b; opens: {}, {a}, {a,b}}`.
    pub fn parse(src: &str) -> TopoResult<Self> {
        let mut p = Cursor { s: src.as_bytes(), i: 0 };
        p.expect_word("space")?;
        p.expect(b'{')?;
        p.expect_word("points")?;
        p.expect(b':')?;
        let mut labels = Vec::new();
        if p.peek() != Some(b';') {
            labels.push(p.label()?);
            while p.peek() == Some(b',') {
                p.i += 1;
                labels.push(p.label()?);
            }
        }
        p.expect(b';')?;
        p.expect_word("opens")?;
        p.expect(b':')?;
        let proto = FinSpace { labels: labels.clone(), opens: Vec::new() };
        let mut opens = Vec::new();
        loop {
            let at = p.pos();
            p.expect(b'{')?;
            let mut members = Vec::new();
            if p.peek() != Some(b'}') {
                members.push(p.label()?);
                while p.peek() == Some(b',') {
                    p.i += 1;
                    members.push(p.label()?);
                }
            }
            p.expect(b'}')?;
            let refs: Vec<&str> = members.iter().map(String::as_str).collect();
            opens.push(proto.mask_of(&refs).map_err(|e| TopoError::Parse { pos: at, msg: e.to_string() })?);
            if p.peek() == Some(b',') {
                p.i += 1;
            } else {
                break;
            }
        }
        p.expect(b'}')?;
        if p.peek().is_some() {
            return Err(p.err("unexpected trailing input"));
        }
        FinSpace::new(labels, opens)
    }
}

impl fmt::Display for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opens: Vec<String> = self.opens.iter().map(|&u| self.fmt_set(u)).collect();
        write!(f, "space{{points: {}; opens: {}}}", self.labels.join(","), opens.join(", "))
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
}

impl Cursor<'_> {
    fn err(&self, msg: &str) -> TopoError {
        TopoError::Parse { pos: self.i, msg: msg.into() }
    }

    fn pos(&mut self) -> usize {
        self.peek();
        self.i
    }

    fn peek(&mut self) -> Option<u8> {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
        self.s.get(self.i).copied()
    }

    fn expect(&mut self, c: u8) -> TopoResult<()> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> String {
        self.peek();
        let start = self.i;
        while self.i < self.s.len() {
            let c = self.s[self.i];
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'-' || c == b'\'' || c >= 0x80 {
                self.i += 1;
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.s[start..self.i]).into_owned()
    }

    fn expect_word(&mut self, w: &str) -> TopoResult<()> {
        let at = self.pos();
        if self.word() == w {
            Ok(())
        } else {
            Err(TopoError::Parse { pos: at, msg: format!("expected '{w}'") })
        }
    }

    fn label(&mut self) -> TopoResult<String> {
        let at = self.pos();
        let w = self.word();
        if w.is_empty() {
            return Err(TopoError::Parse { pos: at, msg: "expected a point label".into() });
        }
        Ok(w)
    }
}

/// All topologies on `n ≤ 4` labelled points, by brute force over families
/// of subsets.
pub fn enumerate_topologies(n: usize) -> TopoResult<Vec<FinSpace>> {
    if n > 4 {
        return Err(TopoError::Argument(format!("enumeration supports n ≤ 4, got {n}")));
    }
    let full = (1u32 << n) - 1;
    let middle: Vec<u32> = (1..full).collect();
    let mut out = Vec::new();
    for choice in 0u64..(1u64 << middle.len()) {
        // membership bitset over all 2^n subsets
        let mut fam = 1u64 | 1u64 << full;
        for (j, &u) in middle.iter().enumerate() {
            if choice >> j & 1 == 1 {
                fam |= 1 << u;
            }
        }
        let members: Vec<u32> = (0..=full).filter(|&u| fam >> u & 1 == 1).collect();
        let closed = members
            .iter()
            .all(|&u| members.iter().all(|&v| fam >> (u | v) & 1 == 1 && fam >> (u & v) & 1 == 1));
        if closed {
            out.push(FinSpace::new(FinSpace::default_labels(n), members)?);
        }
    }
    Ok(out)
}
