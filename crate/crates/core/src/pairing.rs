//! Injective matchings behind the three-term inequality for stable chains.
//!
//! Draw the chain as the lattice path through `(j, r_j)`. Fix a height `r`
//! and let `j_1 < ... < j_m` be the vertices at that height. Each source is
//! matched with a vertex at height `r - 2` or `r + 2`:
//!
//! - the path leaves `j_i` with a drop: match the next vertex (height `r - 2`);
//! - it leaves with a rise and comes back to height `r` at `j_{i+1}`: since drops
//!   have size exactly 2, `j_{i+1} - 1` sits at `r + 2` and is matched;
//! - the last source with no drop after it uses the vertex at `r + 2` just before
//!   `j_1` (present when `r < r_1`), or failing that the first vertex at `r - 2`
//!   to its right.
//!
//! Every target lies in a region owned by a single source, so the matching is
//! injective and `m_r <= m_{r-2} + m_{r+2}` follows.
//!
//! Vertex indices are 1-based throughout.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::{is_admissible, tail_slopes, RootSequence};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionKind {
    /// Starts with a rise and stays above `r` until the next vertex at `r`.
    A,
    /// Starts with a drop and returns to `r` from below.
    B,
    /// Starts with a drop, jumps over `r` during a rise, returns from above.
    C,
    #[serde(rename = "LEFT_BOUNDARY")]
    LeftBoundary,
    #[serde(rename = "RIGHT_BOUNDARY")]
    RightBoundary,
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionKind::A => "A",
            RegionKind::B => "B",
            RegionKind::C => "C",
            RegionKind::LeftBoundary => "LEFT_BOUNDARY",
            RegionKind::RightBoundary => "RIGHT_BOUNDARY",
        })
    }
}

/// The stretch of the path between vertices `start` and `end` (inclusive).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub source: usize,
    pub target: usize,
    pub label: RegionKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingCertificate {
    pub height: i64,
    pub pairs: Vec<Pair>,
}

/// Why [`build_matching`] could not match a source. For a stable admissible
/// chain this is a bug, not an expected outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub roots: RootSequence,
    pub height: i64,
    pub source: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PairingError {
    #[error(transparent)]
    Hypothesis(#[from] Error),
    #[error("no target for source {} at height {} in {}: {}", .0.source, .0.height, .0.roots, .0.reason)]
    Counterexample(Box<Counterexample>),
}

fn check_hypotheses(seq: &RootSequence) -> Result<()> {
    let adm = is_admissible(seq);
    if !adm.admissible {
        return Err(Error::Hypothesis(format!("{seq} is not admissible at steps {:?}", adm.violating_steps())));
    }
    let verdict = tail_slopes(seq).verdict;
    if !verdict.is_stable() {
        return Err(Error::Hypothesis(format!("{seq} is not stable ({verdict:?})")));
    }
    Ok(())
}

fn sources(seq: &RootSequence, r: i64) -> Vec<usize> {
    seq.roots()
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == r)
        .map(|(i, _)| i + 1)
        .collect()
}

fn interior_kind(seq: &RootSequence, from: usize, to: usize, r: i64) -> RegionKind {
    if seq.at(from + 1) > r {
        RegionKind::A
    } else if seq.at(to - 1) < r {
        RegionKind::B
    } else {
        RegionKind::C
    }
}

/// Regions cut out by the vertices at height `r`: a leading boundary region
/// (if the path does not start at `r`), one labelled region per consecutive
/// pair of vertices at `r`, and a trailing boundary region (if the path does
/// not end at `r`). Heights of the wrong parity or never visited give no
/// regions.
pub fn classify_regions(seq: &RootSequence, r: i64) -> Result<Vec<Region>> {
    check_hypotheses(seq)?;
    let src = sources(seq, r);
    let (Some(&first), Some(&last)) = (src.first(), src.last()) else {
        return Ok(Vec::new());
    };

    let mut regions = Vec::with_capacity(src.len() + 1);
    if first > 1 {
        regions.push(Region { kind: RegionKind::LeftBoundary, start: 1, end: first });
    }
    for w in src.windows(2) {
        regions.push(Region { kind: interior_kind(seq, w[0], w[1], r), start: w[0], end: w[1] });
    }
    if last < seq.len() {
        regions.push(Region { kind: RegionKind::RightBoundary, start: last, end: seq.len() });
    }
    Ok(regions)
}

/// Builds the matching for height `r`.
///
/// Drop-led regions (B and C) always match to the right. The last source
/// tries a drop to its right first, then the vertex before the leftmost
/// source, then the first later vertex at `r - 2`.
pub fn build_matching(seq: &RootSequence, r: i64) -> std::result::Result<MatchingCertificate, PairingError> {
    check_hypotheses(seq)?;
    let n = seq.len();
    let src = sources(seq, r);
    let fail = |source: usize, reason: &str| {
        PairingError::Counterexample(Box::new(Counterexample {
            roots: seq.clone(),
            height: r,
            source,
            reason: reason.to_string(),
        }))
    };

    let mut pairs = Vec::with_capacity(src.len());
    for w in src.windows(2) {
        let (j, next) = (w[0], w[1]);
        let label = interior_kind(seq, j, next, r);
        let (target, want) = match label {
            RegionKind::B | RegionKind::C => (j + 1, r - 2),
            _ => (next - 1, r + 2),
        };
        if seq.at(target) != want {
            return Err(fail(j, &format!("vertex {target} is not at height {want}")));
        }
        pairs.push(Pair { source: j, target, label });
    }

    if let (Some(&first), Some(&last)) = (src.first(), src.last()) {
        let pair = if last < n && seq.at(last + 1) == r - 2 {
            Pair { source: last, target: last + 1, label: RegionKind::B }
        } else if r < seq.first() && first > 1 && seq.at(first - 1) == r + 2 {
            Pair { source: last, target: first - 1, label: RegionKind::LeftBoundary }
        } else if let Some(t) = (last + 1..=n).find(|&t| seq.at(t) == r - 2) {
            Pair { source: last, target: t, label: RegionKind::RightBoundary }
        } else {
            return Err(fail(last, "no boundary target on either side"));
        };
        pairs.push(pair);
    }

    Ok(MatchingCertificate { height: r, pairs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub valid: bool,
    pub reasons: Vec<String>,
}

/// Re-checks a certificate against the roots from scratch: its sources are
/// exactly the vertices at its height, its targets are distinct vertices at
/// height `height +/- 2`.
pub fn verify_certificate(seq: &RootSequence, cert: &MatchingCertificate) -> CertificateCheck {
    let roots = seq.roots();
    let h = cert.height;
    let mut reasons = Vec::new();

    let expected: BTreeSet<usize> = (1..=roots.len()).filter(|&j| roots[j - 1] == h).collect();
    let claimed: Vec<usize> = cert.pairs.iter().map(|p| p.source).collect();
    let claimed_set: BTreeSet<usize> = claimed.iter().copied().collect();
    if claimed_set.len() != claimed.len() {
        reasons.push("sources: duplicated source".to_string());
    }
    if claimed_set != expected {
        reasons.push(format!("sources: expected {expected:?}, got {claimed_set:?}"));
    }

    let mut seen = BTreeSet::new();
    for p in &cert.pairs {
        if p.target == 0 || p.target > roots.len() {
            reasons.push(format!("index range: target {} outside 1..={}", p.target, roots.len()));
            continue;
        }
        let th = roots[p.target - 1];
        if th != h - 2 && th != h + 2 {
            reasons.push(format!("target height: vertex {} has height {th}, need {} or {}", p.target, h - 2, h + 2));
        }
        if !seen.insert(p.target) {
            reasons.push(format!("injectivity: target {} used twice", p.target));
        }
    }

    CertificateCheck { valid: reasons.is_empty(), reasons }
}
