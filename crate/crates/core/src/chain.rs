//! Chain-type nilpotent Higgs bundles on P(2,3).
//!
//! A chain is an ordered list of even integers `r_1, ..., r_n`, standing for
//! `O(r_1) ⊕ ... ⊕ O(r_n)` with the Higgs field mapping `O(r_j)` into
//! `O(r_{j+1}) ⊗ Ω¹(log ∞) ≅ O(r_{j+1} + 2)` and vanishing on `O(r_n)`. The
//! `j`-th component is a scalar modular form of weight
//! `w_j = r_{j+1} + 2 - r_j`, so it can only be nonzero when that weight
//! carries a nonzero level-one holomorphic form.
//!
//! Multiplicity profiles are indexed by the root itself: `m_r` counts the
//! summands isomorphic to `O(r)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{self, Rational};

/// Ordered even roots of a split bundle; order encodes the direction of θ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct RootSequence(Vec<i64>);

impl RootSequence {
    pub fn new(roots: Vec<i64>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::MalformedRoots("empty sequence".into()));
        }
        if let Some(odd) = roots.iter().find(|r| *r % 2 != 0) {
            return Err(Error::MalformedRoots(format!("odd root {odd}; roots must be even")));
        }
        Ok(Self(roots))
    }

    pub fn roots(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Root at 1-based position `j`.
    pub fn at(&self, j: usize) -> i64 {
        self.0[j - 1]
    }

    pub fn first(&self) -> i64 {
        self.0[0]
    }

    pub fn last(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    /// Weights `w_j = r_{j+1} + 2 - r_j` of the Higgs-field components.
    pub fn step_weights(&self) -> Vec<i64> {
        self.0.windows(2).map(|w| w[1] + 2 - w[0]).collect()
    }

    /// Twist every summand by `O(c)`; `c` must be even.
    pub fn shifted(&self, c: i64) -> Result<Self> {
        Self::new(self.0.iter().map(|r| r + c).collect())
    }
}

impl TryFrom<Vec<i64>> for RootSequence {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<RootSequence> for Vec<i64> {
    fn from(s: RootSequence) -> Self {
        s.0
    }
}

impl FromStr for RootSequence {
    type Err = Error;

    /// Comma-separated integers, e.g. `"4,2,0,-2"`.
    fn from_str(s: &str) -> Result<Self> {
        let roots = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::MalformedRoots(format!("not an integer: {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(roots)
    }
}

impl fmt::Display for RootSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

/// True iff level-one holomorphic modular forms of weight `k` include a
/// nonzero one: `k >= 0`, `k` even and `k != 2`.
pub fn weight_has_nonzero_form(k: i64) -> bool {
    k >= 0 && k % 2 == 0 && k != 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepViolation {
    /// 1-based step index `j` (the map `O(r_j) -> O(r_{j+1}+2)`).
    pub step: usize,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub violations: Vec<StepViolation>,
}

impl Admissibility {
    pub fn violating_steps(&self) -> Vec<usize> {
        self.violations.iter().map(|v| v.step).collect()
    }
}

/// Every step must be a drop of exactly 2 or an even rise of at least 2.
pub fn is_admissible(seq: &RootSequence) -> Admissibility {
    let violations: Vec<_> = seq
        .roots()
        .windows(2)
        .enumerate()
        .filter_map(|(i, w)| {
            let delta = w[1] - w[0];
            let ok = delta == -2 || (delta >= 2 && delta % 2 == 0);
            (!ok).then_some(StepViolation { step: i + 1, weight: delta + 2 })
        })
        .collect();
    Admissibility { admissible: violations.is_empty(), violations }
}

/// A chain whose every Higgs component can be nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainHiggsBundle {
    roots: RootSequence,
    step_weights: Vec<i64>,
}

impl ChainHiggsBundle {
    pub fn new(roots: RootSequence) -> Result<Self> {
        let adm = is_admissible(&roots);
        if !adm.admissible {
            return Err(Error::Inadmissible(adm.violating_steps()));
        }
        let step_weights = roots.step_weights();
        Ok(Self { roots, step_weights })
    }

    pub fn roots(&self) -> &RootSequence {
        &self.roots
    }

    pub fn step_weights(&self) -> &[i64] {
        &self.step_weights
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    /// Matrix of θ in the splitting, evaluated at a generic point of the
    /// curve. Column `j` is the summand `O(r_j)`; the only nonzero entries are
    /// `(j+1, j)`. Any nonzero component values are conjugate to 1 by a
    /// diagonal change of frame, so 1 is used.
    pub fn higgs_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.rank();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for j in 0..n.saturating_sub(1) {
            m[j + 1][j] = Rational::one();
        }
        m
    }
}

/// Coefficients `c_1, ..., c_n` of `det(t - A) = t^n + c_1 t^{n-1} + ... + c_n`,
/// by the Faddeev–LeVerrier recursion in exact arithmetic.
pub fn characteristic_coefficients(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mul = |x: &[Vec<Rational>], y: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect())
            .collect()
    };

    let mut coeffs = Vec::with_capacity(n);
    // M_0 = 0, c_0 = 1; M_k = A M_{k-1} + c_{k-1} I; c_k = -tr(A M_k)/k
    let mut m = vec![vec![Rational::zero(); n]; n];
    let mut c_prev = Rational::one();
    for k in 1..=n {
        let am = mul(a, &m);
        m = (0..n)
            .map(|i| (0..n).map(|j| if i == j { am[i][j] + c_prev } else { am[i][j] }).collect())
            .collect();
        let am = mul(a, &m);
        let trace: Rational = (0..n).map(|i| am[i][i]).sum();
        let c = -trace / Rational::from_integer(k as i64);
        coeffs.push(c);
        c_prev = c;
    }
    coeffs
}

/// Characteristic-polynomial coefficients of θ; the chain lies in the
/// nilpotent cone iff all of them vanish.
pub fn hitchin_invariants(bundle: &ChainHiggsBundle) -> Vec<Rational> {
    characteristic_coefficients(&bundle.higgs_matrix())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    Stable,
    /// Some tail has slope strictly above the total; `at` is the first such `k`.
    Destabilized { at: usize },
    /// No tail exceeds the total but tail `k` ties it.
    Marginal { at: usize },
}

impl Verdict {
    pub fn is_stable(self) -> bool {
        matches!(self, Verdict::Stable)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    #[serde(with = "ratio::as_string")]
    pub total_slope: Rational,
    /// `μ(T_k)` for `k = 2..=n`, where `T_k = O(r_k) ⊕ ... ⊕ O(r_n)`.
    #[serde(with = "ratio::vec_as_string")]
    pub tail_slopes: Vec<Rational>,
    pub verdict: Verdict,
}

/// Slopes of the θ-invariant tails against the total slope, exactly.
///
/// Parabolic weights are zero here, so the degree of `O(r)` is `r`. The
/// computation does not require admissibility.
pub fn tail_slopes(seq: &RootSequence) -> StabilityReport {
    let roots = seq.roots();
    let n = roots.len();
    let total: i64 = roots.iter().sum();
    let total_slope = Rational::new(total, n as i64);

    let mut tail_slopes = Vec::with_capacity(n.saturating_sub(1));
    let mut suffix = total;
    for k in 2..=n {
        suffix -= roots[k - 2];
        tail_slopes.push(Rational::new(suffix, (n - k + 1) as i64));
    }

    let first = |pred: &dyn Fn(&Rational) -> bool| tail_slopes.iter().position(pred).map(|i| i + 2);
    let verdict = if let Some(at) = first(&|s| *s > total_slope) {
        Verdict::Destabilized { at }
    } else if let Some(at) = first(&|s| *s == total_slope) {
        Verdict::Marginal { at }
    } else {
        Verdict::Stable
    };

    StabilityReport { total_slope, tail_slopes, verdict }
}

/// Multiplicities `m_r` of a split bundle. Absent keys have multiplicity 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<i64, usize>", into = "BTreeMap<i64, usize>")]
pub struct MultiplicityProfile {
    counts: BTreeMap<i64, usize>,
}

impl MultiplicityProfile {
    pub fn from_counts(counts: BTreeMap<i64, usize>) -> Result<Self> {
        if let Some((r, _)) = counts.iter().find(|(_, m)| **m == 0) {
            return Err(Error::MalformedRoots(format!("zero multiplicity stored at {r}")));
        }
        Ok(Self { counts })
    }

    pub fn get(&self, r: i64) -> usize {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn heights(&self) -> impl Iterator<Item = i64> + '_ {
        self.counts.keys().copied()
    }

    pub fn counts(&self) -> &BTreeMap<i64, usize> {
        &self.counts
    }

    pub fn shifted(&self, c: i64) -> Self {
        Self { counts: self.counts.iter().map(|(r, m)| (r + c, *m)).collect() }
    }
}

impl From<MultiplicityProfile> for BTreeMap<i64, usize> {
    fn from(p: MultiplicityProfile) -> Self {
        p.counts
    }
}

impl TryFrom<BTreeMap<i64, usize>> for MultiplicityProfile {
    type Error = Error;

    fn try_from(counts: BTreeMap<i64, usize>) -> Result<Self> {
        Self::from_counts(counts)
    }
}

pub fn multiplicities(seq: &RootSequence) -> MultiplicityProfile {
    let mut counts = BTreeMap::new();
    for r in seq.roots() {
        *counts.entry(*r).or_insert(0) += 1;
    }
    MultiplicityProfile { counts }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTermViolation {
    pub height: i64,
    pub count: usize,
    /// `m_{r-2}`
    pub below: usize,
    /// `m_{r+2}`
    pub above: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTermCheck {
    pub holds: bool,
    pub violations: Vec<ThreeTermViolation>,
}

/// Checks `m_r <= m_{r-2} + m_{r+2}` for all `r`. Only realized heights can
/// fail, since every other `m_r` is zero.
pub fn three_term_holds(prof: &MultiplicityProfile) -> ThreeTermCheck {
    let violations: Vec<_> = prof
        .heights()
        .filter_map(|r| {
            let (count, below, above) = (prof.get(r), prof.get(r - 2), prof.get(r + 2));
            (count > below + above).then_some(ThreeTermViolation { height: r, count, below, above })
        })
        .collect();
    ThreeTermCheck { holds: violations.is_empty(), violations }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationParams {
    pub n_min: usize,
    pub n_max: usize,
    pub max_rise: i64,
    pub root_bound: i64,
    pub require_stable: bool,
}

impl EnumerationParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 2 || self.n_min > self.n_max {
            return Err(Error::Parameters(format!(
                "need 2 <= n_min <= n_max, got n_min={} n_max={}",
                self.n_min, self.n_max
            )));
        }
        if self.max_rise < 2 || self.max_rise % 2 != 0 {
            return Err(Error::Parameters(format!("max_rise must be even and >= 2, got {}", self.max_rise)));
        }
        if self.root_bound < 0 {
            return Err(Error::Parameters(format!("root_bound must be >= 0, got {}", self.root_bound)));
        }
        Ok(())
    }

    /// Candidate steps in increasing order: `-2, 0, 2, ..., max_rise`.
    /// The horizontal step 0 is inadmissible but kept so that the
    /// admissibility filter has something to reject.
    pub fn candidate_steps(&self) -> Vec<i64> {
        (-1..=self.max_rise / 2).map(|k| 2 * k).collect()
    }
}

/// Depth-first walk over normalized candidate chains (`r_1 = 0`, steps from
/// [`EnumerationParams::candidate_steps`], `|r_j| <= root_bound`), shortest
/// length first and lexicographic within a length.
#[derive(Clone, Debug)]
pub struct CandidateChains {
    params: EnumerationParams,
    steps: Vec<i64>,
    first_step: Option<i64>,
    n: usize,
    roots: Vec<i64>,
    choices: Vec<usize>,
    fresh: bool,
}

impl CandidateChains {
    fn new(params: EnumerationParams, first_step: Option<i64>) -> Self {
        Self {
            steps: params.candidate_steps(),
            n: params.n_min,
            params,
            first_step,
            roots: vec![0],
            choices: Vec::new(),
            fresh: true,
        }
    }

    fn valid_choice(&self, depth: usize, start: usize) -> Option<usize> {
        let from = self.roots[depth];
        (start..self.steps.len()).find(|&c| {
            let step = self.steps[c];
            (depth > 0 || self.first_step.is_none_or(|f| f == step))
                && (from + step).abs() <= self.params.root_bound
        })
    }

    fn push(&mut self, c: usize) {
        let next = self.roots[self.roots.len() - 1] + self.steps[c];
        self.choices.push(c);
        self.roots.push(next);
    }

    /// Advance to the next full-length path of the current `n`.
    fn advance(&mut self) -> bool {
        let mut backtracking = !self.fresh;
        self.fresh = false;
        loop {
            if backtracking {
                let Some(c) = self.choices.pop() else { return false };
                self.roots.pop();
                if let Some(next) = self.valid_choice(self.choices.len(), c + 1) {
                    self.push(next);
                    backtracking = false;
                }
                continue;
            }
            if self.roots.len() == self.n {
                return true;
            }
            match self.valid_choice(self.choices.len(), 0) {
                Some(c) => self.push(c),
                None => backtracking = true,
            }
        }
    }
}

impl Iterator for CandidateChains {
    type Item = RootSequence;

    fn next(&mut self) -> Option<RootSequence> {
        while self.n <= self.params.n_max {
            if self.advance() {
                return Some(RootSequence(self.roots.clone()));
            }
            self.n += 1;
            self.roots.truncate(1);
            self.choices.clear();
            self.fresh = true;
        }
        None
    }
}

/// All normalized candidate chains, admissible or not.
pub fn enumerate_candidates(params: EnumerationParams) -> Result<CandidateChains> {
    params.validate()?;
    Ok(CandidateChains::new(params, None))
}

/// Candidates whose first step is `first_step`; the union over all candidate
/// steps partitions [`enumerate_candidates`].
pub fn enumerate_candidates_from(params: EnumerationParams, first_step: i64) -> Result<CandidateChains> {
    params.validate()?;
    Ok(CandidateChains::new(params, Some(first_step)))
}

/// Admissible normalized chains, optionally restricted to stable ones.
pub fn enumerate_chains(params: EnumerationParams) -> Result<impl Iterator<Item = RootSequence>> {
    let require_stable = params.require_stable;
    Ok(enumerate_candidates(params)?.filter(move |s| {
        is_admissible(s).admissible && (!require_stable || tail_slopes(s).verdict.is_stable())
    }))
}
