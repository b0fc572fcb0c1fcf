//! Exhaustive sweeps over normalized chains.
//!
//! Every candidate is classified; every stable admissible chain is checked
//! against the three-term inequality, the endpoint order `r_n < r_1`, a
//! verified matching certificate at every realized height, and nilpotency of
//! its Higgs field. Admissible chains that are not stable are scanned for
//! three-term failures, which witness that stability cannot be dropped.
//!
//! The search space is split by first step; each worker owns a disjoint set of
//! first steps and results are merged in a canonical order, so the report does
//! not depend on the worker count.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chain::{
    enumerate_candidates_from, hitchin_invariants, is_admissible, multiplicities, tail_slopes, three_term_holds,
    weight_has_nonzero_form, ChainHiggsBundle, EnumerationParams, RootSequence, ThreeTermViolation, Verdict,
};
use crate::error::Result;
use crate::pairing::{build_matching, verify_certificate};

/// Witness examples kept in a report.
pub const WITNESS_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepParams {
    pub n_min: usize,
    pub n_max: usize,
    pub max_rise: i64,
    pub root_bound: i64,
}

impl SweepParams {
    fn enumeration(&self) -> EnumerationParams {
        EnumerationParams {
            n_min: self.n_min,
            n_max: self.n_max,
            max_rise: self.max_rise,
            root_bound: self.root_bound,
            require_stable: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub generated: u64,
    pub admissible: u64,
    pub stable: u64,
    pub marginal: u64,
    pub unstable: u64,
    /// Admissible, not stable, and failing the three-term inequality.
    pub unstable_three_term_failures: u64,
    pub certificates_verified: u64,
}

impl Counts {
    fn merge(&mut self, o: &Counts) {
        self.generated += o.generated;
        self.admissible += o.admissible;
        self.stable += o.stable;
        self.marginal += o.marginal;
        self.unstable += o.unstable;
        self.unstable_three_term_failures += o.unstable_three_term_failures;
        self.certificates_verified += o.certificates_verified;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthHistogram {
    pub n: usize,
    #[serde(flatten)]
    pub counts: Counts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    AdmissibilityMismatch,
    ThreeTerm,
    EndpointOrder,
    Matching,
    Certificate,
    Cardinality,
    CrossCheck,
    NonNilpotent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub roots: RootSequence,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub roots: RootSequence,
    pub verdict: Verdict,
    pub violations: Vec<ThreeTermViolation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub parameters: SweepParams,
    pub totals: Counts,
    pub histograms: Vec<LengthHistogram>,
    pub violations: Vec<Violation>,
    /// First witnesses in (length, lexicographic) order.
    pub necessity_witnesses: Vec<Witness>,
    pub pass: bool,
    pub wall_seconds: f64,
}

impl SweepReport {
    /// JSON with the timing field removed; identical across worker counts.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("wall_seconds");
        }
        serde_json::to_string(&v).expect("value serializes")
    }

    pub fn totals_consistent(&self) -> bool {
        let t = &self.totals;
        t.stable <= t.admissible
            && t.admissible <= t.generated
            && t.stable + t.marginal + t.unstable == t.admissible
            && t.certificates_verified >= t.stable
    }
}

#[derive(Default)]
struct Partial {
    by_n: BTreeMap<usize, Counts>,
    violations: Vec<Violation>,
    witnesses: Vec<Witness>,
}

fn canonical_key(s: &RootSequence) -> (usize, &[i64]) {
    (s.len(), s.roots())
}

fn check_stable(seq: &RootSequence, counts: &mut Counts, violations: &mut Vec<Violation>) {
    let mut flag = |kind, detail: String| violations.push(Violation { roots: seq.clone(), kind, detail });

    let profile = multiplicities(seq);
    let three = three_term_holds(&profile);
    if !three.holds {
        flag(ViolationKind::ThreeTerm, format!("{:?}", three.violations));
    }
    if seq.len() >= 2 && seq.last() >= seq.first() {
        flag(ViolationKind::EndpointOrder, format!("r_n = {} >= r_1 = {}", seq.last(), seq.first()));
    }

    for r in profile.heights() {
        match build_matching(seq, r) {
            Ok(cert) => {
                let check = verify_certificate(seq, &cert);
                if !check.valid {
                    flag(ViolationKind::Certificate, format!("height {r}: {:?}", check.reasons));
                    continue;
                }
                counts.certificates_verified += 1;
                let (m, below, above) = (profile.get(r), profile.get(r - 2), profile.get(r + 2));
                if cert.pairs.len() != m {
                    flag(ViolationKind::Cardinality, format!("height {r}: {} pairs, m_r = {m}", cert.pairs.len()));
                }
                // an injective certificate forces the inequality at this height
                let local_holds = !three.violations.iter().any(|v| v.height == r);
                if !local_holds || m > below + above {
                    flag(ViolationKind::CrossCheck, format!("height {r}: certificate valid but counts disagree"));
                }
            }
            Err(e) => flag(ViolationKind::Matching, format!("height {r}: {e}")),
        }
    }

    match ChainHiggsBundle::new(seq.clone()) {
        Ok(bundle) => {
            let inv = hitchin_invariants(&bundle);
            if inv.iter().any(|c| !c.is_zero()) {
                flag(ViolationKind::NonNilpotent, format!("{inv:?}"));
            }
        }
        Err(e) => flag(ViolationKind::AdmissibilityMismatch, e.to_string()),
    }
}

fn sweep_prefix(params: &SweepParams, first_step: i64) -> Result<Partial> {
    let mut part = Partial::default();
    for seq in enumerate_candidates_from(params.enumeration(), first_step)? {
        let counts = part.by_n.entry(seq.len()).or_default();
        counts.generated += 1;

        let adm = is_admissible(&seq);
        let by_weights = seq.step_weights().into_iter().all(weight_has_nonzero_form);
        if adm.admissible != by_weights {
            part.violations.push(Violation {
                roots: seq.clone(),
                kind: ViolationKind::AdmissibilityMismatch,
                detail: format!("step rule says {}, weight rule says {by_weights}", adm.admissible),
            });
        }
        if !adm.admissible {
            continue;
        }
        counts.admissible += 1;

        let verdict = tail_slopes(&seq).verdict;
        match verdict {
            Verdict::Stable => {
                counts.stable += 1;
                check_stable(&seq, counts, &mut part.violations);
            }
            Verdict::Marginal { .. } | Verdict::Destabilized { .. } => {
                if matches!(verdict, Verdict::Marginal { .. }) {
                    counts.marginal += 1;
                } else {
                    counts.unstable += 1;
                }
                let three = three_term_holds(&multiplicities(&seq));
                if !three.holds {
                    counts.unstable_three_term_failures += 1;
                    if part.witnesses.len() < WITNESS_LIMIT {
                        part.witnesses.push(Witness { roots: seq.clone(), verdict, violations: three.violations });
                    }
                }
            }
        }
    }
    Ok(part)
}

/// Runs the sweep on `workers` threads (at least one).
pub fn sweep(params: SweepParams, workers: usize) -> Result<SweepReport> {
    let started = Instant::now();
    let enumeration = params.enumeration();
    enumeration.validate()?;
    let first_steps = enumeration.candidate_steps();
    let workers = workers.clamp(1, first_steps.len());

    let partials: Vec<Result<Partial>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let steps: Vec<i64> = first_steps.iter().copied().skip(w).step_by(workers).collect();
                scope.spawn(move || steps.into_iter().map(|s| sweep_prefix(&params, s)).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let mut by_n: BTreeMap<usize, Counts> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut witnesses = Vec::new();
    for part in partials {
        let part = part?;
        for (n, c) in &part.by_n {
            by_n.entry(*n).or_default().merge(c);
        }
        violations.extend(part.violations);
        witnesses.extend(part.witnesses);
    }

    violations.sort_by(|a, b| {
        canonical_key(&a.roots)
            .cmp(&canonical_key(&b.roots))
            .then(a.kind.cmp(&b.kind))
            .then(a.detail.cmp(&b.detail))
    });
    witnesses.sort_by(|a, b| canonical_key(&a.roots).cmp(&canonical_key(&b.roots)));
    witnesses.truncate(WITNESS_LIMIT);

    let mut totals = Counts::default();
    for c in by_n.values() {
        totals.merge(c);
    }
    let histograms = by_n.into_iter().map(|(n, counts)| LengthHistogram { n, counts }).collect();

    Ok(SweepReport {
        parameters: params,
        totals,
        histograms,
        pass: violations.is_empty(),
        violations,
        necessity_witnesses: witnesses,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}
