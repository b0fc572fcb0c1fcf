use std::collections::BTreeSet;

use higgs_threeterm::chain::{
    enumerate_candidates, enumerate_candidates_from, enumerate_chains, hitchin_invariants, is_admissible,
    multiplicities, tail_slopes, three_term_holds, weight_has_nonzero_form, ChainHiggsBundle, EnumerationParams,
    RootSequence, Verdict,
};
use num_traits::Zero;
use proptest::prelude::*;

// Independent oracles: plain integer arithmetic, no library code.

/// Stable iff every tail average is strictly below the total average,
/// compared by cross-multiplication.
fn oracle_stable(r: &[i64]) -> bool {
    let n = r.len() as i64;
    let total: i64 = r.iter().sum();
    (1..r.len()).all(|k| {
        let tail: i64 = r[k..].iter().sum();
        let len = n - k as i64;
        tail * n < total * len
    })
}

fn oracle_admissible(r: &[i64]) -> bool {
    r.windows(2).all(|w| {
        let d = w[1] - w[0];
        d == -2 || (d > 0 && d % 2 == 0)
    })
}

fn oracle_three_term(r: &[i64]) -> bool {
    let count = |h: i64| r.iter().filter(|x| **x == h).count();
    let lo = *r.iter().min().unwrap() - 4;
    let hi = *r.iter().max().unwrap() + 4;
    (lo..=hi).all(|h| count(h) <= count(h - 2) + count(h + 2))
}

/// Every sequence with `r_1 = 0`, even entries in `[-bound, bound]`.
fn oracle_all(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let values: Vec<i64> = (-bound / 2..=bound / 2).map(|k| 2 * k).collect();
    let mut out = vec![vec![0]];
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|p| values.iter().map(move |v| [p.clone(), vec![*v]].concat()))
            .collect();
    }
    out
}

fn params(n_min: usize, n_max: usize, max_rise: i64, root_bound: i64, require_stable: bool) -> EnumerationParams {
    EnumerationParams { n_min, n_max, max_rise, root_bound, require_stable }
}

#[test]
fn stable_enumeration_matches_brute_force() {
    for n in 2..=6 {
        let mut expected: Vec<Vec<i64>> = oracle_all(n, 10)
            .into_iter()
            .filter(|r| oracle_admissible(r) && oracle_stable(r))
            .filter(|r| r.windows(2).all(|w| w[1] - w[0] <= 8))
            .collect();
        expected.sort();
        let got: Vec<Vec<i64>> = enumerate_chains(params(n, n, 8, 10, true))
            .unwrap()
            .map(|s| s.roots().to_vec())
            .collect();
        assert_eq!(got, expected, "n = {n}");
    }
}

#[test]
fn admissible_enumeration_matches_brute_force() {
    for n in 2..=5 {
        let mut expected: Vec<Vec<i64>> = oracle_all(n, 8).into_iter().filter(|r| oracle_admissible(r)).collect();
        expected.sort();
        let got: Vec<Vec<i64>> = enumerate_chains(params(n, n, 16, 8, false))
            .unwrap()
            .map(|s| s.roots().to_vec())
            .collect();
        assert_eq!(got, expected, "n = {n}");
    }
}

#[test]
fn enumeration_is_sorted_and_partitioned_by_first_step() {
    let p = params(2, 5, 6, 8, false);
    let all: Vec<RootSequence> = enumerate_candidates(p).unwrap().collect();
    let keyed: Vec<_> = all.iter().map(|s| (s.len(), s.roots().to_vec())).collect();
    let mut sorted = keyed.clone();
    sorted.sort();
    assert_eq!(keyed, sorted);

    let mut union: Vec<RootSequence> = p
        .candidate_steps()
        .into_iter()
        .flat_map(|s| enumerate_candidates_from(p, s).unwrap())
        .collect();
    assert_eq!(union.len(), all.len());
    union.sort_by_key(|s| (s.len(), s.roots().to_vec()));
    assert_eq!(union, all);
    assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), all.len());
}

#[test]
fn theorem_holds_and_endpoints_drop_on_small_box() {
    let mut seen = 0;
    for seq in enumerate_chains(params(2, 7, 12, 12, true)).unwrap() {
        let r = seq.roots();
        assert!(oracle_three_term(r), "{seq}");
        assert!(r[r.len() - 1] < r[0], "{seq}");
        seen += 1;
    }
    assert!(seen > 0);
}

#[test]
fn rank_one_anomaly_is_real() {
    // a singleton is stable yet fails the literal inequality; sweeps start at n = 2
    let s = RootSequence::new(vec![4]).unwrap();
    assert_eq!(tail_slopes(&s).verdict, Verdict::Stable);
    assert!(!three_term_holds(&multiplicities(&s)).holds);
}

fn even_roots(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec((-10i64..=10).prop_map(|k| 2 * k), 1..=max_len)
}

/// Admissible chains built from random admissible steps.
fn admissible_roots() -> impl Strategy<Value = Vec<i64>> {
    (
        (-6i64..=6).prop_map(|k| 2 * k),
        prop::collection::vec(prop_oneof![Just(-2i64), (1i64..=5).prop_map(|k| 2 * k)], 0..8),
    )
        .prop_map(|(start, steps)| {
            let mut r = vec![start];
            for s in steps {
                r.push(r[r.len() - 1] + s);
            }
            r
        })
}

proptest! {
    #[test]
    fn admissibility_agrees_with_oracle_and_weights(r in even_roots(8)) {
        let s = RootSequence::new(r.clone()).unwrap();
        let adm = is_admissible(&s);
        prop_assert_eq!(adm.admissible, oracle_admissible(&r));
        prop_assert_eq!(adm.admissible, s.step_weights().into_iter().all(weight_has_nonzero_form));
        for v in &adm.violations {
            prop_assert!(!weight_has_nonzero_form(v.weight));
        }
    }

    #[test]
    fn stability_and_three_term_agree_with_oracles(r in even_roots(8)) {
        let s = RootSequence::new(r.clone()).unwrap();
        prop_assert_eq!(tail_slopes(&s).verdict.is_stable(), oracle_stable(&r));
        prop_assert_eq!(three_term_holds(&multiplicities(&s)).holds, oracle_three_term(&r));
    }

    #[test]
    fn shift_invariance(r in even_roots(8), c in (-8i64..=8).prop_map(|k| 2 * k)) {
        let s = RootSequence::new(r).unwrap();
        let t = s.shifted(c).unwrap();
        prop_assert_eq!(is_admissible(&s).admissible, is_admissible(&t).admissible);
        prop_assert_eq!(tail_slopes(&s).verdict, tail_slopes(&t).verdict);
        let (ps, pt) = (multiplicities(&s), multiplicities(&t));
        prop_assert_eq!(ps.shifted(c), pt.clone());
        prop_assert_eq!(three_term_holds(&ps).holds, three_term_holds(&pt).holds);
    }

    #[test]
    fn profile_sums_to_rank(r in even_roots(10)) {
        let s = RootSequence::new(r.clone()).unwrap();
        prop_assert_eq!(multiplicities(&s).total(), r.len());
    }

    #[test]
    fn admissible_chains_are_nilpotent(r in admissible_roots()) {
        let b = ChainHiggsBundle::new(RootSequence::new(r.clone()).unwrap()).unwrap();
        let inv = hitchin_invariants(&b);
        prop_assert_eq!(inv.len(), r.len());
        prop_assert!(inv.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn stable_admissible_chains_satisfy_theorem(r in admissible_roots()) {
        let s = RootSequence::new(r.clone()).unwrap();
        if r.len() >= 2 && tail_slopes(&s).verdict.is_stable() {
            prop_assert!(three_term_holds(&multiplicities(&s)).holds);
            prop_assert!(s.last() < s.first());
        }
    }
}
