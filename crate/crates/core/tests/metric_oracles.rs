//! Metrics checked against direct, independently written computations.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use typic_core::metrics::{
    cohen_kappa, krippendorff_alpha, majority_vote, multilabel_eval, Distance, LabelVector, MetricError,
    ReliabilityData, Score,
};

#[path = "support/oracles.rs"]
mod oracles;

use oracles::{alpha_oracle, five_vote_multisets, kappa_oracle};

#[test]
fn kappa_matches_oracle_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    // degenerate draws (chance agreement 1) are checked too but not counted
    while checked < 1000 {
        let items = rng.random_range(2..=10);
        let cats = rng.random_range(1..=5);
        let pairs: Vec<(u8, u8)> = (0..items)
            .map(|_| (rng.random_range(0..cats), rng.random_range(0..cats)))
            .collect();
        let got = cohen_kappa(&ReliabilityData::from_pairs(pairs.iter().copied()));
        match kappa_oracle(&pairs) {
            Some(want) => {
                let got = got.unwrap();
                assert!((got - want).abs() < 1e-12, "{pairs:?}: {got} vs {want}");
                checked += 1;
            }
            None => {
                let all_agree = pairs.iter().all(|(a, b)| a == b);
                assert_eq!(got.is_ok(), all_agree, "{pairs:?}");
            }
        }
    }
}

#[test]
fn alpha_matches_oracle_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    let mut case = 0;
    while checked < 2000 {
        case += 1;
        let units = rng.random_range(2..=10);
        let raters = rng.random_range(2..=5);
        let values = rng.random_range(2..=5u8);
        let missing = if case % 2 == 0 { 0.0 } else { 0.25 };
        let rows: Vec<Vec<Option<u8>>> = (0..units)
            .map(|_| {
                (0..raters)
                    .map(|_| (!rng.random_bool(missing)).then(|| rng.random_range(1..=values)))
                    .collect()
            })
            .collect();
        let data = ReliabilityData::from_rows(rows.clone());
        for (distance, ordinal) in [(Distance::Nominal, false), (Distance::Ordinal, true)] {
            match (krippendorff_alpha(&data, distance), alpha_oracle(&rows, ordinal)) {
                (Ok(got), Some(want)) => {
                    assert!((got - want).abs() < 1e-12, "{rows:?} {distance:?}: {got} vs {want}");
                    assert!(got <= 1.0 + 1e-12);
                    checked += 1;
                }
                (Err(MetricError::NoVariation), None) => {}
                (Err(MetricError::TooFewItems { .. }), _) => {}
                (got, want) => panic!("{rows:?} {distance:?}: {got:?} vs {want:?}"),
            }
        }
    }
}

#[test]
fn alpha_is_one_exactly_when_units_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let rows: Vec<Vec<Option<u8>>> = (0..rng.random_range(2..8))
            .map(|_| vec![Some(rng.random_range(1..=3)); 3])
            .collect();
        let data = ReliabilityData::from_rows(rows.clone());
        match krippendorff_alpha(&data, Distance::Ordinal) {
            Ok(a) => assert_eq!(a, 1.0),
            Err(e) => assert_eq!(e, MetricError::NoVariation, "{rows:?}"),
        }
    }
}

#[test]
fn alpha_golden_four_items() {
    let golden: serde_json::Value =
        serde_json::from_str(include_str!("golden/alpha_four_items.json")).unwrap();
    let rows: Vec<Vec<Option<u8>>> = serde_json::from_value(golden["rows"].clone()).unwrap();
    let data = ReliabilityData::from_rows(rows.clone());
    let nominal = krippendorff_alpha(&data, Distance::Nominal).unwrap();
    let ordinal = krippendorff_alpha(&data, Distance::Ordinal).unwrap();
    assert!((nominal - golden["nominal"].as_f64().unwrap()).abs() < 1e-12);
    assert!((ordinal - golden["ordinal"].as_f64().unwrap()).abs() < 1e-12);
    assert!((nominal - 6.0 / 31.0).abs() < 1e-12);
    assert!((ordinal - 3.0 / 11.0).abs() < 1e-12);
    assert!((alpha_oracle(&rows, true).unwrap() - ordinal).abs() < 1e-12);
}

#[test]
fn majority_tie_rule_on_every_five_vote_multiset() {
    let all = five_vote_multisets();
    assert_eq!(all.len(), 21);
    for votes in all {
        let mut counts = BTreeMap::new();
        for v in votes {
            *counts.entry(v).or_insert(0) += 1;
        }
        let top = *counts.values().max().unwrap();
        let want = *counts.iter().filter(|(_, &c)| c == top).map(|(s, _)| s).min().unwrap();
        let scores: Vec<Score> = votes.iter().map(|&v| Score::new(v).unwrap()).collect();
        let (got, _) = majority_vote(&scores).unwrap();
        assert_eq!(got.get(), want, "{votes:?}");
        // reversed order gives the same answer
        let rev: Vec<Score> = scores.iter().rev().copied().collect();
        assert_eq!(majority_vote(&rev).unwrap().0, got);
    }
}

#[test]
fn micro_f1_matches_hand_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let n = rng.random_range(1..=8);
        let dim = rng.random_range(1..=6);
        let vec = |rng: &mut ChaCha8Rng| LabelVector::from_bits((0..dim).map(|_| rng.random_bool(0.4)).collect());
        let gold: Vec<LabelVector> = (0..n).map(|_| vec(&mut rng)).collect();
        let pred: Vec<LabelVector> = (0..n).map(|_| vec(&mut rng)).collect();
        let (mut tp, mut fp, mut fn_) = (0.0, 0.0, 0.0);
        for (g, p) in gold.iter().zip(&pred) {
            for i in 0..dim {
                match (g.get(i), p.get(i)) {
                    (true, true) => tp += 1.0,
                    (false, true) => fp += 1.0,
                    (true, false) => fn_ += 1.0,
                    _ => {}
                }
            }
        }
        let r = multilabel_eval(&gold, &pred, &[]).unwrap();
        if tp + fp + fn_ == 0.0 {
            assert_eq!(r.micro_f1, 1.0);
            continue;
        }
        // F1 = 2TP / (2TP + FP + FN)
        let want = 2.0 * tp / (2.0 * tp + fp + fn_);
        assert!((r.micro_f1 - want).abs() < 1e-12, "{tp} {fp} {fn_}: {}", r.micro_f1);
        if tp + fp > 0.0 {
            assert!((r.micro_precision - tp / (tp + fp)).abs() < 1e-12);
        }
        if tp + fn_ > 0.0 {
            assert!((r.micro_recall - tp / (tp + fn_)).abs() < 1e-12);
        }
    }
}
