use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Fraction, MetricError};
use crate::corpus::InformativenessJudgment;

/// Informativeness score on the 1–3 rubric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score(u8);

impl Score {
    /// Same diagnosis as the original without losing specificity.
    pub const SAME: Score = Score(3);
    /// Same diagnosis, less specific.
    pub const LESS_SPECIFIC: Score = Score(2);
    /// A different diagnosis.
    pub const DIFFERENT: Score = Score(1);

    pub fn new(value: u8) -> Result<Self, MetricError> {
        if (1..=3).contains(&value) {
            Ok(Score(value))
        } else {
            Err(MetricError::InvalidScore(value))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Score {
    type Error = MetricError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Score::new(value)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AggregatedScore {
    pub item_id: String,
    pub score: Score,
    pub vote_counts: BTreeMap<u8, usize>,
}

/// Majority vote over 1–3 scores. A tie among the top counts resolves to
/// the lowest (worse) tied score.
pub fn majority_vote(scores: &[Score]) -> Result<(Score, BTreeMap<u8, usize>), MetricError> {
    if scores.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let mut counts: BTreeMap<u8, usize> = BTreeMap::new();
    for s in scores {
        *counts.entry(s.0).or_default() += 1;
    }
    let top = counts.values().copied().max().unwrap_or(0);
    // BTreeMap iterates ascending, so the first top-count entry is the worst score.
    let winner = counts
        .iter()
        .find(|(_, &c)| c == top)
        .map(|(&s, _)| Score(s))
        .expect("non-empty counts");
    Ok((winner, counts))
}

/// Groups judgments by item and majority-votes each, ordered by item id.
pub fn aggregate_judgments(judgments: &[InformativenessJudgment]) -> Result<Vec<AggregatedScore>, MetricError> {
    if judgments.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let mut by_item: BTreeMap<&str, Vec<Score>> = BTreeMap::new();
    for j in judgments {
        by_item.entry(&j.item_id).or_default().push(Score::new(j.score)?);
    }
    by_item
        .into_iter()
        .map(|(item, scores)| {
            let (score, vote_counts) = majority_vote(&scores)?;
            Ok(AggregatedScore {
                item_id: item.to_owned(),
                score,
                vote_counts,
            })
        })
        .collect()
}

/// Fraction of items per aggregated score; only observed scores appear.
pub fn informativeness_distribution(
    aggregated: &[AggregatedScore],
) -> Result<BTreeMap<Score, Fraction>, MetricError> {
    if aggregated.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let mut counts: BTreeMap<Score, u64> = BTreeMap::new();
    for a in aggregated {
        *counts.entry(a.score).or_default() += 1;
    }
    let n = aggregated.len() as u64;
    Ok(counts.into_iter().map(|(s, c)| (s, Fraction::new(c, n))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores(v: &[u8]) -> Vec<Score> {
        v.iter().map(|&s| Score::new(s).unwrap()).collect()
    }

    fn vote(v: &[u8]) -> u8 {
        majority_vote(&scores(v)).unwrap().0.get()
    }

    #[test]
    fn majority_examples() {
        assert_eq!(vote(&[3, 3, 3, 2, 1]), 3);
        assert_eq!(vote(&[3, 3, 2, 2, 1]), 2);
        assert_eq!(vote(&[1, 1, 1, 1, 1]), 1);
        assert_eq!(vote(&[3, 1]), 1);
        assert_eq!(majority_vote(&[]), Err(MetricError::EmptyInput));
    }

    #[test]
    fn score_bounds() {
        assert!(Score::new(0).is_err());
        assert!(Score::new(4).is_err());
        assert_eq!(Score::new(3).unwrap(), Score::SAME);
    }

    fn agg(id: &str, s: u8) -> AggregatedScore {
        AggregatedScore {
            item_id: id.into(),
            score: Score(s),
            vote_counts: BTreeMap::from([(s, 1)]),
        }
    }

    #[test]
    fn distribution_examples() {
        let all_two: Vec<_> = (0..4).map(|i| agg(&i.to_string(), 2)).collect();
        let d = informativeness_distribution(&all_two).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&Score(2)].value(), 1.0);

        let mixed = [agg("a", 3), agg("b", 3), agg("c", 1), agg("d", 1)];
        let d = informativeness_distribution(&mixed).unwrap();
        assert_eq!(d[&Score(3)].value(), 0.5);
        assert_eq!(d[&Score(1)].value(), 0.5);
        assert_eq!(informativeness_distribution(&[]), Err(MetricError::EmptyInput));
    }

    #[test]
    fn aggregates_per_item() {
        let js: Vec<_> = [("i1", 3), ("i1", 2), ("i2", 1), ("i1", 2)]
            .into_iter()
            .map(|(i, s)| InformativenessJudgment {
                item_id: i.into(),
                worker_id: "w".into(),
                score: s,
            })
            .collect();
        let a = aggregate_judgments(&js).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a[0].score, Score(2));
        assert_eq!(a[0].vote_counts, BTreeMap::from([(2, 2), (3, 1)]));
    }
}
