use std::collections::{BTreeMap, BTreeSet};

use super::{Fraction, MetricError};
use crate::corpus::{OverlapPair, SlotAdjudication};
use crate::template::Label;

/// Ratings of one item, keyed by annotator id. Missing annotators simply
/// have no entry.
#[derive(Clone, Debug, PartialEq)]
pub struct Unit<T> {
    pub id: String,
    pub ratings: BTreeMap<String, T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityData<T> {
    pub units: Vec<Unit<T>>,
}

impl<T> Default for ReliabilityData<T> {
    fn default() -> Self {
        ReliabilityData { units: Vec::new() }
    }
}

impl<T: Clone + Ord> ReliabilityData<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: impl Into<String>, ratings: impl IntoIterator<Item = (String, T)>) {
        self.units.push(Unit {
            id: id.into(),
            ratings: ratings.into_iter().collect(),
        });
    }

    /// Two-annotator data from `(a, b)` label pairs; items are numbered.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (T, T)>) -> Self {
        let mut data = Self::new();
        for (i, (a, b)) in pairs.into_iter().enumerate() {
            data.push(i.to_string(), [("a".to_string(), a), ("b".to_string(), b)]);
        }
        data
    }

    /// Unit-major matrix: `rows[u][r]` is rater `r`'s value for unit `u`.
    pub fn from_rows(rows: impl IntoIterator<Item = Vec<Option<T>>>) -> Self {
        let mut data = Self::new();
        for (u, row) in rows.into_iter().enumerate() {
            let ratings = row
                .into_iter()
                .enumerate()
                .filter_map(|(r, v)| v.map(|v| (format!("r{r}"), v)));
            data.push(u.to_string(), ratings);
        }
        data
    }

    pub fn annotators(&self) -> BTreeSet<&str> {
        self.units
            .iter()
            .flat_map(|u| u.ratings.keys().map(String::as_str))
            .collect()
    }

    fn paired(&self) -> Result<Vec<(&T, &T)>, MetricError> {
        let annotators: Vec<&str> = self.annotators().into_iter().collect();
        if annotators.len() != 2 {
            return Err(MetricError::AnnotatorCount(annotators.len()));
        }
        self.units
            .iter()
            .map(|u| match (u.ratings.get(annotators[0]), u.ratings.get(annotators[1])) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => Err(MetricError::MissingRating(u.id.clone())),
            })
            .collect()
    }
}

/// Cohen's κ for two annotators over categorical labels.
///
/// Chance agreement is the sum over categories of the product of the two
/// annotators' marginal proportions. When chance agreement is 1 (both
/// annotators constant on the same category) κ is defined as 1.
pub fn cohen_kappa<T: Clone + Ord>(data: &ReliabilityData<T>) -> Result<f64, MetricError> {
    let pairs = data.paired()?;
    if pairs.len() < 2 {
        return Err(MetricError::TooFewItems { needed: 2, got: pairs.len() });
    }
    let n = pairs.len();
    let agree = pairs.iter().filter(|(a, b)| a == b).count();
    let mut marg_a: BTreeMap<&T, usize> = BTreeMap::new();
    let mut marg_b: BTreeMap<&T, usize> = BTreeMap::new();
    for (a, b) in &pairs {
        *marg_a.entry(a).or_default() += 1;
        *marg_b.entry(b).or_default() += 1;
    }
    let chance_num: usize = marg_a
        .iter()
        .map(|(k, ca)| ca * marg_b.get(k).copied().unwrap_or(0))
        .sum();
    let nn = n * n;
    if chance_num == nn {
        return if agree == n { Ok(1.0) } else { Err(MetricError::DegenerateChance) };
    }
    let p_o = agree as f64 / n as f64;
    let p_e = chance_num as f64 / nn as f64;
    Ok((p_o - p_e) / (1.0 - p_e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Nominal,
    /// Squared rank distance built from cumulative value frequencies.
    Ordinal,
}

/// Krippendorff's α = 1 − D_o / D_e from the coincidence matrix.
///
/// Units with fewer than two ratings are not pairable and are ignored.
/// Ordinal values are ordered by `T: Ord`; the ordinal metric between
/// values c ≤ k is `(Σ_{g=c..k} n_g − (n_c + n_k)/2)²` where `n_g` are the
/// coincidence marginals.
pub fn krippendorff_alpha<T: Clone + Ord>(
    data: &ReliabilityData<T>,
    distance: Distance,
) -> Result<f64, MetricError> {
    let pairable: Vec<Vec<&T>> = data
        .units
        .iter()
        .map(|u| u.ratings.values().collect::<Vec<_>>())
        .filter(|v| v.len() >= 2)
        .collect();
    if pairable.is_empty() {
        return Err(MetricError::TooFewItems { needed: 1, got: 0 });
    }
    let values: Vec<&T> = pairable
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&T, usize> = values.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let k = values.len();

    let mut coincidence = vec![vec![0.0f64; k]; k];
    for unit in &pairable {
        let m = unit.len() as f64;
        let mut counts = vec![0usize; k];
        for v in unit {
            counts[index[v]] += 1;
        }
        for c in 0..k {
            if counts[c] == 0 {
                continue;
            }
            for d in 0..k {
                let pairs = if c == d {
                    counts[c] * (counts[c] - 1)
                } else {
                    counts[c] * counts[d]
                };
                if pairs > 0 {
                    coincidence[c][d] += pairs as f64 / (m - 1.0);
                }
            }
        }
    }
    let marginals: Vec<f64> = coincidence.iter().map(|row| row.iter().sum()).collect();
    let n: f64 = marginals.iter().sum();

    let delta = |c: usize, d: usize| -> f64 {
        if c == d {
            return 0.0;
        }
        match distance {
            Distance::Nominal => 1.0,
            Distance::Ordinal => {
                let (lo, hi) = if c < d { (c, d) } else { (d, c) };
                let span: f64 = marginals[lo..=hi].iter().sum();
                let x = span - (marginals[c] + marginals[d]) / 2.0;
                x * x
            }
        }
    };

    let mut observed = 0.0;
    let mut expected = 0.0;
    for c in 0..k {
        for d in 0..k {
            let delta = delta(c, d);
            observed += coincidence[c][d] * delta;
            expected += marginals[c] * marginals[d] * delta;
        }
    }
    if expected == 0.0 {
        return Err(MetricError::NoVariation);
    }
    Ok(1.0 - (n - 1.0) * observed / expected)
}

/// Share of items on which the two annotators give the same label.
pub fn percent_agreement<T: Clone + Ord>(data: &ReliabilityData<T>) -> Result<Fraction, MetricError> {
    let pairs = data.paired()?;
    if pairs.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let matches = pairs.iter().filter(|(a, b)| a == b).count();
    Ok(Fraction::new(matches as u64, pairs.len() as u64))
}

/// Template-selection reliability data from overlap pairs. Raters are
/// reduced to the roles `first` and `second`, so pairs drawn from
/// different annotator identities still form a two-rater table.
/// NotApplicable is an ordinary category.
pub fn uniqueness_data(pairs: &[OverlapPair<'_>]) -> ReliabilityData<Label> {
    let mut data = ReliabilityData::new();
    for p in pairs {
        data.push(
            p.comment_id,
            [
                ("first".to_string(), p.first.label.clone()),
                ("second".to_string(), p.second.label.clone()),
            ],
        );
    }
    data
}

/// Slot-content agreement from adjudicated lenient-match verdicts.
/// Rows not yet adjudicated are skipped.
pub fn slot_agreement(rows: &[SlotAdjudication]) -> Result<Fraction, MetricError> {
    let mut data = ReliabilityData::new();
    for (i, row) in rows.iter().enumerate() {
        let Some(matched) = row.lenient_match else { continue };
        let meaning_a = format!("{i}");
        let meaning_b = if matched { meaning_a.clone() } else { format!("{i}'") };
        data.push(
            format!("{}/{}", row.comment_id, row.slot),
            [("a".to_string(), meaning_a), ("b".to_string(), meaning_b)],
        );
    }
    percent_agreement(&data)
}
