//! Deterministic assignment of items to annotators.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{Assignee, ProjectConfig, Status, TaskAssignment, Workflow};
use crate::ServiceError;

/// Number of doubly assigned items for `fraction` of `n` items: ⌈f·n⌉.
///
/// Products within 1e-9 of an integer are treated as that integer, so
/// 0.1 · 740 gives 74 rather than 75.
pub fn overlap_count(fraction: f64, n: usize) -> usize {
    let x = fraction * n as f64;
    let nearest = x.round();
    if (x - nearest).abs() < 1e-9 {
        nearest as usize
    } else {
        x.ceil() as usize
    }
}

fn open(annotator: &str) -> Assignee {
    Assignee {
        annotator: annotator.to_owned(),
        status: Status::Open,
        revision: 0,
    }
}

/// Builds the assignment table for `items` (calibration items excluded).
///
/// Free-text and template-application items go to annotator `i mod n`;
/// the ⌈f·N⌉ items first in a shuffle seeded by `config.seed` also go to
/// annotator `i + 1 mod n`. Judging items each get `workers_per_item`
/// consecutive annotators. Calibration items go to everyone and come first.
pub fn assign(config: &ProjectConfig, items: &[String]) -> Result<Vec<TaskAssignment>, ServiceError> {
    let annotators = &config.annotators;
    let n = annotators.len();
    let mut out: Vec<TaskAssignment> = config
        .calibration
        .iter()
        .map(|item| TaskAssignment {
            item_id: item.clone(),
            calibration: true,
            overlap: n >= 2,
            assignees: annotators.iter().map(|a| open(a)).collect(),
        })
        .collect();

    match config.workflow {
        Workflow::InformativenessJudging => {
            let k = config.workers_per_item;
            if k == 0 || k > n {
                return Err(ServiceError::Config(format!(
                    "{k} workers per item requested but {n} annotators registered"
                )));
            }
            for (i, item) in items.iter().enumerate() {
                out.push(TaskAssignment {
                    item_id: item.clone(),
                    calibration: false,
                    overlap: k >= 2,
                    assignees: (0..k).map(|j| open(&annotators[(i * k + j) % n])).collect(),
                });
            }
        }
        Workflow::FreeTextDiagnosis | Workflow::TemplateApplication => {
            let doubled = overlap_count(config.overlap_fraction, items.len());
            if doubled > 0 && n < 2 {
                return Err(ServiceError::Config("overlap needs at least two annotators".into()));
            }
            let mut order: Vec<usize> = (0..items.len()).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed));
            let mut overlap = vec![false; items.len()];
            for &i in &order[..doubled] {
                overlap[i] = true;
            }
            for (i, item) in items.iter().enumerate() {
                let mut assignees = vec![open(&annotators[i % n])];
                if overlap[i] {
                    assignees.push(open(&annotators[(i + 1) % n]));
                }
                out.push(TaskAssignment {
                    item_id: item.clone(),
                    calibration: false,
                    overlap: overlap[i],
                    assignees,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(workflow: Workflow, overlap: f64, annotators: &[&str]) -> ProjectConfig {
        ProjectConfig {
            name: "t".into(),
            corpus: "unused".into(),
            workflow,
            overlap_fraction: overlap,
            annotators: annotators.iter().map(|s| s.to_string()).collect(),
            seed: 7,
            items: None,
            calibration: vec![],
            workers_per_item: 5,
            locale: "en".into(),
        }
    }

    fn items(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("c{i}")).collect()
    }

    #[test]
    fn overlap_count_is_a_ceiling() {
        assert_eq!(overlap_count(0.10, 740), 74);
        assert_eq!(overlap_count(0.5, 20), 10);
        assert_eq!(overlap_count(0.5, 21), 11);
        assert_eq!(overlap_count(0.0, 20), 0);
        assert_eq!(overlap_count(1.0, 20), 20);
        assert_eq!(overlap_count(0.01, 1), 1);
        for n in 0..2000 {
            for f in [0.1, 0.2, 0.3, 0.7] {
                // ⌈f·n⌉ with f = p/10, by integer arithmetic
                let p = (f * 10.0_f64).round() as usize;
                assert_eq!(overlap_count(f, n), (p * n).div_ceil(10), "{f} {n}");
            }
        }
    }

    #[test]
    fn seventy_four_of_740_are_doubled() {
        let out = assign(&config(Workflow::TemplateApplication, 0.10, &["a", "b"]), &items(740)).unwrap();
        assert_eq!(out.iter().filter(|t| t.overlap).count(), 74);
        assert!(out.iter().filter(|t| t.overlap).all(|t| t.assignees.len() == 2));
        assert!(out.iter().filter(|t| !t.overlap).all(|t| t.assignees.len() == 1));
    }

    #[test]
    fn overlap_extremes() {
        let none = assign(&config(Workflow::FreeTextDiagnosis, 0.0, &["a", "b"]), &items(30)).unwrap();
        assert!(none.iter().all(|t| t.assignees.len() == 1));
        let all = assign(&config(Workflow::FreeTextDiagnosis, 1.0, &["a", "b"]), &items(30)).unwrap();
        assert!(all.iter().all(|t| t.assignees.len() == 2 && t.assignees[0].annotator != t.assignees[1].annotator));
    }

    #[test]
    fn overlap_choice_depends_only_on_the_seed() {
        let c = config(Workflow::TemplateApplication, 0.3, &["a", "b", "c"]);
        assert_eq!(assign(&c, &items(50)).unwrap(), assign(&c, &items(50)).unwrap());
        let mut other = c.clone();
        other.seed = 8;
        assert_ne!(assign(&c, &items(50)).unwrap(), assign(&other, &items(50)).unwrap());
    }

    #[test]
    fn overlap_with_one_annotator_is_rejected() {
        let r = assign(&config(Workflow::TemplateApplication, 0.5, &["a"]), &items(4));
        assert!(matches!(r, Err(ServiceError::Config(_))));
    }

    #[test]
    fn judging_uses_five_distinct_workers() {
        let workers: Vec<String> = (1..=7).map(|i| format!("w{i}")).collect();
        let refs: Vec<&str> = workers.iter().map(String::as_str).collect();
        let out = assign(&config(Workflow::InformativenessJudging, 0.0, &refs), &items(12)).unwrap();
        for t in &out {
            let mut names: Vec<_> = t.assignees.iter().map(|a| &a.annotator).collect();
            names.sort();
            names.dedup();
            assert_eq!(names.len(), 5);
        }
        let r = assign(&config(Workflow::InformativenessJudging, 0.0, &["a", "b"]), &items(3));
        assert!(matches!(r, Err(ServiceError::Config(_))));
    }

    #[test]
    fn calibration_items_go_to_everyone_first() {
        let mut c = config(Workflow::TemplateApplication, 0.0, &["a", "b", "c"]);
        c.calibration = vec!["cal".into()];
        let out = assign(&c, &items(3)).unwrap();
        assert_eq!(out[0].item_id, "cal");
        assert!(out[0].calibration);
        assert_eq!(out[0].assignees.len(), 3);
    }
}
