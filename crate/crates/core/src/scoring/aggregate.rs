use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{SampleKey, ScoreError, ScoreRecord, ThresholdFamily};
use crate::scalar::{mean, std_dev, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricTriple<V> {
    pub accuracy: V,
    pub precision: V,
    pub recall: V,
}

/// Per-sample average and best over the threshold family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleAggregate<T> {
    pub key: SampleKey,
    pub members: usize,
    pub avg: MetricTriple<T>,
    pub best: MetricTriple<T>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary<T> {
    pub mean: T,
    /// Population standard deviation over samples.
    pub std: T,
}

/// Mean ± std of the per-sample aggregates of one method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary<T> {
    pub method: String,
    pub samples: usize,
    pub avg: MetricTriple<MetricSummary<T>>,
    pub best: MetricTriple<MetricSummary<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Aggregation<T> {
    pub samples: Vec<SampleAggregate<T>>,
    pub methods: Vec<MethodSummary<T>>,
}

fn summarize<T: Scalar>(values: &[T]) -> MetricSummary<T> {
    MetricSummary {
        mean: mean(values).unwrap_or_else(T::zero),
        std: std_dev(values).unwrap_or_else(T::zero),
    }
}

fn triple_summary<T: Scalar>(items: &[&MetricTriple<T>]) -> MetricTriple<MetricSummary<T>> {
    let col = |f: fn(&MetricTriple<T>) -> T| items.iter().map(|t| f(t)).collect::<Vec<_>>();
    MetricTriple {
        accuracy: summarize(&col(|t| t.accuracy)),
        precision: summarize(&col(|t| t.precision)),
        recall: summarize(&col(|t| t.recall)),
    }
}

/// Groups records by sample, computes `X_avg` (mean over members) and
/// `X_best` (max over members) for `X ∈ {A, P, R}`, then per-method means and
/// standard deviations over samples. Output order is sorted by key.
pub fn aggregate<T: Scalar>(records: &[ScoreRecord<T>]) -> Result<Aggregation<T>, ScoreError> {
    if records.is_empty() {
        return Err(ScoreError::Empty);
    }
    let mut groups: BTreeMap<&SampleKey, Vec<&ScoreRecord<T>>> = BTreeMap::new();
    for r in records {
        groups.entry(&r.key).or_default().push(r);
    }
    let mut samples = Vec::with_capacity(groups.len());
    for (key, mut group) in groups {
        group.sort_by_key(|r| r.m);
        let col = |f: fn(&ScoreRecord<T>) -> T| group.iter().map(|r| f(r)).collect::<Vec<_>>();
        let a = col(|r| r.metrics.accuracy);
        let p = col(|r| r.metrics.precision);
        let r = col(|r| r.metrics.recall);
        let max = |v: &[T]| v.iter().fold(T::neg_infinity(), |m, &x| m.max(x));
        samples.push(SampleAggregate {
            key: key.clone(),
            members: group.len(),
            avg: MetricTriple {
                accuracy: mean(&a).expect("non-empty group"),
                precision: mean(&p).expect("non-empty group"),
                recall: mean(&r).expect("non-empty group"),
            },
            best: MetricTriple {
                accuracy: max(&a),
                precision: max(&p),
                recall: max(&r),
            },
        });
    }

    let mut by_method: BTreeMap<&str, Vec<&SampleAggregate<T>>> = BTreeMap::new();
    for s in &samples {
        by_method.entry(s.key.method.as_str()).or_default().push(s);
    }
    let methods = by_method
        .into_iter()
        .map(|(method, items)| {
            let avg: Vec<_> = items.iter().map(|s| &s.avg).collect();
            let best: Vec<_> = items.iter().map(|s| &s.best).collect();
            MethodSummary {
                method: method.to_string(),
                samples: items.len(),
                avg: triple_summary(&avg),
                best: triple_summary(&best),
            }
        })
        .collect();
    Ok(Aggregation { samples, methods })
}

/// One ROC point: mean FPR and mean recall over samples at member `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RocPoint<T> {
    pub m: usize,
    pub fpr: T,
    pub recall: T,
}

/// ROC series of a single method, one point per family member.
///
/// Every sample present in `records` must have exactly one record for every
/// member of `family`.
pub fn roc_points<T: Scalar>(records: &[ScoreRecord<T>], family: &ThresholdFamily) -> Result<Vec<RocPoint<T>>, ScoreError> {
    let first = records.first().ok_or(ScoreError::Empty)?;
    if let Some(other) = records.iter().find(|r| r.key.method != first.key.method) {
        return Err(ScoreError::Incomplete(format!(
            "records mix methods '{}' and '{}'",
            first.key.method, other.key.method
        )));
    }
    let samples: BTreeSet<(usize, usize)> = records.iter().map(|r| (r.key.shard, r.key.sample)).collect();
    let mut per_m: Vec<BTreeMap<(usize, usize), (T, T)>> = vec![BTreeMap::new(); family.len()];
    for r in records {
        let slot = per_m.get_mut(r.m).ok_or_else(|| {
            ScoreError::Incomplete(format!("member index {} outside family of {}", r.m, family.len()))
        })?;
        if slot
            .insert((r.key.shard, r.key.sample), (r.metrics.fpr, r.metrics.recall))
            .is_some()
        {
            return Err(ScoreError::Incomplete(format!(
                "duplicate record for shard {} sample {} at m={}",
                r.key.shard, r.key.sample, r.m
            )));
        }
    }
    per_m
        .into_iter()
        .enumerate()
        .map(|(m, values)| {
            if values.len() != samples.len() {
                return Err(ScoreError::Incomplete(format!(
                    "member m={m} has {} of {} samples",
                    values.len(),
                    samples.len()
                )));
            }
            let fpr: Vec<T> = values.values().map(|v| v.0).collect();
            let rec: Vec<T> = values.values().map(|v| v.1).collect();
            Ok(RocPoint {
                m,
                fpr: mean(&fpr).expect("non-empty"),
                recall: mean(&rec).expect("non-empty"),
            })
        })
        .collect()
}

/// Method tag and its ROC points.
pub type RocCurve<T> = (String, Vec<RocPoint<T>>);

/// [`roc_points`] for every method in `records`, sorted by method tag.
pub fn roc_curves<T: Scalar>(
    records: &[ScoreRecord<T>],
    family: &ThresholdFamily,
) -> Result<Vec<RocCurve<T>>, ScoreError> {
    let mut by_method: BTreeMap<&str, Vec<ScoreRecord<T>>> = BTreeMap::new();
    for r in records {
        by_method.entry(r.key.method.as_str()).or_default().push(r.clone());
    }
    if by_method.is_empty() {
        return Err(ScoreError::Empty);
    }
    by_method
        .into_iter()
        .map(|(m, recs)| Ok((m.to_string(), roc_points(&recs, family)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::{FamilyKind, Metrics};

    fn key(method: &str, sample: usize) -> SampleKey {
        SampleKey {
            method: method.into(),
            shard: 0,
            sample,
            true_class: 0,
            predicted_class: 0,
        }
    }

    fn rec(method: &str, sample: usize, m: usize, p: f64, r: f64, fpr: f64) -> ScoreRecord<f64> {
        ScoreRecord {
            key: key(method, sample),
            m,
            metrics: Metrics {
                accuracy: 0.5,
                precision: p,
                recall: r,
                fpr,
            },
        }
    }

    #[test]
    fn avg_and_best_per_sample() {
        let recs = vec![rec("a", 0, 0, 0.2, 1.0, 0.0), rec("a", 0, 1, 0.6, 0.5, 0.1)];
        let agg = aggregate(&recs).unwrap();
        let s = &agg.samples[0];
        assert_eq!(s.members, 2);
        assert_eq!((s.avg.precision, s.best.precision), (0.4, 0.6));
        assert_eq!((s.avg.recall, s.best.recall), (0.75, 1.0));
        assert_eq!(s.avg.accuracy, s.best.accuracy);
    }

    #[test]
    fn single_member_average_equals_best() {
        let agg = aggregate(&[rec("a", 3, 0, 0.3, 0.7, 0.1)]).unwrap();
        assert_eq!(agg.samples[0].avg, agg.samples[0].best);
    }

    #[test]
    fn method_summary_mean_and_std() {
        let recs = vec![rec("a", 0, 0, 0.2, 1.0, 0.0), rec("a", 1, 0, 0.6, 0.0, 0.0), rec("b", 0, 0, 1.0, 1.0, 0.0)];
        let agg = aggregate(&recs).unwrap();
        assert_eq!(agg.methods.len(), 2);
        let a = &agg.methods[0];
        assert_eq!(a.samples, 2);
        assert!((a.best.precision.mean - 0.4).abs() < 1e-15);
        assert!((a.best.precision.std - 0.2).abs() < 1e-15);
        assert_eq!(a.best.recall.mean, 0.5);
        assert_eq!(agg.methods[1].best.recall.std, 0.0);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(aggregate::<f64>(&[]), Err(ScoreError::Empty));
    }

    #[test]
    fn roc_means_per_member() {
        let fam = ThresholdFamily::new(FamilyKind::Standard, 300, 500, 5, 1).unwrap();
        let recs = vec![
            rec("a", 0, 0, 0.0, 1.0, 0.0),
            rec("a", 1, 0, 0.0, 0.5, 0.2),
            rec("a", 0, 1, 0.0, 0.0, 0.4),
            rec("a", 1, 1, 0.0, 1.0, 0.0),
        ];
        let pts = roc_points(&recs, &fam).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!((pts[0].fpr, pts[0].recall), (0.1, 0.75));
        assert_eq!((pts[1].fpr, pts[1].recall), (0.2, 0.5));
    }

    #[test]
    fn roc_rejects_incomplete_or_mixed_sets() {
        let fam = ThresholdFamily::new(FamilyKind::Standard, 300, 500, 5, 1).unwrap();
        let missing = vec![rec("a", 0, 0, 0.0, 1.0, 0.0), rec("a", 1, 0, 0.0, 1.0, 0.0), rec("a", 0, 1, 0.0, 1.0, 0.0)];
        assert!(matches!(roc_points(&missing, &fam), Err(ScoreError::Incomplete(_))));
        let mixed = vec![rec("a", 0, 0, 0.0, 1.0, 0.0), rec("b", 0, 1, 0.0, 1.0, 0.0)];
        assert!(matches!(roc_points(&mixed, &fam), Err(ScoreError::Incomplete(_))));
        assert_eq!(roc_curves(&mixed, &fam).unwrap_err(), ScoreError::Incomplete("member m=1 has 0 of 1 samples".into()));
    }
}
