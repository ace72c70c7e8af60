//! Confusion-matrix metrics and the adjusted Rand index.
//!
//! Every function takes the tallies of one comparison plus a
//! [`ZeroDivisionPolicy`] and returns a [`Score`]. When a formula's
//! denominator vanishes the policy decides the outcome; the returned score
//! then carries `defined == false`.
//!
//! The hard-label AUC formula, `1 - (FPR + FNR) / 2`, is algebraically the
//! same quantity as balanced accuracy. The two are implemented from their own
//! expressions and the coincidence is checked in tests rather than shared in
//! code.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mask::{ConfusionCounts, ContingencyTable};

/// What a metric returns when its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ZeroDivisionPolicy {
    /// 1.0 when the quantity in the denominator is absent from both masks,
    /// 0.0 when only one mask lacks it.
    #[default]
    PerfectOnEmptyAgreement,
    ScoreZero,
    ScoreOne,
    /// Fail with [`Error::MetricUndefined`].
    Error,
}

impl ZeroDivisionPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PerfectOnEmptyAgreement => "perfect-empty",
            Self::ScoreZero => "zero",
            Self::ScoreOne => "one",
            Self::Error => "error",
        }
    }

    fn substitute(self, metric: &str, denominator: &str, empty_agreement: bool) -> Result<f64> {
        match self {
            Self::PerfectOnEmptyAgreement => Ok(if empty_agreement { 1.0 } else { 0.0 }),
            Self::ScoreZero => Ok(0.0),
            Self::ScoreOne => Ok(1.0),
            Self::Error => Err(Error::MetricUndefined {
                metric: metric.to_string(),
                denominator: denominator.to_string(),
            }),
        }
    }

    fn resolve(self, metric: &str, denominator: &str, empty_agreement: bool) -> Result<Score> {
        self.substitute(metric, denominator, empty_agreement)
            .map(Score::substituted)
    }
}

impl fmt::Display for ZeroDivisionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ZeroDivisionPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "perfect-empty" => Ok(Self::PerfectOnEmptyAgreement),
            "zero" => Ok(Self::ScoreZero),
            "one" => Ok(Self::ScoreOne),
            "error" => Ok(Self::Error),
            other => Err(format!(
                "unknown policy `{other}` (expected perfect-empty, zero, one or error)"
            )),
        }
    }
}

/// A metric value. `defined` is false when the zero-division policy supplied
/// the value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub value: f64,
    pub defined: bool,
}

impl Score {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            defined: true,
        }
    }

    pub fn substituted(value: f64) -> Self {
        Self {
            value,
            defined: false,
        }
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    num as f64 / den as f64
}

/// Dice similarity coefficient (F1): `2TP / (2TP + FP + FN)`.
pub fn dice(cm: &ConfusionCounts, policy: ZeroDivisionPolicy) -> Result<Score> {
    let tp = cm.true_positive;
    let den = 2 * tp + cm.false_positive + cm.false_negative;
    if den == 0 {
        return policy.resolve("dice", "2tp+fp+fn", true);
    }
    Ok(Score::new(ratio(2 * tp, den)))
}

/// Intersection over union (Jaccard): `TP / (TP + FP + FN)`.
pub fn iou(cm: &ConfusionCounts, policy: ZeroDivisionPolicy) -> Result<Score> {
    let tp = cm.true_positive;
    let den = tp + cm.false_positive + cm.false_negative;
    if den == 0 {
        return policy.resolve("iou", "tp+fp+fn", true);
    }
    Ok(Score::new(ratio(tp, den)))
}

/// True positive rate: `TP / (TP + FN)`.
pub fn sensitivity(cm: &ConfusionCounts, policy: ZeroDivisionPolicy) -> Result<Score> {
    let den = cm.true_positive + cm.false_negative;
    if den == 0 {
        return policy.resolve("sensitivity", "tp+fn", cm.false_positive == 0);
    }
    Ok(Score::new(ratio(cm.true_positive, den)))
}

/// True negative rate: `TN / (TN + FP)`.
pub fn specificity(cm: &ConfusionCounts, policy: ZeroDivisionPolicy) -> Result<Score> {
    let den = cm.true_negative + cm.false_positive;
    if den == 0 {
        return policy.resolve("specificity", "tn+fp", cm.false_negative == 0);
    }
    Ok(Score::new(ratio(cm.true_negative, den)))
}

/// Positive predictive value: `TP / (TP + FP)`.
pub fn precision(cm: &ConfusionCounts, policy: ZeroDivisionPolicy) -> Result<Score> {
    let den = cm.true_positive + cm.false_positive;
    if den == 0 {
        return policy.resolve("precision", "tp+fp", cm.false_negative == 0);
    }
    Ok(Score::new(ratio(cm.true_positive, den)))
}

/// Pixel accuracy (Rand index of the binary pair): `(TP + TN) / n`.
pub fn accuracy(cm: &ConfusionCounts, policy: ZeroDivisionPolicy) -> Result<Score> {
    let n = cm.total();
    if n == 0 {
        return policy.resolve("accuracy", "tp+tn+fp+fn", true);
    }
    Ok(Score::new(ratio(cm.true_positive + cm.true_negative, n)))
}

/// Mean of [`sensitivity`] and [`specificity`], each under `policy`.
pub fn balanced_accuracy(cm: &ConfusionCounts, policy: ZeroDivisionPolicy) -> Result<Score> {
    let sens = sensitivity(cm, policy)?;
    let spec = specificity(cm, policy)?;
    Ok(Score {
        value: (sens.value + spec.value) / 2.0,
        defined: sens.defined && spec.defined,
    })
}

/// Hard-label AUC: `1 - (FP / (FP + TN) + FN / (FN + TP)) / 2`.
///
/// A vanishing error-rate denominator takes the policy value for the
/// matching rate (specificity or sensitivity) and contributes its complement.
pub fn auc_binary(cm: &ConfusionCounts, policy: ZeroDivisionPolicy) -> Result<Score> {
    let (tp, fp, tn, fn_) = (
        cm.true_positive,
        cm.false_positive,
        cm.true_negative,
        cm.false_negative,
    );
    let mut defined = true;
    let fpr = if fp + tn == 0 {
        defined = false;
        1.0 - policy.substitute("auc", "fp+tn", fn_ == 0)?
    } else {
        ratio(fp, fp + tn)
    };
    let fnr = if fn_ + tp == 0 {
        defined = false;
        1.0 - policy.substitute("auc", "fn+tp", fp == 0)?
    } else {
        ratio(fn_, fn_ + tp)
    };
    Ok(Score {
        value: 1.0 - 0.5 * (fpr + fnr),
        defined,
    })
}

/// Cohen's kappa with chance agreement
/// `f_c = ((TN + FN)(TN + FP) + (FP + TP)(FN + TP)) / n`.
///
/// Evaluated as `(n(TP + TN) - n f_c) / (n^2 - n f_c)` in 128-bit integers so
/// the degenerate case is detected exactly.
pub fn kappa(cm: &ConfusionCounts, policy: ZeroDivisionPolicy) -> Result<Score> {
    let tp = cm.true_positive as i128;
    let fp = cm.false_positive as i128;
    let tn = cm.true_negative as i128;
    let fn_ = cm.false_negative as i128;
    let n = tp + fp + tn + fn_;
    let chance = (tn + fn_) * (tn + fp) + (fp + tp) * (fn_ + tp);
    let num = n * (tp + tn) - chance;
    let den = n * n - chance;
    if den == 0 {
        return policy.resolve("kappa", "n-f_c", fp == 0 && fn_ == 0);
    }
    Ok(Score::new(num as f64 / den as f64))
}

fn pairs(x: u64) -> i128 {
    let x = x as i128;
    x * (x - 1) / 2
}

/// Adjusted Rand index over a full contingency table.
///
/// All pair counts are exact 128-bit integers; the expression is scaled by
/// `2 C(n, 2)` so only the final division happens in floating point.
pub fn adjusted_rand_index(table: &ContingencyTable, policy: ZeroDivisionPolicy) -> Result<Score> {
    let index: i128 = table.counts().iter().map(|&c| pairs(c)).sum();
    let sum_rows: i128 = table.row_sums().iter().map(|&a| pairs(a)).sum();
    let sum_cols: i128 = table.col_sums().iter().map(|&b| pairs(b)).sum();
    let total_pairs = pairs(table.total());
    // (index - expected) / (max - expected), times 2 * total_pairs
    let num = 2 * (index * total_pairs - sum_rows * sum_cols);
    let den = (sum_rows + sum_cols) * total_pairs - 2 * sum_rows * sum_cols;
    if den == 0 {
        return policy.resolve("adjusted_rand_index", "max-expected", table.is_diagonal());
    }
    Ok(Score::new(num as f64 / den as f64))
}

/// Volumetric similarity: `1 - |FN - FP| / (2TP + FP + FN)`.
pub fn volumetric_similarity(cm: &ConfusionCounts, policy: ZeroDivisionPolicy) -> Result<Score> {
    let den = 2 * cm.true_positive + cm.false_positive + cm.false_negative;
    if den == 0 {
        return policy.resolve("volumetric_similarity", "2tp+fp+fn", true);
    }
    let diff = cm.false_negative.abs_diff(cm.false_positive);
    Ok(Score::new(1.0 - ratio(diff, den)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: ZeroDivisionPolicy = ZeroDivisionPolicy::PerfectOnEmptyAgreement;

    fn cm1() -> ConfusionCounts {
        ConfusionCounts::new(2, 1, 4, 1)
    }

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn cm1_values() {
        let cm = cm1();
        close(dice(&cm, P).unwrap().value, 4.0 / 6.0);
        close(iou(&cm, P).unwrap().value, 0.5);
        close(sensitivity(&cm, P).unwrap().value, 2.0 / 3.0);
        close(specificity(&cm, P).unwrap().value, 0.8);
        close(precision(&cm, P).unwrap().value, 2.0 / 3.0);
        close(accuracy(&cm, P).unwrap().value, 0.75);
        close(
            balanced_accuracy(&cm, P).unwrap().value,
            (2.0 / 3.0 + 0.8) / 2.0,
        );
        close(
            auc_binary(&cm, P).unwrap().value,
            1.0 - 0.5 * (0.2 + 1.0 / 3.0),
        );
        close(kappa(&cm, P).unwrap().value, 1.75 / 3.75);
        close(volumetric_similarity(&cm, P).unwrap().value, 1.0);
        let table = ContingencyTable::from_counts(vec![0, 1], vec![4, 1, 1, 2]).unwrap();
        let expected = 169.0 / 28.0;
        close(
            adjusted_rand_index(&table, P).unwrap().value,
            (7.0 - expected) / (13.0 - expected),
        );
    }

    #[test]
    fn perfect_and_disjoint() {
        let same = ConfusionCounts::new(3, 0, 5, 0);
        for f in [dice, iou, sensitivity, specificity, precision, accuracy] {
            assert_eq!(f(&same, P).unwrap(), Score::new(1.0));
        }
        assert_eq!(balanced_accuracy(&same, P).unwrap().value, 1.0);
        assert_eq!(auc_binary(&same, P).unwrap().value, 1.0);
        assert_eq!(kappa(&same, P).unwrap().value, 1.0);

        let disjoint = ConfusionCounts::new(0, 2, 3, 2);
        assert_eq!(iou(&disjoint, P).unwrap().value, 0.0);
        assert_eq!(sensitivity(&disjoint, P).unwrap().value, 0.0);
        assert_eq!(precision(&disjoint, P).unwrap().value, 0.0);

        let complement = ConfusionCounts::new(0, 3, 0, 5);
        assert_eq!(accuracy(&complement, P).unwrap().value, 0.0);
        assert_eq!(balanced_accuracy(&complement, P).unwrap().value, 0.0);
        assert_eq!(
            specificity(&ConfusionCounts::new(1, 2, 0, 0), P)
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn volumetric_similarity_unbalanced() {
        let cm = ConfusionCounts::new(0, 3, 0, 1);
        close(volumetric_similarity(&cm, P).unwrap().value, 0.5);
    }

    #[test]
    fn empty_agreement_scores_one() {
        let empty = ConfusionCounts::new(0, 0, 9, 0);
        for f in [dice, iou, sensitivity, precision, volumetric_similarity] {
            assert_eq!(f(&empty, P).unwrap(), Score::substituted(1.0));
        }
        assert_eq!(
            balanced_accuracy(&empty, P).unwrap(),
            Score::substituted(1.0)
        );
        assert_eq!(auc_binary(&empty, P).unwrap(), Score::substituted(1.0));
    }

    #[test]
    fn one_sided_absence_scores_zero() {
        // prediction has the class, truth does not
        let cm = ConfusionCounts::new(0, 2, 6, 0);
        assert_eq!(sensitivity(&cm, P).unwrap(), Score::substituted(0.0));
        // truth has the class, prediction does not
        let cm = ConfusionCounts::new(0, 0, 6, 2);
        assert_eq!(precision(&cm, P).unwrap(), Score::substituted(0.0));
        // truth is all positive, prediction has negatives
        let cm = ConfusionCounts::new(3, 0, 0, 1);
        assert_eq!(specificity(&cm, P).unwrap(), Score::substituted(0.0));
    }

    #[test]
    fn other_policies() {
        let empty = ConfusionCounts::new(0, 0, 4, 0);
        assert_eq!(
            dice(&empty, ZeroDivisionPolicy::ScoreZero).unwrap(),
            Score::substituted(0.0)
        );
        assert_eq!(
            dice(&empty, ZeroDivisionPolicy::ScoreOne).unwrap(),
            Score::substituted(1.0)
        );
        match dice(&empty, ZeroDivisionPolicy::Error) {
            Err(Error::MetricUndefined {
                metric,
                denominator,
            }) => {
                assert_eq!(metric, "dice");
                assert_eq!(denominator, "2tp+fp+fn");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(auc_binary(&empty, ZeroDivisionPolicy::Error).is_err());
        // policy never intervenes when denominators are positive
        assert_eq!(
            dice(&cm1(), ZeroDivisionPolicy::Error).unwrap(),
            dice(&cm1(), P).unwrap()
        );
    }

    #[test]
    fn kappa_degenerate_single_cluster() {
        let all_pos = ConfusionCounts::new(8, 0, 0, 0);
        assert_eq!(kappa(&all_pos, P).unwrap(), Score::substituted(1.0));
        assert!(kappa(&all_pos, ZeroDivisionPolicy::Error).is_err());
    }

    #[test]
    fn ari_degenerate_and_diagonal() {
        let single = ContingencyTable::from_counts(vec![0], vec![5]).unwrap();
        assert_eq!(
            adjusted_rand_index(&single, P).unwrap(),
            Score::substituted(1.0)
        );
        let diag =
            ContingencyTable::from_counts(vec![0, 1, 2], vec![3, 0, 0, 0, 2, 0, 0, 0, 4]).unwrap();
        assert_eq!(adjusted_rand_index(&diag, P).unwrap(), Score::new(1.0));
        // both masks constant but on different labels: max == expected, not diagonal
        let split = ContingencyTable::from_counts(vec![0, 1], vec![0, 2, 0, 0]).unwrap();
        assert_eq!(
            adjusted_rand_index(&split, P).unwrap(),
            Score::substituted(0.0)
        );
    }

    #[test]
    fn ari_large_counts_stay_exact() {
        // 512^3 voxels split across three classes
        let n: u64 = 512 * 512 * 512;
        let a = n / 2;
        let b = n / 3;
        let c = n - a - b;
        let table =
            ContingencyTable::from_counts(vec![0, 1, 2], vec![a, 0, 0, 0, b, 0, 0, 0, c]).unwrap();
        assert_eq!(adjusted_rand_index(&table, P).unwrap().value, 1.0);
    }

    #[test]
    fn policy_parses() {
        for p in [
            ZeroDivisionPolicy::PerfectOnEmptyAgreement,
            ZeroDivisionPolicy::ScoreZero,
            ZeroDivisionPolicy::ScoreOne,
            ZeroDivisionPolicy::Error,
        ] {
            assert_eq!(p.as_str().parse::<ZeroDivisionPolicy>().unwrap(), p);
        }
        assert!("maybe".parse::<ZeroDivisionPolicy>().is_err());
    }
}
