//! Test-only helpers: random masks and from-scratch reference computations
//! that work directly on raw label arrays, independent of the library's
//! confusion/contingency/distance-transform code.

#![allow(dead_code)]

use rand::Rng;
use segeval::LabelMask;

pub fn random_labels<R: Rng>(rng: &mut R, n: usize, max_label: u16, density: f64) -> Vec<u16> {
    (0..n)
        .map(|_| {
            if max_label == 0 || rng.gen::<f64>() >= density {
                0
            } else {
                rng.gen_range(1..=max_label)
            }
        })
        .collect()
}

pub fn random_shape_2d<R: Rng>(rng: &mut R, max_extent: usize) -> Vec<usize> {
    vec![rng.gen_range(1..=max_extent), rng.gen_range(1..=max_extent)]
}

pub fn random_shape_3d<R: Rng>(rng: &mut R, max_extent: usize) -> Vec<usize> {
    (0..3).map(|_| rng.gen_range(1..=max_extent)).collect()
}

pub fn random_pair<R: Rng>(rng: &mut R, shape: &[usize], max_label: u16) -> (LabelMask, LabelMask) {
    let n: usize = shape.iter().product();
    let density = rng.gen_range(0.05..0.95);
    let t = random_labels(rng, n, max_label, density);
    let p = random_labels(rng, n, max_label, density);
    (
        LabelMask::new(shape, t).unwrap(),
        LabelMask::new(shape, p).unwrap(),
    )
}

/// (tp, fp, tn, fn) counted by a pixel loop.
pub fn counts(truth: &[u16], pred: &[u16], class: u16) -> (f64, f64, f64, f64) {
    let (mut tp, mut fp, mut tn, mut fn_) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..truth.len() {
        let t = truth[i] == class;
        let p = pred[i] == class;
        if t && p {
            tp += 1;
        } else if p {
            fp += 1;
        } else if t {
            fn_ += 1;
        } else {
            tn += 1;
        }
    }
    (tp as f64, fp as f64, tn as f64, fn_ as f64)
}

/// Reference value of a confusion metric, or `None` when a denominator of
/// the formula is zero.
pub fn overlap_oracle(metric: &str, truth: &[u16], pred: &[u16], class: u16) -> Option<f64> {
    let (tp, fp, tn, fn_) = counts(truth, pred, class);
    let n = tp + fp + tn + fn_;
    let div = |a: f64, b: f64| if b == 0.0 { None } else { Some(a / b) };
    match metric {
        "dice" => div(2.0 * tp, 2.0 * tp + fp + fn_),
        "iou" => div(tp, tp + fp + fn_),
        "sensitivity" => div(tp, tp + fn_),
        "specificity" => div(tn, tn + fp),
        "precision" => div(tp, tp + fp),
        "accuracy" => div(tp + tn, tp + tn + fn_ + fp),
        "balanced_accuracy" => Some((div(tp, tp + fn_)? + div(tn, tn + fp)?) / 2.0),
        "auc" => Some(1.0 - 0.5 * (div(fp, fp + tn)? + div(fn_, fn_ + tp)?)),
        "kappa" => {
            let fc = ((tn + fn_) * (tn + fp) + (fp + tp) * (fn_ + tp)) / n;
            div((tp + tn) - fc, n - fc)
        }
        "volumetric_similarity" => div(2.0 * tp + fp + fn_ - (fn_ - fp).abs(), 2.0 * tp + fp + fn_),
        other => panic!("no oracle for {other}"),
    }
}

/// Adjusted Rand index by enumerating every unordered pixel pair.
pub fn ari_pair_oracle(truth: &[u16], pred: &[u16]) -> Option<f64> {
    let n = truth.len();
    let (mut both, mut same_t, mut same_p, mut total) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let st = truth[i] == truth[j];
            let sp = pred[i] == pred[j];
            total += 1;
            same_t += st as u64;
            same_p += sp as u64;
            both += (st && sp) as u64;
        }
    }
    if total == 0 {
        return None;
    }
    let expected = same_t as f64 * same_p as f64 / total as f64;
    let max = 0.5 * (same_t + same_p) as f64;
    let den = max - expected;
    if den.abs() < 1e-9 {
        None
    } else {
        Some((both as f64 - expected) / den)
    }
}

pub const OVERLAP_METRICS: [&str; 10] = [
    "accuracy",
    "auc",
    "balanced_accuracy",
    "dice",
    "iou",
    "kappa",
    "precision",
    "sensitivity",
    "specificity",
    "volumetric_similarity",
];

pub fn coords(shape: &[usize], bits: &[bool], spacing: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for (i, &b) in bits.iter().enumerate() {
        if !b {
            continue;
        }
        let mut rem = i;
        let mut c = vec![0.0; shape.len()];
        for axis in (0..shape.len()).rev() {
            c[axis] = (rem % shape[axis]) as f64 * spacing[axis];
            rem /= shape[axis];
        }
        out.push(c);
    }
    out
}

fn nearest(p: &[f64], set: &[Vec<f64>]) -> f64 {
    set.iter()
        .map(|q| {
            p.iter()
                .zip(q)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// (hausdorff, avg_hausdorff) by brute force on coordinate lists.
pub fn hausdorff_oracle(
    shape: &[usize],
    truth: &[bool],
    pred: &[bool],
    spacing: &[f64],
) -> (f64, f64) {
    let a = coords(shape, truth, spacing);
    let b = coords(shape, pred, spacing);
    let ab: Vec<f64> = a.iter().map(|p| nearest(p, &b)).collect();
    let ba: Vec<f64> = b.iter().map(|p| nearest(p, &a)).collect();
    let h = |d: &[f64]| d.iter().cloned().fold(0.0, f64::max);
    let m = |d: &[f64]| d.iter().sum::<f64>() / d.len() as f64;
    (h(&ab).max(h(&ba)), m(&ab).max(m(&ba)))
}

/// Distance from every cell to the nearest true cell, by brute force.
pub fn distance_field_oracle(shape: &[usize], bits: &[bool], spacing: &[f64]) -> Vec<f64> {
    let fg = coords(shape, bits, spacing);
    let all = vec![true; bits.len()];
    coords(shape, &all, spacing)
        .iter()
        .map(|p| nearest(p, &fg))
        .collect()
}

/// `|a - b| <= tol * max(|a|, |b|)`.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
