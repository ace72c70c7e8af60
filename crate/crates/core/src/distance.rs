//! Hausdorff and average Hausdorff distances between foreground point sets.
//!
//! Two interchangeable routes compute the directed terms:
//!
//! * a brute-force `O(|A| |B|)` nearest-point search, and
//! * an exact Euclidean distance transform of one mask (separable lower
//!   envelope of parabolas over squared distances, one pass per axis) that is
//!   then sampled at the other mask's foreground cells.
//!
//! Point sets hold every foreground cell, not only boundary cells. Distances
//! are in physical units given by a per-axis [`Spacing`].

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mask::BinaryMask;

/// Physical size of one cell along each axis, in shape order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spacing(Vec<f64>);

impl Spacing {
    pub fn new(per_axis: Vec<f64>) -> Result<Self> {
        let rank = per_axis.len();
        if !(2..=3).contains(&rank) || per_axis.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::SpacingInvalid {
                spacing: per_axis,
                rank,
            });
        }
        Ok(Self(per_axis))
    }

    pub fn unit(rank: usize) -> Self {
        Self(vec![1.0; rank])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Every component multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|s| s * factor).collect())
    }

    fn check_rank(&self, rank: usize) -> Result<()> {
        if self.0.len() != rank {
            return Err(Error::SpacingInvalid {
                spacing: self.0.clone(),
                rank,
            });
        }
        Ok(())
    }
}

/// Which route [`hausdorff`] and [`avg_hausdorff`] use for the directed terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum HausdorffAlgo {
    Naive,
    #[default]
    DistanceTransform,
}

impl HausdorffAlgo {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Naive => "naive",
            Self::DistanceTransform => "edt",
        }
    }
}

impl fmt::Display for HausdorffAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HausdorffAlgo {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Self::Naive),
            "edt" => Ok(Self::DistanceTransform),
            other => Err(format!(
                "unknown Hausdorff algorithm `{other}` (expected naive or edt)"
            )),
        }
    }
}

/// Foreground cell coordinates of a mask, in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    shape: Vec<usize>,
    spacing: Spacing,
    coords: Vec<usize>,
    linear: Vec<usize>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.linear.len()
    }

    pub fn is_empty(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn spacing(&self) -> &Spacing {
        &self.spacing
    }

    /// Coordinates of each point, one slice of length `rank` per point.
    pub fn points(&self) -> impl Iterator<Item = &[usize]> {
        self.coords.chunks_exact(self.rank())
    }

    /// Row-major flat index of each point in the source grid.
    pub fn linear_indices(&self) -> &[usize] {
        &self.linear
    }

    fn physical(&self) -> Vec<f64> {
        let s = self.spacing.as_slice();
        self.coords
            .chunks_exact(self.rank())
            .flat_map(|p| p.iter().zip(s).map(|(&c, &sp)| c as f64 * sp))
            .collect()
    }
}

/// Collects every true cell of `mask`.
pub fn foreground_points(mask: &BinaryMask, spacing: &Spacing) -> Result<PointSet> {
    let shape = mask.shape().to_vec();
    spacing.check_rank(shape.len())?;
    let rank = shape.len();
    let mut coords = Vec::new();
    let mut linear = Vec::new();
    let mut idx = vec![0usize; rank];
    for (i, &bit) in mask.bits().iter().enumerate() {
        if bit {
            coords.extend_from_slice(&idx);
            linear.push(i);
        }
        // odometer increment over the row-major index
        for axis in (0..rank).rev() {
            idx[axis] += 1;
            if idx[axis] < shape[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
    Ok(PointSet {
        shape,
        spacing: spacing.clone(),
        coords,
        linear,
    })
}

fn check_sets(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.spacing != b.spacing || a.rank() != b.rank() {
        return Err(Error::SpacingMismatch {
            a: a.spacing.as_slice().to_vec(),
            b: b.spacing.as_slice().to_vec(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyPointSet { side: "a".into() });
    }
    if b.is_empty() {
        return Err(Error::EmptyPointSet { side: "b".into() });
    }
    Ok(())
}

/// Euclidean distance from every point of `a` to its nearest point of `b`.
fn nearest_distances_naive(a: &PointSet, b: &PointSet) -> Vec<f64> {
    let rank = a.rank();
    let pa = a.physical();
    let pb = b.physical();
    pa.chunks_exact(rank)
        .map(|p| {
            pb.chunks_exact(rank)
                .map(|q| p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .collect()
}

/// `max_{a in A} min_{b in B} |a - b|` by exhaustive search.
pub fn directed_hausdorff_naive(a: &PointSet, b: &PointSet) -> Result<f64> {
    check_sets(a, b)?;
    Ok(nearest_distances_naive(a, b)
        .into_iter()
        .fold(0.0, f64::max))
}

/// `(1/|A|) sum_{a in A} min_{b in B} |a - b|` by exhaustive search.
pub fn directed_avg_naive(a: &PointSet, b: &PointSet) -> Result<f64> {
    check_sets(a, b)?;
    let d = nearest_distances_naive(a, b);
    Ok(d.iter().sum::<f64>() / d.len() as f64)
}

/// Exact Euclidean distance from each cell to the nearest foreground cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl DistanceField {
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Row-major distances; `f64::INFINITY` everywhere when the source mask
    /// had no foreground.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, linear_index: usize) -> f64 {
        self.values[linear_index]
    }
}

/// Lower envelope of the parabolas `(x - x_q)^2 + f(q)` sampled at every cell
/// of one line, with `x_i = i * step`. Infinite entries contribute no
/// parabola; a line without finite entries stays infinite.
fn envelope_1d(line: &mut [f64], step: f64, sites: &mut Vec<usize>, bounds: &mut Vec<f64>) {
    sites.clear();
    bounds.clear();
    let pos = |i: usize| i as f64 * step;
    for q in 0..line.len() {
        let fq = line[q];
        if !fq.is_finite() {
            continue;
        }
        let xq = pos(q);
        let mut start = f64::NEG_INFINITY;
        while let Some(&v) = sites.last() {
            let xv = pos(v);
            let s = ((fq + xq * xq) - (line[v] + xv * xv)) / (2.0 * (xq - xv));
            if s <= *bounds.last().unwrap() {
                sites.pop();
                bounds.pop();
            } else {
                start = s;
                break;
            }
        }
        sites.push(q);
        bounds.push(start);
    }
    if sites.is_empty() {
        return;
    }
    let heights: Vec<f64> = sites.iter().map(|&v| line[v]).collect();
    let mut k = 0;
    for (p, out) in line.iter_mut().enumerate() {
        let xp = pos(p);
        while k + 1 < sites.len() && bounds[k + 1] < xp {
            k += 1;
        }
        let d = xp - pos(sites[k]);
        *out = d * d + heights[k];
    }
}

fn transform_axis(sq: &mut [f64], shape: &[usize], axis: usize, step: f64) {
    let len = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    if len == 1 {
        return;
    }
    if stride == 1 {
        sq.par_chunks_mut(len).for_each_init(
            || (Vec::with_capacity(len), Vec::with_capacity(len)),
            |(sites, bounds), line| envelope_1d(line, step, sites, bounds),
        );
        return;
    }
    let block = len * stride;
    let lines = sq.len() / len;
    let src: &[f64] = sq;
    let transformed: Vec<Vec<f64>> = (0..lines)
        .into_par_iter()
        .map_init(
            || (Vec::with_capacity(len), Vec::with_capacity(len)),
            |(sites, bounds), line_idx| {
                let base = (line_idx / stride) * block + line_idx % stride;
                let mut line: Vec<f64> = (0..len).map(|i| src[base + i * stride]).collect();
                envelope_1d(&mut line, step, sites, bounds);
                line
            },
        )
        .collect();
    for (line_idx, line) in transformed.into_iter().enumerate() {
        let base = (line_idx / stride) * block + line_idx % stride;
        for (i, v) in line.into_iter().enumerate() {
            sq[base + i * stride] = v;
        }
    }
}

/// Exact Euclidean distance transform of `mask` under `spacing`.
pub fn distance_transform(mask: &BinaryMask, spacing: &Spacing) -> Result<DistanceField> {
    let shape = mask.shape().to_vec();
    spacing.check_rank(shape.len())?;
    let mut sq: Vec<f64> = mask
        .bits()
        .iter()
        .map(|&b| if b { 0.0 } else { f64::INFINITY })
        .collect();
    for (axis, &step) in spacing.as_slice().iter().enumerate() {
        transform_axis(&mut sq, &shape, axis, step);
    }
    let values = sq.into_iter().map(f64::sqrt).collect();
    Ok(DistanceField { shape, values })
}

/// `max_{a in A} field(a)`: the directed Hausdorff term against the set the
/// field was computed from.
pub fn directed_hausdorff_field(a: &PointSet, field: &DistanceField) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptyPointSet { side: "a".into() });
    }
    Ok(a.linear_indices()
        .iter()
        .map(|&i| field.get(i))
        .fold(0.0, f64::max))
}

/// `(1/|A|) sum_{a in A} field(a)`.
pub fn directed_avg_field(a: &PointSet, field: &DistanceField) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptyPointSet { side: "a".into() });
    }
    let sum: f64 = a.linear_indices().iter().map(|&i| field.get(i)).sum();
    Ok(sum / a.len() as f64)
}

#[derive(Clone, Copy)]
enum Reduce {
    Max,
    Mean,
}

fn symmetric(
    truth: &BinaryMask,
    pred: &BinaryMask,
    spacing: &Spacing,
    algo: HausdorffAlgo,
    reduce: Reduce,
) -> Result<f64> {
    if truth.shape() != pred.shape() {
        return Err(Error::ShapeMismatch {
            truth: truth.shape().to_vec(),
            pred: pred.shape().to_vec(),
        });
    }
    let a = foreground_points(truth, spacing)?;
    let b = foreground_points(pred, spacing)?;
    if a.is_empty() {
        return Err(Error::EmptyPointSet {
            side: "truth".into(),
        });
    }
    if b.is_empty() {
        return Err(Error::EmptyPointSet {
            side: "pred".into(),
        });
    }
    let (ab, ba) = match algo {
        HausdorffAlgo::Naive => match reduce {
            Reduce::Max => (
                directed_hausdorff_naive(&a, &b)?,
                directed_hausdorff_naive(&b, &a)?,
            ),
            Reduce::Mean => (directed_avg_naive(&a, &b)?, directed_avg_naive(&b, &a)?),
        },
        HausdorffAlgo::DistanceTransform => {
            let (field_a, field_b) = rayon::join(
                || distance_transform(truth, spacing),
                || distance_transform(pred, spacing),
            );
            let (field_a, field_b) = (field_a?, field_b?);
            match reduce {
                Reduce::Max => (
                    directed_hausdorff_field(&a, &field_b)?,
                    directed_hausdorff_field(&b, &field_a)?,
                ),
                Reduce::Mean => (
                    directed_avg_field(&a, &field_b)?,
                    directed_avg_field(&b, &field_a)?,
                ),
            }
        }
    };
    Ok(ab.max(ba))
}

/// Symmetric Hausdorff distance `max(h(A, B), h(B, A))` between the
/// foreground cells of `truth` (A) and `pred` (B).
///
/// Fails with [`Error::EmptyPointSet`] when either mask has no foreground.
pub fn hausdorff(
    truth: &BinaryMask,
    pred: &BinaryMask,
    spacing: &Spacing,
    algo: HausdorffAlgo,
) -> Result<f64> {
    symmetric(truth, pred, spacing, algo, Reduce::Max)
}

/// Average Hausdorff distance `max(d(A, B), d(B, A))`, where `d` is the mean
/// nearest-point distance.
pub fn avg_hausdorff(
    truth: &BinaryMask,
    pred: &BinaryMask,
    spacing: &Spacing,
    algo: HausdorffAlgo,
) -> Result<f64> {
    symmetric(truth, pred, spacing, algo, Reduce::Mean)
}
