//! Mask representations and the pixel-count statistics every overlap metric
//! is built from.
//!
//! A [`LabelMask`] is an immutable 2D or 3D grid of 16-bit class labels stored
//! flat in row-major order. Comparing two masks either reduces them to a
//! one-vs-rest [`BinaryMask`] pair and tallies a [`ConfusionCounts`], or keeps
//! every class and tallies a full [`ContingencyTable`].

use crate::error::{Error, Result};

/// Largest representable class label.
pub const MAX_LABEL: u16 = u16::MAX;

fn check_shape(shape: &[usize]) -> Result<usize> {
    if !(2..=3).contains(&shape.len()) || shape.contains(&0) {
        return Err(Error::ShapeInvalid {
            shape: shape.to_vec(),
        });
    }
    shape
        .iter()
        .try_fold(1usize, |acc, &e| acc.checked_mul(e))
        .ok_or_else(|| Error::ShapeInvalid {
            shape: shape.to_vec(),
        })
}

/// Integer element types accepted as class labels.
///
/// Only integer types implement this trait, so floating-point probability
/// maps cannot be turned into a mask by accident.
pub trait LabelValue: Copy {
    fn to_label(self) -> std::result::Result<u16, i128>;
}

macro_rules! impl_label_value {
    ($($t:ty),*) => {$(
        impl LabelValue for $t {
            #[inline]
            fn to_label(self) -> std::result::Result<u16, i128> {
                u16::try_from(self).map_err(|_| self as i128)
            }
        }
    )*};
}

impl_label_value!(u8, u16, u32, u64, usize, i8, i16, i32, i64, isize);

/// An n-dimensional (rank 2 or 3) grid of class labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMask {
    shape: Vec<usize>,
    data: Vec<u16>,
}

impl LabelMask {
    /// Builds a mask from an extent list and flat row-major labels.
    pub fn new(shape: &[usize], data: Vec<u16>) -> Result<Self> {
        let len = check_shape(shape)?;
        if data.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: data.len(),
            });
        }
        Ok(Self {
            shape: shape.to_vec(),
            data,
        })
    }

    /// Builds a mask from any integer label slice, rejecting values outside
    /// `0..=65535`.
    pub fn from_values<T: LabelValue>(shape: &[usize], values: &[T]) -> Result<Self> {
        let len = check_shape(shape)?;
        if values.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: values.len(),
            });
        }
        let data = values
            .iter()
            .map(|v| v.to_label().map_err(|label| Error::LabelInvalid { label }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false for a valid mask; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Sorted distinct labels present in this mask.
    pub fn labels(&self) -> Vec<u16> {
        let mut seen = vec![false; MAX_LABEL as usize + 1];
        for &l in &self.data {
            seen[l as usize] = true;
        }
        collect_seen(&seen)
    }

    /// Number of pixels carrying `label`.
    pub fn count(&self, label: u16) -> u64 {
        self.data.iter().filter(|&&l| l == label).count() as u64
    }

    /// One-vs-rest reduction: `bits[i] == (data[i] == positive)`.
    pub fn binarize(&self, positive: u16) -> BinaryMask {
        BinaryMask {
            shape: self.shape.clone(),
            bits: self.data.iter().map(|&l| l == positive).collect(),
        }
    }
}

fn collect_seen(seen: &[bool]) -> Vec<u16> {
    seen.iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(l, _)| l as u16)
        .collect()
}

/// Free-function form of [`LabelMask::from_values`].
pub fn make_mask<T: LabelValue>(shape: &[usize], data: &[T]) -> Result<LabelMask> {
    LabelMask::from_values(shape, data)
}

/// Succeeds iff both masks have the same rank and extents.
pub fn validate_pair(truth: &LabelMask, pred: &LabelMask) -> Result<()> {
    check_same_shape(truth.shape(), pred.shape())
}

fn check_same_shape(truth: &[usize], pred: &[usize]) -> Result<()> {
    if truth != pred {
        return Err(Error::ShapeMismatch {
            truth: truth.to_vec(),
            pred: pred.to_vec(),
        });
    }
    Ok(())
}

/// Sorted union of the labels found in either mask.
pub fn classes_of(truth: &LabelMask, pred: &LabelMask) -> Vec<u16> {
    let mut seen = vec![false; MAX_LABEL as usize + 1];
    for &l in truth.data().iter().chain(pred.data()) {
        seen[l as usize] = true;
    }
    collect_seen(&seen)
}

/// Boolean foreground indicator with the shape of its source mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    shape: Vec<usize>,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(shape: &[usize], bits: Vec<bool>) -> Result<Self> {
        let len = check_shape(shape)?;
        if bits.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: bits.len(),
            });
        }
        Ok(Self {
            shape: shape.to_vec(),
            bits,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn foreground_count(&self) -> u64 {
        self.bits.iter().filter(|&&b| b).count() as u64
    }

    pub fn has_foreground(&self) -> bool {
        self.bits.iter().any(|&b| b)
    }

    pub fn complement(&self) -> BinaryMask {
        BinaryMask {
            shape: self.shape.clone(),
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }
}

/// Free-function form of [`LabelMask::binarize`].
pub fn binarize(mask: &LabelMask, positive: u16) -> BinaryMask {
    mask.binarize(positive)
}

/// Pixel tallies of one binary comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConfusionCounts {
    pub true_positive: u64,
    pub false_positive: u64,
    pub true_negative: u64,
    pub false_negative: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        Self {
            true_positive: tp,
            false_positive: fp,
            true_negative: tn,
            false_negative: fn_,
        }
    }

    pub fn total(&self) -> u64 {
        self.true_positive + self.false_positive + self.true_negative + self.false_negative
    }

    /// The counts obtained by exchanging the roles of truth and prediction.
    pub fn swapped(&self) -> Self {
        Self::new(
            self.true_positive,
            self.false_negative,
            self.true_negative,
            self.false_positive,
        )
    }

    /// The counts of the complemented (background-as-foreground) comparison.
    pub fn complemented(&self) -> Self {
        Self::new(
            self.true_negative,
            self.false_negative,
            self.true_positive,
            self.false_positive,
        )
    }
}

/// Tallies the four confusion counts of a binary mask pair.
pub fn confusion(truth: &BinaryMask, pred: &BinaryMask) -> Result<ConfusionCounts> {
    check_same_shape(truth.shape(), pred.shape())?;
    let mut cm = ConfusionCounts::default();
    for (&t, &p) in truth.bits().iter().zip(pred.bits()) {
        match (t, p) {
            (true, true) => cm.true_positive += 1,
            (false, true) => cm.false_positive += 1,
            (true, false) => cm.false_negative += 1,
            (false, false) => cm.true_negative += 1,
        }
    }
    Ok(cm)
}

/// Class-by-class pixel counts: `count(i, j)` pixels carry truth class
/// `classes[i]` and predicted class `classes[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    classes: Vec<u16>,
    counts: Vec<u64>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

impl ContingencyTable {
    /// Builds a table from a row-major K×K count matrix.
    pub fn from_counts(classes: Vec<u16>, counts: Vec<u64>) -> Result<Self> {
        let k = classes.len();
        if counts.len() != k * k {
            return Err(Error::LengthMismatch {
                expected: k * k,
                actual: counts.len(),
            });
        }
        let mut row_sums = vec![0u64; k];
        let mut col_sums = vec![0u64; k];
        for i in 0..k {
            for j in 0..k {
                let c = counts[i * k + j];
                row_sums[i] += c;
                col_sums[j] += c;
            }
        }
        let total = row_sums.iter().sum();
        Ok(Self {
            classes,
            counts,
            row_sums,
            col_sums,
            total,
        })
    }

    pub fn classes(&self) -> &[u16] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn count(&self, truth_idx: usize, pred_idx: usize) -> u64 {
        self.counts[truth_idx * self.classes.len() + pred_idx]
    }

    /// Row-major K×K counts.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// True when every off-diagonal cell is zero.
    pub fn is_diagonal(&self) -> bool {
        let k = self.classes.len();
        (0..k).all(|i| (0..k).all(|j| i == j || self.count(i, j) == 0))
    }

    /// Collapses the table to the confusion counts of `class` versus the rest.
    pub fn one_vs_rest(&self, class: u16) -> Option<ConfusionCounts> {
        let idx = self.classes.iter().position(|&c| c == class)?;
        let tp = self.count(idx, idx);
        let fn_ = self.row_sums[idx] - tp;
        let fp = self.col_sums[idx] - tp;
        Some(ConfusionCounts::new(
            tp,
            fp,
            self.total - tp - fn_ - fp,
            fn_,
        ))
    }
}

/// Tallies the full contingency table over `classes`.
pub fn contingency(
    truth: &LabelMask,
    pred: &LabelMask,
    classes: &[u16],
) -> Result<ContingencyTable> {
    validate_pair(truth, pred)?;
    const ABSENT: usize = usize::MAX;
    let mut index = vec![ABSENT; MAX_LABEL as usize + 1];
    for (i, &c) in classes.iter().enumerate() {
        index[c as usize] = i;
    }
    let k = classes.len();
    let mut counts = vec![0u64; k * k];
    for (&t, &p) in truth.data().iter().zip(pred.data()) {
        let ti = index[t as usize];
        if ti == ABSENT {
            return Err(Error::UnknownLabel { label: t });
        }
        let pi = index[p as usize];
        if pi == ABSENT {
            return Err(Error::UnknownLabel { label: p });
        }
        counts[ti * k + pi] += 1;
    }
    ContingencyTable::from_counts(classes.to_vec(), counts)
}

/// Contingency table of a binary pair, with class 0 for background and 1 for
/// foreground.
pub fn binary_contingency(truth: &BinaryMask, pred: &BinaryMask) -> Result<ContingencyTable> {
    let cm = confusion(truth, pred)?;
    ContingencyTable::from_counts(
        vec![0, 1],
        vec![
            cm.true_negative,
            cm.false_positive,
            cm.false_negative,
            cm.true_positive,
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(shape: &[usize], bits: &[u8]) -> BinaryMask {
        BinaryMask::new(shape, bits.iter().map(|&b| b != 0).collect()).unwrap()
    }

    #[test]
    fn make_mask_valid_2d_and_3d() {
        let m = make_mask(&[2, 2], &[0u8, 1, 1, 0]).unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(m.labels(), vec![0, 1]);
        let v = make_mask(&[2, 2, 2], &[0u8, 0, 0, 0, 1, 1, 1, 1]).unwrap();
        assert_eq!(v.rank(), 3);
    }

    #[test]
    fn make_mask_errors() {
        assert!(matches!(
            make_mask(&[2, 3], &[0u8; 5]),
            Err(Error::LengthMismatch {
                expected: 6,
                actual: 5
            })
        ));
        assert!(matches!(
            make_mask(&[4], &[0u8; 4]),
            Err(Error::ShapeInvalid { .. })
        ));
        assert!(matches!(
            make_mask(&[2, 2, 2, 2], &[0u8; 16]),
            Err(Error::ShapeInvalid { .. })
        ));
        assert!(matches!(
            make_mask(&[0, 2], &[0u8; 0]),
            Err(Error::ShapeInvalid { .. })
        ));
        assert!(matches!(
            make_mask(&[1, 2], &[0i32, -1]),
            Err(Error::LabelInvalid { label: -1 })
        ));
        assert!(matches!(
            make_mask(&[1, 2], &[65536u32, 0]),
            Err(Error::LabelInvalid { label: 65536 })
        ));
        assert!(make_mask(&[1, 2], &[65535u32, 0]).is_ok());
    }

    #[test]
    fn validate_pair_checks_rank_and_extents() {
        let a = make_mask(&[2, 2], &[0u8; 4]).unwrap();
        let b = make_mask(&[2, 3], &[0u8; 6]).unwrap();
        let c = make_mask(&[2, 2, 1], &[0u8; 4]).unwrap();
        assert!(validate_pair(&a, &a.clone()).is_ok());
        assert!(matches!(
            validate_pair(&a, &b),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            validate_pair(&a, &c),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn classes_are_sorted_union() {
        let t = make_mask(&[2, 2], &[0u8, 2, 2, 0]).unwrap();
        let p = make_mask(&[2, 2], &[1u8, 0, 0, 1]).unwrap();
        assert_eq!(classes_of(&t, &p), vec![0, 1, 2]);
        let z = make_mask(&[2, 2], &[0u8; 4]).unwrap();
        assert_eq!(classes_of(&z, &z), vec![0]);
    }

    #[test]
    fn binarize_pointwise() {
        let m = make_mask(&[2, 2], &[0u8, 1, 2, 1]).unwrap();
        assert_eq!(binarize(&m, 1).bits(), &[false, true, false, true]);
        assert!(!binarize(&m, 9).has_foreground());
        let full = make_mask(&[2, 2], &[3u8; 4]).unwrap();
        assert!(binarize(&full, 3).bits().iter().all(|&b| b));
    }

    #[test]
    fn confusion_hand_counts() {
        let t = bm(&[2, 2], &[1, 0, 0, 1]);
        let p = bm(&[2, 2], &[1, 1, 0, 0]);
        assert_eq!(confusion(&t, &p).unwrap(), ConfusionCounts::new(1, 1, 1, 1));

        let t = bm(&[2, 2], &[0, 0, 0, 0]);
        let p = bm(&[2, 2], &[1, 1, 1, 1]);
        assert_eq!(confusion(&t, &p).unwrap(), ConfusionCounts::new(0, 4, 0, 0));

        let t = bm(&[2, 3], &[1, 0, 1, 1, 0, 0]);
        assert_eq!(confusion(&t, &t).unwrap(), ConfusionCounts::new(3, 0, 3, 0));

        let other = bm(&[3, 2], &[0; 6]);
        assert!(matches!(
            confusion(&t, &other),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn contingency_hand_counts() {
        let t = make_mask(&[2, 2], &[1u8, 1, 0, 0]).unwrap();
        let p = make_mask(&[2, 2], &[1u8, 0, 0, 0]).unwrap();
        let table = contingency(&t, &p, &[0, 1]).unwrap();
        assert_eq!(table.counts(), &[2, 0, 1, 1]);
        assert_eq!(table.row_sums(), &[2, 2]);
        assert_eq!(table.col_sums(), &[3, 1]);
        assert_eq!(table.total(), 4);

        let t = make_mask(&[1, 2], &[0u8, 0]).unwrap();
        let p = make_mask(&[1, 2], &[1u8, 1]).unwrap();
        assert_eq!(
            contingency(&t, &p, &[0, 1]).unwrap().counts(),
            &[0, 2, 0, 0]
        );

        let same = contingency(&t, &t, &[0, 1]).unwrap();
        assert!(same.is_diagonal());

        assert!(matches!(
            contingency(&t, &p, &[0]),
            Err(Error::UnknownLabel { label: 1 })
        ));
    }

    #[test]
    fn one_vs_rest_matches_confusion() {
        let t = make_mask(&[2, 3], &[0u8, 1, 2, 2, 1, 0]).unwrap();
        let p = make_mask(&[2, 3], &[0u8, 2, 2, 1, 1, 1]).unwrap();
        let classes = classes_of(&t, &p);
        let table = contingency(&t, &p, &classes).unwrap();
        for &c in &classes {
            let direct = confusion(&t.binarize(c), &p.binarize(c)).unwrap();
            assert_eq!(table.one_vs_rest(c).unwrap(), direct);
        }
        assert_eq!(table.one_vs_rest(7), None);
    }
}
