//! # segeval
//!
//! Evaluation metrics for semantic segmentation masks.
//!
//! The crate scores a predicted label mask against a ground-truth mask with
//! the usual overlap, agreement and distance metrics:
//!
//! - **dice** / **iou**, **sensitivity**, **specificity**, **precision**
//! - **accuracy**, **balanced_accuracy**, hard-label **auc**, **kappa**
//! - **adjusted_rand_index** over the full class contingency table
//! - **volumetric_similarity**
//! - **hausdorff** and **avg_hausdorff**, with an exact Euclidean distance
//!   transform accelerating the nearest-point search
//!
//! Everything is reachable through [`evaluate`], which takes a metric name
//! (or a custom [`MetricFn`]) and handles binary and multi-class masks:
//!
//! ```
//! use segeval::{evaluate, EvalOptions, LabelMask};
//!
//! let truth = LabelMask::new(&[2, 2], vec![0, 1, 2, 2]).unwrap();
//! let pred = LabelMask::new(&[2, 2], vec![0, 1, 2, 1]).unwrap();
//! let r = evaluate(&truth, &pred, "dice", &EvalOptions::default()).unwrap();
//! assert_eq!(r.score(0), Some(1.0));
//! assert!((r.macro_avg.unwrap() - 7.0 / 9.0).abs() < 1e-12);
//! ```
//!
//! Zero denominators (a class missing from both masks, for instance) are
//! handled by a [`ZeroDivisionPolicy`]; distance metrics instead mark such
//! classes as undefined.

pub mod cli;
pub mod distance;
pub mod error;
pub mod evaluator;
pub mod io;
pub mod mask;
pub mod overlap;
pub mod report;

pub use distance::{
    avg_hausdorff, distance_transform, foreground_points, hausdorff, DistanceField, HausdorffAlgo,
    PointSet, Spacing,
};
pub use error::{Error, Result};
pub use evaluator::{
    aggregate, evaluate, Aggregation, ClassScore, EvalOptions, EvaluationResult, MetricContext,
    MetricDescriptor, MetricFn, MetricKind, Mode, ModeRequest, Registry,
};
pub use io::{load_mask, save_pgm, save_raw, PgmEncoding};
pub use mask::{
    binarize, classes_of, confusion, contingency, make_mask, validate_pair, BinaryMask,
    ConfusionCounts, ContingencyTable, LabelMask,
};
pub use overlap::{Score, ZeroDivisionPolicy};
pub use report::{ReportDocument, ReportFormat};
