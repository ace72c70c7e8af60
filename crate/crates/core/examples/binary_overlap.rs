//! Score a binary prediction against its ground truth with the overlap
//! metrics.
//!
//! cargo run --example binary_overlap

use segeval::{evaluate, EvalOptions, LabelMask};

fn main() -> segeval::Result<()> {
    #[rustfmt::skip]
    let truth = LabelMask::from_values(&[4, 4], &[
        0, 1, 1, 0,
        0, 1, 1, 0,
        0, 1, 1, 0,
        0, 0, 0, 0u8,
    ])?;
    #[rustfmt::skip]
    let pred = LabelMask::from_values(&[4, 4], &[
        0, 0, 1, 1,
        0, 1, 1, 1,
        0, 1, 1, 0,
        0, 0, 0, 0u8,
    ])?;

    let opts = EvalOptions::default();
    for metric in [
        "dice",
        "iou",
        "sensitivity",
        "specificity",
        "precision",
        "accuracy",
        "kappa",
    ] {
        let r = evaluate(&truth, &pred, metric, &opts)?;
        println!("{:<12} {:.4}", r.metric, r.score(1).unwrap());
    }
    Ok(())
}
