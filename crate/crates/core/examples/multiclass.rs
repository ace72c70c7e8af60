//! Multi-class evaluation: one-vs-rest scores per label with macro and
//! volume-weighted averages.

use segeval::{evaluate, EvalOptions, LabelMask, ModeRequest};

fn main() -> segeval::Result<()> {
    let truth = LabelMask::from_values(&[2, 3], &[0u16, 1, 2, 0, 1, 2])?;
    let pred = LabelMask::from_values(&[2, 3], &[0u16, 1, 1, 0, 2, 2])?;

    let mut opts = EvalOptions::default();
    let r = evaluate(&truth, &pred, "dice", &opts)?;
    println!("mode={} classes={:?}", r.mode.as_str(), r.classes);
    for (class, score) in &r.per_class {
        println!("  class {class}: {:?}", score.value());
    }
    println!("  macro {:?}  weighted {:?}", r.macro_avg, r.weighted);

    // background excluded; aliases resolve to the canonical name
    opts.exclude_background = true;
    opts.mode = ModeRequest::MultiClass;
    let r = evaluate(&truth, &pred, "dsc", &opts)?;
    println!(
        "without background: {:?} macro {:?}",
        r.per_class, r.macro_avg
    );
    Ok(())
}
