//! Register a user metric next to the built-ins and evaluate it through the
//! same per-class machinery.

use segeval::{EvalOptions, LabelMask, MetricDescriptor, MetricFn, Registry, Score};

fn main() -> segeval::Result<()> {
    let mut registry = Registry::with_builtins();

    // Tversky index with alpha=0.7 (weights false positives more)
    let tversky = MetricFn::custom(|truth, pred, _ctx| {
        let (mut tp, mut fp, mut fn_) = (0.0, 0.0, 0.0);
        for (&t, &p) in truth.bits().iter().zip(pred.bits()) {
            match (t, p) {
                (true, true) => tp += 1.0,
                (false, true) => fp += 1.0,
                (true, false) => fn_ += 1.0,
                _ => {}
            }
        }
        let den = tp + 0.7 * fp + 0.3 * fn_;
        Ok(if den == 0.0 {
            Score::substituted(1.0)
        } else {
            Score::new(tp / den)
        })
    });
    registry.register(MetricDescriptor::new("tversky", &["ti"], tversky))?;

    let truth = LabelMask::from_values(&[3, 3], &[0u8, 1, 1, 0, 1, 1, 0, 0, 0])?;
    let pred = LabelMask::from_values(&[3, 3], &[1u8, 1, 1, 0, 1, 0, 0, 0, 0])?;
    let opts = EvalOptions::default();
    for name in ["TI", "dice"] {
        let r = registry.evaluate(&truth, &pred, name, &opts)?;
        println!("{}: {:.4}", r.metric, r.score(1).unwrap());
    }

    // a duplicate name is rejected
    let again = MetricDescriptor::new(
        "jaccard",
        &[],
        MetricFn::custom(|_, _, _| Ok(Score::new(0.0))),
    );
    println!(
        "re-register jaccard: {}",
        registry.register(again).unwrap_err()
    );
    println!("registered: {:?}", registry.names());
    Ok(())
}
