//! Adjusted Rand index from the full contingency table, plus the per-class
//! one-vs-rest values.

use segeval::overlap::{adjusted_rand_index, ZeroDivisionPolicy};
use segeval::{classes_of, contingency, evaluate, EvalOptions, LabelMask};

fn main() -> segeval::Result<()> {
    let truth = LabelMask::from_values(&[2, 4], &[0u8, 0, 1, 1, 2, 2, 2, 0])?;
    let pred = LabelMask::from_values(&[2, 4], &[0u8, 0, 1, 2, 2, 2, 1, 0])?;

    let table = contingency(&truth, &pred, &classes_of(&truth, &pred))?;
    println!("classes {:?}", table.classes());
    for i in 0..table.num_classes() {
        let row: Vec<u64> = (0..table.num_classes())
            .map(|j| table.count(i, j))
            .collect();
        println!("  {row:?}");
    }
    let ari = adjusted_rand_index(&table, ZeroDivisionPolicy::default())?;
    println!("ARI over all labels: {:.6}", ari.value);

    let r = evaluate(&truth, &pred, "ari", &EvalOptions::default())?;
    println!("overall {:?}", r.overall.as_ref().and_then(|s| s.value()));
    for (class, s) in &r.per_class {
        println!("  class {class} vs rest: {:.6}", s.value().unwrap());
    }
    Ok(())
}
