//! What each zero-division policy does when a class is missing from one or
//! both masks.

use segeval::overlap::{self, ZeroDivisionPolicy};
use segeval::{evaluate, ClassScore, ConfusionCounts, EvalOptions, LabelMask, ModeRequest};

fn main() -> segeval::Result<()> {
    let empty = ConfusionCounts::new(0, 0, 16, 0);
    let missed = ConfusionCounts::new(0, 0, 12, 4);
    for policy in [
        ZeroDivisionPolicy::PerfectOnEmptyAgreement,
        ZeroDivisionPolicy::ScoreZero,
        ZeroDivisionPolicy::ScoreOne,
        ZeroDivisionPolicy::Error,
    ] {
        let show = |r: segeval::Result<segeval::Score>| match r {
            Ok(s) if s.defined => format!("{}", s.value),
            Ok(s) => format!("{} (substituted)", s.value),
            Err(e) => format!("error: {e}"),
        };
        println!("{policy}");
        println!(
            "  dice, both empty:      {}",
            show(overlap::dice(&empty, policy))
        );
        println!(
            "  precision, no pred:    {}",
            show(overlap::precision(&missed, policy))
        );
        println!(
            "  sensitivity, no truth: {}",
            show(overlap::sensitivity(&empty, policy))
        );
    }

    // distance metrics have no policy: an absent class yields a reason
    let truth = LabelMask::from_values(&[2, 2], &[0u8, 2, 2, 0])?;
    let pred = LabelMask::from_values(&[2, 2], &[0u8, 1, 2, 0])?;
    let opts = EvalOptions {
        mode: ModeRequest::MultiClass,
        ..Default::default()
    };
    let r = evaluate(&truth, &pred, "hd", &opts)?;
    for (class, entry) in &r.per_class {
        match entry {
            ClassScore::Scored(s) => println!("hd class {class}: {}", s.value),
            ClassScore::Undefined(why) => println!("hd class {class}: undefined, {why}"),
        }
    }
    Ok(())
}
