//! Round-trip masks through PGM and raw volumes, then render the same
//! report the command-line tool prints.

use segeval::cli::run;
use segeval::{load_mask, save_pgm, save_raw, LabelMask, PgmEncoding};

fn main() -> segeval::Result<()> {
    let dir = std::env::temp_dir().join(format!("segeval-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let truth = LabelMask::from_values(&[2, 2], &[1u8, 0, 0, 1])?;
    let pred = LabelMask::from_values(&[2, 2], &[1u8, 1, 0, 0])?;
    let t = dir.join("truth.pgm");
    let p = dir.join("pred.pgm");
    save_pgm(&truth, &t, PgmEncoding::Ascii)?;
    save_pgm(&pred, &p, PgmEncoding::Binary)?;
    assert_eq!(load_mask(&p)?, pred);

    let volume = LabelMask::from_values(
        &[2, 3, 3],
        &[0u16, 1, 1, 0, 1, 1, 0, 0, 0, 0, 2, 2, 0, 2, 2, 0, 0, 300],
    )?;
    let sidecar = save_raw(&volume, dir.join("volume"))?;
    println!("{}", std::fs::read_to_string(&sidecar)?);
    assert_eq!(load_mask(&sidecar)?, volume);

    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = [
        "segeval",
        "--truth",
        t.to_str().unwrap(),
        "--pred",
        p.to_str().unwrap(),
        "--metrics",
        "dice,iou,hd",
        "--format",
        "csv",
        "--no-timings",
    ];
    let code = run(args, &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    println!("exit code {code}");

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
