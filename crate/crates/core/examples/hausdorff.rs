//! Hausdorff and average Hausdorff distances, brute force against the exact
//! distance transform, on an anisotropic 3D volume.

use std::time::Instant;

use segeval::{avg_hausdorff, distance_transform, hausdorff, BinaryMask, HausdorffAlgo, Spacing};

fn sphere(shape: [usize; 3], centre: [f64; 3], radius: f64) -> BinaryMask {
    let mut bits = Vec::with_capacity(shape.iter().product());
    for z in 0..shape[0] {
        for y in 0..shape[1] {
            for x in 0..shape[2] {
                let d = [
                    z as f64 - centre[0],
                    y as f64 - centre[1],
                    x as f64 - centre[2],
                ];
                bits.push(d.iter().map(|v| v * v).sum::<f64>() <= radius * radius);
            }
        }
    }
    BinaryMask::new(&shape, bits).unwrap()
}

fn main() -> segeval::Result<()> {
    let shape = [24, 48, 48];
    let truth = sphere(shape, [12.0, 24.0, 24.0], 9.0);
    let pred = sphere(shape, [13.0, 22.0, 25.0], 8.0);
    // slices 2.5 mm apart, 0.8 mm in-plane
    let spacing = Spacing::new(vec![2.5, 0.8, 0.8])?;

    for algo in [HausdorffAlgo::Naive, HausdorffAlgo::DistanceTransform] {
        let start = Instant::now();
        let hd = hausdorff(&truth, &pred, &spacing, algo)?;
        let ahd = avg_hausdorff(&truth, &pred, &spacing, algo)?;
        println!(
            "{:<6} hd={hd:.4} ahd={ahd:.4} ({:.1?})",
            algo.as_str(),
            start.elapsed()
        );
    }

    let field = distance_transform(&truth, &spacing)?;
    let corner = field.get(0);
    println!("distance from the corner voxel to the truth surface: {corner:.3}");
    Ok(())
}
