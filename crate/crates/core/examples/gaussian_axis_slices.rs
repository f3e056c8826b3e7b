//! Axis-parallel cuts on a 2-D Gaussian mixture, with each cluster explained
//! as a box of coordinate intervals.
//!
//! ```bash
//! cargo run --release --example gaussian_axis_slices
//! ```

use tangles::postprocess::core_intervals;
use tangles::prelude::*;

fn fmt(b: Option<f64>, inf: &str) -> String {
    b.map_or(inf.to_string(), |x| format!("{x:.2}"))
}

fn main() -> Result<()> {
    let centers = vec![vec![0.0, 0.0], vec![3.7, 0.0], vec![0.0, 3.7], vec![3.7, 3.7]];
    let gmm = gen_gmm(&centers, 1.0, 2000, 5)?;
    let a = 2000 / 4 / 3;

    let cuts = axis_slices(&gmm.points, a)?;
    println!("{} axis slices", cuts.len());
    let pool = cost_points(cuts, &gmm.points, false)?;
    let out = cluster_pool(pool, &ClusterParams::new(a))?;
    println!("clusters: {}, nmi {:.4}", out.leaf_count(), nmi(&out.labels, &gmm.labels)?);

    for leaf in out.condensed.leaves() {
        let node = out.condensed.nodes[leaf].tree_node;
        let boxes = core_intervals(&out.pruned, node, 2)?;
        let text: Vec<String> = boxes
            .iter()
            .enumerate()
            .map(|(d, iv)| format!("{} <= x{d} < {}", fmt(iv.lower, "-inf"), fmt(iv.upper, "inf")))
            .collect();
        println!("  cluster {leaf}: {}", text.join(", "));
    }
    Ok(())
}
