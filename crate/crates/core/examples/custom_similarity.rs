//! Hand-built cuts with a user-supplied similarity.
//!
//! Any pairwise similarity can cost a cut through `mean_similarity_cost`; the
//! resulting pool goes through the same search and post-processing.
//!
//! ```bash
//! cargo run --example custom_similarity
//! ```

use tangles::prelude::*;

fn main() -> Result<()> {
    // twelve objects on a line, two dense groups
    let x: [f64; 12] = [0.0, 0.2, 0.3, 0.5, 0.6, 0.8, 5.0, 5.1, 5.3, 5.4, 5.6, 5.9];
    let sim = |i: usize, j: usize| (-(x[i] - x[j]).abs()).exp();
    let u = ObjectUniverse::new(x.len())?;
    let cuts = (1..x.len())
        .map(|s| make_cut(u, BitSet::from_indices(x.len(), 0..s), s))
        .collect::<Result<Vec<_>>>()?;
    let pool = CutPool::new(u, cuts)?.with_costs(|c| Ok(mean_similarity_cost(c, sim)))?;

    println!("cut order by cost:");
    for c in pool.cuts() {
        println!("  first {:>2} objects | rest: {:.4}", c.size_a(), c.cost());
    }
    let out = cluster_pool(pool, &ClusterParams::new(3))?;
    println!("labels: {:?}", out.labels);
    Ok(())
}
