//! Cross-check the search tree against brute-force enumeration of every
//! orientation on a small pool.
//!
//! ```bash
//! cargo run --example oracle_check
//! ```

use tangles::cutgen::all_bipartitions;
use tangles::prelude::*;

fn main() -> Result<()> {
    let sbm = gen_sbm(10, 2, 0.9, 0.1, 1, true)?;
    let all = cost_graph(all_bipartitions(10)?, &sbm.graph, false)?;
    // brute force is limited to 16 cuts, so keep the cheapest ones
    let u = all.universe();
    let pool = CutPool::new(u, all.into_cuts().into_iter().take(12).collect())?;

    for a in 1..=4 {
        let tree = build_tree(&pool, a, None)?;
        let from_tree = tree.full_depth_orientations();
        let brute = brute_force_tangles(&pool, a)?;
        println!(
            "a={a}: tree {} tangles, brute force {} tangles, {}",
            from_tree.len(),
            brute.len(),
            if from_tree == brute { "match" } else { "MISMATCH" }
        );
    }
    Ok(())
}
