//! Two-block graph clustered from 20 cheap Kernighan-Lin cuts.
//!
//! ```bash
//! cargo run --example sbm_kernighan_lin
//! ```

use tangles::models::thm2_psi_range;
use tangles::prelude::*;

fn main() -> Result<()> {
    let (n, p, q, a) = (100, 0.3, 0.05, 16);
    let sbm = gen_sbm(n, 2, p, q, 7, false)?;
    println!("graph: {} nodes, {} edges", sbm.graph.num_nodes(), sbm.graph.num_edges());

    let cuts = kl_cuts(&sbm.graph, 20, 2, 7)?;
    println!("distinct KL cuts: {}", cuts.len());
    let pool = cost_graph(cuts, &sbm.graph, true)?;
    for cut in pool.cuts().iter().take(5) {
        println!("  cut {:>2}: |A| = {:>3}, cost {:.4}", cut.id(), cut.size_a(), cut.cost());
    }

    let out = cluster_pool(pool, &ClusterParams::new(a))?;
    println!("clusters: {}, nmi {:.4}", out.leaf_count(), nmi(&out.labels, &sbm.labels)?);

    let window = thm2_psi_range(n as f64, p, q, a as f64);
    match window.interval {
        Some((lo, hi)) => println!("unnormalised cost window for exact recovery: [{lo:.1}, {hi:.1})"),
        None => println!("no recovery window (lower {:.1}, upper {:.1})", window.lower, window.upper),
    }
    Ok(())
}
