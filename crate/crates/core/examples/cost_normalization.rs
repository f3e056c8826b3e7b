//! How dividing by `|A|·|A^c|` reorders cuts: unnormalised graph costs favour
//! lopsided cuts, normalised costs put the block-separating cuts first.
//!
//! ```bash
//! cargo run --example cost_normalization
//! ```

use tangles::prelude::*;

fn main() -> Result<()> {
    let sbm = gen_sbm(100, 2, 0.3, 0.1, 2, false)?;
    let u = ObjectUniverse::new(100)?;
    let mut cuts = Vec::new();
    for (id, (j, l)) in [(1, 0), (5, 0), (25, 25), (50, 0), (45, 3), (40, 10)].into_iter().enumerate() {
        let side = BitSet::from_indices(100, (0..j).chain(50..50 + l));
        cuts.push(make_cut(u, side, id)?);
    }
    let pool = CutPool::new(u, cuts)?;

    for normalize in [false, true] {
        let costed = cost_graph(pool.clone(), &sbm.graph, normalize)?;
        println!("normalize = {normalize}");
        for c in costed.cuts() {
            let labels: Vec<usize> = (0..100).map(|v| c.side_a().get(v) as usize).collect();
            println!(
                "  |A| = {:>3}  cost {:>9.4}  nmi with blocks {:.3}",
                c.size_a(),
                c.cost(),
                nmi(&labels, &sbm.labels)?
            );
        }
    }
    Ok(())
}
