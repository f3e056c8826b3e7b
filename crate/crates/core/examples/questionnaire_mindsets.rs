//! Recover mindsets from a noisy binary questionnaire.
//!
//! Each question is one cut, costed by the mean agreement across it. The
//! distinguishing cuts at each split are the questions that characterise the
//! two groups below it.
//!
//! ```bash
//! cargo run --example questionnaire_mindsets
//! ```

use tangles::prelude::*;

fn main() -> Result<()> {
    let inst = gen_mindsets(999, 40, 3, 0.1, 42)?;
    let pool = cost_questionnaire(column_cuts(&inst.answers)?, &inst.answers)?;
    let out = cluster_pool(pool, &ClusterParams::new(111))?;

    println!("tangles found: {}", out.leaf_count());
    println!("nmi vs ground truth: {:.4}", nmi(&out.labels, &inst.labels)?);
    for node in &out.condensed.nodes {
        if let Some(split) = &node.split {
            println!(
                "split at level {} (cost {:.3}): characterising questions {:?}",
                node.level, split.height, split.distinguishing
            );
        }
    }
    Ok(())
}
