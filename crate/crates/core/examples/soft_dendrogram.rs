//! Soft dendrogram: per-object probabilities of reaching each node, with
//! distinguishing cuts weighted by an exponential of their cost.
//!
//! ```bash
//! cargo run --example soft_dendrogram
//! ```

use tangles::postprocess::CondensedTree;
use tangles::prelude::*;

fn print_node(ct: &CondensedTree, id: usize, indent: usize) {
    let node = &ct.nodes[id];
    let mass: f64 = node.probability.iter().sum();
    let label = match &node.split {
        Some(s) => format!("split on {} cuts, height {:.3}", s.distinguishing.len(), s.height),
        None => format!("{:?}", node.kind).to_lowercase(),
    };
    println!("{:indent$}node {id} (level {}): {label}, expected size {mass:.1}", "", node.level);
    for &c in &node.children {
        print_node(ct, c, indent + 2);
    }
}

fn main() -> Result<()> {
    let inst = gen_mindsets(300, 30, 4, 0.12, 3)?;
    let pool = cost_questionnaire(column_cuts(&inst.answers)?, &inst.answers)?;
    let tree = prune_tree(&build_tree(&pool, 25, None)?, 1);

    let ct = soft_dendrogram(&tree, WeightingFn::Exponential { lambda: 1.0 })?;
    print_node(&ct, 0, 0);

    let soft = soft_assignments(&ct, None)?;
    println!("columns (leaf ids): {:?}", soft.columns);
    for v in [0, 100, 200, 299] {
        let row: Vec<String> = soft.rows[v].iter().map(|x| format!("{x:.2}")).collect();
        println!("object {v:>3}: [{}] truth {}", row.join(", "), inst.labels[v]);
    }
    let hard = hard_assignments(&soft);
    println!("nmi {:.4}", nmi(&hard, &inst.labels)?);
    // a steep weighting leans on the single cheapest cut and inherits its noise
    for h in [WeightingFn::Uniform, WeightingFn::Exponential { lambda: 20.0 }] {
        let soft = soft_assignments(&soft_dendrogram(&tree, h)?, None)?;
        println!("{h:?}: nmi {:.4}", nmi(&hard_assignments(&soft), &inst.labels)?);
    }
    Ok(())
}
