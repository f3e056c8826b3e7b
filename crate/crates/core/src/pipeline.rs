//! End-to-end helpers: cost a pool, build the tree, post-process.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cost::{exp_distance_cost, graph_cut_cost, mean_hamming_cost, normalize_cost};
use crate::cut::CutPool;
use crate::data::{BinaryMatrix, Graph, PointCloud};
use crate::error::Result;
use crate::postprocess::{
    hard_assignments, prune_tree, soft_assignments, soft_dendrogram, CondensedTree, SoftAssignment,
    WeightingFn,
};
use crate::search::{build_tree, TangleSearchTree};

/// Costs each cut by the mean Hamming agreement across it.
pub fn cost_questionnaire(pool: CutPool, answers: &BinaryMatrix) -> Result<CutPool> {
    pool.with_costs(|c| mean_hamming_cost(c, answers))
}

/// Costs each cut by its crossing weight, optionally divided by `|A|·|A^∁|`.
pub fn cost_graph(pool: CutPool, graph: &Graph, normalize: bool) -> Result<CutPool> {
    pool.with_costs(|c| {
        let raw = graph_cut_cost(c, graph)?;
        Ok(if normalize { normalize_cost(raw, c) } else { raw })
    })
}

/// Costs each cut by `Σ exp(−distance)` across it, optionally divided by `|A|·|A^∁|`.
pub fn cost_points(pool: CutPool, points: &PointCloud, normalize: bool) -> Result<CutPool> {
    pool.with_costs(|c| {
        let raw = exp_distance_cost(c, points)?;
        Ok(if normalize { normalize_cost(raw, c) } else { raw })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterParams {
    pub agreement: usize,
    pub prune_depth: usize,
    pub max_psi: Option<f64>,
    pub weighting: WeightingFn,
}

impl ClusterParams {
    /// Agreement `a`, prune depth 1, all cuts, uniform weighting.
    pub fn new(agreement: usize) -> Self {
        ClusterParams {
            agreement,
            prune_depth: 1,
            max_psi: None,
            weighting: WeightingFn::Uniform,
        }
    }

    pub fn prune_depth(mut self, depth: usize) -> Self {
        self.prune_depth = depth;
        self
    }

    pub fn max_psi(mut self, psi: Option<f64>) -> Self {
        self.max_psi = psi;
        self
    }

    pub fn weighting(mut self, h: WeightingFn) -> Self {
        self.weighting = h;
        self
    }
}

#[derive(Clone, Debug)]
pub struct ClusterOutput {
    pub tree: TangleSearchTree,
    pub pruned: TangleSearchTree,
    pub condensed: CondensedTree,
    pub soft: SoftAssignment,
    /// Index into `soft.columns` per object.
    pub labels: Vec<usize>,
    pub tree_secs: f64,
    pub postprocess_secs: f64,
}

impl ClusterOutput {
    /// Number of leaves of the condensed tree.
    pub fn leaf_count(&self) -> usize {
        self.condensed.leaf_count()
    }
}

/// Tree, prune, soft dendrogram, leaf soft assignment and hard labels for a costed pool.
pub fn cluster_pool(pool: CutPool, params: &ClusterParams) -> Result<ClusterOutput> {
    let t0 = Instant::now();
    let tree = build_tree(&pool, params.agreement, params.max_psi)?;
    let tree_secs = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let pruned = prune_tree(&tree, params.prune_depth);
    let condensed = soft_dendrogram(&pruned, params.weighting)?;
    let soft = soft_assignments(&condensed, None)?;
    let labels = hard_assignments(&soft);
    let postprocess_secs = t1.elapsed().as_secs_f64();
    Ok(ClusterOutput {
        tree,
        pruned,
        condensed,
        soft,
        labels,
        tree_secs,
        postprocess_secs,
    })
}
