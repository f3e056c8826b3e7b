//! From search tree to soft dendrogram, soft and hard clusterings, and
//! axis-interval descriptions of tangles.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::cut::Direction;
use crate::error::{Result, TangleError};
use crate::search::TangleSearchTree;

/// JSON schema version of exported condensed trees and dendrograms.
pub const CONDENSED_SCHEMA_VERSION: u32 = 1;

/// Non-increasing map from cut cost to weight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightingFn {
    /// `h ≡ 1`.
    #[default]
    Uniform,
    /// `h(c) = exp(−λ (c − c_min))`, with `c_min` the cheapest cut being weighed.
    /// The shift cancels in every probability and only guards against underflow.
    Exponential { lambda: f64 },
}

impl WeightingFn {
    pub fn weight(&self, cost: f64, c_min: f64) -> f64 {
        match *self {
            WeightingFn::Uniform => 1.0,
            WeightingFn::Exponential { lambda } => (-lambda * (cost - c_min)).exp(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightingFn::Exponential { lambda } if !(lambda.is_finite() && lambda >= 0.0) => Err(
                TangleError::params(format!("weighting lambda must be finite and >= 0, got {lambda}")),
            ),
            _ => Ok(()),
        }
    }
}

/// Nearest ancestor of `id` with two children, or the root.
fn anchor(tree: &TangleSearchTree, id: usize) -> usize {
    let mut cur = id;
    while let Some(p) = tree.node(cur).parent() {
        if tree.node(p).children().len() >= 2 {
            return p;
        }
        cur = p;
    }
    cur
}

/// Repeatedly removes leaf branches of length at most `depth`, measured from the
/// leaf up to its closest splitting ancestor or the root. Only leaves that stop
/// before the last cut are candidates: a leaf at full depth was never shown
/// inconsistent by a later cut. Each round removes all short branches at once;
/// rounds continue until nothing changes.
pub fn prune_tree(tree: &TangleSearchTree, depth: usize) -> TangleSearchTree {
    let mut cur = tree.clone();
    if depth == 0 {
        return cur;
    }
    let full = cur.pool().len();
    loop {
        let mut keep = vec![true; cur.len()];
        let mut changed = false;
        for leaf in cur.leaves() {
            if leaf == 0 || cur.node(leaf).level() >= full {
                continue;
            }
            let top = anchor(&cur, leaf);
            if cur.node(leaf).level() - cur.node(top).level() <= depth {
                let mut x = leaf;
                while x != top {
                    keep[x] = false;
                    x = cur.node(x).parent().expect("below anchor");
                }
                changed = true;
            }
        }
        if !changed {
            return cur;
        }
        cur = cur.retain(&keep);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Root,
    Splitting,
    Leaf,
}

/// Cuts separating the two subtrees of a splitting node and the resulting
/// per-object probability of taking the right (side-`A`) branch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitInfo {
    /// Id of the cut whose two orientations create the split.
    pub split_cut_id: usize,
    /// Cost of that cut.
    pub height: f64,
    /// Ids of the distinguishing cuts, in pool order.
    pub distinguishing: Vec<usize>,
    /// Whether the split cut was used because no cut distinguished the subtrees.
    pub fallback: bool,
    pub p_right: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CondensedNode {
    pub id: usize,
    /// Id of the corresponding node in the (pruned) search tree.
    pub tree_node: usize,
    pub kind: NodeKind,
    pub parent: Option<usize>,
    /// Right child first.
    pub children: Vec<usize>,
    pub level: usize,
    pub split: Option<SplitInfo>,
    /// Probability that each object arrives at this node; empty for structure-only trees.
    pub probability: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CondensedTree {
    pub num_objects: usize,
    pub nodes: Vec<CondensedNode>,
}

impl CondensedTree {
    pub fn leaves(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.children.is_empty())
            .map(|n| n.id)
            .collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_empty()).count()
    }

    pub fn has_probabilities(&self) -> bool {
        self.nodes.iter().all(|n| n.probability.len() == self.num_objects)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema_version": CONDENSED_SCHEMA_VERSION,
            "num_objects": self.num_objects,
            "nodes": self.nodes,
        })
    }

    /// Plot data: one entry per split with its height, plus per-node probabilities.
    pub fn dendrogram_json(&self) -> serde_json::Value {
        let splits: Vec<_> = self
            .nodes
            .iter()
            .filter_map(|n| {
                n.split.as_ref().map(|s| {
                    serde_json::json!({
                        "node": n.id,
                        "parent": n.parent,
                        "children": n.children,
                        "height": s.height,
                        "split_cut_id": s.split_cut_id,
                        "distinguishing_cut_ids": s.distinguishing,
                    })
                })
            })
            .collect();
        let heights: Vec<f64> = self
            .nodes
            .iter()
            .filter_map(|n| n.split.as_ref().map(|s| s.height))
            .collect();
        let probabilities: Vec<_> = self
            .nodes
            .iter()
            .map(|n| serde_json::json!({"node": n.id, "p": n.probability}))
            .collect();
        serde_json::json!({
            "schema_version": CONDENSED_SCHEMA_VERSION,
            "splits": splits,
            "heights": heights,
            "probabilities": probabilities,
        })
    }
}

/// Keeps the root, splitting nodes and leaves, contracting the paths in between.
pub fn condense(tree: &TangleSearchTree) -> CondensedTree {
    let kept: Vec<bool> = tree
        .nodes()
        .iter()
        .map(|n| n.parent().is_none() || n.children().len() != 1)
        .collect();
    let mut map = vec![usize::MAX; tree.len()];
    let mut nodes: Vec<CondensedNode> = Vec::new();
    for n in tree.nodes() {
        if !kept[n.id()] {
            continue;
        }
        let id = nodes.len();
        map[n.id()] = id;
        let kind = if n.parent().is_none() {
            NodeKind::Root
        } else if n.is_leaf() {
            NodeKind::Leaf
        } else {
            NodeKind::Splitting
        };
        nodes.push(CondensedNode {
            id,
            tree_node: n.id(),
            kind,
            parent: None,
            children: Vec::new(),
            level: n.level(),
            split: None,
            probability: Vec::new(),
        });
    }
    for i in 0..nodes.len() {
        let t = nodes[i].tree_node;
        let children: Vec<usize> = tree
            .node(t)
            .children()
            .iter()
            .map(|&c| map[descend(tree, c)])
            .collect();
        for &c in &children {
            nodes[c].parent = Some(i);
        }
        nodes[i].children = children;
    }
    CondensedTree {
        num_objects: tree.num_objects(),
        nodes,
    }
}

/// First node at or below `id` that is not a pass-through node.
fn descend(tree: &TangleSearchTree, mut id: usize) -> usize {
    while tree.node(id).children().len() == 1 {
        id = tree.node(id).children()[0];
    }
    id
}

fn subtree_leaves(tree: &TangleSearchTree, id: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        let n = tree.node(x);
        if n.is_leaf() {
            out.push(x);
        } else {
            stack.extend(n.children().iter().rev());
        }
    }
    out
}

/// Pool positions of the cuts oriented one way by every leaf of the right
/// subtree of `split` and the other way by every leaf of the left subtree,
/// together with the right-subtree direction of each.
fn distinguishing_positions(
    tree: &TangleSearchTree,
    split: usize,
) -> Result<Vec<(usize, Direction)>> {
    let node = tree.node(split);
    if node.children().len() != 2 {
        return Err(TangleError::params(format!(
            "node {split} is not a splitting node"
        )));
    }
    let right: Vec<Vec<Direction>> = subtree_leaves(tree, node.children()[0])
        .into_iter()
        .map(|l| tree.path_orientation(l))
        .collect();
    let left: Vec<Vec<Direction>> = subtree_leaves(tree, node.children()[1])
        .into_iter()
        .map(|l| tree.path_orientation(l))
        .collect();
    let oriented_by_all = right.iter().chain(&left).map(|p| p.len()).min().unwrap_or(0);
    let mut out = Vec::new();
    for pos in node.level()..oriented_by_all {
        let d_right = right[0][pos];
        if right.iter().all(|p| p[pos] == d_right) && left.iter().all(|p| p[pos] != d_right) {
            out.push((pos, d_right));
        }
    }
    Ok(out)
}

/// Ids of the cuts that separate the two subtrees of the splitting node `split`.
pub fn distinguishing_cuts(tree: &TangleSearchTree, split: usize) -> Result<Vec<usize>> {
    Ok(distinguishing_positions(tree, split)?
        .into_iter()
        .map(|(pos, _)| tree.pool().get(pos).id())
        .collect())
}

/// Distinguishing cuts and right-branch probabilities at the splitting node `split`.
pub fn branch_probabilities(
    tree: &TangleSearchTree,
    split: usize,
    h: WeightingFn,
) -> Result<SplitInfo> {
    let pool = tree.pool();
    let level = tree.node(split).level();
    let mut set = distinguishing_positions(tree, split)?;
    let fallback = set.is_empty();
    if fallback {
        warn!("split at node {split} has no distinguishing cuts; using the split cut alone");
        let right_dir = tree
            .node(tree.node(split).children()[0])
            .direction()
            .expect("child has a direction");
        set.push((level, right_dir));
    }
    let c_min = set
        .iter()
        .map(|&(pos, _)| pool.get(pos).cost())
        .fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = set
        .iter()
        .map(|&(pos, _)| h.weight(pool.get(pos).cost(), c_min))
        .collect();
    let total: f64 = weights.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(TangleError::NoDistinguishingCuts(split));
    }
    let n = tree.num_objects();
    let mut acc = vec![0.0; n];
    for (&(pos, d), &w) in set.iter().zip(&weights) {
        for v in pool.get(pos).side_set(d).iter_ones() {
            acc[v] += w;
        }
    }
    let p_right = acc.into_iter().map(|x| (x / total).clamp(0.0, 1.0)).collect();
    let split_cut = pool.get(level);
    Ok(SplitInfo {
        split_cut_id: split_cut.id(),
        height: split_cut.cost(),
        distinguishing: set.iter().map(|&(pos, _)| pool.get(pos).id()).collect(),
        fallback,
        p_right,
    })
}

/// Condenses `tree` and annotates every node with per-object arrival probabilities.
pub fn soft_dendrogram(tree: &TangleSearchTree, h: WeightingFn) -> Result<CondensedTree> {
    h.validate()?;
    let mut ct = condense(tree);
    let n = ct.num_objects;
    ct.nodes[0].probability = vec![1.0; n];
    for i in 0..ct.nodes.len() {
        let children = ct.nodes[i].children.clone();
        match children.len() {
            0 => {}
            1 => {
                let p = ct.nodes[i].probability.clone();
                ct.nodes[children[0]].probability = p;
            }
            _ => {
                let info = branch_probabilities(tree, ct.nodes[i].tree_node, h)?;
                let parent = &ct.nodes[i].probability;
                let right: Vec<f64> = parent.iter().zip(&info.p_right).map(|(p, r)| p * r).collect();
                let left: Vec<f64> = parent
                    .iter()
                    .zip(&info.p_right)
                    .map(|(p, r)| p * (1.0 - r))
                    .collect();
                ct.nodes[children[0]].probability = right;
                ct.nodes[children[1]].probability = left;
                ct.nodes[i].split = Some(info);
            }
        }
    }
    Ok(ct)
}

/// Objects × selected nodes; columns sorted by node id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoftAssignment {
    pub columns: Vec<usize>,
    pub rows: Vec<Vec<f64>>,
}

/// Soft clustering over `selection` (condensed node ids), which must meet every
/// root-to-leaf path exactly once. `None` selects all leaves.
pub fn soft_assignments(ct: &CondensedTree, selection: Option<&[usize]>) -> Result<SoftAssignment> {
    if !ct.has_probabilities() {
        return Err(TangleError::InvalidSelection(
            "condensed tree carries no probabilities".into(),
        ));
    }
    let mut columns: Vec<usize> = match selection {
        Some(s) => s.to_vec(),
        None => ct.leaves(),
    };
    columns.sort_unstable();
    if columns.windows(2).any(|w| w[0] == w[1]) {
        return Err(TangleError::InvalidSelection("duplicate node".into()));
    }
    if let Some(&bad) = columns.iter().find(|&&c| c >= ct.nodes.len()) {
        return Err(TangleError::InvalidSelection(format!("unknown node {bad}")));
    }
    let mut selected = vec![false; ct.nodes.len()];
    for &c in &columns {
        selected[c] = true;
    }
    for leaf in ct.leaves() {
        let mut hits = 0;
        let mut cur = Some(leaf);
        while let Some(x) = cur {
            hits += selected[x] as usize;
            cur = ct.nodes[x].parent;
        }
        if hits != 1 {
            return Err(TangleError::InvalidSelection(format!(
                "path to leaf {leaf} contains {hits} selected nodes"
            )));
        }
    }
    let rows = (0..ct.num_objects)
        .map(|v| columns.iter().map(|&c| ct.nodes[c].probability[v]).collect())
        .collect();
    Ok(SoftAssignment { columns, rows })
}

/// Column index of each row's maximum; ties go to the lowest column.
pub fn hard_assignments(soft: &SoftAssignment) -> Vec<usize> {
    soft.rows
        .iter()
        .map(|row| {
            let mut best = 0;
            for (j, &x) in row.iter().enumerate() {
                if x > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Bounds on one coordinate axis; `None` means unbounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AxisInterval {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl AxisInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower.is_none_or(|l| x >= l) && self.upper.is_none_or(|u| x < u)
    }
}

/// Tightest per-axis box implied by the orientations on the root path of `node`.
pub fn core_intervals(
    tree: &TangleSearchTree,
    node: usize,
    dims: usize,
) -> Result<Vec<AxisInterval>> {
    let mut out = vec![AxisInterval::default(); dims];
    for (pos, d) in tree.path_orientation(node).into_iter().enumerate() {
        let cut = tree.pool().get(pos);
        let meta = cut
            .axis()
            .ok_or(TangleError::MissingAxisMetadata(cut.id()))?;
        let iv = out.get_mut(meta.axis).ok_or_else(|| {
            TangleError::params(format!("cut {} on axis {} beyond {dims} dims", cut.id(), meta.axis))
        })?;
        if d == meta.below_direction() {
            iv.upper = Some(iv.upper.map_or(meta.threshold, |u| u.min(meta.threshold)));
        } else {
            iv.lower = Some(iv.lower.map_or(meta.threshold, |l| l.max(meta.threshold)));
        }
    }
    Ok(out)
}
