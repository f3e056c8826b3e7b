//! The tangle search tree.
//!
//! Cuts are processed in pool order. A node at level `i` is a consistent
//! orientation of the first `i` cuts, and gains up to two children when cut
//! `i + 1` is oriented towards its stored side `A` or its complement. Each node
//! keeps the inclusion-minimal sides of its root path (its core); consistency of
//! an extension only needs the triples that contain the new side and two core
//! sets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::{pair_count, side_subset, triple_at_least, BitSet, SideRef};
use crate::cut::{CutPool, Direction};
use crate::error::{Result, TangleError};

/// Largest pool accepted by [`brute_force_tangles`].
pub const BRUTE_FORCE_LIMIT: usize = 16;

/// JSON schema version of exported trees.
pub const TREE_SCHEMA_VERSION: u32 = 1;

/// A cut together with the side an orientation points to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSide {
    pub cut_id: usize,
    pub direction: Direction,
    pub members: BitSet,
}

/// A core entry: pool position of the cut and the chosen side.
pub type CoreEntry = (usize, Direction);

#[derive(Clone, Debug, PartialEq)]
pub struct TangleNode {
    id: usize,
    parent: Option<usize>,
    level: usize,
    direction: Option<Direction>,
    core: Vec<CoreEntry>,
    children: Vec<usize>,
    maximal: bool,
}

impl TangleNode {
    #[inline]
    pub fn id(&self) -> usize {
        self.id
    }

    #[inline]
    pub fn parent(&self) -> Option<usize> {
        self.parent
    }

    /// Number of cuts oriented on the root path.
    #[inline]
    pub fn level(&self) -> usize {
        self.level
    }

    /// Side chosen for the cut at pool position `level − 1`; `None` at the root.
    #[inline]
    pub fn direction(&self) -> Option<Direction> {
        self.direction
    }

    /// Pool position of the cut this node orients.
    pub fn cut_position(&self) -> Option<usize> {
        self.level.checked_sub(1)
    }

    pub fn core(&self) -> &[CoreEntry] {
        &self.core
    }

    /// Children, side-`A` child first.
    pub fn children(&self) -> &[usize] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Set when the node failed to extend at a processed cut.
    pub fn maximal(&self) -> bool {
        self.maximal
    }
}

#[derive(Clone, Debug)]
pub struct TangleSearchTree {
    agreement: usize,
    pool: CutPool,
    nodes: Vec<TangleNode>,
}

/// True iff every triple (with repetition) from `core ∪ {candidate}` that contains
/// `candidate` intersects in at least `a` objects. `core` itself is assumed consistent.
pub fn consistent(core: &[SideRef<'_>], candidate: SideRef<'_>, a: usize) -> bool {
    if candidate.count() < a {
        return false;
    }
    if core.iter().any(|&x| pair_count(candidate, x) < a) {
        return false;
    }
    for (i, &x) in core.iter().enumerate() {
        for &y in &core[i + 1..] {
            if !triple_at_least(candidate, x, y, a) {
                return false;
            }
        }
    }
    true
}

/// Full check of every triple (with repetition) drawn from `sides`.
pub fn all_triples_consistent(sides: &[SideRef<'_>], a: usize) -> bool {
    let k = sides.len();
    for i in 0..k {
        for j in i..k {
            for l in j..k {
                if !triple_at_least(sides[i], sides[j], sides[l], a) {
                    return false;
                }
            }
        }
    }
    true
}

fn core_sides<'p>(pool: &'p CutPool, core: &[CoreEntry]) -> Vec<SideRef<'p>> {
    core.iter().map(|&(pos, d)| pool.get(pos).side(d)).collect()
}

/// Adds the side `(position, direction)` to a tangle with the given core.
///
/// Returns the child's core, or `None` when the orientation is inconsistent.
pub fn extend_tangle(
    pool: &CutPool,
    core: &[CoreEntry],
    position: usize,
    direction: Direction,
    a: usize,
) -> Option<Vec<CoreEntry>> {
    let side = pool.get(position).side(direction);
    let sides = core_sides(pool, core);
    if sides.iter().any(|&c| side_subset(c, side)) {
        return Some(core.to_vec());
    }
    let mut new_core = Vec::with_capacity(core.len() + 1);
    let mut kept = Vec::with_capacity(core.len());
    for (&entry, &s) in core.iter().zip(&sides) {
        if !side_subset(side, s) {
            new_core.push(entry);
            kept.push(s);
        }
    }
    if !consistent(&kept, side, a) {
        return None;
    }
    new_core.push((position, direction));
    Some(new_core)
}

/// Builds the search tree over the cuts of `pool` whose cost is at most `max_psi`.
pub fn build_tree(pool: &CutPool, a: usize, max_psi: Option<f64>) -> Result<TangleSearchTree> {
    if a == 0 {
        return Err(TangleError::params("agreement must be at least 1"));
    }
    let used: Vec<_> = pool
        .cuts()
        .iter()
        .take_while(|c| max_psi.is_none_or(|psi| c.cost() <= psi))
        .cloned()
        .collect();
    let pool = CutPool::new(pool.universe(), used)?;
    let mut nodes = vec![TangleNode {
        id: 0,
        parent: None,
        level: 0,
        direction: None,
        core: Vec::new(),
        children: Vec::new(),
        maximal: false,
    }];
    let mut frontier = vec![0usize];
    for position in 0..pool.len() {
        let extensions: Vec<Vec<(Direction, Vec<CoreEntry>)>> = frontier
            .par_iter()
            .map(|&id| {
                let core = &nodes[id].core;
                [Direction::A, Direction::Complement]
                    .into_iter()
                    .filter_map(|d| extend_tangle(&pool, core, position, d, a).map(|c| (d, c)))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (&parent, ext) in frontier.iter().zip(extensions) {
            if ext.is_empty() {
                nodes[parent].maximal = true;
            }
            for (d, core) in ext {
                let id = nodes.len();
                nodes.push(TangleNode {
                    id,
                    parent: Some(parent),
                    level: position + 1,
                    direction: Some(d),
                    core,
                    children: Vec::new(),
                    maximal: false,
                });
                nodes[parent].children.push(id);
                next.push(id);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(TangleSearchTree {
        agreement: a,
        pool,
        nodes,
    })
}

/// Every orientation of the whole pool satisfying the triple condition, in
/// lexicographic order (`A` before `Complement`, first cut most significant).
pub fn brute_force_tangles(pool: &CutPool, a: usize) -> Result<Vec<Vec<Direction>>> {
    let m = pool.len();
    if m > BRUTE_FORCE_LIMIT {
        return Err(TangleError::TooLarge {
            size: m,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << m) {
        let dirs: Vec<Direction> = (0..m)
            .map(|i| {
                if mask >> (m - 1 - i) & 1 == 1 {
                    Direction::Complement
                } else {
                    Direction::A
                }
            })
            .collect();
        let sides: Vec<SideRef> = dirs
            .iter()
            .enumerate()
            .map(|(i, &d)| pool.get(i).side(d))
            .collect();
        if all_triples_consistent(&sides, a) {
            out.push(dirs);
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    parent_id: Option<usize>,
    level: usize,
    cut_id: Option<usize>,
    direction: Option<Direction>,
    maximal: bool,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    schema_version: u32,
    agreement: usize,
    num_objects: usize,
    cut_ids: Vec<usize>,
    cut_costs: Vec<f64>,
    nodes: Vec<NodeJson>,
}

impl TangleSearchTree {
    /// Assembles a tree from `(parent, direction)` pairs listed parents-first.
    ///
    /// Entry 0 is the root and must be `(None, None)`. Cores are not computed, so
    /// this is meant for post-processing of externally described trees.
    pub fn from_parts(
        pool: CutPool,
        agreement: usize,
        parts: &[(Option<usize>, Option<Direction>)],
    ) -> Result<Self> {
        if parts.first() != Some(&(None, None)) {
            return Err(TangleError::params("first node must be the root"));
        }
        let mut nodes: Vec<TangleNode> = Vec::with_capacity(parts.len());
        for (id, &(parent, direction)) in parts.iter().enumerate() {
            let level = match (id, parent, direction) {
                (0, _, _) => 0,
                (_, Some(p), Some(_)) if p < id => nodes[p].level + 1,
                _ => {
                    return Err(TangleError::params(format!(
                        "node {id} needs an earlier parent and a direction"
                    )))
                }
            };
            if level > pool.len() {
                return Err(TangleError::params(format!(
                    "node {id} at level {level} exceeds {} cuts",
                    pool.len()
                )));
            }
            if let Some(p) = parent {
                if nodes[p].children.iter().any(|&c| nodes[c].direction == direction) {
                    return Err(TangleError::params(format!(
                        "node {p} has two children with the same direction"
                    )));
                }
                nodes[p].children.push(id);
            }
            nodes.push(TangleNode {
                id,
                parent,
                level,
                direction,
                core: Vec::new(),
                children: Vec::new(),
                maximal: false,
            });
        }
        let dirs: Vec<Option<Direction>> = nodes.iter().map(|n| n.direction).collect();
        for n in nodes.iter_mut() {
            n.children.sort_by_key(|&c| dirs[c]);
        }
        Ok(TangleSearchTree {
            agreement,
            pool,
            nodes,
        })
    }

    /// Keeps the nodes for which `keep` is true (must be closed under parents), renumbering
    /// them in their original order.
    pub(crate) fn retain(&self, keep: &[bool]) -> TangleSearchTree {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for node in &self.nodes {
            if !keep[node.id] {
                continue;
            }
            let id = nodes.len();
            remap[node.id] = id;
            let mut n = node.clone();
            n.id = id;
            n.parent = node.parent.map(|p| remap[p]);
            nodes.push(n);
        }
        for n in nodes.iter_mut() {
            n.children = n
                .children
                .iter()
                .filter(|&&c| keep[c])
                .map(|&c| remap[c])
                .collect();
        }
        TangleSearchTree {
            agreement: self.agreement,
            pool: self.pool.clone(),
            nodes,
        }
    }

    pub fn agreement(&self) -> usize {
        self.agreement
    }

    /// The cuts the tree was built over (after the cost cap).
    pub fn pool(&self) -> &CutPool {
        &self.pool
    }

    pub fn num_objects(&self) -> usize {
        self.pool.num_objects()
    }

    pub fn nodes(&self) -> &[TangleNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &TangleNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> &TangleNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.nodes.iter().filter(|n| n.is_leaf()).map(|n| n.id).collect()
    }

    /// Deepest level reached.
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.level).max().unwrap_or(0)
    }

    /// Node ids at `level`, in tree order.
    pub fn level_nodes(&self, level: usize) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.level == level)
            .map(|n| n.id)
            .collect()
    }

    /// Directions chosen along the root path of `id`, one per pool position.
    pub fn path_orientation(&self, id: usize) -> Vec<Direction> {
        let mut out = Vec::with_capacity(self.nodes[id].level);
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            out.push(self.nodes[cur].direction.expect("non-root node has a direction"));
            cur = p;
        }
        out.reverse();
        out
    }

    /// Orientations of the full pool, one per node at the last level.
    pub fn full_depth_orientations(&self) -> Vec<Vec<Direction>> {
        let m = self.pool.len();
        let mut out: Vec<Vec<Direction>> = self
            .level_nodes(m)
            .into_iter()
            .map(|id| self.path_orientation(id))
            .collect();
        out.sort();
        out
    }

    /// The oriented side added at node `id`.
    pub fn oriented_side(&self, id: usize) -> Option<OrientedSide> {
        let node = &self.nodes[id];
        let pos = node.cut_position()?;
        let d = node.direction?;
        let cut = self.pool.get(pos);
        Some(OrientedSide {
            cut_id: cut.id(),
            direction: d,
            members: cut.side_set(d),
        })
    }

    /// Whether the root path of `id` passes the triple check on every side, not only the core.
    pub fn path_fully_consistent(&self, id: usize) -> bool {
        let dirs = self.path_orientation(id);
        let sides: Vec<SideRef> = dirs
            .iter()
            .enumerate()
            .map(|(i, &d)| self.pool.get(i).side(d))
            .collect();
        all_triples_consistent(&sides, self.agreement)
    }

    /// Whether the core of `id` is inclusion-minimal and covers every side on the root path.
    pub fn core_is_valid(&self, id: usize) -> bool {
        let core = core_sides(&self.pool, &self.nodes[id].core);
        for (i, &x) in core.iter().enumerate() {
            for (j, &y) in core.iter().enumerate() {
                if i != j && side_subset(x, y) {
                    return false;
                }
            }
        }
        self.path_orientation(id)
            .iter()
            .enumerate()
            .all(|(pos, &d)| {
                let s = self.pool.get(pos).side(d);
                core.iter().any(|&c| side_subset(c, s))
            })
            && all_triples_consistent(&core, self.agreement)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = TreeJson {
            schema_version: TREE_SCHEMA_VERSION,
            agreement: self.agreement,
            num_objects: self.num_objects(),
            cut_ids: self.pool.cuts().iter().map(|c| c.id()).collect(),
            cut_costs: self.pool.cuts().iter().map(|c| c.cost()).collect(),
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeJson {
                    id: n.id,
                    parent_id: n.parent,
                    level: n.level,
                    cut_id: n.cut_position().map(|p| self.pool.get(p).id()),
                    direction: n.direction,
                    maximal: n.maximal,
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("tree serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::{make_cut, ObjectUniverse};

    fn pool_from(n: usize, sides: &[&[usize]]) -> CutPool {
        let u = ObjectUniverse::new(n).unwrap();
        let cuts = sides
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut c = make_cut(u, BitSet::from_indices(n, s.iter().copied()), i).unwrap();
                c.set_cost(i as f64);
                c
            })
            .collect();
        CutPool::new(u, cuts).unwrap()
    }

    #[test]
    fn consistent_examples() {
        let n = 6;
        let x = BitSet::from_indices(n, [1, 2, 3]);
        let y = BitSet::from_indices(n, [2, 3, 4]);
        let z = BitSet::from_indices(n, [3, 4, 5]);
        assert!(consistent(&[], SideRef::new(&z), 2));
        assert!(!consistent(&[], SideRef::new(&z), 4));
        assert!(!consistent(&[SideRef::new(&x), SideRef::new(&y)], SideRef::new(&z), 2));
        assert!(consistent(&[SideRef::new(&x), SideRef::new(&y)], SideRef::new(&z), 1));
    }

    #[test]
    fn extension_keeps_core_when_side_contains_core_set() {
        let pool = pool_from(6, &[&[0, 1], &[0, 1, 2]]);
        let c1 = extend_tangle(&pool, &[], 0, Direction::A, 2).unwrap();
        assert_eq!(c1, vec![(0, Direction::A)]);
        let c2 = extend_tangle(&pool, &c1, 1, Direction::A, 2).unwrap();
        assert_eq!(c2, c1);
    }

    #[test]
    fn extension_replaces_supersets() {
        let pool = pool_from(6, &[&[0, 1, 2, 3], &[0, 1]]);
        let c1 = extend_tangle(&pool, &[], 0, Direction::A, 2).unwrap();
        let c2 = extend_tangle(&pool, &c1, 1, Direction::A, 2).unwrap();
        assert_eq!(c2, vec![(1, Direction::A)]);
    }

    #[test]
    fn extension_rejects_disjoint_side() {
        // objects 1..=9 shifted to 0..=9; core {1..5}, side {6..9}
        let pool = pool_from(10, &[&[0, 1, 2, 3, 4, 5], &[0, 1, 2, 3, 4, 5]]);
        let c1 = extend_tangle(&pool, &[], 0, Direction::A, 3).unwrap();
        assert!(extend_tangle(&pool, &c1, 1, Direction::Complement, 3).is_none());
    }

    #[test]
    fn empty_pool_gives_root_only() {
        let u = ObjectUniverse::new(3).unwrap();
        let t = build_tree(&CutPool::empty(u), 1, None).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.full_depth_orientations(), vec![Vec::<Direction>::new()]);
        assert_eq!(brute_force_tangles(&CutPool::empty(u), 1).unwrap().len(), 1);
    }

    #[test]
    fn six_object_example() {
        let pool = pool_from(6, &[&[0, 1, 2], &[0, 1]]);
        let t = build_tree(&pool, 2, None).unwrap();
        assert_eq!(t.level_nodes(1).len(), 2);
        assert_eq!(t.level_nodes(2).len(), 2);
        assert_eq!(
            t.full_depth_orientations(),
            brute_force_tangles(&pool, 2).unwrap()
        );
        // the {0,1} side survives only under the {0,1,2} branch
        let with_01: Vec<_> = t
            .full_depth_orientations()
            .into_iter()
            .filter(|o| o[1] == Direction::A)
            .collect();
        assert_eq!(with_01, vec![vec![Direction::A, Direction::A]]);
    }

    #[test]
    fn single_cut_two_orientations() {
        let pool = pool_from(6, &[&[0, 1, 2]]);
        assert_eq!(brute_force_tangles(&pool, 3).unwrap().len(), 2);
        assert_eq!(brute_force_tangles(&pool, 4).unwrap().len(), 0);
    }

    #[test]
    fn max_psi_truncates_pool() {
        let pool = pool_from(6, &[&[0, 1, 2], &[0, 1], &[0]]);
        let t = build_tree(&pool, 1, Some(1.0)).unwrap();
        assert_eq!(t.pool().len(), 2);
        assert_eq!(t.depth(), 2);
    }

    #[test]
    fn leaves_failing_extension_are_maximal() {
        let pool = pool_from(6, &[&[0, 1, 2], &[0, 1, 2, 3]]);
        // a=3: complement of {0,1,2,3} has 2 objects, so {0,1,2} branch must take A,
        // the {3,4,5} branch intersects {0,1,2,3} in 1 object and dies.
        let t = build_tree(&pool, 3, None).unwrap();
        let compl = t.root().children()[1];
        assert!(t.node(compl).is_leaf());
        assert!(t.node(compl).maximal());
        let last = t.level_nodes(2);
        assert_eq!(last.len(), 1);
        assert!(!t.node(last[0]).maximal());
    }

    #[test]
    fn too_large_brute_force() {
        let sides: Vec<Vec<usize>> = (0..17).map(|i| vec![0, i % 5 + 1]).collect();
        let refs: Vec<&[usize]> = sides.iter().map(|v| v.as_slice()).collect();
        let pool = pool_from(8, &refs);
        assert!(matches!(
            brute_force_tangles(&pool, 1),
            Err(TangleError::TooLarge { size: 17, .. })
        ));
    }

    #[test]
    fn json_schema_fields() {
        let pool = pool_from(6, &[&[0, 1, 2], &[0, 1]]);
        let t = build_tree(&pool, 2, None).unwrap();
        let j = t.to_json();
        assert_eq!(j["schema_version"], 1);
        assert_eq!(j["num_objects"], 6);
        assert_eq!(j["nodes"].as_array().unwrap().len(), t.len());
        assert_eq!(j["nodes"][1]["direction"], "a");
        assert_eq!(j["nodes"][0]["parent_id"], serde_json::Value::Null);
    }

    #[test]
    fn from_parts_orders_children() {
        let pool = pool_from(4, &[&[0, 1]]);
        let t = TangleSearchTree::from_parts(
            pool,
            1,
            &[
                (None, None),
                (Some(0), Some(Direction::Complement)),
                (Some(0), Some(Direction::A)),
            ],
        )
        .unwrap();
        assert_eq!(t.root().children(), &[2, 1]);
    }
}
