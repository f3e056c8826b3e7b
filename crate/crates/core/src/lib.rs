//! Clustering with tangles.
//!
//! A tangle is a consistent orientation of a set of bipartitions ("cuts") of a
//! dataset: every triple of chosen sides must share at least `a` objects. Cheap
//! cuts are oriented first, so a tangle acts as an abstract cluster centre that
//! points towards a dense region without committing individual objects.
//!
//! The crate is organised along the pipeline:
//!
//! * [`cut`] and [`cost`]: object universe, bipartitions as bit-vectors, cost functions.
//! * [`cutgen`]: initial cut pools for questionnaires, graphs and point clouds.
//! * [`search`]: the tangle search tree and a brute-force oracle.
//! * [`postprocess`]: pruning, condensing into a soft dendrogram, soft/hard
//!   assignments and axis-interval interpretations.
//! * [`models`]: synthetic generators (mindsets, block models, Gaussian mixtures)
//!   and evaluators for the recovery bounds.
//! * [`eval`]: NMI, Spearman correlation and seeded experiment orchestration.
//! * [`cli`]: the command-line front end used by the `tangles` binary.
//!
//! ```
//! use tangles::prelude::*;
//!
//! let inst = gen_mindsets(90, 12, 3, 0.0, 7).unwrap();
//! let pool = column_cuts(&inst.answers).unwrap();
//! let pool = cost_questionnaire(pool, &inst.answers).unwrap();
//! let out = cluster_pool(pool, &ClusterParams::new(10)).unwrap();
//! assert_eq!(out.leaf_count(), 3);
//! ```

pub mod bitset;
pub mod cli;
pub mod cost;
pub mod cut;
pub mod cutgen;
pub mod data;
pub mod error;
pub mod eval;
pub mod io;
pub mod models;
pub mod pipeline;
pub mod postprocess;
pub mod rng;
pub mod search;

pub use error::{Result, TangleError};

/// Commonly used items.
pub mod prelude {
    pub use crate::bitset::{BitSet, SideRef};
    pub use crate::cost::{
        exp_distance_cost, graph_cut_cost, hamming_agreement, mean_hamming_cost,
        mean_similarity_cost, normalize_cost,
    };
    pub use crate::cut::{make_cut, AxisCutMeta, Bipartition, CutPool, Direction, ObjectUniverse};
    pub use crate::cutgen::{axis_slices, column_cuts, kl_cuts, random_projection_cuts};
    pub use crate::data::{BinaryMatrix, Graph, PointCloud};
    pub use crate::error::{Result, TangleError};
    pub use crate::eval::{nmi, spearman_rho};
    pub use crate::models::{gen_gmm, gen_mindsets, gen_sbm};
    pub use crate::pipeline::{
        cluster_pool, cost_graph, cost_points, cost_questionnaire, ClusterOutput, ClusterParams,
    };
    pub use crate::postprocess::{
        condense, hard_assignments, prune_tree, soft_assignments, soft_dendrogram, WeightingFn,
    };
    pub use crate::search::{brute_force_tangles, build_tree, TangleSearchTree};
}
