//! Initial cut pools for questionnaires, graphs and point clouds.

use log::warn;
use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::cut::{make_cut, Bipartition, CutPool, ObjectUniverse};
use crate::data::{BinaryMatrix, Graph, PointCloud};
use crate::error::{Result, TangleError};
use crate::rng::indexed_rng;

/// Largest universe accepted by [`all_bipartitions`].
pub const ALL_BIPARTITIONS_LIMIT: usize = 20;

/// One cut per column (`A` = objects answering 1); constant columns are skipped.
pub fn column_cuts(answers: &BinaryMatrix) -> Result<CutPool> {
    let u = ObjectUniverse::new(answers.rows())?;
    let mut cuts = Vec::with_capacity(answers.cols());
    for c in 0..answers.cols() {
        let bits: Vec<bool> = answers.column(c).map(|x| x == 1).collect();
        match make_cut(u, BitSet::from_bools(&bits), c) {
            Ok(cut) => cuts.push(cut),
            Err(TangleError::EmptySide) => warn!("column {c} is constant; skipped"),
            Err(e) => return Err(e),
        }
    }
    CutPool::new(u, cuts)
}

struct Dense {
    n: usize,
    w: Vec<f64>,
}

impl Dense {
    #[inline]
    fn at(&self, u: usize, v: usize) -> f64 {
        self.w[u * self.n + v]
    }
}

/// External minus internal weighted degree of every node.
fn d_values(g: &Dense, side: &[bool]) -> Vec<f64> {
    (0..g.n)
        .map(|u| {
            (0..g.n)
                .map(|v| if side[u] == side[v] { -g.at(u, v) } else { g.at(u, v) })
                .sum()
        })
        .collect()
}

/// One Kernighan-Lin pass. Returns the committed gain, or `None` if no prefix has positive gain.
fn kl_pass(g: &Dense, side: &mut [bool]) -> Option<f64> {
    let mut d = d_values(g, side);
    let mut locked = vec![false; g.n];
    let mut swaps: Vec<(usize, usize, f64)> = Vec::new();
    let steps = side.iter().filter(|&&s| s).count().min(side.iter().filter(|&&s| !s).count());
    for _ in 0..steps {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in (0..g.n).filter(|&a| side[a] && !locked[a]) {
            for b in (0..g.n).filter(|&b| !side[b] && !locked[b]) {
                let gain = d[a] + d[b] - 2.0 * g.at(a, b);
                if best.is_none_or(|(_, _, x)| gain > x) {
                    best = Some((a, b, gain));
                }
            }
        }
        let (a, b, gain) = best.expect("both sides have unlocked nodes");
        locked[a] = true;
        locked[b] = true;
        for x in 0..g.n {
            if locked[x] {
                continue;
            }
            if side[x] {
                d[x] += 2.0 * g.at(x, a) - 2.0 * g.at(x, b);
            } else {
                d[x] += 2.0 * g.at(x, b) - 2.0 * g.at(x, a);
            }
        }
        swaps.push((a, b, gain));
    }
    let mut best_k = 0;
    let mut best_sum = 0.0;
    let mut sum = 0.0;
    for (k, &(_, _, gain)) in swaps.iter().enumerate() {
        sum += gain;
        if sum > best_sum {
            best_sum = sum;
            best_k = k + 1;
        }
    }
    if best_k == 0 || best_sum <= 1e-12 {
        return None;
    }
    for &(a, b, _) in &swaps[..best_k] {
        side[a] = false;
        side[b] = true;
    }
    Some(best_sum)
}

/// Runs at most `iterations` Kernighan-Lin passes from `initial`, stopping early
/// when a pass finds no improving prefix.
pub fn kl_refine(graph: &Graph, initial: &BitSet, iterations: usize) -> Result<BitSet> {
    if initial.len() != graph.num_nodes() {
        return Err(TangleError::UniverseMismatch {
            cut: initial.len(),
            data: graph.num_nodes(),
        });
    }
    let g = Dense {
        n: graph.num_nodes(),
        w: graph.dense_weights(),
    };
    let mut side = initial.to_bools();
    for _ in 0..iterations {
        if kl_pass(&g, &mut side).is_none() {
            break;
        }
    }
    Ok(BitSet::from_bools(&side))
}

/// `count` cuts, each refined by Kernighan-Lin from a random balanced start.
///
/// Cut `i` draws its start from its own seeded stream. Repeated cuts are
/// dropped, so the pool may hold fewer than `count` cuts.
pub fn kl_cuts(graph: &Graph, count: usize, iterations: usize, seed: u64) -> Result<CutPool> {
    let n = graph.num_nodes();
    if n < 2 {
        return Err(TangleError::TooFewNodes(n));
    }
    if count == 0 || iterations == 0 {
        return Err(TangleError::params("count and iterations must be at least 1"));
    }
    let u = ObjectUniverse::new(n)?;
    let g = Dense {
        n,
        w: graph.dense_weights(),
    };
    let cuts: Vec<Bipartition> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = indexed_rng(seed, "kl", i as u64);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut side = vec![false; n];
            for &v in &order[..n / 2] {
                side[v] = true;
            }
            for _ in 0..iterations {
                if kl_pass(&g, &mut side).is_none() {
                    break;
                }
            }
            make_cut(u, BitSet::from_bools(&side), i)
        })
        .collect::<Result<_>>()?;
    Ok(CutPool::new(u, cuts)?.dedup())
}

fn sorted_order(n: usize, key: impl Fn(usize) -> f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| key(x).total_cmp(&key(y)).then(x.cmp(&y)));
    idx
}

/// Axis-parallel cuts `{x_axis < t}`: per axis the first cut isolates one point,
/// then each next cut adds `a − 1` points, while more than `a − 1` points remain
/// above. Equal coordinates are ordered by object index.
pub fn axis_slices(points: &PointCloud, a: usize) -> Result<CutPool> {
    if a < 2 {
        return Err(TangleError::params("axis slicing needs agreement a >= 2"));
    }
    let n = points.len();
    if n < 2 {
        return Err(TangleError::TooFewNodes(n));
    }
    let u = ObjectUniverse::new(n)?;
    let mut cuts = Vec::new();
    for axis in 0..points.dim() {
        let order = sorted_order(n, |i| points.coord(i, axis));
        let lo = points.coord(order[0], axis);
        let hi = points.coord(order[n - 1], axis);
        if lo == hi {
            warn!("axis {axis} is constant; skipped");
            continue;
        }
        let mut s = 1;
        loop {
            let below = BitSet::from_indices(n, order[..s].iter().copied());
            let t = 0.5 * (points.coord(order[s - 1], axis) + points.coord(order[s], axis));
            let id = cuts.len();
            cuts.push(make_cut(u, below.clone(), id)?.with_axis(axis, t, &below));
            if n - s < a {
                break;
            }
            s += a - 1;
        }
    }
    if cuts.is_empty() {
        return Err(TangleError::DegenerateAxis);
    }
    CutPool::new(u, cuts)
}

/// Splits sorted values by the threshold minimising within-group squared error.
/// Returns the size of the lower group.
fn two_means_split(sorted: &[f64]) -> usize {
    let n = sorted.len();
    let total: f64 = sorted.iter().sum();
    let total_sq: f64 = sorted.iter().map(|x| x * x).sum();
    let mut s = 0.0;
    let mut sq = 0.0;
    let mut best = (f64::INFINITY, 1);
    for k in 1..n {
        s += sorted[k - 1];
        sq += sorted[k - 1] * sorted[k - 1];
        let (rs, rsq) = (total - s, total_sq - sq);
        let within = (sq - s * s / k as f64) + (rsq - rs * rs / (n - k) as f64);
        if within < best.0 {
            best = (within, k);
        }
    }
    best.1
}

/// Cuts from 1-D 2-means on random projections; repeated cuts are dropped.
pub fn random_projection_cuts(points: &PointCloud, count: usize, seed: u64) -> Result<CutPool> {
    let n = points.len();
    if n < 2 {
        return Err(TangleError::TooFewNodes(n));
    }
    if count == 0 {
        return Err(TangleError::params("count must be at least 1"));
    }
    let u = ObjectUniverse::new(n)?;
    let d = points.dim();
    let cuts: Vec<Bipartition> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = indexed_rng(seed, "projection", i as u64);
            let dir = loop {
                let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    break v.into_iter().map(|x| x / norm).collect::<Vec<_>>();
                }
            };
            let proj: Vec<f64> = (0..n)
                .map(|p| points.point(p).iter().zip(&dir).map(|(x, y)| x * y).sum())
                .collect();
            let order = sorted_order(n, |p| proj[p]);
            let sorted: Vec<f64> = order.iter().map(|&p| proj[p]).collect();
            let k = two_means_split(&sorted);
            make_cut(u, BitSet::from_indices(n, order[..k].iter().copied()), i)
        })
        .collect::<Result<_>>()?;
    Ok(CutPool::new(u, cuts)?.dedup())
}

/// Every non-trivial bipartition of `n` objects, `2^(n−1) − 1` cuts.
pub fn all_bipartitions(n: usize) -> Result<CutPool> {
    if n < 2 {
        return Err(TangleError::TooFewNodes(n));
    }
    if n > ALL_BIPARTITIONS_LIMIT {
        return Err(TangleError::TooLarge {
            size: n,
            limit: ALL_BIPARTITIONS_LIMIT,
        });
    }
    let u = ObjectUniverse::new(n)?;
    // Object 0 is always on side A; the mask chooses which of 1..n join it.
    let cuts = (0u64..(1u64 << (n - 1)) - 1)
        .map(|mask| {
            let side = BitSet::from_indices(
                n,
                std::iter::once(0).chain((1..n).filter(|&i| mask >> (i - 1) & 1 == 1)),
            );
            make_cut(u, side, mask as usize)
        })
        .collect::<Result<_>>()?;
    CutPool::new(u, cuts)
}
