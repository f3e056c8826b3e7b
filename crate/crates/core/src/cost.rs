//! Cut cost functions. All are symmetric in the two sides of a cut.

use rayon::prelude::*;

use crate::cut::{Bipartition, Direction};
use crate::data::{BinaryMatrix, Graph, PointCloud};
use crate::error::{Result, TangleError};

/// Number of coordinates on which `u` and `v` agree.
pub fn hamming_agreement(u: &[u8], v: &[u8]) -> Result<usize> {
    if u.len() != v.len() {
        return Err(TangleError::LengthMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(u.iter().zip(v).filter(|(a, b)| a == b).count())
}

fn sides(cut: &Bipartition) -> (Vec<usize>, Vec<usize>) {
    let a: Vec<usize> = cut.side_a().iter_ones().collect();
    let b: Vec<usize> = cut.side_set(Direction::Complement).iter_ones().collect();
    (a, b)
}

/// Sums `f(u)` over `u ∈ rows` in parallel, reducing the partials in order.
fn ordered_sum<F>(rows: &[usize], f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let partials: Vec<f64> = rows.par_iter().map(|&u| f(u)).collect();
    partials.iter().sum()
}

/// Mean of `sim(u, v)` over all pairs `u ∈ A`, `v ∈ A^∁`.
pub fn mean_similarity_cost<F>(cut: &Bipartition, sim: F) -> f64
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let (a, b) = sides(cut);
    let total = ordered_sum(&a, |u| b.iter().map(|&v| sim(u, v)).sum());
    total / (a.len() as f64 * b.len() as f64)
}

/// Mean Hamming agreement across the cut, computed from per-column counts in `O(n·m)`.
///
/// Equal to `mean_similarity_cost` with `hamming_agreement` as the similarity.
pub fn mean_hamming_cost(cut: &Bipartition, answers: &BinaryMatrix) -> Result<f64> {
    check_universe(cut, answers.rows())?;
    let m = answers.cols();
    let mut ones_a = vec![0u64; m];
    let mut ones_b = vec![0u64; m];
    for r in 0..answers.rows() {
        let target = if cut.side_a().get(r) { &mut ones_a } else { &mut ones_b };
        for (c, t) in answers.row(r).iter().zip(target.iter_mut()) {
            *t += *c as u64;
        }
    }
    let na = cut.size_a() as u64;
    let nb = cut.num_objects() as u64 - na;
    let agree: u64 = (0..m)
        .map(|c| ones_a[c] * ones_b[c] + (na - ones_a[c]) * (nb - ones_b[c]))
        .sum();
    Ok(agree as f64 / (na as f64 * nb as f64))
}

/// Total weight of edges crossing the cut.
pub fn graph_cut_cost(cut: &Bipartition, graph: &Graph) -> Result<f64> {
    check_universe(cut, graph.num_nodes())?;
    let side = cut.side_a();
    Ok(graph
        .edges()
        .iter()
        .filter(|&&(u, v, _)| side.get(u) != side.get(v))
        .map(|&(_, _, w)| w)
        .sum())
}

/// `Σ exp(−‖v − u‖)` over all pairs `v ∈ A`, `u ∈ A^∁`.
pub fn exp_distance_cost(cut: &Bipartition, points: &PointCloud) -> Result<f64> {
    check_universe(cut, points.len())?;
    let (a, b) = sides(cut);
    Ok(ordered_sum(&a, |u| {
        b.iter().map(|&v| (-points.distance(u, v)).exp()).sum()
    }))
}

/// `raw / (|A| · (n − |A|))`.
pub fn normalize_cost(raw: f64, cut: &Bipartition) -> f64 {
    let a = cut.size_a() as f64;
    let n = cut.num_objects() as f64;
    raw / (a * (n - a))
}

fn check_universe(cut: &Bipartition, n: usize) -> Result<()> {
    if cut.num_objects() != n {
        return Err(TangleError::UniverseMismatch {
            cut: cut.num_objects(),
            data: n,
        });
    }
    Ok(())
}
