//! The three dataset shapes: binary answer matrices, weighted graphs and point clouds.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TangleError};

/// Row-major `n × m` matrix of 0/1 entries (rows are objects).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl BinaryMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(TangleError::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(bad) = data.iter().find(|&&x| x > 1) {
            return Err(TangleError::params(format!("binary matrix entry {bad} is not 0 or 1")));
        }
        Ok(BinaryMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(TangleError::LengthMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        BinaryMatrix::new(rows.len(), cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.data[r * self.cols + c] = v as u8;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = u8> + '_ {
        (0..self.rows).map(move |r| self.get(r, c))
    }
}

/// Undirected weighted graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Validates indices, rejects self-loops and negative or non-finite weights.
    /// Parallel edges are kept and act additively.
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(TangleError::params(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(TangleError::params(format!("self-loop at node {u}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(TangleError::params(format!(
                    "edge ({u}, {v}) has invalid weight {w}"
                )));
            }
        }
        Ok(Graph { n, edges })
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Dense symmetric weight matrix, row-major.
    pub fn dense_weights(&self) -> Vec<f64> {
        let n = self.n;
        let mut w = vec![0.0; n * n];
        for &(u, v, x) in &self.edges {
            w[u * n + v] += x;
            w[v * n + u] += x;
        }
        w
    }
}

/// `n × d` matrix of finite reals (rows are points).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    n: usize,
    d: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(n: usize, d: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != n * d {
            return Err(TangleError::LengthMismatch {
                expected: n * d,
                found: coords.len(),
            });
        }
        if d == 0 {
            return Err(TangleError::params("points need at least one dimension"));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(TangleError::params("point coordinates must be finite"));
        }
        Ok(PointCloud { n, d, coords })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.len());
        let mut coords = Vec::with_capacity(rows.len() * d);
        for r in rows {
            if r.len() != d {
                return Err(TangleError::LengthMismatch {
                    expected: d,
                    found: r.len(),
                });
            }
            coords.extend_from_slice(r);
        }
        PointCloud::new(rows.len(), d, coords)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    #[inline]
    pub fn coord(&self, i: usize, axis: usize) -> f64 {
        self.coords[i * self.d + axis]
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Number of points that coincide with an earlier point.
    pub fn duplicate_count(&self) -> usize {
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.sort_by(|&a, &b| {
            self.point(a)
                .iter()
                .zip(self.point(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        idx.windows(2)
            .filter(|w| self.point(w[0]) == self.point(w[1]))
            .count()
    }
}
