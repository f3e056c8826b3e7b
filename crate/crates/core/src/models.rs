//! Synthetic data models and evaluators for the recovery guarantees.

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{BinaryMatrix, Graph, PointCloud};
use crate::error::{Result, TangleError};
use crate::rng::stage_rng;

/// Largest question count accepted by [`check_nondegeneracy`].
pub const NONDEGENERACY_LIMIT: usize = 22;

/// Group sizes for `n` items in `k` groups, remainders to the lowest groups.
pub fn group_sizes(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|g| n / k + usize::from(g < n % k)).collect()
}

/// Contiguous labels with the sizes of [`group_sizes`].
pub fn balanced_labels(n: usize, k: usize) -> Vec<usize> {
    group_sizes(n, k)
        .into_iter()
        .enumerate()
        .flat_map(|(g, s)| std::iter::repeat_n(g, s))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MindsetInstance {
    /// `k × m` ground-truth answer vectors.
    pub mindsets: BinaryMatrix,
    /// `n × m` observed answers.
    pub answers: BinaryMatrix,
    pub labels: Vec<usize>,
    pub p: f64,
    pub seed: u64,
}

/// `k` fair-coin mindsets over `m` questions; person `i` copies the mindset of
/// its group and flips each answer independently with probability `p`.
pub fn gen_mindsets(n: usize, m: usize, k: usize, p: f64, seed: u64) -> Result<MindsetInstance> {
    if k == 0 || k > n || m == 0 {
        return Err(TangleError::params(format!(
            "need 1 <= k <= n and m >= 1 (n={n}, m={m}, k={k})"
        )));
    }
    if !(0.0..0.5).contains(&p) {
        return Err(TangleError::params(format!("noise p must lie in [0, 0.5), got {p}")));
    }
    let mut rng = stage_rng(seed, "mindsets");
    let mu: Vec<u8> = (0..k * m).map(|_| rng.random::<bool>() as u8).collect();
    let mindsets = BinaryMatrix::new(k, m, mu)?;
    let labels = balanced_labels(n, k);
    let mut rng = stage_rng(seed, "answers");
    let mut data = Vec::with_capacity(n * m);
    for &g in &labels {
        for j in 0..m {
            let flip = p > 0.0 && rng.random_bool(p);
            data.push(mindsets.get(g, j) ^ flip as u8);
        }
    }
    Ok(MindsetInstance {
        mindsets,
        answers: BinaryMatrix::new(n, m, data)?,
        labels,
        p,
        seed,
    })
}

/// True iff no answer vector other than the mindsets agrees, on every triple of
/// questions (with repetition), with some mindset on all three.
pub fn check_nondegeneracy(mindsets: &BinaryMatrix) -> Result<bool> {
    let (k, m) = (mindsets.rows(), mindsets.cols());
    if m > NONDEGENERACY_LIMIT {
        return Err(TangleError::TooLarge {
            size: m,
            limit: NONDEGENERACY_LIMIT,
        });
    }
    if k > 128 {
        return Err(TangleError::TooLarge { size: k, limit: 128 });
    }
    // masks[j][b]: mindsets whose answer to question j is b
    let masks: Vec<[u128; 2]> = (0..m)
        .map(|j| {
            let mut w = [0u128; 2];
            for i in 0..k {
                w[mindsets.get(i, j) as usize] |= 1 << i;
            }
            w
        })
        .collect();
    let mut agree = vec![0u128; m];
    Ok(!search_degenerate(&masks, &mut agree, 0))
}

/// Depth-first search for a spurious answer vector; `agree[j]` holds the
/// mindsets matching the partial vector at question `j`.
fn search_degenerate(masks: &[[u128; 2]], agree: &mut [u128], j: usize) -> bool {
    let m = masks.len();
    if j == m {
        return agree.iter().fold(u128::MAX, |acc, &x| acc & x) == 0;
    }
    for b in 0..2 {
        let aj = masks[j][b];
        if aj == 0 {
            continue;
        }
        let ok = (0..j).all(|x| {
            let ax = agree[x] & aj;
            ax != 0 && (x..j).all(|y| ax & agree[y] != 0)
        });
        if ok {
            agree[j] = aj;
            if search_degenerate(masks, agree, j + 1) {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbmInstance {
    pub labels: Vec<usize>,
    pub graph: Graph,
    pub p: f64,
    pub q: f64,
    pub seed: u64,
    pub expected_mode: bool,
}

/// Block model on `n` nodes. Sampled mode draws unweighted edges with
/// probability `p` inside and `q` across blocks; expected mode returns the
/// complete graph weighted by those probabilities (zero weights omitted).
pub fn gen_sbm(n: usize, blocks: usize, p: f64, q: f64, seed: u64, expected_mode: bool) -> Result<SbmInstance> {
    if blocks == 0 || blocks > n {
        return Err(TangleError::params(format!("need 1 <= blocks <= n, got {blocks}")));
    }
    if !(0.0 <= q && q < p && p <= 1.0) {
        return Err(TangleError::params(format!("need 0 <= q < p <= 1, got p={p}, q={q}")));
    }
    let labels = balanced_labels(n, blocks);
    let mut rng = stage_rng(seed, "sbm");
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let prob = if labels[u] == labels[v] { p } else { q };
            if expected_mode {
                if prob > 0.0 {
                    edges.push((u, v, prob));
                }
            } else if rng.random_bool(prob) {
                edges.push((u, v, 1.0));
            }
        }
    }
    Ok(SbmInstance {
        labels,
        graph: Graph::new(n, edges)?,
        p,
        q,
        seed,
        expected_mode,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GmmInstance {
    pub centers: Vec<Vec<f64>>,
    pub sigma: f64,
    pub points: PointCloud,
    pub labels: Vec<usize>,
}

/// `n` points from an equal-weight isotropic mixture; label counts are exact.
pub fn gen_gmm(centers: &[Vec<f64>], sigma: f64, n: usize, seed: u64) -> Result<GmmInstance> {
    let k = centers.len();
    if k == 0 || k > n {
        return Err(TangleError::params("need between 1 and n centers"));
    }
    let d = centers[0].len();
    if d == 0 || centers.iter().any(|c| c.len() != d) {
        return Err(TangleError::params("centers must share a positive dimension"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(TangleError::params(format!("sigma must be positive, got {sigma}")));
    }
    let labels = balanced_labels(n, k);
    let mut rng = stage_rng(seed, "gmm");
    let mut coords = Vec::with_capacity(n * d);
    for &g in &labels {
        for c in &centers[g] {
            let z: f64 = StandardNormal.sample(&mut rng);
            coords.push(c + sigma * z);
        }
    }
    Ok(GmmInstance {
        centers: centers.to_vec(),
        sigma,
        points: PointCloud::new(n, d, coords)?,
        labels,
    })
}

/// Expected cost of a cut taking fractions `alpha1`, `alpha2` of two blocks of size `n/2`.
pub fn expected_sbm_cut_cost(alpha1: f64, alpha2: f64, n: f64, p: f64, q: f64) -> f64 {
    n * n / 4.0
        * (p * (alpha1 - alpha1 * alpha1 + alpha2 - alpha2 * alpha2)
            + q * (alpha1 + alpha2 - 2.0 * alpha1 * alpha2))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm1Bounds {
    /// Bound on the probability that some mindset does not induce a tangle.
    pub prob_missing: f64,
    /// Bound on the probability of a tangle that matches no mindset.
    pub prob_spurious: f64,
    /// `p < 1/(k+3)` and `pn < a < (1−3p)n/k`.
    pub valid: bool,
}

impl Thm1Bounds {
    pub fn total(&self) -> f64 {
        self.prob_missing + self.prob_spurious
    }
}

/// Recovery bounds for the mindset model with `n` people, `m` questions, `k` mindsets.
///
/// Uses the forms `km·exp(−2n(ka/n − 1 + 3p)²/(9k))` and `km·exp(−2n(a/n − p)²/k)`.
/// The supporting lemmas state the same exponents per question and per mindset,
/// summed over the `k·m` events by the union bound.
pub fn thm1_bounds(n: usize, m: usize, k: usize, p: f64, a: f64) -> Thm1Bounds {
    let (nf, mf, kf) = (n as f64, m as f64, k as f64);
    let x = kf * a / nf - 1.0 + 3.0 * p;
    let prob_missing = kf * mf * (-2.0 * nf * x * x / (9.0 * kf)).exp();
    let y = a / nf - p;
    let prob_spurious = kf * mf * (-2.0 * nf * y * y / kf).exp();
    let valid = p < 1.0 / (kf + 3.0) && p * nf < a && a < (1.0 - 3.0 * p) * nf / kf;
    Thm1Bounds {
        prob_missing,
        prob_spurious,
        valid,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm2Range {
    /// Admissible `[lower, upper)` cost window, `None` when gates fail or bounds cross.
    pub interval: Option<(f64, f64)>,
    /// `p < 2q`: at most one tangle for any cost threshold.
    pub non_identifiable: bool,
    /// `q(n/2)²`, reported even when the window is empty.
    pub lower: f64,
    /// Upper expression, reported even when the window is empty.
    pub upper: f64,
}

/// Cost window in which the two blocks of a two-block model are exactly the tangles.
pub fn thm2_psi_range(n: f64, p: f64, q: f64, a: f64) -> Thm2Range {
    let lower = q * (n / 2.0) * (n / 2.0);
    let xi = 1.0 + q / p;
    let r = xi - 2.0 * a / n;
    let upper = n * n / 4.0 * p * (xi * r / 3.0 - (r / 3.0) * (r / 3.0));
    let gates = a >= 2.0 && n - 2.0 * a > 0.0 && p > 3.0 * q * n / (n - 2.0 * a);
    Thm2Range {
        interval: (gates && lower < upper).then_some((lower, upper)),
        non_identifiable: p < 2.0 * q,
        lower,
        upper,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussRange {
    /// Two tangles exist for `a < n/12`.
    pub a_max_existence: f64,
    /// Axis of largest centre separation.
    pub axis: usize,
    pub separation: f64,
    /// Tail mass `(1 + erf(−d/(2√(2σ²))))/2` on that axis.
    pub q: f64,
    /// `n(0.42q + 0.06)`; `None` when `d ≤ 2σ` on every axis.
    pub a_min_uniqueness: Option<f64>,
    /// The sharper `n(0.42q + 0.056)`.
    pub a_min_uniqueness_sharp: Option<f64>,
    pub no_separation: bool,
}

/// Agreement range for a two-component isotropic mixture with centres `mu`, `nu`.
pub fn thm_gauss_agreement_range(mu: &[f64], nu: &[f64], sigma: f64, n: f64) -> Result<GaussRange> {
    if mu.len() != nu.len() || mu.is_empty() {
        return Err(TangleError::params("centres must share a positive dimension"));
    }
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(TangleError::params("sigma must be positive"));
    }
    let (axis, d) = mu
        .iter()
        .zip(nu)
        .map(|(a, b)| (a - b).abs())
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (j, d)| if d > best.1 { (j, d) } else { best });
    let q = (1.0 + libm::erf(-d / (2.0 * (2.0 * sigma * sigma).sqrt()))) / 2.0;
    let separated = d > 2.0 * sigma;
    Ok(GaussRange {
        a_max_existence: n / 12.0,
        axis,
        separation: d,
        q,
        a_min_uniqueness: separated.then_some(n * (0.42 * q + 0.06)),
        a_min_uniqueness_sharp: separated.then_some(n * (0.42 * q + 0.056)),
        no_separation: !separated,
    })
}
