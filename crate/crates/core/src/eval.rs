//! Clustering scores and seeded experiment runs.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cutgen::{axis_slices, column_cuts, kl_cuts, random_projection_cuts};
use crate::error::{Result, TangleError};
use crate::models::{gen_gmm, gen_mindsets, gen_sbm, group_sizes};
use crate::pipeline::{cluster_pool, cost_graph, cost_points, cost_questionnaire, ClusterParams};
use crate::postprocess::WeightingFn;
use crate::rng::sub_seed;

/// JSON schema version of experiment reports.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalised mutual information, normalised by the mean of the two entropies.
/// Zero when either labelling is constant.
pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(TangleError::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let n = a.len() as f64;
    let mut ca: HashMap<usize, usize> = HashMap::new();
    let mut cb: HashMap<usize, usize> = HashMap::new();
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *ca.entry(x).or_default() += 1;
        *cb.entry(y).or_default() += 1;
        *joint.entry((x, y)).or_default() += 1;
    }
    if ca.len() <= 1 || cb.len() <= 1 {
        return Ok(0.0);
    }
    let ha = entropy(ca.values().copied(), n);
    let hb = entropy(cb.values().copied(), n);
    let mut cells: Vec<(&(usize, usize), &usize)> = joint.iter().collect();
    cells.sort_unstable();
    let mi: f64 = cells
        .into_iter()
        .map(|(&(x, y), &c)| {
            let pxy = c as f64 / n;
            let px = ca[&x] as f64 / n;
            let py = cb[&y] as f64 / n;
            pxy * (pxy / (px * py)).ln()
        })
        .sum();
    if ca.len() == cb.len() && cells_are_bijective(&joint, ca.len()) {
        return Ok(1.0);
    }
    Ok((mi / ((ha + hb) / 2.0)).clamp(0.0, 1.0))
}

/// True when the contingency table is a permutation, i.e. the labellings agree up to renaming.
fn cells_are_bijective(joint: &HashMap<(usize, usize), usize>, classes: usize) -> bool {
    joint.len() == classes
}

/// Average ranks (1-based), ties sharing the mean of their positions.
fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Spearman rank correlation; 0 when either input is constant.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(TangleError::LengthMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(TangleError::params("spearman_rho needs at least two samples"));
    }
    Ok(pearson(&ranks(x), &ranks(y)))
}

/// Cut generator for the point-cloud scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointCuts {
    AxisSlices,
    RandomProjection { count: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Scenario {
    Questionnaire {
        n: usize,
        m: usize,
        k: usize,
        p: f64,
    },
    Sbm {
        n: usize,
        blocks: usize,
        p: f64,
        q: f64,
        #[serde(default)]
        expected_mode: bool,
        #[serde(default = "default_kl_cuts")]
        cuts: usize,
        #[serde(default = "default_kl_iterations")]
        iterations: usize,
    },
    Gmm {
        n: usize,
        centers: Vec<Vec<f64>>,
        sigma: f64,
        #[serde(default = "default_point_cuts")]
        cutgen: PointCuts,
    },
}

fn default_kl_cuts() -> usize {
    20
}

fn default_kl_iterations() -> usize {
    2
}

fn default_point_cuts() -> PointCuts {
    PointCuts::AxisSlices
}

fn default_prune() -> usize {
    1
}

/// Parameter varied across the points of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    /// One of `p`, `q`, `sigma`, `agreement`.
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub seeds: Vec<u64>,
    /// Defaults to a third of the smallest expected cluster.
    #[serde(default)]
    pub agreement: Option<usize>,
    #[serde(default = "default_prune")]
    pub prune: usize,
    #[serde(default)]
    pub normalize: bool,
    #[serde(default)]
    pub max_psi: Option<f64>,
    #[serde(default)]
    pub weighting: WeightingFn,
    #[serde(default)]
    pub sweep: Option<Sweep>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| TangleError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(TangleError::Config("at least one seed is required".into()));
        }
        if let Some(s) = &self.sweep {
            if !["p", "q", "sigma", "agreement"].contains(&s.param.as_str()) {
                return Err(TangleError::Config(format!("cannot sweep over '{}'", s.param)));
            }
            if s.values.is_empty() {
                return Err(TangleError::Config("sweep needs at least one value".into()));
            }
        }
        self.weighting.validate()
    }

    /// `⌊smallest expected cluster / 3⌋`, at least 1 (2 for axis slicing).
    pub fn default_agreement(&self) -> usize {
        let (n, k) = match &self.scenario {
            Scenario::Questionnaire { n, k, .. } => (*n, *k),
            Scenario::Sbm { n, blocks, .. } => (*n, *blocks),
            Scenario::Gmm { n, centers, .. } => (*n, centers.len()),
        };
        let smallest = group_sizes(n, k.max(1)).into_iter().min().unwrap_or(0);
        let floor = match &self.scenario {
            Scenario::Gmm { cutgen: PointCuts::AxisSlices, .. } => 2,
            _ => 1,
        };
        (smallest / 3).max(floor)
    }

    /// Copy with the sweep parameter set to `x`.
    fn at(&self, param: &str, x: f64) -> ExperimentConfig {
        let mut c = self.clone();
        c.sweep = None;
        match (param, &mut c.scenario) {
            ("p", Scenario::Questionnaire { p, .. }) | ("p", Scenario::Sbm { p, .. }) => *p = x,
            ("q", Scenario::Sbm { q, .. }) => *q = x,
            ("sigma", Scenario::Gmm { sigma, .. }) => *sigma = x,
            ("agreement", _) => c.agreement = Some(x as usize),
            _ => {}
        }
        c
    }

    /// The x coordinate reported when no sweep is configured.
    fn default_x(&self) -> f64 {
        match &self.scenario {
            Scenario::Questionnaire { p, .. } | Scenario::Sbm { p, .. } => *p,
            Scenario::Gmm { sigma, .. } => *sigma,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedRow {
    pub seed: u64,
    pub nmi: f64,
    /// Leaves of the condensed tree.
    pub tangle_count: usize,
    pub cutgen_secs: f64,
    pub costing_secs: f64,
    pub tree_secs: f64,
    pub postprocess_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportPoint {
    pub x: f64,
    pub agreement: usize,
    pub rows: Vec<SeedRow>,
    pub mean_nmi: f64,
    /// Population standard deviation.
    pub std_nmi: f64,
    pub mean_tangle_count: f64,
    /// Most frequent tangle count; ties go to the smaller count.
    pub modal_tangle_count: usize,
}

impl ReportPoint {
    fn from_rows(x: f64, agreement: usize, rows: Vec<SeedRow>) -> Self {
        let (mean_nmi, std_nmi) = mean_std(rows.iter().map(|r| r.nmi));
        let mean_tangle_count = rows.iter().map(|r| r.tangle_count as f64).sum::<f64>() / rows.len() as f64;
        ReportPoint {
            x,
            agreement,
            mean_nmi,
            std_nmi,
            mean_tangle_count,
            modal_tangle_count: mode(rows.iter().map(|r| r.tangle_count)),
            rows,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub points: Vec<ReportPoint>,
}

/// Mean and population standard deviation.
pub fn mean_std(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = xs.collect();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Most frequent value; ties go to the smallest.
pub fn mode(xs: impl Iterator<Item = usize>) -> usize {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for x in xs {
        *counts.entry(x).or_default() += 1;
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map_or(0, |(v, _)| v)
}

/// Generates, clusters and scores one seeded instance.
pub fn run_seed(cfg: &ExperimentConfig, agreement: usize, seed: u64) -> Result<SeedRow> {
    let params = ClusterParams::new(agreement)
        .prune_depth(cfg.prune)
        .max_psi(cfg.max_psi)
        .weighting(cfg.weighting);
    let data_seed = sub_seed(seed, "data");
    let cut_seed = sub_seed(seed, "cuts");
    let (pool, truth, cutgen_secs, costing_secs) = match &cfg.scenario {
        Scenario::Questionnaire { n, m, k, p } => {
            let inst = gen_mindsets(*n, *m, *k, *p, data_seed)?;
            let t = Instant::now();
            let pool = column_cuts(&inst.answers)?;
            let cg = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let pool = cost_questionnaire(pool, &inst.answers)?;
            (pool, inst.labels, cg, t.elapsed().as_secs_f64())
        }
        Scenario::Sbm {
            n,
            blocks,
            p,
            q,
            expected_mode,
            cuts,
            iterations,
        } => {
            let inst = gen_sbm(*n, *blocks, *p, *q, data_seed, *expected_mode)?;
            let t = Instant::now();
            let pool = kl_cuts(&inst.graph, *cuts, *iterations, cut_seed)?;
            let cg = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let pool = cost_graph(pool, &inst.graph, cfg.normalize)?;
            (pool, inst.labels, cg, t.elapsed().as_secs_f64())
        }
        Scenario::Gmm {
            n,
            centers,
            sigma,
            cutgen,
        } => {
            let inst = gen_gmm(centers, *sigma, *n, data_seed)?;
            let t = Instant::now();
            let pool = match cutgen {
                PointCuts::AxisSlices => axis_slices(&inst.points, agreement)?,
                PointCuts::RandomProjection { count } => {
                    random_projection_cuts(&inst.points, *count, cut_seed)?
                }
            };
            let cg = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let pool = cost_points(pool, &inst.points, cfg.normalize)?;
            (pool, inst.labels, cg, t.elapsed().as_secs_f64())
        }
    };
    let out = cluster_pool(pool, &params)?;
    Ok(SeedRow {
        seed,
        nmi: nmi(&out.labels, &truth)?,
        tangle_count: out.leaf_count(),
        cutgen_secs,
        costing_secs,
        tree_secs: out.tree_secs,
        postprocess_secs: out.postprocess_secs,
    })
}

/// Runs every seed (and sweep value) of `cfg`; rows are ordered by seed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let settings: Vec<(f64, ExperimentConfig)> = match &cfg.sweep {
        Some(s) => s.values.iter().map(|&x| (x, cfg.at(&s.param, x))).collect(),
        None => vec![(cfg.default_x(), cfg.clone())],
    };
    let mut points = Vec::with_capacity(settings.len());
    for (x, c) in settings {
        let a = c.agreement.unwrap_or_else(|| c.default_agreement());
        let rows = c
            .seeds
            .par_iter()
            .map(|&s| run_seed(&c, a, s))
            .collect::<Result<Vec<_>>>()?;
        points.push(ReportPoint::from_rows(x, a, rows));
    }
    Ok(ExperimentReport {
        schema_version: REPORT_SCHEMA_VERSION,
        config: cfg.clone(),
        points,
    })
}
