//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors (including an
//! oracle mismatch).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cut::CutPool;
use crate::cutgen::{axis_slices, column_cuts, kl_cuts, random_projection_cuts};
use crate::error::TangleError;
use crate::eval::{run_experiment, ExperimentConfig, ExperimentReport};
use crate::io;
use crate::models::{gen_gmm, gen_mindsets, gen_sbm, thm1_bounds, thm2_psi_range, thm_gauss_agreement_range};
use crate::pipeline::{cluster_pool, cost_graph, cost_points, cost_questionnaire, ClusterParams};
use crate::postprocess::WeightingFn;
use crate::rng::sub_seed;
use crate::search::{brute_force_tangles, build_tree, BRUTE_FORCE_LIMIT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tangles", version, about = "Clustering with tangles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster a dataset and write labels, soft assignments and trees.
    Cluster(ClusterArgs),
    /// Write a synthetic dataset and its ground-truth labels.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Evaluate recovery bounds and print them as JSON.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Run a seeded experiment from a TOML config.
    Bench(BenchArgs),
    /// Compare the search tree with brute-force enumeration on a small input.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    BinaryMatrix,
    Graph,
    Points,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutKind {
    /// One cut per column (binary matrix).
    Column,
    /// Kernighan-Lin from random balanced starts (graph).
    Kl,
    /// Axis-parallel slices (points).
    AxisSlices,
    /// 2-means on random projections (points).
    RandomProjection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    Uniform,
    Exponential,
}

#[derive(Debug, Args, Serialize)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub format: Format,
    /// Agreement parameter a.
    #[arg(long)]
    pub agreement: usize,
    /// Cut generator; defaults by format (column, kl, axis-slices).
    #[arg(long, value_enum)]
    pub cuts: Option<CutKind>,
    /// Number of cuts for kl and random-projection.
    #[arg(long, default_value_t = 20)]
    pub cut_count: usize,
    /// Kernighan-Lin passes per cut.
    #[arg(long, default_value_t = 2)]
    pub kl_iterations: usize,
    /// Divide graph and point costs by |A|·|A^c|.
    #[arg(long)]
    pub normalize: bool,
    /// Ignore cuts costing more than this.
    #[arg(long)]
    pub max_psi: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ClusterArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Remove leaf branches of at most this length.
    #[arg(long, default_value_t = 1)]
    pub prune: usize,
    #[arg(long, value_enum, default_value_t = Weighting::Uniform)]
    pub weighting: Weighting,
    /// Rate of the exponential weighting.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GenerateCmd {
    /// Binary answers from k mindsets with flip noise p.
    Questionnaire {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Stochastic block model graph.
    Sbm {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        blocks: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Complete graph weighted by p and q instead of sampled edges.
        #[arg(long)]
        expected: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Isotropic Gaussian mixture.
    Gmm {
        #[arg(long)]
        n: usize,
        /// Centres as `x,y;x,y;...`.
        #[arg(long)]
        centers: String,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// Mindset recovery probabilities.
    Thm1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        a: f64,
    },
    /// Cost window for two-block recovery.
    Thm2 {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        a: f64,
    },
    /// Agreement range for a two-component Gaussian mixture.
    Gauss {
        /// First centre, comma-separated.
        #[arg(long)]
        mu: String,
        /// Second centre, comma-separated.
        #[arg(long)]
        nu: String,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        n: f64,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
}

enum Failure {
    Usage(String),
    Data(TangleError),
}

impl From<TangleError> for Failure {
    fn from(e: TangleError) -> Self {
        Failure::Data(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Cluster(args) => with_threads(args.input.threads, || cluster(&args)),
        Command::Generate(cmd) => generate(cmd),
        Command::Bounds(cmd) => bounds(cmd),
        Command::Bench(args) => with_threads(args.threads, || bench(&args)),
        Command::Oracle(args) => with_threads(args.input.threads, || oracle(&args)),
    }
}

fn with_threads<F>(threads: usize, f: F) -> CliResult<()>
where
    F: FnOnce() -> CliResult<()> + Send,
{
    if threads == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {threads} threads: {e}")))?;
    pool.install(f)
}

fn default_cuts(format: Format) -> CutKind {
    match format {
        Format::BinaryMatrix => CutKind::Column,
        Format::Graph => CutKind::Kl,
        Format::Points => CutKind::AxisSlices,
    }
}

fn check_input(args: &InputArgs) -> CliResult<CutKind> {
    if args.agreement == 0 {
        return Err(Failure::Usage("--agreement must be at least 1".into()));
    }
    let cuts = args.cuts.unwrap_or(default_cuts(args.format));
    let ok = matches!(
        (args.format, cuts),
        (Format::BinaryMatrix, CutKind::Column)
            | (Format::Graph, CutKind::Kl)
            | (Format::Points, CutKind::AxisSlices | CutKind::RandomProjection)
    );
    if !ok {
        return Err(Failure::Usage(format!(
            "cut generator {cuts:?} does not apply to format {:?}",
            args.format
        )));
    }
    if args.max_psi.is_some_and(|x| x.is_nan()) {
        return Err(Failure::Usage("--max-psi must be a number".into()));
    }
    Ok(cuts)
}

/// Reads the input, generates and costs the cut pool.
fn costed_pool(args: &InputArgs, cuts: CutKind) -> CliResult<CutPool> {
    let text = io::read_to_string(&args.input)?;
    let cut_seed = sub_seed(args.seed, "cuts");
    let pool = match args.format {
        Format::BinaryMatrix => {
            let x = io::parse_binary_matrix(&text)?;
            cost_questionnaire(column_cuts(&x)?, &x)?
        }
        Format::Graph => {
            let g = io::parse_edge_list(&text)?;
            let pool = kl_cuts(&g, args.cut_count, args.kl_iterations, cut_seed)?;
            cost_graph(pool, &g, args.normalize)?
        }
        Format::Points => {
            let p = io::parse_points(&text)?;
            let dups = p.duplicate_count();
            if dups > 0 {
                log::warn!("{dups} points coincide with earlier points");
            }
            let pool = match cuts {
                CutKind::RandomProjection => random_projection_cuts(&p, args.cut_count, cut_seed)?,
                _ => axis_slices(&p, args.agreement)?,
            };
            cost_points(pool, &p, args.normalize)?
        }
    };
    Ok(pool)
}

fn with_config(mut value: serde_json::Value, config: &serde_json::Value) -> serde_json::Value {
    if let Some(obj) = value.as_object_mut() {
        obj.insert("config".into(), config.clone());
    }
    value
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Data(e.into()))
}

fn cluster(args: &ClusterArgs) -> CliResult<()> {
    let cuts = check_input(&args.input)?;
    let weighting = match args.weighting {
        Weighting::Uniform => WeightingFn::Uniform,
        Weighting::Exponential => WeightingFn::Exponential { lambda: args.lambda },
    };
    weighting.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let config = serde_json::to_value(args).map_err(|e| Failure::Data(e.into()))?;
    let pool = costed_pool(&args.input, cuts)?;
    let params = ClusterParams::new(args.input.agreement)
        .prune_depth(args.prune)
        .max_psi(args.input.max_psi)
        .weighting(weighting);
    let out = cluster_pool(pool, &params)?;
    ensure_dir(&args.out)?;
    let write = |name: &str, text: String| -> CliResult<()> {
        std::fs::write(args.out.join(name), text).map_err(|e| Failure::Data(e.into()))
    };
    write("labels.csv", io::format_labels(&out.labels, Some(&config)))?;
    write("soft.csv", io::format_soft(&out.soft, Some(&config)))?;
    io::write_json(&args.out.join("tree.json"), &with_config(out.pruned.to_json(), &config))?;
    io::write_json(&args.out.join("condensed.json"), &with_config(out.condensed.to_json(), &config))?;
    io::write_json(
        &args.out.join("dendrogram.json"),
        &with_config(out.condensed.dendrogram_json(), &config),
    )?;
    println!(
        "{} objects, {} cuts, {} tree nodes, {} clusters",
        out.tree.num_objects(),
        out.tree.pool().len(),
        out.tree.len(),
        out.leaf_count()
    );
    Ok(())
}

fn write_text(dir: &Path, name: &str, text: &str) -> CliResult<()> {
    ensure_dir(dir)?;
    std::fs::write(dir.join(name), text).map_err(|e| Failure::Data(e.into()))
}

fn parse_vector(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("bad number '{t}' in '{s}'")))
        })
        .collect()
}

fn generate(cmd: GenerateCmd) -> CliResult<()> {
    let usage = |e: TangleError| match e {
        TangleError::BadParams(m) => Failure::Usage(m),
        other => Failure::Data(other),
    };
    match cmd {
        GenerateCmd::Questionnaire { n, m, k, p, seed, out } => {
            let inst = gen_mindsets(n, m, k, p, seed).map_err(usage)?;
            write_text(&out, "answers.csv", &io::format_binary_matrix(&inst.answers))?;
            write_text(&out, "labels.csv", &io::format_labels(&inst.labels, None))?;
        }
        GenerateCmd::Sbm { n, blocks, p, q, expected, seed, out } => {
            let inst = gen_sbm(n, blocks, p, q, seed, expected).map_err(usage)?;
            write_text(&out, "graph.edges", &io::format_edge_list(&inst.graph))?;
            write_text(&out, "labels.csv", &io::format_labels(&inst.labels, None))?;
        }
        GenerateCmd::Gmm { n, centers, sigma, seed, out } => {
            let centers = centers
                .split(';')
                .map(parse_vector)
                .collect::<CliResult<Vec<_>>>()?;
            let inst = gen_gmm(&centers, sigma, n, seed).map_err(usage)?;
            write_text(&out, "points.csv", &io::format_points(&inst.points))?;
            write_text(&out, "labels.csv", &io::format_labels(&inst.labels, None))?;
        }
    }
    Ok(())
}

fn print_json(v: &serde_json::Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure::Data(e.into()))?;
    println!("{text}");
    Ok(())
}

fn bounds(cmd: BoundsCmd) -> CliResult<()> {
    let v = match cmd {
        BoundsCmd::Thm1 { n, m, k, p, a } => {
            let b = thm1_bounds(n, m, k, p, a);
            serde_json::json!({
                "schema_version": 1,
                "prob_missing": b.prob_missing,
                "prob_spurious": b.prob_spurious,
                "total": b.total(),
                "valid": b.valid,
            })
        }
        BoundsCmd::Thm2 { n, p, q, a } => {
            let r = thm2_psi_range(n, p, q, a);
            serde_json::json!({
                "schema_version": 1,
                "interval": r.interval.map(|(lo, hi)| [lo, hi]),
                "lower": r.lower,
                "upper": r.upper,
                "non_identifiable": r.non_identifiable,
            })
        }
        BoundsCmd::Gauss { mu, nu, sigma, n } => {
            let r = thm_gauss_agreement_range(&parse_vector(&mu)?, &parse_vector(&nu)?, sigma, n)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let mut v = serde_json::to_value(r).map_err(|e| Failure::Data(e.into()))?;
            v["schema_version"] = 1.into();
            v
        }
    };
    print_json(&v)
}

/// CSV with one row per report point: `x,mean,std,tangle_count`.
pub fn plot_csv(report: &ExperimentReport) -> String {
    let config = serde_json::to_value(&report.config).unwrap_or_default();
    let mut s = io::config_comment(&config);
    s.push_str("x,mean,std,tangle_count\n");
    for p in &report.points {
        let _ = writeln!(s, "{},{},{},{}", p.x, p.mean_nmi, p.std_nmi, p.modal_tangle_count);
    }
    s
}

fn bench(args: &BenchArgs) -> CliResult<()> {
    let text = io::read_to_string(&args.config)?;
    let cfg = ExperimentConfig::from_toml(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    let report = run_experiment(&cfg)?;
    ensure_dir(&args.out)?;
    io::write_json(
        &args.out.join("report.json"),
        &serde_json::to_value(&report).map_err(|e| Failure::Data(e.into()))?,
    )?;
    write_text(&args.out, "plot.csv", &plot_csv(&report))?;
    for p in &report.points {
        println!(
            "x={} a={} nmi={:.4}±{:.4} tangles={}",
            p.x, p.agreement, p.mean_nmi, p.std_nmi, p.modal_tangle_count
        );
    }
    Ok(())
}

fn oracle(args: &OracleArgs) -> CliResult<()> {
    let cuts = check_input(&args.input)?;
    let pool = costed_pool(&args.input, cuts)?;
    if pool.len() > BRUTE_FORCE_LIMIT {
        return Err(Failure::Data(TangleError::TooLarge {
            size: pool.len(),
            limit: BRUTE_FORCE_LIMIT,
        }));
    }
    let a = args.input.agreement;
    let tree = build_tree(&pool, a, None)?;
    let from_tree = tree.full_depth_orientations();
    let brute = brute_force_tangles(&pool, a)?;
    let matches = from_tree == brute;
    print_json(&serde_json::json!({
        "schema_version": 1,
        "cuts": pool.len(),
        "tree_tangles": from_tree.len(),
        "brute_force_tangles": brute.len(),
        "match": matches,
    }))?;
    if matches {
        Ok(())
    } else {
        Err(Failure::Data(TangleError::params(
            "search tree disagrees with brute-force enumeration",
        )))
    }
}
