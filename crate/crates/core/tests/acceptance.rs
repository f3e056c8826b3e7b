//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangles::cutgen::all_bipartitions;
use tangles::eval::{run_experiment, ExperimentConfig};
use tangles::models::{
    check_nondegeneracy, expected_sbm_cut_cost, thm1_bounds, thm2_psi_range, NONDEGENERACY_LIMIT,
};
use tangles::postprocess::NodeKind;
use tangles::prelude::*;
use tangles::search::{all_triples_consistent, extend_tangle};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn random_pool(rng: &mut ChaCha8Rng, n: usize, m: usize) -> CutPool {
    let u = ObjectUniverse::new(n).unwrap();
    let mut cuts = Vec::new();
    let mut id = 0;
    while cuts.len() < m {
        let bits: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        if let Ok(mut c) = make_cut(u, BitSet::from_bools(&bits), id) {
            c.set_cost(rng.random_range(0..8) as f64);
            cuts.push(c);
            id += 1;
        }
    }
    CutPool::new(u, cuts).unwrap()
}

fn ac1() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    let mut core_disagreements = 0;
    for _ in 0..200 {
        let n = rng.random_range(2..=20);
        let m = rng.random_range(0..=10);
        let a = rng.random_range(1..=5);
        let pool = random_pool(&mut rng, n, m);
        let tree = build_tree(&pool, a, None).unwrap();
        if tree.full_depth_orientations() != brute_force_tangles(&pool, a).unwrap() {
            mismatches += 1;
        }
        for node in tree.nodes() {
            if !tree.core_is_valid(node.id()) || !tree.path_fully_consistent(node.id()) {
                core_disagreements += 1;
            }
            if node.level() == pool.len() {
                continue;
            }
            for dir in [Direction::A, Direction::Complement] {
                let by_core = extend_tangle(&pool, node.core(), node.level(), dir, a).is_some();
                let mut sides: Vec<SideRef<'_>> = tree
                    .path_orientation(node.id())
                    .into_iter()
                    .enumerate()
                    .map(|(pos, d)| pool.get(pos).side(d))
                    .collect();
                sides.push(pool.get(node.level()).side(dir));
                if by_core != all_triples_consistent(&sides, a) {
                    core_disagreements += 1;
                }
            }
        }
    }
    let el = secs(t.elapsed());
    outcome(
        mismatches == 0 && core_disagreements == 0 && el < 60.0,
        format!("oracle equivalence: 200 instances, {mismatches} path mismatches, {core_disagreements} core disagreements, {el:.2} s (limit 60 s)"),
    )
}

fn ac2() -> Outcome {
    let t = Instant::now();
    let cfg = ExperimentConfig::from_toml(
        r#"
        seeds = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]
        agreement = 111
        prune = 1
        [scenario]
        kind = "questionnaire"
        n = 999
        m = 40
        k = 3
        p = 0.0
        [sweep]
        param = "p"
        values = [0.0, 0.05, 0.1, 0.15]
        "#,
    )
    .unwrap();
    let report = run_experiment(&cfg).unwrap();
    let el = secs(t.elapsed());
    let mut pass = el < 120.0;
    let mut parts = Vec::new();
    for p in &report.points {
        let ok = p.mean_nmi >= 0.9
            && p.modal_tangle_count == 3
            && (p.x != 0.0 || p.rows.iter().all(|r| r.nmi == 1.0));
        pass &= ok;
        parts.push(format!("p={} nmi={:.4} modal={}", p.x, p.mean_nmi, p.modal_tangle_count));
    }
    outcome(
        pass,
        format!("questionnaire recovery: {}; {el:.1} s (limit 120 s)", parts.join(", ")),
    )
}

/// Whether the tangles of the column cuts are exactly the mindsets.
fn mindsets_recovered(inst: &tangles::models::MindsetInstance, a: usize) -> bool {
    let pool = column_cuts(&inst.answers).unwrap();
    let tree = build_tree(&pool, a, None).unwrap();
    let found: BTreeSet<Vec<Direction>> = tree.full_depth_orientations().into_iter().collect();
    let x0 = inst.answers.row(0);
    let expected: BTreeSet<Vec<Direction>> = (0..inst.mindsets.rows())
        .map(|i| {
            pool.cuts()
                .iter()
                .map(|c| {
                    if inst.mindsets.get(i, c.id()) == x0[c.id()] {
                        Direction::A
                    } else {
                        Direction::Complement
                    }
                })
                .collect()
        })
        .collect();
    found == expected
}

fn ac3() -> Outcome {
    let t = Instant::now();
    let mut points = Vec::new();
    'outer: for &k in &[2usize, 3, 4] {
        for &p in &[0.02, 0.05, 0.08] {
            for &m in &[8usize, 14, 20] {
                for &n in &[600usize, 1200, 2400] {
                    let a = (n as f64 / (k as f64 + 3.0)).round();
                    let b = thm1_bounds(n, m, k, p, a);
                    if b.valid && b.total() <= 0.01 && m <= NONDEGENERACY_LIMIT {
                        points.push((n, m, k, p, a as usize, b.total()));
                        if points.len() == 20 {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    let mut worst = (0.0f64, String::new());
    let mut pass = points.len() == 20;
    for &(n, m, k, p, a, bound) in &points {
        let (mut tried, mut failures, mut used) = (0u64, 0usize, 0usize);
        while used < 50 && tried < 2000 {
            let inst = gen_mindsets(n, m, k, p, tried).unwrap();
            tried += 1;
            let distinct: BTreeSet<&[u8]> = (0..k).map(|i| inst.mindsets.row(i)).collect();
            if distinct.len() < k || !check_nondegeneracy(&inst.mindsets).unwrap() {
                continue;
            }
            used += 1;
            if !mindsets_recovered(&inst, a) {
                failures += 1;
            }
        }
        let rate = failures as f64 / used.max(1) as f64;
        pass &= used == 50 && rate <= 0.1;
        if rate >= worst.0 {
            worst = (rate, format!("n={n} m={m} k={k} p={p} a={a} bound={bound:.2e}"));
        }
    }
    outcome(
        pass,
        format!(
            "mindset recovery under the bound: {} points x 50 seeds, worst failure rate {:.2} at {} (limit 0.1), {:.1} s",
            points.len(),
            worst.0,
            worst.1,
            secs(t.elapsed())
        ),
    )
}

fn ac4() -> Outcome {
    let t = Instant::now();
    let cfg = ExperimentConfig::from_toml(
        r#"
        seeds = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]
        agreement = 16
        normalize = true
        [scenario]
        kind = "sbm"
        n = 100
        blocks = 2
        p = 0.3
        q = 0.05
        cuts = 20
        iterations = 2
        "#,
    )
    .unwrap();
    let report = run_experiment(&cfg).unwrap();
    let mean = report.points[0].mean_nmi;

    // all cuts of a small expected graph, unnormalised cost
    let tangles_per_level = |p: f64, q: f64| {
        let s = gen_sbm(12, 2, p, q, 0, true).unwrap();
        let pool = cost_graph(all_bipartitions(12).unwrap(), &s.graph, false).unwrap();
        let tree = build_tree(&pool, 2, None).unwrap();
        let widest = (0..=pool.len()).map(|l| tree.level_nodes(l).len()).max().unwrap();
        let leaves = cluster_pool(pool, &ClusterParams::new(2)).unwrap().leaf_count();
        (widest, leaves)
    };
    let (weak_width, weak_leaves) = tangles_per_level(0.3, 0.2);
    let (strong_width, _) = tangles_per_level(0.9, 0.1);
    let el = secs(t.elapsed());
    outcome(
        mean >= 0.9 && weak_width == 1 && weak_leaves == 1 && strong_width == 2 && el < 60.0,
        format!(
            "block model: mean nmi {mean:.4} (limit 0.9); p<2q: at most {weak_width} tangle per cost level, {weak_leaves} cluster; p=0.9,q=0.1: {strong_width} tangles; {el:.1} s (limit 60 s)"
        ),
    )
}

fn ac5() -> Outcome {
    let t = Instant::now();
    let cfg = ExperimentConfig::from_toml(
        r#"
        seeds = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]
        [scenario]
        kind = "gmm"
        n = 6000
        centers = [[0.0, 0.0], [3.7, 0.0], [0.0, 3.7], [3.7, 3.7]]
        sigma = 1.0
        cutgen = { kind = "axis_slices" }
        "#,
    )
    .unwrap();
    let report = run_experiment(&cfg).unwrap();
    let p = &report.points[0];
    let el = secs(t.elapsed());
    outcome(
        p.mean_nmi >= 0.75 && el < 300.0,
        format!(
            "gaussian mixture: mean nmi {:.4} (limit 0.75), a={}, modal tangles {}, {el:.1} s (limit 300 s)",
            p.mean_nmi, p.agreement, p.modal_tangle_count
        ),
    )
}

fn ac6() -> Outcome {
    let s = gen_sbm(100, 2, 0.3, 0.1, 2, false).unwrap();
    let u = ObjectUniverse::new(100).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut raw, mut norm, mut quality) = (Vec::new(), Vec::new(), Vec::new());
    let mut v1: Vec<usize> = (0..50).collect();
    let mut v2: Vec<usize> = (50..100).collect();
    for j in 0..=50 {
        for l in 0..=50 {
            if (j, l) == (0, 0) || (j, l) == (50, 50) {
                continue;
            }
            v1.shuffle(&mut rng);
            v2.shuffle(&mut rng);
            let side = BitSet::from_indices(100, v1[..j].iter().chain(&v2[..l]).copied());
            let cut = make_cut(u, side, 0).unwrap();
            let c = graph_cut_cost(&cut, &s.graph).unwrap();
            raw.push(c);
            norm.push(normalize_cost(c, &cut));
            let labels: Vec<usize> = (0..100).map(|v| cut.side_a().get(v) as usize).collect();
            quality.push(nmi(&labels, &s.labels).unwrap());
        }
    }
    let r_raw = spearman_rho(&raw, &quality).unwrap();
    let r_norm = spearman_rho(&norm, &quality).unwrap();
    outcome(
        r_norm.abs() >= r_raw.abs() && r_norm.abs() >= 0.7,
        format!(
            "normalisation: spearman raw {r_raw:.3}, normalised {r_norm:.3} over {} cuts (limit |rho| >= 0.7 and >= raw)",
            raw.len()
        ),
    )
}

fn ac7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut trees, mut bad_rows, mut bad_prune, mut bad_ties, mut bad_shape) = (0, 0, 0, 0, 0);
    for i in 0..400 {
        let n = rng.random_range(4..=24);
        let m = rng.random_range(1..=12);
        let a = rng.random_range(1..=4);
        let pool = random_pool(&mut rng, n, m);
        let tree = build_tree(&pool, a, None).unwrap();
        let h = if i % 2 == 0 {
            WeightingFn::Uniform
        } else {
            WeightingFn::Exponential { lambda: rng.random_range(0.1..2.0) }
        };
        for depth in 0..=3 {
            trees += 1;
            let pruned = prune_tree(&tree, depth);
            if prune_tree(&pruned, depth).to_json() != pruned.to_json() {
                bad_prune += 1;
            }
            let ct = soft_dendrogram(&pruned, h).unwrap();
            if ct.nodes[1..].iter().any(|c| c.kind == NodeKind::Splitting && c.children.len() != 2) {
                bad_shape += 1;
            }
            let soft = soft_assignments(&ct, None).unwrap();
            if soft.rows.iter().any(|r| (r.iter().sum::<f64>() - 1.0).abs() > 1e-9) {
                bad_rows += 1;
            }
            for (row, l) in soft.rows.iter().zip(hard_assignments(&soft)) {
                let best = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if row.iter().position(|&x| x == best) != Some(l) {
                    bad_ties += 1;
                }
            }
        }
    }
    outcome(
        bad_rows + bad_prune + bad_ties + bad_shape == 0,
        format!(
            "post-processing: {trees} trees, {bad_rows} bad row sums, {bad_prune} non-idempotent prunes, {bad_ties} tie-rule violations, {bad_shape} malformed splits"
        ),
    )
}

fn median_secs(mut f: impl FnMut()) -> f64 {
    let mut times: Vec<f64> = (0..7)
        .map(|_| {
            let t = Instant::now();
            f();
            secs(t.elapsed())
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[3]
}

fn ac8() -> Outcome {
    let inst = gen_mindsets(5000, 40, 3, 0.1, 8).unwrap();
    let base = cost_questionnaire(column_cuts(&inst.answers).unwrap(), &inst.answers).unwrap();
    let a = 5000 / 9;
    let mut times = Vec::new();
    for times_n in [1usize, 2, 4, 8] {
        let pool = base.replicate(times_n).unwrap();
        times.push(median_secs(|| {
            build_tree(&pool, a * times_n, None).unwrap();
        }));
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1] / w[0]).collect();
    let worst = ratios.iter().cloned().fold(0.0, f64::max);
    outcome(
        worst <= 3.0,
        format!(
            "scaling: tree times {} ms for n=5k..40k, worst doubling ratio {worst:.2} (limit 3)",
            times.iter().map(|t| format!("{:.2}", t * 1e3)).collect::<Vec<_>>().join("/")
        ),
    )
}

fn ac9() -> Outcome {
    let (n, p, q) = (60usize, 0.7, 0.2);
    let s = gen_sbm(n, 2, p, q, 9, true).unwrap();
    let u = ObjectUniverse::new(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 1000 {
        let density = rng.random_range(0.05..0.95);
        let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(density)).collect();
        let Ok(cut) = make_cut(u, BitSet::from_bools(&bits), 0) else {
            continue;
        };
        let half = (n / 2) as f64;
        let in1 = (0..n / 2).filter(|&v| cut.side_a().get(v)).count() as f64;
        let in2 = (n / 2..n).filter(|&v| cut.side_a().get(v)).count() as f64;
        let e = expected_sbm_cut_cost(in1 / half, in2 / half, n as f64, p, q);
        let g = graph_cut_cost(&cut, &s.graph).unwrap();
        worst = worst.max((e - g).abs() / g.abs().max(f64::MIN_POSITIVE));
        checked += 1;
    }
    let r = thm2_psi_range(100.0, 0.3, 0.05, 16.0);
    let exact = r.lower == 0.05 * 50.0 * 50.0;
    outcome(
        worst <= 1e-9 && exact,
        format!("formula evaluators: 1000 memberships, worst relative error {worst:.2e} (limit 1e-9); window lower end exact: {exact}"),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| a.starts_with("AC")).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == name) {
            continue;
        }
        let o = run();
        println!("{name} {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
