//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails, except clauses listed as known-false claims.

use std::process::Command;
use std::time::Instant;

use rand_distr::{Binomial, Distribution};

use cyclespace::dl_experiment::{run_trials, Model, TrialConfig};
use cyclespace::geodesics::{diagonal_criterion, is_geodesic_cycle, BfsOracle, Verdict};
use cyclespace::gensets::{
    build_cprime, check_completeness, check_no_generator_in_omega, cprime_generators, k_closure, relator_cycles,
    verify_levels, ClosureMetric,
};
use cyclespace::gf2::{enumerate_cycles, Cycle, EdgeVector, DEFAULT_CYCLE_BUDGET};
use cyclespace::graph::{build_grid_patch, connected_graphs_up_to, grid_vertex, k4, path, triangle, Graph};
use cyclespace::models::{
    bernoulli_from_uniforms, bernoulli_sample, check_domination, fk_exact, fk_glauber_histogram, identity_gap,
    loop_o1_exact, loop_parameter_for, tree_survival, tv_distance, ues_coinflip_from_coins, ues_pushforward,
    ues_spanning_tree_from_coins, uniforms, FkSource, LoopViaFk, RngStream, SubsetDistribution, UesMethod,
};
use cyclespace::stats::binomial_sigma;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn counts_to_dist(m: usize, outcomes: impl IntoIterator<Item = EdgeVector>) -> SubsetDistribution {
    let mut counts = vec![0u64; 1 << m];
    for v in outcomes {
        counts[v.to_mask() as usize] += 1;
    }
    SubsetDistribution::from_counts(m, &counts).unwrap()
}

fn coin_patterns(k: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u32 << k).map(move |c| (0..k).map(|i| c >> i & 1 == 1).collect())
}

fn grid_cycle(g: &Graph, cols: usize, cells: &[(usize, usize)]) -> Cycle {
    Cycle::new(g, cells.iter().map(|&(r, c)| grid_vertex(cols, r, c)).collect()).unwrap()
}

fn c1_identity() -> Outcome {
    let start = Instant::now();
    let graphs = connected_graphs_up_to(6).unwrap();
    let mut worst = 0.0f64;
    for g in &graphs {
        for p in [0.3, 0.6, 0.9] {
            worst = worst.max(identity_gap(g, p).unwrap());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-10 && secs < 5.0,
        format!("{} graphs, max TV {worst:.2e}, {secs:.2} s", graphs.len()),
    )
}

fn c2_triangle_ratio() -> Outcome {
    let g = triangle();
    let pushed = ues_pushforward(&g, &fk_exact(&g, 0.6).unwrap()).unwrap();
    let ratio = pushed.prob(0b111) / pushed.prob(0);
    let want = 27.0 / 343.0;
    check((ratio - want).abs() <= 1e-10, format!("ratio {ratio:.15} vs 27/343 = {want:.15}"))
}

fn c3_ues_uniformity() -> Outcome {
    let g = k4();
    let view = g.view();
    let tree = counts_to_dist(6, coin_patterns(3).map(|c| ues_spanning_tree_from_coins(&view, &c).unwrap()));
    let cycles: Vec<EdgeVector> = enumerate_cycles(&view, 4, DEFAULT_CYCLE_BUDGET)
        .unwrap()
        .iter()
        .map(|c| c.to_edge_vector(&g))
        .collect();
    let flip = counts_to_dist(6, coin_patterns(cycles.len()).map(|c| ues_coinflip_from_coins(6, &cycles, &c).unwrap()));
    let exact = |d: &SubsetDistribution| d.support().count() == 8 && d.support().all(|(_, p)| p == 0.125);
    check(
        cycles.len() == 7 && exact(&tree) && exact(&flip),
        format!("{} cycles; both constructions give 1/8 on 8 even subgraphs", cycles.len()),
    )
}

fn c4_domination() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for g in connected_graphs_up_to(5).unwrap() {
        for p in [0.3, 0.5, 0.7, 0.9] {
            let b = SubsetDistribution::bernoulli(g.edge_count(), loop_parameter_for(p)).unwrap();
            let r = check_domination(&fk_exact(&g, p).unwrap(), &b).unwrap();
            checked += 1;
            if !(r.dominates && r.exhaustive) {
                failures.push(format!("{:?} p={p}", g.edges()));
            }
        }
    }
    let control = check_domination(
        &fk_exact(&triangle(), 0.6).unwrap(),
        &SubsetDistribution::bernoulli(3, 0.6).unwrap(),
    )
    .unwrap();
    let secs = start.elapsed().as_secs_f64();
    check(
        failures.is_empty() && !control.dominates && secs < 60.0,
        format!(
            "{checked} (graph, p) pairs, {} failures; control rejected: {} (gap {:.3}); {secs:.2} s",
            failures.len(),
            !control.dominates,
            control.worst_gap
        ),
    )
}

fn c5_glauber() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, g) in [("triangle", triangle()), ("path(3)", path(3).unwrap())] {
        let emp = fk_glauber_histogram(&g, 0.6, 100_000, 1_000_000, &mut RngStream::new(5, 0).rng()).unwrap();
        let tv = tv_distance(&emp, &fk_exact(&g, 0.6).unwrap()).unwrap();
        ok &= tv < 0.01;
        parts.push(format!("{name} TV {tv:.4}"));
    }
    check(ok, parts.join(", "))
}

fn c6_tree_survival() -> Outcome {
    let (p, depth, trees) = (0.8, 20, 100_000u64);
    let mut rng = RngStream::new(6, 0).rng();
    let survived = (0..trees)
        .filter(|_| {
            let mut alive = 1u64;
            for _ in 0..depth {
                alive = Binomial::new(2 * alive, p).unwrap().sample(&mut rng);
                if alive == 0 {
                    return false;
                }
            }
            true
        })
        .count();
    let want = tree_survival(p, Some(depth)).unwrap();
    let f = survived as f64 / trees as f64;
    let sigma = binomial_sigma(want, trees as usize);
    let seq: Vec<f64> = (0..=60).map(|n| tree_survival(p, Some(n)).unwrap()).collect();
    let monotone = seq.windows(2).all(|w| w[1] <= w[0]);
    let limit = tree_survival(p, None).unwrap();
    let gap = (seq[60] - 0.9375).abs();
    check(
        (f - want).abs() <= 3.0 * sigma && monotone && gap <= 1e-6 && (limit - 0.9375).abs() < 1e-15,
        format!("MC {f:.4} vs {want:.4} (3σ = {:.4}); |θ60 − 0.9375| = {gap:.1e}, monotone {monotone}", 3.0 * sigma),
    )
}

fn c7_dl_bernoulli() -> Outcome {
    let trials = 10_000;
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=4 {
        for p in [0.75, 0.9] {
            let start = Instant::now();
            let (_, s) = run_trials(&TrialConfig::new(n, p, trials, 1000 + n as u64)).unwrap();
            let sigma = binomial_sigma(s.theoretical_bound, trials);
            let verified = s.all_cycles_verified() && s.violations == 0 && s.indeterminate == 0;
            let above = s.frequency >= s.theoretical_bound - 3.0 * sigma;
            let exact = n != 1 || (s.frequency - p.powi(4)).abs() <= 3.0 * binomial_sigma(p.powi(4), trials);
            ok &= verified && above && exact;
            parts.push(format!(
                "n={n} p={p}: f={:.4} bound={:.4} geodesic={}/{} [{:.1} s]",
                s.frequency,
                s.theoretical_bound,
                s.geodesic_ambient,
                s.successes,
                start.elapsed().as_secs_f64()
            ));
        }
    }
    check(ok, parts.join("; "))
}

fn c8_dl_fk() -> Outcome {
    let trials = 10_000;
    let mut fk = TrialConfig::new(2, 0.9, trials, 88);
    fk.model = Model::FkGlauber { sweeps: 50 };
    let (_, sf) = run_trials(&fk).unwrap();
    let (_, sb) = run_trials(&TrialConfig::new(2, loop_parameter_for(0.9), trials, 89)).unwrap();
    let sigma = binomial_sigma(sb.frequency, trials);
    check(
        sf.frequency >= sb.frequency - 3.0 * sigma && sf.all_cycles_verified(),
        format!("FK f={:.4} vs Bernoulli(p/(2−p)) f={:.4}, 3σ = {:.4}", sf.frequency, sb.frequency, 3.0 * sigma),
    )
}

/// Returns the outcome and whether the failure is a known-false claim.
fn c9_geodesic_predicates() -> (Outcome, bool) {
    let g = build_grid_patch(5, 5).unwrap();
    let ambient = BfsOracle::new(&g);
    let (mut even, mut implied, mut violations) = (0, 0, 0);
    let mut t = 0;
    while even < 1000 {
        let omega = bernoulli_sample(&g, 0.75, &mut RngStream::new(9, t).rng()).unwrap();
        t += 1;
        let view = g.restrict(&omega).unwrap();
        let inner = BfsOracle::on_view(view.clone());
        for c in enumerate_cycles(&view, 16, DEFAULT_CYCLE_BUDGET).unwrap() {
            if c.len() % 2 == 1 {
                continue;
            }
            even += 1;
            for o in [&ambient, &inner] {
                if diagonal_criterion(&c, o).unwrap() == Verdict::Geodesic {
                    implied += 1;
                    if is_geodesic_cycle(&c, o).unwrap() != Verdict::Geodesic {
                        violations += 1;
                    }
                }
            }
        }
    }
    let tromino = grid_cycle(&g, 5, &[(0, 0), (0, 1), (0, 2), (1, 2), (1, 1), (2, 1), (2, 0), (1, 0)]);
    let tromino_rejected = is_geodesic_cycle(&tromino, &ambient).unwrap() == Verdict::NotGeodesic;
    let block = grid_cycle(&g, 5, &[(0, 0), (0, 1), (0, 2), (1, 2), (2, 2), (2, 1), (2, 0), (1, 0)]);
    let block_ambient = is_geodesic_cycle(&block, &ambient).unwrap();
    let centre = grid_vertex(5, 1, 1);
    let mut face = g.all_edges();
    for &(_, e) in g.adjacency(centre) {
        face.set(e, false);
    }
    let block_face = is_geodesic_cycle(&block, &BfsOracle::on_view(g.restrict(&face).unwrap())).unwrap();
    let detail = format!(
        "{even} even cycles, {implied} diagonal passes, {violations} violations; L-tromino rejected: {tromino_rejected}; \
         2x2 block ambient: {}, with centre edges closed: {}",
        block_ambient.as_str(),
        block_face.as_str()
    );
    let attainable = violations == 0 && tromino_rejected && block_face == Verdict::Geodesic;
    let literal = attainable && block_ambient == Verdict::Geodesic;
    if literal {
        (Ok(detail), false)
    } else if attainable && block_ambient == Verdict::NotGeodesic {
        let why = "2x2 block ambient acceptance is false: antipodes (0,1),(2,1) are 2 apart via the centre";
        (Err(format!("{detail} ({why})")), true)
    } else {
        (Err(detail), false)
    }
}

fn c10_gensets() -> Outcome {
    let g = build_grid_patch(6, 6).unwrap();
    let fam = relator_cycles(&g, 4).unwrap();
    let full = build_cprime(&g, &g.all_edges(), &fam, 3).unwrap();
    let mut squares = fam.vectors().to_vec();
    let mut got = full.vectors();
    squares.sort();
    got.sort();
    let a = full.cycle_count() == 25 && got == squares;

    let missing = g.edge_between(grid_vertex(6, 2, 2), grid_vertex(6, 2, 3)).unwrap();
    let mut omega = g.all_edges();
    omega.set(missing, false);
    let res = build_cprime(&g, &omega, &fam, 3).unwrap();
    let domino = grid_cycle(&g, 6, &[(1, 2), (1, 3), (2, 3), (3, 3), (3, 2), (2, 2)]).to_edge_vector(&g);
    let b = res.levels[0].len() == 23
        && res.levels[1].len() == 1
        && res.levels[1][0].vector == domino
        && res.levels[2].is_empty();

    let (mut c, mut d, mut higher) = (true, true, 0);
    for t in 0..100 {
        let omega = bernoulli_sample(&g, 0.9, &mut RngStream::new(10, t).rng()).unwrap();
        let res = build_cprime(&g, &omega, &fam, 3).unwrap();
        c &= verify_levels(&g, &res, &fam).is_ok() && check_completeness(&g, &omega, &fam, &res).is_ok();
        match check_no_generator_in_omega(&res, &fam, &omega) {
            Ok(n) => higher += n,
            Err(_) => d = false,
        }
    }

    let mut e = true;
    for t in 0..100 {
        let u = uniforms(g.edge_count(), &mut RngStream::new(11, t).rng());
        for k in [1, 2] {
            for metric in [ClosureMetric::Midpoint, ClosureMetric::Endpoint] {
                let closures: Vec<EdgeVector> = [0.8, 0.9, 0.95]
                    .iter()
                    .map(|&p| k_closure(&g, &bernoulli_from_uniforms(&u, p), k, metric).unwrap().edges)
                    .collect();
                e &= closures[1].is_subset_of(&closures[0]) && closures[2].is_subset_of(&closures[1]);
            }
        }
    }
    check(
        a && b && c && d && e,
        format!("(a) {a} (b) {b} (c) {c} (d) {d} on {higher} level-≥2 cycles (e) {e}"),
    )
}

fn c11_pipeline() -> Outcome {
    let g = k4();
    let p = 0.9;
    let x = loop_parameter_for(p);
    let provider = cprime_generators(3, 2);
    let sampler = LoopViaFk::new(&g, x, FkSource::Exact).unwrap();
    let mut rng = RngStream::new(12, 0).rng();
    let samples = (0..100_000).map(|_| sampler.sample(UesMethod::CoinFlip(&provider), &mut rng).unwrap());
    let emp = counts_to_dist(6, samples);
    let tv = tv_distance(&emp, &loop_o1_exact(&g, x).unwrap()).unwrap();
    check(tv < 0.02, format!("TV {tv:.4} over 10^5 samples"))
}

fn c12_determinism() -> Outcome {
    let runs: [&[&str]; 7] = [
        &["verify-identity", "--graph", "theta"],
        &["dl-experiment", "--n", "2", "--p", "0.85", "--trials", "300"],
        &["dl-experiment", "--n", "1", "--model", "fk-glauber", "--sweeps", "10", "--trials", "100"],
        &["gensets", "--graph", "grid:6x6", "--trials", "12"],
        &["domination", "--graph", "k4", "--p", "0.7"],
        &["enumerate-geodesics", "--graph", "dl:n=2,margin=0", "--vertex", "o", "--max-len", "8"],
        &["sample", "--model", "loop", "--graph", "k4", "--p", "0.8", "--trials", "2000"],
    ];
    let run = |args: &[&str], format: &str| {
        Command::new(env!("CARGO_BIN_EXE_cyclespace"))
            .args(args)
            .args(["--no-timestamp", "--format", format])
            .env_remove("CYCLESPACE_OUT_DIR")
            .output()
            .unwrap()
    };
    let mut bad = Vec::new();
    let mut count = 0;
    for args in runs {
        for format in ["csv", "json"] {
            let (a, b) = (run(args, format), run(args, format));
            count += 1;
            if a.stdout.is_empty() || a.stdout != b.stdout || a.status.code() != Some(0) {
                bad.push(format!("{} ({format})", args[0]));
            }
        }
    }
    check(bad.is_empty(), format!("{count} runs repeated byte-identically; mismatches: {bad:?}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("loop/FK identity on all connected graphs with ≤ 6 edges", c1_identity),
        ("triangle ratio equals x^3", c2_triangle_ratio),
        ("uniform even subgraph constructions are exact on K4", c3_ues_uniformity),
        ("FK(p) dominates Bernoulli(p/(2−p)); negative control", c4_domination),
        ("heat-bath chain matches the exact FK law", c5_glauber),
        ("binary tree survival", c6_tree_survival),
        ("DL experiment, Bernoulli", c7_dl_bernoulli),
        ("DL experiment, FK heat-bath", c8_dl_fk),
    ];
    let mut failed = 0;
    let mut known = 0;
    let mut report = |id: usize, name: &str, out: Outcome, known_false: bool| match out {
        Ok(d) => println!("PASS {id:>2} {name}: {d}"),
        Err(d) if known_false => {
            known += 1;
            println!("FAIL {id:>2} {name}: {d} [known-false clause, not counted]");
        }
        Err(d) => {
            failed += 1;
            println!("FAIL {id:>2} {name}: {d}");
        }
    };
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        report(i + 1, name, f(), false);
    }
    let (out, known_false) = c9_geodesic_predicates();
    report(9, "geodesic predicates", out, known_false);
    report(10, "feasible generating sets on the 6x6 grid", c10_gensets(), false);
    report(11, "K4 end-to-end pipeline", c11_pipeline(), false);
    report(12, "CLI determinism", c12_determinism(), false);
    println!("acceptance: {failed} failed, {known} known-false");
    if failed > 0 {
        std::process::exit(1);
    }
}
