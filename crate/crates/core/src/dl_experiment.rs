//! Construction of a `4n`-cycle through `o` in a percolation configuration on
//! a DL(2,2) box, and the Monte Carlo driver around it.
//!
//! The cycle is the union of four tree paths:
//!
//! 1. `o` down to `(ℓ1, ô2)` inside `T_o`,
//! 2. `(ℓ1, ô2)` up to `(o1, x2)` inside `T_{ℓ1}`,
//! 3. `(o1, x2)` down to `(ℓ1', ô2)` inside `T_{ℓ1'}`,
//! 4. `(ℓ1', ô2)` up to `o` inside `T_o`.
//!
//! Success of a trial means such a choice exists; the tie-break rule only
//! selects which cycle is reported.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesics::{diagonal_criterion, is_geodesic_cycle, BfsOracle, MarginOracle, Verdict};
use crate::gf2::{Cycle, EdgeVector};
use crate::graph::{DLBox, Graph};
use crate::models::{bernoulli_sample, check_probability, fk_glauber, tree_survival, RngStream};
use crate::stats::{binomial_sigma, wilson_interval, Interval, Z95};

/// Default Glauber sweeps for the FK model.
pub const DEFAULT_SWEEPS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    L1,
    L1Prime,
}

/// Edges whose first coordinate lies in the depth-`n` subtree below `o1` and
/// whose second coordinate lies on the `o2`–`ô2` path. A binary tree rooted at `o`.
pub fn extract_t_o(dl: &DLBox) -> EdgeVector {
    let o1 = dl.o1();
    let bottom = dl.margin() + dl.n();
    dl.edges_where(|upper, _| {
        let a1 = dl.coord1(upper);
        a1.is_descendant_of(o1) && a1.depth() < bottom && dl.coord2(upper).bits() == 0
    })
}

fn check_leaf(dl: &DLBox, ell: usize) -> Result<()> {
    if dl.l1().contains(&ell) || dl.l1_prime().contains(&ell) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("vertex {ell} is not in L1 or L1'")))
    }
}

/// Edges whose second coordinate lies in the depth-`n` subtree above `ô2`
/// and whose first coordinate lies on the `ℓ`–`o1` path. A binary tree
/// rooted at `(ℓ, ô2)`.
pub fn extract_t_ell(dl: &DLBox, ell: usize) -> Result<EdgeVector> {
    check_leaf(dl, ell)?;
    let leaf = dl.coord1(ell);
    let o_hat2 = dl.o_hat2();
    Ok(dl.edges_where(|upper, lower| {
        leaf.is_descendant_of(dl.coord1(lower))
            && dl.coord1(upper).depth() >= dl.margin()
            && dl.coord2(upper).is_descendant_of(o_hat2)
    }))
}

/// BFS tree of `root` over the edges in `allowed`; `parent[v] = (u, e)`.
fn reach(g: &Graph, allowed: &EdgeVector, root: usize) -> Vec<Option<(usize, usize)>> {
    let mut parent = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(w, e) in g.adjacency(u) {
            if allowed.get(e) && !seen[w] {
                seen[w] = true;
                parent[w] = Some((u, e));
                queue.push_back(w);
            }
        }
    }
    parent
}

/// Vertex path `from … to` inside `allowed`, if `to` is reachable.
fn tree_path(g: &Graph, allowed: &EdgeVector, from: usize, to: usize) -> Option<Vec<usize>> {
    let parent = reach(g, allowed, to);
    let mut path = vec![from];
    let mut v = from;
    while v != to {
        v = parent[v]?.0;
        path.push(v);
    }
    Some(path)
}

fn reached(dl: &DLBox, allowed: &EdgeVector, root: usize, class: &[usize]) -> Vec<usize> {
    let parent = reach(dl.graph(), allowed, root);
    class.iter().copied().filter(|&v| v == root || parent[v].is_some()).collect()
}

/// Members of the chosen class joined to `o` by open edges of `T_o`, in
/// increasing address order.
pub fn find_omega_l(dl: &DLBox, omega: &EdgeVector, side: Side) -> Vec<usize> {
    let class = match side {
        Side::L1 => dl.l1(),
        Side::L1Prime => dl.l1_prime(),
    };
    reached(dl, &extract_t_o(dl).and(omega), dl.o(), class)
}

/// Vertices `(o1, x2)` of `L2` joined to `(ℓ, ô2)` by open edges of `T_ℓ`,
/// in increasing address order.
pub fn find_x(dl: &DLBox, omega: &EdgeVector, ell: usize) -> Result<Vec<usize>> {
    let tree = extract_t_ell(dl, ell)?;
    Ok(reached(dl, &tree.and(omega), ell, dl.l2()))
}

fn violation(msg: impl Into<String>) -> Error {
    Error::StructuralViolation(msg.into())
}

/// Union of the four tree paths, starting at `o` and heading to `ℓ1` first.
/// Every structural property of the result is checked; a failure is a bug.
pub fn assemble_cycle(dl: &DLBox, omega: &EdgeVector, l1: usize, l1p: usize, x2: usize) -> Result<Cycle> {
    if !dl.l1().contains(&l1) || !dl.l1_prime().contains(&l1p) || !dl.l2().contains(&x2) {
        return Err(Error::InvalidParameter("assemble_cycle needs ℓ1 ∈ L1, ℓ1' ∈ L1', x2 ∈ L2".into()));
    }
    let g = dl.graph();
    let n = dl.n();
    let t_o = extract_t_o(dl).and(omega);
    let legs = [
        (t_o.clone(), dl.o(), l1),
        (extract_t_ell(dl, l1)?.and(omega), l1, x2),
        (extract_t_ell(dl, l1p)?.and(omega), x2, l1p),
        (t_o, l1p, dl.o()),
    ];
    let mut vertices = Vec::with_capacity(4 * n);
    let mut seen_edges = EdgeVector::zeros(g.edge_count());
    for (i, (tree, from, to)) in legs.iter().enumerate() {
        let path = tree_path(g, tree, *from, *to).ok_or_else(|| violation(format!("leg {i} is not open")))?;
        if path.len() != n + 1 {
            return Err(violation(format!("leg {i} has length {}, expected {n}", path.len() - 1)));
        }
        for w in path.windows(2) {
            let e = g.edge_between(w[0], w[1]).ok_or_else(|| violation("path step is not an edge"))?;
            if seen_edges.get(e) {
                return Err(violation(format!("leg {i} reuses edge {e}")));
            }
            seen_edges.set(e, true);
        }
        vertices.extend_from_slice(&path[..n]);
    }
    let cycle = Cycle::new(g, vertices).map_err(|e| violation(format!("legs do not close a simple cycle: {e}")))?;
    if cycle.len() != 4 * n || cycle.vertices()[0] != dl.o() {
        return Err(violation("cycle does not have length 4n through o"));
    }
    if !cycle.to_edge_vector(g).is_subset_of(omega) {
        return Err(violation("cycle leaves the configuration"));
    }
    Ok(cycle)
}

/// `(p·θ̂_{n−1}(p))² · p² · θ̂_{n−1}(p²)`: the success probability of the
/// construction for a fixed choice of `ℓ1` and `ℓ1'`, hence a lower bound
/// for existence.
pub fn theoretical_bound(n: usize, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let side = p * tree_survival(p, Some(n - 1))?;
    Ok(side * side * p * p * tree_survival(p * p, Some(n - 1))?)
}

/// `p²·θ(p)²·θ(p²)` on the infinite trees.
pub fn limiting_bound(p: f64) -> Result<f64> {
    let t = tree_survival(p, None)?;
    Ok(p * p * t * t * tree_survival(p * p, None)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Model {
    Bernoulli,
    FkGlauber { sweeps: usize },
}

impl Model {
    pub fn label(&self) -> &'static str {
        match self {
            Model::Bernoulli => "bernoulli",
            Model::FkGlauber { .. } => "fk-glauber",
        }
    }

    /// Samples a configuration on the whole graph.
    pub fn sample<R: rand::Rng + ?Sized>(&self, g: &Graph, p: f64, rng: &mut R) -> Result<EdgeVector> {
        check_probability(p)?;
        match *self {
            Model::Bernoulli => bernoulli_sample(g, p, rng),
            Model::FkGlauber { .. } if p == 0.0 => Ok(EdgeVector::zeros(g.edge_count())),
            Model::FkGlauber { .. } if p == 1.0 => Ok(g.all_edges()),
            Model::FkGlauber { sweeps } => fk_glauber(g, p, sweeps, rng),
        }
    }
}

/// Tie-break order for `ℓ1`, `ℓ1'` and `x2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChoiceRule {
    #[default]
    Smallest,
    Largest,
}

impl ChoiceRule {
    fn order(self, mut v: Vec<usize>) -> Vec<usize> {
        if self == ChoiceRule::Largest {
            v.reverse();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialConfig {
    pub n: usize,
    pub p: f64,
    pub model: Model,
    pub trials: usize,
    /// Margin of the first enlarged box used for distance checks.
    pub margin: usize,
    pub seed: u64,
    pub rule: ChoiceRule,
}

impl TrialConfig {
    pub fn new(n: usize, p: f64, trials: usize, seed: u64) -> Self {
        TrialConfig { n, p, model: Model::Bernoulli, trials, margin: 1, seed, rule: ChoiceRule::Smallest }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub n: usize,
    pub p: f64,
    pub model: &'static str,
    pub seed: u64,
    pub stream: u64,
    pub found_l1: bool,
    pub found_l1p: bool,
    pub l1: Option<usize>,
    pub l1p: Option<usize>,
    pub x2_found: bool,
    pub x2: Option<usize>,
    /// Vertex sequence starting at `o`.
    pub cycle: Option<Vec<usize>>,
    pub cycle_len: usize,
    pub geodesic_ambient: Option<Verdict>,
    pub geodesic_omega: Option<Verdict>,
    pub diagonal_ambient: Option<Verdict>,
    pub violation: Option<String>,
}

impl TrialOutcome {
    pub fn cycle_found(&self) -> bool {
        self.cycle.is_some()
    }
}

/// Shared read-only state for a batch of trials.
pub struct Experiment {
    core: DLBox,
    t_o: EdgeVector,
    t_ell: Vec<(usize, EdgeVector)>,
    oracle: MarginOracle,
}

struct Choice {
    l1: usize,
    l1p: usize,
    x2: usize,
}

impl Experiment {
    pub fn new(n: usize, margin: usize) -> Result<Self> {
        let core = DLBox::build(n, 0)?;
        let oracle = MarginOracle::new(&core, margin)?;
        let t_o = extract_t_o(&core);
        let t_ell = core
            .l1()
            .iter()
            .chain(core.l1_prime())
            .map(|&l| Ok((l, extract_t_ell(&core, l)?)))
            .collect::<Result<_>>()?;
        Ok(Experiment { core, t_o, t_ell, oracle })
    }

    pub fn core(&self) -> &DLBox {
        &self.core
    }

    pub fn oracle(&self) -> &MarginOracle {
        &self.oracle
    }

    fn tree_of(&self, ell: usize) -> &EdgeVector {
        &self.t_ell.iter().find(|(l, _)| *l == ell).expect("leaf tree precomputed").1
    }

    fn x_set(&self, omega: &EdgeVector, ell: usize) -> Vec<usize> {
        reached(&self.core, &self.tree_of(ell).and(omega), ell, self.core.l2())
    }

    /// `(ω(L1), ω(L1'), first successful choice in rule order)`.
    fn search(&self, omega: &EdgeVector, rule: ChoiceRule) -> (Vec<usize>, Vec<usize>, Option<Choice>) {
        let open_t_o = self.t_o.and(omega);
        let a = rule.order(reached(&self.core, &open_t_o, self.core.o(), self.core.l1()));
        let b = rule.order(reached(&self.core, &open_t_o, self.core.o(), self.core.l1_prime()));
        let xs_b: Vec<Vec<usize>> = b.iter().map(|&l| self.x_set(omega, l)).collect();
        for &l1 in &a {
            let xa = rule.order(self.x_set(omega, l1));
            for (&l1p, xb) in b.iter().zip(&xs_b) {
                if let Some(&x2) = xa.iter().find(|x| xb.contains(x)) {
                    return (a, b, Some(Choice { l1, l1p, x2 }));
                }
            }
        }
        (a, b, None)
    }

    /// Whether some choice of `ℓ1`, `ℓ1'`, `x2` closes a cycle in `omega`.
    pub fn succeeds(&self, omega: &EdgeVector, rule: ChoiceRule) -> bool {
        self.search(omega, rule).2.is_some()
    }

    /// Runs the construction on a given configuration of the core box.
    pub fn evaluate(&self, omega: &EdgeVector, rule: ChoiceRule) -> TrialOutcome {
        let (a, b, choice) = self.search(omega, rule);
        let mut out = TrialOutcome {
            trial: 0,
            n: self.core.n(),
            p: f64::NAN,
            model: "",
            seed: 0,
            stream: 0,
            found_l1: !a.is_empty(),
            found_l1p: !b.is_empty(),
            l1: a.first().copied(),
            l1p: b.first().copied(),
            x2_found: choice.is_some(),
            x2: None,
            cycle: None,
            cycle_len: 0,
            geodesic_ambient: None,
            geodesic_omega: None,
            diagonal_ambient: None,
            violation: None,
        };
        let Some(Choice { l1, l1p, x2 }) = choice else {
            return out;
        };
        out.l1 = Some(l1);
        out.l1p = Some(l1p);
        out.x2 = Some(x2);
        let checked = assemble_cycle(&self.core, omega, l1, l1p, x2).and_then(|c| {
            let ambient = is_geodesic_cycle(&c, &self.oracle)?;
            let diagonal = diagonal_criterion(&c, &self.oracle)?;
            let inner = BfsOracle::on_view(self.core.graph().restrict(omega)?);
            let in_omega = is_geodesic_cycle(&c, &inner)?;
            Ok((c, ambient, diagonal, in_omega))
        });
        match checked {
            Ok((c, ambient, diagonal, in_omega)) => {
                out.cycle_len = c.len();
                out.cycle = Some(c.vertices().to_vec());
                out.geodesic_ambient = Some(ambient);
                out.diagonal_ambient = Some(diagonal);
                out.geodesic_omega = Some(in_omega);
            }
            Err(e) => out.violation = Some(e.to_string()),
        }
        out
    }

    pub fn run_trial(&self, cfg: &TrialConfig, trial: usize) -> Result<TrialOutcome> {
        let stream = RngStream::new(cfg.seed, trial as u64);
        let omega = cfg.model.sample(self.core.graph(), cfg.p, &mut stream.rng())?;
        let mut out = self.evaluate(&omega, cfg.rule);
        out.trial = trial;
        out.p = cfg.p;
        out.model = cfg.model.label();
        out.seed = stream.seed;
        out.stream = stream.stream;
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSummary {
    pub n: usize,
    pub p: f64,
    pub model: &'static str,
    /// Set for the MCMC model, whose configurations are only approximately FK.
    pub mcmc_approximate: bool,
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub sigma: f64,
    pub wilson95: Interval,
    pub theoretical_bound: f64,
    pub limiting_bound: f64,
    pub geodesic_ambient: usize,
    pub geodesic_omega: usize,
    pub diagonal_ambient: usize,
    pub indeterminate: usize,
    pub violations: usize,
}

impl TrialSummary {
    /// Fraction of assembled cycles passing the ambient geodesic predicate.
    pub fn geodesic_pass_rate(&self) -> f64 {
        if self.successes == 0 {
            1.0
        } else {
            self.geodesic_ambient as f64 / self.successes as f64
        }
    }

    /// All structural checks held and every cycle was ambient-geodesic with
    /// stable distances.
    pub fn all_cycles_verified(&self) -> bool {
        self.violations == 0 && self.geodesic_ambient == self.successes && self.diagonal_ambient == self.successes
    }
}

pub fn summarize(cfg: &TrialConfig, outcomes: &[TrialOutcome]) -> Result<TrialSummary> {
    let count = |f: fn(&TrialOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count();
    let successes = count(|o| o.x2_found);
    let trials = outcomes.len();
    let frequency = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
    Ok(TrialSummary {
        n: cfg.n,
        p: cfg.p,
        model: cfg.model.label(),
        mcmc_approximate: matches!(cfg.model, Model::FkGlauber { .. }),
        trials,
        successes,
        frequency,
        sigma: binomial_sigma(frequency, trials),
        wilson95: wilson_interval(successes, trials, Z95),
        theoretical_bound: theoretical_bound(cfg.n, cfg.p)?,
        limiting_bound: limiting_bound(cfg.p)?,
        geodesic_ambient: count(|o| o.geodesic_ambient == Some(Verdict::Geodesic)),
        geodesic_omega: count(|o| o.geodesic_omega == Some(Verdict::Geodesic)),
        diagonal_ambient: count(|o| o.diagonal_ambient == Some(Verdict::Geodesic)),
        indeterminate: count(|o| {
            o.geodesic_ambient == Some(Verdict::Indeterminate) || o.diagonal_ambient == Some(Verdict::Indeterminate)
        }),
        violations: count(|o| o.violation.is_some()),
    })
}

/// Runs `cfg.trials` independent trials in parallel, trial `i` on stream `i`;
/// outcomes come back in trial order.
pub fn run_trials(cfg: &TrialConfig) -> Result<(Vec<TrialOutcome>, TrialSummary)> {
    check_probability(cfg.p)?;
    if let Model::FkGlauber { sweeps: 0 } = cfg.model {
        return Err(Error::InvalidParameter("sweeps must be >= 1".into()));
    }
    let exp = Experiment::new(cfg.n, cfg.margin)?;
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|t| exp.run_trial(cfg, t))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(cfg, &outcomes)?;
    Ok((outcomes, summary))
}
