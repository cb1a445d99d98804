use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use cyclespace::dl_experiment::{run_trials, ChoiceRule, Model, TrialConfig, DEFAULT_SWEEPS};
use cyclespace::geodesics::{enumerate_geodesic_cycles_through, BfsOracle, DistanceOracle, MarginOracle, Verdict};
use cyclespace::gensets::{
    build_cprime_with, check_completeness, check_no_generator_in_omega, k_closure, multiplicity_profile,
    relator_cycles, spanning_report, verify_levels, Admission, ClosureMetric, DEFAULT_SEARCH_BUDGET,
};
use cyclespace::gf2::{EdgeVector, DEFAULT_CYCLE_BUDGET};
use cyclespace::graph::{Graph, GraphSpec, SpecTarget};
use cyclespace::models::{
    bernoulli_sample, check_domination, check_domination_sampled, fk_exact, fk_glauber_histogram, identity_gap,
    loop_o1_exact, loop_parameter_for, ues_spanning_tree, FkSource, LoopViaFk, RngStream, SubsetDistribution,
    UesMethod, DEFAULT_EDGE_CAP, EXHAUSTIVE_MAX_EDGES,
};

use crate::output::Report;
use crate::{Common, Failure};

fn build_graph(spec: &str) -> Result<(GraphSpec, SpecTarget), Failure> {
    let parsed: GraphSpec = spec.parse().map_err(|e| Failure::Usage(format!("graph `{spec}`: {e}")))?;
    let target = parsed.build()?;
    Ok((parsed, target))
}

fn verdict(v: Option<Verdict>) -> Value {
    v.map_or(Value::Null, |v| v.as_str().into())
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyIdentity {
    #[arg(long, default_value = "triangle")]
    graph: String,
    /// FK parameters, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.6, 0.9])]
    p: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

impl VerifyIdentity {
    pub fn common(&self) -> &Common {
        &self.common
    }

    pub fn execute(&self) -> Result<Report, Failure> {
        let (_, target) = build_graph(&self.graph)?;
        let g = target.graph();
        let mut r = Report::new(&["p", "x", "tv", "pass"]);
        for &p in &self.p {
            let tv = identity_gap(g, p)?;
            let pass = tv <= self.tol;
            r.passed &= pass;
            r.rows.push(vec![p.into(), loop_parameter_for(p).into(), tv.into(), pass.into()]);
        }
        r.note("edges", g.edge_count());
        Ok(r)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DlModel {
    Bernoulli,
    FkGlauber,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Smallest,
    Largest,
}

#[derive(Args, Debug, Serialize)]
pub struct DlExperiment {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 0.8)]
    p: f64,
    #[arg(long, value_enum, default_value_t = DlModel::Bernoulli)]
    model: DlModel,
    /// Heat-bath sweeps per FK configuration.
    #[arg(long, default_value_t = DEFAULT_SWEEPS)]
    sweeps: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Margin of the first enlarged box used for distance checks.
    #[arg(long, default_value_t = 1)]
    margin: usize,
    /// Tie-break order for the chosen leaves and meeting point.
    #[arg(long, value_enum, default_value_t = Rule::Smallest)]
    rule: Rule,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

impl DlExperiment {
    pub fn common(&self) -> &Common {
        &self.common
    }

    pub fn execute(&self) -> Result<Report, Failure> {
        let cfg = TrialConfig {
            n: self.n,
            p: self.p,
            model: match self.model {
                DlModel::Bernoulli => Model::Bernoulli,
                DlModel::FkGlauber => Model::FkGlauber { sweeps: self.sweeps },
            },
            trials: self.trials,
            margin: self.margin,
            seed: self.seed,
            rule: match self.rule {
                Rule::Smallest => ChoiceRule::Smallest,
                Rule::Largest => ChoiceRule::Largest,
            },
        };
        let (outcomes, s) = run_trials(&cfg)?;
        let mut r = Report::new(&[
            "trial",
            "n",
            "p",
            "model",
            "found_l1",
            "found_l1p",
            "x2_found",
            "cycle_found",
            "cycle_len",
            "geodesic_ambient",
            "geodesic_omega",
            "seed",
            "stream",
        ]);
        for o in &outcomes {
            r.rows.push(vec![
                o.trial.into(),
                o.n.into(),
                o.p.into(),
                o.model.into(),
                o.found_l1.into(),
                o.found_l1p.into(),
                o.x2_found.into(),
                o.cycle_found().into(),
                o.cycle_len.into(),
                verdict(o.geodesic_ambient),
                verdict(o.geodesic_omega),
                o.seed.into(),
                o.stream.into(),
            ]);
        }
        r.passed = s.all_cycles_verified();
        r.note("successes", s.successes);
        r.note("frequency", s.frequency);
        r.note("sigma", s.sigma);
        r.note("wilson95_lo", s.wilson95.lo);
        r.note("wilson95_hi", s.wilson95.hi);
        r.note("theoretical_bound", s.theoretical_bound);
        r.note("limiting_bound", s.limiting_bound);
        r.note("geodesic_pass_rate", s.geodesic_pass_rate());
        r.note("geodesic_omega", s.geodesic_omega);
        r.note("indeterminate", s.indeterminate);
        r.note("violations", s.violations);
        if s.mcmc_approximate {
            r.note("sampling", "MCMC-approximate");
        }
        if let Some(v) = outcomes.iter().find_map(|o| o.violation.as_ref()) {
            r.note("first_violation", v.as_str());
        }
        Ok(r)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Midpoint,
    Endpoint,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdmissionArg {
    RunningBasis,
    PreviousLevels,
}

#[derive(Args, Debug, Serialize)]
pub struct Gensets {
    #[arg(long, default_value = "grid:8x8")]
    graph: String,
    /// Relator length bound.
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 0.9)]
    p: f64,
    #[arg(long, default_value_t = 3)]
    nmax: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Radius of the k-closure; defaults to `k`.
    #[arg(long)]
    closure_k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Metric::Midpoint)]
    metric: Metric,
    /// Longest cycle checked for span membership; defaults to `2k`.
    #[arg(long)]
    lcheck: Option<usize>,
    /// Boundary distance a cycle must exceed to count as interior; defaults to `k · nmax`.
    #[arg(long)]
    interior_radius: Option<usize>,
    #[arg(long, value_enum, default_value_t = AdmissionArg::RunningBasis)]
    admission: AdmissionArg,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: usize,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

struct GensetsRow {
    rank: usize,
    dim: usize,
    max_multiplicity: usize,
    closure_largest: usize,
    interior_fraction: Option<f64>,
    level_sizes: Vec<usize>,
}

impl Gensets {
    pub fn common(&self) -> &Common {
        &self.common
    }

    fn trial(&self, g: &Graph, fam: &cyclespace::gensets::GeneratorFamily, t: usize) -> cyclespace::Result<GensetsRow> {
        let omega = bernoulli_sample(g, self.p, &mut RngStream::new(self.seed, t as u64).rng())?;
        let admission = match self.admission {
            AdmissionArg::RunningBasis => Admission::RunningBasis,
            AdmissionArg::PreviousLevels => Admission::PreviousLevels,
        };
        let res = build_cprime_with(g, &omega, fam, self.nmax, admission, self.budget)?;
        verify_levels(g, &res, fam)?;
        check_completeness(g, &omega, fam, &res)?;
        check_no_generator_in_omega(&res, fam, &omega)?;
        let metric = match self.metric {
            Metric::Midpoint => ClosureMetric::Midpoint,
            Metric::Endpoint => ClosureMetric::Endpoint,
        };
        let closure = k_closure(g, &omega, self.closure_k.unwrap_or(self.k), metric)?;
        let rep = spanning_report(
            g,
            &omega,
            &res,
            self.lcheck.unwrap_or(2 * self.k),
            self.interior_radius.unwrap_or(self.k * self.nmax),
        )?;
        Ok(GensetsRow {
            rank: rep.rank,
            dim: rep.dim,
            max_multiplicity: multiplicity_profile(&res).max,
            closure_largest: closure.largest_component,
            interior_fraction: rep.interior_fraction(),
            level_sizes: res.levels.iter().map(Vec::len).collect(),
        })
    }

    pub fn execute(&self) -> Result<Report, Failure> {
        let (_, target) = build_graph(&self.graph)?;
        let g = target.graph();
        let fam = relator_cycles(g, self.k)?;
        let rows = (0..self.trials)
            .into_par_iter()
            .map(|t| self.trial(g, &fam, t))
            .collect::<cyclespace::Result<Vec<_>>>()?;
        let mut r = Report::new(&[
            "trial",
            "rank",
            "dim",
            "max_multiplicity",
            "closure_largest_component",
            "interior_completeness_fraction",
        ]);
        let mut levels = vec![0usize; self.nmax];
        for (t, row) in rows.iter().enumerate() {
            r.rows.push(vec![
                t.into(),
                row.rank.into(),
                row.dim.into(),
                row.max_multiplicity.into(),
                row.closure_largest.into(),
                row.interior_fraction.map_or(Value::Null, Into::into),
            ]);
            for (acc, n) in levels.iter_mut().zip(&row.level_sizes) {
                *acc += n;
            }
        }
        r.note("generators", fam.len());
        r.note("cycles_per_level", json!(levels));
        r.note("full_rank_trials", rows.iter().filter(|x| x.rank == x.dim).count());
        r.note("max_multiplicity", rows.iter().map(|x| x.max_multiplicity).max().unwrap_or(0));
        Ok(r)
    }
}

#[derive(Args, Debug, Serialize)]
pub struct Domination {
    #[arg(long, default_value = "triangle")]
    graph: String,
    /// FK-Ising parameter.
    #[arg(long, default_value_t = 0.6)]
    p: f64,
    /// Bernoulli parameter; defaults to `p/(2−p)`.
    #[arg(long)]
    q: Option<f64>,
    /// Random increasing events tested when the graph is too large for enumeration.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

impl Domination {
    pub fn common(&self) -> &Common {
        &self.common
    }

    pub fn execute(&self) -> Result<Report, Failure> {
        let (_, target) = build_graph(&self.graph)?;
        let g = target.graph();
        let q = self.q.unwrap_or_else(|| loop_parameter_for(self.p));
        let fk = fk_exact(g, self.p)?;
        let b = SubsetDistribution::bernoulli(g.edge_count(), q)?;
        let rep = if g.edge_count() <= EXHAUSTIVE_MAX_EDGES {
            check_domination(&fk, &b)?
        } else {
            check_domination_sampled(&fk, &b, self.samples, &mut RngStream::new(self.seed, 0).rng())?
        };
        let mut r = Report::new(&["p", "q", "dominates", "exhaustive", "events_checked", "worst_gap"]);
        r.rows.push(vec![
            self.p.into(),
            q.into(),
            rep.dominates.into(),
            rep.exhaustive.into(),
            rep.events_checked.into(),
            rep.worst_gap.into(),
        ]);
        r.passed = rep.dominates;
        if !rep.exhaustive {
            r.note("method", "sampled increasing events (non-exhaustive)");
        }
        Ok(r)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geodesy {
    /// Distances in the whole graph.
    Ambient,
    /// Distances inside the sampled configuration.
    Omega,
}

#[derive(Args, Debug, Serialize)]
pub struct EnumerateGeodesics {
    #[arg(long)]
    graph: String,
    /// Vertex id, `center` for grids and tori, or `o` for DL boxes.
    #[arg(long)]
    vertex: String,
    #[arg(long)]
    max_len: usize,
    /// Bernoulli parameter of the configuration searched; 1 keeps every edge.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Geodesy::Ambient)]
    geodesy: Geodesy,
    /// Margin for DL boxes.
    #[arg(long, default_value_t = 1)]
    margin: usize,
    #[arg(long, default_value_t = DEFAULT_CYCLE_BUDGET)]
    budget: usize,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

impl EnumerateGeodesics {
    pub fn common(&self) -> &Common {
        &self.common
    }

    pub fn execute(&self) -> Result<Report, Failure> {
        let (spec, target) = build_graph(&self.graph)?;
        let g = target.graph();
        let v = spec.resolve_vertex(&target, &self.vertex)?;
        let omega: EdgeVector = bernoulli_sample(g, self.p, &mut RngStream::new(self.seed, 0).rng())?;
        let view = g.restrict(&omega)?;
        let oracle: Box<dyn DistanceOracle + '_> = match (self.geodesy, target.dl_box()) {
            (Geodesy::Omega, _) => Box::new(BfsOracle::on_view(view.clone())),
            (Geodesy::Ambient, Some(dl)) => Box::new(MarginOracle::new(dl, self.margin)?),
            (Geodesy::Ambient, None) => Box::new(BfsOracle::new(g)),
        };
        let found = enumerate_geodesic_cycles_through(&view, v, self.max_len, oracle.as_ref(), self.budget)?;
        let mut r = Report::new(&["index", "length", "cycle"]);
        for (i, c) in found.geodesic.iter().enumerate() {
            r.rows.push(vec![i.into(), c.len().into(), c.to_vertex_list().into()]);
        }
        r.note("vertex", v);
        r.note("examined", found.examined);
        r.note("geodesic", found.geodesic.len());
        r.note("indeterminate", found.indeterminate.len());
        Ok(r)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleModel {
    Bernoulli,
    /// Exact FK-Ising sampling.
    Fk,
    /// Heat-bath chain; one state recorded per update after burn-in.
    FkGlauber,
    /// Loop O(1) through FK-Ising and a uniform even subgraph.
    Loop,
    /// Uniform even subgraph of the whole graph.
    Ues,
}

#[derive(Args, Debug, Serialize)]
pub struct Sample {
    #[arg(long, value_enum, default_value_t = SampleModel::Fk)]
    model: SampleModel,
    #[arg(long, default_value = "triangle")]
    graph: String,
    /// Edge parameter for bernoulli and FK models.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Loop weight; defaults to `p/(2−p)`.
    #[arg(long)]
    x: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Updates discarded by the heat-bath chain; defaults to `trials`, half of all updates.
    #[arg(long)]
    burn_in: Option<usize>,
    /// Sweeps when Loop O(1) falls back to the heat-bath chain.
    #[arg(long, default_value_t = DEFAULT_SWEEPS)]
    sweeps: usize,
    /// Dump the exact distribution instead of sampling.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

impl Sample {
    pub fn common(&self) -> &Common {
        &self.common
    }

    fn x(&self) -> f64 {
        self.x.unwrap_or_else(|| loop_parameter_for(self.p))
    }

    fn exact_law(&self, g: &Graph) -> cyclespace::Result<SubsetDistribution> {
        let m = g.edge_count();
        match self.model {
            SampleModel::Bernoulli => SubsetDistribution::bernoulli(m, self.p),
            SampleModel::Fk | SampleModel::FkGlauber => fk_exact(g, self.p),
            SampleModel::Loop => loop_o1_exact(g, self.x()),
            SampleModel::Ues => loop_o1_exact(g, 1.0),
        }
    }

    fn draw(&self, g: &Graph) -> cyclespace::Result<Vec<EdgeVector>> {
        let mut rng = RngStream::new(self.seed, 0).rng();
        let n = self.trials;
        match self.model {
            SampleModel::Bernoulli => (0..n).map(|_| bernoulli_sample(g, self.p, &mut rng)).collect(),
            SampleModel::Fk => {
                let s = fk_exact(g, self.p)?.sampler();
                Ok((0..n).map(|_| s.sample(&mut rng)).collect())
            }
            SampleModel::FkGlauber => unreachable!("histogram path"),
            SampleModel::Loop => {
                let source =
                    if g.edge_count() <= DEFAULT_EDGE_CAP { FkSource::Exact } else { FkSource::Glauber { sweeps: self.sweeps } };
                let s = LoopViaFk::new(g, self.x(), source)?;
                (0..n).map(|_| s.sample(UesMethod::SpanningTree, &mut rng)).collect()
            }
            SampleModel::Ues => {
                let view = g.view();
                Ok((0..n).map(|_| ues_spanning_tree(&view, &mut rng)).collect())
            }
        }
    }

    pub fn execute(&self) -> Result<Report, Failure> {
        let (_, target) = build_graph(&self.graph)?;
        let g = target.graph();
        if self.exact {
            let d = self.exact_law(g)?;
            let mut r = Report::new(&["subset", "weight", "probability"]);
            for (hex, w, p) in d.csv_rows() {
                r.rows.push(vec![hex.into(), w.into(), p.into()]);
            }
            return Ok(r);
        }
        let m = g.edge_count();
        let exact = (m <= DEFAULT_EDGE_CAP).then(|| self.exact_law(g)).transpose()?;
        let mut counts: std::collections::BTreeMap<EdgeVector, u64> = Default::default();
        if let SampleModel::FkGlauber = self.model {
            let burn = self.burn_in.unwrap_or(self.trials);
            let mut rng = RngStream::new(self.seed, 0).rng();
            let h = fk_glauber_histogram(g, self.p, burn, self.trials, &mut rng)?;
            for (mask, p) in h.support() {
                counts.insert(EdgeVector::from_mask(m, mask), (p * self.trials as f64).round() as u64);
            }
        } else {
            for s in self.draw(g)? {
                *counts.entry(s).or_default() += 1;
            }
        }
        let mut r = Report::new(&["subset", "count", "frequency", "exact"]);
        for (s, c) in &counts {
            let exact_p = exact.as_ref().map_or(Value::Null, |d| d.prob(s.to_mask()).into());
            r.rows.push(vec![s.to_hex().into(), (*c).into(), (*c as f64 / self.trials as f64).into(), exact_p]);
        }
        r.note("distinct", counts.len());
        if let Some(d) = &exact {
            let mut emp = vec![0u64; 1 << m];
            for (s, c) in &counts {
                emp[s.to_mask() as usize] = *c;
            }
            if self.trials > 0 {
                let emp = SubsetDistribution::from_counts(m, &emp)?;
                r.note("tv_to_exact", cyclespace::models::tv_distance(&emp, d)?);
            }
        }
        Ok(r)
    }
}
