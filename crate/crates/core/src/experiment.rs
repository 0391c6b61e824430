//! Reproducible sweeps: `m(F, c)` estimation over `(n, c, seed)` cells, CSV
//! persistence, and the convergence report.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{sample_fgraph, sample_gnp, splitmix64, FHypergraph, Seed};
use crate::optimizer::{minimize_anneal, minimize_exact, AnnealConfig, OptResult};
use crate::pattern::Pattern;
use crate::subgraph::enumerate_copies;
use crate::surrogate::predictor_m;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Random F-graph `H_F(n, q)` with `q = c^s n^{1−r}`.
    FGraph,
    /// `G(n, p)` with `p = c n^{−1/d₁(F)}`, copies of `F` enumerated.
    Gnp,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::FGraph => "fgraph",
            Model::Gnp => "gnp",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fgraph" => Ok(Model::FGraph),
            "gnp" => Ok(Model::Gnp),
            other => Err(Error::domain(format!(
                "unknown model \"{other}\" (fgraph|gnp)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Exact,
    Anneal,
}

impl SolveMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveMethod::Exact => "exact",
            SolveMethod::Anneal => "anneal",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SolveMethod::Exact),
            "anneal" => Ok(SolveMethod::Anneal),
            other => Err(Error::domain(format!(
                "unknown method \"{other}\" (exact|anneal)"
            ))),
        }
    }
}

/// A sweep over `n_grid × c_grid × 0..seeds`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub pattern: Pattern,
    pub model: Model,
    pub n_grid: Vec<usize>,
    pub c_grid: Vec<f64>,
    pub seeds: usize,
    pub master_seed: u64,
    pub method: SolveMethod,
    pub restarts: usize,
    pub steps: Option<usize>,
    pub cooling_ratio: f64,
    /// `gnp` cells with larger `n` are refused (copy enumeration cost).
    pub gnp_max_n: usize,
    /// When false, `wall_ms` is written as 0 so reruns are byte-identical.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(pattern: Pattern) -> Self {
        let defaults = AnnealConfig::default();
        RunConfig {
            pattern,
            model: Model::FGraph,
            n_grid: vec![100],
            c_grid: vec![1.0],
            seeds: 1,
            master_seed: 0,
            method: SolveMethod::Anneal,
            restarts: defaults.restarts,
            steps: None,
            cooling_ratio: defaults.cooling_ratio,
            gnp_max_n: 200,
            timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() || self.c_grid.is_empty() {
            return Err(Error::domain("n and c grids must be non-empty"));
        }
        if let Some(&n) = self.n_grid.iter().find(|&&n| n < self.pattern.r()) {
            return Err(Error::domain(format!(
                "n = {n} is smaller than r = {}",
                self.pattern.r()
            )));
        }
        if let Some(&c) = self.c_grid.iter().find(|&&c| !(c > 0.0)) {
            return Err(Error::domain(format!("c = {c} must be positive")));
        }
        if self.seeds == 0 {
            return Err(Error::domain("seeds must be >= 1"));
        }
        Ok(())
    }

    /// Parses the flat `key = value` format. Grids are comma lists; `#`
    /// starts a comment. `pattern` is a path resolved by `load_pattern`.
    pub fn parse(text: &str, load_pattern: impl Fn(&str) -> Result<Pattern>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::parse(i + 1, format!("expected \"key = value\", got \"{line}\""))
            })?;
            entries.insert(key.trim().to_string(), (i + 1, value.trim().to_string()));
        }
        let (_, pattern_path) = entries
            .remove("pattern")
            .ok_or_else(|| Error::parse(1, "missing required key \"pattern\""))?;
        let mut cfg = RunConfig::new(load_pattern(&pattern_path)?);
        for (key, (line, value)) in entries {
            let bad = |what: &str| Error::parse(line, format!("invalid {what} \"{value}\""));
            match key.as_str() {
                "model" => cfg.model = Model::parse(&value).map_err(|_| bad("model"))?,
                "n" => cfg.n_grid = parse_list(&value).map_err(|_| bad("n grid"))?,
                "c" => cfg.c_grid = parse_list(&value).map_err(|_| bad("c grid"))?,
                "seeds" => cfg.seeds = value.parse().map_err(|_| bad("seed count"))?,
                "seed" => cfg.master_seed = value.parse().map_err(|_| bad("seed"))?,
                "method" => cfg.method = SolveMethod::parse(&value).map_err(|_| bad("method"))?,
                "restarts" => cfg.restarts = value.parse().map_err(|_| bad("restarts"))?,
                "steps" => cfg.steps = Some(value.parse().map_err(|_| bad("steps"))?),
                "cooling" => cfg.cooling_ratio = value.parse().map_err(|_| bad("cooling ratio"))?,
                "gnp_max_n" => cfg.gnp_max_n = value.parse().map_err(|_| bad("gnp_max_n"))?,
                "timing" => cfg.timing = value.parse().map_err(|_| bad("timing flag"))?,
                other => return Err(Error::parse(line, format!("unknown key \"{other}\""))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sampling seed of one cell: the master seed mixed with `(n, c)`,
    /// stream = replicate index.
    pub fn cell_seed(&self, n: usize, c: f64, replicate: usize) -> Seed {
        let mixed = splitmix64(self.master_seed ^ splitmix64(n as u64 ^ splitmix64(c.to_bits())));
        Seed::new(mixed, replicate as u64)
    }

    fn anneal_config(&self, seed: Seed) -> AnnealConfig {
        AnnealConfig {
            restarts: self.restarts,
            steps_per_restart: self.steps,
            initial_temperature: None,
            cooling_ratio: self.cooling_ratio,
            seed: seed.derive(0xa22ea1),
        }
    }
}

fn parse_list<T: std::str::FromStr>(value: &str) -> std::result::Result<Vec<T>, ()> {
    let list: std::result::Result<Vec<T>, _> =
        value.split(',').map(|t| t.trim().parse::<T>()).collect();
    match list {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(()),
    }
}

/// One row of an `estimate-m` sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRecord {
    pub n: usize,
    pub c: f64,
    pub seed: usize,
    pub min_mono: Option<u64>,
    pub edges: Option<u64>,
    pub min_mono_per_n: Option<f64>,
    pub predictor_m: f64,
    pub certified: bool,
    pub wall_ms: u64,
    pub model: Model,
    pub method: SolveMethod,
    /// Set when the cell could not be solved (capability or domain error).
    pub error: Option<String>,
}

pub const ESTIMATE_HEADER: [&str; 12] = [
    "n",
    "c",
    "seed",
    "min_mono",
    "edges",
    "min_mono_per_n",
    "predictor_m",
    "certified",
    "wall_ms",
    "model",
    "method",
    "error",
];

/// The instance of one cell: `H_F(n, q)` directly, or the copies of `F` in
/// a `G(n, p)` sample.
pub fn cell_instance(cfg: &RunConfig, n: usize, c: f64, replicate: usize) -> Result<FHypergraph> {
    let p = &cfg.pattern;
    let seed = cfg.cell_seed(n, c, replicate);
    match cfg.model {
        Model::FGraph => {
            let q = c.powi(p.s() as i32) * (n as f64).powi(1 - p.r() as i32);
            if q > 1.0 {
                return Err(Error::domain(format!(
                    "q = {q} exceeds 1 at n = {n}, c = {c}"
                )));
            }
            sample_fgraph(p, n, q, seed)
        }
        Model::Gnp => {
            if n > cfg.gnp_max_n {
                return Err(Error::capability(format!(
                    "gnp model limited to n <= {}",
                    cfg.gnp_max_n
                )));
            }
            let inv_d1 = (p.r() as f64 - 1.0) / p.s() as f64;
            let prob = c * (n as f64).powf(-inv_d1);
            if prob > 1.0 {
                return Err(Error::domain(format!(
                    "p = {prob} exceeds 1 at n = {n}, c = {c}"
                )));
            }
            let host = sample_gnp(n, prob, seed)?;
            Ok(enumerate_copies(&host, p)?.to_hypergraph())
        }
    }
}

fn solve_cell(cfg: &RunConfig, n: usize, c: f64, replicate: usize) -> Result<(OptResult, u64)> {
    let h = cell_instance(cfg, n, c, replicate)?;
    let res = match cfg.method {
        SolveMethod::Exact => minimize_exact(&h, None)?,
        SolveMethod::Anneal => {
            minimize_anneal(&h, &cfg.anneal_config(cfg.cell_seed(n, c, replicate)), None)?
        }
    };
    Ok((res, h.len() as u64))
}

/// Runs every `(n, c, seed)` cell and returns rows in cell order,
/// independent of completion order.
pub fn estimate_m(cfg: &RunConfig) -> Result<Vec<EstimateRecord>> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &n in &cfg.n_grid {
        for &c in &cfg.c_grid {
            for rep in 0..cfg.seeds {
                cells.push((n, c, rep));
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(n, c, rep)| {
            let start = Instant::now();
            let predictor = predictor_m(&cfg.pattern, c)?;
            let outcome = solve_cell(cfg, n, c, rep);
            let wall_ms = if cfg.timing {
                start.elapsed().as_millis() as u64
            } else {
                0
            };
            Ok(match outcome {
                Ok((res, edges)) => EstimateRecord {
                    n,
                    c,
                    seed: rep,
                    min_mono: Some(res.best_value),
                    edges: Some(edges),
                    min_mono_per_n: Some(res.best_value as f64 / n as f64),
                    predictor_m: predictor,
                    certified: res.certified,
                    wall_ms,
                    model: cfg.model,
                    method: cfg.method,
                    error: None,
                },
                Err(e) => EstimateRecord {
                    n,
                    c,
                    seed: rep,
                    min_mono: None,
                    edges: None,
                    min_mono_per_n: None,
                    predictor_m: predictor,
                    certified: false,
                    wall_ms,
                    model: cfg.model,
                    method: cfg.method,
                    error: Some(e.to_string()),
                },
            })
        })
        .collect()
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

pub fn write_records<W: Write>(records: &[EstimateRecord], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ESTIMATE_HEADER)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.c.to_string(),
            r.seed.to_string(),
            opt(&r.min_mono),
            opt(&r.edges),
            opt(&r.min_mono_per_n),
            r.predictor_m.to_string(),
            r.certified.to_string(),
            r.wall_ms.to_string(),
            r.model.as_str().to_string(),
            r.method.as_str().to_string(),
            opt(&r.error),
        ])?;
    }
    w.flush()
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<EstimateRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::parse(1, format!("missing column \"{name}\"")))
    };
    let idx: Vec<usize> = ESTIMATE_HEADER
        .iter()
        .map(|h| col(h))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::parse(line, e.to_string()))?;
        let field = |k: usize| row.get(idx[k]).unwrap_or("");
        fn num<T: std::str::FromStr>(line: usize, name: &str, s: &str) -> Result<T> {
            s.parse()
                .map_err(|_| Error::parse(line, format!("invalid {name} \"{s}\"")))
        }
        fn maybe<T: std::str::FromStr>(line: usize, name: &str, s: &str) -> Result<Option<T>> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(line, name, s).map(Some)
            }
        }
        out.push(EstimateRecord {
            n: num(line, "n", field(0))?,
            c: num(line, "c", field(1))?,
            seed: num(line, "seed", field(2))?,
            min_mono: maybe(line, "min_mono", field(3))?,
            edges: maybe(line, "edges", field(4))?,
            min_mono_per_n: maybe(line, "min_mono_per_n", field(5))?,
            predictor_m: num(line, "predictor_m", field(6))?,
            certified: num(line, "certified", field(7))?,
            wall_ms: num(line, "wall_ms", field(8))?,
            model: Model::parse(field(9)).map_err(|_| Error::parse(line, "invalid model"))?,
            method: SolveMethod::parse(field(10))
                .map_err(|_| Error::parse(line, "invalid method"))?,
            error: Some(field(11).to_string()).filter(|s| !s.is_empty()),
        });
    }
    Ok(out)
}

/// Per-`n` statistics of `min_mono_per_n` within one `(c, certified)` group.
#[derive(Debug, Clone, PartialEq)]
pub struct PerN {
    pub n: usize,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
}

/// Convergence diagnostics for one `c`. Certified minima and annealing upper
/// bounds are summarized separately and never pooled.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceGroup {
    pub c: f64,
    pub certified: bool,
    pub predictor_m: f64,
    pub per_n: Vec<PerN>,
    /// Least-squares slope of the per-`n` means against `1/n`.
    pub slope_vs_inv_n: Option<f64>,
    /// Intercept of that fit: the `n → ∞` extrapolation.
    pub intercept: Option<f64>,
    /// Standard deviation of the per-`n` means.
    pub dispersion: f64,
    /// Per-`n` means go up and down along the `n` grid.
    pub non_monotone: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub groups: Vec<ConvergenceGroup>,
    /// Rows skipped because the cell recorded an error.
    pub failed_cells: usize,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

pub fn convergence_report(records: &[EstimateRecord]) -> Result<ConvergenceReport> {
    if records.is_empty() {
        return Err(Error::domain("no records to summarize"));
    }
    let mut groups: BTreeMap<(u64, bool), (f64, bool, f64, BTreeMap<usize, Vec<f64>>)> =
        BTreeMap::new();
    let mut failed_cells = 0;
    for r in records {
        let Some(value) = r.min_mono_per_n else {
            failed_cells += 1;
            continue;
        };
        let entry = groups
            .entry((r.c.to_bits(), r.certified))
            .or_insert_with(|| (r.c, r.certified, r.predictor_m, BTreeMap::new()));
        entry.3.entry(r.n).or_default().push(value);
    }
    let distinct_n: std::collections::BTreeSet<usize> = records.iter().map(|r| r.n).collect();
    if distinct_n.len() < 2 {
        return Err(Error::domain(
            "convergence report needs at least two n values",
        ));
    }
    let mut out: Vec<ConvergenceGroup> = groups
        .into_values()
        .map(|(c, certified, predictor, by_n)| {
            let per_n: Vec<PerN> = by_n
                .into_iter()
                .map(|(n, vals)| {
                    let (mean, std) = mean_std(&vals);
                    PerN {
                        n,
                        count: vals.len(),
                        mean,
                        std,
                    }
                })
                .collect();
            let means: Vec<f64> = per_n.iter().map(|p| p.mean).collect();
            let (_, dispersion) = mean_std(&means);
            let (slope, intercept) = if per_n.len() >= 2 {
                let xs: Vec<f64> = per_n.iter().map(|p| 1.0 / p.n as f64).collect();
                let (mx, _) = mean_std(&xs);
                let (my, _) = mean_std(&means);
                let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
                let sxy: f64 = xs
                    .iter()
                    .zip(&means)
                    .map(|(x, y)| (x - mx) * (y - my))
                    .sum();
                let slope = sxy / sxx;
                (Some(slope), Some(my - slope * mx))
            } else {
                (None, None)
            };
            let ups = means.windows(2).any(|w| w[1] > w[0]);
            let downs = means.windows(2).any(|w| w[1] < w[0]);
            ConvergenceGroup {
                c,
                certified,
                predictor_m: predictor,
                per_n,
                slope_vs_inv_n: slope,
                intercept,
                dispersion,
                non_monotone: ups && downs,
            }
        })
        .collect();
    out.sort_by(|a, b| a.c.total_cmp(&b.c).then(a.certified.cmp(&b.certified)));
    Ok(ConvergenceReport {
        groups: out,
        failed_cells,
    })
}

pub const REPORT_HEADER: [&str; 10] = [
    "c",
    "certified",
    "n",
    "count",
    "mean_min_mono_per_n",
    "std_min_mono_per_n",
    "slope_vs_inv_n",
    "intercept",
    "dispersion",
    "predictor_m_leading_order",
];

/// One CSV row per `(c, certified, n)`; group-level columns repeat.
pub fn write_report<W: Write>(report: &ConvergenceReport, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for g in &report.groups {
        for p in &g.per_n {
            w.write_record([
                g.c.to_string(),
                g.certified.to_string(),
                p.n.to_string(),
                p.count.to_string(),
                p.mean.to_string(),
                p.std.to_string(),
                opt(&g.slope_vs_inv_n),
                opt(&g.intercept),
                g.dispersion.to_string(),
                g.predictor_m.to_string(),
            ])?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, c: f64, seed: usize, value: f64, certified: bool) -> EstimateRecord {
        EstimateRecord {
            n,
            c,
            seed,
            min_mono: Some((value * n as f64).round() as u64),
            edges: Some(1000),
            min_mono_per_n: Some(value),
            predictor_m: 1.0,
            certified,
            wall_ms: 0,
            model: Model::FGraph,
            method: SolveMethod::Anneal,
            error: None,
        }
    }

    #[test]
    fn constant_column_has_zero_slope() {
        let recs: Vec<_> = [100, 200, 400]
            .iter()
            .flat_map(|&n| (0..3).map(move |s| record(n, 2.0, s, 0.25, false)))
            .collect();
        let rep = convergence_report(&recs).unwrap();
        assert_eq!(rep.groups.len(), 1);
        let g = &rep.groups[0];
        assert_eq!(g.slope_vs_inv_n, Some(0.0));
        assert_eq!(g.dispersion, 0.0);
        assert!(g.per_n.iter().all(|p| p.std == 0.0));
        assert!(!g.non_monotone);
    }

    #[test]
    fn certified_and_bounds_are_not_pooled() {
        let recs = vec![
            record(10, 1.0, 0, 0.1, true),
            record(20, 1.0, 0, 0.2, true),
            record(10, 1.0, 1, 0.5, false),
            record(20, 1.0, 1, 0.6, false),
        ];
        let rep = convergence_report(&recs).unwrap();
        assert_eq!(rep.groups.len(), 2);
        let cert = rep.groups.iter().find(|g| g.certified).unwrap();
        assert!((cert.per_n[0].mean - 0.1).abs() < 1e-15);
        let bound = rep.groups.iter().find(|g| !g.certified).unwrap();
        assert!((bound.per_n[0].mean - 0.5).abs() < 1e-15);
    }

    #[test]
    fn flags_non_monotone() {
        let recs = vec![
            record(10, 1.0, 0, 0.1, false),
            record(20, 1.0, 0, 0.3, false),
            record(40, 1.0, 0, 0.2, false),
        ];
        assert!(convergence_report(&recs).unwrap().groups[0].non_monotone);
    }

    #[test]
    fn empty_or_single_n_is_an_error() {
        assert!(convergence_report(&[]).is_err());
        assert!(convergence_report(&[record(10, 1.0, 0, 0.1, false)]).is_err());
    }

    #[test]
    fn csv_roundtrip_and_malformed_input() {
        let mut recs = vec![record(10, 1.5, 0, 0.1, false)];
        recs.push(EstimateRecord {
            min_mono: None,
            edges: None,
            min_mono_per_n: None,
            error: Some("capability exceeded: too big".into()),
            ..record(30, 1.5, 1, 0.0, false)
        });
        let mut buf = Vec::new();
        write_records(&recs, &mut buf).unwrap();
        assert_eq!(read_records(&buf[..]).unwrap(), recs);

        let bad = b"n,c,seed\n1,2,3\n";
        assert!(matches!(read_records(&bad[..]), Err(Error::Parse { .. })));
        let mut corrupt = buf.clone();
        corrupt.extend_from_slice(b"x,1,0,,,,1,false,0,fgraph,anneal,\n");
        assert!(matches!(
            read_records(&corrupt[..]),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn run_config_parsing() {
        let text = "pattern = k3.txt\nmodel = fgraph\nn = 50, 100\nc = 0.5,1\nseeds = 3 # replicates\nmethod = anneal\nrestarts = 2\n";
        let cfg = RunConfig::parse(text, |_| Pattern::complete(3)).unwrap();
        assert_eq!(cfg.n_grid, vec![50, 100]);
        assert_eq!(cfg.c_grid, vec![0.5, 1.0]);
        assert_eq!(cfg.seeds, 3);
        assert_eq!(cfg.restarts, 2);
        assert!(matches!(
            RunConfig::parse("pattern = a\nbogus = 1\n", |_| Pattern::complete(3)),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(RunConfig::parse("pattern = a\nn = 2\n", |_| Pattern::complete(3)).is_err());
        assert!(RunConfig::parse("n = 5\n", |_| Pattern::complete(3)).is_err());
    }

    #[test]
    fn sweep_is_deterministic_without_timing() {
        let mut cfg = RunConfig::new(Pattern::complete(3).unwrap());
        cfg.n_grid = vec![30, 40];
        cfg.c_grid = vec![2.0];
        cfg.seeds = 2;
        cfg.restarts = 2;
        cfg.timing = false;
        let a = estimate_m(&cfg).unwrap();
        let b = estimate_m(&cfg).unwrap();
        let (mut ba, mut bb) = (Vec::new(), Vec::new());
        write_records(&a, &mut ba).unwrap();
        write_records(&b, &mut bb).unwrap();
        assert_eq!(ba, bb);
        assert_eq!(a.len(), 4);
        assert!(a.iter().all(|r| r.min_mono <= r.edges));
    }

    #[test]
    fn infeasible_cells_are_recorded() {
        let mut cfg = RunConfig::new(Pattern::complete(3).unwrap());
        cfg.n_grid = vec![30];
        cfg.method = SolveMethod::Exact;
        let recs = estimate_m(&cfg).unwrap();
        assert!(recs[0].error.as_deref().unwrap().contains("capability"));
        assert_eq!(recs[0].min_mono, None);
    }
}
