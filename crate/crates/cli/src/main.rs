use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use monochrome::experiment::{
    cell_instance, convergence_report, estimate_m, read_records, write_records, write_report,
    Model, RunConfig, SolveMethod,
};
use monochrome::optimizer::{minimize_anneal, minimize_exact, AnnealConfig, SigmaConstraint};
use monochrome::pattern::is_strictly_1_balanced;
use monochrome::subgraph::enumerate_copies;
use monochrome::surrogate::{
    predictor_m, predictor_m_lower, t_alpha_and_vn, SearchMode, SurrogateConfig, SwapAnnealConfig,
};
use monochrome::verify::{verify_suite, VerifyOptions};
use monochrome::{models, Error, FHypergraph, HostGraph, Pattern, Seed};

const EXIT_USAGE: u8 = 1;
const EXIT_CAPABILITY: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "monochrome",
    version,
    about = "Minimum monochromatic pattern copies in random graphs"
)]
struct Cli {
    /// Pattern file (`r s` header plus edges) or a builtin: k<r>, c<r>, p<r>, diamond.
    #[arg(long, global = true)]
    pattern: Option<String>,
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether the pattern is strictly 1-balanced.
    CheckBalance,
    /// Count copies of the pattern in a host graph.
    CountCopies(CountArgs),
    /// Sample an F-graph, or summarize a dumped one.
    Sample(SampleArgs),
    /// Minimize monochromatic copies over bipartitions.
    Minimize(MinimizeArgs),
    /// Gaussian surrogate: T_alpha per magnetization bucket and V_n.
    Surrogate(SurrogateArgs),
    /// Sweep (n, c, seed) cells and record min_mono / n.
    EstimateM(EstimateArgs),
    /// Convergence diagnostics of an estimate-m CSV.
    Report(ReportArgs),
    /// Run the invariant battery.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CountArgs {
    /// Host graph file (`n m` header plus edges).
    #[arg(long, conflicts_with = "n")]
    host: Option<PathBuf>,
    /// Sample the host from G(n, p) instead.
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability for a sampled host; 1 gives K_n.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, required_unless_present = "load")]
    n: Option<usize>,
    /// Inclusion probability of each potential copy.
    #[arg(long, conflicts_with = "c")]
    q: Option<f64>,
    /// Scale: q = c^s n^(1-r).
    #[arg(long)]
    c: Option<f64>,
    /// Write the sampled instance to this file.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Read an instance instead of sampling.
    #[arg(long, conflicts_with_all = ["n", "q", "c"])]
    load: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Anneal,
}

#[derive(Args)]
struct MinimizeArgs {
    /// Instance file written by `sample --dump`.
    #[arg(long, conflicts_with_all = ["n", "c"])]
    load: Option<PathBuf>,
    #[arg(long, required_unless_present = "load")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "load")]
    c: Option<f64>,
    /// Independent instances (sampling mode).
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Anneal)]
    method: MethodArg,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    cooling: Option<f64>,
    /// Restrict to the balanced slice.
    #[arg(long)]
    balanced: bool,
    /// Write wall_ms as 0.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    Exact,
    SwapAnneal,
}

#[derive(Args)]
struct SurrogateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    c: f64,
    #[arg(long, default_value_t = 64)]
    fields: usize,
    /// Magnetization band |h| <= h0.
    #[arg(long, default_value_t = 0.1)]
    h0: f64,
    #[arg(long, value_enum, default_value_t = SearchArg::Exact)]
    search: SearchArg,
    /// Sample every field independently instead of pairing J with -J.
    #[arg(long)]
    no_antithetic: bool,
}

#[derive(Args)]
struct EstimateArgs {
    /// Run config file (`key = value` lines); flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated n grid.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Comma-separated c grid.
    #[arg(long, value_delimiter = ',')]
    c: Option<Vec<f64>>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    cooling: Option<f64>,
    #[arg(long)]
    gnp_max_n: Option<usize>,
    /// Write wall_ms as 0 so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// CSV written by estimate-m.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Shift one entry of J in the covariance Monte Carlo check.
    #[arg(long)]
    corrupt: bool,
    /// Also fail on statistical checks.
    #[arg(long)]
    strict: bool,
}

/// Signals a failed verification without being an error.
struct VerificationFailed;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(VerificationFailed)) => ExitCode::from(EXIT_VERIFICATION),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Capability(_)) => ExitCode::from(EXIT_CAPABILITY),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<Option<VerificationFailed>> {
    match &cli.command {
        Command::CheckBalance => check_balance(cli),
        Command::CountCopies(a) => count_copies(cli, a),
        Command::Sample(a) => sample(cli, a),
        Command::Minimize(a) => minimize(cli, a),
        Command::Surrogate(a) => surrogate(cli, a),
        Command::EstimateM(a) => estimate(cli, a),
        Command::Report(a) => report(cli, a),
        Command::Verify(a) => return verify(cli, a),
    }?;
    Ok(None)
}

fn output(cli: &Cli) -> Result<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(path) => Box::new(io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn builtin_pattern(name: &str) -> Option<monochrome::Result<Pattern>> {
    let lower = name.to_ascii_lowercase();
    if lower == "diamond" {
        return Some(Ok(Pattern::diamond()));
    }
    let (kind, digits) = lower.split_at(1.min(lower.len()));
    let r: usize = digits.parse().ok()?;
    match kind {
        "k" => Some(Pattern::complete(r)),
        "c" => Some(Pattern::cycle(r)),
        "p" => Some(Pattern::path(r)),
        _ => None,
    }
}

fn load_pattern(source: &str, base: Option<&Path>) -> Result<Pattern> {
    let path = match base {
        Some(dir) if Path::new(source).is_relative() => dir.join(source),
        _ => PathBuf::from(source),
    };
    if path.is_file() {
        let text = read(&path)?;
        return Pattern::parse(&text).with_context(|| format!("pattern {}", path.display()));
    }
    match builtin_pattern(source) {
        Some(p) => Ok(p?),
        None => {
            bail!("pattern \"{source}\" is neither a file nor a builtin (k<r>, c<r>, p<r>, diamond)")
        }
    }
}

fn pattern(cli: &Cli) -> Result<Pattern> {
    let source = cli
        .pattern
        .as_deref()
        .ok_or_else(|| anyhow!("--pattern is required"))?;
    load_pattern(source, None)
}

fn check_balance(cli: &Cli) -> Result<()> {
    let p = pattern(cli)?;
    let report = is_strictly_1_balanced(&p)?;
    let mut out = output(cli)?;
    writeln!(
        out,
        "pattern: r = {}, s = {}, aut = {}, d1 = {}",
        p.r(),
        p.s(),
        p.aut_count(),
        p.d1()
    )?;
    if report.strictly_balanced {
        writeln!(out, "strictly 1-balanced: yes")?;
    } else {
        writeln!(out, "strictly 1-balanced: no")?;
        if let Some(w) = report.witness {
            writeln!(
                out,
                "witness: vertices {:?}, edges {:?}, d1 = {}",
                w.vertices, w.edges, w.d1
            )?;
        }
    }
    Ok(())
}

fn count_copies(cli: &Cli, a: &CountArgs) -> Result<()> {
    let p = pattern(cli)?;
    let host = match (&a.host, a.n) {
        (Some(path), _) => HostGraph::parse(&read(path)?)?,
        (None, Some(n)) if a.p >= 1.0 => HostGraph::complete(n),
        (None, Some(n)) => models::sample_gnp(n, a.p, Seed::new(cli.seed, 0))?,
        (None, None) => bail!("give --host FILE or --n N"),
    };
    let copies = enumerate_copies(&host, &p)?;
    let mut out = output(cli)?;
    writeln!(out, "{}", copies.len())?;
    Ok(())
}

fn q_for(p: &Pattern, n: usize, c: f64) -> f64 {
    c.powi(p.s() as i32) * (n as f64).powi(1 - p.r() as i32)
}

fn sample(cli: &Cli, a: &SampleArgs) -> Result<()> {
    let p = pattern(cli)?;
    let h = match &a.load {
        Some(path) => FHypergraph::from_text(&read(path)?, &p)?,
        None => {
            let n = a.n.expect("clap enforces n");
            let q = match (a.q, a.c) {
                (Some(q), _) => q,
                (None, Some(c)) => q_for(&p, n, c),
                (None, None) => bail!("give --q or --c"),
            };
            models::sample_fgraph(&p, n, q, Seed::new(cli.seed, 0))?
        }
    };
    if let Some(path) = &a.dump {
        fs::write(path, h.to_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut out = output(cli)?;
    let q = h
        .q()
        .map(|q| q.to_string())
        .unwrap_or_else(|| "unknown".into());
    writeln!(out, "n = {}, hyperedges = {}, q = {q}", h.n(), h.len())?;
    Ok(())
}

fn anneal_config(
    seed: Seed,
    restarts: Option<usize>,
    steps: Option<usize>,
    cooling: Option<f64>,
) -> AnnealConfig {
    let mut cfg = AnnealConfig::with_seed(seed);
    if let Some(r) = restarts {
        cfg.restarts = r;
    }
    cfg.steps_per_restart = steps.or(cfg.steps_per_restart);
    if let Some(c) = cooling {
        cfg.cooling_ratio = c;
    }
    cfg
}

fn minimize(cli: &Cli, a: &MinimizeArgs) -> Result<()> {
    let p = pattern(cli)?;
    let instances: Vec<(f64, usize, FHypergraph)> = match &a.load {
        Some(path) => vec![(f64::NAN, 0, FHypergraph::from_text(&read(path)?, &p)?)],
        None => {
            let (n, c) = (a.n.expect("clap"), a.c.expect("clap"));
            let mut cfg = RunConfig::new(p.clone());
            cfg.n_grid = vec![n];
            cfg.c_grid = vec![c];
            cfg.seeds = a.seeds;
            cfg.master_seed = cli.seed;
            cfg.validate()?;
            (0..a.seeds)
                .map(|rep| Ok((c, rep, cell_instance(&cfg, n, c, rep)?)))
                .collect::<Result<_>>()?
        }
    };
    let mut rows = Vec::with_capacity(instances.len());
    for (run_id, (c, rep, h)) in instances.iter().enumerate() {
        let constraint = if a.balanced {
            Some(SigmaConstraint::balanced(h.n())?)
        } else {
            None
        };
        let res = match a.method {
            MethodArg::Exact => minimize_exact(h, constraint.as_ref())?,
            MethodArg::Anneal => {
                let seed = Seed::new(cli.seed, *rep as u64).derive(0xa22ea1);
                let cfg = anneal_config(seed, a.restarts, a.steps, a.cooling);
                minimize_anneal(h, &cfg, constraint.as_ref())?
            }
        };
        let wall_ms = if a.no_timing {
            0
        } else {
            res.wall_time.as_millis() as u64
        };
        rows.push([
            run_id.to_string(),
            res.method.as_str().to_string(),
            h.n().to_string(),
            if c.is_nan() {
                String::new()
            } else {
                c.to_string()
            },
            rep.to_string(),
            res.best_value.to_string(),
            h.len().to_string(),
            res.certified.to_string(),
            wall_ms.to_string(),
        ]);
    }
    let mut w = csv::Writer::from_writer(output(cli)?);
    w.write_record([
        "run_id",
        "method",
        "n",
        "c",
        "seed",
        "min_mono",
        "edges",
        "certified",
        "wall_ms",
    ])?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn surrogate(cli: &Cli, a: &SurrogateArgs) -> Result<()> {
    let p = pattern(cli)?;
    let cfg = SurrogateConfig {
        fields: a.fields,
        h0: a.h0,
        mode: match a.search {
            SearchArg::Exact => SearchMode::Exact,
            SearchArg::SwapAnneal => SearchMode::SwapAnneal(SwapAnnealConfig {
                seed: Seed::new(cli.seed, 0).derive(0x5a),
                ..SwapAnnealConfig::default()
            }),
        },
        seed: Seed::new(cli.seed, 0),
        antithetic: !a.no_antithetic,
    };
    let run = t_alpha_and_vn(&p, a.n, a.c, &cfg)?;
    let mut w = csv::Writer::from_writer(output(cli)?);
    w.write_record([
        "field_seed",
        "bucket_h",
        "alpha",
        "T_alpha",
        "objective",
        "vn_running_mean",
    ])?;
    let mut running = 0.0;
    for (i, field) in run.fields.iter().enumerate() {
        running += (field.best_objective - running) / (i + 1) as f64;
        for b in field.buckets.iter().filter(|b| b.t_alpha.is_finite()) {
            w.write_record([
                field.field_index.to_string(),
                (*b.magnetization.numer() as f64 / *b.magnetization.denom() as f64).to_string(),
                b.alpha.to_string(),
                b.t_alpha.to_string(),
                b.objective.to_string(),
                running.to_string(),
            ])?;
        }
    }
    w.flush()?;
    eprintln!(
        "V_n = {} (stderr {}), kappa = {}, surrogate m = {}, \
         leading-order predictor m = {} (kappa - sqrt term: {}), |alpha| sqrt(d) <= {}",
        run.vn,
        run.vn_stderr,
        run.constants.kappa,
        run.surrogate_m,
        predictor_m(&p, a.c)?,
        predictor_m_lower(&p, a.c)?,
        run.alpha_constant
    );
    Ok(())
}

fn estimate(cli: &Cli, a: &EstimateArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(path) => {
            let base = path.parent().map(Path::to_path_buf);
            let text = read(path)?;
            let override_pattern = cli.pattern.clone();
            RunConfig::parse(&text, |source| {
                let source = override_pattern.as_deref().unwrap_or(source);
                load_pattern(source, base.as_deref()).map_err(|e| match e.downcast::<Error>() {
                    Ok(err) => err,
                    Err(other) => Error::Domain(format!("{other:#}")),
                })
            })?
        }
        None => RunConfig::new(pattern(cli)?),
    };
    if a.config.is_none() || cli.seed != 0 {
        cfg.master_seed = cli.seed;
    }
    if let Some(n) = &a.n {
        cfg.n_grid = n.clone();
    }
    if let Some(c) = &a.c {
        cfg.c_grid = c.clone();
    }
    if let Some(s) = a.seeds {
        cfg.seeds = s;
    }
    if let Some(m) = &a.model {
        cfg.model = Model::parse(m)?;
    }
    if let Some(m) = a.method {
        cfg.method = match m {
            MethodArg::Exact => SolveMethod::Exact,
            MethodArg::Anneal => SolveMethod::Anneal,
        };
    }
    if let Some(r) = a.restarts {
        cfg.restarts = r;
    }
    if a.steps.is_some() {
        cfg.steps = a.steps;
    }
    if let Some(c) = a.cooling {
        cfg.cooling_ratio = c;
    }
    if let Some(g) = a.gnp_max_n {
        cfg.gnp_max_n = g;
    }
    if a.no_timing {
        cfg.timing = false;
    }
    let records = estimate_m(&cfg)?;
    write_records(&records, output(cli)?)?;
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("{failed} of {} cells recorded an error", records.len());
    }
    Ok(())
}

fn report(cli: &Cli, a: &ReportArgs) -> Result<()> {
    let file =
        fs::File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let records = read_records(file)?;
    let rep = convergence_report(&records)?;
    write_report(&rep, output(cli)?)?;
    for g in rep.groups.iter().filter(|g| g.non_monotone) {
        eprintln!(
            "anomaly: non-monotone per-n means at c = {} (certified = {})",
            g.c, g.certified
        );
    }
    if rep.failed_cells > 0 {
        eprintln!("{} failed cells skipped", rep.failed_cells);
    }
    Ok(())
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<Option<VerificationFailed>> {
    let report = verify_suite(&VerifyOptions {
        seed: cli.seed,
        corrupt_field_entry: a.corrupt,
    });
    let mut out = output(cli)?;
    writeln!(out, "{report}")?;
    let ok = if a.strict {
        report.all_passed()
    } else {
        report.all_exact_passed()
    };
    Ok((!ok).then_some(VerificationFailed))
}
