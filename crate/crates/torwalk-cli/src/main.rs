use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use torwalk::bounds;
use torwalk::diophantine::{cf_expand, convergents, AlphaSource, ExpandConfig, Frac, IrrationalSpec};
use torwalk::harness::{self, ExperimentConfig, FitModel, RawConfig, SubsequenceConfig};
use torwalk::stepdist::{linspace, StepDistribution};
use torwalk::walk::{discrepancy, simulate, EmpiricalMeasure};
use torwalk::wasserstein::{kantorovich_exp_lower, wasserstein_2_fourier, wasserstein_p};

#[derive(Parser)]
#[command(name = "torwalk", version, about = "Random walks on the circle and their Wasserstein rates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued fraction, convergents and ‖q_k α‖ enclosures.
    Cf(CfArgs),
    /// Step-law summary and characteristic function.
    Dist(DistArgs),
    /// Simulate one walk and write its orbit.
    Simulate(SimulateArgs),
    /// W_p of a measure against Lebesgue measure.
    Wp(WpArgs),
    /// Closed forms, series and moment checks.
    Bounds(BoundsArgs),
    /// Replicated rate experiment.
    Experiment(ExperimentArgs),
    /// E[W_1] along n = N(q_k).
    Subsequence(SubsequenceArgs),
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

// ---------------------------------------------------------------------------

#[derive(Args)]
struct CfArgs {
    #[arg(long, default_value = "golden")]
    alpha: String,
    #[arg(long, default_value_t = 12)]
    digits: usize,
    #[arg(long, default_value_t = 256)]
    precision: u32,
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn cmd_cf(a: CfArgs) -> Result<()> {
    let source: AlphaSource = a.alpha.parse()?;
    let cf = cf_expand(&source, a.digits + 3, &ExpandConfig::with_precision(a.precision))?;
    let table = convergents(&cf, cf.len() - 1)?;
    let spec = IrrationalSpec::new(&source, a.precision)?.extend(a.digits + 3)?;
    let depth = spec.table.last() - 1;
    let mut rows = Vec::new();
    for k in 0..=a.digits.min(table.last()) {
        let enc = spec.norm_enclosure(&table.q[k], depth);
        rows.push([k.to_string(), cf.term(k).to_string(), table.p[k].to_string(), table.q[k].to_string(), format!("{:e}", enc.lo.to_f64()), format!("{:e}", enc.hi.to_f64())]);
    }
    let header = ["k", "a_k", "p_k", "q_k", "norm_lo", "norm_hi"];
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(header)?;
        for r in &rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    writeln!(io::stdout(), "{source} = {cf}")?;
    writeln!(io::stdout(), "{:>3} {:>8} {:>24} {:>24} {:>12} {:>12}", header[0], header[1], header[2], header[3], header[4], header[5])?;
    for r in rows {
        writeln!(io::stdout(), "{:>3} {:>8} {:>24} {:>24} {:>12} {:>12}", r[0], r[1], r[2], r[3], r[4], r[5])?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Args)]
struct DistArgs {
    #[arg(long)]
    dist: String,
    /// `x0:x1:steps`; emits x, Re φ, Im φ, tail_bound.
    #[arg(long)]
    charfn: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_dist(a: DistArgs) -> Result<()> {
    let d: StepDistribution = a.dist.parse()?;
    match &a.charfn {
        None => {
            let info = json!({
                "label": d.label(),
                "declared_beta": d.declared_beta(),
                "mean": d.mean(),
                "variance": d.variance(),
                "gcd": d.gcd_support().ok(),
                "support": d.support(),
            });
            writeln!(output(&a.out)?, "{}", serde_json::to_string_pretty(&info)?)?;
        }
        Some(spec) => {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                bail!("--charfn expects x0:x1:steps");
            }
            let (x0, x1, steps): (f64, f64, usize) = (parts[0].parse()?, parts[1].parse()?, parts[2].parse()?);
            let mut w = csv::Writer::from_writer(output(&a.out)?);
            w.write_record(["x", "re", "im", "tail_bound"])?;
            for x in linspace(x0, x1, steps) {
                let v = d.char_fn(x, a.tol)?;
                w.write_record([x.to_string(), v.value.re.to_string(), v.value.im.to_string(), v.tail_bound.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    dist: String,
    #[arg(long, default_value = "golden")]
    alpha: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 256)]
    precision: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let d: StepDistribution = a.dist.parse()?;
    let alpha = IrrationalSpec::new(&a.alpha.parse()?, a.precision)?;
    let path = simulate(&d, &alpha, a.n, a.seed)?;
    let mut w = csv::Writer::from_writer(output(&a.out)?);
    w.write_record(["j", "S_j", "orbit_fixedpoint_hex", "orbit_float64"])?;
    for j in 0..path.partial_sums.len() {
        let x = &path.orbit[j];
        w.write_record([(j + 1).to_string(), path.partial_sums[j].to_string(), x.hex(), x.to_f64().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Args)]
struct WpArgs {
    /// CSV of points in [0, 1), one per line, with an optional integer multiplicity column.
    #[arg(long = "in", conflicts_with = "simulate")]
    input: Option<PathBuf>,
    /// Simulate a walk of this length with --dist, --alpha and --seed.
    #[arg(long)]
    simulate: Option<usize>,
    #[arg(long, default_value = "rademacher")]
    dist: String,
    #[arg(long, default_value = "golden")]
    alpha: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    p: Vec<f64>,
    #[arg(long = "fourier-M")]
    fourier_m: Option<u64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_measure(path: &PathBuf) -> Result<EmpiricalMeasure> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_path(path)?;
    let mut pairs = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let Some(first) = rec.get(0) else { continue };
        let Ok(x) = first.trim().parse::<f64>() else { continue };
        if !(0.0..1.0).contains(&x) {
            bail!("point {x} outside [0, 1)");
        }
        let w: u64 = match rec.get(1) {
            Some(s) if !s.trim().is_empty() => s.trim().parse()?,
            _ => 1,
        };
        pairs.push((torwalk::walk::to_position(x), w));
    }
    if pairs.is_empty() {
        bail!("no points in {}", path.display());
    }
    Ok(EmpiricalMeasure::from_weighted(&pairs))
}

fn cmd_wp(a: WpArgs) -> Result<()> {
    let mu = match (&a.input, a.simulate) {
        (Some(p), _) => read_measure(p)?,
        (None, Some(n)) => {
            let d: StepDistribution = a.dist.parse()?;
            let alpha = IrrationalSpec::new(&a.alpha.parse()?, 256)?;
            EmpiricalMeasure::from_path(&simulate(&d, &alpha, n, a.seed)?)
        }
        (None, None) => bail!("give --in or --simulate"),
    };
    let kant = kantorovich_exp_lower(&mu);
    let disc = discrepancy(&mu);
    let mut w = csv::Writer::from_writer(output(&a.out)?);
    w.write_record(["p", "value", "y_star", "method", "error_bound", "kantorovich_lower", "discrepancy"])?;
    for &p in &a.p {
        let r = wasserstein_p(&mu, p, a.tol)?;
        w.write_record([p.to_string(), r.value.to_string(), r.y_star.to_string(), r.method.to_string(), r.error_bound.to_string(), kant.to_string(), disc.to_string()])?;
    }
    if let Some(m) = a.fourier_m {
        let s = wasserstein_2_fourier(&mu, m);
        w.write_record(["2".into(), s.value.sqrt().to_string(), String::new(), "fourier_series".into(), s.tail_bound.to_string(), kant.to_string(), disc.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, ValueEnum)]
enum BoundsOp {
    SecondMoment,
    LimitConstant,
    Lemma22,
    GEta,
    MomentCheck,
    Rate,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    op: BoundsOp,
    #[arg(long, default_value = "rademacher")]
    dist: String,
    #[arg(long, default_value = "golden")]
    alpha: String,
    #[arg(long, default_value_t = 1)]
    m: i64,
    #[arg(long, default_value_t = 100)]
    n: u64,
    /// Truncation for the limit constant.
    #[arg(long = "M", default_value_t = 10_000)]
    m_max: u64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Asserted constant in ‖qα‖ >= C q^{-γ}.
    #[arg(long = "C", default_value_t = 0.3)]
    c: f64,
    #[arg(long, default_value_t = 2.0)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 1000)]
    replicas: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn cmd_bounds(a: BoundsArgs) -> Result<()> {
    let dist = || -> Result<StepDistribution> { Ok(a.dist.parse()?) };
    let alpha = || -> Result<IrrationalSpec> { Ok(IrrationalSpec::new(&a.alpha.parse()?, 256)?) };
    let v = match a.op {
        BoundsOp::SecondMoment => {
            let value = bounds::second_moment_closed_form(&dist()?, &alpha()?, a.m, a.n)?;
            json!({ "op": "second-moment", "value": value, "tail_bound": 0.0, "assumptions": { "dist": a.dist, "alpha": a.alpha, "m": a.m, "n": a.n } })
        }
        BoundsOp::LimitConstant => {
            let s = bounds::limit_constant(&dist()?, &alpha()?, a.m_max, a.gamma, a.c)?;
            json!({ "op": "limit-constant", "value": s.value, "tail_bound": s.tail_bound, "truncation": s.truncation,
                    "assumptions": { "dist": a.dist, "alpha": a.alpha, "gamma": a.gamma, "C": a.c } })
        }
        BoundsOp::Lemma22 => {
            let b = bounds::lemma22_block_sum(&alpha()?, a.theta, a.tau, a.k)?;
            json!({ "op": "lemma22", "value": b.exact, "block": b, "assumptions": { "alpha": a.alpha, "theta": a.theta, "tau": a.tau } })
        }
        BoundsOp::GEta => {
            let g = bounds::g_eta(a.eta, a.eps, a.tol)?;
            json!({ "op": "g-eta", "value": g.value, "tail_bound": g.tail_bound, "regime": g.regime, "scale": g.scale,
                    "assumptions": { "eta": a.eta, "eps": a.eps } })
        }
        BoundsOp::MomentCheck => {
            let r = bounds::exp_sum_moment_check(&dist()?, &alpha()?, a.p as u32, a.n, a.replicas, a.seed)?;
            json!({ "op": "moment-check", "value": r.moment, "report": r, "assumptions": { "dist": a.dist, "alpha": a.alpha } })
        }
        BoundsOp::Rate => {
            let r = bounds::theoretical_rate(a.beta, a.gamma, a.p)?;
            json!({ "op": "rate", "value": r.exponent, "regime": r, "assumptions": { "beta": a.beta, "gamma": a.gamma, "p": a.p } })
        }
    };
    writeln!(io::stdout(), "{}", serde_json::to_string_pretty(&v)?)?;
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, ValueEnum)]
enum Fit {
    Power,
    PowerLog,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,
    #[arg(long)]
    n_min: Option<u64>,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Draw a fresh walk for every (n, replica).
    #[arg(long)]
    independent: bool,
    #[arg(long, value_enum, default_value = "power")]
    fit: Fit,
    /// Where to write the summary JSON; stdout when the rows go to a file, stderr otherwise.
    #[arg(long)]
    summary: Option<PathBuf>,
}

/// Allowed gap between a fitted and a predicted exponent for the verdict.
const VERDICT_BAND: f64 = 0.06;

fn cmd_experiment(a: ExperimentArgs) -> Result<i32> {
    let base = match &a.config {
        Some(p) => RawConfig::from_toml(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => RawConfig::default(),
    };
    let flags = RawConfig {
        dist: a.dist,
        alpha: a.alpha,
        p: a.p,
        n: a.n,
        n_min: a.n_min,
        n_max: a.n_max,
        replicas: a.replicas,
        seed: a.seed,
        precision: a.precision,
        output: a.out,
        beta: a.beta,
        gamma: a.gamma,
        shared_prefix: a.independent.then_some(false),
    };
    let cfg = ExperimentConfig::from_raw(base.merge(flags))?;
    let out = harness::run_experiment(&cfg)?;
    harness::write_csv(&out.rows, output(&cfg.output)?)?;
    let model = match a.fit {
        Fit::Power => FitModel::Power,
        Fit::PowerLog => FitModel::PowerLog(None),
    };
    let summary = if cfg.n_grid.len() >= harness::FIT_SKIP + 4 { Some(harness::summarize(&cfg, &out, model)?) } else { None };
    let checks: Vec<_> = match &summary {
        Some(s) => s
            .fits
            .iter()
            .map(|(p, f)| {
                let predicted = s.theory.as_ref().and_then(|t| t.iter().find(|(q, _)| q == p)).map(|(_, r)| r.exponent);
                json!({ "p": p, "exponent": f.exponent, "theta": f.theta, "predicted": predicted,
                        "pass": predicted.map(|e| (f.exponent - e).abs() <= VERDICT_BAND) })
            })
            .collect(),
        None => Vec::new(),
    };
    let doc = json!({
        "config": { "dist": cfg.dist.label(), "alpha": cfg.alpha.to_string(), "p": cfg.p, "n": cfg.n_grid,
                    "replicas": cfg.replicas, "seed": cfg.seed, "shared_prefix": cfg.shared_prefix },
        "summary": summary,
        "checks": checks,
        "pathwise_violations": out.violations,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    match (&a.summary, &cfg.output) {
        (Some(p), _) => std::fs::write(p, text)?,
        (None, Some(_)) => writeln!(io::stdout(), "{text}")?,
        (None, None) => eprintln!("{text}"),
    }
    Ok(if out.violations.is_empty() { 0 } else { 2 })
}

// ---------------------------------------------------------------------------

#[derive(Args)]
struct SubsequenceArgs {
    #[arg(long, default_value = "construct:5,2")]
    alpha: String,
    #[arg(long, default_value = "paper-example")]
    dist: String,
    #[arg(long, default_value = "5")]
    gamma: String,
    /// Upper constant in ‖q_kα‖ <= C q_k^{-γ}.
    #[arg(long = "C", default_value = "1/2")]
    c: String,
    #[arg(long = "C1", default_value_t = 20.0)]
    c1: f64,
    #[arg(long, default_value_t = 3)]
    k_min: usize,
    #[arg(long, default_value_t = 6)]
    k_max: usize,
    #[arg(long, default_value_t = 8)]
    replicas: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1 << 26)]
    step_cap: u64,
    #[arg(long, default_value_t = 256)]
    precision: u32,
}

fn cmd_subsequence(a: SubsequenceArgs) -> Result<()> {
    let cfg = SubsequenceConfig {
        gamma: Frac::parse(&a.gamma)?,
        c: Frac::parse(&a.c)?,
        c1: a.c1,
        k_range: a.k_min..=a.k_max,
        replicas: a.replicas,
        seed: a.seed,
        step_cap: a.step_cap,
        precision: a.precision,
    };
    let rows = harness::subsequence_experiment(&a.alpha.parse()?, &a.dist.parse()?, &cfg)?;
    writeln!(io::stdout(), "{}", serde_json::to_string_pretty(&rows)?)?;
    Ok(())
}

fn main() -> Result<()> {
    match run(Cli::parse()) {
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) => Ok(()),
        other => other,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Cf(a) => cmd_cf(a),
        Cmd::Dist(a) => cmd_dist(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Wp(a) => cmd_wp(a),
        Cmd::Bounds(a) => cmd_bounds(a),
        Cmd::Experiment(a) => {
            let code = cmd_experiment(a)?;
            if code != 0 {
                std::process::exit(code);
            }
            Ok(())
        }
        Cmd::Subsequence(a) => cmd_subsequence(a),
    }
}
