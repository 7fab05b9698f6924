//! Experiment driver: replicated walks, exact distances, rate fits.
//!
//! A run draws `R` independent walks per configuration. By default each
//! replica is a single walk of length `max(n)` whose prefixes give the
//! measures at every `n` of the grid; `shared_prefix = false` draws a fresh
//! walk per `(n, replica)` instead. Replica `r` at grid point `i` uses the
//! stream `replica_stream(i, r)` (`i = 0` when prefixes are shared), so
//! results depend only on the master seed.
//!
//! Configuration files are flat TOML documents:
//!
//! ```toml
//! dist = "rademacher"
//! alpha = "golden"
//! p = [1.0, 2.0]
//! n = [256, 512, 1024]      # or n_min / n_max, doubling
//! replicas = 200
//! seed = 7
//! precision = 256
//! output = "rows.csv"       # optional
//! beta = 2.0                # optional regime assertion
//! gamma = 1.0
//! shared_prefix = true
//! ```

use crate::bounds::{mean_se, theoretical_rate, RateRegime};
use crate::diophantine::{AlphaSource, Frac, IrrationalSpec};
use crate::error::{Error, Result};
use crate::rng::{mix64, replica_stream, stream_rng};
use crate::stepdist::StepDistribution;
use crate::walk::{discrepancy, EmpiricalMeasure, Stepper};
use crate::wasserstein::{kantorovich_exp_lower, wasserstein_p_with, Antiderivative};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

/// Tolerance for the general-`p` convex search.
pub const SEARCH_TOL: f64 = 1e-10;
/// Slack allowed in pathwise inequality checks.
pub const PATHWISE_SLACK: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Raw configuration as read from TOML; every field optional so CLI flags can fill gaps.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub dist: Option<String>,
    pub alpha: Option<String>,
    pub p: Option<Vec<f64>>,
    pub n: Option<Vec<u64>>,
    pub n_min: Option<u64>,
    pub n_max: Option<u64>,
    pub replicas: Option<usize>,
    pub seed: Option<u64>,
    pub precision: Option<u32>,
    pub output: Option<PathBuf>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub shared_prefix: Option<bool>,
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Fields set in `other` replace those in `self`.
    pub fn merge(mut self, other: RawConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(dist, alpha, p, n, n_min, n_max, replicas, seed, precision, output, beta, gamma, shared_prefix);
        self
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub dist: StepDistribution,
    pub alpha: AlphaSource,
    pub p: Vec<f64>,
    pub n_grid: Vec<u64>,
    pub replicas: usize,
    pub seed: u64,
    pub precision: u32,
    pub output: Option<PathBuf>,
    /// Asserted `(β, γ)`.
    pub regime: Option<(f64, f64)>,
    pub shared_prefix: bool,
}

/// `n_min, 2 n_min, 4 n_min, ...` up to `n_max`.
pub fn geometric_grid(n_min: u64, n_max: u64) -> Vec<u64> {
    let mut v = Vec::new();
    let mut n = n_min.max(1);
    while n <= n_max {
        v.push(n);
        n *= 2;
    }
    v
}

impl ExperimentConfig {
    pub fn new(dist: StepDistribution, alpha: AlphaSource, p: Vec<f64>, n_grid: Vec<u64>, replicas: usize, seed: u64) -> Result<Self> {
        let cfg = ExperimentConfig { dist, alpha, p, n_grid, replicas, seed, precision: 256, output: None, regime: None, shared_prefix: true };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self> {
        let dist: StepDistribution = raw.dist.as_deref().unwrap_or("rademacher").parse()?;
        let alpha: AlphaSource = raw.alpha.as_deref().unwrap_or("golden").parse()?;
        let n_grid = match (raw.n, raw.n_min, raw.n_max) {
            (Some(n), _, _) => n,
            (None, Some(a), Some(b)) => geometric_grid(a, b),
            (None, None, Some(b)) => geometric_grid(64, b),
            _ => geometric_grid(64, 4096),
        };
        let regime = match (raw.beta, raw.gamma) {
            (Some(b), Some(g)) => Some((b, g)),
            (None, None) => None,
            _ => return Err(Error::InvalidParameter("beta and gamma must be given together".into())),
        };
        let cfg = ExperimentConfig {
            dist,
            alpha,
            p: raw.p.unwrap_or_else(|| vec![1.0, 2.0]),
            n_grid,
            replicas: raw.replicas.unwrap_or(100),
            seed: raw.seed.unwrap_or(0),
            precision: raw.precision.unwrap_or(256),
            output: raw.output,
            regime,
            shared_prefix: raw.shared_prefix.unwrap_or(true),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() || self.n_grid[0] == 0 || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("n grid must be positive and strictly increasing".into()));
        }
        if self.replicas < 2 {
            return Err(Error::InvalidParameter("at least two replicas are required".into()));
        }
        if self.p.is_empty() {
            return Err(Error::InvalidParameter("p list is empty".into()));
        }
        if let Some(&bad) = self.p.iter().find(|p| !(**p >= 1.0) || !p.is_finite()) {
            return Err(Error::InvalidP(bad));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

/// Everything measured on one replica at one `n`.
#[derive(Clone, Debug, Serialize)]
pub struct ReplicaSample {
    pub n: u64,
    pub replica: usize,
    /// `W_p` for each configured `p`, in order.
    pub wp: Vec<f64>,
    pub w1: f64,
    pub w2: f64,
    pub discrepancy: f64,
    pub kantorovich_lower: f64,
}

/// A failed pathwise inequality.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub n: u64,
    pub replica: usize,
    pub inequality: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl ReplicaSample {
    /// `kantorovich_lower <= W_1 <= W_2 <= 1/2` and `W_1 <= D_n`.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut check = |name: &'static str, lhs: f64, rhs: f64| {
            if !(lhs <= rhs + PATHWISE_SLACK) {
                out.push(Violation { n: self.n, replica: self.replica, inequality: name, lhs, rhs });
            }
        };
        check("kantorovich_lower <= W1", self.kantorovich_lower, self.w1);
        check("W1 <= W2", self.w1, self.w2);
        check("W2 <= 1/2", self.w2, 0.5);
        check("W1 <= D_n", self.w1, self.discrepancy);
        out
    }
}

/// Measure one empirical measure.
pub fn measure(mu: &EmpiricalMeasure, ps: &[f64], n: u64, replica: usize) -> Result<ReplicaSample> {
    let f = Antiderivative::new(mu);
    let w1 = wasserstein_p_with(&f, 1.0, SEARCH_TOL)?.value;
    let w2 = wasserstein_p_with(&f, 2.0, SEARCH_TOL)?.value;
    let wp = ps
        .iter()
        .map(|&p| match p {
            1.0 => Ok(w1),
            2.0 => Ok(w2),
            _ => wasserstein_p_with(&f, p, SEARCH_TOL).map(|r| r.value),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicaSample { n, replica, wp, w1, w2, discrepancy: discrepancy(mu), kantorovich_lower: kantorovich_exp_lower(mu) })
}

/// One CSV row: aggregates over replicas at one `(n, p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub n: u64,
    pub p: f64,
    pub mean_wp: f64,
    pub se_wp: f64,
    pub mean_w2sq: f64,
    pub mean_disc: f64,
    pub mean_kant_lower: f64,
    #[serde(rename = "R")]
    pub replicas: usize,
    pub seed_fp: String,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub rows: Vec<ExperimentRow>,
    /// Samples ordered by grid point, then replica.
    pub samples: Vec<ReplicaSample>,
    pub violations: Vec<Violation>,
}

/// Fingerprint of the seed and grid point that produced a row.
pub fn seed_fingerprint(seed: u64, n: u64, replicas: usize) -> String {
    format!("{:016x}", mix64(seed ^ mix64(n ^ mix64(replicas as u64))))
}

/// Simulate, measure and aggregate.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let alpha = IrrationalSpec::new(&cfg.alpha, cfg.precision)?;
    let stepper = Stepper::new(&cfg.dist, &alpha);
    let grid = &cfg.n_grid;
    let n_max = *grid.last().unwrap() as usize;
    let per_replica: Vec<Vec<ReplicaSample>> = if cfg.shared_prefix {
        (0..cfg.replicas)
            .into_par_iter()
            .map(|r| -> Result<Vec<ReplicaSample>> {
                let mut rng = stream_rng(cfg.seed, replica_stream(0, r as u32));
                let mut xs = Vec::with_capacity(n_max);
                stepper.run(n_max, &mut rng, |_, _, x| xs.push(x.top64()))?;
                grid.iter()
                    .map(|&n| measure(&EmpiricalMeasure::from_positions(xs[..n as usize].to_vec()), &cfg.p, n, r))
                    .collect()
            })
            .collect::<Result<_>>()?
    } else {
        (0..cfg.replicas)
            .into_par_iter()
            .map(|r| -> Result<Vec<ReplicaSample>> {
                grid.iter()
                    .enumerate()
                    .map(|(i, &n)| {
                        let mut rng = stream_rng(cfg.seed, replica_stream(i as u32, r as u32));
                        let mut xs = Vec::with_capacity(n as usize);
                        stepper.run(n as usize, &mut rng, |_, _, x| xs.push(x.top64()))?;
                        measure(&EmpiricalMeasure::from_positions(xs), &cfg.p, n, r)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?
    };
    let mut samples = Vec::with_capacity(grid.len() * cfg.replicas);
    for i in 0..grid.len() {
        for rep in &per_replica {
            samples.push(rep[i].clone());
        }
    }
    let violations = samples.iter().flat_map(ReplicaSample::violations).collect();
    let rows = aggregate(&samples, grid, &cfg.p, cfg.replicas, cfg.seed);
    Ok(ExperimentOutput { rows, samples, violations })
}

fn aggregate(samples: &[ReplicaSample], grid: &[u64], ps: &[f64], replicas: usize, seed: u64) -> Vec<ExperimentRow> {
    let mut rows = Vec::new();
    for (i, &n) in grid.iter().enumerate() {
        let block = &samples[i * replicas..(i + 1) * replicas];
        let mean = |f: &dyn Fn(&ReplicaSample) -> f64| mean_se(&block.iter().map(f).collect::<Vec<_>>()).0;
        let w2sq = mean(&|s| s.w2 * s.w2);
        let disc = mean(&|s| s.discrepancy);
        let kant = mean(&|s| s.kantorovich_lower);
        for (k, &p) in ps.iter().enumerate() {
            let (m, se) = mean_se(&block.iter().map(|s| s.wp[k]).collect::<Vec<_>>());
            rows.push(ExperimentRow {
                n,
                p,
                mean_wp: m,
                se_wp: se,
                mean_w2sq: w2sq,
                mean_disc: disc,
                mean_kant_lower: kant,
                replicas,
                seed_fp: seed_fingerprint(seed, n, replicas),
            });
        }
    }
    rows
}

/// Header of the rows CSV.
pub const CSV_HEADER: [&str; 9] = ["n", "p", "mean_wp", "se_wp", "mean_w2sq", "mean_disc", "mean_kant_lower", "R", "seed_fp"];

/// Write rows as CSV; floats use the shortest round-trip decimal form.
pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.p.to_string(),
            r.mean_wp.to_string(),
            r.se_wp.to_string(),
            r.mean_w2sq.to_string(),
            r.mean_disc.to_string(),
            r.mean_kant_lower.to_string(),
            r.replicas.to_string(),
            r.seed_fp.clone(),
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// `(n, mean W_p)` for one `p`.
pub fn series_for_p(rows: &[ExperimentRow], p: f64) -> Vec<(f64, f64)> {
    rows.iter().filter(|r| r.p == p).map(|r| (r.n as f64, r.mean_wp)).collect()
}

/// Grid points dropped from the small-`n` end before fitting.
pub const FIT_SKIP: usize = 2;

/// [`series_for_p`] without the [`FIT_SKIP`] smallest `n`.
pub fn fit_series(rows: &[ExperimentRow], p: f64) -> Vec<(f64, f64)> {
    series_for_p(rows, p).into_iter().skip(FIT_SKIP).collect()
}

// ---------------------------------------------------------------------------
// Rate fits
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `E ≈ A n^b`.
    Power,
    /// `E ≈ A n^b (log n)^θ`; `None` fits `θ` too.
    PowerLog(Option<f64>),
}

#[derive(Clone, Debug, Serialize)]
pub struct RateFit {
    pub exponent: f64,
    pub intercept: f64,
    pub theta: Option<f64>,
    pub model: FitModel,
    /// Euclidean norm of the log-scale residuals.
    pub residual_norm: f64,
    pub n_min: f64,
    pub n_max: f64,
    pub points: usize,
}

/// Least squares on `log E` against `log n` (and `log log n`).
pub fn fit_rate(points: &[(f64, f64)], model: FitModel) -> Result<RateFit> {
    if points.len() < 4 {
        return Err(Error::InsufficientData(format!("{} points, need at least 4", points.len())));
    }
    if points.iter().any(|&(n, e)| !(e > 0.0) || !(n > 1.0)) {
        return Err(Error::InsufficientData("values and n must be positive with n > 1".into()));
    }
    let needs_loglog = matches!(model, FitModel::PowerLog(_));
    if needs_loglog && points.iter().any(|&(n, _)| n <= std::f64::consts::E) {
        return Err(Error::InsufficientData("power-log fits need n > e".into()));
    }
    let ln_n: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let lln: Vec<f64> = ln_n.iter().map(|x| x.ln()).collect();
    let mut y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    if let FitModel::PowerLog(Some(theta)) = model {
        for (yi, l) in y.iter_mut().zip(&lln) {
            *yi -= theta * l;
        }
    }
    let cols: Vec<&[f64]> = match model {
        FitModel::PowerLog(None) => vec![&ln_n, &lln],
        _ => vec![&ln_n],
    };
    let (intercept, coef) = least_squares(&cols, &y)?;
    let resid: f64 = (0..y.len())
        .map(|i| {
            let fit = intercept + cols.iter().zip(&coef).map(|(c, b)| c[i] * b).sum::<f64>();
            (y[i] - fit).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    let theta = match model {
        FitModel::Power => None,
        FitModel::PowerLog(Some(t)) => Some(t),
        FitModel::PowerLog(None) => Some(coef[1]),
    };
    let exponent = coef[0];
    if !exponent.is_finite() {
        return Err(Error::InsufficientData("degenerate design".into()));
    }
    Ok(RateFit {
        exponent,
        intercept,
        theta,
        model,
        residual_norm: resid,
        n_min: points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
        n_max: points.iter().map(|p| p.0).fold(0.0, f64::max),
        points: points.len(),
    })
}

/// Ordinary least squares with intercept on centred columns, by Gaussian elimination.
fn least_squares(cols: &[&[f64]], y: &[f64]) -> Result<(f64, Vec<f64>)> {
    let k = cols.len();
    let n = y.len() as f64;
    let means: Vec<f64> = cols.iter().map(|c| c.iter().sum::<f64>() / n).collect();
    let ym = y.iter().sum::<f64>() / n;
    let mut a = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = (0..y.len()).map(|t| (cols[i][t] - means[i]) * (cols[j][t] - means[j])).sum();
        }
        a[i][k] = (0..y.len()).map(|t| (cols[i][t] - means[i]) * (y[t] - ym)).sum();
    }
    for c in 0..k {
        let piv = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, piv);
        if a[c][c].abs() < 1e-300 {
            return Err(Error::InsufficientData("singular design".into()));
        }
        for r in 0..k {
            if r != c {
                let f = a[r][c] / a[c][c];
                for j in c..=k {
                    a[r][j] -= f * a[c][j];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..k).map(|i| a[i][k] / a[i][i]).collect();
    let intercept = ym - coef.iter().zip(&means).map(|(b, m)| b * m).sum::<f64>();
    Ok((intercept, coef))
}

/// Summary of a run for the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub fits: Vec<(f64, RateFit)>,
    pub theory: Option<Vec<(f64, RateRegime)>>,
    pub violations: usize,
}

/// Fit every `p` in `rows` and attach the predicted regime, if asserted.
pub fn summarize(cfg: &ExperimentConfig, out: &ExperimentOutput, model: FitModel) -> Result<Summary> {
    let mut fits = Vec::new();
    for &p in &cfg.p {
        fits.push((p, fit_rate(&fit_series(&out.rows, p), model)?));
    }
    let theory = match cfg.regime {
        Some((b, g)) => Some(cfg.p.iter().map(|&p| theoretical_rate(b, g, p).map(|r| (p, r))).collect::<Result<_>>()?),
        None => None,
    };
    Ok(Summary { fits, theory, violations: out.violations.len() })
}

// ---------------------------------------------------------------------------
// Subsequence along convergents
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SubsequenceConfig {
    /// Asserted `γ` with `‖q_kα‖ <= C q_k^{-γ}`.
    pub gamma: Frac,
    pub c: Frac,
    /// `C_1` in the event `max_j |S_j| < C_1 n^{1/β}`.
    pub c1: f64,
    pub k_range: RangeInclusive<usize>,
    pub replicas: usize,
    pub seed: u64,
    /// Rows with `N(q_k)` above this are reported as infeasible.
    pub step_cap: u64,
    pub precision: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsequenceRow {
    pub k: usize,
    pub q: String,
    /// `log10 N(q)`, finite even when `N(q)` is astronomically large.
    pub log10_n: f64,
    pub n: Option<u64>,
    pub feasible: bool,
    pub mean_w1: Option<f64>,
    pub se_w1: Option<f64>,
    /// `mean_w1 · q`.
    pub ratio: Option<f64>,
    /// Frequency of `max_j |S_j| < C_1 n^{1/β}`.
    pub event_frequency: Option<f64>,
    /// The event is certain or impossible for this law, so it carries no information.
    pub event_degenerate: bool,
    /// Replicas whose walk stayed within `|S_j| <= K(q)`.
    pub certified_replicas: usize,
    /// Of those, replicas with `W_1 < 1/(36q)`.
    pub certificate_violations: usize,
    pub replicas: usize,
}

/// `q^a ‖qα‖^b <= C^b` exactly, for `γ = a/b`; uses the deepest bracket.
fn check_upper_claim(alpha: &IrrationalSpec, k: usize, gamma: &Frac, c: &Frac) -> Result<bool> {
    let q = &alpha.table.q[k];
    let last = alpha.table.last();
    if k + 1 >= last {
        return Err(Error::InsufficientData(format!("need convergents beyond k = {k}")));
    }
    let enc = alpha.norm_enclosure(q, last - 1);
    let a = gamma.num.to_u32().ok_or_else(|| Error::InvalidParameter("γ numerator too large".into()))?;
    let b = gamma.den.to_u32().ok_or_else(|| Error::InvalidParameter("γ denominator too large".into()))?;
    // hi = hn/hd, C = cn/cd:  q^a hn^b cd^b <= cn^b hd^b
    let lhs = num_traits::pow(q.clone(), a as usize) * num_traits::pow(enc.hi.num.abs(), b as usize) * num_traits::pow(c.den.abs(), b as usize);
    let rhs = num_traits::pow(c.num.abs(), b as usize) * num_traits::pow(enc.hi.den.abs(), b as usize);
    Ok(lhs <= rhs)
}

/// Estimate `E[W_1]` along `n = N(q_k) = ⌊q^{βγ} / (3 C C_1)^β⌋`.
pub fn subsequence_experiment(alpha: &AlphaSource, dist: &StepDistribution, cfg: &SubsequenceConfig) -> Result<Vec<SubsequenceRow>> {
    if cfg.replicas < 2 {
        return Err(Error::InvalidParameter("at least two replicas are required".into()));
    }
    if !(cfg.c1 > 0.0) {
        return Err(Error::InvalidParameter(format!("C_1 = {} must be positive", cfg.c1)));
    }
    let kmax = *cfg.k_range.end();
    let mut spec = IrrationalSpec::new(alpha, cfg.precision)?;
    if spec.table.last() < kmax + 3 {
        spec = spec.extend(kmax + 4)?;
    }
    let beta = dist.declared_beta();
    let gamma = cfg.gamma.to_f64();
    let cf = cfg.c.to_f64();
    let degenerate = !dist.non_constant();
    let stepper = Stepper::new(dist, &spec);
    let mut rows = Vec::new();
    for k in cfg.k_range.clone() {
        if !check_upper_claim(&spec, k, &cfg.gamma, &cfg.c)? {
            return Err(Error::HypothesisFailed(format!("‖q_{k} α‖ > C q_{k}^-γ")));
        }
        let qb = &spec.table.q[k];
        let ln_q = crate::diophantine::Frac::int(qb.clone()).ln_abs();
        let ln_n = beta * gamma * ln_q - beta * (3.0 * cf * cfg.c1).ln();
        let log10_n = ln_n / std::f64::consts::LN_10;
        let n = if ln_n < (cfg.step_cap as f64 + 1.0).ln() { Some(ln_n.exp().floor().max(0.0) as u64) } else { None };
        let mut row = SubsequenceRow {
            k,
            q: qb.to_string(),
            log10_n,
            n,
            feasible: matches!(n, Some(v) if v >= 1 && v <= cfg.step_cap),
            mean_w1: None,
            se_w1: None,
            ratio: None,
            event_frequency: None,
            event_degenerate: degenerate,
            certified_replicas: 0,
            certificate_violations: 0,
            replicas: cfg.replicas,
        };
        if row.feasible {
            let n = n.unwrap();
            let qf = qb.to_f64().unwrap();
            // K(q) = ⌊q^γ / (3C)⌋ computed exactly when γ is an integer.
            let k_of_q: Option<BigInt> = if cfg.gamma.is_integer() {
                let g = cfg.gamma.floor().to_usize().unwrap();
                let num = num_traits::pow(qb.clone(), g) * &cfg.c.den;
                let den = BigInt::from(3) * &cfg.c.num;
                Some(num / den)
            } else {
                None
            };
            let threshold = cfg.c1 * (n as f64).powf(1.0 / beta);
            let results: Vec<(f64, bool, bool)> = (0..cfg.replicas)
                .into_par_iter()
                .map(|r| -> Result<(f64, bool, bool)> {
                    let mut rng = stream_rng(cfg.seed, replica_stream(k as u32, r as u32));
                    let mut xs = Vec::with_capacity(n as usize);
                    let summary = stepper.run(n as usize, &mut rng, |_, _, x| xs.push(x.top64()))?;
                    let mu = EmpiricalMeasure::from_positions(xs);
                    let w1 = wasserstein_p_with(&Antiderivative::new(&mu), 1.0, SEARCH_TOL)?.value;
                    let event = (summary.max_abs_sum as f64) < threshold;
                    let within = k_of_q.as_ref().is_some_and(|kq| BigInt::from(summary.max_abs_sum) <= *kq);
                    Ok((w1, event, within))
                })
                .collect::<Result<_>>()?;
            let w: Vec<f64> = results.iter().map(|r| r.0).collect();
            let (m, se) = mean_se(&w);
            row.mean_w1 = Some(m);
            row.se_w1 = Some(se);
            row.ratio = Some(m * qf);
            let events = results.iter().filter(|r| r.1).count();
            row.event_frequency = Some(events as f64 / cfg.replicas as f64);
            row.event_degenerate |= events == 0 || events == cfg.replicas && degenerate;
            let bound = 1.0 / (36.0 * qf);
            row.certified_replicas = results.iter().filter(|r| r.2).count();
            row.certificate_violations = results.iter().filter(|r| r.2 && r.0 < bound - PATHWISE_SLACK).count();
        }
        rows.push(row);
    }
    Ok(rows)
}
