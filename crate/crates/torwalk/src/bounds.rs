//! Closed forms and series from the rate analysis.
//!
//! All angles are reduced through the exact fixed-point value of `α`:
//! `φ(2πmα)` is evaluated at `2π·s(mα)` where `s(y) ∈ (-1/2, 1/2]` is the
//! signed fractional part, so large `m` loses nothing to `f64` rounding.

use crate::diophantine::IrrationalSpec;
use crate::error::{Error, Result};
use crate::rng::{replica_stream, stream_rng};
use crate::series::{KahanSum, RealSeries};
use crate::special::zeta;
use crate::stepdist::{StepDistribution, CHAR_FN_TOL};
use crate::walk::{phase, Stepper};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Below this `|1 - φ|` a frequency is treated as resonant.
pub const DEGENERATE_THRESHOLD: f64 = 1e-14;

/// Signed fractional part of `mα` in `(-1/2, 1/2]`.
pub fn signed_frac(alpha: &IrrationalSpec, m: i128) -> f64 {
    let x = alpha.frac_mul(m).to_f64();
    if x > 0.5 {
        x - 1.0
    } else {
        x
    }
}

/// `(φ, 1 - φ)` at `2πmα`, the second computed without cancellation.
pub fn phi_at(dist: &StepDistribution, alpha: &IrrationalSpec, m: i128) -> Result<(Complex64, Complex64)> {
    let x = 2.0 * PI * signed_frac(alpha, m);
    let w = dist.one_minus_char_fn(x, CHAR_FN_TOL)?.value;
    Ok((Complex64::new(1.0, 0.0) - w, w))
}

/// `(1 - |φ|²) / |1 - φ|²` from `w = 1 - φ`.
fn spectral_ratio(w: Complex64) -> f64 {
    (2.0 * w.re - w.norm_sqr()) / w.norm_sqr()
}

fn complex_pow(z: Complex64, mut e: u64) -> Complex64 {
    let mut base = z;
    let mut acc = Complex64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// `E|μ̂_n(m)|² = (1-|φ|²)/|1-φ|² · 1/n + Re[(φ^{n+1} - φ)/(1-φ)²] · 2/n²` at `φ = φ(2πmα)`.
pub fn second_moment_closed_form(dist: &StepDistribution, alpha: &IrrationalSpec, m: i64, n: u64) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("need m != 0 and n >= 1, got m = {m}, n = {n}")));
    }
    let (phi, w) = phi_at(dist, alpha, m as i128)?;
    if w.norm() < DEGENERATE_THRESHOLD {
        return Err(Error::DegenerateFrequency(w.norm()));
    }
    let nf = n as f64;
    let first = spectral_ratio(w) / nf;
    let second = ((complex_pow(phi, n + 1) - phi) / (w * w)).re * 2.0 / (nf * nf);
    Ok(first + second)
}

/// `lim_n n E|μ̂_n(m)|² = (1 - |φ|²)/|1 - φ|²`.
pub fn second_moment_limit(dist: &StepDistribution, alpha: &IrrationalSpec, m: i64) -> Result<f64> {
    let (_, w) = phi_at(dist, alpha, m as i128)?;
    if w.norm() < DEGENERATE_THRESHOLD {
        return Err(Error::DegenerateFrequency(w.norm()));
    }
    Ok(spectral_ratio(w))
}

// ---------------------------------------------------------------------------
// Limit constant
// ---------------------------------------------------------------------------

/// Grid size for the empirical Hölder constant used in tail bounds.
pub const HOLDER_GRID: usize = 4096;

/// Largest `c` with `|1 - φ(2πy)| >= c‖y‖^β` on a grid of `(0, 1/2]`, halved.
pub fn holder_lower_constant(dist: &StepDistribution, beta: f64) -> Result<f64> {
    let mut c = f64::INFINITY;
    for i in 1..=HOLDER_GRID {
        let y = 0.5 * i as f64 / HOLDER_GRID as f64;
        let v = dist.one_minus_char_fn(2.0 * PI * y, CHAR_FN_TOL)?;
        c = c.min((v.value.norm() - v.tail_bound) / y.powf(beta));
    }
    Ok(0.5 * c)
}

/// `Σ_{j=1}^{n} j^{-τ}` bounded above in closed form.
fn harmonic_upper(n: f64, tau: f64) -> f64 {
    if n < 1.0 {
        return 0.0;
    }
    if (tau - 1.0).abs() < 1e-15 {
        1.0 + n.ln()
    } else if tau < 1.0 {
        1.0 + (n.powf(1.0 - tau) - 1.0) / (1.0 - tau)
    } else {
        zeta(tau)
    }
}

/// Explicit bound on `Σ_{q_k <= m < q_{k+1}} m^{-θ}‖mα‖^{-τ}` for `k >= 3`:
/// `(ζ(θ+τ) + ζ(θ)) / (q^θ ‖qα‖^τ) + 2^{τ+1} ζ(θ) q^{τ-θ} H_τ(⌊q/2⌋)`.
pub fn block_bound(q: f64, norm_q: f64, theta: f64, tau: f64) -> f64 {
    (zeta(theta + tau) + zeta(theta)) / (q.powf(theta) * norm_q.powf(tau))
        + 2f64.powf(tau + 1.0) * zeta(theta) * q.powf(tau - theta) * harmonic_upper((q / 2.0).floor(), tau)
}

/// `(1/4π²) Σ_{m≠0} (1 - |φ(2πmα)|²) / (m² |1 - φ(2πmα)|²)`, truncated at
/// `|m| <= M`.
///
/// The tail uses `|summand| <= 2 / (c m² ‖mα‖^β)` with `c` from
/// [`holder_lower_constant`], block bounds over convergent blocks from the
/// table, and `‖qα‖ >= C q^{-γ}` with `q_{k+2} >= 2 q_k` beyond it.
pub fn limit_constant(dist: &StepDistribution, alpha: &IrrationalSpec, m_max: u64, gamma: f64, c_dioph: f64) -> Result<RealSeries> {
    let beta = dist.declared_beta();
    if beta * gamma >= 2.0 {
        return Err(Error::TailUnbounded(beta * gamma));
    }
    if m_max == 0 {
        return Err(Error::InvalidParameter("M must be positive".into()));
    }
    let mut sum = KahanSum::new();
    for m in 1..=m_max as i64 {
        let (_, w) = phi_at(dist, alpha, m as i128)?;
        if w.norm() < DEGENERATE_THRESHOLD {
            return Err(Error::DegenerateFrequency(w.norm()));
        }
        sum.add(spectral_ratio(w) / (m as f64 * m as f64));
    }
    let value = 2.0 * sum.value() / (4.0 * PI * PI);
    let tail = if dist.gcd_support()? != 1 {
        f64::INFINITY
    } else {
        let c = holder_lower_constant(dist, beta)?;
        let blocks = block_tail(alpha, m_max, 2.0, beta, gamma, c_dioph)?;
        2.0 * 2.0 / c * blocks / (4.0 * PI * PI)
    };
    Ok(RealSeries::new(value, m_max, tail))
}

/// Upper bound on `Σ_{m>M} m^{-θ}‖mα‖^{-τ}` by whole convergent blocks.
fn block_tail(alpha: &IrrationalSpec, m_max: u64, theta: f64, tau: f64, gamma: f64, c_dioph: f64) -> Result<f64> {
    let t = &alpha.table;
    let q: Vec<f64> = t.q.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect();
    let last = t.last();
    let start = (3..last).find(|&k| q[k] <= m_max as f64 && (m_max as f64) < q[k + 1]);
    let Some(start) = start else {
        return Err(Error::InsufficientData(format!("M = {m_max} is not inside a convergent block with k >= 3")));
    };
    let mut total = KahanSum::new();
    for k in start..last {
        let norm = alpha.norm_enclosure(&t.q[k], last - 1);
        let lo = norm.lo.to_f64().max(0.0);
        let nq = if lo > 0.0 { lo } else { c_dioph * q[k].powf(-gamma) };
        total.add(block_bound(q[k], nq, theta, tau));
    }
    // Blocks k >= last: q_{last+2i} and q_{last+2i+1} are both >= 2^i q_last,
    // and the asserted ‖qα‖ >= C q^{-γ} gives a bound decreasing in q.
    let f = |qq: f64| {
        (zeta(theta + tau) + zeta(theta)) * qq.powf(tau * gamma - theta) / c_dioph.powf(tau)
            + 2f64.powf(tau + 1.0) * zeta(theta) * qq.powf(tau - theta) * harmonic_upper((qq / 2.0).floor(), tau)
    };
    let mut qq = q[last];
    while qq.is_finite() {
        let term = 2.0 * f(qq);
        total.add(term);
        if term < 1e-30 * total.value() {
            break;
        }
        qq *= 2.0;
    }
    Ok(total.value())
}

// ---------------------------------------------------------------------------
// Block sums
// ---------------------------------------------------------------------------

/// Largest block `q_{k+1}` the enumeration accepts.
pub const MAX_BLOCK: u64 = 10_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct BlockSum {
    pub k: usize,
    pub q_k: u64,
    pub q_next: u64,
    /// Enumerated `Σ_{q_k <= m < q_{k+1}} m^{-θ}‖mα‖^{-τ}`.
    pub exact: f64,
    /// `1/(q_k^θ ‖q_kα‖^τ)`.
    pub main_term: f64,
    /// `q^{1-θ}`, `q^{1-θ} log q` or `q^{τ-θ}` for `τ <, =, > 1`.
    pub tau_term: f64,
    /// `exact / (main_term + tau_term)`.
    pub ratio: f64,
    /// Constant-explicit bound from the proof; `exact <= explicit`.
    pub explicit: f64,
}

/// Enumerate one convergent block and compare it with the bound shape.
pub fn lemma22_block_sum(alpha: &IrrationalSpec, theta: f64, tau: f64, k: usize) -> Result<BlockSum> {
    if !(theta > 1.0) {
        return Err(Error::InvalidParameter(format!("θ = {theta} must exceed 1")));
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter(format!("τ = {tau} must be positive")));
    }
    if k < 3 {
        return Err(Error::InvalidParameter(format!("k = {k} must be at least 3")));
    }
    let extended;
    let alpha = if alpha.table.last() < k + 2 {
        extended = alpha.extend(k + 4)?;
        &extended
    } else {
        alpha
    };
    let big = BigInt::from(MAX_BLOCK);
    if alpha.table.q[k + 1] > big {
        return Err(Error::BlockTooLarge(format!("q_{} = {}", k + 1, alpha.table.q[k + 1])));
    }
    let qk = alpha.table.q[k].to_u64().unwrap();
    let qn = alpha.table.q[k + 1].to_u64().unwrap();
    let mut s = KahanSum::new();
    for m in qk..qn {
        s.add((m as f64).powf(-theta) * alpha.norm_mul(m as i128).powf(-tau));
    }
    let q = qk as f64;
    let nq = alpha.norm_mul(qk as i128);
    let main_term = 1.0 / (q.powf(theta) * nq.powf(tau));
    let tau_term = if (tau - 1.0).abs() < 1e-15 {
        q.powf(1.0 - theta) * q.ln()
    } else if tau < 1.0 {
        q.powf(1.0 - theta)
    } else {
        q.powf(tau - theta)
    };
    let exact = s.value();
    Ok(BlockSum {
        k,
        q_k: qk,
        q_next: qn,
        exact,
        main_term,
        tau_term,
        ratio: exact / (main_term + tau_term),
        explicit: block_bound(q, nq, theta, tau),
    })
}

// ---------------------------------------------------------------------------
// g_η
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GRegime {
    /// `η < 0`: bounded.
    Bounded,
    /// `η = 0`: `log(1/ε + 1)`.
    Logarithmic,
    /// `η > 0`: `ε^{-η/2}`.
    Power,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GEta {
    pub value: f64,
    pub terms: u64,
    pub tail_bound: f64,
    pub regime: GRegime,
    /// `1`, `log(1/ε + 1)` or `ε^{-η/2}`.
    pub scale: f64,
}

/// `g_η(ε) = Σ_{l>=1} e^{-4^l ε} 2^{ηl}`.
pub fn g_eta(eta: f64, eps: f64, tol: f64) -> Result<GEta> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("ε = {eps} outside (0, 1]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let term = |l: u64| (-(4f64.powi(l as i32)) * eps + eta * l as f64 * std::f64::consts::LN_2).exp();
    let mut sum = KahanSum::new();
    let mut l = 0u64;
    let tail = loop {
        l += 1;
        let t = term(l);
        sum.add(t);
        let next = term(l + 1);
        // Once the ratio of consecutive terms is below 1/2 it keeps falling, so the tail is at most 2·next.
        if next <= 0.5 * t && 2.0 * next <= tol {
            break 2.0 * next;
        }
    };
    let (regime, scale) = if eta < 0.0 {
        (GRegime::Bounded, 1.0)
    } else if eta == 0.0 {
        (GRegime::Logarithmic, (1.0 / eps + 1.0).ln())
    } else {
        (GRegime::Power, eps.powf(-eta / 2.0))
    };
    Ok(GEta { value: sum.value(), terms: l, tail_bound: tail, regime, scale })
}

// ---------------------------------------------------------------------------
// Exponential-sum moments
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub p: u32,
    pub n: u64,
    pub replicas: usize,
    /// Monte Carlo mean of `|Σ_j e^{2πi S_j α}|^{2p}`.
    pub moment: f64,
    pub standard_error: f64,
    /// `σ^{2p} p!² C(n, p)`, `σ² = (1 - |φ|²)/|1 - φ|²` at `φ = φ(2πα)`.
    pub predicted: f64,
    pub ratio: f64,
    /// `(moment - predicted) / standard_error`.
    pub z_score: f64,
}

fn binomial(n: u64, k: u32) -> f64 {
    (0..k as u64).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

/// Monte Carlo `E|Σ_{j<=n} e^{2πi S_j α}|^{2p}` against `σ^{2p} p!² C(n, p)`.
pub fn exp_sum_moment_check(dist: &StepDistribution, alpha: &IrrationalSpec, p: u32, n: u64, replicas: usize, seed: u64) -> Result<MomentReport> {
    if p == 0 || n == 0 || replicas < 2 {
        return Err(Error::InvalidParameter("need p >= 1, n >= 1, R >= 2".into()));
    }
    let (phi, w) = phi_at(dist, alpha, 1)?;
    if phi.norm() >= 1.0 - DEGENERATE_THRESHOLD {
        return Err(Error::ResonantAlpha);
    }
    let sigma2 = spectral_ratio(w);
    let fact: f64 = (1..=p).map(f64::from).product();
    let predicted = sigma2.powi(p as i32) * fact * fact * binomial(n, p);
    let stepper = Stepper::new(dist, alpha);
    let samples: Vec<f64> = (0..replicas)
        .into_par_iter()
        .map(|r| -> Result<f64> {
            let mut rng = stream_rng(seed, replica_stream(0, r as u32));
            let mut acc = Complex64::new(0.0, 0.0);
            stepper.run(n as usize, &mut rng, |_, _, x| acc += phase(x.top64(), -1))?;
            Ok(acc.norm_sqr().powi(p as i32))
        })
        .collect::<Result<_>>()?;
    let (mean, se) = mean_se(&samples);
    Ok(MomentReport {
        p,
        n,
        replicas,
        moment: mean,
        standard_error: se,
        predicted,
        ratio: mean / predicted,
        z_score: if se > 0.0 { (mean - predicted) / se } else { 0.0 },
    })
}

/// Sample mean and `stdev/√R`.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().copied().collect::<KahanSum>().value() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).collect::<KahanSum>().value() / (n - 1.0);
    (mean, (var / n).sqrt())
}

// ---------------------------------------------------------------------------
// Rates
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateRegime {
    pub regime: Regime,
    /// Exponent of `n`.
    pub exponent: f64,
    /// Exponent of `log n`.
    pub log_power: f64,
}

/// Upper-bound rate for `E[W_p]` as a function of `β`, `γ` and `p`.
pub fn theoretical_rate(beta: f64, gamma: f64, p: f64) -> Result<RateRegime> {
    if !(beta > 0.0 && beta <= 2.0) || !(gamma >= 1.0) || !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("β = {beta}, γ = {gamma}, p = {p}")));
    }
    let bg = beta * gamma;
    Ok(if (bg - 2.0).abs() < 1e-12 {
        RateRegime { regime: Regime::Critical, exponent: -0.5, log_power: 1.0 - 1.0 / p.max(2.0) }
    } else if bg < 2.0 {
        RateRegime { regime: Regime::Subcritical, exponent: -0.5, log_power: 0.0 }
    } else {
        RateRegime { regime: Regime::Supercritical, exponent: -1.0 / bg, log_power: 0.0 }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::AlphaSource;

    fn golden() -> IrrationalSpec {
        IrrationalSpec::new(&AlphaSource::golden(), 256).unwrap()
    }

    #[test]
    fn single_step_moment_is_one() {
        let a = golden();
        for d in [StepDistribution::rademacher(), StepDistribution::paper_example()] {
            for m in [1, -2, 5] {
                assert!((second_moment_closed_form(&d, &a, m, 1).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn resonance_is_reported() {
        let a = golden();
        let d = StepDistribution::constant(0);
        assert!(matches!(second_moment_closed_form(&d, &a, 1, 4), Err(Error::DegenerateFrequency(_))));
    }

    #[test]
    fn rademacher_limit_constant_is_unbounded() {
        let a = golden();
        assert!(matches!(limit_constant(&StepDistribution::rademacher(), &a, 100, 1.0, 0.4), Err(Error::TailUnbounded(_))));
    }

    #[test]
    fn g_eta_at_one() {
        let g = g_eta(0.0, 1.0, 1e-16).unwrap();
        let want = (-4f64).exp() + (-16f64).exp() + (-64f64).exp();
        assert!((g.value - want).abs() < 1e-15);
        assert_eq!(g.regime, GRegime::Logarithmic);
    }

    #[test]
    fn rate_table() {
        let r = theoretical_rate(2.0, 1.0, 2.0).unwrap();
        assert_eq!(r.regime, Regime::Critical);
        assert_eq!(r.log_power, 0.5);
        assert_eq!(theoretical_rate(1.0, 1.0, 1.0).unwrap().regime, Regime::Subcritical);
        let s = theoretical_rate(1.0, 5.0, 1.0).unwrap();
        assert!((s.exponent + 0.2).abs() < 1e-15);
    }

    #[test]
    fn block_guard() {
        assert!(lemma22_block_sum(&golden(), 1.0, 1.0, 4).is_err());
    }
}
