//! `W_p` between a discrete measure and Lebesgue measure on the circle.
//!
//! Everything rests on the antiderivative `F(x) = μ([0, x)) - x`, which is
//! left-continuous, piecewise linear with slope −1, and jumps by the atom
//! masses. On the circle
//!
//! `W_p(μ, Leb) = inf_y ‖F - y‖_p`,
//!
//! and pushing Lebesgue measure forward through `F` turns each linear
//! piece into a uniform interval `[C_i - x_{i+1}, C_i - x_i]`. Integrals of
//! `|F - y|^p` are therefore sums of closed-form antiderivatives.
//!
//! ```
//! use torwalk::walk::EmpiricalMeasure;
//! use torwalk::wasserstein::{wasserstein_p, wasserstein_2_fourier};
//!
//! let delta = EmpiricalMeasure::from_f64(&[0.0]);
//! assert!((wasserstein_p(&delta, 1.0, 1e-12).unwrap().value - 0.25).abs() < 1e-15);
//! let w2 = wasserstein_p(&delta, 2.0, 1e-12).unwrap().value;
//! assert!((w2 * w2 - 1.0 / 12.0).abs() < 1e-15);
//! let series = wasserstein_2_fourier(&delta, 1000);
//! assert!(series.contains(1.0 / 12.0, 1e-12));
//! ```

use crate::diophantine::IrrationalSpec;
use crate::error::{Error, Result};
use crate::series::{KahanSum, RealSeries};
use crate::walk::{empirical_fourier, phase, EmpiricalMeasure, ATOM_UNIT};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use std::f64::consts::PI;

// ---------------------------------------------------------------------------
// Antiderivative
// ---------------------------------------------------------------------------

/// `F(x) = μ([0, x)) - x` for a discrete `μ`.
#[derive(Clone, Debug)]
pub struct Antiderivative {
    atoms: Vec<u64>,
    /// `cum[i]` = total multiplicity of atoms `0..i`.
    cum: Vec<u64>,
    n: u64,
    /// Value ranges `(a, b)` of the linear pieces, with `b - a` the piece length.
    pieces: Vec<(f64, f64)>,
}

impl Antiderivative {
    pub fn new(mu: &EmpiricalMeasure) -> Self {
        let atoms = mu.atoms().to_vec();
        let mut cum = Vec::with_capacity(atoms.len() + 1);
        cum.push(0u64);
        for m in mu.multiplicities() {
            cum.push(cum.last().unwrap() + m);
        }
        let n = mu.n();
        let nf = n as f64;
        let mut pieces = Vec::with_capacity(atoms.len() + 1);
        // Piece before the first atom: (0, x_1], C = 0.
        let first = atoms[0] as f64 * ATOM_UNIT;
        if atoms[0] > 0 {
            pieces.push((-first, 0.0));
        }
        for i in 0..atoms.len() {
            let c = cum[i + 1] as f64 / nf;
            let x0 = atoms[i] as f64 * ATOM_UNIT;
            let x1 = atoms.get(i + 1).map_or(1.0, |&a| a as f64 * ATOM_UNIT);
            if x1 > x0 {
                pieces.push((c - x1, c - x0));
            }
        }
        Antiderivative { atoms, cum, n, pieces }
    }

    /// `F(x)` for `x` on the 64-bit grid, as an exact numerator over `n·2^64`.
    pub fn eval_scaled(&self, x: u64) -> i128 {
        let below = self.atoms.partition_point(|&a| a < x);
        ((self.cum[below] as i128) << 64) - self.n as i128 * x as i128
    }

    /// `F(x)` for `x ∈ [0, 1)`.
    pub fn eval(&self, x: f64) -> f64 {
        let xs = crate::walk::to_position(x);
        let below = self.atoms.partition_point(|&a| a < xs);
        self.cum[below] as f64 / self.n as f64 - x
    }

    /// Limit `F(1^-)`, which is 0 for a probability measure.
    pub fn end_value(&self) -> f64 {
        *self.cum.last().unwrap() as f64 / self.n as f64 - 1.0
    }

    /// Value ranges `(a, b)` of the linear pieces.
    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    /// `∫_0^1 F`, equal to `1/2 - ∫ x dμ`.
    pub fn integral(&self) -> f64 {
        self.pieces.iter().map(|&(a, b)| (b - a) * 0.5 * (a + b)).collect::<KahanSum>().value()
    }

    pub fn min(&self) -> f64 {
        self.pieces.iter().map(|p| p.0).fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.pieces.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `‖F - y‖_p^p`.
    pub fn lp_pow(&self, y: f64, p: f64) -> f64 {
        let g = |u: f64| u.signum() * u.abs().powf(p + 1.0) / (p + 1.0);
        self.pieces.iter().map(|&(a, b)| g(b - y) - g(a - y)).collect::<KahanSum>().value()
    }

    /// `‖F - y‖_p`.
    pub fn lp_norm(&self, y: f64, p: f64) -> f64 {
        self.lp_pow(y, p).max(0.0).powf(1.0 / p)
    }
}

// ---------------------------------------------------------------------------
// W_p
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    ConvexSearch,
    FourierSeries,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::ConvexSearch => "convex_search",
            Method::FourierSeries => "fourier_series",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WassersteinResult {
    pub p: f64,
    pub value: f64,
    /// A minimiser of `y ↦ ‖F - y‖_p`.
    pub y_star: f64,
    pub method: Method,
    pub error_bound: f64,
}

/// Maximum ternary-search iterations for general `p`.
pub const MAX_SEARCH_ITERATIONS: usize = 200;

/// `W_p(μ, Leb)` on the circle.
///
/// `p = 1` uses the median of `F` (midpoint of the median plateau), `p = 2`
/// the mean, both in closed form. Other `p` use ternary search on
/// `[min F, max F]`; since `y ↦ ‖F - y‖_p` is convex and 1-Lipschitz, the
/// search stops once the bracket is narrower than `2·tol`.
pub fn wasserstein_p(mu: &EmpiricalMeasure, p: f64, tol: f64) -> Result<WassersteinResult> {
    wasserstein_p_with(&Antiderivative::new(mu), p, tol)
}

/// [`wasserstein_p`] from a prebuilt antiderivative.
pub fn wasserstein_p_with(f: &Antiderivative, p: f64, tol: f64) -> Result<WassersteinResult> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidP(p));
    }
    if p == 1.0 {
        let y = median(f);
        return Ok(WassersteinResult { p, value: f.lp_pow(y, 1.0).max(0.0), y_star: y, method: Method::ClosedForm, error_bound: 0.0 });
    }
    if p == 2.0 {
        let m = f.integral();
        let var: f64 = f
            .pieces
            .iter()
            .map(|&(a, b)| ((b - m).powi(3) - (a - m).powi(3)) / 3.0)
            .collect::<KahanSum>()
            .value();
        return Ok(WassersteinResult { p, value: var.max(0.0).sqrt(), y_star: m, method: Method::ClosedForm, error_bound: 0.0 });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let (mut lo, mut hi) = (f.min(), f.max());
    let mut it = 0;
    while hi - lo > 2.0 * tol && it < MAX_SEARCH_ITERATIONS {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f.lp_pow(m1, p) <= f.lp_pow(m2, p) {
            hi = m2;
        } else {
            lo = m1;
        }
        it += 1;
    }
    let y = 0.5 * (lo + hi);
    Ok(WassersteinResult { p, value: f.lp_norm(y, p), y_star: y, method: Method::ConvexSearch, error_bound: 0.5 * (hi - lo) })
}

/// Midpoint of the set of medians of the push-forward of Lebesgue measure by `F`.
fn median(f: &Antiderivative) -> f64 {
    // Lower median: least y with mass below y >= 1/2.
    let lower = {
        let mut ev: Vec<(f64, f64)> = Vec::with_capacity(2 * f.pieces.len());
        for &(a, b) in &f.pieces {
            ev.push((a, 1.0));
            ev.push((b, -1.0));
        }
        ev.sort_by(|x, y| x.0.total_cmp(&y.0));
        sweep(&ev)
    };
    // Upper median: greatest y with mass above y >= 1/2, by reflection.
    let upper = {
        let mut ev: Vec<(f64, f64)> = Vec::with_capacity(2 * f.pieces.len());
        for &(a, b) in &f.pieces {
            ev.push((-b, 1.0));
            ev.push((-a, -1.0));
        }
        ev.sort_by(|x, y| x.0.total_cmp(&y.0));
        -sweep(&ev)
    };
    if upper >= lower {
        0.5 * (lower + upper)
    } else {
        lower
    }
}

/// First point where the piecewise-linear mass function reaches 1/2.
fn sweep(events: &[(f64, f64)]) -> f64 {
    let mut mass = 0.0;
    let mut slope = 0.0;
    let mut at = events[0].0;
    for &(v, ds) in events {
        let next = mass + slope * (v - at);
        if next >= 0.5 && slope > 0.0 {
            return at + (0.5 - mass) / slope;
        }
        mass = next;
        at = v;
        slope += ds;
    }
    at
}

/// `W_2^2 = Σ_{m≠0} |μ̂(m)|² / (4π² m²)` truncated at `|m| <= M`, with tail
/// bound `1/(2π² M)` from `|μ̂| <= 1`.
pub fn wasserstein_2_fourier(mu: &EmpiricalMeasure, m_max: u64) -> RealSeries {
    assert!(m_max >= 1);
    let n = mu.n() as f64;
    let k = mu.atoms().len();
    let w: Vec<f64> = mu.multiplicities().iter().map(|&c| c as f64 / n).collect();
    let rot: Vec<Complex64> = mu.atoms().iter().map(|&a| phase(a, 1)).collect();
    let (rr, ri): (Vec<f64>, Vec<f64>) = rot.iter().map(|z| (z.re, z.im)).unzip();
    let mut zr = rr.clone();
    let mut zi = ri.clone();
    let mut total = KahanSum::new();
    const RESYNC: u64 = 256;
    for m in 1..=m_max {
        if m % RESYNC == 0 {
            for i in 0..k {
                let z = phase(mu.atoms()[i], m as i64);
                zr[i] = z.re;
                zi[i] = z.im;
            }
        }
        let mut sr = 0.0;
        let mut si = 0.0;
        for i in 0..k {
            sr += w[i] * zr[i];
            si += w[i] * zi[i];
        }
        for i in 0..k {
            let (a, b) = (zr[i], zi[i]);
            zr[i] = a * rr[i] - b * ri[i];
            zi[i] = a * ri[i] + b * rr[i];
        }
        total.add((sr * sr + si * si) / (m as f64 * m as f64));
    }
    RealSeries::new(total.value() / (2.0 * PI * PI), m_max, 1.0 / (2.0 * PI * PI * m_max as f64))
}

// ---------------------------------------------------------------------------
// Heat kernel
// ---------------------------------------------------------------------------

/// Below this time the image sum converges faster than the Fourier sum.
pub const HEAT_CROSSOVER: f64 = 1.0 / (4.0 * PI);

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

/// `p_t(x, y) = (4πt)^{-1/2} Σ_m exp(-(x - y - m)²/(4t))`.
pub fn heat_kernel_theta(t: f64, x: f64, y: f64, tol: f64) -> Result<RealSeries> {
    check_time(t)?;
    let d = x - y - (x - y).round();
    let c = (4.0 * PI * t).powf(-0.5);
    let mut sum = KahanSum::new();
    sum.add(c * (-d * d / (4.0 * t)).exp());
    let mut m = 0u64;
    loop {
        m += 1;
        let mf = m as f64;
        sum.add(c * (-(d - mf).powi(2) / (4.0 * t)).exp());
        sum.add(c * (-(d + mf).powi(2) / (4.0 * t)).exp());
        // Images beyond m sit at distance >= m + 1/2.
        let u = mf + 0.5;
        let tail = 2.0 * c * (-u * u / (4.0 * t)).exp() / (1.0 - (-u / (2.0 * t)).exp());
        if tail <= tol {
            return Ok(RealSeries::new(sum.value(), m, tail));
        }
    }
}

/// `p_t(x, y) = 1 + 2 Σ_{m>=1} e^{-4π²m²t} cos(2πm(x - y))`.
pub fn heat_kernel_fourier(t: f64, x: f64, y: f64, tol: f64) -> Result<RealSeries> {
    check_time(t)?;
    let d = x - y;
    let c = 4.0 * PI * PI * t;
    let mut sum = KahanSum::new();
    sum.add(1.0);
    let mut m = 0u64;
    loop {
        m += 1;
        let mf = m as f64;
        sum.add(2.0 * (-c * mf * mf).exp() * (2.0 * PI * mf * d).cos());
        let u = mf + 1.0;
        let tail = 2.0 * (-c * u * u).exp() / (1.0 - (-2.0 * c * u).exp());
        if tail <= tol {
            return Ok(RealSeries::new(sum.value(), m, tail));
        }
    }
}

/// Heat kernel on the circle, by images for `t < 1/(4π)` and by Fourier modes otherwise.
pub fn heat_kernel(t: f64, x: f64, y: f64, tol: f64) -> Result<RealSeries> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    if t < HEAT_CROSSOVER {
        heat_kernel_theta(t, x, y, tol)
    } else {
        heat_kernel_fourier(t, x, y, tol)
    }
}

// ---------------------------------------------------------------------------
// Fourier upper bounds
// ---------------------------------------------------------------------------

/// The bracketed expressions of the heat-smoothing and `L^p` Erdős–Turán
/// upper bounds on `W_p`, each up to an unspecified multiplicative constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SmoothingBound {
    /// `c·[√p ε^{1/2} + (Σ_{m≠0} e^{-m²ε} |m|^{-p'} |ν̂(m)|^{p'})^{1-1/p}]`, `p' = p/(p-1)`.
    pub value: f64,
    /// `c·[1/(N+1) + (Σ_{0<|m|<=N} |ν̂(m)|^{p'} / |m|^{p'})^{1-1/p}]` with `N = ⌊ε^{-1/2}⌋`.
    pub erdos_turan: f64,
    pub cutoff: u64,
    /// The multiplier applied to both brackets.
    pub constant: f64,
}

/// Evaluate the smoothing bound from `|ν̂(m)|`, `m = 1..=M` (conjugate
/// symmetry supplies negative `m`).
pub fn smoothing_bound(coeffs: &[f64], eps: f64, p: f64, constant: f64) -> Result<SmoothingBound> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} outside (0, 1)")));
    }
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::InvalidP(p));
    }
    let m_max = coeffs.len() as f64;
    if (-m_max * m_max * eps).exp() > 1e-12 {
        return Err(Error::TruncationTooShort(format!(
            "exp(-M² ε) = {:e} > 1e-12 with M = {m_max}",
            (-m_max * m_max * eps).exp()
        )));
    }
    let q = p / (p - 1.0);
    let mut s = KahanSum::new();
    for (i, &c) in coeffs.iter().enumerate() {
        let m = (i + 1) as f64;
        s.add(2.0 * (-m * m * eps).exp() * m.powf(-q) * c.powf(q));
    }
    let value = constant * (p.sqrt() * eps.sqrt() + s.value().powf(1.0 - 1.0 / p));
    let cutoff = (1.0 / eps.sqrt()).floor() as u64;
    let mut et = KahanSum::new();
    for (i, &c) in coeffs.iter().take(cutoff as usize).enumerate() {
        let m = (i + 1) as f64;
        et.add(2.0 * c.powf(q) * m.powf(-q));
    }
    let erdos_turan = constant * (1.0 / (cutoff as f64 + 1.0) + et.value().powf(1.0 - 1.0 / p));
    Ok(SmoothingBound { value, erdos_turan, cutoff, constant })
}

/// `|μ̂(m)|` for `m = 1..=M`.
pub fn fourier_moduli(mu: &EmpiricalMeasure, m_max: u64) -> Vec<f64> {
    (1..=m_max as i64).map(|m| empirical_fourier(mu, m).norm()).collect()
}

// ---------------------------------------------------------------------------
// Lower-bound certificates
// ---------------------------------------------------------------------------

/// `|Σ_j e^{2πi S_j α}| / (4πn) = |μ̂(1)| / (4π)`, a lower bound on `W_1`
/// from the 1-Lipschitz test functions `cos(2πx)/(2π)` and `sin(2πx)/(2π)`.
pub fn kantorovich_exp_lower(mu: &EmpiricalMeasure) -> f64 {
    empirical_fourier(mu, 1).norm() / (4.0 * PI)
}

/// A closed arc `[lo, lo + len]` of the circle in units of `2^{-64}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub lo: u64,
    pub len: u64,
}

impl Arc {
    pub fn contains(&self, x: u64) -> bool {
        x.wrapping_sub(self.lo) <= self.len
    }

    pub fn length(&self) -> f64 {
        self.len as f64 * ATOM_UNIT
    }
}

/// `Σ L_i² / 4` for disjoint closed arcs carrying no mass of `μ`, a lower
/// bound on `W_1(μ, Leb)` from the sum of tent functions over the arcs.
pub fn tent_lower_bound(arcs: &[Arc], mu: &EmpiricalMeasure) -> Result<f64> {
    let mut sorted = arcs.to_vec();
    sorted.sort_by_key(|a| a.lo);
    for w in sorted.windows(2) {
        if w[0].lo.checked_add(w[0].len).is_none_or(|end| end >= w[1].lo) {
            return Err(Error::InvalidParameter("arcs overlap".into()));
        }
    }
    if sorted.len() > 1 {
        let (first, last) = (sorted[0], sorted[sorted.len() - 1]);
        if let Some(end) = last.lo.checked_add(last.len) {
            let _ = end;
        } else if last.lo.wrapping_add(last.len) >= first.lo {
            return Err(Error::InvalidParameter("arcs overlap".into()));
        }
    }
    for (i, &a) in mu.atoms().iter().enumerate() {
        if sorted.iter().any(|arc| arc.contains(a)) {
            return Err(Error::SupportViolation(mu.atom_f64(i)));
        }
    }
    Ok(sorted.iter().map(|a| a.length().powi(2) / 4.0).sum())
}

/// A certified `W_1 >= 1/(36q)` for measures on `{jα : |j| <= K}`.
#[derive(Clone, Debug, Serialize)]
pub struct CoveringCertificate {
    pub q: String,
    /// `K(q) = ⌊q^γ / (3C)⌋`.
    pub k_max: u64,
    /// The `K` actually verified.
    pub k: u64,
    /// `1/(36q)`.
    pub value: f64,
    /// `Σ L²/4` over the 64-bit inner approximations of the arcs.
    pub tent_value: f64,
    pub arcs: Vec<Arc>,
}

/// The `q` closed arcs `{x : frac(qx) ∈ [1/3, 2/3]}`, shrunk to the 64-bit grid.
pub fn forbidden_arcs(q: u64) -> Vec<Arc> {
    let one = 1u128 << 64;
    (0..q as u128)
        .map(|k| {
            let lo = ((3 * k + 1) * one).div_ceil(3 * q as u128);
            let hi = ((3 * k + 2) * one) / (3 * q as u128);
            Arc { lo: lo as u64, len: (hi - lo) as u64 }
        })
        .collect()
}

/// Verify `‖qα‖ <= C q^{-γ}` and that `{jα}`, `|j| <= k`, avoid the arcs
/// `frac(qx) ∈ [1/3, 2/3]`; `k` defaults to `K(q) = ⌊q^γ/(3C)⌋`.
pub fn covering_lower_bound(alpha: &IrrationalSpec, q: u64, gamma: f64, c: f64, k: Option<u64>) -> Result<CoveringCertificate> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be positive".into()));
    }
    let qb = BigInt::from(q);
    let depth = alpha.table.last().saturating_sub(2);
    let enc = alpha.norm_enclosure(&qb, depth);
    let bound = c * (q as f64).powf(-gamma);
    if !(enc.hi.to_f64() <= bound) {
        return Err(Error::HypothesisFailed(format!("‖{q}α‖ ≈ {:e} exceeds C q^-γ = {bound:e}", enc.value())));
    }
    let k_max = ((q as f64).powf(gamma) / (3.0 * c)).floor() as u64;
    let k = k.unwrap_or(k_max);
    if k > k_max {
        return Err(Error::HypothesisFailed(format!("K = {k} exceeds K(q) = {k_max}")));
    }
    let bits = alpha.precision as usize;
    let modulus = BigUint::one() << bits;
    let third = &modulus / 3u32;
    let x = alpha.value.to_biguint();
    let qu = BigUint::from(q);
    let mut positions = Vec::with_capacity(2 * k as usize + 1);
    for j in -(k as i64)..=(k as i64) {
        let xj = if j >= 0 {
            (&x * BigUint::from(j as u64)) % &modulus
        } else {
            (&modulus - (&x * BigUint::from((-j) as u64)) % &modulus) % &modulus
        };
        let y = (&xj * &qu) % &modulus;
        // frac(q·jα̃) is within q|j|·2^{-P} of frac(q·jα); demand that much clearance.
        let margin = BigUint::from(q) * BigUint::from(j.unsigned_abs()) + 1u32;
        let outside = y.clone() + &margin < third || y > (&modulus - &third) + &margin;
        if !outside {
            return Err(Error::HypothesisFailed(format!("j = {j}: {{q j α}} within the forbidden band")));
        }
        positions.push((&xj >> (bits - 64)).to_u64().unwrap());
    }
    let arcs = forbidden_arcs(q);
    let mu = EmpiricalMeasure::from_positions(positions);
    let tent_value = tent_lower_bound(&arcs, &mu).map_err(|e| Error::HypothesisFailed(e.to_string()))?;
    Ok(CoveringCertificate { q: q.to_string(), k_max, k, value: 1.0 / (36.0 * q as f64), tent_value, arcs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antiderivative_of_point_mass() {
        let f = Antiderivative::new(&EmpiricalMeasure::from_f64(&[0.0]));
        assert_eq!(f.eval(0.0), 0.0);
        assert!((f.eval(0.25) - 0.75).abs() < 1e-15);
        assert!((f.integral() - 0.5).abs() < 1e-15);
        assert_eq!(f.end_value(), 0.0);
    }

    #[test]
    fn antiderivative_sawtooth() {
        let f = Antiderivative::new(&EmpiricalMeasure::from_f64(&[0.0, 0.5]));
        assert!((f.eval(0.5) - 0.0).abs() < 1e-15);
        assert!((f.eval(0.5000001) - 0.4999999).abs() < 1e-12);
        assert_eq!(f.eval_scaled(1 << 63), ((1i128) << 64) - 2 * (1i128 << 63));
    }

    #[test]
    fn grid_measure_w1() {
        for n in 1..=8u64 {
            let mu = EmpiricalMeasure::from_f64(&(0..n).map(|k| k as f64 / n as f64).collect::<Vec<_>>());
            let w = wasserstein_p(&mu, 1.0, 1e-12).unwrap();
            assert!((w.value - 0.25 / n as f64).abs() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn invalid_p() {
        let mu = EmpiricalMeasure::from_f64(&[0.1]);
        assert!(matches!(wasserstein_p(&mu, 0.5, 1e-9), Err(Error::InvalidP(_))));
    }

    #[test]
    fn heat_kernel_guards() {
        assert!(matches!(heat_kernel(0.0, 0.1, 0.2, 1e-12), Err(Error::InvalidTime(_))));
        let a = heat_kernel_theta(HEAT_CROSSOVER, 0.3, 0.0, 1e-13).unwrap();
        let b = heat_kernel_fourier(HEAT_CROSSOVER, 0.3, 0.0, 1e-13).unwrap();
        assert!((a.value - b.value).abs() <= 2e-13 + 1e-15);
    }

    #[test]
    fn tent_examples() {
        let delta = EmpiricalMeasure::from_f64(&[0.0]);
        let half = Arc { lo: 1 << 62, len: 1 << 63 };
        assert!((tent_lower_bound(&[half], &delta).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(tent_lower_bound(&[], &delta).unwrap(), 0.0);
        let bad = Arc { lo: u64::MAX - 5, len: 10 };
        assert!(matches!(tent_lower_bound(&[bad], &delta), Err(Error::SupportViolation(_))));
    }
}
