//! The walk `{S_j α}` on the circle and its empirical measure.
//!
//! Positions are exact fixed-point fractions: `frac(S_j α̃)` is accumulated
//! modulo 1 from `frac(X_j α̃)`, where `α̃` is the `P`-bit value of `α`.
//! The only error against the true orbit is `|S_j|·|α̃ - α| <= |S_j|·2^{-P}`.
//! Empirical measures keep the leading 64 bits of each position.
//!
//! ```
//! use torwalk::diophantine::{AlphaSource, IrrationalSpec};
//! use torwalk::stepdist::StepDistribution;
//! use torwalk::walk::{simulate, EmpiricalMeasure};
//!
//! let alpha = IrrationalSpec::new(&AlphaSource::golden(), 256).unwrap();
//! let path = simulate(&StepDistribution::constant(1), &alpha, 5, 0).unwrap();
//! let mu = EmpiricalMeasure::from_path(&path);
//! assert_eq!(mu.atoms().len(), 5);
//! ```

use crate::diophantine::IrrationalSpec;
use crate::error::{Error, Result};
use crate::fixed::Fixed;
use crate::rng::{stream_rng, StreamRng};
use crate::stepdist::{StepDistribution, StepKind};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `2^{-64}`, the spacing of atom positions.
pub const ATOM_UNIT: f64 = 1.0 / 18_446_744_073_709_551_616.0;

/// A position on the circle with the accumulated error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    pub value: Fixed,
    pub error_bound: f64,
}

/// A simulated path `S_1..S_n` with its orbit.
#[derive(Clone, Debug)]
pub struct WalkPath {
    pub seed: u64,
    pub stream: u64,
    pub partial_sums: Vec<i128>,
    pub orbit: Vec<Fixed>,
    /// `max_j |S_j| · 2^{-P}`.
    pub error_bound: f64,
}

impl WalkPath {
    pub fn len(&self) -> usize {
        self.orbit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbit.is_empty()
    }

    /// Position `j` (1-based) with its individual error bound.
    pub fn point(&self, j: usize, precision: u32) -> TorusPoint {
        let e = self.partial_sums[j - 1].unsigned_abs() as f64 * 2f64.powi(-(precision as i32));
        TorusPoint { value: self.orbit[j - 1].clone(), error_bound: e }
    }
}

/// Summary of a streamed walk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkSummary {
    pub n: usize,
    pub max_abs_sum: u128,
    pub error_bound: f64,
}

/// Steps that advance the orbit: table lookup for finite laws, one
/// fixed-point multiply per step otherwise.
pub struct Stepper<'a> {
    dist: &'a StepDistribution,
    alpha: &'a IrrationalSpec,
    increments: Option<Vec<(i128, Fixed)>>,
}

impl<'a> Stepper<'a> {
    pub fn new(dist: &'a StepDistribution, alpha: &'a IrrationalSpec) -> Self {
        let increments = match dist.kind() {
            StepKind::Finite { support, .. } => {
                Some(support.iter().map(|&m| (m as i128, alpha.frac_mul(m as i128))).collect())
            }
            _ => None,
        };
        Stepper { dist, alpha, increments }
    }

    /// Run `n` steps, calling `visit(j, S_j, {S_j α})` for `j = 1..=n`.
    ///
    /// Fails with `PrecisionBudgetExceeded` once `|S_j| · 2^{-P}` would reach `2^{-64}`.
    pub fn run<F>(&self, n: usize, rng: &mut StreamRng, mut visit: F) -> Result<WalkSummary>
    where
        F: FnMut(usize, i128, &Fixed),
    {
        let precision = self.alpha.precision;
        let budget: u128 = if precision >= 64 + 127 { u128::MAX } else { 1u128 << (precision - 64) };
        let mut pos = Fixed::zero((precision / 64) as usize);
        let mut s: i128 = 0;
        let mut max_abs: u128 = 0;
        for j in 1..=n {
            let x = match &self.increments {
                Some(inc) => {
                    let (m, f) = &inc[self.dist.sample_index(rng)];
                    pos.add_assign(f);
                    *m
                }
                None => {
                    let m = self.dist.sample(rng)?;
                    pos.add_assign(&self.alpha.frac_mul(m));
                    m
                }
            };
            s = s.checked_add(x).ok_or(Error::MagnitudeOverflow)?;
            max_abs = max_abs.max(s.unsigned_abs());
            if max_abs >= budget {
                let required_bits = 64 + (128 - max_abs.leading_zeros()) + 1;
                return Err(Error::PrecisionBudgetExceeded { required_bits });
            }
            visit(j, s, &pos);
        }
        Ok(WalkSummary { n, max_abs_sum: max_abs, error_bound: max_abs as f64 * 2f64.powi(-(precision as i32)) })
    }
}

/// Simulate `n` steps with the generator for `(seed, stream 0)`.
pub fn simulate(dist: &StepDistribution, alpha: &IrrationalSpec, n: usize, seed: u64) -> Result<WalkPath> {
    simulate_stream(dist, alpha, n, seed, 0)
}

/// Simulate `n` steps with the generator for `(seed, stream)`.
pub fn simulate_stream(dist: &StepDistribution, alpha: &IrrationalSpec, n: usize, seed: u64, stream: u64) -> Result<WalkPath> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, stream);
    let mut partial_sums = Vec::with_capacity(n);
    let mut orbit = Vec::with_capacity(n);
    let summary = Stepper::new(dist, alpha).run(n, &mut rng, |_, s, p| {
        partial_sums.push(s);
        orbit.push(p.clone());
    })?;
    Ok(WalkPath { seed, stream, partial_sums, orbit, error_bound: summary.error_bound })
}

/// A probability measure with finitely many atoms on `[0, 1)`, stored as
/// 64-bit fixed-point positions with integer multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    atoms: Vec<u64>,
    mult: Vec<u64>,
    n: u64,
}

impl EmpiricalMeasure {
    /// Sort and merge 64-bit positions.
    pub fn from_positions(mut xs: Vec<u64>) -> Self {
        assert!(!xs.is_empty(), "empty measure");
        xs.sort_unstable();
        Self::from_sorted(&xs)
    }

    /// Merge already sorted positions.
    pub fn from_sorted(xs: &[u64]) -> Self {
        let mut atoms = Vec::new();
        let mut mult: Vec<u64> = Vec::new();
        for &x in xs {
            if atoms.last() == Some(&x) {
                *mult.last_mut().unwrap() += 1;
            } else {
                atoms.push(x);
                mult.push(1);
            }
        }
        EmpiricalMeasure { atoms, mult, n: xs.len() as u64 }
    }

    /// Atoms with explicit multiplicities (need not be sorted).
    pub fn from_weighted(pairs: &[(u64, u64)]) -> Self {
        let mut v: Vec<(u64, u64)> = pairs.iter().copied().filter(|p| p.1 > 0).collect();
        assert!(!v.is_empty(), "empty measure");
        v.sort_unstable();
        let mut atoms: Vec<u64> = Vec::new();
        let mut mult: Vec<u64> = Vec::new();
        for (x, m) in v {
            if atoms.last() == Some(&x) {
                *mult.last_mut().unwrap() += m;
            } else {
                atoms.push(x);
                mult.push(m);
            }
        }
        let n = mult.iter().sum();
        EmpiricalMeasure { atoms, mult, n }
    }

    /// Positions given as reals in `[0, 1)`, rounded to the 64-bit grid.
    pub fn from_f64(xs: &[f64]) -> Self {
        Self::from_positions(xs.iter().map(|&x| to_position(x)).collect())
    }

    /// `(1/n) Σ_j δ_{{S_j α}}` for a simulated path.
    pub fn from_path(path: &WalkPath) -> Self {
        Self::from_positions(path.orbit.iter().map(Fixed::top64).collect())
    }

    pub fn atoms(&self) -> &[u64] {
        &self.atoms
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.mult
    }

    /// Total count.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Atom `i` as a real in `[0, 1)`.
    pub fn atom_f64(&self, i: usize) -> f64 {
        self.atoms[i] as f64 * ATOM_UNIT
    }

    /// Iterator of `(x, weight)`.
    pub fn weighted(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n as f64;
        self.atoms.iter().zip(&self.mult).map(move |(&a, &m)| (a as f64 * ATOM_UNIT, m as f64 / n))
    }
}

/// Nearest 64-bit grid point to `x mod 1`.
pub fn to_position(x: f64) -> u64 {
    let t = x - x.floor();
    let v = (t * 18_446_744_073_709_551_616.0).round();
    if v >= 18_446_744_073_709_551_616.0 {
        0
    } else {
        v as u64
    }
}

/// `e^{-2πi m x}` for a 64-bit position, reducing `m·x` modulo 1 exactly.
#[inline]
pub fn phase(x: u64, m: i64) -> Complex64 {
    let r = x.wrapping_mul(m as u64) as i64;
    let t = -2.0 * PI * (r as f64 * ATOM_UNIT);
    Complex64::new(t.cos(), t.sin())
}

/// `μ̂(m) = ∫ e^{-2πi m x} dμ(x)`.
pub fn empirical_fourier(mu: &EmpiricalMeasure, m: i64) -> Complex64 {
    assert!(m != 0, "frequency must be nonzero");
    let mut acc = Complex64::new(0.0, 0.0);
    for (&a, &c) in mu.atoms.iter().zip(&mu.mult) {
        acc += phase(a, m) * c as f64;
    }
    acc / mu.n as f64
}

/// `Σ_{j<=n} e^{2πi m S_j α}` straight from the orbit; equals `n·conj(μ̂_n(m))`.
pub fn exponential_sum(path: &WalkPath, m: i64) -> Complex64 {
    assert!(m != 0, "frequency must be nonzero");
    path.orbit.iter().map(|p| phase(p.top64(), m).conj()).sum()
}

/// `sup` over arcs `[a, b)` of `|μ([a, b)) - (b - a)|`.
///
/// With `F(x) = μ([0, x)) - x`, an arc has discrepancy `F(b) - F(a)`, so the
/// supremum is `sup F - inf F`: the sup is approached just right of an atom
/// (or at 0), the inf is attained just left of an atom (or near 1).
pub fn discrepancy(mu: &EmpiricalMeasure) -> f64 {
    let n = mu.n as f64;
    let mut cum = 0u64;
    let mut hi: f64 = 0.0;
    let mut lo: f64 = 0.0;
    for (i, &c) in mu.mult.iter().enumerate() {
        let x = mu.atom_f64(i);
        lo = lo.min(cum as f64 / n - x);
        cum += c;
        hi = hi.max(cum as f64 / n - x);
    }
    hi - lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_duplicates() {
        let mu = EmpiricalMeasure::from_f64(&[0.2, 0.7, 0.2]);
        assert_eq!(mu.atoms().len(), 2);
        assert_eq!(mu.multiplicities(), &[2, 1]);
        assert_eq!(mu.n(), 3);
    }

    #[test]
    fn fourier_examples() {
        let delta = EmpiricalMeasure::from_f64(&[0.0]);
        assert!((empirical_fourier(&delta, 7) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let half = EmpiricalMeasure::from_f64(&[0.0, 0.5]);
        assert!(empirical_fourier(&half, 1).norm() < 1e-15);
        let grid = EmpiricalMeasure::from_positions((0..8u64).map(|k| k << 61).collect());
        assert!((empirical_fourier(&grid, 8) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(empirical_fourier(&grid, 3).norm() < 1e-15);
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(discrepancy(&EmpiricalMeasure::from_f64(&[0.0])), 1.0);
        for n in 1..8u64 {
            let g = EmpiricalMeasure::from_f64(&(0..n).map(|k| k as f64 / n as f64).collect::<Vec<_>>());
            assert!((discrepancy(&g) - 1.0 / n as f64).abs() < 1e-15);
            let h = EmpiricalMeasure::from_f64(&(0..n).map(|k| (k as f64 + 0.5) / n as f64).collect::<Vec<_>>());
            assert!((discrepancy(&h) - 1.0 / n as f64).abs() < 1e-15);
        }
    }
}
