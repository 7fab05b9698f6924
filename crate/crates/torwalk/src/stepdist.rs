//! Integer-valued step laws.
//!
//! Three families are supported: finite laws with exact rational weights,
//! the symmetric zeta law `P(X = m) = |m|^{-s} / (2ζ(s))` for `1 < s < 3`,
//! and its `s = 2` member written as `P(X = m) = 3/(π² m²)`, whose
//! characteristic function has the closed form
//! `φ(x) = 1 - 3x/π + 3x²/(2π²)` on `[0, 2π]`.
//!
//! ```
//! use torwalk::stepdist::StepDistribution;
//!
//! let d: StepDistribution = "paper-example".parse().unwrap();
//! let phi = d.char_fn(std::f64::consts::PI, 1e-12).unwrap();
//! assert!((phi.value.re + 0.5).abs() < 1e-15);
//! assert_eq!(d.gcd_support().unwrap(), 1);
//! ```

use crate::error::{Error, Result};
use crate::series::{ComplexSeries, KahanSum};
use crate::special::{cos_series_minus_zeta, zeta, zeta_tail};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::diophantine::Frac;

/// Default tolerance for characteristic-function tails.
pub const CHAR_FN_TOL: f64 = 1e-12;

/// Entries in the inverse-CDF table of a zeta law.
pub const ZETA_TABLE_SIZE: usize = 1_000_000;

/// The family and parameters of a step law.
#[derive(Clone, Debug, PartialEq)]
pub enum StepKind {
    /// Atoms `support[i]` with probability `weights[i] / total`.
    Finite { support: Vec<i64>, weights: Vec<u64>, total: u64 },
    /// `P(X = m) = |m|^{-s} / (2ζ(s))` for `m != 0`.
    Zeta { s: f64 },
    /// `P(X = m) = 3/(π² m²)` for `m != 0`.
    PaperExample,
}

/// An integer-valued step law with sampler and characteristic function.
#[derive(Clone)]
pub struct StepDistribution {
    kind: StepKind,
    label: String,
    declared_beta: f64,
    alias: Option<Arc<AliasTable>>,
    zeta_table: Arc<OnceLock<ZetaTable>>,
}

impl fmt::Debug for StepDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StepDistribution({})", self.label)
    }
}

impl fmt::Display for StepDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

impl StepDistribution {
    /// A finite law from `(atom, probability)` pairs; probabilities must sum to 1 exactly.
    pub fn finite(pairs: &[(i64, Frac)]) -> Result<Self> {
        let mut merged: Vec<(i64, Frac)> = Vec::new();
        for (m, p) in pairs {
            if p.num < BigInt::zero() {
                return Err(Error::InvalidParameter(format!("negative probability at {m}")));
            }
            if p.num.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(a, _)| a == m) {
                Some(e) => e.1 = e.1.add(p),
                None => merged.push((*m, p.clone())),
            }
        }
        merged.sort_by_key(|e| e.0);
        if merged.is_empty() {
            return Err(Error::InvalidParameter("empty support".into()));
        }
        let lcm = merged.iter().fold(BigInt::from(1), |acc, (_, p)| acc.lcm(&p.den));
        let weights: Vec<BigInt> = merged.iter().map(|(_, p)| &p.num * (&lcm / &p.den)).collect();
        let sum: BigInt = weights.iter().sum();
        if sum != lcm {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {} rather than 1",
                Frac::new(sum, lcm)
            )));
        }
        let total = lcm.to_u64().filter(|t| *t < 1 << 62).ok_or_else(|| {
            Error::InvalidParameter("common denominator of probabilities exceeds 2^62".into())
        })?;
        let weights: Vec<u64> = weights.iter().map(|w| w.to_u64().unwrap()).collect();
        let support: Vec<i64> = merged.iter().map(|e| e.0).collect();
        let label = format!(
            "finite:{}",
            merged.iter().map(|(m, p)| format!("{m}={}", reduce(p))).collect::<Vec<_>>().join(",")
        );
        let exact_mean: i128 = support.iter().zip(&weights).map(|(m, w)| *m as i128 * *w as i128).sum();
        let beta = if exact_mean == 0 { 2.0 } else { 1.0 };
        let alias = Some(Arc::new(AliasTable::new(&weights, total)));
        Ok(StepDistribution {
            kind: StepKind::Finite { support, weights, total },
            label,
            declared_beta: beta,
            alias,
            zeta_table: Arc::new(OnceLock::new()),
        })
    }

    /// `P(X = ±1) = 1/2`.
    pub fn rademacher() -> Self {
        let h = Frac::parse("1/2").unwrap();
        let mut d = Self::finite(&[(-1, h.clone()), (1, h)]).unwrap();
        d.label = "rademacher".into();
        d
    }

    /// `P(X = 1) = p`, `P(X = 2) = 1 - p`.
    pub fn drift(p: Frac) -> Result<Self> {
        if p.num < BigInt::zero() || p > Frac::int(1) {
            return Err(Error::InvalidParameter(format!("drift probability {p} outside [0, 1]")));
        }
        let q = Frac::int(1).sub(&p);
        let mut d = Self::finite(&[(1, p.clone()), (2, q)])?;
        d.label = format!("drift:{}", reduce(&p));
        Ok(d)
    }

    /// The constant step `X = m`.
    pub fn constant(m: i64) -> Self {
        Self::finite(&[(m, Frac::int(1))]).unwrap()
    }

    /// Symmetric zeta law with exponent `s ∈ (1, 3)`.
    pub fn zeta(s: f64) -> Result<Self> {
        if !(s > 1.0 && s < 3.0) {
            return Err(Error::InvalidParameter(format!("zeta exponent {s} outside (1, 3)")));
        }
        Ok(StepDistribution {
            kind: StepKind::Zeta { s },
            label: format!("zeta:{s}"),
            declared_beta: (s - 1.0).min(2.0),
            alias: None,
            zeta_table: Arc::new(OnceLock::new()),
        })
    }

    /// `P(X = m) = 3/(π² m²)`, `m != 0`.
    pub fn paper_example() -> Self {
        StepDistribution {
            kind: StepKind::PaperExample,
            label: "paper-example".into(),
            declared_beta: 1.0,
            alias: None,
            zeta_table: Arc::new(OnceLock::new()),
        }
    }

    pub fn kind(&self) -> &StepKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Hölder exponent of `1 - φ` at the origin, as declared for the family.
    pub fn declared_beta(&self) -> f64 {
        self.declared_beta
    }

    /// Finite support, if any.
    pub fn support(&self) -> Option<&[i64]> {
        match &self.kind {
            StepKind::Finite { support, .. } => Some(support),
            _ => None,
        }
    }

    /// `P(X = m)` as an `f64`.
    pub fn pmf(&self, m: i64) -> f64 {
        match &self.kind {
            StepKind::Finite { support, weights, total } => support
                .iter()
                .position(|&a| a == m)
                .map_or(0.0, |i| weights[i] as f64 / *total as f64),
            StepKind::Zeta { s } => {
                if m == 0 {
                    0.0
                } else {
                    (m.unsigned_abs() as f64).powf(-s) / (2.0 * zeta(*s))
                }
            }
            StepKind::PaperExample => {
                if m == 0 {
                    0.0
                } else {
                    3.0 / (PI * PI * (m as f64).powi(2))
                }
            }
        }
    }

    pub fn mean(&self) -> Option<f64> {
        match &self.kind {
            StepKind::Finite { support, weights, total } => {
                Some(support.iter().zip(weights).map(|(m, w)| *m as f64 * *w as f64).sum::<f64>() / *total as f64)
            }
            StepKind::Zeta { s } if *s > 2.0 => Some(0.0),
            _ => None,
        }
    }

    pub fn variance(&self) -> Option<f64> {
        match &self.kind {
            StepKind::Finite { support, weights, total } => {
                let mu = self.mean().unwrap();
                Some(support.iter().zip(weights).map(|(m, w)| (*m as f64 - mu).powi(2) * *w as f64).sum::<f64>() / *total as f64)
            }
            _ => None,
        }
    }

    /// False only for a point mass.
    pub fn non_constant(&self) -> bool {
        self.support().is_none_or(|s| s.len() > 1)
    }

    /// `1 - φ(x)` with a certified tail, computed without cancellation.
    pub fn one_minus_char_fn(&self, x: f64, tol: f64) -> Result<ComplexSeries> {
        if !(tol > 0.0) {
            return Err(Error::InvalidTolerance(tol));
        }
        Ok(match &self.kind {
            StepKind::Finite { support, weights, total } => {
                let mut re = KahanSum::new();
                let mut im = KahanSum::new();
                for (m, w) in support.iter().zip(weights) {
                    let p = *w as f64 / *total as f64;
                    let t = reduce_angle(x, *m);
                    let h = (0.5 * t).sin();
                    re.add(2.0 * p * h * h);
                    im.add(-p * t.sin());
                }
                ComplexSeries::new(Complex64::new(re.value(), im.value()), support.len() as u64, 0.0)
            }
            StepKind::PaperExample => {
                let t = x.rem_euclid(2.0 * PI);
                let v = 3.0 * t / PI - 1.5 * t * t / (PI * PI);
                ComplexSeries::new(Complex64::new(v, 0.0), 0, 0.0)
            }
            StepKind::Zeta { s } => {
                let z = zeta(*s);
                let c = cos_series_minus_zeta(*s, x, tol * z);
                ComplexSeries::new(Complex64::new(-c.value / z, 0.0), c.truncation, c.tail_bound / z)
            }
        })
    }

    /// `φ(x) = E e^{ixX}` with `|true - value| <= tail_bound <= tol`.
    pub fn char_fn(&self, x: f64, tol: f64) -> Result<ComplexSeries> {
        if !(tol > 0.0) {
            return Err(Error::InvalidTolerance(tol));
        }
        if let StepKind::Finite { support, weights, total } = &self.kind {
            let mut re = KahanSum::new();
            let mut im = KahanSum::new();
            for (m, w) in support.iter().zip(weights) {
                let p = *w as f64 / *total as f64;
                let t = reduce_angle(x, *m);
                re.add(p * t.cos());
                im.add(p * t.sin());
            }
            return Ok(ComplexSeries::new(Complex64::new(re.value(), im.value()), support.len() as u64, 0.0));
        }
        let omp = self.one_minus_char_fn(x, tol)?;
        Ok(ComplexSeries::new(Complex64::new(1.0, 0.0) - omp.value, omp.truncation, omp.tail_bound))
    }

    /// `φ(x)` with the default tolerance, value only.
    pub fn phi(&self, x: f64) -> Complex64 {
        self.char_fn(x, CHAR_FN_TOL).unwrap().value
    }

    /// Greatest common divisor of the support.
    pub fn gcd_support(&self) -> Result<u64> {
        match &self.kind {
            StepKind::Finite { support, .. } => {
                let g = support.iter().fold(0u64, |g, m| g.gcd(&m.unsigned_abs()));
                if g == 0 {
                    Err(Error::DegenerateDistribution)
                } else {
                    Ok(g)
                }
            }
            _ => Ok(1),
        }
    }

    /// Draw one step.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<i128> {
        match &self.kind {
            StepKind::Finite { support, .. } => Ok(support[self.alias.as_ref().unwrap().sample(rng)] as i128),
            StepKind::Zeta { s } => self.sample_zeta(*s, rng),
            StepKind::PaperExample => self.sample_zeta(2.0, rng),
        }
    }

    /// Index into [`support`](Self::support) of one draw; finite laws only.
    #[inline]
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.alias.as_ref().expect("finite law").sample(rng)
    }

    fn table(&self, s: f64) -> &ZetaTable {
        self.zeta_table.get_or_init(|| ZetaTable::new(s, ZETA_TABLE_SIZE))
    }

    fn sample_zeta<R: Rng + ?Sized>(&self, s: f64, rng: &mut R) -> Result<i128> {
        let t = self.table(s);
        let k = t.sample_magnitude(rng)?;
        Ok(if rng.random::<bool>() { k } else { -k })
    }
}

fn reduce(p: &Frac) -> String {
    let g = p.num.gcd(&p.den);
    Frac::new(&p.num / &g, &p.den / &g).to_string()
}

/// `x·m` reduced modulo `2π` with the product formed in extended range.
fn reduce_angle(x: f64, m: i64) -> f64 {
    if m.unsigned_abs() < 1 << 20 {
        (x * m as f64) % (2.0 * PI)
    } else {
        let a = x.rem_euclid(2.0 * PI);
        ((a * m as f64) % (2.0 * PI) + 2.0 * PI) % (2.0 * PI)
    }
}

impl FromStr for StepDistribution {
    type Err = Error;

    /// `finite:m1=p1,m2=p2,... | zeta:s | paper-example | rademacher | drift:p | const:m`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "rademacher" => return Ok(Self::rademacher()),
            "paper-example" => return Ok(Self::paper_example()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("finite:") {
            let mut pairs = Vec::new();
            for item in rest.split(',') {
                let (m, p) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected m=p in {item}")))?;
                let m: i64 = m.trim().parse().map_err(|_| Error::Parse(format!("bad atom {m}")))?;
                pairs.push((m, Frac::parse(p)?));
            }
            return Self::finite(&pairs);
        }
        if let Some(rest) = s.strip_prefix("zeta:") {
            let v: f64 = rest.trim().parse().map_err(|_| Error::Parse(format!("bad exponent {rest}")))?;
            return Self::zeta(v);
        }
        if let Some(rest) = s.strip_prefix("drift:") {
            return Self::drift(Frac::parse(rest)?);
        }
        if let Some(rest) = s.strip_prefix("const:") {
            let m: i64 = rest.trim().parse().map_err(|_| Error::Parse(format!("bad atom {rest}")))?;
            return Ok(Self::constant(m));
        }
        Err(Error::Parse(format!("unknown distribution {s}")))
    }
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Walker's alias method with integer thresholds: column `i` keeps itself
/// when a uniform draw from `[0, total)` falls below `keep[i]`.
#[derive(Debug)]
struct AliasTable {
    keep: Vec<u64>,
    alias: Vec<usize>,
    total: u64,
}

impl AliasTable {
    fn new(weights: &[u64], total: u64) -> Self {
        let k = weights.len();
        // Column capacity is `total`; item i brings weight·k.
        let mut scaled: Vec<u128> = weights.iter().map(|&w| w as u128 * k as u128).collect();
        let cap = total as u128;
        let mut keep = vec![total; k];
        let mut alias: Vec<usize> = (0..k).collect();
        let mut small: Vec<usize> = (0..k).filter(|&i| scaled[i] < cap).collect();
        let mut large: Vec<usize> = (0..k).filter(|&i| scaled[i] >= cap).collect();
        while let (Some(l), Some(g)) = (small.pop(), large.pop()) {
            keep[l] = scaled[l] as u64;
            alias[l] = g;
            scaled[g] = scaled[g] + scaled[l] - cap;
            if scaled[g] < cap {
                small.push(g);
            } else {
                large.push(g);
            }
        }
        AliasTable { keep, alias, total }
    }

    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let k = self.keep.len();
        if k == 1 {
            return 0;
        }
        let i = rng.random_range(0..k);
        let u = rng.random_range(0..self.total);
        if u < self.keep[i] {
            i
        } else {
            self.alias[i]
        }
    }

    /// Exact probability of index `i`, as `(numerator, k·total)`.
    #[cfg(test)]
    fn mass(&self, i: usize) -> (u128, u128) {
        let k = self.keep.len() as u128;
        let mut num = self.keep[i] as u128;
        for (j, &a) in self.alias.iter().enumerate() {
            if a == i && j != i {
                num += (self.total - self.keep[j]) as u128;
            }
        }
        (num, k * self.total as u128)
    }
}

/// Inverse CDF of `|X|` for the zeta law on `1..=size`, with an exact
/// rejection sampler for the tail beyond the table.
#[derive(Debug)]
struct ZetaTable {
    s: f64,
    cdf: Vec<f64>,
}

impl ZetaTable {
    fn new(s: f64, size: usize) -> Self {
        let mut acc = KahanSum::new();
        let mut partial = Vec::with_capacity(size);
        for k in 1..=size {
            acc.add((k as f64).powf(-s));
            partial.push(acc.value());
        }
        let z = acc.value() + zeta_tail(s, size as u64 + 1);
        let cdf = partial.into_iter().map(|c| c / z).collect();
        ZetaTable { s, cdf }
    }

    fn sample_magnitude<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<i128> {
        let u: f64 = rng.random();
        let last = *self.cdf.last().unwrap();
        if u < last {
            return Ok(self.cdf.partition_point(|&c| c <= u) as i128 + 1);
        }
        // Tail k > T: propose round(Y) with Y ~ Pareto on [T + 1/2, ∞), then
        // accept with k^{-s} / ∫_{k-1/2}^{k+1/2} y^{-s} dy, which is <= 1 by convexity.
        let s = self.s;
        let start = self.cdf.len() as f64 + 0.5;
        loop {
            let v: f64 = 1.0 - rng.random::<f64>();
            let y = start * v.powf(-1.0 / (s - 1.0));
            if !(y < 1.0e38) {
                return Err(Error::MagnitudeOverflow);
            }
            let k = (y + 0.5).floor();
            let envelope = ((k - 0.5).powf(1.0 - s) - (k + 0.5).powf(1.0 - s)) / (s - 1.0);
            let accept = k.powf(-s) / envelope;
            if rng.random::<f64>() < accept {
                return Ok(k as i128);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Hölder checks
// ---------------------------------------------------------------------------

/// Per-point margins of a Hölder inequality on a grid.
#[derive(Clone, Debug, Serialize)]
pub struct HolderReport {
    /// `(x, margin)`; the inequality holds at `x` when `margin >= 0`.
    pub points: Vec<(f64, f64)>,
    pub min_margin: f64,
    pub passed: bool,
}

impl HolderReport {
    fn from_points(points: Vec<(f64, f64)>) -> Self {
        let min_margin = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        HolderReport { passed: min_margin >= 0.0, min_margin, points }
    }
}

/// `grid` equally spaced points in `(0, radius]`.
pub fn positive_grid(radius: f64, grid: usize) -> Vec<f64> {
    (1..=grid).map(|i| radius * i as f64 / grid as f64).collect()
}

/// `grid + 1` equally spaced points in `[a, b]`.
pub fn linspace(a: f64, b: f64, grid: usize) -> Vec<f64> {
    (0..=grid).map(|i| a + (b - a) * i as f64 / grid as f64).collect()
}

/// `|1 - φ(x)| >= c |x|^β` on `grid` points of `(0, radius]`; the tail
/// bound is subtracted from each margin.
pub fn check_holder_lower(dist: &StepDistribution, beta: f64, c: f64, radius: f64, grid: usize) -> Result<HolderReport> {
    let mut pts = Vec::with_capacity(grid);
    for x in positive_grid(radius, grid) {
        let v = dist.one_minus_char_fn(x, CHAR_FN_TOL)?;
        pts.push((x, v.value.norm() - v.tail_bound - c * x.abs().powf(beta)));
    }
    Ok(HolderReport::from_points(pts))
}

/// `|1 - φ(x)| <= c |x|^β` at every point of `grid`.
pub fn check_holder_upper(dist: &StepDistribution, beta: f64, c: f64, grid: &[f64]) -> Result<HolderReport> {
    let mut pts = Vec::with_capacity(grid.len());
    for &x in grid {
        let v = dist.one_minus_char_fn(x, CHAR_FN_TOL)?;
        pts.push((x, c * x.abs().powf(beta) - v.value.norm() - v.tail_bound));
    }
    Ok(HolderReport::from_points(pts))
}

/// Smallest `c` with `|1 - φ(x)| <= c |x|^β` on the grid (points at 0 skipped).
pub fn sweep_holder_upper(dist: &StepDistribution, beta: f64, grid: &[f64]) -> Result<f64> {
    let mut c: f64 = 0.0;
    for &x in grid.iter().filter(|x| **x != 0.0) {
        let v = dist.one_minus_char_fn(x, CHAR_FN_TOL)?;
        c = c.max((v.value.norm() + v.tail_bound) / x.abs().powf(beta));
    }
    Ok(c)
}

/// Largest `c` with `|1 - φ(x)| >= c |x|^β` on `grid` points of `(0, radius]`.
pub fn sweep_holder_lower(dist: &StepDistribution, beta: f64, radius: f64, grid: usize) -> Result<f64> {
    let mut c = f64::INFINITY;
    for x in positive_grid(radius, grid) {
        let v = dist.one_minus_char_fn(x, CHAR_FN_TOL)?;
        c = c.min((v.value.norm() - v.tail_bound) / x.powf(beta));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn parse_and_label() {
        let d: StepDistribution = "drift:2/3".parse().unwrap();
        assert_eq!(d.label(), "drift:2/3");
        assert_eq!(d.declared_beta(), 1.0);
        let r: StepDistribution = "finite:-1=0.5,1=1/2".parse().unwrap();
        assert_eq!(r.declared_beta(), 2.0);
        assert!("finite:1=1/2,2=1/3".parse::<StepDistribution>().is_err());
        assert!("zeta:3.5".parse::<StepDistribution>().is_err());
    }

    #[test]
    fn alias_masses_are_exact() {
        let w = [1u64, 5, 2, 7, 0, 9];
        let total: u64 = w.iter().sum();
        let t = AliasTable::new(&w, total);
        for (i, &wi) in w.iter().enumerate() {
            let (num, den) = t.mass(i);
            assert_eq!(num * total as u128, wi as u128 * den, "index {i}");
        }
    }

    #[test]
    fn two_point_char_fn() {
        let d = StepDistribution::rademacher();
        let v = d.char_fn(PI, 1e-12).unwrap();
        assert!((v.value.re + 1.0).abs() < 1e-15 && v.value.im.abs() < 1e-15);
        let z = StepDistribution::zeta(2.5).unwrap().char_fn(0.0, 1e-12).unwrap();
        assert_eq!(z.value, Complex64::new(1.0, 0.0));
        assert_eq!(z.tail_bound, 0.0);
        assert!(matches!(d.char_fn(1.0, 0.0), Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!("finite:-2=1/2,2=1/2".parse::<StepDistribution>().unwrap().gcd_support().unwrap(), 2);
        assert_eq!("finite:3=1/3,5=2/3".parse::<StepDistribution>().unwrap().gcd_support().unwrap(), 1);
        assert_eq!(StepDistribution::constant(0).gcd_support(), Err(Error::DegenerateDistribution));
    }

    #[test]
    fn zeta_tail_sampler_is_reachable() {
        // A tiny table forces the rejection branch; check P(|X| = 3) given |X| > 2.
        let t = ZetaTable::new(2.5, 2);
        let mut rng = stream_rng(5, 0);
        let z = zeta(2.5);
        let p3 = 3f64.powf(-2.5) / z;
        let n = 200_000;
        let mut hits = 0;
        let mut total = 0;
        for _ in 0..n {
            let k = t.sample_magnitude(&mut rng).unwrap();
            if k > 2 {
                total += 1;
                if k == 3 {
                    hits += 1;
                }
            }
        }
        let tail = 1.0 - t.cdf[1];
        let want = p3 / tail;
        let got = hits as f64 / total as f64;
        let sd = (want * (1.0 - want) / total as f64).sqrt();
        assert!((got - want).abs() < 4.0 * sd, "{got} vs {want}");
    }
}
