//! Continued fractions, convergents and Diophantine approximation.
//!
//! An irrational `α` is described by an [`AlphaSource`]. Its partial
//! quotients are extracted with an interval Gauss map: both ends of an
//! enclosure `[lo, hi] ∋ α·2^P` are expanded in lockstep and a digit is
//! emitted only while the two expansions agree. Everything downstream
//! (convergents, `‖q_k α‖` enclosures, the fixed-point value of `α`) is
//! exact integer arithmetic.
//!
//! ```
//! use torwalk::diophantine::{cf_expand, convergents, AlphaSource, ExpandConfig};
//!
//! let golden: AlphaSource = "golden".parse().unwrap();
//! let cf = cf_expand(&golden, 6, &ExpandConfig::default()).unwrap();
//! assert_eq!(cf.to_string(), "[1; 1, 1, 1, 1, 1]");
//! let table = convergents(&cf, 5).unwrap();
//! let q: Vec<String> = table.q.iter().map(|x| x.to_string()).collect();
//! assert_eq!(q, ["0", "1", "1", "2", "3", "5"]);
//! ```

use crate::error::{Error, Result};
use crate::fixed::Fixed;
use crate::rng::stream_rng;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

// ---------------------------------------------------------------------------
// Exact fractions
// ---------------------------------------------------------------------------

/// An exact rational `num / den` with `den > 0`, never reduced.
///
/// Comparisons cross-multiply, so no gcd is ever taken; this keeps work on
/// multi-million-bit convergents linear in the number of products.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: BigInt,
    pub den: BigInt,
}

impl Frac {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            Frac { num: -num, den: -den }
        } else {
            Frac { num, den }
        }
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Frac { num: n.into(), den: BigInt::one() }
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn add(&self, o: &Frac) -> Frac {
        Frac::new(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        Frac::new(&self.num * &o.den - &o.num * &self.den, &self.den * &o.den)
    }

    pub fn abs(&self) -> Frac {
        Frac { num: self.num.abs(), den: self.den.clone() }
    }

    pub fn is_integer(&self) -> bool {
        (&self.num % &self.den).is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        if self.num.bits() <= 1000 && self.den.bits() <= 1000 {
            return self.num.to_f64().unwrap() / self.den.to_f64().unwrap();
        }
        self.ln_abs().exp() * if self.num.is_negative() { -1.0 } else { 1.0 }
    }

    /// `ln|x|`, finite even when `|x|` under- or overflows `f64`.
    pub fn ln_abs(&self) -> f64 {
        if self.num.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_big(self.num.magnitude()) - ln_big(self.den.magnitude())
    }

    /// Parse `"7"`, `"-2.5"` or `"7/3"` exactly.
    pub fn parse(s: &str) -> Result<Frac> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let n: BigInt = a.trim().parse().map_err(|_| Error::Parse(s.into()))?;
            let d: BigInt = b.trim().parse().map_err(|_| Error::Parse(s.into()))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s}")));
            }
            return Ok(Frac::new(n, d));
        }
        parse_decimal(s)
    }
}

impl PartialEq for Frac {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Frac {}
impl PartialOrd for Frac {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Frac {
    fn cmp(&self, o: &Self) -> Ordering {
        (&self.num * &o.den).cmp(&(&o.num * &self.den))
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn parse_decimal(s: &str) -> Result<Frac> {
    let err = || Error::Parse(format!("not a decimal number: {s}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(err());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{ip}{fp}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
    if neg {
        num = -num;
    }
    let den = BigInt::from(10u8).pow(fp.len() as u32);
    Ok(Frac::new(num, den))
}

// ---------------------------------------------------------------------------
// Sources
// ---------------------------------------------------------------------------

/// Where the digits of `α` come from.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaSource {
    /// `(u + v·√w) / t`.
    Surd { u: BigInt, v: BigInt, w: BigUint, t: BigInt, name: Option<String> },
    /// Euler's number.
    E,
    /// π by Machin's formula.
    Pi,
    /// A decimal string, expanded exactly as a rational.
    Decimal(String),
    /// The type-`γ` construction with window constant `K`.
    Constructed { gamma: Frac, k: Frac },
}

impl AlphaSource {
    pub fn surd(u: i64, v: i64, w: u64, t: i64) -> Self {
        AlphaSource::Surd { u: u.into(), v: v.into(), w: w.into(), t: t.into(), name: None }
    }

    fn named_surd(u: i64, v: i64, w: u64, t: i64, name: &str) -> Self {
        AlphaSource::Surd { u: u.into(), v: v.into(), w: w.into(), t: t.into(), name: Some(name.into()) }
    }

    pub fn golden() -> Self {
        Self::named_surd(1, 1, 5, 2, "golden")
    }

    pub fn sqrt2() -> Self {
        Self::named_surd(0, 1, 2, 1, "sqrt2")
    }

    pub fn sqrt3() -> Self {
        Self::named_surd(0, 1, 3, 1, "sqrt3")
    }

    pub fn constructed(gamma: u32, k: u32) -> Self {
        AlphaSource::Constructed { gamma: Frac::int(gamma), k: Frac::int(k) }
    }

    /// Bounded partial quotients can be read off the first digits; this
    /// holds for quadratic surds, which are eventually periodic.
    fn is_quadratic(&self) -> bool {
        matches!(self, AlphaSource::Surd { .. })
    }
}

impl FromStr for AlphaSource {
    type Err = Error;

    /// `golden | sqrt2 | sqrt3 | silver | e | pi | surd:u,v,w,t | construct:γ,K | <decimal>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "golden" | "phi" => return Ok(Self::golden()),
            "sqrt2" => return Ok(Self::sqrt2()),
            "sqrt3" => return Ok(Self::sqrt3()),
            "silver" => return Ok(Self::named_surd(1, 1, 2, 1, "silver")),
            "e" => return Ok(AlphaSource::E),
            "pi" => return Ok(AlphaSource::Pi),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("surd:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(Error::Parse(format!("surd needs u,v,w,t: {s}")));
            }
            let p = |i: usize| -> Result<BigInt> {
                parts[i].parse().map_err(|_| Error::Parse(format!("bad integer {}", parts[i])))
            };
            let (u, v, w, t) = (p(0)?, p(1)?, p(2)?, p(3)?);
            if w.is_negative() || t.is_zero() {
                return Err(Error::InvalidParameter(format!("surd needs w >= 0 and t != 0: {s}")));
            }
            return Ok(AlphaSource::Surd { u, v, w: w.magnitude().clone(), t, name: None });
        }
        if let Some(rest) = s.strip_prefix("construct:") {
            let (g, k) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("construct needs γ,K: {s}")))?;
            return Ok(AlphaSource::Constructed { gamma: Frac::parse(g)?, k: Frac::parse(k)? });
        }
        parse_decimal(s)?;
        Ok(AlphaSource::Decimal(s.to_string()))
    }
}

impl fmt::Display for AlphaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSource::Surd { name: Some(n), .. } => write!(f, "{n}"),
            AlphaSource::Surd { u, v, w, t, .. } => write!(f, "surd:{u},{v},{w},{t}"),
            AlphaSource::E => write!(f, "e"),
            AlphaSource::Pi => write!(f, "pi"),
            AlphaSource::Decimal(s) => write!(f, "{s}"),
            AlphaSource::Constructed { gamma, k } => write!(f, "construct:{gamma},{k}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Continued fractions
// ---------------------------------------------------------------------------

/// A finite prefix `[a0; a1, a2, ...]` of a continued fraction.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    pub a0: BigInt,
    /// `digits[i]` is `a_{i+1}`; all are at least 1.
    pub digits: Vec<BigUint>,
    pub source: AlphaSource,
}

impl ContinuedFraction {
    /// Number of terms, counting `a0`.
    pub fn len(&self) -> usize {
        1 + self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a_k` as a signed integer.
    pub fn term(&self, k: usize) -> BigInt {
        if k == 0 {
            self.a0.clone()
        } else {
            BigInt::from(self.digits[k - 1].clone())
        }
    }

    /// Largest of `a_1..a_{n}` (or of all digits if fewer).
    pub fn max_digit(&self, n: usize) -> BigUint {
        self.digits.iter().take(n).max().cloned().unwrap_or_default()
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a0)?;
        for (i, d) in self.digits.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { "; " } else { ", " }, d)?;
        }
        write!(f, "]")
    }
}

/// Precision controls for [`cf_expand`].
#[derive(Clone, Copy, Debug)]
pub struct ExpandConfig {
    /// Starting working precision in bits.
    pub precision: u32,
    /// Give up beyond this many bits.
    pub cap: u32,
}

impl Default for ExpandConfig {
    fn default() -> Self {
        ExpandConfig { precision: 256, cap: 16 * 256 }
    }
}

impl ExpandConfig {
    pub fn with_precision(precision: u32) -> Self {
        ExpandConfig { precision, cap: 16 * precision }
    }
}

/// First `k` terms (counting `a0`) of the continued fraction of `source`.
pub fn cf_expand(source: &AlphaSource, k: usize, cfg: &ExpandConfig) -> Result<ContinuedFraction> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one term".into()));
    }
    match source {
        AlphaSource::Decimal(s) => {
            let x = parse_decimal(s)?;
            let terms = euclid_exact(x.num, x.den, k);
            if terms.len() < k {
                return Err(Error::RationalInput(terms.len()));
            }
            Ok(assemble(terms, source))
        }
        AlphaSource::Constructed { gamma, k: kk } => {
            let terms = constructed_terms(gamma, kk, k)?;
            Ok(assemble(terms, source))
        }
        AlphaSource::Surd { u, v, w, t, .. } => {
            let r = w.sqrt();
            if &r * &r == *w || v.is_zero() {
                let num = u + v * BigInt::from(r);
                let terms = euclid_exact(num, t.clone(), k);
                return Err(Error::RationalInput(terms.len()));
            }
            expand_by_enclosure(source, k, cfg)
        }
        AlphaSource::E | AlphaSource::Pi => expand_by_enclosure(source, k, cfg),
    }
}

fn assemble(terms: Vec<BigInt>, source: &AlphaSource) -> ContinuedFraction {
    let mut it = terms.into_iter();
    let a0 = it.next().unwrap();
    let digits = it.map(|d| d.magnitude().clone()).collect();
    ContinuedFraction { a0, digits, source: source.clone() }
}

fn euclid_exact(mut n: BigInt, mut d: BigInt, k: usize) -> Vec<BigInt> {
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    let mut out = Vec::new();
    while out.len() < k && !d.is_zero() {
        let (a, r) = n.div_mod_floor(&d);
        out.push(a);
        n = d;
        d = r;
    }
    out
}

fn expand_by_enclosure(source: &AlphaSource, k: usize, cfg: &ExpandConfig) -> Result<ContinuedFraction> {
    let mut bits = cfg.precision.max(64);
    loop {
        let (lo, hi) = enclose(source, bits);
        let den = BigInt::one() << bits;
        let terms = euclid_interval(lo, hi, den, k);
        if terms.len() >= k {
            return Ok(assemble(terms, source));
        }
        if bits >= cfg.cap {
            return Err(Error::PrecisionExhausted(format!(
                "{} of {k} terms of {source} pinned at {bits} bits",
                terms.len()
            )));
        }
        bits = (bits * 2).min(cfg.cap);
    }
}

/// Digits shared by every number in `[lo/den, hi/den]`.
fn euclid_interval(lo: BigInt, hi: BigInt, den: BigInt, k: usize) -> Vec<BigInt> {
    let (mut n1, mut d1, mut n2, mut d2) = (lo, den.clone(), hi, den);
    let mut out = Vec::new();
    while out.len() < k {
        let (a1, r1) = n1.div_mod_floor(&d1);
        let (a2, r2) = n2.div_mod_floor(&d2);
        if a1 != a2 {
            break;
        }
        out.push(a1);
        if r1.is_zero() || r2.is_zero() {
            break;
        }
        n1 = std::mem::replace(&mut d1, r1);
        n2 = std::mem::replace(&mut d2, r2);
    }
    out
}

/// Integers `lo <= α·2^bits <= hi`.
fn enclose(source: &AlphaSource, bits: u32) -> (BigInt, BigInt) {
    match source {
        AlphaSource::Surd { u, v, w, t, .. } => {
            let scaled = BigUint::from(v.magnitude().pow(2)) * w << (2 * bits);
            let s = BigInt::from(scaled.sqrt());
            let base = u << bits;
            let (nlo, nhi) = if v.is_positive() {
                (&base + &s, &base + &s + 1)
            } else {
                (&base - &s - 1, &base - &s)
            };
            let (nlo, nhi, t) = if t.is_negative() { (-nhi, -nlo, -t) } else { (nlo, nhi, t.clone()) };
            (nlo.div_floor(&t), nhi.div_ceil(&t))
        }
        AlphaSource::E => {
            let g = 64;
            let scale = BigInt::one() << (bits + g);
            let mut term = scale.clone();
            let mut sum = BigInt::zero();
            let mut k = 0u64;
            while !term.is_zero() {
                sum += &term;
                k += 1;
                term /= k;
            }
            let hi = &sum + k + 3;
            (sum >> g, (hi >> g) + 1)
        }
        AlphaSource::Pi => {
            let g = 64;
            let scale = BigInt::one() << (bits + g);
            let (a, na) = arctan_inv(&scale, 5);
            let (b, nb) = arctan_inv(&scale, 239);
            let v = a * 16 - b * 4;
            let err = BigInt::from(16 * (na + 1) + 4 * (nb + 1));
            ((&v - &err) >> g, ((&v + &err) >> g) + 1)
        }
        AlphaSource::Decimal(_) | AlphaSource::Constructed { .. } => {
            unreachable!("exact sources are expanded directly")
        }
    }
}

/// `arctan(1/x) * scale` up to `count + 1` units; returns `(value, count)`.
fn arctan_inv(scale: &BigInt, x: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(x * x);
    let mut pw = scale / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !pw.is_zero() {
        let term = &pw / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pw /= &x2;
        k += 1;
    }
    (sum, k)
}

/// Terms `a0 = 0, a1 = 1`, then the least `a_k` putting `q_{k+1}` into
/// `[K·q_k^γ, K·q_k^γ + q_k)`.
fn constructed_terms(gamma: &Frac, kk: &Frac, count: usize) -> Result<Vec<BigInt>> {
    if *gamma <= Frac::int(1) {
        return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")));
    }
    if *kk < Frac::int(2) {
        return Err(Error::InvalidParameter(format!("K must be at least 2, got {kk}")));
    }
    let (ga, gb) = (gamma.num.magnitude().clone(), gamma.den.magnitude().clone());
    let gb_u32 = gb.to_u32().ok_or_else(|| Error::InvalidParameter("gamma denominator too large".into()))?;
    let ga_u32 = ga.to_u32().ok_or_else(|| Error::InvalidParameter("gamma numerator too large".into()))?;
    let mut terms = vec![BigInt::zero(), BigInt::one()];
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::one()); // q_1, q_2
    while terms.len() < count {
        let target = ceil_k_pow(&q, kk, ga_u32, gb_u32);
        let a = (target - &q_prev).div_ceil(&q).max(BigInt::one());
        let q_next = &a * &q + &q_prev;
        terms.push(a);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    terms.truncate(count);
    Ok(terms)
}

/// `ceil(K · q^(a/b))` exactly.
fn ceil_k_pow(q: &BigInt, kk: &Frac, a: u32, b: u32) -> BigInt {
    let (c, d) = (&kk.num, &kk.den);
    if b == 1 {
        return (c * q.pow(a)).div_ceil(d);
    }
    // Least T with (d·T)^b >= c^b q^a.
    let x: BigInt = c.pow(b) * q.pow(a);
    let y: BigInt = Roots::nth_root(&x, b);
    if y.pow(b) == x {
        y.div_ceil(d)
    } else {
        (y + BigInt::one()).div_ceil(d)
    }
}

// ---------------------------------------------------------------------------
// Convergents
// ---------------------------------------------------------------------------

/// Rows `(k, p_k, q_k)` for `k = 0..=K`, with `p_0 = 1, q_0 = 0, p_1 = a_0, q_1 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergentTable {
    pub p: Vec<BigInt>,
    pub q: Vec<BigInt>,
}

impl ConvergentTable {
    /// Index of the last row.
    pub fn last(&self) -> usize {
        self.q.len() - 1
    }

    /// `p_k q_{k-1} - q_k p_{k-1}`.
    pub fn determinant(&self, k: usize) -> BigInt {
        &self.p[k] * &self.q[k - 1] - &self.q[k] * &self.p[k - 1]
    }

    /// Check the recurrence, determinant and monotonicity invariants.
    pub fn verify(&self, cf: &ContinuedFraction) -> std::result::Result<(), String> {
        for k in 1..self.q.len() {
            let want = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            if self.determinant(k) != want {
                return Err(format!("determinant fails at k = {k}"));
            }
            if k + 1 < self.q.len() {
                let a = cf.term(k);
                if self.p[k + 1] != &a * &self.p[k] + &self.p[k - 1] || self.q[k + 1] != &a * &self.q[k] + &self.q[k - 1] {
                    return Err(format!("recurrence fails at k = {k}"));
                }
            }
            if k >= 3 && self.q[k] <= self.q[k - 1] {
                return Err(format!("q not increasing at k = {k}"));
            }
        }
        Ok(())
    }
}

/// Convergents `p_k/q_k = [a_0; ..., a_{k-1}]` for `k = 0..=K`; needs `K` terms.
pub fn convergents(cf: &ContinuedFraction, k: usize) -> Result<ConvergentTable> {
    if cf.len() < k {
        return Err(Error::InvalidParameter(format!("need {k} terms, have {}", cf.len())));
    }
    let mut p = vec![BigInt::one(), cf.a0.clone()];
    let mut q = vec![BigInt::zero(), BigInt::one()];
    for i in 1..k {
        let a = BigInt::from(cf.digits[i - 1].clone());
        p.push(&a * &p[i] + &p[i - 1]);
        q.push(&a * &q[i] + &q[i - 1]);
    }
    p.truncate(k + 1);
    q.truncate(k + 1);
    Ok(ConvergentTable { p, q })
}

// ---------------------------------------------------------------------------
// Distance to the nearest integer
// ---------------------------------------------------------------------------

/// Enclosure of `‖x‖` for every `x` in a closed interval.
#[derive(Clone, Debug)]
pub struct DistToInt {
    pub lo: Frac,
    pub hi: Frac,
}

impl DistToInt {
    pub fn value(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    /// Width of the enclosure, as an `f64`.
    pub fn error_bound(&self) -> f64 {
        self.hi.sub(&self.lo).to_f64()
    }
}

/// `‖x‖ = min_n |x - n|` for all `x ∈ [lo, hi]`; needs `hi - lo < 1/4`.
pub fn dist_to_int(lo: &Frac, hi: &Frac) -> DistToInt {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let half = Frac::new(BigInt::one(), BigInt::from(2));
    let n_lo = lo.add(&half).floor();
    let n_hi = hi.add(&half).floor();
    let d_lo = lo.sub(&Frac::int(n_lo.clone())).abs();
    let d_hi = hi.sub(&Frac::int(n_hi.clone())).abs();
    if n_lo == n_hi {
        let n = Frac::int(n_lo);
        let contains = *lo <= n && n <= *hi;
        let min = if contains { Frac::int(0) } else { d_lo.clone().min(d_hi.clone()) };
        DistToInt { lo: min, hi: d_lo.max(d_hi) }
    } else {
        DistToInt { lo: d_lo.min(d_hi), hi: half }
    }
}

/// Convenience for an exactly known `f64`.
pub fn dist_to_int_f64(x: f64) -> f64 {
    (x - x.round()).abs()
}

// ---------------------------------------------------------------------------
// Irrational specifications
// ---------------------------------------------------------------------------

/// How a Diophantine claim is backed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Supplied by the user or inferred from a finite prefix.
    Asserted,
    /// Guaranteed by how `α` was built or by a general theorem.
    Certified,
}

/// `‖qα‖ >= C q^{-γ}` for all `q >= 1` (lower) or `‖qα‖ <= C q^{-γ}` for infinitely many `q` (upper).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiophantineClaim {
    pub gamma: f64,
    pub c: f64,
    pub provenance: Provenance,
}

/// An irrational with digits, convergents and a fixed-point value.
#[derive(Clone, Debug)]
pub struct IrrationalSpec {
    pub cf: ContinuedFraction,
    pub table: ConvergentTable,
    /// `frac(α)` to `precision` bits, rounded to nearest.
    pub value: Fixed,
    pub precision: u32,
    /// Index `D` of the convergent the value was rounded from.
    pub value_index: usize,
    pub lower: Option<DiophantineClaim>,
    pub upper: Option<DiophantineClaim>,
}

impl IrrationalSpec {
    /// Expand `source` far enough for a `precision`-bit value (rounded up to a multiple of 64).
    pub fn new(source: &AlphaSource, precision: u32) -> Result<Self> {
        let precision = precision.max(64).div_ceil(64) * 64;
        let cfg = ExpandConfig::with_precision(precision + 64);
        let need = BigInt::one() << (precision + 1);
        let constructed = matches!(source, AlphaSource::Constructed { .. });
        // Constructed digits grow doubly exponentially, so add one term at a time.
        let mut k = if constructed { 4 } else { 16 };
        let (cf, table, d) = loop {
            let cf = cf_expand(source, k, &cfg)?;
            let table = convergents(&cf, k)?;
            let found = (2..table.last()).find(|&d| &table.q[d] * &table.q[d + 1] >= need);
            let spare = if constructed { 2 } else { 3 };
            if let Some(d) = found.filter(|&d| d + spare <= table.last()) {
                break (cf, table, d);
            }
            k = if constructed { k + 1 } else { 2 * k };
        };
        let num = (&table.p[d] - &cf.a0 * &table.q[d]).magnitude().clone();
        let qd = table.q[d].magnitude().clone();
        let scaled = ((num << (precision + 1)) + &qd) / (qd << 1usize);
        let value = Fixed::from_biguint(&scaled, (precision / 64) as usize);
        let upper = Some(DiophantineClaim { gamma: 1.0, c: 1.0, provenance: Provenance::Certified });
        let (lower, upper) = match source {
            AlphaSource::Constructed { gamma, k } => {
                let (g, kf) = (gamma.to_f64(), k.to_f64());
                (
                    Some(DiophantineClaim { gamma: g, c: 1.0 / (kf + 2.0), provenance: Provenance::Certified }),
                    Some(DiophantineClaim { gamma: g, c: 1.0 / kf, provenance: Provenance::Certified }),
                )
            }
            s if s.is_quadratic() => {
                let a = cf.max_digit(64).to_f64().unwrap_or(f64::INFINITY);
                (Some(DiophantineClaim { gamma: 1.0, c: 1.0 / (a + 2.0), provenance: Provenance::Asserted }), upper)
            }
            _ => (None, upper),
        };
        Ok(IrrationalSpec { cf, table, value, precision, value_index: d, lower, upper })
    }

    pub fn source(&self) -> &AlphaSource {
        &self.cf.source
    }

    /// Recompute with at least `terms` terms, keeping the value and claims.
    pub fn extend(&self, terms: usize) -> Result<Self> {
        if terms <= self.cf.len() {
            return Ok(self.clone());
        }
        let cf = cf_expand(&self.cf.source, terms, &ExpandConfig::with_precision(self.precision + 64))?;
        let table = convergents(&cf, terms)?;
        Ok(IrrationalSpec { cf, table, ..self.clone() })
    }

    /// Replace the lower claim with a user assertion.
    pub fn with_lower_claim(mut self, gamma: f64, c: f64) -> Self {
        self.lower = Some(DiophantineClaim { gamma, c, provenance: Provenance::Asserted });
        self
    }

    /// Certified bound on `|value - frac(α)|`.
    pub fn error_bound(&self) -> f64 {
        2f64.powi(-(self.precision as i32))
    }

    /// `frac(m·α)` in fixed point, error at most `|m|·2^{-P}`.
    pub fn frac_mul(&self, m: i128) -> Fixed {
        self.value.mul_int(m)
    }

    /// `‖m α‖` as an `f64` via the fixed-point value.
    pub fn norm_mul(&self, m: i128) -> f64 {
        let x = self.frac_mul(m).to_f64();
        x.min(1.0 - x)
    }

    /// `α` as an `f64`.
    pub fn to_f64(&self) -> f64 {
        self.cf.a0.to_f64().unwrap() + self.value.to_f64()
    }

    /// `α` lies strictly between `p_D/q_D` and `p_{D+1}/q_{D+1}`; ordered `(lo, hi)`.
    pub fn bracket(&self, d: usize) -> (Frac, Frac) {
        let a = Frac::new(self.table.p[d].clone(), self.table.q[d].clone());
        let b = Frac::new(self.table.p[d + 1].clone(), self.table.q[d + 1].clone());
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Enclosure of `‖q α‖` from the bracket at depth `d`.
    pub fn norm_enclosure(&self, q: &BigInt, d: usize) -> DistToInt {
        let (lo, hi) = self.bracket(d);
        let a = Frac::new(q * &lo.num, lo.den);
        let b = Frac::new(q * &hi.num, hi.den);
        dist_to_int(&a, &b)
    }
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

/// One row of [`check_approx_inequalities`].
#[derive(Clone, Debug, Serialize)]
pub struct ApproxRow {
    pub k: usize,
    /// `1/(q_k + q_{k+1}) < ‖q_k α‖`.
    pub lower_ok: bool,
    /// `‖q_k α‖ <= 1/q_{k+1}`.
    pub upper_ok: bool,
    /// `‖q α‖ >= ‖q_k α‖` for every sampled `q < q_{k+1}`.
    pub best_ok: bool,
    pub sampled: usize,
    /// `‖q_k α‖` as an `f64` (may underflow to 0 for huge `q_k`).
    pub norm: f64,
    /// `ln ‖q_k α‖`.
    pub ln_norm: f64,
    /// Bracket depth that certified the row.
    pub depth: usize,
}

impl ApproxRow {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok && self.best_ok
    }
}

enum Verdict {
    Yes,
    No,
    Unknown,
}

fn decide_upper(d: &DistToInt, bound: &Frac) -> Verdict {
    if d.hi <= *bound {
        Verdict::Yes
    } else if d.lo > *bound {
        Verdict::No
    } else {
        Verdict::Unknown
    }
}

fn decide_lower(d: &DistToInt, bound: &Frac) -> Verdict {
    // The enclosure endpoints come from convergents, never from α itself,
    // so equality at an endpoint still gives strict inequality inside.
    if d.lo >= *bound {
        Verdict::Yes
    } else if d.hi <= *bound {
        Verdict::No
    } else {
        Verdict::Unknown
    }
}

/// Certify `1/(q_k+q_{k+1}) < ‖q_kα‖ <= 1/q_{k+1}` and best approximation
/// for each `k` in `rows`, using brackets from `spec.table`.
///
/// `samples` random `q < q_{k+1}` (plus all small ones) are tested against
/// `‖q_k α‖`. A row whose enclosure cannot separate a bound at any
/// available depth raises `PrecisionExhausted`.
pub fn check_approx_inequalities(
    table: &ConvergentTable,
    spec: &IrrationalSpec,
    rows: RangeInclusive<usize>,
    samples: usize,
    seed: u64,
) -> Result<Vec<ApproxRow>> {
    let mut out = Vec::new();
    let deepest = spec.table.last();
    for k in rows {
        if k < 2 || k + 1 > table.last() {
            return Err(Error::InvalidParameter(format!("row {k} outside 2..{}", table.last())));
        }
        if table.q[k] != spec.table.q[k] {
            return Err(Error::InvalidParameter("table and spec disagree".into()));
        }
        let qk = &table.q[k];
        let qn = &table.q[k + 1];
        let upper_bound = Frac::new(BigInt::one(), qn.clone());
        let lower_bound = Frac::new(BigInt::one(), qk + qn);
        let mut row = None;
        for d in (k + 1)..deepest {
            let enc = spec.norm_enclosure(qk, d);
            let lo = decide_lower(&enc, &lower_bound);
            let up = decide_upper(&enc, &upper_bound);
            if matches!(lo, Verdict::Unknown) || matches!(up, Verdict::Unknown) {
                continue;
            }
            row = Some((matches!(lo, Verdict::Yes), matches!(up, Verdict::Yes), enc, d));
            break;
        }
        let (lower_ok, upper_ok, enc, depth) = row.ok_or_else(|| {
            Error::PrecisionExhausted(format!("row {k}: bounds not separated with {} convergents", deepest + 1))
        })?;
        let (best_ok, sampled) = check_best(spec, k, qk, qn, &enc, depth, samples, seed)?;
        out.push(ApproxRow {
            k,
            lower_ok,
            upper_ok,
            best_ok,
            sampled,
            norm: enc.value(),
            ln_norm: 0.5 * (enc.lo.ln_abs() + enc.hi.ln_abs()),
            depth,
        });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn check_best(
    spec: &IrrationalSpec,
    k: usize,
    qk: &BigInt,
    qn: &BigInt,
    enc_k: &DistToInt,
    depth: usize,
    samples: usize,
    seed: u64,
) -> Result<(bool, usize)> {
    let mut qs: Vec<BigInt> = (1u32..=16).map(BigInt::from).filter(|q| q < qn && q != qk).collect();
    let mut rng = stream_rng(seed, k as u64);
    let bits = qn.bits();
    for _ in 0..samples {
        let q = loop {
            let words: Vec<u32> = (0..bits.div_ceil(32)).map(|_| rng.random()).collect();
            let mut x = BigUint::from_slice(&words);
            x >>= (bits.div_ceil(32) * 32 - bits) as usize;
            let x = BigInt::from_biguint(Sign::Plus, x);
            if x >= BigInt::one() && x < *qn && x != *qk {
                break x;
            }
            if *qn <= BigInt::from(2) {
                break BigInt::zero();
            }
        };
        if !q.is_zero() {
            qs.push(q);
        }
    }
    let deepest = spec.table.last();
    for q in &qs {
        let mut decided = false;
        for d in depth..deepest {
            let e = spec.norm_enclosure(q, d);
            let ek = if d == depth { enc_k.clone() } else { spec.norm_enclosure(qk, d) };
            if e.lo > ek.hi {
                decided = true;
                break;
            }
            if e.hi < ek.lo {
                return Ok((false, qs.len()));
            }
        }
        if !decided {
            return Err(Error::PrecisionExhausted(format!("best-approximation sample at row {k} not separated")));
        }
    }
    Ok((true, qs.len()))
}

/// Check `K q_k^γ <= q_{k+1} < K q_k^γ + q_k` for each `k` in `rows`, by
/// comparing integer powers: `γ = a/b`, `K = c/d`.
pub fn check_type_gamma_windows(table: &ConvergentTable, gamma: &Frac, kk: &Frac, rows: RangeInclusive<usize>) -> Vec<(usize, bool)> {
    let a = gamma.num.to_u32().expect("small gamma numerator");
    let b = gamma.den.to_u32().expect("small gamma denominator");
    rows.map(|k| {
        let (q, qn) = (&table.q[k], &table.q[k + 1]);
        let rhs = kk.num.pow(b) * q.pow(a);
        let lo_ok = (&kk.den * qn).pow(b) >= rhs;
        let hi_ok = (&kk.den * (qn - q)).pow(b) < rhs;
        (k, lo_ok && hi_ok)
    })
    .collect()
}

/// Build `α` with `K q_k^γ <= q_{k+1} < K q_k^γ + q_k` for all `k >= 2`.
///
/// The result satisfies `‖qα‖ > 1/((K+2) q^γ)` for every `q >= 1` and
/// `‖q_k α‖ <= 1/(K q_k^γ)`, so its type is exactly `γ`.
pub fn construct_type_gamma(gamma: Frac, k: Frac, depth: usize, precision: u32) -> Result<IrrationalSpec> {
    if gamma <= Frac::int(1) {
        return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")));
    }
    if k < Frac::int(2) {
        return Err(Error::InvalidParameter(format!("K must be at least 2, got {k}")));
    }
    let spec = IrrationalSpec::new(&AlphaSource::Constructed { gamma, k }, precision)?;
    spec.extend(depth)
}

/// A labelled estimate of the type from a finite table.
#[derive(Clone, Debug, Serialize)]
pub struct TypeEstimate {
    /// Least-squares slope of `ln(1/‖q_kα‖)` against `ln q_k`.
    pub gamma_hat: f64,
    /// `min_k ln(1/‖q_kα‖)/ln q_k` over the same rows.
    pub min_ratio: f64,
    /// `(k, ln(1/‖q_kα‖)/ln q_k)` per row.
    pub trend: Vec<(usize, f64)>,
    pub note: &'static str,
}

/// Estimate the type from rows with `q_k >= 2`, using the deepest
/// convergent as a stand-in for `α`.
pub fn estimate_type(table: &ConvergentTable) -> Result<TypeEstimate> {
    let last = table.last();
    if last < 5 {
        return Err(Error::InsufficientData(format!("{} rows, need at least 5", last)));
    }
    let (pd, qd) = (&table.p[last], &table.q[last]);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut trend = Vec::new();
    for k in 2..last {
        if table.q[k] < BigInt::from(2) {
            continue;
        }
        let err = Frac::new((&table.q[k] * pd - &table.p[k] * qd).abs(), qd.clone());
        let x = ln_big(table.q[k].magnitude());
        let y = -err.ln_abs();
        xs.push(x);
        ys.push(y);
        trend.push((k, y / x));
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData("fewer than two usable rows".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let min_ratio = trend.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
    Ok(TypeEstimate {
        gamma_hat: sxy / sxx,
        min_ratio,
        trend,
        note: "estimate from a finite prefix, not a certificate",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf_of(s: &str, k: usize) -> ContinuedFraction {
        cf_expand(&s.parse().unwrap(), k, &ExpandConfig::default()).unwrap()
    }

    #[test]
    fn classical_expansions() {
        assert_eq!(cf_of("golden", 6).to_string(), "[1; 1, 1, 1, 1, 1]");
        assert_eq!(cf_of("sqrt2", 5).to_string(), "[1; 2, 2, 2, 2]");
        assert_eq!(cf_of("sqrt3", 7).to_string(), "[1; 1, 2, 1, 2, 1, 2]");
        assert_eq!(cf_of("e", 10).to_string(), "[2; 1, 2, 1, 1, 4, 1, 1, 6, 1]");
        assert_eq!(cf_of("pi", 6).to_string(), "[3; 7, 15, 1, 292, 1]");
    }

    #[test]
    fn decimal_is_exact_rational() {
        assert_eq!(cf_of("3.14159265358979323846", 4).to_string(), "[3; 7, 15, 1]");
        let short = cf_expand(&"0.5".parse().unwrap(), 4, &ExpandConfig::default());
        assert_eq!(short, Err(Error::RationalInput(2)));
    }

    #[test]
    fn negative_surd() {
        // (1 - √5)/2 = -0.618... = [-1; 2, 1, 1, ...]
        let cf = cf_expand(&AlphaSource::surd(1, -1, 5, 2), 5, &ExpandConfig::default()).unwrap();
        assert_eq!(cf.to_string(), "[-1; 2, 1, 1, 1]");
    }

    #[test]
    fn perfect_square_surd_is_rational() {
        let r = cf_expand(&AlphaSource::surd(0, 1, 4, 3), 5, &ExpandConfig::default());
        assert!(matches!(r, Err(Error::RationalInput(_))));
    }

    #[test]
    fn precision_cap_is_enforced() {
        let cfg = ExpandConfig { precision: 64, cap: 64 };
        let r = cf_expand(&AlphaSource::golden(), 200, &cfg);
        assert!(matches!(r, Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn sqrt2_convergents() {
        let t = convergents(&cf_of("sqrt2", 4), 4).unwrap();
        let pq: Vec<String> = (1..=4).map(|k| format!("{}/{}", t.p[k], t.q[k])).collect();
        assert_eq!(pq, ["1/1", "3/2", "7/5", "17/12"]);
    }

    #[test]
    fn dist_to_int_examples() {
        let f = |x: &str| Frac::parse(x).unwrap();
        let d = dist_to_int(&f("0.3"), &f("0.3"));
        assert_eq!(d.lo, f("0.3"));
        let d = dist_to_int(&f("0.75"), &f("0.75"));
        assert_eq!(d.hi, f("0.25"));
        let d = dist_to_int(&f("2.9"), &f("3.05"));
        assert_eq!(d.lo, f("0"));
        assert_eq!(d.hi, f("0.1"));
        let d = dist_to_int(&f("0.45"), &f("0.55"));
        assert_eq!(d.hi, f("1/2"));
        assert_eq!(d.lo, f("0.45"));
    }

    #[test]
    fn golden_q4_alpha_in_window() {
        let spec = IrrationalSpec::new(&AlphaSource::golden(), 256).unwrap();
        let enc = spec.norm_enclosure(&BigInt::from(3), 10);
        assert!(enc.lo > Frac::parse("1/8").unwrap());
        assert!(enc.hi <= Frac::parse("1/5").unwrap());
    }

    #[test]
    fn constructed_rejects_bad_parameters() {
        assert!(matches!(construct_type_gamma(Frac::int(1), Frac::int(2), 5, 256), Err(Error::InvalidParameter(_))));
        assert!(matches!(construct_type_gamma(Frac::int(2), Frac::int(1), 5, 256), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn constructed_gamma_two() {
        let spec = construct_type_gamma(Frac::int(2), Frac::int(2), 8, 256).unwrap();
        let t = &spec.table;
        let q: Vec<u64> = t.q.iter().take(6).map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(q, [0, 1, 1, 2, 9, 164]);
        for (k, ok) in check_type_gamma_windows(t, &Frac::int(2), &Frac::int(2), 2..=6) {
            assert!(ok, "window at k = {k}");
        }
    }

    #[test]
    fn rational_gamma_construction() {
        let g = Frac::parse("5/2").unwrap();
        let spec = construct_type_gamma(g.clone(), Frac::int(3), 7, 256).unwrap();
        for (k, ok) in check_type_gamma_windows(&spec.table, &g, &Frac::int(3), 2..=6) {
            assert!(ok, "window at k = {k}");
        }
    }

    #[test]
    fn value_is_within_error_bound() {
        let spec = IrrationalSpec::new(&AlphaSource::sqrt2(), 256).unwrap();
        let v = Frac::new(BigInt::from(spec.value.to_biguint()) + (BigInt::one() << 256usize), BigInt::one() << 256usize);
        let d = spec.value_index + 1;
        let (lo, hi) = spec.bracket(d);
        let eps = Frac::new(BigInt::one(), BigInt::one() << 256usize);
        assert!(v.sub(&hi) <= eps && lo.sub(&v) <= eps);
    }

    #[test]
    fn type_estimates() {
        let g = convergents(&cf_of("golden", 20), 20).unwrap();
        assert!((estimate_type(&g).unwrap().gamma_hat - 1.0).abs() < 0.05);
        let spec = construct_type_gamma(Frac::int(3), Frac::int(2), 6, 256).unwrap();
        let t = convergents(&spec.cf, 6).unwrap();
        let est = estimate_type(&t).unwrap();
        assert!((2.8..=3.2).contains(&est.gamma_hat), "{est:?}");
    }
}
