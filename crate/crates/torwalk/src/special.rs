//! Riemann zeta on the real line and the cosine series `Σ cos(kx)/k^s`.

use crate::series::RealSeries;
use std::f64::consts::PI;

/// `B_2, B_4, ..., B_24`.
const BERNOULLI: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// `Σ_{k >= n} k^{-s}` by Euler–Maclaurin, for `n >= 10` and `s > -10`, `s != 1`.
pub fn zeta_tail(s: f64, n: u64) -> f64 {
    let nf = n as f64;
    let mut sum = nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // B_{2i}/(2i)! · s(s+1)...(s+2i-2) · n^{-s-2i+1}
    let mut poch = s;
    let mut fact = 2.0;
    let mut pw = nf.powf(-s - 1.0);
    for (i, b) in BERNOULLI.iter().enumerate() {
        let term = b / fact * poch * pw;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        let k = 2.0 * (i as f64 + 1.0);
        poch *= (s + k - 1.0) * (s + k);
        fact *= (k + 1.0) * (k + 2.0);
        pw /= nf * nf;
    }
    sum
}

/// `ζ(s)` for real `s != 1`.
pub fn zeta(s: f64) -> f64 {
    assert!(s != 1.0, "pole of zeta at 1");
    if s == 0.0 {
        return -0.5;
    }
    if s < 0.0 {
        // ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)
        if (s / 2.0).fract() == 0.0 {
            return 0.0;
        }
        return 2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * libm::tgamma(1.0 - s) * zeta(1.0 - s);
    }
    let n = 20u64;
    let head: f64 = (1..n).map(|k| (k as f64).powf(-s)).sum();
    head + zeta_tail(s, n)
}

/// `C_s(x) - ζ(s) = Σ_{k>=1} (cos(kx) - 1)/k^s` for `1 < s < 3`, with a
/// certified tail no larger than `tol`.
///
/// For `0 < x < 2π`,
/// `C_s(x) = π x^{s-1} / (2Γ(s)cos(πs/2)) + Σ_{j>=0} (-1)^j ζ(s-2j) x^{2j}/(2j)!`,
/// and the terms with `j >= 2` are dominated by `3.3 (2π)^{s-1} (x/2π)^{2j}`.
pub fn cos_series_minus_zeta(s: f64, x: f64, tol: f64) -> RealSeries {
    assert!(s > 1.0 && s < 3.0, "s must lie in (1, 3)");
    let x = reduce_even(x);
    if x == 0.0 {
        return RealSeries::new(0.0, 0, 0.0);
    }
    let singular = PI * x.powf(s - 1.0) / (2.0 * libm::tgamma(s) * (PI * s / 2.0).cos());
    let r = (x / (2.0 * PI)).powi(2);
    let scale = 3.3 * (2.0 * PI).powf(s - 1.0);
    let mut sum = singular;
    let mut pw = 1.0; // x^{2j}/(2j)!
    let mut j = 1u32;
    loop {
        let jj = 2.0 * j as f64;
        pw *= x * x / ((jj - 1.0) * jj);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * zeta(s - jj) * pw;
        j += 1;
        let tail = scale * r.powi(j as i32) / (1.0 - r);
        if j >= 2 && tail <= tol {
            return RealSeries::new(sum, j as u64 - 1, tail);
        }
    }
}

/// Map `x` to `[0, π]` using evenness and `2π`-periodicity.
pub fn reduce_even(x: f64) -> f64 {
    let t = x.abs() % (2.0 * PI);
    if t > PI {
        2.0 * PI - t
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_known_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(-1.0) + 1.0 / 12.0).abs() < 1e-14);
        assert!((zeta(-3.0) - 1.0 / 120.0).abs() < 1e-14);
        assert!((zeta(0.5) + 1.460_354_508_809_586_8).abs() < 1e-13);
        assert_eq!(zeta(-6.0), 0.0);
        // ζ(-7) = 1/240
        assert!((zeta(-7.0) - 1.0 / 240.0).abs() < 1e-14);
        assert!((zeta(-9.0) + 1.0 / 132.0).abs() < 1e-13);
    }

    #[test]
    fn quadratic_law_closed_form() {
        for &x in &[0.1, 1.0, 2.5, PI] {
            let c = cos_series_minus_zeta(2.0, x, 1e-14);
            let want = -PI * x / 2.0 + x * x / 4.0;
            assert!((c.value - want).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn cosine_series_matches_direct_sum() {
        // Direct sum to M with the Abel-summation bound 2(M+1)^{-s}/|2 sin(x/2)|.
        let s = 2.5;
        for &x in &[0.3, 1.7, 3.0] {
            let m = 200_000u64;
            let direct: f64 = (1..=m).map(|k| ((k as f64 * x).cos() - 1.0) / (k as f64).powf(s)).sum::<f64>()
                - zeta_tail(s, m + 1);
            let bound = 2.0 * ((m + 1) as f64).powf(-s) / (2.0 * (x / 2.0).sin()) + 1e-12;
            let c = cos_series_minus_zeta(s, x, 1e-14);
            assert!((c.value - direct).abs() <= bound + c.tail_bound, "x = {x}: {} vs {direct}", c.value);
        }
    }
}
