//! Step laws: characteristic functions against direct sums, samplers against pmfs.

use std::f64::consts::PI;
use torwalk::rng::stream_rng;
use torwalk::stepdist::{check_holder_lower, check_holder_upper, linspace, StepDistribution, CHAR_FN_TOL};

/// `Σ_{1<=m<=M} 2 w(m) cos(m x)` with tail `Σ_{m>M} 2 w(m)` bounded by an integral.
fn symmetric_direct(weight: impl Fn(f64) -> f64, x: f64, m_max: u64) -> f64 {
    (1..=m_max).rev().map(|m| 2.0 * weight(m as f64) * (m as f64 * x).cos()).sum()
}

#[test]
fn heavy_tail_char_fn_closed_form() {
    let d = StepDistribution::paper_example();
    let m_max = 2_000_000;
    let tail = 2.0 * 3.0 / (PI * PI * m_max as f64);
    for x in linspace(0.0, 2.0 * PI, 40) {
        let direct = symmetric_direct(|m| 3.0 / (PI * PI * m * m), x, m_max);
        let closed = d.char_fn(x, CHAR_FN_TOL).unwrap().value;
        assert!((closed.re - direct).abs() <= tail + 1e-12, "x={x}: {} vs {direct}", closed.re);
        assert_eq!(closed.im, 0.0);
        let poly = 1.0 - 3.0 * x / PI + 1.5 * x * x / (PI * PI);
        assert!((closed.re - poly).abs() < 1e-12);
    }
}

#[test]
fn zeta_two_is_the_heavy_tail_law() {
    let z = StepDistribution::zeta(2.0).unwrap();
    let h = StepDistribution::paper_example();
    for x in linspace(0.01, 6.0, 25) {
        let a = z.char_fn(x, 1e-12).unwrap();
        let b = h.char_fn(x, 1e-12).unwrap();
        assert!((a.value - b.value).norm() <= a.tail_bound + 1e-11, "x={x}");
    }
    for m in [1, 2, -5, 40] {
        assert!((z.pmf(m) - h.pmf(m)).abs() < 1e-15);
    }
}

#[test]
fn zeta_char_fn_against_direct_sum() {
    let s: f64 = 2.5;
    let d = StepDistribution::zeta(s).unwrap();
    let zeta_s: f64 = (1..5_000_000u64).map(|m| (m as f64).powf(-s)).sum::<f64>() + (5_000_000f64).powf(1.0 - s) / (s - 1.0);
    let m_max = 200_000u64;
    let tail = 2.0 * (m_max as f64).powf(1.0 - s) / ((s - 1.0) * 2.0 * zeta_s);
    for x in [0.1, 0.5, 1.0, 2.0, 3.0] {
        let direct = symmetric_direct(|m| m.powf(-s) / (2.0 * zeta_s), x, m_max);
        let v = d.char_fn(x, 1e-12).unwrap();
        assert!((v.value.re - direct).abs() <= tail + v.tail_bound + 1e-9, "x={x}");
    }
}

#[test]
fn finite_char_fn_is_a_direct_sum() {
    let d: StepDistribution = "finite:-2=1/4,1=1/2,5=1/4".parse().unwrap();
    for x in linspace(-4.0, 4.0, 33) {
        let direct = 0.25 * num_complex::Complex64::new(0.0, -2.0 * x).exp()
            + 0.5 * num_complex::Complex64::new(0.0, x).exp()
            + 0.25 * num_complex::Complex64::new(0.0, 5.0 * x).exp();
        assert!((d.phi(x) - direct).norm() < 1e-14);
        let omp = d.one_minus_char_fn(x, 1e-12).unwrap().value;
        assert!((omp - (1.0 - direct)).norm() < 1e-14);
    }
}

#[test]
fn sampler_matches_pmf() {
    let mut rng = stream_rng(99, 0);
    let n = 200_000;
    let d: StepDistribution = "drift:2/3".parse().unwrap();
    let ones = (0..n).filter(|_| d.sample(&mut rng).unwrap() == 1).count() as f64 / n as f64;
    let se = (2.0 / 9.0 / n as f64).sqrt();
    assert!((ones - 2.0 / 3.0).abs() < 5.0 * se);

    let h = StepDistribution::paper_example();
    let mut counts = [0usize; 4];
    for _ in 0..n {
        let x = h.sample(&mut rng).unwrap();
        assert_ne!(x, 0);
        if x.unsigned_abs() <= 3 {
            counts[x.unsigned_abs() as usize] += 1;
        }
    }
    for (m, &c) in counts.iter().enumerate().skip(1) {
        let p = 2.0 * h.pmf(m as i64);
        let freq = c as f64 / n as f64;
        assert!((freq - p).abs() < 5.0 * (p * (1.0 - p) / n as f64).sqrt(), "|X| = {m}");
    }
}

#[test]
fn holder_exponents() {
    // 1 - cos x >= (2/π²) x² on [0, π].
    let r = StepDistribution::rademacher();
    assert!(check_holder_lower(&r, 2.0, 2.0 / (PI * PI) * (1.0 - 1e-9), PI, 2000).unwrap().passed);
    assert!(!check_holder_lower(&r, 2.0, 0.3, PI, 2000).unwrap().passed);
    assert!(check_holder_upper(&r, 2.0, 0.5, &linspace(-PI, PI, 2000)).unwrap().passed);
    // 3x/π - 3x²/(2π²) >= (3/(2π)) x on [0, π].
    let h = StepDistribution::paper_example();
    assert!(check_holder_lower(&h, 1.0, 1.5 / PI * (1.0 - 1e-9), PI, 2000).unwrap().passed);
    assert!(check_holder_upper(&h, 1.0, 3.0 / PI, &linspace(0.0, PI, 2000)).unwrap().passed);
}

#[test]
fn char_fn_modulus_at_most_one() {
    for spec in ["rademacher", "drift:1/5", "paper-example", "zeta:1.5", "finite:0=1/3,7=2/3"] {
        let d: StepDistribution = spec.parse().unwrap();
        for x in linspace(-7.0, 7.0, 101) {
            let v = d.char_fn(x, 1e-10).unwrap();
            assert!(v.value.norm() <= 1.0 + v.tail_bound + 1e-12, "{spec} at {x}");
        }
    }
}

#[test]
fn lattice_span() {
    let d: StepDistribution = "finite:2=1/2,-4=1/2".parse().unwrap();
    assert_eq!(d.gcd_support().unwrap(), 2);
    assert_eq!(StepDistribution::paper_example().gcd_support().unwrap(), 1);
    assert!(StepDistribution::constant(0).gcd_support().is_err());
}
