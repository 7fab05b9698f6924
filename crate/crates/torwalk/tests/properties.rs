//! Property tests for invariants that hold for every input.

use num_bigint::BigInt;
use proptest::prelude::*;
use torwalk::bounds::{g_eta, limit_constant, second_moment_closed_form};
use torwalk::diophantine::{cf_expand, convergents, AlphaSource, ExpandConfig, Frac, IrrationalSpec};
use torwalk::harness::{fit_rate, FitModel};
use torwalk::stepdist::StepDistribution;
use torwalk::walk::{discrepancy, empirical_fourier, EmpiricalMeasure};
use torwalk::wasserstein::{kantorovich_exp_lower, wasserstein_2_fourier, wasserstein_p, Antiderivative};

fn measure() -> impl Strategy<Value = EmpiricalMeasure> {
    prop::collection::vec((any::<u64>(), 1u64..5), 1..60).prop_map(|v| EmpiricalMeasure::from_weighted(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sandwich(mu in measure()) {
        let w1 = wasserstein_p(&mu, 1.0, 1e-12).unwrap().value;
        let w2 = wasserstein_p(&mu, 2.0, 1e-12).unwrap().value;
        let slack = 1e-12;
        prop_assert!(kantorovich_exp_lower(&mu) <= w1 + slack);
        prop_assert!(w1 <= w2 + slack);
        prop_assert!(w2 <= 0.5 + slack);
        prop_assert!(w1 <= discrepancy(&mu) + slack);
    }

    #[test]
    fn wp_nondecreasing_in_p(mu in measure()) {
        let ps = [1.0, 1.25, 2.0, 3.0, 5.0];
        let w: Vec<f64> = ps.iter().map(|&p| wasserstein_p(&mu, p, 1e-12).unwrap().value).collect();
        for pair in w.windows(2) {
            prop_assert!(pair[0] <= pair[1] + 1e-9);
        }
    }

    #[test]
    fn wasserstein_is_rotation_invariant(mu in measure(), shift in any::<u64>()) {
        let pairs: Vec<(u64, u64)> = mu.atoms().iter().zip(mu.multiplicities()).map(|(&x, &c)| (x.wrapping_add(shift), c)).collect();
        let nu = EmpiricalMeasure::from_weighted(&pairs);
        for p in [1.0, 2.0, 3.0] {
            let a = wasserstein_p(&mu, p, 1e-12).unwrap().value;
            let b = wasserstein_p(&nu, p, 1e-12).unwrap().value;
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn fourier_w2_within_tail(mu in measure(), m in 50u64..2000) {
        let exact = wasserstein_p(&mu, 2.0, 1e-12).unwrap().value.powi(2);
        let s = wasserstein_2_fourier(&mu, m);
        prop_assert!(s.value <= exact + 1e-12);
        prop_assert!(exact - s.value <= s.tail_bound + 1e-12);
    }

    #[test]
    fn antiderivative_integral_matches_first_moment(mu in measure()) {
        let f = Antiderivative::new(&mu);
        let first: f64 = mu.weighted().map(|(x, w)| x * w).sum();
        prop_assert!((f.integral() - (0.5 - first)).abs() < 1e-12);
        prop_assert!(f.end_value().abs() < 1e-12);
        prop_assert!((discrepancy(&mu) - (f.max() - f.min())).abs() < 1e-12);
    }

    #[test]
    fn fourier_coefficients_bounded(mu in measure(), m in (1i64..50).prop_union(-50i64..0)) {
        prop_assert!(empirical_fourier(&mu, m).norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn g_eta_identity(eta in -1.0f64..2.5, j in 1i32..12) {
        let eps = 4f64.powi(-j);
        let tol = 1e-9;
        let lhs = g_eta(eta, eps / 4.0, tol).unwrap().value;
        let rhs = 2f64.powf(eta) * ((-eps).exp() + g_eta(eta, eps, tol).unwrap().value);
        // Truncation is absolute; summation rounding scales with the value.
        prop_assert!((lhs - rhs).abs() <= 2.0 * tol * 2f64.powf(eta).max(1.0) + 1e-14 * lhs.abs());
    }

    #[test]
    fn power_fit_recovers_exponent(b in -2.0f64..0.0, a in -3.0f64..3.0) {
        let pts: Vec<(f64, f64)> = (4..14).map(|k| {
            let n = 2f64.powi(k);
            (n, a.exp() * n.powf(b))
        }).collect();
        let fit = fit_rate(&pts, FitModel::Power).unwrap();
        prop_assert!((fit.exponent - b).abs() < 1e-9);
        prop_assert!((fit.intercept - a).abs() < 1e-8);
    }

    #[test]
    fn power_log_fit_recovers_theta(b in -1.0f64..-0.2, theta in -1.0f64..1.0) {
        let pts: Vec<(f64, f64)> = (6..=20).map(|k| {
            let n = 2f64.powi(k);
            (n, n.powf(b) * n.ln().powf(theta))
        }).collect();
        let fit = fit_rate(&pts, FitModel::PowerLog(None)).unwrap();
        prop_assert!((fit.exponent - b).abs() < 1e-6);
        prop_assert!((fit.theta.unwrap() - theta).abs() < 1e-6);
    }

    #[test]
    fn second_moment_in_unit_interval(m in 1i64..20, n in 1u64..5000, p in 1u32..9) {
        let dist = StepDistribution::drift(Frac::new(BigInt::from(p), BigInt::from(10))).unwrap();
        let alpha = IrrationalSpec::new(&AlphaSource::sqrt2(), 128).unwrap();
        let v = second_moment_closed_form(&dist, &alpha, m, n).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
    }

    #[test]
    fn surd_convergents_satisfy_invariants(v in 1i64..8, w in 2u64..50, t in 1i64..6) {
        prop_assume!((w as f64).sqrt().fract() != 0.0);
        let src = AlphaSource::surd(0, v, w, t);
        let cf = cf_expand(&src, 20, &ExpandConfig::default()).unwrap();
        let table = convergents(&cf, 19).unwrap();
        prop_assert!(table.verify(&cf).is_ok());
        for k in 1..=table.last() {
            let expected = BigInt::from(if k % 2 == 0 { 1 } else { -1 });
            prop_assert_eq!(table.determinant(k), expected);
        }
        // More precision never changes emitted digits.
        let finer = cf_expand(&src, 20, &ExpandConfig::with_precision(1024)).unwrap();
        prop_assert_eq!(cf.digits, finer.digits);
    }
}

#[test]
fn limit_constant_partial_sums_increase() {
    let dist = StepDistribution::drift(Frac::parse("2/3").unwrap()).unwrap();
    let alpha = IrrationalSpec::new(&AlphaSource::golden(), 128).unwrap();
    let mut last = 0.0;
    for m in [10u64, 100, 1000, 10_000] {
        let s = limit_constant(&dist, &alpha, m, 1.0, 0.3).unwrap();
        assert!(s.value > last);
        assert!(s.tail_bound.is_finite() && s.tail_bound > 0.0);
        last = s.value;
    }
    let fine = limit_constant(&dist, &alpha, 100_000, 1.0, 0.3).unwrap();
    let coarse = limit_constant(&dist, &alpha, 1000, 1.0, 0.3).unwrap();
    assert!(fine.value <= coarse.value + coarse.tail_bound);
}

#[test]
fn g_eta_minus_one_is_dominated() {
    for j in 0..30 {
        assert!(g_eta(-1.0, 2f64.powi(-j), 1e-12).unwrap().value <= 1.0);
    }
}
