//! Independent oracles for the exact computations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torwalk::bounds::{lemma22_block_sum, second_moment_closed_form, second_moment_limit};
use torwalk::diophantine::{AlphaSource, Frac, IrrationalSpec};
use torwalk::stepdist::StepDistribution;
use torwalk::walk::{discrepancy, phase, EmpiricalMeasure};
use torwalk::wasserstein::{wasserstein_p, Method};

const UNIT: f64 = 1.0 / 18_446_744_073_709_551_616.0;

/// Atoms as `(x, weight)` in `[0, 1)`, weights summing to 1.
fn atoms(mu: &EmpiricalMeasure) -> Vec<(f64, f64)> {
    mu.weighted().collect()
}

/// `sup |μ(I) - |I||` over arcs with endpoints at atoms, each end open or closed.
fn brute_discrepancy(mu: &EmpiricalMeasure) -> f64 {
    let a = atoms(mu);
    let k = a.len();
    let mut best = 0.0f64;
    for i in 0..k {
        best = best.max(a[i].1);
        for j in 0..k {
            // Atoms met walking forward from i to j, both ends included.
            let mut mass = 0.0;
            let mut t = i;
            loop {
                mass += a[t].1;
                if t == j {
                    break;
                }
                t = (t + 1) % k;
            }
            let len = if j == i { 0.0 } else { (a[j].0 - a[i].0).rem_euclid(1.0) };
            let closed = mass;
            let half_open = mass - a[j].1;
            let open = if i == j { 0.0 } else { mass - a[i].1 - a[j].1 };
            for m in [closed, half_open, open] {
                best = best.max((m - len).abs());
            }
            if i == j {
                // The whole circle minus the atom.
                best = best.max(((1.0 - a[i].1) - 1.0).abs());
            }
        }
    }
    best
}

/// `∫_0^1 |F(x) - y|^p dx` for `F(x) = μ([0, x)) - x`, piece by piece.
fn lp_objective(a: &[(f64, f64)], y: f64, p: f64) -> f64 {
    let g = |u: f64| u.signum() * u.abs().powf(p + 1.0) / (p + 1.0);
    let mut total = 0.0;
    let mut mass = 0.0;
    let mut left = 0.0;
    for &(x, w) in a.iter().chain(std::iter::once(&(1.0, 0.0))) {
        // On [left, x): F = mass - t, so F - y runs from mass - left - y down to mass - x - y.
        if x > left {
            let (u0, u1) = (mass - left - y, mass - x - y);
            total += g(u0) - g(u1);
        }
        mass += w;
        left = x;
    }
    total
}

fn range_of_f(a: &[(f64, f64)]) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut mass = 0.0;
    for &(x, w) in a {
        lo = lo.min(mass - x);
        mass += w;
        hi = hi.max(mass - x);
    }
    (lo.min(mass - 1.0), hi)
}

/// `min_y (∫|F - y|^p)^{1/p}` by golden-section search on the convex objective.
fn brute_wp(mu: &EmpiricalMeasure, p: f64) -> f64 {
    let a = atoms(mu);
    let (mut lo, mut hi) = range_of_f(&a);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..300 {
        let m1 = hi - r * (hi - lo);
        let m2 = lo + r * (hi - lo);
        if lp_objective(&a, m1, p) <= lp_objective(&a, m2, p) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    lp_objective(&a, 0.5 * (lo + hi), p).powf(1.0 / p)
}

fn random_measure(rng: &mut ChaCha8Rng, max_atoms: usize) -> EmpiricalMeasure {
    let k = rng.random_range(1..=max_atoms);
    let pairs: Vec<(u64, u64)> = (0..k).map(|_| (rng.random(), rng.random_range(1..=4))).collect();
    EmpiricalMeasure::from_weighted(&pairs)
}

#[test]
fn discrepancy_matches_arc_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let mu = random_measure(&mut rng, 25);
        let fast = discrepancy(&mu);
        let slow = brute_discrepancy(&mu);
        assert!((fast - slow).abs() < 1e-12, "fast {fast} slow {slow}");
    }
}

#[test]
fn discrepancy_of_grid() {
    let n = 16u64;
    let xs: Vec<u64> = (0..n).map(|i| i << 60).collect();
    let mu = EmpiricalMeasure::from_positions(xs);
    assert!((discrepancy(&mu) - 1.0 / n as f64).abs() < 1e-15);
    assert!((brute_discrepancy(&mu) - 1.0 / n as f64).abs() < 1e-15);
}

#[test]
fn wasserstein_matches_direct_minimisation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let mu = random_measure(&mut rng, 30);
        for p in [1.0, 1.5, 2.0, 3.0] {
            let exact = wasserstein_p(&mu, p, 1e-12).unwrap().value;
            let brute = brute_wp(&mu, p);
            assert!((exact - brute).abs() < 1e-9, "p={p}: {exact} vs {brute}");
        }
    }
}

#[test]
fn closed_forms_used_for_p_one_and_two() {
    let mu = EmpiricalMeasure::from_f64(&[0.1, 0.4, 0.45]);
    assert_eq!(wasserstein_p(&mu, 1.0, 1e-12).unwrap().method, Method::ClosedForm);
    assert_eq!(wasserstein_p(&mu, 2.0, 1e-12).unwrap().method, Method::ClosedForm);
    assert_eq!(wasserstein_p(&mu, 3.0, 1e-12).unwrap().method, Method::ConvexSearch);
}

#[test]
fn point_mass_distances() {
    // F(x) = 1 - x on (0, 1): W_p = min_y ‖1 - x - y‖_p = (2^{-p}/(p+1))^{1/p}.
    let mu = EmpiricalMeasure::from_positions(vec![0]);
    for p in [1.0, 2.0, 2.5, 4.0] {
        let expected = (0.5f64.powf(p) / (p + 1.0)).powf(1.0 / p);
        assert!((wasserstein_p(&mu, p, 1e-13).unwrap().value - expected).abs() < 1e-10);
    }
    assert!((wasserstein_p(&mu, 1.0, 1e-13).unwrap().value - 0.25).abs() < 1e-15);
    assert!((wasserstein_p(&mu, 2.0, 1e-13).unwrap().value - (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
}

/// `E|(1/n) Σ e^{-2πi m S_j α}|²` by enumerating every path.
fn enumerate_second_moment(dist: &StepDistribution, alpha: &IrrationalSpec, m: i64, n: usize) -> f64 {
    let support = dist.support().unwrap();
    let k = support.len();
    let mut total = 0.0;
    for code in 0..k.pow(n as u32) {
        let (mut c, mut s, mut w) = (code, 0i128, 1.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let i = c % k;
            c /= k;
            s += support[i] as i128;
            w *= dist.pmf(support[i]);
            acc += phase(alpha.frac_mul(m as i128 * s).top64(), 1);
        }
        total += w * (acc / n as f64).norm_sqr();
    }
    total
}

#[test]
fn second_moment_rademacher_three_steps() {
    let alpha = IrrationalSpec::new(&AlphaSource::golden(), 128).unwrap();
    let dist = StepDistribution::rademacher();
    let closed = second_moment_closed_form(&dist, &alpha, 1, 3).unwrap();
    assert!((closed - enumerate_second_moment(&dist, &alpha, 1, 3)).abs() < 1e-12);
}

#[test]
fn second_moment_three_point_law() {
    let third = Frac::parse("1/3").unwrap();
    let dist = StepDistribution::finite(&[(-1, third.clone()), (0, third.clone()), (3, third)]).unwrap();
    let alpha = IrrationalSpec::new(&AlphaSource::sqrt2(), 128).unwrap();
    for n in 1..=5 {
        for m in [1, -2, 5] {
            let closed = second_moment_closed_form(&dist, &alpha, m, n as u64).unwrap();
            let exact = enumerate_second_moment(&dist, &alpha, m, n);
            assert!((closed - exact).abs() < 1e-12, "n={n} m={m}: {closed} vs {exact}");
        }
    }
}

#[test]
fn second_moment_single_step_is_one() {
    let alpha = IrrationalSpec::new(&AlphaSource::sqrt3(), 128).unwrap();
    for dist in [StepDistribution::rademacher(), StepDistribution::paper_example(), StepDistribution::zeta(2.5).unwrap()] {
        for m in [1, 2, -7] {
            assert!((second_moment_closed_form(&dist, &alpha, m, 1).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn second_moment_approaches_limit() {
    let alpha = IrrationalSpec::new(&AlphaSource::golden(), 128).unwrap();
    let dist = StepDistribution::drift(Frac::parse("2/3").unwrap()).unwrap();
    let limit = second_moment_limit(&dist, &alpha, 1).unwrap();
    let n = 1_000_000u64;
    let scaled = n as f64 * second_moment_closed_form(&dist, &alpha, 1, n).unwrap();
    assert!((scaled - limit).abs() < 1e-4 * limit.max(1.0));
}

#[test]
fn block_sums_match_direct_enumeration() {
    let alpha = IrrationalSpec::new(&AlphaSource::golden(), 256).unwrap();
    for k in 3..12 {
        let b = lemma22_block_sum(&alpha, 2.0, 1.0, k).unwrap();
        let direct: f64 = (b.q_k..b.q_next).map(|m| 1.0 / ((m as f64).powi(2) * alpha.norm_mul(m as i128))).sum();
        assert!((b.exact - direct).abs() <= 1e-12 * direct, "k={k}");
        assert!(b.exact <= b.explicit);
    }
    let root2 = IrrationalSpec::new(&AlphaSource::sqrt2(), 256).unwrap();
    let b = lemma22_block_sum(&root2, 2.0, 2.0, 4).unwrap();
    assert!(b.ratio.is_finite() && b.ratio > 0.0);
}

#[test]
fn atoms_are_exact_on_the_grid() {
    let mu = EmpiricalMeasure::from_positions(vec![1 << 63]);
    assert_eq!(mu.atom_f64(0), 0.5);
    assert_eq!(UNIT * (1u64 << 63) as f64, 0.5);
}

#[test]
fn kronecker_discrepancy_decreases() {
    use torwalk::walk::simulate;
    let alpha = IrrationalSpec::new(&AlphaSource::golden(), 256).unwrap();
    let path = simulate(&StepDistribution::constant(1), &alpha, 100_000, 0).unwrap();
    let mut last = f64::INFINITY;
    for n in [100usize, 1000, 10_000, 100_000] {
        let xs: Vec<u64> = (1..=n).map(|j| path.point(j, 256).value.top64()).collect();
        let d = discrepancy(&EmpiricalMeasure::from_positions(xs));
        assert!(d < last, "n={n}");
        last = d;
    }
}

#[test]
fn shifted_grid_discrepancy() {
    // Discrepancy over arcs is rotation invariant, so the shifted grid matches the grid.
    for n in [3u64, 7, 16] {
        let xs: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();
        let mu = EmpiricalMeasure::from_f64(&xs);
        assert!((discrepancy(&mu) - 1.0 / n as f64).abs() < 1e-12);
        assert!((brute_discrepancy(&mu) - 1.0 / n as f64).abs() < 1e-12);
    }
}
