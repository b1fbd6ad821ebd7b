//! Recovery of the Cobb-Douglas parameters from constructed quantities.

use approx::assert_relative_eq;
use meritscan::quantify::{self, fit_cobb_douglas, make_io_pairs};
use meritscan::{Featurization, NarrativeQuantities};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Quantities with `ln(s/l)` drawn first and `ln(m/l) = ln β + α ln(s/l) + noise`.
fn constructed(n: usize, alpha: f64, beta: f64, sigma: f64, seed: u64) -> Vec<NarrativeQuantities> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma.max(f64::MIN_POSITIVE)).unwrap();
    (0..n)
        .map(|i| {
            let m = rng.random_range(5..400usize);
            let x: f64 = rng.random_range(-8.0..-1.0);
            let e = if sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 };
            let y = beta.ln() + alpha * x + e;
            let l = m as f64 / y.exp();
            NarrativeQuantities {
                id: i.to_string(),
                s: l * x.exp(),
                m_ti: m,
                m_tiv: m,
                l,
            }
        })
        .collect()
}

#[test]
fn exact_data_is_recovered() {
    for (alpha, beta) in [(0.6, 1.3), (0.25, 0.4), (0.9, 2.0)] {
        let q = constructed(300, alpha, beta, 0.0, 5);
        let fit = fit_cobb_douglas(&q, Featurization::Ti).unwrap();
        assert_relative_eq!(fit.alpha_hat, alpha, max_relative = 1e-9);
        assert_relative_eq!(fit.beta_hat, beta, max_relative = 1e-9);
        assert_eq!(fit.excluded, 0);
        for r in fit.residuals() {
            assert!(r.abs() < 1e-9);
        }
    }
}

#[test]
fn rows_without_signal_are_excluded() {
    let mut q = constructed(50, 0.5, 1.0, 0.0, 6);
    q[0].s = 0.0;
    q[1].m_ti = 0;
    let fit = fit_cobb_douglas(&q, Featurization::Ti).unwrap();
    assert_eq!(fit.excluded, 2);
    assert_eq!(fit.ids.len(), 48);
    assert_relative_eq!(fit.alpha_hat, 0.5, max_relative = 1e-9);
}

#[test]
fn confidence_interval_covers_usually() {
    let runs = 60;
    let mut hits = 0;
    for seed in 0..runs {
        let q = constructed(400, 0.7, 1.1, 0.1, 100 + seed);
        let (lo, hi) = fit_cobb_douglas(&q, Featurization::Ti).unwrap().alpha_ci95;
        if lo <= 0.7 && 0.7 <= hi {
            hits += 1;
        }
    }
    assert!(hits >= 52, "{hits}/{runs}");
}

#[test]
fn diagnostics_are_consistent() {
    let q = constructed(120, 0.6, 1.0, 0.2, 9);
    let fit = fit_cobb_douglas(&q, Featurization::Ti).unwrap();
    let lev: f64 = fit.leverage().iter().sum();
    assert_relative_eq!(lev, 2.0, max_relative = 1e-9);
    let res: f64 = fit.residuals().iter().sum();
    assert!(res.abs() < 1e-9);
    let qs = fit.fit.normal_quantiles();
    assert_eq!(qs.len(), 120);
    let r = fit.standardized_residuals();
    for i in 0..qs.len() {
        for j in 0..qs.len() {
            if r[i] < r[j] {
                assert!(qs[i] < qs[j]);
            }
        }
    }
    assert!(fit.fit.cooks_distance().iter().all(|d| *d >= 0.0));
}

#[test]
fn transfer_function_maps_pairs() {
    let q = constructed(80, 0.6, 1.4, 0.0, 2);
    let fit = fit_cobb_douglas(&q, Featurization::Ti).unwrap();
    let tf = fit.transfer_function().unwrap();
    assert_relative_eq!(tf.exponent(), 1.5, max_relative = 1e-9);
    assert!(!tf.is_lipschitz() || tf.alpha() >= 0.5);
    let pairs = make_io_pairs(&q, Featurization::Ti);
    assert_eq!(pairs.pairs.len(), 80);
    for p in &pairs.pairs {
        assert!(p.x > 0.0 && p.x <= 1.0 && p.y > 0.0);
    }
    let (max_slope, bounded) = quantify::lipschitz_bound_check(&tf, 1000).unwrap();
    assert!(bounded);
    assert!(max_slope.is_finite());
}
