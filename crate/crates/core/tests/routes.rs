mod common;

use std::f64::consts::PI;

use ctm_entropy::character::{self, ctm_spectrum, log_partition_blocks, log_partition_theta};
use ctm_entropy::entropy::{self, block_entropy_direct, block_entropy_poisson, f_hat, Method};
use ctm_entropy::qseries::{qproduct_series, HalfInteger, QFactor};
use ctm_entropy::scaling::{self, fit_scaling, geometric_grid};
use ctm_entropy::{ModelPoint, Nome, Truncation};
use num_traits::ToPrimitive;

fn tol() -> Truncation {
    Truncation::default()
}

#[test]
fn f_hat_matches_quadrature() {
    for y in [0.5, 1.0, 2.0, 3.0, 5.0] {
        let oracle = common::f_hat_quadrature(y);
        let got = f_hat(y);
        assert!((got - oracle).abs() < 1e-10, "y={y}: {got} vs {oracle}");
    }
}

#[test]
fn quadrature_oracle_recovers_origin_value() {
    // ∫₀^∞ f = −π²/3, a check on the oracle itself
    let oracle = common::f_hat_quadrature(0.0);
    assert!((oracle + PI * PI / 3.0).abs() < 1e-10, "{oracle}");
}

#[test]
fn block_entropy_equals_log_derivative_form() {
    for (a, b) in [(2, 4), (2, 6), (4, 6), (3, 8), (1, 5)] {
        for eps in [0.3f64, 0.7, 1.5] {
            let x = (-eps).exp();
            let oracle = common::block_entropy_from_derivative(a, b, x, 400);
            let direct = block_entropy_direct(a, b, eps, tol()).unwrap().value;
            assert!(
                (direct - oracle).abs() < 1e-10,
                "({a},{b}) eps={eps}: {direct} vs {oracle}"
            );
        }
    }
}

#[test]
fn direct_block_matches_bilateral_brute_force() {
    let oracle = common::bilateral_block_sum(2, 4, 1.0, 1000);
    let got = block_entropy_direct(2, 4, 1.0, tol()).unwrap().value;
    assert!((got - oracle).abs() < 1e-13);
}

#[test]
fn direct_and_poisson_on_both_halves() {
    for (a, b) in [(2, 4), (2, 6), (3, 6), (2, 12), (6, 12)] {
        for eps in [0.05, 0.15, 0.3, 0.6, 1.2, 2.5] {
            let d = block_entropy_direct(a, b, eps, tol()).unwrap();
            let p = block_entropy_poisson(a, b, eps, tol()).unwrap();
            assert!((d.value - p.value).abs() < 1e-9, "({a},{b}) eps={eps}");
        }
    }
}

#[test]
fn partition_routes_agree_on_grid() {
    for kappa in 1..=5 {
        for i in 0..=kappa {
            for k in 0..=17 {
                let x = 0.1 + 0.05 * k as f64;
                let p = ModelPoint::new(kappa, i, Nome::from_x(x).unwrap()).unwrap();
                let theta = log_partition_theta(&p, tol()).unwrap();
                let blocks = log_partition_blocks(&p, tol()).unwrap();
                assert!((theta - blocks).abs() < 1e-11, "kappa={kappa} i={i} x={x}");
                let mirror = log_partition_theta(&p.mirrored(), tol()).unwrap();
                assert!((theta - mirror).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn spectrum_partial_sums_rise_to_partition_function() {
    let nome = Nome::from_x(0.5).unwrap();
    for kappa in 1..=3 {
        for i in 0..=kappa {
            let p = ModelPoint::new(kappa, i, nome).unwrap();
            let z = character::partition_theta(&p, tol()).unwrap();
            let table = ctm_spectrum(kappa, i, 200).unwrap();
            let mut partial = 0.0;
            let mut last = 0.0;
            for (n, d) in table.degeneracies().iter().enumerate() {
                partial += d.to_f64().unwrap() * 0.25f64.powi(n as i32);
                assert!(partial >= last && partial <= z * (1.0 + 1e-13));
                last = partial;
            }
            assert!((partial - z).abs() < 1e-12 * z);
        }
    }
}

#[test]
fn partition_series_starts_at_one() {
    // the theta quotient carries no x^i prefactor: constant term 1
    for kappa in 1..=6 {
        for i in 0..=kappa {
            let t = ctm_spectrum(kappa, i, 3).unwrap();
            assert_eq!(t.degeneracy(0).unwrap().to_u32(), Some(1));
            let p = ModelPoint::from_epsilon(kappa, i, 30.0).unwrap();
            let log_z = log_partition_theta(&p, tol()).unwrap();
            assert!(log_z.abs() < 1e-24);
        }
    }
}

#[test]
fn kappa_one_series_is_odd_partitions() {
    let series = qproduct_series(&[QFactor::new(2, 4, HalfInteger::MINUS_ONE)], 60).unwrap();
    for n in 0..=30u32 {
        assert_eq!(
            series[2 * n as usize].to_u64().unwrap(),
            common::odd_part_partitions(n)
        );
    }
}

#[test]
fn four_routes_agree_within_error_estimates() {
    for kappa in 1..=4 {
        for i in 0..=kappa {
            for eps in [0.15, 0.2, 0.3, 0.5, 1.0, 2.0] {
                let p = ModelPoint::from_epsilon(kappa, i, eps).unwrap();
                let x = p.nome().x();
                let mut results = vec![
                    entropy::entropy(&p, Method::Direct, tol()).unwrap(),
                    entropy::entropy(&p, Method::Poisson, tol()).unwrap(),
                ];
                if x <= 0.85 {
                    results.push(entropy::entropy(&p, Method::Spectrum, tol()).unwrap());
                }
                for r in &results {
                    assert!(r.value >= 0.0);
                }
                for a in &results {
                    for b in &results {
                        let allowed = a.est_error + b.est_error + 1e-13;
                        assert!(
                            (a.value - b.value).abs() <= allowed,
                            "kappa={kappa} i={i} eps={eps} {} vs {}: {} > {allowed}",
                            a.method,
                            b.method,
                            (a.value - b.value).abs()
                        );
                    }
                }
            }
            let mut last = f64::INFINITY;
            for eps in [0.2, 0.1, 0.05, 0.02] {
                let p = ModelPoint::from_epsilon(kappa, i, eps).unwrap();
                let exact = entropy::entropy(&p, Method::Poisson, tol()).unwrap().value;
                let gap = (entropy::entropy_asymptotic(&p) - exact).abs();
                // monotone until both sit at the rounding floor
                assert!(gap <= last || gap < 1e-12, "kappa={kappa} i={i} eps={eps}");
                last = gap;
            }
        }
    }
}

#[test]
fn asymptotic_error_estimate_is_honest() {
    for eps in [0.3, 0.8, 1.5] {
        let p = ModelPoint::from_epsilon(3, 1, eps).unwrap();
        let asym = entropy::entropy(&p, Method::Asymptotic, tol()).unwrap();
        let exact = entropy::entropy(&p, Method::Direct, tol()).unwrap();
        assert!((asym.value - exact.value).abs() <= asym.est_error + 1e-12);
    }
}

#[test]
fn central_charge_fit_from_entropy() {
    let grid = geometric_grid(0.04, 0.2, 5).unwrap();
    for (kappa, target) in [(1u32, 1.0), (3, 1.8)] {
        let samples: Vec<(f64, f64)> = grid
            .iter()
            .map(|&e| {
                let p = ModelPoint::from_epsilon(kappa, 0, e).unwrap();
                (
                    e,
                    entropy::entropy(&p, Method::Poisson, tol()).unwrap().value,
                )
            })
            .collect();
        let fit = fit_scaling(&samples).unwrap();
        assert!(
            (fit.c_estimate - target).abs() < 1e-3,
            "kappa={kappa}: {}",
            fit.c_estimate
        );
    }
}

#[test]
fn slope_universal_and_intercept_minus_ln_g_constant() {
    let grid = geometric_grid(0.02, 0.2, 8).unwrap();
    for kappa in 2..=4 {
        let mut slopes = Vec::new();
        let mut shifted = Vec::new();
        for i in 0..=kappa {
            let samples: Vec<(f64, f64)> = grid
                .iter()
                .map(|&e| {
                    let p = ModelPoint::from_epsilon(kappa, i, e).unwrap();
                    (
                        e,
                        entropy::entropy(&p, Method::Poisson, tol()).unwrap().value,
                    )
                })
                .collect();
            let fit = fit_scaling(&samples).unwrap();
            slopes.push(fit.c_estimate);
            shifted.push(fit.intercept - scaling::boundary_g(kappa, i).unwrap().ln_g);
        }
        for w in slopes.windows(2) {
            assert!(
                (w[0] - w[1]).abs() < 1e-6,
                "kappa={kappa} slopes {slopes:?}"
            );
        }
        for w in shifted.windows(2) {
            assert!(
                (w[0] - w[1]).abs() < 1e-6,
                "kappa={kappa} intercepts {shifted:?}"
            );
        }
    }
}

#[test]
fn residual_constant_is_label_independent() {
    let eps = [0.05, 0.03, 0.02];
    for kappa in 1..=4 {
        let values: Vec<f64> = (0..=kappa)
            .map(|i| {
                scaling::residual_constant(kappa, i, &eps, scaling::XiMode::Exact, tol()).unwrap()
            })
            .collect();
        for v in &values {
            assert!((v - values[0]).abs() < 1e-4);
        }
    }
}

#[test]
fn boundary_entropy_extraction() {
    let eps = [0.05, 0.03, 0.02];
    for kappa in 2..=4 {
        for i in 0..=kappa {
            let extracted = scaling::extract_boundary_entropy(kappa, i, &eps, tol()).unwrap();
            let mirrored =
                scaling::extract_boundary_entropy(kappa, kappa - i, &eps, tol()).unwrap();
            let expected = scaling::boundary_g(kappa, i).unwrap().ln_g;
            assert!((extracted - expected).abs() < 1e-3);
            assert!((extracted - mirrored).abs() < 1e-12);
        }
    }
}

#[test]
fn exact_correlation_length_approaches_half_pi_squared() {
    let mut last = f64::INFINITY;
    for eps in [0.2, 0.1, 0.05, 0.02, 0.01] {
        let scaled = eps * scaling::correlation_length(eps, scaling::XiMode::Exact).unwrap();
        let gap = (scaled - PI * PI / 2.0).abs();
        assert!(gap < last);
        last = gap;
    }
    assert!(last < 0.02);
}
