//! Independent oracles used by the integration and acceptance tests. Nothing
//! here calls into the library's evaluation paths.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `f(t) = ln(1 − e^(−t)) + t/(1 − e^t)`, written out again for the oracle.
pub fn f_plain(t: f64) -> f64 {
    (-(-t).exp_m1()).ln() - t / t.exp_m1()
}

/// Tanh-sinh quadrature of `g` over `[a, b]`; tolerates integrable endpoint
/// singularities at `a`.
pub fn tanh_sinh(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let width = b - a;
    let estimate = |h: f64| -> f64 {
        let mut sum = 0.0;
        let kmax = (4.5 / h) as i64;
        for k in -kmax..=kmax {
            let t = k as f64 * h;
            let s = 0.5 * PI * t.sinh();
            let weight = 0.5 * PI * t.cosh() / (s.cosh() * s.cosh());
            if weight == 0.0 || !weight.is_finite() {
                continue;
            }
            let offset = width / (1.0 + (-2.0 * s).exp());
            if offset <= 0.0 || offset >= width {
                continue;
            }
            sum += weight * g(a + offset);
        }
        0.5 * width * h * sum
    };
    let mut h = 0.5;
    let mut previous = estimate(h);
    for _ in 0..8 {
        h *= 0.5;
        let current = estimate(h);
        if (current - previous).abs() < 1e-15 * current.abs().max(1.0) {
            return current;
        }
        previous = current;
    }
    previous
}

/// `∫₀^∞ f(t) cos(yt) dt`, integrated on unit cells up to `t = 45`.
pub fn f_hat_quadrature(y: f64) -> f64 {
    let g = |t: f64| f_plain(t) * (y * t).cos();
    (0..45)
        .map(|k| tanh_sinh(&g, k as f64, k as f64 + 1.0))
        .sum()
}

/// Number of partitions of `n` into odd parts, by explicit enumeration.
pub fn odd_part_partitions(n: u32) -> u64 {
    fn count(rest: u32, largest: u32) -> u64 {
        if rest == 0 {
            return 1;
        }
        let mut total = 0;
        let mut part = largest.min(rest);
        if part.is_multiple_of(2) {
            part -= 1;
        }
        while part >= 1 {
            total += count(rest - part, part);
            if part < 2 {
                break;
            }
            part -= 2;
        }
        total
    }
    count(n, n.max(1))
}

/// `Σ_{n=0}^{terms-1} ln(1 − z wⁿ)` as a plain partial product.
pub fn partial_log_pochhammer(z: f64, w: f64, terms: usize) -> f64 {
    let mut acc = 0.0;
    let mut t = z;
    for _ in 0..terms {
        acc += (1.0 - t).ln();
        t *= w;
    }
    acc
}

/// `Σ_{|n|≤terms} f(|ε(a+nb)|)`.
pub fn bilateral_block_sum(a: u32, b: u32, epsilon: f64, terms: i64) -> f64 {
    (-terms..=terms)
        .map(|n| f_plain((epsilon * (a as f64 + n as f64 * b as f64)).abs()))
        .sum()
}

/// `ln T − x ln x · (ln T)'` with the log-derivative summed analytically,
/// `d/dx Σ ln(1 − x^m) = −Σ m x^(m−1)/(1 − x^m)`.
pub fn block_entropy_from_derivative(a: u32, b: u32, x: f64, terms: u32) -> f64 {
    let mut log_t = 0.0;
    let mut dlog_t = 0.0;
    for n in 0..terms {
        for m in [a + n * b, b - a + n * b] {
            let xm = x.powi(m as i32);
            log_t += (1.0 - xm).ln();
            dlog_t -= m as f64 * x.powi(m as i32 - 1) / (1.0 - xm);
        }
    }
    log_t - x * x.ln() * dlog_t
}
