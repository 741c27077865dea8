//! Scaling-limit observables: correlation length, central charge, boundary
//! entropy and the leftover constant `C_κ`.
//!
//! In the scaling limit `S^(i,κ) ≈ (c_κ/6) ln ξ + ln g^(i,κ) + C_κ` with
//! `ln ξ ≈ π²/(2ε)`, so a fit of `S` against `1/ε` has slope `π² c_κ / 12`.

use std::f64::consts::PI;

use crate::character::ModelPoint;
use crate::entropy::{self, Method};
use crate::qseries::Truncation;
use crate::{Error, Result};

/// How the conjugate modulus is obtained from the nome. Reported with every
/// fit so that `C_κ` values can be compared across runs.
pub const MODULUS_CONVENTION: &str =
    "jacobi nome q = x = exp(-eps); k' = theta4(q)^2/theta3(q)^2 = prod_n ((1-q^(2n+1))/(1+q^(2n+1)))^4";

/// `c_κ = 3κ/(κ+2)`.
pub fn central_charge(kappa: u32) -> f64 {
    let k = kappa as f64;
    3.0 * k / (k + 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEntropy {
    pub kappa: u32,
    pub i: u32,
    pub g_value: f64,
    pub ln_g: f64,
}

/// Ground-state degeneracy `g^(i,κ) = sin(π(i+1)/(κ+2)) / sin(π/(κ+2))`.
pub fn boundary_g(kappa: u32, i: u32) -> Result<BoundaryEntropy> {
    if kappa == 0 || i > kappa {
        return Err(Error::domain(format!(
            "invalid labels kappa={kappa}, i={i}"
        )));
    }
    let n = (kappa + 2) as f64;
    // sin(π(i+1)/n) = sin(π(κ−i+1)/n); use the smaller angle so both labels
    // produce bit-identical values
    let j = (i + 1).min(kappa + 1 - i) as f64;
    let g_value = (PI * j / n).sin() / (PI / n).sin();
    Ok(BoundaryEntropy {
        kappa,
        i,
        g_value,
        ln_g: g_value.ln(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XiMode {
    /// `ln ξ = π²/(2ε)`.
    Asymptotic,
    /// `ξ⁻¹ = −½ ln((1−k′)/(1+k′))` with `k′` from the nome.
    Exact,
}

/// `ln k′` from the product form of `θ₄²/θ₃²` at nome `q = e^(−ε)`:
/// `ln k′ = −8 Σ_{n≥0} artanh(q^(2n+1))`.
pub fn log_conjugate_modulus(epsilon: f64, trunc: Truncation) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let q = (-epsilon).exp();
    let step = (-2.0 * epsilon).exp();
    let one_minus_step = -(-2.0 * epsilon).exp_m1();
    let mut t = q;
    let mut sum = 0.0;
    for _ in 0..trunc.max_terms {
        // artanh(t) ≤ t/(1−t²), so the tail is at most t/((1−t²)(1−q²))
        if 8.0 * t / ((1.0 - t * t) * one_minus_step) < trunc.abs_tol {
            return Ok(-8.0 * sum);
        }
        sum += t.atanh();
        t *= step;
    }
    Err(Error::Truncation {
        what: "conjugate modulus",
        max_terms: trunc.max_terms,
    })
}

/// `ln k′` through the conjugate nome `q′ = e^(−π²/ε)`, where
/// `k′ = θ₂²(q′)/θ₃²(q′)`. Only used to cross-check
/// [`log_conjugate_modulus`]; accurate while `q′` is small.
pub fn log_conjugate_modulus_modular(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let log_qc = -PI * PI / epsilon;
    let mut theta2_reduced = 0.0; // Σ_{n≥0} q′^(n(n+1))
    let mut theta3 = 1.0; // 1 + 2 Σ_{n≥1} q′^(n²)
    for n in 0..64u32 {
        let n = n as f64;
        theta2_reduced += (log_qc * n * (n + 1.0)).exp();
        if n > 0.0 {
            theta3 += 2.0 * (log_qc * n * n).exp();
        }
    }
    Ok(4f64.ln() + 0.5 * log_qc + 2.0 * theta2_reduced.ln() - 2.0 * theta3.ln())
}

/// `ln ξ` for the given coupling.
pub fn correlation_length(epsilon: f64, mode: XiMode) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    match mode {
        XiMode::Asymptotic => Ok(PI * PI / (2.0 * epsilon)),
        XiMode::Exact => {
            let log_k = log_conjugate_modulus(epsilon, Truncation::default())?;
            Ok(log_xi_from_modulus(log_k))
        }
    }
}

/// `ln ξ = −ln artanh(k′)`, evaluated from `ln k′` so that tiny moduli do
/// not underflow.
pub fn log_xi_from_modulus(log_k: f64) -> f64 {
    let k = log_k.exp();
    let log_ratio = if k < 1e-4 {
        let k2 = k * k;
        (k2 / 3.0 + k2 * k2 / 5.0).ln_1p()
    } else {
        (k.atanh() / k).ln()
    };
    -log_k - log_ratio
}

/// Least-squares fit of `S = slope/ε + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// `12·slope/π²`.
    pub c_estimate: f64,
    pub residual_max: f64,
    /// `(ε, S)` sorted by decreasing ε.
    pub points_used: Vec<(f64, f64)>,
}

pub fn fit_scaling(samples: &[(f64, f64)]) -> Result<ScalingFit> {
    if samples.len() < 3 {
        return Err(Error::IllConditioned(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    if let Some(&(e, s)) = samples
        .iter()
        .find(|(e, s)| !(*e > 0.0) || !e.is_finite() || !s.is_finite())
    {
        return Err(Error::domain(format!("invalid sample (eps={e}, S={s})")));
    }
    let mut points = samples.to_vec();
    points.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (largest, smallest) = (points[0].0, points[points.len() - 1].0);
    if largest < 4.0 * smallest {
        return Err(Error::IllConditioned(format!(
            "eps range [{smallest}, {largest}] spans less than a factor 4"
        )));
    }

    let n = points.len() as f64;
    let mean_u = points.iter().map(|(e, _)| 1.0 / e).sum::<f64>() / n;
    let mean_s = points.iter().map(|(_, s)| s).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(e, s) in &points {
        let du = 1.0 / e - mean_u;
        sxx += du * du;
        sxy += du * (s - mean_s);
    }
    if !(sxx > 1e-12 * mean_u * mean_u * n) {
        return Err(Error::IllConditioned("1/eps values nearly coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_s - slope * mean_u;
    let residual_max = points
        .iter()
        .map(|&(e, s)| (s - slope / e - intercept).abs())
        .fold(0.0, f64::max);
    Ok(ScalingFit {
        slope,
        intercept,
        c_estimate: 12.0 * slope / (PI * PI),
        residual_max,
        points_used: points,
    })
}

/// Linear-in-ε extrapolation to `ε → 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    /// Distance between the extrapolated value and the smallest-ε sample.
    pub residual: f64,
}

/// Two-point Richardson extrapolation (model `v(ε) = v₀ + c₁ε`) on the two
/// smallest distinct ε in `samples`.
pub fn richardson(samples: &[(f64, f64)]) -> Result<Extrapolated> {
    let mut points = samples.to_vec();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points.dedup_by(|a, b| a.0 == b.0);
    if points.len() < 2 {
        return Err(Error::IllConditioned(
            "extrapolation needs two distinct eps values".into(),
        ));
    }
    let (e1, v1) = points[0];
    let (e2, v2) = points[1];
    if !(e1 > 0.0) {
        return Err(Error::domain(format!("eps must be positive, got {e1}")));
    }
    if (e2 - e1) < 1e-9 * e2 {
        return Err(Error::IllConditioned(format!(
            "eps values {e1} and {e2} nearly coincide"
        )));
    }
    let value = (e2 * v1 - e1 * v2) / (e2 - e1);
    Ok(Extrapolated {
        value,
        residual: (value - v1).abs(),
    })
}

fn auto_entropy(kappa: u32, i: u32, epsilon: f64, trunc: Truncation) -> Result<f64> {
    let point =
        ModelPoint::with_kappa_cap(kappa, i, crate::Nome::from_epsilon(epsilon)?, u32::MAX)?;
    Ok(entropy::entropy(&point, Method::auto_for(epsilon), trunc)?.value)
}

/// `ln g^(i,κ)` from `S^(i,κ)(ε) − S^(0,κ)(ε)` extrapolated to `ε → 0`.
/// The difference removes both the `c_κ` term and `C_κ`.
pub fn extract_boundary_entropy(
    kappa: u32,
    i: u32,
    eps_list: &[f64],
    trunc: Truncation,
) -> Result<f64> {
    boundary_g(kappa, i)?;
    if eps_list.len() < 2 {
        return Err(Error::IllConditioned("need at least two eps values".into()));
    }
    if i == 0 {
        return Ok(0.0);
    }
    let mut diffs = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let d = auto_entropy(kappa, i, eps, trunc)? - auto_entropy(kappa, 0, eps, trunc)?;
        diffs.push((eps, d));
    }
    Ok(richardson(&diffs)?.value)
}

/// Largest spread tolerated between `C_κ` estimates for different labels.
pub const RESIDUAL_CONSTANT_SPREAD: f64 = 1e-4;

/// Estimate of `C_κ = S^(i,κ) − (c_κ/6) ln ξ − ln g^(i,κ)` as `ε → 0`.
///
/// The same estimate is formed for label 0 and the two must agree within
/// [`RESIDUAL_CONSTANT_SPREAD`]; otherwise the `i`-dependence has not been
/// fully absorbed by `ln g` and an error is returned.
pub fn residual_constant(
    kappa: u32,
    i: u32,
    eps_list: &[f64],
    mode: XiMode,
    trunc: Truncation,
) -> Result<f64> {
    let own = residual_constant_for_label(kappa, i, eps_list, mode, trunc)?;
    if i != 0 {
        let reference = residual_constant_for_label(kappa, 0, eps_list, mode, trunc)?;
        if (own - reference).abs() > RESIDUAL_CONSTANT_SPREAD {
            return Err(Error::Inconsistent(format!(
                "C_kappa for i={i} ({own}) differs from i=0 ({reference})"
            )));
        }
    }
    Ok(own)
}

fn residual_constant_for_label(
    kappa: u32,
    i: u32,
    eps_list: &[f64],
    mode: XiMode,
    trunc: Truncation,
) -> Result<f64> {
    let ln_g = boundary_g(kappa, i)?.ln_g;
    let c = central_charge(kappa);
    let mut samples = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let s = auto_entropy(kappa, i, eps, trunc)?;
        samples.push((eps, s - c / 6.0 * correlation_length(eps, mode)? - ln_g));
    }
    Ok(richardson(&samples)?.value)
}

/// `count` geometrically spaced values between `start` and `stop`, in
/// decreasing order whatever the order of the endpoints.
pub fn geometric_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && stop > 0.0) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::domain(format!(
            "grid endpoints must be positive, got {start}, {stop}"
        )));
    }
    let (hi, lo) = if start >= stop {
        (start, stop)
    } else {
        (stop, start)
    };
    match count {
        0 => Err(Error::domain("grid needs at least one point")),
        1 => Ok(vec![hi]),
        _ => {
            let ratio = (lo / hi).ln() / (count - 1) as f64;
            let mut grid: Vec<f64> = (0..count).map(|k| hi * (ratio * k as f64).exp()).collect();
            grid[count - 1] = lo;
            Ok(grid)
        }
    }
}
