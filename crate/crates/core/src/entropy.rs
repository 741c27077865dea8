//! Entanglement entropy `S^(i,κ) = ln Z − x ln x · Z'/Z`.
//!
//! Each block `T(a,b)^e` of the partition function contributes
//! `e · S(a,b)` with `S(a,b) = Σ_{n∈ℤ} f(|ε(a+nb)|)`. That bilateral sum is
//! evaluated directly, after Poisson resummation, or through its scaling
//! asymptotics; independently, the CTM spectrum gives `S = −Σ p ln p`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::character::{self, ModelPoint, SpectrumTable, DEFAULT_SPECTRUM_ORDER};
use crate::qseries::{SeriesSum, Truncation};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Direct,
    Poisson,
    Spectrum,
    Asymptotic,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Direct,
        Method::Poisson,
        Method::Spectrum,
        Method::Asymptotic,
    ];

    /// Poisson below `ε = 0.5`, direct above.
    pub fn auto_for(epsilon: f64) -> Method {
        if epsilon < 0.5 {
            Method::Poisson
        } else {
            Method::Direct
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Poisson => "poisson",
            Method::Spectrum => "spectrum",
            Method::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown method '{s}'")))
    }
}

/// An entropy value in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult {
    pub value: f64,
    pub method: Method,
    pub est_error: f64,
    pub terms_used: usize,
}

/// `f(y) = ln(1 − e^(−y)) + y/(1 − e^y)`, negative for all `y > 0`.
pub fn f_kernel(y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain(format!("f kernel needs y > 0, got {y}")));
    }
    Ok(f_kernel_unchecked(y))
}

#[inline]
fn f_kernel_unchecked(y: f64) -> f64 {
    (-(-y).exp_m1()).ln() - y / y.exp_m1()
}

const F_HAT_SERIES_CUTOFF: f64 = 1e-3;

/// Cosine transform `f̂(y) = ∫₀^∞ f(t) cos(yt) dt`
/// `= (π/2y)(πy − sinh πy cosh πy)/sinh² πy`, with `f̂(0) = −π²/3`.
///
/// Even in `y`. Below `y = 1e-3` the Taylor polynomial through `y⁴` is used;
/// for `πy < 1` the numerator `u − sinh u cosh u` is summed as a series to
/// avoid cancellation.
pub fn f_hat(y: f64) -> f64 {
    let y = y.abs();
    if y < F_HAT_SERIES_CUTOFF {
        let y2 = y * y;
        let pi2 = PI * PI;
        return -pi2 / 3.0 + 2.0 * pi2 * pi2 * y2 / 45.0 - 2.0 * pi2 * pi2 * pi2 * y2 * y2 / 315.0;
    }
    let u = PI * y;
    let prefactor = PI / (2.0 * y);
    if u < 1.0 {
        // u − sinh(2u)/2 = −Σ_{k≥1} (2u)^(2k+1) / (2 (2k+1)!)
        let v = 2.0 * u;
        let v2 = v * v;
        let mut term = v * v2 / 6.0;
        let mut numerator: f64 = 0.0;
        let mut k = 1.0;
        while term > 1e-18 * numerator.max(f64::MIN_POSITIVE) {
            numerator += term;
            k += 1.0;
            term *= v2 / ((2.0 * k) * (2.0 * k + 1.0));
        }
        let sinh = u.sinh();
        return -prefactor * 0.5 * numerator / (sinh * sinh);
    }
    let e2 = (-2.0 * u).exp();
    let one_minus = 1.0 - e2;
    let u_over_sinh2 = 4.0 * u * e2 / (one_minus * one_minus);
    let coth = (1.0 + e2) / one_minus;
    prefactor * (u_over_sinh2 - coth)
}

/// `f̂(y) + π/(2y)`: what is left of the transform after removing its
/// `−π/(2y)` envelope. Exponentially small in `πy`.
fn f_hat_remainder(y: f64) -> f64 {
    let u = PI * y;
    let e2 = (-2.0 * u).exp();
    let one_minus = -(-2.0 * u).exp_m1();
    let u_over_sinh2 = 4.0 * u * e2 / (one_minus * one_minus);
    let coth_minus_one = 2.0 * e2 / one_minus;
    PI / (2.0 * y) * (u_over_sinh2 - coth_minus_one)
}

/// Upper bound on `|f̂(y) + π/(2y)|`; decreasing in `y`, and it shrinks by at
/// least `e^(−2πΔy)` when `y` grows by `Δy`.
fn f_hat_remainder_envelope(y: f64) -> f64 {
    let u = PI * y;
    let e2 = (-2.0 * u).exp();
    let one_minus = -(-2.0 * u).exp_m1();
    2.0 * PI * PI * e2 / (one_minus * one_minus) + PI * PI * e2 / (u * one_minus)
}

fn check_block(a: u32, b: u32, epsilon: f64) -> Result<()> {
    if !(0 < a && a < b) {
        return Err(Error::domain(format!("block S({a},{b}) needs 0 < a < b")));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    Ok(())
}

/// Bound on `Σ_{k≥0} |f(y + k·step)|` from `|f(y)| ≤ (1+y) e^(−y)/(1 − e^(−y))`.
fn f_tail_bound(y: f64, step: f64) -> f64 {
    let t = (-y).exp();
    let r = (-step).exp();
    let one_minus_r = -(-step).exp_m1();
    t / (1.0 - t) * ((1.0 + y) / one_minus_r + step * r / (one_minus_r * one_minus_r))
}

/// `S(a,b) = Σ_{n∈ℤ} f(|ε(a+nb)|)`, summed as the two one-sided progressions
/// `ε(a+nb)` and `ε(b−a+nb)`, `n ≥ 0`. Always negative.
pub fn block_entropy_direct(a: u32, b: u32, epsilon: f64, trunc: Truncation) -> Result<SeriesSum> {
    check_block(a, b, epsilon)?;
    let step = epsilon * b as f64;
    let mut sum = 0.0;
    for n in 0..trunc.max_terms {
        let y_up = epsilon * (a as f64 + (n as u64 * b as u64) as f64);
        let y_down = epsilon * ((b - a) as f64 + (n as u64 * b as u64) as f64);
        let tail = f_tail_bound(y_up, step) + f_tail_bound(y_down, step);
        if tail < trunc.abs_tol {
            return Ok(SeriesSum {
                value: sum,
                terms: 2 * n,
                tail_bound: tail,
            });
        }
        sum += f_kernel_unchecked(y_up) + f_kernel_unchecked(y_down);
    }
    Err(Error::Truncation {
        what: "direct block entropy",
        max_terms: trunc.max_terms,
    })
}

/// `cos(2π n a / b)` with the angle reduced exactly in integers.
fn harmonic_cos(n: usize, a: u32, b: u32) -> f64 {
    let residue = ((n as u64 % b as u64) * a as u64) % b as u64;
    (2.0 * PI * residue as f64 / b as f64).cos()
}

/// Poisson-resummed block entropy
/// `S(a,b) = −2π²/(3εb) + (4/εb) Σ_{n≥1} f̂(2πn/(εb)) cos(2πna/b)`.
///
/// The `−π/(2y)` envelope of `f̂` makes the series only conditionally
/// convergent. That part is summed in closed form,
/// `−Σ_{n≥1} cos(2πna/b)/n = ln(2 sin(πa/b))`, leaving a remainder series
/// in `f̂(y) + π/(2y)` whose terms decay like `e^(−4π²n/(εb))`.
pub fn block_entropy_poisson(a: u32, b: u32, epsilon: f64, trunc: Truncation) -> Result<SeriesSum> {
    check_block(a, b, epsilon)?;
    let eb = epsilon * b as f64;
    let prefactor = 4.0 / eb;
    let dy = 2.0 * PI / eb;
    let ratio_complement = -(-2.0 * PI * dy).exp_m1();
    let base = -2.0 * PI * PI / (3.0 * eb) + log_two_sin(a, b);

    let mut sum = 0.0;
    for n in 1..=trunc.max_terms {
        let y = dy * n as f64;
        let tail = prefactor * f_hat_remainder_envelope(y) / ratio_complement;
        if tail < trunc.abs_tol {
            return Ok(SeriesSum {
                value: base + prefactor * sum,
                terms: n - 1,
                tail_bound: tail,
            });
        }
        sum += f_hat_remainder(y) * harmonic_cos(n, a, b);
    }
    Err(Error::Truncation {
        what: "Poisson block entropy",
        max_terms: trunc.max_terms,
    })
}

fn log_two_sin(a: u32, b: u32) -> f64 {
    (2.0 * (PI * a as f64 / b as f64).sin()).ln()
}

/// Scaling form `S(a,b) ≈ −2π²/(3εb) + ln(2 sin(πa/b))`.
pub fn block_entropy_asymptotic(a: u32, b: u32, epsilon: f64) -> Result<f64> {
    check_block(a, b, epsilon)?;
    Ok(-2.0 * PI * PI / (3.0 * epsilon * b as f64) + log_two_sin(a, b))
}

/// Bound on `|S(a,b) − asymptotic|`: the whole Poisson remainder series.
fn block_asymptotic_error(b: u32, epsilon: f64) -> f64 {
    let eb = epsilon * b as f64;
    let dy = 2.0 * PI / eb;
    4.0 / eb * f_hat_remainder_envelope(dy) / -(-2.0 * PI * dy).exp_m1()
}

/// Closed-form scaling entropy
/// `(π²/12ε) c_κ + ln(√2 sin(π(i+1)/(κ+2)) / √(κ+2))`.
pub fn entropy_asymptotic(point: &ModelPoint) -> f64 {
    let kappa = point.kappa() as f64;
    let central_charge = 3.0 * kappa / (kappa + 2.0);
    let sine = (PI * (point.boundary_i() + 1) as f64 / (kappa + 2.0)).sin();
    PI * PI / (12.0 * point.epsilon()) * central_charge
        + (2f64.sqrt() * sine / (kappa + 2.0).sqrt()).ln()
}

/// Options for the spectral route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Number of CTM levels kept (in steps of `x²`).
    pub order: usize,
    /// Largest nome accepted before the tail is declared too heavy.
    pub x_ceiling: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            order: DEFAULT_SPECTRUM_ORDER,
            x_ceiling: 0.85,
        }
    }
}

/// Entropy of the reduced density matrix `ρ = x^(2H_CTM)/Z` at `point`.
pub fn entropy(point: &ModelPoint, method: Method, trunc: Truncation) -> Result<EntropyResult> {
    let result = match method {
        Method::Direct | Method::Poisson => {
            let mut value = 0.0;
            let mut est_error = 0.0;
            let mut terms_used = 0;
            for block in character::block_decomposition(point.kappa(), point.boundary_i())? {
                let s = match method {
                    Method::Direct => {
                        block_entropy_direct(block.a, block.b, point.epsilon(), trunc)?
                    }
                    _ => block_entropy_poisson(block.a, block.b, point.epsilon(), trunc)?,
                };
                let weight = block.power.as_f64();
                value += weight * s.value;
                est_error += weight.abs() * (s.tail_bound + rounding(s.terms, s.value));
                terms_used += s.terms;
            }
            EntropyResult {
                value,
                method,
                est_error,
                terms_used,
            }
        }
        Method::Spectrum => {
            return entropy_from_spectrum(point, SpectrumOptions::default(), trunc);
        }
        Method::Asymptotic => {
            let mut value = 0.0;
            let mut est_error = 0.0;
            for block in character::block_decomposition(point.kappa(), point.boundary_i())? {
                let weight = block.power.as_f64();
                value += weight * block_entropy_asymptotic(block.a, block.b, point.epsilon())?;
                est_error += weight.abs() * block_asymptotic_error(block.b, point.epsilon());
            }
            // an approximation: no positivity guarantee
            return Ok(EntropyResult {
                value,
                method,
                est_error,
                terms_used: 0,
            });
        }
    };
    check_nonnegative(result)
}

fn rounding(terms: usize, value: f64) -> f64 {
    4.0 * f64::EPSILON * (terms as f64 + 1.0) * value.abs().max(1.0)
}

fn check_nonnegative(mut result: EntropyResult) -> Result<EntropyResult> {
    if result.value < -(result.est_error + 1e-14) {
        return Err(Error::NegativeEntropy {
            value: result.value,
            est_error: result.est_error,
        });
    }
    result.value = result.value.max(0.0);
    Ok(result)
}

/// CTM level probabilities `p_n = d_n x^(2n) / Z` over the window of `table`,
/// renormalized to sum to one, plus the window's total mass before
/// renormalization.
pub fn spectrum_probabilities(
    point: &ModelPoint,
    table: &SpectrumTable,
    trunc: Truncation,
) -> Result<(Vec<f64>, f64)> {
    let log_z = character::log_partition_theta(point, trunc)?;
    let log_window = table.log_partial_sum(point.nome());
    let probs = (0..=table.order())
        .map(|n| (table.ln_degeneracy(n) - 2.0 * n as f64 * point.epsilon() - log_window).exp())
        .collect();
    Ok((probs, (log_window - log_z).exp()))
}

/// Von Neumann entropy of `ρ = x^(2H_CTM)/Z` from the CTM spectrum.
///
/// Level `n` holds `d_n` states of weight `λ_n = x^(2n)/Z`, so with level
/// probabilities `p_n = d_n λ_n` the entropy is
/// `−Σ d_n λ_n ln λ_n = Σ_n p_n (2nε + ln Z)`. The window `n ≤ order` is
/// renormalized; the estimated error covers the renormalization shift and a
/// geometric bound on the omitted levels, using the largest level-to-level
/// probability ratio seen near the window edge.
pub fn entropy_from_spectrum(
    point: &ModelPoint,
    options: SpectrumOptions,
    trunc: Truncation,
) -> Result<EntropyResult> {
    let x = point.nome().x();
    if x > options.x_ceiling {
        return Err(Error::TailTooHeavy(format!(
            "x = {x} is above the spectral ceiling {}",
            options.x_ceiling
        )));
    }
    let table = character::ctm_spectrum(point.kappa(), point.boundary_i(), options.order)?;
    let epsilon = point.epsilon();
    let log_z = character::log_partition_theta(point, trunc)?;

    // ln p_n against the exact Z
    let log_p: Vec<f64> = (0..=table.order())
        .map(|n| table.ln_degeneracy(n) - 2.0 * n as f64 * epsilon - log_z)
        .collect();
    let log_window = character::log_sum_exp(&log_p);
    let window_mass = log_window.exp();

    // Σ p_n · 2nε, then S = ln Z + 2ε⟨n⟩ with and without renormalization
    let mut level_energy = 0.0;
    for (n, &lp) in log_p.iter().enumerate() {
        level_energy += lp.exp() * 2.0 * n as f64 * epsilon;
    }
    let raw = window_mass * log_z + level_energy;
    let renormalized = (log_z + log_window) + level_energy / window_mass;

    let order = table.order();
    let (tail_mass, tail_entropy) = if order == 0 {
        (1.0 - window_mass, f64::INFINITY)
    } else {
        let start = order.saturating_sub(10);
        let mut ratio: f64 = 0.0;
        for n in start..order {
            if log_p[n].is_finite() && log_p[n + 1].is_finite() {
                ratio = ratio.max((log_p[n + 1] - log_p[n]).exp());
            }
        }
        if ratio >= 1.0 || ratio == 0.0 {
            return Err(Error::TailTooHeavy(format!(
                "level probabilities near n = {order} are not decaying (ratio {ratio})"
            )));
        }
        let p_last = log_p[order].exp();
        let geometric = ratio / (1.0 - ratio);
        let level = 2.0 * order as f64 * epsilon + log_z.max(0.0);
        (
            p_last * geometric,
            p_last * (level * geometric + 2.0 * epsilon * geometric / (1.0 - ratio)),
        )
    };
    if !(tail_mass < trunc.abs_tol && tail_entropy < trunc.abs_tol) {
        return Err(Error::TailTooHeavy(format!(
            "omitted levels beyond n = {order} carry mass ~{tail_mass:e} and entropy ~{tail_entropy:e}"
        )));
    }

    let est_error = tail_entropy + (renormalized - raw).abs() + rounding(order, renormalized);
    check_nonnegative(EntropyResult {
        value: renormalized,
        method: Method::Spectrum,
        est_error,
        terms_used: order + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Truncation {
        Truncation::default()
    }

    #[test]
    fn f_kernel_values() {
        let ln2 = std::f64::consts::LN_2;
        assert!((f_kernel(ln2).unwrap() + 2.0 * ln2).abs() < 1e-15);
        let far = f_kernel(50.0).unwrap();
        assert!(far < 0.0 && far > -1e-20);
        // f(y) = ln y − 1 + y/2·(1 − ...) near zero: first correction is O(y)
        let near = f_kernel(0.01).unwrap() - (0.01f64.ln() - 1.0);
        assert!(near.abs() < 0.01, "{near}");
        assert!(f_kernel(0.0).is_err());
        assert!(f_kernel(-1.0).is_err());
    }

    #[test]
    fn f_kernel_negative() {
        for k in -30..24 {
            let y = 1.3f64.powi(k);
            assert!(f_kernel(y).unwrap() < 0.0, "f({y}) not negative");
        }
    }

    #[test]
    fn f_hat_origin_and_substitution() {
        assert_eq!(f_hat(0.0), -PI * PI / 3.0);
        let (s, c) = (PI.sinh(), PI.cosh());
        let direct = PI / 2.0 * (PI - s * c) / (s * s);
        assert!((f_hat(1.0) - direct).abs() < 1e-14);
        assert_eq!(f_hat(-0.7), f_hat(0.7));
    }

    #[test]
    fn f_hat_branches_meet() {
        // the series branch and the closed form at the cutoff
        let y = F_HAT_SERIES_CUTOFF;
        let below = f_hat(y * (1.0 - 1e-12));
        let above = f_hat(y);
        assert!((below - above).abs() < 1e-13, "{below} vs {above}");
        // the numerator series and the exponential form at u = 1
        let y1 = 1.0 / PI;
        assert!((f_hat(y1 * (1.0 - 1e-13)) - f_hat(y1)).abs() < 1e-13);
    }

    #[test]
    fn f_hat_large_y() {
        for y in [50.0, 300.0, 1e4] {
            assert!((y * f_hat(y) + PI / 2.0).abs() < 1e-6);
        }
        assert!(f_hat_remainder(20.0).abs() < 1e-50);
    }

    #[test]
    fn direct_block_symmetry_and_sign() {
        let a = block_entropy_direct(2, 6, 0.7, tol()).unwrap();
        let b = block_entropy_direct(4, 6, 0.7, tol()).unwrap();
        assert!((a.value - b.value).abs() < 1e-15);
        assert!(a.value < 0.0);
        let far = block_entropy_direct(2, 6, 40.0, tol()).unwrap();
        assert!(far.value.abs() < 1e-30);
    }

    #[test]
    fn direct_block_brute_force() {
        let eps = 1.0;
        let oracle: f64 = (-1000i64..1000)
            .map(|n| f_kernel((eps * (2 + 4 * n) as f64).abs()).unwrap())
            .sum();
        let got = block_entropy_direct(2, 4, eps, tol()).unwrap();
        assert!(
            (got.value - oracle).abs() < 1e-13,
            "{} vs {oracle}",
            got.value
        );
    }

    #[test]
    fn poisson_matches_direct() {
        for eps in [0.2, 0.5, 1.0] {
            let d = block_entropy_direct(2, 6, eps, tol()).unwrap().value;
            let p = block_entropy_poisson(2, 6, eps, tol()).unwrap().value;
            assert!((d - p).abs() < 1e-9, "eps={eps}: {d} vs {p}");
        }
    }

    #[test]
    fn poisson_scaling_constant() {
        let eps = 0.01;
        let s = block_entropy_poisson(2, 6, eps, tol()).unwrap().value;
        let constant = s + PI * PI / (9.0 * eps);
        assert!((constant - (2.0 * (PI / 3.0).sin()).ln()).abs() < 1e-4);
        let half = block_entropy_poisson(3, 6, eps, tol()).unwrap().value + PI * PI / (9.0 * eps);
        assert!((half - std::f64::consts::LN_2).abs() < 1e-4);
    }

    #[test]
    fn asymptotic_block() {
        let eps = 0.3;
        let s = block_entropy_asymptotic(2, 4, eps).unwrap();
        assert!((s - (-PI * PI / (6.0 * eps) + std::f64::consts::LN_2)).abs() < 1e-14);
        assert_eq!(
            block_entropy_asymptotic(1, 3, eps).unwrap(),
            block_entropy_asymptotic(2, 3, eps).unwrap()
        );
        let mut last = f64::INFINITY;
        for eps in [0.4, 0.2, 0.1, 0.05] {
            let gap = (block_entropy_asymptotic(2, 6, eps).unwrap()
                - block_entropy_poisson(2, 6, eps, tol()).unwrap().value)
                .abs();
            assert!(gap <= last);
            last = gap;
        }
        assert!(last < 1e-12);
    }

    #[test]
    fn kappa_one_is_half_t24() {
        let p = ModelPoint::from_epsilon(1, 0, 0.5).unwrap();
        let s = entropy(&p, Method::Direct, tol()).unwrap();
        let half = -0.5 * block_entropy_direct(2, 4, 0.5, tol()).unwrap().value;
        assert!((s.value - half).abs() < 1e-13);
        for method in Method::ALL {
            let other = entropy(&p, method, tol()).unwrap();
            let allowed = if method == Method::Asymptotic {
                1e-6
            } else {
                1e-10
            };
            assert!((other.value - s.value).abs() < allowed, "{method}");
        }
    }

    #[test]
    fn asymptotic_closed_form_matches_block_sum() {
        for kappa in 1..=6 {
            for i in 0..=kappa {
                let p = ModelPoint::from_epsilon(kappa, i, 0.37).unwrap();
                let blocks = entropy(&p, Method::Asymptotic, tol()).unwrap().value;
                assert!((blocks - entropy_asymptotic(&p)).abs() < 1e-12);
            }
        }
        let p = ModelPoint::from_epsilon(1, 0, 0.25).unwrap();
        let expected = PI * PI / (12.0 * 0.25) - 0.5 * std::f64::consts::LN_2;
        assert!((entropy_asymptotic(&p) - expected).abs() < 1e-14);
    }

    #[test]
    fn deep_massive_regime() {
        let p = ModelPoint::from_epsilon(2, 1, 5.0).unwrap();
        let reference = entropy_from_spectrum(
            &p,
            SpectrumOptions {
                order: 50,
                x_ceiling: 0.85,
            },
            tol(),
        )
        .unwrap();
        let direct = entropy(&p, Method::Direct, tol()).unwrap();
        assert!(reference.value > 0.0 && reference.value < 1e-2);
        assert!((direct.value - reference.value).abs() < 1e-12);
    }

    #[test]
    fn spectrum_pure_state_limit() {
        let p = ModelPoint::from_epsilon(3, 1, 30.0).unwrap();
        let s = entropy_from_spectrum(&p, SpectrumOptions::default(), tol()).unwrap();
        assert!(s.value < 1e-20);
    }

    #[test]
    fn spectrum_ceiling() {
        let p = ModelPoint::from_epsilon(1, 0, 0.1).unwrap();
        assert!(matches!(
            entropy(&p, Method::Spectrum, tol()),
            Err(Error::TailTooHeavy(_))
        ));
        let short = SpectrumOptions {
            order: 5,
            x_ceiling: 0.85,
        };
        let q = ModelPoint::from_epsilon(1, 0, 0.5).unwrap();
        assert!(matches!(
            entropy_from_spectrum(&q, short, tol()),
            Err(Error::TailTooHeavy(_))
        ));
    }

    #[test]
    fn probabilities_normalized() {
        let p = ModelPoint::from_epsilon(2, 0, 0.5).unwrap();
        let table = character::ctm_spectrum(2, 0, 200).unwrap();
        let (probs, mass) = spectrum_probabilities(&p, &table, tol()).unwrap();
        let total: f64 = probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("auto".parse::<Method>().is_err());
        assert_eq!(Method::auto_for(0.2), Method::Poisson);
        assert_eq!(Method::auto_for(0.5), Method::Direct);
    }
}
