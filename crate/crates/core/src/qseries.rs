//! Real-domain q-Pochhammer symbols, theta functions and exact expansions of
//! q-products.
//!
//! Every product is accumulated as a sum of logarithms and exponentiated
//! last: in the scaling regime `x → 1` the individual products vanish like
//! `exp(−C/ε)` and a direct product underflows long before the quotients we
//! need lose meaning.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::{Error, Result};

/// The nome `x = e^(−ε)` of the antiferromagnetic regime, `0 < x < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nome {
    epsilon: f64,
    x: f64,
}

impl Nome {
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::domain(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        let x = (-epsilon).exp();
        if !(x > 0.0) {
            return Err(Error::domain(format!(
                "epsilon {epsilon} underflows the nome"
            )));
        }
        Ok(Nome { epsilon, x })
    }

    pub fn from_x(x: f64) -> Result<Self> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::domain(format!("nome must lie in (0,1), got {x}")));
        }
        Ok(Nome {
            epsilon: -x.ln(),
            x,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// `x^p`, computed as `e^(−pε)` so that large powers keep full relative
    /// precision.
    pub fn pow(&self, p: f64) -> f64 {
        (-p * self.epsilon).exp()
    }
}

/// Stopping rule for the infinite sums and products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Truncation {
    pub const DEFAULT_ABS_TOL: f64 = 1e-13;
    pub const DEFAULT_MAX_TERMS: usize = 10_000_000;

    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !abs_tol.is_finite() {
            return Err(Error::domain(format!(
                "abs_tol must be positive, got {abs_tol}"
            )));
        }
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        Ok(Truncation { abs_tol, max_terms })
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Result<Self> {
        Truncation::new(abs_tol, self.max_terms)
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            abs_tol: Self::DEFAULT_ABS_TOL,
            max_terms: Self::DEFAULT_MAX_TERMS,
        }
    }
}

/// A number of the form `n/2`, used for the powers of q-products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub const ONE: HalfInteger = HalfInteger(2);
    pub const MINUS_ONE: HalfInteger = HalfInteger(-2);
    pub const MINUS_HALF: HalfInteger = HalfInteger(-1);

    pub const fn from_halves(halves: i32) -> Self {
        HalfInteger(halves)
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInteger(2 * n)
    }

    pub fn halves(self) -> i32 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The integer value, if there is one.
    pub fn to_int(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn abs(self) -> Self {
        HalfInteger(self.0.abs())
    }
}

impl std::ops::Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: Self) -> Self {
        HalfInteger(self.0 + rhs.0)
    }
}

impl std::ops::Mul<i32> for HalfInteger {
    type Output = HalfInteger;
    fn mul(self, rhs: i32) -> Self {
        HalfInteger(self.0 * rhs)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_int() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

/// A truncated series together with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    /// Upper bound on the magnitude of the omitted tail.
    pub tail_bound: f64,
}

impl SeriesSum {
    pub(crate) fn zero() -> Self {
        SeriesSum {
            value: 0.0,
            terms: 0,
            tail_bound: 0.0,
        }
    }

    pub(crate) fn add(self, other: SeriesSum) -> Self {
        SeriesSum {
            value: self.value + other.value,
            terms: self.terms + other.terms,
            tail_bound: self.tail_bound + other.tail_bound,
        }
    }
}

fn check_pochhammer_args(z: f64, w: f64) -> Result<()> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::domain(format!(
            "q-Pochhammer base z={z} outside [0,1)"
        )));
    }
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::domain(format!(
            "q-Pochhammer step w={w} outside (0,1)"
        )));
    }
    Ok(())
}

/// `ln (z;w)∞ = Σ_{n≥0} ln(1 − z wⁿ)` with the tail bound attached.
///
/// The sum stops at the first omitted term `t = z wⁿ` for which
/// `t / ((1−t)(1−w))` (a bound on the whole tail, from
/// `|ln(1−t)| ≤ t/(1−t)` and geometric decay) is below `abs_tol`.
pub fn log_qpochhammer_bounded(z: f64, w: f64, trunc: Truncation) -> Result<SeriesSum> {
    check_pochhammer_args(z, w)?;
    if z == 0.0 {
        return Ok(SeriesSum::zero());
    }
    let mut sum = 0.0;
    let mut t = z;
    for n in 0..trunc.max_terms {
        let bound = t / ((1.0 - t) * (1.0 - w));
        if bound < trunc.abs_tol {
            return Ok(SeriesSum {
                value: sum,
                terms: n,
                tail_bound: bound,
            });
        }
        sum += (-t).ln_1p();
        t *= w;
    }
    Err(Error::Truncation {
        what: "q-Pochhammer product",
        max_terms: trunc.max_terms,
    })
}

/// `ln (z;w)∞`; always `≤ 0`.
pub fn log_qpochhammer(z: f64, w: f64, trunc: Truncation) -> Result<f64> {
    log_qpochhammer_bounded(z, w, trunc).map(|s| s.value)
}

/// `(z;w)∞ = Π_{n≥0} (1 − z wⁿ)`, in `(0, 1]`.
pub fn qpochhammer(z: f64, w: f64, trunc: Truncation) -> Result<f64> {
    log_qpochhammer(z, w, trunc).map(f64::exp)
}

/// `ln θ_w(z) = ln (z;w)∞ + ln (w/z;w)∞ + ln (w;w)∞`.
pub fn log_theta_bounded(w: f64, z: f64, trunc: Truncation) -> Result<SeriesSum> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::domain(format!("theta step w={w} outside (0,1)")));
    }
    if !(z > 0.0) {
        return Err(Error::domain(format!(
            "theta argument z={z} must be positive"
        )));
    }
    let reflected = w / z;
    if reflected >= 1.0 {
        return Err(Error::domain(format!(
            "theta needs w/z < 1, got w={w}, z={z}"
        )));
    }
    Ok(log_qpochhammer_bounded(z, w, trunc)?
        .add(log_qpochhammer_bounded(reflected, w, trunc)?)
        .add(log_qpochhammer_bounded(w, w, trunc)?))
}

pub fn log_theta(w: f64, z: f64, trunc: Truncation) -> Result<f64> {
    log_theta_bounded(w, z, trunc).map(|s| s.value)
}

/// `θ_w(z) = (z;w)∞ (w z⁻¹;w)∞ (w;w)∞`.
pub fn theta(w: f64, z: f64, trunc: Truncation) -> Result<f64> {
    log_theta(w, z, trunc).map(f64::exp)
}

/// One factor `(x^a; x^b)∞^power` of a formal q-product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QFactor {
    pub a: u32,
    pub b: u32,
    pub power: HalfInteger,
}

impl QFactor {
    pub fn new(a: u32, b: u32, power: HalfInteger) -> Self {
        QFactor { a, b, power }
    }
}

/// Exact coefficients `c_0..c_order` of `Π_j (x^{a_j}; x^{b_j})∞^{e_j}` as a
/// formal power series in `x`.
///
/// Half-integer powers are accepted only when the powers of identical
/// `(a, b)` factors add up to an integer; a lone square root has no integer
/// expansion and is rejected.
pub fn qproduct_series(factors: &[QFactor], order: usize) -> Result<Vec<BigInt>> {
    let mut grouped: BTreeMap<(u32, u32), HalfInteger> = BTreeMap::new();
    for f in factors {
        if f.a == 0 || f.b == 0 {
            return Err(Error::domain(format!(
                "q-product factor (x^{};x^{}) needs positive exponents",
                f.a, f.b
            )));
        }
        let slot = grouped
            .entry((f.a, f.b))
            .or_insert(HalfInteger::from_halves(0));
        *slot = *slot + f.power;
    }

    // Net multiplicity of each (1 − x^m) with m ≤ order.
    let mut multiplicity = vec![0i64; order + 1];
    for (&(a, b), &power) in &grouped {
        let power = power.to_int().ok_or(Error::UnpairedHalfPower { a, b })? as i64;
        if power == 0 {
            continue;
        }
        let mut m = a as usize;
        while m <= order {
            multiplicity[m] += power;
            m += b as usize;
        }
    }

    let mut coeffs = vec![BigInt::from(0); order + 1];
    coeffs[0] = BigInt::from(1);
    for (m, &mult) in multiplicity.iter().enumerate().skip(1) {
        for _ in 0..mult.max(0) {
            // multiply by (1 − x^m)
            for n in (m..=order).rev() {
                let lower = coeffs[n - m].clone();
                coeffs[n] -= lower;
            }
        }
    }
    for (m, &mult) in multiplicity.iter().enumerate().skip(1) {
        for _ in 0..(-mult).max(0) {
            // divide by (1 − x^m)
            for n in m..=order {
                let lower = coeffs[n - m].clone();
                coeffs[n] += lower;
            }
        }
    }
    Ok(coeffs)
}
