//! The partition function `Z^(i,κ)(x)` three ways: theta quotient, product
//! of elementary blocks `T(a,b)`, and the integer CTM spectrum.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::ToPrimitive;

use crate::qseries::{self, HalfInteger, Nome, QFactor, SeriesSum, Truncation};
use crate::{Error, Result};

/// Largest κ accepted by [`ModelPoint::new`].
pub const DEFAULT_KAPPA_CAP: u32 = 64;

/// Default spectrum order, in steps of `x²`.
pub const DEFAULT_SPECTRUM_ORDER: usize = 400;

/// One lattice model (spin κ/2, boundary label i) at one nome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    kappa: u32,
    boundary_i: u32,
    nome: Nome,
}

impl ModelPoint {
    pub fn new(kappa: u32, boundary_i: u32, nome: Nome) -> Result<Self> {
        Self::with_kappa_cap(kappa, boundary_i, nome, DEFAULT_KAPPA_CAP)
    }

    pub fn with_kappa_cap(kappa: u32, boundary_i: u32, nome: Nome, cap: u32) -> Result<Self> {
        check_labels(kappa, boundary_i)?;
        if kappa > cap {
            return Err(Error::domain(format!(
                "kappa={kappa} exceeds the cap {cap}"
            )));
        }
        Ok(ModelPoint {
            kappa,
            boundary_i,
            nome,
        })
    }

    /// Shorthand for `new(kappa, i, Nome::from_epsilon(epsilon)?)`.
    pub fn from_epsilon(kappa: u32, boundary_i: u32, epsilon: f64) -> Result<Self> {
        Self::new(kappa, boundary_i, Nome::from_epsilon(epsilon)?)
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn boundary_i(&self) -> u32 {
        self.boundary_i
    }

    /// The complementary label `κ − i`.
    pub fn i_bar(&self) -> u32 {
        self.kappa - self.boundary_i
    }

    pub fn nome(&self) -> Nome {
        self.nome
    }

    pub fn epsilon(&self) -> f64 {
        self.nome.epsilon()
    }

    /// The same model with the complementary boundary label.
    pub fn mirrored(&self) -> Self {
        ModelPoint {
            boundary_i: self.i_bar(),
            ..*self
        }
    }
}

fn check_labels(kappa: u32, boundary_i: u32) -> Result<()> {
    if kappa == 0 {
        return Err(Error::domain("kappa must be at least 1"));
    }
    if boundary_i > kappa {
        return Err(Error::domain(format!(
            "boundary label i={boundary_i} exceeds kappa={kappa}"
        )));
    }
    Ok(())
}

/// `T(a,b)^power` with `T(a,b) = (x^a;x^b)∞ (x^(b−a);x^b)∞`, `0 < a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockFactor {
    pub a: u32,
    pub b: u32,
    pub power: HalfInteger,
}

impl BlockFactor {
    pub fn new(a: u32, b: u32, power: HalfInteger) -> Result<Self> {
        if !(0 < a && a < b) {
            return Err(Error::domain(format!("block T({a},{b}) needs 0 < a < b")));
        }
        Ok(BlockFactor { a, b, power })
    }

    /// The q-Pochhammer factors of this block. `T(b/2,b)^e` becomes the
    /// single factor `(x^(b/2);x^b)^(2e)`, which removes the half powers.
    pub fn qfactors(&self) -> Vec<QFactor> {
        if 2 * self.a == self.b {
            vec![QFactor::new(self.a, self.b, self.power * 2)]
        } else {
            vec![
                QFactor::new(self.a, self.b, self.power),
                QFactor::new(self.b - self.a, self.b, self.power),
            ]
        }
    }
}

impl fmt::Display for BlockFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{})^{}", self.a, self.b, self.power)
    }
}

/// Factorization of `Z^(i,κ)` into elementary blocks, exactly as the
/// character formula reads. Nothing is cancelled here; for κ = 1 the
/// numerator and denominator `T(2,6)` cancel only numerically.
pub fn block_decomposition(kappa: u32, boundary_i: u32) -> Result<Vec<BlockFactor>> {
    check_labels(kappa, boundary_i)?;
    let modulus = 2 * (kappa + 2);
    let mut blocks = vec![
        BlockFactor::new(2 * (boundary_i + 1), modulus, HalfInteger::ONE)?,
        BlockFactor::new(2, 4, HalfInteger::MINUS_HALF)?,
    ];
    let last = if kappa.is_multiple_of(2) {
        blocks.push(BlockFactor::new(
            kappa + 2,
            modulus,
            HalfInteger::MINUS_HALF,
        )?);
        kappa / 2
    } else {
        kappa.div_ceil(2)
    };
    for j in 1..=last {
        blocks.push(BlockFactor::new(2 * j, modulus, HalfInteger::MINUS_ONE)?);
    }
    Ok(blocks)
}

pub(crate) fn log_t_block_bounded(
    a: u32,
    b: u32,
    nome: Nome,
    trunc: Truncation,
) -> Result<SeriesSum> {
    if !(0 < a && a < b) {
        return Err(Error::domain(format!("block T({a},{b}) needs 0 < a < b")));
    }
    let step = nome.pow(b as f64);
    Ok(
        qseries::log_qpochhammer_bounded(nome.pow(a as f64), step, trunc)?.add(
            qseries::log_qpochhammer_bounded(nome.pow((b - a) as f64), step, trunc)?,
        ),
    )
}

pub fn log_t_block(a: u32, b: u32, nome: Nome, trunc: Truncation) -> Result<f64> {
    log_t_block_bounded(a, b, nome, trunc).map(|s| s.value)
}

/// `T(a,b) = (x^a;x^b)∞ (x^(b−a);x^b)∞`.
pub fn t_block(a: u32, b: u32, nome: Nome, trunc: Truncation) -> Result<f64> {
    log_t_block(a, b, nome, trunc).map(f64::exp)
}

/// `ln Z` from `θ_{x^(2(κ+2))}(x^(2(i+1))) / θ_{x⁴}(x²)`.
pub fn log_partition_theta(point: &ModelPoint, trunc: Truncation) -> Result<f64> {
    let nome = point.nome();
    let numerator = qseries::log_theta(
        nome.pow(2.0 * (point.kappa() + 2) as f64),
        nome.pow(2.0 * (point.boundary_i() + 1) as f64),
        trunc,
    )?;
    let denominator = qseries::log_theta(nome.pow(4.0), nome.pow(2.0), trunc)?;
    Ok(numerator - denominator)
}

pub fn partition_theta(point: &ModelPoint, trunc: Truncation) -> Result<f64> {
    log_partition_theta(point, trunc).map(f64::exp)
}

/// `ln Z = Σ_j e_j ln T(a_j,b_j)` over [`block_decomposition`].
pub fn log_partition_blocks(point: &ModelPoint, trunc: Truncation) -> Result<f64> {
    let mut total = 0.0;
    for block in block_decomposition(point.kappa(), point.boundary_i())? {
        total += block.power.as_f64() * log_t_block(block.a, block.b, point.nome(), trunc)?;
    }
    Ok(total)
}

pub fn partition_blocks(point: &ModelPoint, trunc: Truncation) -> Result<f64> {
    log_partition_blocks(point, trunc).map(f64::exp)
}

/// CTM eigenvalue degeneracies: `d_n` is the coefficient of `x^(2n)` in `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumTable {
    degeneracies: Vec<BigUint>,
}

impl SpectrumTable {
    /// Highest level `N` held in the table.
    pub fn order(&self) -> usize {
        self.degeneracies.len() - 1
    }

    pub fn degeneracies(&self) -> &[BigUint] {
        &self.degeneracies
    }

    pub fn degeneracy(&self, n: usize) -> Option<&BigUint> {
        self.degeneracies.get(n)
    }

    /// `ln d_n`, or `-∞` for an empty level.
    pub fn ln_degeneracy(&self, n: usize) -> f64 {
        let d = &self.degeneracies[n];
        match d.to_f64() {
            Some(v) if v.is_finite() => v.ln(),
            // beyond f64 range: ln d = ln(mantissa) + shift·ln 2
            _ => {
                let shift = d.bits().saturating_sub(64);
                let top = (d >> shift).to_f64().unwrap_or(f64::MAX);
                top.ln() + shift as f64 * std::f64::consts::LN_2
            }
        }
    }

    /// `Σ_{n≤N} d_n x^(2n)` in log form.
    pub fn log_partial_sum(&self, nome: Nome) -> f64 {
        let logs: Vec<f64> = (0..self.degeneracies.len())
            .map(|n| self.ln_degeneracy(n) - 2.0 * n as f64 * nome.epsilon())
            .collect();
        log_sum_exp(&logs)
    }
}

pub(crate) fn log_sum_exp(logs: &[f64]) -> f64 {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
}

/// Exact CTM spectrum of `Z^(i,κ)` up to level `order` (in steps of `x²`).
pub fn ctm_spectrum(kappa: u32, boundary_i: u32, order: usize) -> Result<SpectrumTable> {
    let factors: Vec<QFactor> = block_decomposition(kappa, boundary_i)?
        .iter()
        .flat_map(BlockFactor::qfactors)
        .collect();
    let series = qseries::qproduct_series(&factors, 2 * order)?;
    let mut degeneracies = Vec::with_capacity(order + 1);
    for (index, c) in series.into_iter().enumerate() {
        if c.sign() == Sign::Minus {
            return Err(Error::NegativeCoefficient { index });
        }
        if index % 2 == 1 {
            if c != BigInt::from(0) {
                return Err(Error::OddPowerCoefficient { index });
            }
            continue;
        }
        degeneracies.push(c.magnitude().clone());
    }
    if degeneracies[0] != BigUint::from(1u32) {
        return Err(Error::Inconsistent(format!(
            "ground level degeneracy is {}, expected 1",
            degeneracies[0]
        )));
    }
    Ok(SpectrumTable { degeneracies })
}
