//! Column correlation metrics and the weights that carry them through the
//! Kronecker construction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::design::DesignMatrix;
use crate::error::{invalid, Error, Result};

/// Pairwise column correlations of a design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub m: usize,
    /// Row-major `m × m` correlation matrix with unit diagonal.
    pub rho: Vec<f64>,
    /// Largest absolute off-diagonal correlation.
    pub rho_max: f64,
    /// Mean squared off-diagonal correlation over the `m(m-1)/2` pairs.
    pub rho_sq: f64,
}

impl CorrelationReport {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rho[i * self.m + j]
    }

    pub fn is_zero(&self) -> bool {
        self.rho_max == 0.0
    }
}

impl fmt::Display for CorrelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rho_max = {}, rho_sq = {}",
            sig6(self.rho_max),
            sig6(self.rho_sq)
        )
    }
}

/// Format to six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `ρ_ij = d_iᵀd_j / sqrt(d_iᵀd_i · d_jᵀd_j)` from exact integer inner
/// products; the doubling factor cancels.
pub fn correlation(design: &DesignMatrix) -> Result<CorrelationReport> {
    let m = design.factors();
    for c in 0..m {
        let col = design.column(c);
        if col.iter().all(|&v| v == col[0]) {
            return Err(Error::DegenerateColumn(c));
        }
    }
    let g = design.gram();
    let mut rho = vec![0.0; m * m];
    let mut rho_max: f64 = 0.0;
    let mut sum_sq = 0.0;
    for i in 0..m {
        rho[i * m + i] = 1.0;
        for j in i + 1..m {
            let num = g[i * m + j] as f64;
            let den = ((g[i * m + i] as f64) * (g[j * m + j] as f64)).sqrt();
            let r = num / den;
            rho[i * m + j] = r;
            rho[j * m + i] = r;
            rho_max = rho_max.max(r.abs());
            sum_sq += r * r;
        }
    }
    let pairs = m * (m.saturating_sub(1)) / 2;
    let rho_sq = if pairs == 0 { 0.0 } else { sum_sq / pairs as f64 };
    Ok(CorrelationReport {
        m,
        rho,
        rho_max,
        rho_sq,
    })
}

/// Exact non-negative rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: u128,
    pub den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::ops::Add for Fraction {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        Self::new(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )
    }
}

/// Weights relating the correlation metrics of `L = A⊗B + n2·C⊗D` to those
/// of its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightSet {
    pub n1: usize,
    pub n2: usize,
    pub m1: usize,
    pub m2: usize,
    /// Coefficient of `ρ²(B)` in `ρ²(L)`.
    pub w1: Fraction,
    /// Coefficient of `ρ²(C)` in `ρ²(L)`.
    pub w2: Fraction,
    /// Scale from `ρ_M(B)` to `ρ_M(L)`.
    pub w3: Fraction,
    /// Scale from `ρ_M(C)` to `ρ_M(L)`.
    pub w4: Fraction,
}

pub fn propagation_weights(n1: usize, n2: usize, m1: usize, m2: usize) -> Result<WeightSet> {
    if n1 < 2 || n2 < 2 {
        return Err(invalid(format!(
            "run counts must be at least 2, got n1={n1}, n2={n2}"
        )));
    }
    if m1 == 0 || m2 == 0 {
        return Err(invalid("factor counts must be positive"));
    }
    if m1 * m2 < 2 {
        return Err(invalid(
            "m1·m2 must be at least 2: a one-column design has no correlations",
        ));
    }
    let (n1u, n2u, m1u, m2u) = (n1 as u128, n2 as u128, m1 as u128, m2 as u128);
    let n = n1u * n2u;
    let nn = n * n - 1;
    let b = n2u * n2u - 1;
    let c = n1u * n1u - 1;
    let pairs = m1u * m2u - 1;
    Ok(WeightSet {
        n1,
        n2,
        m1,
        m2,
        w1: Fraction::new((m2u - 1) * b * b, pairs * nn * nn),
        w2: Fraction::new(n2u.pow(4) * (m1u - 1) * c * c, pairs * nn * nn),
        w3: Fraction::new(b, nn),
        w4: Fraction::new(n2u * n2u * c, nn),
    })
}
