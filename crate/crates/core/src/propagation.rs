//! Predicting the correlations of a Kronecker-built Latin hypercube from
//! those of its ingredients.
//!
//! When `A` and `D` have orthogonal columns and `AᵀC = 0` or `BᵀD = 0`,
//! the cross terms of `LᵀL` vanish and
//! `(2L)ᵀ(2L) = n1·I⊗(2B)ᵀ(2B) + n2²·(2C)ᵀ(2C)⊗(n2·I)`. Every correlation
//! of `L` is then a fixed multiple of one correlation of `B` or of `C`.

use crate::design::{dot, SignMatrix};
use crate::error::{invalid, violation, Clause, Result};
use crate::kronecker::{latin_conditions, KroneckerPlan};
use crate::metrics::{propagation_weights, CorrelationReport};

/// Predicted metrics of the combined design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoPrediction {
    pub rho_sq: f64,
    pub rho_max: f64,
}

fn cross_vanishes(signs: &SignMatrix, cols: &[Vec<i64>]) -> bool {
    (0..signs.cols()).all(|i| {
        let s = signs.column(i);
        cols.iter().all(|c| dot(&s, c) == 0)
    })
}

/// Refuse plans outside the hypotheses under which the prediction is exact.
fn check_hypotheses(plan: &KroneckerPlan) -> Result<()> {
    let cond = latin_conditions(plan)?;
    if plan.gamma != plan.b.runs() as i64 {
        return Err(invalid(format!(
            "gamma must equal the run count of B ({}), got {}",
            plan.b.runs(),
            plan.gamma
        )));
    }
    if !cond.cond_i {
        return Err(violation(Clause::II, "B and C must both be Latin hypercubes"));
    }
    if !cond.cond_iia && !cond.cond_iib {
        return Err(violation(
            Clause::IV,
            "neither mirrored-sign condition holds, so L need not be a Latin hypercube",
        ));
    }
    if !plan.a.is_column_orthogonal() || !plan.d.is_column_orthogonal() {
        return Err(violation(Clause::I, "A and D must have orthogonal columns"));
    }
    if !cross_vanishes(&plan.a, &plan.c.columns()) && !cross_vanishes(&plan.d, &plan.b.columns()) {
        return Err(violation(Clause::III, "neither AᵀC nor BᵀD is zero"));
    }
    Ok(())
}

/// `ρ²(L) = w1·ρ²(B) + w2·ρ²(C)` and `ρ_M(L) = max(w3·ρ_M(B), w4·ρ_M(C))`.
pub fn predict_rho(
    plan: &KroneckerPlan,
    rho_b: &CorrelationReport,
    rho_c: &CorrelationReport,
) -> Result<RhoPrediction> {
    check_hypotheses(plan)?;
    let (n1, n2, m1, m2) = plan.dims();
    if rho_b.m != m2 || rho_c.m != m1 {
        return Err(invalid("correlation reports do not match the plan's B and C"));
    }
    if m1 * m2 < 2 {
        return Ok(RhoPrediction {
            rho_sq: 0.0,
            rho_max: 0.0,
        });
    }
    let w = propagation_weights(n1, n2, m1, m2)?;
    Ok(RhoPrediction {
        rho_sq: w.w1.value() * rho_b.rho_sq + w.w2.value() * rho_c.rho_sq,
        rho_max: (w.w3.value() * rho_b.rho_max).max(w.w4.value() * rho_c.rho_max),
    })
}

/// `n1·I⊗(2B)ᵀ(2B) + n2²·(2C)ᵀ(2C)⊗(n2·I)`, the Gram matrix of the
/// doubled combination under the prediction hypotheses; row-major
/// `m1·m2 × m1·m2`.
pub fn kronecker_gram(plan: &KroneckerPlan) -> Result<Vec<i64>> {
    check_hypotheses(plan)?;
    let (n1, n2, m1, m2) = plan.dims();
    let (gb, gc) = (plan.b.gram(), plan.c.gram());
    let m = m1 * m2;
    let mut g = vec![0i64; m * m];
    let (n1, n2) = (n1 as i64, n2 as i64);
    for i in 0..m1 {
        for j in 0..m2 {
            for i2 in 0..m1 {
                for j2 in 0..m2 {
                    let mut v = 0;
                    if i == i2 {
                        v += n1 * gb[j * m2 + j2];
                    }
                    if j == j2 {
                        v += n2 * n2 * n2 * gc[i * m1 + i2];
                    }
                    g[(i * m2 + j) * m + i2 * m2 + j2] = v;
                }
            }
        }
    }
    Ok(g)
}
