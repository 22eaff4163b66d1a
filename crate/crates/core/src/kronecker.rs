//! Kronecker-product constructions `L = A⊗B + γ·C⊗D`.
//!
//! `A` (`n1 × m1`) and `D` (`n2 × m2`) are ±1 matrices; `B` (`n2 × m2`) and
//! `C` (`n1 × m1`) are designs. Because designs are stored doubled and the
//! sign matrices are ±1, `2L = A⊗(2B) + γ·(2C)⊗D` is computed exactly.
//! Row `p·n2 + q`, column `i·m2 + j` of `L` is `a_pi·b_qj + γ·c_pi·d_qj`.

use crate::design::{dot, DesignMatrix, Recipe, SignMatrix};
use crate::error::{invalid, violation, Clause, Error, Result};

/// Inputs to the Kronecker construction.
#[derive(Debug, Clone)]
pub struct KroneckerPlan {
    pub a: SignMatrix,
    pub b: DesignMatrix,
    pub c: DesignMatrix,
    pub d: SignMatrix,
    /// Multiplies the (already doubled) `C⊗D` term.
    pub gamma: i64,
    /// Short descriptions of `A` and `D` recorded in the recipe.
    pub a_label: String,
    pub d_label: String,
}

impl KroneckerPlan {
    pub fn new(a: SignMatrix, b: DesignMatrix, c: DesignMatrix, d: SignMatrix, gamma: i64) -> Self {
        let a_label = format!("{}x{}", a.rows(), a.cols());
        let d_label = format!("{}x{}", d.rows(), d.cols());
        Self {
            a,
            b,
            c,
            d,
            gamma,
            a_label,
            d_label,
        }
    }

    pub fn labelled(mut self, a: impl Into<String>, d: impl Into<String>) -> Self {
        self.a_label = a.into();
        self.d_label = d.into();
        self
    }

    /// `(n1, n2, m1, m2)`.
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.a.rows(), self.b.runs(), self.a.cols(), self.b.factors())
    }

    fn check_shapes(&self) -> Result<()> {
        if (self.a.rows(), self.a.cols()) != (self.c.runs(), self.c.factors()) {
            return Err(invalid(format!(
                "A is {}x{} but C is {}x{}",
                self.a.rows(),
                self.a.cols(),
                self.c.runs(),
                self.c.factors()
            )));
        }
        if (self.d.rows(), self.d.cols()) != (self.b.runs(), self.b.factors()) {
            return Err(invalid(format!(
                "D is {}x{} but B is {}x{}",
                self.d.rows(),
                self.d.cols(),
                self.b.runs(),
                self.b.factors()
            )));
        }
        Ok(())
    }
}

/// Outcome of the Latin hypercube conditions on a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatinConditions {
    /// `B` and `C` are Latin hypercubes.
    pub cond_i: bool,
    /// Whenever `c_pi = −c_p'i`, `a_pi = a_p'i`.
    pub cond_iia: bool,
    /// Whenever `b_qj = −b_q'j`, `d_qj = d_q'j`.
    pub cond_iib: bool,
}

impl LatinConditions {
    /// With `γ = n2` these guarantee the combination is a Latin hypercube.
    pub fn guarantee_latin(&self) -> bool {
        self.cond_i && (self.cond_iia || self.cond_iib)
    }
}

/// For every column, rows holding opposite levels carry equal signs.
fn mirrored_rows_agree(levels: &DesignMatrix, signs: &SignMatrix) -> bool {
    (0..levels.factors()).all(|c| {
        let col = levels.column(c);
        (0..col.len()).all(|p| {
            (p + 1..col.len())
                .all(|q| col[p] != -col[q] || signs.get(p, c) == signs.get(q, c))
        })
    })
}

pub fn latin_conditions(plan: &KroneckerPlan) -> Result<LatinConditions> {
    plan.check_shapes()?;
    Ok(LatinConditions {
        cond_i: plan.b.is_latin_hypercube() && plan.c.is_latin_hypercube(),
        cond_iia: mirrored_rows_agree(&plan.c, &plan.a),
        cond_iib: mirrored_rows_agree(&plan.b, &plan.d),
    })
}

/// `alpha·A⊗B + gamma·C⊗D` in doubled units, without any checks beyond
/// shapes.
fn combine(plan: &KroneckerPlan, alpha: i64, gamma: i64) -> Result<DesignMatrix> {
    plan.check_shapes()?;
    let (n1, n2, m1, m2) = plan.dims();
    let m = m1 * m2;
    let mut entries = vec![0i64; n1 * n2 * m];
    for p in 0..n1 {
        for i in 0..m1 {
            let a = i64::from(plan.a.get(p, i));
            let c = plan.c.get(p, i);
            for q in 0..n2 {
                let row = (p * n2 + q) * m;
                for j in 0..m2 {
                    entries[row + i * m2 + j] = alpha * a * plan.b.get(q, j)
                        + gamma * c * i64::from(plan.d.get(q, j));
                }
            }
        }
    }
    DesignMatrix::new(n1 * n2, m, entries)
}

/// The raw combination `A⊗B + γ·C⊗D`; no hypotheses are checked.
pub fn kron_combine(plan: &KroneckerPlan) -> Result<DesignMatrix> {
    combine(plan, 1, plan.gamma)
}

fn cross_products_vanish(signs: &SignMatrix, design: &DesignMatrix) -> bool {
    let cols = design.columns();
    (0..signs.cols()).all(|i| {
        let s = signs.column(i);
        cols.iter().all(|c| dot(&s, c) == 0)
    })
}

/// Checks the sign-matrix, cross-product and fold hypotheses shared by the
/// orthogonal and shifted constructions.
fn check_common(plan: &KroneckerPlan) -> Result<LatinConditions> {
    if !plan.a.is_column_orthogonal() {
        return Err(violation(Clause::I, "columns of A are not orthogonal"));
    }
    if !plan.d.is_column_orthogonal() {
        return Err(violation(Clause::I, "columns of D are not orthogonal"));
    }
    if !cross_products_vanish(&plan.a, &plan.c) && !cross_products_vanish(&plan.d, &plan.b) {
        return Err(violation(Clause::III, "neither AᵀC nor BᵀD is zero"));
    }
    let cond = latin_conditions(plan)?;
    if !cond.cond_iia && !cond.cond_iib {
        return Err(violation(
            Clause::IV,
            "opposite levels of C meet unequal signs of A, and opposite levels of B meet unequal signs of D",
        ));
    }
    Ok(cond)
}

fn recipe_of(d: &DesignMatrix) -> Recipe {
    d.recipe()
        .cloned()
        .unwrap_or_else(|| Recipe::seed(format!("input{}x{}", d.runs(), d.factors())))
}

fn verified(design: DesignMatrix, what: &str) -> Result<DesignMatrix> {
    if !design.is_latin_hypercube() {
        return Err(Error::VerificationFailed(format!(
            "{what} output is not a Latin hypercube"
        )));
    }
    if !design.is_orthogonal() {
        return Err(Error::VerificationFailed(format!(
            "{what} output has correlated columns"
        )));
    }
    Ok(design)
}

fn check_orthogonal_plan(plan: &KroneckerPlan) -> Result<()> {
    plan.check_shapes()?;
    let n2 = plan.b.runs() as i64;
    if plan.gamma != n2 {
        return Err(invalid(format!(
            "gamma must equal the run count of B ({n2}), got {}",
            plan.gamma
        )));
    }
    check_common(plan)?;
    if !plan.b.is_olh() {
        return Err(violation(Clause::II, "B is not an orthogonal Latin hypercube"));
    }
    if !plan.c.is_olh() {
        return Err(violation(Clause::II, "C is not an orthogonal Latin hypercube"));
    }
    Ok(())
}

/// An orthogonal Latin hypercube of `n1·n2` runs and `m1·m2` factors.
///
/// Requires `γ = n2`, column-orthogonal `A` and `D`, orthogonal Latin
/// hypercubes `B` and `C`, `AᵀC = 0` or `BᵀD = 0`, and one of the two
/// mirrored-sign conditions of [`latin_conditions`].
pub fn orthogonal_kronecker(plan: &KroneckerPlan) -> Result<DesignMatrix> {
    check_orthogonal_plan(plan)?;
    let out = verified(kron_combine(plan)?, "Kronecker")?;
    Ok(out.with_recipe(Recipe::Kronecker {
        gamma: plan.gamma,
        a: plan.a_label.clone(),
        d: plan.d_label.clone(),
        b: Box::new(recipe_of(&plan.b)),
        c: Box::new(recipe_of(&plan.c)),
    }))
}

/// With `n1 = n2 = n0`, the juxtaposition `(L, U)` of the orthogonal
/// construction `L` and `U = −n0·A⊗B + C⊗D`: `2·m1·m2` orthogonal factors
/// in `n0²` runs.
pub fn paired_kronecker(plan: &KroneckerPlan) -> Result<DesignMatrix> {
    let (n1, n2, _, _) = plan.dims();
    if n1 != n2 {
        return Err(invalid(format!(
            "paired construction needs equal run counts, got {n1} and {n2}"
        )));
    }
    check_orthogonal_plan(plan)?;
    let l = kron_combine(plan)?;
    let u = combine(plan, -(n1 as i64), 1)?;
    let out = verified(l.hstack(&u)?, "paired Kronecker")?;
    Ok(out.with_recipe(Recipe::Paired {
        n0: n1,
        a: plan.a_label.clone(),
        d: plan.d_label.clone(),
        b: Box::new(recipe_of(&plan.b)),
        c: Box::new(recipe_of(&plan.c)),
    }))
}

/// Doubled levels `±(n_a + 1), ±(n_a + 3), …, ±(n_a + rows − 1)`.
pub fn shifted_levels(n_a: usize, rows: usize) -> Vec<i64> {
    let mut v: Vec<i64> = (0..rows / 2)
        .map(|u| (n_a + 2 * u + 1) as i64)
        .flat_map(|x| [-x, x])
        .collect();
    v.sort_unstable();
    v
}

/// An orthogonal design on the outer levels of an `(n_a + n1·n2)`-run
/// hypercube, for stacking under an `n_a`-run orthogonal Latin hypercube.
///
/// Requires `γ = 1`, `C` orthogonal with every column on the doubled
/// levels `±(n_a + (2u − 1)·n2)`, `B` an orthogonal Latin hypercube, and
/// the same sign-matrix, cross-product and mirrored-sign hypotheses as
/// [`orthogonal_kronecker`].
pub fn shifted_kronecker(plan: &KroneckerPlan, n_a: usize) -> Result<DesignMatrix> {
    plan.check_shapes()?;
    if plan.gamma != 1 {
        return Err(invalid(format!(
            "the shifted construction uses gamma = 1, got {}",
            plan.gamma
        )));
    }
    let (n1, n2, _, _) = plan.dims();
    if n1 % 2 != 0 {
        return Err(invalid(format!("C needs an even run count, got {n1}")));
    }
    check_common(plan)?;
    if !plan.b.is_olh() {
        return Err(violation(Clause::II, "B is not an orthogonal Latin hypercube"));
    }
    let mut want: Vec<i64> = (1..=n1 / 2)
        .map(|u| (n_a + (2 * u - 1) * n2) as i64)
        .flat_map(|x| [-x, x])
        .collect();
    want.sort_unstable();
    if let Some(c) = (0..plan.c.factors()).find(|&c| plan.c.level_multiset(c) != want) {
        return Err(violation(
            Clause::II,
            format!("column {} of C is not on the levels ±(n_a + (2u−1)·n2)", c + 1),
        ));
    }
    if !plan.c.is_orthogonal() {
        return Err(violation(Clause::II, "columns of C are not orthogonal"));
    }
    let out = kron_combine(plan)?;
    let levels = shifted_levels(n_a, n1 * n2);
    if let Some(c) = (0..out.factors()).find(|&c| out.level_multiset(c) != levels) {
        return Err(Error::VerificationFailed(format!(
            "column {} of the shifted design is off the outer level set",
            c + 1
        )));
    }
    if !out.is_orthogonal() {
        return Err(Error::VerificationFailed(
            "shifted design has correlated columns".into(),
        ));
    }
    Ok(out.with_recipe(Recipe::Shifted {
        n_a,
        a: plan.a_label.clone(),
        d: plan.d_label.clone(),
        b: Box::new(recipe_of(&plan.b)),
        c: Box::new(recipe_of(&plan.c)),
    }))
}

/// `A = (A0; A0)` and `C = (C0; −C0)`, after checking that the columns of
/// `A` and `C` are all mutually orthogonal.
pub fn fold_pair(a0: &SignMatrix, c0: &DesignMatrix) -> Result<(SignMatrix, DesignMatrix)> {
    if (a0.rows(), a0.cols()) != (c0.runs(), c0.factors()) {
        return Err(invalid(format!(
            "A0 is {}x{} but C0 is {}x{}",
            a0.rows(),
            a0.cols(),
            c0.runs(),
            c0.factors()
        )));
    }
    let a = a0.vstack(a0)?;
    let mut c = c0.vstack(&c0.map(|v| -v))?;
    if let Some(r) = c0.recipe() {
        c = c.with_recipe(r.clone());
    }
    if !a.is_column_orthogonal() {
        return Err(violation(Clause::I, "columns of the stacked A are not orthogonal"));
    }
    if !c.is_orthogonal() {
        return Err(violation(Clause::II, "columns of the folded C are not orthogonal"));
    }
    if !cross_products_vanish(&a, &c) {
        return Err(violation(Clause::III, "AᵀC is not zero"));
    }
    Ok((a, c))
}

/// Dense Kronecker product of two integer matrices given as rows.
pub fn kron_dense(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let bc = b.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(a.len() * b.len());
    for ar in a {
        for br in b {
            let mut row = Vec::with_capacity(ar.len() * bc);
            for &x in ar {
                row.extend(br.iter().map(|&y| x * y));
            }
            out.push(row);
        }
    }
    out
}
