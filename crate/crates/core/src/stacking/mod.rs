//! Vertical stacking of designs on complementary level sets, the fold-based
//! expansion of an orthogonal Latin hypercube, and the best-known
//! construction for any admissible run size.

mod planner;

pub use planner::{construct_best, Planner, Step, PRINTED_RECIPES};

use crate::design::{levels_for, DesignMatrix, Recipe, StackMethod};
use crate::error::{invalid, Error, Result};
use crate::existence::olh_exists;
use crate::kronecker::{
    fold_pair, orthogonal_kronecker, shifted_kronecker, shifted_levels, KroneckerPlan,
};
use crate::seeds::{fold_matrix, hadamard, instantiate_fold, small_run_target, SymbolicFoldMatrix};

/// The two level sets that a stacked design of `n_a + n_b` runs splits into,
/// in the stacked design's doubled units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackingPlan {
    pub method: StackMethod,
    pub n_a: usize,
    pub n_b: usize,
    pub s_a: Vec<i64>,
    pub s_b: Vec<i64>,
}

impl StackingPlan {
    /// Odd `n_a` and `n_b = n_a ± 1`: `s_a` holds the even true levels,
    /// `s_b` the odd ones.
    pub fn first(n_a: usize, n_b: usize) -> Result<Self> {
        if n_a.is_multiple_of(2) || n_a.abs_diff(n_b) != 1 {
            return Err(invalid(format!(
                "first stacking needs an odd n_a and |n_a − n_b| = 1, got {n_a} and {n_b}"
            )));
        }
        let twice = |v: Vec<i64>| v.into_iter().map(|x| 2 * x).collect();
        let plan = Self {
            method: StackMethod::First,
            n_a,
            n_b,
            s_a: twice(levels_for(n_a)?),
            s_b: twice(levels_for(n_b)?),
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Inner block of `n_a` runs, outer shifted block of `n_b` runs.
    pub fn second(n_a: usize, n_b: usize) -> Result<Self> {
        if n_a == 0 || n_b == 0 || !n_b.is_multiple_of(2) {
            return Err(invalid(format!(
                "second stacking needs n_a ≥ 1 and a positive even n_b, got {n_a} and {n_b}"
            )));
        }
        let plan = Self {
            method: StackMethod::Second,
            n_a,
            n_b,
            s_a: levels_for(n_a)?,
            s_b: shifted_levels(n_a, n_b),
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Disjoint and exhaustive for the stacked run size.
    pub fn validate(&self) -> Result<()> {
        let mut all: Vec<i64> = self.s_a.iter().chain(&self.s_b).copied().collect();
        all.sort_unstable();
        if all != levels_for(self.n_a + self.n_b)? {
            return Err(invalid("level sets do not partition the stacked levels"));
        }
        Ok(())
    }
}

fn recipe_of(d: &DesignMatrix) -> Recipe {
    d.recipe()
        .cloned()
        .unwrap_or_else(|| Recipe::seed(format!("input{}x{}", d.runs(), d.factors())))
}

fn stack_checked(
    da: &DesignMatrix,
    db: &DesignMatrix,
    method: StackMethod,
    children: Vec<Recipe>,
) -> Result<DesignMatrix> {
    if da.factors() != db.factors() {
        return Err(invalid(format!(
            "cannot stack {} columns on {} columns",
            da.factors(),
            db.factors()
        )));
    }
    let n = da.runs() + db.runs();
    let levels = levels_for(n)?;
    for c in 0..da.factors() {
        let mut both = da.level_multiset(c);
        both.extend(db.level_multiset(c));
        both.sort_unstable();
        if both != levels {
            return Err(invalid(format!(
                "column {} of the two blocks does not partition the levels of a {n}-run hypercube",
                c + 1
            )));
        }
    }
    let out = da.vstack(db)?;
    if da.is_orthogonal() && db.is_orthogonal() && !out.is_orthogonal() {
        return Err(Error::VerificationFailed(
            "stacking orthogonal blocks produced correlated columns".into(),
        ));
    }
    Ok(out.with_recipe(Recipe::Stack { method, children }))
}

/// Stack two blocks whose column level sets partition those of an
/// `(n_a + n_b)`-run Latin hypercube.
pub fn stack(da: &DesignMatrix, db: &DesignMatrix) -> Result<DesignMatrix> {
    stack_checked(da, db, StackMethod::Plain, vec![recipe_of(da), recipe_of(db)])
}

fn require_olh(d: &DesignMatrix, what: &str) -> Result<()> {
    if d.is_olh() {
        Ok(())
    } else {
        Err(invalid(format!("{what} is not an orthogonal Latin hypercube")))
    }
}

/// Stack an odd-run and an even-run orthogonal Latin hypercube whose run
/// counts differ by one. The doubled entries of each input become the true
/// levels of the result, so the odd-run block takes the even levels and the
/// even-run block the odd ones.
pub fn first_stacking(olh_a: &DesignMatrix, olh_b: &DesignMatrix) -> Result<DesignMatrix> {
    let (n_a, n_b) = (olh_a.runs(), olh_b.runs());
    StackingPlan::first(n_a, n_b)?;
    if n_b % 4 != 0 {
        return Err(invalid(format!(
            "the even-run block must have a multiple of 4 runs, got {n_b}"
        )));
    }
    require_olh(olh_a, "the odd-run block")?;
    require_olh(olh_b, "the even-run block")?;
    stack_checked(
        &olh_a.map(|v| 2 * v),
        &olh_b.map(|v| 2 * v),
        StackMethod::First,
        vec![recipe_of(olh_a), recipe_of(olh_b)],
    )
}

/// Stack an `n_a`-run orthogonal Latin hypercube on a shifted orthogonal
/// design whose levels are `±(n_a + 1), …, ±(n_a + n_b − 1)` (doubled).
pub fn second_stacking(olh_a: &DesignMatrix, shifted_b: &DesignMatrix) -> Result<DesignMatrix> {
    let plan = StackingPlan::second(olh_a.runs(), shifted_b.runs())?;
    require_olh(olh_a, "the inner block")?;
    if olh_a.factors() != shifted_b.factors() {
        return Err(invalid(format!(
            "inner block has {} columns, outer block {}",
            olh_a.factors(),
            shifted_b.factors()
        )));
    }
    if let Some(c) = (0..shifted_b.factors()).find(|&c| shifted_b.level_multiset(c) != plan.s_b) {
        return Err(invalid(format!(
            "column {} of the outer block is not on the levels ±{}..±{}",
            c + 1,
            plan.n_a + 1,
            plan.n_a + plan.n_b - 1
        )));
    }
    stack_checked(
        olh_a,
        shifted_b,
        StackMethod::Second,
        vec![recipe_of(olh_a), recipe_of(shifted_b)],
    )
}

/// `A = (S; S)` and `C = (X; −X)` from a fold matrix instantiated with the
/// given values, where `S` is the sign pattern of `X`.
pub(crate) fn fold_blocks(
    fold: &SymbolicFoldMatrix,
    values: &[i64],
) -> Result<(crate::design::SignMatrix, DesignMatrix)> {
    let full = instantiate_fold(fold, values)?;
    let half = fold.rows() / 2;
    let top = full.to_rows()[..half].to_vec();
    let c0 = DesignMatrix::from_rows(top)?.with_recipe(Recipe::seed(format!(
        "fold{}x{}",
        fold.rows(),
        fold.cols()
    )));
    fold_pair(&fold.top_sign_pattern(), &c0)
}

/// From an `OLH(n, m)` with `n ≡ 0 mod 4` and a Hadamard matrix of order
/// `n`, build an `OLH(f·n, (f/2)·m)` for `f ∈ {2, 4, 8, 16}`; with
/// `plus_one`, an `OLH(f·n + 1, (f/2)·m)` instead.
pub fn expand(olh: &DesignMatrix, factor: usize, plus_one: bool) -> Result<DesignMatrix> {
    let fold = fold_matrix(factor)?;
    let (n, m) = (olh.runs(), olh.factors());
    if n % 4 != 0 {
        return Err(invalid(format!("run count must be a multiple of 4, got {n}")));
    }
    require_olh(olh, "the input")?;
    let d = hadamard(n)?.first_columns(m)?;
    let d_label = format!("hadamard{n}[..{m}]");
    let half = factor / 2;
    let out = if plus_one {
        let values: Vec<i64> = (0..half).map(|i| 1 + (2 * i as i64 + 1) * n as i64).collect();
        let (a, c) = fold_blocks(&fold, &values)?;
        let plan = KroneckerPlan::new(a, olh.clone(), c, d, 1).labelled(format!("fold{factor}"), d_label);
        let outer = shifted_kronecker(&plan, 1)?;
        second_stacking(&DesignMatrix::zeros(1, outer.factors())?, &outer)?
    } else {
        let values: Vec<i64> = (0..half).map(|i| 2 * i as i64 + 1).collect();
        let (a, c) = fold_blocks(&fold, &values)?;
        let plan =
            KroneckerPlan::new(a, olh.clone(), c, d, n as i64).labelled(format!("fold{factor}"), d_label);
        orthogonal_kronecker(&plan)?
    };
    Ok(out.with_recipe(Recipe::Expand {
        factor,
        plus_one,
        child: Box::new(recipe_of(olh)),
    }))
}

/// A guaranteed lower bound on the largest number of orthogonal factors
/// for `n` runs: the small-run catalog below 17 runs, then by the residue
/// of `n` modulo 16, 32 and 64.
pub fn lower_bound_m(n: usize) -> usize {
    if !olh_exists(n) {
        return 1;
    }
    if n < 17 {
        return small_run_target(n).unwrap_or(2);
    }
    let (k16, j) = (n / 16, n % 16);
    let mut m = 6;
    if j == 11 {
        m = 7;
    }
    if (j == 0 || j == 1) && k16 >= 2 {
        m = 12;
    }
    if matches!(n % 32, 0 | 1) && n / 32 >= 2 {
        m = 24;
    }
    if matches!(n % 64, 0 | 1) && n / 64 >= 2 {
        m = 48;
    }
    m
}
