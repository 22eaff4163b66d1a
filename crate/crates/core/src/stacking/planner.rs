//! Chooses, for every run size, the construction that yields the most
//! orthogonal columns from the catalog and the Kronecker and stacking
//! rules, then builds the design.
//!
//! Each rule is evaluated on the column counts already known for smaller
//! run sizes, so the table is filled bottom-up. When several rules reach
//! the same count, an entry of [`PRINTED_RECIPES`] wins; otherwise the
//! first rule in evaluation order does.

use crate::design::{DesignMatrix, Recipe, SignMatrix};
use crate::error::{Error, Result};
use crate::existence::olh_exists;
use crate::kronecker::{orthogonal_kronecker, paired_kronecker, shifted_kronecker, KroneckerPlan};
use crate::seeds::{max_sign_columns, seed_olh, sign_columns, widest_fold, widest_fold_columns};

use super::{first_stacking, fold_blocks, second_stacking};

/// Column count standing for "any number": the one-run zero design.
const UNBOUNDED: usize = usize::MAX;

/// One construction rule applied at a run size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// The one-run design `(0, …, 0)`.
    ZeroRow,
    /// The single canonical column; the only option when `n < 4` or
    /// `n ≡ 2 mod 4`.
    Canonical,
    /// The embedded small-run design.
    Catalog,
    /// `n = x·y`: a fold-over `C` of order `x` (or, for odd `x`, the
    /// canonical column with `A` all ones) combined with the best `y`-run
    /// design.
    Kronecker { x: usize, y: usize },
    /// `n = n0²`: both halves of the paired construction.
    Paired { n0: usize },
    /// `n = n_a + x·y`: the best `n_a`-run design stacked on a shifted
    /// design of `x·y` runs.
    ShiftedStack { n_a: usize, x: usize, y: usize },
    /// `n = n_a + n_b` with odd `n_a` and `n_b = n_a ± 1 ≡ 0 mod 4`.
    FirstStack { n_a: usize, n_b: usize },
}

/// Recipes spelled out for particular run sizes; used whenever they reach
/// the best available column count.
pub const PRINTED_RECIPES: &[(usize, Step)] = &[
    (23, Step::FirstStack { n_a: 11, n_b: 12 }),
    (24, Step::Kronecker { x: 2, y: 12 }),
    (25, Step::FirstStack { n_a: 13, n_b: 12 }),
    (27, Step::ShiftedStack { n_a: 11, x: 16, y: 1 }),
    (28, Step::ShiftedStack { n_a: 12, x: 16, y: 1 }),
    (29, Step::ShiftedStack { n_a: 13, x: 16, y: 1 }),
    (31, Step::ShiftedStack { n_a: 15, x: 16, y: 1 }),
    (32, Step::Kronecker { x: 2, y: 16 }),
    (33, Step::ShiftedStack { n_a: 1, x: 2, y: 16 }),
    (64, Step::Paired { n0: 8 }),
    (144, Step::Paired { n0: 12 }),
    (192, Step::Kronecker { x: 16, y: 12 }),
    (256, Step::Paired { n0: 16 }),
];

/// Best known column count and rule for every run size up to a limit.
#[derive(Debug, Clone)]
pub struct Planner {
    table: Vec<(usize, Step)>,
}

impl Planner {
    /// Fill the table for run sizes `1..=limit`.
    pub fn up_to(limit: usize) -> Self {
        let mut p = Self {
            table: vec![(0, Step::Canonical)],
        };
        for n in 1..=limit {
            let entry = p.choose(n);
            p.table.push(entry);
        }
        p
    }

    pub fn limit(&self) -> usize {
        self.table.len() - 1
    }

    /// Largest column count the planner can build for `n` runs.
    pub fn best_m(&self, n: usize) -> usize {
        self.table[n].0
    }

    pub fn step(&self, n: usize) -> Step {
        self.table[n].1
    }

    /// Columns usable as the `B` block of `y` runs: limited both by the
    /// best design and by the orthogonal ±1 columns available for `D`.
    fn inner_m(&self, y: usize) -> usize {
        self.best_m(y).min(max_sign_columns(y))
    }

    /// Column count a rule reaches, or `None` if it does not apply.
    pub fn evaluate(&self, n: usize, step: Step) -> Option<usize> {
        let fold_m = |x: usize| {
            if x.is_multiple_of(2) {
                widest_fold_columns(x)
            } else {
                1
            }
        };
        match step {
            Step::ZeroRow => (n == 1).then_some(UNBOUNDED),
            Step::Canonical => (n >= 1).then_some(1),
            Step::Catalog => seed_olh(n).ok().map(|e| e.m),
            Step::Kronecker { x, y } => {
                (x >= 2 && y >= 1 && x * y == n).then(|| fold_m(x) * self.inner_m(y))
            }
            Step::Paired { n0 } => (n0 >= 2 && n0 % 2 == 0 && n0 * n0 == n)
                .then(|| 2 * fold_m(n0) * self.inner_m(n0)),
            Step::ShiftedStack { n_a, x, y } => (n_a >= 1
                && x >= 2
                && x % 2 == 0
                && y >= 1
                && n_a + x * y == n)
                .then(|| self.best_m(n_a).min(fold_m(x) * self.inner_m(y))),
            Step::FirstStack { n_a, n_b } => (n_a % 2 == 1
                && n_b >= 4
                && n_b % 4 == 0
                && n_a.abs_diff(n_b) == 1
                && n_a + n_b == n)
                .then(|| self.best_m(n_a).min(self.best_m(n_b))),
        }
    }

    /// Every rule that might apply at `n`, in evaluation order.
    pub fn candidates(n: usize) -> Vec<Step> {
        let mut steps = vec![Step::ZeroRow, Step::Canonical, Step::Catalog];
        for x in 2..=n {
            if n.is_multiple_of(x) {
                steps.push(Step::Kronecker { x, y: n / x });
            }
        }
        let n0 = (n as f64).sqrt().round() as usize;
        if n0 * n0 == n {
            steps.push(Step::Paired { n0 });
        }
        for n_a in (1..n).rev() {
            let rest = n - n_a;
            for x in (2..=rest).step_by(2) {
                if rest.is_multiple_of(x) {
                    steps.push(Step::ShiftedStack { n_a, x, y: rest / x });
                }
            }
        }
        if n % 2 == 1 {
            for n_a in [n / 2, n / 2 + 1] {
                if n_a % 2 == 1 {
                    steps.push(Step::FirstStack { n_a, n_b: n - n_a });
                }
            }
        }
        steps
    }

    /// The best rule at `n` among those accepted by `keep`; ties go to the
    /// earliest candidate.
    pub fn best_step_where(&self, n: usize, keep: impl Fn(&Step) -> bool) -> Option<(usize, Step)> {
        let mut best: Option<(usize, Step)> = None;
        for step in Self::candidates(n).into_iter().filter(|s| keep(s)) {
            if let Some(m) = self.evaluate(n, step) {
                if best.is_none_or(|(b, _)| m > b) {
                    best = Some((m, step));
                }
            }
        }
        best
    }

    fn choose(&self, n: usize) -> (usize, Step) {
        let mut best = (0, Step::Canonical);
        for step in Self::candidates(n) {
            if let Some(m) = self.evaluate(n, step) {
                if m > best.0 {
                    best = (m, step);
                }
            }
        }
        if let Some(&(_, printed)) = PRINTED_RECIPES.iter().find(|(k, _)| *k == n) {
            if self.evaluate(n, printed) == Some(best.0) {
                best.1 = printed;
            }
        }
        best
    }

    /// Build `m` orthogonal columns of `n` runs following the table.
    pub fn build(&self, n: usize, m: usize) -> Result<DesignMatrix> {
        if n == 0 || n > self.limit() {
            return Err(Error::InvalidArgument(format!(
                "run count {n} outside the planned range 1..={}",
                self.limit()
            )));
        }
        self.build_step(n, self.step(n), m)
    }

    /// Build `m` orthogonal columns of `n` runs with a particular rule; the
    /// smaller designs it needs follow the table.
    pub fn build_step(&self, n: usize, step: Step, m: usize) -> Result<DesignMatrix> {
        if n == 0 || n > self.limit() {
            return Err(Error::InvalidArgument(format!(
                "run count {n} outside the planned range 1..={}",
                self.limit()
            )));
        }
        let reach = self.evaluate(n, step).ok_or_else(|| {
            Error::InvalidArgument(format!("rule {step:?} does not apply to {n} runs"))
        })?;
        if m == 0 || m > reach {
            return Err(Error::InvalidArgument(format!(
                "cannot build {m} columns for {n} runs; at most {reach} are available"
            )));
        }
        let full = match step {
            Step::ZeroRow => DesignMatrix::zeros(1, m)?.with_recipe(Recipe::seed("zero-row")),
            Step::Canonical => DesignMatrix::canonical_column(n)?
                .with_recipe(Recipe::seed(format!("canonical{n}"))),
            Step::Catalog => seed_olh(n)?.design,
            Step::Kronecker { x, y } => self.build_kronecker(x, y)?,
            Step::Paired { n0 } => self.build_paired(n0)?,
            Step::ShiftedStack { n_a, x, y } => self.build_shifted_stack(n_a, x, y, m)?,
            Step::FirstStack { n_a, n_b } => {
                first_stacking(&self.build(n_a, m)?, &self.build(n_b, m)?)?
            }
        };
        full.first_columns(m)
    }

    /// `B` and `D` blocks for `y` runs.
    fn inner_blocks(&self, y: usize) -> Result<(DesignMatrix, SignMatrix, String)> {
        let m2 = self.inner_m(y);
        let b = self.build(y, m2)?;
        let d = sign_columns(y, m2)?;
        Ok((b, d, format!("signs{y}[..{m2}]")))
    }

    /// `A` and `C` blocks of order `x` with doubled values `values(i)`.
    fn outer_blocks(
        &self,
        x: usize,
        values: impl Fn(usize) -> i64,
    ) -> Result<(SignMatrix, DesignMatrix, String)> {
        if x % 2 == 1 {
            let c = DesignMatrix::canonical_column(x)?
                .with_recipe(Recipe::seed(format!("canonical{x}")));
            return Ok((SignMatrix::ones(x, 1)?, c, format!("ones{x}")));
        }
        let fold = widest_fold(x)?;
        let vals: Vec<i64> = (0..x / 2).map(values).collect();
        let (a, c) = fold_blocks(&fold, &vals)?;
        Ok((a, c, format!("fold{x}x{}", fold.cols())))
    }

    fn build_kronecker(&self, x: usize, y: usize) -> Result<DesignMatrix> {
        let (b, d, d_label) = self.inner_blocks(y)?;
        let (a, c, a_label) = self.outer_blocks(x, |i| 2 * i as i64 + 1)?;
        orthogonal_kronecker(&KroneckerPlan::new(a, b, c, d, y as i64).labelled(a_label, d_label))
    }

    fn build_paired(&self, n0: usize) -> Result<DesignMatrix> {
        let (b, d, d_label) = self.inner_blocks(n0)?;
        let (a, c, a_label) = self.outer_blocks(n0, |i| 2 * i as i64 + 1)?;
        paired_kronecker(&KroneckerPlan::new(a, b, c, d, n0 as i64).labelled(a_label, d_label))
    }

    fn build_shifted_stack(&self, n_a: usize, x: usize, y: usize, m: usize) -> Result<DesignMatrix> {
        let (b, d, d_label) = self.inner_blocks(y)?;
        let (a, c, a_label) =
            self.outer_blocks(x, |i| n_a as i64 + (2 * i as i64 + 1) * y as i64)?;
        let outer = shifted_kronecker(
            &KroneckerPlan::new(a, b, c, d, 1).labelled(a_label, d_label),
            n_a,
        )?;
        second_stacking(&self.build(n_a, m)?, &outer.first_columns(m)?)
    }
}

/// The orthogonal Latin hypercube with the most columns the planner can
/// reach for `n` runs.
pub fn construct_best(n: usize) -> Result<DesignMatrix> {
    if !olh_exists(n) {
        return Err(Error::NoOlhExists(n));
    }
    let planner = Planner::up_to(n);
    planner.build(n, planner.best_m(n))
}
