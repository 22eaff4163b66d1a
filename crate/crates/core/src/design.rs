//! Design and sign matrices in doubled-level units.
//!
//! Every design stores `2 × level`, so the half-integer levels of an even
//! run size and the integer levels of an odd run size are both exact
//! integers. An `n`-run Latin hypercube column is then a permutation of
//! `{-(n-1), -(n-3), ..., n-3, n-1}`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Doubled levels of an `n`-run Latin hypercube, in increasing order.
pub fn levels_for(n: usize) -> Result<Vec<i64>> {
    if n == 0 {
        return Err(invalid("run count must be at least 1"));
    }
    let top = n as i64 - 1;
    Ok((0..n as i64).map(|i| -top + 2 * i).collect())
}

/// True iff every column of `design` is a permutation of `levels_for(n)`.
pub fn is_latin_hypercube(design: &DesignMatrix) -> bool {
    design.classification().latin
}

/// True iff all pairwise column inner products vanish. Vacuous for one column.
pub fn is_orthogonal(design: &DesignMatrix) -> bool {
    design.classification().orthogonal
}

/// Exact inner product of two integer columns.
pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy)]
struct Classification {
    latin: bool,
    orthogonal: bool,
}

/// How a design was produced.
///
/// Leaves are always [`Recipe::Seed`] or [`Recipe::Search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    Seed {
        name: String,
    },
    Search {
        n: usize,
        m: usize,
        seed: u64,
        t1: u32,
        t2: u32,
    },
    /// First `take` columns of the child design.
    Columns {
        take: usize,
        child: Box<Recipe>,
    },
    /// `A⊗B + γ·C⊗D` with all hypotheses checked.
    Kronecker {
        gamma: i64,
        a: String,
        d: String,
        b: Box<Recipe>,
        c: Box<Recipe>,
    },
    /// The pair `(L, U)` with `U = -n0·A⊗B + C⊗D`.
    Paired {
        n0: usize,
        a: String,
        d: String,
        b: Box<Recipe>,
        c: Box<Recipe>,
    },
    /// `A⊗B + C⊗D` with C on shifted levels; an orthogonal design on the
    /// outer level set of an `n_a + rows` run hypercube.
    Shifted {
        n_a: usize,
        a: String,
        d: String,
        b: Box<Recipe>,
        c: Box<Recipe>,
    },
    Stack {
        method: StackMethod,
        children: Vec<Recipe>,
    },
    Expand {
        factor: usize,
        plus_one: bool,
        child: Box<Recipe>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StackMethod {
    /// Component run sizes differ by one; both halves are Latin hypercubes.
    First,
    /// Inner block is a Latin hypercube, outer block a shifted design.
    Second,
    /// Arbitrary disjoint level sets.
    Plain,
}

impl Recipe {
    pub fn seed(name: impl Into<String>) -> Self {
        Recipe::Seed { name: name.into() }
    }

    /// One-line human readable description.
    pub fn summary(&self) -> String {
        match self {
            Recipe::Seed { name } => format!("seed[{name}]"),
            Recipe::Search { n, m, seed, t1, t2 } => {
                format!("search(n={n}, m={m}, seed={seed}, t1={t1}, t2={t2})")
            }
            Recipe::Columns { take, child } => format!("first {take} of {}", child.summary()),
            Recipe::Kronecker { gamma, a, d, b, c } => format!(
                "kron(A={a}, B={}, C={}, D={d}, gamma={gamma})",
                b.summary(),
                c.summary()
            ),
            Recipe::Paired { n0, a, d, b, c } => format!(
                "paired(n0={n0}, A={a}, B={}, C={}, D={d})",
                b.summary(),
                c.summary()
            ),
            Recipe::Shifted { n_a, a, d, b, c } => format!(
                "shifted(n_a={n_a}, A={a}, B={}, C={}, D={d})",
                b.summary(),
                c.summary()
            ),
            Recipe::Stack { method, children } => {
                let parts: Vec<String> = children.iter().map(Recipe::summary).collect();
                format!("stack[{method:?}]({})", parts.join(" / "))
            }
            Recipe::Expand {
                factor,
                plus_one,
                child,
            } => format!(
                "expand(x{factor}{}, {})",
                if *plus_one { "+1" } else { "" },
                child.summary()
            ),
        }
    }

    /// Leaves are seeds or searches; checked recursively.
    pub fn is_well_founded(&self) -> bool {
        match self {
            Recipe::Seed { .. } | Recipe::Search { .. } => true,
            Recipe::Columns { child, .. } | Recipe::Expand { child, .. } => child.is_well_founded(),
            Recipe::Kronecker { b, c, .. }
            | Recipe::Paired { b, c, .. }
            | Recipe::Shifted { b, c, .. } => b.is_well_founded() && c.is_well_founded(),
            Recipe::Stack { children, .. } => {
                !children.is_empty() && children.iter().all(Recipe::is_well_founded)
            }
        }
    }
}

/// An `n × m` matrix of doubled levels.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    n: usize,
    m: usize,
    entries: Vec<i64>,
    recipe: Option<Recipe>,
    class: OnceLock<Classification>,
}

impl PartialEq for DesignMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.entries == other.entries
    }
}

impl Eq for DesignMatrix {}

impl DesignMatrix {
    /// Row-major construction.
    pub fn new(n: usize, m: usize, entries: Vec<i64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(invalid(format!("design must be non-empty, got {n}x{m}")));
        }
        if entries.len() != n * m {
            return Err(invalid(format!(
                "expected {} entries for a {n}x{m} design, got {}",
                n * m,
                entries.len()
            )));
        }
        Ok(Self {
            n,
            m,
            entries,
            recipe: None,
            class: OnceLock::new(),
        })
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(invalid(format!(
                "row {} has {} entries, expected {m}",
                i + 1,
                r.len()
            )));
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    pub fn from_columns(columns: &[Vec<i64>]) -> Result<Self> {
        let m = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(invalid("columns have unequal lengths"));
        }
        let mut entries = vec![0; n * m];
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                entries[i * m + j] = v;
            }
        }
        Self::new(n, m, entries)
    }

    /// The single column `levels_for(n)` in increasing order.
    pub fn canonical_column(n: usize) -> Result<Self> {
        let levels = levels_for(n)?;
        Self::new(n, 1, levels)
    }

    /// An all-zero design: the one-run block used when stacking onto a
    /// shifted design.
    pub fn zeros(n: usize, m: usize) -> Result<Self> {
        Self::new(n, m, vec![0; n * m])
    }

    pub fn runs(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> usize {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.m + col]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.m..(r + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.entries.chunks(self.m)
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.rows().map(<[i64]>::to_vec).collect()
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.m).map(|c| self.column(c)).collect()
    }

    pub fn recipe(&self) -> Option<&Recipe> {
        self.recipe.as_ref()
    }

    pub fn with_recipe(mut self, recipe: Recipe) -> Self {
        self.recipe = Some(recipe);
        self
    }

    pub fn is_latin_hypercube(&self) -> bool {
        self.classification().latin
    }

    pub fn is_orthogonal(&self) -> bool {
        self.classification().orthogonal
    }

    /// Latin hypercube with pairwise orthogonal columns.
    pub fn is_olh(&self) -> bool {
        let c = self.classification();
        c.latin && c.orthogonal
    }

    fn classification(&self) -> Classification {
        *self.class.get_or_init(|| {
            let levels = levels_for(self.n).expect("n >= 1 by construction");
            let cols = self.columns();
            let latin = cols.iter().all(|c| {
                let mut s = c.clone();
                s.sort_unstable();
                s == levels
            });
            let orthogonal = (0..self.m)
                .all(|i| (i + 1..self.m).all(|j| dot(&cols[i], &cols[j]) == 0));
            Classification { latin, orthogonal }
        })
    }

    /// Sorted multiset of levels in column `c`.
    pub fn level_multiset(&self, c: usize) -> Vec<i64> {
        let mut col = self.column(c);
        col.sort_unstable();
        col
    }

    /// `XᵀX` as a row-major `m × m` matrix of exact inner products.
    pub fn gram(&self) -> Vec<i64> {
        let cols = self.columns();
        let mut g = vec![0; self.m * self.m];
        for i in 0..self.m {
            for j in i..self.m {
                let v = dot(&cols[i], &cols[j]);
                g[i * self.m + j] = v;
                g[j * self.m + i] = v;
            }
        }
        g
    }

    /// Column sums; all zero for any design on centered levels.
    pub fn column_sums(&self) -> Vec<i64> {
        (0..self.m)
            .map(|c| (0..self.n).map(|r| self.get(r, c)).sum())
            .collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if cols.is_empty() {
            return Err(invalid("must select at least one column"));
        }
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.m) {
            return Err(invalid(format!(
                "column index {bad} out of range for {} columns",
                self.m
            )));
        }
        let mut entries = Vec::with_capacity(self.n * cols.len());
        for r in 0..self.n {
            entries.extend(cols.iter().map(|&c| self.get(r, c)));
        }
        Self::new(self.n, cols.len(), entries)
    }

    /// The first `k` columns, recording the selection in the recipe.
    pub fn first_columns(&self, k: usize) -> Result<Self> {
        if k == self.m {
            return Ok(self.clone());
        }
        let idx: Vec<usize> = (0..k).collect();
        let mut out = self.select_columns(&idx)?;
        if let Some(r) = &self.recipe {
            out.recipe = Some(Recipe::Columns {
                take: k,
                child: Box::new(r.clone()),
            });
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(invalid(format!(
                "cannot stack a {}-column design on a {}-column design",
                self.m, other.m
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::new(self.n + other.n, self.m, entries)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(invalid(format!(
                "cannot juxtapose designs with {} and {} runs",
                self.n, other.n
            )));
        }
        let m = self.m + other.m;
        let mut entries = Vec::with_capacity(self.n * m);
        for r in 0..self.n {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        Self::new(self.n, m, entries)
    }

    pub fn map(&self, f: impl Fn(i64) -> i64) -> Self {
        let mut out = Self::new(self.n, self.m, self.entries.iter().map(|&v| f(v)).collect())
            .expect("shape preserved");
        out.recipe = self.recipe.clone();
        out
    }
}

impl fmt::Display for DesignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| format!("{v:4}")).collect();
            writeln!(f, "{}", line.join(""))?;
        }
        Ok(())
    }
}

/// A rectangular ±1 matrix (the roles A and D, Hadamard matrices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i8>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid(format!(
                "sign matrix must be non-empty, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(invalid(format!(
                "expected {} entries for a {rows}x{cols} sign matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(v) = entries.iter().find(|&&v| v != 1 && v != -1) {
            return Err(invalid(format!("sign matrix entry {v} is not ±1")));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<i8>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(invalid("sign matrix rows have unequal lengths"));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![1; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i8 {
        self.entries[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c) as i64).collect()
    }

    pub fn is_column_orthogonal(&self) -> bool {
        let cols: Vec<Vec<i64>> = (0..self.cols).map(|c| self.column(c)).collect();
        (0..self.cols).all(|i| (i + 1..self.cols).all(|j| dot(&cols[i], &cols[j]) == 0))
    }

    /// `HᵀH` as a row-major `cols × cols` matrix.
    pub fn gram(&self) -> Vec<i64> {
        let cols: Vec<Vec<i64>> = (0..self.cols).map(|c| self.column(c)).collect();
        let mut g = vec![0; self.cols * self.cols];
        for i in 0..self.cols {
            for j in 0..self.cols {
                g[i * self.cols + j] = dot(&cols[i], &cols[j]);
            }
        }
        g
    }

    pub fn first_columns(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.cols {
            return Err(invalid(format!(
                "cannot take {k} columns of a {}-column sign matrix",
                self.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * k);
        for r in 0..self.rows {
            entries.extend_from_slice(&self.entries[r * self.cols..r * self.cols + k]);
        }
        Self::new(self.rows, k, entries)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(invalid("cannot stack sign matrices with different widths"));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::new(self.rows + other.rows, self.cols, entries)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut entries = vec![0i8; rows * cols];
        for p in 0..self.rows {
            for i in 0..self.cols {
                let a = self.get(p, i);
                for q in 0..other.rows {
                    for j in 0..other.cols {
                        entries[(p * other.rows + q) * cols + i * other.cols + j] =
                            a * other.get(q, j);
                    }
                }
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }
}
