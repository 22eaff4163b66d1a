//! Symbolic fold-over matrices `(Xᵀ, −Xᵀ)ᵀ` over symbols `x_1..x_{rows/2}`.
//!
//! In every column each symbol appears exactly twice, once with each sign,
//! and every pair of columns is orthogonal for any real substitution. With
//! `x_i = 2i − 1` (doubled) a matrix becomes an orthogonal Latin hypercube;
//! with `x_i = n_a + (2i − 1)·n2` it becomes the shifted ingredient of the
//! shifted Kronecker construction.

use crate::design::{DesignMatrix, Recipe, SignMatrix};
use crate::error::{invalid, Error, Result};

/// One symbolic entry: `sign · x_index` with a 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub sign: i8,
    pub index: u8,
}

/// Top halves of the four square-ish fold matrices, as signed 1-based
/// symbol indices. The bottom half is the negation.
const ORDER_2: &[&[i8]] = &[&[1]];
const ORDER_4: &[&[i8]] = &[&[1, 2], &[2, -1]];
const ORDER_8: &[&[i8]] = &[&[1, -2, 4, 3], &[2, 1, 3, -4], &[3, -4, -2, -1], &[4, 3, -1, 2]];
const ORDER_16: &[&[i8]] = &[
    &[1, -2, -4, -3, -8, 7, 5, 6],
    &[2, 1, -3, 4, -7, -8, -6, 5],
    &[3, -4, 2, 1, -6, -5, 7, -8],
    &[4, 3, 1, -2, -5, 6, -8, -7],
    &[5, -6, -8, 7, 4, 3, -1, -2],
    &[6, 5, -7, -8, 3, -4, 2, -1],
    &[7, -8, 6, -5, 2, -1, -3, 4],
    &[8, 7, 5, 6, 1, 2, 4, 3],
];

/// A fold-over matrix of signed symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicFoldMatrix {
    rows: usize,
    cols: usize,
    /// Row-major, `rows × cols`.
    entries: Vec<Term>,
}

impl SymbolicFoldMatrix {
    fn from_top(top: Vec<Vec<i8>>) -> Self {
        let half = top.len();
        let cols = top[0].len();
        let mut entries = Vec::with_capacity(2 * half * cols);
        for sign in [1, -1] {
            for row in &top {
                entries.extend(row.iter().map(|&v| Term {
                    sign: sign * v.signum(),
                    index: v.unsigned_abs(),
                }));
            }
        }
        Self {
            rows: 2 * half,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of distinct symbols, `rows / 2`.
    pub fn symbols(&self) -> usize {
        self.rows / 2
    }

    pub fn get(&self, r: usize, c: usize) -> Term {
        self.entries[r * self.cols + c]
    }

    /// Substitute real values for the symbols.
    pub fn evaluate(&self, values: &[f64]) -> Result<Vec<Vec<f64>>> {
        if values.len() != self.symbols() {
            return Err(invalid(format!(
                "expected {} symbol values, got {}",
                self.symbols(),
                values.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| {
                        let t = self.get(r, c);
                        f64::from(t.sign) * values[t.index as usize - 1]
                    })
                    .collect()
            })
            .collect())
    }

    /// The ±1 matrix obtained by setting every symbol to 1, i.e. the sign
    /// of each entry. Stacked on itself it is the `A` partner of this
    /// matrix in a fold pair.
    pub fn sign_pattern(&self) -> SignMatrix {
        SignMatrix::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|t| t.sign).collect(),
        )
        .expect("signs are ±1")
    }

    /// Sign pattern of the top half `X` only.
    pub fn top_sign_pattern(&self) -> SignMatrix {
        let half = self.rows / 2;
        SignMatrix::new(
            half,
            self.cols,
            self.entries[..half * self.cols]
                .iter()
                .map(|t| t.sign)
                .collect(),
        )
        .expect("signs are ±1")
    }

    /// Every symbol appears once with each sign in every column.
    pub fn has_balanced_columns(&self) -> bool {
        (0..self.cols).all(|c| {
            let mut seen = vec![[false; 2]; self.symbols()];
            for r in 0..self.rows {
                let t = self.get(r, c);
                let slot = &mut seen[t.index as usize - 1][usize::from(t.sign < 0)];
                if *slot {
                    return false;
                }
                *slot = true;
            }
            true
        })
    }

    /// The bottom half is the negation of the top half.
    pub fn is_fold_over(&self) -> bool {
        let half = self.rows / 2;
        (0..half).all(|r| {
            (0..self.cols).all(|c| {
                let (t, b) = (self.get(r, c), self.get(r + half, c));
                t.index == b.index && t.sign == -b.sign
            })
        })
    }
}

/// The fold matrix of the given order with `order / 2` orthogonal columns.
pub fn fold_matrix(order: usize) -> Result<SymbolicFoldMatrix> {
    let top = match order {
        2 => ORDER_2,
        4 => ORDER_4,
        8 => ORDER_8,
        16 => ORDER_16,
        _ => {
            return Err(Error::UnsupportedOrder {
                order,
                reason: "fold matrices with order/2 orthogonal columns are only tabulated for orders 2, 4, 8 and 16".into(),
            })
        }
    };
    Ok(SymbolicFoldMatrix::from_top(
        top.iter().map(|r| r.to_vec()).collect(),
    ))
}

/// Two-column fold matrix for any order divisible by 4: the first column
/// lists `x_1..x_{order/2}`, the second maps each adjacent pair
/// `(x_{2i−1}, x_{2i})` to `(x_{2i}, −x_{2i−1})`.
pub fn pair_fold(order: usize) -> Result<SymbolicFoldMatrix> {
    if order == 0 || !order.is_multiple_of(4) {
        return Err(invalid(format!(
            "a two-column fold matrix needs an order divisible by 4, got {order}"
        )));
    }
    let half = order / 2;
    let top = (0..half)
        .map(|r| {
            let i = (r + 1) as i8;
            let partner = if r % 2 == 0 { i + 1 } else { -(i - 1) };
            vec![i, partner]
        })
        .collect();
    Ok(SymbolicFoldMatrix::from_top(top))
}

/// One-column fold matrix `(x_1, …, x_h, −x_1, …, −x_h)ᵀ` for any even order.
pub fn single_fold(order: usize) -> Result<SymbolicFoldMatrix> {
    if order == 0 || !order.is_multiple_of(2) {
        return Err(invalid(format!(
            "a fold matrix needs an even order, got {order}"
        )));
    }
    let top = (1..=order / 2).map(|i| vec![i as i8]).collect();
    Ok(SymbolicFoldMatrix::from_top(top))
}

/// The widest available fold matrix of the given even order: the tabulated
/// ones for 2, 4, 8 and 16, the two-column pattern for other multiples of
/// 4, and the single column otherwise.
pub fn widest_fold(order: usize) -> Result<SymbolicFoldMatrix> {
    match order {
        2 | 4 | 8 | 16 => fold_matrix(order),
        o if o % 4 == 0 => pair_fold(o),
        o => single_fold(o),
    }
}

/// Column count of [`widest_fold`] for an even order.
pub fn widest_fold_columns(order: usize) -> usize {
    match order {
        2 | 4 | 8 | 16 => order / 2,
        o if o % 4 == 0 => 2,
        _ => 1,
    }
}

/// Substitute doubled levels for the symbols.
pub fn instantiate_fold(matrix: &SymbolicFoldMatrix, values: &[i64]) -> Result<DesignMatrix> {
    if values.len() != matrix.symbols() {
        return Err(invalid(format!(
            "expected {} values, got {}",
            matrix.symbols(),
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|&&v| v <= 0) {
        return Err(invalid(format!("fold values must be positive, got {v}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("fold values must be distinct"));
    }
    let entries = matrix
        .entries
        .iter()
        .map(|t| i64::from(t.sign) * values[t.index as usize - 1])
        .collect();
    DesignMatrix::new(matrix.rows, matrix.cols, entries)
}

/// `(1, 3, …, order − 1)`: the doubled positive levels of an even-order
/// Latin hypercube.
pub fn odd_values(count: usize) -> Vec<i64> {
    (0..count as i64).map(|i| 2 * i + 1).collect()
}

/// Fold-over orthogonal Latin hypercube with two columns for `n1 ≡ 0 mod 4`.
pub fn fold_olh2(n1: usize) -> Result<DesignMatrix> {
    let m = pair_fold(n1)?;
    Ok(instantiate_fold(&m, &odd_values(n1 / 2))?.with_recipe(Recipe::seed(format!("fold2x{n1}"))))
}

/// The widest fold-over orthogonal Latin hypercube of an even order.
pub fn fold_olh(order: usize) -> Result<DesignMatrix> {
    let m = widest_fold(order)?;
    Ok(instantiate_fold(&m, &odd_values(order / 2))?
        .with_recipe(Recipe::seed(format!("fold{order}x{}", m.cols()))))
}
