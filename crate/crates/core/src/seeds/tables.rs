//! Two printed 16-run designs, stored in doubled units.

use crate::design::{DesignMatrix, Recipe};

const SIXTEEN_RUN_LH: [[i64; 16]; 16] = [
    [-15, 5, 9, -3, 7, 11, -11, 7, -9, 3, -15, 5, 11, -11, 7, -7],
    [-13, 1, 1, 13, -7, -11, 11, -7, -1, -13, -13, 1, 13, 5, 5, -3],
    [-11, 7, -7, -11, 13, -1, -1, -13, 9, -3, 15, -5, -5, 11, -7, 7],
    [-9, 3, -15, 5, -13, 1, 1, 13, 1, 13, 13, -1, -13, -5, -5, 3],
    [-7, -11, 11, -7, 11, -7, 7, 11, 5, 15, -3, -9, -9, 3, 9, 11],
    [-5, -15, 3, 9, -11, 7, -7, -11, 13, -1, -1, -13, -1, 9, 11, 15],
    [-3, -9, -5, -15, 1, 13, 13, -1, -5, -15, 3, 9, 1, 7, -11, -11],
    [-1, -13, -13, 1, -1, -13, -13, 1, -13, 1, 1, 13, 9, -9, -9, -15],
    [1, 13, 13, -1, -9, 3, -15, 5, 11, -7, 7, 11, -7, -7, -15, -9],
    [3, 9, 5, 15, 9, -3, 15, -5, 3, 9, 5, 15, -15, -13, -13, -13],
    [5, 15, -3, -9, -3, -9, -5, -15, -11, 7, -7, -11, 15, -3, 15, 9],
    [7, 11, -11, 7, 3, 9, 5, 15, -3, -9, -5, -15, 7, 15, 13, 13],
    [9, -3, 15, -5, -5, -15, 3, 9, -7, -11, 11, -7, 5, 13, -3, 5],
    [11, -7, 7, 11, 5, 15, -3, -9, -15, 5, 9, -3, 3, -1, -1, 1],
    [13, -1, -1, -13, -15, 5, 9, -3, 7, 11, -11, 7, -11, -15, 3, -5],
    [15, -5, -9, 3, 15, -5, -9, 3, 15, -5, -9, 3, -3, 1, 1, -1],
];

const SIXTEEN_RUN_NEARLY_ORTHOGONAL: [[i64; 15]; 16] = [
    [-15, 15, -13, 13, -5, -13, 5, 3, -1, 5, -7, 5, -9, -9, 5],
    [-13, -15, -3, 3, 7, 3, 15, -11, 13, -5, 7, -13, -7, -3, -3],
    [-11, -9, -5, -11, -15, 13, -5, 11, -9, 9, 9, 3, -5, -1, -11],
    [-9, -1, 9, -15, -11, 1, -1, -13, 5, -1, -15, 7, 1, 3, 15],
    [-7, 1, -7, 7, 15, 15, -13, 9, -5, -13, -3, -1, -1, 7, 13],
    [-5, 13, 11, -5, 9, -7, -3, -9, -13, 11, 13, -9, -3, 13, 1],
    [-3, -5, 13, 15, -9, -9, -11, 1, 7, -9, 15, 11, 9, 1, -1],
    [-1, -11, 3, -7, 11, -15, 13, 15, -7, -3, -9, 9, 7, 9, -5],
    [1, 3, -9, -3, -1, -5, -15, -1, 11, 3, -11, -15, 15, 5, -15],
    [3, -3, 15, 11, 3, 9, 1, -7, -15, 1, -13, -3, 3, -15, -9],
    [5, 9, 7, -1, 5, 11, 9, 13, 15, 15, 5, 1, 11, -7, 9],
    [7, 7, -1, -13, 13, -1, -7, -5, 9, -7, 3, 15, -13, -11, -13],
    [9, 5, -11, -9, -7, -3, 7, -3, -11, -15, 11, -7, 13, -13, 7],
    [11, 11, 5, 5, -13, 7, 11, 5, 3, -11, -5, -5, -11, 15, -7],
    [13, -7, -15, 9, 1, 5, 3, -15, -3, 13, 1, 13, 5, 11, 3],
    [15, -13, 1, 1, -3, -11, -9, 7, 1, 7, -1, -11, -15, -5, 11],
];

/// Number of leading columns of [`sixteen_run_hypercube`] that are
/// mutually orthogonal.
pub const SIXTEEN_RUN_ORTHOGONAL_COLUMNS: usize = 12;

fn from_table<const M: usize>(rows: &[[i64; M]], name: &str) -> DesignMatrix {
    DesignMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
        .expect("embedded table is rectangular")
        .with_recipe(Recipe::seed(name))
}

/// A 16 × 16 Latin hypercube whose first twelve columns are orthogonal;
/// the last four complete the hypercube but are correlated.
pub fn sixteen_run_hypercube() -> DesignMatrix {
    from_table(&SIXTEEN_RUN_LH, "lh16x16")
}

/// The orthogonal Latin hypercube formed by the first twelve columns of
/// [`sixteen_run_hypercube`].
pub fn sixteen_run_olh() -> DesignMatrix {
    sixteen_run_hypercube()
        .first_columns(SIXTEEN_RUN_ORTHOGONAL_COLUMNS)
        .expect("table has 16 columns")
}

/// A 16 × 15 nearly orthogonal Latin hypercube.
pub fn sixteen_run_nearly_orthogonal() -> DesignMatrix {
    from_table(&SIXTEEN_RUN_NEARLY_ORTHOGONAL, "nolh16x15")
}
