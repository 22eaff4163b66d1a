//! Embedded designs and the building blocks the constructions start from:
//! fold-over matrices, Hadamard matrices and a catalog of small orthogonal
//! Latin hypercubes.

mod catalog;
mod fold;
mod hadamard;
mod tables;

pub use catalog::{
    cache_path, catalog, load_cached, seed_olh, small_run_target, store_cached, CatalogEntry,
    DesignRecord, Source, SMALL_RUN_TARGETS,
};
pub use fold::{
    fold_matrix, fold_olh, fold_olh2, instantiate_fold, odd_values, pair_fold, single_fold,
    widest_fold, widest_fold_columns, SymbolicFoldMatrix, Term,
};
pub use hadamard::{hadamard, hadamard_exists, max_sign_columns, sign_columns};
pub use tables::{
    sixteen_run_hypercube, sixteen_run_nearly_orthogonal, sixteen_run_olh,
    SIXTEEN_RUN_ORTHOGONAL_COLUMNS,
};
