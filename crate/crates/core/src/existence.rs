//! Which run sizes admit an orthogonal Latin hypercube with two or more
//! factors, plus an exhaustive check for small run sizes.

use crate::design::{dot, levels_for};
use crate::error::{invalid, Error, Result};

/// Largest run size [`brute_force_no_olh`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 10;

/// An OLH with `m >= 2` exists iff `n >= 4` and `n mod 4 != 2`.
pub fn olh_exists(n: usize) -> bool {
    n >= 4 && n % 4 != 2
}

/// Fix the first column to the canonical level order and try every
/// permutation of the levels as a second column. Returns `true` iff none of
/// the `n!` candidates is orthogonal to the first.
pub fn brute_force_no_olh(n: usize) -> Result<bool> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "{n}! permutations exceeds the enumeration bound of {BRUTE_FORCE_LIMIT}!"
        )));
    }
    if n == 0 {
        return Err(invalid("run count must be at least 1"));
    }
    Ok(count_orthogonal_mates(n)? == 0)
}

/// Number of permutations of `levels_for(n)` orthogonal to the canonical
/// column. Heap's algorithm; each transposition updates the inner product
/// in O(1).
pub fn count_orthogonal_mates(n: usize) -> Result<u64> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "{n}! permutations exceeds the enumeration bound"
        )));
    }
    let first = levels_for(n)?;
    let mut second = first.clone();
    let mut ip = dot(&first, &second);
    let mut hits = u64::from(ip == 0);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            // swapping entries j and i changes the product by (s_i - s_j)(f_j - f_i)
            ip += (second[i] - second[j]) * (first[j] - first[i]);
            second.swap(i, j);
            if ip == 0 {
                hits += 1;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(hits)
}
