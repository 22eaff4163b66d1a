//! Hadamard matrices from Sylvester doubling, the Paley construction over
//! primes `q ≡ 3 (mod 4)`, and Kronecker products of those; plus sets of
//! orthogonal ±1 columns of arbitrary length built by stacking.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::design::SignMatrix;
use crate::error::{invalid, Error, Result};

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn sylvester(order: usize) -> SignMatrix {
    let base = SignMatrix::from_rows(vec![vec![1, 1], vec![1, -1]]).expect("valid");
    let mut h = SignMatrix::ones(1, 1).expect("valid");
    let mut size = 1;
    while size < order {
        h = h.kron(&base);
        size *= 2;
    }
    h
}

/// Order `q + 1`: `H = I + [[0, 1ᵀ], [−1, Q]]` with `Q_ij = χ(j − i)`.
fn paley(q: usize) -> SignMatrix {
    let mut residue = vec![false; q];
    for x in 1..q {
        residue[x * x % q] = true;
    }
    let chi = |v: usize| -> i8 {
        if v == 0 {
            0
        } else if residue[v] {
            1
        } else {
            -1
        }
    };
    let n = q + 1;
    let mut entries = vec![0i8; n * n];
    for r in 0..n {
        for c in 0..n {
            let s = match (r, c) {
                (0, 0) => 0,
                (0, _) => 1,
                (_, 0) => -1,
                _ => chi((c + q - r) % q),
            };
            entries[r * n + c] = s + i8::from(r == c);
        }
    }
    SignMatrix::new(n, n, entries).expect("Paley construction yields ±1 entries")
}

fn build(order: usize) -> Option<SignMatrix> {
    if order == 0 {
        return None;
    }
    if order.is_power_of_two() {
        return Some(sylvester(order));
    }
    if order.is_multiple_of(4) && is_prime(order - 1) {
        return Some(paley(order - 1));
    }
    // split into a supported factor pair; prefer the most balanced split
    let mut a = (order as f64).sqrt() as usize;
    while a >= 2 {
        if order.is_multiple_of(a) {
            if let (Some(x), Some(y)) = (cached(a), cached(order / a)) {
                return Some(x.kron(&y));
            }
        }
        a -= 1;
    }
    None
}

fn cached(order: usize) -> Option<SignMatrix> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Option<SignMatrix>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(h) = cache.lock().expect("cache lock").get(&order) {
        return h.clone();
    }
    let h = build(order);
    cache
        .lock()
        .expect("cache lock")
        .insert(order, h.clone());
    h
}

/// A Hadamard matrix `H` with `HᵀH = order·I`.
pub fn hadamard(order: usize) -> Result<SignMatrix> {
    cached(order).ok_or_else(|| Error::UnsupportedOrder {
        order,
        reason: "not reachable by Sylvester doubling, Paley matrices over primes \
                 q ≡ 3 (mod 4), or Kronecker products of these"
            .into(),
    })
}

pub fn hadamard_exists(order: usize) -> bool {
    cached(order).is_some()
}

/// Largest number of mutually orthogonal ±1 columns of length `n` that
/// [`sign_columns`] can produce.
pub fn max_sign_columns(n: usize) -> usize {
    sign_plan(n).0
}

/// `(columns, split)`: a Hadamard matrix (`split = 0`) or a vertical stack
/// of two shorter column-orthogonal blocks at `split`.
fn sign_plan(n: usize) -> (usize, usize) {
    static PLANS: OnceLock<Mutex<HashMap<usize, (usize, usize)>>> = OnceLock::new();
    let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&p) = plans.lock().expect("plan lock").get(&n) {
        return p;
    }
    let mut best = if hadamard_exists(n) {
        (n, 0)
    } else {
        (usize::from(n > 0), 0)
    };
    // stacking only helps for lengths divisible by 4
    if n.is_multiple_of(4) {
        for a in (4..=n / 2).step_by(4) {
            let k = sign_plan(a).0.min(sign_plan(n - a).0);
            if k > best.0 {
                best = (k, a);
            }
        }
    }
    plans.lock().expect("plan lock").insert(n, best);
    best
}

/// `k` mutually orthogonal ±1 columns of length `n`: leading Hadamard
/// columns where possible, otherwise stacked blocks whose inner products
/// cancel separately.
pub fn sign_columns(n: usize, k: usize) -> Result<SignMatrix> {
    if k == 0 {
        return Err(invalid("need at least one column"));
    }
    let (max, split) = sign_plan(n);
    if k > max {
        return Err(Error::UnsupportedOrder {
            order: n,
            reason: format!("at most {max} orthogonal ±1 columns of length {n} are available"),
        });
    }
    if k == 1 {
        return SignMatrix::ones(n, 1);
    }
    if split == 0 {
        return hadamard(n)?.first_columns(k);
    }
    sign_columns(split, k)?.vstack(&sign_columns(n - split, k)?)
}
