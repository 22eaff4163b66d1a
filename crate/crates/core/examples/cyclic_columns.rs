//! Search for an OLH(n, m) whose columns are one column read through
//! successive powers of a fixed row permutation.
//!
//! If `π` permutes the rows with cycle lengths dividing `m` and column `j`
//! is `c ∘ πʲ`, then `⟨col_i, col_j⟩` depends only on `j − i`, so the `m`
//! columns are orthogonal once the lagged products of `c` vanish for lags
//! `1..=m/2`. That turns an `m`-column search into a single-column one,
//! solved here by best-improvement swaps from random starts.
//!
//! ```text
//! cargo run --release -p olhgen-core --example cyclic_columns -- N M REPS [CYCLE_LENGTHS...]
//! ```
//!
//! Cycle lengths default to the divisors of `m`, largest first, each used
//! as often as it fits; leftover rows are fixed points. Prints a catalog
//! record on success.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use olhgen_core::design::levels_for;
use olhgen_core::seeds::{DesignRecord, Source};
use olhgen_core::DesignMatrix;

fn main() {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("arguments are non-negative integers"))
        .collect();
    let [n, m, reps, ..] = args[..] else {
        eprintln!("usage: cyclic_columns N M REPS [CYCLE_LENGTHS...]");
        std::process::exit(64);
    };
    let lengths: Vec<usize> = if args.len() > 3 {
        args[3..].to_vec()
    } else {
        (1..=m).rev().filter(|d| m % d == 0).collect()
    };
    let mut cycles = Vec::new();
    let mut left = n;
    for &d in &lengths {
        while left >= d {
            cycles.push(d);
            left -= d;
        }
    }
    cycles.extend(std::iter::repeat_n(1, left));

    let mut pi = vec![0; n];
    let mut start = 0;
    for &d in &cycles {
        for i in 0..d {
            pi[start + i] = start + (i + 1) % d;
        }
        start += d;
    }
    let mut powers = vec![(0..n).collect::<Vec<_>>()];
    for l in 1..m {
        let next = powers[l - 1].iter().map(|&r| pi[r]).collect();
        powers.push(next);
    }
    let lagged = |c: &[i64], l: usize| -> i64 { (0..n).map(|r| c[r] * c[powers[l][r]]).sum() };
    let objective = |c: &[i64]| -> i64 { (1..=m / 2).map(|l| lagged(c, l).pow(2)).sum() };

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for rep in 0..reps {
        let mut c = levels_for(n).expect("n ≥ 1");
        c.shuffle(&mut rng);
        let mut cur = objective(&c);
        while cur > 0 {
            let mut best = (cur, None);
            for p in 0..n {
                for q in p + 1..n {
                    c.swap(p, q);
                    let v = objective(&c);
                    c.swap(p, q);
                    if v < best.0 {
                        best = (v, Some((p, q)));
                    }
                }
            }
            match best {
                (v, Some((p, q))) => {
                    c.swap(p, q);
                    cur = v;
                }
                _ => break,
            }
        }
        if cur == 0 {
            let rows = (0..n).map(|r| (0..m).map(|j| c[powers[j][r]]).collect()).collect();
            let design = DesignMatrix::from_rows(rows).expect("rectangular");
            assert!(design.is_olh(), "lag conditions imply orthogonality");
            eprintln!("n={n} m={m} cycles={cycles:?} found at start {rep}");
            let record = DesignRecord::from_design(&design, Source::Search);
            println!("{}", serde_json::to_string(&record).expect("record serializes"));
            return;
        }
    }
    eprintln!("n={n} m={m} cycles={cycles:?}: nothing in {reps} starts");
    std::process::exit(1);
}
