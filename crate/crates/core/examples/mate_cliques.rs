//! Search for an OLH(n, m) by enumerating orthogonal mates exactly.
//!
//! The first column is the canonical level order and the next `FIX − 1`
//! columns are random mates of the ones before. Every column orthogonal to
//! those `FIX` is then enumerated by meeting in the middle — the first
//! `⌊n/2⌋` rows and the rest are filled separately and joined on their
//! partial inner products — and the remaining `m − FIX` columns are found as
//! a clique of mutually orthogonal candidates.
//!
//! ```text
//! cargo run --release -p olhgen-core --example mate_cliques -- N M FIX TRIES SEED
//! ```
//!
//! Prints a catalog record on success. Practical up to about 15 runs.

use std::collections::HashMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use olhgen_core::design::levels_for;
use olhgen_core::seeds::{DesignRecord, Source};
use olhgen_core::DesignMatrix;

/// Visit every ordering of `items` placed on `rows`, with the running inner
/// products against `cols`.
fn orderings(items: &[i64], rows: &[usize], cols: &[Vec<i64>], visit: &mut impl FnMut(&[i64], &[i64])) {
    fn rec(
        items: &mut [i64],
        d: usize,
        rows: &[usize],
        cols: &[Vec<i64>],
        sums: &mut [i64],
        visit: &mut impl FnMut(&[i64], &[i64]),
    ) {
        if d == items.len() {
            visit(items, sums);
            return;
        }
        for i in d..items.len() {
            items.swap(d, i);
            for (s, c) in sums.iter_mut().zip(cols) {
                *s += items[d] * c[rows[d]];
            }
            rec(items, d + 1, rows, cols, sums, visit);
            for (s, c) in sums.iter_mut().zip(cols) {
                *s -= items[d] * c[rows[d]];
            }
            items.swap(d, i);
        }
    }
    let mut items = items.to_vec();
    let mut sums = vec![0; cols.len()];
    rec(&mut items, 0, rows, cols, &mut sums, visit);
}

/// Mates whose first `⌊n/2⌋` rows hold exactly the levels selected by `mask`.
fn mates_for_mask(n: usize, cols: &[Vec<i64>], mask: u32, out: &mut Vec<Vec<i8>>) {
    let levels = levels_for(n).expect("n ≥ 1");
    let h = n / 2;
    let first: Vec<usize> = (0..h).collect();
    let second: Vec<usize> = (h..n).collect();
    let a: Vec<i64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| levels[i]).collect();
    let b: Vec<i64> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| levels[i]).collect();
    let mut halves: HashMap<Vec<i64>, Vec<Vec<i8>>> = HashMap::new();
    orderings(&a, &first, cols, &mut |p, s| {
        halves.entry(s.to_vec()).or_default().push(p.iter().map(|&x| x as i8).collect());
    });
    orderings(&b, &second, cols, &mut |p, s| {
        let key: Vec<i64> = s.iter().map(|x| -x).collect();
        for head in halves.get(&key).into_iter().flatten() {
            let mut c = head.clone();
            c.extend(p.iter().map(|&x| x as i8));
            out.push(c);
        }
    });
}

/// All level permutations orthogonal to every column in `cols`.
fn mates(n: usize, cols: &[Vec<i64>]) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == n / 2 {
            mates_for_mask(n, cols, mask, &mut out);
        }
    }
    out
}

fn random_mate(n: usize, cols: &[Vec<i64>], rng: &mut ChaCha8Rng) -> Vec<i64> {
    loop {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        let mask = idx[..n / 2].iter().fold(0u32, |m, &i| m | 1 << i);
        let mut out = Vec::new();
        mates_for_mask(n, cols, mask, &mut out);
        if let Some(c) = out.choose(rng) {
            return c.iter().map(|&x| i64::from(x)).collect();
        }
    }
}

fn orthogonal(a: &[i8], b: &[i8]) -> bool {
    a.iter().zip(b).map(|(&x, &y)| i32::from(x) * i32::from(y)).sum::<i32>() == 0
}

fn clique(pool: &[Vec<i8>], cand: &[usize], need: usize, acc: &mut Vec<usize>) -> bool {
    if need == 0 {
        return true;
    }
    if cand.len() < need {
        return false;
    }
    for (i, &v) in cand.iter().enumerate() {
        let next: Vec<usize> =
            cand[i + 1..].iter().copied().filter(|&u| orthogonal(&pool[v], &pool[u])).collect();
        acc.push(v);
        if clique(pool, &next, need - 1, acc) {
            return true;
        }
        acc.pop();
    }
    false
}

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("arguments are non-negative integers"))
        .collect();
    let [n, m, fix, tries, seed] = args[..] else {
        eprintln!("usage: mate_cliques N M FIX TRIES SEED");
        std::process::exit(64);
    };
    let (n, m, fix) = (n as usize, m as usize, fix as usize);
    assert!((1..=m).contains(&fix) && n <= 16, "need 1 ≤ FIX ≤ M and N ≤ 16");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..tries {
        let mut cols = vec![levels_for(n).expect("n ≥ 1")];
        while cols.len() < fix {
            let c = random_mate(n, &cols, &mut rng);
            cols.push(c);
        }
        let pool = mates(n, &cols);
        let all: Vec<usize> = (0..pool.len()).collect();
        let mut chosen = Vec::new();
        let found = clique(&pool, &all, m - fix, &mut chosen);
        eprintln!("attempt {attempt}: {} candidates, found={found}", pool.len());
        if found {
            cols.extend(chosen.iter().map(|&v| pool[v].iter().map(|&x| i64::from(x)).collect()));
            let design = DesignMatrix::from_columns(&cols).expect("rectangular");
            assert!(design.is_olh());
            let record = DesignRecord::from_design(&design, Source::Search);
            println!("{}", serde_json::to_string(&record).expect("record serializes"));
            return;
        }
    }
    eprintln!("nothing found in {tries} attempts");
    std::process::exit(1);
}
