//! Column-by-column search for small orthogonal and nearly orthogonal Latin
//! hypercubes.
//!
//! A design grows one column at a time. A candidate column starts as a
//! random permutation of the levels and is improved by pairwise switches:
//! every swap of two entries is scored and the best one applied, until the
//! candidate is orthogonal to every existing column or no swap helps. A
//! stuck candidate is exchanged for a fresh random column, at most `t1`
//! times. Whole runs are restarted `t2` times with seeds `seed + r`.
//!
//! The objective for a candidate `c` is `Σ_j ⟨c, x_j⟩²` over the existing
//! columns `x_j`; swapping entries `p` and `q` changes each inner product by
//! [`switch_delta`], so a full scan of swaps costs `O(n² m)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::design::{dot, levels_for, DesignMatrix, Recipe};
use crate::error::{invalid, Error, Result};
use crate::existence::olh_exists;
use crate::metrics::{correlation, CorrelationReport};

pub const DEFAULT_T1: u32 = 100;
pub const DEFAULT_T2: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Every column must be exactly orthogonal to the others.
    ExactOrthogonal,
    /// Minimize the squared inner products; a restart whose `ρ²` is at or
    /// below `threshold` ends the search early.
    MinRhoSq { threshold: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Exchanges allowed per candidate column.
    pub t1: u32,
    /// Full restarts.
    pub t2: u32,
    pub seed: u64,
    pub objective: Objective,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            t1: DEFAULT_T1,
            t2: DEFAULT_T2,
            seed: 0,
            objective: Objective::ExactOrthogonal,
        }
    }
}

impl SearchConfig {
    pub fn new(t1: u32, t2: u32, seed: u64) -> Result<Self> {
        if t1 == 0 || t2 == 0 {
            return Err(invalid("t1 and t2 must be at least 1"));
        }
        Ok(Self {
            t1,
            t2,
            seed,
            objective: Objective::ExactOrthogonal,
        })
    }

    fn recipe(&self, n: usize, m: usize) -> Recipe {
        Recipe::Search {
            n,
            m,
            seed: self.seed,
            t1: self.t1,
            t2: self.t2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// The full design on success, otherwise the longest prefix found.
    pub design: DesignMatrix,
    pub complete: bool,
    /// Index of the restart that produced `design`.
    pub restart: u32,
}

/// Change in `⟨c, x⟩` when `c[p]` and `c[q]` are swapped.
pub fn switch_delta(c: &[i64], x: &[i64], p: usize, q: usize) -> i64 {
    (c[q] - c[p]) * (x[p] - x[q])
}

/// Existing columns laid out by row, so a swap scan reads contiguous memory.
struct RowView {
    m: usize,
    rows: Vec<i64>,
}

impl RowView {
    fn new(n: usize, columns: &[Vec<i64>]) -> Self {
        let m = columns.len();
        let mut rows = vec![0; n * m];
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                rows[i * m + j] = v;
            }
        }
        Self { m, rows }
    }

    fn row(&self, i: usize) -> &[i64] {
        &self.rows[i * self.m..(i + 1) * self.m]
    }
}

/// Best-improvement switch descent on `c`. `s` holds the inner products of
/// `c` with each existing column and is kept current. Returns the final
/// objective; `trace` receives the objective after every accepted switch.
fn descend(c: &mut [i64], view: &RowView, s: &mut [i64], mut trace: Option<&mut Vec<i64>>) -> i64 {
    let n = c.len();
    let mut f: i64 = s.iter().map(|v| v * v).sum();
    loop {
        if f == 0 {
            return 0;
        }
        let mut best = f;
        let mut best_pq = None;
        for p in 0..n {
            let rp = view.row(p);
            for q in p + 1..n {
                let d = c[q] - c[p];
                if d == 0 {
                    continue;
                }
                let rq = view.row(q);
                let mut nf = 0;
                for j in 0..view.m {
                    let v = s[j] + d * (rp[j] - rq[j]);
                    nf += v * v;
                    if nf >= best {
                        break;
                    }
                }
                if nf < best {
                    best = nf;
                    best_pq = Some((p, q));
                }
            }
        }
        let Some((p, q)) = best_pq else {
            return f;
        };
        let d = c[q] - c[p];
        let (rp, rq) = (view.row(p), view.row(q));
        for j in 0..view.m {
            s[j] += d * (rp[j] - rq[j]);
        }
        c.swap(p, q);
        f = best;
        if let Some(t) = trace.as_deref_mut() {
            t.push(f);
        }
    }
}

fn inner_products(c: &[i64], columns: &[Vec<i64>]) -> Vec<i64> {
    columns.iter().map(|x| dot(c, x)).collect()
}

fn random_column<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i64> {
    let mut c = levels_for(n).expect("n >= 1");
    c.shuffle(rng);
    c
}

/// Try to find a column orthogonal to all of `existing` (each of length
/// `n`): one random start plus up to `t1` exchanges, each followed by a
/// switch descent. With no existing columns a random permutation is
/// returned.
pub fn add_column<R: Rng + ?Sized>(
    n: usize,
    existing: &[Vec<i64>],
    config: &SearchConfig,
    rng: &mut R,
) -> Option<Vec<i64>> {
    if existing.is_empty() {
        return Some(random_column(n, rng));
    }
    let view = RowView::new(n, existing);
    for _ in 0..=config.t1 {
        let mut c = random_column(n, rng);
        let mut s = inner_products(&c, existing);
        if descend(&mut c, &view, &mut s, None) == 0 {
            return Some(c);
        }
    }
    None
}

/// Like [`add_column`] but keeps the candidate with the smallest objective
/// over all `t1 + 1` descents. Returns the column and its objective.
fn best_column<R: Rng + ?Sized>(
    n: usize,
    existing: &[Vec<i64>],
    t1: u32,
    rng: &mut R,
) -> (Vec<i64>, i64) {
    if existing.is_empty() {
        return (random_column(n, rng), 0);
    }
    let view = RowView::new(n, existing);
    let mut best: Option<(Vec<i64>, i64)> = None;
    for _ in 0..=t1 {
        let mut c = random_column(n, rng);
        let mut s = inner_products(&c, existing);
        let f = descend(&mut c, &view, &mut s, None);
        if best.as_ref().is_none_or(|(_, bf)| f < *bf) {
            best = Some((c, f));
        }
        if f == 0 {
            break;
        }
    }
    best.expect("at least one candidate")
}

fn restart_olh(n: usize, m_target: usize, config: &SearchConfig, r: u32) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
    let mut cols = vec![levels_for(n).expect("n >= 1")];
    while cols.len() < m_target {
        match add_column(n, &cols, config, &mut rng) {
            Some(c) => cols.push(c),
            None => break,
        }
    }
    cols
}

/// Evaluate restarts `0..t2` in index order, in parallel batches, stopping
/// after the first batch containing an accepted result. The lowest accepted
/// index wins, so the outcome does not depend on the thread count.
fn run_restarts<T: Send>(
    t2: u32,
    run: impl Fn(u32) -> T + Sync,
    accept: impl Fn(&T) -> bool + Sync,
) -> Vec<(u32, T)> {
    let batch = rayon::current_num_threads().max(1) as u32;
    let mut done = Vec::new();
    let mut start = 0;
    while start < t2 {
        let end = (start + batch).min(t2);
        let mut results: Vec<(u32, T)> =
            (start..end).into_par_iter().map(|r| (r, run(r))).collect();
        results.sort_by_key(|(r, _)| *r);
        let hit = results.iter().any(|(_, t)| accept(t));
        done.extend(results);
        if hit {
            break;
        }
        start = end;
    }
    done
}

/// Search for an OLH(n, m_target). The first column is fixed to the
/// canonical level order.
pub fn search_olh(n: usize, m_target: usize, config: &SearchConfig) -> Result<SearchOutcome> {
    if m_target == 0 {
        return Err(invalid("m_target must be at least 1"));
    }
    if m_target >= 2 && !olh_exists(n) {
        return Err(Error::NoOlhExists(n));
    }
    if m_target > n.saturating_sub(1).max(1) {
        return Err(invalid(format!(
            "m_target = {m_target} exceeds n - 1 = {}",
            n - 1
        )));
    }
    if config.t1 == 0 || config.t2 == 0 {
        return Err(invalid("t1 and t2 must be at least 1"));
    }
    let results = run_restarts(
        config.t2,
        |r| restart_olh(n, m_target, config, r),
        |cols| cols.len() == m_target,
    );
    // longest prefix, lowest restart index on ties
    let (restart, cols) = results
        .into_iter()
        .fold(None::<(u32, Vec<Vec<i64>>)>, |acc, (r, cols)| match acc {
            Some((_, ref best)) if best.len() >= cols.len() => acc,
            _ => Some((r, cols)),
        })
        .expect("t2 >= 1");
    let complete = cols.len() == m_target;
    let design = DesignMatrix::from_columns(&cols)?.with_recipe(config.recipe(n, cols.len()));
    if !design.is_olh() {
        return Err(Error::VerificationFailed(format!(
            "search produced a non-orthogonal design for n = {n}"
        )));
    }
    Ok(SearchOutcome {
        design,
        complete,
        restart,
    })
}

fn total_objective(cols: &[Vec<i64>]) -> i64 {
    let mut t = 0;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let v = dot(&cols[i], &cols[j]);
            t += v * v;
        }
    }
    t
}

/// Search for a nearly orthogonal LH(n, m_target) minimizing the sum of
/// squared column inner products. Always returns a design.
pub fn search_nolh(
    n: usize,
    m_target: usize,
    config: &SearchConfig,
) -> Result<(DesignMatrix, CorrelationReport)> {
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    if m_target == 0 {
        return Err(invalid("m_target must be at least 1"));
    }
    if config.t1 == 0 || config.t2 == 0 {
        return Err(invalid("t1 and t2 must be at least 1"));
    }
    let threshold = match config.objective {
        Objective::MinRhoSq { threshold } => threshold,
        Objective::ExactOrthogonal => 0.0,
    };
    // all columns share the norm n(n²-1)/3, so ρ² = total / (pairs · norm²)
    let norm = (n * (n * n - 1) / 3) as f64;
    let pairs = (m_target * (m_target - 1) / 2).max(1) as f64;
    let rho_sq = |t: i64| t as f64 / (pairs * norm * norm);
    let run = |r: u32| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
        let mut cols = vec![levels_for(n).expect("n >= 2")];
        while cols.len() < m_target {
            let (c, _) = best_column(n, &cols, config.t1, &mut rng);
            cols.push(c);
        }
        let t = total_objective(&cols);
        (cols, t)
    };
    let results = run_restarts(config.t2, run, |(_, t)| rho_sq(*t) <= threshold);
    let (_, (cols, _)) = results
        .into_iter()
        .fold(None::<(u32, (Vec<Vec<i64>>, i64))>, |acc, (r, res)| match acc {
            Some((_, (_, bt))) if bt <= res.1 => acc,
            _ => Some((r, res)),
        })
        .expect("t2 >= 1");
    let design = DesignMatrix::from_columns(&cols)?.with_recipe(config.recipe(n, m_target));
    let report = correlation(&design)?;
    Ok((design, report))
}
