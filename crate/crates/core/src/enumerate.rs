//! Exact enumeration of `Lin(X, Y)`.
//!
//! Two strategies produce the same canonically sorted list:
//!
//! * brute force over all `|Y|^|X|` tables, used while that count stays at or
//!   below [`BRUTE_FORCE_LIMIT`];
//! * backtracking over the values of the join-irreducibles of `X`. Every
//!   join-preserving map is determined by those values, so assignments are
//!   pruned by monotonicity and by `j ≤ j1 ∨ j2 ⇒ g(j) ≤ g(j1) ∨ g(j2)`,
//!   extended by joins, and kept only if the extension is linear.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::FiniteOml;
use crate::linmap::{is_linear, LinMap};

pub const DEFAULT_CAP: usize = 100_000;
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    BruteForce,
    JoinIrreducible,
}

pub fn enumerate_lin(x: &Arc<FiniteOml>, y: &Arc<FiniteOml>, cap: usize) -> Result<Vec<LinMap>> {
    enumerate_lin_with(x, y, cap, Strategy::Auto)
}

pub fn table_count(x: &FiniteOml, y: &FiniteOml) -> u128 {
    (y.len() as u128).saturating_pow(x.len() as u32)
}

pub fn enumerate_lin_with(
    x: &Arc<FiniteOml>,
    y: &Arc<FiniteOml>,
    cap: usize,
    strategy: Strategy,
) -> Result<Vec<LinMap>> {
    if cap == 0 {
        return Err(Error::InvalidInput("cap must be at least 1".into()));
    }
    let strategy = match strategy {
        Strategy::Auto if table_count(x, y) <= BRUTE_FORCE_LIMIT => Strategy::BruteForce,
        Strategy::Auto => Strategy::JoinIrreducible,
        s => s,
    };
    let tables = match strategy {
        Strategy::BruteForce => brute_force(x, y, cap)?,
        _ => join_irreducible(x, y, cap)?,
    };
    Ok(tables
        .into_iter()
        .map(|v| LinMap::new_unchecked(Arc::clone(x), Arc::clone(y), v))
        .collect())
}

fn bump(counter: &AtomicUsize, cap: usize) -> Result<()> {
    if counter.fetch_add(1, Ordering::Relaxed) + 1 > cap {
        Err(Error::CapExceeded(cap))
    } else {
        Ok(())
    }
}

/// Tables are visited in lexicographic order with the first domain element
/// most significant, so concatenating the per-prefix results is already
/// canonically sorted.
fn brute_force(x: &FiniteOml, y: &FiniteOml, cap: usize) -> Result<Vec<Vec<usize>>> {
    let (n, m) = (x.len(), y.len());
    let found = AtomicUsize::new(0);
    let chunks: Vec<Result<Vec<Vec<usize>>>> = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut table = vec![0usize; n];
            table[0] = first;
            loop {
                if is_linear(x, y, &table)? {
                    bump(&found, cap)?;
                    out.push(table.clone());
                }
                // odometer over positions 1..n
                let mut pos = n;
                loop {
                    if pos == 1 {
                        return Ok(out);
                    }
                    pos -= 1;
                    table[pos] += 1;
                    if table[pos] < m {
                        break;
                    }
                    table[pos] = 0;
                }
            }
        })
        .collect();
    let mut all = Vec::new();
    for c in chunks {
        all.extend(c?);
    }
    Ok(all)
}

fn join_irreducible(x: &FiniteOml, y: &FiniteOml, cap: usize) -> Result<Vec<Vec<usize>>> {
    let mut ji = x.join_irreducibles();
    ji.sort_by_key(|&j| (x.down_set(j).count_ones(..), j));
    let k = ji.len();
    let found = AtomicUsize::new(0);

    let extend = |g: &[usize]| -> Vec<usize> {
        (0..x.len())
            .map(|e| {
                y.join_set(
                    ji.iter()
                        .zip(g)
                        .filter(|(&j, _)| x.leq(j, e))
                        .map(|(_, &v)| v),
                )
            })
            .collect()
    };

    // Assigning `g[i]` is admissible when it respects the order among
    // join-irreducibles and the join-cover constraints among those already set.
    let admissible = |g: &[usize], i: usize| -> bool {
        let v = g[i];
        for p in 0..i {
            if x.leq(ji[p], ji[i]) && !y.leq(g[p], v) {
                return false;
            }
        }
        for p in 0..=i {
            for q in p..=i {
                let cover = x.join(ji[p], ji[q]);
                let image = y.join(g[p], g[q]);
                for r in 0..=i {
                    if (r == i || p == i || q == i) && x.leq(ji[r], cover) && !y.leq(g[r], image) {
                        return false;
                    }
                }
            }
        }
        true
    };

    let search = |first: Option<usize>| -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut g = vec![0usize; k];
        let mut depth = 0usize;
        if let Some(v) = first {
            g[0] = v;
            if !admissible(&g, 0) {
                return Ok(out);
            }
            depth = 1;
        }
        let start = depth;
        // iterative backtracking: g[depth] is the next value to try at `depth`
        let mut next = vec![0usize; k + 1];
        loop {
            if depth == k {
                let table = extend(&g);
                if is_linear(x, y, &table)? {
                    bump(&found, cap)?;
                    out.push(table);
                }
                if depth == start {
                    return Ok(out);
                }
                depth -= 1;
                continue;
            }
            if next[depth] >= y.len() {
                next[depth] = 0;
                if depth == start {
                    return Ok(out);
                }
                depth -= 1;
                continue;
            }
            g[depth] = next[depth];
            next[depth] += 1;
            if admissible(&g, depth) {
                depth += 1;
            }
        }
    };

    let mut all = if k == 0 {
        search(None)?
    } else {
        let parts: Vec<Result<Vec<Vec<usize>>>> =
            (0..y.len()).into_par_iter().map(|v| search(Some(v))).collect();
        let mut all = Vec::new();
        for p in parts {
            all.extend(p?);
        }
        all
    };
    all.sort_unstable();
    Ok(all)
}
