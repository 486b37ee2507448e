use crate::persistence::{Barcode, Interval};

use super::{MatchingCost, MatchingError};

/// Largest barcode (bars counted with multiplicity) accepted per side.
pub const MAX_BARS: usize = 64;

/// Exact bottleneck distance: the smallest threshold at which the bars,
/// padded with diagonal copies, admit a perfect matching.
pub fn bottleneck_distance(a: &Barcode, b: &Barcode) -> Result<MatchingCost, MatchingError> {
    let xs = a.bars();
    let ys = b.bars();
    for side in [&xs, &ys] {
        if side.len() > MAX_BARS {
            return Err(MatchingError::TooLarge(side.len()));
        }
    }
    // all costs are doubled so that half lengths stay integral
    let mut candidates = vec![0i64];
    for x in &xs {
        candidates.push(x.length());
        for y in &ys {
            candidates.push(2 * linf(*x, *y));
        }
    }
    candidates.extend(ys.iter().map(|y| y.length()));
    candidates.sort_unstable();
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&xs, &ys, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(MatchingCost::new(candidates[lo], 2))
}

fn linf(x: Interval, y: Interval) -> i64 {
    (x.birth() - y.birth())
        .abs()
        .max((x.death() - y.death()).abs())
}

/// Left vertices: bars of `xs`, then diagonal copies of `ys`. Right
/// vertices: bars of `ys`, then diagonal copies of `xs`.
fn feasible(xs: &[Interval], ys: &[Interval], twice_eps: i64) -> bool {
    let (n, m) = (xs.len(), ys.len());
    let size = n + m;
    let mut adj = vec![Vec::new(); size];
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            if 2 * linf(*x, *y) <= twice_eps {
                adj[i].push(j);
            }
        }
        if x.length() <= twice_eps {
            adj[i].push(m + i);
        }
    }
    for (j, y) in ys.iter().enumerate() {
        if y.length() <= twice_eps {
            adj[n + j].push(j);
        }
        adj[n + j].extend(m..m + n);
    }
    let mut owner: Vec<Option<usize>> = vec![None; size];
    for u in 0..size {
        let mut seen = vec![false; size];
        if !augment(u, &adj, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(u: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if owner[v].is_none_or(|w| augment(w, adj, owner, seen)) {
            owner[v] = Some(u);
            return true;
        }
    }
    false
}
