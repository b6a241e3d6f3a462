//! Independent oracle implementations shared by the integration suites.
//!
//! Everything here deliberately recomputes from first principles — explicit
//! subgraphs, depth-limited searches, reversed elimination orders — so it
//! shares no code path with the library internals it checks.

#![allow(dead_code)]

use ldpc_tasa::ParityCheckMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_matrix(m: usize, n: usize, density: f64, seed: u64) -> ParityCheckMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = ParityCheckMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            if rng.random::<f64>() < density {
                h.toggle(i, j).unwrap();
            }
        }
    }
    h
}

/// 4-cycles by brute force: every (row pair, column pair) with all four
/// entries set.
pub fn brute_force_c4(h: &ParityCheckMatrix) -> u64 {
    let (m, n) = h.dims();
    let mut count = 0;
    for i in 0..m {
        for j in (i + 1)..m {
            for a in 0..n {
                for b in (a + 1)..n {
                    if h.get(i, a) && h.get(i, b) && h.get(j, a) && h.get(j, b) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Simple 6-cycles by depth-limited DFS on the bipartite graph. Each cycle
/// is anchored at its minimum-id vertex and traversed in both directions,
/// so the path count is halved.
pub fn dfs_c6(h: &ParityCheckMatrix) -> u64 {
    let (m, n) = h.dims();
    let nodes = n + m;
    let neighbors = |u: usize| -> Vec<usize> {
        if u < n {
            h.col_support(u).iter().map(|&c| c + n).collect()
        } else {
            h.row_support(u - n).to_vec()
        }
    };

    let mut paths = 0u64;
    let mut stack = Vec::new();
    for root in 0..nodes {
        stack.clear();
        stack.push(root);
        let mut visited = vec![false; nodes];
        visited[root] = true;
        paths += dfs_count(root, root, 6, &mut visited, &neighbors, &mut stack);
    }
    paths / 2
}

fn dfs_count(
    root: usize,
    at: usize,
    steps_left: usize,
    visited: &mut Vec<bool>,
    neighbors: &dyn Fn(usize) -> Vec<usize>,
    stack: &mut Vec<usize>,
) -> u64 {
    if steps_left == 0 {
        return 0;
    }
    let mut found = 0;
    for next in neighbors(at) {
        if next == root {
            if steps_left == 1 {
                found += 1;
            }
            continue;
        }
        // Anchoring: interior vertices must exceed the root id.
        if next < root || visited[next] {
            continue;
        }
        visited[next] = true;
        stack.push(next);
        found += dfs_count(root, next, steps_left - 1, visited, neighbors, stack);
        stack.pop();
        visited[next] = false;
    }
    found
}

/// (4,2) trapping sets by explicit induced-subgraph construction: for every
/// 4-subset of variables, build the check-degree table and tally odd rows.
pub fn trapping_sets_recount(h: &ParityCheckMatrix) -> u64 {
    let (m, n) = h.dims();
    if n < 4 {
        return 0;
    }
    let mut count = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    let mut odd = 0;
                    for i in 0..m {
                        let degree = [a, b, c, d]
                            .iter()
                            .filter(|&&col| h.get(i, col))
                            .count();
                        if degree % 2 == 1 {
                            odd += 1;
                        }
                    }
                    if odd == 2 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// GF(2) rank by elimination over Vec<bool> rows, processing columns
/// right-to-left and picking pivots from the bottom up — the reverse of the
/// library's pivot-selection order.
pub fn rank_reversed_pivots(h: &ParityCheckMatrix) -> usize {
    let (m, n) = h.dims();
    let mut rows: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..n).map(|j| h.get(i, j)).collect())
        .collect();
    let mut used = vec![false; m];
    let mut rank = 0;
    for col in (0..n).rev() {
        let Some(pivot) = (0..m).rev().find(|&r| !used[r] && rows[r][col]) else {
            continue;
        };
        used[pivot] = true;
        rank += 1;
        let pivot_row = rows[pivot].clone();
        for r in 0..m {
            if r != pivot && !used[r] && rows[r][col] {
                for j in 0..n {
                    let v = pivot_row[j];
                    rows[r][j] ^= v;
                }
            }
        }
    }
    rank
}

/// Block deviation recount with explicit shifted reference sets.
pub fn block_deviation_recount(h: &ParityCheckMatrix, b: usize) -> u64 {
    use std::collections::HashSet;
    let (m, n) = h.dims();
    assert!(b > 0 && m % b == 0 && n % b == 0);
    let mut dev = 0u64;
    for g in 0..n / b {
        let j0 = g * b;
        let reference: HashSet<usize> = h.col_support(j0).iter().copied().collect();
        for offset in 1..b {
            let shifted: HashSet<usize> = reference
                .iter()
                .map(|&r| (r / b) * b + ((r % b) + offset) % b)
                .collect();
            let actual: HashSet<usize> = h.col_support(j0 + offset).iter().copied().collect();
            dev += shifted.symmetric_difference(&actual).count() as u64;
        }
    }
    dev
}

/// Random forest (cycle-free) Tanner graph: edges added only between
/// components, tracked by union-find.
pub fn random_forest_matrix(m: usize, n: usize, edge_budget: usize, seed: u64) -> ParityCheckMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parent: Vec<usize> = (0..m + n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let mut h = ParityCheckMatrix::zeros(m, n);
    let mut edges = 0;
    for _ in 0..edge_budget * 20 {
        if edges == edge_budget {
            break;
        }
        let i = rng.random_range(0..m);
        let j = rng.random_range(0..n);
        if h.get(i, j) {
            continue;
        }
        let (ri, rj) = (find(&mut parent, j), find(&mut parent, n + i));
        if ri == rj {
            continue;
        }
        parent[ri] = rj;
        h.toggle(i, j).unwrap();
        edges += 1;
    }
    h
}

/// Exact bitwise MAP over the code defined by H: enumerate all words with
/// zero syndrome, weight them by the AWGN likelihood of y, and take the
/// per-bit marginal decision.
pub fn bitwise_map(h: &ParityCheckMatrix, y: &[f64], sigma2: f64) -> Vec<u8> {
    let n = h.n();
    assert!(n <= 20, "exhaustive enumeration only");
    let mut mass = vec![[0.0f64; 2]; n];
    let mut any = false;
    for word in 0u32..(1 << n) {
        let bits: Vec<u8> = (0..n).map(|j| (word >> j & 1) as u8).collect();
        if !h.syndrome_is_zero(&bits) {
            continue;
        }
        any = true;
        let log_like: f64 = bits
            .iter()
            .zip(y)
            .map(|(&b, &yi)| {
                let s = 2.0 * b as f64 - 1.0;
                -(yi - s) * (yi - s) / (2.0 * sigma2)
            })
            .sum();
        let like = log_like.exp();
        for j in 0..n {
            mass[j][bits[j] as usize] += like;
        }
    }
    assert!(any, "code has at least the zero word");
    mass.iter().map(|m| (m[1] > m[0]) as u8).collect()
}
