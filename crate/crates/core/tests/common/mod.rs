//! Test-only oracles, written without the library's verifier or solver.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use starprod::{Family, Graph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges, Family::Custom).unwrap()
}

/// Random spanning tree plus random extra edges.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) && !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges, Family::Custom).unwrap()
}

fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; g.n()]; g.n()];
    for &(u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Proper and no path a-b-c-d on four distinct vertices colored x,y,x,y.
pub fn naive_is_star(g: &Graph, colors: &[u32]) -> bool {
    let adj = adjacency(g);
    let n = g.n();
    for a in 0..n {
        for b in 0..n {
            if !adj[a][b] {
                continue;
            }
            if colors[a] == colors[b] {
                return false;
            }
            for c in 0..n {
                if c == a || !adj[b][c] || colors[c] != colors[a] {
                    continue;
                }
                for d in 0..n {
                    if d != a && d != b && adj[c][d] && colors[d] == colors[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Calls `f` on every assignment in `{1..k}^n`; stops when `f` returns true.
pub fn for_each_assignment(n: usize, k: usize, mut f: impl FnMut(&[u32]) -> bool) -> bool {
    let mut colors = vec![1u32; n];
    loop {
        if f(&colors) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            if (colors[i] as usize) < k {
                colors[i] += 1;
                break;
            }
            colors[i] = 1;
            i += 1;
        }
    }
}

pub fn naive_chi(g: &Graph) -> usize {
    if g.n() == 0 {
        return 0;
    }
    (1..=g.n())
        .find(|&k| for_each_assignment(g.n(), k, |c| naive_is_star(g, c)))
        .unwrap()
}

/// Number of star colorings with colors drawn from `{1..k}`.
pub fn naive_count(g: &Graph, k: usize) -> usize {
    let mut count = 0;
    for_each_assignment(g.n(), k, |c| {
        if naive_is_star(g, c) {
            count += 1;
        }
        false
    });
    count
}

pub fn family(label: &str) -> Graph {
    starprod::build_family(&label.parse().unwrap()).unwrap()
}
