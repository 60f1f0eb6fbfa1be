#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spl_core::{PauliAxis, PauliString, TopologyGraph, MeasurementSchedule};

pub fn disjoint_k4s(copies: usize) -> TopologyGraph {
    let edges = (0..copies).flat_map(|c| {
        (0..4).flat_map(move |u| (u + 1..4).map(move |v| (4 * c + u, 4 * c + v)))
    });
    TopologyGraph::from_edges(4 * copies, edges).unwrap()
}

pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> TopologyGraph {
    let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    TopologyGraph::from_edges(n, edges).unwrap()
}

/// Triangular lattice patch: grid plus one diagonal per cell (planar, 3-colorable).
pub fn triangular_mesh(rows: usize, cols: usize) -> TopologyGraph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
            if r + 1 < rows && c + 1 < cols {
                edges.push((id(r, c), id(r + 1, c + 1)));
            }
        }
    }
    TopologyGraph::from_edges(rows * cols, edges).unwrap()
}

/// Grid with both diagonals in every cell (king graph): max clique 4, 4-colorable.
pub fn king_mesh(rows: usize, cols: usize) -> TopologyGraph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
                if c + 1 < cols {
                    edges.push((id(r, c), id(r + 1, c + 1)));
                }
                if c > 0 {
                    edges.push((id(r, c), id(r + 1, c - 1)));
                }
            }
        }
    }
    TopologyGraph::from_edges(rows * cols, edges).unwrap()
}

/// Random graph with a planted partition into `parts` classes; edges only
/// between classes.
pub fn planted_partite(rng: &mut ChaCha8Rng, n: usize, parts: usize, p: f64) -> TopologyGraph {
    let class: Vec<usize> = (0..n).map(|_| rng.gen_range(0..parts)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if class[u] != class[v] && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    TopologyGraph::from_edges(n, edges).unwrap()
}

/// Each new vertex attaches to at most two earlier ones.
pub fn random_two_degenerate(rng: &mut ChaCha8Rng, n: usize) -> TopologyGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        let k = rng.gen_range(1..=2.min(v));
        let mut pool: Vec<usize> = (0..v).collect();
        for _ in 0..k {
            edges.push((pool.swap_remove(rng.gen_range(0..pool.len())), v));
        }
    }
    TopologyGraph::from_edges(n, edges).unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> TopologyGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    TopologyGraph::from_edges(n, edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every weight-1 vertex Pauli and weight-2 edge Pauli that no basis agrees
/// with, found by scanning basis letters directly.
pub fn unreadable(g: &TopologyGraph, s: &MeasurementSchedule) -> Vec<String> {
    let mut missing = Vec::new();
    for v in 0..g.vertex_count() {
        for a in PauliAxis::NON_IDENTITY {
            if !s.bases().iter().any(|b| b.axis(v) == a) {
                missing.push(PauliString::single(g.vertex_count(), v, a).to_string());
            }
        }
    }
    for &(u, v) in g.edges() {
        for a in PauliAxis::NON_IDENTITY {
            for b in PauliAxis::NON_IDENTITY {
                if !s.bases().iter().any(|basis| basis.axis(u) == a && basis.axis(v) == b) {
                    missing.push(PauliString::pair(g.vertex_count(), (u, a), (v, b)).to_string());
                }
            }
        }
    }
    missing
}
