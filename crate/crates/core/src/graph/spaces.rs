//! Cycle/cut decomposition of the edge space, fundamental cycle bases, and a
//! directed-cycle search used to drive concatenated estimation.

use super::chain::{OneChain, ZeroChain};
use super::PatternTransferGraph;
use crate::error::Result;

pub const LEARNABLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct CycleCutParts {
    pub cycle: OneChain,
    pub cut: OneChain,
    /// Norm of the boundary of the recovered cycle part, as a solve residual.
    pub residual: f64,
}

/// Orthonormalized cut-space basis for one graph; projections against it give
/// the cycle/cut split of any 1-chain.
#[derive(Clone, Debug)]
pub struct SpaceDecomposition {
    n_edges: usize,
    cut_basis: Vec<Vec<f64>>,
}

impl SpaceDecomposition {
    pub fn new(g: &PatternTransferGraph) -> Self {
        let n_edges = g.n_edges();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for v in 0..g.n_vertices() {
            let delta = g.coboundary(&ZeroChain::vertex(v));
            let mut dense = vec![0.0; n_edges];
            for (e, c) in delta.iter() {
                dense[e] = c;
            }
            // Gram-Schmidt against what we already kept.
            for q in &basis {
                let proj: f64 = q.iter().zip(dense.iter()).map(|(a, b)| a * b).sum();
                for (d, qv) in dense.iter_mut().zip(q.iter()) {
                    *d -= proj * qv;
                }
            }
            let norm: f64 = dense.iter().map(|d| d * d).sum::<f64>().sqrt();
            if norm > 1e-12 {
                for d in dense.iter_mut() {
                    *d /= norm;
                }
                basis.push(dense);
            }
        }
        SpaceDecomposition {
            n_edges,
            cut_basis: basis,
        }
    }

    pub fn cut_dim(&self) -> usize {
        self.cut_basis.len()
    }

    pub fn cycle_dim(&self) -> usize {
        self.n_edges - self.cut_basis.len()
    }

    /// Coordinates of the cut part in the orthonormal cut basis.
    pub fn cut_coordinates(&self, mu: &OneChain) -> Vec<f64> {
        self.cut_basis
            .iter()
            .map(|q| mu.iter().map(|(e, c)| c * q[e]).sum())
            .collect()
    }

    pub fn cut_norm(&self, mu: &OneChain) -> f64 {
        self.cut_coordinates(mu)
            .iter()
            .map(|c| c * c)
            .sum::<f64>()
            .sqrt()
    }

    /// mu = cycle + cut with cut in the coboundary image and the parts
    /// orthogonal.
    pub fn decompose(&self, g: &PatternTransferGraph, mu: &OneChain) -> Result<CycleCutParts> {
        let coords = self.cut_coordinates(mu);
        let mut cut = OneChain::new();
        for (q, c) in self.cut_basis.iter().zip(coords.iter()) {
            if *c == 0.0 {
                continue;
            }
            for (e, qv) in q.iter().enumerate() {
                if *qv != 0.0 {
                    cut.add(e, c * qv);
                }
            }
        }
        let mut cycle = mu.clone();
        cycle.add_scaled(&cut, -1.0);
        let residual = g.boundary(&cycle)?.norm();
        Ok(CycleCutParts {
            cycle,
            cut,
            residual,
        })
    }

    pub fn is_learnable(&self, mu: &OneChain) -> bool {
        self.cut_norm(mu) <= LEARNABLE_TOL
    }
}

/// True iff the chain lies in the cycle space (cut part below 1e-9).
pub fn is_learnable(mu: &OneChain, g: &PatternTransferGraph) -> bool {
    SpaceDecomposition::new(g).is_learnable(mu)
}

/// Fundamental cycles from a deterministic spanning forest: breadth-first
/// from the lowest-index vertex with edges scanned in index order. Loops come
/// first, then one cycle per chord.
pub fn cycle_basis(g: &PatternTransferGraph) -> Vec<OneChain> {
    let nv = g.n_vertices();
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv]; // (edge, other endpoint)
    let mut loops = Vec::new();
    for (e, info) in g.edges().iter().enumerate() {
        if info.src == info.dst {
            loops.push(e);
        } else {
            adjacency[info.src].push((e, info.dst));
            adjacency[info.dst].push((e, info.src));
        }
    }
    // BFS forest over the touched subgraph.
    let mut parent_edge: Vec<Option<usize>> = vec![None; nv];
    let mut visited = vec![false; nv];
    let mut tree_edges = vec![false; g.n_edges()];
    for root in 0..nv {
        if visited[root] || adjacency[root].is_empty() {
            continue;
        }
        visited[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(e, v) in &adjacency[u] {
                if !visited[v] {
                    visited[v] = true;
                    parent_edge[v] = Some(e);
                    tree_edges[e] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    let path_to_root = |mut v: usize| -> Vec<usize> {
        let mut edges = Vec::new();
        while let Some(e) = parent_edge[v] {
            edges.push(e);
            let info = g.edge(e);
            v = if info.src == v { info.dst } else { info.src };
        }
        edges
    };
    let mut basis: Vec<OneChain> = loops.iter().map(|&e| OneChain::edge(e)).collect();
    for (e, info) in g.edges().iter().enumerate() {
        if info.src == info.dst || tree_edges[e] {
            continue;
        }
        // Chord e: close the cycle with the tree walk dst -> root -> src; the
        // shared suffix above the meeting point cancels. An edge counts +1
        // when the walk traverses it along its own direction.
        let mut chain = OneChain::edge(e);
        let mut walk = |edges: Vec<usize>, flip: f64, from: usize| {
            let mut at = from;
            for t in edges {
                let ti = g.edge(t);
                let forward = ti.src == at;
                chain.add(t, if forward { flip } else { -flip });
                at = if forward { ti.dst } else { ti.src };
            }
        };
        walk(path_to_root(info.dst), 1.0, info.dst);
        walk(path_to_root(info.src), -1.0, info.src);
        basis.push(chain);
    }
    basis
}

/// A closed directed walk given as the edge indices in traversal order.
#[derive(Clone, Debug)]
pub struct DirectedCycle {
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct DirectedCycleSearch {
    pub cycles: Vec<DirectedCycle>,
    /// True when the returned cycles span the whole cycle space.
    pub complete: bool,
}

/// Searches for a basis of the cycle space consisting of directed simple
/// cycles (self-loops included), which the concatenated protocol can run
/// as-is. Returns a possibly-incomplete spanning set; whether every pattern
/// transfer graph admits one is open, so callers must handle `!complete`.
pub fn directed_cycle_basis(g: &PatternTransferGraph) -> DirectedCycleSearch {
    let decomposition = SpaceDecomposition::new(g);
    let target = decomposition.cycle_dim();
    let nv = g.n_vertices();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (e, info) in g.edges().iter().enumerate() {
        if info.src != info.dst {
            out_edges[info.src].push(e);
        }
    }
    let mut cycles: Vec<DirectedCycle> = Vec::new();
    let mut rank_rows: Vec<Vec<f64>> = Vec::new();
    let mut try_add = |edges: &[usize], cycles: &mut Vec<DirectedCycle>| -> bool {
        let mut dense = vec![0.0; g.n_edges()];
        for &e in edges {
            dense[e] += 1.0;
        }
        for row in &rank_rows {
            let pivot = row.iter().position(|v| v.abs() > 1e-9).unwrap();
            let factor = dense[pivot] / row[pivot];
            if factor != 0.0 {
                for (d, r) in dense.iter_mut().zip(row.iter()) {
                    *d -= factor * r;
                }
            }
        }
        if dense.iter().any(|v| v.abs() > 1e-6) {
            rank_rows.push(dense);
            cycles.push(DirectedCycle {
                edges: edges.to_vec(),
            });
            true
        } else {
            false
        }
    };
    // Self-loops are directed 1-cycles and always independent of each other.
    for (e, info) in g.edges().iter().enumerate() {
        if info.src == info.dst {
            try_add(&[e], &mut cycles);
        }
    }
    // Depth-first enumeration of simple directed cycles, shortest first, with
    // the start vertex as the minimal vertex on the cycle (dedupes rotations).
    let mut budget = 500_000usize;
    for max_len in 2..=nv.max(2) {
        if cycles.len() >= target {
            break;
        }
        for start in 0..nv {
            if cycles.len() >= target || budget == 0 {
                break;
            }
            let mut stack_edges: Vec<usize> = Vec::new();
            let mut on_path = vec![false; nv];
            on_path[start] = true;
            dfs_cycles(
                g,
                &out_edges,
                start,
                start,
                max_len,
                &mut stack_edges,
                &mut on_path,
                &mut budget,
                &mut |edges| {
                    try_add(edges, &mut cycles);
                },
            );
        }
    }
    DirectedCycleSearch {
        complete: cycles.len() >= target,
        cycles,
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs_cycles(
    g: &PatternTransferGraph,
    out_edges: &[Vec<usize>],
    start: usize,
    at: usize,
    remaining: usize,
    stack_edges: &mut Vec<usize>,
    on_path: &mut [bool],
    budget: &mut usize,
    emit: &mut impl FnMut(&[usize]),
) {
    if *budget == 0 {
        return;
    }
    *budget -= 1;
    for &e in &out_edges[at] {
        let dst = g.edge(e).dst;
        if dst == start {
            if !stack_edges.is_empty() {
                stack_edges.push(e);
                emit(stack_edges);
                stack_edges.pop();
            }
            continue;
        }
        if remaining <= 1 || on_path[dst] || dst < start {
            continue;
        }
        stack_edges.push(e);
        on_path[dst] = true;
        dfs_cycles(
            g, out_edges, start, dst, remaining - 1, stack_edges, on_path, budget, emit,
        );
        on_path[dst] = false;
        stack_edges.pop();
    }
}
