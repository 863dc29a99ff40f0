//! Maximum flow on the bipartite network of zero entries.
//!
//! Source → row `i` has capacity `a_i`, column `j` → sink has capacity
//! `b_j`, and every zero entry `(i, j)` of the reduced matrix becomes an
//! uncapacitated row → column arc. A minimum cut of this network is exactly
//! a minimum-weight line cover of the zeros, with row `i` weighing `a_i` and
//! column `j` weighing `b_j`.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::{Cell, Matrix};

const UNBOUNDED: u64 = u64::MAX;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    residual: u64,
}

/// Residual graph with arcs stored in pairs: arc `2k` is forward, `2k + 1`
/// its reverse.
#[derive(Debug, Clone)]
pub struct ZeroFlowNetwork {
    rows: usize,
    cols: usize,
    arcs: Vec<Arc>,
    adjacency: Vec<Vec<usize>>,
    zero_arcs: Vec<(Cell, usize)>,
}

/// Result of [`ZeroFlowNetwork::max_flow`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: u64,
    /// Positive flow on zero-entry arcs in `(row, column)` order.
    pub zero_flow: Vec<(Cell, u64)>,
    /// Rows not reachable from the source in the final residual graph.
    pub cut_rows: Vec<usize>,
    /// Columns reachable from the source in the final residual graph.
    pub cut_cols: Vec<usize>,
}

impl ZeroFlowNetwork {
    /// Builds the network for the zero entries of `reduced`.
    pub fn new(reduced: &Matrix, supply: &[u64], demand: &[u64]) -> Self {
        let (m, n) = (reduced.rows(), reduced.cols());
        let mut net = ZeroFlowNetwork {
            rows: m,
            cols: n,
            arcs: Vec::new(),
            adjacency: vec![Vec::new(); m + n + 2],
            zero_arcs: Vec::new(),
        };
        let (source, sink) = (net.source(), net.sink());
        for (i, &a) in supply.iter().enumerate() {
            net.add_arc(source, net.row_node(i), a);
        }
        for (i, j, v) in reduced.iter_cells() {
            if v.is_zero() {
                let k = net.add_arc(net.row_node(i), net.col_node(j), UNBOUNDED);
                net.zero_arcs.push(((i, j), k));
            }
        }
        for (j, &b) in demand.iter().enumerate() {
            net.add_arc(net.col_node(j), sink, b);
        }
        net
    }

    fn source(&self) -> usize {
        0
    }

    fn sink(&self) -> usize {
        self.rows + self.cols + 1
    }

    fn row_node(&self, i: usize) -> usize {
        1 + i
    }

    fn col_node(&self, j: usize) -> usize {
        1 + self.rows + j
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let k = self.arcs.len();
        self.arcs.push(Arc { to, residual: cap });
        self.arcs.push(Arc {
            to: from,
            residual: 0,
        });
        self.adjacency[from].push(k);
        self.adjacency[to].push(k + 1);
        k
    }

    fn push(&mut self, k: usize, amount: u64) {
        self.arcs[k].residual -= amount;
        self.arcs[k ^ 1].residual += amount;
    }

    /// Flow on forward arc `k`: the residual of its reverse.
    fn flow(&self, k: usize) -> u64 {
        self.arcs[k ^ 1].residual
    }

    /// Breadth-first search from the source; returns the arc used to reach
    /// each node.
    fn bfs(&self) -> Vec<Option<usize>> {
        let mut via: Vec<Option<usize>> = vec![None; self.adjacency.len()];
        let mut seen = vec![false; self.adjacency.len()];
        seen[self.source()] = true;
        let mut queue = VecDeque::from([self.source()]);
        while let Some(u) = queue.pop_front() {
            for &k in &self.adjacency[u] {
                let arc = &self.arcs[k];
                if !seen[arc.to] && arc.residual > 0 {
                    seen[arc.to] = true;
                    via[arc.to] = Some(k);
                    queue.push_back(arc.to);
                }
            }
        }
        via
    }

    /// Edmonds–Karp with arcs scanned in insertion order (lowest index
    /// first), so the resulting flow and cut are deterministic.
    pub fn max_flow(mut self) -> MaxFlow {
        let (source, sink) = (self.source(), self.sink());
        let mut value = 0u64;
        loop {
            let via = self.bfs();
            if via[sink].is_none() {
                break;
            }
            let mut path = Vec::new();
            let mut node = sink;
            while node != source {
                let k = via[node].expect("node on augmenting path");
                path.push(k);
                node = self.arcs[k ^ 1].to;
            }
            let bottleneck = path
                .iter()
                .map(|&k| self.arcs[k].residual)
                .min()
                .expect("augmenting path is nonempty");
            for &k in &path {
                self.push(k, bottleneck);
            }
            value += bottleneck;
        }

        let reachable: Vec<bool> = {
            let via = self.bfs();
            (0..self.adjacency.len())
                .map(|v| v == source || via[v].is_some())
                .collect()
        };
        let cut_rows = (0..self.rows)
            .filter(|&i| !reachable[self.row_node(i)])
            .collect();
        let cut_cols = (0..self.cols)
            .filter(|&j| reachable[self.col_node(j)])
            .collect();
        let zero_flow = self
            .zero_arcs
            .iter()
            .map(|&(cell, k)| (cell, self.flow(k)))
            .filter(|&(_, f)| f > 0)
            .collect();
        MaxFlow {
            value,
            zero_flow,
            cut_rows,
            cut_cols,
        }
    }
}
