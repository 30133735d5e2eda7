//! Exact minimum-cost directed Steiner tree, exponential only in the number
//! of terminals.
//!
//! `W(X, v)` is the cheapest arborescence rooted at `v` spanning terminal
//! subset `X`. Subsets are processed in increasing mask order; for each one
//! the table is first seeded by merging two complementary proper subsets at
//! the same vertex and then closed under "prepend a path" with a Dijkstra
//! sweep over reversed arcs. No all-pairs distance table is built, so one
//! subset costs `O(2^|X| n + m + n log n)`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::scalar::Weight;

pub mod bruteforce;

pub const DEFAULT_TERMINAL_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DstArc<W> {
    pub tail: usize,
    pub head: usize,
    pub cost: W,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph<W> {
    pub vertex_count: usize,
    pub arcs: Vec<DstArc<W>>,
}

impl<W: Weight> Digraph<W> {
    pub fn new(vertex_count: usize, arcs: Vec<DstArc<W>>) -> Self {
        Self { vertex_count, arcs }
    }

    /// Builds from `(tail, head, cost)` triples.
    pub fn from_triples(vertex_count: usize, triples: &[(usize, usize, W)]) -> Self {
        Self::new(
            vertex_count,
            triples
                .iter()
                .map(|&(tail, head, cost)| DstArc { tail, head, cost })
                .collect(),
        )
    }

    pub fn arcs_cost(&self, arcs: &[usize]) -> u128 {
        arcs.iter().map(|&a| self.arcs[a].cost.as_u128()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DstConfig {
    pub terminal_cap: usize,
}

impl Default for DstConfig {
    fn default() -> Self {
        Self {
            terminal_cap: DEFAULT_TERMINAL_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DstError {
    #[error("terminals unreachable from the root: {terminals:?}")]
    Infeasible { terminals: Vec<usize> },
    #[error("{terminals} terminals exceed the cap of {cap}")]
    CapExceeded { terminals: usize, cap: usize },
    #[error("vertex {0} out of range")]
    InvalidVertex(usize),
    #[error("reconstructed tree costs {reconstructed}, table says {table}")]
    Inconsistent { table: u128, reconstructed: u128 },
}

/// How a table entry got its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backtrace {
    Unreached,
    /// `v` is the terminal of a singleton subset.
    Terminal,
    /// Union of the trees for `submask` and its complement, both rooted here.
    Merge(u32),
    /// Arc `v -> u` followed by the tree of the same subset rooted at `u`.
    Extend(usize),
}

/// Work counters. `subset_pairs` counts every `(mask, submask)` pair the
/// enumeration visits, trivial ones included, so it is exactly `3^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DstStats {
    pub terminals: usize,
    pub states: u64,
    pub subset_pairs: u64,
    pub merge_evaluations: u64,
    pub relaxations: u64,
}

/// Filled subset table for one root-less terminal universe.
#[derive(Debug, Clone)]
pub struct DstTable<W> {
    terminal_order: Vec<usize>,
    vertex_count: usize,
    cost: Vec<W>,
    backtrace: Vec<Backtrace>,
    stats: DstStats,
}

impl<W: Weight> DstTable<W> {
    /// Runs the dynamic program. `root` is dropped from the terminal
    /// universe, as are repeated terminals.
    pub fn compute(
        graph: &Digraph<W>,
        root: usize,
        terminals: &[usize],
        config: DstConfig,
    ) -> Result<Self, DstError> {
        let n = graph.vertex_count;
        for v in std::iter::once(root).chain(terminals.iter().copied()) {
            if v >= n {
                return Err(DstError::InvalidVertex(v));
            }
        }
        if let Some(a) = graph.arcs.iter().find(|a| a.tail >= n || a.head >= n) {
            return Err(DstError::InvalidVertex(a.tail.max(a.head)));
        }
        let mut terminal_order: Vec<usize> = Vec::new();
        for &t in terminals {
            if t != root && !terminal_order.contains(&t) {
                terminal_order.push(t);
            }
        }
        let k = terminal_order.len();
        if k > config.terminal_cap || k >= 32 {
            return Err(DstError::CapExceeded {
                terminals: k,
                cap: config.terminal_cap.min(31),
            });
        }

        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (id, a) in graph.arcs.iter().enumerate() {
            incoming[a.head].push(id);
        }

        let masks = 1usize << k;
        let mut table = DstTable {
            terminal_order,
            vertex_count: n,
            cost: vec![W::infinity(); masks * n],
            backtrace: vec![Backtrace::Unreached; masks * n],
            stats: DstStats {
                terminals: k,
                states: (masks * n) as u64,
                ..DstStats::default()
            },
        };

        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::new();
        for mask in 0..masks {
            let base = mask * n;
            let low = mask & mask.wrapping_neg();
            let mut sub = mask;
            loop {
                table.stats.subset_pairs += 1;
                // Each unordered split is visited once, via the half holding the lowest bit.
                if sub != 0 && sub != mask && sub & low != 0 {
                    table.merge(base, sub, mask ^ sub);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
            if mask == 0 {
                continue;
            }
            if mask == low {
                let t = table.terminal_order[mask.trailing_zeros() as usize];
                table.cost[base + t] = W::zero();
                table.backtrace[base + t] = Backtrace::Terminal;
            }
            table.relax(graph, &incoming, base, &mut settled, &mut heap);
        }
        Ok(table)
    }

    fn merge(&mut self, base: usize, left: usize, right: usize) {
        let n = self.vertex_count;
        self.stats.merge_evaluations += n as u64;
        let (lb, rb) = (left * n, right * n);
        for v in 0..n {
            let (a, b) = (self.cost[lb + v], self.cost[rb + v]);
            if a == W::infinity() || b == W::infinity() {
                continue;
            }
            let c = a.saturating_add(b);
            let cur = self.cost[base + v];
            // Submasks arrive in decreasing order, so on ties the last one is the smallest.
            if c < cur || (c == cur && matches!(self.backtrace[base + v], Backtrace::Merge(_))) {
                self.cost[base + v] = c;
                self.backtrace[base + v] = Backtrace::Merge(left as u32);
            }
        }
    }

    fn relax(
        &mut self,
        graph: &Digraph<W>,
        incoming: &[Vec<usize>],
        base: usize,
        settled: &mut [bool],
        heap: &mut BinaryHeap<Reverse<(W, usize)>>,
    ) {
        settled.iter_mut().for_each(|s| *s = false);
        heap.clear();
        for v in 0..self.vertex_count {
            if self.cost[base + v] != W::infinity() {
                heap.push(Reverse((self.cost[base + v], v)));
            }
        }
        while let Some(Reverse((c, v))) = heap.pop() {
            if settled[v] || c != self.cost[base + v] {
                continue;
            }
            settled[v] = true;
            for &id in &incoming[v] {
                let u = graph.arcs[id].tail;
                if settled[u] {
                    continue;
                }
                self.stats.relaxations += 1;
                let nc = c.saturating_add(graph.arcs[id].cost);
                let cur = self.cost[base + u];
                let better = nc < cur
                    || (nc == cur
                        && matches!(self.backtrace[base + u], Backtrace::Extend(old) if id < old));
                if better {
                    self.cost[base + u] = nc;
                    self.backtrace[base + u] = Backtrace::Extend(id);
                    heap.push(Reverse((nc, u)));
                }
            }
        }
    }

    pub fn terminal_order(&self) -> &[usize] {
        &self.terminal_order
    }

    pub fn full_mask(&self) -> usize {
        (1usize << self.terminal_order.len()) - 1
    }

    /// `None` when no arborescence rooted at `vertex` spans `mask`.
    pub fn cost(&self, mask: usize, vertex: usize) -> Option<W> {
        let c = self.cost[mask * self.vertex_count + vertex];
        (c != W::infinity()).then_some(c)
    }

    pub fn backtrace(&self, mask: usize, vertex: usize) -> Backtrace {
        self.backtrace[mask * self.vertex_count + vertex]
    }

    pub fn stats(&self) -> DstStats {
        self.stats
    }

    /// Arcs of the tree behind entry `(mask, vertex)`, possibly with repeats
    /// when both halves of a merge share arcs.
    fn collect_arcs(&self, graph: &Digraph<W>, mask: usize, vertex: usize) -> Vec<usize> {
        let mut arcs = Vec::new();
        let mut stack = vec![(mask, vertex)];
        while let Some((mask, v)) = stack.pop() {
            match self.backtrace(mask, v) {
                Backtrace::Unreached | Backtrace::Terminal => {}
                Backtrace::Merge(sub) => {
                    let sub = sub as usize;
                    stack.push((sub, v));
                    stack.push((mask ^ sub, v));
                }
                Backtrace::Extend(id) => {
                    arcs.push(id);
                    stack.push((mask, graph.arcs[id].head));
                }
            }
        }
        arcs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DstSolution<W> {
    /// Arc ids of the arborescence, ascending.
    pub arcs: Vec<usize>,
    pub cost: W,
    pub stats: DstStats,
}

/// Minimum-cost arborescence rooted at `root` that reaches every terminal.
pub fn solve_dst<W: Weight>(
    graph: &Digraph<W>,
    root: usize,
    terminals: &[usize],
    config: DstConfig,
) -> Result<DstSolution<W>, DstError> {
    let table = DstTable::compute(graph, root, terminals, config)?;
    let k = table.terminal_order.len();
    if k == 0 {
        return Ok(DstSolution {
            arcs: Vec::new(),
            cost: W::zero(),
            stats: table.stats,
        });
    }
    let full = table.full_mask();
    let Some(optimum) = table.cost(full, root) else {
        let terminals = (0..k)
            .filter(|&i| table.cost(1 << i, root).is_none())
            .map(|i| table.terminal_order[i])
            .collect();
        return Err(DstError::Infeasible { terminals });
    };
    let raw = table.collect_arcs(graph, full, root);
    let arcs = extract_arborescence(graph, root, &table.terminal_order, &raw);
    let reconstructed = graph.arcs_cost(&arcs);
    if reconstructed != optimum.as_u128() {
        return Err(DstError::Inconsistent {
            table: optimum.as_u128(),
            reconstructed,
        });
    }
    Ok(DstSolution {
        arcs,
        cost: optimum,
        stats: table.stats,
    })
}

/// Turns an arc set that reaches every terminal into an arborescence: BFS
/// from the root in arc-id order picks one parent per vertex, then branches
/// without terminals are trimmed.
pub(crate) fn extract_arborescence<W: Weight>(
    graph: &Digraph<W>,
    root: usize,
    terminals: &[usize],
    arcs: &[usize],
) -> Vec<usize> {
    let mut arcs = arcs.to_vec();
    arcs.sort_unstable();
    arcs.dedup();
    let n = graph.vertex_count;
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &id in &arcs {
        out[graph.arcs[id].tail].push(id);
    }
    let mut parent_arc = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &id in &out[v] {
            let w = graph.arcs[id].head;
            if !seen[w] {
                seen[w] = true;
                parent_arc[w] = id;
                queue.push_back(w);
            }
        }
    }
    let mut keep = vec![false; n];
    keep[root] = true;
    let mut tree = Vec::new();
    for &t in terminals {
        let mut v = t;
        while !keep[v] && parent_arc[v] != usize::MAX {
            keep[v] = true;
            tree.push(parent_arc[v]);
            v = graph.arcs[parent_arc[v]].tail;
        }
    }
    tree.sort_unstable();
    tree
}

/// Whether `arcs` form an arborescence rooted at `root` that contains every
/// terminal.
pub fn is_spanning_arborescence<W: Weight>(
    graph: &Digraph<W>,
    root: usize,
    terminals: &[usize],
    arcs: &[usize],
) -> bool {
    let n = graph.vertex_count;
    let mut parent = vec![usize::MAX; n];
    for &id in arcs {
        let Some(a) = graph.arcs.get(id) else {
            return false;
        };
        if a.head == root || parent[a.head] != usize::MAX {
            return false;
        }
        parent[a.head] = a.tail;
    }
    let mut in_tree = vec![false; n];
    in_tree[root] = true;
    for &id in arcs {
        in_tree[graph.arcs[id].head] = true;
    }
    // Every tree vertex must climb to the root within n steps.
    let climbs = |mut v: usize| {
        for _ in 0..=n {
            if v == root {
                return true;
            }
            v = parent[v];
            if v == usize::MAX {
                return false;
            }
        }
        false
    };
    (0..n).filter(|&v| in_tree[v]).all(climbs) && terminals.iter().all(|&t| in_tree[t])
}
