//! Seeded random instances.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use slst_core::{Directedness, Edge, Instance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub nodes: usize,
    pub edges: usize,
    /// Terminal count, root included.
    pub terminals: usize,
    pub max_cost: u64,
    pub max_delay: u64,
    pub bound: u64,
    pub seed: u64,
    pub ensure_feasible: bool,
    pub directed: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            nodes: 10,
            edges: 20,
            terminals: 4,
            max_cost: 9,
            max_delay: 9,
            bound: 10,
            seed: 0,
            ensure_feasible: false,
            directed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unsatisfiable parameters: {0}")]
    UnsatisfiableParams(String),
}

fn unsat(msg: impl Into<String>) -> GenError {
    GenError::UnsatisfiableParams(msg.into())
}

/// The pair table is quadratic in this.
pub const MAX_NODES: usize = 4096;

fn check(p: &GenParams) -> Result<(), GenError> {
    if p.nodes == 0 {
        return Err(unsat("--nodes must be at least 1"));
    }
    if p.nodes > MAX_NODES {
        return Err(unsat(format!("--nodes {} exceeds {MAX_NODES}", p.nodes)));
    }
    if p.terminals == 0 {
        return Err(unsat("--terminals must be at least 1 (the root)"));
    }
    if p.terminals > p.nodes {
        return Err(unsat(format!(
            "--terminals {} > --nodes {}",
            p.terminals, p.nodes
        )));
    }
    if p.max_cost == 0 || p.max_delay == 0 || p.bound == 0 {
        return Err(unsat(
            "--max-cost, --max-delay and --bound must be positive",
        ));
    }
    let pairs = p.nodes * (p.nodes - 1) / if p.directed { 1 } else { 2 };
    if p.edges > pairs {
        return Err(unsat(format!(
            "--edges {} exceeds the {pairs} available vertex pairs",
            p.edges
        )));
    }
    if p.ensure_feasible && p.edges + 1 < p.nodes {
        return Err(unsat(format!(
            "--ensure-feasible needs --edges >= {} to span {} nodes",
            p.nodes - 1,
            p.nodes
        )));
    }
    Ok(())
}

/// Deterministic in `params`. With `ensure_feasible` a spanning tree whose
/// root paths all stay within the bound is planted first; the remaining
/// edges are uniform over unused vertex pairs.
pub fn generate(params: &GenParams) -> Result<Instance, GenError> {
    check(params)?;
    let p = params;
    let n = p.nodes;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let root = rng.gen_range(0..n);
    let key = |u: usize, v: usize| if p.directed || u < v { (u, v) } else { (v, u) };

    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut edges: Vec<Edge> = Vec::with_capacity(p.edges);
    let push = |edges: &mut Vec<Edge>,
                used: &mut HashSet<_>,
                rng: &mut ChaCha8Rng,
                u: usize,
                v: usize,
                delay: u64| {
        used.insert(key(u, v));
        let cost = rng.gen_range(1..=p.max_cost);
        let (tail, head) = if !p.directed && rng.gen_bool(0.5) {
            (v, u)
        } else {
            (u, v)
        };
        edges.push(Edge::new(tail, head, cost, delay));
    };

    if p.ensure_feasible {
        let mut order: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        order.shuffle(&mut rng);
        let mut placed = vec![root];
        let mut depth = vec![0u64; n];
        for v in order {
            // The root always has slack since bound >= 1.
            let open: Vec<usize> = placed
                .iter()
                .copied()
                .filter(|&u| depth[u] < p.bound)
                .collect();
            let parent = open[rng.gen_range(0..open.len())];
            let delay = rng.gen_range(1..=p.max_delay.min(p.bound - depth[parent]));
            depth[v] = depth[parent] + delay;
            push(&mut edges, &mut used, &mut rng, parent, v, delay);
            placed.push(v);
        }
    }

    let mut free: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && (p.directed || u < v) && !used.contains(&(u, v)))
        .collect();
    free.shuffle(&mut rng);
    for (u, v) in free.into_iter().take(p.edges - edges.len()) {
        let delay = rng.gen_range(1..=p.max_delay);
        push(&mut edges, &mut used, &mut rng, u, v, delay);
    }
    edges.shuffle(&mut rng);

    let mut others: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    others.shuffle(&mut rng);
    let terminals = std::iter::once(root)
        .chain(others.into_iter().take(p.terminals - 1))
        .collect();

    Ok(Instance {
        vertex_count: n,
        edges,
        terminals,
        root,
        delay_bound: p.bound,
        directedness: if p.directed {
            Directedness::Directed
        } else {
            Directedness::Undirected
        },
    })
}
