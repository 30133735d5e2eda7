//! Brute-force shallow-light Steiner trees for desk-sized instances.
//!
//! Enumerates every edge subset, keeps those forming a tree through the
//! root, orients it away from the root and checks delays directly. Nothing
//! here is shared with the layered solver path.

use thiserror::Error;

use crate::instance::{Instance, SteinerTree, VertexId};
use crate::scalar::Weight;

pub const MAX_VERTICES: usize = 10;
pub const MAX_EDGES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance with {vertices} vertices and {edges} edges exceeds the oracle caps")]
    TooLarge { vertices: usize, edges: usize },
    #[error("no tree meets the delay bound")]
    Infeasible,
    #[error("instance references a vertex outside 0..{0}")]
    InvalidInstance(usize),
    #[error("optimum cost does not fit the weight type")]
    Overflow,
}

/// A subset that forms a tree containing the root.
struct Candidate {
    edge_ids: Vec<usize>,
    tree: SteinerTree,
    cost: u128,
    max_terminal_delay: u128,
    max_vertex_delay: u128,
}

fn check_caps<W: Weight>(instance: &Instance<W>) -> Result<(), OracleError> {
    let n = instance.vertex_count;
    if n > MAX_VERTICES || instance.edges.len() > MAX_EDGES {
        return Err(OracleError::TooLarge {
            vertices: n,
            edges: instance.edges.len(),
        });
    }
    let out_of_range = instance.root >= n
        || instance.terminals.iter().any(|&t| t >= n)
        || instance.edges.iter().any(|e| e.tail >= n || e.head >= n);
    if out_of_range {
        return Err(OracleError::InvalidInstance(n));
    }
    Ok(())
}

/// Interprets `subset` as a tree hanging from the root, if it is one that
/// reaches every terminal.
fn candidate<W: Weight>(instance: &Instance<W>, subset: u32) -> Option<Candidate> {
    let n = instance.vertex_count;
    let edge_ids: Vec<usize> = (0..instance.edges.len())
        .filter(|i| subset >> i & 1 == 1)
        .collect();
    let mut delay: Vec<Option<u128>> = vec![None; n];
    delay[instance.root] = Some(0);
    let mut used = vec![false; edge_ids.len()];
    let mut tree_edges = Vec::with_capacity(edge_ids.len());
    let mut cost = 0u128;
    // Grow from the root; an edge touching two reached vertices closes a cycle.
    let mut progress = true;
    while progress {
        progress = false;
        for (slot, &id) in edge_ids.iter().enumerate() {
            if used[slot] {
                continue;
            }
            let e = &instance.edges[id];
            let (from, to) = match (delay[e.tail].is_some(), delay[e.head].is_some()) {
                (true, true) => return None,
                (true, false) => (e.tail, e.head),
                (false, true) if !instance.is_directed() => (e.head, e.tail),
                _ => continue,
            };
            used[slot] = true;
            progress = true;
            delay[to] = Some(delay[from]? + e.delay.as_u128());
            cost += e.cost.as_u128();
            tree_edges.push((from, to));
        }
    }
    if used.iter().any(|u| !u) {
        return None;
    }
    let mut max_terminal_delay = 0;
    for &t in &instance.terminals {
        max_terminal_delay = max_terminal_delay.max(delay[t]?);
    }
    let max_vertex_delay = delay.iter().flatten().copied().max().unwrap_or(0);
    Some(Candidate {
        edge_ids,
        tree: SteinerTree::new(instance.root, tree_edges),
        cost,
        max_terminal_delay,
        max_vertex_delay,
    })
}

/// Minimum-cost feasible tree by exhaustive search. Ties go to the
/// lexicographically smallest set of edge ids.
pub fn slst_bruteforce<W: Weight>(instance: &Instance<W>) -> Result<(SteinerTree, W), OracleError> {
    check_caps(instance)?;
    let bound = instance.delay_bound.as_u128();
    let mut best: Option<Candidate> = None;
    for subset in 0u32..(1u32 << instance.edges.len()) {
        let Some(c) = candidate(instance, subset) else {
            continue;
        };
        if c.max_terminal_delay > bound {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => (c.cost, &c.edge_ids) < (b.cost, &b.edge_ids),
        };
        if better {
            best = Some(c);
        }
    }
    let best = best.ok_or(OracleError::Infeasible)?;
    let cost = W::narrow(best.cost).ok_or(OracleError::Overflow)?;
    Ok((best.tree, cost))
}

/// Up to `limit` distinct trees in which every vertex, not only every
/// terminal, is within the delay bound of the root. Order follows the
/// numeric value of the edge subset.
pub fn enumerate_feasible_trees<W: Weight>(
    instance: &Instance<W>,
    limit: usize,
) -> Result<Vec<SteinerTree>, OracleError> {
    check_caps(instance)?;
    let bound = instance.delay_bound.as_u128();
    let mut seen: std::collections::HashSet<Vec<(VertexId, VertexId)>> = Default::default();
    let mut trees = Vec::new();
    for subset in 0u32..(1u32 << instance.edges.len()) {
        if trees.len() >= limit {
            break;
        }
        let Some(c) = candidate(instance, subset) else {
            continue;
        };
        if c.max_vertex_delay <= bound && seen.insert(c.tree.sorted_edges()) {
            trees.push(c.tree);
        }
    }
    Ok(trees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Directedness, Edge};

    fn triangle(bound: u64) -> Instance<u64> {
        Instance {
            vertex_count: 3,
            edges: vec![
                Edge::new(0, 1, 1, 1),
                Edge::new(1, 2, 1, 1),
                Edge::new(0, 2, 3, 1),
            ],
            terminals: vec![0, 2],
            root: 0,
            delay_bound: bound,
            directedness: Directedness::Undirected,
        }
    }

    #[test]
    fn triangle_optima() {
        let (tree, cost) = slst_bruteforce(&triangle(2)).unwrap();
        assert_eq!(cost, 2);
        assert_eq!(tree.sorted_edges(), vec![(0, 1), (1, 2)]);
        let (tree, cost) = slst_bruteforce(&triangle(1)).unwrap();
        assert_eq!(cost, 3);
        assert_eq!(tree.sorted_edges(), vec![(0, 2)]);
    }

    #[test]
    fn root_only() {
        let mut inst = triangle(2);
        inst.terminals = vec![0];
        let (tree, cost) = slst_bruteforce(&inst).unwrap();
        assert_eq!(cost, 0);
        assert!(tree.edges.is_empty());
    }

    #[test]
    fn directed_orientation_is_enforced() {
        let mut inst = triangle(5);
        inst.directedness = Directedness::Directed;
        inst.edges = vec![Edge::new(1, 0, 1, 1), Edge::new(0, 2, 4, 1)];
        let (tree, cost) = slst_bruteforce(&inst).unwrap();
        assert_eq!((tree.edges, cost), (vec![(0, 2)], 4));
        inst.edges.pop();
        assert_eq!(slst_bruteforce(&inst), Err(OracleError::Infeasible));
    }

    #[test]
    fn enumerates_both_triangle_routes() {
        let trees = enumerate_feasible_trees(&triangle(2), 10).unwrap();
        let sets: Vec<_> = trees.iter().map(SteinerTree::sorted_edges).collect();
        assert!(sets.contains(&vec![(0, 1), (1, 2)]));
        assert!(sets.contains(&vec![(0, 2)]));
        assert_eq!(enumerate_feasible_trees(&triangle(2), 1).unwrap().len(), 1);
    }

    #[test]
    fn tight_bound_leaves_nothing() {
        let mut inst = triangle(1);
        for e in &mut inst.edges {
            e.delay = 2;
        }
        assert!(enumerate_feasible_trees(&inst, 10).unwrap().is_empty());
        assert_eq!(slst_bruteforce(&inst), Err(OracleError::Infeasible));
    }

    #[test]
    fn caps() {
        let mut inst = triangle(2);
        inst.vertex_count = 11;
        assert!(matches!(
            slst_bruteforce(&inst),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
