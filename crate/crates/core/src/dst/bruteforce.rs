//! Exhaustive directed Steiner tree search over arc subsets, for
//! cross-checking [`solve_dst`](super::solve_dst) on small digraphs.

use thiserror::Error;

use super::Digraph;
use crate::scalar::Weight;

pub const MAX_ARCS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteforceError {
    #[error("{arcs} arcs exceed the exhaustive-search limit of {MAX_ARCS}")]
    TooLarge { arcs: usize },
    #[error("no arc subset reaches every terminal")]
    Infeasible,
}

/// Cheapest arc subset under which every terminal is reachable from `root`,
/// trimmed to an arborescence. Returns `(arc ids ascending, cost)`.
///
/// With non-negative costs the cheapest reaching subset contains an
/// arborescence of the same cost, so the two optima coincide.
pub fn dst_bruteforce<W: Weight>(
    graph: &Digraph<W>,
    root: usize,
    terminals: &[usize],
) -> Result<(Vec<usize>, u128), BruteforceError> {
    let m = graph.arcs.len();
    if m > MAX_ARCS {
        return Err(BruteforceError::TooLarge { arcs: m });
    }
    let n = graph.vertex_count;
    let mut best: Option<(u128, u32)> = None;
    for subset in 0u32..(1u32 << m) {
        let cost: u128 = (0..m)
            .filter(|i| subset >> i & 1 == 1)
            .map(|i| graph.arcs[i].cost.as_u128())
            .sum();
        if best.is_some_and(|(c, _)| cost >= c) {
            continue;
        }
        let reached = reachable(graph, root, subset);
        if terminals.iter().all(|&t| t < n && reached[t]) {
            best = Some((cost, subset));
        }
    }
    let (cost, subset) = best.ok_or(BruteforceError::Infeasible)?;

    // Walk parents from each terminal back to the root inside the subset.
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut frontier = vec![root];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in frontier {
            for i in (0..m).filter(|i| subset >> i & 1 == 1) {
                let a = graph.arcs[i];
                if a.tail == v && !seen[a.head] {
                    seen[a.head] = true;
                    parent[a.head] = Some(i);
                    next.push(a.head);
                }
            }
        }
        frontier = next;
    }
    let mut arcs = Vec::new();
    for &t in terminals {
        let mut v = t;
        while let Some(i) = parent[v] {
            if arcs.contains(&i) {
                break;
            }
            arcs.push(i);
            v = graph.arcs[i].tail;
        }
    }
    arcs.sort_unstable();
    Ok((arcs, cost))
}

fn reachable<W: Weight>(graph: &Digraph<W>, root: usize, subset: u32) -> Vec<bool> {
    let mut reached = vec![false; graph.vertex_count];
    reached[root] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for (i, a) in graph.arcs.iter().enumerate() {
            if subset >> i & 1 == 1 && reached[a.tail] && !reached[a.head] {
                reached[a.head] = true;
                changed = true;
            }
        }
    }
    reached
}
