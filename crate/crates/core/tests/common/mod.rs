#![allow(dead_code)]

use proptest::prelude::*;
use slst_core::dst::{Digraph, DstArc};
use slst_core::{Directedness, Edge, Instance};

/// Small instances within oracle reach: up to 7 vertices and 12 edges.
pub fn small_instance() -> impl Strategy<Value = Instance> {
    (3usize..=7, any::<bool>(), 1u64..=8).prop_flat_map(|(n, directed, bound)| {
        let edge = (0..n, 1..n, 1u64..=9, 1u64..=4)
            .prop_map(move |(u, off, c, d)| Edge::new(u, (u + off) % n, c, d));
        (
            proptest::collection::vec(edge, 1..=12),
            proptest::collection::btree_set(1..n, 1..=3.min(n - 1)),
            0..n,
        )
            .prop_map(move |(edges, others, root)| {
                // relabel so that `root` can be anywhere
                let relabel = |v: usize| (v + root) % n;
                let edges = edges
                    .into_iter()
                    .map(|e| Edge::new(relabel(e.tail), relabel(e.head), e.cost, e.delay))
                    .collect();
                let mut terminals = vec![relabel(0)];
                terminals.extend(others.into_iter().map(relabel));
                Instance {
                    vertex_count: n,
                    edges,
                    terminals,
                    root: relabel(0),
                    delay_bound: bound,
                    directedness: if directed {
                        Directedness::Directed
                    } else {
                        Directedness::Undirected
                    },
                }
            })
    })
}

/// Digraphs with at most 8 vertices, 14 arcs, 4 terminals, costs 1..9.
pub fn small_digraph() -> impl Strategy<Value = (Digraph<u64>, usize, Vec<usize>)> {
    (2usize..=8).prop_flat_map(|n| {
        let arc = (0..n, 1..n, 1u64..=9).prop_map(move |(u, off, cost)| DstArc {
            tail: u,
            head: (u + off) % n,
            cost,
        });
        (
            proptest::collection::vec(arc, 0..=14),
            0..n,
            proptest::collection::vec(0..n, 1..=4),
        )
            .prop_map(move |(arcs, root, terminals)| (Digraph::new(n, arcs), root, terminals))
    })
}
