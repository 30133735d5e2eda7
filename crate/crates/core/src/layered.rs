//! The delay-layered auxiliary digraph.
//!
//! Every non-root vertex `v` is copied once per accumulated delay value
//! `v^1 .. v^B` (`B` the layer bound), so a root path in the layered graph
//! carries its delay in the layer index of its endpoint. Each non-root
//! terminal gets a sink reached from all of its copies by zero-cost
//! connectors. Any arborescence spanning root and sinks then respects the
//! delay bound by construction, and cost is the only remaining objective.
//!
//! Construction delays of zero (which the scaled approximation produces) are
//! supported: arcs of delay zero stay within a layer, and vertices reachable
//! from the root over zero-delay arcs get an extra layer-0 copy.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::dst::{Digraph, DstArc};
use crate::instance::{evaluate_tree, EdgeId, Instance, SteinerTree, TreeError, VertexId};
use crate::scalar::Weight;

pub type LayerVertexId = usize;
pub type LayerArcId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LayerVertex {
    Root,
    Copy { vertex: VertexId, layer: usize },
    Sink { terminal: VertexId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcOrigin {
    Edge(EdgeId),
    TerminalConnector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerArc<W> {
    pub tail: LayerVertexId,
    pub head: LayerVertexId,
    pub cost: W,
    pub origin: ArcOrigin,
}

/// A tree in the layered graph, as arc ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LayerTree {
    pub arcs: Vec<LayerArcId>,
}

/// An instance edge used in a fixed orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectedEdge {
    pub tail: VertexId,
    pub head: VertexId,
    pub edge: EdgeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayerError {
    #[error("layer bound must be at least 1")]
    BoundTooSmall,
    #[error("construction delay table has {found} entries, instance has {expected} edges")]
    DelayTableMismatch { expected: usize, found: usize },
    #[error("arc {0} does not belong to the layered graph")]
    ForeignArc(LayerArcId),
    #[error("vertex {vertex} sits at delay {delay}, beyond layer bound {bound}")]
    DelayExceeded {
        vertex: VertexId,
        delay: u128,
        bound: usize,
    },
    #[error("layered graph has no arc {tail:?} -> {head:?} (was it pruned?)")]
    MissingArc {
        tail: LayerVertex,
        head: LayerVertex,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Auxiliary graph over layer copies of the instance vertices.
#[derive(Debug, Clone)]
pub struct LayeredGraph<W> {
    vertices: Vec<LayerVertex>,
    arcs: Vec<LayerArc<W>>,
    layer_bound: usize,
    root: LayerVertexId,
    original_root: VertexId,
    terminal_sinks: Vec<(VertexId, LayerVertexId)>,
    /// Per instance edge, the layer offset used during construction.
    /// Values above the bound are stored as `bound + 1`.
    construction_delays: Vec<usize>,
    pruned: bool,
}

/// `1 + (n - 1) * bound + (t - 1)`: vertex count before pruning when no
/// layer-0 copies are needed. `None` on overflow.
pub fn expected_vertex_count(
    vertex_count: usize,
    terminal_count: usize,
    bound: usize,
) -> Option<usize> {
    vertex_count
        .checked_sub(1)?
        .checked_mul(bound)?
        .checked_add(terminal_count.saturating_sub(1))?
        .checked_add(1)
}

/// Builds the layered graph of `instance` using its own edge delays.
///
/// `instance` should be normalized (see
/// [`validate_instance`](crate::instance::validate_instance)); undirected
/// edges are expanded to two arcs here.
pub fn build_layered<W: Weight>(
    instance: &Instance<W>,
    bound: usize,
) -> Result<LayeredGraph<W>, LayerError> {
    if bound < 1 {
        return Err(LayerError::BoundTooSmall);
    }
    let delays: Vec<u128> = instance.edges.iter().map(|e| e.delay.as_u128()).collect();
    build_with_delays(instance, &delays, bound)
}

/// Builds the layered graph using `delays[e]` in place of each edge's delay.
///
/// Zero delays are allowed, and so is a zero bound provided zero-delay arcs
/// leave the root.
pub fn build_with_delays<W: Weight>(
    instance: &Instance<W>,
    delays: &[u128],
    bound: usize,
) -> Result<LayeredGraph<W>, LayerError> {
    if delays.len() != instance.edges.len() {
        return Err(LayerError::DelayTableMismatch {
            expected: instance.edges.len(),
            found: delays.len(),
        });
    }
    let n = instance.vertex_count;
    let root = instance.root;
    let offset = |d: u128| -> usize { usize::try_from(d).map_or(bound + 1, |d| d.min(bound + 1)) };
    let construction_delays: Vec<usize> = delays.iter().map(|&d| offset(d)).collect();
    let arcs_g: Vec<_> = instance
        .arcs()
        .into_iter()
        .filter(|a| a.head != root)
        .collect();

    // Vertices reachable from the root over zero-delay arcs need a layer-0 copy.
    let mut has_zero_layer = vec![false; n];
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for a in arcs_g.iter().filter(|a| a.tail == v) {
            if construction_delays[a.edge] == 0 && !has_zero_layer[a.head] {
                has_zero_layer[a.head] = true;
                queue.push_back(a.head);
            }
        }
    }

    let mut vertices = vec![LayerVertex::Root];
    // copy_base[v] is the id of v^1; v^i is copy_base[v] + i - 1.
    let mut copy_base = vec![usize::MAX; n];
    for v in (0..n).filter(|&v| v != root) {
        copy_base[v] = vertices.len();
        vertices.extend((1..=bound).map(|layer| LayerVertex::Copy { vertex: v, layer }));
    }
    let mut terminal_sinks = Vec::new();
    for &t in instance.terminals.iter().filter(|&&t| t != root) {
        if terminal_sinks.iter().any(|&(s, _)| s == t) {
            continue;
        }
        terminal_sinks.push((t, vertices.len()));
        vertices.push(LayerVertex::Sink { terminal: t });
    }
    let mut zero_copy = vec![usize::MAX; n];
    for v in (0..n).filter(|&v| has_zero_layer[v]) {
        zero_copy[v] = vertices.len();
        vertices.push(LayerVertex::Copy {
            vertex: v,
            layer: 0,
        });
    }
    let copy_id = |v: VertexId, layer: usize| -> LayerVertexId {
        if layer == 0 {
            zero_copy[v]
        } else {
            copy_base[v] + layer - 1
        }
    };

    let mut arcs = Vec::new();
    for a in &arcs_g {
        let d = construction_delays[a.edge];
        if d > bound {
            continue;
        }
        if a.tail == root {
            arcs.push(LayerArc {
                tail: 0,
                head: copy_id(a.head, d),
                cost: a.cost,
                origin: ArcOrigin::Edge(a.edge),
            });
            continue;
        }
        let first = if has_zero_layer[a.tail] { 0 } else { 1 };
        for layer in first..=(bound - d) {
            if layer == 0 && d == 0 && !has_zero_layer[a.head] {
                continue;
            }
            arcs.push(LayerArc {
                tail: copy_id(a.tail, layer),
                head: copy_id(a.head, layer + d),
                cost: a.cost,
                origin: ArcOrigin::Edge(a.edge),
            });
        }
    }
    for &(t, sink) in &terminal_sinks {
        let first = if has_zero_layer[t] { 0 } else { 1 };
        for layer in first..=bound {
            arcs.push(LayerArc {
                tail: copy_id(t, layer),
                head: sink,
                cost: W::zero(),
                origin: ArcOrigin::TerminalConnector,
            });
        }
    }

    Ok(LayeredGraph {
        vertices,
        arcs,
        layer_bound: bound,
        root: 0,
        original_root: root,
        terminal_sinks,
        construction_delays,
        pruned: false,
    })
}

impl<W: Weight> LayeredGraph<W> {
    pub fn vertices(&self) -> &[LayerVertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arcs(&self) -> &[LayerArc<W>] {
        &self.arcs
    }

    pub fn layer_bound(&self) -> usize {
        self.layer_bound
    }

    pub fn root(&self) -> LayerVertexId {
        self.root
    }

    pub fn original_root(&self) -> VertexId {
        self.original_root
    }

    /// Sinks of the non-root terminals, in terminal order.
    pub fn terminal_sinks(&self) -> &[(VertexId, LayerVertexId)] {
        &self.terminal_sinks
    }

    /// The layered terminal set: root plus every sink.
    pub fn layered_terminals(&self) -> Vec<LayerVertexId> {
        std::iter::once(self.root)
            .chain(self.terminal_sinks.iter().map(|&(_, s)| s))
            .collect()
    }

    pub fn construction_delay(&self, edge: EdgeId) -> usize {
        self.construction_delays[edge]
    }

    pub fn is_pruned(&self) -> bool {
        self.pruned
    }

    /// Instance vertex a layered vertex stands for.
    pub fn original_vertex(&self, v: LayerVertexId) -> VertexId {
        match self.vertices[v] {
            LayerVertex::Root => self.original_root,
            LayerVertex::Copy { vertex, .. } => vertex,
            LayerVertex::Sink { terminal } => terminal,
        }
    }

    pub fn find_arc(&self, tail: LayerVertex, head: LayerVertex) -> Option<LayerArcId> {
        self.arcs
            .iter()
            .position(|a| self.vertices[a.tail] == tail && self.vertices[a.head] == head)
    }

    pub fn to_digraph(&self) -> Digraph<W> {
        Digraph {
            vertex_count: self.vertices.len(),
            arcs: self
                .arcs
                .iter()
                .map(|a| DstArc {
                    tail: a.tail,
                    head: a.head,
                    cost: a.cost,
                })
                .collect(),
        }
    }

    /// Kahn order of the vertices, `None` if there is a cycle.
    pub fn topological_order(&self) -> Option<Vec<LayerVertexId>> {
        let mut indegree = vec![0usize; self.vertices.len()];
        let mut out: Vec<Vec<LayerVertexId>> = vec![Vec::new(); self.vertices.len()];
        for a in &self.arcs {
            indegree[a.head] += 1;
            out[a.tail].push(a.head);
        }
        let mut queue: VecDeque<_> = (0..self.vertices.len())
            .filter(|&v| indegree[v] == 0)
            .collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &out[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    /// Drops vertices that are unreachable from the root or cannot reach any
    /// sink, keeping root and sinks. Ids are compacted; order is preserved.
    pub fn pruned(&self) -> LayeredGraph<W> {
        let len = self.vertices.len();
        let mut out: Vec<Vec<LayerVertexId>> = vec![Vec::new(); len];
        let mut inc: Vec<Vec<LayerVertexId>> = vec![Vec::new(); len];
        for a in &self.arcs {
            out[a.tail].push(a.head);
            inc[a.head].push(a.tail);
        }
        let forward = reach(&out, [self.root]);
        let backward = reach(&inc, self.terminal_sinks.iter().map(|&(_, s)| s));
        let mut remap = vec![usize::MAX; len];
        let mut vertices = Vec::new();
        for v in 0..len {
            let keep = v == self.root
                || matches!(self.vertices[v], LayerVertex::Sink { .. })
                || (forward[v] && backward[v]);
            if keep {
                remap[v] = vertices.len();
                vertices.push(self.vertices[v]);
            }
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|a| remap[a.tail] != usize::MAX && remap[a.head] != usize::MAX)
            .filter(|a| forward[a.tail])
            .map(|a| LayerArc {
                tail: remap[a.tail],
                head: remap[a.head],
                ..*a
            })
            .collect();
        LayeredGraph {
            vertices,
            arcs,
            layer_bound: self.layer_bound,
            root: remap[self.root],
            original_root: self.original_root,
            terminal_sinks: self
                .terminal_sinks
                .iter()
                .map(|&(t, s)| (t, remap[s]))
                .collect(),
            construction_delays: self.construction_delays.clone(),
            pruned: true,
        }
    }

    pub fn tree_cost(&self, tree: &LayerTree) -> Result<u128, LayerError> {
        tree.arcs.iter().try_fold(0u128, |acc, &id| {
            let arc = self.arcs.get(id).ok_or(LayerError::ForeignArc(id))?;
            Ok(acc + arc.cost.as_u128())
        })
    }

    fn label(&self, v: LayerVertexId) -> String {
        match self.vertices[v] {
            LayerVertex::Root => format!("r{}", self.original_root),
            LayerVertex::Copy { vertex, layer } => format!("v{vertex}^{layer}"),
            LayerVertex::Sink { terminal } => format!("T{terminal}"),
        }
    }

    /// Graphviz rendering; arcs are labelled with their cost.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph layered {\n");
        for v in 0..self.vertices.len() {
            let shape = match self.vertices[v] {
                LayerVertex::Copy { .. } => "circle",
                _ => "doublecircle",
            };
            let _ = writeln!(out, "  n{v} [label=\"{}\", shape={shape}];", self.label(v));
        }
        for a in &self.arcs {
            let style = match a.origin {
                ArcOrigin::Edge(_) => "solid",
                ArcOrigin::TerminalConnector => "dashed",
            };
            let _ = writeln!(
                out,
                "  n{} -> n{} [label=\"{}\", style={style}];",
                a.tail, a.head, a.cost
            );
        }
        out.push_str("}\n");
        out
    }
}

fn reach(adjacency: &[Vec<usize>], sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adjacency.len()];
    let mut stack: Vec<usize> = sources.into_iter().collect();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Maps a layered tree back to instance edges. Connector arcs vanish and
/// repeated uses of one oriented edge collapse to one entry; first-use
/// order is kept.
pub fn project_tree<W: Weight>(
    layered: &LayeredGraph<W>,
    tree: &LayerTree,
) -> Result<Vec<ProjectedEdge>, LayerError> {
    let mut seen = HashSet::new();
    let mut projected = Vec::new();
    for &id in &tree.arcs {
        let arc = layered.arcs.get(id).ok_or(LayerError::ForeignArc(id))?;
        let ArcOrigin::Edge(edge) = arc.origin else {
            continue;
        };
        let p = ProjectedEdge {
            tail: layered.original_vertex(arc.tail),
            head: layered.original_vertex(arc.head),
            edge,
        };
        if seen.insert(p) {
            projected.push(p);
        }
    }
    Ok(projected)
}

/// Embeds a tree of the instance into the layered graph: a vertex at
/// construction delay `d` from the root is placed on copy `v^d`, and each
/// terminal is joined to its sink from that copy.
pub fn embed_tree<W: Weight>(
    instance: &Instance<W>,
    tree: &SteinerTree,
    layered: &LayeredGraph<W>,
) -> Result<LayerTree, LayerError> {
    let eval = evaluate_tree(instance, tree)?;
    let bound = layered.layer_bound;

    let mut children: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (i, &(p, _)) in tree.edges.iter().enumerate() {
        children.entry(p).or_default().push(i);
    }
    let mut depth: HashMap<VertexId, u128> = HashMap::from([(tree.root, 0)]);
    let mut order = Vec::with_capacity(tree.edges.len());
    let mut queue = VecDeque::from([tree.root]);
    while let Some(v) = queue.pop_front() {
        for &i in children.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            let child = tree.edges[i].1;
            let d = depth[&v] + layered.construction_delay(eval.edge_ids[i]) as u128;
            if d > bound as u128 {
                return Err(LayerError::DelayExceeded {
                    vertex: child,
                    delay: d,
                    bound,
                });
            }
            depth.insert(child, d);
            order.push(i);
            queue.push_back(child);
        }
    }

    let index: HashMap<(LayerVertex, LayerVertex, ArcOrigin), LayerArcId> = layered
        .arcs
        .iter()
        .enumerate()
        .map(|(id, a)| {
            (
                (layered.vertices[a.tail], layered.vertices[a.head], a.origin),
                id,
            )
        })
        .collect();
    let place = |v: VertexId| -> LayerVertex {
        if v == tree.root {
            LayerVertex::Root
        } else {
            LayerVertex::Copy {
                vertex: v,
                layer: depth[&v] as usize,
            }
        }
    };
    let lookup = |tail: LayerVertex, head: LayerVertex, origin| {
        index
            .get(&(tail, head, origin))
            .copied()
            .ok_or(LayerError::MissingArc { tail, head })
    };

    let mut arcs = Vec::with_capacity(order.len() + instance.terminals.len());
    for i in order {
        let (p, c) = tree.edges[i];
        arcs.push(lookup(
            place(p),
            place(c),
            ArcOrigin::Edge(eval.edge_ids[i]),
        )?);
    }
    for &(t, _) in &layered.terminal_sinks {
        arcs.push(lookup(
            place(t),
            LayerVertex::Sink { terminal: t },
            ArcOrigin::TerminalConnector,
        )?);
    }
    Ok(LayerTree { arcs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Directedness, Edge};

    const R: usize = 0;
    const A: usize = 1;
    const B: usize = 2;

    fn triangle() -> Instance<u64> {
        Instance {
            vertex_count: 3,
            edges: vec![
                Edge::new(R, A, 1, 1),
                Edge::new(A, B, 1, 1),
                Edge::new(R, B, 3, 1),
            ],
            terminals: vec![R, B],
            root: R,
            delay_bound: 2,
            directedness: Directedness::Undirected,
        }
    }

    fn copy(vertex: usize, layer: usize) -> LayerVertex {
        LayerVertex::Copy { vertex, layer }
    }

    fn arc_set(h: &LayeredGraph<u64>) -> Vec<(LayerVertex, LayerVertex, u64)> {
        let mut arcs: Vec<_> = h
            .arcs()
            .iter()
            .map(|a| (h.vertices()[a.tail], h.vertices()[a.head], a.cost))
            .collect();
        arcs.sort();
        arcs
    }

    #[test]
    fn triangle_expansion() {
        let h = build_layered(&triangle(), 2).unwrap();
        assert_eq!(h.vertex_count(), 6);
        assert_eq!(h.vertex_count(), expected_vertex_count(3, 2, 2).unwrap());
        let sink = LayerVertex::Sink { terminal: B };
        let mut expected = vec![
            (LayerVertex::Root, copy(A, 1), 1),
            (LayerVertex::Root, copy(B, 1), 3),
            (copy(A, 1), copy(B, 2), 1),
            (copy(B, 1), copy(A, 2), 1),
            (copy(B, 1), sink, 0),
            (copy(B, 2), sink, 0),
        ];
        expected.sort();
        assert_eq!(arc_set(&h), expected);
        assert!(h.topological_order().is_some());
        assert_eq!(h.layered_terminals().len(), 2);
    }

    #[test]
    fn edge_with_delay_equal_to_bound_has_no_copy_arcs() {
        let mut inst = triangle();
        inst.edges[1].delay = 2;
        let h = build_layered(&inst, 2).unwrap();
        assert!(h.arcs().iter().all(|a| a.origin != ArcOrigin::Edge(1)));
    }

    #[test]
    fn zero_bound_rejected() {
        assert_eq!(
            build_layered(&triangle(), 0).unwrap_err(),
            LayerError::BoundTooSmall
        );
    }

    // Five-vertex graph in the spirit of the classic illustration: root r
    // with terminals v1 and v4 reached over Steiner vertices.
    #[test]
    fn three_terminal_graph_has_three_layered_terminals() {
        let inst: Instance<u64> = Instance {
            vertex_count: 5,
            edges: vec![
                Edge::new(0, 1, 1, 1),
                Edge::new(0, 2, 1, 2),
                Edge::new(1, 3, 2, 1),
                Edge::new(2, 4, 1, 1),
                Edge::new(3, 4, 1, 1),
            ],
            terminals: vec![0, 1, 4],
            root: 0,
            delay_bound: 3,
            directedness: Directedness::Directed,
        };
        let h = build_layered(&inst, 3).unwrap();
        assert_eq!(h.layered_terminals().len(), 3);
        assert_eq!(h.vertex_count(), 1 + 4 * 3 + 2);
    }

    #[test]
    fn projection_maps_back_to_edges() {
        let inst = triangle();
        let h = build_layered(&inst, 2).unwrap();
        let sink = LayerVertex::Sink { terminal: B };
        let path = LayerTree {
            arcs: vec![
                h.find_arc(LayerVertex::Root, copy(A, 1)).unwrap(),
                h.find_arc(copy(A, 1), copy(B, 2)).unwrap(),
                h.find_arc(copy(B, 2), sink).unwrap(),
            ],
        };
        assert_eq!(
            project_tree(&h, &path).unwrap(),
            vec![
                ProjectedEdge {
                    tail: R,
                    head: A,
                    edge: 0
                },
                ProjectedEdge {
                    tail: A,
                    head: B,
                    edge: 1
                },
            ]
        );
        let direct = LayerTree {
            arcs: vec![
                h.find_arc(LayerVertex::Root, copy(B, 1)).unwrap(),
                h.find_arc(copy(B, 1), sink).unwrap(),
            ],
        };
        assert_eq!(
            project_tree(&h, &direct).unwrap(),
            vec![ProjectedEdge {
                tail: R,
                head: B,
                edge: 2
            }]
        );
        assert_eq!(
            project_tree(&h, &LayerTree { arcs: vec![99] }),
            Err(LayerError::ForeignArc(99))
        );
    }

    #[test]
    fn projection_dedups_layer_copies() {
        let inst: Instance<u64> = Instance {
            vertex_count: 3,
            edges: vec![Edge::new(0, 1, 1, 1), Edge::new(1, 2, 1, 1)],
            terminals: vec![0, 2],
            root: 0,
            delay_bound: 3,
            directedness: Directedness::Directed,
        };
        let h = build_layered(&inst, 3).unwrap();
        let arcs = vec![
            h.find_arc(copy(1, 1), copy(2, 2)).unwrap(),
            h.find_arc(copy(1, 2), copy(2, 3)).unwrap(),
        ];
        assert_eq!(
            project_tree(&h, &LayerTree { arcs }).unwrap(),
            vec![ProjectedEdge {
                tail: 1,
                head: 2,
                edge: 1
            }]
        );
    }

    #[test]
    fn embedding_follows_delays() {
        let inst = triangle();
        let h = build_layered(&inst, 2).unwrap();
        let tree = SteinerTree::new(R, vec![(R, A), (A, B)]);
        let embedded = embed_tree(&inst, &tree, &h).unwrap();
        let sink = LayerVertex::Sink { terminal: B };
        assert_eq!(
            embedded.arcs,
            vec![
                h.find_arc(LayerVertex::Root, copy(A, 1)).unwrap(),
                h.find_arc(copy(A, 1), copy(B, 2)).unwrap(),
                h.find_arc(copy(B, 2), sink).unwrap(),
            ]
        );
        assert_eq!(h.tree_cost(&embedded).unwrap(), 2);

        let direct = embed_tree(&inst, &SteinerTree::new(R, vec![(R, B)]), &h).unwrap();
        assert_eq!(direct.arcs.len(), 2);
        assert_eq!(h.tree_cost(&direct).unwrap(), 3);

        let mut root_only = triangle();
        root_only.terminals = vec![R];
        let h = build_layered(&root_only, 2).unwrap();
        let embedded = embed_tree(&root_only, &SteinerTree::root_only(R), &h).unwrap();
        assert!(embedded.arcs.is_empty());
    }

    #[test]
    fn embedding_rejects_slow_trees() {
        let inst = triangle();
        let h = build_layered(&inst, 1).unwrap();
        let tree = SteinerTree::new(R, vec![(R, A), (A, B)]);
        assert_eq!(
            embed_tree(&inst, &tree, &h),
            Err(LayerError::DelayExceeded {
                vertex: B,
                delay: 2,
                bound: 1
            })
        );
    }

    #[test]
    fn zero_delays_get_a_ground_layer() {
        let inst = triangle();
        // r-a free, a-b free, r-b costs one layer.
        let h = build_with_delays(&inst, &[0, 0, 1], 1).unwrap();
        assert!(h.vertices().contains(&copy(A, 0)));
        assert!(h.vertices().contains(&copy(B, 0)));
        assert!(h.find_arc(LayerVertex::Root, copy(A, 0)).is_some());
        assert!(h.find_arc(copy(A, 0), copy(B, 0)).is_some());
        assert!(h
            .find_arc(copy(B, 0), LayerVertex::Sink { terminal: B })
            .is_some());
        // same-layer arcs in both directions make a cycle
        assert!(h.topological_order().is_none());

        let tree = SteinerTree::new(R, vec![(R, A), (A, B)]);
        let embedded = embed_tree(&inst, &tree, &h).unwrap();
        assert_eq!(
            project_tree(&h, &embedded).unwrap(),
            vec![
                ProjectedEdge {
                    tail: R,
                    head: A,
                    edge: 0
                },
                ProjectedEdge {
                    tail: A,
                    head: B,
                    edge: 1
                },
            ]
        );
    }

    #[test]
    fn pruning_keeps_only_useful_copies() {
        let inst = triangle();
        let h = build_layered(&inst, 2).unwrap();
        let p = h.pruned();
        // a^2 cannot reach the sink of b
        assert!(!p.vertices().contains(&copy(A, 2)));
        assert!(p.vertices().contains(&copy(B, 2)));
        assert_eq!(p.layered_terminals().len(), 2);
        let tree = SteinerTree::new(R, vec![(R, A), (A, B)]);
        let embedded = embed_tree(&inst, &tree, &p).unwrap();
        assert_eq!(p.tree_cost(&embedded).unwrap(), 2);
    }

    #[test]
    fn dot_labels() {
        let h = build_layered(&triangle(), 2).unwrap();
        let dot = h.to_dot();
        assert!(dot.contains("label=\"v1^2\""));
        assert!(dot.contains("label=\"T2\""));
        assert!(dot.starts_with("digraph layered {"));
    }
}
