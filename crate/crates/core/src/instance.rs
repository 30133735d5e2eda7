//! Problem instances, candidate trees, and their evaluation.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::scalar::Weight;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Directedness {
    #[default]
    Undirected,
    Directed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge<W> {
    pub tail: VertexId,
    pub head: VertexId,
    pub cost: W,
    pub delay: W,
}

impl<W: Weight> Edge<W> {
    pub fn new(tail: VertexId, head: VertexId, cost: W, delay: W) -> Self {
        Self {
            tail,
            head,
            cost,
            delay,
        }
    }
}

/// One usable orientation of an instance edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeArc<W> {
    pub tail: VertexId,
    pub head: VertexId,
    pub cost: W,
    pub delay: W,
    pub edge: EdgeId,
}

/// A shallow-light Steiner tree instance.
///
/// Vertices are dense ids `0..vertex_count`. The terminal order is
/// significant: downstream subset masks index terminals by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance<W> {
    pub vertex_count: usize,
    pub edges: Vec<Edge<W>>,
    pub terminals: Vec<VertexId>,
    pub root: VertexId,
    pub delay_bound: W,
    pub directedness: Directedness,
}

impl<W: Weight> Instance<W> {
    pub fn is_directed(&self) -> bool {
        self.directedness == Directedness::Directed
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.terminals.contains(&v)
    }

    /// Expands edges into arcs. Undirected edges yield both orientations,
    /// tail-to-head first.
    pub fn arcs(&self) -> Vec<EdgeArc<W>> {
        let mut arcs = Vec::with_capacity(self.edges.len() * 2);
        for (id, e) in self.edges.iter().enumerate() {
            arcs.push(EdgeArc {
                tail: e.tail,
                head: e.head,
                cost: e.cost,
                delay: e.delay,
                edge: id,
            });
            if !self.is_directed() {
                arcs.push(EdgeArc {
                    tail: e.head,
                    head: e.tail,
                    cost: e.cost,
                    delay: e.delay,
                    edge: id,
                });
            }
        }
        arcs
    }

    /// The cheapest edge usable as `parent -> child` (then lowest delay, then
    /// lowest id), which is the one normalization would keep.
    pub fn find_edge(&self, parent: VertexId, child: VertexId) -> Option<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                (e.tail == parent && e.head == child)
                    || (!self.is_directed() && e.tail == child && e.head == parent)
            })
            .min_by_key(|(id, e)| (e.cost, e.delay, *id))
            .map(|(id, _)| id)
    }

    /// Shortest root-to-vertex delay ignoring cost, `None` if unreachable.
    pub fn shortest_delays(&self) -> Vec<Option<u128>> {
        let mut out_arcs: Vec<Vec<(VertexId, u128)>> = vec![Vec::new(); self.vertex_count];
        for a in self.arcs() {
            if a.tail < self.vertex_count && a.head < self.vertex_count {
                out_arcs[a.tail].push((a.head, a.delay.as_u128()));
            }
        }
        let mut dist: Vec<Option<u128>> = vec![None; self.vertex_count];
        if self.root >= self.vertex_count {
            return dist;
        }
        dist[self.root] = Some(0);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u128, self.root)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v] != Some(d) {
                continue;
            }
            for &(w, delay) in &out_arcs[v] {
                let nd = d.saturating_add(delay);
                if dist[w].is_none_or(|cur| nd < cur) {
                    dist[w] = Some(nd);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance has no vertices")]
    EmptyGraph,
    #[error("root {root} is out of range or not listed as a terminal")]
    InvalidRoot { root: VertexId },
    #[error("vertex {vertex} out of range (vertex count {vertex_count})")]
    InvalidVertex {
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("edge {edge} is a self-loop on vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} has zero cost or zero delay")]
    NonPositiveWeight { edge: EdgeId },
    #[error("delay bound must be at least 1")]
    ZeroDelayBound,
    #[error("terminals unreachable from the root within the delay bound: {terminals:?}")]
    Infeasible { terminals: Vec<VertexId> },
}

/// Checks every instance invariant and returns the normalized copy.
///
/// Parallel edges collapse to the cheapest (then fastest) representative,
/// kept at the position of the first occurrence. Duplicate terminals are
/// dropped, keeping first occurrences. Finally every terminal must have a
/// root path of delay at most the bound.
pub fn validate_instance<W: Weight>(instance: &Instance<W>) -> Result<Instance<W>, InstanceError> {
    let n = instance.vertex_count;
    if n == 0 {
        return Err(InstanceError::EmptyGraph);
    }
    if instance.root >= n || !instance.terminals.contains(&instance.root) {
        return Err(InstanceError::InvalidRoot {
            root: instance.root,
        });
    }
    if let Some(&vertex) = instance.terminals.iter().find(|&&t| t >= n) {
        return Err(InstanceError::InvalidVertex {
            vertex,
            vertex_count: n,
        });
    }
    if instance.delay_bound.is_zero() {
        return Err(InstanceError::ZeroDelayBound);
    }
    for (id, e) in instance.edges.iter().enumerate() {
        for vertex in [e.tail, e.head] {
            if vertex >= n {
                return Err(InstanceError::InvalidVertex {
                    vertex,
                    vertex_count: n,
                });
            }
        }
        if e.tail == e.head {
            return Err(InstanceError::SelfLoop {
                edge: id,
                vertex: e.tail,
            });
        }
        if e.cost.is_zero() || e.delay.is_zero() {
            return Err(InstanceError::NonPositiveWeight { edge: id });
        }
    }

    let directed = instance.is_directed();
    let mut slot: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    let mut edges: Vec<Edge<W>> = Vec::with_capacity(instance.edges.len());
    for e in &instance.edges {
        let key = if directed {
            (e.tail, e.head)
        } else {
            (e.tail.min(e.head), e.tail.max(e.head))
        };
        match slot.get(&key) {
            Some(&i) => {
                if (e.cost, e.delay) < (edges[i].cost, edges[i].delay) {
                    edges[i] = *e;
                }
            }
            None => {
                slot.insert(key, edges.len());
                edges.push(*e);
            }
        }
    }

    let mut seen = HashSet::new();
    let terminals: Vec<VertexId> = instance
        .terminals
        .iter()
        .copied()
        .filter(|t| seen.insert(*t))
        .collect();

    let normalized = Instance {
        vertex_count: n,
        edges,
        terminals,
        root: instance.root,
        delay_bound: instance.delay_bound,
        directedness: instance.directedness,
    };

    let dist = normalized.shortest_delays();
    let bound = normalized.delay_bound.as_u128();
    let unreachable: Vec<VertexId> = normalized
        .terminals
        .iter()
        .copied()
        .filter(|&t| dist[t].is_none_or(|d| d > bound))
        .collect();
    if !unreachable.is_empty() {
        return Err(InstanceError::Infeasible {
            terminals: unreachable,
        });
    }
    Ok(normalized)
}

/// A rooted tree given by `(parent, child)` pairs of instance vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SteinerTree {
    pub root: VertexId,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl SteinerTree {
    pub fn new(root: VertexId, edges: Vec<(VertexId, VertexId)>) -> Self {
        Self { root, edges }
    }

    pub fn root_only(root: VertexId) -> Self {
        Self {
            root,
            edges: Vec::new(),
        }
    }

    /// Edge pairs in sorted order, for order-insensitive comparison.
    pub fn sorted_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        edges
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEvaluation<W> {
    pub total_cost: W,
    pub delay_to: BTreeMap<VertexId, W>,
    pub max_terminal_delay: W,
    pub max_vertex_delay: W,
    pub feasible: bool,
    /// Instance edge backing each tree edge, parallel to `SteinerTree::edges`.
    pub edge_ids: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeDefect {
    RootHasParent,
    MultipleParents(VertexId),
    /// Not reachable from the root inside the tree: a cycle or a detached piece.
    Unreachable(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree is rooted at {found}, instance root is {expected}")]
    RootMismatch { expected: VertexId, found: VertexId },
    #[error("tree edge ({tail}, {head}) is not an instance edge")]
    UnknownEdge { tail: VertexId, head: VertexId },
    #[error("not an arborescence: {0:?}")]
    NotATree(TreeDefect),
    #[error("terminal {0} is not spanned by the tree")]
    MissingTerminal(VertexId),
    #[error("cost or delay sum overflows the weight type")]
    Overflow,
}

/// Measures cost and root delays of `tree` and checks it against the bound.
pub fn evaluate_tree<W: Weight>(
    instance: &Instance<W>,
    tree: &SteinerTree,
) -> Result<TreeEvaluation<W>, TreeError> {
    if tree.root != instance.root {
        return Err(TreeError::RootMismatch {
            expected: instance.root,
            found: tree.root,
        });
    }
    let mut edge_ids = Vec::with_capacity(tree.edges.len());
    let mut parent_of: HashMap<VertexId, usize> = HashMap::new();
    for (i, &(p, c)) in tree.edges.iter().enumerate() {
        let id = instance
            .find_edge(p, c)
            .ok_or(TreeError::UnknownEdge { tail: p, head: c })?;
        edge_ids.push(id);
        if c == tree.root {
            return Err(TreeError::NotATree(TreeDefect::RootHasParent));
        }
        if parent_of.insert(c, i).is_some() {
            return Err(TreeError::NotATree(TreeDefect::MultipleParents(c)));
        }
    }

    let mut children: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (i, &(p, _)) in tree.edges.iter().enumerate() {
        children.entry(p).or_default().push(i);
    }
    let mut delay_to = BTreeMap::new();
    delay_to.insert(tree.root, W::zero());
    let mut queue = VecDeque::from([tree.root]);
    let mut total_cost = W::zero();
    while let Some(v) = queue.pop_front() {
        let base = delay_to[&v];
        for &i in children.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            let e = &instance.edges[edge_ids[i]];
            let child = tree.edges[i].1;
            let d = base.checked_add(&e.delay).ok_or(TreeError::Overflow)?;
            total_cost = total_cost.checked_add(&e.cost).ok_or(TreeError::Overflow)?;
            delay_to.insert(child, d);
            queue.push_back(child);
        }
    }
    if let Some(&(_, c)) = tree.edges.iter().find(|(_, c)| !delay_to.contains_key(c)) {
        return Err(TreeError::NotATree(TreeDefect::Unreachable(c)));
    }

    let mut max_terminal_delay = W::zero();
    for &t in &instance.terminals {
        let d = delay_to.get(&t).ok_or(TreeError::MissingTerminal(t))?;
        max_terminal_delay = max_terminal_delay.max(*d);
    }
    let max_vertex_delay = delay_to.values().copied().max().unwrap_or_else(W::zero);
    Ok(TreeEvaluation {
        total_cost,
        delay_to,
        max_terminal_delay,
        max_vertex_delay,
        feasible: max_terminal_delay <= instance.delay_bound,
        edge_ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: usize = 0;
    const A: usize = 1;
    const B: usize = 2;

    fn triangle(bound: u64) -> Instance<u64> {
        Instance {
            vertex_count: 3,
            edges: vec![
                Edge::new(R, A, 1, 1),
                Edge::new(A, B, 1, 1),
                Edge::new(R, B, 3, 1),
            ],
            terminals: vec![R, B],
            root: R,
            delay_bound: bound,
            directedness: Directedness::Undirected,
        }
    }

    #[test]
    fn root_only_tree() {
        let mut inst = triangle(2);
        inst.terminals = vec![R];
        let eval = evaluate_tree(&inst, &SteinerTree::root_only(R)).unwrap();
        assert_eq!(eval.total_cost, 0);
        assert_eq!(eval.max_terminal_delay, 0);
        assert!(eval.feasible);
        assert_eq!(eval.delay_to[&R], 0);
    }

    #[test]
    fn triangle_path_tree() {
        let tree = SteinerTree::new(R, vec![(R, A), (A, B)]);
        let eval = evaluate_tree(&triangle(2), &tree).unwrap();
        assert_eq!(eval.total_cost, 2);
        assert_eq!(eval.delay_to[&B], 2);
        assert!(eval.feasible);

        let eval = evaluate_tree(&triangle(1), &tree).unwrap();
        assert_eq!(eval.total_cost, 2);
        assert_eq!(eval.delay_to[&B], 2);
        assert!(!eval.feasible);
    }

    #[test]
    fn undirected_edges_work_in_either_orientation() {
        let mut inst = triangle(2);
        inst.edges[1] = Edge::new(B, A, 1, 1);
        let eval = evaluate_tree(&inst, &SteinerTree::new(R, vec![(R, A), (A, B)])).unwrap();
        assert_eq!(eval.total_cost, 2);
        inst.directedness = Directedness::Directed;
        assert_eq!(
            evaluate_tree(&inst, &SteinerTree::new(R, vec![(R, A), (A, B)])),
            Err(TreeError::UnknownEdge { tail: A, head: B })
        );
    }

    #[test]
    fn tree_defects() {
        let inst = triangle(2);
        let missing = SteinerTree::new(R, vec![(R, A)]);
        assert_eq!(
            evaluate_tree(&inst, &missing),
            Err(TreeError::MissingTerminal(B))
        );
        let two_parents = SteinerTree::new(R, vec![(R, A), (R, B), (A, B)]);
        assert_eq!(
            evaluate_tree(&inst, &two_parents),
            Err(TreeError::NotATree(TreeDefect::MultipleParents(B)))
        );
        let into_root = SteinerTree::new(R, vec![(A, R)]);
        assert_eq!(
            evaluate_tree(&inst, &into_root),
            Err(TreeError::NotATree(TreeDefect::RootHasParent))
        );
        let detached = SteinerTree::new(R, vec![(A, B)]);
        assert_eq!(
            evaluate_tree(&inst, &detached),
            Err(TreeError::NotATree(TreeDefect::Unreachable(B)))
        );
        let cycle = SteinerTree::new(R, vec![(A, B), (B, A)]);
        assert!(matches!(
            evaluate_tree(&inst, &cycle),
            Err(TreeError::NotATree(TreeDefect::Unreachable(_)))
        ));
        assert_eq!(
            evaluate_tree(&inst, &SteinerTree::root_only(A)),
            Err(TreeError::RootMismatch {
                expected: R,
                found: A
            })
        );
    }

    #[test]
    fn validate_accepts_triangle() {
        let inst = triangle(2);
        assert_eq!(validate_instance(&inst).unwrap(), inst);
        assert_eq!(inst.shortest_delays(), vec![Some(0), Some(1), Some(1)]);
    }

    #[test]
    fn validate_rejects_zero_bound() {
        assert_eq!(
            validate_instance(&triangle(0)),
            Err(InstanceError::ZeroDelayBound)
        );
    }

    #[test]
    fn validate_reports_unreachable_terminal() {
        let mut inst = triangle(2);
        inst.vertex_count = 4;
        inst.terminals.push(3);
        assert_eq!(
            validate_instance(&inst),
            Err(InstanceError::Infeasible { terminals: vec![3] })
        );
    }

    #[test]
    fn validate_rejects_bad_inputs() {
        let mut inst = triangle(2);
        inst.terminals = vec![B];
        assert_eq!(
            validate_instance(&inst),
            Err(InstanceError::InvalidRoot { root: R })
        );
        let mut inst = triangle(2);
        inst.edges[0].cost = 0;
        assert_eq!(
            validate_instance(&inst),
            Err(InstanceError::NonPositiveWeight { edge: 0 })
        );
        let mut inst = triangle(2);
        inst.edges.push(Edge::new(A, A, 1, 1));
        assert_eq!(
            validate_instance(&inst),
            Err(InstanceError::SelfLoop { edge: 3, vertex: A })
        );
    }

    #[test]
    fn parallel_edges_keep_cheapest_then_fastest() {
        let mut inst = triangle(5);
        inst.edges.push(Edge::new(B, A, 1, 3));
        inst.edges.push(Edge::new(A, B, 1, 1));
        inst.edges.push(Edge::new(B, R, 2, 4));
        let norm = validate_instance(&inst).unwrap();
        assert_eq!(
            norm.edges,
            vec![
                Edge::new(R, A, 1, 1),
                Edge::new(A, B, 1, 1),
                Edge::new(B, R, 2, 4),
            ]
        );
        assert_eq!(validate_instance(&norm).unwrap(), norm);

        inst.directedness = Directedness::Directed;
        let norm = validate_instance(&inst).unwrap();
        assert_eq!(norm.edges.len(), 5);
    }
}
