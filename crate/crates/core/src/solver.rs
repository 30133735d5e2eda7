//! Exact and delay-scaled shallow-light Steiner tree solvers.
//!
//! Both run the same pipeline: build the layered graph for some delay table
//! and layer bound, solve a directed Steiner tree over root and sinks, map
//! the result back to instance edges and clean it into a tree.
//!
//! The exact solver uses the instance delays and the bound `D` directly.
//! The approximation first rescales every delay to
//! `floor(n * d / (eps * D))` and the bound to `floor(n / eps)`, which
//! removes the pseudo-polynomial dependence on `D`. Every tree that met `D`
//! still meets the scaled bound, so the cost never exceeds the optimum, and
//! any path of at most `n - 1` edges under the scaled bound has original
//! delay strictly below `(1 + eps) * D`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::dst::{solve_dst, DstConfig, DstError, DstStats};
use crate::instance::{
    evaluate_tree, validate_instance, Instance, InstanceError, SteinerTree, TreeError,
    TreeEvaluation, VertexId,
};
use crate::layered::{
    build_with_delays, expected_vertex_count, project_tree, LayerError, LayerTree, LayeredGraph,
    ProjectedEdge,
};
use crate::scalar::{Epsilon, Rational, Weight};

pub const DEFAULT_VERTEX_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub terminal_cap: usize,
    /// Largest layered graph (in vertices, before pruning) worth building.
    pub vertex_budget: usize,
    /// Drop layered vertices that are useless for any root-to-sink path.
    pub prune_layered: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            terminal_cap: crate::dst::DEFAULT_TERMINAL_CAP,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
            prune_layered: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Exact,
    Approx(Epsilon),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolverStats {
    pub layer_bound: usize,
    pub layered_vertices: usize,
    pub layered_arcs: usize,
    /// Equal to the unpruned sizes when pruning is off.
    pub pruned_vertices: usize,
    pub pruned_arcs: usize,
    pub dst: DstStats,
    /// Cost of the directed Steiner tree found in the layered graph.
    pub layered_cost: u128,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport<W> {
    pub tree: SteinerTree,
    pub evaluation: TreeEvaluation<W>,
    pub mode: SolveMode,
    /// Delay every root path of `tree` provably respects: `D` when exact,
    /// `(1 + eps) * D` (never reached) when approximate.
    pub delay_certificate: Rational,
    pub stats: SolverStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no tree meets the delay bound; unreachable terminals: {terminals:?}")]
    Infeasible { terminals: Vec<VertexId> },
    #[error("epsilon must be a positive fraction")]
    BadEpsilon,
    #[error("{what} of {value} exceeds the limit of {limit}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },
    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),
    #[error("projected edges leave terminals {terminals:?} disconnected from the root")]
    Disconnected { terminals: Vec<VertexId> },
    #[error("solver invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Instance(InstanceError),
    #[error(transparent)]
    Layer(#[from] LayerError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Dst(DstError),
}

impl From<InstanceError> for SolveError {
    fn from(e: InstanceError) -> Self {
        match e {
            InstanceError::Infeasible { terminals } => SolveError::Infeasible { terminals },
            other => SolveError::Instance(other),
        }
    }
}

impl From<DstError> for SolveError {
    fn from(e: DstError) -> Self {
        match e {
            DstError::Infeasible { .. } => SolveError::Infeasible {
                terminals: Vec::new(),
            },
            DstError::CapExceeded { terminals, cap } => SolveError::CapExceeded {
                what: "terminal count",
                value: terminals as u128,
                limit: cap as u128,
            },
            other => SolveError::Dst(other),
        }
    }
}

/// An instance with delays rescaled for the approximation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledInstance<W> {
    pub base: Instance<W>,
    pub epsilon: Epsilon,
    /// `floor(n * d(e) / (eps * D))` per edge, in edge order.
    pub scaled_delays: Vec<u128>,
    /// `floor(n / eps)`.
    pub scaled_bound: u128,
}

/// Rescales delays with exact integer arithmetic: for `eps = p/q`,
/// `floor(n * d * q / (p * D))` and `floor(n * q / p)`.
pub fn scale_instance<W: Weight>(
    instance: &Instance<W>,
    epsilon: Epsilon,
) -> Result<ScaledInstance<W>, SolveError> {
    if epsilon.numer().is_zero() || epsilon.denom().is_zero() {
        return Err(SolveError::BadEpsilon);
    }
    let (p, q) = (*epsilon.numer() as u128, *epsilon.denom() as u128);
    let n = instance.vertex_count as u128;
    let bound = instance.delay_bound.as_u128();
    let divisor = p
        .checked_mul(bound)
        .ok_or(SolveError::Overflow("scaling delays"))?;
    if divisor == 0 {
        return Err(SolveError::Instance(InstanceError::ZeroDelayBound));
    }
    let nq = n
        .checked_mul(q)
        .ok_or(SolveError::Overflow("scaling delays"))?;
    let scaled_delays = instance
        .edges
        .iter()
        .map(|e| {
            nq.checked_mul(e.delay.as_u128())
                .map(|x| x / divisor)
                .ok_or(SolveError::Overflow("scaling delays"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScaledInstance {
        base: instance.clone(),
        epsilon,
        scaled_delays,
        scaled_bound: nq / p,
    })
}

/// Optimum shallow-light Steiner tree meeting the delay bound exactly.
pub fn solve_exact<W: Weight>(
    instance: &Instance<W>,
    config: &SolverConfig,
) -> Result<SolveReport<W>, SolveError> {
    let started = Instant::now();
    let instance = validate_instance(instance)?;
    let bound = instance.delay_bound.as_u128();
    let delays: Vec<u128> = instance.edges.iter().map(|e| e.delay.as_u128()).collect();
    let (tree, mut stats) = solve_layered(&instance, &delays, bound, config)?;
    let evaluation = evaluate_tree(&instance, &tree)?;
    check_cost(&evaluation, &stats)?;
    if !evaluation.feasible {
        return Err(SolveError::Internal(format!(
            "exact tree has terminal delay {} above bound {}",
            evaluation.max_terminal_delay, instance.delay_bound
        )));
    }
    stats.elapsed = started.elapsed();
    Ok(SolveReport {
        tree,
        evaluation,
        mode: SolveMode::Exact,
        delay_certificate: Rational::from_integer(bound),
        stats,
    })
}

/// Tree of cost at most the optimum whose root delays stay strictly below
/// `(1 + eps) * D`, found in time polynomial in `n / eps` instead of `D`.
pub fn solve_approx<W: Weight>(
    instance: &Instance<W>,
    epsilon: Epsilon,
    config: &SolverConfig,
) -> Result<SolveReport<W>, SolveError> {
    let started = Instant::now();
    if epsilon.numer().is_zero() || epsilon.denom().is_zero() {
        return Err(SolveError::BadEpsilon);
    }
    let instance = validate_instance(instance)?;
    let scaled = scale_instance(&instance, epsilon)?;
    let (tree, mut stats) = solve_layered(
        &instance,
        &scaled.scaled_delays,
        scaled.scaled_bound,
        config,
    )?;
    let evaluation = evaluate_tree(&instance, &tree)?;
    check_cost(&evaluation, &stats)?;
    let delay_certificate = approx_certificate(instance.delay_bound.as_u128(), epsilon);
    if Rational::from_integer(evaluation.max_vertex_delay.as_u128()) >= delay_certificate {
        return Err(SolveError::Internal(format!(
            "approximate tree has delay {} not below {}",
            evaluation.max_vertex_delay, delay_certificate
        )));
    }
    stats.elapsed = started.elapsed();
    Ok(SolveReport {
        tree,
        evaluation,
        mode: SolveMode::Approx(epsilon),
        delay_certificate,
        stats,
    })
}

/// Dispatches on `mode`.
pub fn solve<W: Weight>(
    instance: &Instance<W>,
    mode: SolveMode,
    config: &SolverConfig,
) -> Result<SolveReport<W>, SolveError> {
    match mode {
        SolveMode::Exact => solve_exact(instance, config),
        SolveMode::Approx(eps) => solve_approx(instance, eps, config),
    }
}

fn check_cost<W: Weight>(
    evaluation: &TreeEvaluation<W>,
    stats: &SolverStats,
) -> Result<(), SolveError> {
    if evaluation.total_cost.as_u128() > stats.layered_cost {
        return Err(SolveError::Internal(format!(
            "pruned tree cost {} exceeds layered optimum {}",
            evaluation.total_cost, stats.layered_cost
        )));
    }
    Ok(())
}

/// `(1 + eps) * D`.
pub fn approx_certificate(bound: u128, epsilon: Epsilon) -> Rational {
    let eps = Rational::new(*epsilon.numer() as u128, *epsilon.denom() as u128);
    (Rational::one() + eps) * Rational::from_integer(bound)
}

/// Layered build, Steiner solve, projection, cleanup. Expects a normalized
/// instance. The returned tree costs at most `stats.layered_cost`; callers
/// check that after evaluation.
pub fn solve_layered<W: Weight>(
    instance: &Instance<W>,
    delays: &[u128],
    bound: u128,
    config: &SolverConfig,
) -> Result<(SteinerTree, SolverStats), SolveError> {
    let budget_error = |value: u128| SolveError::CapExceeded {
        what: "layered vertex count",
        value,
        limit: config.vertex_budget as u128,
    };
    let layer_bound = usize::try_from(bound).map_err(|_| budget_error(bound))?;
    let expected =
        expected_vertex_count(instance.vertex_count, instance.terminals.len(), layer_bound)
            .ok_or_else(|| budget_error(u128::MAX))?;
    // Layer-0 copies can add at most one vertex per instance vertex.
    if expected.saturating_add(instance.vertex_count) > config.vertex_budget {
        return Err(budget_error(expected as u128));
    }
    let full = build_with_delays(instance, delays, layer_bound)?;
    let mut stats = SolverStats {
        layer_bound,
        layered_vertices: full.vertex_count(),
        layered_arcs: full.arcs().len(),
        ..SolverStats::default()
    };
    let layered = if config.prune_layered {
        full.pruned()
    } else {
        full
    };
    stats.pruned_vertices = layered.vertex_count();
    stats.pruned_arcs = layered.arcs().len();

    let dst = solve_dst(
        &layered.to_digraph(),
        layered.root(),
        &layered.layered_terminals(),
        DstConfig {
            terminal_cap: config.terminal_cap,
        },
    )?;
    stats.dst = dst.stats;
    stats.layered_cost = dst.cost.as_u128();

    let projected = project_tree(&layered, &LayerTree { arcs: dst.arcs })?;
    let tree = prune_to_tree(instance, &projected)?;
    Ok((tree, stats))
}

/// Cleans a projected edge set into an arborescence covering the
/// terminals.
///
/// Inside the projected subgraph, a shortest-delay tree is grown from the
/// root with labels `(delay, cost)` compared lexicographically and equal
/// labels resolved towards the lower edge id. Only the root paths of
/// terminals are kept, so every leaf is a terminal, no delay grows, and the
/// cost never exceeds that of the projected set.
pub fn prune_to_tree<W: Weight>(
    instance: &Instance<W>,
    projected: &[ProjectedEdge],
) -> Result<SteinerTree, SolveError> {
    let n = instance.vertex_count;
    let mut out: Vec<Vec<&ProjectedEdge>> = vec![Vec::new(); n];
    for p in projected {
        if p.tail >= n || p.head >= n || p.edge >= instance.edges.len() {
            return Err(SolveError::Internal(format!(
                "projected edge {p:?} out of range"
            )));
        }
        out[p.tail].push(p);
    }
    let root = instance.root;
    let mut label: Vec<Option<(u128, u128)>> = vec![None; n];
    let mut parent: Vec<Option<&ProjectedEdge>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut settle_order = Vec::with_capacity(n);
    label[root] = Some((0, 0));
    let mut heap = BinaryHeap::from([Reverse(((0u128, 0u128), root))]);
    while let Some(Reverse((l, v))) = heap.pop() {
        if settled[v] || label[v] != Some(l) {
            continue;
        }
        settled[v] = true;
        settle_order.push(v);
        for &p in &out[v] {
            let w = p.head;
            if settled[w] || w == root {
                continue;
            }
            let e = &instance.edges[p.edge];
            let nl = (l.0 + e.delay.as_u128(), l.1 + e.cost.as_u128());
            let better = match label[w] {
                None => true,
                Some(cur) => nl < cur || (nl == cur && parent[w].is_some_and(|q| p.edge < q.edge)),
            };
            if better {
                label[w] = Some(nl);
                parent[w] = Some(p);
                heap.push(Reverse((nl, w)));
            }
        }
    }

    let missing: Vec<VertexId> = instance
        .terminals
        .iter()
        .copied()
        .filter(|&t| !settled[t])
        .collect();
    if !missing.is_empty() {
        return Err(SolveError::Disconnected { terminals: missing });
    }
    let mut keep = vec![false; n];
    keep[root] = true;
    for &t in &instance.terminals {
        let mut v = t;
        while !keep[v] {
            keep[v] = true;
            v = parent[v]
                .expect("settled non-root vertex has a parent")
                .tail;
        }
    }
    let edges = settle_order
        .into_iter()
        .filter(|&v| v != root && keep[v])
        .map(|v| (parent[v].expect("kept vertex has a parent").tail, v))
        .collect();
    Ok(SteinerTree::new(root, edges))
}

/// The layered graph `solve` would search in `mode`, exposed for
/// inspection and DOT export.
pub fn layered_graph_for<W: Weight>(
    instance: &Instance<W>,
    mode: SolveMode,
    config: &SolverConfig,
) -> Result<LayeredGraph<W>, SolveError> {
    let instance = validate_instance(instance)?;
    let (delays, bound) = match mode {
        SolveMode::Exact => (
            instance.edges.iter().map(|e| e.delay.as_u128()).collect(),
            instance.delay_bound.as_u128(),
        ),
        SolveMode::Approx(eps) => {
            let scaled = scale_instance(&instance, eps)?;
            (scaled.scaled_delays, scaled.scaled_bound)
        }
    };
    let too_big = |value: u128| SolveError::CapExceeded {
        what: "layered vertex count",
        value,
        limit: config.vertex_budget as u128,
    };
    let layer_bound = usize::try_from(bound).map_err(|_| too_big(bound))?;
    let expected =
        expected_vertex_count(instance.vertex_count, instance.terminals.len(), layer_bound)
            .ok_or_else(|| too_big(u128::MAX))?;
    if expected.saturating_add(instance.vertex_count) > config.vertex_budget {
        return Err(too_big(expected as u128));
    }
    let full = build_with_delays(&instance, &delays, layer_bound)?;
    Ok(if config.prune_layered {
        full.pruned()
    } else {
        full
    })
}
