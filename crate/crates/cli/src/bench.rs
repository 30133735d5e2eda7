//! Terminal-count scaling table for the exact solver.
//!
//! Every row solves the same graphs, keeping only the first `t` terminals,
//! so the subset dynamic program is the only part whose work changes. Its
//! `(mask, submask)` visits are counted and compared to `3^k`.

use std::fmt::Write as _;
use std::time::Duration;

use thiserror::Error;

use crate::gen::{generate, GenError, GenParams};
use slst_core::{solve_exact, SolveError, SolverConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchParams {
    /// Terminal counts (root included), half-open.
    pub t_start: usize,
    pub t_end: usize,
    pub trials: usize,
    pub seed: u64,
    pub nodes: usize,
    pub edges: usize,
    pub bound: u64,
    pub max_cost: u64,
    pub max_delay: u64,
    pub timings: bool,
}

impl Default for BenchParams {
    fn default() -> Self {
        Self {
            t_start: 2,
            t_end: 8,
            trials: 3,
            seed: 0,
            nodes: 30,
            edges: 60,
            bound: 20,
            max_cost: 9,
            max_delay: 9,
            timings: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid t-range '{0}'; expected a..b or a..=b")]
    BadRange(String),
    #[error("{0}")]
    Cap(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("trial {trial} with t = {t}: {source}")]
    Solve {
        t: usize,
        trial: usize,
        source: SolveError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub t: usize,
    /// Terminals the subset program sees: `t` minus the root.
    pub k: usize,
    pub subset_pairs: u64,
    pub analytic: u64,
    /// Every trial counted exactly `analytic` pairs.
    pub matches: bool,
    pub median_states: u64,
    pub median_time: Duration,
}

/// `a..b` (exclusive) or `a..=b`.
pub fn parse_t_range(s: &str) -> Result<(usize, usize), BenchError> {
    let bad = || BenchError::BadRange(s.to_string());
    let (a, b, inclusive) = if let Some((a, b)) = s.split_once("..=") {
        (a, b, true)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b, false)
    } else {
        return Err(bad());
    };
    let a: usize = a.parse().map_err(|_| bad())?;
    let b: usize = b.parse().map_err(|_| bad())?;
    Ok((a, if inclusive { b + 1 } else { b }))
}

fn median<T: Ord + Copy>(mut xs: Vec<T>) -> T {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

pub fn run(params: &BenchParams) -> Result<Vec<BenchRow>, BenchError> {
    let p = params;
    if p.t_start >= p.t_end {
        return Ok(Vec::new());
    }
    let config = SolverConfig::default();
    if p.t_start == 0 || p.t_end - 1 > p.nodes || p.t_end - 2 > config.terminal_cap {
        return Err(BenchError::Cap(format!(
            "t must lie in 1..={} for {} nodes",
            p.nodes.min(config.terminal_cap + 1),
            p.nodes
        )));
    }
    if p.trials == 0 {
        return Err(BenchError::Cap("--trials must be at least 1".into()));
    }
    let graphs = (0..p.trials)
        .map(|trial| {
            generate(&GenParams {
                nodes: p.nodes,
                edges: p.edges,
                terminals: p.nodes,
                max_cost: p.max_cost,
                max_delay: p.max_delay,
                bound: p.bound,
                seed: p.seed.wrapping_add(trial as u64),
                ensure_feasible: true,
                directed: false,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::new();
    for t in p.t_start..p.t_end {
        let k = t - 1;
        let analytic = 3u64.pow(k as u32);
        let (mut pairs, mut states, mut times) = (Vec::new(), Vec::new(), Vec::new());
        for (trial, g) in graphs.iter().enumerate() {
            let mut inst = g.clone();
            inst.terminals.truncate(t);
            let report = solve_exact(&inst, &config).map_err(|source| BenchError::Solve {
                t,
                trial,
                source,
            })?;
            pairs.push(report.stats.dst.subset_pairs);
            states.push(report.stats.dst.states);
            times.push(report.stats.elapsed);
        }
        rows.push(BenchRow {
            t,
            k,
            subset_pairs: pairs[0],
            analytic,
            matches: pairs.iter().all(|&c| c == analytic),
            median_states: median(states),
            median_time: median(times),
        });
    }
    Ok(rows)
}

pub fn render(rows: &[BenchRow], timings: bool) -> String {
    let mut s = String::from("t k subset_pairs analytic_3^k match median_states median_ms\n");
    for r in rows {
        let ms = if timings {
            format!("{:.3}", r.median_time.as_secs_f64() * 1e3)
        } else {
            "-".to_string()
        };
        writeln!(
            s,
            "{} {} {} {} {} {} {}",
            r.t,
            r.k,
            r.subset_pairs,
            r.analytic,
            if r.matches { "yes" } else { "no" },
            r.median_states,
            ms
        )
        .unwrap();
    }
    s
}
