//! Subcommand bodies. Each returns a process exit code and writes to the
//! given streams, so tests can drive them without spawning the binary.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use slst_core::scalar::Rational;
use slst_core::solver::approx_certificate;
use slst_core::{layered_graph_for, solve, Instance, SolveError, SolveMode, SolverConfig};

use crate::bench::{self, BenchParams};
use crate::format::{parse_instance, tree_dot, ParseError, SolutionFile};
use crate::gen::{generate, GenParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Clone)]
pub struct SolveArgs {
    pub input: PathBuf,
    pub mode: SolveMode,
    /// Standard output when absent.
    pub out: Option<PathBuf>,
    pub dot: Option<PathBuf>,
    pub dot_layered: Option<PathBuf>,
    pub prune: bool,
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_file(path: &Path) -> Result<Instance, String> {
    let text = read(path)?;
    parse_instance(&text).map_err(|e: ParseError| format!("{}: {e}", path.display()))
}

pub enum SolveOutcome {
    Solved(SolutionFile),
    Infeasible(String),
}

/// Parse, solve and render without touching the filesystem.
pub fn solve_text(
    text: &str,
    mode: SolveMode,
    config: &SolverConfig,
) -> Result<SolveOutcome, String> {
    let instance = parse_instance(text).map_err(|e| e.to_string())?;
    match solve(&instance, mode, config) {
        Ok(report) => Ok(SolveOutcome::Solved(SolutionFile::from_report(&report))),
        Err(e @ SolveError::Infeasible { .. }) => Ok(SolveOutcome::Infeasible(e.to_string())),
        Err(e) => Err(e.to_string()),
    }
}

pub fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match run_solve(args, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Infeasible(msg)) => {
            let _ = writeln!(stderr, "infeasible: {msg}");
            EXIT_INFEASIBLE
        }
        Err(Failure::Error(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_ERROR
        }
    }
}

enum Failure {
    Infeasible(String),
    Error(String),
}

impl From<String> for Failure {
    fn from(msg: String) -> Self {
        Failure::Error(msg)
    }
}

fn run_solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let instance = parse_file(&args.input)?;
    let config = SolverConfig {
        prune_layered: args.prune,
        ..SolverConfig::default()
    };
    let report = match solve(&instance, args.mode, &config) {
        Ok(r) => r,
        Err(e @ SolveError::Infeasible { .. }) => return Err(Failure::Infeasible(e.to_string())),
        Err(e) => return Err(Failure::Error(e.to_string())),
    };
    let text = SolutionFile::from_report(&report).render();
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string())?,
    }
    if let Some(path) = &args.dot {
        write_file(path, &tree_dot(&instance, &report.tree))?;
    }
    if let Some(path) = &args.dot_layered {
        let h = layered_graph_for(&instance, args.mode, &config).map_err(|e| e.to_string())?;
        write_file(path, &h.to_dot())?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub failure: Option<String>,
}

impl Check {
    fn new(name: &'static str, failure: Option<String>) -> Self {
        Self { name, failure }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Recomputes everything the solution claims, straight from the instance.
pub fn verify(instance: &Instance, solution: &SolutionFile) -> Vec<Check> {
    let tree = &solution.tree;
    let n = instance.vertex_count;
    let mut checks = Vec::new();

    checks.push(Check::new(
        "root",
        (tree.root != instance.root).then(|| {
            format!(
                "solution root {} but instance root {}",
                tree.root, instance.root
            )
        }),
    ));

    // Cheapest matching instance edge per tree edge, as (cost, delay).
    let lookup = |u: usize, v: usize| {
        instance
            .edges
            .iter()
            .filter(|e| {
                (e.tail, e.head) == (u, v)
                    || (!instance.is_directed() && (e.head, e.tail) == (u, v))
            })
            .map(|e| (e.cost, e.delay))
            .min()
    };
    let weights: Vec<Option<(u64, u64)>> = tree.edges.iter().map(|&(u, v)| lookup(u, v)).collect();
    let unknown: Vec<String> = tree
        .edges
        .iter()
        .zip(&weights)
        .filter(|(_, w)| w.is_none())
        .map(|(&(u, v), _)| format!("{u} {v}"))
        .collect();
    checks.push(Check::new(
        "edges",
        (!unknown.is_empty()).then(|| format!("not in instance: edge {}", unknown.join(", edge "))),
    ));

    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut defects = Vec::new();
    for (i, &(u, v)) in tree.edges.iter().enumerate() {
        if u >= n || v >= n {
            defects.push(format!("edge {u} {v} leaves 0..{n}"));
        } else if v == tree.root {
            defects.push(format!("edge {u} {v} enters the root"));
        } else if parent.insert(v, i).is_some() {
            defects.push(format!("vertex {v} has two parents"));
        }
    }
    // Delays by walking from the root; anything left over hangs off a cycle.
    let mut delay: BTreeMap<usize, u128> = BTreeMap::new();
    delay.insert(tree.root, 0);
    let mut frontier = vec![tree.root];
    while let Some(u) = frontier.pop() {
        for (i, &(a, b)) in tree.edges.iter().enumerate() {
            if a == u && parent.get(&b) == Some(&i) && !delay.contains_key(&b) {
                let d = weights[i].map_or(0, |(_, d)| d as u128);
                delay.insert(b, delay[&u] + d);
                frontier.push(b);
            }
        }
    }
    let stranded: std::collections::BTreeSet<usize> = tree
        .edges
        .iter()
        .map(|&(_, v)| v)
        .filter(|v| *v < n && !delay.contains_key(v))
        .collect();
    for v in stranded {
        defects.push(format!("vertex {v} is not reachable from the root"));
    }
    let shape_ok = defects.is_empty();
    checks.push(Check::new(
        "arborescence",
        (!shape_ok).then(|| defects.join("; ")),
    ));

    let missing: Vec<String> = instance
        .terminals
        .iter()
        .filter(|t| !delay.contains_key(t))
        .map(|t| t.to_string())
        .collect();
    checks.push(Check::new(
        "coverage",
        (!missing.is_empty()).then(|| format!("terminals not reached: {}", missing.join(" "))),
    ));

    let sound = shape_ok && unknown.is_empty() && tree.root == instance.root;
    let cost: u128 = weights.iter().flatten().map(|&(c, _)| c as u128).sum();
    checks.push(Check::new(
        "cost",
        if !unknown.is_empty() {
            Some(format!(
                "claimed {}, not recomputable with unknown edges",
                solution.cost
            ))
        } else {
            (cost != solution.cost as u128)
                .then(|| format!("claimed {}, recomputed {cost}", solution.cost))
        },
    ));

    let max_delay = instance
        .terminals
        .iter()
        .filter_map(|t| delay.get(t))
        .copied()
        .max()
        .unwrap_or(0);
    checks.push(Check::new(
        "max_terminal_delay",
        if !sound || !missing.is_empty() {
            Some("not recomputable from a malformed tree".into())
        } else {
            (max_delay != solution.max_terminal_delay as u128).then(|| {
                format!(
                    "claimed {}, recomputed {max_delay}",
                    solution.max_terminal_delay
                )
            })
        },
    ));

    let bound = instance.delay_bound as u128;
    let (expected, strict) = match solution.mode {
        SolveMode::Exact => (Rational::from_integer(bound), false),
        SolveMode::Approx(eps) => (approx_certificate(bound, eps), true),
    };
    checks.push(Check::new(
        "certificate",
        (solution.delay_certificate != expected).then(|| {
            format!(
                "claimed {}, mode and bound imply {expected}",
                solution.delay_certificate
            )
        }),
    ));

    let worst = Rational::from_integer(max_delay);
    let within = if strict {
        worst < solution.delay_certificate
    } else {
        worst <= solution.delay_certificate
    };
    checks.push(Check::new(
        "delay_bound",
        if !sound || !missing.is_empty() {
            Some("not recomputable from a malformed tree".into())
        } else {
            (!within).then(|| {
                let op = if strict { "<" } else { "<=" };
                format!(
                    "max terminal delay {max_delay} is not {op} {}",
                    solution.delay_certificate
                )
            })
        },
    ));
    checks
}

pub fn cmd_verify(
    instance: &Path,
    solution: &Path,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let loaded = parse_file(instance).and_then(|inst| {
        let text = read(solution)?;
        let sol = SolutionFile::parse(&text).map_err(|e| format!("{}: {e}", solution.display()))?;
        Ok((inst, sol))
    });
    let (inst, sol) = match loaded {
        Ok(x) => x,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_ERROR;
        }
    };
    let checks = verify(&inst, &sol);
    for c in &checks {
        let _ = match &c.failure {
            None => writeln!(stdout, "ok {}", c.name),
            Some(why) => writeln!(stdout, "FAIL {}: {why}", c.name),
        };
    }
    if checks.iter().all(Check::passed) {
        EXIT_OK
    } else {
        EXIT_ERROR
    }
}

pub fn cmd_gen(params: &GenParams, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match generate(params) {
        Ok(inst) => match stdout.write_all(crate::format::render_instance(&inst).as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_ERROR
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn cmd_bench(params: &BenchParams, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match bench::run(params) {
        Ok(rows) => {
            let _ = stdout.write_all(bench::render(&rows, params.timings).as_bytes());
            if rows.iter().all(|r| r.matches) {
                EXIT_OK
            } else {
                let _ = writeln!(stderr, "subset-pair counts disagree with 3^k");
                EXIT_ERROR
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
