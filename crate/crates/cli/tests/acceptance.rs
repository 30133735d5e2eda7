//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Run with `cargo test -p slst-cli --test acceptance`.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slst_cli::bench::{self, BenchParams};
use slst_cli::commands::{solve_text, verify, SolveOutcome};
use slst_cli::format::{render_instance, SolutionFile};
use slst_cli::gen::{generate, GenParams};
use slst_core::dst::bruteforce::{dst_bruteforce, BruteforceError};
use slst_core::dst::{is_spanning_arborescence, solve_dst, Digraph, DstArc, DstConfig, DstError};
use slst_core::oracle::{enumerate_feasible_trees, slst_bruteforce, OracleError};
use slst_core::{
    build_layered, embed_tree, evaluate_tree, project_tree, prune_to_tree, solve_approx,
    solve_exact, validate_instance, Epsilon, Instance, LayerTree, Rational, SolveError, SolveMode,
    SolverConfig,
};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Pool instance with its ground truth.
struct Case {
    instance: Instance,
    optimum: Option<u64>,
}

fn random_small(rng: &mut ChaCha8Rng) -> GenParams {
    let nodes = rng.gen_range(4..=8);
    let directed = rng.gen_bool(0.3);
    let pairs = nodes * (nodes - 1) / if directed { 1 } else { 2 };
    GenParams {
        nodes,
        edges: rng.gen_range(nodes - 1..=pairs.min(14)),
        terminals: rng.gen_range(2..=4),
        max_cost: 9,
        max_delay: 9,
        bound: rng.gen_range(2..=8),
        seed: rng.gen(),
        ensure_feasible: rng.gen_bool(0.6),
        directed,
    }
}

fn pool() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5157);
    (0..300)
        .map(|_| {
            let instance =
                generate(&random_small(&mut rng)).expect("pool parameters are satisfiable");
            let optimum = match slst_bruteforce(&instance) {
                Ok((_, c)) => Some(c),
                Err(OracleError::Infeasible) => None,
                Err(e) => panic!("oracle failed: {e}"),
            };
            Case { instance, optimum }
        })
        .collect()
}

fn exactness(pool: &[Case]) -> Outcome {
    let config = SolverConfig::default();
    let mut feasible = 0;
    for (i, case) in pool.iter().enumerate() {
        match (solve_exact(&case.instance, &config), case.optimum) {
            (Ok(report), Some(opt)) => {
                feasible += 1;
                ensure(report.evaluation.total_cost == opt, || {
                    format!(
                        "instance {i}: solver cost {} oracle {opt}",
                        report.evaluation.total_cost
                    )
                })?;
                let checks = verify(&case.instance, &SolutionFile::from_report(&report));
                ensure(checks.iter().all(|c| c.passed()), || {
                    format!("instance {i}: {checks:?}")
                })?;
            }
            (Err(SolveError::Infeasible { .. }), None) => {}
            (got, opt) => return Err(format!("instance {i}: solver {got:?} oracle {opt:?}")),
        }
    }
    Ok(format!(
        "{} instances, {feasible} feasible, {} infeasible",
        pool.len(),
        pool.len() - feasible
    ))
}

fn bifactor(pool: &[Case]) -> Outcome {
    let config = SolverConfig::default();
    let epsilons = [
        Epsilon::new(1, 10),
        Epsilon::new(1, 2),
        Epsilon::new(1, 1),
        Epsilon::new(2, 1),
    ];
    let mut runs = 0;
    let mut strictly_shallower = 0;
    for (i, case) in pool.iter().enumerate() {
        let Some(opt) = case.optimum else { continue };
        for eps in epsilons {
            let report = solve_approx(&case.instance, eps, &config)
                .map_err(|e| format!("instance {i} eps {eps}: {e}"))?;
            let e = &report.evaluation;
            ensure(e.total_cost <= opt, || {
                format!(
                    "instance {i} eps {eps}: cost {} > optimum {opt}",
                    e.total_cost
                )
            })?;
            let limit = (Rational::from_integer(1)
                + Rational::new(*eps.numer() as u128, *eps.denom() as u128))
                * Rational::from_integer(case.instance.delay_bound as u128);
            ensure(
                Rational::from_integer(e.max_terminal_delay as u128) < limit,
                || {
                    format!(
                        "instance {i} eps {eps}: delay {} not below {limit}",
                        e.max_terminal_delay
                    )
                },
            )?;
            runs += 1;
            strictly_shallower += usize::from(e.total_cost < opt);
        }
    }
    Ok(format!(
        "{runs} runs, 0 violations, {strictly_shallower} cheaper than the optimum via delay slack"
    ))
}

fn round_trip(pool: &[Case]) -> Outcome {
    let mut chosen = Vec::new();
    for case in pool.iter().filter(|c| c.optimum.is_some()) {
        let norm = validate_instance(&case.instance).map_err(|e| e.to_string())?;
        let trees = enumerate_feasible_trees(&norm, 100).map_err(|e| e.to_string())?;
        if trees.len() >= 5 {
            chosen.push((norm, trees));
        }
        if chosen.len() == 20 {
            break;
        }
    }
    ensure(chosen.len() == 20, || {
        format!("only {} instances with enough trees", chosen.len())
    })?;

    // Round-robin so every instance contributes.
    let mut checked = 0;
    let mut depth = 0;
    while checked < 100 {
        let before = checked;
        for (norm, trees) in &chosen {
            if checked == 100 {
                break;
            }
            let Some(tree) = trees.get(depth) else {
                continue;
            };
            let h = build_layered(norm, norm.delay_bound as usize).map_err(|e| e.to_string())?;
            let embedded = embed_tree(norm, tree, &h).map_err(|e| e.to_string())?;
            let projected = project_tree(&h, &embedded).map_err(|e| e.to_string())?;
            let got: BTreeSet<_> = projected.iter().map(|p| (p.tail, p.head)).collect();
            let want: BTreeSet<_> = tree.edges.iter().copied().collect();
            ensure(got == want, || {
                format!("edge sets differ: {got:?} vs {want:?}")
            })?;
            let cost = evaluate_tree(norm, tree)
                .map_err(|e| e.to_string())?
                .total_cost as u128;
            let h_cost = h.tree_cost(&embedded).map_err(|e| e.to_string())?;
            let p_cost: u128 = projected
                .iter()
                .map(|p| norm.edges[p.edge].cost as u128)
                .sum();
            ensure(h_cost == cost && p_cost == cost, || {
                format!("costs {cost} / {h_cost} / {p_cost}")
            })?;
            checked += 1;
        }
        ensure(checked > before, || {
            format!("ran out of trees at {checked}")
        })?;
        depth += 1;
    }

    for (norm, _) in &chosen {
        let h = build_layered(norm, norm.delay_bound as usize).map_err(|e| e.to_string())?;
        let sol = solve_dst(
            &h.to_digraph(),
            h.root(),
            &h.layered_terminals(),
            DstConfig::default(),
        )
        .map_err(|e| e.to_string())?;
        let projected = project_tree(
            &h,
            &LayerTree {
                arcs: sol.arcs.clone(),
            },
        )
        .map_err(|e| e.to_string())?;
        let tree = prune_to_tree(norm, &projected).map_err(|e| e.to_string())?;
        let eval = evaluate_tree(norm, &tree).map_err(|e| e.to_string())?;
        ensure(eval.feasible, || {
            format!("pruned tree misses the bound: {tree:?}")
        })?;
        ensure(eval.total_cost <= sol.cost, || {
            format!("pruned cost {} > layered {}", eval.total_cost, sol.cost)
        })?;
    }
    Ok(format!(
        "{checked} trees over {} instances; {} layered solutions pruned",
        chosen.len(),
        chosen.len()
    ))
}

/// Closed-form arc count; every delay is at least 1.
fn formula_arcs(inst: &Instance) -> usize {
    let d_max = inst.delay_bound as usize;
    let terminals: BTreeSet<usize> = inst.terminals.iter().copied().collect();
    let mut count = (terminals.len() - 1) * d_max;
    for e in &inst.edges {
        let mut orientations = vec![(e.tail, e.head)];
        if !inst.is_directed() {
            orientations.push((e.head, e.tail));
        }
        for (u, v) in orientations {
            let d = e.delay as usize;
            if v == inst.root {
                continue;
            }
            count += if u == inst.root {
                usize::from(d <= d_max)
            } else {
                d_max.saturating_sub(d)
            };
        }
    }
    count
}

fn structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4);
    let mut total_vertices = 0;
    for i in 0..50 {
        let nodes = rng.gen_range(3..=15);
        let directed = rng.gen_bool(0.4);
        let pairs = nodes * (nodes - 1) / if directed { 1 } else { 2 };
        let p = GenParams {
            nodes,
            edges: rng.gen_range(nodes - 1..=pairs.min(30)),
            terminals: rng.gen_range(2..=nodes.min(6)),
            max_cost: 9,
            max_delay: 9,
            bound: rng.gen_range(1..=12),
            seed: rng.gen(),
            ensure_feasible: true,
            directed,
        };
        let inst = generate(&p).map_err(|e| e.to_string())?;
        let d_max = inst.delay_bound as usize;
        let t = inst.terminals.iter().collect::<BTreeSet<_>>().len();
        let h = build_layered(&inst, d_max).map_err(|e| e.to_string())?;
        let want_v = 1 + (inst.vertex_count - 1) * d_max + (t - 1);
        ensure(h.vertex_count() == want_v, || {
            format!(
                "instance {i}: {} vertices, formula {want_v}",
                h.vertex_count()
            )
        })?;
        let want_a = formula_arcs(&inst);
        ensure(h.arcs().len() == want_a, || {
            format!("instance {i}: {} arcs, formula {want_a}", h.arcs().len())
        })?;
        let order = h
            .topological_order()
            .ok_or_else(|| format!("instance {i}: cycle in H"))?;
        ensure(order.len() == h.vertex_count(), || {
            format!("instance {i}: short order")
        })?;
        total_vertices += want_v;
    }
    Ok(format!(
        "50 layered graphs, {total_vertices} vertices in total"
    ))
}

fn dst_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd57);
    let mut feasible = 0;
    for i in 0..500 {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(0..=14);
        let mut arcs = Vec::new();
        while arcs.len() < m {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v {
                arcs.push(DstArc {
                    tail: u,
                    head: v,
                    cost: rng.gen_range(1..=9u64),
                });
            }
        }
        let g = Digraph {
            vertex_count: n,
            arcs,
        };
        let root = rng.gen_range(0..n);
        let terminals: Vec<usize> = (0..rng.gen_range(1..=4))
            .map(|_| rng.gen_range(0..n))
            .collect();
        match (
            solve_dst(&g, root, &terminals, DstConfig::default()),
            dst_bruteforce(&g, root, &terminals),
        ) {
            (Ok(sol), Ok((_, cost))) => {
                feasible += 1;
                ensure(sol.cost as u128 == cost, || {
                    format!("digraph {i}: dp {} brute force {cost}", sol.cost)
                })?;
                ensure(
                    is_spanning_arborescence(&g, root, &terminals, &sol.arcs),
                    || format!("digraph {i}: output is not an arborescence"),
                )?;
            }
            (Err(DstError::Infeasible { .. }), Err(BruteforceError::Infeasible)) => {}
            (a, b) => return Err(format!("digraph {i}: {a:?} vs {b:?}")),
        }
    }
    Ok(format!("500 digraphs, {feasible} feasible"))
}

fn scaling() -> Outcome {
    let params = BenchParams {
        t_start: 3,
        t_end: 10,
        trials: 1,
        seed: 11,
        nodes: 30,
        edges: 60,
        bound: 20,
        timings: true,
        ..BenchParams::default()
    };
    let rows = bench::run(&params).map_err(|e| e.to_string())?;
    let ks: Vec<usize> = rows.iter().map(|r| r.k).collect();
    ensure(ks == (2..=8).collect::<Vec<_>>(), || {
        format!("rows cover k = {ks:?}")
    })?;
    for r in &rows {
        ensure(r.matches && r.subset_pairs == 3u64.pow(r.k as u32), || {
            format!(
                "k = {}: {} pairs, expected {}",
                r.k, r.subset_pairs, r.analytic
            )
        })?;
    }
    let times: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.1}", r.median_time.as_secs_f64() * 1e3))
        .collect();

    // Six terminals besides the root.
    let inst = generate(&GenParams {
        nodes: 30,
        edges: 60,
        terminals: 7,
        max_cost: 9,
        max_delay: 9,
        bound: 20,
        seed: 2024,
        ensure_feasible: true,
        directed: false,
    })
    .map_err(|e| e.to_string())?;
    let started = Instant::now();
    let report = solve_exact(&inst, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("n=30 solve took {elapsed:?}")
    })?;
    Ok(format!(
        "3^k pair counts exact for k=2..8 (ms: {}); n=30 m=60 t=6+root D=20 solved at cost {} in {:.2}s",
        times.join(" "),
        report.evaluation.total_cost,
        elapsed.as_secs_f64()
    ))
}

fn determinism() -> Outcome {
    let config = SolverConfig::default();
    let modes = [SolveMode::Exact, SolveMode::Approx(Epsilon::new(1, 3))];
    let mut compared = 0;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for seed in 0..10u64 {
        let inst = generate(&GenParams {
            nodes: 12,
            edges: 24,
            terminals: 5,
            bound: 12,
            seed,
            ensure_feasible: true,
            ..GenParams::default()
        })
        .map_err(|e| e.to_string())?;
        let text = render_instance(&inst);
        for mode in modes {
            let render = |o: SolveOutcome| match o {
                SolveOutcome::Solved(s) => s.render(),
                SolveOutcome::Infeasible(m) => m,
            };
            let a = render(solve_text(&text, mode, &config)?);
            let b = render(solve_text(&text, mode, &config)?);
            ensure(a == b, || format!("seed {seed}: in-process outputs differ"))?;
            compared += 1;
        }
        let path = dir.path().join(format!("g{seed}.slst"));
        std::fs::write(&path, &text).map_err(|e| e.to_string())?;
        for flags in [&["--exact"][..], &["--approx", "--epsilon", "1/3"][..]] {
            let run = || {
                Command::new(env!("CARGO_BIN_EXE_slst"))
                    .arg("solve")
                    .args(flags)
                    .arg(&path)
                    .output()
                    .map_err(|e| e.to_string())
            };
            let (a, b) = (run()?, run()?);
            ensure(
                a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty(),
                || format!("seed {seed}: binary outputs differ"),
            )?;
            compared += 1;
        }
    }
    Ok(format!("{compared} solution pairs byte-identical"))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let pool = pool();
    let feasible = pool.iter().filter(|c| c.optimum.is_some()).count();
    println!(
        "pool: {} instances ({feasible} feasible) built in {:.2}s",
        pool.len(),
        started.elapsed().as_secs_f64()
    );

    let criteria: [Criterion; 7] = [
        ("1 exactness vs oracle", Box::new(|| exactness(&pool))),
        ("2 bifactor approximation", Box::new(|| bifactor(&pool))),
        ("3 layered round trip", Box::new(|| round_trip(&pool))),
        ("4 layered structure", Box::new(structure)),
        (
            "5 directed Steiner oracle equivalence",
            Box::new(dst_equivalence),
        ),
        ("6 subset-pair scaling", Box::new(scaling)),
        ("7 determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({secs:.2}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] {why} ({secs:.2}s)");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
