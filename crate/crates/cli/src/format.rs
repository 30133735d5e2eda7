//! Text formats: `slst 1` instances, `slst-solution 1` solutions, and DOT.
//!
//! Both text formats are ASCII, LF-terminated, with fields separated by
//! exactly one space. `#` starts a comment line; blank lines are ignored.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use slst_core::{
    Directedness, Edge, Epsilon, Instance, Rational, SolveMode, SolveReport, SteinerTree,
};

pub const INSTANCE_HEADER: &str = "slst 1";
pub const SOLUTION_HEADER: &str = "slst-solution 1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 when the problem is with the file as a whole.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Significant lines as `(line number, fields)`.
fn lines(text: &str) -> Result<Vec<(usize, Vec<&str>)>, ParseError> {
    if !text.is_ascii() {
        let line = text
            .lines()
            .position(|l| !l.is_ascii())
            .map_or(0, |i| i + 1);
        return Err(err(line, "non-ASCII input"));
    }
    let mut out = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let no = i + 1;
        if raw.contains('\r') {
            return Err(err(no, "carriage return; line endings must be LF"));
        }
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split(' ').collect();
        if fields.iter().any(|f| f.is_empty()) || raw.contains('\t') {
            return Err(err(no, "fields must be separated by single spaces"));
        }
        out.push((no, fields));
    }
    Ok(out)
}

fn arity(no: usize, fields: &[&str], want: usize) -> Result<(), ParseError> {
    if fields.len() != want {
        return Err(err(
            no,
            format!(
                "'{}' takes {} value(s), found {}",
                fields[0],
                want - 1,
                fields.len() - 1
            ),
        ));
    }
    Ok(())
}

fn number<T: FromStr>(no: usize, field: &str, what: &str) -> Result<T, ParseError> {
    // `u64::from_str` accepts a leading '+'; the format does not.
    if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(no, format!("invalid {what} '{field}'")));
    }
    field
        .parse()
        .map_err(|_| err(no, format!("{what} '{field}' out of range")))
}

fn set_once<T>(slot: &mut Option<T>, value: T, no: usize, key: &str) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(err(no, format!("duplicate '{key}'")));
    }
    *slot = Some(value);
    Ok(())
}

/// Parses an instance. Checks syntax and id ranges only; weight and
/// feasibility checks belong to `validate_instance`. A root missing from
/// the terminal list is appended to it.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let lines = lines(text)?;
    let mut iter = lines.iter();
    match iter.next() {
        Some((_, f)) if f.join(" ") == INSTANCE_HEADER => {}
        Some((no, _)) => return Err(err(*no, format!("expected '{INSTANCE_HEADER}'"))),
        None => return Err(err(1, format!("expected '{INSTANCE_HEADER}'"))),
    }
    let mut n: Option<usize> = None;
    let mut root: Option<(usize, usize)> = None;
    let mut bound: Option<u64> = None;
    let mut directed: Option<()> = None;
    let mut terminals: Vec<(usize, usize)> = Vec::new();
    let mut edges: Vec<(usize, Edge)> = Vec::new();
    for (no, f) in iter {
        let no = *no;
        match f[0] {
            "n" => {
                arity(no, f, 2)?;
                set_once(&mut n, number(no, f[1], "vertex count")?, no, "n")?;
            }
            "root" => {
                arity(no, f, 2)?;
                set_once(&mut root, (no, number(no, f[1], "vertex id")?), no, "root")?;
            }
            "bound" => {
                arity(no, f, 2)?;
                set_once(&mut bound, number(no, f[1], "delay bound")?, no, "bound")?;
            }
            "directed" => {
                arity(no, f, 1)?;
                set_once(&mut directed, (), no, "directed")?;
            }
            "terminal" => {
                arity(no, f, 2)?;
                terminals.push((no, number(no, f[1], "vertex id")?));
            }
            "edge" => {
                arity(no, f, 5)?;
                let edge = Edge::new(
                    number(no, f[1], "vertex id")?,
                    number(no, f[2], "vertex id")?,
                    number(no, f[3], "cost")?,
                    number(no, f[4], "delay")?,
                );
                edges.push((no, edge));
            }
            other => return Err(err(no, format!("unknown key '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| err(0, "missing 'n'"))?;
    let (root_line, root) = root.ok_or_else(|| err(0, "missing 'root'"))?;
    let bound = bound.ok_or_else(|| err(0, "missing 'bound'"))?;
    let check = |no: usize, v: usize| {
        if v < n {
            Ok(v)
        } else {
            Err(err(no, format!("vertex {v} out of range 0..{n}")))
        }
    };
    check(root_line, root)?;
    let mut terminal_ids = Vec::with_capacity(terminals.len() + 1);
    for &(no, t) in &terminals {
        terminal_ids.push(check(no, t)?);
    }
    if !terminal_ids.contains(&root) {
        terminal_ids.push(root);
    }
    for (no, e) in &edges {
        check(*no, e.tail)?;
        check(*no, e.head)?;
    }
    Ok(Instance {
        vertex_count: n,
        edges: edges.into_iter().map(|(_, e)| e).collect(),
        terminals: terminal_ids,
        root,
        delay_bound: bound,
        directedness: if directed.is_some() {
            Directedness::Directed
        } else {
            Directedness::Undirected
        },
    })
}

pub fn render_instance(instance: &Instance) -> String {
    let mut s = String::new();
    writeln!(s, "{INSTANCE_HEADER}").unwrap();
    writeln!(s, "n {}", instance.vertex_count).unwrap();
    writeln!(s, "root {}", instance.root).unwrap();
    writeln!(s, "bound {}", instance.delay_bound).unwrap();
    if instance.is_directed() {
        writeln!(s, "directed").unwrap();
    }
    for t in &instance.terminals {
        writeln!(s, "terminal {t}").unwrap();
    }
    for e in &instance.edges {
        writeln!(s, "edge {} {} {} {}", e.tail, e.head, e.cost, e.delay).unwrap();
    }
    s
}

/// What `solve` writes and `verify` reads back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFile {
    pub mode: SolveMode,
    pub cost: u64,
    pub max_terminal_delay: u64,
    pub delay_certificate: Rational,
    pub tree: SteinerTree,
    /// Deterministic solver counters, in output order.
    pub stats: Vec<(String, u128)>,
}

impl SolutionFile {
    pub fn from_report(report: &SolveReport) -> Self {
        let s = &report.stats;
        let stats = [
            ("layer_bound", s.layer_bound as u128),
            ("layered_vertices", s.layered_vertices as u128),
            ("layered_arcs", s.layered_arcs as u128),
            ("pruned_vertices", s.pruned_vertices as u128),
            ("pruned_arcs", s.pruned_arcs as u128),
            ("layered_cost", s.layered_cost),
            ("dst_terminals", s.dst.terminals as u128),
            ("dst_states", s.dst.states as u128),
            ("dst_subset_pairs", s.dst.subset_pairs as u128),
            ("dst_merge_evaluations", s.dst.merge_evaluations as u128),
            ("dst_relaxations", s.dst.relaxations as u128),
        ];
        Self {
            mode: report.mode,
            cost: report.evaluation.total_cost,
            max_terminal_delay: report.evaluation.max_terminal_delay,
            delay_certificate: report.delay_certificate,
            tree: report.tree.clone(),
            stats: stats.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{SOLUTION_HEADER}").unwrap();
        match self.mode {
            SolveMode::Exact => writeln!(s, "mode exact").unwrap(),
            SolveMode::Approx(eps) => {
                writeln!(s, "mode approx").unwrap();
                writeln!(
                    s,
                    "epsilon {}",
                    render_ratio(*eps.numer() as u128, *eps.denom() as u128)
                )
                .unwrap();
            }
        }
        writeln!(s, "cost {}", self.cost).unwrap();
        writeln!(s, "max_terminal_delay {}", self.max_terminal_delay).unwrap();
        let c = self.delay_certificate;
        writeln!(
            s,
            "delay_certificate {}",
            render_ratio(*c.numer(), *c.denom())
        )
        .unwrap();
        writeln!(s, "root {}", self.tree.root).unwrap();
        for (u, v) in &self.tree.edges {
            writeln!(s, "edge {u} {v}").unwrap();
        }
        for (k, v) in &self.stats {
            writeln!(s, "stat {k} {v}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let lines = lines(text)?;
        let mut iter = lines.iter();
        match iter.next() {
            Some((_, f)) if f.join(" ") == SOLUTION_HEADER => {}
            Some((no, _)) => return Err(err(*no, format!("expected '{SOLUTION_HEADER}'"))),
            None => return Err(err(1, format!("expected '{SOLUTION_HEADER}'"))),
        }
        let mut mode: Option<(usize, bool)> = None;
        let mut epsilon: Option<Epsilon> = None;
        let mut cost = None;
        let mut max_delay = None;
        let mut certificate = None;
        let mut root = None;
        let mut edges = Vec::new();
        let mut stats = Vec::new();
        for (no, f) in iter {
            let no = *no;
            match f[0] {
                "mode" => {
                    arity(no, f, 2)?;
                    let approx = match f[1] {
                        "exact" => false,
                        "approx" => true,
                        other => return Err(err(no, format!("unknown mode '{other}'"))),
                    };
                    set_once(&mut mode, (no, approx), no, "mode")?;
                }
                "epsilon" => {
                    arity(no, f, 2)?;
                    let eps = parse_epsilon(f[1]).map_err(|m| err(no, m))?;
                    set_once(&mut epsilon, eps, no, "epsilon")?;
                }
                "cost" => {
                    arity(no, f, 2)?;
                    set_once(&mut cost, number(no, f[1], "cost")?, no, "cost")?;
                }
                "max_terminal_delay" => {
                    arity(no, f, 2)?;
                    set_once(
                        &mut max_delay,
                        number(no, f[1], "delay")?,
                        no,
                        "max_terminal_delay",
                    )?;
                }
                "delay_certificate" => {
                    arity(no, f, 2)?;
                    let c = parse_ratio(f[1]).map_err(|m| err(no, m))?;
                    set_once(&mut certificate, c, no, "delay_certificate")?;
                }
                "root" => {
                    arity(no, f, 2)?;
                    set_once(&mut root, number(no, f[1], "vertex id")?, no, "root")?;
                }
                "edge" => {
                    arity(no, f, 3)?;
                    edges.push((
                        number(no, f[1], "vertex id")?,
                        number(no, f[2], "vertex id")?,
                    ));
                }
                "stat" => {
                    arity(no, f, 3)?;
                    stats.push((f[1].to_string(), number(no, f[2], "counter")?));
                }
                other => return Err(err(no, format!("unknown key '{other}'"))),
            }
        }
        let (mode_line, approx) = mode.ok_or_else(|| err(0, "missing 'mode'"))?;
        let mode = match (approx, epsilon) {
            (false, None) => SolveMode::Exact,
            (true, Some(eps)) => SolveMode::Approx(eps),
            (false, Some(_)) => {
                return Err(err(mode_line, "'epsilon' given for an exact solution"))
            }
            (true, None) => return Err(err(mode_line, "approx mode without 'epsilon'")),
        };
        Ok(Self {
            mode,
            cost: cost.ok_or_else(|| err(0, "missing 'cost'"))?,
            max_terminal_delay: max_delay.ok_or_else(|| err(0, "missing 'max_terminal_delay'"))?,
            delay_certificate: certificate.ok_or_else(|| err(0, "missing 'delay_certificate'"))?,
            tree: SteinerTree::new(root.ok_or_else(|| err(0, "missing 'root'"))?, edges),
            stats,
        })
    }
}

fn render_ratio(numer: u128, denom: u128) -> String {
    if denom == 1 {
        numer.to_string()
    } else {
        format!("{numer}/{denom}")
    }
}

fn parse_ratio(s: &str) -> Result<Rational, String> {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    if !digits(p) || !digits(q) {
        return Err(format!("invalid fraction '{s}'"));
    }
    let p: u128 = p
        .parse()
        .map_err(|_| format!("fraction '{s}' out of range"))?;
    let q: u128 = q
        .parse()
        .map_err(|_| format!("fraction '{s}' out of range"))?;
    if q == 0 {
        return Err(format!("zero denominator in '{s}'"));
    }
    Ok(Rational::new(p, q))
}

/// Parses `p/q` (or a bare integer) into a positive exact fraction.
pub fn parse_epsilon(s: &str) -> Result<Epsilon, String> {
    let r = parse_ratio(s)?;
    let p = u64::try_from(*r.numer()).map_err(|_| format!("epsilon '{s}' out of range"))?;
    let q = u64::try_from(*r.denom()).map_err(|_| format!("epsilon '{s}' out of range"))?;
    if p == 0 {
        return Err("epsilon must be positive".into());
    }
    Ok(Epsilon::new(p, q))
}

/// The solved tree: root double-circled, terminals boxed, edges labelled
/// with cost and delay.
pub fn tree_dot(instance: &Instance, tree: &SteinerTree) -> String {
    let mut s = String::from("digraph slst {\n");
    let mut vertices: Vec<usize> = std::iter::once(tree.root)
        .chain(tree.edges.iter().flat_map(|&(u, v)| [u, v]))
        .chain(instance.terminals.iter().copied())
        .collect();
    vertices.sort_unstable();
    vertices.dedup();
    for v in vertices {
        let shape = if v == tree.root {
            "doublecircle"
        } else if instance.is_terminal(v) {
            "box"
        } else {
            "circle"
        };
        writeln!(s, "  {v} [shape={shape}];").unwrap();
    }
    for &(u, v) in &tree.edges {
        match instance.find_edge(u, v) {
            Some(id) => {
                let e = &instance.edges[id];
                writeln!(s, "  {u} -> {v} [label=\"c={} d={}\"];", e.cost, e.delay).unwrap();
            }
            None => writeln!(s, "  {u} -> {v};").unwrap(),
        }
    }
    s.push_str("}\n");
    s
}
