//! Command-line front end for the `sublevel` binary.
//!
//! Exit statuses: 0 success or pass, 1 a bound violation (or a failed
//! identity check), 2 usage error, 3 numerical failure.

pub mod config;
pub mod demo;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::numerics::{
    constrained_measure, default_measure_resolution, oscillatory_integral, verify_estimate, AxisBox, ConstraintSet,
    EstimateKind, Ladder, NumericsError, Verdict,
};
use crate::operators::{apply_recipe_with_limit, parse_recipe, recipe_tree_equivalence, type_of_recipe, FunctionTuple};
use crate::pfaffian::{
    count_nondegenerate, count_nondegenerate_at, format_of, khovanskii_bound, multiplicity_bound, polynomial_suite,
    ChainDecl, PfaffianError,
};
use crate::symbolic::{parse, Expr};
use crate::trees::{enumerate_canonical, parse_tree, stats, to_dot, DTree};
use config::{ConstraintText, ExperimentConfig, OperatorText, Outputs, SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::Operator(_)
            | NumericsError::Tree(_)
            | NumericsError::InvalidBox(_)
            | NumericsError::InvalidConstraint { .. }
            | NumericsError::DimensionMismatch { .. }
            | NumericsError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<PfaffianError> for CliError {
    fn from(e: PfaffianError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "sublevel", version, about = "Nested Jacobian operators, d-trees and sublevel-set estimates")]
pub struct Cli {
    /// Worker threads for numerical kernels (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// d-trees: statistics, enumeration, DOT export.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Operator recipes: type, application, comparison with the tree form.
    #[command(subcommand)]
    Op(OpCmd),
    /// Khovanskii bounds and nondegenerate root counts.
    #[command(subcommand)]
    Pfaff(PfaffCmd),
    /// Measure of {x in box : pi_j(x) in I_j}, printed as JSON.
    Measure(MeasureArgs),
    /// Oscillatory integral of exp(i lambda F) over a constraint set, printed as JSON.
    Osc(OscArgs),
    /// Run an estimate ladder; JSON summary on stdout, per-point CSV with --csv.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Demonstrations with known outcomes.
    #[command(subcommand)]
    Demo(DemoCmd),
}

#[derive(Subcommand, Debug)]
pub enum TreeCmd {
    /// Order #G, leaf counts G^(i), depth and vertex count.
    Stats {
        /// Tree text, e.g. "((3,2),(1,3))".
        tree: String,
        /// Dimension (default: the root's arity).
        #[arg(long)]
        d: Option<usize>,
        /// Number of functions (default: the largest leaf index).
        #[arg(long)]
        m: Option<usize>,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// List canonical trees of depth 1..=max-depth, one per line.
    Enum {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        max_depth: usize,
        /// Stop after this many trees.
        #[arg(long, default_value_t = 10_000)]
        max_count: usize,
    },
    /// Graphviz rendering of the shape graph.
    Dot {
        tree: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Output file (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OpCmd {
    /// Type (alpha, beta) of a recipe such as "det[1,2](det[1](id),det[2](id))".
    Type {
        recipe: String,
        #[arg(long)]
        d: usize,
    },
    /// Apply a recipe to F and print the simplified result.
    Apply {
        recipe: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        f: String,
        /// Abort when an intermediate expression exceeds this many nodes.
        #[arg(long, default_value_t = crate::operators::DEFAULT_NODE_LIMIT)]
        node_limit: usize,
    },
    /// Check LF = ±∂^G(x, F) for the recipe's tree G; exit 1 on mismatch.
    Equiv {
        recipe: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        f: String,
        /// Random sample points when the exact test is undecided.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum PfaffCmd {
    /// Khovanskii bound 2^(r(r-1)/2) b1...bd (min(d,r) a + sum b - d + 1)^r,
    /// or with --tree the multiplicity bound of a tree over Pfaffian functions.
    Bound {
        #[arg(long)]
        d: usize,
        /// Chain order.
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// Chain degree.
        #[arg(long, default_value_t = 1)]
        alpha: usize,
        /// Comma-separated degrees.
        #[arg(long, value_delimiter = ',')]
        beta: Vec<usize>,
        /// Tree whose multiplicity bound to compute; needs --f.
        #[arg(long, conflicts_with = "beta")]
        tree: Option<String>,
        /// Functions after x1..xd (repeatable).
        #[arg(long)]
        f: Vec<String>,
        /// Chain entries "exp:<expr>" or "trig:<expr>" (repeatable).
        #[arg(long)]
        chain: Vec<String>,
        /// Domain "lo:hi,lo:hi,..." (needed for trig chains).
        #[arg(long = "box", allow_hyphen_values = true)]
        domain: Option<String>,
    },
    /// Count nondegenerate solutions of f = target in a box, printed as JSON.
    Count {
        #[arg(long)]
        d: Option<usize>,
        /// Equations (repeat d times).
        #[arg(long)]
        f: Vec<String>,
        /// Comma-separated right-hand sides (default: zeros).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        target: Vec<f64>,
        /// Box "lo:hi,..." (default: unit cube).
        #[arg(long = "box", allow_hyphen_values = true)]
        domain: Option<String>,
        /// Grid cells per axis (default: 64 for d <= 2, 32 for d = 3, 16 above).
        #[arg(long)]
        resolution: Option<usize>,
        /// Run the shipped polynomial suite instead and compare with the bounds;
        /// exit 1 if a count exceeds its bound.
        #[arg(long, conflicts_with_all = ["f", "target"])]
        suite: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TupleArgs {
    /// Dimension.
    #[arg(long)]
    d: usize,
    /// Functions after x1..xd (repeatable); the last is F.
    #[arg(long, required = true)]
    f: Vec<String>,
    /// Domain "lo:hi,lo:hi,..." (default: unit cube).
    #[arg(long = "box", allow_hyphen_values = true)]
    domain: Option<String>,
    /// Constraint "j:lo:hi" on pi_j, where pi_1..pi_d = x1..xd (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    constraint: Vec<String>,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[command(flatten)]
    tuple: TupleArgs,
    /// Shortcut for the constraint |F| <= eps on the last function.
    #[arg(long)]
    eps: Option<f64>,
    /// Cells per axis for d <= 3, samples above (default: 10^6, 8192, 512 cells for d = 1, 2, 3; 10^6 samples).
    #[arg(long)]
    resolution: Option<usize>,
    /// Monte Carlo seed (d >= 4).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct OscArgs {
    #[command(flatten)]
    tuple: TupleArgs,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// Target absolute error.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// |{x in D : |F| <= eps}| against C eps^(G^(m)/#G) (inf |∂^G π|)^(-1/#G).
    Sublevel(VerifyArgs),
    /// As sublevel with fixed sets pi_j in E_j, each contributing |E_j|^(G^(j)/#G).
    Multilinear(VerifyArgs),
    /// Envelope of |∫ exp(i lambda F)| against C lambda^(-G^(m)/#G) (inf |∂^G π|)^(-1/#G).
    Oscillatory(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Experiment config (JSON, schema "sublevel-experiment/1"); excludes the problem flags.
    #[arg(long, conflicts_with_all = ["d", "f", "tree", "recipe", "domain", "constraint", "ladder"])]
    config: Option<PathBuf>,
    /// Write the resolved config (all defaults filled in) here.
    #[arg(long)]
    echo_config: Option<PathBuf>,
    #[arg(long)]
    d: Option<usize>,
    /// Functions after x1..xd (repeatable); the last is F.
    #[arg(long)]
    f: Vec<String>,
    /// d-tree, e.g. "((3,2),(1,3))".
    #[arg(long, conflicts_with = "recipe")]
    tree: Option<String>,
    /// Operator recipe, e.g. "det[1](det[2](id))".
    #[arg(long)]
    recipe: Option<String>,
    /// Domain "lo:hi,..." (default: unit cube).
    #[arg(long = "box", allow_hyphen_values = true)]
    domain: Option<String>,
    /// Fixed constraint "j:lo:hi" (multilinear, repeatable).
    #[arg(long, allow_hyphen_values = true)]
    constraint: Vec<String>,
    /// Ladder "start:ratio:count" (default: 2^-4:0.5:9 for eps, 16:2:11 for lambda).
    #[arg(long)]
    ladder: Option<String>,
    /// Grid cells per axis / Monte Carlo samples (default: 10^6, 8192, 512 for d = 1, 2, 3; 10^6 samples).
    #[arg(long)]
    measure_resolution: Option<usize>,
    /// Infimum grid cells per axis (default: 4096, 512, 64, 12 for d = 1, 2, 3, higher).
    #[arg(long)]
    inf_resolution: Option<usize>,
    /// Root seed; ladder point k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    /// Oscillatory quadrature tolerance (default: 1e-9).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Frequencies per envelope window [lambda, 2 lambda) (default: 32).
    #[arg(long)]
    envelope: Option<usize>,
    /// Per-point CSV output.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON summary output (default: stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum DemoCmd {
    /// F_N = e^x1 sin(N x2)/N on [0,1]^2: inf |det Hess F_N| stays 1 while |{|F_N| <= eps}| grows with N.
    HessianCounterexample {
        #[arg(long = "N", value_delimiter = ',', default_value = "1,10,100")]
        n: Vec<u32>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Grid cells per axis for the measure.
        #[arg(long, default_value_t = 2048)]
        resolution: usize,
        /// Grid cells per axis for the infimum.
        #[arg(long, default_value_t = 512)]
        inf_resolution: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Every recipe with alpha >= 2 annihilates (x1 + 2 x2)^k; exit 1 otherwise.
    PComposeEll {
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        k: Vec<u32>,
        #[arg(long, default_value_t = 2)]
        min_alpha: usize,
        /// Largest |beta|.
        #[arg(long, default_value_t = 4)]
        max_beta: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return EXIT_USAGE;
        }
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Numerical(m)) => {
            let _ = writeln!(err, "numerical failure: {m}");
            EXIT_NUMERICAL
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| usage(format!("stdout: {e}"))),
    }
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("value serializes") + "\n"
}

pub fn parse_box(text: &str) -> Result<AxisBox, CliError> {
    let bounds = text
        .split(',')
        .map(|part| {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| usage(format!("box side '{part}' is not lo:hi")))?;
            Ok((a.trim().parse::<f64>().map_err(usage)?, b.trim().parse::<f64>().map_err(usage)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    AxisBox::new(&bounds).map_err(usage)
}

fn domain_or_unit(text: Option<&str>, d: usize) -> Result<AxisBox, CliError> {
    let b = match text {
        Some(t) => parse_box(t)?,
        None => AxisBox::unit(d),
    };
    if b.dim() != d {
        return Err(usage(format!("box has dimension {}, expected {d}", b.dim())));
    }
    Ok(b)
}

pub fn parse_constraint(text: &str) -> Result<(usize, [f64; 2]), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("constraint '{text}' is not j:lo:hi")));
    }
    let j = parts[0].trim().parse::<usize>().map_err(usage)?;
    let lo = parts[1].trim().parse::<f64>().map_err(usage)?;
    let hi = parts[2].trim().parse::<f64>().map_err(usage)?;
    Ok((j, [lo, hi]))
}

pub fn parse_ladder(text: &str) -> Result<Ladder, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("ladder '{text}' is not start:ratio:count")));
    }
    Ok(Ladder {
        start: parts[0].trim().parse().map_err(usage)?,
        ratio: parts[1].trim().parse().map_err(usage)?,
        count: parts[2].trim().parse().map_err(usage)?,
    })
}

fn tuple_and_constraints(t: &TupleArgs) -> Result<(FunctionTuple, ConstraintSet), CliError> {
    let texts: Vec<&str> = t.f.iter().map(String::as_str).collect();
    let pi = FunctionTuple::euclidean_from_text(&texts, t.d).map_err(usage)?;
    let domain = domain_or_unit(t.domain.as_deref(), t.d)?;
    let cons = t.constraint.iter().map(|c| parse_constraint(c)).collect::<Result<Vec<_>, _>>()?;
    Ok((pi, ConstraintSet::new(domain, cons).map_err(usage)?))
}

fn tree_dims(g: &DTree, d: Option<usize>, m: Option<usize>) -> Result<(usize, usize), CliError> {
    let d = match d.or_else(|| g.arity()) {
        Some(d) => d,
        None => return Err(usage("a single leaf has no dimension; pass --d")),
    };
    let m = m.unwrap_or_else(|| g.max_index());
    g.validate(d, m).map_err(usage)?;
    Ok((d, m))
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Tree(t) => tree_cmd(t, out),
        Command::Op(o) => op_cmd(o, out),
        Command::Pfaff(p) => pfaff_cmd(p, out),
        Command::Measure(a) => {
            let (pi, mut c) = tuple_and_constraints(&a.tuple)?;
            if let Some(eps) = a.eps {
                c = ConstraintSet::new(c.domain.clone(), {
                    let mut v = c.constraints.clone();
                    v.push((pi.m(), [-eps, eps]));
                    v
                })
                .map_err(usage)?;
            }
            let res = a.resolution.unwrap_or_else(|| default_measure_resolution(pi.d));
            let m = constrained_measure(&pi, &c, res, a.seed)?;
            emit(out, None, &json_line(&m))?;
            Ok(EXIT_OK)
        }
        Command::Osc(a) => {
            let (pi, c) = tuple_and_constraints(&a.tuple)?;
            let r = oscillatory_integral(&pi, pi.m(), &c, a.lambda, a.tol)?;
            emit(out, None, &json_line(&r))?;
            Ok(EXIT_OK)
        }
        Command::Verify(v) => {
            let (kind, args) = match v {
                VerifyCmd::Sublevel(a) => (EstimateKind::Sublevel, a),
                VerifyCmd::Multilinear(a) => (EstimateKind::Multilinear, a),
                VerifyCmd::Oscillatory(a) => (EstimateKind::Oscillatory, a),
            };
            verify_cmd(kind, args, out, err)
        }
        Command::Demo(d) => demo_cmd(d, out),
    }
}

fn tree_cmd(cmd: TreeCmd, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        TreeCmd::Stats { tree, d, m, json } => {
            let g = parse_tree(&tree).map_err(usage)?;
            let (_, m) = tree_dims(&g, d, m)?;
            let s = stats(&g, m).map_err(usage)?;
            let text = if json {
                json_line(&s)
            } else {
                let lc: Vec<String> = s.leaf_counts.iter().map(|c| c.to_string()).collect();
                format!(
                    "order: {}\nleaf_counts: {}\ndepth: {}\nvertices: {}\nleaves: {}\n",
                    s.order,
                    lc.join(","),
                    s.depth,
                    s.vertex_count,
                    s.leaf_count
                )
            };
            emit(out, None, &text)?;
        }
        TreeCmd::Enum { d, m, max_depth, max_count } => {
            if d == 0 || m == 0 {
                return Err(usage("--d and --m must be positive"));
            }
            let e = enumerate_canonical(d, m, max_depth, max_count);
            let mut text = String::new();
            for g in &e.trees {
                text.push_str(&format!("{g}\n"));
            }
            emit(out, None, &text)?;
            if e.truncated {
                return Err(CliError::Numerical(format!("listing truncated at {max_count} trees")));
            }
        }
        TreeCmd::Dot { tree, d, m, output } => {
            let g = parse_tree(&tree).map_err(usage)?;
            tree_dims(&g, d, m)?;
            emit(out, output.as_deref(), &to_dot(&g))?;
        }
    }
    Ok(EXIT_OK)
}

fn op_cmd(cmd: OpCmd, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        OpCmd::Type { recipe, d } => {
            let r = parse_recipe(&recipe).map_err(usage)?;
            let t = type_of_recipe(&r, d).map_err(usage)?;
            let beta: Vec<String> = t.beta.iter().map(|b| b.to_string()).collect();
            emit(out, None, &format!("alpha: {}\nbeta: {}\n", t.alpha, beta.join(",")))?;
            Ok(EXIT_OK)
        }
        OpCmd::Apply { recipe, d, f, node_limit } => {
            let r = parse_recipe(&recipe).map_err(usage)?;
            let f = parse(&f, d).map_err(usage)?;
            let e = apply_recipe_with_limit(&r, &f, d, node_limit).map_err(|e| match e {
                crate::operators::OperatorError::TooLarge { .. } => CliError::Numerical(e.to_string()),
                e => usage(e),
            })?;
            emit(out, None, &format!("{e}\n"))?;
            Ok(EXIT_OK)
        }
        OpCmd::Equiv { recipe, d, f, trials, seed } => {
            let r = parse_recipe(&recipe).map_err(usage)?;
            let f = parse(&f, d).map_err(usage)?;
            let rep = recipe_tree_equivalence(&r, &f, d, trials, seed).map_err(usage)?;
            let v = serde_json::json!({
                "tree": rep.tree.to_string(),
                "verdict": demo::verdict_label(&rep.verdict),
                "sign": rep.sign,
                "pass": rep.pass(),
            });
            emit(out, None, &json_line(&v))?;
            Ok(if rep.pass() { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn pfaff_cmd(cmd: PfaffCmd, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        PfaffCmd::Bound { d, r, alpha, beta, tree, f, chain, domain } => {
            let b = match tree {
                None => {
                    if beta.len() != d {
                        return Err(usage(format!("--beta needs {d} degrees, got {}", beta.len())));
                    }
                    khovanskii_bound(d, r, alpha, &beta)?
                }
                Some(t) => {
                    let g = parse_tree(&t).map_err(usage)?;
                    let texts: Vec<&str> = f.iter().map(String::as_str).collect();
                    let pi = FunctionTuple::euclidean_from_text(&texts, d).map_err(usage)?;
                    let bx = domain.as_deref().map(|t| domain_or_unit(Some(t), d)).transpose()?;
                    let decl = ChainDecl::from_specs(d, &chain, bx)?;
                    let formats = pi
                        .exprs
                        .iter()
                        .map(|e| format_of(e, &decl))
                        .collect::<Result<Vec<_>, _>>()?;
                    multiplicity_bound(&g, &formats)?
                }
            };
            emit(out, None, &format!("{b}\n"))?;
            Ok(EXIT_OK)
        }
        PfaffCmd::Count { d, f, target, domain, resolution, suite } => {
            if suite {
                return suite_cmd(out);
            }
            let d = d.unwrap_or(f.len());
            if f.len() != d {
                return Err(usage(format!("need {d} equations, got {}", f.len())));
            }
            let eqs = f.iter().map(|t| parse(t, d)).collect::<Result<Vec<Expr>, _>>().map_err(usage)?;
            let targets = if target.is_empty() { vec![0.0; d] } else { target };
            let bx = domain_or_unit(domain.as_deref(), d)?;
            let c = match resolution {
                Some(n) => count_nondegenerate_at(&eqs, &targets, &bx, n)?,
                None => count_nondegenerate(&eqs, &targets, &bx)?,
            };
            emit(out, None, &json_line(&c))?;
            Ok(EXIT_OK)
        }
    }
}

fn suite_cmd(out: &mut dyn Write) -> Result<i32, CliError> {
    let mut rows = Vec::new();
    let mut code = EXIT_OK;
    for sys in polynomial_suite()? {
        let d = sys.equations.len();
        let bound = khovanskii_bound(d, 0, 1, &sys.degrees)?;
        for t in &sys.targets {
            let c = count_nondegenerate(&sys.equations, t, &sys.domain)?;
            let within = num_bigint::BigUint::from(c.count) <= bound;
            if !within {
                code = EXIT_VIOLATION;
            }
            rows.push(serde_json::json!({
                "system": sys.name,
                "target": t,
                "count": c.count,
                "certified": c.certified,
                "bound": bound.to_string(),
                "within_bound": within,
            }));
        }
    }
    emit(out, None, &json_line(&rows))?;
    Ok(code)
}

fn config_from_flags(a: &VerifyArgs) -> Result<ExperimentConfig, CliError> {
    let d = a.d.ok_or_else(|| usage("--d is required without --config"))?;
    if a.f.is_empty() {
        return Err(usage("--f is required without --config"));
    }
    let operator = match (&a.tree, &a.recipe) {
        (Some(t), None) => OperatorText::Tree(t.clone()),
        (None, Some(r)) => OperatorText::Recipe(r.clone()),
        _ => return Err(usage("give exactly one of --tree and --recipe")),
    };
    let domain = a
        .domain
        .as_deref()
        .map(|t| {
            let b = domain_or_unit(Some(t), d)?;
            Ok::<_, CliError>((0..d).map(|i| [b.lo()[i], b.hi()[i]]).collect())
        })
        .transpose()?;
    let constraints = a
        .constraint
        .iter()
        .map(|c| parse_constraint(c).map(|(function, interval)| ConstraintText { function, interval }))
        .collect::<Result<_, _>>()?;
    Ok(ExperimentConfig {
        schema: SCHEMA.to_string(),
        kind: None,
        dimension: d,
        functions: a.f.clone(),
        euclidean: true,
        operator,
        domain,
        constraints,
        ladder: a.ladder.as_deref().map(parse_ladder).transpose()?,
        options: Default::default(),
        outputs: Outputs::default(),
    })
}

fn verify_cmd(kind: EstimateKind, a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => config_from_flags(&a)?,
    };
    let o = &mut cfg.options;
    if a.measure_resolution.is_some() {
        o.measure_resolution = a.measure_resolution;
    }
    if a.inf_resolution.is_some() {
        o.inf_resolution = a.inf_resolution;
    }
    if let Some(s) = a.seed {
        o.seed = s;
    }
    if let Some(t) = a.tolerance {
        o.tolerance = t;
    }
    if let Some(w) = a.envelope {
        o.envelope = w;
    }
    if a.csv.is_some() {
        cfg.outputs.csv = a.csv.clone();
    }
    if a.json.is_some() {
        cfg.outputs.json = a.json.clone();
    }
    let cfg = cfg.resolve(kind)?;
    if let Some(p) = &a.echo_config {
        emit(out, Some(p), &cfg.to_json())?;
    }
    let report = verify_estimate(&cfg.problem()?)?;
    if let Some(p) = &cfg.outputs.csv {
        emit(out, Some(p), &report.to_csv())?;
    }
    emit(out, cfg.outputs.json.as_deref(), &report.to_json())?;
    let label = match report.verdict {
        Verdict::Pass => "pass",
        Verdict::Violation => "violation",
        Verdict::Vacuous => "vacuous (inf |∂^G π| = 0)",
    };
    let _ = writeln!(err, "verdict: {label}");
    Ok(match report.verdict {
        Verdict::Violation => EXIT_VIOLATION,
        _ => EXIT_OK,
    })
}

fn demo_cmd(cmd: DemoCmd, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        DemoCmd::HessianCounterexample { n, eps, resolution, inf_resolution, output } => {
            if n.contains(&0) {
                return Err(usage("N must be positive"));
            }
            let rows = demo::hessian_counterexample(&n, eps, resolution, inf_resolution)?;
            emit(out, output.as_deref(), &demo::counterexample_csv(&rows))?;
            Ok(EXIT_OK)
        }
        DemoCmd::PComposeEll { k, min_alpha, max_beta, trials, seed, output } => {
            let rows = demo::composite_vanishing(&k, min_alpha, max_beta, trials, seed).map_err(usage)?;
            emit(out, output.as_deref(), &demo::composite_csv(&rows))?;
            let all_zero = rows.iter().all(|r| r.verdict.is_zero());
            Ok(if all_zero { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}
