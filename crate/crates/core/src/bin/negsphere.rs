use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use negsphere::report::{describe_result, narrate, verification_battery};
use negsphere::search::{conjecture_screen, realize};
use negsphere::{
    best_sphere, betti, canonical_decomposition, catalog, s_closed_form, s_construction, BlowupPlan, Error, ExactRatio,
    FiberChoice, FiberKind, FibrationSpec, SearchOptions,
};

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "negsphere",
    version,
    about = "Very negative spheres in elliptic surfaces E(n) and their blow-ups"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    /// Write the relevant plumbing tree as Graphviz DOT to this path.
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SearchFlags {
    /// Also allow Ẽ₇, III and I₁ fibers (ordered-product validation).
    #[arg(long)]
    extended_fibers: bool,

    /// Comma-separated fiber names to search over.
    #[arg(long, value_delimiter = ',')]
    allowed: Option<Vec<String>>,

    #[arg(long, default_value_t = 30)]
    max_n: u32,

    #[arg(long, default_value_t = 50)]
    max_k: u32,

    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Square of the canonical sphere in E(n), with the closed form.
    Formula { n: u32 },
    /// Build and smooth the tree for a fibration given as JSON.
    Build {
        spec_file: PathBuf,
        /// BlowupPlan JSON file; overrides the flags below.
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Per-fiber choices (attach, resolve, replace, skip), comma-separated.
        #[arg(long, value_delimiter = ',')]
        choices: Option<Vec<String>>,
        #[arg(long, default_value_t = 0)]
        edge_blowups: u32,
        #[arg(long, default_value_t = 0)]
        point_blowups: u32,
    },
    /// Most negative sphere found in E(n)#k(CP²-bar).
    Search {
        n: u32,
        k: u32,
        #[command(flatten)]
        flags: SearchFlags,
    },
    /// Run the fixed battery of reference values.
    #[command(name = "verify-paper", alias = "verify")]
    VerifyPaper,
    /// Screen [S]² ≥ −5·b₂ over a grid of (n, k).
    Conjecture {
        #[arg(long, default_value = "2..12")]
        n_range: String,
        #[arg(long, default_value = "0..10")]
        k_range: String,
        #[command(flatten)]
        flags: SearchFlags,
    },
    /// The singular fiber table.
    Catalog,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Verification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ReplayMismatch { .. } => CliError::Verification(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_range(s: &str) -> CliResult<(u32, u32)> {
    let bad = || CliError::Input(format!("invalid range {s:?}; use A..B (inclusive) or a single number"));
    let s = s.trim();
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn search_options(flags: &SearchFlags) -> CliResult<SearchOptions> {
    let mut o = if flags.extended_fibers {
        SearchOptions::extended()
    } else {
        SearchOptions::default()
    };
    if let Some(names) = &flags.allowed {
        o.allowed = names.iter().map(|s| s.parse::<FiberKind>()).collect::<Result<_, _>>()?;
    }
    o.max_n = flags.max_n;
    o.max_k = flags.max_k;
    o.threads = flags.threads;
    if o.threads == Some(0) {
        return Err(CliError::Input("--threads must be positive".into()));
    }
    Ok(o)
}

fn write_dot(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Formula { n } => {
            let s = s_construction(n)?;
            let closed = s_closed_form(n);
            let closed_ratio = ExactRatio::from(closed);
            if cli.json {
                print_json(&json!({
                    "n": n,
                    "s_construction": s,
                    "printed_formula": closed_ratio,
                    "agrees": closed == num_rational::Ratio::from_integer(s),
                }));
            } else {
                println!("s({n}) = {s}");
                if closed != num_rational::Ratio::from_integer(s) {
                    println!(
                        "printed formula −44.2·n + 0.8·(5−r) gives {closed}; the construction gives {s} (n ≡ 0 mod 5)"
                    );
                }
            }
            if let Some(path) = &cli.dot {
                let spec = canonical_decomposition(n)?;
                let g = realize(&spec, &BlowupPlan::natural(&spec))?;
                write_dot(path, &g.to_dot(&format!("E({n})")))?;
            }
        }
        Command::Build {
            spec_file,
            plan,
            choices,
            edge_blowups,
            point_blowups,
        } => {
            let text = fs::read_to_string(&spec_file)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", spec_file.display())))?;
            let spec: FibrationSpec =
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid spec file: {e}")))?;
            spec.validate()?;
            let plan = match (plan, choices) {
                (Some(p), _) => {
                    let t = fs::read_to_string(&p)
                        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?;
                    serde_json::from_str(&t).map_err(|e| CliError::Input(format!("invalid plan file: {e}")))?
                }
                (None, Some(cs)) => BlowupPlan {
                    choices: cs.iter().map(|c| parse_choice(c)).collect::<CliResult<_>>()?,
                    edge_blowups,
                    point_blowups,
                },
                (None, None) => BlowupPlan {
                    edge_blowups,
                    point_blowups,
                    ..BlowupPlan::natural(&spec)
                },
            };
            let k = plan.total_blowups(&spec)?;
            let graph = realize(&spec, &plan)?;
            let square = graph.checked_square()?;
            let b2 = betti(spec.n, k)?.b2;
            let check = conjecture_screen(square, b2);
            if cli.json {
                print_json(&json!({
                    "spec": spec,
                    "plan": plan,
                    "k": k,
                    "square": square,
                    "b2": b2,
                    "ratio": check.ratio,
                    "satisfies_c5": check.satisfies_c5,
                    "graph": graph,
                }));
            } else {
                print!("{}", narrate(&spec, &plan)?);
                println!("smoothed square in E({})#{k}: {square}", spec.n);
                println!("tree: {} vertices, {} edges", graph.vertex_count(), graph.edge_count());
                println!(
                    "b2 = {b2} (standard invariant), ratio = {} ≈ {:.4}",
                    check.ratio,
                    check.ratio.to_f64()
                );
            }
            if let Some(path) = &cli.dot {
                write_dot(path, &graph.to_dot(&format!("E({})#{k}", spec.n)))?;
            }
        }
        Command::Search { n, k, flags } => {
            let opts = search_options(&flags)?;
            let r = best_sphere(n, k, &opts)?;
            if cli.json {
                print_json(&r);
            } else {
                print!("{}", describe_result(&r)?);
            }
            if let Some(path) = &cli.dot {
                write_dot(path, &r.replay()?.to_dot(&format!("E({n})#{k}")))?;
            }
        }
        Command::VerifyPaper => {
            let items = verification_battery();
            let failed: Vec<_> = items.iter().filter(|i| !i.pass).collect();
            if cli.json {
                print_json(&json!({ "items": items, "passed": failed.is_empty() }));
            } else {
                for i in &items {
                    println!("{}", i.line());
                }
                println!("{} of {} checks passed", items.len() - failed.len(), items.len());
            }
            if let Some(f) = failed.first() {
                return Err(CliError::Verification(format!("failed: {}", f.name)));
            }
        }
        Command::Conjecture {
            n_range,
            k_range,
            flags,
        } => {
            let opts = search_options(&flags)?;
            let (n0, n1) = parse_range(&n_range)?;
            let (k0, k1) = parse_range(&k_range)?;
            let mut rows = Vec::new();
            let mut violations = 0;
            if !cli.json {
                println!(
                    "{:>4} {:>4} {:>8} {:>6} {:>14} {:>9}  C=-5",
                    "n", "k", "square", "b2", "ratio", "≈"
                );
            }
            for n in n0..=n1 {
                for k in k0..=k1 {
                    let r = best_sphere(n, k, &opts)?;
                    let c = conjecture_screen(r.best_square, r.b2);
                    if !c.satisfies_c5 {
                        violations += 1;
                    }
                    if cli.json {
                        rows.push(json!({
                            "n": n, "k": k, "best_square": r.best_square, "b2": r.b2,
                            "ratio": c.ratio, "satisfies_c5": c.satisfies_c5,
                        }));
                    } else {
                        println!(
                            "{n:>4} {k:>4} {:>8} {:>6} {:>14} {:>9.4}  {}",
                            r.best_square,
                            r.b2,
                            c.ratio.to_string(),
                            c.ratio.to_f64(),
                            if c.satisfies_c5 { "ok" } else { "VIOLATED" }
                        );
                    }
                }
            }
            if cli.json {
                print_json(&json!({ "rows": rows, "violations": violations }));
            }
            if violations > 0 {
                return Err(CliError::Verification(format!(
                    "{violations} configuration(s) below −5·b2"
                )));
            }
        }
        Command::Catalog => {
            let cat = catalog();
            if cli.json {
                print_json(&cat);
            } else {
                println!("{:<10} {:<12} {:>5}  tree", "fiber", "monodromy", "euler");
                for t in &cat {
                    let tree = match (&t.fragment, &t.resolution) {
                        (Some(f), _) => format!("{} spheres, {} edges", f.vertex_count(), f.edge_count()),
                        (None, Some(r)) => format!(
                            "after {} blow-up(s): {:?}",
                            r.blowups,
                            r.fragment.vertices.iter().map(|v| v.weight).collect::<Vec<_>>()
                        ),
                        (None, None) => "none (nodal)".into(),
                    };
                    println!(
                        "{:<10} {:<12} {:>5}  {tree}",
                        t.name.name(),
                        t.word.to_string(),
                        t.euler
                    );
                }
            }
            if let Some(path) = &cli.dot {
                let mut text = String::new();
                for t in &cat {
                    if let Some(f) = &t.fragment {
                        text.push_str(&f.to_dot(t.name.name()));
                    }
                    if let Some(r) = &t.resolution {
                        text.push_str(&r.fragment.to_dot(&format!("{}_resolved", t.name.name())));
                    }
                }
                write_dot(path, &text)?;
            }
        }
    }
    Ok(())
}

fn parse_choice(s: &str) -> CliResult<FiberChoice> {
    match s.trim().to_ascii_lowercase().as_str() {
        "attach" => Ok(FiberChoice::Attach),
        "resolve" => Ok(FiberChoice::Resolve),
        "replace" => Ok(FiberChoice::Replace),
        "skip" => Ok(FiberChoice::Skip),
        other => Err(CliError::Input(format!("unknown choice {other:?}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
