//! Command-line entry point: JSON in, JSON out, stable exit codes.
//!
//! Exit codes: 0 = affirmative/success, 1 = negative verdict,
//! 2 = usage/input error, 3 = budget exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use rainbow_core::certify::{
    check_extremal_structure, is_member_a, is_member_b, CertificateReport,
};
use rainbow_core::extremal::{
    construct_star_family, construct_tree_family, decompose_params, star_bound, tree_bound,
    StarVariant, TreeKind,
};
use rainbow_core::oracle::{
    oracle_star_max, oracle_tree_threshold, saturation_check, OracleError, OracleOptions,
};
use rainbow_core::rainbow_star::{find_rainbow_star, max_rainbow_star_at};
use rainbow_core::rainbow_tree::{
    decompose, has_rainbow_tree_of_order, reach_sets, Strategy, TreeError, DEFAULT_NODE_BUDGET,
};
use rainbow_core::{GraphCollection, RainbowWitness, StarGraph};
use serde::Serialize;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rainbow",
    version,
    about = "Rainbow substructure analysis for collections of graphs on a shared vertex set"
)]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact extremal bounds.
    Bound {
        #[command(subcommand)]
        target: BoundTarget,
    },
    /// Emit an extremal construction in the JSON wire format.
    Construct {
        #[command(subcommand)]
        target: ConstructTarget,
    },
    /// Decide whether a collection is rainbow-free.
    Check {
        #[command(subcommand)]
        target: CheckTarget,
    },
    /// Phase decomposition of a collection of trees.
    Decompose {
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        /// Node budget for the exact strategy.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Input file in the wire format, or - for standard input.
        file: String,
    },
    /// Certify membership in the extremal classes.
    Certify {
        #[command(subcommand)]
        target: CertifyTarget,
    },
    /// Brute-force confirmation of the bounds at desk scale.
    Oracle {
        #[command(subcommand)]
        target: OracleTarget,
    },
    /// Verify that adding any star to an extremal family creates a rainbow star.
    Saturate {
        #[arg(long)]
        delta: usize,
        file: String,
    },
    /// Print the tool name and version.
    Version,
    /// Run the fast built-in invariant suite.
    Selftest,
}

#[derive(Subcommand)]
enum BoundTarget {
    /// Maximum size of a rainbow-star-free family of stars.
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
    },
    /// Maximum size of a tree collection without a rainbow spanning-order tree.
    Tree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand)]
enum ConstructTarget {
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Auto)]
        variant: VariantArg,
    },
    Tree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Required by --kind pruefer; no ambient randomness.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum CheckTarget {
    /// Is the collection rainbow-K_{1,delta}-free?
    RainbowStar {
        #[arg(long)]
        delta: usize,
        file: String,
    },
    /// Does the collection avoid every rainbow tree of the given order?
    RainbowTree {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        file: String,
    },
}

#[derive(Subcommand)]
enum CertifyTarget {
    /// Membership in the extremal star family class.
    A {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        file: String,
        /// Additionally require rainbow-freeness and the extremal size, and
        /// verify the center-count trichotomy.
        #[arg(long)]
        structure: bool,
    },
    /// Membership in the extremal tree family class.
    B {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        file: String,
    },
}

#[derive(Subcommand)]
enum OracleTarget {
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    Tree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Auto,
    Case1,
    Case2,
    Case3,
    Case3Ceil,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Path,
    Star,
    Pruefer,
}

/// A run outcome: the JSON payload and the exit code.
struct Outcome {
    payload: String,
    code: u8,
}

enum CliError {
    /// Usage or input fault -> exit 2.
    Input(String),
    /// Search or canonicalization budget exhausted -> exit 3.
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<rainbow_core::ModelError> for CliError {
    fn from(e: rainbow_core::ModelError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<rainbow_core::extremal::ExtremalError> for CliError {
    fn from(e: rainbow_core::extremal::ExtremalError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<rainbow_core::certify::CertifyError> for CliError {
    fn from(e: rainbow_core::certify::CertifyError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::SizeLimit(_) => CliError::Budget(e.to_string()),
            OracleError::Tree(TreeError::BudgetExceeded { .. }) => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn read_collection(path: &str) -> Result<GraphCollection, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?
    };
    Ok(GraphCollection::from_json_str(&text)?)
}

fn to_json<T: Serialize>(value: &T, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).expect("serializable output")
    } else {
        serde_json::to_string(value).expect("serializable output")
    }
}

/// Wire-shaped view of a collection for embedding in reports.
#[derive(Serialize)]
struct WireOut {
    vertices: usize,
    graphs: Vec<WireGraphOut>,
}

#[derive(Serialize)]
struct WireGraphOut {
    edges: Vec<[usize; 2]>,
}

fn wire_out(c: &GraphCollection) -> WireOut {
    WireOut {
        vertices: c.vertex_count(),
        graphs: c
            .graphs()
            .iter()
            .map(|g| WireGraphOut {
                edges: g.edges().iter().map(|e| [e.u(), e.v()]).collect(),
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct ParamsOut {
    a: usize,
    b: usize,
    k1: usize,
    k2: usize,
}

#[derive(Serialize)]
struct BoundStarOut {
    bound: usize,
    params: ParamsOut,
}

#[derive(Serialize)]
struct BoundTreeOut {
    bound: usize,
}

#[derive(Serialize)]
struct CheckOut {
    free: bool,
    witness: Option<RainbowWitness>,
}

#[derive(Serialize)]
struct PhaseOut {
    vertices: Vec<usize>,
    colors: Vec<usize>,
    r: Option<usize>,
    tree: RainbowWitness,
}

#[derive(Serialize)]
struct DecomposeOut {
    strategy: Strategy,
    s: usize,
    t: usize,
    assigned_colors: usize,
    unassigned_colors: Vec<usize>,
    phases: Vec<PhaseOut>,
}

#[derive(Serialize)]
struct OracleStarOut {
    max: usize,
    bound: usize,
    matches_bound: bool,
    complete: bool,
    nodes: u64,
    witness: WireOut,
}

#[derive(Serialize)]
struct OracleTreeOut {
    bound: usize,
    extremal_family_free: bool,
    all_larger_contain: bool,
    complete: bool,
    multisets_checked: u64,
    orbits_checked: u64,
    counterexample: Option<WireOut>,
}

#[derive(Serialize)]
struct SaturateOut {
    saturated: bool,
    candidates: usize,
    counterexamples: Vec<StarGraph>,
}

#[derive(Serialize)]
struct VersionOut {
    name: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct SelftestOut {
    ok: bool,
    passed: usize,
    failed: usize,
    failures: Vec<String>,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Bound { target } => match target {
            BoundTarget::Star { n, delta } => {
                let bound = star_bound(n, delta)?;
                let p = decompose_params(n, delta)?;
                let out = BoundStarOut {
                    bound,
                    params: ParamsOut {
                        a: p.a,
                        b: p.b,
                        k1: p.k1,
                        k2: p.k2,
                    },
                };
                Ok(Outcome {
                    payload: to_json(&out, pretty),
                    code: 0,
                })
            }
            BoundTarget::Tree { n, m } => {
                let bound = tree_bound(n, m)?;
                Ok(Outcome {
                    payload: to_json(&BoundTreeOut { bound }, pretty),
                    code: 0,
                })
            }
        },
        Command::Construct { target } => match target {
            ConstructTarget::Star { n, delta, variant } => {
                let variant = match variant {
                    VariantArg::Auto => StarVariant::Auto,
                    VariantArg::Case1 => StarVariant::Case1,
                    VariantArg::Case2 => StarVariant::Case2,
                    VariantArg::Case3 => StarVariant::Case3 {
                        ceil_centers: false,
                    },
                    VariantArg::Case3Ceil => StarVariant::Case3 { ceil_centers: true },
                };
                let c = construct_star_family(n, delta, variant)?;
                let payload = if pretty {
                    c.to_json_pretty()
                } else {
                    c.to_json_string()
                };
                Ok(Outcome { payload, code: 0 })
            }
            ConstructTarget::Tree { n, m, kind, seed } => {
                let kind = match kind {
                    KindArg::Path => TreeKind::Path,
                    KindArg::Star => TreeKind::Star,
                    KindArg::Pruefer => match seed {
                        Some(seed) => TreeKind::Pruefer { seed },
                        None => {
                            return Err(CliError::Input(
                                "--kind pruefer requires an explicit --seed".to_string(),
                            ))
                        }
                    },
                };
                let c = construct_tree_family(n, m, kind)?;
                let payload = if pretty {
                    c.to_json_pretty()
                } else {
                    c.to_json_string()
                };
                Ok(Outcome { payload, code: 0 })
            }
        },
        Command::Check { target } => match target {
            CheckTarget::RainbowStar { delta, file } => {
                if delta < 2 {
                    return Err(CliError::Input("delta must be at least 2".to_string()));
                }
                let c = read_collection(&file)?;
                let witness = find_rainbow_star(&c, delta);
                let free = witness.is_none();
                Ok(Outcome {
                    payload: to_json(&CheckOut { free, witness }, pretty),
                    code: if free { 0 } else { 1 },
                })
            }
            CheckTarget::RainbowTree {
                order,
                budget,
                file,
            } => {
                let c = read_collection(&file)?;
                let witness = has_rainbow_tree_of_order(&c, order, budget)?;
                let free = witness.is_none();
                Ok(Outcome {
                    payload: to_json(&CheckOut { free, witness }, pretty),
                    code: if free { 0 } else { 1 },
                })
            }
        },
        Command::Decompose {
            strategy,
            budget,
            file,
        } => {
            let c = read_collection(&file)?;
            let strategy = match strategy {
                StrategyArg::Exact => Strategy::Exact,
                StrategyArg::Greedy => Strategy::Greedy,
            };
            let d = decompose(&c, strategy, budget)?;
            let reach = reach_sets(&d, &c)?;
            let phases = d
                .phases
                .iter()
                .zip(reach.iter())
                .enumerate()
                .map(|(i, (phase, r))| PhaseOut {
                    vertices: phase.vertices.iter().copied().collect(),
                    colors: phase.colors.iter().copied().collect(),
                    r: if i == 0 { None } else { Some(r.r()) },
                    tree: phase.tree.clone(),
                })
                .collect();
            let out = DecomposeOut {
                strategy,
                s: d.phase_count(),
                t: d.color_count,
                assigned_colors: d.assigned_color_count(),
                unassigned_colors: d.unassigned_colors(),
                phases,
            };
            Ok(Outcome {
                payload: to_json(&out, pretty),
                code: 0,
            })
        }
        Command::Certify { target } => match target {
            CertifyTarget::A {
                n,
                delta,
                file,
                structure,
            } => {
                let c = read_collection(&file)?;
                let report: CertificateReport = if structure {
                    check_extremal_structure(&c, n, delta)?
                } else {
                    is_member_a(&c, n, delta)?
                };
                Ok(Outcome {
                    code: if report.member { 0 } else { 1 },
                    payload: to_json(&report, pretty),
                })
            }
            CertifyTarget::B { n, m, file } => {
                let c = read_collection(&file)?;
                let report = is_member_b(&c, n, m)?;
                Ok(Outcome {
                    code: if report.member { 0 } else { 1 },
                    payload: to_json(&report, pretty),
                })
            }
        },
        Command::Oracle { target } => match target {
            OracleTarget::Star { n, delta, budget } => {
                let bound = star_bound(n, delta)?;
                let report = oracle_star_max(
                    n,
                    delta,
                    OracleOptions {
                        budget,
                        ..OracleOptions::default()
                    },
                )?;
                let out = OracleStarOut {
                    max: report.max_size,
                    bound,
                    matches_bound: report.max_size == bound,
                    complete: report.complete,
                    nodes: report.nodes,
                    witness: wire_out(&report.witness),
                };
                let code = if !report.complete {
                    3
                } else if out.matches_bound {
                    0
                } else {
                    1
                };
                Ok(Outcome {
                    payload: to_json(&out, pretty),
                    code,
                })
            }
            OracleTarget::Tree { n, m, budget } => {
                let report = oracle_tree_threshold(n, m, budget)?;
                let out = OracleTreeOut {
                    bound: report.bound,
                    extremal_family_free: report.extremal_family_free,
                    all_larger_contain: report.all_larger_contain,
                    complete: report.complete,
                    multisets_checked: report.multisets_checked,
                    orbits_checked: report.orbits_checked,
                    counterexample: report.counterexample.as_ref().map(wire_out),
                };
                let code = if !report.complete {
                    3
                } else if report.extremal_family_free && report.all_larger_contain {
                    0
                } else {
                    1
                };
                Ok(Outcome {
                    payload: to_json(&out, pretty),
                    code,
                })
            }
        },
        Command::Saturate { delta, file } => {
            let c = read_collection(&file)?;
            let report = saturation_check(&c, delta)?;
            let out = SaturateOut {
                saturated: report.saturated,
                candidates: report.candidates,
                counterexamples: report.counterexamples,
            };
            let code = if out.saturated { 0 } else { 1 };
            Ok(Outcome {
                payload: to_json(&out, pretty),
                code,
            })
        }
        Command::Version => Ok(Outcome {
            payload: to_json(
                &VersionOut {
                    name: "rainbow",
                    version: env!("CARGO_PKG_VERSION"),
                },
                pretty,
            ),
            code: 0,
        }),
        Command::Selftest => {
            let out = selftest();
            Ok(Outcome {
                code: if out.ok { 0 } else { 1 },
                payload: to_json(&out, pretty),
            })
        }
    }
}

fn selftest() -> SelftestOut {
    let mut failures = Vec::new();
    let mut passed = 0;
    let mut check = |name: &str, ok: bool| {
        if ok {
            passed += 1;
        } else {
            failures.push(name.to_string());
        }
    };

    check("bound-star-11-4", star_bound(11, 4) == Ok(13));
    check(
        "params-11-4",
        decompose_params(11, 4).map(|p| (p.a, p.b, p.k1, p.k2)) == Ok((1, 4, 1, 5)),
    );
    check(
        "params-10-4",
        decompose_params(10, 4).map(|p| (p.a, p.b, p.k1, p.k2)) == Ok((1, 3, 1, 2)),
    );

    for (n, delta) in [(8, 3), (10, 4), (11, 4), (5, 4), (6, 4)] {
        let label = format!("star-family-{n}-{delta}");
        let ok = construct_star_family(n, delta, StarVariant::Auto)
            .map(|c| {
                c.color_count() == star_bound(n, delta).unwrap()
                    && find_rainbow_star(&c, delta).is_none()
                    && is_member_a(&c, n, delta).map(|r| r.member).unwrap_or(false)
            })
            .unwrap_or(false);
        check(&label, ok);
    }

    let copies = GraphCollection::new(
        4,
        (0..3)
            .map(|_| StarGraph::new(0, [1, 2, 3].into()).unwrap().to_graph())
            .collect(),
    )
    .unwrap();
    check(
        "identical-copies-capacity",
        max_rainbow_star_at(&copies, 0).map(|(s, _)| s) == Ok(3),
    );

    let wire = r#"{"vertices":3,"graphs":[{"edges":[[0,1],[0,2]]}]}"#;
    check(
        "round-trip",
        GraphCollection::from_json_str(wire)
            .map(|c| c.to_json_string() == wire)
            .unwrap_or(false),
    );

    check(
        "oracle-star-3-2",
        oracle_star_max(3, 2, OracleOptions::default())
            .map(|r| r.complete && r.max_size == 1)
            .unwrap_or(false),
    );

    let tree_family = construct_tree_family(4, 8, TreeKind::Path).unwrap();
    check(
        "tree-family-4-8",
        is_member_b(&tree_family, 4, 8)
            .map(|r| r.member)
            .unwrap_or(false)
            && has_rainbow_tree_of_order(&tree_family, 4, DEFAULT_NODE_BUDGET)
                .map(|w| w.is_none())
                .unwrap_or(false),
    );

    check(
        "decompose-4-8",
        decompose(&tree_family, Strategy::Exact, DEFAULT_NODE_BUDGET)
            .map(|d| {
                d.phase_count() == 4
                    && d.assigned_color_count() == 4
                    && d.color_count == d.vertex_count - d.phase_count()
            })
            .unwrap_or(false),
    );

    check(
        "saturation-5-4",
        construct_star_family(5, 4, StarVariant::Auto)
            .ok()
            .and_then(|c| saturation_check(&c, 4).ok())
            .map(|r| r.saturated)
            .unwrap_or(false),
    );

    let failed = failures.len();
    SelftestOut {
        ok: failed == 0,
        passed,
        failed,
        failures,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            println!("{}", outcome.payload);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
