//! Command-line front end: construct catalog groups, emit their spectra by
//! any combination of methods, inspect group invariants, and run batch
//! verification over a grid of family specs.
//!
//! Exit codes: 0 success/agreement, 1 usage or runtime error, 2 unexplained
//! disagreement.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncgraph::catalog::FamilySpec;
use ncgraph::graph::non_commuting_graph;
use ncgraph::predict::{
    format_ratio, run_catalog_verification, verify_spec, Methods, VerificationCaps,
    VerificationReport, VerificationSummary,
};
use ncgraph::spectra::{self, DEFAULT_ROUNDING_TOL};
use ncgraph::DEFAULT_ORDER_CAP;

#[derive(Parser)]
#[command(name = "ncgraph", version, about = "Non-commuting graphs and their Laplacian spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Laplacian spectrum of a family's non-commuting graph by
    /// the selected methods and compare them.
    Spectrum(SpectrumArgs),
    /// Verify a grid of family specs: all methods, consequence checks, and
    /// an aggregate summary.
    Verify(VerifyArgs),
    /// Print order, center, commuting probability, centralizer count,
    /// planarity, clique number and L-integrality for one group.
    GroupInfo(GroupInfoArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// Family id (dihedral, generalized_quaternion, quasidihedral,
    /// metacyclic, frobenius20, order_pq, extraspecial_p3, psl2, gl2,
    /// hanaki_theta, hanaki_p, alternating5, cyclic, abelian_product,
    /// direct_product).
    #[arg(long)]
    family: String,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Extraspecial type: exponent_p or exponent_p2.
    #[arg(long = "type")]
    kind: Option<String>,
    /// Cyclic orders like 2x2x3 (abelian_product).
    #[arg(long)]
    orders: Option<String>,
    /// Base family id (direct_product); base parameters come from the
    /// shared flags above.
    #[arg(long)]
    base: Option<String>,
    /// Abelian factor orders like 2x2 (direct_product).
    #[arg(long = "with")]
    with: Option<String>,
}

impl FamilyArgs {
    fn to_spec(&self) -> Result<FamilySpec, String> {
        let mut text = format!("family={}", self.family);
        let mut push = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                text.push_str(&format!(";{key}={v}"));
            }
        };
        push("m", self.m.map(|v| v.to_string()));
        push("n", self.n.map(|v| v.to_string()));
        push("p", self.p.map(|v| v.to_string()));
        push("q", self.q.map(|v| v.to_string()));
        push("k", self.k.map(|v| v.to_string()));
        push("type", self.kind.clone());
        push("orders", self.orders.clone());
        push("base", self.base.clone());
        push("with", self.with.clone());
        FamilySpec::parse(&text).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Comma-separated subset of formula,structural,numeric.
    #[arg(long, default_value = "formula,structural,numeric")]
    methods: String,
    #[arg(long, default_value_t = DEFAULT_ROUNDING_TOL)]
    tol: f64,
    #[arg(long = "max-order", default_value_t = DEFAULT_ORDER_CAP)]
    max_order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Grid file: one family spec per line (`family=dihedral;m=7`), `#`
    /// comments. The built-in default grid when omitted.
    #[arg(long)]
    grid: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ROUNDING_TOL)]
    tol: f64,
    #[arg(long = "max-order", default_value_t = DEFAULT_ORDER_CAP)]
    max_order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report file path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GroupInfoArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = DEFAULT_ROUNDING_TOL)]
    tol: f64,
    #[arg(long = "max-order", default_value_t = DEFAULT_ORDER_CAP)]
    max_order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the non-commuting graph as an edge list (one `u v` line
    /// per edge, zero-based vertex indices).
    #[arg(long = "export-edges")]
    export_edges: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Verify(args) => cmd_verify(args),
        Command::GroupInfo(args) => cmd_group_info(args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| e.to_string())
        }
    }
}

fn spectrum_csv(report: &VerificationReport) -> String {
    let mut csv = String::from("method,statement,eigenvalue,multiplicity\n");
    let mut rows = |method: &str, statement: &str, spectrum: &ncgraph::Spectrum| {
        for (value, mult) in spectrum.entries() {
            csv.push_str(&format!("{method},{statement},{value},{mult}\n"));
        }
    };
    for outcome in &report.formulas {
        if let Some(s) = &outcome.spectrum {
            rows("formula", &outcome.statement, s);
        }
    }
    if let Some(s) = &report.structural {
        rows("structural", "", s);
    }
    if let Some(s) = &report.numeric_certified {
        rows("numeric", "", s);
    }
    csv
}

fn spectrum_text(report: &VerificationReport) -> String {
    let mut text = format!("group: {}\n", report.family);
    if let (Some(order), Some(z)) = (report.order, report.center_order) {
        text.push_str(&format!("order: {order}, center: {z}\n"));
    }
    for outcome in &report.formulas {
        match (&outcome.spectrum, &outcome.note) {
            (Some(s), _) => text.push_str(&format!("formula[{}]: {s}\n", outcome.statement)),
            (None, Some(note)) => {
                text.push_str(&format!("formula[{}]: unavailable ({note})\n", outcome.statement))
            }
            _ => {}
        }
    }
    if let Some(s) = &report.structural {
        text.push_str(&format!("structural: {s}\n"));
    }
    if let Some(s) = &report.numeric_certified {
        text.push_str(&format!("numeric: {s}\n"));
    }
    if let Some(agree) = report.agreement {
        text.push_str(&format!("agree: {agree}\n"));
    }
    for d in &report.discrepancies {
        let tag = if d.explained { "explained" } else { "UNEXPLAINED" };
        text.push_str(&format!("discrepancy ({tag}): {}\n", d.detail));
    }
    text
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<ExitCode, String> {
    let spec = args.family.to_spec()?;
    let methods = Methods::parse(&args.methods)?;
    let caps = VerificationCaps {
        max_order: args.max_order,
        tolerance: args.tol,
    };
    let report = verify_spec(&spec, methods, &caps, false);
    if let Some(error) = &report.error {
        return Err(error.clone());
    }
    if let Some(reason) = &report.skipped {
        return Err(reason.clone());
    }
    let content = match args.format {
        Format::Json => serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n",
        Format::Csv => spectrum_csv(&report),
        Format::Text => spectrum_text(&report),
    };
    emit(&args.out, &content)?;
    if report.clean() && report.agreement != Some(false) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn load_grid(path: &PathBuf) -> Result<Vec<FamilySpec>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut grid = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let spec = FamilySpec::parse(line)
            .map_err(|e| format!("{}:{}: {e}", path.display(), number + 1))?;
        grid.push(spec);
    }
    Ok(grid)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let grid = match &args.grid {
        Some(path) => load_grid(path)?,
        None => ncgraph::predict::default_grid(),
    };
    let caps = VerificationCaps {
        max_order: args.max_order,
        tolerance: args.tol,
    };
    let reports = run_catalog_verification(&grid, &caps);
    let summary = VerificationSummary::from_reports(&reports);
    let content = match args.format {
        Format::Json => {
            let doc = serde_json::json!({
                "summary": summary,
                "reports": reports,
            });
            serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n"
        }
        Format::Csv => {
            let mut csv = String::from("family,order,agreement,l_integral,skipped,error\n");
            for r in &reports {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.family,
                    r.order.map(|o| o.to_string()).unwrap_or_default(),
                    r.agreement.map(|a| a.to_string()).unwrap_or_default(),
                    r.consequences
                        .as_ref()
                        .map(|c| c.l_integral.to_string())
                        .unwrap_or_default(),
                    r.skipped.clone().unwrap_or_default(),
                    r.error.clone().unwrap_or_default(),
                ));
            }
            csv
        }
        Format::Text => {
            let mut text = String::new();
            for r in &reports {
                let status = if let Some(reason) = &r.skipped {
                    format!("skipped ({reason})")
                } else if let Some(error) = &r.error {
                    format!("error ({error})")
                } else if r.clean() && r.agreement != Some(false) {
                    "ok".into()
                } else {
                    "DISAGREE".into()
                };
                text.push_str(&format!("{}: {status}\n", r.family));
            }
            text.push_str(&format!(
                "{} statements verified, {} skipped, {} errors, {} explained discrepancies, {} unexplained\n",
                summary.verified,
                summary.skipped,
                summary.errors,
                summary.explained_discrepancies,
                summary.unexplained_discrepancies,
            ));
            text
        }
    };
    emit(&args.out, &content)?;
    if !matches!(args.format, Format::Text) {
        eprintln!("{} statements verified", summary.verified);
    }
    if summary.ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn cmd_group_info(args: GroupInfoArgs) -> Result<ExitCode, String> {
    let spec = args.family.to_spec()?;
    let caps = VerificationCaps {
        max_order: args.max_order,
        tolerance: args.tol,
    };
    let order = spec.expected_order().map_err(|e| e.to_string())?;
    if order > caps.max_order {
        return Err(format!("order {order} exceeds the cap {}", caps.max_order));
    }
    let group = spec.construct(caps.max_order).map_err(|e| e.to_string())?;
    let graph = non_commuting_graph(&group)
        .map_err(|_| "group is abelian: no non-commuting graph".to_string())?;
    if let Some(path) = &args.export_edges {
        std::fs::write(path, graph.edge_list_text())
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let pr = group.commuting_probability();
    let integrality = spectra::is_l_integral(&graph, caps.tolerance).map_err(|e| e.to_string())?;
    let max_clique = graph.max_clique().ok();
    let planar = graph.is_planar().ok();
    let doc = serde_json::json!({
        "family": spec.to_text(),
        "order": group.order(),
        "center": group.center().len(),
        "pr": format_ratio(pr),
        "centralizers": group.distinct_centralizer_count(),
        "ac": group.is_ac_group(),
        "planar": planar,
        "r": max_clique,
        "l_integral": integrality.integral,
        "certificate": integrality.certificate,
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "solvable": group.is_solvable(),
    });
    let content = match args.format {
        Format::Json => serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n",
        Format::Csv | Format::Text => {
            let mut text = String::new();
            let obj = doc.as_object().unwrap();
            for (key, value) in obj {
                text.push_str(&format!("{key}: {value}\n"));
            }
            text
        }
    };
    emit(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}
