//! File-driven command-line front end: parse graph documents, dispatch the
//! combinatorial/geometric analyses, and emit machine- or human-readable
//! reports.
//!
//! Exit codes: 0 = verdict computed (even if negative), 1 = input error,
//! 2 = internal invariant breach.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cylrig::construction::{self, Certificate, CertifyError, StepError};
use cylrig::geometry;
use cylrig::graph::{GroupName, SymmetricGraph};
use cylrig::sparsity;
use cylrig::{catalog, characters, trees};
use cylrig_cli::{gamma_report_json, ids, parse_document, serialize_document};

#[derive(Parser)]
#[command(
    name = "cylrig",
    version,
    about = "Rigidity of symmetric bar-joint frameworks on the cylinder"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input document (graph JSON; a certificate JSON for `replay`)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Seed for the random symmetric realizations
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Realizations to try before a (probabilistic) negative verdict
    #[arg(long, global = true, default_value_t = 3)]
    retries: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Sparsity, Γ-tightness and character conditions
    Check,
    /// Geometric isostaticity at random exact symmetric realizations
    Isostatic,
    /// Reduce to a base graph and emit the construction certificate
    Certify,
    /// Replay a certificate; optionally verify it against a target graph
    Replay {
        /// Graph document the certificate should reproduce
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Certify and decompose into two symmetric spanning trees
    Trees,
    /// Character rows and the necessary conditions
    Characters,
    /// Dump the base-graph catalog with self-verification
    Basegraphs,
}

enum CliError {
    Input(String),
    Internal(String),
}

fn read_input(path: &Option<PathBuf>) -> Result<Vec<u8>, CliError> {
    let path = path
        .as_ref()
        .ok_or_else(|| CliError::Input("--input PATH is required for this command".into()))?;
    std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Option<PathBuf>) -> Result<SymmetricGraph, CliError> {
    let bytes = read_input(path)?;
    parse_document(&bytes).map_err(|e| CliError::Input(e.to_string()))
}

fn characters_json(graph: &SymmetricGraph) -> Value {
    let rows = characters::character_rows(graph);
    let necessary = characters::necessary_conditions(graph);
    let row_json = |row: &characters::CharacterRow| -> Value {
        json!({
            "label": serde_json::to_value(row.label).unwrap(),
            "values": row.values.iter().map(|(op, v)| json!([op.to_string(), v])).collect::<Vec<_>>(),
        })
    };
    json!({
        "rows": rows.iter().map(row_json).collect::<Vec<_>>(),
        "necessary": {
            "pass": necessary.pass,
            "character_ok": necessary.character_ok,
            "count_ok": necessary.count_ok,
            "table_ok": necessary.table_ok,
            "residuals": necessary.residuals.iter().map(|(op, v)| json!([op.to_string(), v])).collect::<Vec<_>>(),
            "notes": necessary.notes,
        },
    })
}

fn certify_for_cli(graph: &SymmetricGraph) -> Result<Result<Certificate, Value>, CliError> {
    match construction::certify(graph) {
        Ok(cert) => Ok(Ok(cert)),
        Err(CertifyError::NotTight(report)) => Ok(Err(json!({
            "not_tight": true,
            "witness": report.sparsity.witness.as_ref().map(|w| ids(graph, w)),
            "reasons": report.reasons,
        }))),
        Err(CertifyError::UnsupportedGroup(name)) => {
            let msg = match name {
                GroupName::C2v | GroupName::C2h => {
                    format!("group {name} has necessary conditions only; see characters")
                }
                _ => format!("group {name} has no recursive characterization"),
            };
            Err(CliError::Input(msg))
        }
        Err(e @ (CertifyError::Step(_) | CertifyError::Exhausted(_))) => {
            Err(CliError::Internal(e.to_string()))
        }
    }
}

fn run(cli: &Cli) -> Result<(Value, String), CliError> {
    let start = Instant::now();
    let (command_name, mut payload, text) = match &cli.command {
        Command::Check => {
            let graph = load_graph(&cli.input)?;
            let sparsity_report = sparsity::check_22_graph(&graph);
            let gamma = match sparsity::gamma_tight(&graph) {
                Ok(r) => gamma_report_json(&graph, &r),
                Err(e) => json!({ "unsupported": e.to_string() }),
            };
            let chars = characters_json(&graph);
            let tight = sparsity_report.tight;
            let gamma_ok = gamma.get("tight").and_then(Value::as_bool).unwrap_or(false);
            let nec = chars["necessary"]["pass"].as_bool().unwrap_or(false);
            let text = format!(
                "check: (2,2)-sparse={} tight={} gamma_tight={} characters_pass={}",
                sparsity_report.sparse, tight, gamma_ok, nec
            );
            (
                "check",
                json!({
                    "sparse": sparsity_report.sparse,
                    "tight": tight,
                    "witness": sparsity_report.witness.as_ref().map(|w| ids(&graph, w)),
                    "gamma_tight": gamma,
                    "characters": chars,
                }),
                text,
            )
        }
        Command::Isostatic => {
            let graph = load_graph(&cli.input)?;
            let verdict = geometry::graph_is_gamma_isostatic(&graph, cli.seed, cli.retries)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let text = format!(
                "isostatic: {}{} (rank {} of {}, rows {})",
                verdict.isostatic,
                if verdict.probabilistic {
                    " (probabilistic)"
                } else {
                    ""
                },
                verdict.max_rank,
                verdict.target_rank,
                verdict.row_count
            );
            (
                "isostatic",
                serde_json::to_value(&verdict).expect("verdict serializes"),
                text,
            )
        }
        Command::Certify => {
            let graph = load_graph(&cli.input)?;
            match certify_for_cli(&graph)? {
                Ok(cert) => {
                    let verified = construction::verify_certificate(&graph, &cert);
                    let text = format!(
                        "certify: base {} + {} steps (replay verified: {verified})",
                        cert.base,
                        cert.steps.len()
                    );
                    (
                        "certify",
                        json!({
                            "certificate": serde_json::to_value(&cert).unwrap(),
                            "verified": verified,
                        }),
                        text,
                    )
                }
                Err(not_tight) => ("certify", not_tight, "certify: NotTight".to_string()),
            }
        }
        Command::Replay { target } => {
            let bytes = read_input(&cli.input)?;
            let cert = Certificate::from_json(&String::from_utf8_lossy(&bytes))
                .map_err(|e| CliError::Input(format!("malformed certificate: {e}")))?;
            let graph = construction::replay(&cert).map_err(|e| match e {
                StepError::TightnessLost(m) => CliError::Internal(m),
                other => CliError::Input(other.to_string()),
            })?;
            let verified = match target {
                Some(path) => {
                    let target_graph = load_graph(&Some(path.clone()))?;
                    Some(construction::verify_certificate(&target_graph, &cert))
                }
                None => None,
            };
            let text = format!(
                "replay: {} vertices, {} edges{}",
                graph.vertex_count(),
                graph.edge_count(),
                match verified {
                    Some(v) => format!(" (target verified: {v})"),
                    None => String::new(),
                }
            );
            (
                "replay",
                json!({
                    "graph": serde_json::to_value(serialize_document(&graph)).unwrap(),
                    "verified": verified,
                }),
                text,
            )
        }
        Command::Trees => {
            let graph = load_graph(&cli.input)?;
            match certify_for_cli(&graph)? {
                Ok(cert) => {
                    let out = trees::decompose(&graph, &cert).map_err(|e| match e {
                        trees::TreesError::SearchFailed(m) => CliError::Internal(m),
                        other => CliError::Input(other.to_string()),
                    })?;
                    let ok = trees::verify_decomposition(&graph, &out.coloring);
                    if !ok {
                        return Err(CliError::Internal(
                            "decomposition failed verification".into(),
                        ));
                    }
                    let text = format!(
                        "trees: two symmetric spanning trees with {} edges each ({} fallback searches)",
                        out.coloring.red.len(),
                        out.fallback_steps.len()
                    );
                    (
                        "trees",
                        json!({
                            "coloring": out.coloring.to_json(),
                            "fallback_steps": out.fallback_steps,
                            "verified": ok,
                        }),
                        text,
                    )
                }
                Err(not_tight) => ("trees", not_tight, "trees: NotTight".to_string()),
            }
        }
        Command::Characters => {
            let graph = load_graph(&cli.input)?;
            let chars = characters_json(&graph);
            let text = format!(
                "characters: necessary conditions pass = {}",
                chars["necessary"]["pass"]
            );
            ("characters", chars, text)
        }
        Command::Basegraphs => {
            let mut entries = Vec::new();
            for entry in catalog::catalog() {
                let verified = catalog::verify_entry(entry).is_ok();
                let doc = serialize_document(&entry.graph);
                let color = |edges: &Vec<(u32, u32)>| -> Vec<[String; 2]> {
                    edges
                        .iter()
                        .map(|&(a, b)| {
                            [
                                entry.graph.vertex_id(a).to_string(),
                                entry.graph.vertex_id(b).to_string(),
                            ]
                        })
                        .collect()
                };
                entries.push(json!({
                    "id": entry.id,
                    "group": entry.graph.group().name.as_str(),
                    "document": serde_json::to_value(&doc).unwrap(),
                    "coloring": { "red": color(&entry.red), "blue": color(&entry.blue) },
                    "verified": verified,
                }));
                if !verified {
                    return Err(CliError::Internal(format!(
                        "catalog entry {} failed self-verification",
                        entry.id
                    )));
                }
            }
            let text = format!("basegraphs: {} entries, all verified", entries.len());
            ("basegraphs", json!({ "entries": entries }), text)
        }
    };
    let obj = payload.as_object_mut().expect("payload is an object");
    obj.insert("command".into(), json!(command_name));
    if let Some(input) = &cli.input {
        obj.insert("input".into(), json!(input.display().to_string()));
    }
    obj.insert("seed".into(), json!(cli.seed));
    obj.insert("retries".into(), json!(cli.retries));
    obj.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    obj.insert("timing_ms".into(), json!(start.elapsed().as_millis() as u64));
    Ok((payload, text))
}

fn main() {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&cli)));
    let code = match outcome {
        Ok(Ok((payload, text))) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&payload).unwrap()),
                Format::Text => println!("{text}"),
            }
            0
        }
        Ok(Err(CliError::Input(msg))) => {
            eprintln!("input error: {msg}");
            1
        }
        Ok(Err(CliError::Internal(msg))) => {
            eprintln!("internal invariant breach: {msg}");
            2
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            eprintln!("internal invariant breach: {msg}");
            2
        }
    };
    std::process::exit(code);
}
