//! The `nadea` command line.
//!
//! Exit codes: 0 success, 1 rejected (bad proof, unproved formula, no
//! countermodel), 2 usage error (bad arguments, unreadable input).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use chrono::{Duration, Utc};
use clap::{Parser, Subcommand};
use nadea_core::export::{parse_proof, serialize_proof, to_isar_closed, to_isar_open};
use nadea_core::kernel::{check, Derivation};
use nadea_core::prover::{prove, Budget, FeasibilityVerdict, Sequent};
use nadea_core::semantics::{search_countermodel, SearchConfig};
use nadea_core::syntax::{parse_formula, Formula};

use crate::api::{router, AppState};
use crate::config::Config;
use crate::store::{prune, Store};

pub const OK: i32 = 0;
pub const REJECTED: i32 = 1;
pub const USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nadea", version, about = "Natural deduction proof assistant for first-order logic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the HTTP API.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the configured bind address.
        #[arg(long)]
        bind: Option<std::net::SocketAddr>,
        /// Overrides the configured data directory.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
    /// Check a proof file with the kernel.
    Check {
        file: PathBuf,
        /// Also write the proof back out in canonical form.
        #[arg(long, value_name = "PATH")]
        export_proof: Option<PathBuf>,
        /// Also write the closed Isabelle theorem.
        #[arg(long, value_name = "PATH")]
        export_isar: Option<PathBuf>,
        /// Also write the Scratch theory for the opened versions of the goal.
        #[arg(long, value_name = "PATH")]
        export_scratch: Option<PathBuf>,
    },
    /// Print the Isabelle theory for a checked proof file.
    ExportIsar {
        file: PathBuf,
        /// Emit the Scratch theory for the opened formula instead.
        #[arg(long)]
        scratch: bool,
    },
    /// Run the tableau prover on a formula.
    Prove {
        formula: String,
        /// An assumption; repeatable.
        #[arg(long = "assume", value_name = "FORMULA")]
        assumptions: Vec<String>,
        #[arg(long, default_value_t = Budget::default().max_depth)]
        max_depth: usize,
        #[arg(long, default_value_t = Budget::default().wall_time_ms)]
        wall_time_ms: u64,
    },
    /// Search small finite models for one that falsifies a formula.
    Countermodel {
        formula: String,
        #[arg(long, default_value_t = SearchConfig::default().max_size)]
        max_size: usize,
        #[arg(long, default_value_t = SearchConfig::default().budget)]
        budget: u64,
        #[arg(long, default_value_t = SearchConfig::default().seed)]
        seed: u64,
    },
    /// Delete session journals not edited for a number of days.
    Prune {
        #[arg(long)]
        data_dir: PathBuf,
        #[arg(long, value_name = "DAYS")]
        older_than: u32,
        /// List what would be removed without deleting.
        #[arg(long)]
        dry_run: bool,
    },
}

/// Parses arguments and runs every command except `serve`, which needs a
/// runtime; see [`serve`].
pub fn run(
    args: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { USAGE } else { OK };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "{message}");
            code
        }
    }
}

struct Failure(i32, String);

fn usage(message: impl Into<String>) -> Failure {
    Failure(USAGE, message.into())
}

fn rejected(message: impl Into<String>) -> Failure {
    Failure(REJECTED, message.into())
}

fn formula_arg(text: &str) -> Result<Formula, Failure> {
    parse_formula(text).map_err(|e| {
        let (_, col) = e.line_col(text);
        usage(format!("cannot parse {text:?}: {} at column {col}", e.kind))
    })
}

fn load_proof(file: &PathBuf) -> Result<Derivation, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
    let d = parse_proof(&text).map_err(|e| rejected(format!("{}: {e}", file.display())))?;
    let report = check(&d);
    if !report.ok {
        return Err(rejected(format!("{}: {report}", file.display())));
    }
    Ok(d)
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Serve { .. } => Err(usage("serve must be started through the binary")),
        Command::Check { file, export_proof, export_isar, export_scratch } => {
            let d = load_proof(&file)?;
            if let Some(path) = export_proof {
                write_file(&path, &serialize_proof(&d))?;
            }
            if let Some(path) = export_isar {
                write_file(&path, &to_isar_closed(&d).map_err(|e| rejected(e.to_string()))?)?;
            }
            if let Some(path) = export_scratch {
                write_file(&path, &to_isar_open(&d).map_err(|e| rejected(e.to_string()))?)?;
            }
            let _ = writeln!(out, "ok");
            Ok(OK)
        }
        Command::ExportIsar { file, scratch } => {
            let d = load_proof(&file)?;
            let text = if scratch { to_isar_open(&d) } else { to_isar_closed(&d) };
            let _ = write!(out, "{}", text.map_err(|e| rejected(e.to_string()))?);
            Ok(OK)
        }
        Command::Prove { formula, assumptions, max_depth, wall_time_ms } => {
            let goal = formula_arg(&formula)?;
            let assumptions = assumptions.iter().map(|a| formula_arg(a)).collect::<Result<_, _>>()?;
            let verdict = prove(&Sequent::new(assumptions, goal), &Budget { max_depth, wall_time_ms });
            let _ = writeln!(out, "{}", serde_json::to_string(&verdict).expect("serializable"));
            Ok(if verdict == FeasibilityVerdict::Proved { OK } else { REJECTED })
        }
        Command::Countermodel { formula, max_size, budget, seed } => {
            let f = formula_arg(&formula)?;
            if max_size == 0 {
                return Err(usage("--max-size must be at least 1"));
            }
            match search_countermodel(&f, &SearchConfig { max_size, budget, seed }) {
                Ok(cm) => {
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&cm).expect("serializable"));
                    Ok(OK)
                }
                Err(e) => {
                    let _ = writeln!(out, "{}", serde_json::json!({ "found": false, "reason": e.to_string() }));
                    Ok(REJECTED)
                }
            }
        }
        Command::Prune { data_dir, older_than, dry_run } => {
            let cutoff = Utc::now() - Duration::days(i64::from(older_than));
            let removed = prune(&data_dir, cutoff, dry_run).map_err(|e| usage(e.to_string()))?;
            for id in removed {
                let _ = writeln!(out, "{id}");
            }
            Ok(OK)
        }
    }
}

/// Loads configuration, replays journals and serves until interrupted.
pub async fn serve(config: Option<PathBuf>, bind: Option<std::net::SocketAddr>, data_dir: Option<PathBuf>) -> i32 {
    let mut config = match Config::load(config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return USAGE;
        }
    };
    if let Some(bind) = bind {
        config.bind = bind;
    }
    if data_dir.is_some() {
        config.data_dir = data_dir;
    }
    let store = match &config.data_dir {
        Some(dir) => match Store::open(dir) {
            Ok((store, problems)) => {
                for p in problems {
                    tracing::warn!("skipping journal: {p}");
                }
                tracing::info!("loaded {} sessions from {}", store.len(), dir.display());
                store
            }
            Err(e) => {
                eprintln!("cannot open data directory {}: {e}", dir.display());
                return USAGE;
            }
        },
        None => Store::in_memory(),
    };
    let listener = match tokio::net::TcpListener::bind(config.bind).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("cannot bind {}: {e}", config.bind);
            return USAGE;
        }
    };
    tracing::info!("listening on {}", config.bind);
    let app = router(Arc::new(AppState { store, config }));
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    match axum::serve(listener, app).with_graceful_shutdown(shutdown).await {
        Ok(()) => OK,
        Err(e) => {
            eprintln!("{e}");
            REJECTED
        }
    }
}
