use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod field;
mod verify;

use field::FieldMode;

#[derive(Parser)]
#[command(name = "weylres", version)]
#[command(about = "Logarithmic derivations, free resolutions and jumping lines of deformed Weyl arrangements")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Write the report here instead of stdout
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// q (exact rationals) or fp:<p>
    #[arg(long, global = true, default_value = "q")]
    pub field: String,
    /// Acknowledge that results over a prime field are only probabilistic evidence
    #[arg(long, global = true)]
    pub probabilistic: bool,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Wall clock cap; exceeding it reports truncation and exits with 5
    #[arg(long, global = true)]
    pub max_seconds: Option<u64>,
    /// Cap on Gröbner reduction steps per task
    #[arg(long, global = true)]
    pub max_gb_steps: Option<u64>,
    /// Worker threads for independent tasks (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModuleKind {
    D,
    D0,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Free start of the B2 chain
    B2Start,
    /// Member u of the B2 chain
    B2Member,
}

#[derive(Subcommand)]
enum Command {
    /// Build an arrangement and write it as JSON
    Build {
        /// Root system, e.g. A3, B2, D4
        #[arg(long = "type")]
        rtype: Option<String>,
        /// Deformation interval a:b
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
        #[arg(long)]
        cone: bool,
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long, default_value_t = 0)]
        k: i64,
        #[arg(long, default_value_t = 3)]
        j: i64,
        #[arg(long, default_value_t = 0)]
        u: i64,
    },
    /// Minimal free resolution of D(A) or D0(A)
    Betti {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModuleKind::D0)]
        module: ModuleKind,
        /// Cross-check the Hilbert function against degreewise linear algebra
        #[arg(long)]
        oracle: bool,
    },
    /// Freeness verdict, exponents and Saito certificate
    Free { file: PathBuf },
    /// Characteristic polynomial
    Chi { file: PathBuf },
    /// Splitting types of the bundle of D0 on lines
    Jump {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        random_lines: usize,
        /// Flag lines of higher order; any such line makes the command fail
        #[arg(long)]
        max_order: Option<i64>,
    },
    /// Check a stated result; without parameters the whole default grid runs
    Verify {
        #[arg(value_enum, required = true)]
        tasks: Vec<verify::TaskId>,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        j: Option<i64>,
        #[arg(long)]
        kprime: Option<i64>,
        /// Root system for ade-pd1
        #[arg(long = "type")]
        rtype: Option<String>,
        #[arg(long, default_value_t = 50)]
        random_lines: usize,
    },
    /// Export the minimal presentation of D0 (generators and relations)
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModuleKind::D0)]
        module: ModuleKind,
    },
}

/// Outcome of a command: text to print and the exit status.
pub struct Outcome {
    pub json: serde_json::Value,
    pub text: String,
    pub code: u8,
    /// Errors without a report go to stderr in text mode.
    pub diagnostic: bool,
}

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ORACLE: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;
pub const EXIT_CAP: u8 = 5;

pub fn exit_code_for(e: &weylres::Error) -> u8 {
    use weylres::Error::*;
    match e {
        BudgetExceeded(_) => EXIT_CAP,
        InvalidInput(_) | Parse(_) | DimensionMismatch { .. } | Unsupported(_) => EXIT_USAGE,
        HypothesisFailed(_) | VerificationFailed(_) => EXIT_VERIFY,
        _ => 1,
    }
}

fn run(cli: Cli) -> Outcome {
    let g = cli.global.clone();
    let field = match FieldMode::parse(&g.field, g.probabilistic) {
        Ok(f) => f,
        Err(msg) => return Outcome::usage(msg),
    };
    let result = match cli.command {
        Command::Build { rtype, interval, cone, family, k, j, u } => {
            commands::build(rtype.as_deref(), interval.as_deref(), cone, family, k, j, u)
        }
        Command::Betti { file, module, oracle } => commands::betti(&g, field, &file, module, oracle),
        Command::Free { file } => commands::free(&g, field, &file),
        Command::Chi { file } => commands::chi(&file),
        Command::Jump { file, random_lines, max_order } => {
            commands::jump(&g, field, &file, random_lines, max_order)
        }
        Command::Verify { tasks, k, j, kprime, rtype, random_lines } => {
            let params = verify::Params { k, j, kprime, rtype, random_lines };
            verify::run(&g, field, &tasks, &params)
        }
        Command::Export { file, module } => commands::export(&g, field, &file, module),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

impl Outcome {
    pub fn ok(json: serde_json::Value, text: String) -> Self {
        Outcome { json, text, code: 0, diagnostic: false }
    }

    pub fn usage(msg: String) -> Self {
        Outcome {
            json: serde_json::json!({ "error": msg }),
            text: format!("error: {msg}"),
            code: EXIT_USAGE,
            diagnostic: true,
        }
    }

    pub fn error(e: &weylres::Error) -> Self {
        let code = exit_code_for(e);
        let status = if code == EXIT_CAP { "truncated" } else { "error" };
        Outcome {
            json: serde_json::json!({ "status": status, "error": e.to_string() }),
            text: format!("{status}: {e}"),
            code,
            diagnostic: true,
        }
    }
}

fn emit(global: &Global, out: &Outcome) -> std::io::Result<()> {
    let body = match global.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("reports serialize") + "\n",
        Format::Text => {
            let mut t = out.text.clone();
            if !t.ends_with('\n') {
                t.push('\n');
            }
            t
        }
    };
    match &global.output {
        _ if out.diagnostic && global.format == Format::Text => {
            eprint!("{body}");
            Ok(())
        }
        Some(path) => std::fs::write(path, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let global = cli.global.clone();
    if let Some(n) = global.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (tx, rx) = mpsc::channel();
    // big stack: resolutions recurse through nested polynomial arithmetic
    std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(move || {
            let _ = tx.send(run(cli));
        })
        .expect("spawn worker");
    let out = match global.max_seconds {
        Some(s) => match rx.recv_timeout(Duration::from_secs(s)) {
            Ok(o) => o,
            Err(_) => Outcome {
                json: serde_json::json!({ "status": "truncated", "reason": format!("time cap of {s} s reached") }),
                text: format!("truncated: time cap of {s} s reached"),
                code: EXIT_CAP,
                diagnostic: true,
            },
        },
        None => rx.recv().expect("worker finished"),
    };
    if let Err(e) = emit(&global, &out) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(out.code)
}
