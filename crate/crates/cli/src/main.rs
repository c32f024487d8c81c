use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rsft_cli::commands::{self, Command, Flags, Space};
use rsft_cli::context::parse_context;
use rsft_cli::fixtures;
use rsft_core::parse::parse_rational;
use rsft_core::Q;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "rsft", version, about = "Exact rational SFT algebra: checks, morphisms, twisting and invariant searches")]
struct Cli {
    /// Command to run, or `write-fixtures` to regenerate the shipped contexts.
    #[arg(value_name = "COMMAND")]
    command: String,
    /// Context file (TOML).
    #[arg(long)]
    context: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    output: Output,
    /// Maximal word length in searches; relation bound for bilie-check.
    #[arg(long)]
    kmax: Option<usize>,
    /// p-degree truncation for compose.
    #[arg(long)]
    pmax: Option<u32>,
    /// Maximal total q-length of search candidates.
    #[arg(long = "qlen-max")]
    qlen_max: Option<u32>,
    /// Comma-separated energy cutoffs, e.g. `1/2,1,3/2`.
    #[arg(long = "energy-levels", value_delimiter = ',')]
    energy_levels: Option<Vec<String>>,
    /// Word-length cutoff for morphism application and sample suites.
    #[arg(long = "cutoff-words")]
    cutoff_words: Option<usize>,
    /// Torsion candidate space.
    #[arg(long, value_enum, default_value = "all")]
    space: Space,
    /// Compute T̃ instead of T.
    #[arg(long)]
    tilde: bool,
    /// t-monomial for siegel.
    #[arg(long)]
    t: Option<String>,
    /// Bind a role to a context name, `role=name`; repeatable.
    #[arg(long = "bind", value_name = "ROLE=NAME")]
    bind: Vec<String>,
    /// Add wall-clock time to the report.
    #[arg(long)]
    timing: bool,
    /// Output directory for write-fixtures.
    #[arg(long)]
    dir: Option<PathBuf>,
}

fn input_error(msg: String, output: Output) -> ExitCode {
    report_error(json!({"kind": "input", "message": msg}), output)
}

fn report_error(error: serde_json::Value, output: Output) -> ExitCode {
    let report = json!({"schema": commands::SCHEMA, "ok": false, "truncation_active": false, "error": error});
    emit(&report, output);
    ExitCode::from(2)
}

fn emit(report: &serde_json::Value, output: Output) {
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(report).expect("json")),
        Output::Text => print!("{}", commands::render_text(report)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.command == "write-fixtures" {
        let dir = cli.dir.unwrap_or_else(fixtures::default_dir);
        return match fixtures::write_all(&dir) {
            Ok(names) => {
                for n in names {
                    println!("{}", dir.join(n).display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => input_error(e.to_string(), cli.output),
        };
    }
    let Ok(cmd) = Command::from_str(&cli.command, false) else {
        return input_error(format!("unknown command `{}`", cli.command), cli.output);
    };
    let Some(path) = &cli.context else {
        return input_error("--context is required".into(), cli.output);
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", path.display()), cli.output),
    };
    let ctx = match parse_context(&text) {
        Ok(c) => c,
        Err(e) => {
            let kind = format!("{:?}", e.kind).split([' ', '{', '(']).next().unwrap_or("").to_string();
            let error = json!({"kind": kind, "message": format!("{}:{e}", path.display()), "line": e.line, "column": e.column});
            return report_error(error, cli.output);
        }
    };
    let mut bindings = BTreeMap::new();
    for b in &cli.bind {
        let Some((role, name)) = b.split_once('=') else {
            return input_error(format!("--bind expects ROLE=NAME, got `{b}`"), cli.output);
        };
        bindings.insert(role.to_string(), name.to_string());
    }
    let energy_levels = match &cli.energy_levels {
        None => None,
        Some(es) => {
            let parsed: Option<Vec<Q>> = es.iter().map(|e| parse_rational(e).filter(|q| *q > Q::from_integer(0.into()))).collect();
            match parsed {
                Some(v) => Some(v),
                None => return input_error(format!("--energy-levels: expected positive rationals, got `{}`", es.join(",")), cli.output),
            }
        }
    };
    let flags = Flags {
        k_max: cli.kmax,
        p_max: cli.pmax,
        q_len_max: cli.qlen_max,
        energy_levels,
        cutoff_words: cli.cutoff_words,
        space: cli.space,
        tilde: cli.tilde,
        t: cli.t.clone(),
        bindings,
    };
    let start = Instant::now();
    let mut out = commands::run(cmd, &ctx, &flags);
    if cli.timing {
        out.report["timing_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    out.report["inputs"]["context"] = json!(path.display().to_string());
    emit(&out.report, cli.output);
    ExitCode::from(out.code as u8)
}
