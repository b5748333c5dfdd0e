use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use invgroup::algebra::{AlgebraSpec, Limits, DEFAULT_MAX_GROUP_ORDER};
use invgroup::cli::report::{engine_for, LEMMA_CHECK_MAX_ORDER};
use invgroup::cli::{
    cmd_decompose, cmd_table, cmd_verify, emit_algebra, make_example, parse_algebra_file, to_json,
    Family, InputError, ResultDocument, SCHEMA_VERSION,
};
use invgroup::field::DEFAULT_MAX_FIELD_ORDER;
use invgroup::Error;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "invgroup",
    version,
    about = "Character tables and monomial decompositions of fixed-point subgroups of algebra groups",
    after_help = format!("Lemma checks in `verify` run for |G| <= {LEMMA_CHECK_MAX_ORDER}.")
)]
struct Cli {
    /// Seed for the randomized parts of the character table computation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Refuse to enumerate sets larger than this.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GROUP_ORDER)]
    max_order: u64,
    /// Largest field order accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_FIELD_ORDER)]
    max_field_order: u64,
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Record wall-clock time in the document.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of C_G(sigma) with orthogonality and degree checks.
    Table(Input),
    /// Monomial pair for one irreducible character.
    Decompose {
        #[command(flatten)]
        input: Input,
        /// Index into the canonically ordered character table.
        #[arg(long)]
        character: usize,
    },
    /// Decompose every irreducible and run the structural checks.
    Verify(Input),
    /// Print an example algebra in the text format.
    Example(Input),
}

#[derive(Args)]
struct Input {
    /// Algebra file.
    #[arg(conflicts_with_all = ["family", "n", "q"])]
    file: Option<PathBuf>,
    /// Example family: un-flip, un-symplectic or un-unitary.
    #[arg(long, requires_all = ["n", "q"])]
    family: Option<Family>,
    /// Matrix size for the example family.
    #[arg(long, requires = "family")]
    n: Option<usize>,
    /// Field order for the example family.
    #[arg(long, requires = "family")]
    q: Option<u64>,
}

#[derive(Serialize)]
struct ErrorDocument<'a> {
    schema_version: u32,
    command: &'a str,
    seed: u64,
    passed: bool,
    failures: Vec<String>,
}

fn load(input: &Input, cli: &Cli) -> Result<AlgebraSpec, String> {
    let limits = Limits {
        max_group_order: cli.max_order,
    };
    match (&input.file, input.family, input.n, input.q) {
        (Some(path), ..) => {
            parse_algebra_file(path, limits, cli.max_field_order).map_err(|e| match e {
                InputError::Io(_) => e.to_string(),
                _ => format!("{}: {e}", path.display()),
            })
        }
        (None, Some(family), Some(n), Some(q)) => {
            if q > cli.max_field_order {
                return Err(format!(
                    "field order {q} exceeds --max-field-order {}",
                    cli.max_field_order
                ));
            }
            make_example(family, n, q)
                .map(|s| s.with_limits(limits))
                .map_err(|e| e.to_string())
        }
        _ => Err("give an algebra file or --family, --n and --q".into()),
    }
}

fn write_output(cli: &Cli, text: &str) -> Result<(), String> {
    match &cli.json {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Field(_)
            | Error::Domain(_)
            | Error::TooLarge { .. }
            | Error::Config(_)
            | Error::Invalid(_)
    )
}

fn run(cli: &Cli) -> u8 {
    let (name, input) = match &cli.command {
        Command::Table(i) => ("table", i),
        Command::Decompose { input, .. } => ("decompose", input),
        Command::Verify(i) => ("verify", i),
        Command::Example(i) => ("example", i),
    };
    let spec = match load(input, cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    if let Command::Example(_) = cli.command {
        return match write_output(cli, &emit_algebra(&spec)) {
            Ok(()) => EXIT_PASS,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INPUT
            }
        };
    }
    let start = Instant::now();
    let engine = engine_for(spec, cli.seed);
    let result: Result<ResultDocument, Error> = match &cli.command {
        Command::Table(_) => cmd_table(&engine),
        Command::Decompose { character, .. } => cmd_decompose(&engine, *character),
        Command::Verify(_) => cmd_verify(&engine),
        Command::Example(_) => unreachable!(),
    };
    let (text, code) = match result {
        Ok(mut doc) => {
            if cli.timing {
                doc.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            let code = if doc.passed { EXIT_PASS } else { EXIT_FAIL };
            (to_json(&doc), code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = if is_input_error(&e) {
                EXIT_INPUT
            } else {
                EXIT_FAIL
            };
            let doc = ErrorDocument {
                schema_version: SCHEMA_VERSION,
                command: name,
                seed: cli.seed,
                passed: false,
                failures: vec![e.to_string()],
            };
            let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
            text.push('\n');
            (text, code)
        }
    };
    if let Err(e) = write_output(cli, &text) {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli))
}
