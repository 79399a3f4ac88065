//! Command-line surface for the cobweb poset algebra: level tables, Hasse
//! diagram exports, incidence matrices, Möbius queries, the
//! self-verification suite, inversion of vertex functions and the strategy
//! benchmark.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a broken identity, 2 for
//! usage errors and element-limit violations.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cobweb_core::incidence::{eta_power, zeta_coord, IncidenceFunction};
use cobweb_core::inversion::{accumulate, reconstruct, PosetFunction};
use cobweb_core::mobius::{bench_strategies, mobius_coords, mobius_levels, mobius_matrix, MobiusStrategy};
use cobweb_core::verify::verify_suite;
use cobweb_core::{fib, CobwebError, Label, TruncatedPoset, Vertex, DEFAULT_MAX_ELEMENTS};

#[derive(Parser)]
#[command(
    name = "cobweb",
    version,
    about = "Exact incidence algebra of the Fibonacci cobweb poset"
)]
struct Cli {
    /// Refuse any truncation with more elements than this.
    #[arg(
        long,
        global = true,
        env = "COBWEB_MAX_ELEMENTS",
        default_value_t = DEFAULT_MAX_ELEMENTS
    )]
    max_elements: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Level table: size and label range per level.
    Levels {
        #[arg(long)]
        max_level: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Hasse diagram as DOT or a CSV edge list.
    Hasse {
        #[arg(long)]
        max_level: u32,
        #[arg(long, value_enum, default_value_t = HasseFormat::Dot)]
        format: HasseFormat,
    },
    /// Incidence matrix in linear-extension order.
    Matrix {
        #[arg(long, value_enum)]
        kind: MatrixKind,
        /// Convolution power; required for eta, invalid otherwise.
        #[arg(long)]
        power: Option<u32>,
        #[arg(long)]
        max_level: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// One Möbius value, addressed by labels or by "row,level" coordinates.
    Mu {
        #[arg(long, conflicts_with_all = ["from", "to"])]
        from_label: Option<Label>,
        #[arg(long, requires = "from_label")]
        to_label: Option<Label>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Re-derive the defining identities on a truncation.
    Verify {
        #[arg(long)]
        max_level: u32,
    },
    /// Accumulate a vertex function over down-sets and reconstruct it.
    Invert {
        /// JSON file holding the function to transform.
        #[arg(long)]
        input: PathBuf,
        /// Optional cross-check against the file's declared max level.
        #[arg(long)]
        max_level: Option<u32>,
    },
    /// Time the three Möbius-matrix strategies.
    Bench {
        #[arg(long)]
        max_level: u32,
        #[arg(long, default_value_t = 3)]
        reps: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum HasseFormat {
    Dot,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    Zeta,
    Mobius,
    Eta,
}

enum Failure {
    /// Usage or guard problem; exit 2.
    Usage(String),
    /// A verification check failed; exit 1.
    Check(String),
}

impl From<CobwebError> for Failure {
    fn from(e: CobwebError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let guard = cli.max_elements;
    match cli.command {
        Command::Levels { max_level, format } => cmd_levels(max_level, format, guard),
        Command::Hasse { max_level, format } => cmd_hasse(max_level, format, guard),
        Command::Matrix {
            kind,
            power,
            max_level,
            format,
        } => cmd_matrix(kind, power, max_level, format, guard),
        Command::Mu {
            from_label,
            to_label,
            from,
            to,
        } => cmd_mu(from_label, to_label, from, to, guard),
        Command::Verify { max_level } => cmd_verify(max_level, guard),
        Command::Invert { input, max_level } => cmd_invert(&input, max_level, guard),
        Command::Bench { max_level, reps } => cmd_bench(max_level, reps, guard),
    }
}

fn cmd_levels(max_level: u32, format: TableFormat, guard: u64) -> Result<String, Failure> {
    let poset = TruncatedPoset::with_element_limit(max_level, guard)?;
    match format {
        TableFormat::Csv => {
            let mut out = String::from("level,size,first_label,last_label\n");
            for level in 1..=max_level {
                writeln!(
                    out,
                    "{level},{},{},{}",
                    poset.level_size(level).unwrap(),
                    poset.first_label(level).unwrap(),
                    poset.last_label_of_level(level).unwrap()
                )
                .unwrap();
            }
            Ok(out)
        }
        TableFormat::Json => {
            let rows: Vec<_> = (1..=max_level)
                .map(|level| {
                    json!({
                        "level": level,
                        "size": poset.level_size(level).unwrap(),
                        "first_label": poset.first_label(level).unwrap(),
                        "last_label": poset.last_label_of_level(level).unwrap(),
                    })
                })
                .collect();
            Ok(format!("{}\n", serde_json::Value::Array(rows)))
        }
    }
}

fn cmd_hasse(max_level: u32, format: HasseFormat, guard: u64) -> Result<String, Failure> {
    let poset = TruncatedPoset::with_element_limit(max_level, guard)?;
    Ok(match format {
        HasseFormat::Dot => poset.export_dot()?,
        HasseFormat::Csv => poset.export_edges_csv()?,
    })
}

fn cmd_matrix(
    kind: MatrixKind,
    power: Option<u32>,
    max_level: u32,
    format: TableFormat,
    guard: u64,
) -> Result<String, Failure> {
    let poset = TruncatedPoset::with_element_limit(max_level, guard)?;
    let (name, matrix): (&str, IncidenceFunction) = match (kind, power) {
        (MatrixKind::Zeta, None) => ("zeta", zeta_coord(&poset)),
        (MatrixKind::Mobius, None) => ("mobius", mobius_matrix(&poset, MobiusStrategy::Explicit)),
        (MatrixKind::Eta, Some(k)) => ("eta", eta_power(&poset, k)),
        (MatrixKind::Eta, None) => {
            return Err(Failure::Usage("--power is required for kind eta".into()))
        }
        (_, Some(_)) => {
            return Err(Failure::Usage("--power only applies to kind eta".into()))
        }
    };
    match format {
        TableFormat::Csv => Ok(matrix.to_csv()),
        TableFormat::Json => {
            let last = poset.last_label();
            let labels: Vec<Label> = (1..=last).collect();
            let rows: Vec<Vec<String>> = (1..=last)
                .map(|a| (1..=last).map(|b| matrix.value(a, b).to_string()).collect())
                .collect();
            let value = json!({
                "kind": name,
                "max_level": max_level,
                "labels": labels,
                "rows": rows,
            });
            Ok(format!("{value}\n"))
        }
    }
}

fn parse_vertex(text: &str) -> Result<Vertex, Failure> {
    let (row, level) = text
        .split_once(',')
        .ok_or_else(|| Failure::Usage(format!("expected \"row,level\", got \"{text}\"")))?;
    let row: u64 = row
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("bad row in \"{text}\"")))?;
    let level: u32 = level
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("bad level in \"{text}\"")))?;
    Ok(Vertex::new(row, level)?)
}

/// Which branch of the five-case level formula applies, by label order.
fn mu_case(x: Label, y: Label) -> Result<&'static str, Failure> {
    Ok(if x > y {
        "descending"
    } else if x == y {
        "diagonal"
    } else {
        let k = fib::level_of(x)?;
        let n = fib::level_of(y)?;
        if k == n {
            "same-level"
        } else if n == k + 1 {
            "adjacent-level"
        } else {
            "level-gap"
        }
    })
}

fn guard_admits_level(level: u32, guard: u64) -> Result<(), Failure> {
    // Same bound a truncation through this level would need.
    TruncatedPoset::with_element_limit(level.max(1), guard)?;
    Ok(())
}

fn cmd_mu(
    from_label: Option<Label>,
    to_label: Option<Label>,
    from: Option<String>,
    to: Option<String>,
    guard: u64,
) -> Result<String, Failure> {
    let (value, x_label, y_label) = match (from_label, to_label, from, to) {
        (Some(x), Some(y), None, None) => {
            if x == 0 || y == 0 {
                return Err(Failure::Usage("labels start at 1".into()));
            }
            guard_admits_level(fib::level_of(x)?.max(fib::level_of(y)?), guard)?;
            (mobius_levels(x, y)?, x, y)
        }
        (None, None, Some(f), Some(t)) => {
            let x = parse_vertex(&f)?;
            let y = parse_vertex(&t)?;
            guard_admits_level(x.level().max(y.level()), guard)?;
            (mobius_coords(&x, &y), x.label(), y.label())
        }
        _ => {
            return Err(Failure::Usage(
                "address the pair with --from-label/--to-label or --from/--to".into(),
            ))
        }
    };
    let case = mu_case(x_label, y_label)?;
    Ok(format!("mu = {value}\ncase = {case}\n"))
}

fn cmd_verify(max_level: u32, guard: u64) -> Result<String, Failure> {
    let report = verify_suite(max_level, guard)?;
    let mut out = String::new();
    for check in &report.checks {
        let status = if check.passed { "ok" } else { "FAILED" };
        writeln!(out, "check {}: {} ({})", check.name, status, check.detail).unwrap();
    }
    if report.all_passed() {
        writeln!(out, "verify N={max_level}: all {} checks passed", report.checks.len()).unwrap();
        Ok(out)
    } else {
        print!("{out}");
        let first = report.first_failure().expect("some check failed");
        Err(Failure::Check(format!("{}: {}", first.name, first.detail)))
    }
}

fn cmd_invert(
    input: &PathBuf,
    max_level: Option<u32>,
    guard: u64,
) -> Result<String, Failure> {
    let text = fs::read_to_string(input)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", input.display())))?;
    let f = PosetFunction::from_json_str(&text, guard)?;
    if let Some(n) = max_level {
        if n != f.poset().max_level() {
            return Err(Failure::Usage(format!(
                "--max-level {n} does not match the file's max_level {}",
                f.poset().max_level()
            )));
        }
    }
    let g = accumulate(&f);
    let reconstructed = reconstruct(&g);
    let roundtrip_exact = reconstructed == f;
    let value = json!({
        "max_level": f.poset().max_level(),
        "g": g.to_json_value(),
        "reconstructed": reconstructed.to_json_value(),
        "roundtrip_exact": roundtrip_exact,
    });
    Ok(format!("{value}\n"))
}

fn cmd_bench(max_level: u32, reps: u32, guard: u64) -> Result<String, Failure> {
    let poset = TruncatedPoset::with_element_limit(max_level, guard)?;
    let report = bench_strategies(&poset, reps)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    Ok(format!("{text}\n"))
}
