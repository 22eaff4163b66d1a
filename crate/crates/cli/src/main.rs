//! `olhgen`: build, expand, search for and check orthogonal Latin
//! hypercubes from the command line.
//!
//! Exit codes: 0 success, 1 a failed check or construction, 2 when no
//! orthogonal Latin hypercube can exist for the requested run size, 64 for
//! unreadable input or bad arguments.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use olhgen_core::existence::olh_exists;
use olhgen_core::metrics::{correlation, sig6, CorrelationReport};
use olhgen_core::search::{search_olh, SearchConfig, DEFAULT_T1, DEFAULT_T2};
use olhgen_core::seeds::{load_cached, store_cached};
use olhgen_core::stacking::{construct_best, expand, lower_bound_m, Planner, Step};
use olhgen_core::{DesignMatrix, Error, Recipe};

use crate::io::{read_design, to_csv, to_json, Format, Units};

#[derive(Parser)]
#[command(name = "olhgen", version, about = "Orthogonal Latin hypercube designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an orthogonal Latin hypercube with the given run count.
    Construct {
        #[arg(long)]
        n: usize,
        /// Number of columns; defaults to the most the method reaches.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Expansion factor for `--method theorem3`.
        #[arg(long, value_parser = parse_factor)]
        factor: Option<usize>,
        /// With `--method theorem3`, add a centre run.
        #[arg(long)]
        plus_one: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check a design file against a property.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Expect::Olh)]
        expect: Expect,
        /// Units of a CSV input.
        #[arg(long, value_enum, default_value_t = Units::Doubled)]
        units: Units,
    },
    /// Search for a small orthogonal Latin hypercube.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Exchanges per column.
        #[arg(long, default_value_t = DEFAULT_T1)]
        t1: u32,
        /// Full restarts.
        #[arg(long, default_value_t = DEFAULT_T2)]
        t2: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the guaranteed number of orthogonal columns for a run count.
    Bound {
        #[arg(long)]
        n: usize,
    },
    /// Print the correlation metrics of a design file.
    Metrics {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Units::Doubled)]
        units: Units,
    },
    /// Expand an orthogonal Latin hypercube by a factor of 2, 4, 8 or 16.
    Expand {
        file: PathBuf,
        #[arg(long, value_parser = parse_factor)]
        factor: usize,
        #[arg(long)]
        plus_one: bool,
        /// Units of a CSV input.
        #[arg(long, value_enum, default_value_t = Units::Doubled)]
        input_units: Units,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Units::Doubled)]
    units: Units,
    /// Write the design here and print a summary; otherwise the design goes
    /// to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Label the CSV columns f1..fm.
    #[arg(long)]
    header: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// The construction reaching the most columns.
    Auto,
    /// A fold-over block combined with a smaller design.
    Theorem1,
    /// Both halves of the paired construction, for square run counts.
    Prop1,
    /// A smaller design stacked on a shifted Kronecker block.
    Prop2,
    /// Either stacking method.
    Stack,
    /// Expansion of a smaller design by `--factor`.
    Theorem3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Olh,
    Lh,
    Orth,
}

fn parse_factor(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(f @ (2 | 4 | 8 | 16)) => Ok(f),
        _ => Err(format!("factor must be 2, 4, 8 or 16, got '{s}'")),
    }
}

/// How a command failed, mapped onto the exit code.
enum Failure {
    Check(String),
    Impossible(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Impossible(_) => 2,
            Failure::Input(_) => 64,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Impossible(m) | Failure::Input(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoOlhExists(_) => Failure::Impossible(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn cache_dir() -> PathBuf {
    std::env::var_os("OLHGEN_CACHE")
        .map(PathBuf::from)
        .or_else(|| dirs::cache_dir().map(|d| d.join("olhgen")))
        .unwrap_or_else(|| std::env::temp_dir().join("olhgen"))
}

fn report_of(design: &DesignMatrix) -> Result<CorrelationReport, Failure> {
    correlation(design).map_err(Failure::from)
}

fn summary(design: &DesignMatrix, report: &CorrelationReport) -> String {
    let kind = match (design.is_latin_hypercube(), design.is_orthogonal()) {
        (true, true) => "OLH",
        (true, false) => "LH",
        (false, true) => "orthogonal design",
        (false, false) => "design",
    };
    let mut s = format!(
        "{kind}({}, {}) rho_max={} rho_sq={}",
        design.runs(),
        design.factors(),
        sig6(report.rho_max),
        sig6(report.rho_sq)
    );
    if let Some(r) = design.recipe() {
        s.push_str(&format!("\nrecipe: {}", r.summary()));
    }
    s
}

fn emit(design: &DesignMatrix, output: &OutputArgs) -> Outcome {
    let report = report_of(design)?;
    let text = match output.format {
        Format::Csv => to_csv(design, output.units, output.header),
        Format::Json => to_json(design, &report, output.units),
    };
    match &output.out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| Failure::Check(format!("{}: {e}", path.display())))?;
            println!("{}", summary(design, &report));
            println!("wrote {}", path.display());
        }
        None => {
            print!("{text}");
            eprintln!("{}", summary(design, &report));
        }
    }
    Ok(())
}

fn method_accepts(method: Method, step: &Step) -> bool {
    match method {
        Method::Auto => true,
        Method::Theorem1 => matches!(step, Step::Kronecker { .. }),
        Method::Prop1 => matches!(step, Step::Paired { .. }),
        Method::Prop2 => matches!(step, Step::ShiftedStack { .. }),
        Method::Stack => matches!(step, Step::ShiftedStack { .. } | Step::FirstStack { .. }),
        Method::Theorem3 => false,
    }
}

fn construct(n: usize, m: Option<usize>, method: Method, factor: Option<usize>, plus_one: bool) -> Result<DesignMatrix, Failure> {
    if !olh_exists(n) {
        return Err(Error::NoOlhExists(n).into());
    }
    let full = match method {
        Method::Auto => construct_best(n)?,
        Method::Theorem3 => {
            let factor = factor
                .ok_or_else(|| Failure::Input("--method theorem3 needs --factor".into()))?;
            let base = n - usize::from(plus_one);
            if !base.is_multiple_of(factor) || !(base / factor).is_multiple_of(4) {
                return Err(Failure::Check(format!(
                    "{n} runs is not {factor}·n0{} with n0 a multiple of 4",
                    if plus_one { " + 1" } else { "" }
                )));
            }
            expand(&construct_best(base / factor)?, factor, plus_one)?
        }
        _ => {
            let planner = Planner::up_to(n);
            let (reach, step) = planner
                .best_step_where(n, |s| method_accepts(method, s))
                .ok_or_else(|| {
                    Failure::Check(format!("method {method:?} does not apply to {n} runs"))
                })?;
            planner.build_step(n, step, reach)?
        }
    };
    match m {
        None => Ok(full),
        Some(m) if m >= 1 && m <= full.factors() => Ok(full.first_columns(m)?),
        Some(m) => Err(Failure::Check(format!(
            "requested {m} columns but the construction reaches {}",
            full.factors()
        ))),
    }
}

fn cmd_search(n: usize, m: usize, config: SearchConfig, output: &OutputArgs) -> Outcome {
    let recipe = Recipe::Search {
        n,
        m,
        seed: config.seed,
        t1: config.t1,
        t2: config.t2,
    };
    let dir = cache_dir();
    if let Ok(Some(entry)) = load_cached(&dir, n, m, config.seed) {
        return emit(&entry.design.with_recipe(recipe), output);
    }
    let outcome = search_olh(n, m, &config)?;
    if !outcome.complete {
        emit(&outcome.design, output)?;
        return Err(Failure::Check(format!(
            "search reached {} of {m} orthogonal columns",
            outcome.design.factors()
        )));
    }
    if let Err(e) = store_cached(&dir, &outcome.design, config.seed) {
        eprintln!("warning: could not cache the design in {}: {e}", dir.display());
    }
    emit(&outcome.design, output)
}

fn cmd_verify(file: &Path, expect: Expect, units: Units) -> Outcome {
    let design = read_design(file, units).map_err(Failure::Input)?;
    let report = report_of(&design)?;
    println!("{}", summary(&design, &report));
    let (holds, what) = match expect {
        Expect::Olh => (design.is_olh(), "an orthogonal Latin hypercube"),
        Expect::Lh => (design.is_latin_hypercube(), "a Latin hypercube"),
        Expect::Orth => (design.is_orthogonal(), "column-orthogonal"),
    };
    if holds {
        println!("ok: {} is {what}", file.display());
        Ok(())
    } else {
        Err(Failure::Check(format!("{} is not {what}", file.display())))
    }
}

fn cmd_bound(n: usize) -> Outcome {
    if !olh_exists(n) {
        println!("m* = 1");
        return Err(Error::NoOlhExists(n).into());
    }
    println!("m* ≥ {}", lower_bound_m(n));
    let best = construct_best(n)?;
    println!("construction reaches m = {}", best.factors());
    if let Some(r) = best.recipe() {
        println!("recipe: {}", r.summary());
    }
    Ok(())
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Construct {
            n,
            m,
            method,
            factor,
            plus_one,
            output,
        } => emit(&construct(n, m, method, factor, plus_one)?, &output),
        Command::Verify {
            file,
            expect,
            units,
        } => cmd_verify(&file, expect, units),
        Command::Search {
            n,
            m,
            t1,
            t2,
            seed,
            output,
        } => {
            let config = SearchConfig::new(t1, t2, seed).map_err(|e| Failure::Input(e.to_string()))?;
            cmd_search(n, m, config, &output)
        }
        Command::Bound { n } => cmd_bound(n),
        Command::Metrics { file, units } => {
            let design = read_design(&file, units).map_err(Failure::Input)?;
            println!("{}", summary(&design, &report_of(&design)?));
            Ok(())
        }
        Command::Expand {
            file,
            factor,
            plus_one,
            input_units,
            output,
        } => {
            let design = read_design(&file, input_units).map_err(Failure::Input)?;
            emit(&expand(&design, factor, plus_one)?, &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
