use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tower_core::field::is_prime;
use tower_core::fixtures::{operator_fixture, tower_fixture};
use tower_core::fuchsian::FuchsianOperator;
use tower_core::io::{
    fmt_ratfunc, parse_ratfunc, parse_tower_definition, run_experiment, tower_definition_to_json, RunConfig,
};
use tower_core::modular::{modular_limits, supersingular_poly, x0_invariants};
use tower_core::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

#[derive(Parser)]
#[command(name = "tower", version, about = "Recursive towers of curves over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a tower, compute its splitting data and enumerate levels.
    Run(RunArgs),
    /// Print a built-in tower as a JSON definition.
    Export {
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        p: u64,
    },
    /// Differential operators.
    De {
        #[command(subcommand)]
        command: DeCommand,
    },
    /// Supersingular data.
    Ss {
        #[command(subcommand)]
        command: SsCommand,
    },
    /// Modular curves X_0(N).
    Modular {
        #[command(subcommand)]
        command: ModularCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in tower: x0-2m, exaprop or x0-2-3m.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    fixture: Option<String>,
    /// JSON tower definition.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Characteristic, required with --fixture.
    #[arg(long)]
    p: Option<u64>,
    /// Inclusive level range such as 0..3.
    #[arg(long, default_value = "0..3")]
    levels: String,
    /// Extension degree for the levels (default: the minimal splitting degree).
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = tower_core::tower::DEFAULT_ENUMERATION_GUARD)]
    guard: u64,
    #[arg(long, default_value_t = tower_core::tower::DEFAULT_EXT_BOUND)]
    ext_bound: usize,
    #[arg(long, default_value_t = 6)]
    k_max: u32,
    #[arg(long, default_value_t = tower_core::tower::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DeCommand {
    /// Singularities and local exponents.
    Analyze {
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        p: u64,
    },
    /// Pull an operator back along a rational map `[n0,..]/[d0,..]`.
    Pullback {
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        map: String,
    },
}

#[derive(Subcommand)]
enum SsCommand {
    /// Deuring and supersingular polynomials for a range of primes.
    Table {
        #[arg(long, default_value = "5..31")]
        p_range: String,
    },
}

#[derive(Subcommand)]
enum ModularCommand {
    /// Genus of X_0(N).
    Genus { n: u64 },
    /// Index, elliptic points and cusps of X_0(N).
    Invariants { n: u64 },
    /// Genus limit and split bound for level l in characteristic p.
    Limits {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        p: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
    /// Written to stdout before the message, e.g. a report that failed its checks.
    output: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::InvalidCharacteristic { .. }
            | Error::InvalidDegree
            | Error::FieldTooLarge { .. } => EXIT_CONFIG,
            Error::GuardExceeded { .. } | Error::ExtensionBound { .. } => EXIT_GUARD,
            _ => EXIT_INVARIANT,
        };
        Failure { code, message: e.to_string(), output: String::new() }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_CONFIG, message: message.into(), output: String::new() }
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, Failure> {
    let (a, b) = s.split_once("..").ok_or_else(|| config_error(format!("range `{}` must look like a..b", s)))?;
    let a: u64 = a.trim().parse().map_err(|_| config_error(format!("bad range start in `{}`", s)))?;
    let b: u64 =
        b.trim().trim_start_matches('=').parse().map_err(|_| config_error(format!("bad range end in `{}`", s)))?;
    if a > b {
        return Err(config_error(format!("empty range `{}`", s)));
    }
    Ok(a..=b)
}

fn run(args: RunArgs) -> Result<String, Failure> {
    let def = match (&args.fixture, &args.file) {
        (Some(name), _) => {
            let p = args.p.ok_or_else(|| config_error("--p is required with --fixture"))?;
            tower_fixture(name, p)?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_error(format!("cannot read {}: {}", path.display(), e)))?;
            parse_tower_definition(&text).map_err(|e| config_error(format!("{}: {}", path.display(), e)))?
        }
        (None, None) => return Err(config_error("one of --fixture or --file is required")),
    };
    let levels = parse_range(&args.levels)?;
    if args.guard == 0 || args.ext_bound == 0 || args.k_max == 0 {
        return Err(config_error("guards must be positive"));
    }
    let cfg = RunConfig {
        levels: *levels.start() as usize..=*levels.end() as usize,
        k: args.k,
        guard: args.guard,
        ext_bound: args.ext_bound,
        k_max: args.k_max,
        seed: args.seed,
        ..RunConfig::default()
    };
    let report = run_experiment(&def, &cfg)?;
    let text = match args.format {
        Format::Table => report.to_table(),
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    let text = match &args.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| config_error(format!("cannot write {}: {}", path.display(), e)))?;
            format!("report written to {}\n", path.display())
        }
        None => text,
    };
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure { code: EXIT_INVARIANT, message: report.failures.join("\n"), output: text })
    }
}

fn analyze(l: &FuchsianOperator) -> Result<String, Failure> {
    let mut out = String::new();
    let _ = writeln!(out, "operator: {}", l);
    let _ = writeln!(out, "{:<12} {:<24} {:<10}", "place", "exponents", "apparent");
    for d in l.singular_points()? {
        let (e1, e2) = d.exponent_labels();
        let _ = writeln!(out, "{:<12} {:<24} {:<10}", d.place.label(), format!("({}, {})", e1, e2), d.apparent());
    }
    Ok(out)
}

fn ss_table(range: &str) -> Result<String, Failure> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>5} {:>8} {:>6} {:>6} {:>6} {:>8}  supersingular polynomial",
        "p", "deg Phi", "alpha", "delta", "eps", "deg Phi1"
    );
    for p in parse_range(range)?.filter(|&p| p >= 5 && is_prime(p)) {
        let s = supersingular_poly(p)?;
        let _ = writeln!(
            out,
            "{:>5} {:>8} {:>6} {:>6} {:>6} {:>8}  {}",
            p,
            s.phi.degree().unwrap_or(0),
            s.alpha,
            s.delta,
            s.epsilon,
            s.phi1.degree().unwrap_or(0),
            s.phi1.fmt_var("j")
        );
    }
    Ok(out)
}

fn dispatch(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Export { fixture, p } => Ok(tower_definition_to_json(&tower_fixture(&fixture, p)?) + "\n"),
        Command::De { command: DeCommand::Analyze { fixture, p } } => analyze(&operator_fixture(&fixture, p)?),
        Command::De { command: DeCommand::Pullback { fixture, p, map } } => {
            let l = operator_fixture(&fixture, p)?;
            let f = parse_ratfunc(l.field(), &map, "map")?;
            let lf = l.pullback(&f)?;
            Ok(format!("a1 = {}\na2 = {}\n{}\n", fmt_ratfunc(lf.a1()), fmt_ratfunc(lf.a2()), lf.fmt_var("s")))
        }
        Command::Ss { command: SsCommand::Table { p_range } } => ss_table(&p_range),
        Command::Modular { command } => match command {
            ModularCommand::Genus { n } => Ok(format!("{}\n", x0_invariants(n)?.genus)),
            ModularCommand::Invariants { n } => {
                let x = x0_invariants(n)?;
                Ok(format!(
                    "N = {}  mu = {}  nu2 = {}  nu3 = {}  cusps = {}  genus = {}\n",
                    x.n, x.mu, x.nu2, x.nu3, x.nu_inf, x.genus
                ))
            }
            ModularCommand::Limits { level, p } => {
                let m = modular_limits(level, p)?;
                Ok(format!(
                    "mu = {}  genus limit = {}  split bound = {}  ratio = {}  (sqrt(p^2) - 1 = {})\n",
                    m.mu,
                    m.genus_limit,
                    m.split_bound,
                    m.lambda_bound,
                    p - 1
                ))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(text) => {
            print!("{}", text);
            ExitCode::SUCCESS
        }
        Err(f) => {
            print!("{}", f.output);
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
