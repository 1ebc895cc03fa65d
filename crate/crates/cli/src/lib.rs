//! Command-line front end for `adolink`.
//!
//! [`run`] holds the whole program so integration tests can drive it without
//! spawning a process; the binary only forwards its arguments and exit code.

mod report;
pub mod table;

use std::ffi::OsString;
use std::io::Write;

use adolink::suite::{run_suite, SuiteConfig};
use adolink::{
    assemble_report, cut_records, modified_dim, parse_braid, s_prime_formula, ColoredLink, Error,
    HighestWeight, RootContext, Scalar,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{ComplexJson, InvariantJson};

/// Exit status for malformed input and library errors other than disagreement.
pub const EXIT_INPUT: i32 = 1;
/// Exit status when cut values disagree.
pub const EXIT_DISAGREEMENT: i32 = 2;
/// Exit status when a `verify` check fails.
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "adolink",
    version,
    about = "Renormalized quantum invariants of colored braid closures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Args)]
struct Common {
    /// Absolute tolerance.
    #[arg(long = "eps-abs", env = "ADO_EPS_ABS", default_value_t = adolink::qscalar::DEFAULT_EPS_ABS)]
    eps_abs: f64,
    /// Relative tolerance.
    #[arg(long = "eps-rel", default_value_t = adolink::qscalar::DEFAULT_EPS_REL)]
    eps_rel: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate F' on the closure of a colored braid.
    Invariant {
        #[arg(long = "N")]
        n: usize,
        /// Braid word, e.g. "3: 1 -2 1".
        #[arg(long, allow_hyphen_values = true)]
        braid: String,
        /// One highest weight per component, comma separated, ordered by smallest strand.
        #[arg(long, allow_hyphen_values = true)]
        colors: String,
        /// Scale the product at this strand before the agreement check.
        #[arg(long, hide = true)]
        perturb_cut: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the randomized verification suite.
    Verify {
        /// Comma separated orders.
        #[arg(long = "N", default_value = "2,3")]
        n: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, hide = true)]
        corrupt_relations: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate S'(λ, λ') and d(λ) over a grid of weights.
    Table {
        #[arg(long = "N")]
        n: usize,
        /// Explicit weights, comma separated.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
        lambdas: Option<String>,
        /// Real grid "start:stop:step", endpoints included.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        /// Weights for the λ' axis; defaults to the λ grid.
        #[arg(long = "lambda-primes", allow_hyphen_values = true)]
        lambda_primes: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Closed form S'(λ, λ').
    Sprime {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long = "lambda-prime", allow_hyphen_values = true)]
        lambda_prime: String,
        #[command(flatten)]
        common: Common,
    },
    /// Modified dimension d(λ).
    Mdim {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Invariant { common, .. }
            | Command::Verify { common, .. }
            | Command::Table { common, .. }
            | Command::Sprime { common, .. }
            | Command::Mdim { common, .. } => common,
        }
    }
}

/// Failure of a command, mapped onto an exit status.
#[derive(Debug)]
enum Failure {
    Library(Error),
    Io(String),
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parse a weight such as `0.5`, `2i` or `-1.5+0.25i`.
pub fn parse_weight(text: &str) -> Result<HighestWeight, Error> {
    let t = text.trim();
    let z: Scalar = t
        .parse()
        .map_err(|_| Error::Parse(format!("invalid complex weight {t:?}")))?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Parse(format!("non-finite weight {t:?}")));
    }
    Ok(HighestWeight(z))
}

/// Parse a comma separated list of weights.
pub fn parse_weights(text: &str) -> Result<Vec<HighestWeight>, Error> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_weight).collect()
}

fn parse_orders(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("invalid order {:?}", t.trim())))
        })
        .collect()
}

/// Run the program on `args` (including the program name) and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    let format = cli.command.common().format;
    match dispatch(&cli.command, out) {
        Ok(()) => 0,
        Err(Failure::ChecksFailed) => EXIT_CHECK_FAILED,
        Err(Failure::Io(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
        Err(Failure::Library(e)) => {
            let _ = report::write_error(err, format, &e);
            match e {
                Error::Disagreement { .. } => EXIT_DISAGREEMENT,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn context(n: usize, common: &Common) -> Result<RootContext, Error> {
    RootContext::with_tolerances(n, common.eps_abs, common.eps_rel)
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Invariant {
            n,
            braid,
            colors,
            perturb_cut,
            common,
        } => {
            let ctx = context(*n, common)?;
            let word = parse_braid(braid)?;
            let link = ColoredLink::new(word, parse_weights(colors)?)?;
            let mut cuts = cut_records(&ctx, &link)?;
            if let Some(s) = perturb_cut {
                let cut = cuts.get_mut(*s).ok_or_else(|| {
                    Error::Parse(format!("strand {s} out of range for the perturbation hook"))
                })?;
                cut.product *= 1.0 + 1e-3;
            }
            let result = assemble_report(&ctx, &link, cuts)?;
            report::write_invariant(out, common.format, &ctx, &link, &result)
        }
        Command::Verify {
            n,
            seed,
            corrupt_relations,
            common,
        } => {
            let config = SuiteConfig {
                orders: parse_orders(n)?,
                seed: *seed,
                eps_abs: common.eps_abs,
                eps_rel: common.eps_rel,
                corrupt_relations: *corrupt_relations,
            };
            let suite = run_suite(&config)?;
            report::write_suite(out, common.format, &config, &suite)?;
            if suite.passed() {
                Ok(())
            } else {
                Err(Failure::ChecksFailed)
            }
        }
        Command::Table {
            n,
            lambdas,
            range,
            lambda_primes,
            common,
        } => {
            let ctx = context(*n, common)?;
            let grid = match (lambdas, range) {
                (Some(list), None) => parse_weights(list)?,
                (None, Some(r)) => table::parse_range(r)?,
                _ => return Err(Error::Parse("table needs --lambdas or --range".into()).into()),
            };
            let primes = match lambda_primes {
                Some(list) => parse_weights(list)?,
                None => grid.clone(),
            };
            let rows = table::build(&ctx, &grid, &primes)?;
            table::write(out, common.format, &rows)
        }
        Command::Sprime {
            n,
            lambda,
            lambda_prime,
            common,
        } => {
            let ctx = context(*n, common)?;
            let a = parse_weight(lambda)?;
            let b = parse_weight(lambda_prime)?;
            let value = s_prime_formula(&ctx, a, b)?;
            report::write_scalar(
                out,
                common.format,
                "s_prime",
                n,
                &[("lambda", a), ("lambda_prime", b)],
                value,
            )
        }
        Command::Mdim { n, lambda, common } => {
            let ctx = context(*n, common)?;
            let a = parse_weight(lambda)?;
            let value = modified_dim(&ctx, a)?;
            report::write_scalar(
                out,
                common.format,
                "modified_dim",
                n,
                &[("lambda", a)],
                value,
            )
        }
    }
}
