//! Command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning                                                         |
//! |------|-----------------------------------------------------------------|
//! | 0    | success (also `--help` / `--version`)                           |
//! | 1    | internal error (a consistency check failed)                     |
//! | 2    | usage error: unknown flag, malformed value, `n` out of range    |
//! | 3    | field out of scope: unsupported or non-squarefree `d`, wrong discriminant case |
//! | 4    | no closed form (even or too small `k` for an L-value)           |
//!
//! Data goes to stdout; diagnostics go to stderr.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bruinier::{self, SUPPORTED_FIELDS};
use crate::characters::QuadChar;
use crate::covolumes::{covolume, vol_numeric, DiscCase, Lattice};
use crate::error::Error;
use crate::report::{self, OutputFormat};
use crate::special_values::{l_numeric, l_odd_exact, DEFAULT_TERMS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FIELD: i32 = 3;
pub const EXIT_NO_CLOSED_FORM: i32 = 4;

/// Environment variable consulted for the default `--format`.
pub const FORMAT_ENV: &str = "HERMFREE_FORMAT";

#[derive(Debug, Parser)]
#[command(
    name = "hermfree",
    version,
    about = "Exact covolumes, Bruinier invariants and freeness verdicts for hermitian modular groups"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format: text, json or csv.
    #[arg(long, global = true, env = FORMAT_ENV, default_value = "text", value_parser = parse_format)]
    format: OutputFormat,
    /// Significant digits for decimal approximations.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=1000))]
    digits: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bruinier invariant K and freeness verdict for one (d, n).
    Kvalue {
        #[arg(long)]
        d: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        /// Also require K ≡ n + 1 (mod 6) when d = 3.
        #[arg(long)]
        congruence: bool,
    },
    /// Exact value of L(k, χ) for the field ℚ(√−d), k odd.
    Lvalue {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k: u32,
        /// Compare against a truncated Dirichlet series.
        #[arg(long)]
        verify: bool,
        /// Number of series terms used by --verify.
        #[arg(long, default_value_t = DEFAULT_TERMS, value_parser = clap::value_parser!(u64).range(1..))]
        terms: u64,
    },
    /// Exact covolume of U(L_n) or U(M_n).
    Vol {
        #[arg(long, value_enum)]
        lattice: LatticeArg,
        #[arg(long)]
        d: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Discriminant case; defaults to the one determined by d.
        #[arg(long, value_enum)]
        disc_case: Option<CaseArg>,
        /// Compare against truncated Dirichlet series.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_TERMS, value_parser = clap::value_parser!(u64).range(1..))]
        terms: u64,
    },
    /// Verdict table over several fields and ranks.
    Table {
        /// Comma-separated list of d, or "all".
        #[arg(long, default_value = "all")]
        d_list: String,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(2..))]
        n_max: u32,
        #[arg(long)]
        congruence: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LatticeArg {
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "M", alias = "m")]
    M,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CaseArg {
    /// D = −d (d ≡ 3 mod 4)
    #[value(name = "minus-d")]
    MinusD,
    /// D = −4d (d ≡ 1, 2 mod 4)
    #[value(name = "minus-four-d")]
    MinusFourD,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Maps a library error to the documented exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnsupportedField(_)
        | Error::NotSquarefree(_)
        | Error::InvalidDiscriminant(_)
        | Error::DiscCaseMismatch { .. } => EXIT_FIELD,
        Error::NoClosedForm(_) => EXIT_NO_CLOSED_FORM,
        Error::DimensionTooSmall(_) | Error::InvalidRank(_) | Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn parse_d_list(s: &str) -> Result<Vec<u64>, Error> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(SUPPORTED_FIELDS.to_vec());
    }
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad entry {part:?} in --d-list")))
        })
        .collect()
}

fn execute(cli: Cli) -> Result<String, Error> {
    let Common { format, digits } = cli.common;
    match cli.command {
        Command::Kvalue { d, n, congruence } => {
            let r = bruinier::verdict(d, n, congruence)?;
            Ok(report::render_report(&r, format, digits))
        }
        Command::Lvalue {
            d,
            k,
            verify,
            terms,
        } => {
            let chi = QuadChar::for_field(d)?;
            let l = l_odd_exact(k, &chi)?;
            let oracle = verify.then(|| l_numeric(k, &chi, terms));
            let rec = report::lvalue_record(d, &l, digits, oracle.as_ref());
            Ok(report::render_lvalue(&rec, format))
        }
        Command::Vol {
            lattice,
            d,
            n,
            disc_case,
            verify,
            terms,
        } => {
            let lattice = match lattice {
                LatticeArg::L => Lattice::L,
                LatticeArg::M => Lattice::M,
            };
            let case = match disc_case {
                Some(CaseArg::MinusD) => DiscCase::MinusD,
                Some(CaseArg::MinusFourD) => DiscCase::MinusFourD,
                None => DiscCase::for_field(d),
            };
            let c = covolume(lattice, n, d, case)?;
            let check = verify.then(|| vol_numeric(&c, terms));
            let rec = report::covolume_record(&c, digits, check.as_ref().map(|chk| (terms, chk)));
            Ok(report::render_covolume(&rec, format))
        }
        Command::Table {
            d_list,
            n_max,
            congruence,
        } => {
            let ds = parse_d_list(&d_list)?;
            let t = bruinier::sweep(&ds, n_max, congruence)?;
            Ok(report::render_table(&t, format, digits))
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli) {
        Ok(out) => match stdout.write_all(out.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "hermfree: cannot write output: {e}");
                EXIT_INTERNAL
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "hermfree: {e}");
            exit_code(&e)
        }
    }
}
