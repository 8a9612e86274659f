//! `topos-lsc`: analyses of local state classifiers, group normalizers and
//! regular languages, plus the verification suites.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! malformed input, 3 when an enumeration exceeds the budget.

mod analyze;
mod error;
mod input;
mod report;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use topos_core::fincat::DEFAULT_BUDGET;
use topos_core::words::regex_to_min_dfa;

use crate::analyze::Language;
use crate::error::CliError;
use crate::input::Fixtures;
use crate::report::Report;

#[derive(Parser)]
#[command(name = "topos-lsc", version, about = "Local state classifiers for finite presheaf topoi")]
struct Cli {
    /// Cap on representable sizes, congruence counts and monoid sizes.
    #[arg(long, global = true, env = "TOPOS_LSC_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Ξ, its action, meet tables and ξ_Ξ for a category file.
    Lsc {
        file: PathBuf,
        /// Filter document to validate and certify.
        #[arg(long)]
        filter: Option<PathBuf>,
    },
    /// Subgroup lattice and normalization arrows for a group file.
    Group { file: PathBuf },
    /// Nerode and syntactic congruences of a regular language.
    #[command(group(ArgGroup::new("language").required(true).args(["regex", "dfa"])))]
    Words {
        #[arg(long)]
        regex: Option<String>,
        #[arg(long)]
        dfa: Option<PathBuf>,
        /// Symbols, one character each; required with --regex.
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Runs the invariant suites on bundled and user fixtures.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        /// Directory of extra fixtures.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let cap = cli.budget;
    match &cli.command {
        Command::Lsc { file, filter } => {
            let site = input::load_category(file)?;
            let filter = filter.as_deref().map(input::load_filter).transpose()?;
            analyze::lsc(&input::stem(file), site, filter.as_ref(), cap)
        }
        Command::Group { file } => analyze::group(&input::load_group(file)?, cap),
        Command::Words { regex, dfa, alphabet } => {
            let lang = match (regex, dfa) {
                (Some(src), _) => {
                    let symbols = alphabet
                        .as_deref()
                        .ok_or_else(|| CliError::Input("--regex needs --alphabet".into()))?;
                    let (alphabet, regex) = input::compile_regex(src, symbols)?;
                    let dfa = regex_to_min_dfa(&regex, &alphabet);
                    Language::Regex {
                        source: src.clone(),
                        regex,
                        dfa,
                    }
                }
                (None, Some(path)) => {
                    let d = input::load_dfa(path)?;
                    if let Some(symbols) = alphabet {
                        if d.alphabet().to_string() != *symbols {
                            return Err(CliError::input(
                                path.display(),
                                format!("alphabet `{}` differs from --alphabet `{symbols}`", d.alphabet()),
                            ));
                        }
                    }
                    Language::Dfa(d)
                }
                (None, None) => unreachable!("clap requires one of --regex, --dfa"),
            };
            analyze::words(&lang, cap)
        }
        Command::Verify { suite, fixtures } => {
            let user = match fixtures {
                Some(dir) => Fixtures::load(dir)?,
                None => Fixtures::default(),
            };
            verify::run(*suite, &user, cap)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not errors
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Human => report.human(),
                Format::Machine => report.machine(),
            };
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("topos-lsc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
