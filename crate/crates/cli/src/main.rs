use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use towerlim::char_sums::{Family, FIELD_GUARD};

mod cache;
mod commands;
mod config;
mod report;

use commands::{DescentArgs, Mode, ZetaArgs};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    /// Exit 3.
    Invalid(String),
    /// Exit 4.
    Guard(String),
    /// Exit 2.
    Violation(String),
    /// Exit 3.
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 2,
            CliError::Invalid(_) | CliError::Io(_) => 3,
            CliError::Guard(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Guard(m) => write!(f, "guard exceeded: {m}"),
            CliError::Violation(m) => write!(f, "violation: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<towerlim::Error> for CliError {
    fn from(e: towerlim::Error) -> Self {
        use towerlim::Error as E;
        let msg = e.to_string();
        match e {
            E::GuardExceeded(_) => CliError::Guard(msg),
            E::Inconsistency(_) => CliError::Violation(msg),
            E::InvalidInput(_) | E::PrimeMismatch(..) | E::Precondition(_) | E::PrecisionExhausted(_) => {
                CliError::Invalid(msg)
            }
        }
    }
}

#[derive(Parser)]
#[command(name = "towerlim", version, about = "Tower convergence and character-sum experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Levels 1..=n_max of a tower and the congruence between consecutive levels.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "general")]
        mode: Mode,
        /// Overrides `n_max` from the config.
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace and characteristic polynomial congruences for A^{ℓⁿ}.
    Arnold {
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weil polynomials against point counts.
    Zeta {
        #[command(subcommand)]
        family: ZetaCommand,
    },
    /// Descent identities for Jacobi and Gauss sums from F_q to F_{q^ℓ}.
    Coleman {
        #[command(subcommand)]
        which: ColemanCommand,
    },
    /// Root-of-unity sums along the tower.
    Qsum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        v: String,
        /// `a..b` (inclusive) or a single level.
        #[arg(long, default_value = "1..3")]
        n_range: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    ell: u64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    f: u32,
    /// Largest extension degree to count over.
    #[arg(long)]
    m_max: Option<u32>,
    #[arg(long, default_value_t = FIELD_GUARD)]
    field_cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl FamilyArgs {
    fn zeta(&self) -> ZetaArgs {
        ZetaArgs {
            ell: self.ell,
            n: self.n,
            p: self.p,
            f: self.f,
            m_max: self.m_max,
            field_cap: self.field_cap,
        }
    }
}

#[derive(Subcommand)]
enum ZetaCommand {
    /// x^d + y^d + z^d = 0 with d = ℓⁿ.
    Fermat(FamilyArgs),
    /// y^q − y = x^d with d = ℓⁿ.
    As(FamilyArgs),
    /// Y² = X^{2ⁿ} + 1 over F_5.
    Motivating {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m_max: Option<u32>,
        #[arg(long, default_value_t = FIELD_GUARD)]
        field_cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SumArgs {
    #[arg(long)]
    ell: u64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    f: u32,
    #[arg(long, default_value_t = FIELD_GUARD)]
    field_cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SumArgs {
    fn descent(&self) -> DescentArgs {
        DescentArgs {
            ell: self.ell,
            n: self.n,
            p: self.p,
            f: self.f,
            field_cap: self.field_cap,
        }
    }
}

#[derive(Subcommand)]
enum ColemanCommand {
    Jacobi {
        #[command(flatten)]
        sums: SumArgs,
        /// `v1,v2;v1,v2;...`; all unit pairs by default.
        #[arg(long)]
        pairs: Option<String>,
    },
    Gauss {
        #[command(flatten)]
        sums: SumArgs,
        /// `v,v,...`; all units by default.
        #[arg(long)]
        v: Option<String>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Converge {
            config,
            mode,
            n_max,
            out,
        } => commands::converge(&config, mode, n_max, out.as_deref()),
        Command::Arnold { matrix, ell, n, out } => commands::arnold(&matrix, ell, n, out.as_deref()),
        Command::Zeta { family } => match family {
            ZetaCommand::Fermat(a) => commands::zeta_character_family(Family::Fermat, &a.zeta(), a.out.as_deref()),
            ZetaCommand::As(a) => commands::zeta_character_family(Family::ArtinSchreier, &a.zeta(), a.out.as_deref()),
            ZetaCommand::Motivating {
                n,
                m_max,
                field_cap,
                out,
            } => commands::zeta_motivating(n, m_max, field_cap, out.as_deref()),
        },
        Command::Coleman { which } => match which {
            ColemanCommand::Jacobi { sums, pairs } => {
                commands::coleman_jacobi(&sums.descent(), pairs.as_deref(), sums.out.as_deref())
            }
            ColemanCommand::Gauss { sums, v } => {
                commands::coleman_gauss(&sums.descent(), v.as_deref(), sums.out.as_deref())
            }
        },
        Command::Qsum {
            config,
            lambda,
            v,
            n_range,
            out,
        } => commands::qsum(&config, &lambda, &v, &n_range, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("towerlim: {e}");
            ExitCode::from(e.code())
        }
    }
}
