mod cache;
mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use commands::{Identity, Status};
use config::{ConfigErrors, Needs, RawOptions};
use output::{Emitter, Format};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "splint",
    version,
    about = "Exact root systems, splints, branching rules and affine characters"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Algebra such as G2, B3 or A1xA2.
    #[arg(long, global = true)]
    algebra: Option<String>,

    /// Catalog splint, either qualified (G2:A2A2) or short with --algebra.
    #[arg(long, global = true)]
    splint: Option<String>,

    /// Highest weight as Dynkin labels, e.g. 1,0.
    #[arg(long, global = true, allow_hyphen_values = true)]
    weight: Option<String>,

    /// Level of the affine module [default: 1].
    #[arg(long, global = true, allow_hyphen_values = true)]
    level: Option<i64>,

    /// Highest grade kept in q-series [default: 4].
    #[arg(long, global = true, allow_hyphen_values = true)]
    grade_max: Option<i64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Directory for cached affine characters.
    #[arg(long, global = true, env = "SPLINT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Also run the independent route and report whether it agrees.
    #[arg(long, global = true)]
    oracle: bool,

    /// More log output on stderr; repeat for more.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cartan matrix, positive roots, ρ and h∨.
    Roots,
    /// List or check splints.
    Splint {
        #[command(subcommand)]
        action: SplintAction,
    },
    /// Injection fan of a splint.
    Fan,
    /// Branch a finite-dimensional module to the splint subalgebra.
    Branch,
    /// Graded branching of an affine module to the horizontal algebra or a splint subalgebra.
    AffineBranch,
    /// String functions of an affine module.
    Strings {
        #[arg(long, value_enum)]
        emit: Option<Emit>,
    },
    /// q-dimension of an affine module.
    Qdim,
    /// Check the affine denominator and theta identities of splints.
    Verify {
        #[arg(long, value_enum, default_value_t = Identity::All)]
        identity: Identity,
        /// TOML file of splints to check instead of the catalog.
        #[arg(long)]
        splint_file: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SplintAction {
    /// Catalog splints, optionally filtered by --algebra.
    List,
    /// Verify splint axioms and probe splint branching.
    Check {
        /// TOML file of splints to check instead of the catalog.
        #[arg(long)]
        splint_file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// Multiplicity matrix, its inverse and the recovered branching functions.
    Matrix,
}

fn needs(cmd: &Command) -> Needs {
    let affine = Needs {
        algebra: true,
        weight: true,
        level: true,
        simple: true,
        ..Needs::default()
    };
    match cmd {
        Command::Roots => Needs {
            algebra: true,
            ..Needs::default()
        },
        Command::Splint { .. } | Command::Verify { .. } => Needs::default(),
        Command::Fan => Needs {
            splint: true,
            ..Needs::default()
        },
        Command::Branch => Needs {
            splint: true,
            weight: true,
            ..Needs::default()
        },
        Command::AffineBranch | Command::Strings { .. } | Command::Qdim => affine,
    }
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let g = cli.global;
    let raw = RawOptions {
        algebra: g.algebra,
        splint: g.splint,
        weight: g.weight,
        level: g.level,
        grade_max: g.grade_max,
        format: g.format,
        cache_dir: g.cache_dir,
        no_cache: g.no_cache,
        oracle: g.oracle,
    };
    let resolved = config::resolve(&raw, needs(&cli.command));
    let mut problems = match &resolved {
        Ok(_) => Vec::new(),
        Err(e) => e.0.clone(),
    };
    if let Command::Verify {
        splint_file: None, ..
    } = &cli.command
    {
        if raw.splint.is_none() && raw.algebra.is_none() {
            problems.push("verify needs --splint, --algebra or --splint-file".into());
        }
    }
    if !problems.is_empty() {
        return Err(ConfigErrors(problems).into());
    }
    let cfg = resolved?;
    let mut out = Emitter::new(cfg.format);
    match &cli.command {
        Command::Roots => commands::roots(&cfg, &mut out),
        Command::Splint {
            action: SplintAction::List,
        } => commands::splint_list(&cfg, &mut out),
        Command::Splint {
            action: SplintAction::Check { splint_file },
        } => commands::splint_check(&cfg, splint_file.as_deref(), &mut out),
        Command::Fan => commands::fan(&cfg, &mut out),
        Command::Branch => commands::branch(&cfg, &mut out),
        Command::AffineBranch => commands::affine_branch(&cfg, &mut out),
        Command::Strings { emit } => commands::strings(&cfg, emit.is_some(), &mut out),
        Command::Qdim => commands::qdim(&cfg, &mut out),
        Command::Verify {
            identity,
            splint_file,
        } => commands::verify(&cfg, *identity, splint_file.as_deref(), &mut out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(EXIT_MISMATCH),
        Err(e) => {
            if let Some(c) = e.downcast_ref::<ConfigErrors>() {
                eprint!("{c}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(EXIT_USAGE)
        }
    }
}
