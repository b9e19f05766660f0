use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use strutforge::basis::BasisSpec;
use strutforge::{Limits, Mode, DEFAULT_PRIMES};
use strutforge_cli::commands::{self, SpaceKind};
use strutforge_cli::Cache;

#[derive(Parser)]
#[command(name = "strutforge", version, about = "Tree-diagram quotient dimensions for link homotopy and concordance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact diagram and relation counts u(n,k), r(n,k) and their ratio.
    Count {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Quotient dimension of one diagram space.
    Dim {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        run: RunOpts,
        /// Recompute even when a cached record exists.
        #[arg(long)]
        no_cache: bool,
    },
    /// Quotient dimensions over a grid of k and n (or degree), written as CSV.
    Sweep {
        #[arg(long, value_enum, default_value_t = ModeArg::Homotopy)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = SpaceArg::Y)]
        space: SpaceArg,
        /// Inclusive range such as `3..5`, `3-5` or `3,4,5`.
        #[arg(long)]
        k_range: String,
        #[arg(long, conflicts_with = "degree_range")]
        n_range: Option<String>,
        #[arg(long)]
        degree_range: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Functionals on the basis that vanish on every relation, as JSON.
    Witness {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        run: RunOpts,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lists relation rows with their provenance.
    Relations {
        /// Print every row (the only supported action).
        #[arg(long, required = true)]
        dump: bool,
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        run: RunOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Homotopy,
    Concordance,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Homotopy => Mode::Homotopy,
            ModeArg::Concordance => Mode::Concordance,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Y,
    Full,
}

impl From<SpaceArg> for SpaceKind {
    fn from(s: SpaceArg) -> SpaceKind {
        match s {
            SpaceArg::Y => SpaceKind::Y,
            SpaceArg::Full => SpaceKind::Full,
        }
    }
}

#[derive(Args)]
struct Target {
    #[arg(long, value_enum, default_value_t = ModeArg::Homotopy)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = SpaceArg::Y)]
    space: SpaceArg,
    #[arg(long)]
    k: u8,
    /// Number of struts accompanying the Y (space y).
    #[arg(long, conflicts_with = "degree")]
    n: Option<usize>,
    /// Total degree (space full).
    #[arg(long)]
    degree: Option<usize>,
}

impl Target {
    fn spec(&self) -> Result<BasisSpec> {
        let kind = SpaceKind::from(self.space);
        let param = match (kind, self.n, self.degree) {
            (SpaceKind::Y, Some(n), None) => n,
            (SpaceKind::Full, None, Some(d)) => d,
            (SpaceKind::Y, _, _) => bail!("space y takes --n"),
            (SpaceKind::Full, _, _) => bail!("space full takes --degree"),
        };
        Ok(BasisSpec { mode: self.mode.into(), k: self.k, space: kind.with_param(param) })
    }
}

#[derive(Args)]
struct RunOpts {
    /// Primes for modular rank, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PRIMES)]
    primes: Vec<u64>,
    /// Cache directory; falls back to STRUTFORGE_CACHE_DIR, then ./cache.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = Limits::default().max_basis)]
    max_basis: usize,
    #[arg(long, default_value_t = Limits::default().max_relations)]
    max_relations: usize,
}

impl RunOpts {
    fn limits(&self) -> Limits {
        Limits { max_basis: self.max_basis, max_relations: self.max_relations }
    }

    fn cache(&self) -> Result<Cache> {
        Cache::open(&Cache::resolve_dir(self.cache_dir.as_deref()))
    }
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Count { k, n, format } => match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&commands::count_json(k, n)?)?)?,
            Format::Table => write!(out, "{}", commands::count_table(k, n)?)?,
        },
        Command::Dim { target, run, no_cache } => {
            let cache = if no_cache { None } else { Some(run.cache()?) };
            let (rec, _) = commands::dim(target.spec()?, &run.primes, run.limits(), cache.as_ref())?;
            writeln!(out, "{}", serde_json::to_string_pretty(&rec)?)?;
        }
        Command::Sweep { mode, space, k_range, n_range, degree_range, out: path, run } => {
            let kind = SpaceKind::from(space);
            let params = match (kind, n_range, degree_range) {
                (SpaceKind::Y, Some(r), None) | (SpaceKind::Full, None, Some(r)) => commands::parse_range(&r)?,
                (SpaceKind::Y, _, _) => bail!("space y takes --n-range"),
                (SpaceKind::Full, _, _) => bail!("space full takes --degree-range"),
            };
            let ks = commands::parse_range(&k_range)?;
            let cache = run.cache()?;
            let summary = commands::sweep(
                mode.into(),
                kind,
                &ks,
                &params,
                &run.primes,
                run.limits(),
                Some(&cache),
                &path,
                &mut io::stderr(),
            )?;
            eprintln!(
                "wrote {}: {} computed, {} cached, {} failed",
                path.display(),
                summary.computed,
                summary.cached,
                summary.failed
            );
        }
        Command::Witness { target, run, out: path } => {
            let witness = commands::witness(target.spec()?, &run.primes, run.limits())?;
            let text = serde_json::to_string(&witness)?;
            match path {
                Some(p) => fs::write(&p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
                None => writeln!(out, "{text}")?,
            }
        }
        Command::Relations { dump: _, target, run } => {
            commands::dump_relations(target.spec()?, run.limits(), &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
