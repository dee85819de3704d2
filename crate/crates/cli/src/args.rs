use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_DMAX: u32 = 10;

#[derive(Debug, Parser)]
#[command(name = "gw", version, about = "Exact Gromov-Witten invariants of the plane and the identities behind them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Genus-zero invariants from the WDVV equation.
    Rational(RationalArgs),
    /// Genus-one invariants by one or all of the three routes.
    Elliptic(EllipticArgs),
    /// Run verification checks; prints one PASS/FAIL line per check.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Highest degree to compute.
    #[arg(long = "dmax", default_value_t = DEFAULT_DMAX, value_parser = clap::value_parser!(u32).range(1..))]
    pub d_max: u32,

    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// JSON cache of rational invariants, read if present and extended when needed.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RationalArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct EllipticArgs {
    #[arg(long, value_enum, default_value_t = RouteArg::All)]
    pub route: RouteArg,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = Target::All)]
    pub target: Target,

    #[arg(long = "dmax", default_value_t = DEFAULT_DMAX, value_parser = clap::value_parser!(u32).range(1..))]
    pub d_max: u32,

    /// Random points for the identity check.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,

    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Ehx,
    Integral,
    Pde,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Wdvv,
    Pde,
    Identity,
    Strata,
    All,
}
