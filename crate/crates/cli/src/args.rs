use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sgo",
    version,
    about = "Exact polynomial optimization over regular grids on the simplex"
)]
pub struct Cli {
    /// Worker threads (default: one per core). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output format (default: csv, or json for stable-set).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Disable the grid-size guard (SGO_MAX_GRID, default 10^8 points).
    #[arg(long, global = true)]
    pub force: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum of f over the grid Δ(n,r), with tied minimizers.
    GridMin(GridArgs),
    /// Maximum of f over the grid Δ(n,r).
    GridMax(GridArgs),
    /// E[f(X/r)] for X multivariate hypergeometric (or multinomial with --bernstein).
    Expect(ExpectArgs),
    /// Table of convergence-bound coefficients.
    Bounds(BoundsArgs),
    /// Grid values, certified ρ intervals and bound coefficients over a range of r.
    Converge(ConvergeArgs),
    /// Run the identity sweeps and bound witnesses; exit 4 on any failure.
    Verify(VerifyArgs),
    /// Lower bound on the stability number of a graph.
    StableSet(StableSetArgs),
    /// Bernstein enclosures of the minimum and maximum of f on the simplex.
    Enclose(EncloseArgs),
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    /// Polynomial file (JSON: {"n", "terms": [{"alpha", "coef"}], "degree"?}).
    #[arg(long)]
    pub poly: PathBuf,

    /// Accept inhomogeneous input by multiplying lower-degree terms by powers of Σxᵢ.
    #[arg(long)]
    pub homogenize: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub poly: PolyArgs,

    /// Grid denominator(s): `16`, `1..10`, `2,4,8`.
    #[arg(long, value_parser = parse_list)]
    pub r: UintList,

    /// Maximum number of tied minimizers listed.
    #[arg(long, default_value_t = sgo_core::grid::DEFAULT_TIE_CAP)]
    pub tie_cap: usize,
}

#[derive(Debug, Args)]
pub struct ExpectArgs {
    #[command(flatten)]
    pub poly: PolyArgs,

    /// Number of draws (list or range allowed).
    #[arg(long, value_parser = parse_list)]
    pub r: UintList,

    /// Urn size; defaults to the sum of --counts.
    #[arg(long)]
    pub m: Option<u64>,

    /// Balls of each colour, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub counts: Vec<u64>,

    /// Draw with replacement (Bernstein approximation at x = counts/m).
    #[arg(long)]
    pub bernstein: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Polynomial degree.
    #[arg(long)]
    pub d: u32,

    #[arg(long, value_parser = parse_list)]
    pub r: UintList,

    /// Denominator(s) of a minimizer, for the refined kinds.
    #[arg(long, value_parser = parse_list)]
    pub m: Option<UintList>,

    /// Restrict to these kinds (comma separated tags).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,

    /// Also list kinds that do not apply, with the reason.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub poly: PolyArgs,

    #[arg(long, value_parser = parse_list)]
    pub r: UintList,

    /// Denominator of a minimizer, for the refined kinds.
    #[arg(long)]
    pub m: Option<u32>,

    /// Degree elevation for the Bernstein enclosures.
    #[arg(long, default_value_t = 2)]
    pub elevation: u32,

    /// Exact minimum of f on the simplex, if known (checked against the enclosure).
    #[arg(long)]
    pub known_min: Option<String>,

    /// Exact maximum of f on the simplex, if known (checked against the enclosure).
    #[arg(long)]
    pub known_max: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Restrict to these checks: identity tags and/or BOUNDS.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,

    /// Largest degree d in the identity sweeps.
    #[arg(long)]
    pub max_d: Option<u32>,

    /// Largest r in the Stirling sum sweep.
    #[arg(long)]
    pub max_r: Option<u64>,

    /// Largest urn size m (A_β sweeps, SIGMA, PHI, bound witnesses).
    #[arg(long)]
    pub max_m: Option<u64>,

    /// Largest multiple index k (SIGMA, PHI).
    #[arg(long)]
    pub max_k: Option<u64>,

    /// Bound on k, m and r for the KMR sweep.
    #[arg(long)]
    pub kmr_max: Option<u64>,

    /// Random points for the Vandermonde–Chu and multinomial checks.
    #[arg(long)]
    pub points: Option<usize>,

    /// Random polynomials for the bound witnesses.
    #[arg(long, default_value_t = 100)]
    pub polys: usize,

    #[arg(long, default_value_t = 4)]
    pub poly_max_n: usize,

    #[arg(long, default_value_t = 3)]
    pub poly_max_d: u32,

    /// Coefficients of the random polynomials lie in [-coef, coef].
    #[arg(long, default_value_t = 9)]
    pub coef: i64,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Degree elevation for the range bound used by the witnesses.
    #[arg(long, default_value_t = 2)]
    pub elevation: u32,

    /// Append a deliberately false check (harness self-test).
    #[arg(long)]
    pub inject_fault: bool,

    /// Print only failing checks.
    #[arg(long)]
    pub failures_only: bool,
}

#[derive(Debug, Args)]
pub struct StableSetArgs {
    /// Edge list, one `u v` pair per line (1-indexed); DIMACS headers allowed.
    #[arg(long)]
    pub graph: PathBuf,

    #[arg(long, value_parser = parse_list)]
    pub r: UintList,
}

#[derive(Debug, Args)]
pub struct EncloseArgs {
    #[command(flatten)]
    pub poly: PolyArgs,

    /// Largest degree elevation; one row per elevation 0..=K.
    #[arg(long, default_value_t = 4)]
    pub elevation: u32,

    /// Grids whose extrema tighten the inner sides of the enclosures.
    #[arg(long, value_parser = parse_list)]
    pub r: Option<UintList>,
}

/// Nonempty list of positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UintList(pub Vec<u32>);

/// Parses `7`, `1..10` (inclusive) or comma-separated mixtures of both.
pub fn parse_list(s: &str) -> Result<UintList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("invalid integer {t:?} in {s:?}"))
        };
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    if out.contains(&0) {
        return Err("values must be >= 1".to_string());
    }
    Ok(UintList(out))
}
