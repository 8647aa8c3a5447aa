//! `riordan`: batch front-end for series, Riordan groups, their finite
//! quotients and index-subgroup dimensions.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use riordan::series::CoeffRing;

#[derive(Parser)]
#[command(name = "riordan", version, about = "Riordan groups over F_p and Z", propagate_version = true)]
struct Cli {
    /// Aligned, human-readable output instead of CSV / key=value.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
pub struct SeriesOpts {
    /// `Fp:<p>` or `Z`; needed when series are given as coefficient lists.
    #[arg(long)]
    ring: Option<CoeffRing>,
    /// Highest kept degree; lists are padded with zeros.
    #[arg(long)]
    trunc: Option<usize>,
}

#[derive(Args)]
pub struct QuotientOpts {
    #[arg(long)]
    p: u64,
    /// Level n of the quotient R(F_p)/R^n.
    #[arg(long)]
    level: usize,
}

#[derive(Args)]
pub struct PairOpts {
    #[arg(long)]
    p: u64,
    /// Index set I, e.g. `3N`, `9N | 3N-1`, `{1,4} | >=7`, or a literal.
    #[arg(long = "i-set")]
    i_set: String,
    /// Index set J, same syntax as I.
    #[arg(long = "j-set")]
    j_set: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Product of two series.
    SeriesMul {
        #[command(flatten)]
        opts: SeriesOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Multiplicative inverse of a series with constant term 1.
    SeriesInv {
        #[command(flatten)]
        opts: SeriesOpts,
        #[arg(long)]
        f: String,
    },
    /// Substitution f(g), with g(0) = 0.
    SeriesCompose {
        #[command(flatten)]
        opts: SeriesOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Compositional inverse of g = x + b_2 x^2 + ...
    SeriesCompinv {
        #[command(flatten)]
        opts: SeriesOpts,
        #[arg(long)]
        g: String,
    },
    /// Product of two Riordan elements, each `<h>/<g>` or a riordan literal.
    RiordanMul {
        #[command(flatten)]
        opts: SeriesOpts,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Inverse of a Riordan element.
    RiordanInv {
        #[command(flatten)]
        opts: SeriesOpts,
        #[arg(long)]
        a: String,
    },
    /// The m x m corner of a Riordan array, as CSV.
    RiordanArray {
        #[command(flatten)]
        opts: SeriesOpts,
        /// Element `<h>/<g>` or riordan literal.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        a: Option<String>,
        /// `pascal`: h = 1/(1-x), g = x/(1-x).
        #[arg(long)]
        preset: Option<String>,
        /// Shorthand for `--ring Fp:<p>`.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        m: usize,
    },
    /// Brute-force lower central series against the closed formula (p > 2).
    LcsVerify {
        #[command(flatten)]
        q: QuotientOpts,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Widths log_p |γ_i / γ_{i+1}| with boundary flags.
    Width {
        #[command(flatten)]
        q: QuotientOpts,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Whether given elements generate the quotient. Defaults to (1+x, x) plus
    /// the first Nottingham generating pair.
    GensCheck {
        #[command(flatten)]
        q: QuotientOpts,
        /// Generator `<h>/<g>` or riordan literal; repeatable.
        #[arg(long = "gen")]
        gens: Vec<String>,
        /// With the default set, leave out the Nottingham pair.
        #[arg(long)]
        no_pair: bool,
    },
    /// Twists of 1 + x generate the image of H^m.
    HmCheck {
        #[command(flatten)]
        q: QuotientOpts,
        #[arg(long)]
        m: usize,
    },
    /// Projection from level n+1 to level n is a surjective homomorphism.
    TowerCheck {
        #[command(flatten)]
        q: QuotientOpts,
        /// Number of random pairs; exhaustive when omitted.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// [G_i, G_j] ⊆ G_{i+j} for G_n = H^{σ(n)} ⋊ N^n; all i + j < level by default.
    SigmaCheck {
        #[command(flatten)]
        q: QuotientOpts,
        #[arg(long, default_value = "identity")]
        filtration: String,
        #[arg(long, requires = "j")]
        i: Option<usize>,
        #[arg(long, requires = "i")]
        j: Option<usize>,
    },
    /// Admissibility of (I, J) up to a bound, with an optional sampled cross-check.
    Admissible {
        #[command(flatten)]
        pair: PairOpts,
        #[arg(long, default_value_t = riordan::index::DEFAULT_BOUND)]
        bound: u64,
        /// Also sample products and inverses in R(I, J).
        #[arg(long)]
        crosscheck: bool,
        #[arg(long, default_value_t = 20)]
        trunc: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Counting curve for J(ξ) ∩ sℕ against its density ξ/s.
    Density {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        s: u64,
        #[arg(long)]
        xi: String,
        #[arg(long = "max-n", default_value_t = 100_000)]
        max_n: u64,
    },
    /// J(ξ) as an index-set literal.
    Jxi {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        xi: String,
        /// Compare with a direct scan of 1..=M.
        #[arg(long = "check-to")]
        check_to: Option<u64>,
    },
    /// Hausdorff dimension of R(I, J): exact value and finite-level CSV.
    Hdim {
        #[arg(long = "i-set")]
        i_set: String,
        #[arg(long = "j-set")]
        j_set: String,
        /// `identity`, `ceilhalf`, `table:<file>` or `table:1,1,2,...`.
        #[arg(long, default_value = "identity")]
        filtration: String,
        #[arg(long = "max-n", default_value_t = 10_000)]
        max_n: u64,
        /// Prime for the admissibility check.
        #[arg(long, required_unless_present = "no_check")]
        p: Option<u64>,
        #[arg(long, default_value_t = riordan::index::DEFAULT_BOUND)]
        bound: u64,
        /// Skip the admissibility check.
        #[arg(long)]
        no_check: bool,
    },
    /// A spectrum family: pair, admissibility, closure check and dimension.
    Spectrum {
        #[arg(long)]
        p: u64,
        /// `interval:<ξ>`, `ppower:<r>`, `halfplus:<r>`, `band:<s>:<ξ>`, `lattice:<s>:<r>:<u>`.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = riordan::index::DEFAULT_BOUND)]
        bound: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Case of an admissible pair in the characterization.
    Classify {
        #[command(flatten)]
        pair: PairOpts,
    },
}

/// What a command prints, and whether its verdict passed.
pub struct Output {
    pub text: String,
    pub pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.cmd, cli.human) {
        Ok(out) => {
            print!("{}", out.text);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
