//! `cyclonic`: batch computation and verification from the command line.
//!
//! Exit status 0 on success, 1 when a verification fails (the report is still printed),
//! 2 on malformed input.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "cyclonic",
    version,
    about = "Cyclonic orbits, Burnside spans, Mackey functors and Witt vectors"
)]
struct Cli {
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand)]
enum Group {
    /// Supernatural numbers.
    Supernat {
        #[arg(value_enum)]
        verb: SupernatVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// Maps of cyclonic orbits and simplices of the nerve.
    Orbit {
        #[arg(value_enum)]
        verb: OrbitVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// Span classes and Burnside rings.
    Burnside {
        #[arg(value_enum)]
        verb: BurnsideVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// Mackey functors on the divisor poset.
    Mackey {
        #[arg(value_enum)]
        verb: MackeyVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// Big Witt vectors.
    Witt {
        #[arg(value_enum)]
        verb: WittVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// Geometric fixed points, cyclotomic structures and the twisted orbit category.
    Cyclotomic {
        #[arg(value_enum)]
        verb: CyclotomicVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// The graded algebra on the generators of the homotopy Burnside category.
    Dga {
        #[arg(value_enum)]
        verb: DgaVerb,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SupernatVerb {
    Gcd,
    Lcm,
    Nest,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum OrbitVerb {
    Compose,
    Pullback,
    SimplexCheck,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BurnsideVerb {
    Compose,
    Mul,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MackeyVerb {
    Validate,
    Eval,
    Burnside,
    Witt,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum WittVerb {
    Add,
    Mul,
    Frob,
    Versch,
    Restrict,
    Ghost,
    Polys,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CyclotomicVerb {
    Gfp,
    VerifyWitt,
    Recollement,
    Restrictions,
    TwistedAssoc,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum DgaVerb {
    Mul,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Functor {
    Witt,
    Burnside,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolyOp {
    Sum,
    Product,
    Negation,
}

#[derive(Args, Clone)]
pub struct Opts {
    /// Ring tag: Z, Q, Zmod:N, PolyZ:x,y or PolyQ:x,y.
    #[arg(long, default_value = "Z")]
    pub ring: String,
    /// Level of the operands (source level for frob, versch, restrict).
    #[arg(long)]
    pub level: Option<u64>,
    /// Target level for frob, versch, restrict and restrictions.
    #[arg(long)]
    pub to: Option<u64>,
    /// Truncation bound for Mackey data, tables and audits.
    #[arg(long)]
    pub bound: Option<u64>,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// A single prime.
    #[arg(long)]
    pub p: Option<u64>,
    /// Ambient supernatural number, e.g. 24, 2^inf*3 or inf.
    #[arg(long = "N", default_value = "inf")]
    pub ambient: String,
    #[arg(long, value_enum, default_value = "json")]
    pub out: OutFormat,
    /// Read the payload from a file.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Mackey functor used by gfp, recollement and eval when no data is given.
    #[arg(long, value_enum, default_value = "witt")]
    pub functor: Functor,
    /// Operation for witt polys.
    #[arg(long, value_enum, default_value = "sum")]
    pub op: PolyOp,
    /// Inline JSON payload; `-` or nothing reads standard input when a payload is needed.
    pub payload: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.group {
        Group::Supernat { verb, opts } => commands::supernat(*verb, opts),
        Group::Orbit { verb, opts } => commands::orbit(*verb, opts),
        Group::Burnside { verb, opts } => commands::burnside(*verb, opts),
        Group::Mackey { verb, opts } => commands::mackey(*verb, opts),
        Group::Witt { verb, opts } => commands::witt(*verb, opts),
        Group::Cyclotomic { verb, opts } => commands::cyclotomic(*verb, opts),
        Group::Dga { verb, opts } => commands::dga(*verb, opts),
    };
    match result {
        Ok(out) => {
            print!("{}", out.render());
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
