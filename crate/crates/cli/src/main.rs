use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use horogrowth::bfs::{element_distance, Ball, BfsError, BfsReport, Budget};
use horogrowth::formulas::{
    cap_poly, coset_census, full_series, level_series, positive_series, prefix_suffix_series,
    relative_growth_series, subgroup_series, suffix_poly, FormulaError,
};
use horogrowth::group::{parse_vector, Word};
use horogrowth::normal_form::spell;
use horogrowth::series::RationalFunction;
use horogrowth::verify::{run_suite, Suite, VerifyError};
use num_bigint::BigInt;

mod render;

use render::{Output, Rendered};

#[derive(Parser)]
#[command(name = "horogrowth", version, about = "Exact growth series for Z^m *_{g -> g^3}")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Plain, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "W")]
    W,
    #[value(name = "V")]
    V,
    #[value(name = "R")]
    R,
    #[value(name = "P")]
    P,
    #[value(name = "sub")]
    Sub,
    #[value(name = "full")]
    Full,
    #[value(name = "X0")]
    X0,
    #[value(name = "Xm1")]
    Xm1,
    #[value(name = "B")]
    B,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::W => "W",
            Kind::V => "V",
            Kind::R => "R",
            Kind::P => "P",
            Kind::Sub => "sub",
            Kind::Full => "full",
            Kind::X0 => "X0",
            Kind::Xm1 => "Xm1",
            Kind::B => "B",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Appendix,
    Bfs,
    Language,
    Census,
    Gfsa,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Appendix => Suite::Appendix,
            SuiteArg::Bfs => Suite::Bfs,
            SuiteArg::Language => Suite::Language,
            SuiteArg::Census => Suite::Census,
            SuiteArg::Gfsa => Suite::Gfsa,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a growth series as a prefix and optionally its rational form.
    Series {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        /// Number of coefficients.
        #[arg(long, default_value_t = 12)]
        terms: usize,
        #[arg(long)]
        rational: bool,
        /// Coset depth for `--kind B`.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Spell the geodesic normal form of a^v.
    Spell {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Evaluate a word to its normal form a^v t^k.
    Eval {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Breadth-first distance from the identity to a^v.
    Distance {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Coset census by level and the fitted level-series numerators.
    Census {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long)]
        rmax: Option<usize>,
    },
    /// Sphere counts and coset census from the Cayley graph.
    Bfs {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long)]
        radius: usize,
    },
}

/// A command failure and its exit code.
enum Failure {
    /// Budget, parse, or argument error.
    Input(String),
    /// A verification or certification failure.
    Check(String),
}

impl From<BfsError> for Failure {
    fn from(e: BfsError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::HorizonTooLarge { .. } => Failure::Input(e.to_string()),
            FormulaError::FitResidual { .. } => Failure::Check(e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Formula(f) => f.into(),
            e => Failure::Input(e.to_string()),
        }
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
    match run(cli.command, cli.output) {
        Ok((text, passed)) => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(if passed { 0 } else { 2 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Largest dimension accepted by the series, census and verify commands.
const MAX_M: usize = 20;
const MAX_TERMS: usize = 4096;

fn check_dimension(m: usize) -> Result<usize, Failure> {
    if m > MAX_M {
        return Err(Failure::Input(format!("m = {m} exceeds the supported maximum {MAX_M}")));
    }
    Ok(m)
}

fn lattice_vector(m: usize, text: &str) -> Result<Vec<BigInt>, Failure> {
    let v = parse_vector(text).map_err(|e| Failure::Input(e.to_string()))?;
    if v.len() != m {
        return Err(Failure::Input(format!("vector has {} entries, m = {m}", v.len())));
    }
    Ok(v)
}

fn series_form(kind: Kind, m: usize, n: Option<usize>) -> Result<RationalFunction, Failure> {
    Ok(match kind {
        Kind::W => suffix_poly(m).into(),
        Kind::V => cap_poly(m).into(),
        Kind::R => prefix_suffix_series(m),
        Kind::P => positive_series(m),
        Kind::Sub => subgroup_series(m),
        Kind::Full => full_series(m)?,
        Kind::X0 => level_series(m)?.x_0,
        Kind::Xm1 => level_series(m)?.x_minus1,
        Kind::B => {
            let n = n.ok_or_else(|| Failure::Input("--kind B needs --n".into()))?;
            relative_growth_series(m, n)
        }
    })
}

fn run(command: Command, output: Output) -> Result<(String, bool), Failure> {
    let ok = |r: Rendered| Ok((r.format(output), true));
    match command {
        Command::Series { kind, m, terms, rational, n } => {
            let m = check_dimension(m as usize)?;
            if !(1..=MAX_TERMS).contains(&terms) {
                return Err(Failure::Input(format!("--terms must be in 1..={MAX_TERMS}")));
            }
            let form = series_form(kind, m, n)?;
            ok(render::series(kind.name(), m, n, terms, &form, rational))
        }
        Command::Spell { m, vector } => {
            let v = lattice_vector(m as usize, &vector)?;
            ok(render::spelling(&v, &spell(&v)))
        }
        Command::Eval { m, word } => {
            let w = Word::parse(m as usize, &word).map_err(|e| Failure::Input(e.to_string()))?;
            ok(render::evaluation(&w))
        }
        Command::Distance { m, vector } => {
            let v = lattice_vector(m as usize, &vector)?;
            let distance = element_distance(&v)?;
            let word = spell(&v);
            let agrees = distance == word.len();
            Ok((render::distance(&v, distance, &word).format(output), agrees))
        }
        Command::Verify { suite, m, radius } => {
            let report = run_suite(suite.into(), check_dimension(m as usize)?, radius)?;
            let passed = report.passed;
            Ok((render::suite(&report).format(output), passed))
        }
        Command::Census { m, rmax } => {
            let m = check_dimension(m as usize)?;
            let levels = level_series(m)?;
            let census = coset_census(m, rmax.unwrap_or(levels.certified_to))?;
            ok(render::census(&census, &levels))
        }
        Command::Bfs { m, radius } => {
            let ball = Ball::explore(m as usize, radius, Budget::from_env())?;
            ok(render::bfs(&BfsReport::from_ball(&ball)))
        }
    }
}
