mod codec;
mod ops;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use lieorbit::ExecMode;
use ops::{Opts, Outcome};
use serde_json::Value;

/// Exact and floating-point computations on the Heisenberg and Jacobi groups.
///
/// Every verb reads one JSON document (inline text, a file path, or `-` for stdin)
/// and prints a JSON report on stdout.
#[derive(Parser)]
#[command(name = "lieorbit", version)]
struct Cli {
    /// Acceptance tolerance for residual checks
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Use exact rational arithmetic where the verb supports it
    #[arg(long, global = true)]
    exact: bool,
    /// Run data-parallel loops on one thread
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    group: Group,
}

#[derive(Args)]
struct Input {
    /// JSON document, path to a JSON file, or `-` for stdin
    input: Option<String>,
}

#[derive(Subcommand)]
enum Group {
    /// Heisenberg group H(g, h)
    #[command(subcommand)]
    Heis(HeisVerb),
    /// sl2-triples
    #[command(subcommand)]
    Sl2(Sl2Verb),
    /// Jacobi group
    #[command(subcommand)]
    Jacobi(JacobiVerb),
    /// Theta series and their Fourier coefficients
    #[command(subcommand)]
    Theta(ThetaVerb),
    /// Finite Schrödinger-type representations
    #[command(subcommand)]
    Rep(RepVerb),
    /// Coadjoint orbit membership
    #[command(subcommand)]
    Orbit(OrbitVerb),
}

#[derive(Subcommand)]
enum HeisVerb {
    /// {"x","y"}: group product
    Mul(Input),
    /// {"x"}: inverse
    Inv(Input),
    /// {"x","F"}: coadjoint action
    Coadjoint(Input),
    /// {"x"}: block matrix realization
    Embed(Input),
    /// {"F","X","Y"}: value of the form B_F
    Bform(Input),
    /// {"F"}: radical of B_F
    Radical(Input),
    /// {"c","g"}: check the standard polarization
    Polarization(Input),
    /// {"F"}: Plancherel density
    Plancherel(Input),
}

#[derive(Subcommand)]
enum Sl2Verb {
    /// {"E","ambient","n"}: complete a nilpotent to a triple
    Complete {
        /// File holding the input document
        #[arg(long, conflicts_with = "input")]
        nilpotent: Option<String>,
        input: Option<String>,
    },
    /// {"H","X","Y","ambient","n"}: Cayley transform
    Cayley(Input),
    /// Triple: Sekiguchi image and its grading
    Sekiguchi(Input),
    /// Triple: morphism class
    Classify(Input),
}

#[derive(Subcommand)]
enum JacobiVerb {
    /// {"x","y"}: group product
    Mul(Input),
    /// {"x"}: matrix realization
    Embed(Input),
    /// {"g","point"}: action on the Siegel-Jacobi space
    Act(Input),
    /// {"g","mode"}: Iwasawa decomposition
    Iwasawa(Input),
    /// Commutation table of the Lie algebra
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Check every identity instead of printing the table
        #[arg(long)]
        verify: bool,
        /// Use the complexified basis
        #[arg(long)]
        complex: bool,
    },
    /// Killing form check of sp(n)
    Killing {
        #[arg(long)]
        n: usize,
    },
    /// {"g","family"}: push a family seed forward and test membership
    Orbit(Input),
}

#[derive(Subcommand)]
enum ThetaVerb {
    /// {"spec","point"}: evaluate
    Eval(Input),
    /// {"spec","generator"}: slash invariance under a generator
    Invariance(Input),
    /// {"spec","T","R","Y","V","grid"}: Fourier coefficient
    Fourier(Input),
}

#[derive(Subcommand)]
enum RepVerb {
    /// {"N","g","h","c","x"}: character value
    Trace(Input),
    /// {"N","g","h","c"}: dimension of the commutant
    Commutant(Input),
}

#[derive(Subcommand)]
enum OrbitVerb {
    /// {"F","family"}: membership in a coadjoint orbit family
    Check(Input),
}

type Op = fn(&Value, &Opts) -> Outcome;

fn with_input(input: Option<&str>, opts: &Opts, op: Op) -> Outcome {
    let v = codec::read_input(input)?;
    op(&v, opts)
}

fn dispatch(group: Group, opts: &Opts) -> Outcome {
    use Group::*;
    let (input, op): (Option<String>, Op) = match group {
        Heis(v) => match v {
            HeisVerb::Mul(i) => (i.input, ops::heis_mul_op),
            HeisVerb::Inv(i) => (i.input, ops::heis_inv_op),
            HeisVerb::Coadjoint(i) => (i.input, ops::heis_coadjoint_op),
            HeisVerb::Embed(i) => (i.input, ops::heis_embed_op),
            HeisVerb::Bform(i) => (i.input, ops::heis_bform_op),
            HeisVerb::Radical(i) => (i.input, ops::heis_radical_op),
            HeisVerb::Polarization(i) => (i.input, ops::heis_polarization_op),
            HeisVerb::Plancherel(i) => (i.input, ops::heis_plancherel_op),
        },
        Sl2(v) => match v {
            Sl2Verb::Complete { nilpotent, input } => (nilpotent.or(input), ops::sl2_complete_op),
            Sl2Verb::Cayley(i) => (i.input, ops::sl2_cayley_op),
            Sl2Verb::Sekiguchi(i) => (i.input, ops::sl2_sekiguchi_op),
            Sl2Verb::Classify(i) => (i.input, ops::sl2_classify_op),
        },
        Jacobi(v) => match v {
            JacobiVerb::Mul(i) => (i.input, ops::jacobi_mul_op),
            JacobiVerb::Embed(i) => (i.input, ops::jacobi_embed_op),
            JacobiVerb::Act(i) => (i.input, ops::jacobi_act_op),
            JacobiVerb::Iwasawa(i) => (i.input, ops::jacobi_iwasawa_op),
            JacobiVerb::Orbit(i) => (i.input, ops::jacobi_orbit_op),
            JacobiVerb::Table { n, m, verify, complex } => return ops::jacobi_table_op(n, m, verify, complex, opts),
            JacobiVerb::Killing { n } => return ops::jacobi_killing_op(n),
        },
        Theta(v) => match v {
            ThetaVerb::Eval(i) => (i.input, ops::theta_eval_op),
            ThetaVerb::Invariance(i) => (i.input, ops::theta_invariance_op),
            ThetaVerb::Fourier(i) => (i.input, ops::theta_fourier_op),
        },
        Rep(v) => match v {
            RepVerb::Trace(i) => (i.input, ops::rep_trace_op),
            RepVerb::Commutant(i) => (i.input, ops::rep_commutant_op),
        },
        Orbit(OrbitVerb::Check(i)) => (i.input, ops::orbit_check_op),
    };
    with_input(input.as_deref(), opts, op)
}

fn print(v: &Value) {
    use std::io::Write;
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(v).expect("JSON values always serialize"));
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let opts = Opts {
        tol: cli.tol,
        exact: cli.exact,
        mode: if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel },
    };
    match dispatch(cli.group, &opts) {
        Ok(report) => print(&report.to_json()),
        Err(e) => {
            print(&e.to_json());
            std::process::exit(e.exit_code());
        }
    }
}
