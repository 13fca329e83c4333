//! Command-line access to the algebra operations: products in the three
//! algebras, generator-word decomposition, degeneration order diagrams,
//! distinguished orbits and idempotents, and the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error,
//! 3 semantic mismatch (well-formed operands that do not compose).

use clap::{Parser, Subcommand, ValueEnum};
use schur::generic::{
    closed_orbit, hasse_dot, open_orbit, star, verify_relations_0, word_decompose,
};
use schur::hecke::{hecke_mult, t_sigma, verify_hecke_relations, Permutation};
use schur::qschur::{verify_oracle, verify_relations_q, Element, SchurContext};
use schur::{Composition, Error, OrbitMatrix, Report};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "schur", about = "Exact computations in q-Schur and 0-Hecke algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algebra {
    Qschur,
    Zero,
    Hecke,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    QRelations,
    ZeroRelations,
    Hecke,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two basis elements and print the product.
    Mult {
        #[arg(long, value_enum)]
        algebra: Algebra,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        a: String,
        b: String,
    },
    /// Print the generator word of an orbit matrix as JSON.
    Decompose { a: String },
    /// Print the Hasse diagram of the degeneration order on a block in DOT.
    DegOrder {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: String,
        #[arg(long)]
        e: String,
    },
    /// Print the open (dense) orbit of the block with the given margins.
    OpenOrbit { d: String, e: String },
    /// Print the closed orbit of the block with the given margins.
    ClosedOrbit { d: String, e: String },
    /// Print the diagonal idempotent k_d and the open-orbit idempotent o_d.
    Idempotents {
        #[arg(long)]
        d: String,
    },
    /// Run a verification suite; exits 0 when every check passes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        r: u32,
        /// Required for oracle-backed suites beyond n = 4 or r = 4.
        #[arg(long)]
        allow_large: bool,
    },
    /// Rebuild a permutation from the generators t_i and print it.
    HeckeTsigma {
        #[arg(long)]
        n: usize,
        sigma: String,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Error::InvalidInput(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(2)
        }
        Err(Error::TypeMismatch(msg)) => {
            eprintln!("semantic mismatch: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> schur::Result<ExitCode> {
    match cli.command {
        Command::Mult { algebra, n, r, a, b } => mult(algebra, n, r, &a, &b),
        Command::Decompose { a } => {
            let a = OrbitMatrix::parse(&a)?;
            println!("{}", word_decompose(&a).to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::DegOrder { n, r, d, e } => {
            let d = parse_composition(&d, n, r)?;
            let e = parse_composition(&e, n, r)?;
            print!("{}", hasse_dot(&d, &e));
            Ok(ExitCode::SUCCESS)
        }
        Command::OpenOrbit { d, e } => {
            let (d, e) = parse_margins(&d, &e)?;
            println!("{}", open_orbit(&d, &e)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::ClosedOrbit { d, e } => {
            let (d, e) = parse_margins(&d, &e)?;
            println!("{}", closed_orbit(&d, &e)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Idempotents { d } => {
            let d = Composition::parse(&d)?;
            println!("k_d: {}", OrbitMatrix::diagonal(&d));
            println!("o_d: {}", open_orbit(&d, &d)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            n,
            r,
            allow_large,
        } => verify(suite, n, r, allow_large),
        Command::HeckeTsigma { n, sigma } => {
            let sigma = Permutation::parse(&sigma, n)?;
            println!("{}", t_sigma(&sigma)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_composition(s: &str, n: usize, r: u32) -> schur::Result<Composition> {
    let c = Composition::parse(s)?;
    if c.n() != n || c.r() != r {
        return Err(Error::InvalidInput(format!(
            "composition {c} is not in D({n},{r})"
        )));
    }
    Ok(c)
}

fn parse_margins(d: &str, e: &str) -> schur::Result<(Composition, Composition)> {
    let d = Composition::parse(d)?;
    let e = Composition::parse(e)?;
    if d.n() != e.n() || d.r() != e.r() {
        return Err(Error::TypeMismatch(format!(
            "margins {d} and {e} have different sizes"
        )));
    }
    Ok((d, e))
}

fn parse_matrix(s: &str, n: usize, r: u32) -> schur::Result<OrbitMatrix> {
    let m = OrbitMatrix::parse(s)?;
    if m.n() != n {
        return Err(Error::TypeMismatch(format!(
            "matrix {m} is {}x{}, expected {n}x{n}",
            m.n(),
            m.n()
        )));
    }
    if m.r() != r {
        return Err(Error::TypeMismatch(format!(
            "matrix {m} has entry sum {}, expected {r}",
            m.r()
        )));
    }
    Ok(m)
}

fn mult(algebra: Algebra, n: usize, r: u32, a: &str, b: &str) -> schur::Result<ExitCode> {
    match algebra {
        Algebra::Qschur => {
            let a = parse_matrix(a, n, r)?;
            let b = parse_matrix(b, n, r)?;
            let mut ctx = SchurContext::new();
            let prod = ctx.basis_product(&a, &b)?;
            println!("{}", prod.to_json());
            // printed output must re-parse to the same value
            debug_assert_eq!(Element::from_json(&prod.to_json())?, prod);
            Ok(ExitCode::SUCCESS)
        }
        Algebra::Zero => {
            let a = parse_matrix(a, n, r)?;
            let b = parse_matrix(b, n, r)?;
            match star(&a, &b) {
                Some(m) => println!("{m}"),
                None => println!("0"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Algebra::Hecke => {
            let a = parse_permutation(a, n)?;
            let b = parse_permutation(b, n)?;
            println!("{}", hecke_mult(&a, &b)?.to_matrix());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_permutation(s: &str, n: usize) -> schur::Result<Permutation> {
    if s.contains(';') {
        return Permutation::from_matrix(&OrbitMatrix::parse(s)?);
    }
    Permutation::parse(s, n)
}

fn verify(suite: Suite, n: usize, r: u32, allow_large: bool) -> schur::Result<ExitCode> {
    let oracle_backed = matches!(suite, Suite::QRelations | Suite::Oracle);
    if oracle_backed && (n > 4 || r > 4) && !allow_large {
        return Err(Error::InvalidInput(format!(
            "suite at n={n}, r={r} needs --allow-large"
        )));
    }
    let report: Report = match suite {
        Suite::QRelations => verify_relations_q(&mut SchurContext::new(), n, r)?,
        Suite::ZeroRelations => verify_relations_0(n, r),
        Suite::Hecke => verify_hecke_relations(n)?,
        Suite::Oracle => verify_oracle(&mut SchurContext::new(), n, r)?,
    };
    println!("{report}");
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
