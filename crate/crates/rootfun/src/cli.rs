//! The `rootfun` command line: `solve` emits certificates, `oracle` runs the
//! brute-force agreement suite on fixtures with known roots.
//!
//! Exit codes: 0 success, 1 verification or I/O failure, 2 not
//! zero-dimensional, 3 parse or input error, 4 oracle disagreement.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::certificate::{build_certificate, certificate_json};
use crate::field::{Field, PrimeField, Rationals};
use crate::oracle::{run_fixture_checks, OracleCheck};
use crate::parse::{self, FieldSpec, InputError, ParsedSource};
use crate::print::{monomial_string, poly_string};
use crate::solver::{self, SolveError, SolveOptions, SolveResult, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NOT_ZERO_DIMENSIONAL: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "rootfun",
    version,
    about = "Exact root-functional bases, bounded ideal slices, and unit functionals \
             of square polynomial systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a system file and emit a certificate
    Solve {
        /// Input system file
        file: PathBuf,
        /// Output format (json is the machine contract)
        #[arg(long, value_enum, default_value_t = OutputMode::Json)]
        out: OutputMode,
        /// Run the invariant suite and embed its report; nonzero exit on failure
        #[arg(long)]
        verify: bool,
        /// Always power functionals to the annihilator dimension instead of
        /// stopping when consecutive spans agree
        #[arg(long)]
        no_fast_path: bool,
    },
    /// Check a fixture with known roots against the brute-force oracles
    Oracle {
        /// Fixture file with `root:` stanzas
        fixture: PathBuf,
        /// Largest degree shift for the slice factorization checks
        #[arg(long, default_value_t = 2)]
        delta_max: u32,
        /// Saturation slack for the oracle slices
        #[arg(long, default_value_t = 4)]
        slack: u32,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    configure_threads();
    match cli.command {
        Command::Solve {
            file,
            out,
            verify,
            no_fast_path,
        } => run_solve(&file, out, verify, no_fast_path),
        Command::Oracle {
            fixture,
            delta_max,
            slack,
        } => run_oracle(&fixture, delta_max, slack),
    }
}

/// `ROOTFUN_THREADS` caps solver parallelism; 0 or unset means automatic.
fn configure_threads() {
    if let Ok(v) = std::env::var("ROOTFUN_THREADS") {
        if let Ok(k) = v.trim().parse::<usize>() {
            if k > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
        }
    }
}

fn read_source(path: &Path) -> Result<ParsedSource, i32> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("rootfun: cannot read {}: {e}", path.display());
            return Err(EXIT_FAILURE);
        }
    };
    parse::parse_source(&text).map_err(|e| {
        eprintln!("rootfun: {e}");
        EXIT_PARSE
    })
}

fn run_solve(path: &Path, out: OutputMode, verify: bool, no_fast_path: bool) -> i32 {
    let source = match read_source(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match source.file.field_spec {
        FieldSpec::Rational => solve_over(&Rationals, &source, out, verify, no_fast_path),
        FieldSpec::Prime(p) => {
            let field = PrimeField::new(p).expect("primality checked during parsing");
            solve_over(&field, &source, out, verify, no_fast_path)
        }
    }
}

fn solve_over<F: Field>(
    field: &F,
    source: &ParsedSource,
    out: OutputMode,
    verify: bool,
    no_fast_path: bool,
) -> i32 {
    let system = match source.build_system(field) {
        Ok(s) => s,
        Err(e @ InputError::Parse(_)) | Err(e @ InputError::System(_)) => {
            eprintln!("rootfun: {e}");
            return EXIT_PARSE;
        }
    };
    let options = SolveOptions {
        fast_path: !no_fast_path,
    };
    let result = match solver::solve(&system, &options) {
        Ok(r) => r,
        Err(e @ SolveError::NotZeroDimensional { .. }) => {
            eprintln!("rootfun: {e}");
            return EXIT_NOT_ZERO_DIMENSIONAL;
        }
        Err(e) => {
            eprintln!("rootfun: {e}");
            return EXIT_PARSE;
        }
    };

    let d = &result.diagnostics;
    eprintln!(
        "rootfun: delta_f={} D={} step1_rank={} ann_dim={} generators={} root_dim={} slice_dim={}{}{}",
        result.delta_f,
        result.dimension,
        d.step1_rank,
        d.ann_dim,
        d.generator_count,
        d.root_dim,
        d.slice_dim,
        match d.stabilized_at {
            Some(k) => format!(" stabilized_at={k}"),
            None => String::new(),
        },
        if d.no_roots { " no_roots" } else { "" },
    );
    for (name, secs) in &d.step_seconds {
        eprintln!("rootfun: step {name}: {:.6}s", secs);
    }

    let report = if verify {
        Some(solver::verify(&system, &result))
    } else {
        None
    };

    match out {
        OutputMode::Json => {
            let cert = build_certificate(field, &source.file, &system, &result, report.as_ref());
            print!("{}", certificate_json(&cert));
        }
        OutputMode::Text => print_text_report(field, source, &result, report.as_ref()),
    }


    if let Some(r) = &report {
        if !r.all_passed() {
            eprintln!("rootfun: verification FAILED");
            return EXIT_FAILURE;
        }
    }
    EXIT_OK
}

fn functional_text<F: Field>(
    field: &F,
    l: &crate::functionals::BoundedFunctional<F>,
    vars: &[String],
) -> String {
    let basis = l.basis();
    let parts: Vec<String> = basis
        .monomials()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            format!(
                "{} -> {}",
                monomial_string(m, vars),
                field.format(l.values().entry(i))
            )
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn print_text_report<F: Field>(
    field: &F,
    source: &ParsedSource,
    result: &SolveResult<F>,
    report: Option<&VerificationReport>,
) {
    let vars = &source.file.variables;
    println!("field: {}", field.describe());
    println!("vars: {}", vars.join(" "));
    println!("delta_f: {}", result.delta_f);
    println!("D: {}", result.dimension);
    println!("ann_dim: {}", result.ann_dim);
    if result.diagnostics.no_roots {
        println!("no roots: the system has no solutions (1 lies in the bounded ideal)");
    }
    println!("root functional basis ({}):", result.root_basis.len());
    for (i, l) in result.root_basis.iter().enumerate() {
        println!("  l{} = {}", i + 1, functional_text(field, l, vars));
    }
    println!("ideal slice basis ({}):", result.ideal_slice.len());
    for h in &result.ideal_slice {
        println!("  {}", poly_string(h, vars));
    }
    println!(
        "unit functional = {}",
        functional_text(field, &result.unit, vars)
    );
    let a: Vec<String> = result
        .unit_decomposition
        .root_coeffs
        .iter()
        .map(|c| field.format(c))
        .collect();
    let b: Vec<String> = result
        .unit_decomposition
        .slice_coeffs
        .iter()
        .map(|c| field.format(c))
        .collect();
    println!("unit coefficients: a = [{}], b = [{}]", a.join(", "), b.join(", "));
    if let Some(r) = report {
        println!("verification:");
        for c in &r.checks {
            println!("  {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
        }
    }
}

fn run_oracle(path: &Path, delta_max: u32, slack: u32) -> i32 {
    let source = match read_source(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if source.roots.is_empty() {
        eprintln!("rootfun: fixture {} has no root lines", path.display());
        return EXIT_PARSE;
    }
    let checks = match source.file.field_spec {
        FieldSpec::Rational => oracle_over(&Rationals, &source, delta_max, slack),
        FieldSpec::Prime(p) => {
            let field = PrimeField::new(p).expect("primality checked during parsing");
            oracle_over(&field, &source, delta_max, slack)
        }
    };
    let checks = match checks {
        Ok(c) => c,
        Err(code) => return code,
    };
    let mut failed = 0;
    for c in &checks {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
        if !c.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("rootfun: {failed} oracle check(s) failed");
        EXIT_ORACLE
    } else {
        EXIT_OK
    }
}

fn oracle_over<F: Field>(
    field: &F,
    source: &ParsedSource,
    delta_max: u32,
    slack: u32,
) -> Result<Vec<OracleCheck>, i32> {
    let fixture = source.build_fixture(field).map_err(|e| {
        eprintln!("rootfun: {e}");
        EXIT_PARSE
    })?;
    Ok(run_fixture_checks(&fixture, delta_max, slack))
}
