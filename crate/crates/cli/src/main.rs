//! Command-line interface: dimension queries, compression of state files,
//! roundtrip checks, property verification, cascade timing, and CG matrix
//! export.
//!
//! Exit codes: 0 on success, 1 when a verification or tolerance check
//! fails, 2 on usage or file-format errors.

mod cache;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use schur_compress::oracle::{inner_product, tensor_power_state};
use schur_compress::verify::{run_suite, Suite, VerifyParams};
use schur_compress::{
    compress, compress_dense, decompress, dim_symmetric, estimate_cost, PureQudit, C64,
};

use formats::{export_matrix, StateFile};

#[derive(Debug)]
pub enum CliError {
    /// Usage or file-format problem; exit code 2.
    Usage(String),
    /// A check ran and failed; exit code 1.
    Failure(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl From<schur_compress::Error> for CliError {
    fn from(e: schur_compress::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "schur-compress", version, about = "Compress identically prepared qudit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print compressed-register dimension and compression ratio for (n, d)
    Dims {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Compress a state file into the occupation basis
    Compress {
        /// Input state file: a single qudit (n = 1) or, at validation
        /// scale, a computational-basis register
        #[arg(long)]
        input: PathBuf,
        /// Number of copies; required for single-qudit inputs
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compress then decompress a qudit file and report the fidelity
    Roundtrip {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run property suites at a chosen scale and seed
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: usize,
        #[arg(long = "d-max", default_value_t = 3)]
        d_max: usize,
        /// Override every check's default tolerance
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Time the cascade for n = 2..=n-max and write a CSV
    Bench {
        #[arg(long)]
        d: usize,
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Export a constructed CG matrix (isometry or completed unitary)
    ExportCg {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        /// Export the unitary completion instead of the isometry
        #[arg(long)]
        complete: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Dims { n, d } => run_dims(n, d),
        Command::Compress { input, n, out } => run_compress(&input, n, &out),
        Command::Roundtrip { input, n, tol } => run_roundtrip(&input, n, tol),
        Command::Verify { suite, n_max, d_max, tol, seed } => {
            run_verify(&suite, n_max, d_max, tol, seed)
        }
        Command::Bench { d, n_max, csv } => run_bench(d, n_max, &csv),
        Command::ExportCg { d, k, complete, out } => run_export(d, k, complete, &out),
    }
}

fn run_dims(n: usize, d: usize) -> CliResult<()> {
    let dim = dim_symmetric(n, d)?;
    let dense = (d as u128).checked_pow(n as u32);
    // ratio via logs so huge d^n still prints
    let ratio = ((n as f64) * (d as f64).ln() - (dim as f64).ln()).exp();
    println!("n\td\tdim_symmetric\tdense_dim\tratio");
    match dense {
        Some(size) => println!("{n}\t{d}\t{dim}\t{size}\t{ratio:.6}"),
        None => println!("{n}\t{d}\t{dim}\t{:.6e}\t{ratio:.6}", ratio * dim as f64),
    }
    Ok(())
}

fn run_compress(input: &PathBuf, n_flag: Option<usize>, out: &PathBuf) -> CliResult<()> {
    let file = StateFile::load(input)?;
    if file.n == 1 {
        let n = n_flag.ok_or_else(|| {
            CliError::Usage("--n is required for single-qudit inputs".into())
        })?;
        let phi = file.to_qudit()?;
        cache::warm_for_cascade(phi.d(), n)?;
        let cs = compress(&phi, n)?;
        StateFile::from_compressed(&cs).save(out)?;
        println!(
            "compressed d={} n={n} into {} amplitudes -> {}",
            phi.d(),
            cs.amplitudes().len(),
            out.display()
        );
        return Ok(());
    }
    if let Some(n) = n_flag {
        if n != file.n {
            return Err(CliError::Usage(format!(
                "--n {n} conflicts with n = {} from the input file",
                file.n
            )));
        }
    }
    let psi = file.to_dense()?;
    let (cs, leakage) = compress_dense(&psi)?;
    println!("leakage = {leakage:.17e}");
    if leakage > 1e-6 {
        return Err(CliError::Failure(format!(
            "input is not in the symmetric subspace: leakage = {leakage:.6e}"
        )));
    }
    StateFile::from_compressed(&cs).save(out)?;
    println!(
        "compressed d={} n={} into {} amplitudes -> {}",
        cs.d(),
        cs.n(),
        cs.amplitudes().len(),
        out.display()
    );
    Ok(())
}

fn run_roundtrip(input: &PathBuf, n: usize, tol: f64) -> CliResult<()> {
    let phi = StateFile::load(input)?.to_qudit()?;
    cache::warm_for_cascade(phi.d(), n)?;
    let cs = compress(&phi, n)?;
    let back = decompress(&cs)?;
    let reference = tensor_power_state(&phi, n)?;
    let fidelity = inner_product(back.amplitudes(), reference.amplitudes()).norm();
    println!("fidelity = {fidelity:.17e}");
    if fidelity >= 1.0 - tol {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "roundtrip fidelity {fidelity:.17e} below 1 - {tol:e}"
        )))
    }
}

fn run_verify(
    suite: &str,
    n_max: usize,
    d_max: usize,
    tol: Option<f64>,
    seed: u64,
) -> CliResult<()> {
    let suite: Suite = suite.parse().map_err(CliError::Usage)?;
    let params = VerifyParams { n_max, d_max, tol, seed };
    let results = run_suite(suite, &params)?;
    for r in &results {
        println!("{r}");
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!(
        "verify: {passed}/{} properties passed (n_max={n_max}, d_max={d_max}, seed={seed})",
        results.len()
    );
    if passed == results.len() {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "{} of {} properties failed",
            results.len() - passed,
            results.len()
        )))
    }
}

fn run_bench(d: usize, n_max: usize, csv: &PathBuf) -> CliResult<()> {
    if n_max < 2 {
        return Err(CliError::Usage("--n-max must be at least 2".into()));
    }
    // fixed deterministic input state
    let amps: Vec<C64> = (1..=d).map(|i| C64::new(i as f64, 0.25 * (i % 3) as f64)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let phi = PureQudit::new(amps.into_iter().map(|a| a / norm).collect())?;

    let mut rows = String::from("n,wall_ns,dim_symmetric,estimate_cost\n");
    for n in 2..=n_max {
        compress(&phi, n)?; // warm-up builds the isometries
        let mut samples: Vec<u128> = (0..3)
            .map(|_| {
                let start = Instant::now();
                compress(&phi, n).expect("warmed cascade cannot fail");
                start.elapsed().as_nanos()
            })
            .collect();
        samples.sort_unstable();
        let median = samples[1];
        rows.push_str(&format!(
            "{n},{median},{},{}\n",
            dim_symmetric(n, d)?,
            estimate_cost(n, d)?
        ));
    }
    std::fs::write(csv, rows)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", csv.display())))?;
    println!("wrote {} rows to {}", n_max - 1, csv.display());
    Ok(())
}

fn run_export(d: usize, k: usize, complete: bool, out: &PathBuf) -> CliResult<()> {
    let file = if complete {
        export_matrix(d, k, true)?
    } else {
        // read-through the persistent cache for the plain isometry
        let w = cache::load_or_build(d, k)?;
        formats::MatrixFile::from_isometry(&w)
    };
    file.save(out)?;
    println!("wrote {}x{} {:?} for d={d}, k={k} -> {}", file.rows, file.cols, file.kind, out.display());
    Ok(())
}
