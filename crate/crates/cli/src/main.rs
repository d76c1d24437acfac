use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};

use jetcalc::algcore::builtin_algebra;
use jetcalc::bimod::regular_bimodule;
use jetcalc::io::{
    read_algebra, read_bimodule, read_doc, to_json, AlgebraDoc, AlgebraSource, BimoduleDoc, OperatorDoc,
};
use jetcalc::{Algebra, Error};
use jetcalc_cli::builtin::{parse_builtin, parse_field};
use jetcalc_cli::suites::{demo_noncommutative, solve_n21, verify_commutative, N21Artifact};
use jetcalc_cli::{digest_inputs, VerificationReport};

#[derive(Parser)]
#[command(name = "jetcalc", version, about = "Exact checks for differential operators, derivations and jet modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operator spaces, jets and both isomorphisms over a commutative algebra.
    VerifyCommutative {
        #[arg(short = 'a', long = "algebra")]
        algebra: PathBuf,
        #[arg(short = 'p', long = "module")]
        p: PathBuf,
        /// Target module; defaults to the source module.
        #[arg(short = 'q', long = "target")]
        q: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long)]
        out: PathBuf,
        /// Record wall time in the JSON report (makes it run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Failure probes of the classical definitions over a noncommutative algebra.
    DemoNoncommutative {
        #[arg(short = 'a', long = "algebra")]
        algebra: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        timing: bool,
    },
    /// Searches for a derivation pair making an operator first order.
    SolveN21 {
        #[arg(short = 'a', long = "algebra")]
        algebra: PathBuf,
        #[arg(short = 'p', long = "module")]
        p: PathBuf,
        #[arg(short = 'q', long = "target")]
        q: PathBuf,
        #[arg(short = 'd', long = "operator")]
        operator: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Receives the witness, or the inconsistency certificate.
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        timing: bool,
    },
    /// Writes a builtin algebra document.
    Builtin {
        /// field, dual, kxk, matrixN, truncN, or a sum such as field+matrix2.
        #[arg(long)]
        name: String,
        /// Q or Fp:<prime>.
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        emit: PathBuf,
        /// Also write the regular bimodule of the algebra.
        #[arg(long)]
        emit_regular: Option<PathBuf>,
    },
}

/// Input problems; reported with exit code 2.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoncommutativeBase(i, j) => InputError(format!(
                "the algebra is noncommutative (basis elements {i} and {j} do not commute); \
                 the commutative suite does not apply, try `jetcalc demo-noncommutative`"
            )),
            e => InputError(e.to_string()),
        }
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, InputError> {
    std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), InputError> {
    std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<Arc<Algebra>, InputError> {
    Ok(Arc::new(read_algebra(path)?))
}

fn finish(mut report: VerificationReport, out: &Path, timing: bool, started: Instant) -> Result<ExitCode, InputError> {
    let elapsed = started.elapsed().as_millis();
    if timing {
        report.wall_time_ms = Some(elapsed);
    }
    write_text(out, &report.to_json())?;
    print!("{}", report.to_text());
    println!("wall time: {elapsed} ms");
    Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode, InputError> {
    let started = Instant::now();
    match cli.command {
        Command::VerifyCommutative { algebra, p, q, order, out, timing } => {
            let a = load_algebra(&algebra)?;
            let pm = read_bimodule(&p, &a)?;
            let qm = match &q {
                Some(path) => read_bimodule(path, &a)?,
                None => pm.clone(),
            };
            let (ab, pb) = (read_bytes(&algebra)?, read_bytes(&p)?);
            let qb = match &q {
                Some(path) => read_bytes(path)?,
                None => pb.clone(),
            };
            let order_tag = order.to_string();
            let digest = digest_inputs(&[("algebra", &ab), ("P", &pb), ("Q", &qb), ("order", order_tag.as_bytes())]);
            let report = verify_commutative(&a, &pm, &qm, order, digest)?;
            finish(report, &out, timing, started)
        }
        Command::DemoNoncommutative { algebra, out, timing } => {
            let a = load_algebra(&algebra)?;
            if a.is_commutative() {
                eprintln!("warning: the algebra is commutative; every failure probe is expected to come back empty");
            }
            let digest = digest_inputs(&[("algebra", &read_bytes(&algebra)?)]);
            finish(demo_noncommutative(&a, digest)?, &out, timing, started)
        }
        Command::SolveN21 { algebra, p, q, operator, out, witness, timing } => {
            let a = load_algebra(&algebra)?;
            let pm = read_bimodule(&p, &a)?;
            let qm = read_bimodule(&q, &a)?;
            let op = read_doc::<OperatorDoc>(&operator)?.to_map(a.field(), pm.dim(), qm.dim())?;
            let digest = digest_inputs(&[
                ("algebra", &read_bytes(&algebra)?),
                ("P", &read_bytes(&p)?),
                ("Q", &read_bytes(&q)?),
                ("operator", &read_bytes(&operator)?),
            ]);
            let (report, artifact) = solve_n21(&pm, &qm, &op, digest)?;
            let text = match artifact {
                N21Artifact::Witness(w) => to_json(&w),
                N21Artifact::Certificate(c) => to_json(&c),
            };
            write_text(&witness, &text)?;
            finish(report, &out, timing, started)
        }
        Command::Builtin { name, field, emit, emit_regular } => {
            let a = Arc::new(builtin_algebra(parse_field(&field)?, &parse_builtin(&name)?)?);
            let doc = AlgebraDoc::from_algebra(&a);
            write_text(&emit, &to_json(&doc))?;
            if let Some(path) = emit_regular {
                let m = BimoduleDoc::from_bimodule(&regular_bimodule(&a), Some(AlgebraSource::Inline(doc)));
                write_text(&path, &to_json(&m))?;
            }
            println!("{name} over {}: dimension {}", a.field(), a.dim());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
