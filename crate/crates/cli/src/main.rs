use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use padic_amoeba::{Error, Prime};
use pamoeba::{exit_code, run, Format, Input, JobSpec, Mode};

/// Exact non-Archimedean A-discriminant amoebae.
#[derive(Debug, Parser)]
#[command(name = "pamoeba", version)]
struct Args {
    /// Support matrix A (text or JSON); its kernel is computed.
    #[arg(long, value_name = "FILE")]
    matrix_a: Option<PathBuf>,
    /// Kernel matrix B (text or JSON). Takes precedence over --matrix-a.
    #[arg(long, value_name = "FILE")]
    matrix_b: Option<PathBuf>,
    /// The prime p. Optional in extremal mode, where the smallest working p is searched.
    #[arg(long, value_name = "P")]
    prime: Option<String>,
    #[arg(long, value_enum, default_value = "components")]
    mode: Mode,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, value_name = "K", default_value_t = 3)]
    extremal_k: usize,
    /// Random evaluations in oracle-check mode.
    #[arg(long, value_name = "N", default_value_t = 100)]
    samples: usize,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
}

fn spec_of(args: Args) -> Result<(JobSpec, Option<PathBuf>, Vec<String>), Error> {
    let mut warnings = Vec::new();
    let input = match (args.matrix_a, args.matrix_b) {
        (Some(_), Some(b)) => {
            warnings.push("both --matrix-a and --matrix-b given; using B, ignoring A".into());
            Input::Kernel(b)
        }
        (None, Some(b)) => Input::Kernel(b),
        (Some(a), None) => Input::Support(a),
        (None, None) => Input::None,
    };
    let prime = args.prime.as_deref().map(Prime::parse).transpose()?;
    let spec = JobSpec {
        input,
        prime,
        mode: args.mode,
        format: args.format,
        extremal_k: args.extremal_k,
        samples: args.samples,
        seed: args.seed,
    };
    Ok((spec, args.out, warnings))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = spec_of(args).and_then(|(spec, out, mut warnings)| {
        let artifact = run(&spec)?;
        warnings.extend(artifact.warnings);
        for w in &warnings {
            eprintln!("warning: {w}");
        }
        match out {
            Some(path) => std::fs::write(&path, &artifact.body)
                .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{}", artifact.body);
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
