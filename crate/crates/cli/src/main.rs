use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use epclass::generate;
use epclass::{classify_batch, read_matrix_file, to_text, verify_geometry, ClassifyOptions, CliError};

#[derive(Parser)]
#[command(name = "epclass", version, about = "Classify integer matrices defining EP manifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Working precision of the numeric construction, in bits.
    #[arg(long, default_value_t = 128)]
    precision: u32,
    /// Tolerance for relation checks.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Tolerance for algebraic identities.
    #[arg(long, default_value_t = 1e-10)]
    tol_identities: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full pipeline on one or more matrix files.
    Classify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
        /// Write the structured report here (an array for several files).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also look for splits after a simultaneous row/column permutation.
        #[arg(long)]
        permutation_search: bool,
        /// Skip the search for invariant sublattices.
        #[arg(long)]
        no_lattice_search: bool,
    },
    /// Write a generated matrix.
    Generate {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Geometry checks only.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Companion matrix of a monic polynomial with constant term -1.
    Companion {
        #[arg(long)]
        poly: String,
        #[arg(short, long)]
        o: Option<PathBuf>,
    },
    /// Block-diagonal matrix diag(N, P).
    Block {
        #[arg(long)]
        n: PathBuf,
        #[arg(long)]
        p: PathBuf,
        #[arg(short, long)]
        o: Option<PathBuf>,
    },
    /// U M U^-1 for a random unimodular U.
    Conjugate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(short, long)]
        o: Option<PathBuf>,
    },
}

fn options(c: &Common, samples: usize) -> ClassifyOptions {
    ClassifyOptions {
        precision: c.precision,
        tol_relations: c.tol,
        tol_identities: c.tol_identities,
        samples,
        seed: c.seed,
        ..ClassifyOptions::default()
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.cmd {
        Cmd::Classify {
            files,
            common,
            json,
            permutation_search,
            no_lattice_search,
        } => {
            let opts = ClassifyOptions {
                permutation_search,
                lattice_search: !no_lattice_search,
                ..options(&common, 100)
            };
            let results = classify_batch(&files, &opts);
            let mut code = 0u8;
            let mut reports = Vec::new();
            for (path, r) in files.iter().zip(results) {
                if files.len() > 1 {
                    println!("== {}", path.display());
                }
                match r {
                    Ok(rep) => {
                        print!("{}", rep.summary());
                        if !rep.geometry_passed() {
                            code = code.max(2);
                        }
                        reports.push(rep);
                    }
                    Err(e) => {
                        eprintln!("error: {}: {e}", path.display());
                        code = code.max(e.exit_code());
                    }
                }
            }
            if let Some(p) = json {
                let text = if files.len() == 1 {
                    reports.first().map(|r| r.to_json())
                } else {
                    Some(serde_json::to_string_pretty(&reports).expect("reports serialize"))
                };
                if let Some(t) = text {
                    write_out(Some(&p), &(t + "\n"))?;
                }
            }
            Ok(code)
        }
        Cmd::Generate { kind } => {
            let (m, out) = match kind {
                GenKind::Companion { poly, o } => (generate::companion_from_str(&poly)?, o),
                GenKind::Block { n, p, o } => {
                    (generate::block(&read_matrix_file(&n)?, &read_matrix_file(&p)?)?, o)
                }
                GenKind::Conjugate { input, seed, steps, o } => {
                    (generate::conjugate(&read_matrix_file(&input)?, seed, steps)?, o)
                }
            };
            write_out(out.as_deref(), &to_text(&m))?;
            Ok(0)
        }
        Cmd::Verify { file, samples, common } => {
            let checks = verify_geometry(&read_matrix_file(&file)?, &options(&common, samples))?;
            let mut code = 0;
            for c in &checks {
                println!(
                    "{:<28} {}  max deviation {:.3e} (tol {:.1e})",
                    c.name,
                    if c.passed { "ok  " } else { "FAIL" },
                    c.max_deviation,
                    c.tol
                );
                if !c.passed {
                    code = 2;
                }
            }
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
