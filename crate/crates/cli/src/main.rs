use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use aqg::hopf::HopfAlgebra;
use aqg::io::{JsonScalar, StructureFile};
use aqg::report::Report;
use aqg::scalar::{C64, QC};
use aqg::suite::{self, KestenArgs, ModularArgs, Options};
use aqg::Error;

#[derive(Parser)]
#[command(name = "aqg", version, about = "Checks for finite-dimensional algebraic quantum groups")]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the tolerance of every residual check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Read structure files in exact rational arithmetic.
    #[arg(long, global = true)]
    exact: bool,
    /// Also write the report as JSON (`-` for stdout instead of text).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hopf *-algebra axioms, Haar integral and modular map.
    Verify { file: PathBuf },
    /// Build the dual quantum group and check double duality.
    Dualize {
        file: PathBuf,
        /// Write the dual structure file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// GNS pair of the Haar integral and the multiplicative unitary.
    Gns { file: PathBuf },
    /// Pentagon equation and implementation identities of W.
    Pentagon { file: PathBuf },
    /// Co-amenability and invariant-mean checks.
    Amen {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Lower bounds on the norm of the averaging element of a group.
    Kesten {
        /// `Z^d`, `F_k`, `finite:<S3|D4|Q8|Z<n>|table.json>` or `product:<spec>,<spec>`.
        #[arg(long)]
        group: String,
        /// `std`, or generators separated by `;`.
        #[arg(long, default_value = "std")]
        gens: String,
        #[arg(long, default_value_t = 8)]
        radius: usize,
        #[arg(long, default_value_t = 10)]
        moments: usize,
    },
    /// Modular family, modular flow and KMS condition.
    Modular {
        file: PathBuf,
        /// Degree truncation for relations files.
        #[arg(long)]
        truncate: Option<usize>,
        /// Deformation parameter, e.g. `1/2` or `0.5`.
        #[arg(long)]
        q: Option<String>,
        /// Sampled times, comma-separated.
        #[arg(long = "t", value_delimiter = ',', allow_hyphen_values = true)]
        times: Option<Vec<f64>>,
    },
    /// Write the structure file of C(G) or K(G), or the group table of G.
    Export {
        /// `C` (group algebra), `K` (function algebra) or `table`.
        kind: String,
        /// `S3`, `D4`, `Q8`, `Z<n>` or a group table file.
        group: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Outcome {
    Checked(Report),
    /// Advisory reports never fail.
    Advisory(Report),
    Written,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidStructure(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|e| Error::InvalidStructure(format!("cannot write {}: {e}", path.display())))
}

fn load<T: JsonScalar>(path: &Path) -> Result<(String, HopfAlgebra<T>), Error> {
    let file = StructureFile::parse(&read(path)?)?;
    let tol = if T::EXACT { 0.0 } else { suite::IDENTITY_TOL };
    let h = file.to_hopf(tol)?;
    Ok((file.name, h))
}

fn run_structure<T: JsonScalar>(command: &Command, o: &Options) -> Result<Outcome, Error> {
    let (file, out) = match command {
        Command::Verify { file } | Command::Gns { file } | Command::Pentagon { file } | Command::Amen { file, .. } => {
            (file, None)
        }
        Command::Dualize { file, out } => (file, out.as_ref()),
        _ => unreachable!("not a structure command"),
    };
    let input = file.display().to_string();
    let (name, h) = load::<T>(file)?;
    let report = match command {
        Command::Verify { .. } => suite::verify(&input, &name, &h, o),
        Command::Dualize { .. } => {
            let (report, dual) = suite::dualize(&input, &name, &h, o)?;
            if let Some(path) = out {
                write(path, &dual.to_json())?;
            }
            report
        }
        Command::Gns { .. } => suite::gns(&input, &h, o)?,
        Command::Pentagon { .. } => suite::pentagon(&input, &h, o)?,
        Command::Amen { .. } => suite::amen(&input, &h, o)?,
        _ => unreachable!(),
    };
    Ok(Outcome::Checked(report))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let mut o = Options { tol: cli.tol, seed: cli.seed, ..Options::default() };
    match &cli.command {
        Command::Amen { samples, .. } => {
            o.samples = *samples;
            if cli.exact {
                run_structure::<QC>(&cli.command, &o)
            } else {
                run_structure::<C64>(&cli.command, &o)
            }
        }
        Command::Verify { .. } | Command::Dualize { .. } | Command::Gns { .. } | Command::Pentagon { .. } => {
            if cli.exact {
                run_structure::<QC>(&cli.command, &o)
            } else {
                run_structure::<C64>(&cli.command, &o)
            }
        }
        Command::Kesten { group, gens, radius, moments } => {
            let args = KestenArgs { group: group.clone(), gens: gens.clone(), radius: *radius, moments: *moments };
            Ok(Outcome::Advisory(suite::kesten(&args, &o)?))
        }
        Command::Modular { file, truncate, q, times } => {
            let args = ModularArgs { truncate: *truncate, q: q.clone(), times: times.clone() };
            Ok(Outcome::Checked(suite::modular(&file.display().to_string(), &read(file)?, &args, &o)?))
        }
        Command::Export { kind, group, out } => {
            let json = suite::export(kind, group)?;
            match out {
                Some(path) => write(path, &json)?,
                None => print!("{json}"),
            }
            Ok(Outcome::Written)
        }
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Error> {
    match &cli.json {
        Some(p) if p.as_os_str() == "-" => print!("{}", report.to_json()),
        Some(p) => {
            write(p, &report.to_json())?;
            print!("{}", report.to_text());
        }
        None => print!("{}", report.to_text()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|outcome| {
        match &outcome {
            Outcome::Checked(r) | Outcome::Advisory(r) => emit(&cli, r)?,
            Outcome::Written => {}
        }
        Ok(outcome)
    });
    match outcome {
        Ok(Outcome::Checked(r)) if !r.passed() => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
