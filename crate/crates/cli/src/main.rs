//! Command line front end: jet files in; classification reports, locus plot
//! data, transported jets, focal descriptors, and verification suite reports
//! out. Exit code 0 on success, 1 on domain errors, 2 on usage errors.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand, ValueEnum};
use curvloci::jet::MapGerm;
use curvloci::{transforms, GeomError, Rat};
use curvloci_harness::{default_trials, run_suite, HarnessError, SUITES};

#[derive(Parser)]
#[command(
    name = "curvloci",
    version,
    about = "Second and third order local invariants of surfaces in R^4/R^5, corank-1 \
             surfaces in R^4, and 3-manifolds in R^6, computed from polynomial jet files"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Comma-separated rational coordinates, e.g. "0,1" or "2/3,-1/2,0".
#[derive(Clone)]
struct RatList(Vec<Rat>);

impl FromStr for RatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let x = Rat::from_str(part).map_err(|e| format!("bad rational '{part}': {e}"))?;
            out.push(x);
        }
        Ok(RatList(out))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a germ and report its second order invariants
    Analyze {
        /// Jet file to read
        path: PathBuf,
        /// Output format (the analyze report is json)
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sample the curvature locus as plot data
    Locus {
        /// Jet file to read
        path: PathBuf,
        /// Number of sample points (at least 8)
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..))]
        samples: u32,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Project a germ along a direction and print the resulting jet
    #[command(group(
        clap::ArgGroup::new("direction").required(true).args(["tangent", "normal"])
    ))]
    Project {
        /// Jet file to read
        path: PathBuf,
        /// Tangent direction in source coordinates, e.g. "0,1"
        #[arg(long, value_name = "COORDS")]
        tangent: Option<RatList>,
        /// Normal direction, in normal or full ambient coordinates
        #[arg(long, value_name = "COORDS")]
        normal: Option<RatList>,
    },
    /// Cut a 3-manifold germ by a coordinate normal section and print the jet
    Section {
        /// Jet file to read
        path: PathBuf,
        /// Tangent coordinate whose vanishing defines the section plane
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=2))]
        axis: u8,
    },
    /// Describe the focal set of a corank-1 surface germ
    Focal {
        /// Jet file to read
        path: PathBuf,
        /// Output format (the focal report is json)
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a randomized verification suite and print its report
    Verify {
        /// Suite name, or "all" for every suite at its standard size
        #[arg(long, value_parser = suite_values())]
        suite: String,
        /// Trials to run (default: the suite's standard count)
        #[arg(long)]
        trials: Option<u64>,
        /// RNG seed; identical seeds give byte-identical reports
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn suite_values() -> PossibleValuesParser {
    let mut names: Vec<&'static str> = SUITES.to_vec();
    names.push("all");
    PossibleValuesParser::new(names)
}

enum Failure {
    Usage(String),
    Domain(String),
    SuiteFailed,
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        // The report on stdout already carries the failing trials.
        Err(Failure::SuiteFailed) => ExitCode::from(1),
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Analyze { path, format } => {
            require_json(format, "analyze")?;
            let g = read_germ(&path)?;
            let doc = report::analyze_report(&g)?;
            println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
            Ok(())
        }
        Cmd::Locus {
            path,
            samples,
            format,
        } => {
            let g = read_germ(&path)?;
            let table = report::locus_table(&g, samples as usize)?;
            match format {
                Format::Csv => print!("{}", table.to_csv()),
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&table.to_json()).expect("table serializes")
                    );
                }
            }
            Ok(())
        }
        Cmd::Project {
            path,
            tangent,
            normal,
        } => {
            let g = read_germ(&path)?;
            let out = match (tangent, normal) {
                (Some(u), None) => transforms::project_tangent(&g, &u.0)?,
                (None, Some(nu)) => transforms::project_normal(&g, &nu.0)?,
                _ => unreachable!("clap enforces exactly one direction"),
            };
            print!("{}", out.serialize());
            Ok(())
        }
        Cmd::Section { path, axis } => {
            let g = read_germ(&path)?;
            let sec = transforms::normal_section(&g, axis as usize)?;
            print!("{}", sec.germ.serialize());
            Ok(())
        }
        Cmd::Focal { path, format } => {
            require_json(format, "focal")?;
            let g = read_germ(&path)?;
            let doc = report::focal_report(&g)?;
            println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
            Ok(())
        }
        Cmd::Verify {
            suite,
            trials,
            seed,
        } => cmd_verify(&suite, trials, seed),
    }
}

fn require_json(format: Format, what: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Usage(format!("the {what} report is json only")));
    }
    Ok(())
}

fn read_germ(path: &Path) -> Result<MapGerm<Rat>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    Ok(MapGerm::parse(&text)?)
}

fn cmd_verify(suite: &str, trials: Option<u64>, seed: u64) -> Result<(), Failure> {
    if suite == "all" {
        let mut reports = Vec::new();
        let mut all_pass = true;
        for name in SUITES {
            let rep = run_suite(name, trials.unwrap_or_else(|| default_trials(name)), seed)?;
            all_pass &= rep.passed();
            reports.push(serde_json::to_value(&rep).expect("report serializes"));
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Array(reports))
                .expect("reports serialize")
        );
        if all_pass {
            Ok(())
        } else {
            Err(Failure::SuiteFailed)
        }
    } else {
        let rep = run_suite(suite, trials.unwrap_or_else(|| default_trials(suite)), seed)?;
        println!("{}", rep.to_json());
        if rep.passed() {
            Ok(())
        } else {
            Err(Failure::SuiteFailed)
        }
    }
}
