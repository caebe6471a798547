use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use lune_forge_core::combinatorics::DEFAULT_CAP;
use lune_forge_core::realizer::{
    heuristic_layout, search_order, solve, verify_realization, DeltaMode, Realization,
    RealizationJson, RealizeError, SolverConfig, Status,
};
use lune_forge_core::render::render_svg;
use lune_forge_core::tetra::{
    bounds, theorem1_check, verify_gentiling, verify_reptiling, verify_tiling, TetTiling,
    Tetrahedron, Theorem1Outcome,
};
use lune_forge_core::{enumerate_candidates, CombError, CombinatorialSubdivision, ConstraintSet};

/// Acute dissections of spherical lunes and tetrahedral tiling checks.
#[derive(Parser)]
#[command(name = "lune-forge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct SolverArgs {
    #[arg(long, default_value_t = 0.01)]
    margin: f64,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 400)]
    max_iterations: u64,
    /// Fix the lune angle instead of optimizing it.
    #[arg(long)]
    delta: Option<f64>,
}

impl SolverArgs {
    fn config(self) -> Result<SolverConfig, Failure> {
        if self.margin.is_nan() || self.margin <= 0.0 || self.restarts == 0 {
            return Err(Failure::Usage(
                "--margin must be positive and --restarts at least 1".into(),
            ));
        }
        Ok(SolverConfig {
            margin: self.margin,
            restarts: self.restarts,
            seed: self.seed,
            max_iterations: self.max_iterations,
            delta_mode: self.delta.map_or(DeltaMode::Free, DeltaMode::Fixed),
            ..SolverConfig::default()
        })
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum TetraCheck {
    Acute,
    Tiling,
    Gentile,
    Reptile,
    Theorem1,
}

#[derive(Subcommand)]
enum Command {
    /// List canonical subdivisions with `r` faces.
    Enumerate {
        #[arg(long)]
        r: usize,
        /// `full`, `relaxed-figure1`, `none`, or a comma list of
        /// triangular, boundary, degree-full, degree-side-hanging, count.
        #[arg(long, default_value = "full")]
        constraints: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize the subdivisions in a file.
    Solve {
        #[arg(long)]
        subdivision: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize every full-constraint candidate with `r` faces.
    Search {
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for per-candidate subdivision and realization files.
        #[arg(long)]
        certificates: Option<PathBuf>,
    },
    /// Check a realization certificate.
    Verify {
        #[arg(long)]
        subdivision: PathBuf,
        #[arg(long)]
        realization: PathBuf,
        #[arg(long, default_value_t = 0.005)]
        eps: f64,
    },
    /// Draw a subdivision as SVG, from a realization or a heuristic layout.
    Render {
        #[arg(long)]
        subdivision: PathBuf,
        #[arg(long)]
        realization: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a tetrahedron or a tiling.
    Tetra {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        check: TetraCheck,
    },
    /// Tile-count bounds for a minimal count `b`.
    Bounds {
        #[arg(long)]
        b: usize,
    },
}

enum Failure {
    Io(String),
    Usage(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Check(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Usage(m) | Failure::Check(m) => m,
        }
    }
}

impl From<CombError> for Failure {
    fn from(e: CombError) -> Self {
        match e {
            CombError::CapExceeded { .. }
            | CombError::FaceCountTooSmall { .. }
            | CombError::UnsupportedConstraints(_) => Failure::Usage(e.to_string()),
            CombError::Json(_) => Failure::Io(e.to_string()),
            CombError::MalformedMap(_) => Failure::Check(e.to_string()),
        }
    }
}

impl From<RealizeError> for Failure {
    fn from(e: RealizeError) -> Self {
        match e {
            RealizeError::Comb(c) => c.into(),
            RealizeError::Json(_) => Failure::Io(e.to_string()),
            RealizeError::InvalidCandidate(_) | RealizeError::ParameterMismatch(_) => {
                Failure::Check(e.to_string())
            }
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out`, or to standard output when no path is given.
fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A file holding either one subdivision or a list of them.
fn read_subdivisions(path: &Path) -> Result<Vec<CombinatorialSubdivision>, Failure> {
    let value: serde_json::Value = read_json(path)?;
    let parse = |v: serde_json::Value| {
        serde_json::from_value::<CombinatorialSubdivision>(v)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    };
    match value {
        serde_json::Value::Array(items) => items.into_iter().map(parse).collect(),
        v => Ok(vec![parse(v)?]),
    }
}

fn read_one_subdivision(path: &Path) -> Result<CombinatorialSubdivision, Failure> {
    let mut all = read_subdivisions(path)?;
    if all.len() != 1 {
        return Err(Failure::Usage(format!(
            "{} holds {} subdivisions, expected one",
            path.display(),
            all.len()
        )));
    }
    Ok(all.remove(0))
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("1 {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Enumerate {
            r,
            constraints,
            out,
        } => {
            if r > DEFAULT_CAP {
                return Err(CombError::CapExceeded {
                    r,
                    cap: DEFAULT_CAP,
                }
                .into());
            }
            let c: ConstraintSet = constraints
                .parse()
                .map_err(|e: CombError| Failure::Usage(e.to_string()))?;
            let found = enumerate_candidates(r, c)?;
            if let Some(p) = out {
                write_file(&p, &to_json(&found))?;
            }
            println!("{}", plural(found.len(), "candidate"));
        }
        Command::Solve {
            subdivision,
            solver,
            out,
        } => {
            let config = solver.config()?;
            let subs = read_subdivisions(&subdivision)?;
            let reports = subs
                .iter()
                .map(|s| solve(s, &config))
                .collect::<Result<Vec<_>, _>>()?;
            let realized = reports
                .iter()
                .filter(|r| r.status == Status::Realized)
                .count();
            emit(out.as_deref(), &to_json(&reports))?;
            eprintln!(
                "Realized: {realized}, Undetermined: {}",
                reports.len() - realized
            );
        }
        Command::Search {
            r,
            solver,
            out,
            certificates,
        } => {
            let config = solver.config()?;
            let report = search_order(r, &config)?;
            if let Some(dir) = &certificates {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
                let subs = enumerate_candidates(r, ConstraintSet::full())?;
                for (c, s) in report.candidates.iter().zip(&subs) {
                    write_file(
                        &dir.join(format!("candidate_{}.json", c.index)),
                        &to_json(s),
                    )?;
                    write_file(
                        &dir.join(format!("realization_{}.json", c.index)),
                        &to_json(&c.report.best_realization),
                    )?;
                }
            }
            if let Some(p) = &out {
                write_file(p, &to_json(&report))?;
            }
            println!(
                "{}; Realized: {}, Undetermined: {}",
                plural(report.candidates.len(), "candidate"),
                report.realized,
                report.undetermined
            );
        }
        Command::Verify {
            subdivision,
            realization,
            eps,
        } => {
            let s = read_one_subdivision(&subdivision)?;
            let json: RealizationJson = read_json(&realization)?;
            let r = Realization::from_json(&json)?;
            let report = verify_realization(&s, &r, eps)?;
            print!("{}", to_json(&report));
            if !report.pass {
                return Err(Failure::Check(format!(
                    "{} violation(s)",
                    report.violations.len()
                )));
            }
        }
        Command::Render {
            subdivision,
            realization,
            out,
        } => {
            let s = read_one_subdivision(&subdivision)?;
            let (r, verified) = match realization {
                Some(p) => {
                    let r = Realization::from_json(&read_json(&p)?)?;
                    let ok = verify_realization(&s, &r, 0.005)?.pass;
                    (r, ok)
                }
                None => (heuristic_layout(&s, 1, DeltaMode::Free), false),
            };
            write_file(&out, &render_svg(&s, &r, verified))?;
            println!(
                "wrote {} ({})",
                out.display(),
                if verified { "verified" } else { "not verified" }
            );
        }
        Command::Tetra { input, check } => return run_tetra(&input, check),
        Command::Bounds { b } => {
            let x = bounds(b).map_err(|e| Failure::Usage(e.to_string()))?;
            println!(
                "gentile ≥ {}, reptile ≥ {}, improved reptile ≥ {}",
                x.gentile, x.reptile, x.improved_reptile
            );
        }
    }
    Ok(())
}

fn run_tetra(input: &Path, check: TetraCheck) -> Result<(), Failure> {
    let value: serde_json::Value = read_json(input)?;
    let bad = |e: serde_json::Error| Failure::Io(format!("{}: {e}", input.display()));
    let geometry = |e: lune_forge_core::tetra::TetraError| Failure::Check(e.to_string());
    let tiling = || serde_json::from_value::<TetTiling>(value.clone()).map_err(bad);
    let pass = match check {
        TetraCheck::Acute => {
            let t: Tetrahedron = match value.get("parent") {
                Some(p) => serde_json::from_value(p.clone()).map_err(bad)?,
                None => serde_json::from_value(value.clone()).map_err(bad)?,
            };
            let dihedrals = t.dihedral_angles().map_err(geometry)?;
            let acute = t.is_acute().map_err(geometry)?;
            print!(
                "{}",
                to_json(&serde_json::json!({ "acute": acute, "dihedral_angles": dihedrals }))
            );
            acute
        }
        TetraCheck::Tiling => {
            let rep = verify_tiling(&tiling()?).map_err(geometry)?;
            print!("{}", to_json(&rep));
            rep.pass
        }
        TetraCheck::Gentile | TetraCheck::Reptile => {
            let t = tiling()?;
            let rep = if matches!(check, TetraCheck::Gentile) {
                verify_gentiling(&t)
            } else {
                verify_reptiling(&t)
            }
            .map_err(geometry)?;
            print!("{}", to_json(&rep));
            rep.pass
        }
        TetraCheck::Theorem1 => {
            let rep = theorem1_check(&tiling()?).map_err(geometry)?;
            print!("{}", to_json(&rep));
            rep.outcome != Theorem1Outcome::Contradiction
        }
    };
    if pass {
        Ok(())
    } else {
        Err(Failure::Check("check failed".into()))
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("LUNE_FORGE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
