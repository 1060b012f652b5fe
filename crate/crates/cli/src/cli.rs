//! Argument grammar and subcommand execution.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use kspectra_core::counterexample::{search_max_violation, violation, violation_supremum};
use kspectra_core::rewire::{climb, ShiftMove};
use kspectra_core::spectral::graph_spectrum;
use kspectra_core::stats::{l_max, simplicial_vertices};
use kspectra_core::verify::grid;
use kspectra_core::{enumerate_ktrees, Budget, Family, NamedFamily, DEFAULT_GAP_TOL};
use serde::Serialize;
use serde_json::json;

use crate::driver::verify_grid;
use crate::format::{read_graph, sig12, sig12_all, to_graph6, GraphJson};
use crate::report::{overall, Provenance, Status, VerifyConfig};

pub const GAP_TOL_ENV: &str = "KTREE_GAP_TOL";

#[derive(Debug, Parser)]
#[command(name = "kspectra", version, about = "Signless Laplacian spectra of k-trees")]
pub struct Cli {
    /// Gap below which two indices count as tied; overrides KTREE_GAP_TOL.
    #[arg(long, global = true)]
    pub gap_tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Json,
    Graph6,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
        format!("unknown family {s:?}; expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named k-tree.
    Families {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
    },
    /// List all k-trees on n vertices up to isomorphism, one per line.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        count_only: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
    },
    /// Simplicial set and clique statistic of a graph.
    Stats {
        /// JSON or graph6 file, `-` for stdin.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Signless Laplacian spectrum of a graph.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        /// Also print the Perron vector and residual.
        #[arg(long)]
        full: bool,
    },
    /// Shift a k-tree step by step up to the k-star.
    Climb {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Also print the individual shifts of each step.
        #[arg(long)]
        trace: bool,
    },
    /// Exhaustively check the ranking and characterization claims on a grid.
    Verify {
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, default_value_t = 13)]
        n_max: usize,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write one CSV row per class here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Skip the constructive step campaign.
        #[arg(long)]
        skip_steps: bool,
    },
    /// Search for violations of the sum inequality on (0, 1].
    Counterexample {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

/// Flag, then environment, then the library default.
pub fn resolve_gap_tol(flag: Option<f64>, env: Option<&str>) -> Result<f64> {
    let tol = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(s)) => s
            .trim()
            .parse()
            .with_context(|| format!("{GAP_TOL_ENV}={s:?} is not a number"))?,
        (None, None) => DEFAULT_GAP_TOL,
    };
    ensure!(
        tol.is_finite() && tol >= 0.0,
        "gap tolerance must be finite and nonnegative, got {tol}"
    );
    Ok(tol)
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let env = std::env::var(GAP_TOL_ENV).ok();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(&cli, env.as_deref(), &mut out) {
        Ok(status) => status.exit_code(),
        Err(e) if is_broken_pipe(&e) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// A closed stdout (e.g. piped into `head`) ends the output, not the run.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<std::io::Error>()
        .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn write_graph(out: &mut dyn Write, g: &kspectra_core::Graph, format: GraphFormat) -> Result<()> {
    match format {
        GraphFormat::Json => writeln!(out, "{}", serde_json::to_string(&GraphJson::from_graph(g))?)?,
        GraphFormat::Graph6 => writeln!(out, "{}", to_graph6(g)?)?,
    }
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

#[derive(Serialize)]
struct MoveJson<'a> {
    source: usize,
    target: usize,
    shifted: &'a [usize],
}

impl<'a> From<&'a ShiftMove> for MoveJson<'a> {
    fn from(mv: &'a ShiftMove) -> Self {
        MoveJson {
            source: mv.source,
            target: mv.target,
            shifted: &mv.shifted,
        }
    }
}

/// Zero eigenvalues come out of the solver as tiny signed noise.
const EIGEN_ZERO: f64 = 1e-10;

pub fn execute(cli: &Cli, env_gap_tol: Option<&str>, out: &mut dyn Write) -> Result<Status> {
    let gap_tol = resolve_gap_tol(cli.gap_tol, env_gap_tol)?;
    match &cli.command {
        &Command::Families { family, n, k, format } => {
            let g = NamedFamily::new(family, n, k)?.build();
            write_graph(out, &g, format)?;
        }
        &Command::Enumerate {
            n,
            k,
            count_only,
            format,
        } => {
            Budget::default().check(n, k)?;
            let all = enumerate_ktrees(n, k)?;
            if count_only {
                writeln!(out, "{}", all.len())?;
            } else {
                for g in &all {
                    write_graph(out, g, format)?;
                }
            }
        }
        Command::Stats { input, k } => {
            let g = read_graph(input)?;
            ensure!(*k >= 1, "k must be at least 1");
            let (l, witness) = l_max(&g, *k)?;
            write_json(
                out,
                &json!({ "S1": simplicial_vertices(&g, *k), "l": l, "witness": witness }),
            )?;
        }
        Command::Spectrum { input, full } => {
            let g = read_graph(input)?;
            let spec = graph_spectrum(&g)?;
            let eigenvalues: Vec<f64> = spec
                .eigenvalues
                .iter()
                .map(|&q| if q.abs() < EIGEN_ZERO { 0.0 } else { sig12(q) })
                .collect();
            if *full {
                write_json(
                    out,
                    &json!({
                        "eigenvalues": eigenvalues,
                        "perron": sig12_all(&spec.perron),
                        "residual": sig12(spec.residual),
                    }),
                )?;
            } else {
                write_json(out, &json!({ "eigenvalues": eigenvalues }))?;
            }
        }
        Command::Climb { input, k, trace } => {
            let g = read_graph(input)?;
            let path = climb(&g, *k, gap_tol)?;
            for (i, p) in path.iter().enumerate() {
                let mut line = json!({
                    "step": i,
                    "graph": GraphJson::from_graph(&p.graph),
                    "S1": p.simplicial,
                    "l": p.l,
                    "q1": sig12(p.q1),
                    "branch": p.branch.map(|b| format!("{b:?}")),
                });
                if *trace {
                    let moves: Vec<MoveJson> = p.moves.iter().map(MoveJson::from).collect();
                    line["moves"] = serde_json::to_value(moves)?;
                }
                write_json(out, &line)?;
            }
        }
        &Command::Verify {
            k_min,
            k_max,
            n_max,
            ref report,
            ref csv,
            jobs,
            skip_steps,
        } => {
            ensure!(
                k_min >= 1 && k_min <= k_max,
                "need 1 <= k-min <= k-max, got {k_min}..{k_max}"
            );
            let points = grid(k_min, k_max, n_max);
            if points.is_empty() {
                bail!("grid is empty: n-max {n_max} is below k-min + 1");
            }
            for &(n, k) in &points {
                Budget::default().check(n, k)?;
            }
            let outcomes = verify_grid(&points, gap_tol, !skip_steps, jobs)?;
            for o in &outcomes {
                writeln!(out, "{}", o.summary())?;
            }
            let provenance = Provenance::new(VerifyConfig {
                k_min,
                k_max,
                n_max,
                gap_tol,
                steps: !skip_steps,
            });
            if let Some(path) = report {
                let reports = outcomes
                    .iter()
                    .map(|o| o.to_json(&provenance))
                    .collect::<Result<Vec<_>>>()?;
                let mut text = serde_json::to_string_pretty(&reports)?;
                text.push('\n');
                std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
            }
            if let Some(path) = csv {
                let mut writer =
                    csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
                for o in &outcomes {
                    for row in o.csv_rows()? {
                        writer.serialize(row)?;
                    }
                }
                writer.flush()?;
            }
            let status = overall(&outcomes);
            writeln!(out, "overall: {}", status.name())?;
            return Ok(status);
        }
        &Command::Counterexample { k, trials, seed } => {
            let best = search_max_violation(k, trials, seed)?;
            let reference = |a: f64, b: f64| -> Result<serde_json::Value> {
                Ok(json!({ "a": [a], "b": [b], "violation": sig12(violation(&[a], &[b])?) }))
            };
            write_json(
                out,
                &json!({
                    "witness": {
                        "a": sig12_all(&best.a),
                        "b": sig12_all(&best.b),
                        "violation": sig12(best.violation),
                    },
                    "supremum": violation_supremum(k),
                    "reference": {
                        "b_below_a": reference(0.9, 0.1)?,
                        "equal_below_one": reference(0.5, 0.5)?,
                        "equal_at_one": reference(1.0, 1.0)?,
                    },
                }),
            )?;
        }
    }
    Ok(Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (Result<Status>, String) {
        let cli = Cli::try_parse_from(std::iter::once("kspectra").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let status = execute(&cli, None, &mut buf);
        (status, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn gap_tol_resolution() {
        assert_eq!(resolve_gap_tol(None, None).unwrap(), DEFAULT_GAP_TOL);
        assert_eq!(resolve_gap_tol(None, Some("1e-6")).unwrap(), 1e-6);
        assert_eq!(resolve_gap_tol(Some(1e-4), Some("1e-6")).unwrap(), 1e-4);
        assert!(resolve_gap_tol(None, Some("tiny")).is_err());
        assert!(resolve_gap_tol(Some(-1.0), None).is_err());
        assert!(resolve_gap_tol(Some(f64::NAN), None).is_err());
    }

    #[test]
    fn families_json() {
        let (status, text) = run_capture(&["families", "--family", "g2", "--n", "9", "--k", "3", "--format", "json"]);
        assert_eq!(status.unwrap(), Status::Pass);
        let g: GraphJson = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(g.n, 9);
        assert_eq!(
            g.to_graph().unwrap(),
            NamedFamily::new(Family::G2, 9, 3).unwrap().build()
        );
    }

    #[test]
    fn enumerate_count() {
        let (status, text) = run_capture(&["enumerate", "--n", "8", "--k", "2", "--count-only"]);
        assert_eq!(status.unwrap(), Status::Pass);
        assert_eq!(text, "39\n");
    }

    #[test]
    fn infeasible_parameters_are_errors() {
        assert!(run_capture(&["families", "--family", "g4", "--n", "6", "--k", "1"])
            .0
            .is_err());
        assert!(run_capture(&["enumerate", "--n", "20", "--k", "2"]).0.is_err());
        assert!(run_capture(&["verify", "--k-min", "3", "--k-max", "2"]).0.is_err());
    }

    #[test]
    fn grammar_rejects_unknown_input() {
        assert!(Cli::try_parse_from(["kspectra", "families", "--family", "g9", "--n", "5", "--k", "1"]).is_err());
        assert!(Cli::try_parse_from(["kspectra", "plot"]).is_err());
        assert!(Cli::try_parse_from(["kspectra"]).is_err());
    }
}
