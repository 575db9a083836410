//! Command line driver: solve, geometry, enumerate, the cached pipeline,
//! and table rendering.

mod cache;
mod error;
mod reference;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use log::{info, LevelFilter};
use prymcusp::cuspgeom::{enumerate_geometries, GeometryPair};
use prymcusp::origami::{enumerate_separatrix_diagrams, run_geometries, CandidateReport};
use prymcusp::solver::{enumerate_solutions, verify_resultant_identity, RelationSolution, Stratum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use cache::{read, write_if_changed, Cache};
use error::{CliError, Result};
use render::Table;

#[derive(Parser, Debug)]
#[command(name = "prymcusp", version, about = "Cusp data and candidate surfaces for Prym(2,1,1) and Prym(2,2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// 2-1-1 or 2-2
    #[arg(long, global = true)]
    stratum: Option<Stratum>,
    /// output file (stdout when absent); identical content is not rewritten
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// json for stage data, md or csv for tables (render defaults to md)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// worker threads
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// compare results with the published tables; exit 3 on disagreement
    #[arg(long, global = true)]
    assert_paper: bool,
    #[arg(long, global = true, env = "PRYMCUSP_CACHE_DIR", default_value = ".prymcusp-cache")]
    cache_dir: PathBuf,
    #[arg(long, global = true, default_value = "warn")]
    log_level: LevelFilter,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the torsion equation in roots of unity.
    Solve {
        /// also verify the resultant identity (exit 2 on failure)
        #[arg(long)]
        with_identity_check: bool,
    },
    /// Pair solutions into cusp geometries.
    Geometry {
        #[arg(long)]
        solutions: PathBuf,
    },
    /// Enumerate arithmetic surfaces and candidates.
    Enumerate {
        #[arg(long)]
        geometries: PathBuf,
        /// ALL or a diagram index
        #[arg(long, default_value = "ALL")]
        diagram: DiagramSel,
    },
    /// All stages, with cached intermediate output.
    Pipeline,
    /// Render stage output as a table.
    Render {
        #[arg(long, value_enum)]
        table: TableKind,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableKind {
    Solutions,
    Geometries,
    Sd4,
    Algo,
}

#[derive(Clone, Copy, Debug)]
enum DiagramSel {
    All,
    Index(usize),
}

impl FromStr for DiagramSel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(DiagramSel::All);
        }
        s.parse().map(DiagramSel::Index).map_err(|_| format!("expected ALL or an index, got `{s}`"))
    }
}

/// What `pipeline` writes in JSON form.
#[derive(Debug, Serialize, Deserialize)]
struct PipelineSummary {
    stratum: Stratum,
    solutions: usize,
    geometries: usize,
    per_diagram_candidates: Vec<usize>,
    per_diagram_after_filter: Vec<usize>,
    total_candidates: usize,
    final_candidates: usize,
    trace_fields: Vec<u64>,
    report: CandidateReport,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ReportInput {
    Report(CandidateReport),
    Summary(Box<PipelineSummary>),
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("stage data serializes");
    v.push(b'\n');
    v
}

fn parse<T: DeserializeOwned>(bytes: &[u8], path: &Path) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|source| CliError::Json { path: path.display().to_string(), source })
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse(&read(path)?, path)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => write_if_changed(p, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn table_text(tables: &[Table], format: Format) -> Vec<u8> {
    let parts: Vec<String> = tables.iter().map(|t| if format == Format::Csv { t.csv() } else { t.markdown() }).collect();
    parts.join("\n").into_bytes()
}

/// `--stratum` if given, else the stratum recorded in the input; the two
/// must agree.
fn resolve_stratum(flag: Option<Stratum>, found: Option<Stratum>) -> Result<Stratum> {
    match (flag, found) {
        (Some(a), Some(b)) if a != b => Err(CliError::Input(format!("--stratum {a} but the input is for {b}"))),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Err(CliError::Input("--stratum is required".into())),
    }
}

fn check(mismatches: Vec<String>) -> Result<()> {
    if mismatches.is_empty() {
        return Ok(());
    }
    for m in &mismatches {
        eprintln!("mismatch: {m}");
    }
    Err(CliError::Mismatch(mismatches))
}

fn identity(stratum: Stratum) -> Result<()> {
    if verify_resultant_identity(stratum) {
        info!("resultant identity holds for {stratum}");
        Ok(())
    } else {
        Err(CliError::Identity(stratum))
    }
}

fn geometries_of(stratum: Stratum, sols: &[RelationSolution]) -> Result<Vec<GeometryPair>> {
    if let Some(s) = sols.iter().find(|s| s.stratum != stratum) {
        return Err(CliError::Input(format!("solution list mixes strata ({} and {stratum})", s.stratum)));
    }
    Ok(enumerate_geometries(stratum, sols))
}

fn enumerate(stratum: Stratum, geoms: &[GeometryPair], diagram: DiagramSel) -> Result<CandidateReport> {
    let only = match diagram {
        DiagramSel::All => None,
        DiagramSel::Index(i) => {
            let n = enumerate_separatrix_diagrams(stratum).len();
            if i >= n {
                return Err(CliError::Input(format!("diagram index {i} out of range (Prym({stratum}) has {n})")));
            }
            Some(i)
        }
    };
    Ok(run_geometries(stratum, geoms, only))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
            .map_err(|e| CliError::Input(format!("cannot start {jobs} workers: {e}")))?;
    }
    let format = cli.format.unwrap_or(Format::Json);
    let out = cli.out.as_deref();
    match cli.command {
        Command::Solve { with_identity_check } => {
            let stratum = resolve_stratum(cli.stratum, None)?;
            if with_identity_check {
                identity(stratum)?;
            }
            let sols = enumerate_solutions(stratum)?;
            info!("{} solutions", sols.len());
            let bytes = match format {
                Format::Json => to_json(&sols),
                f => table_text(&[render::solutions(&sols)], f),
            };
            emit(out, &bytes)?;
            if cli.assert_paper {
                check(reference::check_solutions(stratum, &sols))?;
            }
        }
        Command::Geometry { solutions } => {
            let sols: Vec<RelationSolution> = load(&solutions)?;
            let stratum = resolve_stratum(cli.stratum, sols.first().map(|s| s.stratum))?;
            let geoms = geometries_of(stratum, &sols)?;
            let bytes = match format {
                Format::Json => to_json(&geoms),
                f => table_text(&[render::geometries(&geoms)], f),
            };
            emit(out, &bytes)?;
            if cli.assert_paper {
                check(reference::check_geometries(stratum, &geoms))?;
            }
        }
        Command::Enumerate { geometries, diagram } => {
            let geoms: Vec<GeometryPair> = load(&geometries)?;
            let stratum = resolve_stratum(cli.stratum, geoms.first().map(|g| g.horizontal.stratum))?;
            let report = enumerate(stratum, &geoms, diagram)?;
            let bytes = match format {
                Format::Json => to_json(&report),
                f => table_text(&[render::algo(&report), render::sd4(&report)], f),
            };
            emit(out, &bytes)?;
            if cli.assert_paper && matches!(diagram, DiagramSel::All) {
                check(reference::check_report(&report))?;
            }
        }
        Command::Pipeline => {
            let stratum = resolve_stratum(cli.stratum, None)?;
            identity(stratum)?;
            let cache = Cache::new(cli.cache_dir.clone());
            let params = json!({ "stratum": stratum });
            let sol_bytes = cache.stage("solve", stratum.to_string().as_bytes(), params.clone(), || {
                Ok(to_json(&enumerate_solutions(stratum)?))
            })?;
            let sols: Vec<RelationSolution> = parse(&sol_bytes, Path::new("cached solutions"))?;
            let geo_bytes = cache.stage("geometry", &sol_bytes, params.clone(), || Ok(to_json(&geometries_of(stratum, &sols)?)))?;
            let geoms: Vec<GeometryPair> = parse(&geo_bytes, Path::new("cached geometries"))?;
            let rep_bytes = cache.stage("enumerate", &geo_bytes, json!({ "stratum": stratum, "diagram": "ALL" }), || {
                Ok(to_json(&enumerate(stratum, &geoms, DiagramSel::All)?))
            })?;
            let report: CandidateReport = parse(&rep_bytes, Path::new("cached report"))?;
            let summary = PipelineSummary {
                stratum,
                solutions: sols.len(),
                geometries: geoms.len(),
                per_diagram_candidates: report.per_diagram_candidates(),
                per_diagram_after_filter: report.per_diagram_after_filter(),
                total_candidates: report.total_candidates(),
                final_candidates: report.final_candidates().len(),
                trace_fields: report.trace_fields().into_iter().collect(),
                report,
            };
            let bytes = match format {
                Format::Json => to_json(&summary),
                f => table_text(&[render::algo(&summary.report), render::sd4(&summary.report)], f),
            };
            emit(out, &bytes)?;
            eprintln!(
                "Prym({stratum}): {} solutions, {} geometries, {} candidates, {} after the filter",
                summary.solutions, summary.geometries, summary.total_candidates, summary.final_candidates
            );
            if cli.assert_paper {
                let mut all = reference::check_solutions(stratum, &sols);
                all.extend(reference::check_geometries(stratum, &geoms));
                all.extend(reference::check_report(&summary.report));
                check(all)?;
            }
        }
        Command::Render { table, input } => {
            if format == Format::Json && cli.format.is_some() {
                return Err(CliError::Input("render writes md or csv".into()));
            }
            let format = if format == Format::Json { Format::Md } else { format };
            let report = |path: &Path| -> Result<CandidateReport> {
                Ok(match load::<ReportInput>(path)? {
                    ReportInput::Report(r) => r,
                    ReportInput::Summary(s) => s.report,
                })
            };
            let t = match table {
                TableKind::Solutions => render::solutions(&load::<Vec<RelationSolution>>(&input)?),
                TableKind::Geometries => render::geometries(&load::<Vec<GeometryPair>>(&input)?),
                TableKind::Sd4 => render::sd4(&report(&input)?),
                TableKind::Algo => render::algo(&report(&input)?),
            };
            emit(out, &table_text(&[t], format))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    env_logger::Builder::new().filter_level(cli.log_level).format_timestamp(None).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
