//! `splearn`: build and check measurement schedules, and run the simulated
//! learning loop for two-local sparse Pauli-Lindblad models.
//!
//! Exit codes: 0 on success (or a covering schedule), 1 when verification
//! fails, 2 on bad input.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use spl_core::cb_sim::{curves_to_csv, learn_pipeline, CbConfig, SpamModel, DEFAULT_DEPTHS};
use spl_core::scheduler::{
    color_compressed_schedule, general_schedule, heuristic_minimize, kn_log_schedule, lower_bound,
    schedule_size_formula, table9_schedule, verify_cover, CoverageReport, DEFAULT_SEARCH_BUDGET,
};
use spl_core::spl_model::{sample_model, SplModel};
use spl_core::topology::DEFAULT_COLORING_BUDGET;
use spl_core::{Coloring, MeasurementSchedule, TopologyGraph};

use output::{OutputSet, RunManifest};

#[derive(Parser, Debug)]
#[command(name = "splearn", version, about = "Measurement schedules and simulated learning for sparse Pauli-Lindblad noise models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a measurement schedule for a connectivity graph.
    Schedule {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = ConstructionArg::Auto)]
        construction: ConstructionArg,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check that a schedule covers every edge of a graph.
    Verify {
        graph: PathBuf,
        schedule: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Simulate cycle benchmarking on a ground-truth model and fit rates.
    SimulateFit {
        graph: PathBuf,
        /// Ground-truth model JSON.
        #[arg(long, conflicts_with = "random")]
        model: Option<PathBuf>,
        /// Draw a random two-local ground truth with this seed.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 0.001)]
        rate_lo: f64,
        #[arg(long, default_value_t = 0.01)]
        rate_hi: f64,
        /// Seed for shot sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_DEPTHS.to_vec())]
        depths: Vec<u32>,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long)]
        infinite_shots: bool,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Search for a schedule shorter than the constructive one.
    Explore {
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the complete-graph schedule size for n qubits.
    Formula { n: usize },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructionArg {
    Auto,
    Table9,
    Knlog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Input(String),
    Io(String),
}

impl From<spl_core::Error> for Failure {
    fn from(e: spl_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

const EXIT_UNCOVERED: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Input(msg)) | Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<TopologyGraph, Failure> {
    TopologyGraph::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Schedule files are either one basis per line or the JSON export.
fn read_schedule(path: &Path) -> Result<MeasurementSchedule, Failure> {
    let text = read(path)?;
    let schedule = if text.trim_start().starts_with('{') {
        let parsed: spl_core::scheduler::ScheduleJson = serde_json::from_str(&text)?;
        MeasurementSchedule::parse_text(&parsed.bases.join("\n"))
    } else {
        MeasurementSchedule::parse_text(&text)
    };
    schedule.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Schedule { graph, construction, out_dir, format } => cmd_schedule(&graph, construction, out_dir, format),
        Command::Verify { graph, schedule, format } => cmd_verify(&graph, &schedule, format),
        Command::SimulateFit {
            graph,
            model,
            random,
            rate_lo,
            rate_hi,
            seed,
            depths,
            shots,
            infinite_shots,
            out_dir,
            format,
        } => {
            let truth_source = match (model, random) {
                (Some(path), _) => TruthSource::File(path),
                (None, Some(s)) => TruthSource::Random(s),
                (None, None) => {
                    return Err(Failure::Input("one of --model or --random is required".into()));
                }
            };
            let cfg = CbConfig {
                depths,
                shots,
                infinite_shots,
                spam: SpamModel::ideal(),
                seed,
            };
            cmd_simulate_fit(&graph, truth_source, (rate_lo, rate_hi), cfg, out_dir, format)
        }
        Command::Explore { graph, seed, budget, out_dir, format } => cmd_explore(&graph, seed, budget, out_dir, format),
        Command::Formula { n } => cmd_formula(n),
    }
}

fn build_schedule(g: &TopologyGraph, construction: ConstructionArg) -> Result<MeasurementSchedule, Failure> {
    if g.edge_count() == 0 {
        return Err(spl_core::Error::EdgelessGraph.into());
    }
    let schedule = match construction {
        ConstructionArg::Auto => general_schedule(g)?,
        ConstructionArg::Table9 => {
            let out = g.four_coloring(DEFAULT_COLORING_BUDGET);
            if !out.within_four {
                return Err(Failure::Input(format!(
                    "no proper 4-coloring found (greedy uses {} colors); use --construction auto or knlog",
                    out.coloring.color_count
                )));
            }
            table9_schedule(g, &out.coloring)?
        }
        ConstructionArg::Knlog => {
            if g.vertex_count() >= 4 {
                kn_log_schedule(g.vertex_count())?
            } else {
                color_compressed_schedule(g, &Coloring::identity(g.vertex_count()))?
            }
        }
    };
    Ok(schedule)
}

fn coverage_summary(report: &CoverageReport) -> String {
    let mut s = String::new();
    for ((u, v), missing) in report.uncovered_edges() {
        let pairs: Vec<String> = missing.iter().map(|(a, b)| format!("{a}{b}")).collect();
        s.push_str(&format!("edge ({u}, {v}) missing: {}\n", pairs.join(" ")));
    }
    s
}

fn cmd_schedule(
    graph: &Path,
    construction: ConstructionArg,
    out_dir: Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, Failure> {
    let g = read_graph(graph)?;
    let schedule = build_schedule(&g, construction)?;
    let report = verify_cover(&g, &schedule)?;
    let json = serde_json::to_string_pretty(&schedule.to_json(&report))? + "\n";

    let summary = format!(
        "bases: {}  covered: {}  exact: {}  construction: {}",
        schedule.len(),
        report.covered,
        report.exact,
        schedule.construction()
    );
    match format {
        Format::Json => {
            print!("{json}");
            eprintln!("{summary}");
        }
        // Comment lines keep stdout a valid schedule file.
        _ => println!("{}# {summary}", schedule.to_text()),
    }

    if let Some(dir) = out_dir {
        let mut out = OutputSet::new(&dir)?;
        out.write("schedule.txt", &schedule.to_text())?;
        out.write("schedule.json", &json)?;
        out.finish(RunManifest::new(
            "schedule",
            vec![path_str(graph)],
            None,
            json!({ "construction": format!("{construction:?}").to_lowercase() }),
        ))?;
    }
    Ok(exit_for(report.covered))
}

fn exit_for(covered: bool) -> ExitCode {
    if covered {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNCOVERED)
    }
}

fn cmd_verify(graph: &Path, schedule: &Path, format: Format) -> Result<ExitCode, Failure> {
    let g = read_graph(graph)?;
    let s = read_schedule(schedule)?;
    let report = verify_cover(&g, &s)?;
    if format == Format::Json {
        let missing: serde_json::Map<String, serde_json::Value> = report
            .uncovered_edges()
            .map(|((u, v), m)| {
                (format!("{u}-{v}"), json!(m.iter().map(|(a, b)| format!("{a}{b}")).collect::<Vec<_>>()))
            })
            .collect();
        let body = json!({
            "bases": s.len(),
            "covered": report.covered,
            "exact": report.exact,
            "missing": missing,
        });
        println!("{}", serde_json::to_string_pretty(&body)?);
    } else {
        print!("{}", coverage_summary(&report));
        println!("bases: {}  covered: {}  exact: {}", s.len(), report.covered, report.exact);
    }
    Ok(exit_for(report.covered))
}

enum TruthSource {
    File(PathBuf),
    Random(u64),
}

fn cmd_simulate_fit(
    graph: &Path,
    truth_source: TruthSource,
    rate_range: (f64, f64),
    cfg: CbConfig<f64>,
    out_dir: Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, Failure> {
    let g = read_graph(graph)?;
    let (truth, truth_desc, mut inputs) = match &truth_source {
        TruthSource::File(path) => {
            let model = SplModel::<f64>::from_json_str(&read(path)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            (model, json!({ "model": path_str(path) }), vec![path_str(graph), path_str(path)])
        }
        TruthSource::Random(seed) => {
            let model = sample_model::<f64>(&g, *seed, rate_range)?;
            let desc = json!({ "random": seed, "rate_lo": rate_range.0, "rate_hi": rate_range.1 });
            (model, desc, vec![path_str(graph)])
        }
    };
    inputs.dedup();
    let run = learn_pipeline(&g, &truth, &cfg)?;
    let fit = &run.fit;
    let max_err = fit.max_abs_error(&truth)?;
    let fit_json = serde_json::to_string_pretty(&fit.to_json())? + "\n";
    let csv = curves_to_csv(&run.curves);
    let summary = json!({
        "bases": run.schedule.len(),
        "curves": run.curves.len(),
        "terms": fit.term_count(),
        "rank": fit.matrix_rank,
        "residual": fit.residual_norm,
        "max_abs_error": max_err,
    });

    match format {
        Format::Csv => print!("{csv}"),
        Format::Json => print!("{fit_json}"),
        Format::Text => {
            println!("bases: {}  curves: {}", run.schedule.len(), run.curves.len());
            println!("terms: {}  rank: {}  residual: {:e}", fit.term_count(), fit.matrix_rank, fit.residual_norm);
            println!("max |lambda_hat - lambda|: {max_err:e}");
        }
    }

    if let Some(dir) = out_dir {
        let mut out = OutputSet::new(&dir)?;
        out.write("curves.csv", &csv)?;
        out.write("fit.json", &fit_json)?;
        out.write("schedule.txt", &run.schedule.to_text())?;
        out.write("truth.json", &(serde_json::to_string_pretty(&truth.to_json())? + "\n"))?;
        out.write("summary.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
        out.finish(RunManifest::new(
            "simulate-fit",
            inputs,
            Some(cfg.seed),
            json!({
                "truth": truth_desc,
                "depths": cfg.depths,
                "shots": cfg.shots,
                "infinite_shots": cfg.infinite_shots,
            }),
        ))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_explore(graph: &Path, seed: u64, budget: u64, out_dir: Option<PathBuf>, format: Format) -> Result<ExitCode, Failure> {
    let g = read_graph(graph)?;
    let outcome = heuristic_minimize(&g, seed, budget)?;
    let report = verify_cover(&g, &outcome.best)?;
    let summary = json!({
        "seed": seed,
        "budget": budget,
        "initial": outcome.initial_len,
        "best": outcome.best.len(),
        "lower_bound": lower_bound(&g),
        "improved": outcome.improved(),
        "moves": outcome.moves_used,
        "covered": report.covered,
    });
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&summary)?),
        _ => {
            print!("{}", outcome.best.to_text());
            println!(
                "# best: {}  initial: {}  lower bound: {}  improved: {}  seed: {}",
                outcome.best.len(),
                outcome.initial_len,
                outcome.lower_bound,
                outcome.improved(),
                seed
            );
        }
    }
    if let Some(dir) = out_dir {
        let mut out = OutputSet::new(&dir)?;
        out.write("best_schedule.txt", &outcome.best.to_text())?;
        out.write("best_schedule.json", &(serde_json::to_string_pretty(&outcome.best.to_json(&report))? + "\n"))?;
        let mut log = String::new();
        for entry in &outcome.log {
            log.push_str(&serde_json::to_string(entry)?);
            log.push('\n');
        }
        out.write("search_log.jsonl", &log)?;
        out.write("summary.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
        out.finish(RunManifest::new("explore", vec![path_str(graph)], Some(seed), json!({ "budget": budget })))?;
    }
    Ok(exit_for(report.covered))
}

fn cmd_formula(n: usize) -> Result<ExitCode, Failure> {
    let size = schedule_size_formula(n)?;
    println!("{size}");
    println!("# n = {n}: {size} bases, {} more than the 9-basis table", size - 9);
    Ok(ExitCode::SUCCESS)
}
