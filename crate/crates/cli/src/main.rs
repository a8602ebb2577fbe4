use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use monocycle::constructions::{build_degree_lower_bound, DegreeConfig};
use monocycle::covers::{
    egp_cover, exact_length_cycle, posa_cover, sample_with_properties, EgpConstants, ExactLengthConfig, SampleConfig,
};
use monocycle::generators::{blow_up, planted_two_stage, robmat_type1, robmat_type2, BlowUpSpec};
use monocycle::graph::io::{parse_text, to_text};
use monocycle::pipeline::{partition_main, MainConfig, ResidualClusters};
use monocycle::regularity::ClusterPartition;
use monocycle::{Colour, ColouredGraph};
use monocycle_cli::config::{rational, ExperimentConfig, Params};
use monocycle_cli::suite::{component_construction, component_verdict, run_suite, write_reports, ReportPaths};
use monocycle_cli::CliError;
use serde::Deserialize;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "monocycle",
    version,
    about = "Monochromatic cycle partitions: generators, suites and the partitioner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph and its metadata.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Run an acceptance suite over a parameter grid.
    Suite {
        #[arg(long)]
        grid: PathBuf,
        /// Output stem; `.csv`, `.json`, `.artifacts.jsonl` and `.timings.csv` are added.
        #[arg(long)]
        output: PathBuf,
        /// Replaces the seeds of the grid.
        #[arg(long)]
        seed: Vec<u64>,
        #[arg(long)]
        override_n_floor: bool,
    },
    /// Cover a graph by monochromatic pieces.
    Cover {
        #[command(subcommand)]
        kind: CoverKind,
    },
    /// Search for cycles of a given length.
    Cycle {
        #[command(subcommand)]
        kind: CycleKind,
    },
    /// Sample a set with the four clause properties.
    Sample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        /// JSON list of forbidden vertices; defaults to `V_0`.
        #[arg(long)]
        forbidden: Option<PathBuf>,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        retries: usize,
        /// Skip the range check on `p`.
        #[arg(long = "override")]
        desk_override: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a lower-bound construction and print its certificate.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Partition a graph into monochromatic cycles.
    Partition {
        #[command(subcommand)]
        kind: PartitionKind,
    },
}

#[derive(Args)]
struct Out {
    /// Graph file; metadata goes next to it as `<stem>.meta.json`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Blow-up of a cluster density matrix given as a JSON spec.
    BlowUp {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Random dense graph meant to be robustly matchable of type 1.
    RobmatType1 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        r: Colour,
        #[arg(long, default_value_t = 0.9)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Random balanced bipartite graph meant to be robustly matchable of type 2.
    RobmatType2 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        r: Colour,
        #[arg(long, default_value_t = 0.9)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// The unbalanced two-stage instance of the end-to-end runs.
    Planted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, default_value_t = 30)]
        blob: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Degree construction; above 4096 vertices only the metadata is written.
    DegreeLb {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Component-cover construction for `r` colours.
    ComponentLb {
        /// Number of colours; the base graph uses `r - 1`.
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum CoverKind {
    /// Cover `B` by monochromatic pieces routed through `A`.
    Egp {
        #[arg(long)]
        input: PathBuf,
        /// JSON object `{"a": [...], "b": [...]}`.
        #[arg(long)]
        sets: PathBuf,
        #[arg(long, default_value = "50")]
        k1: String,
        #[arg(long, default_value = "10")]
        k2: String,
        #[arg(long, default_value = "100")]
        codegree: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cover the underlying graph by at most `alpha` pieces.
    Posa {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CycleKind {
    /// A cycle of exactly `length` vertices, optionally in one colour.
    ExactLength {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        length: usize,
        /// Restrict to one colour class.
        #[arg(long)]
        colour: Option<Colour>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Print the certificate of the degree construction.
    DegreeLb {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the certificate of the component-cover construction.
    ComponentLb {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "1/4")]
        eps: String,
    },
}

#[derive(Subcommand)]
enum PartitionKind {
    /// Run the full pipeline and write its report.
    Run {
        #[arg(long)]
        input: PathBuf,
        /// Cluster partition of the input graph, as JSON.
        #[arg(long, conflicts_with = "per_side")]
        clusters: Option<PathBuf>,
        /// Split each side of the residual into this many clusters.
        #[arg(long)]
        per_side: Option<usize>,
        /// JSON object `{"nu", "mu", "d", "eps"}` of rationals.
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        override_n_floor: bool,
        /// Abort at the first failed inequality.
        #[arg(long)]
        strict: bool,
    },
}

const DEGREE_LB_TEXT_LIMIT: usize = 1 << 12;

fn read_graph(path: &Path) -> Result<ColouredGraph, CliError> {
    parse_text(&std::fs::read_to_string(path)?).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&std::fs::read_to_string(path)?)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn config(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn emit(value: &serde_json::Value, output: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_generated(out: &Out, g: &ColouredGraph, meta: serde_json::Value) -> Result<(), CliError> {
    std::fs::write(&out.output, to_text(g))?;
    let meta_path = out.output.with_extension("meta.json");
    std::fs::write(meta_path, serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

fn generate(kind: GenerateKind) -> Result<(), CliError> {
    match kind {
        GenerateKind::BlowUp { spec, seed, out } => {
            let spec: BlowUpSpec = read_json(&spec)?;
            let inst = blow_up(&spec, seed).map_err(config)?;
            let meta = json!({
                "kind": "blow-up",
                "seed": seed,
                "spec": spec,
                "clusters": serde_json::from_str::<serde_json::Value>(&inst.clusters.to_json())?,
                "bipartition": inst.bipartition,
            });
            write_generated(&out, &inst.g, meta)
        }
        GenerateKind::RobmatType1 {
            n,
            r,
            density,
            seed,
            out,
        } => {
            let g = robmat_type1(n, r, density, seed).map_err(config)?;
            let meta = json!({"kind": "robmat-type1", "n": n, "r": r, "density": density, "seed": seed});
            write_generated(&out, &g, meta)
        }
        GenerateKind::RobmatType2 {
            n,
            r,
            density,
            seed,
            out,
        } => {
            let (g, side) = robmat_type2(n, r, density, seed).map_err(config)?;
            let meta =
                json!({"kind": "robmat-type2", "n": n, "r": r, "density": density, "seed": seed, "bipartition": side});
            write_generated(&out, &g, meta)
        }
        GenerateKind::Planted {
            n,
            k,
            h,
            blob,
            seed,
            out,
        } => {
            let inst = planted_two_stage(n, k, h, blob, seed).map_err(config)?;
            let meta = json!({"kind": "planted", "seed": seed, "truth": inst.truth});
            write_generated(&out, &inst.g, meta)
        }
        GenerateKind::DegreeLb { n, seed, out } => {
            let built = build_degree_lower_bound(n, seed, &DegreeConfig::default()).map_err(config)?;
            // red A-B edges are implicit; beyond this order the edge list runs to gigabytes
            let written = n <= DEGREE_LB_TEXT_LIMIT;
            let meta = json!({
                "kind": "degree-lb",
                "n": n,
                "seed": seed,
                "a_size": built.a_size,
                "graph_written": written,
                "certificate": built.certificate,
            });
            if written {
                write_generated(&out, &built.to_coloured(), meta)?;
            } else {
                let meta_path = out.output.with_extension("meta.json");
                std::fs::write(meta_path, serde_json::to_string_pretty(&meta)? + "\n")?;
            }
            if built.certificate.holds() {
                Ok(())
            } else {
                Err(CliError::Failed("degree certificate does not hold".into()))
            }
        }
        GenerateKind::ComponentLb { r, eps, out } => {
            let eps = rational(&eps)?;
            let built = component_construction(r.saturating_sub(1), &eps).map_err(config)?;
            let meta = json!({
                "kind": "component-lb",
                "r": built.r,
                "eps": built.eps,
                "x": built.x_count(),
                "y": built.y_count(),
                "n_prime": built.n_prime,
                "certificate": built.certificate,
            });
            write_generated(&out, &built.g, meta)
        }
    }
}

#[derive(Deserialize)]
struct Sets {
    a: Vec<usize>,
    b: Vec<usize>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { kind } => generate(kind),
        Command::Suite {
            grid,
            output,
            seed,
            override_n_floor,
        } => {
            let mut cfg: ExperimentConfig = read_json(&grid)?;
            if !seed.is_empty() {
                cfg.seeds = seed;
            }
            cfg.override_n_floor |= override_n_floor;
            let run = run_suite(&cfg)?;
            let report = write_reports(&cfg, run, &output)?;
            let paths = ReportPaths::new(&output);
            eprintln!(
                "{} rows, {} failed; wrote {}",
                report.summary.rows,
                report.summary.failed,
                paths.csv.display()
            );
            if report.summary.failed > 0 {
                return Err(CliError::Failed(format!("{} rows failed", report.summary.failed)));
            }
            Ok(())
        }
        Command::Cover { kind } => match kind {
            CoverKind::Egp {
                input,
                sets,
                k1,
                k2,
                codegree,
                output,
            } => {
                let g = read_graph(&input)?;
                let sets: Sets = read_json(&sets)?;
                let k = EgpConstants {
                    k1: rational(&k1)?,
                    k2: rational(&k2)?,
                    codegree_divisor: rational(&codegree)?,
                };
                let cover = egp_cover(&g, &sets.a, &sets.b, &k).map_err(failed)?;
                emit(&serde_json::to_value(&cover)?, output.as_deref())
            }
            CoverKind::Posa { input, output } => {
                let g = read_graph(&input)?.underlying();
                let cover = posa_cover(&g);
                emit(&serde_json::to_value(&cover)?, output.as_deref())
            }
        },
        Command::Cycle {
            kind:
                CycleKind::ExactLength {
                    input,
                    length,
                    colour,
                    seed,
                    output,
                },
        } => {
            let g = read_graph(&input)?;
            let cfg = ExactLengthConfig {
                seed,
                ..ExactLengthConfig::default()
            };
            let found = exact_length_cycle(&g, colour, length, &cfg).map_err(config)?;
            emit(
                &json!({"length": length, "colour": colour, "cycle": found}),
                output.as_deref(),
            )?;
            match found {
                Some(_) => Ok(()),
                None => Err(CliError::Failed(format!("no cycle of length {length} found"))),
            }
        }
        Command::Sample {
            input,
            clusters,
            forbidden,
            p,
            seed,
            retries,
            desk_override,
            output,
        } => {
            let g = read_graph(&input)?;
            let cp = ClusterPartition::from_json(&std::fs::read_to_string(&clusters)?).map_err(config)?;
            let b: Vec<usize> = match forbidden {
                Some(path) => read_json(&path)?,
                None => cp.v0.clone(),
            };
            let cfg = SampleConfig {
                seed,
                retries,
                desk_override,
            };
            let set = sample_with_properties(&g, &cp, &b, &rational(&p)?, &cfg).map_err(config)?;
            emit(&serde_json::to_value(&set)?, output.as_deref())?;
            if set.properties_verified.all() {
                Ok(())
            } else {
                Err(CliError::Failed(set.properties_verified.diagnostics.join("; ")))
            }
        }
        Command::Construct { kind } => match kind {
            ConstructKind::DegreeLb { n, seed } => {
                let built = build_degree_lower_bound(n, seed, &DegreeConfig::default()).map_err(config)?;
                emit(&serde_json::to_value(&built.certificate)?, None)?;
                if built.certificate.holds() {
                    Ok(())
                } else {
                    Err(CliError::Failed("certificate does not hold".into()))
                }
            }
            ConstructKind::ComponentLb { r, eps } => {
                let built = component_construction(r.saturating_sub(1), &rational(&eps)?).map_err(config)?;
                let (holds, detail) = component_verdict(&built);
                emit(
                    &json!({"certificate": built.certificate, "holds": holds, "detail": detail}),
                    None,
                )?;
                if holds {
                    Ok(())
                } else {
                    Err(CliError::Failed(format!("certificate does not hold: {detail}")))
                }
            }
        },
        Command::Partition {
            kind:
                PartitionKind::Run {
                    input,
                    clusters,
                    per_side,
                    params,
                    seed,
                    report,
                    override_n_floor,
                    strict,
                },
        } => {
            let g = read_graph(&input)?;
            let params = Params::load(&params)?;
            let ledger = params.ledger(g.colours(), g.order(), override_n_floor)?;
            let residual = match (clusters, per_side) {
                (Some(path), _) => ResidualClusters::Supplied(
                    ClusterPartition::from_json(&std::fs::read_to_string(path)?).map_err(config)?,
                ),
                (None, Some(k)) => ResidualClusters::Sides { per_side: k },
                (None, None) => return Err(CliError::Config("one of --clusters or --per-side is required".into())),
            };
            let cfg = MainConfig {
                seed,
                strict,
                ..MainConfig::default()
            };
            let out = partition_main(&g, &ledger, &residual, &cfg).map_err(failed)?;
            std::fs::write(&report, serde_json::to_string_pretty(&out)? + "\n")?;
            eprintln!(
                "{} pieces (bounds {} and {}), {} of {} checks hold",
                out.count,
                out.bound_sharp,
                out.bound_headline,
                out.checks.iter().filter(|c| c.holds).count(),
                out.checks.len()
            );
            if out.validated {
                Ok(())
            } else {
                Err(CliError::Failed("family failed validation".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
