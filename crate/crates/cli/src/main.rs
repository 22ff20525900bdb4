//! Command-line front end: classification, region computation, Monte Carlo
//! verification, property sweeps, and rate-slope estimation, with JSON/CSV
//! output for external tooling.
//!
//! Exit codes: 0 on success, 1 on a failed verification or property check,
//! 2 on unparsable input.

use std::fs;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dof_atlas::graph::{canonicalize, catalog_graph, SideInfoGraph};
use dof_atlas::region::{
    acyclic_outer_bound, dof_region, index_coding_region, vertices_csv, AntennaConfig,
    RegionDocument,
};
use dof_atlas::scheme::{
    build_precoders, build_receive_filters, build_receive_filters_lenient, estimate_rate_slope,
    monte_carlo_verify_graph, null_bases, random_precoders, sample_channels, McReport,
    ToleranceConfig,
};
use dof_atlas::sweep::{run_property_checks, PropertyCheck, PropertyReport};

#[derive(Parser)]
#[command(
    name = "dof-atlas",
    version,
    about = "Degrees-of-freedom regions of the three-receiver MIMO broadcast channel with receiver message side information"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a side-information graph into its isomorphism class.
    Classify {
        /// Arc list such as "2>1,2>3,3>2"; empty for no side information.
        #[arg(long)]
        graph: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute a region (constraints and corner points).
    Region {
        #[arg(long)]
        graph: String,
        /// Antenna counts "N0,N1,N2,N3".
        #[arg(long)]
        antennas: String,
        /// Use the acyclic-subgraph outer bound instead of the full region.
        #[arg(long, conflicts_with = "index_coding")]
        outer: bool,
        /// Use the index-coding rate region (antennas are ignored).
        #[arg(long)]
        index_coding: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo verification of every corner point on sampled channels.
    Verify {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        antennas: String,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, env = "DOF_ATLAS_SEED", default_value_t = 0)]
        seed: u64,
        /// Override the relative rank tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive property checks over an antenna grid.
    Sweep {
        #[arg(long, default_value_t = 4)]
        max_antenna: u32,
        /// Comma list of checks (integrality, monotonicity, redundancy,
        /// index-coding, arc-removal, oracle); default all.
        #[arg(long)]
        checks: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Estimate per-receiver rate slopes for one stream-count point.
    Slope {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        antennas: String,
        /// Stream counts "d1,d2,d3".
        #[arg(long)]
        dof: String,
        #[arg(long, env = "DOF_ATLAS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e4)]
        p_low: f64,
        #[arg(long, default_value_t = 1e8)]
        p_high: f64,
        #[arg(long)]
        tol: Option<f64>,
        /// Count interference as if no receiver had side information.
        #[arg(long)]
        ignore_side_info: bool,
        /// Draw isotropic random beams instead of the class recipe.
        #[arg(long)]
        random_precoders: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn parse_graph(s: &str) -> Result<SideInfoGraph, String> {
    SideInfoGraph::from_str(s).map_err(|e| e.to_string())
}

fn parse_antennas(s: &str) -> Result<AntennaConfig, String> {
    AntennaConfig::from_str(s).map_err(|e| e.to_string())
}

fn parse_dof(s: &str) -> Result<[u32; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected 3 comma-separated stream counts, got `{s}`"));
    }
    let mut out = [0u32; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| format!("bad stream count `{part}`"))?;
    }
    Ok(out)
}

fn tolerances(tol: Option<f64>) -> Result<ToleranceConfig, String> {
    let mut config = ToleranceConfig::default();
    if let Some(t) = tol {
        config.rank_tol_factor = t;
    }
    config.validate()?;
    Ok(config)
}

fn emit(output: &OutputArgs, payload: String) -> Result<(), String> {
    match &output.out {
        Some(path) => fs::write(path, payload).map_err(|e| format!("cannot write output: {e}")),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ClassifyOutput {
    graph: String,
    class: u8,
    relabeling: [u8; 3],
    knowledge: [Vec<u8>; 3],
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Classify { graph, output } => {
            let g = parse_graph(&graph)?;
            let class = canonicalize(g);
            let payload = ClassifyOutput {
                graph: g.to_string(),
                class: class.index,
                relabeling: class.relabeling.image(),
                knowledge: g.knowledge_sets(),
            };
            let text = match output.format {
                Format::Json => to_json(&payload),
                _ => format!(
                    "graph: {}\nclass: {}\nrelabeling: {}\nknowledge: K1={:?} K2={:?} K3={:?}\n",
                    payload.graph,
                    payload.class,
                    class.relabeling,
                    payload.knowledge[0],
                    payload.knowledge[1],
                    payload.knowledge[2],
                ),
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Region { graph, antennas, outer, index_coding, output } => {
            let g = parse_graph(&graph)?;
            let n = parse_antennas(&antennas)?;
            let region = if index_coding {
                index_coding_region(g)
            } else if outer {
                acyclic_outer_bound(g, &n)
            } else {
                dof_region(g, &n)
            };
            let doc = RegionDocument::from_region(&region).map_err(|e| e.to_string())?;
            let text = match output.format {
                Format::Json => to_json(&doc),
                Format::Csv => vertices_csv(&doc.vertices),
                Format::Text => {
                    let mut s = String::new();
                    for c in &region.simplify().constraints {
                        s.push_str(&format!("{c}\n"));
                    }
                    s.push_str("corner points:\n");
                    for v in &doc.vertices {
                        s.push_str(&format!("  {v}\n"));
                    }
                    s
                }
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { graph, antennas, trials, seed, tol, output } => {
            let g = parse_graph(&graph)?;
            let n = parse_antennas(&antennas)?;
            if trials == 0 {
                return Err("trials must be at least 1".into());
            }
            let tol = tolerances(tol)?;
            let report = monte_carlo_verify_graph(g, &n, trials, seed, &tol);
            let text = match output.format {
                Format::Text => verify_text(&report),
                _ => to_json(&report),
            };
            emit(&output, text)?;
            Ok(if report.all_achieved { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Sweep { max_antenna, checks, output } => {
            if max_antenna == 0 {
                return Err("max-antenna must be at least 1".into());
            }
            let checks = match checks {
                None => PropertyCheck::ALL.to_vec(),
                Some(list) => list
                    .split(',')
                    .map(PropertyCheck::from_str)
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let reports = run_property_checks(max_antenna, &checks);
            let all_passed = reports.iter().all(PropertyReport::passed);
            #[derive(Serialize)]
            struct SweepOutput {
                max_antenna: u32,
                all_passed: bool,
                reports: Vec<PropertyReport>,
            }
            let payload = SweepOutput { max_antenna, all_passed, reports };
            let text = match output.format {
                Format::Text => sweep_text(&payload.reports),
                _ => to_json(&payload),
            };
            emit(&output, text)?;
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Slope {
            graph,
            antennas,
            dof,
            seed,
            p_low,
            p_high,
            tol,
            ignore_side_info,
            random_precoders: random_beams,
            output,
        } => {
            let g = parse_graph(&graph)?;
            let n = parse_antennas(&antennas)?;
            let d = parse_dof(&dof)?;
            if !(p_high > p_low && p_low > 0.0) {
                return Err("need p-high > p-low > 0".into());
            }
            let tol = tolerances(tol)?;

            // Work in catalog-representative coordinates, then map back.
            let class = canonicalize(g);
            let relabel = class.relabeling;
            let mut rep_rx = [0u32; 3];
            let mut rep_d = [0u32; 3];
            for v in 1..=3u8 {
                rep_rx[(relabel.apply(v) - 1) as usize] = n.rx(v);
                rep_d[(relabel.apply(v) - 1) as usize] = d[(v - 1) as usize];
            }
            let rep_n = AntennaConfig { tx: n.tx, rx: rep_rx };
            let c = sample_channels(&rep_n, seed);
            let nb = null_bases(&c);
            let precoders = if random_beams {
                random_precoders(&rep_n, rep_d, &c)
            } else {
                match build_precoders(class.index, &rep_n, rep_d, &c, &nb) {
                    Ok(p) => p,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Ok(ExitCode::from(1));
                    }
                }
            };
            let g_eff = if ignore_side_info {
                SideInfoGraph::empty()
            } else {
                catalog_graph(class.index)
            };
            let lenient = ignore_side_info || random_beams;
            let filters = if lenient {
                build_receive_filters_lenient(g_eff, &c, &precoders, &tol)
            } else {
                match build_receive_filters(g_eff, &c, &precoders, &tol) {
                    Ok(f) => f,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Ok(ExitCode::from(1));
                    }
                }
            };
            let rep_slopes =
                estimate_rate_slope(g_eff, rep_d, &c, &precoders, &filters, p_low, p_high);
            let mut slopes = [0.0f64; 3];
            for v in 1..=3u8 {
                slopes[(v - 1) as usize] = rep_slopes[(relabel.apply(v) - 1) as usize];
            }

            #[derive(Serialize)]
            struct SlopeOutput {
                graph: String,
                class: u8,
                antennas: [u32; 4],
                dof: [u32; 3],
                seed: u64,
                p_low: f64,
                p_high: f64,
                slopes: [f64; 3],
            }
            let payload = SlopeOutput {
                graph: g.to_string(),
                class: class.index,
                antennas: n.as_array(),
                dof: d,
                seed,
                p_low,
                p_high,
                slopes,
            };
            let text = match output.format {
                Format::Text => format!(
                    "slopes: {:.4}, {:.4}, {:.4} (target {:?})\n",
                    slopes[0], slopes[1], slopes[2], d
                ),
                _ => to_json(&payload),
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn verify_text(report: &McReport) -> String {
    let mut s = format!(
        "graph {} (class {}) at {:?}, {} trials, seed {}\n",
        report.graph, report.class, report.antennas, report.trials, report.base_seed
    );
    for p in &report.points {
        s.push_str(&format!(
            "  {} [{:?}]: {}/{} ok, signal >= {:?}, leak <= {:?}\n",
            p.point, p.mode, p.successes, p.trials, p.min_signal_margin, p.max_interference_leak
        ));
    }
    s.push_str(if report.all_achieved { "all points achieved\n" } else { "FAILURES present\n" });
    s
}

fn sweep_text(reports: &[PropertyReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&format!(
            "{}: {} cases, {} failures, {} notes\n",
            r.property,
            r.cases,
            r.failures.len(),
            r.notes.len()
        ));
        for f in &r.failures {
            s.push_str(&format!("  FAIL {f}\n"));
        }
        for note in &r.notes {
            s.push_str(&format!("  note {note}\n"));
        }
    }
    s
}
