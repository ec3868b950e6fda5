use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;

use vipcache::data_plane::DeviceModel;
use vipcache::experiments::{
    figure_data, preset_paper_defaults, run_batch, BatchResults, FigureId, PolicyAxis, ScenarioConfig, SweepSpec,
};
use vipcache::model::TopologySpec;
use vipcache::policies::PolicyKind;
use vipcache::rap::{collapse, expand, solve, BenefitMatrix};
use vipcache::{Error, Result};

#[derive(Parser)]
#[command(name = "vipcache", version, about = "Multi-tier cost-aware caching experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario over its seeds.
    Run {
        /// Scenario TOML; the built-in defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        topology: Option<TopologySpec>,
        #[arg(long)]
        policy: Option<PolicyKind>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        tier2: Option<usize>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[arg(long, value_parser = parse_device)]
        device: Option<DeviceModel>,
        /// Directory for summary CSV and per-run JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run a sweep file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Turn a results directory into plot-ready CSV.
    Figure {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        figure: FigureId,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one placement instance from a TOML file with `capacities` and `benefits` rows.
    Rap { file: PathBuf },
}

fn parse_device(s: &str) -> std::result::Result<DeviceModel, String> {
    match s {
        "shared" => Ok(DeviceModel::Shared),
        "split" => Ok(DeviceModel::Split),
        _ => Err(format!("unknown device model `{s}` (shared, split)")),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RapFile {
    capacities: Vec<usize>,
    benefits: Vec<Vec<f64>>,
}

fn write_file(path: &Path, f: impl FnOnce(fs::File) -> Result<()>) -> Result<()> {
    f(fs::File::create(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?)
}

fn print_aggregates(res: &BatchResults) {
    println!("topology,policy,omega,tier2_capacity,seeds,delay_fraction,delay_fraction_std,hits_t1,hits_t2,total_penalty");
    for a in res.aggregates() {
        println!(
            "{},{},{},{},{},{:.4},{:.4},{:.1},{:.1},{:.1}",
            a.topology,
            a.policy,
            a.omega,
            a.tier2_capacity.map_or(String::new(), |c| c.to_string()),
            a.seeds,
            a.delay_fraction.mean,
            a.delay_fraction.std,
            a.hits_t1.mean,
            a.hits_t2.mean,
            a.total_penalty.mean
        );
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            topology,
            policy,
            omega,
            tier2,
            seeds,
            device,
            out,
            jobs,
        } => {
            let mut cfg: ScenarioConfig = match config {
                Some(p) => ScenarioConfig::load(&p)?,
                None => preset_paper_defaults(),
            };
            if let Some(t) = topology {
                cfg.topology = t;
            }
            if let Some(p) = policy {
                cfg.policy = p;
            }
            if let Some(w) = omega {
                cfg.omega = w;
            }
            if let Some(c) = tier2 {
                cfg = cfg.with_tier2_capacity(c);
            }
            if let Some(s) = seeds {
                cfg.seeds = s;
            }
            if let Some(d) = device {
                cfg.device = d;
            }
            let axis = PolicyAxis {
                policy: cfg.policy,
                omegas: vec![],
                tier2_capacities: vec![],
            };
            let res = run_batch(&SweepSpec::new(cfg, vec![axis]), jobs)?;
            if let Some(dir) = out {
                res.write_dir(&dir)?;
            }
            print_aggregates(&res);
        }
        Command::Sweep { config, out, jobs } => {
            let spec = SweepSpec::load(&config)?;
            let res = run_batch(&spec, jobs)?;
            res.write_dir(&out)?;
            if !res.runs.is_empty() {
                print_aggregates(&res);
            }
            eprintln!(
                "{} runs written to {}",
                res.runs.len() + res.virtual_runs.len(),
                out.display()
            );
        }
        Command::Figure { results, figure, out } => {
            let res = BatchResults::read_dir(&results)?;
            let table = figure_data(&res, figure)?;
            match out {
                Some(p) => write_file(&p, |f| table.write_csv(f))?,
                None => table.write_csv(std::io::stdout().lock())?,
            }
        }
        Command::Rap { file } => {
            let text = fs::read_to_string(&file).map_err(|e| Error::Io {
                path: file.clone(),
                source: e,
            })?;
            let rf: RapFile = toml::from_str(&text).map_err(|e| Error::Parse {
                path: file.clone(),
                message: e.to_string(),
            })?;
            let benefits = BenefitMatrix::from_rows(&rf.benefits, rf.capacities)?;
            let expanded = expand(&benefits);
            let assignment = solve(&expanded)?;
            let placement = collapse(&assignment, expanded.slot_map(), benefits.objects());
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "object,tier,benefit");
            for (k, t) in placement.tiers.iter().enumerate() {
                match t {
                    Some(j) => {
                        let _ = writeln!(out, "{k},{},{}", j + 1, benefits.get(k, *j));
                    }
                    None => {
                        let _ = writeln!(out, "{k},,");
                    }
                }
            }
            let _ = writeln!(out, "objective,{}", assignment.objective);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
