use clap::{Parser, Subcommand, ValueEnum};
use solarsite::data::{load_dataset, validate_data};
use solarsite::pipeline::{build_curves, problem, run_sweep, scenario_name, solar_levels, solve_base, solve_weight};
use solarsite::{demo, output, CliError, Result, ScenarioConfig};
use solarsite_core::ce::build_lp;
use solarsite_core::land::ZoningPreset;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    Current,
    Expanded,
    Ignore,
}

impl From<Preset> for ZoningPreset {
    fn from(p: Preset) -> Self {
        match p {
            Preset::Current => ZoningPreset::Current,
            Preset::Expanded => ZoningPreset::Expanded,
            Preset::Ignore => ZoningPreset::Ignore,
        }
    }
}

/// County-level solar siting scenarios: supply and local-benefit curves, capacity
/// expansion with a cost/benefit weight sweep, reports and plots.
#[derive(Debug, Parser)]
#[command(name = "solarsite", version)]
struct Cli {
    /// Scenario config (TOML). Flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Data directory (defaults to the bundled demo data, or $SOLARSITE_DATA).
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated cost weights.
    #[arg(long, global = true, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    #[arg(long, global = true, value_enum)]
    preset: Option<Preset>,
    /// Seed for demo data generation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Let total solar float in runs with w < 1 (rejected by the model builder).
    #[arg(long, global = true)]
    no_fix_total: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check every data file and print findings.
    Validate,
    /// Write supply, benefit and interconnection curves.
    Curves,
    /// Solve one weight and write its solution.
    Solve {
        #[arg(long)]
        weight: f64,
    },
    /// Solve every configured weight and write the report.
    Sweep,
    /// Write the LP for one weight in MPS format.
    ExportMps {
        #[arg(long)]
        weight: f64,
        /// Target file (defaults to <out>/model_w=<weight>.mps).
        #[arg(long = "file")]
        file: Option<PathBuf>,
    },
    /// Redraw the report plots from <out>/report.json.
    Plot,
    /// Write the synthetic demo dataset into --data (or --out).
    GenerateDemo,
}

fn config(cli: &Cli) -> Result<ScenarioConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ScenarioConfig::load(p)?,
        None => ScenarioConfig::default(),
    }
    .with_env();
    if let Some(d) = &cli.data {
        cfg.data_dir = d.clone();
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    if let Some(w) = &cli.weights {
        cfg.weights = w.clone();
    }
    if let Some(p) = cli.preset {
        cfg.preset = p.into();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.no_fix_total {
        cfg.fix_total_solar = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn list(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = config(cli)?;
    match &cli.cmd {
        Cmd::Validate => {
            let findings = validate_data(&cfg.data_dir);
            for f in &findings {
                println!("{f}");
            }
            if !findings.is_empty() {
                return Err(CliError::Validation(findings));
            }
            println!("{}: ok", cfg.data_dir.display());
        }
        Cmd::Curves => {
            let data = load_dataset(&cfg.data_dir)?;
            let curves = build_curves(&data, cfg.preset)?;
            list(&output::write_curves(&cfg.output_dir, &curves)?);
        }
        Cmd::Solve { weight } => {
            let data = load_dataset(&cfg.data_dir)?;
            let curves = build_curves(&data, cfg.preset)?;
            let run = solve_weight(&cfg, &data, &curves, *weight)?;
            let s = &run.solution;
            println!(
                "{}: cost {:.0} benefit {:.0} solar {:.1} MW",
                scenario_name(*weight),
                s.total_cost,
                s.total_benefit,
                s.total_solar_mw()
            );
            list(&[output::write_solution(&cfg.output_dir, s)?]);
        }
        Cmd::Sweep => {
            let data = load_dataset(&cfg.data_dir)?;
            let sweep = run_sweep(&cfg, &data)?;
            for r in &sweep.report.rows {
                println!(
                    "w={:.2} cost {:.0} ({:+.3}%) benefit {:.0} ({:+.3}%) solar {:.1} MW",
                    r.weight_cost, r.cost, r.delta_cost_pct, r.benefit, r.delta_benefit_pct, r.solar_mw
                );
            }
            let mut files = output::write_curves(&cfg.output_dir, &sweep.curves)?;
            files.extend(output::write_report(&cfg.output_dir, &sweep.report, &sweep.solutions)?);
            list(&files);
        }
        Cmd::ExportMps { weight, file } => {
            let data = load_dataset(&cfg.data_dir)?;
            let curves = build_curves(&data, cfg.preset)?;
            // A pinned model needs the base solar levels, which takes one solve.
            let fix = if *weight < 1.0 && cfg.fix_total_solar {
                Some(solar_levels(&solve_base(&cfg, &data, &curves)?.solution))
            } else {
                None
            };
            let model = build_lp(&problem(&cfg, *weight, fix), &data.system, &curves.supply, &curves.benefit)?;
            let name = scenario_name(*weight);
            let text = solarsite_lp::export_mps(&model.lp, &name)?;
            let path = file.clone().unwrap_or_else(|| cfg.output_dir.join(format!("model_{name}.mps")));
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
            list(&[path]);
        }
        Cmd::Plot => {
            let report = output::read_report(&cfg.output_dir.join(output::REPORT_JSON))?;
            let mut files = output::write_report_plots(&cfg.output_dir, &report)?;
            let data = load_dataset(&cfg.data_dir)?;
            let curves = build_curves(&data, report.preset)?;
            let (supply, net, gross) = output::curve_steps(&curves);
            let p = cfg.output_dir.join(output::CURVES_SVG);
            std::fs::write(&p, solarsite::plot::curves_svg(&supply, &net, &gross)).map_err(|e| CliError::io(&p, e))?;
            files.push(p);
            list(&files);
        }
        Cmd::GenerateDemo => {
            let dir = cli.data.clone().unwrap_or_else(|| cfg.output_dir.clone());
            let cal = demo::generate_demo(&dir, cfg.seed)?;
            println!(
                "{}: seed {} va_scale {} ag_va_scale {} gross {:.2} net {:.2} $/MW-yr, ag reduction {:.2}%",
                dir.display(),
                cal.seed,
                cal.va_scale,
                cal.ag_va_scale,
                cal.gross_va_per_mw_yr,
                cal.net_va_per_mw_yr,
                100.0 * cal.ag_reduction
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
