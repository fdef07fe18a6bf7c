//! Report, curve and solution files.
use crate::error::{CliError, Result};
use crate::pipeline::{scenario_name, CountyCurves, RunReport};
use crate::plot;
use serde::Serialize;
use solarsite_core::ce::CESolution;
use solarsite_core::land::Technology;
use solarsite_core::supply::{benefit_curves, supply_curve, Step};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_CSV: &str = "report.csv";
pub const BUILDS_CSV: &str = "builds.csv";
pub const SUPPLY_CSV: &str = "supply_curve.csv";
pub const BENEFIT_NET_CSV: &str = "benefit_curve_net.csv";
pub const BENEFIT_GROSS_CSV: &str = "benefit_curve_gross.csv";
pub const INTERCONNECT_CSV: &str = "interconnect.csv";
pub const CURVES_SVG: &str = "curves.svg";
pub const INVESTMENT_SVG: &str = "investment.svg";
pub const STATE_DELTA_SVG: &str = "state_delta.svg";

fn write(path: &Path, body: &[u8]) -> Result<()> {
    std::fs::write(path, body).map_err(|e| CliError::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    // Writing into a Vec cannot fail.
    w.write_record(header).expect("csv write");
    for r in rows {
        w.write_record(r).expect("csv write");
    }
    w.into_inner().expect("csv flush")
}

fn json_bytes<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("serializable");
    s.push(b'\n');
    s
}

fn steps_csv(steps: &[Step]) -> Vec<u8> {
    let header = ["county", "from_gw", "cumulative_gw", "value"].map(String::from);
    let rows: Vec<Vec<String>> = steps
        .iter()
        .map(|s| vec![s.county.clone(), format!("{:.6}", s.from_mw / 1e3), format!("{:.6}", s.to_mw / 1e3), format!("{:.2}", s.value)])
        .collect();
    csv_bytes(&header, &rows)
}

/// Solar supply steps plus the net and gross benefit steps.
pub fn curve_steps(curves: &CountyCurves) -> (Vec<Step>, Vec<Step>, Vec<Step>) {
    let solar: Vec<_> = curves.supply.iter().filter(|p| p.tech == Technology::Solar).cloned().collect();
    let (net, gross) = benefit_curves(&curves.benefit);
    (supply_curve(&solar), net, gross)
}

/// Writes the curve CSVs, the interconnection table and the curve plot.
pub fn write_curves(dir: &Path, curves: &CountyCurves) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let (supply, net, gross) = curve_steps(curves);
    let header = ["county", "tech", "kv", "spurs", "miles", "mva", "total_cost", "annual_cost"].map(String::from);
    let rows: Vec<Vec<String>> = curves
        .interconnect
        .iter()
        .map(|r| {
            vec![
                r.county.clone(),
                r.tech.to_string(),
                r.kv.to_string(),
                r.spurs.to_string(),
                format!("{:.3}", r.miles),
                format!("{:.3}", r.mva),
                format!("{:.2}", r.total),
                format!("{:.2}", r.annual),
            ]
        })
        .collect();
    let files = [
        (SUPPLY_CSV, steps_csv(&supply)),
        (BENEFIT_NET_CSV, steps_csv(&net)),
        (BENEFIT_GROSS_CSV, steps_csv(&gross)),
        (INTERCONNECT_CSV, csv_bytes(&header, &rows)),
        (CURVES_SVG, plot::curves_svg(&supply, &net, &gross).into_bytes()),
    ];
    let mut out = Vec::new();
    for (name, body) in files {
        let p = dir.join(name);
        write(&p, &body)?;
        out.push(p);
    }
    Ok(out)
}

/// Flat CSV of the report; state and technology columns are the union over all rows.
pub fn report_csv(report: &RunReport) -> Vec<u8> {
    let states: BTreeSet<&String> = report.rows.iter().flat_map(|r| r.solar_by_state.keys()).collect();
    let techs: BTreeSet<&String> = report.rows.iter().flat_map(|r| r.investment.keys()).collect();
    let mut header: Vec<String> = [
        "weight_cost",
        "cost",
        "benefit",
        "solar_mw",
        "emissions_final",
        "emissions_cap_final",
        "delta_cost",
        "delta_cost_pct",
        "delta_benefit",
        "delta_benefit_pct",
    ]
    .map(String::from)
    .to_vec();
    header.extend(states.iter().map(|s| format!("solar_mw_{s}")));
    header.extend(states.iter().map(|s| format!("delta_solar_mw_{s}")));
    header.extend(techs.iter().map(|t| format!("built_mw_{t}")));
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![
                format!("{:.2}", r.weight_cost),
                format!("{:.2}", r.cost),
                format!("{:.2}", r.benefit),
                format!("{:.3}", r.solar_mw),
                format!("{:.3}", r.emissions_final),
                format!("{:.3}", r.emissions_cap_final),
                format!("{:.2}", r.delta_cost),
                format!("{:.4}", r.delta_cost_pct),
                format!("{:.2}", r.delta_benefit),
                format!("{:.4}", r.delta_benefit_pct),
            ];
            v.extend(states.iter().map(|s| format!("{:.3}", r.solar_by_state.get(*s).copied().unwrap_or(0.0))));
            v.extend(states.iter().map(|s| format!("{:.3}", r.delta_solar_by_state.get(*s).copied().unwrap_or(0.0))));
            v.extend(techs.iter().map(|t| format!("{:.3}", r.investment.get(*t).copied().unwrap_or(0.0))));
            v
        })
        .collect();
    csv_bytes(&header, &rows)
}

/// Every nonzero build in every solution, one row each.
pub fn builds_csv(solutions: &[CESolution]) -> Vec<u8> {
    let header = ["weight_cost", "kind", "where", "year", "mw"].map(String::from);
    let mut rows = Vec::new();
    let f = |w: f64, kind: &str, at: String, year: u32, mw: f64| vec![format!("{w:.2}"), kind.to_string(), at, year.to_string(), format!("{mw:.3}")];
    for s in solutions {
        let w = s.weight_cost;
        for b in s.solar_builds.iter().filter(|b| b.mw > 1e-6) {
            rows.push(f(w, "solar", b.county.clone(), b.year, b.mw));
        }
        for b in s.wind_builds.iter().filter(|b| b.mw > 1e-6) {
            rows.push(f(w, "wind", b.county.clone(), b.year, b.mw));
        }
        for b in s.dispatchable_builds.iter().filter(|b| b.mw > 1e-6) {
            rows.push(f(w, &b.tech, b.region.clone(), b.year, b.mw));
        }
        for b in s.line_builds.iter().filter(|b| b.mw > 1e-6) {
            rows.push(f(w, "transmission", format!("{}-{}", b.from, b.to), b.year, b.mw));
        }
    }
    csv_bytes(&header, &rows)
}

/// Report files and plots for a sweep.
pub fn write_report(dir: &Path, report: &RunReport, solutions: &[CESolution]) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let files = [
        (REPORT_JSON, json_bytes(report)),
        (REPORT_CSV, report_csv(report)),
        (BUILDS_CSV, builds_csv(solutions)),
    ];
    let mut out = Vec::new();
    for (name, body) in files {
        let p = dir.join(name);
        write(&p, &body)?;
        out.push(p);
    }
    out.extend(write_report_plots(dir, report)?);
    Ok(out)
}

pub fn write_report_plots(dir: &Path, report: &RunReport) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut out = Vec::new();
    for (name, body) in [
        (INVESTMENT_SVG, plot::investment_svg(report)),
        (STATE_DELTA_SVG, plot::state_delta_svg(report)),
    ] {
        let p = dir.join(name);
        write(&p, body.as_bytes())?;
        out.push(p);
    }
    Ok(out)
}

pub fn read_report(path: &Path) -> Result<RunReport> {
    let s = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&s).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

/// `solution_w=0.20.json` and friends.
pub fn write_solution(dir: &Path, sol: &CESolution) -> Result<PathBuf> {
    ensure_dir(dir)?;
    let p = dir.join(format!("solution_{}.json", scenario_name(sol.weight_cost)));
    write(&p, &json_bytes(sol))?;
    Ok(p)
}
