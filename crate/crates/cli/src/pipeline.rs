//! From a dataset to supply and benefit points, and from there to capacity-expansion runs.
use crate::config::ScenarioConfig;
use crate::data::Dataset;
use crate::error::{CliError, Result};
use serde::{Deserialize, Serialize};
use solarsite_core::ce::{build_lp, interpret, CEProblem, CESolution, CeModel};
use solarsite_core::econ::{lifecycle_net_impact, CountyEconomy, Lifecycle};
use solarsite_core::interconnect::choose_spur;
use solarsite_core::land::{county_capacity, Technology, ZoningPreset};
use solarsite_core::supply::{build_benefit, build_supply, BenefitPoint, SupplyInput, SupplyPoint};
use solarsite_core::CoreError;
use solarsite_lp::{Basis, LpStatus, SolverOptions};
use std::collections::BTreeMap;

/// Per-county inputs to the capacity-expansion model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountyCurves {
    pub supply: Vec<SupplyPoint>,
    /// Sorted by net value added, highest first.
    pub benefit: Vec<BenefitPoint>,
    pub interconnect: Vec<SpurRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpurRow {
    pub county: String,
    pub tech: Technology,
    pub kv: u32,
    pub spurs: u32,
    pub miles: f64,
    pub mva: f64,
    pub total: f64,
    pub annual: f64,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len().max(1) as f64
}

/// Lifecycle impacts of the reference project in one county.
pub fn county_lifecycle(data: &Dataset, county: &str) -> Result<Lifecycle> {
    let c = data.county(county).ok_or_else(|| CliError::Config(format!("unknown county {county}")))?;
    let table = data
        .multipliers
        .get(&solarsite_core::econ::ProfileId {
            state: c.state.clone(),
            size: c.size,
        })
        .ok_or_else(|| CliError::Config(format!("no multipliers for {}/{}", c.state, c.size)))?;
    let tax = data
        .taxes
        .get(&c.state)
        .ok_or_else(|| CliError::Config(format!("no tax schedule for {}", c.state)))?;
    Ok(lifecycle_net_impact(
        &data.spec,
        &data.econ,
        CountyEconomy {
            multipliers: table,
            tax,
            yield_class: c.yield_class,
        },
    )?)
}

/// Land capacity, interconnection and economics for every county.
pub fn build_curves(data: &Dataset, preset: ZoningPreset) -> Result<CountyCurves> {
    let caps = county_capacity(&data.parcels, &data.zoning, preset, &data.shares);
    let mut solar_in = Vec::new();
    let mut wind_in = Vec::new();
    let mut spurs = Vec::new();
    let mut benefit = Vec::new();
    for (c, res) in data.counties.iter().zip(&data.system.counties) {
        let cap = caps.get(&c.name).copied().unwrap_or_default();
        for (tech, mw, cf, out) in [
            (Technology::Solar, cap.solar_mw, &res.solar_cf, &mut solar_in),
            (Technology::Wind, cap.wind_mw, &res.wind_cf, &mut wind_in),
        ] {
            if mw <= 0.0 {
                continue;
            }
            let spur = choose_spur(&data.interconnect, &c.lines, &c.terrain, mw)?;
            spurs.push(SpurRow {
                county: c.name.clone(),
                tech,
                kv: spur.kv.kv(),
                spurs: spur.spurs,
                miles: spur.miles,
                mva: spur.mva,
                total: spur.cost.total,
                annual: spur.cost.annual_total(),
            });
            out.push(SupplyInput {
                county: c.name.clone(),
                tech,
                capacity_mw: mw,
                capacity_factor: mean(cf),
                interconnect_annual: spur.cost.annual_total(),
            });
        }
        if cap.solar_mw > 0.0 {
            let life = county_lifecycle(data, &c.name)?;
            benefit.push(BenefitPoint {
                county: c.name.clone(),
                capacity_mw: cap.solar_mw,
                net_va_per_mw_yr: life.net_va_per_mw_yr,
                gross_va_per_mw_yr: life.gross_va_per_mw_yr,
            });
        }
    }
    let mut supply = build_supply(&solar_in, &data.solar_cost, &data.finance);
    supply.extend(build_supply(&wind_in, &data.wind_cost, &data.finance));
    Ok(CountyCurves {
        supply,
        benefit: build_benefit(benefit),
        interconnect: spurs,
    })
}

pub fn problem(cfg: &ScenarioConfig, weight: f64, fix: Option<Vec<f64>>) -> CEProblem {
    CEProblem {
        weight_cost: weight,
        periods: cfg.periods.clone(),
        fix_total_solar: fix,
        hours_per_step: cfg.hours_per_step,
    }
}

pub fn scenario_name(weight: f64) -> String {
    format!("w={weight:.2}")
}

/// Turns solver failures into a scenario-level error that names the run.
fn scenario_err(weight: f64, e: CoreError) -> CliError {
    match e {
        CoreError::Solver {
            status: LpStatus::Infeasible,
            detail,
        } => CliError::Infeasible {
            scenario: scenario_name(weight),
            detail,
        },
        other => CliError::Core(other),
    }
}

/// A solved least-cost run whose basis seeds the pinned runs.
#[derive(Clone, Debug)]
pub struct BaseRun {
    pub model: CeModel,
    pub solution: CESolution,
    pub basis: Basis,
}

/// Builds and solves one scenario, optionally warm-started from a base run's basis.
pub fn solve_one(
    cfg: &ScenarioConfig,
    data: &Dataset,
    curves: &CountyCurves,
    weight: f64,
    fix: Option<Vec<f64>>,
    warm: Option<&BaseRun>,
) -> Result<BaseRun> {
    let p = problem(cfg, weight, fix);
    log::info!("solving {}", scenario_name(weight));
    let model = build_lp(&p, &data.system, &curves.supply, &curves.benefit).map_err(|e| scenario_err(weight, e))?;
    let opts = SolverOptions::default();
    let result = match warm {
        Some(b) => solarsite_lp::solve_from(&model.lp, &opts, &b.basis.remap(&b.model.lp, &model.lp))?,
        None => solarsite_lp::solve(&model.lp, &opts)?,
    };
    log::info!("{}: {:?} after {} iterations", scenario_name(weight), result.status, result.iterations);
    let solution = interpret(&model, &result).map_err(|e| scenario_err(weight, e))?;
    Ok(BaseRun {
        model,
        solution,
        basis: result.basis,
    })
}

/// Cumulative solar MW per period in a solution, used to pin the other runs.
pub fn solar_levels(sol: &CESolution) -> Vec<f64> {
    sol.periods.iter().map(|p| p.solar_mw).collect()
}

pub fn solve_base(cfg: &ScenarioConfig, data: &Dataset, curves: &CountyCurves) -> Result<BaseRun> {
    solve_one(cfg, data, curves, 1.0, None, None)
}

/// A run with total solar pinned to the base levels, started from the base basis.
pub fn solve_pinned(cfg: &ScenarioConfig, data: &Dataset, curves: &CountyCurves, base: &BaseRun, weight: f64) -> Result<BaseRun> {
    if !cfg.fix_total_solar {
        return Err(CoreError::UnboundedBenefit(weight).into());
    }
    solve_one(cfg, data, curves, weight, Some(solar_levels(&base.solution)), Some(base))
}

/// Solution at `weight`; below 1 the least-cost run is solved first to fix total solar.
pub fn solve_weight(cfg: &ScenarioConfig, data: &Dataset, curves: &CountyCurves, weight: f64) -> Result<BaseRun> {
    let base = solve_base(cfg, data, curves)?;
    if weight >= 1.0 {
        return Ok(base);
    }
    solve_pinned(cfg, data, curves, &base, weight)
}

/// One row of the sweep table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub weight_cost: f64,
    pub cost: f64,
    pub benefit: f64,
    pub solar_mw: f64,
    /// Emissions in the final period, t.
    pub emissions_final: f64,
    pub emissions_cap_final: f64,
    /// Final cumulative solar MW by state.
    pub solar_by_state: BTreeMap<String, f64>,
    /// MW built over the horizon by technology (`solar`, `wind`, dispatchables, `storage`,
    /// `transmission`).
    pub investment: BTreeMap<String, f64>,
    pub delta_cost: f64,
    pub delta_benefit: f64,
    pub delta_cost_pct: f64,
    pub delta_benefit_pct: f64,
    pub delta_solar_by_state: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub preset: ZoningPreset,
    pub fix_total_solar: bool,
    /// Rows in solve order; the first is the least-cost base.
    pub rows: Vec<ReportRow>,
}

impl RunReport {
    pub fn base(&self) -> &ReportRow {
        &self.rows[0]
    }
}

fn summarize(sol: &CESolution) -> ReportRow {
    let mut solar_by_state = BTreeMap::new();
    for b in &sol.solar_builds {
        *solar_by_state.entry(b.state.clone()).or_insert(0.0) += b.mw;
    }
    let mut investment: BTreeMap<String, f64> = BTreeMap::new();
    investment.insert("solar".into(), sol.solar_builds.iter().map(|b| b.mw).sum());
    investment.insert("wind".into(), sol.wind_builds.iter().map(|b| b.mw).sum());
    for b in &sol.dispatchable_builds {
        *investment.entry(b.tech.clone()).or_insert(0.0) += b.mw;
    }
    investment.insert("transmission".into(), sol.line_builds.iter().map(|b| b.mw).sum());
    // Sums of empty or all-zero builds can come out as -0.0.
    for v in investment.values_mut() {
        *v += 0.0;
    }
    let last = sol.periods.last();
    ReportRow {
        weight_cost: sol.weight_cost,
        cost: sol.total_cost,
        benefit: sol.total_benefit,
        solar_mw: sol.total_solar_mw(),
        emissions_final: last.map_or(0.0, |p| p.emissions),
        emissions_cap_final: last.map_or(0.0, |p| p.emissions_cap),
        solar_by_state,
        investment,
        delta_cost: 0.0,
        delta_benefit: 0.0,
        delta_cost_pct: 0.0,
        delta_benefit_pct: 0.0,
        delta_solar_by_state: BTreeMap::new(),
    }
}

pub fn pct(delta: f64, base: f64) -> f64 {
    if base == 0.0 {
        0.0
    } else {
        100.0 * delta / base.abs()
    }
}

/// Builds the report from solutions whose first element is the least-cost base. Every
/// state in `states` gets a column, including those with no solar.
pub fn report(cfg: &ScenarioConfig, states: &[String], solutions: &[CESolution]) -> RunReport {
    let mut rows: Vec<ReportRow> = solutions.iter().map(summarize).collect();
    for r in &mut rows {
        for s in states {
            r.solar_by_state.entry(s.clone()).or_insert(0.0);
        }
    }
    if let Some(base) = rows.first().cloned() {
        for r in &mut rows {
            r.delta_cost = r.cost - base.cost;
            r.delta_benefit = r.benefit - base.benefit;
            r.delta_cost_pct = pct(r.delta_cost, base.cost);
            r.delta_benefit_pct = pct(r.delta_benefit, base.benefit);
            let states: std::collections::BTreeSet<&String> = r.solar_by_state.keys().chain(base.solar_by_state.keys()).collect();
            r.delta_solar_by_state = states
                .into_iter()
                .map(|s| {
                    let d = r.solar_by_state.get(s).copied().unwrap_or(0.0) - base.solar_by_state.get(s).copied().unwrap_or(0.0);
                    (s.clone(), d)
                })
                .collect();
        }
    }
    RunReport {
        preset: cfg.preset,
        fix_total_solar: cfg.fix_total_solar,
        rows,
    }
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub curves: CountyCurves,
    /// Same order as `report.rows`.
    pub solutions: Vec<CESolution>,
    pub report: RunReport,
}

/// Solves w = 1, then every other weight with total solar pinned to the base levels.
///
/// The pinned runs all start from the base basis, so each matches a standalone
/// [`solve_weight`] call; they are independent and run on scoped threads.
pub fn run_sweep(cfg: &ScenarioConfig, data: &Dataset) -> Result<Sweep> {
    cfg.validate()?;
    let curves = build_curves(data, cfg.preset)?;
    let base = solve_base(cfg, data, &curves)?;
    let rest: Vec<f64> = cfg.sweep_order().into_iter().filter(|w| *w < 1.0).collect();
    let results: Vec<Result<BaseRun>> = std::thread::scope(|s| {
        let handles: Vec<_> = rest
            .iter()
            .map(|&w| {
                let (curves, base) = (&curves, &base);
                s.spawn(move || solve_pinned(cfg, data, curves, base, w))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });
    let mut solutions = vec![base.solution];
    for r in results {
        solutions.push(r?.solution);
    }
    let states: Vec<String> = data.counties.iter().map(|c| c.state.clone()).collect();
    let report = report(cfg, &states, &solutions);
    Ok(Sweep {
        curves,
        solutions,
        report,
    })
}
