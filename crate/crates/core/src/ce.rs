//! Multi-period capacity-expansion LP over representative days with a weighted
//! cost / local-benefit objective.
//!
//! Periods are solved jointly (perfect foresight). Capacity built in a period stays online in
//! every later period, and its annualised cost and benefit are counted once per period. The
//! reported cost and benefit are sums of annual values over the modelled periods.
use crate::error::{invalid, CoreError, Result};
use crate::finance::crf;
use crate::supply::{BenefitPoint, SupplyPoint};
use crate::land::Technology;
use log::debug;
use serde::{Deserialize, Serialize};
use solarsite_lp::{LPResult, LpStatus, RowId, Sense, SolverOptions, StandardFormLP, VarId};
use std::collections::{BTreeMap, HashMap};

pub const HOURS_PER_YEAR: usize = 8760;
const DAYS: usize = 365;
const MONTH_DAYS: [usize; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Season {
    Winter,
    Spring,
    Summer,
    Fall,
}

impl Season {
    pub const ALL: [Season; 4] = [Season::Winter, Season::Spring, Season::Summer, Season::Fall];

    /// Meteorological season of a 0-based day in a 365-day year.
    pub fn of_day(day: usize) -> Season {
        let mut left = day;
        let mut month = 0;
        while month < 11 && left >= MONTH_DAYS[month] {
            left -= MONTH_DAYS[month];
            month += 1;
        }
        match month {
            11 | 0 | 1 => Season::Winter,
            2..=4 => Season::Spring,
            5..=7 => Season::Summer,
            _ => Season::Fall,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    /// Closest day to the seasonal mean profile.
    Centroid,
    /// Highest net demand in the season.
    Extreme,
    /// Day of the annual demand peak.
    Peak,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepDay {
    /// 0-based day of year.
    pub day: usize,
    pub season: Season,
    pub kind: RepKind,
    /// Days represented.
    pub weight: f64,
}

/// Two days per season plus the annual peak day, with weights summing to 365.
///
/// Each day is described by its 24 hourly values of demand (over the annual maximum), solar
/// CF and wind CF. Per season the centroid day is nearest the seasonal mean of these vectors;
/// the extreme day has the highest hourly net demand `demand/max - (solar + wind)/2` among the
/// remaining days. The peak day has weight 1, the extreme day 1, and the centroid day the rest
/// of its season. Ties go to the earliest day.
pub fn select_rep_days(demand: &[f64], solar: &[f64], wind: &[f64]) -> Result<Vec<RepDay>> {
    for (name, s) in [("demand", demand), ("solar", solar), ("wind", wind)] {
        if s.len() < HOURS_PER_YEAR {
            return Err(CoreError::Dimension(format!(
                "{name} series has {} hours, need {HOURS_PER_YEAR}",
                s.len()
            )));
        }
    }
    let dmax = demand[..HOURS_PER_YEAR].iter().cloned().fold(0.0, f64::max).max(1e-12);
    let features: Vec<[f64; 72]> = (0..DAYS)
        .map(|d| {
            let mut f = [0.0; 72];
            for h in 0..24 {
                let i = d * 24 + h;
                f[h] = demand[i] / dmax;
                f[24 + h] = solar[i];
                f[48 + h] = wind[i];
            }
            f
        })
        .collect();
    let net = |d: usize| -> f64 {
        (0..24)
            .map(|h| {
                let i = d * 24 + h;
                demand[i] / dmax - 0.5 * (solar[i] + wind[i])
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let peak_hour = (0..HOURS_PER_YEAR)
        .max_by(|&a, &b| demand[a].total_cmp(&demand[b]).then(b.cmp(&a)))
        .expect("non-empty");
    let peak_day = peak_hour / 24;

    let mut out = Vec::with_capacity(9);
    for season in Season::ALL {
        let all: Vec<usize> = (0..DAYS).filter(|&d| Season::of_day(d) == season).collect();
        let mut mean = [0.0; 72];
        for &d in &all {
            for k in 0..72 {
                mean[k] += features[d][k] / all.len() as f64;
            }
        }
        let days: Vec<usize> = all.iter().copied().filter(|&d| d != peak_day).collect();
        let dist = |d: usize| -> f64 { (0..72).map(|k| (features[d][k] - mean[k]).powi(2)).sum() };
        let centroid = days
            .iter()
            .copied()
            .min_by(|&a, &b| dist(a).total_cmp(&dist(b)).then(a.cmp(&b)))
            .expect("season has days");
        let extreme = days
            .iter()
            .copied()
            .filter(|&d| d != centroid)
            .max_by(|&a, &b| net(a).total_cmp(&net(b)).then(b.cmp(&a)))
            .expect("season has two days");
        out.push(RepDay {
            day: centroid,
            season,
            kind: RepKind::Centroid,
            weight: (days.len() - 1) as f64,
        });
        out.push(RepDay {
            day: extreme,
            season,
            kind: RepKind::Extreme,
            weight: 1.0,
        });
    }
    out.push(RepDay {
        day: peak_day,
        season: Season::of_day(peak_day),
        kind: RepKind::Peak,
        weight: 1.0,
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub from: String,
    pub to: String,
    pub capacity_mw: f64,
    /// Capital cost of added transfer capability, $ per MW-mile.
    pub expansion_cost_per_mw_mile: f64,
    pub length_mi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExistingUnit {
    pub region: String,
    pub name: String,
    pub capacity_mw: f64,
    /// MMBtu/MWh.
    pub heat_rate: f64,
    /// $/MMBtu.
    pub fuel_cost: f64,
    /// $/MWh.
    pub vom: f64,
    /// tCO2/MWh.
    pub emission_rate: f64,
    /// First period in which the unit is no longer available.
    pub retire_year: Option<u32>,
}

impl ExistingUnit {
    pub fn marginal_cost(&self) -> f64 {
        self.heat_rate * self.fuel_cost + self.vom
    }

    pub fn capacity_in(&self, period: u32) -> f64 {
        match self.retire_year {
            Some(y) if period >= y => 0.0,
            _ => self.capacity_mw,
        }
    }
}

/// New dispatchable technology available in every region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewTech {
    pub name: String,
    /// $/MW.
    pub capex: f64,
    /// $/MW-yr.
    pub fom: f64,
    pub heat_rate: f64,
    pub fuel_cost: f64,
    pub vom: f64,
    pub emission_rate: f64,
    pub life_years: u32,
}

impl NewTech {
    pub fn marginal_cost(&self) -> f64 {
        self.heat_rate * self.fuel_cost + self.vom
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Storage {
    /// $/MW of power capacity, energy included.
    pub capex: f64,
    pub fom: f64,
    pub duration_h: f64,
    pub round_trip: f64,
    pub life_years: u32,
}

impl Default for Storage {
    fn default() -> Self {
        Self {
            capex: 1.6e6,
            fom: 40_000.0,
            duration_h: 4.0,
            round_trip: 0.85,
            life_years: 15,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountyResource {
    pub name: String,
    pub state: String,
    pub region: String,
    pub solar_cf: Vec<f64>,
    pub wind_cf: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemData {
    pub regions: Vec<String>,
    /// Hourly MW per region for the first modelled period.
    pub demand: Vec<Vec<f64>>,
    /// Annual demand growth applied from the first period.
    pub demand_growth: f64,
    pub lines: Vec<Line>,
    pub existing: Vec<ExistingUnit>,
    pub new_techs: Vec<NewTech>,
    pub storage: Storage,
    pub counties: Vec<CountyResource>,
    /// Emissions in `co2_base_year`, t/yr.
    pub co2_base: f64,
    pub co2_base_year: u32,
    /// Cap in `co2_final_year` as a fraction of the base.
    pub co2_final_fraction: f64,
    pub co2_final_year: u32,
    pub reserve_margin: f64,
    /// Real rate for annualising dispatchable, storage and transmission capital.
    pub invest_rate: f64,
    pub transmission_life: u32,
}

impl SystemData {
    /// Linear path from the base emissions to the final fraction, flat afterwards.
    pub fn co2_cap(&self, period: u32) -> f64 {
        let span = (self.co2_final_year - self.co2_base_year) as f64;
        let s = ((period as f64 - self.co2_base_year as f64) / span).clamp(0.0, 1.0);
        self.co2_base * (1.0 - (1.0 - self.co2_final_fraction) * s)
    }

    fn region_index(&self, name: &str) -> Result<usize> {
        self.regions
            .iter()
            .position(|r| r == name)
            .ok_or_else(|| CoreError::Unknown {
                kind: "region",
                name: name.into(),
            })
    }

    pub fn total_demand(&self) -> Vec<f64> {
        (0..HOURS_PER_YEAR).map(|h| self.demand.iter().map(|d| d[h]).sum()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.demand.len() != self.regions.len() {
            return Err(CoreError::Dimension(format!(
                "{} demand series for {} regions",
                self.demand.len(),
                self.regions.len()
            )));
        }
        for (r, d) in self.regions.iter().zip(&self.demand) {
            if d.len() < HOURS_PER_YEAR {
                return Err(CoreError::Dimension(format!("demand for {r} has {} hours", d.len())));
            }
            if d.iter().any(|v| !(*v >= 0.0)) {
                return invalid("demand", format!("negative or NaN demand in {r}"));
            }
        }
        for c in &self.counties {
            self.region_index(&c.region)?;
            if c.solar_cf.len() < HOURS_PER_YEAR || c.wind_cf.len() < HOURS_PER_YEAR {
                return Err(CoreError::Dimension(format!("capacity factors for {} are short", c.name)));
            }
            if c.solar_cf.iter().chain(&c.wind_cf).any(|v| !(0.0..=1.0).contains(v)) {
                return invalid("capacity factor", format!("{}: value outside [0, 1]", c.name));
            }
        }
        for l in &self.lines {
            self.region_index(&l.from)?;
            self.region_index(&l.to)?;
            if !(l.capacity_mw >= 0.0) || !(l.length_mi >= 0.0) {
                return invalid("line", format!("{}-{}", l.from, l.to));
            }
        }
        for u in &self.existing {
            self.region_index(&u.region)?;
            if !(u.capacity_mw >= 0.0) || !(u.emission_rate >= 0.0) {
                return invalid("existing unit", u.name.clone());
            }
        }
        if !(self.storage.round_trip > 0.0 && self.storage.round_trip <= 1.0) {
            return invalid("storage", "round-trip efficiency outside (0, 1]");
        }
        if self.co2_final_year <= self.co2_base_year {
            return invalid("emissions path", "final year must follow base year");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CEProblem {
    /// Weight on cost; `1 - weight_cost` goes on local benefit.
    pub weight_cost: f64,
    pub periods: Vec<u32>,
    /// Cumulative solar MW required in each period.
    pub fix_total_solar: Option<Vec<f64>>,
    /// Hours averaged into one dispatch step; must divide 24.
    pub hours_per_step: usize,
}

impl Default for CEProblem {
    fn default() -> Self {
        Self {
            weight_cost: 1.0,
            periods: vec![2025, 2030, 2035, 2040],
            fix_total_solar: None,
            hours_per_step: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    BuildSolar { c: usize, p: usize },
    BuildWind { c: usize, p: usize },
    BuildNew { r: usize, k: usize, p: usize },
    BuildStorage { r: usize, p: usize },
    Expand { l: usize, p: usize },
    Dispatch { p: usize },
    Flow { l: usize, p: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RowKind {
    Balance,
    Land { c: usize, tech: Technology },
    Reserve { p: usize },
    Emissions { p: usize },
    FixSolar { p: usize },
    Other,
}

/// The assembled LP plus what is needed to read its solution.
#[derive(Clone, Debug)]
pub struct CeModel {
    pub lp: StandardFormLP,
    pub rep_days: Vec<RepDay>,
    pub problem: CEProblem,
    vars: Vec<Var>,
    rows: Vec<RowKind>,
    cost: Vec<f64>,
    benefit: Vec<f64>,
    /// Weighted hours per unit of each generation or flow variable (0 elsewhere).
    energy: Vec<f64>,
    gen_tech: Vec<Option<String>>,
    caps: Vec<f64>,
    counties: Vec<(String, String, String)>,
    regions: Vec<String>,
    techs: Vec<String>,
    line_names: Vec<(String, String)>,
}

impl CeModel {
    pub fn num_steps(&self) -> usize {
        self.rep_days.len() * 24 / self.problem.hours_per_step
    }
}

/// Dispatch step of one rep day: (rep-day index, step within day).
fn step_hours(rep: &RepDay, s: usize, hps: usize) -> std::ops::Range<usize> {
    let start = rep.day * 24 + s * hps;
    start..start + hps
}

fn mean(series: &[f64], hours: std::ops::Range<usize>) -> f64 {
    let n = hours.len() as f64;
    series[hours].iter().sum::<f64>() / n
}

/// Builds the LP for `problem`. Solar and wind investments are limited to the counties and
/// capacities in `supply`; `benefit` gives each county's net value added per MW-yr.
pub fn build_lp(problem: &CEProblem, sys: &SystemData, supply: &[SupplyPoint], benefit: &[BenefitPoint]) -> Result<CeModel> {
    sys.validate()?;
    let w = problem.weight_cost;
    if !(0.0..=1.0).contains(&w) {
        return invalid("cost weight", format!("{w} outside [0, 1]"));
    }
    if w < 1.0 && problem.fix_total_solar.is_none() {
        return Err(CoreError::UnboundedBenefit(w));
    }
    let np = problem.periods.len();
    if np == 0 || problem.periods.windows(2).any(|p| p[0] >= p[1]) {
        return invalid("periods", format!("{:?} must be non-empty and increasing", problem.periods));
    }
    if let Some(fix) = &problem.fix_total_solar {
        if fix.len() != np {
            return Err(CoreError::Dimension(format!("{} fixed solar levels for {np} periods", fix.len())));
        }
    }
    let hps = problem.hours_per_step;
    if hps == 0 || 24 % hps != 0 {
        return invalid("hours_per_step", format!("{hps} does not divide 24"));
    }
    let spd = 24 / hps;

    let nc = sys.counties.len();
    let county_ix: HashMap<&str, usize> = sys.counties.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
    let county_region: Vec<usize> = sys
        .counties
        .iter()
        .map(|c| sys.region_index(&c.region))
        .collect::<Result<_>>()?;
    let mut solar_pt: Vec<Option<&SupplyPoint>> = vec![None; nc];
    let mut wind_pt: Vec<Option<&SupplyPoint>> = vec![None; nc];
    for s in supply {
        let &c = county_ix.get(s.county.as_str()).ok_or_else(|| CoreError::Unknown {
            kind: "county",
            name: s.county.clone(),
        })?;
        match s.tech {
            Technology::Solar => solar_pt[c] = Some(s),
            Technology::Wind => wind_pt[c] = Some(s),
        }
    }
    let mut va = vec![0.0; nc];
    for b in benefit {
        if let Some(&c) = county_ix.get(b.county.as_str()) {
            va[c] = b.net_va_per_mw_yr;
        }
    }

    // Representative days from system-wide demand and mean resource.
    let total = sys.total_demand();
    let mean_cf = |f: fn(&CountyResource) -> &Vec<f64>| -> Vec<f64> {
        let n = nc.max(1) as f64;
        (0..HOURS_PER_YEAR)
            .map(|h| sys.counties.iter().map(|c| f(c)[h]).sum::<f64>() / n)
            .collect()
    };
    let rep_days = select_rep_days(&total, &mean_cf(|c| &c.solar_cf), &mean_cf(|c| &c.wind_cf))?;
    let steps: Vec<(usize, usize)> = (0..rep_days.len()).flat_map(|d| (0..spd).map(move |s| (d, s))).collect();
    let step_weight: Vec<f64> = steps.iter().map(|&(d, _)| rep_days[d].weight * hps as f64).collect();
    let peak_hour = (0..HOURS_PER_YEAR)
        .max_by(|&a, &b| total[a].total_cmp(&total[b]).then(b.cmp(&a)))
        .expect("non-empty");
    let growth: Vec<f64> = problem
        .periods
        .iter()
        .map(|&y| (1.0 + sys.demand_growth).powi((y - problem.periods[0]) as i32))
        .collect();
    // Periods from p to the end, over which capacity built in p is paid for and credited.
    let remaining = |p: usize| (np - p) as f64;

    let mut lp = StandardFormLP::new("capacity_expansion");
    let mut vars: Vec<Var> = Vec::new();
    let mut cost: Vec<f64> = Vec::new();
    let mut ben: Vec<f64> = Vec::new();
    let mut energy: Vec<f64> = Vec::new();
    let mut gen_tech: Vec<Option<String>> = Vec::new();
    let mut rows: Vec<RowKind> = Vec::new();
    let mut add_var = |lp: &mut StandardFormLP, name: String, kind: Var, c: f64, b: f64, hi: f64, e: f64, tech: Option<&str>| -> VarId {
        let v = lp.add_var(name, w * c - (1.0 - w) * b, if matches!(kind, Var::Flow { .. }) { f64::NEG_INFINITY } else { 0.0 }, hi);
        vars.push(kind);
        cost.push(c);
        ben.push(b);
        energy.push(e);
        gen_tech.push(tech.map(str::to_string));
        v
    };
    let mut add_row = |lp: &mut StandardFormLP, name: String, kind: RowKind, coeffs: Vec<(VarId, f64)>, sense: Sense, rhs: f64| -> RowId {
        rows.push(kind);
        lp.add_row(name, coeffs, sense, rhs)
    };

    // Investment variables.
    let inv_crf = |life: u32| crf(sys.invest_rate, life);
    let mut b_solar = vec![vec![None; np]; nc];
    let mut b_wind = vec![vec![None; np]; nc];
    for c in 0..nc {
        let name = &sys.counties[c].name;
        for p in 0..np {
            if let Some(s) = solar_pt[c] {
                b_solar[c][p] = Some(add_var(
                    &mut lp,
                    format!("bs_{name}_{}", problem.periods[p]),
                    Var::BuildSolar { c, p },
                    s.annualized_cost * remaining(p),
                    va[c] * remaining(p),
                    f64::INFINITY,
                    0.0,
                    None,
                ));
            }
            if let Some(s) = wind_pt[c] {
                b_wind[c][p] = Some(add_var(
                    &mut lp,
                    format!("bw_{name}_{}", problem.periods[p]),
                    Var::BuildWind { c, p },
                    s.annualized_cost * remaining(p),
                    0.0,
                    f64::INFINITY,
                    0.0,
                    None,
                ));
            }
        }
    }
    let nr = sys.regions.len();
    let nk = sys.new_techs.len();
    let mut b_new = vec![vec![vec![VarId(0); np]; nk]; nr];
    let mut b_sto = vec![vec![VarId(0); np]; nr];
    for r in 0..nr {
        for (k, tech) in sys.new_techs.iter().enumerate() {
            let annual = inv_crf(tech.life_years) * tech.capex + tech.fom;
            for p in 0..np {
                b_new[r][k][p] = add_var(
                    &mut lp,
                    format!("bn_{}_{}_{}", sys.regions[r], tech.name, problem.periods[p]),
                    Var::BuildNew { r, k, p },
                    annual * remaining(p),
                    0.0,
                    f64::INFINITY,
                    0.0,
                    None,
                );
            }
        }
        let annual = inv_crf(sys.storage.life_years) * sys.storage.capex + sys.storage.fom;
        for p in 0..np {
            b_sto[r][p] = add_var(
                &mut lp,
                format!("bb_{}_{}", sys.regions[r], problem.periods[p]),
                Var::BuildStorage { r, p },
                annual * remaining(p),
                0.0,
                f64::INFINITY,
                0.0,
                None,
            );
        }
    }
    let nl = sys.lines.len();
    let mut x_line = vec![vec![VarId(0); np]; nl];
    for (l, line) in sys.lines.iter().enumerate() {
        let annual = crf(sys.invest_rate, sys.transmission_life) * line.expansion_cost_per_mw_mile * line.length_mi;
        for p in 0..np {
            x_line[l][p] = add_var(
                &mut lp,
                format!("tx_{}_{}_{}", line.from, line.to, problem.periods[p]),
                Var::Expand { l, p },
                annual * remaining(p),
                0.0,
                f64::INFINITY,
                0.0,
                None,
            );
        }
    }

    // Land limits on cumulative county builds.
    for c in 0..nc {
        for (tech, builds, pt) in [
            (Technology::Solar, &b_solar[c], solar_pt[c]),
            (Technology::Wind, &b_wind[c], wind_pt[c]),
        ] {
            if let Some(s) = pt {
                let coeffs = builds.iter().flatten().map(|&v| (v, 1.0)).collect();
                add_row(
                    &mut lp,
                    format!("land_{:?}_{}", tech, sys.counties[c].name),
                    RowKind::Land { c, tech },
                    coeffs,
                    Sense::Le,
                    s.capacity_mw,
                );
            }
        }
    }

    let eta = sys.storage.round_trip.sqrt();
    let caps: Vec<f64> = problem.periods.iter().map(|&y| sys.co2_cap(y)).collect();
    let cumulative = |v: &[VarId], p: usize| -> Vec<VarId> { v[..=p].to_vec() };
    let cumulative_opt = |v: &[Option<VarId>], p: usize| -> Vec<VarId> { v[..=p].iter().flatten().copied().collect() };

    for p in 0..np {
        let year = problem.periods[p];
        let g = growth[p];
        let mut emission_terms: Vec<(VarId, f64)> = Vec::new();
        // Per-step dispatch.
        let mut day_storage: Vec<Vec<(VarId, VarId, VarId)>> = vec![Vec::with_capacity(spd); nr];
        for (t, &(d, s)) in steps.iter().enumerate() {
            let hours = step_hours(&rep_days[d], s, hps);
            let wt = step_weight[t];
            let mut balance: Vec<Vec<(VarId, f64)>> = vec![Vec::new(); nr];
            for unit in &sys.existing {
                let cap = unit.capacity_in(year);
                if cap <= 0.0 {
                    continue;
                }
                let r = sys.region_index(&unit.region)?;
                let v = add_var(
                    &mut lp,
                    format!("ge_{}_{}_{year}_{t}", unit.region, unit.name),
                    Var::Dispatch { p },
                    wt * unit.marginal_cost(),
                    0.0,
                    cap,
                    wt,
                    Some(&unit.name),
                );
                balance[r].push((v, 1.0));
                if unit.emission_rate > 0.0 {
                    emission_terms.push((v, wt * unit.emission_rate));
                }
            }
            for r in 0..nr {
                let region = &sys.regions[r];
                for (k, tech) in sys.new_techs.iter().enumerate() {
                    let v = add_var(
                        &mut lp,
                        format!("gn_{region}_{}_{year}_{t}", tech.name),
                        Var::Dispatch { p },
                        wt * tech.marginal_cost(),
                        0.0,
                        f64::INFINITY,
                        wt,
                        Some(&tech.name),
                    );
                    balance[r].push((v, 1.0));
                    if tech.emission_rate > 0.0 {
                        emission_terms.push((v, wt * tech.emission_rate));
                    }
                    let mut coeffs = vec![(v, 1.0)];
                    coeffs.extend(cumulative(&b_new[r][k], p).into_iter().map(|b| (b, -1.0)));
                    add_row(&mut lp, format!("capn_{region}_{}_{year}_{t}", tech.name), RowKind::Other, coeffs, Sense::Le, 0.0);
                }
                // Variable renewables: regional output within the sum of county availability.
                for (tech, builds, label) in [(Technology::Solar, &b_solar, "solar"), (Technology::Wind, &b_wind, "wind")] {
                    let mut coeffs = Vec::new();
                    for c in (0..nc).filter(|&c| county_region[c] == r) {
                        let series = match tech {
                            Technology::Solar => &sys.counties[c].solar_cf,
                            Technology::Wind => &sys.counties[c].wind_cf,
                        };
                        let cf = mean(series, hours.clone());
                        if cf > 0.0 {
                            coeffs.extend(cumulative_opt(&builds[c], p).into_iter().map(|b| (b, -cf)));
                        }
                    }
                    if coeffs.is_empty() {
                        continue;
                    }
                    let v = add_var(&mut lp, format!("g{label}_{region}_{year}_{t}"), Var::Dispatch { p }, 0.0, 0.0, f64::INFINITY, wt, Some(label));
                    balance[r].push((v, 1.0));
                    coeffs.push((v, 1.0));
                    add_row(&mut lp, format!("cap{label}_{region}_{year}_{t}"), RowKind::Other, coeffs, Sense::Le, 0.0);
                }
                // Storage.
                let ch = add_var(&mut lp, format!("ch_{region}_{year}_{t}"), Var::Dispatch { p }, 0.0, 0.0, f64::INFINITY, 0.0, None);
                let dis = add_var(&mut lp, format!("dis_{region}_{year}_{t}"), Var::Dispatch { p }, 0.0, 0.0, f64::INFINITY, 0.0, None);
                let soc = add_var(&mut lp, format!("soc_{region}_{year}_{t}"), Var::Dispatch { p }, 0.0, 0.0, f64::INFINITY, 0.0, None);
                balance[r].push((dis, 1.0));
                balance[r].push((ch, -1.0));
                let built = cumulative(&b_sto[r], p);
                for (v, scale, tag) in [(ch, 1.0, "chcap"), (dis, 1.0, "discap"), (soc, 1.0 / sys.storage.duration_h, "soccap")] {
                    let mut coeffs = vec![(v, scale)];
                    coeffs.extend(built.iter().map(|&b| (b, -1.0)));
                    add_row(&mut lp, format!("{tag}_{region}_{year}_{t}"), RowKind::Other, coeffs, Sense::Le, 0.0);
                }
                day_storage[r].push((soc, ch, dis));
                if s + 1 == spd {
                    // soc_t - soc_{t-1} - eta*h*ch + h/eta*dis = 0, cyclic within the day.
                    let dt = hps as f64;
                    let day = std::mem::take(&mut day_storage[r]);
                    for (i, &(soc, ch, dis)) in day.iter().enumerate() {
                        let prev = day[(i + spd - 1) % spd].0;
                        let coeffs = vec![(soc, 1.0), (prev, -1.0), (ch, -eta * dt), (dis, dt / eta)];
                        add_row(&mut lp, format!("socbal_{region}_{year}_{}", t + 1 + i - spd), RowKind::Other, coeffs, Sense::Eq, 0.0);
                    }
                }
            }
            for (l, line) in sys.lines.iter().enumerate() {
                let f = add_var(&mut lp, format!("f_{}_{}_{year}_{t}", line.from, line.to), Var::Flow { l, p }, 0.0, 0.0, f64::INFINITY, wt, None);
                let from = sys.region_index(&line.from)?;
                let to = sys.region_index(&line.to)?;
                balance[from].push((f, -1.0));
                balance[to].push((f, 1.0));
                for (sign, tag) in [(1.0, "fmax"), (-1.0, "fmin")] {
                    let mut coeffs = vec![(f, sign)];
                    coeffs.extend(cumulative(&x_line[l], p).into_iter().map(|x| (x, -1.0)));
                    add_row(&mut lp, format!("{tag}_{}_{}_{year}_{t}", line.from, line.to), RowKind::Other, coeffs, Sense::Le, line.capacity_mw);
                }
            }
            for r in 0..nr {
                let demand = mean(&sys.demand[r], hours.clone()) * g;
                add_row(
                    &mut lp,
                    format!("bal_{}_{year}_{t}", sys.regions[r]),
                    RowKind::Balance,
                    std::mem::take(&mut balance[r]),
                    Sense::Eq,
                    demand,
                );
            }
        }

        add_row(&mut lp, format!("co2_{year}"), RowKind::Emissions { p }, emission_terms, Sense::Le, caps[p]);

        // Planning reserve at the annual peak hour.
        let peak = total[peak_hour] * g;
        let firm_existing: f64 = sys.existing.iter().map(|u| u.capacity_in(year)).sum();
        let mut coeffs: Vec<(VarId, f64)> = Vec::new();
        for r in 0..nr {
            for k in 0..nk {
                coeffs.extend(cumulative(&b_new[r][k], p).into_iter().map(|b| (b, 1.0)));
            }
            coeffs.extend(cumulative(&b_sto[r], p).into_iter().map(|b| (b, 1.0)));
        }
        for c in 0..nc {
            let sc = sys.counties[c].solar_cf[peak_hour];
            let wc = sys.counties[c].wind_cf[peak_hour];
            coeffs.extend(cumulative_opt(&b_solar[c], p).into_iter().map(|b| (b, sc)));
            coeffs.extend(cumulative_opt(&b_wind[c], p).into_iter().map(|b| (b, wc)));
        }
        add_row(
            &mut lp,
            format!("reserve_{year}"),
            RowKind::Reserve { p },
            coeffs,
            Sense::Ge,
            (1.0 + sys.reserve_margin) * peak - firm_existing,
        );

        if let Some(fix) = &problem.fix_total_solar {
            let coeffs = (0..nc).flat_map(|c| cumulative_opt(&b_solar[c], p)).map(|b| (b, 1.0)).collect();
            add_row(&mut lp, format!("fixsolar_{year}"), RowKind::FixSolar { p }, coeffs, Sense::Eq, fix[p]);
        }
    }

    debug!(
        "capacity expansion LP: {} rows, {} columns, {} nonzeros",
        lp.num_rows(),
        lp.num_vars(),
        lp.num_nonzeros()
    );
    Ok(CeModel {
        lp,
        rep_days,
        problem: problem.clone(),
        vars,
        rows,
        cost,
        benefit: ben,
        energy,
        gen_tech,
        caps,
        counties: sys
            .counties
            .iter()
            .map(|c| (c.name.clone(), c.state.clone(), c.region.clone()))
            .collect(),
        regions: sys.regions.clone(),
        techs: sys.new_techs.iter().map(|t| t.name.clone()).collect(),
        line_names: sys.lines.iter().map(|l| (l.from.clone(), l.to.clone())).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountyBuild {
    pub county: String,
    pub state: String,
    pub region: String,
    pub year: u32,
    pub mw: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionBuild {
    pub region: String,
    pub tech: String,
    pub year: u32,
    pub mw: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineBuild {
    pub from: String,
    pub to: String,
    pub year: u32,
    pub mw: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineFlow {
    pub from: String,
    pub to: String,
    pub year: u32,
    /// Largest absolute flow over dispatch steps, MW.
    pub peak_mw: f64,
    /// Annual MWh moved in the `from -> to` direction minus the reverse.
    pub net_mwh: f64,
    pub gross_mwh: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodSummary {
    pub year: u32,
    /// Cumulative installed MW.
    pub solar_mw: f64,
    pub wind_mw: f64,
    pub emissions: f64,
    pub emissions_cap: f64,
    /// Annual MWh by technology or unit name.
    pub energy: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CESolution {
    pub weight_cost: f64,
    pub objective: f64,
    /// Sum over periods of annualised investment and operating cost, $.
    pub total_cost: f64,
    /// Sum over periods of net local value added from solar, $.
    pub total_benefit: f64,
    pub solar_builds: Vec<CountyBuild>,
    pub wind_builds: Vec<CountyBuild>,
    pub dispatchable_builds: Vec<RegionBuild>,
    pub line_builds: Vec<LineBuild>,
    pub flows: Vec<LineFlow>,
    pub periods: Vec<PeriodSummary>,
    /// Names of binding land, reserve and emissions rows.
    pub binding: Vec<String>,
    pub max_violation: f64,
}

impl CESolution {
    /// Final cumulative solar MW per county.
    pub fn solar_by_county(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for b in &self.solar_builds {
            *out.entry(b.county.clone()).or_insert(0.0) += b.mw;
        }
        out
    }

    pub fn total_solar_mw(&self) -> f64 {
        self.periods.last().map_or(0.0, |p| p.solar_mw)
    }
}

/// Residual tolerance on the scaled solution.
pub const RESIDUAL_TOL: f64 = 1e-6;
const BUILD_EPS: f64 = 1e-6;

/// Reads an optimal LP solution back into builds, emissions and objective components.
pub fn interpret(model: &CeModel, result: &LPResult) -> Result<CESolution> {
    if result.status != LpStatus::Optimal {
        let mut detail = format!("after {} iterations", result.iterations);
        if result.status == LpStatus::Infeasible && result.x.len() == model.vars.len() {
            let worst = most_violated(&model.lp, &result.x, 5);
            if !worst.is_empty() {
                detail.push_str("; most violated rows at the last point: ");
                detail.push_str(&worst.join(", "));
            }
        }
        return Err(CoreError::Solver {
            status: result.status,
            detail,
        });
    }
    let x = &result.x;
    if x.len() != model.vars.len() {
        return Err(CoreError::Dimension(format!("{} values for {} variables", x.len(), model.vars.len())));
    }
    let max_violation = model.lp.max_scaled_violation(x);
    if max_violation > RESIDUAL_TOL {
        return Err(CoreError::Solver {
            status: result.status,
            detail: format!("scaled residual {max_violation:.3e} exceeds {RESIDUAL_TOL:e}"),
        });
    }
    let w = model.problem.weight_cost;
    let periods = &model.problem.periods;
    let total_cost: f64 = model.cost.iter().zip(x).map(|(c, v)| c * v).sum();
    let total_benefit: f64 = model.benefit.iter().zip(x).map(|(b, v)| b * v).sum();

    let mut summaries: Vec<PeriodSummary> = periods
        .iter()
        .zip(&model.caps)
        .map(|(&year, &cap)| PeriodSummary {
            year,
            solar_mw: 0.0,
            wind_mw: 0.0,
            emissions: 0.0,
            emissions_cap: cap,
            energy: BTreeMap::new(),
        })
        .collect();
    let mut solar_builds = Vec::new();
    let mut wind_builds = Vec::new();
    let mut dispatchable_builds = Vec::new();
    let mut line_builds = Vec::new();
    let mut flows: Vec<LineFlow> = periods
        .iter()
        .flat_map(|&year| {
            model.line_names.iter().map(move |(from, to)| LineFlow {
                from: from.clone(),
                to: to.clone(),
                year,
                peak_mw: 0.0,
                net_mwh: 0.0,
                gross_mwh: 0.0,
            })
        })
        .collect();
    for (j, (&kind, &v)) in model.vars.iter().zip(x).enumerate() {
        match kind {
            Var::BuildSolar { c, p } | Var::BuildWind { c, p } => {
                let solar = matches!(kind, Var::BuildSolar { .. });
                for s in &mut summaries[p..] {
                    if solar {
                        s.solar_mw += v;
                    } else {
                        s.wind_mw += v;
                    }
                }
                if v > BUILD_EPS {
                    let (county, state, region) = &model.counties[c];
                    let b = CountyBuild {
                        county: county.clone(),
                        state: state.clone(),
                        region: region.clone(),
                        year: periods[p],
                        mw: v,
                    };
                    if solar {
                        solar_builds.push(b);
                    } else {
                        wind_builds.push(b);
                    }
                }
            }
            Var::BuildNew { r, k, p } if v > BUILD_EPS => dispatchable_builds.push(RegionBuild {
                region: model.regions[r].clone(),
                tech: model.techs[k].clone(),
                year: periods[p],
                mw: v,
            }),
            Var::BuildStorage { r, p } if v > BUILD_EPS => dispatchable_builds.push(RegionBuild {
                region: model.regions[r].clone(),
                tech: "storage".into(),
                year: periods[p],
                mw: v,
            }),
            Var::Expand { l, p } if v > BUILD_EPS => line_builds.push(LineBuild {
                from: model.line_names[l].0.clone(),
                to: model.line_names[l].1.clone(),
                year: periods[p],
                mw: v,
            }),
            Var::Flow { l, p } => {
                let f = &mut flows[p * model.line_names.len() + l];
                f.peak_mw = f.peak_mw.max(v.abs());
                f.net_mwh += model.energy[j] * v;
                f.gross_mwh += model.energy[j] * v.abs();
            }
            Var::Dispatch { p } => {
                if let Some(tech) = &model.gen_tech[j] {
                    *summaries[p].energy.entry(tech.clone()).or_insert(0.0) += model.energy[j] * v;
                }
            }
            _ => {}
        }
    }

    let mut binding = Vec::new();
    for (row, kind) in model.lp.rows.iter().zip(&model.rows) {
        let watch = match *kind {
            RowKind::Emissions { p } => {
                summaries[p].emissions = row.activity(x);
                true
            }
            RowKind::Land { .. } | RowKind::Reserve { .. } => true,
            _ => false,
        };
        if watch && (row.activity(x) - row.rhs).abs() <= RESIDUAL_TOL * row.rhs.abs().max(1.0) {
            binding.push(row.name.clone());
        }
    }

    Ok(CESolution {
        weight_cost: w,
        objective: w * total_cost - (1.0 - w) * total_benefit,
        total_cost,
        total_benefit,
        solar_builds,
        wind_builds,
        dispatchable_builds,
        line_builds,
        flows,
        periods: summaries,
        binding,
        max_violation,
    })
}

fn most_violated(lp: &StandardFormLP, x: &[f64], k: usize) -> Vec<String> {
    let mut v: Vec<(f64, &str)> = lp
        .rows
        .iter()
        .map(|r| (r.violation(x) / r.rhs.abs().max(1.0), r.name.as_str()))
        .filter(|(v, _)| *v > RESIDUAL_TOL)
        .collect();
    v.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
    v.into_iter().take(k).map(|(_, n)| n.to_string()).collect()
}

/// Builds, solves and interprets one problem.
pub fn solve_ce(
    problem: &CEProblem,
    sys: &SystemData,
    supply: &[SupplyPoint],
    benefit: &[BenefitPoint],
    opts: &SolverOptions,
) -> Result<(CeModel, CESolution)> {
    let model = build_lp(problem, sys, supply, benefit)?;
    let result = solarsite_lp::solve(&model.lp, opts)?;
    let sol = interpret(&model, &result)?;
    Ok((model, sol))
}
