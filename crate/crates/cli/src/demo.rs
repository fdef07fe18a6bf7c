//! Synthetic 12-county, 3-state dataset and its calibration.
//!
//! Everything is drawn from a seeded ChaCha stream, so one seed always produces the same
//! bytes. After the raw multiplier tables are drawn, value-added multipliers are rescaled
//! so the Ohio/large profile (average yield) reaches the gross anchor, and the Grain
//! Farming value-added multipliers are rescaled so that profile loses the target share of
//! gross value added to agricultural offsets.
use crate::data::{
    self, format_line_options, Co2Path, CountyRow, EconomicsFile, ExpenditureRow, MultiplierRow, ParcelRow, SystemFile,
    TaxRow, TaxRowKind, UnitCosts, ZoningRow,
};
use crate::error::{CliError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use solarsite_core::ce::{ExistingUnit, Line, NewTech, Storage, HOURS_PER_YEAR};
use solarsite_core::econ::{
    commodity, lifecycle_net_impact, AgBaseline, CountyEconomy, EconParams, ExpenditureProfile, MultiplierTable,
    Multipliers, ProfileId, ProjectSpec, SizeClass, TaxSchedule, YieldClass, DEFAULT_TAX_DISCOUNT_RATE, STATE_TAX_TABLE,
};
use solarsite_core::interconnect::{Kv, LineOption};
use solarsite_core::land::{LandClass, ZoningStatus};
use solarsite_core::supply::{FinanceParams, TechCost};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

pub const GROSS_ANCHOR: f64 = 34_500.0;
/// Share of gross value added lost to agriculture in the anchor profile.
pub const AG_REDUCTION_TARGET: f64 = 0.125;
pub const ANCHOR_STATE: &str = "Ohio";
pub const REGIONS: [&str; 3] = ["Ohio", "Indiana", "Michigan"];
pub const COUNTIES_PER_STATE: usize = 4;
const PARCELS_PER_COUNTY: usize = 150;
const FIRST_PERIOD: u32 = 2025;
const BASE_YEAR: u32 = 2020;
const DEMAND_GROWTH: f64 = 0.01;

/// Scale factors applied during calibration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub seed: u64,
    pub va_scale: f64,
    pub ag_va_scale: f64,
    pub gross_va_per_mw_yr: f64,
    pub net_va_per_mw_yr: f64,
    pub ag_reduction: f64,
    pub co2_base: f64,
}

fn round(x: f64, digits: i32) -> f64 {
    let k = 10f64.powi(digits);
    (x * k).round() / k
}

/// Raw (pre-calibration) per-commodity multipliers: output, earnings share of output,
/// jobs per $1M, value-added share of output.
const TEMPLATE: [(&str, f64, f64, f64, f64); 10] = [
    (commodity::CONSTRUCTION, 1.85, 0.36, 14.0, 0.52),
    (commodity::PROFESSIONAL, 1.80, 0.42, 12.5, 0.58),
    (commodity::ELECTRICAL_EQUIPMENT, 1.55, 0.28, 7.5, 0.40),
    (commodity::FABRICATED_METAL, 1.65, 0.30, 9.0, 0.42),
    (commodity::UTILITY_CONSTRUCTION, 1.80, 0.34, 11.0, 0.50),
    (commodity::MAINTENANCE, 1.75, 0.38, 16.0, 0.54),
    (commodity::TRUCKING, 1.70, 0.33, 12.0, 0.48),
    (commodity::GOVERNMENT, 1.70, 0.45, 13.0, 0.60),
    (commodity::HOUSEHOLD, 1.45, 0.26, 9.5, 0.46),
    (commodity::AGRICULTURE, 1.70, 0.20, 8.0, 0.40),
];

fn size_factor(size: SizeClass) -> f64 {
    match size {
        SizeClass::Small => 0.78,
        SizeClass::Medium => 0.89,
        SizeClass::Large => 1.0,
    }
}

/// Multiplier tables for the six taxed states at every size, before calibration.
fn raw_multipliers(rng: &mut ChaCha8Rng) -> BTreeMap<ProfileId, MultiplierTable> {
    let mut out = BTreeMap::new();
    for (state, _, _) in STATE_TAX_TABLE {
        let state_k: f64 = 0.95 + 0.1 * rng.gen::<f64>();
        for size in SizeClass::ALL {
            let k = state_k * size_factor(size);
            let rows = TEMPLATE
                .iter()
                .map(|&(name, out, earn, jobs, va)| {
                    let output = 1.0 + (out - 1.0) * k;
                    (
                        name.to_string(),
                        Multipliers {
                            output,
                            earnings: output * earn,
                            jobs: jobs * k,
                            value_added: output * va,
                        },
                    )
                })
                .collect();
            let id = ProfileId {
                state: state.into(),
                size,
            };
            out.insert(id.clone(), MultiplierTable { profile: id, rows });
        }
    }
    out
}

fn anchor_lifecycle(spec: &ProjectSpec, econ: &EconParams, tables: &BTreeMap<ProfileId, MultiplierTable>, tax: &TaxSchedule) -> Result<solarsite_core::econ::Lifecycle> {
    let id = ProfileId {
        state: ANCHOR_STATE.into(),
        size: SizeClass::Large,
    };
    Ok(lifecycle_net_impact(
        spec,
        econ,
        CountyEconomy {
            multipliers: &tables[&id],
            tax,
            yield_class: YieldClass::Average,
        },
    )?)
}

/// Rescales value-added multipliers so the anchor profile hits both targets.
///
/// Gross value added is linear in the non-agricultural value-added multipliers, and the ag
/// loss is linear in the Grain Farming one, so one pass of each scale is exact.
pub fn calibrate(
    spec: &ProjectSpec,
    econ: &EconParams,
    tables: &mut BTreeMap<ProfileId, MultiplierTable>,
    tax: &TaxSchedule,
) -> Result<(f64, f64)> {
    let rounded = |tables: &mut BTreeMap<ProfileId, MultiplierTable>| {
        for t in tables.values_mut() {
            for m in t.rows.values_mut() {
                m.value_added = round(m.value_added, 6);
            }
        }
    };
    let life = anchor_lifecycle(spec, econ, tables, tax)?;
    let va_scale = GROSS_ANCHOR / life.gross_va_per_mw_yr;
    for t in tables.values_mut() {
        for (name, m) in t.rows.iter_mut() {
            if name != commodity::AGRICULTURE {
                m.value_added *= va_scale;
            }
        }
    }
    rounded(tables);
    let life = anchor_lifecycle(spec, econ, tables, tax)?;
    let ag_va_scale = AG_REDUCTION_TARGET / life.ag_reduction();
    for t in tables.values_mut() {
        if let Some(m) = t.rows.get_mut(commodity::AGRICULTURE) {
            m.value_added *= ag_va_scale;
        }
    }
    rounded(tables);
    for t in tables.values() {
        t.validate()?;
    }
    Ok((va_scale, ag_va_scale))
}

fn expenditure_rows() -> Vec<ExpenditureRow> {
    [
        ExpenditureProfile::installation_default(),
        ExpenditureProfile::om_default(),
        ExpenditureProfile::decommissioning_default(),
    ]
    .iter()
    .flat_map(|p| {
        p.categories.iter().map(move |c| ExpenditureRow {
            phase: p.phase,
            category: c.name.clone(),
            // Drops float noise such as 0.027999999999999997 from the shipped file.
            share: (c.share * 1e12).round() / 1e12,
            local_capture: c.local_capture,
            commodity: c.commodity.clone(),
        })
    })
    .collect()
}

fn tax_rows() -> Vec<TaxRow> {
    STATE_TAX_TABLE
        .iter()
        .map(|&(state, y1, npv)| TaxRow {
            state: state.into(),
            year1_per_mw: y1,
            npv_per_mw: npv,
            kind: if state == ANCHOR_STATE { TaxRowKind::Flat } else { TaxRowKind::Declining },
        })
        .collect()
}

struct CountyPlan {
    row: CountyRow,
    solar_cf: f64,
    wind_cf: f64,
}

fn county_plans(rng: &mut ChaCha8Rng) -> Vec<CountyPlan> {
    let sizes = [SizeClass::Large, SizeClass::Medium, SizeClass::Small, SizeClass::Medium];
    let yields = [YieldClass::Average, YieldClass::Above, YieldClass::Below, YieldClass::Average];
    let kvs = [69, 161, 230, 345];
    let mut out = Vec::new();
    for (s, state) in REGIONS.iter().enumerate() {
        for k in 0..COUNTIES_PER_STATE {
            let code = &state[..2].to_ascii_uppercase();
            let n_opts = 1 + rng.gen_range(0..3);
            let lines: Vec<LineOption> = (0..n_opts)
                .map(|_| LineOption {
                    kv: Kv::from_kv(kvs[rng.gen_range(0..kvs.len())]).expect("listed voltage"),
                    distance_miles: round(rng.gen_range(1.0..25.0), 1),
                })
                .collect();
            let forest = round(rng.gen_range(0.02..0.25), 3);
            let wetland = round(rng.gen_range(0.0..0.06), 3);
            let light = round(1.0 - forest - wetland, 3);
            out.push(CountyPlan {
                row: CountyRow {
                    county: format!("{code}{:02}", k + 1),
                    state: state.to_string(),
                    region: state.to_string(),
                    size: sizes[(k + s) % sizes.len()],
                    yield_class: yields[k],
                    line_options: format_line_options(&lines),
                    light_vegetation: light,
                    forest,
                    wetland,
                    mountain: 0.0,
                },
                solar_cf: rng.gen_range(0.150..0.185),
                wind_cf: rng.gen_range(0.24..0.36),
            });
        }
    }
    // The anchor county: Ohio, large economy, average yield.
    out[0].row.size = SizeClass::Large;
    out[0].row.yield_class = YieldClass::Average;
    out
}

fn land(rng: &mut ChaCha8Rng, counties: &[CountyPlan]) -> (Vec<ParcelRow>, Vec<ZoningRow>) {
    let mut parcels = Vec::new();
    let mut zoning = Vec::new();
    let mut id = 1u64;
    for c in counties {
        let name = &c.row.county;
        let towns: Vec<String> = (1..=6).map(|t| format!("{name}-T{t}")).collect();
        for town in &towns {
            let u: f64 = rng.gen();
            let status = if u < 0.45 {
                ZoningStatus::Allow
            } else if u < 0.65 {
                ZoningStatus::Unzoned
            } else if u < 0.85 {
                ZoningStatus::Silent
            } else {
                ZoningStatus::Ban
            };
            // Some unzoned townships have no ordinance row at all.
            if status == ZoningStatus::Unzoned && rng.gen::<f64>() < 0.5 {
                continue;
            }
            let allow = status == ZoningStatus::Allow;
            zoning.push(ZoningRow {
                jurisdiction: town.clone(),
                status,
                road_ft: if allow { round(rng.gen_range(50.0..300.0), 0) } else { 0.0 },
                ppl_ft: if allow { round(rng.gen_range(0.0..100.0), 0) } else { 0.0 },
                nppl_ft: if allow { round(rng.gen_range(50.0..300.0), 0) } else { 0.0 },
                min_lot_ac: (allow && rng.gen::<f64>() < 0.6).then(|| round(rng.gen_range(5.0..40.0), 0)),
                max_lot_ac: None,
                coverage_frac: (allow && rng.gen::<f64>() < 0.5).then(|| round(rng.gen_range(0.5..0.8), 2)),
            });
        }
        for _ in 0..PARCELS_PER_COUNTY {
            let length = round(rng.gen_range(600.0..2000.0), 1);
            let width = round(rng.gen_range(400.0..1500.0), 1);
            let area = round(length * width * rng.gen_range(0.98..1.02), 0);
            let slope = round(-3.0 * (1.0 - rng.gen::<f64>()).ln(), 2);
            let u: f64 = rng.gen();
            let land_class = if u < 0.80 {
                LandClass::Agricultural
            } else if u < 0.95 {
                LandClass::NonAgricultural
            } else {
                LandClass::Restricted
            };
            let v: f64 = rng.gen();
            let urban = if v < 0.90 { 0 } else if v < 0.95 { 1 } else { 2 };
            parcels.push(ParcelRow {
                id,
                subdivision: towns[rng.gen_range(0..towns.len())].clone(),
                county: name.clone(),
                length_m: length,
                width_m: width,
                area_m2: area,
                slope_deg: slope,
                land_class,
                urban,
            });
            id += 1;
        }
    }
    (parcels, zoning)
}

/// Day of year and hour of day for an hour index.
fn day_hour(h: usize) -> (usize, usize) {
    (h / 24, h % 24)
}

fn demand_series(rng: &mut ChaCha8Rng, mean_mw: f64) -> Vec<f64> {
    let noise = Normal::new(0.0, 0.02).expect("valid sd");
    (0..HOURS_PER_YEAR)
        .map(|h| {
            let (d, hr) = day_hour(h);
            let season = 0.12 * (2.0 * PI * (d as f64 - 200.0) / 365.0).cos() + 0.05 * (4.0 * PI * (d as f64 - 20.0) / 365.0).cos();
            let daily = -0.12 * (2.0 * PI * (hr as f64 - 4.0) / 24.0).cos() + 0.04 * (4.0 * PI * (hr as f64 - 9.0) / 24.0).cos();
            round(mean_mw * (1.0 + season + daily + noise.sample(rng)), 2)
        })
        .collect()
}

/// Clear-sky sinusoid times a daily cloud factor, scaled to the target annual mean.
fn solar_series(rng: &mut ChaCha8Rng, target: f64) -> Vec<f64> {
    let clouds: Vec<f64> = (0..365).map(|_| 0.25 + 0.75 * rng.gen::<f64>().powf(0.6)).collect();
    let raw: Vec<f64> = (0..HOURS_PER_YEAR)
        .map(|h| {
            let (d, hr) = day_hour(h);
            let len = 12.0 + 3.0 * (2.0 * PI * (d as f64 - 80.0) / 365.0).sin();
            let t = (hr as f64 + 0.5 - (12.0 - len / 2.0)) / len;
            let elev = 0.75 + 0.25 * (2.0 * PI * (d as f64 - 80.0) / 365.0).sin();
            if (0.0..1.0).contains(&t) {
                (PI * t).sin() * elev * clouds[d]
            } else {
                0.0
            }
        })
        .collect();
    let k = target * HOURS_PER_YEAR as f64 / raw.iter().sum::<f64>();
    raw.iter().map(|v| round((v * k).min(1.0), 4)).collect()
}

/// Smoothed noise, stronger in winter and at night, mapped into [0, 1].
fn wind_series(rng: &mut ChaCha8Rng, target: f64) -> Vec<f64> {
    let noise = Normal::new(0.0, 0.25).expect("valid sd");
    let mut x = 0.0;
    let raw: Vec<f64> = (0..HOURS_PER_YEAR)
        .map(|h| {
            let (d, hr) = day_hour(h);
            x = 0.96 * x + noise.sample(rng);
            let season = 0.35 * (2.0 * PI * (d as f64 - 15.0) / 365.0).cos();
            let daily = 0.2 * (2.0 * PI * (hr as f64 - 2.0) / 24.0).cos();
            1.0 / (1.0 + (-(x + season + daily)).exp())
        })
        .collect();
    let k = target * HOURS_PER_YEAR as f64 / raw.iter().sum::<f64>();
    raw.iter().map(|v| round((v * k).min(1.0), 4)).collect()
}

fn system_file(co2_base: f64) -> SystemFile {
    let unit = |region: &str, name: &str, mw: f64, hr: f64, fuel: f64, vom: f64, er: f64, retire: Option<u32>| ExistingUnit {
        region: region.into(),
        name: name.into(),
        capacity_mw: mw,
        heat_rate: hr,
        fuel_cost: fuel,
        vom,
        emission_rate: er,
        retire_year: retire,
    };
    let mut existing = Vec::new();
    for (r, scale) in REGIONS.iter().zip(REGION_SCALE) {
        let tag = &r[..2].to_ascii_lowercase();
        existing.push(unit(r, &format!("{tag}_coal"), round(220.0 * scale, 1), 10.2, 2.2, 4.5, 0.95, (*r == "Indiana").then_some(2035)));
        existing.push(unit(r, &format!("{tag}_ngcc"), round(160.0 * scale, 1), 7.0, 3.4, 2.5, 0.37, None));
        existing.push(unit(r, &format!("{tag}_ngct"), round(120.0 * scale, 1), 10.5, 3.4, 5.0, 0.56, None));
    }
    existing.push(unit("Ohio", "oh_nuclear", 90.0, 10.4, 0.7, 2.0, 0.0, None));
    let tech = |name: &str, capex: f64, fom: f64, hr: f64, fuel: f64, vom: f64, er: f64, life: u32| NewTech {
        name: name.into(),
        capex,
        fom,
        heat_rate: hr,
        fuel_cost: fuel,
        vom,
        emission_rate: er,
        life_years: life,
    };
    let line = |a: &str, b: &str, mw: f64, mi: f64| Line {
        from: a.into(),
        to: b.into(),
        capacity_mw: mw,
        expansion_cost_per_mw_mile: 1_500.0,
        length_mi: mi,
    };
    SystemFile {
        regions: REGIONS.iter().map(|s| s.to_string()).collect(),
        demand_growth: DEMAND_GROWTH,
        reserve_margin: 0.15,
        invest_rate: 0.054,
        transmission_life: 40,
        co2: Co2Path {
            base: co2_base,
            base_year: BASE_YEAR,
            final_fraction: 0.20,
            final_year: 2040,
        },
        storage: Storage::default(),
        solar: TechCost {
            capex: 1.30e6,
            fom: 20_000.0,
        },
        wind: TechCost {
            capex: 1.50e6,
            fom: 45_000.0,
        },
        finance: FinanceParams::default(),
        lines: vec![
            line("Ohio", "Indiana", 120.0, 180.0),
            line("Ohio", "Michigan", 120.0, 160.0),
            line("Indiana", "Michigan", 80.0, 200.0),
        ],
        existing,
        new_techs: vec![
            tech("ngcc", 1.10e6, 14_000.0, 6.4, 3.4, 2.0, 0.34, 30),
            tech("ngcc_ccs", 2.60e6, 32_000.0, 7.5, 3.4, 6.0, 0.04, 30),
            tech("coal_ccs", 5.50e6, 70_000.0, 12.0, 2.2, 11.0, 0.10, 30),
            tech("nuclear", 7.00e6, 120_000.0, 10.4, 0.7, 2.5, 0.0, 60),
        ],
    }
}

/// Mean regional load as a multiple of 100 MW, also used to size each fleet.
const REGION_SCALE: [f64; 3] = [3.0, 2.0, 2.5];

/// Base-year emissions from a merit-order dispatch of the existing fleet against
/// first-period demand deflated back to the base year.
fn merit_order_emissions(sys: &SystemFile, demand: &[Vec<f64>]) -> f64 {
    let mut units: Vec<&ExistingUnit> = sys.existing.iter().collect();
    units.sort_by(|a, b| a.marginal_cost().total_cmp(&b.marginal_cost()).then(a.name.cmp(&b.name)));
    let deflate = (1.0 + sys.demand_growth).powi(-((FIRST_PERIOD - BASE_YEAR) as i32));
    let mut total = 0.0;
    for h in 0..HOURS_PER_YEAR {
        let mut load: f64 = demand.iter().map(|d| d[h]).sum::<f64>() * deflate;
        for u in &units {
            let g = load.min(u.capacity_in(BASE_YEAR));
            total += g * u.emission_rate;
            load -= g;
            if load <= 0.0 {
                break;
            }
        }
    }
    total
}

fn write_csv<T: Serialize>(dir: &Path, file: &str, rows: &[T]) -> Result<()> {
    let path = dir.join(file);
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Parse {
        path: path.clone(),
        msg: e.to_string(),
    })?;
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Parse {
            path: path.clone(),
            msg: e.to_string(),
        })?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))
}

fn write_hourly(dir: &Path, file: &str, names: &[String], cols: &[Vec<f64>]) -> Result<()> {
    let mut out = String::with_capacity(HOURS_PER_YEAR * (names.len() * 8 + 6));
    out.push_str("hour,");
    out.push_str(&names.join(","));
    out.push('\n');
    for h in 0..HOURS_PER_YEAR {
        out.push_str(&h.to_string());
        for c in cols {
            out.push(',');
            out.push_str(&c[h].to_string());
        }
        out.push('\n');
    }
    let path = dir.join(file);
    std::fs::write(&path, out).map_err(|e| CliError::io(&path, e))
}

fn write_toml<T: Serialize>(dir: &Path, file: &str, header: &str, value: &T) -> Result<()> {
    let path = dir.join(file);
    let body = toml::to_string(value).map_err(|e| CliError::Parse {
        path: path.clone(),
        msg: e.to_string(),
    })?;
    std::fs::write(&path, format!("{header}\n{body}")).map_err(|e| CliError::io(&path, e))
}

/// Writes the full synthetic dataset into `dir` and returns the calibration record.
pub fn generate_demo(dir: &Path, seed: u64) -> Result<Calibration> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let spec = ProjectSpec::default();
    let econ_file = EconomicsFile {
        project: spec.clone(),
        lease_rate: 580.0,
        om_escalation: 0.05,
        tax_discount_rate: DEFAULT_TAX_DISCOUNT_RATE,
        ag: AgBaseline::default(),
        unit_costs: UnitCosts {
            installation_per_w: solarsite_core::econ::INSTALLATION_COST_PER_W,
            om_per_kw_yr: solarsite_core::econ::OM_COST_PER_KW_YR,
            decommissioning_per_mw: solarsite_core::econ::DECOMMISSIONING_COST_PER_MW,
        },
    };
    let econ = EconParams {
        lease_rate: econ_file.lease_rate,
        om_escalation: econ_file.om_escalation,
        ..EconParams::default()
    };
    let ohio_tax = TaxSchedule::flat(ANCHOR_STATE, STATE_TAX_TABLE[0].1);
    let mut tables = raw_multipliers(&mut rng);
    let (va_scale, ag_va_scale) = calibrate(&spec, &econ, &mut tables, &ohio_tax)?;
    let anchor = anchor_lifecycle(&spec, &econ, &tables, &ohio_tax)?;

    let plans = county_plans(&mut rng);
    let (parcels, zoning) = land(&mut rng, &plans);
    let regions: Vec<String> = REGIONS.iter().map(|s| s.to_string()).collect();
    let demand: Vec<Vec<f64>> = REGION_SCALE.iter().map(|s| demand_series(&mut rng, 100.0 * s)).collect();
    let solar: Vec<Vec<f64>> = plans.iter().map(|p| solar_series(&mut rng, p.solar_cf)).collect();
    let wind: Vec<Vec<f64>> = plans.iter().map(|p| wind_series(&mut rng, p.wind_cf)).collect();
    let mut sys = system_file(0.0);
    sys.co2.base = round(merit_order_emissions(&sys, &demand), 0);

    let mult_rows: Vec<MultiplierRow> = tables
        .values()
        .flat_map(|t| {
            t.rows.iter().map(move |(c, m)| MultiplierRow {
                state: t.profile.state.clone(),
                size: t.profile.size,
                commodity: c.clone(),
                output: round(m.output, 6),
                earnings: round(m.earnings, 6),
                jobs: round(m.jobs, 4),
                value_added: m.value_added,
            })
        })
        .collect();

    write_toml(dir, data::ECONOMICS, "# Reference project, transfers, crop budget and phase unit costs.", &econ_file)?;
    write_csv(dir, data::EXPENDITURE, &expenditure_rows())?;
    write_csv(dir, data::MULTIPLIERS, &mult_rows)?;
    write_csv(dir, data::TAX, &tax_rows())?;
    write_csv(dir, data::COUNTIES, &plans.iter().map(|p| p.row.clone()).collect::<Vec<_>>())?;
    write_csv(dir, data::PARCELS, &parcels)?;
    write_csv(dir, data::ZONING, &zoning)?;
    write_toml(dir, data::SYSTEM, "# Synthetic three-region system; co2.base comes from a merit-order dispatch.", &sys)?;
    write_hourly(dir, data::DEMAND, &regions, &demand)?;
    let names: Vec<String> = plans.iter().map(|p| p.row.county.clone()).collect();
    write_hourly(dir, data::CF_SOLAR, &names, &solar)?;
    write_hourly(dir, data::CF_WIND, &names, &wind)?;

    Ok(Calibration {
        seed,
        va_scale,
        ag_va_scale,
        gross_va_per_mw_yr: anchor.gross_va_per_mw_yr,
        net_va_per_mw_yr: anchor.net_va_per_mw_yr,
        ag_reduction: anchor.ag_reduction(),
        co2_base: sys.co2.base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_hit_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = solar_series(&mut rng, 0.17);
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        assert!((mean - 0.17).abs() < 1e-3, "{mean}");
        assert!(s.iter().all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(s[0], 0.0);
        let w = wind_series(&mut rng, 0.3);
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        assert!((mean - 0.3).abs() < 0.01, "{mean}");
    }

    #[test]
    fn calibration_hits_anchors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut tables = raw_multipliers(&mut rng);
        let spec = ProjectSpec::default();
        let econ = EconParams::default();
        let tax = TaxSchedule::flat(ANCHOR_STATE, 8_750.0);
        calibrate(&spec, &econ, &mut tables, &tax).unwrap();
        let life = anchor_lifecycle(&spec, &econ, &tables, &tax).unwrap();
        assert!((life.gross_va_per_mw_yr / GROSS_ANCHOR - 1.0).abs() < 1e-4);
        assert!((life.ag_reduction() - AG_REDUCTION_TARGET).abs() < 1e-4);
    }
}
