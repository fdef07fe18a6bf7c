//! Dataset directory layout, loading and validation.
//!
//! | file              | contents                                                        |
//! |-------------------|-----------------------------------------------------------------|
//! | `economics.toml`  | project spec, lease, O&M escalation, crop budget, unit costs    |
//! | `expenditure.csv` | phase,category,share,local_capture,commodity                    |
//! | `multipliers.csv` | state,size,commodity,output,earnings,jobs,value_added           |
//! | `tax.csv`         | state,year1_per_mw,npv_per_mw,kind                              |
//! | `counties.csv`    | county,state,region,size,yield_class,line_options,terrain mix   |
//! | `parcels.csv`     | id,subdivision,county,length_m,width_m,area_m2,slope_deg,...    |
//! | `zoning.csv`      | jurisdiction,status,setbacks (ft),lot limits (ac),coverage      |
//! | `system.toml`     | regions, lines, fleet, new techs, storage, CO2 path, tech costs |
//! | `demand.csv`      | hour then one MW column per region                              |
//! | `cf_solar.csv`    | hour then one capacity-factor column per county                 |
//! | `cf_wind.csv`     | same, for wind                                                  |
use crate::error::{CliError, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use solarsite_core::ce::{CountyResource, ExistingUnit, Line, NewTech, Storage, SystemData, HOURS_PER_YEAR};
use solarsite_core::econ::{
    commodity, AgBaseline, Category, EconParams, ExpenditureProfile, Multipliers, MultiplierTable, Phase, ProfileId,
    ProjectSpec, SizeClass, TaxSchedule, YieldClass,
};
use solarsite_core::interconnect::{InterconnectParams, Kv, LineOption, TerrainMix};
use solarsite_core::land::{BoundaryShares, LandClass, Parcel, UrbanFlag, ZoningRule, ZoningStatus};
use solarsite_core::supply::{FinanceParams, TechCost};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

pub const ECONOMICS: &str = "economics.toml";
pub const EXPENDITURE: &str = "expenditure.csv";
pub const MULTIPLIERS: &str = "multipliers.csv";
pub const TAX: &str = "tax.csv";
pub const COUNTIES: &str = "counties.csv";
pub const PARCELS: &str = "parcels.csv";
pub const ZONING: &str = "zoning.csv";
pub const SYSTEM: &str = "system.toml";
pub const DEMAND: &str = "demand.csv";
pub const CF_SOLAR: &str = "cf_solar.csv";
pub const CF_WIND: &str = "cf_wind.csv";

/// One problem found in a data directory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub file: String,
    pub line: Option<u64>,
    pub msg: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.file, l, self.msg),
            None => write!(f, "{}: {}", self.file, self.msg),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitCosts {
    pub installation_per_w: f64,
    pub om_per_kw_yr: f64,
    pub decommissioning_per_mw: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomicsFile {
    #[serde(default)]
    pub project: ProjectSpec,
    pub lease_rate: f64,
    pub om_escalation: f64,
    pub tax_discount_rate: f64,
    pub ag: AgBaseline,
    pub unit_costs: UnitCosts,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Co2Path {
    pub base: f64,
    pub base_year: u32,
    pub final_fraction: f64,
    pub final_year: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub regions: Vec<String>,
    pub demand_growth: f64,
    pub reserve_margin: f64,
    pub invest_rate: f64,
    pub transmission_life: u32,
    pub co2: Co2Path,
    pub storage: Storage,
    pub solar: TechCost,
    pub wind: TechCost,
    #[serde(default)]
    pub finance: FinanceParams,
    pub lines: Vec<Line>,
    pub existing: Vec<ExistingUnit>,
    pub new_techs: Vec<NewTech>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpenditureRow {
    pub phase: Phase,
    pub category: String,
    pub share: f64,
    pub local_capture: f64,
    pub commodity: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierRow {
    pub state: String,
    pub size: SizeClass,
    pub commodity: String,
    pub output: f64,
    pub earnings: f64,
    pub jobs: f64,
    pub value_added: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaxRowKind {
    Flat,
    Declining,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaxRow {
    pub state: String,
    pub year1_per_mw: f64,
    pub npv_per_mw: f64,
    pub kind: TaxRowKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountyRow {
    pub county: String,
    pub state: String,
    pub region: String,
    pub size: SizeClass,
    pub yield_class: YieldClass,
    /// Candidate transmission lines, `kv:miles` separated by `;`.
    pub line_options: String,
    pub light_vegetation: f64,
    pub forest: f64,
    pub wetland: f64,
    pub mountain: f64,
}

impl CountyRow {
    pub fn terrain(&self) -> TerrainMix {
        [self.light_vegetation, self.forest, self.wetland, self.mountain]
    }

    pub fn profile(&self) -> ProfileId {
        ProfileId {
            state: self.state.clone(),
            size: self.size,
        }
    }
}

pub fn parse_line_options(s: &str) -> std::result::Result<Vec<LineOption>, String> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|tok| {
            let (kv, mi) = tok.split_once(':').ok_or_else(|| format!("line option {tok:?} is not kv:miles"))?;
            let kv: u32 = kv.trim().parse().map_err(|_| format!("bad voltage in {tok:?}"))?;
            let kv = Kv::from_kv(kv).map_err(|e| e.to_string())?;
            let miles: f64 = mi.trim().parse().map_err(|_| format!("bad distance in {tok:?}"))?;
            if !(miles > 0.0 && miles.is_finite()) {
                return Err(format!("distance in {tok:?} must be positive"));
            }
            Ok(LineOption {
                kv,
                distance_miles: miles,
            })
        })
        .collect()
}

pub fn format_line_options(opts: &[LineOption]) -> String {
    opts.iter()
        .map(|o| format!("{}:{}", o.kv.kv(), o.distance_miles))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParcelRow {
    pub id: u64,
    pub subdivision: String,
    pub county: String,
    pub length_m: f64,
    pub width_m: f64,
    pub area_m2: f64,
    pub slope_deg: f64,
    pub land_class: LandClass,
    pub urban: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZoningRow {
    pub jurisdiction: String,
    pub status: ZoningStatus,
    pub road_ft: f64,
    pub ppl_ft: f64,
    pub nppl_ft: f64,
    pub min_lot_ac: Option<f64>,
    pub max_lot_ac: Option<f64>,
    pub coverage_frac: Option<f64>,
}

impl From<&ZoningRow> for ZoningRule {
    fn from(z: &ZoningRow) -> Self {
        ZoningRule {
            jurisdiction: z.jurisdiction.clone(),
            status: z.status,
            road_ft: z.road_ft,
            ppl_ft: z.ppl_ft,
            nppl_ft: z.nppl_ft,
            min_lot_ac: z.min_lot_ac,
            max_lot_ac: z.max_lot_ac,
            coverage_frac: z.coverage_frac,
        }
    }
}

/// A county's static profile, joined from `counties.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct County {
    pub name: String,
    pub state: String,
    pub region: String,
    pub size: SizeClass,
    pub yield_class: YieldClass,
    pub lines: Vec<LineOption>,
    pub terrain: TerrainMix,
}

/// Everything a scenario run needs, checked for consistency.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub dir: PathBuf,
    pub spec: ProjectSpec,
    pub econ: EconParams,
    pub multipliers: BTreeMap<ProfileId, MultiplierTable>,
    pub taxes: BTreeMap<String, TaxSchedule>,
    pub counties: Vec<County>,
    pub parcels: Vec<Parcel>,
    pub zoning: Vec<ZoningRule>,
    pub system: SystemData,
    pub solar_cost: TechCost,
    pub wind_cost: TechCost,
    pub finance: FinanceParams,
    pub interconnect: InterconnectParams,
    pub shares: BoundaryShares,
}

impl Dataset {
    pub fn county(&self, name: &str) -> Option<&County> {
        self.counties.iter().find(|c| c.name == name)
    }
}

/// Accumulates findings while reading a directory.
struct Reader<'a> {
    dir: &'a Path,
    findings: Vec<Finding>,
}

impl Reader<'_> {
    fn push(&mut self, file: &str, line: Option<u64>, msg: impl Into<String>) {
        self.findings.push(Finding {
            file: file.into(),
            line,
            msg: msg.into(),
        });
    }

    fn text(&mut self, file: &str) -> Option<String> {
        match std::fs::read_to_string(self.dir.join(file)) {
            Ok(t) => Some(t),
            Err(e) => {
                self.push(file, None, format!("cannot read: {e}"));
                None
            }
        }
    }

    fn toml<T: DeserializeOwned>(&mut self, file: &str) -> Option<T> {
        let text = self.text(file)?;
        match toml::from_str(&text) {
            Ok(v) => Some(v),
            Err(e) => {
                let line = e.span().map(|s| text[..s.start].lines().count().max(1) as u64);
                self.push(file, line, e.message().to_string());
                None
            }
        }
    }

    /// Typed rows with their 1-based line numbers; malformed rows become findings.
    fn csv<T: DeserializeOwned>(&mut self, file: &str) -> Option<Vec<(u64, T)>> {
        let text = self.text(file)?;
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = match rdr.headers() {
            Ok(h) => h.clone(),
            Err(e) => {
                self.push(file, Some(1), format!("bad header: {e}"));
                return None;
            }
        };
        let mut out = Vec::new();
        for rec in rdr.records() {
            match rec {
                Ok(r) => {
                    let line = r.position().map_or(0, |p| p.line());
                    match r.deserialize::<T>(Some(&headers)) {
                        Ok(v) => out.push((line, v)),
                        Err(e) => self.push(file, Some(line), e.to_string()),
                    }
                }
                Err(e) => {
                    let line = e.position().map(|p| p.line());
                    self.push(file, line, e.to_string());
                }
            }
        }
        Some(out)
    }

    /// An hourly matrix whose columns after `hour` must be exactly `names`, in order.
    fn hourly(&mut self, file: &str, names: &[String], range: (f64, f64)) -> Option<Vec<Vec<f64>>> {
        let text = self.text(file)?;
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers: Vec<String> = match rdr.headers() {
            Ok(h) => h.iter().map(str::to_string).collect(),
            Err(e) => {
                self.push(file, Some(1), format!("bad header: {e}"));
                return None;
            }
        };
        if headers.first().map(String::as_str) != Some("hour") || headers[1..] != *names {
            self.push(file, Some(1), format!("columns must be hour,{}; found {}", names.join(","), headers.join(",")));
            return None;
        }
        let mut cols = vec![Vec::with_capacity(HOURS_PER_YEAR); names.len()];
        let before = self.findings.len();
        for (k, rec) in rdr.records().enumerate() {
            let rec = match rec {
                Ok(r) => r,
                Err(e) => {
                    self.push(file, e.position().map(|p| p.line()), e.to_string());
                    continue;
                }
            };
            let line = rec.position().map_or(0, |p| p.line());
            if rec.get(0).and_then(|h| h.parse::<usize>().ok()) != Some(k) {
                self.push(file, Some(line), format!("expected hour {k}"));
            }
            for (j, col) in cols.iter_mut().enumerate() {
                match rec.get(j + 1).and_then(|v| v.parse::<f64>().ok()) {
                    Some(v) if v >= range.0 && v <= range.1 => col.push(v),
                    Some(v) => {
                        self.push(file, Some(line), format!("{} = {v} outside [{}, {}]", names[j], range.0, range.1));
                        col.push(v);
                    }
                    None => {
                        self.push(file, Some(line), format!("{}: missing or non-numeric value", names[j]));
                        col.push(0.0);
                    }
                }
            }
            if self.findings.len() - before > 20 {
                self.push(file, None, "too many bad values; stopped reading");
                return None;
            }
        }
        if cols.first().is_some_and(|c| c.len() != HOURS_PER_YEAR) {
            self.push(file, None, format!("{} hourly rows, expected {HOURS_PER_YEAR}", cols[0].len()));
        }
        Some(cols)
    }
}

/// Multiplier rows every profile must carry: the expenditure commodities plus the
/// lease, tax and agriculture rows.
fn required_commodities(expenditure: &[(u64, ExpenditureRow)]) -> BTreeSet<String> {
    let mut req: BTreeSet<String> = expenditure.iter().map(|(_, r)| r.commodity.clone()).collect();
    for c in [commodity::HOUSEHOLD, commodity::GOVERNMENT, commodity::AGRICULTURE] {
        req.insert(c.to_string());
    }
    req
}

fn duplicates<'a>(r: &mut Reader<'_>, file: &str, keys: impl Iterator<Item = (u64, String)>) {
    let mut seen: BTreeMap<String, u64> = BTreeMap::new();
    for (line, k) in keys {
        if let Some(first) = seen.insert(k.clone(), line) {
            r.push(file, Some(line), format!("duplicate {k:?} (first on line {first})"));
        }
    }
}

fn finite_nonneg(vals: &[(&str, f64)]) -> Option<String> {
    vals.iter()
        .find(|(_, v)| !(v.is_finite() && *v >= 0.0))
        .map(|(n, v)| format!("{n} = {v} must be finite and non-negative"))
}

/// Reads and cross-checks the whole directory, collecting every finding.
pub fn validate_data(dir: &Path) -> Vec<Finding> {
    match read_dataset(dir) {
        Ok(_) => Vec::new(),
        Err(f) => f,
    }
}

pub fn load_dataset(dir: &Path) -> Result<Dataset> {
    read_dataset(dir).map_err(CliError::Validation)
}

fn read_dataset(dir: &Path) -> std::result::Result<Dataset, Vec<Finding>> {
    let mut r = Reader {
        dir,
        findings: Vec::new(),
    };

    // Economics.
    let econ_file: Option<EconomicsFile> = r.toml(ECONOMICS);
    if let Some(e) = &econ_file {
        if let Err(err) = e.project.validate() {
            r.push(ECONOMICS, None, err.to_string());
        }
        let u = &e.unit_costs;
        if let Some(msg) = finite_nonneg(&[
            ("lease_rate", e.lease_rate),
            ("tax_discount_rate", e.tax_discount_rate),
            ("installation_per_w", u.installation_per_w),
            ("om_per_kw_yr", u.om_per_kw_yr),
            ("decommissioning_per_mw", u.decommissioning_per_mw),
            ("ag.class_adjust", e.ag.class_adjust),
        ]) {
            r.push(ECONOMICS, None, msg);
        }
        if e.ag.crops.is_empty() {
            r.push(ECONOMICS, None, "crop budget is empty");
        }
        if e.ag.crops.iter().any(|c| !(c.price_per_bu >= 0.0 && c.yield_bu_per_acre >= 0.0)) {
            r.push(ECONOMICS, None, "crop prices and yields must be non-negative");
        }
    }

    let expenditure: Vec<(u64, ExpenditureRow)> = r.csv(EXPENDITURE).unwrap_or_default();
    for (line, row) in &expenditure {
        if !(0.0..=1.0).contains(&row.local_capture) || !(row.share >= 0.0 && row.share <= 1.0) {
            r.push(EXPENDITURE, Some(*line), format!("{}: share {} / capture {} outside [0, 1]", row.category, row.share, row.local_capture));
        }
    }
    duplicates(&mut r, EXPENDITURE, expenditure.iter().map(|(l, e)| (*l, format!("{}/{}", e.phase, e.category))));
    let mut profiles: HashMap<Phase, Vec<&ExpenditureRow>> = HashMap::new();
    for (_, row) in &expenditure {
        profiles.entry(row.phase).or_default().push(row);
    }
    for phase in [Phase::Installation, Phase::Operations, Phase::Decommissioning] {
        match profiles.get(&phase) {
            None => r.push(EXPENDITURE, None, format!("no {phase} categories")),
            Some(rows) => {
                let sum: f64 = rows.iter().map(|c| c.share).sum();
                if (sum - 1.0).abs() > 1e-9 {
                    r.push(EXPENDITURE, None, format!("{phase} shares sum to {sum} (off by {:+e})", sum - 1.0));
                }
            }
        }
    }

    // Taxes.
    let tax_rows: Vec<(u64, TaxRow)> = r.csv(TAX).unwrap_or_default();
    duplicates(&mut r, TAX, tax_rows.iter().map(|(l, t)| (*l, t.state.clone())));
    let mut taxes = BTreeMap::new();
    let life = econ_file.as_ref().map_or(30, |e| e.project.life_years);
    let rate = econ_file.as_ref().map_or(0.075, |e| e.tax_discount_rate);
    for (line, t) in &tax_rows {
        if !(t.year1_per_mw > 0.0 && t.npv_per_mw > 0.0) {
            r.push(TAX, Some(*line), format!("{}: payments must be positive", t.state));
            continue;
        }
        let sched = match t.kind {
            TaxRowKind::Flat => {
                let s = TaxSchedule {
                    discount_rate: rate,
                    ..TaxSchedule::flat(&t.state, t.year1_per_mw)
                };
                let npv = s.npv(life);
                if (npv / t.npv_per_mw - 1.0).abs() > 0.01 {
                    r.push(TAX, Some(*line), format!("{}: flat payment has NPV {npv:.0}, table says {}", t.state, t.npv_per_mw));
                }
                s
            }
            TaxRowKind::Declining => match TaxSchedule::fit_declining(&t.state, t.year1_per_mw, t.npv_per_mw, rate, life) {
                Ok(s) => s,
                Err(e) => {
                    r.push(TAX, Some(*line), e.to_string());
                    continue;
                }
            },
        };
        taxes.insert(t.state.clone(), sched);
    }

    // Multipliers: per-row sanity, then completeness over every taxed state and size.
    let mult_rows: Vec<(u64, MultiplierRow)> = r.csv(MULTIPLIERS).unwrap_or_default();
    duplicates(&mut r, MULTIPLIERS, mult_rows.iter().map(|(l, m)| (*l, format!("{}/{}/{}", m.state, m.size, m.commodity))));
    let mut multipliers: BTreeMap<ProfileId, MultiplierTable> = BTreeMap::new();
    for (line, m) in &mult_rows {
        let vals = [m.output, m.earnings, m.jobs, m.value_added];
        let problem = if !vals.iter().all(|v| v.is_finite()) {
            Some("non-finite value".to_string())
        } else if m.output < 1.0 {
            Some(format!("output multiplier {} below 1.0", m.output))
        } else if m.value_added > m.output || m.earnings > m.output {
            Some("value added or earnings exceed output".to_string())
        } else if vals.iter().any(|v| *v < 0.0) {
            Some("negative multiplier".to_string())
        } else {
            None
        };
        if let Some(p) = problem {
            r.push(MULTIPLIERS, Some(*line), format!("{}/{} {}: {p}", m.state, m.size, m.commodity));
        }
        let id = ProfileId {
            state: m.state.clone(),
            size: m.size,
        };
        multipliers
            .entry(id.clone())
            .or_insert_with(|| MultiplierTable {
                profile: id,
                rows: BTreeMap::new(),
            })
            .rows
            .insert(
                m.commodity.clone(),
                Multipliers {
                    output: m.output,
                    earnings: m.earnings,
                    jobs: m.jobs,
                    value_added: m.value_added,
                },
            );
    }
    let required = required_commodities(&expenditure);
    let states: BTreeSet<&String> = tax_rows.iter().map(|(_, t)| &t.state).collect();
    for state in &states {
        for size in SizeClass::ALL {
            let id = ProfileId {
                state: (*state).clone(),
                size,
            };
            match multipliers.get(&id) {
                None => r.push(MULTIPLIERS, None, format!("missing profile {id}")),
                Some(t) => {
                    for c in required.iter().filter(|c| !t.rows.contains_key(*c)) {
                        r.push(MULTIPLIERS, None, format!("profile {id} has no {c:?} row"));
                    }
                }
            }
        }
    }
    if multipliers.len() != 18 && !tax_rows.is_empty() {
        r.push(MULTIPLIERS, None, format!("{} profiles, expected 18 (6 states x 3 sizes)", multipliers.len()));
    }

    // System.
    let sys_file: Option<SystemFile> = r.toml(SYSTEM);
    let regions: Vec<String> = sys_file.as_ref().map(|s| s.regions.clone()).unwrap_or_default();

    // Counties.
    let county_rows: Vec<(u64, CountyRow)> = r.csv(COUNTIES).unwrap_or_default();
    duplicates(&mut r, COUNTIES, county_rows.iter().map(|(l, c)| (*l, c.county.clone())));
    let mut counties = Vec::new();
    for (line, c) in &county_rows {
        let l = Some(*line);
        if !multipliers.contains_key(&c.profile()) {
            r.push(COUNTIES, l, format!("{}: no multiplier profile {}", c.county, c.profile()));
        }
        if !taxes.contains_key(&c.state) && !states.contains(&c.state) {
            r.push(COUNTIES, l, format!("{}: no tax schedule for {}", c.county, c.state));
        }
        if sys_file.is_some() && !regions.contains(&c.region) {
            r.push(COUNTIES, l, format!("{}: unknown region {}", c.county, c.region));
        }
        let mix = c.terrain();
        if mix.iter().any(|f| !(*f >= 0.0)) || (mix.iter().sum::<f64>() - 1.0).abs() > 1e-6 {
            r.push(COUNTIES, l, format!("{}: terrain fractions {mix:?} do not sum to 1", c.county));
        }
        let lines = match parse_line_options(&c.line_options) {
            Ok(v) if !v.is_empty() => v,
            Ok(_) => {
                r.push(COUNTIES, l, format!("{}: no line options", c.county));
                Vec::new()
            }
            Err(e) => {
                r.push(COUNTIES, l, format!("{}: {e}", c.county));
                Vec::new()
            }
        };
        counties.push(County {
            name: c.county.clone(),
            state: c.state.clone(),
            region: c.region.clone(),
            size: c.size,
            yield_class: c.yield_class,
            lines,
            terrain: mix,
        });
    }
    let county_names: Vec<String> = counties.iter().map(|c| c.name.clone()).collect();

    // Land.
    let parcel_rows: Vec<(u64, ParcelRow)> = r.csv(PARCELS).unwrap_or_default();
    duplicates(&mut r, PARCELS, parcel_rows.iter().map(|(l, p)| (*l, p.id.to_string())));
    let mut parcels = Vec::new();
    for (line, p) in &parcel_rows {
        let urban = match UrbanFlag::from_code(p.urban) {
            Ok(u) => u,
            Err(e) => {
                r.push(PARCELS, Some(*line), e.to_string());
                continue;
            }
        };
        let parcel = Parcel {
            id: p.id,
            subdivision: p.subdivision.clone(),
            county: p.county.clone(),
            length_m: p.length_m,
            width_m: p.width_m,
            area_m2: p.area_m2,
            slope_deg: p.slope_deg,
            land_class: p.land_class,
            urban,
        };
        if let Err(e) = parcel.validate() {
            r.push(PARCELS, Some(*line), e.to_string());
        }
        if !county_names.contains(&p.county) {
            r.push(PARCELS, Some(*line), format!("parcel {} in unknown county {}", p.id, p.county));
        }
        parcels.push(parcel);
    }
    let zoning_rows: Vec<(u64, ZoningRow)> = r.csv(ZONING).unwrap_or_default();
    duplicates(&mut r, ZONING, zoning_rows.iter().map(|(l, z)| (*l, z.jurisdiction.clone())));
    let mut zoning = Vec::new();
    for (line, z) in &zoning_rows {
        let rule = ZoningRule::from(z);
        if let Err(e) = rule.validate() {
            r.push(ZONING, Some(*line), e.to_string());
        }
        zoning.push(rule);
    }

    // Hourly series.
    let demand = r.hourly(DEMAND, &regions, (0.0, f64::INFINITY));
    let cf_solar = r.hourly(CF_SOLAR, &county_names, (0.0, 1.0));
    let cf_wind = r.hourly(CF_WIND, &county_names, (0.0, 1.0));

    let (Some(e), Some(s), Some(demand), Some(cf_solar), Some(cf_wind)) = (econ_file, sys_file, demand, cf_solar, cf_wind) else {
        return Err(r.findings);
    };
    let system = SystemData {
        regions: s.regions.clone(),
        demand,
        demand_growth: s.demand_growth,
        lines: s.lines.clone(),
        existing: s.existing.clone(),
        new_techs: s.new_techs.clone(),
        storage: s.storage.clone(),
        counties: counties
            .iter()
            .zip(cf_solar.into_iter().zip(cf_wind))
            .map(|(c, (solar_cf, wind_cf))| CountyResource {
                name: c.name.clone(),
                state: c.state.clone(),
                region: c.region.clone(),
                solar_cf,
                wind_cf,
            })
            .collect(),
        co2_base: s.co2.base,
        co2_base_year: s.co2.base_year,
        co2_final_fraction: s.co2.final_fraction,
        co2_final_year: s.co2.final_year,
        reserve_margin: s.reserve_margin,
        invest_rate: s.invest_rate,
        transmission_life: s.transmission_life,
    };
    if r.findings.is_empty() {
        if let Err(err) = system.validate() {
            r.push(SYSTEM, None, err.to_string());
        }
    }
    if !(0.0..=1.0).contains(&system.co2_final_fraction) || !(system.co2_base > 0.0) {
        r.push(SYSTEM, None, "co2 base must be positive and final_fraction in [0, 1]");
    }
    if let Some(msg) = finite_nonneg(&[
        ("solar.capex", s.solar.capex),
        ("solar.fom", s.solar.fom),
        ("wind.capex", s.wind.capex),
        ("wind.fom", s.wind.fom),
        ("reserve_margin", s.reserve_margin),
    ]) {
        r.push(SYSTEM, None, msg);
    }

    let profile = |phase: Phase, unit: f64| ExpenditureProfile {
        phase,
        total_unit_cost: unit,
        categories: profiles
            .get(&phase)
            .map(|rows| {
                rows.iter()
                    .map(|c| Category {
                        name: c.category.clone(),
                        share: c.share,
                        local_capture: c.local_capture,
                        commodity: c.commodity.clone(),
                    })
                    .collect()
            })
            .unwrap_or_default(),
    };
    let econ = EconParams {
        installation: profile(Phase::Installation, e.unit_costs.installation_per_w),
        om: profile(Phase::Operations, e.unit_costs.om_per_kw_yr),
        decommissioning: profile(Phase::Decommissioning, e.unit_costs.decommissioning_per_mw),
        ag: e.ag,
        lease_rate: e.lease_rate,
        om_escalation: e.om_escalation,
    };

    if !r.findings.is_empty() {
        return Err(r.findings);
    }
    Ok(Dataset {
        dir: dir.to_path_buf(),
        spec: e.project,
        econ,
        multipliers,
        taxes,
        counties,
        parcels,
        zoning,
        system,
        solar_cost: s.solar,
        wind_cost: s.wind,
        finance: s.finance,
        interconnect: InterconnectParams::default(),
        shares: BoundaryShares::default(),
    })
}
