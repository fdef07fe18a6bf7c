//! Lifecycle net economic impact of a utility-scale solar project.
//!
//! Each phase (installation, operations, decommissioning) produces direct spending by
//! category. The locally captured part is pushed through the county's Type-II multipliers;
//! lease and property-tax payments enter as household and government spending, and the
//! grain output lost on displaced acres is subtracted through the agriculture multipliers.
use crate::error::{invalid, CoreError, Result};
use crate::finance::{bisect, npv};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Multiplier-table rows ("commodities") that expenditure categories map onto.
pub mod commodity {
    pub const CONSTRUCTION: &str = "Construction";
    pub const PROFESSIONAL: &str = "Professional Services";
    pub const ELECTRICAL_EQUIPMENT: &str = "Electrical Equipment";
    pub const FABRICATED_METAL: &str = "Fabricated Metals";
    pub const UTILITY_CONSTRUCTION: &str = "Utility Construction";
    pub const MAINTENANCE: &str = "Maintenance Services";
    pub const TRUCKING: &str = "Truck Transportation";
    pub const GOVERNMENT: &str = "Government Spending";
    pub const HOUSEHOLD: &str = "Household Spending";
    pub const AGRICULTURE: &str = "Grain Farming";

    pub const ALL: [&str; 10] = [
        CONSTRUCTION,
        PROFESSIONAL,
        ELECTRICAL_EQUIPMENT,
        FABRICATED_METAL,
        UTILITY_CONSTRUCTION,
        MAINTENANCE,
        TRUCKING,
        GOVERNMENT,
        HOUSEHOLD,
        AGRICULTURE,
    ];
}

/// O&M categories that are paid out as transfers and modelled by explicit lease and tax streams.
pub const LAND_LEASE: &str = "Land Lease";
pub const PROPERTY_TAX: &str = "Taxes";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProjectSpec {
    pub nameplate_ac: f64,
    pub inverter_load_ratio: f64,
    pub capacity_factor: f64,
    pub downtime: f64,
    pub life_years: u32,
    pub install_months: u32,
    pub decommission_months: u32,
    pub acres_per_mw_ac: f64,
    pub panel_acre_share: f64,
    pub extra_ag_acres_per_mw: f64,
}

impl Default for ProjectSpec {
    fn default() -> Self {
        Self {
            nameplate_ac: 100.0,
            inverter_load_ratio: 1.25,
            capacity_factor: 0.201,
            downtime: 0.10,
            life_years: 30,
            install_months: 18,
            decommission_months: 9,
            acres_per_mw_ac: 10.0,
            panel_acre_share: 0.60,
            extra_ag_acres_per_mw: 2.0,
        }
    }
}

impl ProjectSpec {
    pub fn new(nameplate_ac: f64) -> Result<Self> {
        let spec = Self {
            nameplate_ac,
            ..Default::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Displaced acres equal to two thirds of the project footprint.
    pub fn two_thirds_displacement(mut self) -> Self {
        self.panel_acre_share = 2.0 / 3.0;
        self.extra_ag_acres_per_mw = 0.0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        const W: &str = "project spec";
        if !(self.nameplate_ac > 0.0 && self.nameplate_ac.is_finite()) {
            return invalid(W, format!("nameplate_ac must be positive, got {}", self.nameplate_ac));
        }
        if !(1.0..=1.6).contains(&self.inverter_load_ratio) {
            return invalid(W, format!("inverter_load_ratio {} outside [1.0, 1.6]", self.inverter_load_ratio));
        }
        if !(self.capacity_factor > 0.0 && self.capacity_factor < 1.0) {
            return invalid(W, format!("capacity_factor {} outside (0, 1)", self.capacity_factor));
        }
        if !(0.0..1.0).contains(&self.downtime) {
            return invalid(W, format!("downtime {} outside [0, 1)", self.downtime));
        }
        if !matches!(self.life_years, 25 | 30) {
            return invalid(W, format!("life_years must be 25 or 30, got {}", self.life_years));
        }
        if self.install_months == 0 || self.decommission_months == 0 {
            return invalid(W, "install and decommission months must be at least 1");
        }
        if !(self.acres_per_mw_ac > 0.0) || !(0.0..=1.0).contains(&self.panel_acre_share) || self.extra_ag_acres_per_mw < 0.0 {
            return invalid(W, "acreage parameters out of range");
        }
        Ok(())
    }

    pub fn mw_dc(&self) -> f64 {
        self.nameplate_ac * self.inverter_load_ratio
    }

    pub fn project_acres(&self) -> f64 {
        self.nameplate_ac * self.acres_per_mw_ac
    }

    pub fn displaced_ag_acres(&self) -> f64 {
        self.nameplate_ac * (self.acres_per_mw_ac * self.panel_acre_share + self.extra_ag_acres_per_mw)
    }

    /// Calendar years touched by installation; each one costs a full growing season.
    pub fn install_years(&self) -> u32 {
        self.install_months.div_ceil(12)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectGeometry {
    pub mw_dc: f64,
    pub project_acres: f64,
    pub displaced_ag_acres: f64,
}

pub fn derive_project_geometry(spec: &ProjectSpec) -> ProjectGeometry {
    ProjectGeometry {
        mw_dc: spec.mw_dc(),
        project_acres: spec.project_acres(),
        displaced_ag_acres: spec.displaced_ag_acres(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Installation,
    Operations,
    Decommissioning,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Installation => "installation",
            Phase::Operations => "operations",
            Phase::Decommissioning => "decommissioning",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Category {
    pub name: String,
    pub share: f64,
    pub local_capture: f64,
    /// Multiplier-table row used for this category's local spending.
    pub commodity: String,
}

/// Per-category split of one phase's spending.
///
/// `total_unit_cost` is $/W_dc for installation, $/kW_dc-yr for O&M and $/MW_dc for
/// decommissioning.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpenditureProfile {
    pub phase: Phase,
    pub total_unit_cost: f64,
    pub categories: Vec<Category>,
}

/// Locally captured direct spending for one category.
#[derive(Clone, Debug, PartialEq)]
pub struct Direct {
    pub category: String,
    pub commodity: String,
    pub amount: f64,
}

/// Installation cost breakdown: (category, $/W_dc, percent of total, local capture percent, row).
pub const INSTALLATION_TABLE: [(&str, f64, f64, f64, &str); 13] = {
    use commodity::*;
    [
        ("EPC Margins", 0.057, 4.5, 25.0, PROFESSIONAL),
        ("Contingency", 0.035, 2.8, 0.0, CONSTRUCTION),
        ("Developer Overhead", 0.028, 2.2, 25.0, PROFESSIONAL),
        ("Transmission Line", 0.014, 1.1, 65.0, UTILITY_CONSTRUCTION),
        ("Interconnection Fee", 0.035, 2.8, 65.0, UTILITY_CONSTRUCTION),
        ("Permitting Fee", 0.014, 1.1, 80.0, GOVERNMENT),
        ("Sales Tax", 0.057, 4.5, 80.0, GOVERNMENT),
        ("EPC Overhead", 0.071, 5.6, 25.0, PROFESSIONAL),
        ("Install Labor & Equipment", 0.156, 12.4, 100.0, CONSTRUCTION),
        ("Electrical BOS", 0.099, 7.9, 15.0, ELECTRICAL_EQUIPMENT),
        ("Structural BOS", 0.170, 13.5, 25.0, FABRICATED_METAL),
        ("Inverter", 0.057, 4.5, 15.0, ELECTRICAL_EQUIPMENT),
        ("PV Modules", 0.468, 37.1, 0.0, ELECTRICAL_EQUIPMENT),
    ]
};
pub const INSTALLATION_COST_PER_W: f64 = 1.262;

/// O&M breakdown: (category, $/kW_dc-yr, published percent, local capture percent, row).
pub const OM_TABLE: [(&str, f64, f64, f64, &str); 15] = {
    use commodity::*;
    [
        ("Administrator", 2.254, 10.4, 0.0, PROFESSIONAL),
        ("Cleaner", 2.015, 9.3, 75.0, MAINTENANCE),
        ("Inverter specialist", 0.004, 0.0, 25.0, MAINTENANCE),
        ("Inspector", 2.443, 11.3, 0.0, PROFESSIONAL),
        ("Journeyman electrician", 1.016, 4.7, 50.0, MAINTENANCE),
        ("PV module/array Specialist", 2.585, 11.9, 20.0, MAINTENANCE),
        ("Network/IT", 0.001, 0.0, 0.0, PROFESSIONAL),
        ("Master electrician", 0.475, 2.2, 25.0, MAINTENANCE),
        ("Mechanic", 0.239, 1.1, 25.0, MAINTENANCE),
        ("Pest control", 0.044, 0.2, 100.0, MAINTENANCE),
        ("Structural engineer", 0.000, 0.0, 0.0, PROFESSIONAL),
        ("Mower/Trimmer", 1.623, 7.5, 100.0, MAINTENANCE),
        ("Utilities locator", 0.005, 0.0, 0.0, UTILITY_CONSTRUCTION),
        (LAND_LEASE, 4.406, 20.3, 75.0, HOUSEHOLD),
        (PROPERTY_TAX, 4.580, 21.1, 80.0, GOVERNMENT),
    ]
};
pub const OM_COST_PER_KW_YR: f64 = 21.690;

/// Decommissioning breakdown: (category, percent, local capture percent, row).
pub const DECOMMISSIONING_TABLE: [(&str, f64, f64, &str); 12] = {
    use commodity::*;
    [
        ("Remove Rack Wiring", 4.1, 100.0, CONSTRUCTION),
        ("Remove Panels", 4.1, 100.0, CONSTRUCTION),
        ("Dismantle Racks", 20.5, 100.0, CONSTRUCTION),
        ("Remove Electrical Equipment", 3.1, 15.0, CONSTRUCTION),
        ("Breakup and Remove Concrete Pads or Ballasts", 2.5, 100.0, CONSTRUCTION),
        ("Remove Racks", 13.0, 100.0, CONSTRUCTION),
        ("Remove Cable", 10.8, 100.0, CONSTRUCTION),
        ("Remove Ground Screws and Power Poles", 23.0, 100.0, CONSTRUCTION),
        ("Remove Fence", 8.2, 100.0, CONSTRUCTION),
        ("Grading", 6.6, 100.0, CONSTRUCTION),
        ("Seed Disturbed Areas", 0.4, 100.0, CONSTRUCTION),
        ("Truck to Recycling Center", 3.7, 100.0, TRUCKING),
    ]
};
pub const DECOMMISSIONING_COST_PER_MW: f64 = 41_969.0;

impl ExpenditureProfile {
    pub fn installation_default() -> Self {
        Self {
            phase: Phase::Installation,
            total_unit_cost: INSTALLATION_COST_PER_W,
            categories: INSTALLATION_TABLE
                .iter()
                .map(|&(name, _, pct, cap, row)| Category {
                    name: name.into(),
                    share: pct / 100.0,
                    local_capture: cap / 100.0,
                    commodity: row.into(),
                })
                .collect(),
        }
    }

    /// Shares are the unit costs over their total, so they close exactly.
    pub fn om_default() -> Self {
        let total: f64 = OM_TABLE.iter().map(|r| r.1).sum();
        Self {
            phase: Phase::Operations,
            total_unit_cost: OM_COST_PER_KW_YR,
            categories: OM_TABLE
                .iter()
                .map(|&(name, cost, _, cap, row)| Category {
                    name: name.into(),
                    share: cost / total,
                    local_capture: cap / 100.0,
                    commodity: row.into(),
                })
                .collect(),
        }
    }

    pub fn decommissioning_default() -> Self {
        Self {
            phase: Phase::Decommissioning,
            total_unit_cost: DECOMMISSIONING_COST_PER_MW,
            categories: DECOMMISSIONING_TABLE
                .iter()
                .map(|&(name, pct, cap, row)| Category {
                    name: name.into(),
                    share: pct / 100.0,
                    local_capture: cap / 100.0,
                    commodity: row.into(),
                })
                .collect(),
        }
    }

    pub fn share_sum(&self) -> f64 {
        self.categories.iter().map(|c| c.share).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let sum = self.share_sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(CoreError::ShareClosure {
                profile: self.phase.to_string(),
                sum,
                delta: sum - 1.0,
            });
        }
        for c in &self.categories {
            if !(0.0..=1.0).contains(&c.local_capture) || !(c.share >= 0.0) {
                return invalid(
                    "expenditure profile",
                    format!("{} category {:?}: share {} / capture {}", self.phase, c.name, c.share, c.local_capture),
                );
            }
        }
        if !(self.total_unit_cost >= 0.0 && self.total_unit_cost.is_finite()) {
            return invalid("expenditure profile", format!("{} unit cost {}", self.phase, self.total_unit_cost));
        }
        Ok(())
    }

    /// Phase spending in dollars (per year for O&M) for a plant of `mw_dc`.
    pub fn phase_total(&self, mw_dc: f64) -> f64 {
        let units = match self.phase {
            Phase::Installation => mw_dc * 1e6,
            Phase::Operations => mw_dc * 1e3,
            Phase::Decommissioning => mw_dc,
        };
        units * self.total_unit_cost
    }

    /// `total x share x capture` per category, leaving out lease and tax transfers.
    pub fn local_direct(&self, total: f64) -> Vec<Direct> {
        self.categories
            .iter()
            .filter(|c| !is_transfer(&c.name))
            .map(|c| Direct {
                category: c.name.clone(),
                commodity: c.commodity.clone(),
                amount: total * c.share * c.local_capture,
            })
            .collect()
    }

    /// Local capture of a transfer category such as [`LAND_LEASE`]; 1.0 when absent.
    pub fn capture_of(&self, name: &str) -> f64 {
        self.categories
            .iter()
            .find(|c| c.name.eq_ignore_ascii_case(name))
            .map_or(1.0, |c| c.local_capture)
    }
}

fn is_transfer(name: &str) -> bool {
    name.eq_ignore_ascii_case(LAND_LEASE) || name.eq_ignore_ascii_case(PROPERTY_TAX)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ImpactVector {
    pub output: f64,
    pub earnings: f64,
    pub jobs: f64,
    pub value_added: f64,
}

impl ImpactVector {
    pub const ZERO: Self = Self {
        output: 0.0,
        earnings: 0.0,
        jobs: 0.0,
        value_added: 0.0,
    };
}

impl Add for ImpactVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            output: self.output + o.output,
            earnings: self.earnings + o.earnings,
            jobs: self.jobs + o.jobs,
            value_added: self.value_added + o.value_added,
        }
    }
}

impl AddAssign for ImpactVector {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for ImpactVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for ImpactVector {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for ImpactVector {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self {
            output: self.output * k,
            earnings: self.earnings * k,
            jobs: self.jobs * k,
            value_added: self.value_added * k,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeClass {
    Small,
    Medium,
    Large,
}

impl SizeClass {
    pub const ALL: [SizeClass; 3] = [SizeClass::Small, SizeClass::Medium, SizeClass::Large];
}

impl fmt::Display for SizeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SizeClass::Small => "small",
            SizeClass::Medium => "medium",
            SizeClass::Large => "large",
        })
    }
}

impl std::str::FromStr for SizeClass {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "small" => Ok(SizeClass::Small),
            "medium" => Ok(SizeClass::Medium),
            "large" => Ok(SizeClass::Large),
            _ => Err(CoreError::Unknown { kind: "size class", name: s.into() }),
        }
    }
}

/// `(state, size)`, written `state/size` in data files.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProfileId {
    pub state: String,
    pub size: SizeClass,
}

impl fmt::Display for ProfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.state, self.size)
    }
}

impl std::str::FromStr for ProfileId {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        let (state, size) = s
            .split_once('/')
            .ok_or_else(|| CoreError::Unknown { kind: "profile id", name: s.into() })?;
        Ok(Self {
            state: state.trim().into(),
            size: size.parse()?,
        })
    }
}

/// Type-II multipliers per dollar of local direct spending; `jobs` is per $1M.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multipliers {
    pub output: f64,
    pub earnings: f64,
    pub jobs: f64,
    pub value_added: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierTable {
    pub profile: ProfileId,
    pub rows: BTreeMap<String, Multipliers>,
}

impl MultiplierTable {
    pub fn validate(&self) -> Result<()> {
        for (name, m) in &self.rows {
            let bad = |msg: &str| invalid("multiplier table", format!("{} row {name:?}: {msg}", self.profile));
            if ![m.output, m.earnings, m.jobs, m.value_added].iter().all(|v| v.is_finite()) {
                return bad("non-finite value");
            }
            if m.output < 1.0 {
                return bad("output multiplier below 1.0");
            }
            if m.value_added > m.output || m.earnings > m.output {
                return bad("value added or earnings exceed output");
            }
            if m.jobs < 0.0 || m.value_added < 0.0 || m.earnings < 0.0 {
                return bad("negative multiplier");
            }
        }
        Ok(())
    }

    fn row(&self, commodity: &str) -> Result<&Multipliers> {
        self.rows.get(commodity).ok_or_else(|| CoreError::UnmappedCategory {
            profile: self.profile.to_string(),
            category: commodity.into(),
        })
    }
}

/// Sums `direct x multiplier` over categories. Exactly linear in the direct amounts.
pub fn apply_multipliers(direct: &[Direct], table: &MultiplierTable) -> Result<ImpactVector> {
    let mut out = ImpactVector::ZERO;
    for d in direct {
        out += apply_one(&d.commodity, d.amount, table)?;
    }
    Ok(out)
}

fn apply_one(commodity: &str, amount: f64, table: &MultiplierTable) -> Result<ImpactVector> {
    let m = table.row(commodity)?;
    Ok(ImpactVector {
        output: amount * m.output,
        earnings: amount * m.earnings,
        jobs: amount / 1e6 * m.jobs,
        value_added: amount * m.value_added,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum YieldClass {
    Below,
    Average,
    Above,
}

impl std::str::FromStr for YieldClass {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "below" => Ok(YieldClass::Below),
            "average" => Ok(YieldClass::Average),
            "above" => Ok(YieldClass::Above),
            _ => Err(CoreError::Unknown { kind: "yield class", name: s.into() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crop {
    pub name: String,
    pub price_per_bu: f64,
    pub yield_bu_per_acre: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgBaseline {
    pub crops: Vec<Crop>,
    /// Fractional revenue adjustment for above (+) and below (-) average yield counties.
    pub class_adjust: f64,
}

impl Default for AgBaseline {
    fn default() -> Self {
        let crop = |name: &str, price, yld| Crop {
            name: name.into(),
            price_per_bu: price,
            yield_bu_per_acre: yld,
        };
        Self {
            crops: vec![crop("corn", 7.00, 147.0), crop("wheat", 7.50, 57.0), crop("soybean", 14.25, 74.0)],
            class_adjust: 0.10,
        }
    }
}

impl AgBaseline {
    /// Equal-thirds rotation: mean of price x yield.
    pub fn composite_revenue_per_acre(&self) -> f64 {
        let n = self.crops.len().max(1) as f64;
        self.crops.iter().map(|c| c.price_per_bu * c.yield_bu_per_acre).sum::<f64>() / n
    }

    pub fn revenue_per_acre(&self, class: YieldClass) -> f64 {
        let k = match class {
            YieldClass::Below => 1.0 - self.class_adjust,
            YieldClass::Average => 1.0,
            YieldClass::Above => 1.0 + self.class_adjust,
        };
        self.composite_revenue_per_acre() * k
    }
}

/// One growing season of lost grain output, as a non-positive impact vector.
pub fn ag_offset_annual(
    displaced_acres: f64,
    baseline: &AgBaseline,
    class: YieldClass,
    table: &MultiplierTable,
) -> Result<ImpactVector> {
    let loss = displaced_acres * baseline.revenue_per_acre(class);
    Ok(-apply_one(commodity::AGRICULTURE, loss, table)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TaxKind {
    FlatPilot,
    /// Payments fall geometrically; a negative rate means they grow.
    Declining { decline_rate: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaxSchedule {
    pub state: String,
    pub year1_per_mw: f64,
    pub kind: TaxKind,
    pub discount_rate: f64,
}

/// Published state property-tax values per MW_ac: (state, first-year $, lifetime NPV $).
pub const STATE_TAX_TABLE: [(&str, f64, f64); 6] = [
    ("Ohio", 8_750.0, 103_400.0),
    ("Wisconsin", 4_980.0, 60_300.0),
    ("Indiana", 6_080.0, 39_400.0),
    ("Michigan", 4_750.0, 38_800.0),
    ("Illinois", 3_690.0, 28_000.0),
    ("Minnesota", 1_670.0, 19_700.0),
];

pub const DEFAULT_TAX_DISCOUNT_RATE: f64 = 0.075;

impl TaxSchedule {
    pub fn flat(state: &str, year1_per_mw: f64) -> Self {
        Self {
            state: state.into(),
            year1_per_mw,
            kind: TaxKind::FlatPilot,
            discount_rate: DEFAULT_TAX_DISCOUNT_RATE,
        }
    }

    /// Payment per MW_ac in operating year `year` (1-based).
    pub fn payment(&self, year: u32) -> f64 {
        match self.kind {
            TaxKind::FlatPilot => self.year1_per_mw,
            TaxKind::Declining { decline_rate } => {
                self.year1_per_mw * (1.0 - decline_rate).powi(year.saturating_sub(1) as i32)
            }
        }
    }

    pub fn npv(&self, life_years: u32) -> f64 {
        npv(self.discount_rate, (1..=life_years).map(|t| self.payment(t)))
    }

    /// Declining schedule whose first-year payment and NPV both match the targets.
    pub fn fit_declining(state: &str, year1: f64, npv_target: f64, discount_rate: f64, life_years: u32) -> Result<Self> {
        let make = |d: f64| Self {
            state: state.into(),
            year1_per_mw: year1,
            kind: TaxKind::Declining { decline_rate: d },
            discount_rate,
        };
        let d = bisect(-0.5, 0.999, |d| make(d).npv(life_years) - npv_target).ok_or_else(|| CoreError::Invalid {
            what: "tax schedule",
            msg: format!("{state}: no decline rate reproduces NPV {npv_target} from {year1}/yr"),
        })?;
        Ok(make(d))
    }

    /// Discount rate at which a flat payment has the target NPV.
    pub fn fit_flat_discount_rate(year1: f64, npv_target: f64, life_years: u32) -> Option<f64> {
        bisect(1e-6, 1.0, |r| npv(r, (0..life_years).map(|_| year1)) - npv_target)
    }
}

/// Ohio is a flat PILOT at the default rate; other states get a fitted declining schedule.
pub fn default_tax_schedules(life_years: u32) -> Result<Vec<TaxSchedule>> {
    STATE_TAX_TABLE
        .iter()
        .map(|&(state, y1, target)| {
            if state == "Ohio" {
                Ok(TaxSchedule::flat(state, y1))
            } else {
                TaxSchedule::fit_declining(state, y1, target, DEFAULT_TAX_DISCOUNT_RATE, life_years)
            }
        })
        .collect()
}

pub fn installation_direct(spec: &ProjectSpec, profile: &ExpenditureProfile) -> Result<Vec<Direct>> {
    profile.validate()?;
    Ok(profile.local_direct(profile.phase_total(spec.mw_dc())))
}

pub fn decommission_direct(spec: &ProjectSpec, profile: &ExpenditureProfile) -> Result<Vec<Direct>> {
    profile.validate()?;
    Ok(profile.local_direct(profile.phase_total(spec.mw_dc())))
}

/// Total O&M dollars per operating year: a linear ramp centred on mid-life so the lifetime
/// mean equals the benchmark, rising by `escalation` of the mid-life value each year.
pub fn om_schedule(spec: &ProjectSpec, profile: &ExpenditureProfile, escalation: f64) -> Result<Vec<f64>> {
    profile.validate()?;
    let base = profile.phase_total(spec.mw_dc());
    let mid = (spec.life_years as f64 + 1.0) / 2.0;
    let out: Vec<f64> = (1..=spec.life_years)
        .map(|t| base * (1.0 + escalation * (t as f64 - mid)))
        .collect();
    if out.first().is_some_and(|&v| v <= 0.0) {
        return Err(CoreError::NonPositiveOm {
            value: out[0],
            life: spec.life_years,
        });
    }
    Ok(out)
}

/// Lease and property-tax payments for each operating year, as (lease $, tax $).
pub fn lease_and_tax_induced(spec: &ProjectSpec, lease_rate: f64, tax: &TaxSchedule) -> Vec<(f64, f64)> {
    let lease = spec.project_acres() * lease_rate;
    (1..=spec.life_years)
        .map(|t| (lease, tax.payment(t) * spec.nameplate_ac))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EconParams {
    pub installation: ExpenditureProfile,
    pub om: ExpenditureProfile,
    pub decommissioning: ExpenditureProfile,
    pub ag: AgBaseline,
    /// $/acre-yr paid on every project acre.
    pub lease_rate: f64,
    pub om_escalation: f64,
}

impl Default for EconParams {
    fn default() -> Self {
        Self {
            installation: ExpenditureProfile::installation_default(),
            om: ExpenditureProfile::om_default(),
            decommissioning: ExpenditureProfile::decommissioning_default(),
            ag: AgBaseline::default(),
            lease_rate: 580.0,
            om_escalation: 0.05,
        }
    }
}

/// County-specific inputs to the lifecycle model.
#[derive(Clone, Copy, Debug)]
pub struct CountyEconomy<'a> {
    pub multipliers: &'a MultiplierTable,
    pub tax: &'a TaxSchedule,
    pub yield_class: YieldClass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct YearImpact {
    /// 1-based project year, counting from the first installation year.
    pub year: u32,
    pub phase: Phase,
    /// Effects of project spending, lease and taxes.
    pub gross: ImpactVector,
    /// Lost agricultural activity (non-positive).
    pub ag: ImpactVector,
}

impl YearImpact {
    pub fn net(&self) -> ImpactVector {
        self.gross + self.ag
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lifecycle {
    pub years: Vec<YearImpact>,
    pub gross_va_per_mw_yr: f64,
    pub net_va_per_mw_yr: f64,
}

impl Lifecycle {
    pub fn total_gross(&self) -> ImpactVector {
        self.years.iter().fold(ImpactVector::ZERO, |acc, y| acc + y.gross)
    }

    pub fn total_net(&self) -> ImpactVector {
        self.years.iter().fold(ImpactVector::ZERO, |acc, y| acc + y.net())
    }

    /// Fraction of gross value added lost to agricultural offsets.
    pub fn ag_reduction(&self) -> f64 {
        1.0 - self.net_va_per_mw_yr / self.gross_va_per_mw_yr
    }
}

/// Year-by-year impacts over installation, operation and decommissioning.
///
/// Installation spending is split across calendar years by months; each installation year
/// and the decommissioning year cost one growing season on the displaced acres. Lease is paid
/// in every year, property tax in installation and operating years (at the first-year level
/// while under construction). The per-MW figures divide lifetime value added by
/// `life_years x nameplate_ac`.
pub fn lifecycle_net_impact(spec: &ProjectSpec, params: &EconParams, county: CountyEconomy<'_>) -> Result<Lifecycle> {
    spec.validate()?;
    params.installation.validate()?;
    params.om.validate()?;
    params.decommissioning.validate()?;
    let table = county.multipliers;

    let lease_cap = params.om.capture_of(LAND_LEASE);
    let tax_cap = params.om.capture_of(PROPERTY_TAX);
    let lease_year = spec.project_acres() * params.lease_rate * lease_cap;
    let transfers = |tax_per_mw: f64| -> Result<ImpactVector> {
        Ok(apply_one(commodity::HOUSEHOLD, lease_year, table)?
            + apply_one(commodity::GOVERNMENT, tax_per_mw * spec.nameplate_ac * tax_cap, table)?)
    };
    let ag = ag_offset_annual(spec.displaced_ag_acres(), &params.ag, county.yield_class, table)?;

    let mut years = Vec::new();
    let install_total = params.installation.phase_total(spec.mw_dc());
    let n_install = spec.install_years();
    for y in 0..n_install {
        let months = (spec.install_months - 12 * y).min(12) as f64;
        let spend = params.installation.local_direct(install_total * months / spec.install_months as f64);
        years.push(YearImpact {
            year: y + 1,
            phase: Phase::Installation,
            gross: apply_multipliers(&spend, table)? + transfers(county.tax.payment(1))?,
            ag,
        });
    }

    let om = om_schedule(spec, &params.om, params.om_escalation)?;
    for (t, cost) in om.iter().enumerate() {
        let spend = params.om.local_direct(*cost);
        years.push(YearImpact {
            year: n_install + t as u32 + 1,
            phase: Phase::Operations,
            gross: apply_multipliers(&spend, table)? + transfers(county.tax.payment(t as u32 + 1))?,
            ag,
        });
    }

    let decom = params.decommissioning.local_direct(params.decommissioning.phase_total(spec.mw_dc()));
    years.push(YearImpact {
        year: n_install + spec.life_years + 1,
        phase: Phase::Decommissioning,
        gross: apply_multipliers(&decom, table)? + transfers(0.0)?,
        ag,
    });

    let denom = spec.life_years as f64 * spec.nameplate_ac;
    let gross: f64 = years.iter().map(|y| y.gross.value_added).sum();
    let net: f64 = years.iter().map(|y| y.net().value_added).sum();
    Ok(Lifecycle {
        years,
        gross_va_per_mw_yr: gross / denom,
        net_va_per_mw_yr: net / denom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_table() -> MultiplierTable {
        let one = Multipliers {
            output: 1.0,
            earnings: 1.0,
            jobs: 1.0,
            value_added: 1.0,
        };
        MultiplierTable {
            profile: "Ohio/large".parse().unwrap(),
            rows: commodity::ALL.iter().map(|c| (c.to_string(), one)).collect(),
        }
    }

    #[test]
    fn geometry_of_default_project() {
        let g = derive_project_geometry(&ProjectSpec::new(100.0).unwrap());
        assert_eq!(g.mw_dc, 125.0);
        assert_eq!(g.project_acres, 1000.0);
        assert!((g.displaced_ag_acres - 800.0).abs() < 1e-9);
        let one = ProjectSpec {
            nameplate_ac: 1.0,
            inverter_load_ratio: 1.0,
            ..Default::default()
        };
        let g = derive_project_geometry(&one);
        assert_eq!((g.mw_dc, g.project_acres), (1.0, 10.0));
        assert!((g.displaced_ag_acres - 8.0).abs() < 1e-12);
        assert!(ProjectSpec::new(0.0).is_err());
    }

    #[test]
    fn two_thirds_preset() {
        let s = ProjectSpec::default().two_thirds_displacement();
        assert!((s.displaced_ag_acres() / s.project_acres() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn default_profiles_close() {
        for p in [
            ExpenditureProfile::installation_default(),
            ExpenditureProfile::om_default(),
            ExpenditureProfile::decommissioning_default(),
        ] {
            p.validate().unwrap();
        }
    }

    #[test]
    fn installation_examples() {
        let spec = ProjectSpec::new(100.0).unwrap();
        let p = ExpenditureProfile::installation_default();
        assert!((p.phase_total(spec.mw_dc()) - 157.75e6).abs() < 1e-3);
        let d = installation_direct(&spec, &p).unwrap();
        let get = |n: &str| d.iter().find(|x| x.category == n).unwrap().amount;
        assert_eq!(get("PV Modules"), 0.0);
        assert_eq!(get("Contingency"), 0.0);
        assert!((get("Install Labor & Equipment") - 19.561e6).abs() < 1.0);
    }

    #[test]
    fn decommissioning_examples() {
        let spec = ProjectSpec::new(100.0).unwrap();
        let p = ExpenditureProfile::decommissioning_default();
        assert!((p.phase_total(spec.mw_dc()) - 5_246_125.0).abs() < 1e-6);
        let screws = p.categories.iter().find(|c| c.name.starts_with("Remove Ground")).unwrap();
        assert_eq!(screws.share, 0.23);
    }

    #[test]
    fn om_schedule_mean_and_ratio() {
        let spec = ProjectSpec::new(100.0).unwrap();
        let p = ExpenditureProfile::om_default();
        let s = om_schedule(&spec, &p, 0.05).unwrap();
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        let bench = 21.69 * 125_000.0;
        assert!((mean / bench - 1.0).abs() < 1e-9);
        assert!((s[29] / s[0] - 1.725 / 0.275).abs() < 1e-9);
        let flat = om_schedule(&spec, &p, 0.0).unwrap();
        assert!(flat.iter().all(|&v| (v - bench).abs() < 1e-6));
        assert!(matches!(om_schedule(&spec, &p, 0.08), Err(CoreError::NonPositiveOm { .. })));
    }

    #[test]
    fn lease_and_ohio_tax() {
        let spec = ProjectSpec::new(100.0).unwrap();
        let tax = TaxSchedule::flat("Ohio", 8750.0);
        let lt = lease_and_tax_induced(&spec, 580.0, &tax);
        assert_eq!(lt.len(), 30);
        assert_eq!(lt[0], (580_000.0, 875_000.0));
        assert!((tax.npv(30) / 103_400.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn declining_fit_matches_both_targets() {
        for (state, y1, target) in STATE_TAX_TABLE.iter().skip(1) {
            let s = TaxSchedule::fit_declining(state, *y1, *target, 0.075, 30).unwrap();
            assert_eq!(s.payment(1), *y1);
            assert!((s.npv(30) - target).abs() < 1e-6, "{state}");
        }
    }

    #[test]
    fn ag_composite_and_classes() {
        let ag = AgBaseline::default();
        assert!((ag.composite_revenue_per_acre() - 837.0).abs() < 1e-9);
        assert!((ag.revenue_per_acre(YieldClass::Above) - 920.7).abs() < 1e-9);
        let v = ag_offset_annual(0.0, &ag, YieldClass::Average, &unit_table()).unwrap();
        assert_eq!(v.value_added, 0.0);
        let v = ag_offset_annual(10.0, &ag, YieldClass::Average, &unit_table()).unwrap();
        assert!((v.output + 8370.0).abs() < 1e-9);
    }

    #[test]
    fn identity_multipliers_and_unmapped_category() {
        let d = vec![Direct {
            category: "x".into(),
            commodity: commodity::CONSTRUCTION.into(),
            amount: 1234.5,
        }];
        let v = apply_multipliers(&d, &unit_table()).unwrap();
        assert_eq!((v.output, v.value_added), (1234.5, 1234.5));
        let bad = vec![Direct {
            category: "x".into(),
            commodity: "Widgets".into(),
            amount: 1.0,
        }];
        assert!(matches!(
            apply_multipliers(&bad, &unit_table()),
            Err(CoreError::UnmappedCategory { category, .. }) if category == "Widgets"
        ));
    }

    #[test]
    fn zero_multipliers_give_zero_value_added() {
        let zero = Multipliers {
            output: 0.0,
            earnings: 0.0,
            jobs: 0.0,
            value_added: 0.0,
        };
        let table = MultiplierTable {
            profile: "Ohio/small".parse().unwrap(),
            rows: commodity::ALL.iter().map(|c| (c.to_string(), zero)).collect(),
        };
        let tax = TaxSchedule::flat("Ohio", 8750.0);
        let county = CountyEconomy {
            multipliers: &table,
            tax: &tax,
            yield_class: YieldClass::Average,
        };
        let lc = lifecycle_net_impact(&ProjectSpec::default(), &EconParams::default(), county).unwrap();
        assert_eq!(lc.net_va_per_mw_yr, 0.0);
        assert_eq!(lc.years.len(), 2 + 30 + 1);
    }
}
