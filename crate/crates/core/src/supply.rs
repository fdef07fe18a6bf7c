//! County supply points (annualised cost per MW) and marginal-benefit points (net value
//! added per MW), and the step curves built from them.
use crate::finance::crf;
use crate::land::Technology;
use serde::{Deserialize, Serialize};

/// Overnight capital and fixed O&M of a technology.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TechCost {
    /// $/MW_ac.
    pub capex: f64,
    /// $/MW_ac-yr.
    pub fom: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FinanceParams {
    /// Real discount rate for generation investments.
    pub rate: f64,
    pub years: u32,
    pub itc: f64,
}

impl Default for FinanceParams {
    fn default() -> Self {
        Self {
            rate: 0.054,
            years: 30,
            itc: 0.30,
        }
    }
}

impl FinanceParams {
    pub fn crf(&self) -> f64 {
        crf(self.rate, self.years)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupplyInput {
    pub county: String,
    pub tech: Technology,
    pub capacity_mw: f64,
    /// Annual mean capacity factor.
    pub capacity_factor: f64,
    /// Annualised interconnection cost ($/yr) for connecting `capacity_mw`.
    pub interconnect_annual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupplyPoint {
    pub county: String,
    pub tech: Technology,
    pub capacity_mw: f64,
    /// $/MW-yr.
    pub annualized_cost: f64,
    pub capacity_factor: f64,
}

/// `CRF x capex x (1 - itc) + fom + interconnect / capacity` per county; zero-capacity counties
/// are dropped.
pub fn build_supply(inputs: &[SupplyInput], cost: &TechCost, fin: &FinanceParams) -> Vec<SupplyPoint> {
    inputs
        .iter()
        .filter(|i| i.capacity_mw > 0.0)
        .map(|i| SupplyPoint {
            county: i.county.clone(),
            tech: i.tech,
            capacity_mw: i.capacity_mw,
            annualized_cost: fin.crf() * cost.capex * (1.0 - fin.itc) + cost.fom + i.interconnect_annual / i.capacity_mw,
            capacity_factor: i.capacity_factor,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenefitPoint {
    pub county: String,
    pub capacity_mw: f64,
    pub net_va_per_mw_yr: f64,
    pub gross_va_per_mw_yr: f64,
}

/// Benefit points sorted by net value added, highest first (ties by county name).
pub fn build_benefit(mut points: Vec<BenefitPoint>) -> Vec<BenefitPoint> {
    points.sort_by(|a, b| {
        b.net_va_per_mw_yr
            .total_cmp(&a.net_va_per_mw_yr)
            .then_with(|| a.county.cmp(&b.county))
    });
    points
}

/// One flat segment of a step curve, in MW of cumulative capacity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Step {
    pub county: String,
    pub from_mw: f64,
    pub to_mw: f64,
    pub value: f64,
}

fn steps<T>(items: &[T], cap: impl Fn(&T) -> f64, value: impl Fn(&T) -> f64, name: impl Fn(&T) -> &str) -> Vec<Step> {
    let mut at = 0.0;
    items
        .iter()
        .map(|it| {
            let s = Step {
                county: name(it).to_string(),
                from_mw: at,
                to_mw: at + cap(it),
                value: value(it),
            };
            at = s.to_mw;
            s
        })
        .collect()
}

/// Supply step curve, cheapest first.
pub fn supply_curve(points: &[SupplyPoint]) -> Vec<Step> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.annualized_cost.total_cmp(&b.annualized_cost).then_with(|| a.county.cmp(&b.county)));
    steps(&sorted, |p| p.capacity_mw, |p| p.annualized_cost, |p| &p.county)
}

/// Net and gross benefit step curves over the same (net-sorted) county order.
pub fn benefit_curves(points: &[BenefitPoint]) -> (Vec<Step>, Vec<Step>) {
    let sorted = build_benefit(points.to_vec());
    (
        steps(&sorted, |p| p.capacity_mw, |p| p.net_va_per_mw_yr, |p| &p.county),
        steps(&sorted, |p| p.capacity_mw, |p| p.gross_va_per_mw_yr, |p| &p.county),
    )
}
