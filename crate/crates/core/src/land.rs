//! Developable agricultural land per county under local zoning, and the capacity it supports.
//!
//! Parcels are rectangles. Setbacks are removed as a perimeter strip whose width is the
//! boundary-weighted mean of the road, participating and non-participating setbacks.
use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const FT_TO_M: f64 = 0.3048;
pub const ACRE_M2: f64 = 4_046.856_422_4;

/// Counts of subdivisions with explicit solar provisions: (allow, ban).
pub const PROVISION_COUNTS: (u32, u32) = (3_905, 512);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Technology {
    Solar,
    Wind,
}

impl std::fmt::Display for Technology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Technology::Solar => "solar",
            Technology::Wind => "wind",
        })
    }
}

impl Technology {
    pub fn max_slope_deg(self) -> f64 {
        match self {
            Technology::Solar => 10.0,
            Technology::Wind => 19.0,
        }
    }

    /// W per m² of developable land.
    pub fn power_density(self) -> f64 {
        match self {
            Technology::Solar => 5.4,
            Technology::Wind => 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LandClass {
    Agricultural,
    NonAgricultural,
    Restricted,
}

/// Urban pre-filter standing in for the 0.5 km (solar) and 1 km (wind) buffers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UrbanFlag {
    /// Outside both buffers.
    Clear = 0,
    /// Inside the wind buffer only.
    WindBuffer = 1,
    /// Inside both buffers.
    Excluded = 2,
}

impl UrbanFlag {
    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(UrbanFlag::Clear),
            1 => Ok(UrbanFlag::WindBuffer),
            2 => Ok(UrbanFlag::Excluded),
            _ => Err(CoreError::Unknown {
                kind: "urban flag",
                name: code.to_string(),
            }),
        }
    }

    fn excludes(self, tech: Technology) -> bool {
        match self {
            UrbanFlag::Clear => false,
            UrbanFlag::WindBuffer => tech == Technology::Wind,
            UrbanFlag::Excluded => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Parcel {
    pub id: u64,
    pub subdivision: String,
    pub county: String,
    pub length_m: f64,
    pub width_m: f64,
    pub area_m2: f64,
    pub slope_deg: f64,
    pub land_class: LandClass,
    pub urban: UrbanFlag,
}

impl Parcel {
    pub fn perimeter_m(&self) -> f64 {
        2.0 * (self.length_m + self.width_m)
    }

    /// Checks `area ~ length x width` within 5% and non-negative dimensions.
    pub fn validate(&self) -> Result<()> {
        let rect = self.length_m * self.width_m;
        let ok = self.length_m >= 0.0
            && self.width_m >= 0.0
            && self.slope_deg >= 0.0
            && self.area_m2 >= 0.0
            && (self.area_m2 - rect).abs() <= 0.05 * rect.max(self.area_m2);
        if ok {
            Ok(())
        } else {
            Err(CoreError::Invalid {
                what: "parcel",
                msg: format!(
                    "parcel {}: {} x {} m, area {} m2, slope {}",
                    self.id, self.length_m, self.width_m, self.area_m2, self.slope_deg
                ),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZoningStatus {
    Allow,
    Ban,
    /// Zoned but without solar provisions; treated as a ban unless extrapolated.
    Silent,
    Unzoned,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZoningRule {
    pub jurisdiction: String,
    pub status: ZoningStatus,
    pub road_ft: f64,
    pub ppl_ft: f64,
    pub nppl_ft: f64,
    pub min_lot_ac: Option<f64>,
    pub max_lot_ac: Option<f64>,
    pub coverage_frac: Option<f64>,
}

impl ZoningRule {
    /// Rule applied where no ordinance exists: 100 ft road, 50 ft property-line setbacks,
    /// 40% coverage and a 1-acre minimum lot.
    pub fn unzoned_default(jurisdiction: &str) -> Self {
        Self {
            jurisdiction: jurisdiction.into(),
            status: ZoningStatus::Unzoned,
            road_ft: 100.0,
            ppl_ft: 50.0,
            nppl_ft: 50.0,
            min_lot_ac: Some(1.0),
            max_lot_ac: None,
            coverage_frac: Some(0.40),
        }
    }

    /// Replaces the parameters of an unzoned rule by the defaults; other rules pass through.
    pub fn with_unzoned_defaults(&self) -> Self {
        if self.status == ZoningStatus::Unzoned {
            Self::unzoned_default(&self.jurisdiction)
        } else {
            self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let setbacks_ok = [self.road_ft, self.ppl_ft, self.nppl_ft].iter().all(|s| *s >= 0.0);
        let lots_ok = match (self.min_lot_ac, self.max_lot_ac) {
            (Some(lo), Some(hi)) => lo <= hi,
            _ => true,
        };
        let cov_ok = self.coverage_frac.is_none_or(|c| (0.0..=1.0).contains(&c));
        if setbacks_ok && lots_ok && cov_ok {
            Ok(())
        } else {
            Err(CoreError::Invalid {
                what: "zoning rule",
                msg: format!("jurisdiction {}", self.jurisdiction),
            })
        }
    }
}

/// Shares of a parcel boundary facing roads and participating / non-participating neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryShares {
    pub road: f64,
    pub ppl: f64,
    pub nppl: f64,
}

impl Default for BoundaryShares {
    fn default() -> Self {
        Self {
            road: 0.19,
            ppl: 0.44,
            nppl: 0.37,
        }
    }
}

impl BoundaryShares {
    /// Boundary-weighted setback in metres.
    pub fn mean_setback_m(&self, rule: &ZoningRule) -> f64 {
        FT_TO_M * (self.road * rule.road_ft + self.ppl * rule.ppl_ft + self.nppl * rule.nppl_ft)
    }
}

/// Area (m²) of `parcel` that `rule` leaves available for `tech`.
///
/// Lot-size limits are tested against the whole parcel.
pub fn developable_area(parcel: &Parcel, rule: &ZoningRule, shares: &BoundaryShares, tech: Technology) -> f64 {
    if parcel.land_class != LandClass::Agricultural
        || parcel.slope_deg >= tech.max_slope_deg()
        || parcel.urban.excludes(tech)
    {
        return 0.0;
    }
    let rule = rule.with_unzoned_defaults();
    if matches!(rule.status, ZoningStatus::Ban | ZoningStatus::Silent) {
        return 0.0;
    }
    let lot_ac = parcel.area_m2 / ACRE_M2;
    if rule.min_lot_ac.is_some_and(|m| lot_ac < m) || rule.max_lot_ac.is_some_and(|m| lot_ac > m) {
        return 0.0;
    }
    let a = parcel.area_m2;
    let mut dev = (a - parcel.perimeter_m() * shares.mean_setback_m(&rule)).max(0.0);
    if let Some(c) = rule.coverage_frac {
        dev = dev.min(c * a);
    }
    dev.clamp(0.0, a)
}

/// How zoning enters the capacity bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZoningPreset {
    /// Ordinances as written; silent subdivisions are bans.
    Current,
    /// Silent subdivisions reassigned by the observed allow/ban distribution.
    Expanded,
    /// Zoning ignored; only land class, slope and urban filters apply.
    Ignore,
}

/// Share of subdivisions with provisions that allow solar.
pub fn allow_share(allow: u32, ban: u32) -> f64 {
    allow as f64 / (allow + ban) as f64
}

/// Reassigns silent rules: sorted by jurisdiction id, the first `round(p x n)` become allow
/// (with the unzoned default parameters) and the rest become bans.
pub fn extrapolate_silent(rules: &[ZoningRule], p_allow: f64) -> Vec<ZoningRule> {
    let mut silent: Vec<usize> = (0..rules.len())
        .filter(|&i| rules[i].status == ZoningStatus::Silent)
        .collect();
    silent.sort_by(|&a, &b| rules[a].jurisdiction.cmp(&rules[b].jurisdiction));
    let n_allow = (p_allow.clamp(0.0, 1.0) * silent.len() as f64).round() as usize;
    let mut out = rules.to_vec();
    for (k, &i) in silent.iter().enumerate() {
        out[i] = if k < n_allow {
            ZoningRule {
                status: ZoningStatus::Allow,
                ..ZoningRule::unzoned_default(&rules[i].jurisdiction)
            }
        } else {
            ZoningRule {
                status: ZoningStatus::Ban,
                ..rules[i].clone()
            }
        };
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CountyCapacity {
    pub solar_m2: f64,
    pub wind_m2: f64,
    pub solar_mw: f64,
    pub wind_mw: f64,
}

/// Capacity bound per county. Parcels in subdivisions without a rule are treated as unzoned.
pub fn county_capacity(
    parcels: &[Parcel],
    rules: &[ZoningRule],
    preset: ZoningPreset,
    shares: &BoundaryShares,
) -> BTreeMap<String, CountyCapacity> {
    let rules = match preset {
        ZoningPreset::Expanded => {
            let (a, b) = observed_provisions(rules);
            extrapolate_silent(rules, allow_share(a, b))
        }
        _ => rules.to_vec(),
    };
    let by_id: BTreeMap<&str, &ZoningRule> = rules.iter().map(|r| (r.jurisdiction.as_str(), r)).collect();
    let open = ZoningRule {
        jurisdiction: String::new(),
        status: ZoningStatus::Allow,
        road_ft: 0.0,
        ppl_ft: 0.0,
        nppl_ft: 0.0,
        min_lot_ac: None,
        max_lot_ac: None,
        coverage_frac: None,
    };
    let mut out: BTreeMap<String, CountyCapacity> = BTreeMap::new();
    for p in parcels {
        let unzoned;
        let rule = if preset == ZoningPreset::Ignore {
            &open
        } else if let Some(r) = by_id.get(p.subdivision.as_str()) {
            r
        } else {
            unzoned = ZoningRule::unzoned_default(&p.subdivision);
            &unzoned
        };
        let e = out.entry(p.county.clone()).or_default();
        e.solar_m2 += developable_area(p, rule, shares, Technology::Solar);
        e.wind_m2 += developable_area(p, rule, shares, Technology::Wind);
    }
    for c in out.values_mut() {
        c.solar_mw = c.solar_m2 * Technology::Solar.power_density() / 1e6;
        c.wind_mw = c.wind_m2 * Technology::Wind.power_density() / 1e6;
    }
    out
}

/// Allow/ban counts among rules with explicit provisions; the published counts when none exist.
fn observed_provisions(rules: &[ZoningRule]) -> (u32, u32) {
    let allow = rules.iter().filter(|r| r.status == ZoningStatus::Allow).count() as u32;
    let ban = rules.iter().filter(|r| r.status == ZoningStatus::Ban).count() as u32;
    if allow + ban == 0 {
        PROVISION_COUNTS
    } else {
        (allow, ban)
    }
}

/// Rectangle dimensions used for nearest-neighbour matching.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dims {
    pub length: f64,
    pub width: f64,
    pub area: f64,
}

/// Matches every target to samples by z-scored Euclidean distance on (L, W, A).
///
/// A target is matched repeatedly, each time to the sample nearest to `(L, W, remaining area)`,
/// subtracting that sample's area, until the remaining area is at most
/// `area_threshold x target area`. Equal distances go to the lowest sample index.
pub fn match_subdivisions(targets: &[Dims], samples: &[Dims], area_threshold: f64) -> Result<Vec<Vec<usize>>> {
    if samples.is_empty() {
        return Err(CoreError::EmptySamples);
    }
    let stats = |f: fn(&Dims) -> f64| {
        let n = samples.len() as f64;
        let mean = samples.iter().map(f).sum::<f64>() / n;
        let var = samples.iter().map(|s| (f(s) - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        (mean, if sd > 0.0 { sd } else { 1.0 })
    };
    let (ml, sl) = stats(|d| d.length);
    let (mw, sw) = stats(|d| d.width);
    let (ma, sa) = stats(|d| d.area);
    let z = |l: f64, w: f64, a: f64| [(l - ml) / sl, (w - mw) / sw, (a - ma) / sa];
    let zs: Vec<[f64; 3]> = samples.iter().map(|s| z(s.length, s.width, s.area)).collect();
    let nearest = |q: [f64; 3]| -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, s) in zs.iter().enumerate() {
            let d = (0..3).map(|k| (q[k] - s[k]).powi(2)).sum::<f64>();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    };
    const MAX_MATCHES: usize = 10_000;
    Ok(targets
        .iter()
        .map(|t| {
            let stop = area_threshold * t.area;
            let mut remaining = t.area;
            let mut picks = Vec::new();
            loop {
                let i = nearest(z(t.length, t.width, remaining));
                picks.push(i);
                remaining -= samples[i].area;
                if remaining <= stop || samples[i].area <= 0.0 || picks.len() >= MAX_MATCHES {
                    break;
                }
            }
            picks
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parcel(l: f64, w: f64, slope: f64) -> Parcel {
        Parcel {
            id: 1,
            subdivision: "s".into(),
            county: "c".into(),
            length_m: l,
            width_m: w,
            area_m2: l * w,
            slope_deg: slope,
            land_class: LandClass::Agricultural,
            urban: UrbanFlag::Clear,
        }
    }

    fn rule(status: ZoningStatus, setbacks: f64) -> ZoningRule {
        ZoningRule {
            jurisdiction: "s".into(),
            status,
            road_ft: setbacks,
            ppl_ft: setbacks,
            nppl_ft: setbacks,
            min_lot_ac: None,
            max_lot_ac: None,
            coverage_frac: None,
        }
    }

    #[test]
    fn bans_and_silence_give_nothing() {
        let p = parcel(200.0, 200.0, 0.0);
        let s = BoundaryShares::default();
        assert_eq!(developable_area(&p, &rule(ZoningStatus::Ban, 0.0), &s, Technology::Solar), 0.0);
        assert_eq!(developable_area(&p, &rule(ZoningStatus::Silent, 0.0), &s, Technology::Solar), 0.0);
        assert_eq!(developable_area(&p, &rule(ZoningStatus::Allow, 0.0), &s, Technology::Solar), 40_000.0);
    }

    #[test]
    fn unzoned_default_on_square_parcel() {
        let p = parcel(200.0, 200.0, 0.0);
        let s = BoundaryShares::default();
        let got = developable_area(&p, &ZoningRule::unzoned_default("s"), &s, Technology::Solar);
        let sbar = 0.19 * 30.48 + 0.81 * 15.24;
        let want = (0.40 * 40_000.0f64).min(40_000.0 - 800.0 * sbar);
        assert!((got - want).abs() < 1e-9);
        let twice = ZoningRule::unzoned_default("s").with_unzoned_defaults().with_unzoned_defaults();
        assert_eq!(twice, ZoningRule::unzoned_default("s"));
    }

    #[test]
    fn slope_limits_differ_by_technology() {
        let p = parcel(1000.0, 1000.0, 12.0);
        let r = rule(ZoningStatus::Allow, 0.0);
        let s = BoundaryShares::default();
        assert_eq!(developable_area(&p, &r, &s, Technology::Solar), 0.0);
        assert_eq!(developable_area(&p, &r, &s, Technology::Wind), 1e6);
    }

    #[test]
    fn densities_per_square_kilometre() {
        let parcels = vec![parcel(1000.0, 1000.0, 0.0)];
        let mut r = rule(ZoningStatus::Allow, 0.0);
        r.jurisdiction = "s".into();
        let cap = county_capacity(&parcels, &[r], ZoningPreset::Current, &BoundaryShares::default());
        let c = cap["c"];
        assert!((c.solar_mw - 5.4).abs() < 1e-12);
        assert!((c.wind_mw - 0.5).abs() < 1e-12);
        assert!(county_capacity(&[], &[], ZoningPreset::Current, &BoundaryShares::default()).is_empty());
    }

    #[test]
    fn silent_extrapolation_rounds() {
        let rules: Vec<ZoningRule> = (0..10)
            .map(|i| ZoningRule {
                jurisdiction: format!("j{i:02}"),
                ..rule(ZoningStatus::Silent, 0.0)
            })
            .collect();
        let p = allow_share(PROVISION_COUNTS.0, PROVISION_COUNTS.1);
        assert!((p - 0.884).abs() < 5e-4);
        let out = extrapolate_silent(&rules, p);
        let allowed: Vec<&str> = out
            .iter()
            .filter(|r| r.status == ZoningStatus::Allow)
            .map(|r| r.jurisdiction.as_str())
            .collect();
        assert_eq!(allowed.len(), 9);
        assert!(!allowed.contains(&"j09"));
        assert!(extrapolate_silent(&rules, 1.0).iter().all(|r| r.status == ZoningStatus::Allow));
    }

    #[test]
    fn matching_examples() {
        let samples = vec![
            Dims { length: 100.0, width: 100.0, area: 10_000.0 },
            Dims { length: 300.0, width: 50.0, area: 15_000.0 },
            Dims { length: 200.0, width: 200.0, area: 40_000.0 },
        ];
        let m = match_subdivisions(&samples[..1], &samples, 0.1).unwrap();
        assert_eq!(m, vec![vec![0]]);
        let big = Dims { length: 100.0, width: 100.0, area: 25_000.0 };
        let m = match_subdivisions(&[big], &samples[..1], 0.1).unwrap();
        assert!(m[0].len() >= 3);
        let twins = vec![samples[0], samples[0]];
        assert_eq!(match_subdivisions(&[samples[0]], &twins, 0.1).unwrap(), vec![vec![0]]);
        assert_eq!(match_subdivisions(&[big], &[], 0.1), Err(CoreError::EmptySamples));
    }
}
