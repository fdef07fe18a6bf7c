//! Spur-line interconnection cost: conductors and structures, substation and transformer,
//! right of way by terrain, overheads and contingency, annualised with a CRF.
use crate::error::{invalid, CoreError, Result};
use crate::finance::crf;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kv {
    Kv69,
    Kv161,
    Kv230,
    Kv345,
    Kv500,
}

impl Kv {
    pub const ALL: [Kv; 5] = [Kv::Kv69, Kv::Kv161, Kv::Kv230, Kv::Kv345, Kv::Kv500];

    pub fn from_kv(kv: u32) -> Result<Self> {
        match kv {
            69 => Ok(Kv::Kv69),
            161 => Ok(Kv::Kv161),
            230 => Ok(Kv::Kv230),
            345 => Ok(Kv::Kv345),
            500 => Ok(Kv::Kv500),
            _ => Err(CoreError::Unknown {
                kind: "voltage class",
                name: format!("{kv} kV"),
            }),
        }
    }

    pub fn kv(self) -> u32 {
        [69, 161, 230, 345, 500][self.index()]
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Kv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} kV", self.kv())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Circuit {
    Single,
    Double,
}

impl Circuit {
    pub fn circuits(self) -> f64 {
        match self {
            Circuit::Single => 1.0,
            Circuit::Double => 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VoltageClass {
    pub kv: Kv,
    pub circuit: Circuit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Terrain {
    LightVegetation,
    Forest,
    Wetland,
    Mountain,
}

impl Terrain {
    pub const ALL: [Terrain; 4] = [Terrain::LightVegetation, Terrain::Forest, Terrain::Wetland, Terrain::Mountain];
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TerrainSegment {
    pub terrain: Terrain,
    pub miles: f64,
    pub row_width_ft: f64,
}

impl TerrainSegment {
    pub fn acres(&self) -> f64 {
        self.miles * 5280.0 * self.row_width_ft / 43_560.0
    }
}

/// Unit-cost tables, indexed by [`Kv`] order (69, 161, 230, 345, 500 kV).
#[derive(Clone, Debug, PartialEq)]
pub struct CostTables {
    /// $/mile, single and double circuit.
    pub line_single: [f64; 5],
    pub line_double: [f64; 5],
    /// $/MVA, symmetric in the two voltages.
    pub transformer: [[f64; 5]; 5],
    /// Breaker-and-a-half layouts: 4 positions (single circuit), 6 positions (double).
    pub substation_4: [f64; 5],
    pub substation_6: [f64; 5],
    /// Land preparation $/acre by [`Terrain`] order.
    pub prep_per_acre: [f64; 4],
    /// Permitting and acquisition $/acre on every ROW acre.
    pub row_overhead_per_acre: f64,
}

impl Default for CostTables {
    fn default() -> Self {
        Self {
            line_single: [528_430.0, 520_772.0, 580_308.0, 969_786.0, 1_104_267.0],
            line_double: [849_838.0, 1_005_009.0, 1_150_818.0, 1_991_936.0, 2_254_661.0],
            transformer: [
                [4_961.0, 4_705.0, 5_217.0, 6_406.0, 8_262.0],
                [4_705.0, 6_745.0, 5_494.0, 6_406.0, 7_862.0],
                [5_217.0, 5_494.0, 7_472.0, 6_406.0, 7_862.0],
                [6_406.0, 6_406.0, 6_406.0, 9_102.0, 8_262.0],
                [8_262.0, 7_862.0, 7_862.0, 8_262.0, 12_198.0],
            ],
            substation_4: [7.9e6, 10.6e6, 12.1e6, 17.5e6, 25.4e6],
            substation_6: [8.4e6, 11.2e6, 12.8e6, 18.7e6, 27.3e6],
            prep_per_acre: [272.0, 5_577.0, 111_865.0, 7_169.0],
            row_overhead_per_acre: 15_235.0,
        }
    }
}

impl CostTables {
    pub fn line_per_mile(&self, vc: VoltageClass) -> f64 {
        match vc.circuit {
            Circuit::Single => self.line_single[vc.kv.index()],
            Circuit::Double => self.line_double[vc.kv.index()],
        }
    }

    pub fn transformer_rate(&self, a: Kv, b: Kv) -> f64 {
        self.transformer[a.index()][b.index()]
    }

    pub fn prep(&self, t: Terrain) -> f64 {
        self.prep_per_acre[t as usize]
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..5 {
            for j in 0..5 {
                if self.transformer[i][j] != self.transformer[j][i] {
                    return invalid("transformer table", format!("asymmetric at ({i}, {j})"));
                }
            }
        }
        let all = self
            .line_single
            .iter()
            .chain(&self.line_double)
            .chain(self.transformer.iter().flatten())
            .chain(&self.substation_4)
            .chain(&self.substation_6)
            .chain(&self.prep_per_acre);
        if all.chain([&self.row_overhead_per_acre]).any(|v| !(*v >= 0.0 && v.is_finite())) {
            return invalid("interconnection tables", "negative or non-finite unit cost");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterconnectParams {
    pub tables: CostTables,
    /// Administrative/general, project management and AFUDC, applied additively.
    pub overheads: [f64; 3],
    /// Applied on top of the overhead-grossed total.
    pub contingency: f64,
    pub rate: f64,
    pub years: u32,
    pub om_per_mva: f64,
    pub om_per_circuit_mile: f64,
    /// ROW width (ft) by [`Kv`] order.
    pub row_width_ft: [f64; 5],
    /// Thermal rating (MVA) of one single-circuit line by [`Kv`] order; double is twice this.
    pub single_rating_mva: [f64; 5],
    /// Voltage at the plant side of the step-up transformer.
    pub gen_kv: Kv,
}

impl Default for InterconnectParams {
    fn default() -> Self {
        Self {
            tables: CostTables::default(),
            overheads: [0.055, 0.015, 0.075],
            contingency: 0.30,
            rate: 0.03,
            years: 30,
            om_per_mva: 1_543.65,
            om_per_circuit_mile: 7_300.75,
            row_width_ft: [100.0, 100.0, 100.0, 150.0, 200.0],
            single_rating_mva: [150.0, 300.0, 600.0, 1_200.0, 2_500.0],
            gen_kv: Kv::Kv69,
        }
    }
}

impl InterconnectParams {
    pub fn gross_up(&self) -> f64 {
        (1.0 + self.overheads.iter().sum::<f64>()) * (1.0 + self.contingency)
    }

    pub fn crf(&self) -> f64 {
        crf(self.rate, self.years)
    }
}

pub fn structure_cost(tables: &CostTables, vc: VoltageClass, miles: f64) -> Result<f64> {
    if !(miles >= 0.0) {
        return invalid("line length", format!("{miles} miles"));
    }
    Ok(miles * tables.line_per_mile(vc))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubstationCost {
    pub layout: f64,
    pub transformer: f64,
}

impl SubstationCost {
    pub fn total(&self) -> f64 {
        self.layout + self.transformer
    }
}

/// Breaker layout at the line voltage plus a step-up transformer sized at `mva`.
pub fn substation_cost(tables: &CostTables, vc_line: VoltageClass, gen_kv: Kv, mva: f64) -> Result<SubstationCost> {
    if !(mva > 0.0) {
        return invalid("substation rating", format!("{mva} MVA"));
    }
    let layout = match vc_line.circuit {
        Circuit::Single => tables.substation_4[vc_line.kv.index()],
        Circuit::Double => tables.substation_6[vc_line.kv.index()],
    };
    Ok(SubstationCost {
        layout,
        transformer: mva * tables.transformer_rate(gen_kv, vc_line.kv),
    })
}

/// `sum(acres x (prep + overhead))`.
pub fn row_cost(tables: &CostTables, segments: &[TerrainSegment]) -> f64 {
    segments
        .iter()
        .map(|s| s.acres() * (tables.prep(s.terrain) + tables.row_overhead_per_acre))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CostStack {
    pub structures: f64,
    pub substation: f64,
    pub transformer: f64,
    pub row: f64,
    pub overheads: f64,
    pub contingency: f64,
    pub total: f64,
    /// `total x CRF`.
    pub annualized: f64,
    pub om_annual: f64,
}

impl CostStack {
    pub fn component_sum(&self) -> f64 {
        self.structures + self.substation + self.transformer + self.row
    }

    pub fn annual_total(&self) -> f64 {
        self.annualized + self.om_annual
    }
}

/// `total x CRF(rate, years)`.
pub fn annualize(total: f64, rate: f64, years: u32) -> f64 {
    total * crf(rate, years)
}

pub fn om_annual(params: &InterconnectParams, mva: f64, circuit_miles: f64) -> f64 {
    mva * params.om_per_mva + circuit_miles * params.om_per_circuit_mile
}

/// Full cost of one spur of `vc` with its substation.
pub fn cost_stack(
    params: &InterconnectParams,
    vc: VoltageClass,
    miles: f64,
    mva: f64,
    segments: &[TerrainSegment],
) -> Result<CostStack> {
    let t = &params.tables;
    let structures = structure_cost(t, vc, miles)?;
    let sub = substation_cost(t, vc, params.gen_kv, mva)?;
    let row = row_cost(t, segments);
    Ok(stack(params, structures, sub.layout, sub.transformer, row, mva, miles * vc.circuit.circuits()))
}

fn stack(p: &InterconnectParams, structures: f64, substation: f64, transformer: f64, row: f64, mva: f64, circuit_miles: f64) -> CostStack {
    let base = structures + substation + transformer + row;
    let with_oh = base * (1.0 + p.overheads.iter().sum::<f64>());
    let total = with_oh * (1.0 + p.contingency);
    CostStack {
        structures,
        substation,
        transformer,
        row,
        overheads: with_oh - base,
        contingency: total - with_oh,
        total,
        annualized: total * p.crf(),
        om_annual: om_annual(p, mva, circuit_miles),
    }
}

/// Fractions of a route crossing each terrain, in [`Terrain`] order.
pub type TerrainMix = [f64; 4];

/// Nearest existing line of one voltage class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineOption {
    pub kv: Kv,
    pub distance_miles: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpurChoice {
    pub kv: Kv,
    pub circuit: Circuit,
    /// Parallel spurs needed when one double circuit cannot carry the load.
    pub spurs: u32,
    pub miles: f64,
    pub mva: f64,
    pub cost: CostStack,
}

/// Cheapest spur (annualised capital plus O&M) for `mva` across the available lines.
///
/// A single circuit is used while `mva` fits its rating, then a double circuit, then as many
/// parallel double-circuit spurs as needed. Each spur has its own breaker layout and ROW; the
/// transformer is sized for the full `mva`.
pub fn choose_spur(params: &InterconnectParams, options: &[LineOption], mix: &TerrainMix, mva: f64) -> Result<SpurChoice> {
    let mix_sum: f64 = mix.iter().sum();
    if mix.iter().any(|f| *f < 0.0) || (mix_sum - 1.0).abs() > 1e-6 {
        return invalid("terrain mix", format!("{mix:?} does not sum to 1"));
    }
    let mut best: Option<SpurChoice> = None;
    for opt in options {
        let single = params.single_rating_mva[opt.kv.index()];
        let (circuit, spurs) = if mva <= single {
            (Circuit::Single, 1)
        } else {
            (Circuit::Double, (mva / (2.0 * single)).ceil().max(1.0) as u32)
        };
        let vc = VoltageClass { kv: opt.kv, circuit };
        let width = params.row_width_ft[opt.kv.index()];
        let segments: Vec<TerrainSegment> = Terrain::ALL
            .iter()
            .zip(mix)
            .map(|(&terrain, &f)| TerrainSegment {
                terrain,
                miles: f * opt.distance_miles,
                row_width_ft: width,
            })
            .collect();
        let t = &params.tables;
        let n = spurs as f64;
        let structures = n * structure_cost(t, vc, opt.distance_miles)?;
        let sub = substation_cost(t, vc, params.gen_kv, mva)?;
        let row = n * row_cost(t, &segments);
        let cost = stack(
            params,
            structures,
            n * sub.layout,
            sub.transformer,
            row,
            mva,
            n * opt.distance_miles * circuit.circuits(),
        );
        let cand = SpurChoice {
            kv: opt.kv,
            circuit,
            spurs,
            miles: opt.distance_miles,
            mva,
            cost,
        };
        if best.as_ref().is_none_or(|b| cand.cost.annual_total() < b.cost.annual_total()) {
            best = Some(cand);
        }
    }
    best.ok_or_else(|| CoreError::Invalid {
        what: "interconnection options",
        msg: "no candidate lines".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const S69: VoltageClass = VoltageClass {
        kv: Kv::Kv69,
        circuit: Circuit::Single,
    };

    #[test]
    fn structure_examples() {
        let t = CostTables::default();
        assert_eq!(structure_cost(&t, S69, 1.0).unwrap(), 528_430.0);
        let d500 = VoltageClass {
            kv: Kv::Kv500,
            circuit: Circuit::Double,
        };
        assert_eq!(structure_cost(&t, d500, 2.0).unwrap(), 4_509_322.0);
        assert_eq!(structure_cost(&t, S69, 0.0).unwrap(), 0.0);
        assert!(structure_cost(&t, S69, -1.0).is_err());
    }

    #[test]
    fn substation_examples() {
        let t = CostTables::default();
        assert_eq!(substation_cost(&t, S69, Kv::Kv69, 100.0).unwrap().total(), 8_396_100.0);
        assert_eq!(t.transformer_rate(Kv::Kv161, Kv::Kv230), 5_494.0);
        assert_eq!(t.transformer_rate(Kv::Kv230, Kv::Kv161), 5_494.0);
        t.validate().unwrap();
        let d345 = VoltageClass {
            kv: Kv::Kv345,
            circuit: Circuit::Double,
        };
        assert!(substation_cost(&t, d345, Kv::Kv69, 0.0).is_err());
    }

    #[test]
    fn row_examples() {
        let t = CostTables::default();
        let acre = |terrain| TerrainSegment {
            terrain,
            miles: 43_560.0 / 5280.0 / 100.0,
            row_width_ft: 100.0,
        };
        assert!((row_cost(&t, &[acre(Terrain::Wetland)]) - 127_100.0).abs() < 1e-6);
        assert!((row_cost(&t, &[acre(Terrain::LightVegetation)]) - 15_507.0).abs() < 1e-9);
        assert_eq!(row_cost(&t, &[]), 0.0);
    }

    #[test]
    fn om_example() {
        let p = InterconnectParams::default();
        assert!((om_annual(&p, 100.0, 1.0) - 161_665.75).abs() < 1e-9);
    }

    #[test]
    fn bigger_loads_need_more_circuits() {
        let p = InterconnectParams::default();
        let opts = [LineOption {
            kv: Kv::Kv69,
            distance_miles: 5.0,
        }];
        let mix = [1.0, 0.0, 0.0, 0.0];
        assert_eq!(choose_spur(&p, &opts, &mix, 100.0).unwrap().circuit, Circuit::Single);
        let d = choose_spur(&p, &opts, &mix, 250.0).unwrap();
        assert_eq!((d.circuit, d.spurs), (Circuit::Double, 1));
        assert_eq!(choose_spur(&p, &opts, &mix, 700.0).unwrap().spurs, 3);
    }

    #[test]
    fn cheapest_option_wins() {
        let p = InterconnectParams::default();
        let opts = [
            LineOption {
                kv: Kv::Kv345,
                distance_miles: 2.0,
            },
            LineOption {
                kv: Kv::Kv69,
                distance_miles: 2.0,
            },
        ];
        let c = choose_spur(&p, &opts, &[1.0, 0.0, 0.0, 0.0], 50.0).unwrap();
        assert_eq!(c.kv, Kv::Kv69);
    }
}
