use proptest::prelude::*;
use solarsite_core::econ::*;
use solarsite_core::interconnect::*;
use solarsite_core::land::*;
use solarsite_core::supply::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn table(seed: &[f64]) -> MultiplierTable {
    let rows = commodity::ALL
        .iter()
        .zip(seed.iter().cycle())
        .map(|(c, &s)| {
            (
                c.to_string(),
                Multipliers {
                    output: 1.0 + s,
                    earnings: 0.3 + 0.2 * s,
                    jobs: 5.0 + 10.0 * s,
                    value_added: 0.5 + 0.4 * s,
                },
            )
        })
        .collect();
    MultiplierTable {
        profile: "Ohio/medium".parse().unwrap(),
        rows,
    }
}

fn lifecycle(spec: &ProjectSpec, t: &MultiplierTable) -> Lifecycle {
    let tax = TaxSchedule::flat("Ohio", 8750.0);
    let county = CountyEconomy {
        multipliers: t,
        tax: &tax,
        yield_class: YieldClass::Average,
    };
    lifecycle_net_impact(spec, &EconParams::default(), county).unwrap()
}

fn close(a: ImpactVector, b: ImpactVector, tol: f64) -> bool {
    [(a.output, b.output), (a.earnings, b.earnings), (a.jobs, b.jobs), (a.value_added, b.value_added)]
        .iter()
        .all(|&(x, y)| x == y || rel(x, y) <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn impacts_scale_with_nameplate(mw in 1.0f64..500.0, k in 0.1f64..20.0, s in prop::collection::vec(0.0f64..1.0, 10)) {
        let t = table(&s);
        let a = lifecycle(&ProjectSpec::new(mw).unwrap(), &t);
        let b = lifecycle(&ProjectSpec::new(mw * k).unwrap(), &t);
        for (x, y) in a.years.iter().zip(&b.years) {
            prop_assert!(close(x.gross * k, y.gross, 1e-12));
            prop_assert!(close(x.ag * k, y.ag, 1e-12));
        }
        prop_assert!(rel(a.net_va_per_mw_yr, b.net_va_per_mw_yr) < 1e-12);
    }

    #[test]
    fn multipliers_are_linear(a in prop::collection::vec(0.0f64..1e7, 1..10), b in prop::collection::vec(0.0f64..1e7, 1..10), s in prop::collection::vec(0.0f64..1.0, 10)) {
        let t = table(&s);
        let direct = |v: &[f64]| -> Vec<Direct> {
            v.iter()
                .enumerate()
                .map(|(i, &amount)| Direct {
                    category: format!("c{i}"),
                    commodity: commodity::ALL[i % commodity::ALL.len()].into(),
                    amount,
                })
                .collect()
        };
        let da = direct(&a);
        let db = direct(&b);
        let both: Vec<Direct> = da.iter().chain(&db).cloned().collect();
        let lhs = apply_multipliers(&both, &t).unwrap();
        let rhs = apply_multipliers(&da, &t).unwrap() + apply_multipliers(&db, &t).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12));
        let doubled: Vec<Direct> = da.iter().map(|d| Direct { amount: 2.0 * d.amount, ..d.clone() }).collect();
        prop_assert!(close(apply_multipliers(&doubled, &t).unwrap(), apply_multipliers(&da, &t).unwrap() * 2.0, 1e-12));
    }

    #[test]
    fn net_value_falls_with_displaced_acres(extra in 0.0f64..5.0, more in 0.01f64..5.0, s in prop::collection::vec(0.0f64..1.0, 10)) {
        let t = table(&s);
        let base = ProjectSpec { extra_ag_acres_per_mw: extra, ..Default::default() };
        let bigger = ProjectSpec { extra_ag_acres_per_mw: extra + more, ..Default::default() };
        prop_assert!(lifecycle(&bigger, &t).net_va_per_mw_yr < lifecycle(&base, &t).net_va_per_mw_yr);
    }

    #[test]
    fn signs_of_gross_and_ag(mw in 1.0f64..500.0, s in prop::collection::vec(0.0f64..1.0, 10)) {
        let lc = lifecycle(&ProjectSpec::new(mw).unwrap(), &table(&s));
        for y in &lc.years {
            prop_assert!(y.ag.output <= 0.0 && y.ag.earnings <= 0.0 && y.ag.jobs <= 0.0 && y.ag.value_added <= 0.0);
            prop_assert!(y.gross.output >= 0.0 && y.gross.earnings >= 0.0 && y.gross.jobs >= 0.0 && y.gross.value_added >= 0.0);
        }
    }

    #[test]
    fn om_mean_is_benchmark(mw in 1.0f64..500.0, esc in 0.0f64..0.065, life in prop::sample::select(vec![25u32, 30])) {
        let spec = ProjectSpec { nameplate_ac: mw, life_years: life, ..Default::default() };
        let p = ExpenditureProfile::om_default();
        let s = om_schedule(&spec, &p, esc).unwrap();
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        prop_assert!(rel(mean, p.phase_total(spec.mw_dc())) < 1e-6);
    }
}

#[test]
fn phase_spending_closes() {
    for p in [
        ExpenditureProfile::installation_default(),
        ExpenditureProfile::om_default(),
        ExpenditureProfile::decommissioning_default(),
    ] {
        assert!((p.share_sum() - 1.0).abs() < 1e-9);
        let total = p.phase_total(125.0);
        let by_cat: f64 = p.categories.iter().map(|c| total * c.share).sum();
        assert!(rel(by_cat, total) < 1e-12);
    }
}

fn parcel(id: u64, sub: &str, county: &str, l: f64, w: f64, slope: f64) -> Parcel {
    Parcel {
        id,
        subdivision: sub.into(),
        county: county.into(),
        length_m: l,
        width_m: w,
        area_m2: l * w,
        slope_deg: slope,
        land_class: LandClass::Agricultural,
        urban: UrbanFlag::Clear,
    }
}

fn rule(status: ZoningStatus, road: f64, ppl: f64, nppl: f64) -> ZoningRule {
    ZoningRule {
        jurisdiction: "j".into(),
        status,
        road_ft: road,
        ppl_ft: ppl,
        nppl_ft: nppl,
        min_lot_ac: None,
        max_lot_ac: None,
        coverage_frac: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn developable_area_bounded_and_monotone(
        l in 10.0f64..3000.0, w in 10.0f64..3000.0, slope in 0.0f64..25.0,
        road in 0.0f64..500.0, ppl in 0.0f64..500.0, nppl in 0.0f64..500.0,
        which in 0usize..3, bump in 0.0f64..300.0,
        wind in any::<bool>(),
    ) {
        let tech = if wind { Technology::Wind } else { Technology::Solar };
        let p = parcel(1, "j", "c", l, w, slope);
        let shares = BoundaryShares::default();
        let r = rule(ZoningStatus::Allow, road, ppl, nppl);
        let a = developable_area(&p, &r, &shares, tech);
        prop_assert!(a >= 0.0 && a <= p.area_m2);
        let mut r2 = r.clone();
        match which {
            0 => r2.road_ft += bump,
            1 => r2.ppl_ft += bump,
            _ => r2.nppl_ft += bump,
        }
        prop_assert!(developable_area(&p, &r2, &shares, tech) <= a);
    }

    #[test]
    fn bans_and_silence_yield_nothing(l in 100.0f64..3000.0, w in 100.0f64..3000.0, silent in any::<bool>()) {
        let status = if silent { ZoningStatus::Silent } else { ZoningStatus::Ban };
        let r = ZoningRule { jurisdiction: "j".into(), ..rule(status, 0.0, 0.0, 0.0) };
        let caps = county_capacity(&[parcel(1, "j", "c", l, w, 0.0)], &[r], ZoningPreset::Current, &BoundaryShares::default());
        prop_assert_eq!(caps["c"].solar_mw, 0.0);
        prop_assert_eq!(caps["c"].wind_mw, 0.0);
    }

    #[test]
    fn capacity_adds_over_disjoint_parcels(dims in prop::collection::vec((50.0f64..2000.0, 50.0f64..2000.0, 0.0f64..20.0), 2..12), split in 1usize..11) {
        let parcels: Vec<Parcel> = dims.iter().enumerate().map(|(i, &(l, w, s))| parcel(i as u64, if i % 2 == 0 { "a" } else { "b" }, "c", l, w, s)).collect();
        let split = split.min(parcels.len() - 1);
        let rules = vec![
            ZoningRule { jurisdiction: "a".into(), ..rule(ZoningStatus::Allow, 100.0, 30.0, 20.0) },
            ZoningRule { jurisdiction: "b".into(), ..rule(ZoningStatus::Unzoned, 0.0, 0.0, 0.0) },
        ];
        let sh = BoundaryShares::default();
        for preset in [ZoningPreset::Current, ZoningPreset::Expanded, ZoningPreset::Ignore] {
            let all = county_capacity(&parcels, &rules, preset, &sh);
            let x = county_capacity(&parcels[..split], &rules, preset, &sh);
            let y = county_capacity(&parcels[split..], &rules, preset, &sh);
            let get = |m: &std::collections::BTreeMap<String, CountyCapacity>| m.get("c").copied().unwrap_or_default();
            prop_assert!((get(&all).solar_m2 - get(&x).solar_m2 - get(&y).solar_m2).abs() <= 1e-9 * get(&all).solar_m2.max(1.0));
            prop_assert!((get(&all).wind_m2 - get(&x).wind_m2 - get(&y).wind_m2).abs() <= 1e-9 * get(&all).wind_m2.max(1.0));
        }
    }

    #[test]
    fn unzoned_default_idempotent(road in 0.0f64..500.0, unzoned in any::<bool>()) {
        let status = if unzoned { ZoningStatus::Unzoned } else { ZoningStatus::Allow };
        let r = rule(status, road, 1.0, 2.0);
        let once = r.with_unzoned_defaults();
        prop_assert_eq!(once.with_unzoned_defaults(), once);
    }
}

fn seg(terrain: Terrain, miles: f64) -> TerrainSegment {
    TerrainSegment { terrain, miles, row_width_ft: 100.0 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn interconnect_cost_monotone(
        kv in prop::sample::select(Kv::ALL.to_vec()), double in any::<bool>(),
        miles in 0.0f64..50.0, dm in 0.0f64..10.0,
        mva in 1.0f64..1000.0, dv in 0.0f64..500.0,
        acres in prop::collection::vec(0.0f64..20.0, 4), grow in 0usize..4, da in 0.0f64..10.0,
    ) {
        let p = InterconnectParams::default();
        let vc = VoltageClass { kv, circuit: if double { Circuit::Double } else { Circuit::Single } };
        let segs = |extra: f64| -> Vec<TerrainSegment> {
            Terrain::ALL.iter().zip(&acres).enumerate().map(|(i, (&t, &m))| seg(t, m + if i == grow { extra } else { 0.0 })).collect()
        };
        let base = cost_stack(&p, vc, miles, mva, &segs(0.0)).unwrap();
        prop_assert!(cost_stack(&p, vc, miles + dm, mva, &segs(0.0)).unwrap().total >= base.total);
        prop_assert!(cost_stack(&p, vc, miles, mva + dv, &segs(0.0)).unwrap().total >= base.total);
        prop_assert!(cost_stack(&p, vc, miles, mva, &segs(da)).unwrap().total >= base.total);
        prop_assert!(base.total >= base.component_sum());
        prop_assert!(rel(base.annualized / base.total, p.crf()) < 1e-12);
    }
}

#[test]
fn transformer_table_symmetric() {
    let t = CostTables::default();
    for a in Kv::ALL {
        for b in Kv::ALL {
            assert_eq!(t.transformer_rate(a, b), t.transformer_rate(b, a));
        }
    }
    t.validate().unwrap();
}

proptest! {
    #[test]
    fn curves_are_sorted(pts in prop::collection::vec((1.0f64..500.0, 0.0f64..1e5, 0.0f64..0.3), 1..20)) {
        let supply: Vec<SupplyPoint> = pts.iter().enumerate().map(|(i, &(mw, c, _))| SupplyPoint {
            county: format!("c{i}"),
            tech: Technology::Solar,
            capacity_mw: mw,
            annualized_cost: c,
            capacity_factor: 0.2,
        }).collect();
        let s = supply_curve(&supply);
        prop_assert!(s.windows(2).all(|w| w[0].value <= w[1].value && w[0].to_mw == w[1].from_mw));
        let benefit: Vec<BenefitPoint> = pts.iter().enumerate().map(|(i, &(mw, v, gap))| BenefitPoint {
            county: format!("c{i}"),
            capacity_mw: mw,
            net_va_per_mw_yr: v * (1.0 - gap),
            gross_va_per_mw_yr: v,
        }).collect();
        let (net, gross) = benefit_curves(&benefit);
        prop_assert!(net.windows(2).all(|w| w[0].value >= w[1].value));
        prop_assert!(net.iter().zip(&gross).all(|(n, g)| n.value <= g.value && n.from_mw == g.from_mw));
    }
}
