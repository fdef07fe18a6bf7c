use solarsite_core::ce::*;
use solarsite_core::land::Technology;
use solarsite_core::supply::{BenefitPoint, SupplyPoint};
use solarsite_lp::SolverOptions;

fn series(f: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    (0..HOURS_PER_YEAR).map(|h| f(h / 24, h % 24)).collect()
}

fn solar_cf(scale: f64) -> Vec<f64> {
    series(|d, h| {
        let season = 1.0 + 0.3 * ((d as f64 - 172.0) / 365.0 * std::f64::consts::TAU).cos();
        let x = (h as f64 - 12.0) / 6.0;
        (scale * season * (1.0 - x * x)).clamp(0.0, 1.0)
    })
}

fn county(name: &str, region: &str, scale: f64) -> CountyResource {
    CountyResource {
        name: name.into(),
        state: region.into(),
        region: region.into(),
        solar_cf: solar_cf(scale),
        wind_cf: series(|d, h| 0.25 + 0.15 * (((d * 7 + h) % 11) as f64 / 10.0 - 0.5)),
    }
}

fn gas(region: &str, mw: f64, vom: f64) -> ExistingUnit {
    ExistingUnit {
        region: region.into(),
        name: format!("gas_{region}"),
        capacity_mw: mw,
        heat_rate: 7.0,
        fuel_cost: 3.0,
        vom,
        emission_rate: 0.4,
        retire_year: None,
    }
}

fn system() -> SystemData {
    let load = |base: f64| series(|d, h| base * (1.0 + 0.2 * ((h as f64 - 17.0) / 24.0 * std::f64::consts::TAU).cos() + 0.1 * ((d % 7) as f64 / 6.0)));
    SystemData {
        regions: vec!["N".into(), "S".into()],
        demand: vec![load(300.0), load(200.0)],
        demand_growth: 0.01,
        lines: vec![Line {
            from: "N".into(),
            to: "S".into(),
            capacity_mw: 100.0,
            expansion_cost_per_mw_mile: 2_000.0,
            length_mi: 80.0,
        }],
        existing: vec![gas("N", 500.0, 2.0), gas("S", 350.0, 4.0)],
        new_techs: vec![NewTech {
            name: "ngcc".into(),
            capex: 1.0e6,
            fom: 15_000.0,
            heat_rate: 6.5,
            fuel_cost: 3.0,
            vom: 2.0,
            emission_rate: 0.35,
            life_years: 30,
        }, NewTech {
            name: "nuclear".into(),
            capex: 6.0e6,
            fom: 120_000.0,
            heat_rate: 10.4,
            fuel_cost: 0.7,
            vom: 3.0,
            emission_rate: 0.0,
            life_years: 40,
        }],
        storage: Storage::default(),
        counties: vec![county("A", "N", 0.9), county("B", "N", 0.8), county("C", "S", 0.85)],
        co2_base: 1.8e6,
        co2_base_year: 2020,
        co2_final_fraction: 0.2,
        co2_final_year: 2040,
        reserve_margin: 0.15,
        invest_rate: 0.054,
        transmission_life: 40,
    }
}

fn supply(k: f64) -> Vec<SupplyPoint> {
    let solar = [("A", 60_000.0), ("B", 62_000.0), ("C", 61_000.0)].map(|(c, cost)| SupplyPoint {
        county: c.into(),
        tech: Technology::Solar,
        capacity_mw: 400.0,
        annualized_cost: cost * k,
        capacity_factor: 0.2,
    });
    let wind = [("A", 110_000.0), ("C", 115_000.0)].map(|(c, cost)| SupplyPoint {
        county: c.into(),
        tech: Technology::Wind,
        capacity_mw: 300.0,
        annualized_cost: cost * k,
        capacity_factor: 0.25,
    });
    solar.into_iter().chain(wind).collect()
}

fn benefit(k: f64) -> Vec<BenefitPoint> {
    [("A", 20_000.0), ("B", 30_000.0), ("C", 26_000.0)]
        .iter()
        .map(|&(c, v)| BenefitPoint {
            county: c.into(),
            capacity_mw: 400.0,
            net_va_per_mw_yr: v * k,
            gross_va_per_mw_yr: v * k * 1.15,
        })
        .collect()
}

fn solve(p: &CEProblem, sys: &SystemData, k: f64) -> CESolution {
    solve_ce(p, sys, &supply(k), &benefit(k), &SolverOptions::default()).unwrap().1
}

fn fixed_levels(base: &CESolution) -> Vec<f64> {
    base.periods.iter().map(|p| p.solar_mw).collect()
}

#[test]
fn weighted_sum_is_pareto_monotone() {
    let sys = system();
    let base = solve(&CEProblem::default(), &sys, 1.0);
    assert!(base.total_solar_mw() > 1.0, "base builds solar: {}", base.total_solar_mw());
    let fix = fixed_levels(&base);
    let mut prev: Option<CESolution> = None;
    for w in [1.0, 0.8, 0.6, 0.4, 0.2, 0.0] {
        let p = CEProblem {
            weight_cost: w,
            fix_total_solar: Some(fix.clone()),
            ..Default::default()
        };
        let sol = solve(&p, &sys, 1.0);
        assert!(sol.max_violation <= RESIDUAL_TOL);
        for (a, b) in sol.periods.iter().zip(&fix) {
            assert!((a.solar_mw - b).abs() <= 1e-6 * b.max(1.0));
        }
        // The w = 1 cost is a lower bound for every weight.
        assert!(sol.total_cost >= base.total_cost * (1.0 - 1e-9));
        if let Some(q) = &prev {
            assert!(sol.total_cost >= q.total_cost * (1.0 - 1e-9), "w={w}");
            assert!(sol.total_benefit >= q.total_benefit * (1.0 - 1e-9), "w={w}");
        }
        for p in &sol.periods {
            assert!(p.emissions <= p.emissions_cap * (1.0 + 1e-6));
        }
        prev = Some(sol);
    }
    let last = prev.unwrap();
    // B has the highest benefit and goes first once benefit counts.
    assert!(last.solar_by_county().get("B").copied().unwrap_or(0.0) > base.solar_by_county().get("B").copied().unwrap_or(0.0));
}

#[test]
fn benefit_component_matches_accounting() {
    let sys = system();
    let base = solve(&CEProblem::default(), &sys, 1.0);
    let p = CEProblem {
        weight_cost: 0.4,
        fix_total_solar: Some(fixed_levels(&base)),
        ..Default::default()
    };
    let sol = solve(&p, &sys, 1.0);
    let va = |c: &str| benefit(1.0).iter().find(|b| b.county == c).unwrap().net_va_per_mw_yr;
    // Cumulative MW in each period times net value added.
    let n = p.periods.len();
    let expected: f64 = sol
        .solar_builds
        .iter()
        .map(|b| {
            let from = p.periods.iter().position(|&y| y == b.year).unwrap();
            b.mw * va(&b.county) * (n - from) as f64
        })
        .sum();
    assert!((sol.total_benefit - expected).abs() <= 1e-9 * expected.max(1.0));
    assert!((sol.objective - (0.4 * sol.total_cost - 0.6 * sol.total_benefit)).abs() <= 1e-9 * sol.total_cost);
}

#[test]
fn currency_rescaling_keeps_the_plan() {
    let mut sys = system();
    let base = solve(&CEProblem::default(), &sys, 1.0);
    let fix = fixed_levels(&base);
    let p = CEProblem {
        weight_cost: 0.6,
        fix_total_solar: Some(fix),
        ..Default::default()
    };
    let a = solve(&p, &sys, 1.0);
    let k = 4.0;
    for u in &mut sys.existing {
        u.fuel_cost *= k;
        u.vom *= k;
    }
    for t in &mut sys.new_techs {
        t.capex *= k;
        t.fom *= k;
        t.fuel_cost *= k;
        t.vom *= k;
    }
    sys.storage.capex *= k;
    sys.storage.fom *= k;
    for l in &mut sys.lines {
        l.expansion_cost_per_mw_mile *= k;
    }
    let b = solve(&p, &sys, k);
    assert!((b.objective - k * a.objective).abs() <= 1e-7 * b.objective.abs());
    assert!((b.total_cost - k * a.total_cost).abs() <= 1e-7 * b.total_cost);
    let (sa, sb) = (a.solar_by_county(), b.solar_by_county());
    assert_eq!(sa.keys().collect::<Vec<_>>(), sb.keys().collect::<Vec<_>>());
    for (c, mw) in &sa {
        assert!((mw - sb[c]).abs() <= 1e-6 * mw.max(1.0), "{c}");
    }
}

#[test]
fn emissions_path_holds_in_every_period() {
    let sys = system();
    let sol = solve(&CEProblem::default(), &sys, 1.0);
    let last = sol.periods.last().unwrap();
    assert_eq!(last.year, 2040);
    assert!((last.emissions_cap - 0.2 * sys.co2_base).abs() < 1e-6);
    for p in &sol.periods {
        assert!(p.emissions <= p.emissions_cap * (1.0 + 1e-6), "{}", p.year);
    }
}
