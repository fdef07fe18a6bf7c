//! Solver checks against independent oracles: brute-force vertex enumeration, weak duality,
//! cost scaling and MPS round trips.
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solarsite_lp::{export_mps, parse_mps, solve, LpStatus, Pricing, Sense, SolverOptions, StandardFormLP, VarId};

/// Random boxed LP with a known feasible point, so it is feasible and bounded.
fn random_lp(rng: &mut impl Rng, n: usize, m: usize) -> StandardFormLP {
    let mut lp = StandardFormLP::new("rand");
    let vars: Vec<VarId> = (0..n)
        .map(|j| lp.add_var(format!("x{j}"), rng.gen_range(-10.0..10.0), 0.0, 10.0))
        .collect();
    let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
    for i in 0..m {
        let mut coeffs: Vec<(VarId, f64)> = Vec::new();
        for &v in &vars {
            if rng.gen_bool(0.7) {
                coeffs.push((v, rng.gen_range(-5.0..5.0)));
            }
        }
        let act: f64 = coeffs.iter().map(|&(v, a)| a * x0[v.0]).sum();
        let (sense, rhs) = match rng.gen_range(0..6) {
            0 => (Sense::Eq, act),
            1 | 2 => (Sense::Ge, act - rng.gen_range(0.0..5.0)),
            _ => (Sense::Le, act + rng.gen_range(0.0..5.0)),
        };
        lp.add_row(format!("r{i}"), coeffs, sense, rhs);
    }
    lp
}

fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                if f != 0.0 {
                    for k in c..n {
                        a[r][k] -= f * a[c][k];
                    }
                    b[r] -= f * b[c];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Minimum objective over all basic feasible solutions.
fn vertex_enumeration(lp: &StandardFormLP) -> Option<f64> {
    let n = lp.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for r in &lp.rows {
        let mut a = vec![0.0; n];
        for &(v, c) in &r.coeffs {
            a[v.0] = c;
        }
        planes.push((a, r.rhs));
    }
    for (j, v) in lp.vars.iter().enumerate() {
        for b in [v.lower, v.upper] {
            let mut a = vec![0.0; n];
            a[j] = 1.0;
            planes.push((a, b));
        }
    }
    let mut best: Option<f64> = None;
    let mut pick = Vec::with_capacity(n);
    fn rec(
        start: usize,
        pick: &mut Vec<usize>,
        planes: &[(Vec<f64>, f64)],
        lp: &StandardFormLP,
        best: &mut Option<f64>,
    ) {
        let n = lp.num_vars();
        if pick.len() == n {
            let a = pick.iter().map(|&k| planes[k].0.clone()).collect();
            let b = pick.iter().map(|&k| planes[k].1).collect();
            if let Some(x) = solve_square(a, b) {
                if lp.max_violation(&x) < 1e-7 {
                    let f = lp.objective(&x);
                    if best.map_or(true, |v| f < v) {
                        *best = Some(f);
                    }
                }
            }
            return;
        }
        for k in start..planes.len() {
            if planes.len() - k < n - pick.len() {
                break;
            }
            pick.push(k);
            rec(k + 1, pick, planes, lp, best);
            pick.pop();
        }
    }
    rec(0, &mut pick, &planes, lp, &mut best);
    best
}

#[test]
fn matches_vertex_enumeration_on_random_lps() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..200 {
        let lp = random_lp(&mut rng, 6, 6);
        let want = vertex_enumeration(&lp).expect("feasible by construction");
        for pricing in [Pricing::Dantzig, Pricing::Bland] {
            let r = solve(&lp, &SolverOptions { pricing, ..Default::default() }).unwrap();
            assert_eq!(r.status, LpStatus::Optimal, "lp {k}");
            assert!(lp.max_scaled_violation(&r.x) < 1e-7, "lp {k}");
            assert!(
                (r.objective - want).abs() <= 1e-6 * (1.0 + want.abs()),
                "lp {k} ({pricing:?}): simplex {} vs enumeration {want}",
                r.objective
            );
        }
    }
}

#[test]
fn weak_duality_certificate_from_final_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let lp = random_lp(&mut rng, 8, 6);
        let r = solve(&lp, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        // Lagrangian bound: b'y + sum_j min over the box of d_j x_j.
        let mut bound: f64 = lp.rows.iter().zip(&r.duals).map(|(row, y)| row.rhs * y).sum();
        for (v, d) in lp.vars.iter().zip(&r.reduced_costs) {
            bound += if *d >= 0.0 { d * v.lower } else { d * v.upper };
        }
        // Dual sign feasibility for the row senses.
        for (row, y) in lp.rows.iter().zip(&r.duals) {
            match row.sense {
                Sense::Le => assert!(*y <= 1e-7),
                Sense::Ge => assert!(*y >= -1e-7),
                Sense::Eq => {}
            }
        }
        assert!(bound <= r.objective + 1e-6 * (1.0 + r.objective.abs()));
        assert!((bound - r.objective).abs() <= 1e-6 * (1.0 + r.objective.abs()));
    }
}

#[test]
fn infeasible_systems_are_reported() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let mut lp = random_lp(&mut rng, 5, 4);
        let coeffs: Vec<(VarId, f64)> = (0..5).map(|j| (VarId(j), 1.0)).collect();
        lp.add_row("too_big", coeffs, Sense::Ge, 51.0);
        let r = solve(&lp, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }
}

#[test]
fn transportation_problem_with_many_degenerate_pivots() {
    // 10 x 10 balanced transport, unit supplies/demands: highly degenerate assignment polytope.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 10;
    let mut lp = StandardFormLP::new("assign");
    let mut x = vec![vec![VarId(0); n]; n];
    for (i, row) in x.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = lp.add_var(format!("x{i}_{j}"), rng.gen_range(1..20) as f64, 0.0, f64::INFINITY);
        }
    }
    for i in 0..n {
        lp.add_row(format!("s{i}"), (0..n).map(|j| (x[i][j], 1.0)), Sense::Eq, 1.0);
        lp.add_row(format!("d{i}"), (0..n).map(|j| (x[j][i], 1.0)), Sense::Eq, 1.0);
    }
    let a = solve(&lp, &SolverOptions::default()).unwrap();
    let b = solve(&lp, &SolverOptions { pricing: Pricing::Bland, ..Default::default() }).unwrap();
    assert_eq!(a.status, LpStatus::Optimal);
    assert!((a.objective - b.objective).abs() < 1e-9);
    assert!(lp.max_violation(&a.x) < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cost_scaling_keeps_argmin(seed in any::<u64>(), k in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = random_lp(&mut rng, 6, 5);
        let mut scaled = lp.clone();
        for v in &mut scaled.vars {
            v.cost *= k;
        }
        let a = solve(&lp, &SolverOptions::default()).unwrap();
        let b = solve(&scaled, &SolverOptions::default()).unwrap();
        prop_assert_eq!(a.status, LpStatus::Optimal);
        prop_assert!((b.objective - k * a.objective).abs() <= 1e-7 * (1.0 + (k * a.objective).abs()));
        // The optimum may be a face; the scaled optimum must still be optimal for the original.
        prop_assert!((lp.objective(&b.x) - a.objective).abs() <= 1e-7 * (1.0 + a.objective.abs()));
    }

    #[test]
    fn mps_round_trip_is_identical(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lp = random_lp(&mut rng, 7, 6);
        lp.set_bounds(VarId(1), f64::NEG_INFINITY, 4.0);
        lp.set_bounds(VarId(2), -3.5, f64::INFINITY);
        lp.set_bounds(VarId(3), 2.0, 2.0);
        lp.set_bounds(VarId(4), f64::NEG_INFINITY, f64::INFINITY);
        let text = export_mps(&lp, "rand").unwrap();
        let back = parse_mps(&text).unwrap();
        prop_assert_eq!(back.num_vars(), lp.num_vars());
        for (a, b) in lp.vars.iter().zip(&back.vars) {
            prop_assert_eq!((a.cost, a.lower, a.upper), (b.cost, b.lower, b.upper));
        }
        for (a, b) in lp.rows.iter().zip(&back.rows) {
            prop_assert_eq!(&a.coeffs, &b.coeffs);
            prop_assert_eq!((a.sense, a.rhs), (b.sense, b.rhs));
        }
        let r1 = solve(&lp, &SolverOptions::default()).unwrap();
        let r2 = solve(&back, &SolverOptions::default()).unwrap();
        prop_assert_eq!(r1.status, r2.status);
        if r1.status == LpStatus::Optimal {
            prop_assert!((r1.objective - r2.objective).abs() <= 1e-9 * (1.0 + r1.objective.abs()));
        }
    }
}
