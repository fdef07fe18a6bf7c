use solarsite::config::default_data_dir;
use solarsite::data::{load_dataset, validate_data, Finding};
use solarsite::pipeline::{build_curves, run_sweep, solve_weight};
use solarsite::{demo, output, ScenarioConfig};
use std::path::Path;
use std::process::Command;

fn copy_demo(to: &Path) {
    for e in std::fs::read_dir(default_data_dir()).unwrap() {
        let e = e.unwrap();
        std::fs::copy(e.path(), to.join(e.file_name())).unwrap();
    }
}

fn edit(path: &Path, f: impl Fn(String) -> String) {
    let s = std::fs::read_to_string(path).unwrap();
    std::fs::write(path, f(s)).unwrap();
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_solarsite"))
}

fn mentions(findings: &[Finding], file: &str, text: &str) -> bool {
    findings.iter().any(|f| f.file == file && f.msg.contains(text))
}

#[test]
fn bundled_data_is_clean_and_reproducible() {
    assert_eq!(validate_data(&default_data_dir()), vec![]);
    let dir = tempfile::tempdir().unwrap();
    demo::generate_demo(dir.path(), 42).unwrap();
    let mut names: Vec<_> = std::fs::read_dir(default_data_dir()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 11);
    for n in names {
        let a = std::fs::read(default_data_dir().join(&n)).unwrap();
        let b = std::fs::read(dir.path().join(&n)).unwrap();
        assert!(a == b, "{n:?} differs from a fresh seed-42 generation");
    }
}

#[test]
fn broken_share_closure_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    copy_demo(dir.path());
    edit(&dir.path().join("expenditure.csv"), |s| {
        s.replace("installation,EPC Margins,0.045,", "installation,EPC Margins,0.055,")
    });
    let findings = validate_data(dir.path());
    assert!(mentions(&findings, "expenditure.csv", "installation"), "{findings:?}");

    let out = bin().args(["--data"]).arg(dir.path()).arg("validate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("expenditure.csv"));
}

#[test]
fn missing_multiplier_row_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    copy_demo(dir.path());
    edit(&dir.path().join("multipliers.csv"), |s| {
        s.lines()
            .filter(|l| !l.starts_with("Ohio,large,Construction,"))
            .map(|l| format!("{l}\n"))
            .collect()
    });
    let findings = validate_data(dir.path());
    assert!(findings.iter().any(|f| f.file == "multipliers.csv" && f.msg.contains("Construction")), "{findings:?}");
    assert!(load_dataset(dir.path()).is_err());
}

#[test]
fn infeasible_scenario_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    copy_demo(dir.path());
    // No new zero-carbon builds and a zero cap: the land-limited renewables cannot cover load.
    edit(&dir.path().join("system.toml"), |s| {
        let s = &s[..s.find("[[new_techs]]").unwrap()];
        format!("new_techs = []\n{}", s.replace("final_fraction = 0.2", "final_fraction = 0.0"))
    });
    let out_dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("--data")
        .arg(dir.path())
        .arg("--out")
        .arg(out_dir.path())
        .args(["solve", "--weight", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn curves_subcommand_writes_one_step_per_county() {
    let out_dir = tempfile::tempdir().unwrap();
    let out = bin().arg("--out").arg(out_dir.path()).arg("curves").output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let net = std::fs::read_to_string(out_dir.path().join(output::BENEFIT_NET_CSV)).unwrap();
    assert_eq!(net.lines().count(), 1 + 12);
    assert!(net.starts_with("county,from_gw,cumulative_gw,value\n"));
    let svg = std::fs::read_to_string(out_dir.path().join(output::CURVES_SVG)).unwrap();
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
}

#[test]
fn sweep_rows_match_standalone_runs_and_plots_are_stable() {
    let cfg = ScenarioConfig {
        weights: vec![0.2],
        ..Default::default()
    };
    let data = load_dataset(&cfg.data_dir).unwrap();
    let sweep = run_sweep(&cfg, &data).unwrap();
    let rows = &sweep.report.rows;
    assert_eq!(rows.len(), 2);

    // Bundled demo: moving toward local benefit gains benefit at under 1% extra cost.
    assert!(rows[1].delta_benefit > 0.0);
    assert!(rows[1].delta_cost_pct >= 0.0 && rows[1].delta_cost_pct < 1.0);
    assert!((rows[1].solar_mw - rows[0].solar_mw).abs() < 1e-6);

    let curves = build_curves(&data, cfg.preset).unwrap();
    let alone = solve_weight(&cfg, &data, &curves, 0.2).unwrap().solution;
    let swept = &sweep.solutions[1];
    assert!((alone.total_cost / swept.total_cost - 1.0).abs() < 1e-9);
    assert!((alone.total_benefit / swept.total_benefit - 1.0).abs() < 1e-9);
    for (c, mw) in swept.solar_by_county() {
        assert!((alone.solar_by_county()[&c] - mw).abs() < 1e-6, "{c}");
    }

    let dir = tempfile::tempdir().unwrap();
    output::write_report(dir.path(), &sweep.report, &sweep.solutions).unwrap();
    let first = std::fs::read(dir.path().join(output::INVESTMENT_SVG)).unwrap();
    let delta = std::fs::read(dir.path().join(output::STATE_DELTA_SVG)).unwrap();
    let out = bin().arg("--out").arg(dir.path()).arg("plot").output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(dir.path().join(output::INVESTMENT_SVG)).unwrap(), first);
    assert_eq!(std::fs::read(dir.path().join(output::STATE_DELTA_SVG)).unwrap(), delta);
    assert_eq!(output::read_report(&dir.path().join(output::REPORT_JSON)).unwrap(), sweep.report);
}
