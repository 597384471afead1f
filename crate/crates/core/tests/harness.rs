use std::path::PathBuf;

use mww_core::harness::*;

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn small() -> Scenario {
    let mut s = Scenario::new(vec![0.2, 0.3], 0.4, 256);
    s.reps = 24;
    s.seed = 9;
    s.keep_raw = true;
    s
}

#[test]
fn report_is_bit_reproducible() {
    let a = run_scenario(&small()).unwrap();
    let b = run_scenario(&small()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_csv(), b.to_csv());
    let mut other = small();
    other.seed = 10;
    assert_ne!(run_scenario(&other).unwrap().quantities, a.quantities);
}

#[test]
fn rmse_matches_raw_replications() {
    let r = run_scenario(&small()).unwrap();
    let raw = r.raw.as_ref().unwrap();
    let ok: Vec<_> = raw.iter().filter(|o| o.failure.is_none()).collect();
    assert_eq!(ok.len() + r.failures, r.replications);
    for (q, stats) in r.quantities.iter().enumerate() {
        let mse = ok
            .iter()
            .map(|o| (o.values[q] - stats.truth).powi(2))
            .sum::<f64>()
            / ok.len() as f64;
        assert!(
            (mse.sqrt() - stats.rmse).abs() < 1e-12,
            "{}",
            stats.quantity
        );
        assert!((stats.rmse.powi(2) - stats.bias.powi(2) - stats.std.powi(2)).abs() < 1e-12);
    }
    let ratio = r.quantities[0].ratio_mu.unwrap();
    let uni = r.quantities[0].univariate_rmse.unwrap();
    assert!((ratio * uni - r.quantities[0].rmse).abs() < 1e-12);
}

#[test]
fn single_replication_has_zero_spread() {
    let mut s = small();
    s.reps = 1;
    let r = run_scenario(&s).unwrap();
    for q in &r.quantities {
        assert_eq!(q.std, 0.0);
        assert_eq!(q.rmse, q.bias.abs());
    }
}

#[test]
fn report_json_round_trip() {
    let r = run_scenario(&small()).unwrap();
    assert_eq!(MCReport::from_json(&r.to_json()).unwrap(), r);
    let csv = r.to_csv();
    assert!(csv
        .lines()
        .any(|l| l.starts_with("quantity,truth,mean,bias,std,rmse")));
    assert!(csv.lines().any(|l| l.starts_with("\"rho[0,1]\",0.4,")));
}

#[test]
fn shipped_scenarios_load() {
    for entry in std::fs::read_dir(scenario_dir()).unwrap() {
        let path = entry.unwrap().path();
        let s = Scenario::load(&path).unwrap();
        s.validate().unwrap();
        assert_eq!(Scenario::from_toml_str(&s.to_toml_string()).unwrap(), s);
    }
}

#[test]
fn clamped_scales_are_recorded() {
    let s = Scenario::load(&scenario_dir().join("stationary_bivariate.cfg")).unwrap();
    let mut s = s;
    s.reps = 2;
    let r = run_scenario(&s).unwrap();
    assert_eq!(r.scales.j1, 6);
    assert_eq!(r.scales.requested_j1, Some(9));
}
