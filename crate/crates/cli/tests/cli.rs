use std::path::Path;
use std::process::{Command, Output};

use oat_core::analytic::{optimal_time_pure, optimize_scalar, xi2_min_decoherence, OptimizerConfig, Sense};
use oat_core::DecoherenceRates;
use serde_json::Value;

fn oat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oat")).args(args).env_remove("OAT_SEED").output().expect("failed to launch oat")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
    comments: Vec<String>,
}

impl Csv {
    fn parse(text: &str) -> Self {
        let mut comments = Vec::new();
        let mut lines = Vec::new();
        for l in text.lines() {
            if let Some(c) = l.strip_prefix('#') {
                comments.push(c.trim().to_string());
            } else {
                lines.push(l);
            }
        }
        let header = lines[0].split(',').map(String::from).collect();
        let rows = lines[1..].iter().map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
        Csv { header, rows, comments }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let i = self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i]).collect()
    }
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn squeeze_curve_sweep_shape_and_theta_column() {
    let o = oat(&["squeeze-curve", "--gamma-par", "0.02", "--gamma-perp", "0.03", "--sweep", "t:0.1:10:50:log"]);
    let csv = Csv::parse(&stdout(&o));
    assert_eq!(csv.header, ["T", "Theta", "xi2_eq6", "xi2_pure_eq50", "effective_polarization", "theta_min_angle"]);
    assert_eq!(csv.rows.len(), 50);
    assert!(csv.rows.iter().flatten().all(|v| v.is_finite()));
    for (t, th) in csv.col("T").iter().zip(csv.col("Theta")) {
        assert!((th - 2.0 * 0.05 * t).abs() <= 1e-15 * th.max(1.0));
    }
    assert!(csv.comments.iter().any(|c| c.starts_with("sweep = t:0.1:10:50:log")));
}

#[test]
fn squeeze_curve_without_decay_matches_pure_column() {
    let o = oat(&["squeeze-curve", "--gamma-par", "0", "--gamma-perp", "0", "--sweep", "t:0.5:50:20:log"]);
    let csv = Csv::parse(&stdout(&o));
    assert_eq!(csv.col("xi2_eq6"), csv.col("xi2_pure_eq50"));
}

#[test]
fn dense_squeeze_curve_brackets_the_optimizer() {
    let (n, j, g) = (1000, 1e-4, 0.01);
    let o = oat(&["squeeze-curve", "--n", "1000", "--j", "1e-4", "--sweep", "t:1:100:400:log"]);
    let csv = Csv::parse(&stdout(&o));
    let (ts, xs) = (csv.col("T"), csv.col("xi2_eq6"));
    let k = (0..xs.len()).min_by(|&a, &b| xs[a].total_cmp(&xs[b])).unwrap();
    let rates = DecoherenceRates::new(g, g).unwrap();
    let best = optimize_scalar(
        |t| xi2_min_decoherence(n, 1.0, &rates, j, t).unwrap(),
        &OptimizerConfig::with_bracket(1.0, 100.0),
        Sense::Minimize,
    )
    .unwrap();
    assert!(ts[k - 1] <= best.x && best.x <= ts[k + 1]);
    assert!(best.value <= xs[k]);
}

#[test]
fn squeeze_curve_json_and_extra_sweep_column() {
    let o = oat(&["squeeze-curve", "--sweep", "n:10:1000:5:log", "--format", "json"]);
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["n"], 10);
    assert_eq!(rows[4]["n"], 1000);
    assert!(rows[0]["xi2_eq6"].is_f64());
    assert_eq!(v["parameters"]["command"], "squeeze-curve");
}

#[test]
fn optimal_point_decoherence_dominated_squeezing() {
    let v = json(&oat(&["optimal-point", "--n", "1000", "--j", "1e-5"]));
    let th = v["theta_star"].as_f64().unwrap();
    assert!((th - 0.6667).abs() <= 1e-4, "{th}");
    assert_eq!(v["regime_flag"], "decoherence_dominated");
    assert_eq!(v["paper_reference_constants"]["theta_min"], 0.6667);
    assert_eq!(v["paper_reference_constants"]["theta_max"], 0.727);
    let t = v["t_star"].as_f64().unwrap();
    assert!((t - th / 0.04).abs() < 1e-12 * t);
}

#[test]
fn optimal_point_decoherence_dominated_metrology() {
    let v = json(&oat(&["optimal-point", "--target", "metrology", "--n", "1000", "--j", "1e-5"]));
    let th = v["theta_star"].as_f64().unwrap();
    assert!((th - 0.727).abs() <= 1e-3, "{th}");
    assert!(v["sensitivity_star"].as_f64().unwrap() > 0.0);
    assert_eq!(v["regime_flag"], "decoherence_dominated");
}

#[test]
fn optimal_point_pure_squeezing_matches_closed_form() {
    let v = json(&oat(&["optimal-point", "--n", "1000", "--j", "1e-3", "--gamma-par", "0", "--gamma-perp", "0"]));
    let t = v["t_star"].as_f64().unwrap();
    let expected = optimal_time_pure(1000, 1.0, 1e-3).unwrap().t_star;
    assert!(((t - expected) / expected).abs() <= 1e-8);
}

#[test]
fn metrology_columns_linearity_and_peak() {
    let base = ["metrology", "--n", "1000", "--j", "1e-5", "--sweep", "t:0.01:100:1000:lin"];
    let one = Csv::parse(&stdout(&oat(&[&base[..], &["--b-y", "1e-6"]].concat())));
    let two = Csv::parse(&stdout(&oat(&[&base[..], &["--b-y", "2e-6"]].concat())));
    assert_eq!(one.header, ["Theta", "T", "snr_eq15", "sensitivity_eq16_derived_c", "sensitivity_eq16_paper_c"]);
    for (a, b) in one.col("snr_eq15").iter().zip(two.col("snr_eq15")) {
        assert_eq!(2.0 * a, b);
    }
    let (theta, sens) = (one.col("Theta"), one.col("sensitivity_eq16_derived_c"));
    assert!(sens[0] < 1e-3 * sens.iter().cloned().fold(0.0, f64::max));
    let k = (0..sens.len()).max_by(|&a, &b| sens[a].total_cmp(&sens[b])).unwrap();
    let step = theta[1] - theta[0];
    assert!((theta[k] - 0.727).abs() <= step, "{}", theta[k]);
}

#[test]
fn negative_signal_field_is_accepted() {
    let csv = Csv::parse(&stdout(&oat(&["metrology", "--b-y", "-1e-6"])));
    assert!(csv.col("snr_eq15")[0] < 0.0);
}

#[test]
fn verify_suites_pass_and_report() {
    let v = json(&oat(&["verify", "appendix_c", "--n", "6"]));
    assert_eq!(v["pass"], true);
    assert!(v["checks"][0]["measured"].as_f64().unwrap() <= 1e-10);

    let v = json(&oat(&["verify", "kraus", "--n", "6", "--p", "1"]));
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.iter().any(|n| n.starts_with("P<1")));

    let v = json(&oat(&["verify", "constants"]));
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_failure_exits_2_and_names_the_check() {
    let o = oat(&["verify", "factorization", "--n-range", "2..4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gap strictly decreasing"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn validation_errors_exit_1() {
    for args in [
        &["squeeze-curve", "--p", "1.5"][..],
        &["squeeze-curve", "--sweep", "t:1:0.5:10:lin"],
        &["squeeze-curve", "--not-a-flag"],
        &["metrology", "--gamma-par", "-0.1"],
        &["verify", "lindblad", "--n", "13"],
        &["verify", "nonsense"],
        &["inhomo-mc", "--kappa", "-1"],
        &["inhomo-mc", "--sweep", "n:2:4:2:lin"],
        &["optimal-point", "--config", "/nonexistent/config.toml"],
    ] {
        assert_eq!(oat(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    assert_eq!(oat(&["--help"]).status.code(), Some(0));
    assert_eq!(oat(&["squeeze-curve", "--help"]).status.code(), Some(0));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 200\nj = 2e-5\ngamma_par = 0.02\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = json(&oat(&["optimal-point", "--config", cfg]));
    assert_eq!(from_file["parameters"]["n"], 200);
    assert_eq!(from_file["parameters"]["gamma-par"], 0.02);
    let overridden = json(&oat(&["optimal-point", "--config", cfg, "--n", "300"]));
    assert_eq!(overridden["parameters"]["n"], 300);
    assert_eq!(overridden["parameters"]["j"], 2e-5);

    std::fs::write(dir.path().join("bad.toml"), "n = 10\nunknown = 3\n").unwrap();
    let o = oat(&["optimal-point", "--config", dir.path().join("bad.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn inhomo_mc_without_disorder() {
    let v = json(&oat(&["inhomo-mc", "--kappa", "0", "--samples", "10", "--format", "json"]));
    assert_eq!(v["stderr"], 0.0);
    let (m, a) = (v["mean"].as_f64().unwrap(), v["analytic_eq40"].as_f64().unwrap());
    assert!((m - a).abs() <= 1e-12 * a);
    assert_eq!(v["z_score"], 0.0);
}

#[test]
fn inhomo_mc_csv_and_summary_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mc.csv");
    let o = oat(&[
        "inhomo-mc",
        "--n",
        "8",
        "--kappa",
        "0.2",
        "--samples",
        "64",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = Csv::parse(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(csv.header, ["sample_index", "xi2"]);
    assert_eq!(csv.rows.len(), 64);
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("mc.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 3);
    assert_eq!(summary["n_rejected"], 0);
    assert!(summary["suppression_factors"]["exp_factor_pair"].as_f64().unwrap() < 1.0);
    let mean = csv.col("xi2").iter().sum::<f64>() / 64.0;
    assert!((mean - summary["mean"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_oat"));
        c.args(["inhomo-mc", "--n", "6", "--kappa", "0.2", "--samples", "20", "--format", "json"]).args(extra);
        match env {
            Some(s) => c.env("OAT_SEED", s),
            None => c.env_remove("OAT_SEED"),
        };
        json(&c.output().unwrap())
    };
    assert_eq!(run(Some("17"), &[])["seed"], 17);
    assert_eq!(run(None, &[])["seed"], 0);
    assert_eq!(run(Some("17"), &["--seed", "5"])["seed"], 5);
    assert_eq!(run(Some("17"), &[])["mean"], run(None, &["--seed", "17"])["mean"]);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let args = ["squeeze-curve", "--sweep", "t:1:3:4:lin"];
    let printed = stdout(&oat(&args));
    let o = oat(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(Path::new(&out)).unwrap(), printed);
}
