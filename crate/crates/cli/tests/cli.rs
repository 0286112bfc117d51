use std::path::Path;
use std::process::{Command, Output};

fn jelsurvey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jelsurvey"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL_CONFIG: &str = "\
N = 200
n_list = 20
rho_list = 0.5
B_reps = 20
kernel_name = variance
master_seed = 3
";

#[test]
fn simulate_writes_csv_and_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "sim.cfg", SMALL_CONFIG);
    let out = jelsurvey(&["simulate", "--config", &config]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.starts_with("rho,n,method,cp,l,u,al,lb,failed\n"));
    assert_eq!(text.lines().count(), 5);

    let report = dir.path().join("report.md");
    let out = jelsurvey(&[
        "simulate",
        "--config",
        &config,
        "--format",
        "markdown",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let md = std::fs::read_to_string(report).unwrap();
    assert!(md.starts_with("| rho | n | CI |"));

    // Same config, same numbers.
    let again = jelsurvey(&["simulate", "--config", &config]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn simulate_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "bad.cfg", "N = 200\nthreads = 8\n");
    let out = jelsurvey(&["simulate", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
    let out = jelsurvey(&["simulate", "--config", "/nonexistent/sim.cfg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_small_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.csv", "y,d\n1,2\n2,2\n3,2\n");
    let out = jelsurvey(&[
        "analyze", "--input", &input, "--y", "y", "--d", "d", "--kernel", "variance", "--method",
        "JEL", "--level", "0.95",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("point: 1\n"), "{text}");
    for key in ["lower: ", "upper: ", "deff: ", "n_eff: "] {
        assert!(text.contains(key));
    }

    let out = jelsurvey(&[
        "analyze", "--input", &input, "--y", "y", "--d", "d", "--kernel", "variance", "--method",
        "JEL_w", "--level", "0.95",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = jelsurvey(&[
        "analyze", "--input", &input, "--y", "y", "--d", "d", "--kernel", "gini", "--method",
        "JEL", "--level", "0.95",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_reports_numerical_failure() {
    // Every unit has the same x, so the regression for JEL_d is singular.
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.csv", "y,d,x\n1,2,1\n2,2,1\n4,2,1\n3,2,1\n");
    let out = jelsurvey(&[
        "analyze", "--input", &input, "--y", "y", "--d", "d", "--x", "x", "--xbar", "1.5",
        "--kernel", "pwm", "--method", "JEL_d", "--level", "0.95",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn sample_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let mut pop = String::from("unit,y,x,pi\n");
    for i in 1..=60 {
        let x = 1.0 + (i % 7) as f64 * 0.5;
        let y = 2.0 + x + ((i * 37) % 11) as f64 * 0.3;
        pop.push_str(&format!("{i},{y},{x},0\n"));
    }
    let pop_path = write(dir.path(), "pop.csv", &pop);
    let x_bar: f64 = (1..=60).map(|i| 1.0 + (i % 7) as f64 * 0.5).sum::<f64>() / 60.0;

    for design in ["sampford", "srswor"] {
        let out = jelsurvey(&[
            "sample",
            "--population",
            &pop_path,
            "--n",
            "15",
            "--seed",
            "4",
            "--design",
            design,
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let text = stdout(&out);
        assert!(text.starts_with("unit,y,x,pi,d"));
        assert_eq!(text.lines().count(), 16);
        let again = jelsurvey(&[
            "sample",
            "--population",
            &pop_path,
            "--n",
            "15",
            "--seed",
            "4",
            "--design",
            design,
        ]);
        assert_eq!(stdout(&again), text);

        let sample_path = write(dir.path(), &format!("{design}.csv"), &text);
        let xbar = x_bar.to_string();
        let out = jelsurvey(&[
            "analyze",
            "--input",
            &sample_path,
            "--y",
            "y",
            "--d",
            "d",
            "--w",
            "w",
            "--x",
            "x",
            "--xbar",
            &xbar,
            "--kernel",
            "pwm",
            "--method",
            "JEL_w",
            "--level",
            "0.9",
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(stdout(&out).contains("method: JEL_w"));
    }

    let out = jelsurvey(&[
        "sample",
        "--population",
        &pop_path,
        "--n",
        "15",
        "--seed",
        "4",
        "--design",
        "poisson",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
