use std::process::{Command, Output};

fn ballplate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballplate")).args(args).output().expect("binary runs")
}

#[test]
fn identical_runs_give_identical_bytes() {
    for args in [
        &["neumann", "--sigma", "0.37", "--count", "20", "--lambda-max", "3000"][..],
        &["dirichlet", "--dim", "3", "--count", "6", "--format", "json", "--lambda-max", "5000"],
        &["figure1", "--l-max", "4", "--lambda-max", "200"],
    ] {
        let a = ballplate(args);
        let b = ballplate(args);
        assert!(a.status.success(), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.contains(&b'\r'));
    }
}

#[test]
fn verify_passes_in_two_dimensions() {
    let out = ballplate(&["verify", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check,status,worst_ratio,location\n"));
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(1) == Some("pass")));
}

#[test]
fn bad_config_exit_code() {
    let out = ballplate(&["neumann", "--sigma", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);
}

#[test]
fn figure_rows_stay_in_window() {
    let out = ballplate(&["figure1", "--l-max", "9"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,l,branch,sigma,lambda"));
    let mut seen = [false; 10];
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let l: usize = f[1].parse().unwrap();
        let sigma: f64 = f[3].parse().unwrap();
        let lambda: f64 = f[4].parse().unwrap();
        assert!(lambda > 0.0 && lambda < 500.0);
        assert!((0.01..=0.99).contains(&sigma));
        seen[l] = true;
    }
    assert!(seen.iter().all(|&s| s));
}
