use lyness_core::adherence::classify;
use lyness_core::exact::{int, rat};
use lyness_core::lyness::{fixed_point, orbit, Params, Point, StartPoint};
use lyness_core::rotation::{winding_bounds, WindingOptions};
use std::process::{Command, Output};

fn lyness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lyness")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = lyness(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid json")
}

const WORKED: [&str; 10] = ["--k", "2", "--a", "3", "--b", "2", "--x0", "1", "--y0", "1"];

fn with(cmd: &str, extra: &[&'static str]) -> Vec<&'static str> {
    let cmd: &'static str = Box::leak(cmd.to_string().into_boxed_str());
    [&[cmd][..], &WORKED[..], extra].concat()
}

#[test]
fn rotation_prints_the_enclosure() {
    let o = lyness(&with("rotation", &["--n", "27"]));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "rho in (4/7, 15/26)\n");
}

#[test]
fn invariant_prints_the_exact_level() {
    let o = lyness(&with("invariant", &[]));
    assert_eq!(stdout(&o), "34\n");
}

#[test]
fn classify_counts_three_intervals() {
    let o = lyness(&["classify", "--k", "3", "--a", "1/2", "--b", "2", "--c", "3", "--h", "319/20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("3 intervals"));
}

#[test]
fn exit_codes() {
    assert_eq!(lyness(&["invariant", "--b", "2", "--x0", "1", "--y0", "1"]).status.code(), Some(2));
    assert_eq!(lyness(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lyness(&with("invariant", &["--format", "yaml"])).status.code(), Some(2));
    assert_eq!(lyness(&["verify", "--criteria", "42"]).status.code(), Some(2));
    let below = lyness(&["classify", "--a", "3", "--b", "1/2", "--h", "17"]);
    assert_eq!(below.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&below.stderr).contains("AdherenceError::LevelBelowCritical"));
    let outside = lyness(&["invariant", "--a", "3", "--b", "2", "--x0", "-1", "--y0", "1"]);
    assert_eq!(outside.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&outside.stderr).contains("LynessError::Domain"));
    assert_eq!(lyness(&["verify", "--criteria", "4,5"]).status.code(), Some(0));
}

#[test]
fn json_round_trips_to_library_values() {
    let p = Params::two(int(3), int(2)).unwrap();

    let v = json(&with("invariant", &["--format", "json"]));
    assert_eq!(v["h"], "34");

    let v = json(&with("orbit", &["--n", "5", "--format", "json"]));
    assert_eq!(v, orbit(&p, &Point::new(int(1), int(1)), 5).unwrap().to_json());

    let v = json(&with("rotation", &["--n", "60", "--format", "json"]));
    let r = winding_bounds(&p, &StartPoint::rational(int(1), int(1)), 60, &WindingOptions::default()).unwrap();
    assert_eq!(v["estimate"], serde_json::to_value(r.estimate).unwrap());
    assert_eq!(v["log"]["crossings"], serde_json::to_value(&r.log.crossings).unwrap());

    let q = Params::two(rat(1, 2), rat(3, 2)).unwrap();
    let v = json(&["fixed-point", "--a", "1/2", "--b", "3/2", "--format", "json"]);
    let fp = fixed_point(&q).unwrap();
    assert_eq!(v["x"], serde_json::to_value(&fp.x).unwrap());
    assert_eq!(v["y"], serde_json::to_value(&fp.y).unwrap());

    let t = Params::three(rat(1, 2), int(2), int(3)).unwrap();
    let v = json(&["classify", "--k", "3", "--a", "1/2", "--b", "2", "--c", "3", "--h", "799/50", "--format", "json"]);
    assert_eq!(v, serde_json::to_value(classify(&t, &rat(799, 50)).unwrap()).unwrap());

    let v = json(&["bifurcation", "--a", "3", "--b", "1/2", "--format", "json"]);
    assert_eq!(v["levels"].as_array().map(|a| a.len()), Some(1));
    assert_eq!(v["regions"][0]["count"], 2);
    assert!(v["h_c"]["defining_poly"].is_string());
}

#[test]
fn job_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    let out = dir.path().join("out.txt");
    let body = serde_json::json!({
        "subcommand": "rotation", "k": 2, "a": "3", "b": "2", "x0": "1", "y0": "1", "n": 27,
        "output": out.to_str().unwrap(),
    });
    std::fs::write(&job, body.to_string()).unwrap();
    let o = lyness(&["--job-file", job.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "rho in (4/7, 15/26)\n");
    let again = dir.path().join("again.txt");
    let o = lyness(&["--job-file", job.to_str().unwrap(), "--n", "60", "--output", again.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let direct = lyness(&with("rotation", &["--n", "60"]));
    assert_eq!(std::fs::read(&again).unwrap(), direct.stdout);
    let missing = dir.path().join("absent.json");
    assert_eq!(lyness(&["--job-file", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn identical_jobs_give_identical_bytes() {
    let scan = ["scan", "--a", "1/2", "--b", "3/2", "--x0", "149/100,3/40,1/10", "--y0", "173/100", "--n", "80"];
    let a = lyness(&scan);
    let b = lyness(&scan);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("x0,h_decimal,rho_low_num,rho_low_den,rho_upp_num,rho_upp_den,n_points,status\n"));
    for args in [with("orbit", &["--n", "12", "--format", "json"]), vec!["bifurcation", "--k", "3", "--a", "1/2", "--b", "2", "--c", "3"]] {
        assert_eq!(lyness(&args).stdout, lyness(&args).stdout);
    }
}

#[test]
fn algebraic_start_uses_the_ball_backend() {
    let o = lyness(&["rotation", "--a", "1/2", "--b", "3/2", "--x0", "13/10", "--y0", "ybar", "--n", "300"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("rho in ("));
}
