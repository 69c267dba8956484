use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfister-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfister-lab"))
        .args(args)
        .env(key, val)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn certify_rational_function_field() {
    let o = run(&[
        "certify", "--field", "Q(t)", "--a", "5", "--b", "2", "--c", "t",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("conclusion CertifiedNontrivial"));
    assert!(s.contains("x in Nrd*(Q1)                NonMember  NonMember"));
    assert!(s.contains("PSim+(A,s)(K)/R"));
}

#[test]
fn certify_json_is_byte_stable() {
    let args = [
        "certify",
        "--field",
        "Fq-tower:q=3,vars=s,t",
        "--a",
        "-1",
        "--b",
        "s",
        "--c",
        "t",
        "--json",
    ];
    let (x, y) = (run(&args), run(&args));
    assert_eq!(code(&x), 0);
    assert_eq!(x.stdout, y.stdout);
    let v = json(&x);
    assert_eq!(v["conclusion"], "CertifiedNontrivial");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["field"], "Fq-tower:q=3,vars=s,t");
}

#[test]
fn hypothesis_failure_exit_code() {
    let o = run(&[
        "certify", "--field", "Q", "--a", "-1", "--b", "-1", "--c", "-1",
    ]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("(i) -1 is not in D<<a,b>>"));
}

#[test]
fn parse_errors_name_token_and_position() {
    let o = run(&[
        "certify", "--field", "Q(t)", "--a", "5", "--b", "2*t+", "--c", "t",
    ]);
    assert_eq!(code(&o), 1);
    let e = stderr(&o);
    assert!(e.contains("--b `2*t+`") && e.contains("position 4"), "{e}");

    let o = run(&["isotropy", "--field", "Q", "--form", "1,x,2"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("entry 2"), "{}", stderr(&o));

    let o = run(&[
        "certify", "--field", "Q(u", "--a", "1", "--b", "1", "--c", "1",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["certify", "--field", "Q"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn example_command() {
    let o = run(&["example", "--p", "3", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["witness"], "-3*t");
    assert_eq!(v["kind"], "example");
    assert_eq!(v["example"]["factorization"]["n1"], "-3");
    assert_eq!(code(&run(&["example", "--p", "2"])), 1);
}

#[test]
fn verify_round_trip_and_tamper() {
    let o = run(&[
        "certify", "--field", "Q(t)", "--a", "5", "--b", "2", "--c", "t", "--json",
    ]);
    let dir = std::env::temp_dir().join(format!("pfister-lab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(&good, &o.stdout).unwrap();
    let v = run(&["verify", good.to_str().unwrap(), "--audit"]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
    assert!(stdout(&v).contains("audit: passed"));

    let mut cert = json(&o);
    cert["inputs"]["a"] = "13".into();
    let mut child = Command::new(env!("CARGO_BIN_EXE_pfister-lab"))
        .args(["verify", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(cert.to_string().as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn enumerate_and_audit() {
    let o = run(&[
        "enumerate",
        "--field",
        "Fq-tower:q=3,vars=s,t",
        "--a",
        "-1",
        "--b",
        "s",
        "--c",
        "t",
        "--audit",
        "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["class_count"], 8);
    assert_eq!(v["c_in_gplus_minus_h"], true);
    assert!(stderr(&o).contains("audit: passed"));
    let o = run(&[
        "enumerate",
        "--field",
        "Q",
        "--a",
        "-1",
        "--b",
        "3",
        "--c",
        "5",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn queries() {
    let o = run(&["hilbert", "--a", "2", "--b", "5", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["product"], 1);
    assert_eq!(v["symbols"]["p=5"], -1);

    let o = run(&["hilbert", "--a", "-1", "--b", "-1", "--place", "real"]);
    assert!(stdout(&o).contains("-1"));

    let o = run(&["isotropy", "--field", "Q", "--form", "1,1,-2", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "yes");
    let o = run(&["isotropy", "--field", "Q", "--form", "1,1,1"]);
    assert!(stdout(&o).contains("? no"));

    let o = run(&[
        "represents",
        "--field",
        "Q",
        "--form",
        "1,1",
        "--x",
        "3",
        "--json",
    ]);
    assert_eq!(json(&o)["verdict"], "no");
    let o = run(&[
        "represents",
        "--field",
        "Q(t)",
        "--form",
        "1,-7",
        "--x",
        "-7",
        "--json",
    ]);
    assert_eq!(json(&o)["verdict"], "yes");
}

#[test]
fn corollary_command() {
    let o = run(&[
        "corollary",
        "--field",
        "Q(t)",
        "--a",
        "5",
        "--b",
        "2",
        "--t",
        "t",
        "--v",
        "t-adic",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("v(t) not in 2vK"));
    let o = run(&[
        "corollary",
        "--field",
        "Q(t)",
        "--a",
        "2",
        "--b",
        "3",
        "--t",
        "t^2",
        "--v",
        "t-adic",
    ]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("fails \"v(t) not in 2vK\""));
}

#[test]
fn search_streams_jsonl() {
    let o = run(&["search", "--field", "Fq-tower:q=3,vars=s,t", "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines
        .iter()
        .all(|r| r["schema_version"] == 1 && r["conclusion"] == "CertifiedNontrivial"));
    assert!(lines
        .iter()
        .any(|r| r["a"] == "-1" && r["b"] == "s" && r["c"] == "t"));
    let again = run(&["search", "--field", "Fq-tower:q=3,vars=s,t", "--jobs", "1"]);
    assert_eq!(o.stdout, again.stdout);
    assert!(stderr(&o).contains("searched 512 triples"));

    let o = run(&["search", "--field", "Q(t)", "--bound", "5"]);
    assert!(stdout(&o).contains(r#""a":"5","b":"2","c":"t","conclusion":"CertifiedNontrivial""#));
    assert_eq!(code(&run(&["search", "--field", "Q", "--bound", "0"])), 1);
}

#[test]
fn height_from_environment() {
    let o = run_env(
        &[
            "certify", "--field", "Q(t)", "--a", "5", "--b", "2", "--c", "t",
        ],
        "PFISTER_LAB_HEIGHT",
        "50",
    );
    assert_eq!(code(&o), 0);
    let o = run_env(
        &[
            "certify", "--field", "Q", "--a", "1", "--b", "1", "--c", "1",
        ],
        "PFISTER_LAB_HEIGHT",
        "x",
    );
    assert_eq!(code(&o), 1);
}
