use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn formacalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formacalc"))
        .args(args)
        .env_remove("FORMACALC_SEED")
        .output()
        .expect("binary runs")
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_prints_values_and_exits_cleanly() {
    let o = formacalc(&["run", &corpus("ok/05_coboundary.fc")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("= (2*x1*y1)*dx1 + (x1^2)*dy1"), "{text}");
    assert!(text.contains("= 0"));
    assert!(text.ends_with("checks: 0 run, 0 passed, 0 failed; errors: 0\n"));
}

#[test]
fn run_writes_json_reports() {
    let o = formacalc(&["run", "--json", "-", "--seed", "5", &corpus("ok/01_functions_ring.fc")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let json: serde_json::Value = serde_json::from_str(&text[text.find("{\n").unwrap()..]).unwrap();
    assert_eq!(json["seed"], 5);
    assert_eq!(json["exit_code"], 0);
    assert_eq!(json["results"][1]["status"], "value");
    assert_eq!(json["results"][1]["text"], "0");
}

#[test]
fn exit_codes_follow_the_report() {
    assert_eq!(formacalc(&["run", &corpus("err/e001_unclosed.fc")]).status.code(), Some(2));
    assert_eq!(formacalc(&["run", &corpus("err/e003_form_times_form.fc")]).status.code(), Some(2));
    assert_eq!(formacalc(&["run", &corpus("err/e007_order_exhausted.fc")]).status.code(), Some(1));
    assert_eq!(formacalc(&["run", "/nonexistent/script.fc"]).status.code(), Some(3));
}

#[test]
fn reports_are_deterministic_under_a_seed() {
    let path = corpus("ok/39_checks_pullback.fc");
    let a = formacalc(&["run", "--json", "-", "--seed", "42", &path]);
    let b = formacalc(&["run", "--json", "-", "--seed", "42", &path]);
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_formacalc"))
        .args(["run", "--json", "-", &path])
        .env("FORMACALC_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(a.stdout, env.stdout);
}

#[test]
fn timing_is_opt_in() {
    let path = corpus("ok/34_rationals.fc");
    assert!(!stdout(&formacalc(&["run", &path])).contains(" ms)"));
    assert!(stdout(&formacalc(&["run", "--timing", &path])).contains(" ms)"));
}

#[test]
fn check_subcommand() {
    let o = formacalc(&["check", "dd", "--space", "1,1", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dd: PASS ("));

    let o = formacalc(&["check", "poincare", "dual", "--space", "1,0", "--samples", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["complex"], "dual");
    assert_eq!(json["passed"], true);

    assert_eq!(formacalc(&["check", "nonsense"]).status.code(), Some(2));
    assert_eq!(formacalc(&["check", "dd", "--space", "1"]).status.code(), Some(2));
}

#[test]
fn fmt_prints_the_canonical_form() {
    let o = formacalc(&["fmt", &corpus("ok/40_comments.fc")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "space (1,1,3);\nlet f = x1;\nf^2;\n");
}

#[test]
fn repl_evaluates_line_by_line() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_formacalc"))
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"space (1,1,3)\nlet f = x1*y1\nd(f\n)\nundefined\n:quit\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "(y1)*dx1 + (x1)*dy1");
    assert!(lines[1].starts_with("error[E002"), "{text}");
    assert_eq!(o.status.code(), Some(1));
}
