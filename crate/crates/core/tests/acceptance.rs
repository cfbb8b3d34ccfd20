//! Acceptance run: one PASS/FAIL line per criterion, with default suite
//! parameters and seed 0.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use formacalc::cli::report::Outcome;
use formacalc::cli::suites::{self, SuiteReport, SuiteSpec};
use formacalc::cli::{self, Config, Report};

type Verdict = Result<String, String>;

fn suite(name: &str, variant: Option<&str>) -> Result<SuiteReport, String> {
    let spec = SuiteSpec::new(name, variant, 0).map_err(|e| e.to_string())?;
    suites::run(&spec).map_err(|e| e.to_string())
}

fn judge(reports: &[SuiteReport], elapsed: Duration, budget: Option<Duration>) -> Verdict {
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    let failures: usize = reports.iter().map(|r| r.failures).sum();
    let summary = format!("{cases} cases, {failures} failures, {:.1} s", elapsed.as_secs_f64());
    if let Some(r) = reports.iter().find(|r| !r.passed) {
        return Err(format!("{summary}; {} witness: {}", r.summary(), r.witness.as_deref().unwrap_or("-")));
    }
    match budget {
        Some(b) if elapsed > b => Err(format!("{summary}; over the {} s budget", b.as_secs())),
        _ => Ok(summary),
    }
}

fn suites_criterion(runs: &[(&str, Option<&str>)], budget: Option<u64>) -> Verdict {
    let started = Instant::now();
    let reports = runs.iter().map(|(n, v)| suite(n, *v)).collect::<Result<Vec<_>, _>>()?;
    judge(&reports, started.elapsed(), budget.map(Duration::from_secs))
}

fn corpus(dir: &str) -> Vec<(PathBuf, String)> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(dir);
    let mut files: Vec<PathBuf> = fs::read_dir(&root)
        .expect("corpus directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "fc"))
        .collect();
    files.sort();
    files.into_iter().map(|p| {
        let text = fs::read_to_string(&p).expect("readable script");
        (p, text)
    }).collect()
}

/// Statement sources and outcomes, without positions.
fn semantics(r: &Report) -> Vec<(String, serde_json::Value)> {
    r.results
        .iter()
        .map(|x| (x.source.clone(), serde_json::to_value(&x.outcome).expect("outcomes serialize")))
        .collect()
}

fn cli_criterion() -> Verdict {
    let cfg = Config::default();
    let scripts = corpus("ok");
    if scripts.len() != 50 {
        return Err(format!("expected 50 corpus scripts, found {}", scripts.len()));
    }
    for (path, text) in &scripts {
        let name = path.file_name().unwrap().to_string_lossy();
        let script = cli::parse(text).map_err(|d| format!("{name}: {d}"))?;
        let printed = cli::print_script(&script);
        let again = cli::print_script(&cli::parse(&printed).map_err(|d| format!("{name} reprinted: {d}"))?);
        if again != printed {
            return Err(format!("{name}: printing is not a fixed point"));
        }
        let first = cli::run_source(text, &cfg);
        if first.exit_code != 0 {
            return Err(format!("{name}: exit code {}", first.exit_code));
        }
        if first.to_json() != cli::run_source(text, &cfg).to_json() {
            return Err(format!("{name}: reports differ between identical runs"));
        }
        if semantics(&first) != semantics(&cli::run_source(&printed, &cfg)) {
            return Err(format!("{name}: canonical form evaluates differently"));
        }
    }

    let mut codes = BTreeSet::new();
    let negatives = corpus("err");
    for (path, text) in &negatives {
        let name = path.file_name().unwrap().to_string_lossy();
        let expected = text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix("// expect: "))
            .ok_or_else(|| format!("{name}: no expectation line"))?;
        let report = cli::run_source(text, &cfg);
        let got = report.results.iter().find_map(|r| match &r.outcome {
            Outcome::Error { error } => Some(error.code.as_str()),
            _ => None,
        });
        match got {
            Some(code) if code.starts_with(expected) && report.exit_code != 0 => {
                codes.insert(expected.to_string());
            }
            other => return Err(format!("{name}: expected {expected}, got {other:?}")),
        }
    }
    Ok(format!(
        "{} scripts round-trip and replay identically; {} negative scripts cover {} distinct codes",
        scripts.len(),
        negatives.len(),
        codes.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Box<dyn Fn() -> Verdict>); 9] = [
        ("d∘d = 0 and Leibniz", Box::new(|| suites_criterion(&[("dd", None)], Some(30)))),
        (
            "Poincaré homotopy on Ω",
            Box::new(|| suites_criterion(&[("poincare", Some("omega")), ("poincare", Some("omega-tensor"))], Some(60))),
        ),
        (
            "compactly supported homotopy",
            Box::new(|| suites_criterion(&[("poincare", Some("dual"))], Some(120))),
        ),
        ("adjointness of d", Box::new(|| suites_criterion(&[("adjoint", None)], None))),
        ("Künneth", Box::new(|| suites_criterion(&[("kunneth", None)], None))),
        ("pullback calculus", Box::new(|| suites_criterion(&[("pullback", None)], None))),
        ("jet/distribution duality", Box::new(|| suites_criterion(&[("jets", None)], None))),
        ("operator filtration", Box::new(|| suites_criterion(&[("filtration", None)], None))),
        ("CLI corpus", Box::new(cli_criterion)),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} ({title}): PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({title}): FAIL ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
