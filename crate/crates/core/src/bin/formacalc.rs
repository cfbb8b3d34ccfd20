use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use formacalc::cli::report::{Outcome, StmtResult};
use formacalc::cli::suites::{self, SuiteSpec};
use formacalc::cli::{self, Config, Report, Session};

/// Exact calculator for formal functions, forms and dual forms.
#[derive(Parser)]
#[command(name = "formacalc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for every randomized step.
    #[arg(long, env = "FORMACALC_SEED", default_value_t = 0)]
    seed: u64,
    /// Truncation order for spaces declared without one.
    #[arg(long, default_value_t = 3)]
    order: u32,
    /// Degree bound for generated polynomials in checks.
    #[arg(long = "max-degree")]
    max_degree: Option<u32>,
}

impl Common {
    fn config(&self, timing: bool) -> Config {
        Config { seed: self.seed, order: self.order, max_degree: self.max_degree, timing }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a script and print one result per statement.
    Run {
        script: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Also write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record wall time per statement.
        #[arg(long)]
        timing: bool,
    },
    /// Run one invariant suite.
    Check {
        /// dd, poincare, adjoint, kunneth, pullback, jets or filtration.
        suite: String,
        /// Complex for `poincare`: omega, omega-tensor or dual.
        variant: Option<String>,
        /// Restrict to one space, as `n,k`.
        #[arg(long, value_parser = parse_pair)]
        space: Option<(usize, usize)>,
        /// Second factor for `kunneth`.
        #[arg(long, value_parser = parse_pair)]
        space2: Option<(usize, usize)>,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, env = "FORMACALC_SEED", default_value_t = 0)]
        seed: u64,
        /// Print the full JSON report instead of the summary.
        #[arg(long)]
        json: bool,
    },
    /// Print a script in canonical form.
    Fmt { script: PathBuf },
    /// Read statements from stdin and evaluate them one by one.
    Repl {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected n,k")?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((num(a)?, num(b)?))
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("formacalc: cannot read {}: {e}", path.display());
        ExitCode::from(3)
    })
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match args.command {
        Command::Run { script, common, json, timing } => {
            let text = match read(&script) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let report = cli::run_source(&text, &common.config(timing));
            print!("{}", report.to_text());
            if let Some(out) = json {
                if let Err(code) = write_json(&out, &report.to_json()) {
                    return code;
                }
            }
            ExitCode::from(report.exit_code as u8)
        }
        Command::Check { suite, variant, space, space2, order, samples, degree, seed, json } => {
            let spec = SuiteSpec::new(&suite, variant.as_deref(), seed).map(|mut spec| {
                spec.space = space;
                spec.space2 = space2;
                spec.order = order;
                spec.samples = samples;
                spec.max_degree = degree;
                spec
            });
            match spec.and_then(|s| suites::run(&s)) {
                Ok(report) => {
                    if json {
                        println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
                    } else {
                        println!("{}", report.summary());
                        for d in &report.details {
                            println!("  {d}");
                        }
                        if let Some(w) = &report.witness {
                            println!("  witness: {w}");
                        }
                    }
                    ExitCode::from(if report.passed { 0 } else { 1 })
                }
                Err(e) => {
                    eprintln!("error[{}]: {e}", e.code());
                    ExitCode::from(2)
                }
            }
        }
        Command::Fmt { script } => {
            let text = match read(&script) {
                Ok(t) => t,
                Err(code) => return code,
            };
            match cli::parse(&text) {
                Ok(s) => {
                    print!("{}", cli::print_script(&s));
                    ExitCode::SUCCESS
                }
                Err(d) => {
                    eprintln!("{d}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Repl { common } => repl(common.config(false)),
    }
}

fn write_json(out: &PathBuf, json: &str) -> Result<(), ExitCode> {
    if out.as_os_str() == "-" {
        println!("{json}");
        return Ok(());
    }
    std::fs::write(out, json).map_err(|e| {
        eprintln!("formacalc: cannot write {}: {e}", out.display());
        ExitCode::from(3)
    })
}

/// Open brackets minus closed ones, ignoring comments.
fn depth(text: &str) -> i64 {
    text.lines()
        .map(|l| l.split("//").next().unwrap_or(""))
        .flat_map(str::chars)
        .map(|c| match c {
            '(' | '[' | '{' => 1,
            ')' | ']' | '}' => -1,
            _ => 0,
        })
        .sum()
}

fn show(r: &StmtResult) {
    match &r.outcome {
        Outcome::Value { text, .. } => println!("{text}"),
        Outcome::Check { report } => println!("{}", report.summary()),
        Outcome::Error { error } => println!("{error}"),
    }
}

fn repl(cfg: Config) -> ExitCode {
    let mut session = Session::new(cfg);
    let mut results = Vec::new();
    let mut buffer = String::new();
    let stdin = io::stdin();
    let interactive = atty_stdin();
    loop {
        if interactive {
            print!("{}", if buffer.is_empty() { "> " } else { ". " });
            let _ = io::stdout().flush();
        }
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => {
                eprintln!("formacalc: {e}");
                return ExitCode::from(3);
            }
        }
        if buffer.is_empty() && matches!(line.trim(), ":q" | ":quit") {
            break;
        }
        buffer.push_str(&line);
        if depth(&buffer) > 0 {
            continue;
        }
        match cli::parse(&buffer) {
            Ok(script) => {
                for stmt in &script.stmts {
                    if let Some(r) = session.execute(stmt) {
                        show(&r);
                        results.push(r);
                    }
                }
            }
            Err(d) => println!("{d}"),
        }
        buffer.clear();
    }
    ExitCode::from(Report::new(cfg.seed, results).exit_code as u8)
}

fn atty_stdin() -> bool {
    use std::io::IsTerminal;
    io::stdin().is_terminal()
}
