use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eqdsing::report::{matrix_table, QuiverOut};
use eqdsing::scenario::{Mode, Task};
use eqdsing::{emit_report_json, load_scenario, run_scenario, CliError, Report, Scenario};
use eqdsing_core::collection::Quiver;

#[derive(Parser)]
#[command(name = "eqdsing", version, about = "Equivariant exceptional collections and graded singularity categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a scenario and emit the JSON report.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for one DOT file per quiver.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Invariant dimensions of the polynomial ring, degree by degree.
    Molien {
        scenario: PathBuf,
        #[arg(long, default_value_t = 24)]
        max_degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quivers of the Beilinson and singularity-category collections.
    Quiver {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Euler-form Gram matrices of the collections.
    Gram {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_dots(dir: &Path, report: &Report) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    for (name, q) in &report.quivers {
        let quiver = Quiver { labels: q.labels.clone(), arrows: q.arrows.clone(), components: q.components.clone() };
        let path = dir.join(format!("{}_{name}.dot", report.scenario));
        let text = eqdsing::emit_dot(&quiver, &format!("{}_{name}", report.scenario));
        std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn with_tasks(mut s: Scenario, tasks: Vec<Task>) -> Scenario {
    s.tasks = tasks;
    s
}

fn veronese_tasks(s: &Scenario) -> Vec<Task> {
    if s.mode == Mode::BeilinsonOnly {
        vec![Task::Beilinson]
    } else {
        vec![Task::Beilinson, Task::Dsing]
    }
}

fn quiver_text(q: &QuiverOut) -> String {
    let mut out = format!("quiver of {} ({})\n", q.source, q.component_types.join(", "));
    out.push_str(&matrix_table(&q.labels, &q.arrows));
    out
}

fn errors_text(report: &Report) -> String {
    let mut out = String::new();
    for c in report.checks.iter().filter(|c| !c.passed) {
        out.push_str(&format!("check failed: {}: {}\n", c.name, c.message));
    }
    for e in &report.errors {
        out.push_str(&format!("task {} failed: {}\n", e.task, e.message));
    }
    out
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let report = match cli.command {
        Command::Run { scenario, out, dot } => {
            let report = run_scenario(&load_scenario(&scenario)?)?;
            write_out(out.as_deref(), &emit_report_json(&report))?;
            if let Some(dir) = dot {
                write_dots(&dir, &report)?;
            }
            report
        }
        Command::Molien { scenario, max_degree, out } => {
            let s = with_tasks(load_scenario(&scenario)?, vec![Task::Molien { max_degree }]);
            s.validate()?;
            let report = run_scenario(&s)?;
            let mut text = String::from("degree dim\n");
            if let Some(m) = &report.molien {
                for (d, v) in m.dims.iter().enumerate() {
                    text.push_str(&format!("{d:>6} {v}\n"));
                }
            }
            write_out(out.as_deref(), &text)?;
            report
        }
        Command::Quiver { scenario, out, dot } => {
            let s = load_scenario(&scenario)?;
            let mut tasks = veronese_tasks(&s);
            tasks.push(Task::Quiver);
            let report = run_scenario(&with_tasks(s, tasks))?;
            let text: String = report.quivers.values().map(quiver_text).collect();
            write_out(out.as_deref(), &text)?;
            if let Some(dir) = dot {
                write_dots(&dir, &report)?;
            }
            report
        }
        Command::Gram { scenario, out } => {
            let s = load_scenario(&scenario)?;
            let mut tasks = veronese_tasks(&s);
            tasks.push(Task::Gram);
            let report = run_scenario(&with_tasks(s, tasks))?;
            let mut text = String::new();
            if let Some(b) = &report.beilinson {
                text.push_str("gram of beilinson\n");
                text.push_str(&matrix_table(&b.labels, &b.gram));
            }
            if let Some(d) = &report.dsing {
                text.push_str("gram of dsing\n");
                text.push_str(&matrix_table(&d.collection.labels, &d.collection.gram));
            }
            write_out(out.as_deref(), &text)?;
            report
        }
    };
    eprint!("{}", errors_text(&report));
    Ok(report.all_checks_passed)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
