use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use harness::{
    compare_report, read_csv, run_sweep, run_with_programs, Condition, ExperimentConfig, HarnessError, Models,
    Programs, Result, RunConfig, SelectorKind, TeamKind,
};
use meu_select::diagram::diagram_json;
use meu_select::{compile_policy, fit_diagram, load_diagram, read_traces, write_traces, CompiledPolicy};
use miners_sim::ScenarioConfig;

#[derive(Parser)]
#[command(name = "goldminers", version, about = "GoldMiners teams under noise: runs, sweeps and MEU policies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One seeded game; prints the run record as JSON.
    Run {
        /// Scenario JSON; the default random map when absent.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, default_value = "smart")]
        team: String,
        #[arg(long, default_value = "rr")]
        selector: String,
        #[arg(long, default_value = "dummy+rr")]
        opponent: String,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        steps: Option<u64>,
        /// Write the per-cycle trace log here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write decision traces for `fit` here.
        #[arg(long)]
        traces_out: Option<PathBuf>,
        /// Write the team message log here.
        #[arg(long)]
        messages: Option<PathBuf>,
        /// Directory with this team's .asl files instead of the built-in ones.
        #[arg(long)]
        programs: Option<PathBuf>,
        /// Print the final grid to stderr.
        #[arg(long)]
        show: bool,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        policy: Option<PathBuf>,
    },
    /// Many runs over noise levels and seeds; writes the summary CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; overrides the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        policy: Option<PathBuf>,
    },
    /// Refit the diagram from decision traces.
    Fit {
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Structure and fallback utility; the shipped model by default.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Compile the static selection policy for a model.
    CompilePolicy {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// MEU-versus-RR table from a sweep CSV.
    Report {
        #[arg(long)]
        csv: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| HarnessError::Runtime(format!("{}: {e}", path.display())))
}

fn models(model: Option<&Path>, policy: Option<&Path>) -> Result<Models> {
    let diagram = match model {
        Some(p) => load_diagram(&read(p)?)?,
        None => meu_select::build_default_diagram(),
    };
    let policy = match policy {
        Some(p) => CompiledPolicy::from_json(&read(p)?)?,
        None if model.is_none() => return Ok(Models::builtin()),
        None => compile_policy(&diagram, 0)?,
    };
    Models::new(diagram, policy)
}

fn built_at() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()).unwrap_or_else(|| {
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs())
    })
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            scenario,
            team,
            selector,
            opponent,
            epsilon,
            seed,
            steps,
            trace,
            traces_out,
            messages,
            programs,
            show,
            model,
            policy,
        } => {
            let team: TeamKind = team.parse()?;
            let selector: SelectorKind = selector.parse()?;
            let opponent: Condition = opponent.parse()?;
            let mut sc = match &scenario {
                Some(p) => ScenarioConfig::from_json(&read(p)?)?,
                None => ScenarioConfig::default(),
            };
            if let Some(s) = steps {
                sc.steps = s;
            }
            let own = match &programs {
                Some(dir) => Programs::from_dir(team, dir)?,
                None => Programs::builtin(team)?,
            };
            let other = Programs::builtin(opponent.team)?;
            let models = models(model.as_deref(), policy.as_deref())?;
            let mut cfg = RunConfig::new(sc, Condition::new(team, selector), epsilon, seed);
            cfg.opponent = opponent;
            cfg.trace = trace.is_some();
            cfg.record_messages = messages.is_some();
            cfg.record_decisions = traces_out.is_some();
            let out = run_with_programs(&cfg, &models, &own, &other)?;
            if let Some(p) = &trace {
                write(p, &out.trace)?;
            }
            if let Some(p) = &traces_out {
                write(p, &write_traces(&out.decisions))?;
            }
            if let Some(p) = &messages {
                let text: String = out.messages.iter().map(|m| format!("{m}\n")).collect();
                write(p, &text)?;
            }
            if show {
                eprint!("{}", out.snapshot);
            }
            println!("{}", serde_json::to_string(&out.record).expect("record serializes"));
        }
        Command::Sweep { config, out, model, policy } => {
            let cfg = ExperimentConfig::from_json(&read(&config)?)?;
            let base = config.parent().unwrap_or(Path::new("."));
            let scenario = cfg.load_scenario(base)?;
            let models = models(model.as_deref(), policy.as_deref())?;
            let (summary, _) = run_sweep(&cfg, &scenario, &models)?;
            let csv = summary.to_csv();
            match out.or_else(|| cfg.output.as_ref().map(|p| base.join(p))) {
                Some(p) => write(&p, &csv)?,
                None => print!("{csv}"),
            }
            if let Ok((text, _)) = compare_report(&summary) {
                eprint!("{text}");
            }
        }
        Command::Fit { traces, out, model, alpha } => {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(HarnessError::Invalid(format!("alpha must be positive, got {alpha}")));
            }
            let records = read_traces(&read(&traces)?)?;
            let base = match &model {
                Some(p) => load_diagram(&read(p)?)?,
                None => meu_select::build_default_diagram(),
            };
            let fitted = fit_diagram(&base, &records, alpha)?;
            write(&out, &diagram_json(&fitted))?;
            eprintln!("fitted {} records", records.len());
        }
        Command::CompilePolicy { model, out } => {
            let diagram = load_diagram(&read(&model)?)?;
            let policy = compile_policy(&diagram, built_at())?;
            write(&out, &policy.to_json())?;
        }
        Command::Report { csv } => {
            let summary = read_csv(&read(&csv)?)?;
            let (text, _) = compare_report(&summary)?;
            print!("{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
