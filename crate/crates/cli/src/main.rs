//! Command-line entry points for the pseudo-Boolean toolkit: relevance
//! checks on single constraints, instance simplification, solving with
//! derivation dumps, post-hoc trace analysis and instance generation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pblit_core::opb::{
    self, parse_constraint, parse_opb, write_stats_csv, write_trace, InstanceStats, OpbDocument,
};
use pblit_core::relevance::{detect_all, DetectorConfig, RelevanceVerdict, RemovalStrategy};
use pblit_core::solver::{
    generate_vertexcover_complete, solve, AnalysisMode, ConflictAnalysisConfig, Elimination,
    Outcome, RuleApp, SolveLimits, SolverOptions,
};
use pblit_core::PbConstraint;

#[derive(Parser)]
#[command(name = "pblit", version, about = "Pseudo-Boolean reasoning toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Detector flags shared by all subcommands.
#[derive(Args, Debug)]
struct DetectorArgs {
    /// Moduli for the incomplete subset-sum detector, comma separated.
    #[arg(long = "p", value_delimiter = ',', default_value = "4547")]
    moduli: Vec<u64>,
    /// Skip constraints with more literals than this.
    #[arg(long = "max-lits", default_value_t = 500)]
    max_lits: usize,
}

impl DetectorArgs {
    fn config(&self) -> Result<DetectorConfig> {
        DetectorConfig::new(self.moduli.clone(), self.max_lits)
            .context("invalid detector configuration")
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Weaken,
    Simple,
    Slack,
}

impl StrategyArg {
    fn strategy(self) -> RemovalStrategy {
        match self {
            StrategyArg::Weaken => RemovalStrategy::Weaken,
            StrategyArg::Simple => RemovalStrategy::Simple,
            StrategyArg::Slack => RemovalStrategy::SlackBased,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Gr,
    Div,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ElimArg {
    None,
    Weaken,
    Simple,
    Slack,
}

#[derive(Subcommand)]
enum Command {
    /// Report which literals of one constraint are provably irrelevant.
    Check {
        /// The constraint in OPB syntax, e.g. "+12 x1 +6 x2 +2 x3 >= 18".
        constraint: String,
        #[command(flatten)]
        detector: DetectorArgs,
        /// Use the exact dynamic-programming oracle instead of the modular
        /// detector.
        #[arg(long)]
        exact: bool,
    },
    /// Remove provably irrelevant literals from every constraint of an
    /// OPB file.
    Simplify {
        input: PathBuf,
        /// How detected literals are removed.
        #[arg(long, value_enum, default_value_t = StrategyArg::Slack)]
        strategy: StrategyArg,
        #[command(flatten)]
        detector: DetectorArgs,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide an OPB instance; exits 10 on SAT, 20 on UNSAT, 0 otherwise.
    Solve {
        input: PathBuf,
        /// Conflict analysis style: generalized resolution or
        /// division-based.
        #[arg(long, value_enum, default_value_t = ModeArg::Gr)]
        mode: ModeArg,
        /// Irrelevant-literal elimination during analysis.
        #[arg(long, value_enum, default_value_t = ElimArg::None)]
        elim: ElimArg,
        #[command(flatten)]
        detector: DetectorArgs,
        /// Write every rule application to this trace file.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        max_conflicts: Option<u64>,
        /// Time limit in seconds.
        #[arg(long)]
        max_seconds: Option<u64>,
    },
    /// Run the irrelevance detector over every constraint dumped in one
    /// or more trace files and emit per-instance statistics as CSV.
    Analyze {
        #[arg(required = true)]
        traces: Vec<PathBuf>,
        #[command(flatten)]
        detector: DetectorArgs,
        /// CSV output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a built-in benchmark instance.
    Generate {
        /// Instance family; only "vertexcover-complete" is available.
        family: String,
        #[arg(long)]
        n: u32,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check {
            constraint,
            detector,
            exact,
        } => cmd_check(&constraint, &detector.config()?, exact),
        Command::Simplify {
            input,
            strategy,
            detector,
            output,
        } => cmd_simplify(&input, strategy.strategy(), &detector.config()?, output.as_deref()),
        Command::Solve {
            input,
            mode,
            elim,
            detector,
            dump,
            max_conflicts,
            max_seconds,
        } => cmd_solve(
            &input,
            mode,
            elim,
            &detector.config()?,
            dump.as_deref(),
            max_conflicts,
            max_seconds,
        ),
        Command::Analyze {
            traces,
            detector,
            output,
        } => cmd_analyze(&traces, &detector.config()?, output.as_deref()),
        Command::Generate { family, n, output } => cmd_generate(&family, n, output.as_deref()),
    }
}

fn cmd_check(text: &str, cfg: &DetectorConfig, exact: bool) -> Result<ExitCode> {
    let raw = parse_constraint(text).context("cannot parse the constraint")?;
    let normalized = raw.normalize();
    for (idx, constraint) in normalized.iter().enumerate() {
        if normalized.len() > 1 {
            println!("constraint {}: {}", idx + 1, constraint);
        }
        let report = detect_all(constraint, cfg, exact)?;
        if report.skipped {
            println!("skipped: more than {} literals", cfg.max_literals());
            continue;
        }
        for (lit, verdict) in &report.verdicts {
            let text = match verdict {
                RelevanceVerdict::ProvenIrrelevant => "proven irrelevant",
                RelevanceVerdict::Relevant => "relevant",
                RelevanceVerdict::NotProven => "not proven irrelevant",
            };
            println!("{lit}: {text}");
        }
        println!("checks performed: {}", report.checks_performed);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simplify(
    input: &Path,
    strategy: RemovalStrategy,
    cfg: &DetectorConfig,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let text = fs::read_to_string(input)
        .with_context(|| format!("cannot read {}", input.display()))?;
    let doc = parse_opb(&text).context("cannot parse the instance")?;
    warn_all(&doc);

    let mut simplified = Vec::new();
    let mut removed_literals = 0usize;
    let mut touched_constraints = 0usize;
    for (idx, constraint) in doc.normalized().into_iter().enumerate() {
        let report = detect_all(&constraint, cfg, false)?;
        let irrelevant = report.proven_irrelevant();
        if irrelevant.is_empty() {
            simplified.push(constraint);
            continue;
        }
        let removed = strategy
            .apply(&constraint, &irrelevant)
            .expect("detected literals occur in the constraint");
        println!(
            "constraint {}: removed {} ({})",
            idx + 1,
            irrelevant
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", "),
            strategy.name()
        );
        removed_literals += irrelevant.len();
        touched_constraints += 1;
        simplified.push(removed);
    }
    println!(
        "removed {removed_literals} irrelevant literals from {touched_constraints} constraints"
    );

    let out_doc = OpbDocument::from_constraints(simplified.iter());
    let rendered = opb::write_opb(&out_doc);
    match output {
        Some(path) => fs::write(path, rendered)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(
    input: &Path,
    mode: ModeArg,
    elim: ElimArg,
    cfg: &DetectorConfig,
    dump: Option<&Path>,
    max_conflicts: Option<u64>,
    max_seconds: Option<u64>,
) -> Result<ExitCode> {
    let text = fs::read_to_string(input)
        .with_context(|| format!("cannot read {}", input.display()))?;
    let doc = parse_opb(&text).context("cannot parse the instance")?;
    warn_all(&doc);
    let formula = doc.normalized();

    let options = SolverOptions {
        analysis: ConflictAnalysisConfig {
            mode: match mode {
                ModeArg::Gr => AnalysisMode::GeneralizedResolution,
                ModeArg::Div => AnalysisMode::DivisionBased,
            },
            elimination: match elim {
                ElimArg::None => Elimination::Off,
                ElimArg::Weaken => Elimination::Weaken,
                ElimArg::Simple => Elimination::Simple,
                ElimArg::Slack => Elimination::SlackBased,
            },
            detector: cfg.clone(),
        },
        limits: SolveLimits {
            max_conflicts,
            max_time: max_seconds.map(Duration::from_secs),
        },
        luby_restarts: false,
        record_trace: dump.is_some(),
    };
    let result = solve(&formula, &options);

    let stats = result.stats;
    println!("c conflicts {}", stats.conflicts);
    println!("c decisions {}", stats.decisions);
    println!("c propagations {}", stats.propagations);
    println!("c learned {}", stats.learned);
    println!("c cancellations {}", stats.cancellations);
    println!("c irrelevant_detected {}", stats.irrelevant_detected);
    println!("c irrelevant_removed {}", stats.irrelevant_removed);

    if let (Some(path), Some(trace)) = (dump, &result.trace) {
        fs::write(path, write_trace(trace))
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("c trace {} steps", trace.len());
    }

    match result.outcome {
        Outcome::Sat(model) => {
            for constraint in &formula {
                if constraint.evaluate(&model) != Ok(true) {
                    bail!("internal error: model does not satisfy the input");
                }
            }
            println!("s SATISFIABLE");
            let num_vars = doc.declared_vars.unwrap_or_else(|| doc.max_var());
            let rendered: Vec<String> = (1..=num_vars)
                .map(|idx| {
                    let var = pblit_core::Var::new(idx as u32);
                    match model.value(var) {
                        Some(true) => format!("x{idx}"),
                        // unconstrained variables default to false
                        _ => format!("-x{idx}"),
                    }
                })
                .collect();
            println!("v {}", rendered.join(" "));
            Ok(ExitCode::from(10))
        }
        Outcome::Unsat => {
            println!("s UNSATISFIABLE");
            Ok(ExitCode::from(20))
        }
        Outcome::Unknown(limit) => {
            println!("c limit {limit:?}");
            println!("s UNKNOWN");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_analyze(
    traces: &[PathBuf],
    cfg: &DetectorConfig,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let mut rows = Vec::new();
    let mut malformed_total = 0usize;
    for path in traces {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let canonical = path.canonicalize().unwrap_or_else(|_| path.clone());
        let mut row = InstanceStats {
            instance: canonical
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            family: canonical
                .parent()
                .and_then(Path::file_name)
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            ..Default::default()
        };
        let mut malformed = 0usize;
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let step = match opb::parse_trace_line(line, idx + 1) {
                Ok(step) => step,
                Err(err) => {
                    eprintln!("{}: {err}", path.display());
                    malformed += 1;
                    continue;
                }
            };
            row.constraints_dumped += 1;
            if matches!(step.rule, RuleApp::Cancel(_)) {
                row.cancellations += 1;
            }
            let report = detect_all(&step.result, cfg, false)?;
            if report.skipped {
                row.skipped_constraints += 1;
                continue;
            }
            row.checks_performed += report.checks_performed as u64;
            let irrelevant = report.proven_irrelevant().len() as u64;
            if irrelevant > 0 {
                row.constraints_with_irrelevant += 1;
                row.irrelevant_literals_total += irrelevant;
            }
        }
        if malformed > 0 {
            eprintln!("{}: {malformed} malformed records skipped", path.display());
            malformed_total += malformed;
        }
        rows.push(row);
    }

    let csv = write_stats_csv(&rows);
    match output {
        Some(path) => fs::write(path, &csv)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{csv}"),
    }

    let dumped: u64 = rows.iter().map(|r| r.constraints_dumped).sum();
    let with_irrelevant: u64 = rows.iter().map(|r| r.constraints_with_irrelevant).sum();
    let literals: u64 = rows.iter().map(|r| r.irrelevant_literals_total).sum();
    let skipped: u64 = rows.iter().map(|r| r.skipped_constraints).sum();
    eprintln!(
        "total: {count} instances, {dumped} constraints dumped, {with_irrelevant} with irrelevant \
         literals, {literals} irrelevant literals, {skipped} skipped, {malformed_total} malformed",
        count = rows.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(family: &str, n: u32, output: Option<&Path>) -> Result<ExitCode> {
    let constraints: Vec<PbConstraint> = match family {
        "vertexcover-complete" => generate_vertexcover_complete(n)?,
        other => bail!("unknown family {other:?}; available: vertexcover-complete"),
    };
    let doc = OpbDocument::from_constraints(constraints.iter());
    let rendered = opb::write_opb(&doc);
    match output {
        Some(path) => fs::write(path, rendered)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn warn_all(doc: &OpbDocument) {
    for warning in &doc.warnings {
        eprintln!("warning: {warning}");
    }
}
