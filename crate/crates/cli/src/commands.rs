//! Command-line grammar and the four subcommands.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzmark_core::comparison::{rank, CohortResult};
use fuzzmark_core::oracle::sweep;
use fuzzmark_core::voskoglou::{
    membership_from_counts, profile_relation, top_profiles, LearningState,
};
use fuzzmark_core::ModelKind;

use crate::input::{dist_distribution, load_scheme, parse_cohort, roster_file_distribution};
use crate::report::{
    analyze_text, compare_text, fmt_num, profiles_text, CohortReport, ProfilesReport,
    RankingReport, ReportDocument,
};
use crate::svg::render_svg;
use crate::CliError;

/// Environment variable overriding the default `verify` seed.
pub const SEED_ENV: &str = "FUZZMARK_SEED";
pub const DEFAULT_SEED: u64 = 20_130_517;

#[derive(Debug, Parser)]
#[command(
    name = "fuzzmark",
    version,
    about = "Centroid models for fuzzy learning assessment"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Centroid of one grade distribution.
    Analyze(AnalyzeArgs),
    /// Rank two or more cohorts.
    Compare(CompareArgs),
    /// Acquisition memberships and the profile relation of three learning states.
    Profiles(ProfilesArgs),
    /// Check the closed forms against vertex-built figures.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Rect,
    Trap,
    Trap10,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Rect => ModelKind::Rectangular,
            ModelArg::Trap => ModelKind::TrapezoidalUnit,
            ModelArg::Trap10 => ModelKind::TrapezoidalBase10,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Comma-separated level weights, worst first; fractions like 5/6 allowed.
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "roster",
        required_unless_present = "roster"
    )]
    pub dist: Option<String>,
    /// CSV roster with a `student,score` header.
    #[arg(long)]
    pub roster: Option<PathBuf>,
    /// Grade band config; the built-in C/B/A scheme when omitted.
    #[arg(long, requires = "roster")]
    pub scheme: Option<PathBuf>,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    /// Write the figure as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Cohort name used in reports.
    #[arg(long, default_value = "cohort")]
    pub label: String,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// `NAME=weights` or `NAME=roster.csv`; repeat for each cohort.
    #[arg(
        long = "cohort",
        value_name = "NAME=SOURCE",
        allow_hyphen_values = true
    )]
    pub cohorts: Vec<String>,
    #[arg(long)]
    pub scheme: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfilesArgs {
    /// Five counts a,b,c,d,e for interpretation.
    #[arg(long)]
    pub state1: String,
    /// Five counts for generalization.
    #[arg(long)]
    pub state2: String,
    /// Five counts for categorization.
    #[arg(long)]
    pub state3: String,
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Defaults to $FUZZMARK_SEED, then a fixed seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Strict upper bound on the allowed deviation.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(a) => analyze(a, out),
        Command::Compare(a) => compare(a, out),
        Command::Profiles(a) => profiles(a, out),
        Command::Verify(a) => verify(a, out),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Data(format!("write failed: {e}"))
}

fn write_svg(path: &PathBuf, cohorts: &[CohortResult]) -> Result<(), CliError> {
    fs::write(path, render_svg(cohorts))
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn analyze(args: AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let model = ModelKind::from(args.model);
    let d = match (&args.dist, &args.roster) {
        (Some(dist), _) => dist_distribution(dist)?,
        (None, Some(roster)) => {
            let scheme = load_scheme(args.scheme.as_deref())?;
            roster_file_distribution(roster, &scheme)?
        }
        (None, None) => {
            return Err(CliError::Usage(
                "one of --dist or --roster is required".into(),
            ))
        }
    };
    let cohort = CohortResult::evaluate(args.label.clone(), d, model);

    if args.json {
        let mut doc = ReportDocument::new("analyze");
        doc.model = Some(model.to_string());
        doc.cohorts.push(CohortReport::from_result(&cohort));
        out.write_all(doc.to_json().as_bytes()).map_err(io_err)?;
    } else if args.csv {
        let p = cohort.centroid();
        let mut w = csv::Writer::from_writer(Vec::new());
        let row = |w: &mut csv::Writer<Vec<u8>>, r: &[&str]| {
            w.write_record(r).map_err(|e| CliError::Data(e.to_string()))
        };
        row(
            &mut w,
            &["cohort", "model", "levels", "x", "y", "threshold"],
        )?;
        row(
            &mut w,
            &[
                cohort.label(),
                model.as_str(),
                &cohort.distribution().len().to_string(),
                &fmt_num(p.x),
                &fmt_num(p.y),
                &fmt_num(cohort.threshold()),
            ],
        )?;
        let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
        out.write_all(&bytes).map_err(io_err)?;
    } else {
        out.write_all(analyze_text(model, &cohort).as_bytes())
            .map_err(io_err)?;
    }
    if let Some(path) = &args.svg {
        write_svg(path, std::slice::from_ref(&cohort))?;
    }
    Ok(())
}

pub fn compare(args: CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.cohorts.len() < 2 {
        return Err(CliError::Usage(format!(
            "compare needs at least two --cohort values, got {}",
            args.cohorts.len()
        )));
    }
    let model = ModelKind::from(args.model);
    let scheme = load_scheme(args.scheme.as_deref())?;
    let mut cohorts = Vec::with_capacity(args.cohorts.len());
    for spec in &args.cohorts {
        let (name, d) = parse_cohort(spec, &scheme)?;
        if cohorts.iter().any(|c: &CohortResult| c.label() == name) {
            return Err(CliError::Usage(format!("cohort name {name:?} given twice")));
        }
        cohorts.push(CohortResult::evaluate(name, d, model));
    }
    let ranking = rank(&cohorts)?;

    if args.json {
        let mut doc = ReportDocument::new("compare");
        doc.model = Some(model.to_string());
        doc.cohorts = cohorts.iter().map(CohortReport::from_result).collect();
        doc.ranking = Some(RankingReport::from_ranking(&ranking));
        out.write_all(doc.to_json().as_bytes()).map_err(io_err)?;
    } else {
        out.write_all(compare_text(model, &cohorts, &ranking).as_bytes())
            .map_err(io_err)?;
    }
    if let Some(path) = &args.svg {
        let ordered: Vec<CohortResult> = ranking
            .order
            .iter()
            .map(|e| {
                cohorts
                    .iter()
                    .find(|c| c.label() == e.label)
                    .expect("ranked")
                    .clone()
            })
            .collect();
        write_svg(path, &ordered)?;
    }
    Ok(())
}

fn parse_counts(flag: &str, s: &str) -> Result<[u64; 5], CliError> {
    let values: Vec<u64> = s
        .split(',')
        .map(|t| {
            t.trim().parse().map_err(|_| {
                CliError::Usage(format!("--{flag}: {t:?} is not a nonnegative integer"))
            })
        })
        .collect::<Result<_, _>>()?;
    values.try_into().map_err(|v: Vec<u64>| {
        CliError::Usage(format!("--{flag}: expected 5 counts, got {}", v.len()))
    })
}

pub fn profiles(args: ProfilesArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.top == 0 {
        return Err(CliError::Usage("--top must be at least 1".into()));
    }
    let counts = [
        parse_counts("state1", &args.state1)?,
        parse_counts("state2", &args.state2)?,
        parse_counts("state3", &args.state3)?,
    ];
    let totals: Vec<u64> = counts.iter().map(|c| c.iter().sum()).collect();
    if totals.iter().any(|&t| t != totals[0]) {
        return Err(CliError::Data(format!(
            "state counts must describe the same students; totals are {}, {}, {}",
            totals[0], totals[1], totals[2]
        )));
    }
    let mut states = Vec::with_capacity(3);
    for (state, c) in LearningState::ALL.into_iter().zip(counts) {
        states.push((membership_from_counts(state, c, totals[0])?, c));
    }
    let relation = profile_relation(&states[0].0, &states[1].0, &states[2].0)?;
    let top = top_profiles(&relation, args.top);
    let report = ProfilesReport::new(&states, &relation, &top);
    if args.json {
        let mut doc = ReportDocument::new("profiles");
        doc.profiles = Some(report);
        out.write_all(doc.to_json().as_bytes()).map_err(io_err)?;
    } else {
        out.write_all(profiles_text(&report).as_bytes())
            .map_err(io_err)?;
    }
    Ok(())
}

fn default_seed() -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

pub fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(args.tolerance >= 0.0) {
        return Err(CliError::Usage("--tolerance must be nonnegative".into()));
    }
    let seed = match args.seed {
        Some(s) => s,
        None => default_seed()?,
    };
    let report = sweep(args.samples, seed)?;
    writeln!(out, "verify: {} samples, seed {seed}", report.samples).map_err(io_err)?;
    for (model, dev) in &report.per_model {
        writeln!(out, "  {:<7} max deviation {dev:e}", model.as_str()).map_err(io_err)?;
    }
    let max = report.max_deviation();
    let passed = max < args.tolerance;
    writeln!(
        out,
        "max deviation {max:e} (tolerance {:e}): {}",
        args.tolerance,
        if passed { "ok" } else { "FAILED" }
    )
    .map_err(io_err)?;
    if passed {
        return Ok(());
    }
    let w = report.worst.expect("a failing sweep has a worst sample");
    let weights: Vec<String> = w.weights.iter().map(|x| format!("{x:?}")).collect();
    Err(CliError::Data(format!(
        "sample {} (seed {seed}), model {}: weights [{}], closed form {:?}, oracle {:?}, deviation {:e}",
        w.sample,
        w.model,
        weights.join(", "),
        (w.closed_form.x, w.closed_form.y),
        (w.oracle.x, w.oracle.y),
        w.deviation
    )))
}
