//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check or comparison failed, 2 bad usage or an
//! instance the library refuses.

pub mod config;
pub mod engine;
pub mod golden;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::exec;
use crate::lattice::QForm;
use crate::rootdata::Family;
use crate::theta::{bisector_check, cocycle_check, verify_rank2, word_independence, ThetaError};
use config::Settings;
use engine::Route;
use report::*;

/// Random points for the rank-2 identities per instance.
pub const RANK2_SAMPLES: usize = 1000;
/// Random instances of the τ translation rule per instance.
pub const COCYCLE_SAMPLES: usize = 100;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Instance(String),
    #[error("{0}")]
    Compute(String),
}

impl From<ThetaError> for CliError {
    fn from(e: ThetaError) -> CliError {
        match e {
            ThetaError::Root(_) | ThetaError::Lattice(_) => CliError::Instance(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<config::ConfigError> for CliError {
    fn from(e: config::ConfigError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "thetawh", version, about = "Whittaker dimensions of theta representations of covering groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbit survey, branch table and distinguished character of one cover
    Analyze(Flags),
    /// Rank-2 identities, reduced-word independence, τ cocycle and lattice checks
    Verify(Flags),
    /// Recompute a reference table and compare it with the embedded copy
    Reproduce {
        #[arg(value_enum)]
        table: TableName,
        #[command(flatten)]
        flags: Flags,
    },
    /// Table for GL_r covers with B(e_i,e_i) = 2p, B(e_i,e_j) = q, n <= r+1
    Kp(Flags),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableName {
    #[value(name = "t-A")]
    A,
    #[value(name = "t-C")]
    C,
    #[value(name = "t-B")]
    B,
    #[value(name = "t-G2")]
    G2,
    #[value(name = "kp")]
    Kp,
}

impl TableName {
    fn file(self) -> &'static str {
        match self {
            TableName::A => "t-A",
            TableName::C => "t-C",
            TableName::B => "t-B",
            TableName::G2 => "t-G2",
            TableName::Kp => "kp",
        }
    }
}

#[derive(Args, Debug, Default, Clone)]
struct Flags {
    /// A, B, C, D, E, F, G or GL
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    /// Degree n of the cover
    #[arg(long)]
    degree: Option<i64>,
    /// Q on short coroots (default 1)
    #[arg(long = "q-short", allow_negative_numbers = true)]
    q_short: Option<i64>,
    /// GL only: B(e_i, e_i) = 2p
    #[arg(long = "kp-p", allow_negative_numbers = true)]
    kp_p: Option<i64>,
    /// GL only: B(e_i, e_j) = q for i != j
    #[arg(long = "kp-q", allow_negative_numbers = true)]
    kp_q: Option<i64>,
    /// Fix (a, ϖ)_n = zeta_n^k for the distinguished character
    #[arg(long = "twist-omega", allow_negative_numbers = true)]
    twist_omega: Option<i64>,
    #[arg(long, value_parser = ["json", "md"])]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// key = value settings file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        let top = Settings {
            family: self.family.clone(),
            rank: self.rank,
            degree: self.degree,
            q_short: self.q_short,
            kp_p: self.kp_p,
            kp_q: self.kp_q,
            twist_omega: self.twist_omega,
            format: self.format.clone(),
            seed: self.seed,
            jobs: self.jobs,
        };
        Ok(file.overlay(top))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Md,
}

/// One fully specified cover.
#[derive(Clone, Debug)]
struct Instance {
    family: Family,
    rank: usize,
    degree: i64,
    qform: QForm,
    twist_omega: Option<i64>,
}

impl Instance {
    fn echo(&self) -> InstanceEcho {
        let (q_short, kp_p, kp_q) = match self.qform {
            QForm::Short(q) => (Some(q), None, None),
            QForm::Kp { p, q } => (None, Some(p), Some(q)),
        };
        InstanceEcho {
            family: self.family.to_string(),
            rank: self.rank,
            degree: self.degree,
            q_short,
            kp_p,
            kp_q,
            twist_omega: self.twist_omega,
        }
    }

    fn cover(&self) -> Result<crate::lattice::CoverSpec, CliError> {
        engine::cover(self.family, self.rank, self.degree, self.qform)
    }
}

fn format_of(s: &Settings) -> Format {
    match s.format.as_deref() {
        Some("md") => Format::Md,
        _ => Format::Json,
    }
}

fn family_of(s: &Settings) -> Result<Option<Family>, CliError> {
    s.family.as_deref().map(|f| f.parse::<Family>().map_err(|e| CliError::Usage(e.to_string()))).transpose()
}

fn qform_of(s: &Settings, family: Family) -> Result<QForm, CliError> {
    if family == Family::GL {
        if s.q_short.is_some() {
            return Err(CliError::Usage("--q-short does not apply to GL; give --kp-p and --kp-q".into()));
        }
        match (s.kp_p, s.kp_q) {
            (Some(p), Some(q)) => Ok(QForm::Kp { p, q }),
            _ => Err(CliError::Usage("GL needs both --kp-p and --kp-q".into())),
        }
    } else {
        if s.kp_p.is_some() || s.kp_q.is_some() {
            return Err(CliError::Usage("--kp-p/--kp-q apply to GL only".into()));
        }
        Ok(QForm::Short(s.q_short.unwrap_or(1)))
    }
}

fn instance_of(s: &Settings) -> Result<Instance, CliError> {
    let need = |what: &str| CliError::Usage(format!("missing --{what}"));
    let family = family_of(s)?.ok_or_else(|| need("family"))?;
    let rank = s.rank.ok_or_else(|| need("rank"))?;
    let degree = s.degree.ok_or_else(|| need("degree"))?;
    Ok(Instance { family, rank, degree, qform: qform_of(s, family)?, twist_omega: s.twist_omega })
}

fn emit<T: Serialize + Markdown>(out: &mut dyn Write, fmt: Format, r: &T) -> Result<(), CliError> {
    let text = match fmt {
        Format::Json => serde_json::to_string_pretty(r).map_err(|e| CliError::Compute(e.to_string()))? + "\n",
        Format::Md => r.markdown(),
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Compute(e.to_string()))
}

fn analyze(s: &Settings, out: &mut dyn Write) -> Result<i32, CliError> {
    let inst = instance_of(s)?;
    let route = Route::build(inst.cover()?)?;
    let dim = engine::dim_report(&route, inst.echo())?;
    let mut notes = Vec::new();
    let distinguished = match engine::distinguished(&route, inst.twist_omega) {
        Ok(d) => Some(d),
        Err(e) => {
            notes.push(format!("no distinguished character: {e}"));
            None
        }
    };
    let survey = match &route {
        Route::Full(t) => Some(SurveyReport::from(&t.survey)),
        Route::Light { .. } => {
            notes.push("orbit survey skipped; conditions come from the orbit of 0 only".into());
            None
        }
    };
    let r = AnalyzeReport { schema: SCHEMA, instance: inst.echo(), survey, dim, distinguished, notes };
    emit(out, format_of(s), &r)?;
    Ok(0)
}

/// The instances checked by `verify` when none is named.
pub fn default_verify_instances() -> Vec<(Family, usize, i64)> {
    vec![
        (Family::A, 2, 3),
        (Family::A, 3, 5),
        (Family::C, 2, 6),
        (Family::C, 2, 10),
        (Family::B, 3, 8),
        (Family::G, 2, 7),
        (Family::G, 2, 12),
    ]
}

fn summary(checked: usize, failures: Vec<String>) -> CheckSummary {
    CheckSummary { checked, failures }
}

fn verify_one(inst: &Instance, seed: u64) -> Result<VerifyEntry, CliError> {
    let ctx = crate::theta::ThetaContext::new(inst.cover()?)?;
    let (s, sv, cc) = (&ctx.setting, &ctx.survey, &ctx.cc);
    let rank2 = verify_rank2(s, sv, cc, RANK2_SAMPLES, seed);
    let (checked, bad) = word_independence(s, sv, cc);
    let words = summary(checked, bad);
    let cocycle = cocycle_check(cc, COCYCLE_SAMPLES, seed);
    let mut lat = Vec::new();
    if !s.lat.sandwich_holds(&s.cover) {
        lat.push("nY ⊆ J ⊆ Y_Q,n and Y_Q,n^sc ⊆ J fail".to_string());
    }
    if !s.lat.weyl_stable(&s.weyl) {
        lat.push("a lattice is not Weyl stable".to_string());
    }
    let lattice = summary(2, lat);
    let table = ctx.branches()?;
    let bad: Vec<String> = table
        .branches
        .iter()
        .filter(|b| b.dim < table.lower || b.dim + b.undetermined > table.upper)
        .map(|b| format!("{:?}: dim {} outside [{}, {}]", b.key_strings(), b.dim, table.lower, table.upper))
        .collect();
    let sandwich = summary(table.branches.len(), bad);
    let bis = bisector_check(inst.family, inst.rank, inst.degree, inst.qform)?;
    let bisector = summary(table.branches.len(), bis);
    Ok(VerifyEntry {
        instance: inst.echo(),
        rank2,
        word_independence: words,
        cocycle,
        lattice,
        bound_sandwich: sandwich,
        bisector,
    })
}

fn verify(s: &Settings, out: &mut dyn Write) -> Result<i32, CliError> {
    let seed = s.seed.unwrap_or(DEFAULT_SEED);
    let list = if s.family.is_some() || s.rank.is_some() || s.degree.is_some() {
        vec![instance_of(s)?]
    } else {
        default_verify_instances()
            .into_iter()
            .map(|(family, rank, degree)| Instance { family, rank, degree, qform: QForm::Short(1), twist_omega: None })
            .collect()
    };
    let instances = exec::map_slice(&list, |i| verify_one(i, seed)).into_iter().collect::<Result<Vec<_>, _>>()?;
    let ok = instances.iter().all(|e| e.ok());
    emit(out, format_of(s), &VerifyReport { schema: SCHEMA, seed, instances, ok })?;
    Ok(if ok { 0 } else { 1 })
}

fn reproduce(table: TableName, s: &Settings, out: &mut dyn Write) -> Result<i32, CliError> {
    let r = golden::reproduce(table.file())?;
    emit(out, format_of(s), &r)?;
    Ok(if r.ok { 0 } else { 1 })
}

fn kp(s: &Settings, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(f) = family_of(s)? {
        if f != Family::GL {
            return Err(CliError::Usage("kp works on GL only".into()));
        }
    }
    let p = s.kp_p.unwrap_or(0);
    let q = s.kp_q.unwrap_or(-1);
    let max_rank = s.rank.unwrap_or(5);
    let mut cells = Vec::new();
    for r in 1..=max_rank {
        match s.degree {
            Some(n) => cells.push((r, n)),
            None => cells.extend((1..=r as i64 + 1).map(|n| (r, n))),
        }
    }
    let rows = exec::map_slice(&cells, |&(r, n)| -> Result<KpRow, CliError> {
        let ctx = crate::theta::ThetaContext::new(engine::cover(Family::GL, r, n, QForm::Kp { p, q })?)?;
        let sv = &ctx.survey;
        let agree = sv.orbits.iter().all(|o| o.flags.sc_free == o.flags.qn_free);
        let dim = (sv.lower == sv.upper).then_some(sv.lower);
        Ok(KpRow { rank: r, degree: n, lower: sv.lower, upper: sv.upper, free_sets_agree: agree, dim, distinguished: dim == Some(1) })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let ok = rows.iter().all(|r| r.free_sets_agree);
    emit(out, format_of(s), &KpReport { schema: SCHEMA, p, q, rows, ok })?;
    Ok(if ok { 0 } else { 1 })
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run_with(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (flags, table) = match &cli.command {
        Command::Analyze(f) | Command::Verify(f) | Command::Kp(f) => (f, None),
        Command::Reproduce { table, flags } => (flags, Some(*table)),
    };
    let result = flags.settings().and_then(|s| {
        let (code, buf) = exec::with_jobs(s.jobs, || {
            let mut buf: Vec<u8> = Vec::new();
            let code = match &cli.command {
                Command::Analyze(_) => analyze(&s, &mut buf),
                Command::Verify(_) => verify(&s, &mut buf),
                Command::Reproduce { .. } => reproduce(table.expect("reproduce has a table"), &s, &mut buf),
                Command::Kp(_) => kp(&s, &mut buf),
            };
            (code, buf)
        });
        out.write_all(&buf).map_err(|e| CliError::Compute(e.to_string()))?;
        code
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = match e {
                CliError::Usage(_) | CliError::Instance(_) => 2,
                CliError::Compute(_) => 1,
            };
            let _ = writeln!(err, "error: {e}");
            if matches!(e, CliError::Usage(_)) {
                let _ = writeln!(err, "\nRun `thetawh --help` for usage.");
            }
            code
        }
    }
}

pub fn run(argv: Vec<String>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
