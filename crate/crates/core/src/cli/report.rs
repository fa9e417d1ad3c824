//! Report types written by the subcommands, as JSON or markdown.
//!
//! Symbolic values appear as their display strings, which `SymVal::parse`
//! reads back. Nothing time-dependent is recorded, so equal inputs give equal
//! bytes.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::orbits::{Flags, OrbitSurvey, Witnesses};
use crate::rootdata::Vector;
use crate::theta::{CocycleReport, Rank2Report, Verdict};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub family: String,
    pub rank: usize,
    pub degree: i64,
    pub q_short: Option<i64>,
    pub kp_p: Option<i64>,
    pub kp_q: Option<i64>,
    pub twist_omega: Option<i64>,
}

impl InstanceEcho {
    pub fn label(&self) -> String {
        format!("{}{} n={}", self.family, self.rank, self.degree)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub image_key: Vec<usize>,
    pub size: usize,
    pub flags: Flags,
    pub witness: Witnesses,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub lower: usize,
    pub upper: usize,
    pub total_classes: usize,
    pub weyl_order: usize,
    pub orbits: Vec<OrbitEntry>,
}

impl From<&OrbitSurvey> for SurveyReport {
    fn from(s: &OrbitSurvey) -> SurveyReport {
        SurveyReport {
            lower: s.lower,
            upper: s.upper,
            total_classes: s.total_classes,
            weyl_order: s.weyl_order,
            orbits: s
                .orbits
                .iter()
                .map(|o| OrbitEntry {
                    image_key: o.image_key.clone(),
                    size: o.size,
                    flags: o.flags,
                    witness: o.witness.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub u: Vector,
    /// 0 when no multiple of u lies in Y_{Q,n}^sc.
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub image: usize,
    pub word: Vec<usize>,
    pub y: Vector,
    pub v: Vector,
    pub lhs: String,
    pub required: String,
    pub value: Option<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchEntry {
    pub generator_assignments: Vec<String>,
    pub dim: usize,
    pub undetermined: usize,
    pub image_verdicts: Vec<Verdict>,
    pub conditions: Vec<ConditionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub instance: InstanceEcho,
    pub route: String,
    pub bounds: Option<Bounds>,
    pub generators: Vec<GeneratorEntry>,
    pub branches: Vec<BranchEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistRow {
    /// (-1, ϖ)_n
    pub eps: i8,
    /// (a, ϖ)_2
    pub a_symbol: i8,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishedReport {
    pub twist: String,
    pub rows: Vec<DistRow>,
    pub unit_condition: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub schema: u32,
    pub instance: InstanceEcho,
    pub survey: Option<SurveyReport>,
    pub dim: DimReport,
    pub distinguished: Option<DistinguishedReport>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyEntry {
    pub instance: InstanceEcho,
    pub rank2: Rank2Report,
    pub word_independence: CheckSummary,
    pub cocycle: CocycleReport,
    pub lattice: CheckSummary,
    pub bound_sandwich: CheckSummary,
    pub bisector: CheckSummary,
}

impl VerifyEntry {
    pub fn ok(&self) -> bool {
        self.rank2.ok()
            && self.cocycle.failures.is_empty()
            && [&self.word_independence, &self.lattice, &self.bound_sandwich, &self.bisector]
                .iter()
                .all(|c| c.failures.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub seed: u64,
    pub instances: Vec<VerifyEntry>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowValues {
    pub bounds: Option<Bounds>,
    pub dims: Vec<usize>,
    pub unit_condition: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReproduceRow {
    pub family: String,
    pub rank: usize,
    pub degree: i64,
    pub expected: RowValues,
    pub got: Option<RowValues>,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReproduceReport {
    pub schema: u32,
    pub table: String,
    pub rows: Vec<ReproduceRow>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KpRow {
    pub rank: usize,
    pub degree: i64,
    pub lower: usize,
    pub upper: usize,
    /// Every orbit is Y_{Q,n}-free exactly when it is Y_{Q,n}^sc-free.
    pub free_sets_agree: bool,
    pub dim: Option<usize>,
    pub distinguished: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KpReport {
    pub schema: u32,
    pub p: i64,
    pub q: i64,
    pub rows: Vec<KpRow>,
    pub ok: bool,
}

pub trait Markdown {
    fn markdown(&self) -> String;
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or("-".to_string(), |v| v.to_string())
}

fn bounds_cell(b: &Option<Bounds>) -> String {
    b.map_or("-".to_string(), |b| format!("({}, {})", b.lower, b.upper))
}

fn dims_cell(d: &[usize]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl Markdown for DimReport {
    fn markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "### Branches ({} route, bounds {})\n", self.route, bounds_cell(&self.bounds));
        if !self.generators.is_empty() {
            let g: Vec<String> = self.generators.iter().map(|g| format!("{:?} (order {})", g.u, g.order)).collect();
            let _ = writeln!(s, "free generators: {}\n", g.join(", "));
        }
        let _ = writeln!(s, "| branch | dim | images |");
        let _ = writeln!(s, "|---|---|---|");
        for b in &self.branches {
            let key = if b.generator_assignments.is_empty() { "unique".to_string() } else { b.generator_assignments.join("; ") };
            let v: Vec<String> = b.image_verdicts.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "| {} | {} | {} |", key, b.dim, v.join(", "));
        }
        s
    }
}

impl Markdown for AnalyzeReport {
    fn markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "## {} (schema {})\n", self.instance.label(), self.schema);
        if let Some(sv) = &self.survey {
            let sc = sv.orbits.iter().filter(|o| o.flags.sc_free).count();
            let qn = sv.orbits.iter().filter(|o| o.flags.qn_free).count();
            let _ = writeln!(s, "| lower | upper | classes | orbits | sc-free | qn-free | W |");
            let _ = writeln!(s, "|---|---|---|---|---|---|---|");
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {} |\n",
                sv.lower,
                sv.upper,
                sv.total_classes,
                sv.orbits.len(),
                sc,
                qn,
                sv.weyl_order
            );
        }
        s.push_str(&self.dim.markdown());
        if let Some(d) = &self.distinguished {
            let _ = writeln!(s, "\n### Distinguished character ({})\n", d.twist);
            let _ = writeln!(s, "| (-1,ϖ)_n | (a,ϖ)_2 | dim |");
            let _ = writeln!(s, "|---|---|---|");
            for r in &d.rows {
                let _ = writeln!(s, "| {} | {} | {} |", r.eps, r.a_symbol, r.dim);
            }
            let _ = writeln!(s, "\ndim 1 iff: {}", d.unit_condition);
        }
        for n in &self.notes {
            let _ = writeln!(s, "\nnote: {n}");
        }
        s
    }
}

impl Markdown for VerifyReport {
    fn markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "## verify (seed {}, schema {})\n", self.seed, self.schema);
        let _ = writeln!(s, "| instance | rank-2 | words | cocycle | lattice | sandwich | bisector |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|");
        let cell = |checked: usize, bad: usize| if bad == 0 { format!("{checked} ok") } else { format!("{bad}/{checked} FAIL") };
        for e in &self.instances {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {} |",
                e.instance.label(),
                cell(e.rank2.inverse_checks + e.rank2.braid_checks, e.rank2.failures.len()),
                cell(e.word_independence.checked, e.word_independence.failures.len()),
                cell(e.cocycle.checked, e.cocycle.failures.len()),
                cell(e.lattice.checked, e.lattice.failures.len()),
                cell(e.bound_sandwich.checked, e.bound_sandwich.failures.len()),
                cell(e.bisector.checked, e.bisector.failures.len()),
            );
        }
        for e in self.instances.iter().filter(|e| !e.ok()) {
            let all = e
                .rank2
                .failures
                .iter()
                .chain(&e.word_independence.failures)
                .chain(&e.cocycle.failures)
                .chain(&e.lattice.failures)
                .chain(&e.bound_sandwich.failures)
                .chain(&e.bisector.failures);
            for f in all.take(5) {
                let _ = writeln!(s, "\n{}: {}", e.instance.label(), f);
            }
        }
        let _ = writeln!(s, "\n{}", if self.ok { "all checks passed" } else { "FAILED" });
        s
    }
}

impl Markdown for ReproduceReport {
    fn markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "## {} (schema {})\n", self.table, self.schema);
        let _ = writeln!(s, "| group | n | bounds | dims | dim 1 iff | status |");
        let _ = writeln!(s, "|---|---|---|---|---|---|");
        for r in &self.rows {
            let (b, d, u) = match &r.got {
                Some(g) => (bounds_cell(&g.bounds), dims_cell(&g.dims), opt(&g.unit_condition)),
                None => ("-".into(), "-".into(), "-".into()),
            };
            let status = if r.pass {
                "ok".to_string()
            } else if let Some(e) = &r.error {
                format!("ERROR {e}")
            } else {
                let x = &r.expected;
                format!("MISMATCH expected {} [{}] {}", bounds_cell(&x.bounds), dims_cell(&x.dims), opt(&x.unit_condition))
            };
            let _ = writeln!(s, "| {}{} | {} | {} | {} | {} | {} |", r.family, r.rank, r.degree, b, d, u, status);
        }
        let _ = writeln!(s, "\n{}", if self.ok { "all rows match" } else { "FAILED" });
        s
    }
}

impl Markdown for KpReport {
    fn markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "## GL_r, B(e_i,e_i) = {}, B(e_i,e_j) = {} (schema {})\n", 2 * self.p, self.q, self.schema);
        let _ = writeln!(s, "| r | n | lower | upper | free sets agree | dim | distinguished |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {} |",
                r.rank,
                r.degree,
                r.lower,
                r.upper,
                r.free_sets_agree,
                opt(&r.dim),
                r.distinguished
            );
        }
        s
    }
}
