//! Reference tables shipped with the crate and the code that recomputes them.
//!
//! Each data file is tab separated with columns
//! `family rank n form lower upper dims unit`, where `form` is `short=Q` or
//! `kp=p,q`, `dims` lists the branch dimensions in ascending order and `-`
//! marks a value that is not computed for that row.

use crate::exec;
use crate::lattice::QForm;
use crate::rootdata::Family;

use super::engine::{self, Route};
use super::report::{Bounds, ReproduceReport, ReproduceRow, RowValues, SCHEMA};
use super::CliError;

pub const TABLES: [(&str, &str); 5] = [
    ("t-A", include_str!("../../data/t-A.tsv")),
    ("t-C", include_str!("../../data/t-C.tsv")),
    ("t-B", include_str!("../../data/t-B.tsv")),
    ("t-G2", include_str!("../../data/t-G2.tsv")),
    ("kp", include_str!("../../data/kp.tsv")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenRow {
    pub family: Family,
    pub rank: usize,
    pub degree: i64,
    pub qform: QForm,
    pub expected: RowValues,
}

fn parse_form(s: &str) -> Option<QForm> {
    if let Some(q) = s.strip_prefix("short=") {
        return q.parse().ok().map(QForm::Short);
    }
    let (p, q) = s.strip_prefix("kp=")?.split_once(',')?;
    Some(QForm::Kp { p: p.parse().ok()?, q: q.parse().ok()? })
}

fn dash<T: std::str::FromStr>(s: &str) -> Result<Option<T>, ()> {
    if s == "-" {
        Ok(None)
    } else {
        s.parse().map(Some).map_err(|_| ())
    }
}

pub fn parse(text: &str) -> Result<Vec<GoldenRow>, String> {
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || format!("line {}: {line:?}", k + 1);
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 8 {
            return Err(bad());
        }
        let family: Family = f[0].parse().map_err(|_| bad())?;
        let rank = f[1].parse().map_err(|_| bad())?;
        let degree = f[2].parse().map_err(|_| bad())?;
        let qform = parse_form(f[3]).ok_or_else(bad)?;
        let lower: Option<usize> = dash(f[4]).map_err(|_| bad())?;
        let upper: Option<usize> = dash(f[5]).map_err(|_| bad())?;
        let bounds = match (lower, upper) {
            (Some(lower), Some(upper)) => Some(Bounds { lower, upper }),
            (None, None) => None,
            _ => return Err(bad()),
        };
        let dims = f[6].split(',').map(|d| d.parse()).collect::<Result<Vec<usize>, _>>().map_err(|_| bad())?;
        let unit_condition = (f[7] != "-").then(|| f[7].to_string());
        rows.push(GoldenRow { family, rank, degree, qform, expected: RowValues { bounds, dims, unit_condition } });
    }
    Ok(rows)
}

pub fn table(name: &str) -> Option<&'static str> {
    TABLES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Bounds, sorted branch dimensions and, off GL, the unit condition for the
/// distinguished character.
pub fn compute(family: Family, rank: usize, n: i64, qform: QForm) -> Result<RowValues, CliError> {
    let route = Route::build(engine::cover(family, rank, n, qform)?)?;
    let table = route.solver().branches()?;
    let mut dims: Vec<usize> = table.branches.iter().map(|b| b.dim).collect();
    dims.sort_unstable();
    let unit_condition = match family {
        Family::GL => None,
        _ => engine::distinguished(&route, None).ok().map(|d| d.unit_condition),
    };
    Ok(RowValues { bounds: route.bounds(), dims, unit_condition })
}

pub fn reproduce(name: &str) -> Result<ReproduceReport, CliError> {
    let text = table(name).ok_or_else(|| CliError::Usage(format!("unknown table {name}")))?;
    let rows = parse(text).map_err(|e| CliError::Compute(format!("{name}: {e}")))?;
    let out: Vec<ReproduceRow> = exec::map_slice(&rows, |g| {
        let (got, error) = match compute(g.family, g.rank, g.degree, g.qform) {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let pass = got.as_ref() == Some(&g.expected);
        ReproduceRow { family: g.family.to_string(), rank: g.rank, degree: g.degree, expected: g.expected.clone(), got, error, pass }
    });
    let ok = out.iter().all(|r| r.pass);
    Ok(ReproduceReport { schema: SCHEMA, table: name.to_string(), rows: out, ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_table_parses() {
        for (name, text) in TABLES {
            let rows = parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!rows.is_empty(), "{name}");
        }
    }

    #[test]
    fn forms() {
        assert_eq!(parse_form("short=1"), Some(QForm::Short(1)));
        assert_eq!(parse_form("kp=0,-1"), Some(QForm::Kp { p: 0, q: -1 }));
        assert_eq!(parse_form("kp=0"), None);
        assert!(parse("A\t1\t2\tshort=1\t0\t-\t0,0\t-").is_err());
    }
}
