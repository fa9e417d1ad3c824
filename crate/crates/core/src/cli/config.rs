//! Plain-text settings files: one `key = value` per line, `#` starts a
//! comment. Keys are the long flag names with `_` or `-`.

use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("line {0}: expected `key = value`, found {1:?}")]
    Syntax(usize, String),
    #[error("line {0}: unknown key {1:?}")]
    UnknownKey(usize, String),
    #[error("line {0}: bad value {2:?} for {1}")]
    BadValue(usize, String, String),
    #[error("line {0}: {1} given twice")]
    Duplicate(usize, String),
}

/// Every setting is optional; command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    pub family: Option<String>,
    pub rank: Option<usize>,
    pub degree: Option<i64>,
    pub q_short: Option<i64>,
    pub kp_p: Option<i64>,
    pub kp_q: Option<i64>,
    pub twist_omega: Option<i64>,
    pub format: Option<String>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

fn set<T: FromStr>(slot: &mut Option<T>, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Err(ConfigError::Duplicate(line, key.into()));
    }
    let v = value.parse().map_err(|_| ConfigError::BadValue(line, key.into(), value.into()))?;
    *slot = Some(v);
    Ok(())
}

impl Settings {
    pub fn parse(text: &str) -> Result<Settings, ConfigError> {
        let mut s = Settings::default();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Syntax(line, raw.into()))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax(line, raw.into()));
            }
            match key.as_str() {
                "family" => set(&mut s.family, line, &key, value)?,
                "rank" => set(&mut s.rank, line, &key, value)?,
                "degree" => set(&mut s.degree, line, &key, value)?,
                "q_short" => set(&mut s.q_short, line, &key, value)?,
                "kp_p" => set(&mut s.kp_p, line, &key, value)?,
                "kp_q" => set(&mut s.kp_q, line, &key, value)?,
                "twist_omega" => set(&mut s.twist_omega, line, &key, value)?,
                "format" => {
                    if value != "json" && value != "md" {
                        return Err(ConfigError::BadValue(line, key, value.into()));
                    }
                    set(&mut s.format, line, &key, value)?
                }
                "seed" => set(&mut s.seed, line, &key, value)?,
                "jobs" => set(&mut s.jobs, line, &key, value)?,
                _ => return Err(ConfigError::UnknownKey(line, key)),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Settings, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
        Settings::parse(&text)
    }

    /// `top` wins wherever it has a value.
    pub fn overlay(self, top: Settings) -> Settings {
        Settings {
            family: top.family.or(self.family),
            rank: top.rank.or(self.rank),
            degree: top.degree.or(self.degree),
            q_short: top.q_short.or(self.q_short),
            kp_p: top.kp_p.or(self.kp_p),
            kp_q: top.kp_q.or(self.kp_q),
            twist_omega: top.twist_omega.or(self.twist_omega),
            format: top.format.or(self.format),
            seed: top.seed.or(self.seed),
            jobs: top.jobs.or(self.jobs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overlays() {
        let s = Settings::parse("# sp4\nfamily = C\nrank=2\n\ndegree = 10  # the 4r+2 case\nkp-q = -1\n").unwrap();
        assert_eq!(s.family.as_deref(), Some("C"));
        assert_eq!((s.rank, s.degree, s.kp_q), (Some(2), Some(10), Some(-1)));
        let top = Settings { degree: Some(6), ..Default::default() };
        let m = s.overlay(top);
        assert_eq!((m.rank, m.degree), (Some(2), Some(6)));
    }

    #[test]
    fn rejects_junk() {
        assert!(matches!(Settings::parse("rank 2"), Err(ConfigError::Syntax(1, _))));
        assert!(matches!(Settings::parse("colour = red"), Err(ConfigError::UnknownKey(1, _))));
        assert!(matches!(Settings::parse("rank = two"), Err(ConfigError::BadValue(1, _, _))));
        assert!(matches!(Settings::parse("format = yaml"), Err(ConfigError::BadValue(1, _, _))));
        assert!(matches!(Settings::parse("seed = 1\nseed = 2"), Err(ConfigError::Duplicate(2, _))));
    }
}
