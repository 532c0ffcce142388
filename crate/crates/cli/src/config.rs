use std::fs;
use std::path::{Path, PathBuf};

use logmono_core::ball::parse_decimal;
use num_rational::BigRational;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A closed range `LO:HI` kept as exact decimals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Range {
    pub lo: BigRational,
    pub hi: BigRational,
    pub text: (String, String),
}

impl Range {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("range {s:?} is not LO:HI")))?;
        let lo = parse_decimal(a.trim()).ok_or_else(|| CliError::Usage(format!("bad range start {a:?}")))?;
        let hi = parse_decimal(b.trim()).ok_or_else(|| CliError::Usage(format!("bad range end {b:?}")))?;
        if lo >= hi {
            return Err(CliError::Usage(format!("range {s:?} needs LO < HI")));
        }
        Ok(Self {
            lo,
            hi,
            text: (a.trim().to_string(), b.trim().to_string()),
        })
    }

    /// Both ends as non-negative integers.
    pub fn integers(&self) -> Result<(u64, u64), CliError> {
        let conv = |q: &BigRational, t: &str| -> Result<u64, CliError> {
            if !q.is_integer() {
                return Err(CliError::Usage(format!("{t} is not an integer index")));
            }
            u64::try_from(q.to_integer()).map_err(|_| CliError::Usage(format!("{t} is not a valid index")))
        };
        Ok((conv(&self.lo, &self.text.0)?, conv(&self.hi, &self.text.1)?))
    }
}

/// Settings shared by every command. Defaults, then the config file, then
/// flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub precision: u32,
    pub n_max: Option<u64>,
    pub range: Option<Range>,
    pub depth: Option<u32>,
    pub format: Format,
    pub out_path: Option<PathBuf>,
    pub strict: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision: 128,
            n_max: None,
            range: None,
            depth: None,
            format: Format::Text,
            out_path: None,
            strict: true,
        }
    }
}

/// Raw overrides; `None` leaves the current value alone.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub precision: Option<u32>,
    pub n_max: Option<u64>,
    pub range: Option<String>,
    pub depth: Option<u32>,
    pub format: Option<Format>,
    pub out_path: Option<PathBuf>,
    pub strict: Option<bool>,
}

fn parse_bool(v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Usage(format!("{v:?} is not a boolean"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Usage(format!("config key {key}: {v:?} is not a number")))
}

/// Flat `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Overrides, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut o = Overrides::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "prec" | "precision" => o.precision = Some(parse_num(k, v)?),
            "n_max" | "n-max" => o.n_max = Some(parse_num(k, v)?),
            "range" => o.range = Some(v.to_string()),
            "depth" => o.depth = Some(parse_num(k, v)?),
            "strict" => o.strict = Some(parse_bool(v)?),
            "format" => {
                o.format = Some(match v {
                    "text" => Format::Text,
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => return Err(CliError::Usage(format!("unknown format {v:?}"))),
                })
            }
            "out" => o.out_path = Some(PathBuf::from(v)),
            _ => return Err(CliError::Usage(format!("unknown config key {k:?}"))),
        }
    }
    Ok(o)
}

impl RunConfig {
    pub fn apply(&mut self, o: Overrides) -> Result<(), CliError> {
        if let Some(p) = o.precision {
            self.precision = p;
        }
        if o.n_max.is_some() {
            self.n_max = o.n_max;
        }
        if let Some(r) = o.range {
            self.range = Some(Range::parse(&r)?);
        }
        if o.depth.is_some() {
            self.depth = o.depth;
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        if o.out_path.is_some() {
            self.out_path = o.out_path;
        }
        if let Some(s) = o.strict {
            self.strict = s;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(64..=65536).contains(&self.precision) {
            return Err(CliError::Usage(format!(
                "precision {} outside [64, 65536]",
                self.precision
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r = Range::parse("6.001:100").unwrap();
        assert_eq!(r.text, ("6.001".into(), "100".into()));
        assert!(Range::parse("5").is_err());
        assert!(Range::parse("10:5").is_err());
        assert_eq!(Range::parse("1:200").unwrap().integers().unwrap(), (1, 200));
        assert!(Range::parse("1.5:3").unwrap().integers().is_err());
    }

    #[test]
    fn file_then_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "# run\nprec = 256\nstrict=false\nformat = json\n").unwrap();
        let mut c = RunConfig::default();
        c.apply(read_config_file(&path).unwrap()).unwrap();
        assert_eq!(c.precision, 256);
        assert!(!c.strict);
        c.apply(Overrides {
            precision: Some(512),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(c.precision, 512);
        assert_eq!(c.format, Format::Json);
        fs::write(&path, "colour = red\n").unwrap();
        assert!(read_config_file(&path).is_err());
    }

    #[test]
    fn precision_bounds() {
        let c = RunConfig {
            precision: 32,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }
}
