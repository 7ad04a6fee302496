//! Reading single-column CSV files of observations.
//!
//! The first column of each record is the observation. A first record that
//! does not parse as a number is taken as a header. Empty fields and `NA`
//! mark missing values, which are dropped and counted. Blank lines are
//! ignored.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use unit_lindley::ProportionSample;

use crate::error::{CliError, Result};

/// How raw values are mapped into `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scaling {
    #[default]
    None,
    /// Percentages divided by 101, which keeps 100% off the boundary.
    Percent101,
    Divisor { value: f64 },
}

impl Scaling {
    pub fn divisor(self) -> f64 {
        match self {
            Scaling::None => 1.0,
            Scaling::Percent101 => 101.0,
            Scaling::Divisor { value } => value,
        }
    }
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scaling::None => f.write_str("none"),
            Scaling::Percent101 => f.write_str("percent101"),
            Scaling::Divisor { value } => write!(f, "divisor={value}"),
        }
    }
}

impl FromStr for Scaling {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" => Ok(Scaling::None),
            "percent101" => Ok(Scaling::Percent101),
            _ => {
                let v = s
                    .strip_prefix("divisor=")
                    .ok_or_else(|| format!("expected none, percent101 or divisor=V, got `{s}`"))?;
                let value: f64 = v.parse().map_err(|_| format!("invalid divisor `{v}`"))?;
                if value > 0.0 && value.is_finite() {
                    Ok(Scaling::Divisor { value })
                } else {
                    Err(format!("divisor must be positive, got {value}"))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub path: PathBuf,
    /// Non-missing values as read, before scaling.
    pub raw: Vec<f64>,
    pub scaled: ProportionSample,
    pub scaling: Scaling,
    /// Line numbers of dropped missing entries.
    pub missing_lines: Vec<u64>,
}

impl Dataset {
    pub fn missing(&self) -> usize {
        self.missing_lines.len()
    }
}

fn is_missing(field: &str) -> bool {
    let f = field.trim();
    f.is_empty() || f.eq_ignore_ascii_case("na")
}

/// Reads `path`, drops missing entries, and applies `scaling`.
pub fn ingest(path: &Path, scaling: Scaling) -> Result<Dataset> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::io(format!("cannot open {}", path.display()), e))?;
    read_dataset(file, path, scaling)
}

pub fn read_dataset<R: std::io::Read>(reader: R, path: &Path, scaling: Scaling) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut raw = Vec::new();
    let mut lines = Vec::new();
    let mut missing_lines = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::Parse {
            path: path.to_owned(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = record.get(0).unwrap_or("");
        let is_first = std::mem::replace(&mut first, false);
        if is_missing(field) {
            missing_lines.push(line);
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                raw.push(v);
                lines.push(line);
            }
            _ if is_first => {} // header
            _ => {
                return Err(CliError::Parse {
                    path: path.to_owned(),
                    line,
                    message: format!("`{field}` is not a number"),
                })
            }
        }
    }
    if raw.is_empty() {
        return Err(CliError::Parse {
            path: path.to_owned(),
            line: 0,
            message: "no observations found".into(),
        });
    }

    let d = scaling.divisor();
    let scaled: Vec<f64> = raw.iter().map(|v| v / d).collect();
    let bad: Vec<String> = scaled
        .iter()
        .zip(&raw)
        .zip(&lines)
        .filter(|((s, _), _)| !(**s > 0.0 && **s < 1.0))
        .map(|((s, r), l)| {
            if d == 1.0 {
                format!("line {l}: {r}")
            } else {
                format!("line {l}: {r} -> {s}")
            }
        })
        .collect();
    if !bad.is_empty() {
        return Err(CliError::Range(format!(
            "{}: {} value(s) outside (0, 1) after scaling `{scaling}`: {}; \
             rescale with --scale percent101 or --scale divisor=V",
            path.display(),
            bad.len(),
            bad.join(", ")
        )));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data".into());
    Ok(Dataset {
        name,
        path: path.to_owned(),
        raw,
        scaled: ProportionSample::new(scaled)?,
        scaling,
        missing_lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(s: &str, scaling: Scaling) -> Result<Dataset> {
        read_dataset(s.as_bytes(), Path::new("mem.csv"), scaling)
    }

    #[test]
    fn header_and_missing() {
        let d = read("pct\n99\nNA\n\"\"\n50\n", Scaling::Percent101).unwrap();
        assert_eq!(d.raw, vec![99.0, 50.0]);
        assert_eq!(d.missing_lines, vec![3, 4]);
        assert!((d.scaled.values()[0] - 0.980_198_019_8).abs() < 1e-9);
        assert!((d.scaled.values()[1] - 0.495_049_504_9).abs() < 1e-9);
    }

    #[test]
    fn no_header() {
        let d = read("0.5\n0.25\n", Scaling::None).unwrap();
        assert_eq!(d.raw, vec![0.5, 0.25]);
    }

    #[test]
    fn bad_value_reports_line() {
        match read("x\n0.5\nabc\n", Scaling::None) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boundary_value_is_a_range_error() {
        let err = read("100\n50\n", Scaling::Divisor { value: 100.0 }).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, CliError::Range(_)));
        assert!(msg.contains("line 1: 100 -> 1"), "{msg}");
        assert!(msg.contains("--scale"));
    }

    #[test]
    fn scaling_parses() {
        assert_eq!("none".parse::<Scaling>().unwrap(), Scaling::None);
        assert_eq!("percent101".parse::<Scaling>().unwrap(), Scaling::Percent101);
        assert_eq!(
            "divisor=100".parse::<Scaling>().unwrap(),
            Scaling::Divisor { value: 100.0 }
        );
        assert!("divisor=0".parse::<Scaling>().is_err());
        assert!("half".parse::<Scaling>().is_err());
    }
}
