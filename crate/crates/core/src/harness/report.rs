//! CSV and JSON-lines rendering of experiment records.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::experiments::ExperimentRecord;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "experiment,seed,trial,dim,function,p,lhs,rhs,ratio";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(Error::InvalidParameter(format!("unknown format `{other}` (csv or jsonl)"))),
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            line,
            message: format!("{other:?}"),
        },
    }
}

/// Header plus one row per record; `None` becomes an empty field.
pub fn to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(',')).map_err(csv_error)?;
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn to_jsonl(records: &[ExperimentRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

pub fn from_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    if text.lines().next().map(str::trim) != Some(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{CSV_HEADER}`"),
        });
    }
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(csv_error))
        .collect()
}

pub fn render(records: &[ExperimentRecord], format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(records),
        Format::Jsonl => to_jsonl(records),
    }
}

/// Writes to `out`, or to stdout when `out` is `None`.
pub fn write_report(records: &[ExperimentRecord], format: Format, out: Option<&Path>) -> Result<()> {
    let text = render(records, format)?;
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Ratio;

    fn sample() -> Vec<ExperimentRecord> {
        vec![
            ExperimentRecord::new("np-ratio", 7, 0, 8, "abs", None, Ratio::new(0.5, 2.0)),
            ExperimentRecord::new("fp-scaling", 7, 1, 8, "abs", Some(1.25), Ratio::new(0.0, 0.0)),
            ExperimentRecord::new("np-ratio", 7, 2, 8, "scaled(sin,0.5,0)", None, Ratio::new(1.0, 4.0)),
        ]
    }

    #[test]
    fn csv_round_trip() {
        let recs = sample();
        let text = to_csv(&recs).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert!(text.lines().nth(1).unwrap().ends_with(",,0.5,2.0,0.25"));
        assert!(text.contains(",\"scaled(sin,0.5,0)\","));
        assert_eq!(from_csv(&text).unwrap(), recs);
        assert!(matches!(from_csv("a,b\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn jsonl_one_object_per_line() {
        let text = to_jsonl(&sample()).unwrap();
        let rows: Vec<ExperimentRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(rows, sample());
        assert!(text.contains("\"ratio\":null"));
    }
}
