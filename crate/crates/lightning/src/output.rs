use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde_json::{Map, Value};

use crate::config::{Command, Format};
use crate::error::{CliError, CliResult};

pub const CSV_SCHEMA: &str = "lightning-results/1";

/// Parameter columns of the CSV, in order. Every record's parameters are
/// drawn from this list.
pub const PARAM_COLUMNS: [&str; 11] =
    ["eps", "r", "m", "n", "trials", "coupled", "auto", "lambda", "tol", "grid_step", "edge_trials"];

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub command: Command,
    pub seed: Option<u64>,
    pub params: Vec<(&'static str, Value)>,
    pub metrics: Vec<(&'static str, Value)>,
    pub duration: Duration,
}

impl ResultRecord {
    pub fn new(command: Command, seed: Option<u64>) -> Self {
        Self { command, seed, params: Vec::new(), metrics: Vec::new(), duration: Duration::ZERO }
    }

    pub fn param(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        debug_assert!(PARAM_COLUMNS.contains(&key), "unknown parameter column {key}");
        self.params.push((key, value.into()));
        self
    }

    pub fn metric(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.metrics.push((key, value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.metrics.iter().chain(&self.params).find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    /// One flat JSON object: command, seed, parameters, metrics and `duration_s`.
    pub fn to_json(&self) -> Map<String, Value> {
        let mut obj = Map::new();
        obj.insert("command".into(), self.command.name().into());
        if let Some(seed) = self.seed {
            obj.insert("seed".into(), seed.into());
        }
        for (k, v) in self.params.iter().chain(&self.metrics) {
            obj.insert((*k).into(), v.clone());
        }
        obj.insert("duration_s".into(), self.duration.as_secs_f64().into());
        obj
    }
}

pub fn csv_header() -> String {
    let mut cols = vec!["schema", "command", "record", "seed"];
    cols.extend(PARAM_COLUMNS);
    cols.extend(["metric", "value"]);
    cols.join(",")
}

fn cell(v: &Value) -> String {
    let s = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// Long-format rows, one per metric. Wall-clock time is left out so that
/// identical runs give identical bytes.
pub fn csv_rows(index: usize, record: &ResultRecord) -> Vec<String> {
    let mut prefix = vec![CSV_SCHEMA.to_string(), record.command.name().to_string(), index.to_string()];
    prefix.push(record.seed.map(|s| s.to_string()).unwrap_or_default());
    for col in PARAM_COLUMNS {
        prefix.push(record.params.iter().find(|(k, _)| *k == col).map(|(_, v)| cell(v)).unwrap_or_default());
    }
    let prefix = prefix.join(",");
    record.metrics.iter().map(|(k, v)| format!("{prefix},{k},{}", cell(v))).collect()
}

/// Streams records to `out`. Stops at the first error.
pub fn write_records<W, I>(out: &mut W, format: Format, records: I) -> CliResult<()>
where
    W: Write,
    I: IntoIterator<Item = CliResult<ResultRecord>>,
{
    let io = |e| CliError::io("writing results", e);
    match format {
        Format::Csv => {
            writeln!(out, "{}", csv_header()).map_err(io)?;
            for (i, record) in records.into_iter().enumerate() {
                for row in csv_rows(i, &record?) {
                    writeln!(out, "{row}").map_err(io)?;
                }
            }
        }
        Format::Json => {
            write!(out, "[").map_err(io)?;
            for (i, record) in records.into_iter().enumerate() {
                let text = serde_json::to_string(&record?.to_json()).expect("records serialize");
                write!(out, "{}\n  {text}", if i == 0 { "" } else { "," }).map_err(io)?;
            }
            writeln!(out, "\n]").map_err(io)?;
        }
    }
    out.flush().map_err(io)
}

/// Writes to a temporary file next to `path` and renames it into place, so
/// `path` is either untouched or complete.
pub fn write_atomic<I>(path: &Path, format: Format, records: I) -> CliResult<()>
where
    I: IntoIterator<Item = CliResult<ResultRecord>>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::io(format!("creating a temporary file in {}", dir.display()), e))?;
    {
        let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
        write_records(&mut buf, format, records)?;
    }
    tmp.as_file().sync_all().map_err(|e| CliError::io("syncing results", e))?;
    tmp.persist(path).map_err(|e| CliError::io(format!("renaming into {}", path.display()), e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> ResultRecord {
        ResultRecord::new(Command::Simulate, Some(3))
            .param("eps", 0.25)
            .param("r", 4)
            .metric("weak", 0.5)
            .metric("ok", true)
    }

    #[test]
    fn csv_layout() {
        let rows = csv_rows(0, &record());
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], "lightning-results/1,simulate,0,3,0.25,4,,,,,,,,,,weak,0.5");
        assert_eq!(rows[1].split(',').count(), csv_header().split(',').count());
        assert!(rows[1].ends_with(",ok,true"));
    }

    #[test]
    fn json_is_flat() {
        let obj = record().to_json();
        assert_eq!(obj["command"], "simulate");
        assert_eq!(obj["eps"], 0.25);
        assert_eq!(obj["weak"], 0.5);
        assert!(obj.contains_key("duration_s"));
    }

    #[test]
    fn json_array_parses() {
        let mut buf = Vec::new();
        write_records(&mut buf, Format::Json, [Ok(record()), Ok(record())]).unwrap();
        let parsed: Vec<Map<String, Value>> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(parsed.len(), 2);
        let mut empty = Vec::new();
        write_records(&mut empty, Format::Json, std::iter::empty()).unwrap();
        assert_eq!(serde_json::from_slice::<Vec<Value>>(&empty).unwrap().len(), 0);
    }

    #[test]
    fn quoting() {
        assert_eq!(cell(&Value::from("a,b")), "\"a,b\"");
        assert_eq!(cell(&Value::Null), "");
    }
}
