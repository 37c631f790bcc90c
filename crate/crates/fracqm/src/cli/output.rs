//! Files written by jobs. JSON documents carry the schema version, the code
//! version and the resolved parameters; CSV files carry the same as `#` lines.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Document<'a, P: Serialize, R: Serialize> {
    schema_version: u32,
    code_version: &'a str,
    command: &'a str,
    job: &'a str,
    params: &'a P,
    results: &'a R,
}

pub struct Sink {
    pub dir: PathBuf,
    pub command: &'static str,
}

impl Sink {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn json<P: Serialize, R: Serialize>(&self, job: &str, params: &P, results: &R) -> Result<PathBuf, CliError> {
        let path = self.path(&format!("{job}.json"));
        let doc = Document { schema_version: SCHEMA_VERSION, code_version: CODE_VERSION, command: self.command, job, params, results };
        let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::io(&path, e))?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    /// CSV with a metadata preamble; `rows` must match `header` in width.
    pub fn csv<P: Serialize>(&self, job: &str, params: &P, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<PathBuf, CliError> {
        let path = self.path(&format!("{job}.csv"));
        write_csv(&path, self.command, job, params, header, rows).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

fn write_csv<P: Serialize>(
    path: &Path,
    command: &str,
    job: &str,
    params: &P,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<(), Box<dyn std::error::Error>> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# schema_version: {SCHEMA_VERSION}")?;
    writeln!(out, "# code_version: {CODE_VERSION}")?;
    writeln!(out, "# command: {command}")?;
    writeln!(out, "# job: {job}")?;
    writeln!(out, "# params: {}", serde_json::to_string(params)?)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| ryu_text(*v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip decimal form.
fn ryu_text(v: f64) -> String {
    if v.is_finite() {
        let mut b = ryu::Buffer::new();
        b.format_finite(v).to_string()
    } else {
        v.to_string()
    }
}

/// `1.5` -> `1.5`, `-0.3` -> `m0.3`; keeps file names portable.
pub fn tag(v: f64) -> String {
    let s = format!("{v}");
    s.strip_prefix('-').map(|r| format!("m{r}")).unwrap_or(s)
}
