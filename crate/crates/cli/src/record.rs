use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// Version tag written as the first line of every benchmark CSV.
pub const SCHEMA: &str = "# fwsfm bench-record v1";

/// One benchmark trial. Values are un-normalized (`f(∅)` added back), so
/// cut rows report the cut capacity itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub id: String,
    pub family: String,
    /// Ground-set size.
    pub n: usize,
    #[serde(rename = "F")]
    pub f_max: f64,
    pub epsilon: f64,
    pub major: usize,
    pub minor: usize,
    pub total: usize,
    pub eo_calls: u64,
    /// Absent when timing is disabled.
    pub wall_ms: Option<f64>,
    pub min_value: f64,
    pub lower_bound: f64,
    pub gap: f64,
    pub termination: String,
    /// Independent optimum (max-flow or enumeration) when one was computed.
    pub reference: Option<f64>,
}

impl BenchRecord {
    pub fn gap_within_bound(&self) -> bool {
        self.gap <= 2.0 * self.n as f64 * self.epsilon + 1e-9
    }
}

pub fn write_csv<W: Write>(mut out: W, notes: &[String], rows: &[BenchRecord]) -> Result<()> {
    writeln!(out, "{SCHEMA}")?;
    for note in notes {
        writeln!(out, "# {note}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(HEADER)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl<W: Write>(mut out: W, rows: &[BenchRecord]) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_table<W: Write>(mut out: W, rows: &[BenchRecord]) -> Result<()> {
    writeln!(
        out,
        "{:<24} {:>5} {:>12} {:>9} {:>9} {:>10} {:>14} {:>10}  termination",
        "id", "n", "F", "major", "minor", "eo_calls", "min_value", "gap"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<24} {:>5} {:>12} {:>9} {:>9} {:>10} {:>14} {:>10.3e}  {}",
            r.id, r.n, r.f_max, r.major, r.minor, r.eo_calls, r.min_value, r.gap, r.termination
        )?;
    }
    Ok(())
}

const HEADER: [&str; 15] = [
    "id",
    "family",
    "n",
    "F",
    "epsilon",
    "major",
    "minor",
    "total",
    "eo_calls",
    "wall_ms",
    "min_value",
    "lower_bound",
    "gap",
    "termination",
    "reference",
];

/// Reads a CSV written by [`write_csv`], checking the version line and the
/// column layout.
pub fn read_csv<R: Read>(mut input: R) -> Result<Vec<BenchRecord>> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    if text.trim().is_empty() {
        bail!("empty CSV");
    }
    match text.lines().next() {
        Some(first) if first.trim() == SCHEMA => {}
        Some(first) => bail!("unrecognized schema line `{first}`, expected `{SCHEMA}`"),
        None => bail!("empty CSV"),
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        bail!("column layout does not match the bench-record schema");
    }
    let mut rows = Vec::new();
    for (i, row) in reader.deserialize().enumerate() {
        rows.push(row.with_context(|| format!("record {}", i + 1))?);
    }
    Ok(rows)
}
