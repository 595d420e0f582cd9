//! Machine-readable check records and the report.json writer.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

/// One residual-type check: pass ⇔ |value| ≤ tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRecord {
    pub suite: String,
    pub check: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub metadata: BTreeMap<String, String>,
}

impl ReportRecord {
    pub fn new(suite: &str, check: &str, value: f64, tolerance: f64) -> Self {
        Self {
            suite: suite.to_string(),
            check: check.to_string(),
            value,
            tolerance,
            pass: value.abs() <= tolerance,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }
}

/// Serialize all records to `report.json` (pretty, deterministic order).
pub fn write_report(path: &Path, records: &[ReportRecord]) -> anyhow::Result<()> {
    let file = std::fs::File::create(path)?;
    let mut writer = std::io::BufWriter::new(file);
    serde_json::to_writer_pretty(&mut writer, records)?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Human-readable summary table.
pub fn print_summary(records: &[ReportRecord]) {
    let mut pass_count = 0usize;
    for r in records {
        if r.pass {
            pass_count += 1;
        }
        println!(
            "{:4} {:<16} {:<44} {:>12.3e} <= {:>9.1e}",
            if r.pass { "ok" } else { "FAIL" },
            r.suite,
            r.check,
            r.value,
            r.tolerance
        );
    }
    println!("{pass_count}/{} checks passed", records.len());
}
