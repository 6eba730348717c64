//! Report assembly and output plumbing shared by all subcommands.

use anyhow::{Context, Result};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// One command run: configuration echo, results payload and a pass/fail
/// verdict. Serialized reports are byte-identical across runs with the same
/// configuration and seed; wall-clock timing goes to stderr only.
#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub config: serde_json::Value,
    pub results: serde_json::Value,
    pub pass: bool,
    pub summary: String,
}

impl Report {
    pub fn new(
        command: &str,
        config: serde_json::Value,
        results: serde_json::Value,
        pass: bool,
        summary: String,
    ) -> Report {
        Report {
            command: command.to_string(),
            config,
            results,
            pass,
            summary,
        }
    }
}

fn timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Write the JSON report (and optional CSV rows) under `out`, returning the
/// JSON path.
pub fn write_outputs(
    report: &Report,
    out: &Path,
    csv: Option<(&str, &[String])>,
) -> Result<PathBuf> {
    std::fs::create_dir_all(out)
        .with_context(|| format!("creating output directory {}", out.display()))?;
    let stamp = timestamp();
    let json_path = out.join(format!("{}-{stamp}.json", report.command));
    std::fs::write(&json_path, serde_json::to_string_pretty(report)?)
        .with_context(|| format!("writing {}", json_path.display()))?;
    if let Some((header, rows)) = csv {
        let csv_path = out.join(format!("{}-{stamp}.csv", report.command));
        let mut body = String::with_capacity(rows.len() * 32 + header.len() + 1);
        body.push_str(header);
        body.push('\n');
        for row in rows {
            body.push_str(row);
            body.push('\n');
        }
        std::fs::write(&csv_path, body)
            .with_context(|| format!("writing {}", csv_path.display()))?;
        eprintln!("wrote {}", csv_path.display());
    }
    eprintln!("wrote {}", json_path.display());
    Ok(json_path)
}

/// Print the report (human one-liner or full JSON) and return the exit code.
pub fn emit(report: &Report, json: bool) -> Result<i32> {
    if json {
        println!("{}", serde_json::to_string_pretty(report)?);
    } else {
        println!(
            "[{}] {}: {}",
            if report.pass { "PASS" } else { "FAIL" },
            report.command,
            report.summary
        );
    }
    Ok(if report.pass { 0 } else { 1 })
}
