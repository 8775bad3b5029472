//! `froglab show`: prints the CSVs of a results directory as tables.

use std::path::Path;

use super::LabError;

const TABLES: &[&str] = &[
    "verify.csv",
    "samples.csv",
    "scaling.csv",
    "paths.csv",
    "jumps.csv",
    "perc.csv",
    "fmgap.csv",
    "fm_samples.csv",
];

fn render(title: &str, rows: &[Vec<&str>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0; cols];
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.len());
        }
    }
    let mut out = format!("== {title} ==\n");
    for (k, r) in rows.iter().enumerate() {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:>w$}", w = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if k == 0 {
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            out.push_str(&rule.join("  "));
            out.push('\n');
        }
    }
    out
}

/// Formats every known table in `dir`; `scaling.csv` is split by `d`.
pub fn show(dir: &Path) -> Result<String, LabError> {
    if !dir.is_dir() {
        return Err(LabError::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a results directory"),
        ));
    }
    let mut out = String::new();
    for name in TABLES {
        let path = dir.join(name);
        if !path.exists() {
            continue;
        }
        let text = std::fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
        let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
        let Some((header, body)) = rows.split_first() else {
            continue;
        };
        if *name == "scaling.csv" {
            let mut dims: Vec<&str> = body.iter().map(|r| r[0]).collect();
            dims.dedup();
            for d in dims {
                let mut part = vec![header.clone()];
                part.extend(body.iter().filter(|r| r[0] == d).cloned());
                out.push_str(&render(&format!("{name} (d = {d})"), &part));
                out.push('\n');
            }
        } else {
            out.push_str(&render(name, &rows));
            out.push('\n');
        }
    }
    if out.is_empty() {
        out.push_str("no result tables found\n");
    }
    Ok(out)
}
