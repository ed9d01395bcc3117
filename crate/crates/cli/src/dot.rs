use crate::{CliError, RunReport};
use comms::interp::Analysis;
use std::path::{Path, PathBuf};

/// The DOT artifacts of a report as `(file name, contents)`, in site order.
/// Top-level sites are named by line; a nested site is prefixed with its
/// depth and the lines of the sites enclosing it, as in `d1_3-2_input.dot`.
pub fn dot_files(report: &RunReport) -> Vec<(String, String)> {
    let mut out = Vec::new();
    if let Some(a) = &report.analysis {
        walk(a, &[], &mut out);
    }
    out
}

fn walk(a: &Analysis, enclosing: &[usize], out: &mut Vec<(String, String)>) {
    for site in &a.sites {
        let mut path = enclosing.to_vec();
        path.push(site.line);
        let lines: Vec<String> = path.iter().map(usize::to_string).collect();
        let stem = match site.depth {
            0 => lines.join("-"),
            d => format!("d{d}_{}", lines.join("-")),
        };
        for (kind, dot) in [("input", &site.input_dot), ("stmsyn", &site.stmsyn_dot), ("exec", &site.exec_dot)] {
            if let Some(dot) = dot {
                out.push((format!("{stem}_{kind}.dot"), dot.clone()));
            }
        }
        if let Some(sub) = &site.sub {
            walk(sub, &path, out);
        }
    }
}

/// Writes [`dot_files`] into `dir`, creating it if needed, and returns the
/// paths written.
pub fn emit_dot(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for (name, dot) in dot_files(report) {
        let path = dir.join(name);
        std::fs::write(&path, dot).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
