//! Deterministic file emission: versioned CSV, JSON metadata, minimal SVG.
//!
//! CSV: UTF-8, comma separator, decimal point, 17 significant digits, first
//! line `# solvflow-schema v1`. No timestamps or absolute paths anywhere, so
//! identical runs produce byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::CliError;

pub const SCHEMA_LINE: &str = "# solvflow-schema v1";

pub fn ensure_dir(dir: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::config(format!("cannot create `{dir}`: {e}")))
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::config(format!("cannot write `{}`: {e}", path.display()))
}

pub fn write_csv(
    path: &Path,
    columns: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), CliError> {
    let mut buf = String::new();
    buf.push_str(SCHEMA_LINE);
    buf.push('\n');
    buf.push_str(&columns.join(","));
    buf.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        let mut first = true;
        for v in row {
            if !first {
                buf.push(',');
            }
            first = false;
            buf.push_str(&format!("{v:.16e}"));
        }
        buf.push('\n');
    }
    fs::write(path, buf).map_err(|e| io_err(path, e))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::config(format!("cannot serialize json: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Minimal polyline plot. The viewBox is computed from the data bounds plus
/// a 5% margin; the vertical axis is flipped so larger ordinates plot
/// upward. No styling dependencies.
pub fn write_svg_polyline(path: &Path, points: &[(f64, f64)]) -> Result<(), CliError> {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for &(x, y) in points {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(-y);
        max_y = max_y.max(-y);
    }
    if points.is_empty() {
        min_x = 0.0;
        max_x = 1.0;
        min_y = 0.0;
        max_y = 1.0;
    }
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    let margin_x = 0.05 * span_x;
    let margin_y = 0.05 * span_y;
    let vb = format!(
        "{:.6e} {:.6e} {:.6e} {:.6e}",
        min_x - margin_x,
        min_y - margin_y,
        span_x + 2.0 * margin_x,
        span_y + 2.0 * margin_y
    );
    let stroke = 0.005 * span_x.max(span_y);

    let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut body = String::new();
    body.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vb}\">\n"
    ));
    body.push_str(&format!(
        "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"{stroke:.6e}\" points=\""
    ));
    for (i, &(x, y)) in points.iter().enumerate() {
        if i > 0 {
            body.push(' ');
        }
        body.push_str(&format!("{x:.6e},{:.6e}", -y));
    }
    body.push_str("\"/>\n</svg>\n");
    file.write_all(body.as_bytes()).map_err(|e| io_err(path, e))
}

/// Reads one of our schema-v1 CSV files back: returns column names and rows.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read `{}`: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let mut header = None;
    for line in lines.by_ref() {
        if line.starts_with('#') {
            continue;
        }
        header = Some(line);
        break;
    }
    let header = header
        .ok_or_else(|| CliError::config(format!("`{}` has no header", path.display())))?;
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    let mut rows = Vec::new();
    for line in lines {
        if line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|v| v.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| {
            CliError::config(format!("bad numeric row in `{}`: {e}", path.display()))
        })?;
        if row.len() != columns.len() {
            return Err(CliError::config(format!(
                "row width mismatch in `{}`: {} vs {}",
                path.display(),
                row.len(),
                columns.len()
            )));
        }
        rows.push(row);
    }
    Ok((columns, rows))
}

pub fn column(
    columns: &[String],
    rows: &[Vec<f64>],
    name: &str,
    path: &Path,
) -> Result<Vec<f64>, CliError> {
    let idx = columns
        .iter()
        .position(|c| c == name)
        .ok_or_else(|| CliError::config(format!("`{}` lacks column `{name}`", path.display())))?;
    Ok(rows.iter().map(|r| r[idx]).collect())
}
