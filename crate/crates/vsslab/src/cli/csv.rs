//! Trace serialization. Floats are written with the shortest representation
//! that round-trips exactly, so a written trace re-reads bit-identically.

use crate::sim::SimTrace;

/// Column header for a trace of the given shape.
pub fn csv_header(trace: &SimTrace) -> String {
    let mut cols: Vec<String> =
        ["t", "omega", "q", "theta", "z", "u", "s"].iter().map(|s| s.to_string()).collect();
    if let Some(s_i) = &trace.s_i {
        let n = s_i.first().map(|row| row.len()).unwrap_or(0);
        for i in 1..=n {
            cols.push(format!("s{i}"));
        }
    }
    if let Some(v) = &trace.validities {
        let n = v.first().map(|row| row.len()).unwrap_or(0);
        for i in 1..=n {
            cols.push(format!("v{i}"));
        }
    }
    cols.join(",")
}

/// Render a trace as CSV: fixed header then one row per step.
pub fn trace_to_csv(trace: &SimTrace) -> String {
    let mut out = String::with_capacity(trace.len() * 64);
    out.push_str(&csv_header(trace));
    out.push('\n');
    for k in 0..trace.len() {
        let x = trace.x[k];
        out.push_str(&format!(
            "{},{},{},{},{},{},{}",
            trace.t[k], x[0], x[1], x[2], x[3], trace.u[k], trace.s[k]
        ));
        if let Some(s_i) = &trace.s_i {
            for v in &s_i[k] {
                out.push(',');
                out.push_str(&v.to_string());
            }
        }
        if let Some(vals) = &trace.validities {
            for v in &vals[k] {
                out.push(',');
                out.push_str(&v.to_string());
            }
        }
        out.push('\n');
    }
    out
}

/// Parse a trace CSV back into columns (header names, column-major values).
pub fn csv_columns(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| "empty csv".to_string())?
        .split(',')
        .map(|s| s.to_string())
        .collect();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(format!("row {} has {} fields, expected {}", idx + 2, fields.len(), header.len()));
        }
        for (c, f) in fields.iter().enumerate() {
            cols[c].push(f.parse::<f64>().map_err(|e| format!("row {}: {e}", idx + 2))?);
        }
    }
    Ok((header, cols))
}

/// Rebuild the minimal trace signals from CSV columns; used to verify the
/// full-precision round trip.
pub fn roundtrip_check(trace: &SimTrace) -> bool {
    let text = trace_to_csv(trace);
    let Ok((_, cols)) = csv_columns(&text) else {
        return false;
    };
    if cols[0].len() != trace.len() {
        return false;
    }
    (0..trace.len()).all(|k| {
        cols[0][k] == trace.t[k]
            && cols[1][k] == trace.x[k][0]
            && cols[2][k] == trace.x[k][1]
            && cols[3][k] == trace.x[k][2]
            && cols[4][k] == trace.x[k][3]
            && cols[5][k] == trace.u[k]
            && cols[6][k] == trace.s[k]
    })
}

/// Header used by sweep tables: swept keys then metric columns.
pub fn sweep_header(axes: &[String]) -> String {
    let mut cols: Vec<String> = vec!["controller".to_string()];
    cols.extend(axes.iter().cloned());
    cols.extend(
        [
            "settling_time",
            "overshoot",
            "control_sup",
            "control_effort",
            "chattering_index",
            "switching_count",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    cols.join(",")
}
