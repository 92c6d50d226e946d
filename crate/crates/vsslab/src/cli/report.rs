//! Text renderings of metrics, comparison tables, and stability reports.
//! Reports use the same flat `key = value` family as the scenario format.

use crate::sim::{ControllerKind, Metrics, SimTrace};
use crate::stability::{StabilityReport, Witness};

fn fmt(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        v.to_string()
    }
}

/// Metrics of one run as a machine-readable document.
pub fn metrics_text(kind: ControllerKind, m: &Metrics, trace: &SimTrace, band: f64) -> String {
    let mut out = String::new();
    out.push_str(&format!("controller = {}\n", kind.name()));
    out.push_str(&format!("scenario.hash = {:016x}\n", trace.scenario_hash));
    out.push_str(&format!("seed = {}\n", trace.seed));
    out.push_str(&format!("band = {band}\n"));
    out.push_str(&format!("metrics.settling_time = {}\n", fmt(m.settling_time)));
    out.push_str(&format!("metrics.overshoot = {}\n", fmt(m.overshoot)));
    out.push_str(&format!("metrics.control_sup = {}\n", fmt(m.control_sup)));
    out.push_str(&format!("metrics.control_effort = {}\n", fmt(m.control_effort)));
    out.push_str(&format!("metrics.chattering_index = {}\n", fmt(m.chattering_index)));
    out.push_str(&format!("metrics.switching_count = {}\n", m.switching_count));
    out
}

/// Fixed-order comparison table over all controllers.
pub fn comparison_table(rows: &[(ControllerKind, Metrics)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<12} {:>14} {:>12} {:>13} {:>15} {:>17} {:>16}\n",
        "controller",
        "settling_time",
        "overshoot",
        "control_sup",
        "control_effort",
        "chattering_index",
        "switching_count"
    ));
    for (kind, m) in rows {
        out.push_str(&format!(
            "{:<12} {:>14} {:>12} {:>13} {:>15} {:>17} {:>16}\n",
            kind.name(),
            trim(m.settling_time, 3),
            trim(m.overshoot, 4),
            trim(m.control_sup, 4),
            trim(m.control_effort, 4),
            trim(m.chattering_index, 2),
            m.switching_count
        ));
    }
    out.push_str("# control_sup is recorded for reference only; its absolute level is gain-dependent\n");
    out
}

fn trim(v: f64, digits: usize) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.digits$}")
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Member(i) => format!("member {i}"),
        Witness::CrossPair(i, j) => format!("cross pair ({i}, {j})"),
        Witness::PNotPositiveDefinite => "P not positive definite".to_string(),
        Witness::State(x) => format!(
            "state [{}]",
            x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
        ),
    }
}

/// Stability checks as a machine-readable document.
pub fn stability_text(reports: &[StabilityReport], skipped: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!("checks = {}\n", reports.len()));
    for (i, r) in reports.iter().enumerate() {
        out.push_str(&format!("check.{i}.condition = {}\n", r.condition));
        out.push_str(&format!("check.{i}.pass = {}\n", r.pass));
        out.push_str(&format!("check.{i}.margin = {}\n", fmt(r.margin)));
        if let Some(w) = &r.witness {
            out.push_str(&format!("check.{i}.witness = {}\n", witness_text(w)));
        }
        if let Some(seed) = r.seed {
            out.push_str(&format!("check.{i}.seed = {seed}\n"));
        }
        if let Some(samples) = r.samples {
            out.push_str(&format!("check.{i}.samples = {samples}\n"));
        }
        for (j, note) in r.notes.iter().enumerate() {
            out.push_str(&format!("check.{i}.note.{j} = {note}\n"));
        }
    }
    for (i, s) in skipped.iter().enumerate() {
        out.push_str(&format!("skipped.{i} = {s}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_one_row_per_controller() {
        let m = Metrics {
            settling_time: 1.0,
            overshoot: 0.0,
            control_sup: 0.5,
            control_effort: 0.1,
            chattering_index: 2.0,
            switching_count: 3,
        };
        let rows: Vec<_> = ControllerKind::ALL.iter().map(|k| (*k, m)).collect();
        let table = comparison_table(&rows);
        // header + five rows + reference note
        assert_eq!(table.lines().count(), 7);
        for kind in ControllerKind::ALL {
            assert!(table.contains(kind.name()));
        }
    }

    #[test]
    fn infinite_settling_rendered() {
        let m = Metrics {
            settling_time: f64::INFINITY,
            overshoot: 0.0,
            control_sup: 0.0,
            control_effort: 0.0,
            chattering_index: 0.0,
            switching_count: 0,
        };
        let table = comparison_table(&[(ControllerKind::Smc1, m)]);
        assert!(table.contains("inf"));
    }
}
