//! Hand-emitted SVG line plots: fixed viewBox, computed ticks, one polyline
//! per signal. No plotting framework, so identical traces produce
//! byte-identical documents.

use crate::sim::SimTrace;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Signals that can be plotted from the given trace.
pub fn available_signals(trace: &SimTrace) -> Vec<&'static str> {
    let mut v = vec!["z", "u", "s"];
    if trace.validities.is_some() {
        v.push("validities");
    }
    v
}

fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = (hi - lo).max(1e-30);
    let raw_step = span / target as f64;
    let mag = 10f64.powf(raw_step.log10().floor());
    let norm = raw_step / mag;
    let step = if norm < 1.5 {
        mag
    } else if norm < 3.0 {
        2.0 * mag
    } else if norm < 7.0 {
        5.0 * mag
    } else {
        10.0 * mag
    };
    let first = (lo / step).ceil() * step;
    let mut ticks = Vec::new();
    let mut v = first;
    while v <= hi + 1e-12 * span {
        // snap near-zero ticks to exactly zero for clean labels
        ticks.push(if v.abs() < step * 1e-9 { 0.0 } else { v });
        v += step;
    }
    ticks
}

struct Frame {
    t_lo: f64,
    t_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn x(&self, t: f64) -> f64 {
        MARGIN_L + (t - self.t_lo) / (self.t_hi - self.t_lo) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_B - (v - self.y_lo) / (self.y_hi - self.y_lo) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn polyline(frame: &Frame, ts: &[f64], ys: &[f64], color: &str) -> String {
    let mut pts = String::with_capacity(ys.len() * 12);
    for (t, y) in ts.iter().zip(ys) {
        if !pts.is_empty() {
            pts.push(' ');
        }
        pts.push_str(&format!("{:.2},{:.2}", frame.x(*t), frame.y(*y)));
    }
    format!("<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" points=\"{pts}\"/>\n")
}

/// Render one signal of the trace as a static SVG document.
pub fn emit_plot(trace: &SimTrace, signal: &str) -> Result<String, String> {
    if trace.is_empty() {
        return Err("empty trace".to_string());
    }
    let avail = available_signals(trace);
    if !avail.contains(&signal) {
        return Err(format!(
            "signal `{signal}` not available for this run; available: {}",
            avail.join(", ")
        ));
    }
    let series: Vec<(String, Vec<f64>)> = match signal {
        "z" => vec![("z".to_string(), trace.x.iter().map(|x| x[3]).collect())],
        "u" => vec![("u".to_string(), trace.u.clone())],
        "s" => vec![("s".to_string(), trace.s.clone())],
        _ => {
            let vals = trace.validities.as_ref().expect("availability checked");
            let n = vals.first().map(|r| r.len()).unwrap_or(0);
            (0..n)
                .map(|i| (format!("v{}", i + 1), vals.iter().map(|r| r[i]).collect()))
                .collect()
        }
    };

    let t_lo = trace.t[0];
    let t_hi = *trace.t.last().unwrap();
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for (_, ys) in &series {
        for &v in ys {
            y_lo = y_lo.min(v);
            y_hi = y_hi.max(v);
        }
    }
    if !(y_hi - y_lo > 1e-12) {
        // constant signal: pad the range so the polyline sits mid-frame
        y_lo -= 1.0;
        y_hi += 1.0;
    }
    let pad = 0.05 * (y_hi - y_lo);
    let frame = Frame { t_lo, t_hi: t_hi.max(t_lo + 1e-9), y_lo: y_lo - pad, y_hi: y_hi + pad };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"monospace\" font-size=\"12\">\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\">{} - {}</text>\n",
        WIDTH / 2.0,
        trace.controller.name(),
        signal
    ));
    // axes
    out.push_str(&format!(
        "<line x1=\"{MARGIN_L}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000\"/>\n",
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    ));
    out.push_str(&format!(
        "<line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{}\" stroke=\"#000\"/>\n",
        HEIGHT - MARGIN_B
    ));
    for tick in nice_ticks(frame.t_lo, frame.t_hi, 8) {
        let x = frame.x(tick);
        out.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"#000\"/>\n",
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{}\" text-anchor=\"middle\">{tick}</text>\n",
            HEIGHT - MARGIN_B + 18.0
        ));
    }
    for tick in nice_ticks(frame.y_lo, frame.y_hi, 6) {
        let y = frame.y(tick);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.2}\" x2=\"{MARGIN_L}\" y2=\"{y:.2}\" stroke=\"#000\"/>\n",
            MARGIN_L - 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{tick}</text>\n",
            MARGIN_L - 8.0,
            y + 4.0
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">t [s]</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 8.0
    ));
    for (i, (name, ys)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        out.push_str(&polyline(&frame, &trace.t, ys, color));
        if series.len() > 1 {
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{name}</text>\n",
                WIDTH - MARGIN_R - 40.0,
                MARGIN_T + 16.0 * (i as f64 + 1.0)
            ));
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run_simulation, ControllerKind, Scenario};

    fn short_trace(kind: ControllerKind) -> SimTrace {
        let mut sc = Scenario::default_scenario().with_controller(kind);
        sc.duration = 0.2;
        run_simulation(&sc).unwrap()
    }

    #[test]
    fn absent_signal_lists_available() {
        let trace = short_trace(ControllerKind::Smc1);
        let err = emit_plot(&trace, "validities").unwrap_err();
        assert!(err.contains("z, u, s"), "error must list signals: {err}");
    }

    #[test]
    fn identical_traces_identical_svg() {
        let a = short_trace(ControllerKind::Smmm1);
        let b = short_trace(ControllerKind::Smmm1);
        assert_eq!(emit_plot(&a, "validities").unwrap(), emit_plot(&b, "validities").unwrap());
    }

    #[test]
    fn constant_signal_single_flat_polyline() {
        let mut sc = Scenario::default_scenario();
        sc.x0 = crate::plant::StateVector::new(0.0, 0.0, 0.0, sc.z_ref);
        sc.disturbance = crate::plant::DisturbanceSpec::off();
        sc.duration = 0.2;
        let trace = run_simulation(&sc).unwrap();
        let svg = emit_plot(&trace, "u").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        // all y coordinates equal for a constant signal
        let pts = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        let ys: Vec<&str> = pts.split(' ').map(|p| p.split(',').nth(1).unwrap()).collect();
        assert!(ys.windows(2).all(|w| w[0] == w[1]));
    }
}
