//! The flat, line-oriented scenario format: `key = value` with dotted
//! section prefixes. Unspecified keys take the documented defaults; the
//! resolved dump echoes every key so a run can be reproduced from its
//! artifacts alone.

use crate::defaults;
use crate::numerics::Vector;
use crate::plant::{matched_direction, DisturbanceKind, DisturbanceSpec, StateVector};
use crate::sim::{ControllerKind, Scenario, ValidityMode};
use crate::surfaces::SlidingSurfaceSpec;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("line {line}: unknown key `{key}` (nearest valid: `{suggestion}`)")]
    UnknownKey { line: usize, key: String, suggestion: String },
    #[error("line {line}: key `{key}` expects {expected}, got `{value}`")]
    TypeMismatch { line: usize, key: String, expected: &'static str, value: String },
    #[error("line {line}: malformed line (expected `key = value`): `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("constraint violation: {0}")]
    Constraint(String),
}

/// Maximum bank size the per-model surface override keys cover.
pub const MAX_BANK: usize = 8;

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    F64,
    U64,
    Usize,
    List,
    Choice(&'static [&'static str]),
}

const CONTROLLERS: &[&str] = &["smc1", "smc2", "smmm1", "smmm2", "smmm-multi"];
const SURFACE_KINDS: &[&str] = &["full-row", "reduced"];
const DISTURBANCE_KINDS: &[&str] = &["off", "sinusoidal", "seeded-random"];
const VALIDITY_MODES: &[&str] = &["raw", "reinforced"];

fn registry() -> Vec<(String, Kind)> {
    let mut keys: Vec<(String, Kind)> = vec![
        ("seed".into(), Kind::U64),
        ("sim.dt".into(), Kind::F64),
        ("sim.duration".into(), Kind::F64),
        ("reference.z".into(), Kind::F64),
        ("envelope.min".into(), Kind::F64),
        ("envelope.max".into(), Kind::F64),
        ("x0.omega".into(), Kind::F64),
        ("x0.q".into(), Kind::F64),
        ("x0.theta".into(), Kind::F64),
        ("x0.z".into(), Kind::F64),
        ("controller.kind".into(), Kind::Choice(CONTROLLERS)),
        ("controller.k".into(), Kind::F64),
        ("controller.epsilon".into(), Kind::F64),
        ("controller.m".into(), Kind::F64),
        ("controller.alpha".into(), Kind::F64),
        ("controller.k2".into(), Kind::F64),
        ("surface.kind".into(), Kind::Choice(SURFACE_KINDS)),
        ("surface.c".into(), Kind::List),
        ("surface.l".into(), Kind::List),
        ("surface.multi_kind".into(), Kind::Choice(SURFACE_KINDS)),
        ("surface.multi_c".into(), Kind::List),
        ("surface.multi_l".into(), Kind::List),
        ("bank.n".into(), Kind::Usize),
        ("bank.delta".into(), Kind::F64),
        ("smmm.k".into(), Kind::List),
        ("smmm.mu".into(), Kind::List),
        ("smmm.epsilon".into(), Kind::F64),
        ("smmm.multi_epsilon".into(), Kind::F64),
        ("disturbance.kind".into(), Kind::Choice(DISTURBANCE_KINDS)),
        ("disturbance.m".into(), Kind::F64),
        ("disturbance.frequency".into(), Kind::F64),
        ("disturbance.seed".into(), Kind::U64),
        ("disturbance.direction".into(), Kind::List),
        ("validity.mode".into(), Kind::Choice(VALIDITY_MODES)),
        ("validity.filter_tau".into(), Kind::F64),
    ];
    for i in 1..=MAX_BANK {
        keys.push((format!("surface.multi_c_{i}"), Kind::List));
    }
    keys
}

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            cur[j] = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn nearest_key(key: &str) -> String {
    // candidate pool: registered keys plus bare section names, so a typo'd
    // section still gets a sensible hint
    let mut pool: Vec<String> = registry().into_iter().map(|(k, _)| k).collect();
    for section in [
        "seed", "sim", "reference", "envelope", "x0", "controller", "surface", "bank", "smmm",
        "disturbance", "validity", "sweep",
    ] {
        pool.push(section.to_string());
    }
    pool.into_iter()
        .min_by_key(|cand| levenshtein(key, cand))
        .unwrap_or_default()
}

struct RawDoc {
    values: BTreeMap<String, (usize, String)>,
    sweeps: Vec<(String, Vec<String>)>,
}

fn parse_raw(text: &str) -> Result<RawDoc, ScenarioError> {
    let known = registry();
    let mut values = BTreeMap::new();
    let mut sweeps = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(ScenarioError::Malformed { line: line_no, text: line.to_string() });
        };
        let key = line[..eq].trim().to_string();
        let value = line[eq + 1..].trim().to_string();
        if let Some(base) = key.strip_prefix("sweep.") {
            if !known.iter().any(|(k, _)| k == base) {
                return Err(ScenarioError::UnknownKey {
                    line: line_no,
                    key: key.clone(),
                    suggestion: format!("sweep.{}", nearest_key(base)),
                });
            }
            let items: Vec<String> =
                value.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
            if items.is_empty() {
                return Err(ScenarioError::TypeMismatch {
                    line: line_no,
                    key,
                    expected: "a comma-separated list of values",
                    value,
                });
            }
            sweeps.push((base.to_string(), items));
            continue;
        }
        if !known.iter().any(|(k, _)| k == &key) {
            return Err(ScenarioError::UnknownKey {
                line: line_no,
                key: key.clone(),
                suggestion: nearest_key(&key),
            });
        }
        if values.contains_key(&key) {
            return Err(ScenarioError::Duplicate { line: line_no, key });
        }
        values.insert(key, (line_no, value));
    }
    Ok(RawDoc { values, sweeps })
}

struct Resolver {
    doc: RawDoc,
}

impl Resolver {
    fn f64(&self, key: &str, default: f64) -> Result<f64, ScenarioError> {
        match self.doc.values.get(key) {
            None => Ok(default),
            Some((line, v)) => v.parse::<f64>().map_err(|_| ScenarioError::TypeMismatch {
                line: *line,
                key: key.into(),
                expected: "a real number",
                value: v.clone(),
            }),
        }
    }

    fn u64(&self, key: &str, default: u64) -> Result<u64, ScenarioError> {
        match self.doc.values.get(key) {
            None => Ok(default),
            Some((line, v)) => v.parse::<u64>().map_err(|_| ScenarioError::TypeMismatch {
                line: *line,
                key: key.into(),
                expected: "an unsigned integer",
                value: v.clone(),
            }),
        }
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize, ScenarioError> {
        match self.doc.values.get(key) {
            None => Ok(default),
            Some((line, v)) => v.parse::<usize>().map_err(|_| ScenarioError::TypeMismatch {
                line: *line,
                key: key.into(),
                expected: "an unsigned integer",
                value: v.clone(),
            }),
        }
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>, ScenarioError> {
        match self.doc.values.get(key) {
            None => Ok(None),
            Some((line, v)) => {
                let parsed: Result<Vec<f64>, _> =
                    v.split(',').map(|item| item.trim().parse::<f64>()).collect();
                parsed.map(Some).map_err(|_| ScenarioError::TypeMismatch {
                    line: *line,
                    key: key.into(),
                    expected: "a comma-separated list of real numbers",
                    value: v.clone(),
                })
            }
        }
    }

    fn choice(&self, key: &str, allowed: &'static [&'static str], default: &str) -> Result<String, ScenarioError> {
        match self.doc.values.get(key) {
            None => Ok(default.to_string()),
            Some((line, v)) => {
                if allowed.contains(&v.as_str()) {
                    Ok(v.clone())
                } else {
                    Err(ScenarioError::TypeMismatch {
                        line: *line,
                        key: key.into(),
                        expected: "one of the documented choices",
                        value: v.clone(),
                    })
                }
            }
        }
    }
}

fn build_surface(
    kind: &str,
    c: Option<Vec<f64>>,
    l: Option<Vec<f64>>,
    default_c: &[f64],
) -> Result<SlidingSurfaceSpec, ScenarioError> {
    match kind {
        "full-row" => {
            let row = c.unwrap_or_else(|| default_c.to_vec());
            if row.len() != 4 {
                return Err(ScenarioError::Constraint("surface rows must have 4 entries".into()));
            }
            SlidingSurfaceSpec::full_row(Vector::new(row))
                .map_err(|e| ScenarioError::Constraint(e.to_string()))
        }
        "reduced" => {
            let coeffs = l.unwrap_or_else(|| vec![1.0, 2.0, 2.0]);
            if coeffs.len() != 3 {
                return Err(ScenarioError::Constraint(
                    "reduced surfaces need 3 coefficients".into(),
                ));
            }
            SlidingSurfaceSpec::reduced(Vector::new(coeffs))
                .map_err(|e| ScenarioError::Constraint(e.to_string()))
        }
        other => Err(ScenarioError::Constraint(format!("unknown surface kind {other}"))),
    }
}

/// Parse a scenario document; unspecified keys take the documented defaults.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let doc = parse_raw(text)?;
    if !doc.sweeps.is_empty() {
        // sweep keys are legal in a document but ignored by plain parsing
    }
    let r = Resolver { doc };

    let controller = ControllerKind::parse(&r.choice("controller.kind", CONTROLLERS, "smc1")?)
        .expect("choice validated");
    let bank_n = r.usize("bank.n", defaults::BANK_N)?;
    if !(1..=MAX_BANK).contains(&bank_n) {
        return Err(ScenarioError::Constraint(format!("bank.n must be in 1..={MAX_BANK}")));
    }

    let surface = build_surface(
        &r.choice("surface.kind", SURFACE_KINDS, "full-row")?,
        r.list("surface.c")?,
        r.list("surface.l")?,
        &defaults::SURFACE_FAST,
    )?;
    let multi_shared = build_surface(
        &r.choice("surface.multi_kind", SURFACE_KINDS, "full-row")?,
        r.list("surface.multi_c")?,
        r.list("surface.multi_l")?,
        &defaults::SURFACE_SLOW,
    )?;
    let mut multi_surfaces = vec![multi_shared; bank_n];
    for (i, slot) in multi_surfaces.iter_mut().enumerate() {
        if let Some(row) = r.list(&format!("surface.multi_c_{}", i + 1))? {
            if row.len() != 4 {
                return Err(ScenarioError::Constraint(format!(
                    "surface.multi_c_{} must have 4 entries",
                    i + 1
                )));
            }
            *slot = SlidingSurfaceSpec::full_row(Vector::new(row))
                .map_err(|e| ScenarioError::Constraint(e.to_string()))?;
        }
    }

    let gains = match r.list("smmm.k")? {
        None => vec![defaults::K_SWITCHING; bank_n],
        Some(v) if v.len() == 1 => vec![v[0]; bank_n],
        Some(v) if v.len() == bank_n => v,
        Some(v) => {
            return Err(ScenarioError::Constraint(format!(
                "smmm.k needs 1 or {bank_n} entries, got {}",
                v.len()
            )))
        }
    };
    let mu = match r.list("smmm.mu")? {
        None => vec![1.0 / bank_n as f64; bank_n],
        Some(v) if v.len() == bank_n => v,
        Some(v) => {
            return Err(ScenarioError::Constraint(format!(
                "smmm.mu needs {bank_n} entries, got {}",
                v.len()
            )))
        }
    };

    let dist_kind = match r.choice("disturbance.kind", DISTURBANCE_KINDS, "sinusoidal")?.as_str() {
        "off" => DisturbanceKind::Off,
        "sinusoidal" => DisturbanceKind::Sinusoidal {
            frequency: r.f64("disturbance.frequency", defaults::DISTURBANCE_FREQUENCY)?,
        },
        _ => DisturbanceKind::SeededRandom {
            seed: r.u64("disturbance.seed", defaults::DISTURBANCE_SEED)?,
        },
    };
    let dist_dir = match r.list("disturbance.direction")? {
        None => matched_direction(),
        Some(v) if v.len() == 4 => Vector::new(v),
        Some(v) => {
            return Err(ScenarioError::Constraint(format!(
                "disturbance.direction needs 4 entries, got {}",
                v.len()
            )))
        }
    };
    let disturbance =
        DisturbanceSpec::new(r.f64("disturbance.m", defaults::DISTURBANCE_M)?, dist_kind, dist_dir)
            .map_err(|e| ScenarioError::Constraint(e.to_string()))?;

    let sc = Scenario {
        controller,
        dt: r.f64("sim.dt", defaults::DT)?,
        duration: r.f64("sim.duration", defaults::DURATION)?,
        z_ref: r.f64("reference.z", defaults::Z_REF)?,
        envelope: (
            r.f64("envelope.min", defaults::ENVELOPE_MIN)?,
            r.f64("envelope.max", defaults::ENVELOPE_MAX)?,
        ),
        x0: StateVector::new(
            r.f64("x0.omega", defaults::X0[0])?,
            r.f64("x0.q", defaults::X0[1])?,
            r.f64("x0.theta", defaults::X0[2])?,
            r.f64("x0.z", defaults::X0[3])?,
        ),
        surface,
        multi_surfaces,
        epsilon_smc: r.f64("controller.epsilon", defaults::EPSILON_SMC)?,
        epsilon_smmm: r.f64("smmm.epsilon", defaults::EPSILON_SMMM)?,
        epsilon_multi: r.f64("smmm.multi_epsilon", defaults::EPSILON_SMMM_MULTI)?,
        k_switching: r.f64("controller.k", defaults::K_SWITCHING)?,
        alpha: r.f64("controller.alpha", defaults::ALPHA)?,
        k2: r.f64("controller.k2", defaults::K2)?,
        m_bound: r.f64("controller.m", defaults::M_BOUND)?,
        bank_n,
        bank_delta: r.f64("bank.delta", defaults::BANK_DELTA)?,
        smmm_gains: gains,
        smmm_mu: mu,
        disturbance,
        validity_mode: match r.choice("validity.mode", VALIDITY_MODES, "reinforced")?.as_str() {
            "raw" => ValidityMode::Raw,
            _ => ValidityMode::Reinforced,
        },
        residue_filter_tau: r.f64("validity.filter_tau", 0.0)?,
        seed: r.u64("seed", defaults::SEED)?,
    };
    sc.validate().map_err(|e| ScenarioError::Constraint(e.to_string()))?;
    Ok(sc)
}

/// Sweep axes declared in a document: `(key, raw values)` in file order.
pub fn parse_sweep_axes(text: &str) -> Result<Vec<(String, Vec<String>)>, ScenarioError> {
    Ok(parse_raw(text)?.sweeps)
}

fn fmt_list(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

fn dump_surface(out: &mut String, prefix_kind: &str, prefix_c: &str, prefix_l: &str, s: &SlidingSurfaceSpec) {
    match s {
        SlidingSurfaceSpec::FullRow { c } => {
            out.push_str(&format!("{prefix_kind} = full-row\n"));
            out.push_str(&format!("{prefix_c} = {}\n", fmt_list(c.as_slice())));
        }
        SlidingSurfaceSpec::Reduced { l } => {
            out.push_str(&format!("{prefix_kind} = reduced\n"));
            out.push_str(&format!("{prefix_l} = {}\n", fmt_list(l.as_slice())));
        }
    }
}

/// Render the fully resolved scenario; re-parsing the dump yields an
/// identical scenario.
pub fn dump_scenario(sc: &Scenario) -> String {
    let mut out = String::new();
    out.push_str(&format!("seed = {}\n", sc.seed));
    out.push_str(&format!("sim.dt = {}\n", sc.dt));
    out.push_str(&format!("sim.duration = {}\n", sc.duration));
    out.push_str(&format!("reference.z = {}\n", sc.z_ref));
    out.push_str(&format!("envelope.min = {}\n", sc.envelope.0));
    out.push_str(&format!("envelope.max = {}\n", sc.envelope.1));
    out.push_str(&format!("x0.omega = {}\n", sc.x0.omega));
    out.push_str(&format!("x0.q = {}\n", sc.x0.q));
    out.push_str(&format!("x0.theta = {}\n", sc.x0.theta));
    out.push_str(&format!("x0.z = {}\n", sc.x0.z));
    out.push_str(&format!("controller.kind = {}\n", sc.controller.name()));
    out.push_str(&format!("controller.k = {}\n", sc.k_switching));
    out.push_str(&format!("controller.epsilon = {}\n", sc.epsilon_smc));
    out.push_str(&format!("controller.m = {}\n", sc.m_bound));
    out.push_str(&format!("controller.alpha = {}\n", sc.alpha));
    out.push_str(&format!("controller.k2 = {}\n", sc.k2));
    dump_surface(&mut out, "surface.kind", "surface.c", "surface.l", &sc.surface);
    // the shared multi surface is the first one; per-model overrides follow
    dump_surface(
        &mut out,
        "surface.multi_kind",
        "surface.multi_c",
        "surface.multi_l",
        &sc.multi_surfaces[0],
    );
    for (i, spec) in sc.multi_surfaces.iter().enumerate().skip(1) {
        if spec != &sc.multi_surfaces[0] {
            if let SlidingSurfaceSpec::FullRow { c } = spec {
                out.push_str(&format!("surface.multi_c_{} = {}\n", i + 1, fmt_list(c.as_slice())));
            }
        }
    }
    out.push_str(&format!("bank.n = {}\n", sc.bank_n));
    out.push_str(&format!("bank.delta = {}\n", sc.bank_delta));
    out.push_str(&format!("smmm.k = {}\n", fmt_list(&sc.smmm_gains)));
    out.push_str(&format!("smmm.mu = {}\n", fmt_list(&sc.smmm_mu)));
    out.push_str(&format!("smmm.epsilon = {}\n", sc.epsilon_smmm));
    out.push_str(&format!("smmm.multi_epsilon = {}\n", sc.epsilon_multi));
    let (kind, freq, dseed) = match sc.disturbance.kind {
        DisturbanceKind::Off => ("off", defaults::DISTURBANCE_FREQUENCY, defaults::DISTURBANCE_SEED),
        DisturbanceKind::Sinusoidal { frequency } => ("sinusoidal", frequency, defaults::DISTURBANCE_SEED),
        DisturbanceKind::SeededRandom { seed } => {
            ("seeded-random", defaults::DISTURBANCE_FREQUENCY, seed)
        }
    };
    out.push_str(&format!("disturbance.kind = {kind}\n"));
    out.push_str(&format!("disturbance.m = {}\n", sc.disturbance.m_bound));
    out.push_str(&format!("disturbance.frequency = {freq}\n"));
    out.push_str(&format!("disturbance.seed = {dseed}\n"));
    out.push_str(&format!(
        "disturbance.direction = {}\n",
        fmt_list(sc.disturbance.direction.as_slice())
    ));
    out.push_str(&format!(
        "validity.mode = {}\n",
        match sc.validity_mode {
            ValidityMode::Raw => "raw",
            ValidityMode::Reinforced => "reinforced",
        }
    ));
    out.push_str(&format!("validity.filter_tau = {}\n", sc.residue_filter_tau));
    out
}

/// FNV-1a digest of the resolved scenario text.
pub fn scenario_hash(sc: &Scenario) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for byte in dump_scenario(sc).bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_documented_defaults() {
        let sc = parse_scenario("").unwrap();
        assert_eq!(sc.controller, ControllerKind::Smc1);
        assert_eq!(sc.dt, 1e-3);
        assert_eq!(sc.duration, 30.0);
        assert_eq!(sc.z_ref, 1.0);
        assert_eq!(sc.m_bound, 0.1);
        assert_eq!(sc.bank_n, 3);
        assert_eq!(sc.x0.z, 0.9);
    }

    #[test]
    fn partial_document_overrides_only_named_keys() {
        let sc = parse_scenario("controller.kind = smmm-multi\nbank.n = 3\nbank.delta = 0.2\n")
            .unwrap();
        assert_eq!(sc.controller, ControllerKind::SmmmMulti);
        assert_eq!(sc.bank_delta, 0.2);
        assert_eq!(sc.dt, 1e-3);
        assert_eq!(sc.z_ref, 1.0);
    }

    #[test]
    fn unknown_key_suggests_nearest() {
        let err = parse_scenario("controler = smc1\n").unwrap_err();
        match err {
            ScenarioError::UnknownKey { suggestion, .. } => {
                assert!(suggestion.starts_with("controller"), "suggestion {suggestion}");
            }
            other => panic!("expected unknown key, got {other}"),
        }
    }

    #[test]
    fn type_mismatch_names_location() {
        let err = parse_scenario("\n\nsim.dt = fast\n").unwrap_err();
        match err {
            ScenarioError::TypeMismatch { line, key, .. } => {
                assert_eq!(line, 3);
                assert_eq!(key, "sim.dt");
            }
            other => panic!("expected type mismatch, got {other}"),
        }
    }

    #[test]
    fn constraint_violations_rejected() {
        assert!(matches!(
            parse_scenario("sim.dt = -0.001\n"),
            Err(ScenarioError::Constraint(_))
        ));
        assert!(matches!(
            parse_scenario("reference.z = 5.0\n"),
            Err(ScenarioError::Constraint(_))
        ));
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let sc = parse_scenario("# a comment\n\nseed = 7 # trailing\n").unwrap();
        assert_eq!(sc.seed, 7);
    }

    #[test]
    fn duplicate_key_rejected() {
        assert!(matches!(
            parse_scenario("seed = 1\nseed = 2\n"),
            Err(ScenarioError::Duplicate { .. })
        ));
    }

    #[test]
    fn dump_roundtrip_identity() {
        for doc in [
            "",
            "controller.kind = smmm-multi\n",
            "controller.kind = smmm2\nbank.n = 5\nsmmm.k = 2\n",
            "surface.kind = reduced\nsurface.l = 1, 2, 2\ncontroller.kind = smc2\nsim.duration = 3\n",
            "disturbance.kind = seeded-random\ndisturbance.seed = 123\n",
            "surface.multi_c_2 = 40, -12, -9, -0.1\ncontroller.kind = smmm-multi\n",
        ] {
            let sc = parse_scenario(doc).unwrap();
            let dumped = dump_scenario(&sc);
            let re = parse_scenario(&dumped).unwrap();
            assert_eq!(sc, re, "roundtrip failed for {doc:?}");
            assert_eq!(scenario_hash(&sc), scenario_hash(&re));
        }
    }

    #[test]
    fn sweep_axes_collected() {
        let axes =
            parse_sweep_axes("sweep.controller.epsilon = 0.01, 0.05\nsweep.bank.n = 1, 3\n")
                .unwrap();
        assert_eq!(axes.len(), 2);
        assert_eq!(axes[0].0, "controller.epsilon");
        assert_eq!(axes[0].1, vec!["0.01".to_string(), "0.05".to_string()]);
    }

    #[test]
    fn sweep_unknown_base_key_rejected() {
        assert!(matches!(
            parse_sweep_axes("sweep.controller.gain = 1, 2\n"),
            Err(ScenarioError::UnknownKey { .. })
        ));
    }
}
