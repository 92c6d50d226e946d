//! Deterministic closed-loop simulation of any controller against the
//! plant, with the parallel submodel bank for residues, and metric
//! extraction from the recorded trace.
//!
//! One run is strictly sequential; identical scenarios produce bit-identical
//! traces. Controls are held constant over each integration step, and the
//! submodel predictions restart from the measured plant state every step so
//! residues reflect one step of model mismatch only.

use crate::controllers::{smc1_step, smc2_step, ControlError, Smc1Params, Smc2State};
use crate::defaults;
use crate::multimodel::{reinforce, residues, validities, ResidueFilter};
use crate::numerics::{rk4_step, NumericsError, Vector};
use crate::plant::{
    build_model_bank, disturbance_eval, model_output, DisturbanceKind, DisturbanceSpec, ModelBank,
    PlantError, StateVector,
};
use crate::smmm::{smmm_multi_step, smmm_single_step, SmOrder, SmmmConfig, SmmmState, SmmmSurfaces};
use crate::surfaces::{SecondOrderParams, SlidingSurfaceSpec, SurfaceError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("scenario invalid: {0}")]
    Invalid(String),
    #[error("simulation diverged at step {step} (t = {t})")]
    Diverged { step: usize, t: f64 },
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Plant(#[from] PlantError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("empty trace")]
    EmptyTrace,
}

/// Which control law drives the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControllerKind {
    Smc1,
    Smc2,
    Smmm1,
    Smmm2,
    SmmmMulti,
}

impl ControllerKind {
    pub const ALL: [ControllerKind; 5] = [
        ControllerKind::Smc1,
        ControllerKind::Smc2,
        ControllerKind::Smmm1,
        ControllerKind::Smmm2,
        ControllerKind::SmmmMulti,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ControllerKind::Smc1 => "smc1",
            ControllerKind::Smc2 => "smc2",
            ControllerKind::Smmm1 => "smmm1",
            ControllerKind::Smmm2 => "smmm2",
            ControllerKind::SmmmMulti => "smmm-multi",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn is_multimodel(&self) -> bool {
        matches!(self, ControllerKind::Smmm1 | ControllerKind::Smmm2 | ControllerKind::SmmmMulti)
    }
}

/// How validities enter the loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidityMode {
    Raw,
    Reinforced,
}

/// Complete, resolved description of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub controller: ControllerKind,
    pub dt: f64,
    pub duration: f64,
    pub z_ref: f64,
    pub envelope: (f64, f64),
    pub x0: StateVector,
    /// surface used by the single-surface controllers
    pub surface: SlidingSurfaceSpec,
    /// per-submodel surfaces of the multi-surface controller
    pub multi_surfaces: Vec<SlidingSurfaceSpec>,
    pub epsilon_smc: f64,
    pub epsilon_smmm: f64,
    pub epsilon_multi: f64,
    pub k_switching: f64,
    pub alpha: f64,
    pub k2: f64,
    pub m_bound: f64,
    pub bank_n: usize,
    pub bank_delta: f64,
    pub smmm_gains: Vec<f64>,
    pub smmm_mu: Vec<f64>,
    pub disturbance: DisturbanceSpec,
    pub validity_mode: ValidityMode,
    pub residue_filter_tau: f64,
    pub seed: u64,
}

impl Scenario {
    /// The documented default run: first-order law on the fast surface,
    /// matched sinusoidal disturbance, three-model bank.
    pub fn default_scenario() -> Scenario {
        let surface =
            SlidingSurfaceSpec::full_row(Vector::from_slice(&defaults::SURFACE_FAST)).unwrap();
        let slow =
            SlidingSurfaceSpec::full_row(Vector::from_slice(&defaults::SURFACE_SLOW)).unwrap();
        Scenario {
            controller: ControllerKind::Smc1,
            dt: defaults::DT,
            duration: defaults::DURATION,
            z_ref: defaults::Z_REF,
            envelope: (defaults::ENVELOPE_MIN, defaults::ENVELOPE_MAX),
            x0: StateVector::new(
                defaults::X0[0],
                defaults::X0[1],
                defaults::X0[2],
                defaults::X0[3],
            ),
            surface,
            multi_surfaces: vec![slow; defaults::BANK_N],
            epsilon_smc: defaults::EPSILON_SMC,
            epsilon_smmm: defaults::EPSILON_SMMM,
            epsilon_multi: defaults::EPSILON_SMMM_MULTI,
            k_switching: defaults::K_SWITCHING,
            alpha: defaults::ALPHA,
            k2: defaults::K2,
            m_bound: defaults::M_BOUND,
            bank_n: defaults::BANK_N,
            bank_delta: defaults::BANK_DELTA,
            smmm_gains: vec![defaults::K_SWITCHING; defaults::BANK_N],
            smmm_mu: vec![1.0 / defaults::BANK_N as f64; defaults::BANK_N],
            disturbance: DisturbanceSpec::new(
                defaults::DISTURBANCE_M,
                DisturbanceKind::Sinusoidal { frequency: defaults::DISTURBANCE_FREQUENCY },
                crate::plant::matched_direction(),
            )
            .unwrap(),
            validity_mode: ValidityMode::Reinforced,
            residue_filter_tau: 0.0,
            seed: defaults::SEED,
        }
    }

    pub fn with_controller(mut self, kind: ControllerKind) -> Scenario {
        self.controller = kind;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt > 0.0) {
            return Err(SimError::Invalid("sim.dt must be positive".into()));
        }
        if self.duration < self.dt {
            return Err(SimError::Invalid("sim.duration must be at least one step".into()));
        }
        let (lo, hi) = self.envelope;
        if !(lo < hi) {
            return Err(SimError::Invalid("envelope.min must be below envelope.max".into()));
        }
        if self.z_ref < lo || self.z_ref > hi {
            return Err(SimError::Invalid(format!(
                "reference.z = {} outside the envelope [{lo}, {hi}]",
                self.z_ref
            )));
        }
        if self.bank_n < 1 || self.bank_n > 8 {
            return Err(SimError::Invalid("bank.n must be in 1..=8".into()));
        }
        if !(0.0..1.0).contains(&self.bank_delta) {
            return Err(SimError::Invalid("bank.delta must be in [0, 1)".into()));
        }
        for (name, eps) in [
            ("controller.epsilon", self.epsilon_smc),
            ("smmm.epsilon", self.epsilon_smmm),
            ("smmm.multi_epsilon", self.epsilon_multi),
        ] {
            if !(eps > 0.0) {
                return Err(SimError::Invalid(format!("{name} must be positive")));
            }
        }
        if !(self.k_switching > 0.0) || !(self.alpha > 0.0) || !(self.k2 > 0.0) {
            return Err(SimError::Invalid("gains k, alpha, k2 must be positive".into()));
        }
        if !(self.m_bound >= 0.0) {
            return Err(SimError::Invalid("controller.m must be nonnegative".into()));
        }
        if self.smmm_gains.len() != self.bank_n || self.smmm_gains.iter().any(|&k| !(k > 0.0)) {
            return Err(SimError::Invalid("smmm.k needs one positive gain per bank model".into()));
        }
        if self.smmm_mu.len() != self.bank_n {
            return Err(SimError::Invalid("smmm.mu needs one weight per bank model".into()));
        }
        if self.multi_surfaces.len() != self.bank_n {
            return Err(SimError::Invalid(
                "multi-surface mode needs one surface per bank model".into(),
            ));
        }
        Ok(())
    }

    /// Stable digest of the resolved content, recorded in every trace.
    pub fn hash(&self) -> u64 {
        crate::cli::scenario_hash(self)
    }

    pub fn smmm_config(&self) -> SmmmConfig {
        let (surfaces, epsilon, order) = match self.controller {
            ControllerKind::SmmmMulti => (
                SmmmSurfaces::PerModel(self.multi_surfaces.clone()),
                self.epsilon_multi,
                SmOrder::First,
            ),
            ControllerKind::Smmm2 => (
                SmmmSurfaces::Shared(self.surface.clone()),
                self.epsilon_smmm,
                SmOrder::Second,
            ),
            _ => (SmmmSurfaces::Shared(self.surface.clone()), self.epsilon_smmm, SmOrder::First),
        };
        SmmmConfig {
            gains: self.smmm_gains.clone(),
            mu: self.smmm_mu.clone(),
            epsilon,
            m_bound: self.m_bound,
            surfaces,
            order,
            second_order: Some(SecondOrderParams::new(self.alpha).unwrap()),
            k2: self.k2,
        }
    }
}

/// Time-indexed record of one run.
#[derive(Debug, Clone)]
pub struct SimTrace {
    pub controller: ControllerKind,
    pub dt: f64,
    pub t: Vec<f64>,
    /// physical state per step
    pub x: Vec<[f64; 4]>,
    pub u: Vec<f64>,
    /// operative surface value per step (the aggregate for multi-surface)
    pub s: Vec<f64>,
    /// per-submodel surface values, multi-surface runs only
    pub s_i: Option<Vec<Vec<f64>>>,
    /// validities per step, multimodel runs only
    pub validities: Option<Vec<Vec<f64>>>,
    /// disturbance realization sampled at each step start
    pub disturbance: Vec<[f64; 4]>,
    pub z_ref: f64,
    pub scenario_hash: u64,
    pub seed: u64,
}

impl SimTrace {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Metrics extracted from a trace.
#[derive(Debug, Clone, Copy)]
pub struct Metrics {
    /// first entry into the band around the reference with no later exit;
    /// infinity when the trace never settles
    pub settling_time: f64,
    /// peak depth excursion beyond the reference, in the approach direction
    pub overshoot: f64,
    pub control_sup: f64,
    /// integral of u^2 dt over the run
    pub control_effort: f64,
    /// total variation of the control sequence
    pub chattering_index: f64,
    /// sign changes of consecutive control increments
    pub switching_count: u64,
}

struct BankRuntime {
    bank: ModelBank,
    /// one-step-ahead predictions from the previous step
    predictions: Option<Vec<Vector>>,
    filter: ResidueFilter,
}

enum ControllerRuntime {
    Smc1(Smc1Params),
    Smc2(Smc2State),
    Smmm { cfg: SmmmConfig, state: SmmmState },
    SmmmMulti { cfg: SmmmConfig },
}

/// Run one scenario to completion.
pub fn run_simulation(sc: &Scenario) -> Result<SimTrace, SimError> {
    sc.validate()?;
    let plant = crate::plant::auv_nominal();
    let x_ref = Vector::from_slice(&[0.0, 0.0, 0.0, sc.z_ref]);
    let steps = (sc.duration / sc.dt).floor() as usize;
    let multimodel = sc.controller.is_multimodel();

    let mut bank_rt = if multimodel {
        Some(BankRuntime {
            bank: build_model_bank(&plant, sc.bank_n, sc.bank_delta)?,
            predictions: None,
            filter: ResidueFilter::new(sc.residue_filter_tau),
        })
    } else {
        None
    };

    let mut controller = match sc.controller {
        ControllerKind::Smc1 => ControllerRuntime::Smc1(
            Smc1Params::new(sc.k_switching, sc.epsilon_smc, sc.m_bound)
                .map_err(SimError::Control)?,
        ),
        ControllerKind::Smc2 => ControllerRuntime::Smc2(
            Smc2State::new(
                SecondOrderParams::new(sc.alpha).map_err(SimError::Surface)?,
                sc.k2,
            )
            .map_err(SimError::Control)?,
        ),
        ControllerKind::Smmm1 | ControllerKind::Smmm2 => ControllerRuntime::Smmm {
            cfg: sc.smmm_config(),
            state: SmmmState::new(sc.bank_n),
        },
        ControllerKind::SmmmMulti => ControllerRuntime::SmmmMulti { cfg: sc.smmm_config() },
    };

    let mut x = sc.x0.to_vector();
    let mut trace = SimTrace {
        controller: sc.controller,
        dt: sc.dt,
        t: Vec::with_capacity(steps + 1),
        x: Vec::with_capacity(steps + 1),
        u: Vec::with_capacity(steps + 1),
        s: Vec::with_capacity(steps + 1),
        s_i: matches!(sc.controller, ControllerKind::SmmmMulti).then(Vec::new),
        validities: multimodel.then(Vec::new),
        disturbance: Vec::with_capacity(steps + 1),
        z_ref: sc.z_ref,
        scenario_hash: sc.hash(),
        seed: sc.seed,
    };

    for step in 0..=steps {
        let t = step as f64 * sc.dt;
        let x_err = x.sub(&x_ref);

        // validities from one-step prediction residues, frozen for this step
        let v = if let Some(rt) = bank_rt.as_mut() {
            let raw = match &rt.predictions {
                None => crate::multimodel::ResidueVector::new(vec![0.0; rt.bank.len()])
                    .expect("nonempty"),
                Some(preds) => {
                    let y = model_output(&plant, &x)?;
                    let y_models: Vec<f64> = preds
                        .iter()
                        .map(|p| model_output(&plant, p))
                        .collect::<Result<_, _>>()?;
                    residues(y, &y_models).expect("bank nonempty")
                }
            };
            let filtered = rt.filter.step(&raw, sc.dt);
            let mut weights = validities(&filtered);
            if sc.validity_mode == ValidityMode::Reinforced {
                weights = reinforce(&weights);
            }
            Some(weights)
        } else {
            None
        };

        // controller step on the error state
        let (u, s_val, s_list) = match &mut controller {
            ControllerRuntime::Smc1(p) => {
                let u = smc1_step(&plant, &sc.surface, p, &x_err)?;
                (u, sc.surface.c_eff().dot(&x_err), None)
            }
            ControllerRuntime::Smc2(state) => {
                let u = smc2_step(&plant, &sc.surface, state, &x_err, sc.dt)?;
                (u, sc.surface.c_eff().dot(&x_err), None)
            }
            ControllerRuntime::Smmm { cfg, state } => {
                let rt = bank_rt.as_ref().expect("multimodel runtime");
                let weights = v.as_ref().expect("validities computed");
                let u = smmm_single_step(&rt.bank, cfg, state, weights, &x_err, sc.dt)?;
                (u, sc.surface.c_eff().dot(&x_err), None)
            }
            ControllerRuntime::SmmmMulti { cfg } => {
                let rt = bank_rt.as_ref().expect("multimodel runtime");
                let weights = v.as_ref().expect("validities computed");
                let (u, aggregate) = smmm_multi_step(&rt.bank, cfg, weights, &x_err)?;
                let per: Vec<f64> = sc
                    .multi_surfaces
                    .iter()
                    .map(|spec| spec.c_eff().dot(&x_err))
                    .collect();
                (u, aggregate, Some(per))
            }
        };

        // disturbance realization for the record; the random kind is frozen
        // over the step, the sinusoid is evaluated continuously inside RK4
        let phi_record = disturbance_eval(&sc.disturbance, &x_err, t);

        trace.t.push(t);
        trace.x.push([x[0], x[1], x[2], x[3]]);
        trace.u.push(u);
        trace.s.push(s_val);
        if let (Some(buf), Some(list)) = (trace.s_i.as_mut(), s_list) {
            buf.push(list);
        }
        if let (Some(buf), Some(weights)) = (trace.validities.as_mut(), v.as_ref()) {
            buf.push(weights.as_slice().to_vec());
        }
        trace.disturbance.push([phi_record[0], phi_record[1], phi_record[2], phi_record[3]]);

        if step == steps {
            break;
        }

        // advance the plant with zero-order-hold control
        let frozen_phi = match sc.disturbance.kind {
            DisturbanceKind::SeededRandom { .. } => Some(phi_record.clone()),
            _ => None,
        };
        let plant_rhs = |tau: f64, xs: &Vector| -> Vector {
            let xe = xs.sub(&x_ref);
            let phi = match &frozen_phi {
                Some(p) => p.clone(),
                None => disturbance_eval(&sc.disturbance, &xe, tau),
            };
            plant.a.matvec(xs).axpy(u, &plant.b_vector()).add(&phi)
        };
        let x_next = rk4_step(plant_rhs, t, &x, sc.dt).map_err(|e| match e {
            NumericsError::Overflow { t } => SimError::Diverged { step, t },
            other => SimError::Invalid(other.to_string()),
        })?;

        // one-step predictions of every submodel from the measured state,
        // same control, no disturbance
        if let Some(rt) = bank_rt.as_mut() {
            let mut preds = Vec::with_capacity(rt.bank.len());
            for model in &rt.bank.models {
                let rhs = |_tau: f64, xs: &Vector| -> Vector {
                    model.a.matvec(xs).axpy(u, &model.b_vector())
                };
                let p = rk4_step(rhs, t, &x, sc.dt).map_err(|e| match e {
                    NumericsError::Overflow { t } => SimError::Diverged { step, t },
                    other => SimError::Invalid(other.to_string()),
                })?;
                preds.push(p);
            }
            rt.predictions = Some(preds);
        }

        x = x_next;
        if !x.is_finite() {
            return Err(SimError::Diverged { step, t });
        }
    }
    Ok(trace)
}

/// Extract the metrics of a trace. The settling band is
/// `z_ref +/- band * max(|z_ref|, 1)`.
pub fn compute_metrics(trace: &SimTrace, z_ref: f64, band: f64) -> Result<Metrics, SimError> {
    if trace.is_empty() {
        return Err(SimError::EmptyTrace);
    }
    if !(band > 0.0) {
        return Err(SimError::Invalid("band must be positive".into()));
    }
    let half_width = band * z_ref.abs().max(1.0);
    let inside = |z: f64| (z - z_ref).abs() <= half_width;

    let mut settling_time = f64::INFINITY;
    let last_outside = trace.x.iter().rposition(|x| !inside(x[3]));
    match last_outside {
        None => settling_time = 0.0,
        Some(idx) if idx + 1 < trace.len() => settling_time = trace.t[idx + 1],
        Some(_) => {}
    }

    let z0 = trace.x[0][3];
    let dir = if (z_ref - z0).abs() < 1e-15 { 1.0 } else { (z_ref - z0).signum() };
    let overshoot = trace
        .x
        .iter()
        .map(|x| dir * (x[3] - z_ref))
        .fold(0.0_f64, f64::max);

    let control_sup = trace.u.iter().fold(0.0_f64, |m, u| m.max(u.abs()));
    let mut control_effort = 0.0;
    for w in trace.u.windows(2) {
        control_effort += 0.5 * (w[0] * w[0] + w[1] * w[1]) * trace.dt;
    }
    let mut chattering_index = 0.0;
    let mut switching_count = 0u64;
    let mut prev_sign = 0.0;
    for w in trace.u.windows(2) {
        let du = w[1] - w[0];
        chattering_index += du.abs();
        let sg = crate::controllers::sign0(du);
        if sg != 0.0 {
            if prev_sign != 0.0 && sg != prev_sign {
                switching_count += 1;
            }
            prev_sign = sg;
        }
    }
    Ok(Metrics {
        settling_time,
        overshoot,
        control_sup,
        control_effort,
        chattering_index,
        switching_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(sc: &mut Scenario, t: f64) {
        sc.duration = t;
    }

    #[test]
    fn equilibrium_start_stays_put() {
        let mut sc = Scenario::default_scenario();
        sc.x0 = StateVector::new(0.0, 0.0, 0.0, sc.z_ref);
        sc.disturbance = DisturbanceSpec::off();
        short(&mut sc, 0.5);
        let trace = run_simulation(&sc).unwrap();
        for (x, u) in trace.x.iter().zip(&trace.u) {
            assert_eq!(x[3], sc.z_ref);
            assert_eq!(*u, 0.0);
        }
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let mut sc = Scenario::default_scenario().with_controller(ControllerKind::SmmmMulti);
        short(&mut sc, 1.0);
        let a = run_simulation(&sc).unwrap();
        let b = run_simulation(&sc).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.u, b.u);
        assert_eq!(a.s, b.s);
        assert_eq!(a.validities, b.validities);
    }

    #[test]
    fn shorter_run_is_prefix_of_longer() {
        let mut a = Scenario::default_scenario().with_controller(ControllerKind::Smmm1);
        let mut b = a.clone();
        short(&mut a, 1.0);
        short(&mut b, 2.0);
        let ta = run_simulation(&a).unwrap();
        let tb = run_simulation(&b).unwrap();
        assert_eq!(ta.len(), 1001);
        assert_eq!(&tb.x[..ta.len()], &ta.x[..]);
        assert_eq!(&tb.u[..ta.len()], &ta.u[..]);
    }

    #[test]
    fn trace_grid_uniform_and_finite() {
        let mut sc = Scenario::default_scenario().with_controller(ControllerKind::Smc2);
        short(&mut sc, 2.0);
        let trace = run_simulation(&sc).unwrap();
        assert_eq!(trace.len(), 2001);
        for (k, t) in trace.t.iter().enumerate() {
            assert_eq!(*t, k as f64 * sc.dt);
        }
        for x in &trace.x {
            assert!(x.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn validity_convexity_along_run() {
        let mut sc = Scenario::default_scenario().with_controller(ControllerKind::Smmm1);
        short(&mut sc, 2.0);
        let trace = run_simulation(&sc).unwrap();
        for v in trace.validities.as_ref().unwrap() {
            let sum: f64 = v.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            for &w in v {
                assert!((-1e-12..=1.0 + 1e-12).contains(&w));
            }
        }
    }

    #[test]
    fn divergence_reports_step() {
        // a fused gain far beyond the discrete stability limit k CB dt < 2
        // blows the loop up within a few hundred steps
        let mut sc = Scenario::default_scenario().with_controller(ControllerKind::Smmm1);
        sc.smmm_gains = vec![1e6; sc.bank_n];
        match run_simulation(&sc) {
            Err(SimError::Diverged { step, .. }) => assert!(step > 0),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn invalid_reference_rejected() {
        let mut sc = Scenario::default_scenario();
        sc.z_ref = 2.0;
        assert!(matches!(run_simulation(&sc), Err(SimError::Invalid(_))));
    }

    #[test]
    fn metrics_settling_cases() {
        let mut sc = Scenario::default_scenario();
        sc.x0 = StateVector::new(0.0, 0.0, 0.0, sc.z_ref);
        sc.disturbance = DisturbanceSpec::off();
        short(&mut sc, 0.5);
        let trace = run_simulation(&sc).unwrap();
        let m = compute_metrics(&trace, sc.z_ref, 0.05).unwrap();
        assert_eq!(m.settling_time, 0.0);
        assert_eq!(m.chattering_index, 0.0);
        assert_eq!(m.switching_count, 0);
    }

    #[test]
    fn metrics_alternating_control() {
        // alternating +-1 over n samples has total variation 2 (n - 1)
        let n = 11;
        let trace = SimTrace {
            controller: ControllerKind::Smc1,
            dt: 0.1,
            t: (0..n).map(|k| k as f64 * 0.1).collect(),
            x: vec![[0.0, 0.0, 0.0, 1.0]; n],
            u: (0..n).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect(),
            s: vec![0.0; n],
            s_i: None,
            validities: None,
            disturbance: vec![[0.0; 4]; n],
            z_ref: 1.0,
            scenario_hash: 0,
            seed: 0,
        };
        let m = compute_metrics(&trace, 1.0, 0.05).unwrap();
        assert_eq!(m.chattering_index, 2.0 * (n as f64 - 1.0));
        assert_eq!(m.switching_count, (n - 2) as u64);
    }

    #[test]
    fn metrics_never_settles_is_infinite() {
        let trace = SimTrace {
            controller: ControllerKind::Smc1,
            dt: 0.1,
            t: vec![0.0, 0.1, 0.2],
            x: vec![[0.0, 0.0, 0.0, 0.0]; 3],
            u: vec![0.0; 3],
            s: vec![0.0; 3],
            s_i: None,
            validities: None,
            disturbance: vec![[0.0; 4]; 3],
            z_ref: 1.0,
            scenario_hash: 0,
            seed: 0,
        };
        let m = compute_metrics(&trace, 1.0, 0.05).unwrap();
        assert!(m.settling_time.is_infinite());
    }

    #[test]
    fn smc1_lyapunov_decrease_without_disturbance() {
        let mut sc = Scenario::default_scenario();
        sc.disturbance = DisturbanceSpec::off();
        short(&mut sc, 15.0);
        let trace = run_simulation(&sc).unwrap();
        let s0 = trace.s[0].abs();
        let mut entered = false;
        for w in trace.s.windows(2) {
            if !entered && w[1].abs() < s0 {
                entered = true;
                continue;
            }
            if entered && w[0].abs() > 0.02 && w[1].abs() > 0.02 {
                assert!(
                    w[1] * w[1] <= w[0] * w[0] + 1e-12,
                    "s^2 increased: {} -> {}",
                    w[0],
                    w[1]
                );
            }
        }
    }

    #[test]
    fn smc2_final_state_insensitive_to_dt() {
        let mut a = Scenario::default_scenario().with_controller(ControllerKind::Smc2);
        a.disturbance = DisturbanceSpec::off();
        short(&mut a, 10.0);
        let mut b = a.clone();
        b.dt = a.dt / 2.0;
        let xa = *run_simulation(&a).unwrap().x.last().unwrap();
        let xb = *run_simulation(&b).unwrap().x.last().unwrap();
        let diff: f64 = xa.iter().zip(&xb).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
        let scale: f64 = xb.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(diff / scale < 0.01, "relative deviation {}", diff / scale);
    }
}
