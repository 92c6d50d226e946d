//! Single-model control laws: relay switching control, the sign-branched
//! reaching law, first-order stepping, and the second-order law whose
//! discontinuity acts on the control derivative.

use crate::numerics::Vector;
use crate::plant::LinearModel;
use crate::surfaces::{sigma_eval, SecondOrderParams, SlidingSurfaceSpec};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ControlError {
    #[error("surface has no control authority (C_eff B = 0){}", submodel_note(.submodel))]
    SurfaceDegenerate { submodel: Option<usize> },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter {what}: {why}")]
    Invalid { what: &'static str, why: String },
}

fn submodel_note(submodel: &Option<usize>) -> String {
    match submodel {
        Some(i) => format!(" for submodel {i}"),
        None => String::new(),
    }
}

/// `sign` with the convention `sign(0) = 0`, so relays emit no control
/// exactly on the surface.
pub fn sign0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// First-order law parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smc1Params {
    /// switching gain used by the relay `u_s = -k s`
    pub k: f64,
    /// reaching margin of the sign branches
    pub epsilon: f64,
    /// disturbance bound the law compensates for
    pub m_bound: f64,
}

impl Smc1Params {
    pub fn new(k: f64, epsilon: f64, m_bound: f64) -> Result<Self, ControlError> {
        if !(k > 0.0) {
            return Err(ControlError::Invalid { what: "k", why: "must be positive".into() });
        }
        if !(epsilon > 0.0) {
            return Err(ControlError::Invalid { what: "epsilon", why: "must be positive".into() });
        }
        if !(m_bound >= 0.0) {
            return Err(ControlError::Invalid { what: "m_bound", why: "must be >= 0".into() });
        }
        Ok(Smc1Params { k, epsilon, m_bound })
    }
}

/// Relay switching control `u_s = -k s`.
pub fn switching_control(k: f64, s: f64) -> f64 {
    -k * s
}

pub(crate) fn scalar_cb(
    spec: &SlidingSurfaceSpec,
    model: &LinearModel,
    submodel: Option<usize>,
) -> Result<f64, ControlError> {
    let cb = spec.c_eff().dot(&model.b_vector());
    if cb.abs() < 1e-12 {
        return Err(ControlError::SurfaceDegenerate { submodel });
    }
    Ok(cb)
}

/// Sign-branched reaching law.
///
/// On the surface itself the two branches are averaged, which collapses to
/// the plain equivalent term `-(CB)^-1 CA x` and keeps the origin an
/// equilibrium of the closed loop.
pub fn reaching_control(
    model: &LinearModel,
    spec: &SlidingSurfaceSpec,
    p: &Smc1Params,
    x: &Vector,
) -> Result<f64, ControlError> {
    if x.dim() != model.order() || spec.state_dim() != model.order() {
        return Err(ControlError::Dimension("reaching_control dims".into()));
    }
    let c = spec.c_eff();
    let cb = scalar_cb(spec, model, None)?;
    let ca_x = c.dot(&model.a.matvec(x));
    let s = c.dot(x);
    // with M = m_bound * I the compensation term is m_bound * C x = m_bound * s
    let u = match sign0(s) {
        1.0 => -(ca_x - p.m_bound * s) / cb - p.epsilon,
        -1.0 => -(ca_x + p.m_bound * s) / cb + p.epsilon,
        _ => -ca_x / cb,
    };
    Ok(u)
}

/// First-order step: the reaching law applied memorylessly (the equivalent
/// term is already embedded in each branch).
pub fn smc1_step(
    model: &LinearModel,
    spec: &SlidingSurfaceSpec,
    p: &Smc1Params,
    x: &Vector,
) -> Result<f64, ControlError> {
    reaching_control(model, spec, p, x)
}

/// State of the second-order law: the integrated control channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Smc2State {
    pub params: SecondOrderParams,
    /// gain on the control-derivative relay
    pub k2: f64,
    /// integrated control, actuator units
    pub u_accum: f64,
}

impl Smc2State {
    pub fn new(params: SecondOrderParams, k2: f64) -> Result<Self, ControlError> {
        if !(k2 > 0.0) {
            return Err(ControlError::Invalid { what: "k2", why: "must be positive".into() });
        }
        Ok(Smc2State { params, k2, u_accum: 0.0 })
    }
}

/// Second-order step: the relay acts on the control derivative, so the
/// emitted control changes by at most `k2 * dt` per step beyond the smooth
/// equivalent term.
///
/// The nominal surface rate seen by the sliding function reduces to
/// `CB * u_accum` because the equivalent term cancels `CA x` exactly.
pub fn smc2_step(
    model: &LinearModel,
    spec: &SlidingSurfaceSpec,
    state: &mut Smc2State,
    x: &Vector,
    dt: f64,
) -> Result<f64, ControlError> {
    if !(dt > 0.0) {
        return Err(ControlError::Invalid { what: "dt", why: "must be positive".into() });
    }
    if x.dim() != model.order() || spec.state_dim() != model.order() {
        return Err(ControlError::Dimension("smc2_step dims".into()));
    }
    let c = spec.c_eff();
    let cb = scalar_cb(spec, model, None)?;
    let s = c.dot(x);
    let u_eq = -c.dot(&model.a.matvec(x)) / cb;
    let s_dot = cb * state.u_accum;
    let sigma = sigma_eval(&state.params, s, s_dot);
    state.u_accum -= state.k2 * sign0(sigma) * dt;
    Ok(u_eq + state.u_accum)
}
