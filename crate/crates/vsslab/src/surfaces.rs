//! Sliding-function definitions and evaluation: full-row and reduced linear
//! surfaces, the second-order sliding function, and the validity-weighted
//! aggregate surface.

use crate::multimodel::ValidityVector;
use crate::numerics::Vector;
use crate::plant::LinearModel;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid surface: {0}")]
    Invalid(String),
    #[error("aggregate needs as many surfaces as validities ({surfaces} vs {validities})")]
    LengthMismatch { surfaces: usize, validities: usize },
}

/// A linear sliding surface `s(x) = 0`.
///
/// The full-row kind stores the complete coefficient row. The reduced kind
/// stores positive coefficients `l` for the first `n-1` states, the last
/// state carrying an implicit unit coefficient, so `s = x_n + l . X_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum SlidingSurfaceSpec {
    FullRow { c: Vector },
    Reduced { l: Vector },
}

impl SlidingSurfaceSpec {
    pub fn full_row(c: Vector) -> Result<Self, SurfaceError> {
        if c.norm() < 1e-12 {
            return Err(SurfaceError::Invalid("full-row coefficients must be nonzero".into()));
        }
        Ok(SlidingSurfaceSpec::FullRow { c })
    }

    pub fn reduced(l: Vector) -> Result<Self, SurfaceError> {
        if l.as_slice().iter().any(|&a| !(a > 0.0)) {
            return Err(SurfaceError::Invalid("reduced coefficients must all be positive".into()));
        }
        Ok(SlidingSurfaceSpec::Reduced { l })
    }

    /// State dimension this surface applies to.
    pub fn state_dim(&self) -> usize {
        match self {
            SlidingSurfaceSpec::FullRow { c } => c.dim(),
            SlidingSurfaceSpec::Reduced { l } => l.dim() + 1,
        }
    }

    /// The effective full coefficient row: `c` itself, or `[l | 1]`.
    pub fn c_eff(&self) -> Vector {
        match self {
            SlidingSurfaceSpec::FullRow { c } => c.clone(),
            SlidingSurfaceSpec::Reduced { l } => {
                let mut v = l.as_slice().to_vec();
                v.push(1.0);
                Vector::new(v)
            }
        }
    }
}

/// Evaluate `s(x)`.
pub fn surface_eval(spec: &SlidingSurfaceSpec, x: &Vector) -> Result<f64, SurfaceError> {
    if x.dim() != spec.state_dim() {
        return Err(SurfaceError::Dimension(format!(
            "state dim {} vs surface dim {}",
            x.dim(),
            spec.state_dim()
        )));
    }
    Ok(spec.c_eff().dot(x))
}

/// Nominal surface rate `C_eff (A x + B u)`; the unknown disturbance term is
/// deliberately absent (the controller cannot measure it).
pub fn surface_rate(
    spec: &SlidingSurfaceSpec,
    model: &LinearModel,
    x: &Vector,
    u: f64,
) -> Result<f64, SurfaceError> {
    if x.dim() != spec.state_dim() || model.order() != spec.state_dim() {
        return Err(SurfaceError::Dimension("surface_rate dims".into()));
    }
    let c = spec.c_eff();
    let xdot = model.a.matvec(x).axpy(u, &model.b_vector());
    Ok(c.dot(&xdot))
}

/// Parameters of the second-order sliding function `sigma = s_dot + alpha s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderParams {
    pub alpha: f64,
}

impl SecondOrderParams {
    pub fn new(alpha: f64) -> Result<Self, SurfaceError> {
        if !(alpha > 0.0) {
            return Err(SurfaceError::Invalid("alpha must be positive".into()));
        }
        Ok(SecondOrderParams { alpha })
    }
}

/// `sigma = s_dot + alpha s`.
pub fn sigma_eval(p: &SecondOrderParams, s: f64, s_dot: f64) -> f64 {
    s_dot + p.alpha * s
}

/// Validity-weighted aggregate `S = sum_i v_i s_i(x)`.
pub fn aggregate_surface(
    surfaces: &[SlidingSurfaceSpec],
    v: &ValidityVector,
    x: &Vector,
) -> Result<f64, SurfaceError> {
    if surfaces.len() != v.len() {
        return Err(SurfaceError::LengthMismatch {
            surfaces: surfaces.len(),
            validities: v.len(),
        });
    }
    let mut total = 0.0;
    for (spec, w) in surfaces.iter().zip(v.as_slice()) {
        total += w * surface_eval(spec, x)?;
    }
    Ok(total)
}
