//! The AUV immersion model, its bounded disturbance, and the multimodel bank.
//!
//! The state is `[omega, q, theta, z]`: heave-channel linear velocity, pitch
//! rate, pitch angle, and depth. Depth is the measured output.

use crate::numerics::{Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlantError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },
}

/// One linear submodel: `x' = A x + B u`, `y = C_out x` with scalar input and
/// scalar measured output.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub a: Matrix,
    pub b: Matrix,
    pub c_out: Matrix,
}

impl LinearModel {
    pub fn new(a: Matrix, b: Matrix, c_out: Matrix) -> Result<Self, PlantError> {
        if !a.is_square() {
            return Err(PlantError::Dimension("A must be square".into()));
        }
        let n = a.rows();
        if b.rows() != n || b.cols() != 1 {
            return Err(PlantError::Dimension(format!("B must be {n}x1")));
        }
        if c_out.rows() != 1 || c_out.cols() != n {
            return Err(PlantError::Dimension(format!("C_out must be 1x{n}")));
        }
        Ok(LinearModel { a, b, c_out })
    }

    pub fn order(&self) -> usize {
        self.a.rows()
    }

    pub fn b_vector(&self) -> Vector {
        self.b.column(0)
    }
}

/// State of the immersion model in physical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    /// linear velocity, m/s
    pub omega: f64,
    /// angular velocity, rad/s
    pub q: f64,
    /// pitch angle, rad
    pub theta: f64,
    /// depth, m
    pub z: f64,
}

impl StateVector {
    pub fn new(omega: f64, q: f64, theta: f64, z: f64) -> Self {
        StateVector { omega, q, theta, z }
    }

    pub fn to_vector(self) -> Vector {
        Vector::from_slice(&[self.omega, self.q, self.theta, self.z])
    }

    pub fn from_vector(v: &Vector) -> Self {
        assert_eq!(v.dim(), 4);
        StateVector { omega: v[0], q: v[1], theta: v[2], z: v[3] }
    }
}

/// The nominal immersion model.
pub fn auv_nominal() -> LinearModel {
    let a = Matrix::from_rows(&[
        &[0.47, 0.3, 0.0, 0.0],
        &[-0.69, 0.79, 0.36, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[1.0, 0.0, 1.0, 0.0],
    ])
    .unwrap();
    let b = Matrix::from_vec(4, 1, vec![0.05, 0.14, 0.0, 0.0]).unwrap();
    let c_out = Matrix::from_vec(1, 4, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
    LinearModel { a, b, c_out }
}

/// Normalized input direction of the nominal model; the default disturbance
/// acts along it (velocity states only), so the bound is matched to the
/// actuation channel.
pub fn matched_direction() -> Vector {
    let b = auv_nominal().b_vector();
    b.scale(1.0 / b.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub enum DisturbanceKind {
    Off,
    /// `m_bound * ||x|| * sin(frequency t)` along the fixed direction.
    Sinusoidal { frequency: f64 },
    /// Per-step vector of norm at most `m_bound * ||x||`, derived from the
    /// seed and the evaluation time; pure given `(seed, x, t)`.
    SeededRandom { seed: u64 },
}

/// State-proportional bounded disturbance: `||phi(x, t)|| <= m_bound ||x||`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbanceSpec {
    pub m_bound: f64,
    pub kind: DisturbanceKind,
    pub direction: Vector,
}

impl DisturbanceSpec {
    pub fn new(m_bound: f64, kind: DisturbanceKind, direction: Vector) -> Result<Self, PlantError> {
        if !(m_bound >= 0.0) {
            return Err(PlantError::Invalid { what: "m_bound", why: "must be >= 0".into() });
        }
        let n = direction.norm();
        if n < 1e-12 {
            return Err(PlantError::Invalid { what: "direction", why: "must be nonzero".into() });
        }
        Ok(DisturbanceSpec { m_bound, kind, direction: direction.scale(1.0 / n) })
    }

    pub fn off() -> Self {
        DisturbanceSpec { m_bound: 0.0, kind: DisturbanceKind::Off, direction: matched_direction() }
    }
}

fn mix_bits(seed: u64, t: f64) -> u64 {
    // splitmix-style scramble of the seed with the time bits
    let mut z = seed ^ t.to_bits().wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Evaluate the disturbance at `(x, t)`. The returned norm never exceeds
/// `m_bound * ||x||`.
pub fn disturbance_eval(d: &DisturbanceSpec, x: &Vector, t: f64) -> Vector {
    let nx = x.norm();
    match &d.kind {
        DisturbanceKind::Off => Vector::zeros(x.dim()),
        DisturbanceKind::Sinusoidal { frequency } => {
            let amp = d.m_bound * nx * (frequency * t).sin();
            resized_direction(&d.direction, x.dim()).scale(amp)
        }
        DisturbanceKind::SeededRandom { seed } => {
            if nx == 0.0 {
                return Vector::zeros(x.dim());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(mix_bits(*seed, t));
            // random direction via Box-Muller pairs, random magnitude in [0, 1]
            let mut dir = vec![0.0; x.dim()];
            for pair in dir.chunks_mut(2) {
                let u1: f64 = rng.random::<f64>().max(1e-16);
                let u2: f64 = rng.random();
                let r = (-2.0 * u1.ln()).sqrt();
                pair[0] = r * (2.0 * std::f64::consts::PI * u2).cos();
                if pair.len() > 1 {
                    pair[1] = r * (2.0 * std::f64::consts::PI * u2).sin();
                }
            }
            let dir = Vector::new(dir);
            let dn = dir.norm();
            if dn < 1e-12 {
                return Vector::zeros(x.dim());
            }
            let mag: f64 = rng.random::<f64>() * d.m_bound * nx;
            dir.scale(mag / dn)
        }
    }
}

fn resized_direction(dir: &Vector, n: usize) -> Vector {
    if dir.dim() == n {
        return dir.clone();
    }
    let mut out = vec![0.0; n];
    for i in 0..n.min(dir.dim()) {
        out[i] = dir[i];
    }
    Vector::new(out)
}

/// Right-hand side `A x + B u + phi(x, t)` of the disturbed plant.
pub fn plant_derivative(
    model: &LinearModel,
    x: &Vector,
    u: f64,
    d: &DisturbanceSpec,
    t: f64,
) -> Result<Vector, PlantError> {
    if x.dim() != model.order() {
        return Err(PlantError::Dimension(format!(
            "state dim {} vs model order {}",
            x.dim(),
            model.order()
        )));
    }
    let phi = disturbance_eval(d, x, t);
    Ok(model.a.matvec(x).axpy(u, &model.b_vector()).add(&phi))
}

/// Measured output `C_out x` of a model.
pub fn model_output(model: &LinearModel, x: &Vector) -> Result<f64, PlantError> {
    if x.dim() != model.order() {
        return Err(PlantError::Dimension("model_output state dim".into()));
    }
    Ok(model.c_out.row(0).iter().zip(x.as_slice()).map(|(a, b)| a * b).sum())
}

/// An ordered family of submodels spread around a nominal model.
#[derive(Debug, Clone)]
pub struct ModelBank {
    pub models: Vec<LinearModel>,
    pub spread: f64,
}

impl ModelBank {
    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }
}

/// Build a bank of `n` models by scaling every nonzero entry of A and B by
/// factors evenly spaced in `[1 - delta, 1 + delta]`; the sparsity pattern
/// (the kinematic zero structure) is preserved, and for odd `n` the middle
/// model is the nominal exactly. The shared output row is untouched.
pub fn build_model_bank(nominal: &LinearModel, n: usize, delta: f64) -> Result<ModelBank, PlantError> {
    if n < 1 {
        return Err(PlantError::Invalid { what: "n", why: "bank needs at least one model".into() });
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(PlantError::Invalid { what: "delta", why: "spread must be in [0, 1)".into() });
    }
    let mut models = Vec::with_capacity(n);
    for i in 0..n {
        let factor = if n == 1 {
            1.0
        } else {
            // t in [-1, 1]; exactly 0 at the middle index for odd n
            let t = (2.0 * i as f64 - (n as f64 - 1.0)) / (n as f64 - 1.0);
            1.0 + delta * t
        };
        models.push(scale_nonzero(nominal, factor));
    }
    Ok(ModelBank { models, spread: delta })
}

fn scale_nonzero(m: &LinearModel, factor: f64) -> LinearModel {
    let n = m.order();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = m.a[(i, j)];
            a[(i, j)] = if v != 0.0 { v * factor } else { 0.0 };
        }
    }
    let mut b = Matrix::zeros(n, 1);
    for i in 0..n {
        let v = m.b[(i, 0)];
        b[(i, 0)] = if v != 0.0 { v * factor } else { 0.0 };
    }
    LinearModel { a, b, c_out: m.c_out.clone() }
}
