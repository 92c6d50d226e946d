//! Validity computation by the residue approach, reinforcement,
//! normalization, and control fusion.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MultimodelError {
    #[error("residue list must be nonempty")]
    Empty,
    #[error("residues must be nonnegative")]
    NegativeResidue,
    #[error("validities violate the convex-sum property: {0}")]
    InvalidValidities(String),
    #[error("length mismatch: {left} validities vs {right} values")]
    LengthMismatch { left: usize, right: usize },
}

const CONVEX_TOL: f64 = 1e-12;

/// Convex weights: each in `[0, 1]`, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityVector {
    v: Vec<f64>,
}

impl ValidityVector {
    pub fn new(v: Vec<f64>) -> Result<Self, MultimodelError> {
        if v.is_empty() {
            return Err(MultimodelError::Empty);
        }
        for &w in &v {
            if !(-CONVEX_TOL..=1.0 + CONVEX_TOL).contains(&w) {
                return Err(MultimodelError::InvalidValidities(format!("weight {w} out of [0,1]")));
            }
        }
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > CONVEX_TOL {
            return Err(MultimodelError::InvalidValidities(format!("sum {sum} != 1")));
        }
        Ok(ValidityVector { v })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1);
        ValidityVector { v: vec![1.0 / n as f64; n] }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v
    }
}

/// Nonnegative output mismatches `r_i = |y - y_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueVector {
    r: Vec<f64>,
}

impl ResidueVector {
    pub fn new(r: Vec<f64>) -> Result<Self, MultimodelError> {
        if r.is_empty() {
            return Err(MultimodelError::Empty);
        }
        if r.iter().any(|&x| !(x >= 0.0)) {
            return Err(MultimodelError::NegativeResidue);
        }
        Ok(ResidueVector { r })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.r
    }
}

/// Instantaneous residues against each submodel output.
pub fn residues(y: f64, y_models: &[f64]) -> Result<ResidueVector, MultimodelError> {
    if y_models.is_empty() {
        return Err(MultimodelError::Empty);
    }
    ResidueVector::new(y_models.iter().map(|yi| (y - yi).abs()).collect())
}

/// Validities from residues: normalize, complement, renormalize.
///
/// The complement `1 - r_i / sum(r)` sums to `N - 1`, so the result is scaled
/// by `1/(N - 1)` to restore the convex sum (for `N = 2` this is already the
/// identity). All-zero residues yield the uniform vector.
pub fn validities(r: &ResidueVector) -> ValidityVector {
    let n = r.len();
    if n == 1 {
        return ValidityVector { v: vec![1.0] };
    }
    let total: f64 = r.as_slice().iter().sum();
    if total == 0.0 {
        return ValidityVector::uniform(n);
    }
    let v: Vec<f64> = r
        .as_slice()
        .iter()
        .map(|ri| (1.0 - ri / total) / (n as f64 - 1.0))
        .collect();
    ValidityVector { v }
}

/// Reinforced validities: `v_i * prod_{j != i} (1 - v_j)`, renormalized.
/// Sharpens the dominant weight; uniform inputs are fixed points.
pub fn reinforce(v: &ValidityVector) -> ValidityVector {
    let n = v.len();
    if n == 1 {
        return v.clone();
    }
    let raw: Vec<f64> = (0..n)
        .map(|i| {
            let mut prod = v.as_slice()[i];
            for (j, &w) in v.as_slice().iter().enumerate() {
                if j != i {
                    prod *= 1.0 - w;
                }
            }
            prod.max(0.0)
        })
        .collect();
    let total: f64 = raw.iter().sum();
    if total == 0.0 {
        return ValidityVector::uniform(n);
    }
    ValidityVector { v: raw.iter().map(|x| x / total).collect() }
}

/// Fused global control `u_g = sum_i v_i u_i`.
pub fn fuse_controls(v: &ValidityVector, u_partials: &[f64]) -> Result<f64, MultimodelError> {
    if v.len() != u_partials.len() {
        return Err(MultimodelError::LengthMismatch { left: v.len(), right: u_partials.len() });
    }
    Ok(v.as_slice().iter().zip(u_partials).map(|(w, u)| w * u).sum())
}

/// Optional first-order low-pass on residues; disabled when `tau == 0`.
#[derive(Debug, Clone)]
pub struct ResidueFilter {
    tau: f64,
    state: Option<Vec<f64>>,
}

impl ResidueFilter {
    pub fn new(tau: f64) -> Self {
        assert!(tau >= 0.0, "filter time constant must be nonnegative");
        ResidueFilter { tau, state: None }
    }

    pub fn is_active(&self) -> bool {
        self.tau > 0.0
    }

    pub fn step(&mut self, raw: &ResidueVector, dt: f64) -> ResidueVector {
        if self.tau == 0.0 {
            return raw.clone();
        }
        let gain = (dt / self.tau).min(1.0);
        let state = self
            .state
            .get_or_insert_with(|| raw.as_slice().to_vec());
        for (s, &r) in state.iter_mut().zip(raw.as_slice()) {
            *s += gain * (r - *s);
        }
        ResidueVector::new(state.clone()).expect("filtered residues stay nonnegative")
    }
}
