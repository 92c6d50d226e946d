//! Numerical verification of the stability conditions: common-Lyapunov
//! checks for the free regime and state feedback, the reduced sliding
//! dynamics check, sampled gain bounds for the reaching condition, and a
//! best-effort common-P search.

use crate::numerics::{
    is_positive_definite, solve_lyapunov, sym_eigen, sym_eigenvalues, Matrix, Vector,
};
use crate::plant::{LinearModel, ModelBank};
use crate::surfaces::SlidingSurfaceSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("surface has no control authority (C_eff B = 0) for submodel {0}")]
    SurfaceDegenerate(usize),
    #[error("numerics failure: {0}")]
    Numerics(#[from] crate::numerics::NumericsError),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

/// What a failing check points at.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// the offending bank member
    Member(usize),
    /// the offending symmetrized cross pair
    CrossPair(usize, usize),
    /// the candidate P itself is not positive definite
    PNotPositiveDefinite,
    /// a sampled state violating the reaching condition
    State(Vec<f64>),
}

/// Outcome of one stability condition.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    /// short identifier of the condition checked
    pub condition: String,
    pub pass: bool,
    /// most-violated eigenvalue (eigenvalue conditions) or worst sampled
    /// `s * s_dot` (reaching conditions); negative means satisfied
    pub margin: f64,
    pub witness: Option<Witness>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub notes: Vec<String>,
}

impl StabilityReport {
    fn new(condition: &str) -> Self {
        StabilityReport {
            condition: condition.to_string(),
            pass: false,
            margin: f64::NAN,
            witness: None,
            seed: None,
            samples: None,
            notes: Vec::new(),
        }
    }
}

/// Sampled operational gain bound for the reaching condition.
#[derive(Debug, Clone)]
pub struct GainBound {
    pub k_min: f64,
    pub region_radius: f64,
    pub sample_count: usize,
    pub confidence: String,
}

/// Lower cutoff on |s| defining the checked region; states closer to the
/// surface than this are excluded (the ratio statistic diverges there and
/// any relay gain acts within one step anyway).
pub const S_FLOOR: f64 = 0.01;

/// Deterministic states of norm `r` with `|c . x|` log-uniform in
/// `[S_FLOOR, r ||c|| / 2]` and uniform direction within the surface plane.
///
/// Sampling the surface offset explicitly keeps the gain-bound supremum
/// reproducible: uniform sphere sampling almost never lands near the
/// small-offset boundary where the supremum lives.
pub fn sample_surface_region(c: &Vector, r: f64, n: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cn = c.norm();
    let chat = c.scale(1.0 / cn);
    let s_hi = 0.5 * r * cn;
    let dim = c.dim();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let ln_s = rng.random_range(S_FLOOR.ln()..s_hi.ln());
        let mut s = ln_s.exp();
        if rng.random::<bool>() {
            s = -s;
        }
        let h = s / cn;
        // direction inside the surface plane: gaussian, project, normalize
        let mut w = Vec::with_capacity(dim);
        for _ in 0..dim.div_ceil(2) {
            let u1: f64 = rng.random::<f64>().max(1e-16);
            let u2: f64 = rng.random();
            let rad = (-2.0 * u1.ln()).sqrt();
            w.push(rad * (2.0 * std::f64::consts::PI * u2).cos());
            w.push(rad * (2.0 * std::f64::consts::PI * u2).sin());
        }
        w.truncate(dim);
        let mut wv = Vector::new(w);
        wv = wv.sub(&chat.scale(wv.dot(&chat)));
        let wn = wv.norm();
        if wn < 1e-9 {
            continue;
        }
        wv = wv.scale(1.0 / wn);
        let r_w = (r * r - h * h).max(0.0).sqrt();
        out.push(chat.scale(h).add(&wv.scale(r_w)));
    }
    out
}

/// Sampled supremum of the gain the relay law needs for `s s_dot < 0` on
/// the region `{||x|| <= r, |s| >= S_FLOOR}` under the worst-direction
/// disturbance of magnitude `m_bound ||x||`.
pub fn estimate_gain_bound(
    model: &LinearModel,
    spec: &SlidingSurfaceSpec,
    m_bound: f64,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<GainBound, StabilityError> {
    if samples == 0 {
        return Err(StabilityError::Empty("samples"));
    }
    let c = spec.c_eff();
    if c.dim() != model.order() {
        return Err(StabilityError::Dimension("surface vs model".into()));
    }
    let cb = c.dot(&model.b_vector());
    if cb.abs() < 1e-12 {
        return Err(StabilityError::SurfaceDegenerate(0));
    }
    let cn = c.norm();
    let states = sample_surface_region(&c, r, samples, seed);
    let mut k_min = 0.0_f64;
    for x in &states {
        let s = c.dot(x);
        let num = s.signum() * c.dot(&model.a.matvec(x)) + m_bound * cn * x.norm();
        k_min = k_min.max(num / (cb * s.abs()));
    }
    // self-consistency: any k above the bound keeps s * s_dot < 0 on the
    // very states that produced it
    let k_check = k_min * (1.0 + 1e-9) + 1e-12;
    for x in &states {
        let s = c.dot(x);
        let s_dot = c.dot(&model.a.matvec(x)) - cb * k_check * s + s.signum() * m_bound * cn * x.norm();
        if s * s_dot >= 0.0 {
            return Err(StabilityError::Inconsistent(format!(
                "k just above k_min fails at s = {s}"
            )));
        }
    }
    Ok(GainBound {
        k_min,
        region_radius: r,
        sample_count: samples,
        confidence: format!(
            "sampled supremum over {} states of norm {} with |s| in [{}, {}], seed {}",
            samples,
            r,
            S_FLOOR,
            0.5 * r * cn,
            seed
        ),
    })
}

fn lyapunov_expression(a: &Matrix, p: &Matrix) -> Matrix {
    a.transpose().matmul(p).add(&p.matmul(a))
}

/// Free-regime fusion stability: P positive definite and every
/// `A_i^T P + P A_i` negative definite.
pub fn check_free_regime(
    bank: &ModelBank,
    p: &Matrix,
    tol: f64,
) -> Result<StabilityReport, StabilityError> {
    if bank.is_empty() {
        return Err(StabilityError::Empty("bank"));
    }
    let n = bank.models[0].order();
    if !p.is_square() || p.rows() != n {
        return Err(StabilityError::Dimension("P vs bank order".into()));
    }
    let mut report = StabilityReport::new("free-regime common Lyapunov");
    let p_pd = is_positive_definite(p, tol)?;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_member = 0usize;
    for (i, model) in bank.models.iter().enumerate() {
        let vals = sym_eigenvalues(&lyapunov_expression(&model.a, p))?;
        let top = *vals.last().unwrap();
        if top > worst {
            worst = top;
            worst_member = i;
        }
    }
    report.margin = worst;
    report.pass = p_pd && worst < -tol;
    if !report.pass {
        report.witness = Some(if p_pd {
            Witness::Member(worst_member)
        } else {
            Witness::PNotPositiveDefinite
        });
    }
    Ok(report)
}

/// State-feedback fusion stability: diagonal closed loops `A_i - B_i k_i`
/// and the symmetrized cross terms, all against one P.
pub fn check_state_feedback(
    bank: &ModelBank,
    gains: &[Vector],
    p: &Matrix,
    tol: f64,
) -> Result<StabilityReport, StabilityError> {
    if bank.is_empty() {
        return Err(StabilityError::Empty("bank"));
    }
    let nmodels = bank.len();
    if gains.len() != nmodels {
        return Err(StabilityError::Dimension(format!(
            "{} gains for {} models",
            gains.len(),
            nmodels
        )));
    }
    let n = bank.models[0].order();
    if gains.iter().any(|g| g.dim() != n) || !p.is_square() || p.rows() != n {
        return Err(StabilityError::Dimension("gain rows or P".into()));
    }
    let g = |i: usize, j: usize| -> Matrix {
        let bi = bank.models[i].b_vector();
        bank.models[i].a.sub(&Matrix::outer(&bi, &gains[j]))
    };
    let mut report = StabilityReport::new("state-feedback common Lyapunov");
    let p_pd = is_positive_definite(p, tol)?;
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for i in 0..nmodels {
        let vals = sym_eigenvalues(&lyapunov_expression(&g(i, i), p))?;
        let top = *vals.last().unwrap();
        if top > worst {
            worst = top;
            witness = Some(Witness::Member(i));
        }
    }
    for i in 0..nmodels {
        for j in (i + 1)..nmodels {
            let cross = g(i, j).add(&g(j, i)).scale(0.5);
            let vals = sym_eigenvalues(&lyapunov_expression(&cross, p))?;
            let top = *vals.last().unwrap();
            if top > worst {
                worst = top;
                witness = Some(Witness::CrossPair(i, j));
            }
        }
    }
    report.margin = worst;
    report.pass = p_pd && worst < -tol;
    if !report.pass {
        report.witness = Some(if p_pd {
            witness.unwrap_or(Witness::Member(0))
        } else {
            Witness::PNotPositiveDefinite
        });
    }
    Ok(report)
}

/// Reduced sliding dynamics of one model under `x_n = -l . X_{n-1}`:
/// substitute the constraint into the first `n-1` state equations.
pub fn reduced_sliding_matrix(model: &LinearModel, l: &Vector) -> Result<Matrix, StabilityError> {
    let n = model.order();
    if n < 2 {
        return Err(StabilityError::Dimension("need order >= 2 to reduce".into()));
    }
    if l.dim() != n - 1 {
        return Err(StabilityError::Dimension(format!("l must have {} entries", n - 1)));
    }
    let a_top = model.a.block(0, n - 1, 0, n - 1);
    let last_col = Vector::new((0..n - 1).map(|i| model.a[(i, n - 1)]).collect());
    Ok(a_top.sub(&Matrix::outer(&last_col, l)))
}

/// Sliding-phase stability of the reduced dynamics for every submodel
/// against one reduced-order P.
pub fn check_reduced_surface(
    bank: &ModelBank,
    l_per_model: &[Vector],
    p_reduced: &Matrix,
    tol: f64,
) -> Result<StabilityReport, StabilityError> {
    if bank.is_empty() {
        return Err(StabilityError::Empty("bank"));
    }
    if l_per_model.len() != bank.len() {
        return Err(StabilityError::Dimension("one l per model required".into()));
    }
    let n = bank.models[0].order();
    if !p_reduced.is_square() || p_reduced.rows() != n - 1 {
        return Err(StabilityError::Dimension("P_reduced order".into()));
    }
    let mut report = StabilityReport::new("reduced sliding dynamics");
    let p_pd = is_positive_definite(p_reduced, tol)?;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_member = 0;
    let mut degenerate_column = true;
    for (i, model) in bank.models.iter().enumerate() {
        for r in 0..n - 1 {
            if model.a[(r, n - 1)] != 0.0 {
                degenerate_column = false;
            }
        }
        let reduced = reduced_sliding_matrix(model, &l_per_model[i])?;
        let vals = sym_eigenvalues(&lyapunov_expression(&reduced, p_reduced))?;
        let top = *vals.last().unwrap();
        if top > worst {
            worst = top;
            worst_member = i;
        }
    }
    if degenerate_column {
        report.notes.push(
            "last state column of A is zero for every member: the substitution-form reduced \
             dynamics do not depend on the surface coefficients here"
                .to_string(),
        );
    }
    report.margin = worst;
    report.pass = p_pd && worst < -tol;
    if !report.pass {
        report.witness = Some(if p_pd {
            Witness::Member(worst_member)
        } else {
            Witness::PNotPositiveDefinite
        });
    }
    Ok(report)
}

/// Aggregate-surface gain check: the fused switching gain must exceed the
/// mu-weighted sum of per-submodel bounds, and the sampled aggregate
/// reaching condition must hold under the worst-direction disturbance.
#[allow(clippy::too_many_arguments)]
pub fn check_multi_gain(
    bank: &ModelBank,
    surfaces: &[SlidingSurfaceSpec],
    mu: &[f64],
    m_bound: f64,
    gains: &[f64],
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<StabilityReport, StabilityError> {
    let n = bank.len();
    if surfaces.len() != n || mu.len() != n || gains.len() != n {
        return Err(StabilityError::Dimension("per-model lists".into()));
    }
    let mut report = StabilityReport::new("aggregate-surface gain bound");
    report.seed = Some(seed);
    report.samples = Some(samples);

    let mut bound = 0.0;
    for i in 0..n {
        let gb = estimate_gain_bound(
            &bank.models[i],
            &surfaces[i],
            m_bound,
            r,
            samples,
            seed.wrapping_add(i as u64),
        )
        .map_err(|e| match e {
            StabilityError::SurfaceDegenerate(_) => StabilityError::SurfaceDegenerate(i),
            other => other,
        })?;
        bound += mu[i] * gb.k_min;
    }
    let k_total: f64 = mu.iter().zip(gains).map(|(m, k)| m * k).sum();
    report
        .notes
        .push(format!("fused gain K = {k_total}, weighted bound = {bound}"));

    // sampled aggregate reaching with weights frozen at mu and u = -K S
    let rows: Vec<Vector> = surfaces.iter().map(|s| s.c_eff()).collect();
    let mut tbar = Vector::zeros(rows[0].dim());
    for (w, row) in mu.iter().zip(&rows) {
        tbar = tbar.axpy(*w, row);
    }
    let tbar_norm = tbar.norm();
    let states = sample_surface_region(&tbar, r, samples.max(1), seed.wrapping_add(0x5eed));
    let mut worst = f64::NEG_INFINITY;
    let mut worst_state = None;
    for x in &states {
        let s_vals: Vec<f64> = rows.iter().map(|row| row.dot(x)).collect();
        let aggregate: f64 = mu.iter().zip(&s_vals).map(|(w, s)| w * s).sum();
        if aggregate.abs() < S_FLOOR {
            continue;
        }
        let u = -k_total * aggregate;
        let phi = tbar.scale(aggregate.signum() * m_bound * x.norm() / tbar_norm);
        let mut s_dot_agg = 0.0;
        for (i, model) in bank.models.iter().enumerate() {
            let row = &rows[i];
            s_dot_agg += mu[i]
                * (row.dot(&model.a.matvec(x)) + row.dot(&model.b_vector()) * u + row.dot(&phi));
        }
        let prod = aggregate * s_dot_agg;
        if prod > worst {
            worst = prod;
            worst_state = Some(x.clone());
        }
    }
    report.margin = worst;
    report.pass = k_total > bound && worst < 0.0;
    if !report.pass {
        report.witness = worst_state.map(|x| Witness::State(x.as_slice().to_vec()));
    }
    Ok(report)
}

/// Result of the best-effort common-P search. `Infeasible` means the
/// heuristic did not find one, not a proof that none exists.
#[derive(Debug, Clone)]
pub enum CommonPResult {
    Found(Matrix),
    Infeasible { best_margin: f64 },
}

/// Gradient-descent heuristic for a common Lyapunov matrix of the given
/// family: start from the Lyapunov solution of the average matrix, then step
/// against the most-violated member's top eigenvalue, projecting back to the
/// symmetric positive cone.
pub fn find_common_p(
    matrices: &[Matrix],
    tol: f64,
    max_iter: usize,
) -> Result<CommonPResult, StabilityError> {
    if matrices.is_empty() {
        return Err(StabilityError::Empty("matrices"));
    }
    let n = matrices[0].rows();
    for m in matrices {
        if !m.is_square() || m.rows() != n {
            return Err(StabilityError::Dimension("family must share order".into()));
        }
    }
    let mut avg = Matrix::zeros(n, n);
    for m in matrices {
        avg = avg.add(m);
    }
    avg = avg.scale(1.0 / matrices.len() as f64);
    let mut p = match solve_lyapunov(&avg, &Matrix::identity(n)) {
        Ok(sol) => sol,
        Err(_) => Matrix::identity(n),
    };
    p = p.scale(n as f64 / p.trace());

    let margin_of = |p: &Matrix| -> Result<(f64, usize), StabilityError> {
        let mut worst = f64::NEG_INFINITY;
        let mut idx = 0;
        for (i, m) in matrices.iter().enumerate() {
            let vals = sym_eigenvalues(&lyapunov_expression(m, p))?;
            let top = *vals.last().unwrap();
            if top > worst {
                worst = top;
                idx = i;
            }
        }
        Ok((worst, idx))
    };

    let mut best = f64::INFINITY;
    for iter in 0..max_iter {
        let (worst, idx) = margin_of(&p)?;
        best = best.min(worst);
        let p_pd = is_positive_definite(&p, tol)?;
        if worst < -tol && p_pd {
            return Ok(CommonPResult::Found(p));
        }
        // descend the top eigenvalue of the worst member's expression
        let expr = lyapunov_expression(&matrices[idx], &p).symmetrize();
        let (_, vecs) = sym_eigen(&expr)?;
        let v = vecs.column(n - 1);
        let av = matrices[idx].matvec(&v);
        let grad = Matrix::outer(&av, &v).add(&Matrix::outer(&v, &av));
        let gn = grad.max_abs().max(1e-12);
        let eta = 0.2 / (1.0 + iter as f64 / 500.0);
        p = p.sub(&grad.scale(eta / gn));
        // project to the symmetric positive cone and renormalize the scale
        p = p.symmetrize();
        let (vals, vecs) = sym_eigen(&p)?;
        let mut rebuilt = Matrix::zeros(n, n);
        for (k, &lam) in vals.iter().enumerate() {
            let col = vecs.column(k);
            rebuilt = rebuilt.add(&Matrix::outer(&col, &col).scale(lam.max(1e-6)));
        }
        p = rebuilt.scale(n as f64 / rebuilt.trace());
    }
    let (final_margin, _) = margin_of(&p)?;
    Ok(CommonPResult::Infeasible { best_margin: best.min(final_margin) })
}
