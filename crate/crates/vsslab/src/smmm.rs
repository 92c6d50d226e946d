//! Composite sliding-mode/multimodel controllers: single-surface fusion in
//! first and second order, and the multi-surface law whose relay switches on
//! the validity-weighted aggregate surface.

use crate::controllers::{scalar_cb, sign0, ControlError};
use crate::multimodel::{fuse_controls, ValidityVector};
use crate::numerics::Vector;
use crate::plant::ModelBank;
use crate::surfaces::{sigma_eval, SecondOrderParams, SlidingSurfaceSpec};

/// Sliding-mode order of the fused law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmOrder {
    First,
    Second,
}

/// Per-submodel surface assignment.
#[derive(Debug, Clone)]
pub enum SmmmSurfaces {
    /// One surface shared by every submodel (single-surface fusion).
    Shared(SlidingSurfaceSpec),
    /// One surface per submodel (multi-surface fusion).
    PerModel(Vec<SlidingSurfaceSpec>),
}

/// Configuration of the fused controllers.
#[derive(Debug, Clone)]
pub struct SmmmConfig {
    /// per-submodel switching gains, all positive
    pub gains: Vec<f64>,
    /// offline design weights of the aggregate gain bound, each in (0, 1)
    pub mu: Vec<f64>,
    /// reaching margin of the discontinuous term
    pub epsilon: f64,
    /// disturbance bound compensated by the laws
    pub m_bound: f64,
    pub surfaces: SmmmSurfaces,
    pub order: SmOrder,
    /// second-order parameters; required when `order == Second`
    pub second_order: Option<SecondOrderParams>,
    /// control-derivative relay gain for the second-order channel
    pub k2: f64,
}

impl SmmmConfig {
    pub fn validate(&self, bank: &ModelBank) -> Result<(), ControlError> {
        let n = bank.len();
        if self.gains.len() != n {
            return Err(ControlError::Invalid {
                what: "gains",
                why: format!("need {n} gains, got {}", self.gains.len()),
            });
        }
        if self.gains.iter().any(|&k| !(k > 0.0)) {
            return Err(ControlError::Invalid { what: "gains", why: "must all be positive".into() });
        }
        if self.mu.len() != n {
            return Err(ControlError::Invalid {
                what: "mu",
                why: format!("need {n} weights, got {}", self.mu.len()),
            });
        }
        if self.mu.iter().any(|&m| !(m > 0.0 && m < 1.0)) && n > 1 {
            return Err(ControlError::Invalid { what: "mu", why: "must lie in (0, 1)".into() });
        }
        if !(self.epsilon > 0.0) {
            return Err(ControlError::Invalid { what: "epsilon", why: "must be positive".into() });
        }
        if let SmmmSurfaces::PerModel(list) = &self.surfaces {
            if list.len() != n {
                return Err(ControlError::Invalid {
                    what: "surfaces",
                    why: format!("need {n} surfaces, got {}", list.len()),
                });
            }
        }
        if self.order == SmOrder::Second && self.second_order.is_none() {
            return Err(ControlError::Invalid {
                what: "second_order",
                why: "second-order fusion needs alpha".into(),
            });
        }
        Ok(())
    }

    fn shared_surface(&self) -> Result<&SlidingSurfaceSpec, ControlError> {
        match &self.surfaces {
            SmmmSurfaces::Shared(s) => Ok(s),
            SmmmSurfaces::PerModel(_) => Err(ControlError::Invalid {
                what: "surfaces",
                why: "single-surface stepping needs a shared surface".into(),
            }),
        }
    }

    pub fn per_model_surfaces(&self, n: usize) -> Vec<SlidingSurfaceSpec> {
        match &self.surfaces {
            SmmmSurfaces::Shared(s) => vec![s.clone(); n],
            SmmmSurfaces::PerModel(list) => list.clone(),
        }
    }
}

/// Mutable state of a fused controller run: one integrated control channel
/// per submodel, used by the second-order variant.
#[derive(Debug, Clone)]
pub struct SmmmState {
    pub u_accum: Vec<f64>,
}

impl SmmmState {
    pub fn new(n: usize) -> Self {
        SmmmState { u_accum: vec![0.0; n] }
    }
}

/// Single-surface fused step: per-submodel partial controls (reaching law
/// plus relay, or the second-order derivative channel) fused by validities.
pub fn smmm_single_step(
    bank: &ModelBank,
    cfg: &SmmmConfig,
    state: &mut SmmmState,
    v: &ValidityVector,
    x: &Vector,
    dt: f64,
) -> Result<f64, ControlError> {
    cfg.validate(bank)?;
    if v.len() != bank.len() {
        return Err(ControlError::Invalid {
            what: "validities",
            why: format!("need {} weights, got {}", bank.len(), v.len()),
        });
    }
    let spec = cfg.shared_surface()?;
    let c = spec.c_eff();
    if x.dim() != c.dim() {
        return Err(ControlError::Dimension("smmm state dim".into()));
    }
    let s = c.dot(x);
    let mut partials = Vec::with_capacity(bank.len());
    for (i, model) in bank.models.iter().enumerate() {
        let cb = scalar_cb(spec, model, Some(i))?;
        let ca_x = c.dot(&model.a.matvec(x));
        let u_i = match cfg.order {
            SmOrder::First => {
                let u_e = match sign0(s) {
                    1.0 => -(ca_x - cfg.m_bound * s) / cb - cfg.epsilon,
                    -1.0 => -(ca_x + cfg.m_bound * s) / cb + cfg.epsilon,
                    _ => -ca_x / cb,
                };
                u_e + crate::controllers::switching_control(cfg.gains[i], s)
            }
            SmOrder::Second => {
                let so = cfg.second_order.as_ref().expect("validated above");
                let u_eq = -ca_x / cb;
                let sigma = sigma_eval(so, s, cb * state.u_accum[i]);
                state.u_accum[i] -= cfg.k2 * sign0(sigma) * dt;
                u_eq + state.u_accum[i]
            }
        };
        partials.push(u_i);
    }
    fuse_controls(v, &partials).map_err(|e| ControlError::Invalid {
        what: "validities",
        why: e.to_string(),
    })
}

/// Multi-surface fused step. Each submodel carries its own surface; the
/// relay margin switches on the aggregate `S = sum_i v_i s_i`, while the
/// `-k_i s_i` terms switch on their own surfaces. Returns `(u, S)`.
pub fn smmm_multi_step(
    bank: &ModelBank,
    cfg: &SmmmConfig,
    v: &ValidityVector,
    x: &Vector,
) -> Result<(f64, f64), ControlError> {
    cfg.validate(bank)?;
    if v.len() != bank.len() {
        return Err(ControlError::Invalid {
            what: "validities",
            why: format!("need {} weights, got {}", bank.len(), v.len()),
        });
    }
    let surfaces = cfg.per_model_surfaces(bank.len());
    let mut s_vals = Vec::with_capacity(bank.len());
    for spec in &surfaces {
        if spec.state_dim() != x.dim() {
            return Err(ControlError::Dimension("multi-surface state dim".into()));
        }
        s_vals.push(spec.c_eff().dot(x));
    }
    let aggregate: f64 =
        v.as_slice().iter().zip(&s_vals).map(|(w, s)| w * s).sum();
    let relay = cfg.epsilon * sign0(aggregate);
    let mut partials = Vec::with_capacity(bank.len());
    for (i, model) in bank.models.iter().enumerate() {
        let t_row = surfaces[i].c_eff();
        let tb = scalar_cb(&surfaces[i], model, Some(i))?;
        // T_i (A_i + M I) x = T_i A_i x + m_bound * s_i
        let ta_x = t_row.dot(&model.a.matvec(x)) + cfg.m_bound * s_vals[i];
        partials.push(-ta_x / tb - relay - cfg.gains[i] * s_vals[i]);
    }
    let u = fuse_controls(v, &partials).map_err(|e| ControlError::Invalid {
        what: "validities",
        why: e.to_string(),
    })?;
    Ok((u, aggregate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controllers::{smc1_step, Smc1Params};
    use crate::plant::{auv_nominal, build_model_bank};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fast_spec() -> SlidingSurfaceSpec {
        SlidingSurfaceSpec::full_row(Vector::from_slice(&crate::defaults::SURFACE_FAST)).unwrap()
    }

    fn cfg_first(n: usize, spec: SmmmSurfaces) -> SmmmConfig {
        SmmmConfig {
            gains: vec![1.0; n],
            mu: vec![1.0 / n as f64; n],
            epsilon: 0.02,
            m_bound: 0.1,
            surfaces: spec,
            order: SmOrder::First,
            second_order: None,
            k2: 5.0,
        }
    }

    #[test]
    fn degenerate_bank_matches_single_model_law_plus_relay() {
        let bank = build_model_bank(&auv_nominal(), 1, 0.0).unwrap();
        let cfg = cfg_first(1, SmmmSurfaces::Shared(fast_spec()));
        let mut state = SmmmState::new(1);
        let v = ValidityVector::new(vec![1.0]).unwrap();
        let p = Smc1Params::new(cfg.gains[0], cfg.epsilon, cfg.m_bound).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let c = fast_spec().c_eff();
        for _ in 0..200 {
            let x = Vector::new((0..4).map(|_| rng.random_range(-1.0..1.0)).collect());
            let s = c.dot(&x);
            let fused = smmm_single_step(&bank, &cfg, &mut state, &v, &x, 1e-3).unwrap();
            let single = smc1_step(&auv_nominal(), &fast_spec(), &p, &x).unwrap() - cfg.gains[0] * s;
            assert!((fused - single).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_submodels_make_fusion_weight_free() {
        let bank = build_model_bank(&auv_nominal(), 3, 0.0).unwrap();
        let cfg = cfg_first(3, SmmmSurfaces::Shared(fast_spec()));
        let mut state = SmmmState::new(3);
        let x = Vector::from_slice(&[0.2, -0.1, 0.05, -0.3]);
        let va = ValidityVector::new(vec![0.7, 0.2, 0.1]).unwrap();
        let vb = ValidityVector::new(vec![0.1, 0.3, 0.6]).unwrap();
        let ua = smmm_single_step(&bank, &cfg, &mut state, &va, &x, 1e-3).unwrap();
        let ub = smmm_single_step(&bank, &cfg, &mut state, &vb, &x, 1e-3).unwrap();
        assert!((ua - ub).abs() < 1e-12);
    }

    #[test]
    fn on_surface_origin_gives_zero_control() {
        let bank = build_model_bank(&auv_nominal(), 3, 0.2).unwrap();
        let cfg = cfg_first(3, SmmmSurfaces::Shared(fast_spec()));
        let mut state = SmmmState::new(3);
        let v = ValidityVector::uniform(3);
        let u = smmm_single_step(&bank, &cfg, &mut state, &v, &Vector::zeros(4), 1e-3).unwrap();
        assert_eq!(u, 0.0);
    }

    #[test]
    fn fusion_convexity_over_partials() {
        // fused control must lie between the extreme partial controls
        let bank = build_model_bank(&auv_nominal(), 3, 0.2).unwrap();
        let spec = fast_spec();
        let cfg = cfg_first(3, SmmmSurfaces::Shared(spec.clone()));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = spec.c_eff();
        for _ in 0..300 {
            let x = Vector::new((0..4).map(|_| rng.random_range(-1.0..1.0)).collect());
            let s = c.dot(&x);
            let mut partials = Vec::new();
            for (i, model) in bank.models.iter().enumerate() {
                let cb = c.dot(&model.b_vector());
                let ca_x = c.dot(&model.a.matvec(&x));
                let u_e = match crate::controllers::sign0(s) {
                    1.0 => -(ca_x - 0.1 * s) / cb - cfg.epsilon,
                    -1.0 => -(ca_x + 0.1 * s) / cb + cfg.epsilon,
                    _ => -ca_x / cb,
                };
                partials.push(u_e - cfg.gains[i] * s);
            }
            let raw: Vec<f64> = (0..3).map(|_| rng.random_range(0.01..1.0)).collect();
            let tot: f64 = raw.iter().sum();
            let v = ValidityVector::new(raw.iter().map(|w| w / tot).collect()).unwrap();
            let mut state = SmmmState::new(3);
            let u = smmm_single_step(&bank, &cfg, &mut state, &v, &x, 1e-3).unwrap();
            let lo = partials.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = partials.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(u >= lo - 1e-12 && u <= hi + 1e-12);
        }
    }

    #[test]
    fn multi_step_origin_is_zero() {
        let bank = build_model_bank(&auv_nominal(), 3, 0.2).unwrap();
        let cfg = cfg_first(3, SmmmSurfaces::PerModel(vec![fast_spec(); 3]));
        let v = ValidityVector::uniform(3);
        let (u, s) = smmm_multi_step(&bank, &cfg, &v, &Vector::zeros(4)).unwrap();
        assert_eq!(u, 0.0);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn multi_step_degenerate_weights_select_one_submodel() {
        let bank = build_model_bank(&auv_nominal(), 2, 0.2).unwrap();
        let spec_a = fast_spec();
        let spec_b =
            SlidingSurfaceSpec::full_row(Vector::from_slice(&crate::defaults::SURFACE_SLOW)).unwrap();
        let cfg = cfg_first(2, SmmmSurfaces::PerModel(vec![spec_a.clone(), spec_b]));
        let v = ValidityVector::new(vec![1.0, 0.0]).unwrap();
        let x = Vector::from_slice(&[0.1, 0.2, -0.1, 0.4]);
        let (u, s) = smmm_multi_step(&bank, &cfg, &v, &x).unwrap();
        // with all weight on submodel 0, S reduces to s_0
        let s0 = spec_a.c_eff().dot(&x);
        assert!((s - s0).abs() < 1e-15);
        // and u reduces to submodel 0's partial
        let t = spec_a.c_eff();
        let tb = t.dot(&bank.models[0].b_vector());
        let expect = -(t.dot(&bank.models[0].a.matvec(&x)) + 0.1 * s0) / tb
            - cfg.epsilon * sign0(s0)
            - cfg.gains[0] * s0;
        assert!((u - expect).abs() < 1e-12);
    }

    #[test]
    fn aggregate_reaching_by_finite_difference() {
        // with gains passing the aggregate bound, S * S_dot < 0 at sampled
        // states, S_dot taken by finite difference along the fused
        // closed-loop flow with the weights frozen and the disturbance at
        // its worst direction
        let bank = build_model_bank(&auv_nominal(), 3, 0.2).unwrap();
        let slow =
            SlidingSurfaceSpec::full_row(Vector::from_slice(&crate::defaults::SURFACE_SLOW)).unwrap();
        let mu = [1.0 / 3.0; 3];
        let mut bound = 0.0;
        for (i, m) in bank.models.iter().enumerate() {
            let gb = crate::stability::estimate_gain_bound(m, &slow, 0.1, 2.0, 2000, 40 + i as u64)
                .unwrap();
            bound += mu[i] * gb.k_min;
        }
        let cfg = SmmmConfig {
            gains: vec![1.1 * bound; 3],
            mu: mu.to_vec(),
            epsilon: 5e-4,
            m_bound: 0.1,
            surfaces: SmmmSurfaces::PerModel(vec![slow.clone(); 3]),
            order: SmOrder::First,
            second_order: Some(SecondOrderParams::new(1.0).unwrap()),
            k2: 5.0,
        };
        let v = ValidityVector::new(mu.to_vec()).unwrap();
        let t_row = slow.c_eff();
        let h = 1e-6;
        let states = crate::stability::sample_surface_region(&t_row, 2.0, 1000, 4242);
        for x in &states {
            let (u, s_agg) = smmm_multi_step(&bank, &cfg, &v, x).unwrap();
            let phi = t_row.scale(sign0(s_agg) * 0.1 * x.norm() / t_row.norm());
            let mut xdot = phi;
            for (i, m) in bank.models.iter().enumerate() {
                xdot = xdot.axpy(mu[i], &m.a.matvec(x).axpy(u, &m.b_vector()));
            }
            let x_next = x.axpy(h, &xdot);
            let (_, s_next) = smmm_multi_step(&bank, &cfg, &v, &x_next).unwrap();
            let s_dot = (s_next - s_agg) / h;
            assert!(s_agg * s_dot < 0.0, "reaching violated at S = {s_agg}");
        }
    }

    #[test]
    fn aggregate_lyapunov_decreases_along_trajectory() {
        // V(S) = sum_i s_i^2 must fall monotonically outside the surface band
        // when the gains pass the aggregate bound; small dt keeps the huge
        // gains inside the discrete stability limit
        let bank = build_model_bank(&auv_nominal(), 3, 0.2).unwrap();
        let slow =
            SlidingSurfaceSpec::full_row(Vector::from_slice(&crate::defaults::SURFACE_SLOW)).unwrap();
        let mu = [1.0 / 3.0; 3];
        let mut bound = 0.0;
        for (i, m) in bank.models.iter().enumerate() {
            let gb = crate::stability::estimate_gain_bound(m, &slow, 0.1, 2.0, 2000, 70 + i as u64)
                .unwrap();
            bound += mu[i] * gb.k_min;
        }
        let mut sc = crate::sim::Scenario::default_scenario()
            .with_controller(crate::sim::ControllerKind::SmmmMulti);
        sc.smmm_gains = vec![1.1 * bound; 3];
        sc.dt = 1e-4;
        sc.duration = 0.5;
        // start well off the surface so the band is actually exercised
        sc.x0 = crate::plant::StateVector::new(0.01, 0.0, 0.0, 0.9);
        let trace = crate::sim::run_simulation(&sc).unwrap();
        let s_i = trace.s_i.as_ref().unwrap();
        assert!(s_i[0].iter().any(|s| s.abs() > 0.02), "trajectory must start outside the band");
        for k in 1..trace.len() {
            let outside =
                s_i[k - 1].iter().chain(&s_i[k]).any(|s| s.abs() > 0.02);
            if outside {
                let v_prev: f64 = s_i[k - 1].iter().map(|s| s * s).sum();
                let v_now: f64 = s_i[k].iter().map(|s| s * s).sum();
                assert!(v_now <= v_prev + 1e-15, "V increased at step {k}: {v_prev} -> {v_now}");
            }
        }
    }

    #[test]
    fn multi_step_reports_degenerate_submodel() {
        let bank = build_model_bank(&auv_nominal(), 2, 0.2).unwrap();
        let bad = SlidingSurfaceSpec::full_row(Vector::from_slice(&[0.0, 0.0, 1.0, 0.0])).unwrap();
        let cfg = cfg_first(2, SmmmSurfaces::PerModel(vec![fast_spec(), bad]));
        let v = ValidityVector::uniform(2);
        match smmm_multi_step(&bank, &cfg, &v, &Vector::from_slice(&[0.1, 0.0, 0.0, 0.0])) {
            Err(ControlError::SurfaceDegenerate { submodel: Some(1) }) => {}
            other => panic!("expected degenerate submodel 1, got {other:?}"),
        }
    }
}
