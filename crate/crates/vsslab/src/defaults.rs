//! Documented default configuration of the laboratory.
//!
//! The plant is non-minimum-phase in every measured channel, so surfaces
//! with small coefficients cannot have stable sliding dynamics. The two
//! default surfaces below were designed by exact placement of the sliding
//! zeros (the coefficient-to-zero-polynomial map is invertible for this
//! plant), both normalized to `C B = 0.33`:
//!
//! * fast surface, zeros at -0.45, -0.55, -0.65: used by the single-surface
//!   controllers; settles the depth step in under ten seconds.
//! * slow surface, zeros at -0.2, -0.28, -0.45: used by the multi-surface
//!   fusion controller, trading speed for a much smoother control signal.

/// Surface row for single-surface controllers (sliding zeros -0.45/-0.55/-0.65).
pub const SURFACE_FAST: [f64; 4] =
    [98.96525992793352, -32.987592831404825, -21.350932314261073, -0.44876373626373633];

/// Surface row for the multi-surface controller (sliding zeros -0.2/-0.28/-0.45).
pub const SURFACE_SLOW: [f64; 4] =
    [51.9903542627574, -16.210840808127642, -10.325060184376339, -0.0702958579881657];

/// Simulation grid.
pub const DT: f64 = 1e-3;
pub const DURATION: f64 = 30.0;

/// Depth command and envelope.
pub const Z_REF: f64 = 1.0;
pub const ENVELOPE_MIN: f64 = 0.7;
pub const ENVELOPE_MAX: f64 = 1.3;

/// Initial state: at rest, slightly above the commanded depth.
pub const X0: [f64; 4] = [0.0, 0.0, 0.0, 0.9];

/// Disturbance: state-proportional, matched to the input channel.
pub const DISTURBANCE_M: f64 = 0.1;
pub const DISTURBANCE_FREQUENCY: f64 = 5.0;
pub const DISTURBANCE_SEED: u64 = 7;

/// Reaching margins per controller family. The fused laws carry strong
/// continuous terms and need far less discontinuous authority.
pub const EPSILON_SMC: f64 = 0.05;
pub const EPSILON_SMMM: f64 = 0.02;
pub const EPSILON_SMMM_MULTI: f64 = 5e-4;

/// Remaining gains.
pub const K_SWITCHING: f64 = 1.0;
pub const ALPHA: f64 = 1.0;
pub const K2: f64 = 5.0;
pub const M_BOUND: f64 = 0.1;

/// Bank shape.
pub const BANK_N: usize = 3;
pub const BANK_DELTA: f64 = 0.2;

/// Metrics band (fraction of the reference scale).
pub const SETTLE_BAND: f64 = 0.05;

/// Master seed of the default scenario.
pub const SEED: u64 = 42;
