//! Finite-duration, linearly polarized electric-field pulses and their
//! classical integrals.
//!
//! For a field `E(t)` supported on `[0, τ]` the bounds only ever see three
//! numbers per time:
//!
//! * `b(t) = ∫₀ᵗ E(s) ds`, the classical momentum transfer,
//! * `c(t) = ∫₀ᵗ b(s) ds = t b(t) − ∫₀ᵗ s E(s) ds`, the quiver displacement,
//! * `a(t) = ½ ∫₀ᵗ b(s)² ds`, the Volkov phase.
//!
//! Past the end of the pulse `b` is frozen while `c` and `a` keep growing
//! linearly. Cosine and constant shapes use closed forms; ramped and
//! tabulated shapes go through adaptive quadrature split at their
//! breakpoints. A delta kick is handled analytically: `b` jumps to `F₀` at
//! `t = 0⁺`, so every `t ≥ 0` already sees the full kick.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::{Integrator, QuadratureError};

/// One atomic unit of intensity in W/cm².
pub const ATOMIC_UNIT_INTENSITY_W_CM2: f64 = 3.5e16;

/// Maximum tolerated disagreement between the two displacement formulas,
/// relative to the size of the terms involved (floored at 1).
pub const DISPLACEMENT_CONSISTENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PulseError {
    #[error("invalid pulse parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("a delta kick is a distributional pulse and cannot be evaluated pointwise")]
    Distributional,
    #[error("pulse integral failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("displacement formulas disagree at t = {t}: ∫b = {direct}, t·b − ∫sE = {moment}")]
    Inconsistent { t: f64, direct: f64, moment: f64 },
    #[error("pulse config: {0}")]
    Config(String),
    #[error("intensity and field amplitude must be non-negative, got {0}")]
    Negative(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PulseShape {
    /// `E₀ cos ωt`.
    Cosine {
        e0: f64,
        omega: f64,
    },
    /// `E₀ g(t) cos ωt` with a `sin²` turn-on over `ramp_cycles` optical
    /// cycles, mirrored at turn-off, and `g = 1` in between.
    CosineRamped {
        e0: f64,
        omega: f64,
        ramp_cycles: f64,
    },
    Constant {
        e0: f64,
    },
    /// `F₀ δ(t)`; the pulse has zero duration.
    DeltaKick {
        f0: f64,
    },
    /// Piecewise-linear field through `(t, E)` samples, zero outside the
    /// sampled span.
    Tabulated {
        samples: Vec<(f64, f64)>,
    },
}

/// Momentum transfer, displacement and Volkov phase at one time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PulseIntegrals {
    pub b: f64,
    pub c: f64,
    pub a: f64,
    pub at_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pulse {
    shape: PulseShape,
    duration: f64,
    breakpoints: Vec<f64>,
    integrator: Integrator,
}

fn invalid(field: &'static str, reason: impl Into<String>) -> PulseError {
    PulseError::InvalidParameter {
        field,
        reason: reason.into(),
    }
}

fn check_finite(field: &'static str, v: f64) -> Result<(), PulseError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite, got {v}")))
    }
}

fn check_nonnegative(field: &'static str, v: f64) -> Result<(), PulseError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            field,
            format!("must be non-negative and finite, got {v}"),
        ))
    }
}

fn check_positive(field: &'static str, v: f64) -> Result<(), PulseError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

impl Pulse {
    pub fn cosine(e0: f64, omega: f64, tau: f64) -> Result<Self, PulseError> {
        check_finite("E0", e0)?;
        check_positive("omega", omega)?;
        check_nonnegative("tau", tau)?;
        Ok(Self::build(
            PulseShape::Cosine { e0, omega },
            tau,
            Vec::new(),
        ))
    }

    /// Cosine pulse lasting a whole number (or fraction) of optical cycles.
    pub fn cosine_cycles(e0: f64, omega: f64, cycles: f64) -> Result<Self, PulseError> {
        check_positive("omega", omega)?;
        Self::cosine(e0, omega, 2.0 * PI * cycles / omega)
    }

    pub fn cosine_ramped(
        e0: f64,
        omega: f64,
        ramp_cycles: f64,
        tau: f64,
    ) -> Result<Self, PulseError> {
        check_finite("E0", e0)?;
        check_positive("omega", omega)?;
        check_nonnegative("tau", tau)?;
        if !(ramp_cycles >= 0.0 && ramp_cycles.is_finite()) {
            return Err(invalid(
                "ramp_cycles",
                format!("must be non-negative, got {ramp_cycles}"),
            ));
        }
        let ramp = ramp_cycles * 2.0 * PI / omega;
        if 2.0 * ramp > tau * (1.0 + 1e-12) {
            return Err(invalid(
                "ramp_cycles",
                format!("turn-on and turn-off ramps ({ramp} each) do not fit in tau = {tau}"),
            ));
        }
        let breakpoints = if ramp > 0.0 {
            let mut bp = vec![ramp, tau - ramp];
            bp.retain(|&t| t > 0.0 && t < tau);
            bp.dedup();
            bp
        } else {
            Vec::new()
        };
        Ok(Self::build(
            PulseShape::CosineRamped {
                e0,
                omega,
                ramp_cycles,
            },
            tau,
            breakpoints,
        ))
    }

    pub fn constant(e0: f64, tau: f64) -> Result<Self, PulseError> {
        check_finite("E0", e0)?;
        check_nonnegative("tau", tau)?;
        Ok(Self::build(PulseShape::Constant { e0 }, tau, Vec::new()))
    }

    /// The identically vanishing field over `[0, tau]`.
    pub fn zero(tau: f64) -> Result<Self, PulseError> {
        Self::constant(0.0, tau)
    }

    pub fn delta_kick(f0: f64) -> Result<Self, PulseError> {
        check_finite("F0", f0)?;
        Ok(Self::build(PulseShape::DeltaKick { f0 }, 0.0, Vec::new()))
    }

    pub fn tabulated(samples: Vec<(f64, f64)>, tau: f64) -> Result<Self, PulseError> {
        check_positive("tau", tau)?;
        if samples.len() < 2 {
            return Err(invalid("samples", "need at least two (t, E) pairs"));
        }
        for &(t, e) in &samples {
            check_finite("samples", t)?;
            check_finite("samples", e)?;
            if t < 0.0 || t > tau {
                return Err(invalid(
                    "samples",
                    format!("sample time {t} outside [0, {tau}]"),
                ));
            }
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(invalid(
                "samples",
                "sample times must be strictly increasing",
            ));
        }
        let breakpoints = samples
            .iter()
            .map(|s| s.0)
            .filter(|&t| t > 0.0 && t < tau)
            .collect();
        Ok(Self::build(
            PulseShape::Tabulated { samples },
            tau,
            breakpoints,
        ))
    }

    fn build(shape: PulseShape, duration: f64, breakpoints: Vec<f64>) -> Self {
        Self {
            shape,
            duration,
            breakpoints,
            integrator: Integrator::default(),
        }
    }

    /// Replaces the integrator used for the quadrature-backed integrals.
    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn shape(&self) -> &PulseShape {
        &self.shape
    }

    /// Pulse length τ; zero for a delta kick.
    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Interior points of `(0, τ)` where the field is not smooth.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn is_distributional(&self) -> bool {
        matches!(self.shape, PulseShape::DeltaKick { .. })
    }

    /// `[0, breakpoints in (0, t), t]`.
    fn pieces(&self, t: f64) -> Vec<f64> {
        let mut pts = Vec::with_capacity(self.breakpoints.len() + 2);
        pts.push(0.0);
        pts.extend(self.breakpoints.iter().copied().filter(|&p| p < t));
        pts.push(t);
        pts
    }

    /// Field strength at `t`; exactly zero outside `[0, τ]`.
    pub fn field(&self, t: f64) -> Result<f64, PulseError> {
        if self.is_distributional() {
            return Err(PulseError::Distributional);
        }
        Ok(self.smooth_field(t))
    }

    fn smooth_field(&self, t: f64) -> f64 {
        if !(0.0..=self.duration).contains(&t) {
            return 0.0;
        }
        match &self.shape {
            PulseShape::Cosine { e0, omega } => e0 * (omega * t).cos(),
            PulseShape::CosineRamped {
                e0,
                omega,
                ramp_cycles,
            } => {
                let ramp = ramp_cycles * 2.0 * PI / omega;
                e0 * ramp_envelope(t, ramp, self.duration) * (omega * t).cos()
            }
            PulseShape::Constant { e0 } => *e0,
            PulseShape::DeltaKick { .. } => 0.0,
            PulseShape::Tabulated { samples } => interpolate(samples, t),
        }
    }

    /// `b(t) = ∫₀ᵗ E`; constant for `t ≥ τ`, zero for `t < 0`.
    pub fn momentum_transfer(&self, t: f64) -> Result<f64, PulseError> {
        if t < 0.0 {
            return Ok(0.0);
        }
        let te = t.min(self.duration);
        Ok(match &self.shape {
            PulseShape::Cosine { e0, omega } => e0 / omega * (omega * te).sin(),
            PulseShape::Constant { e0 } => e0 * te,
            PulseShape::DeltaKick { f0 } => *f0,
            _ => self.momentum_transfer_by_quadrature(te)?,
        })
    }

    /// `∫₀ᵗ E` by adaptive quadrature regardless of shape.
    pub fn momentum_transfer_by_quadrature(&self, t: f64) -> Result<f64, PulseError> {
        if let PulseShape::DeltaKick { f0 } = self.shape {
            return Ok(if t >= 0.0 { f0 } else { 0.0 });
        }
        if t <= 0.0 {
            return Ok(0.0);
        }
        let te = t.min(self.duration);
        let r = self
            .integrator
            .integrate_pieces(|s| self.smooth_field(s), &self.pieces(te))?;
        Ok(r.value)
    }

    /// `c(t) = ∫₀ᵗ b`, checked against `t b(t) − ∫₀ᵗ s E(s) ds`.
    pub fn displacement(&self, t: f64) -> Result<f64, PulseError> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        let te = t.min(self.duration);
        let direct = match &self.shape {
            PulseShape::Cosine { e0, omega } => {
                let half = (0.5 * omega * te).sin();
                2.0 * e0 / (omega * omega) * half * half
            }
            PulseShape::Constant { e0 } => 0.5 * e0 * te * te,
            PulseShape::DeltaKick { .. } => 0.0,
            _ => self.displacement_by_quadrature(te)?,
        };
        if !self.is_distributional() {
            let b = self.momentum_transfer(te)?;
            let moment = self.first_moment(te)?;
            let alt = te * b - moment;
            let scale = 1f64.max((te * b).abs()).max(moment.abs());
            if (alt - direct).abs() > DISPLACEMENT_CONSISTENCY_TOL * scale {
                return Err(PulseError::Inconsistent {
                    t: te,
                    direct,
                    moment: alt,
                });
            }
        }
        let b_end = self.momentum_transfer(self.duration)?;
        Ok(direct + (t - te) * b_end)
    }

    /// `∫₀ᵗ b(s) ds` by nested quadrature (no extension past τ).
    pub fn displacement_by_quadrature(&self, t: f64) -> Result<f64, PulseError> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        let te = t.min(self.duration);
        self.integrate_fallible(|s| self.momentum_transfer_by_quadrature(s), te)
    }

    /// `t b(t) − ∫₀ᵗ s E(s) ds` (no extension past τ).
    pub fn displacement_by_moment(&self, t: f64) -> Result<f64, PulseError> {
        if t <= 0.0 || self.is_distributional() {
            return Ok(0.0);
        }
        let te = t.min(self.duration);
        Ok(te * self.momentum_transfer(te)? - self.first_moment(te)?)
    }

    fn first_moment(&self, te: f64) -> Result<f64, PulseError> {
        Ok(self
            .integrator
            .integrate_pieces(|s| s * self.smooth_field(s), &self.pieces(te))?
            .value)
    }

    /// `a(t) = ½ ∫₀ᵗ b²`; non-negative and non-decreasing.
    pub fn volkov_phase(&self, t: f64) -> Result<f64, PulseError> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        let te = t.min(self.duration);
        let inside = match &self.shape {
            PulseShape::Cosine { e0, omega } => {
                let w = *omega;
                e0 * e0 / (4.0 * w * w) * (te - (2.0 * w * te).sin() / (2.0 * w))
            }
            PulseShape::Constant { e0 } => e0 * e0 * te * te * te / 6.0,
            PulseShape::DeltaKick { .. } => 0.0,
            _ => self.volkov_phase_by_quadrature(te)?,
        };
        let b_end = self.momentum_transfer(self.duration)?;
        Ok(inside.max(0.0) + 0.5 * b_end * b_end * (t - te))
    }

    /// `½ ∫₀ᵗ b²` by nested quadrature (no extension past τ).
    pub fn volkov_phase_by_quadrature(&self, t: f64) -> Result<f64, PulseError> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        let te = t.min(self.duration);
        let v = self.integrate_fallible(
            |s| {
                let b = self.momentum_transfer_by_quadrature(s)?;
                Ok(0.5 * b * b)
            },
            te,
        )?;
        Ok(v)
    }

    pub fn integrals(&self, t: f64) -> Result<PulseIntegrals, PulseError> {
        Ok(PulseIntegrals {
            b: self.momentum_transfer(t)?,
            c: self.displacement(t)?,
            a: self.volkov_phase(t)?,
            at_time: t,
        })
    }

    /// `∫₀^τ |E(t)| dt`, the total field variation seen by the survival bound.
    pub fn abs_field_integral(&self) -> Result<f64, PulseError> {
        let tau = self.duration;
        Ok(match &self.shape {
            PulseShape::Cosine { e0, omega } => e0.abs() / omega * abs_cos_integral(omega * tau),
            PulseShape::Constant { e0 } => e0.abs() * tau,
            PulseShape::DeltaKick { f0 } => f0.abs(),
            _ => self.abs_field_integral_by_quadrature()?,
        })
    }

    /// `∫₀^τ |E|` by quadrature split at breakpoints and sign changes.
    pub fn abs_field_integral_by_quadrature(&self) -> Result<f64, PulseError> {
        if let PulseShape::DeltaKick { f0 } = self.shape {
            return Ok(f0.abs());
        }
        let tau = self.duration;
        let mut pts = self.pieces(tau);
        pts.extend(self.sign_changes());
        pts.retain(|&t| (0.0..=tau).contains(&t));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        Ok(self
            .integrator
            .integrate_pieces(|s| self.smooth_field(s).abs(), &pts)?
            .value)
    }

    fn sign_changes(&self) -> Vec<f64> {
        match &self.shape {
            PulseShape::Cosine { omega, .. } | PulseShape::CosineRamped { omega, .. } => {
                let mut out = Vec::new();
                let mut k = 0.0;
                loop {
                    let t = (k + 0.5) * PI / omega;
                    if t >= self.duration {
                        break out;
                    }
                    out.push(t);
                    k += 1.0;
                }
            }
            PulseShape::Tabulated { samples } => samples
                .windows(2)
                .filter(|w| w[0].1 * w[1].1 < 0.0)
                .map(|w| {
                    let (t0, e0) = w[0];
                    let (t1, e1) = w[1];
                    t0 + (t1 - t0) * e0 / (e0 - e1)
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Integrates a fallible integrand over the smooth pieces of `[0, t]`.
    fn integrate_fallible<F>(&self, f: F, t: f64) -> Result<f64, PulseError>
    where
        F: Fn(f64) -> Result<f64, PulseError>,
    {
        let failure = std::cell::RefCell::new(None);
        let r = self.integrator.integrate_pieces(
            |s| match f(s) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            &self.pieces(t),
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(r?.value)
    }
}

fn ramp_envelope(t: f64, ramp: f64, tau: f64) -> f64 {
    if ramp <= 0.0 {
        return 1.0;
    }
    let on = if t < ramp {
        let s = (FRAC_PI_2 * t / ramp).sin();
        s * s
    } else {
        1.0
    };
    let off = if t > tau - ramp {
        let s = (FRAC_PI_2 * (tau - t) / ramp).sin();
        s * s
    } else {
        1.0
    };
    on.min(off)
}

fn interpolate(samples: &[(f64, f64)], t: f64) -> f64 {
    let (first, last) = (samples[0], samples[samples.len() - 1]);
    if t < first.0 || t > last.0 {
        return 0.0;
    }
    let idx = samples.partition_point(|s| s.0 <= t);
    if idx == samples.len() {
        return last.1;
    }
    let (t0, e0) = samples[idx - 1];
    let (t1, e1) = samples[idx];
    e0 + (e1 - e0) * (t - t0) / (t1 - t0)
}

/// `∫₀ˣ |cos u| du`.
fn abs_cos_integral(x: f64) -> f64 {
    let halves = (x / PI).floor();
    let rem = x - halves * PI;
    let partial = if rem <= FRAC_PI_2 {
        rem.sin()
    } else {
        2.0 - rem.sin()
    };
    2.0 * halves + partial
}

/// Peak field amplitude in atomic units for an intensity in W/cm².
pub fn intensity_to_field(intensity_w_cm2: f64) -> Result<f64, PulseError> {
    if intensity_w_cm2.is_nan() || intensity_w_cm2 < 0.0 {
        return Err(PulseError::Negative(intensity_w_cm2));
    }
    Ok((intensity_w_cm2 / ATOMIC_UNIT_INTENSITY_W_CM2).sqrt())
}

/// Intensity in W/cm² for a field amplitude in atomic units.
pub fn field_to_intensity(field_au: f64) -> Result<f64, PulseError> {
    if field_au.is_nan() || field_au < 0.0 {
        return Err(PulseError::Negative(field_au));
    }
    Ok(field_au * field_au * ATOMIC_UNIT_INTENSITY_W_CM2)
}

/// On-disk pulse description (TOML, top-level keys).
///
/// ```toml
/// shape = "cosine"
/// E0 = 5.0
/// omega = 1.5
/// tau = 1.0471975511965976
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum PulseConfig {
    Cosine {
        #[serde(rename = "E0")]
        e0: f64,
        omega: f64,
        tau: f64,
    },
    CosineRamped {
        #[serde(rename = "E0")]
        e0: f64,
        omega: f64,
        ramp_cycles: f64,
        tau: f64,
    },
    Constant {
        #[serde(rename = "E0")]
        e0: f64,
        tau: f64,
    },
    DeltaKick {
        #[serde(rename = "F0")]
        f0: f64,
    },
    Tabulated {
        samples: Vec<[f64; 2]>,
        tau: f64,
    },
}

impl PulseConfig {
    pub fn parse(text: &str) -> Result<Self, PulseError> {
        toml::from_str(text).map_err(|e| PulseError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("pulse config is always representable")
    }

    pub fn build(&self) -> Result<Pulse, PulseError> {
        match self {
            PulseConfig::Cosine { e0, omega, tau } => Pulse::cosine(*e0, *omega, *tau),
            PulseConfig::CosineRamped {
                e0,
                omega,
                ramp_cycles,
                tau,
            } => Pulse::cosine_ramped(*e0, *omega, *ramp_cycles, *tau),
            PulseConfig::Constant { e0, tau } => Pulse::constant(*e0, *tau),
            PulseConfig::DeltaKick { f0 } => Pulse::delta_kick(*f0),
            PulseConfig::Tabulated { samples, tau } => {
                Pulse::tabulated(samples.iter().map(|s| (s[0], s[1])).collect(), *tau)
            }
        }
    }
}

impl From<&Pulse> for PulseConfig {
    fn from(p: &Pulse) -> Self {
        let tau = p.duration;
        match &p.shape {
            PulseShape::Cosine { e0, omega } => PulseConfig::Cosine {
                e0: *e0,
                omega: *omega,
                tau,
            },
            PulseShape::CosineRamped {
                e0,
                omega,
                ramp_cycles,
            } => PulseConfig::CosineRamped {
                e0: *e0,
                omega: *omega,
                ramp_cycles: *ramp_cycles,
                tau,
            },
            PulseShape::Constant { e0 } => PulseConfig::Constant { e0: *e0, tau },
            PulseShape::DeltaKick { f0 } => PulseConfig::DeltaKick { f0: *f0 },
            PulseShape::Tabulated { samples } => PulseConfig::Tabulated {
                samples: samples.iter().map(|&(t, e)| [t, e]).collect(),
                tau,
            },
        }
    }
}
