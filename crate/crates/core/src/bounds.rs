//! Upper and lower bounds on the ionization probability of a bound state
//! hit by a finite pulse.
//!
//! Writing `b = b(τ)`, `c = c(τ)` and `T₁ = ∫₀^τ ‖(V(x − c(t)e_z) − V(x))ψ‖ dt`:
//!
//! | kind     | bound                                                       | needs        |
//! |----------|-------------------------------------------------------------|--------------|
//! | `upper1` | `(T₁ + |c|‖p_zψ‖ + |b|‖p_zψ‖/(−E − ½b²))²`                   | `½b² < −E`   |
//! | `upper2` | `(T₁ + |c|‖p_zψ‖ + |b|‖zψ‖)²`                                | —            |
//! | `lower`  | `1 − (T₁ + ‖(V(x−c e_z)−V)ψ‖/(E + ½b²) + |b|‖p_zψ‖/(E + ½b²))²` | `½b² > −E`   |
//! | `pfeifer`| `(∫₀^τ |E|)² ‖zψ‖²`                                          | —            |
//! | `pert1`  | `b² ‖zψ‖²`                                                   | —            |
//!
//! The two energy conditions are hypotheses, not approximations: outside
//! them the report is marked invalid and carries no value. `pert1` is the
//! computable upper estimate of first-order perturbation theory (the bound
//! state projector is replaced by the identity).
//!
//! `T₁` can be estimated by `τ C` with a state-wide constant `C`
//! ([`ShiftMode::Estimate`]), or integrated along the actual trajectory
//! `c(t)` with the sharper per-displacement norms ([`ShiftMode::Quadrature`],
//! [`ShiftMode::Exact`]). The `drop_spreading` option removes `T₁`
//! altogether, isolating the field-dependent terms.

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::hydrogen::{self, HydrogenError, HydrogenState, MatrixElementValue, ShiftNorm};
use crate::kato;
use crate::pulse::{Pulse, PulseError};
use crate::quadrature::{Integrator, QuadratureError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Pulse(#[from] PulseError),
    #[error(transparent)]
    Hydrogen(#[from] HydrogenError),
    #[error("first-term quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("shift mode `{mode}` is not available: {reason}")]
    UnsupportedShiftMode { mode: ShiftMode, reason: String },
    #[error("invalid state data: {0}")]
    InvalidStateData(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum ShiftMode {
    /// `‖(V(x − c e_z) − V)ψ‖ ≤ C` for every `c`.
    #[default]
    Estimate,
    /// Per-displacement upper estimate (for the ground state `√(N₂(c) + 2)`).
    Quadrature,
    /// Per-displacement exact norm including the cross term.
    Exact,
}

impl fmt::Display for ShiftMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShiftMode::Estimate => "estimate",
            ShiftMode::Quadrature => "quadrature",
            ShiftMode::Exact => "exact",
        })
    }
}

impl FromStr for ShiftMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "estimate" => Ok(ShiftMode::Estimate),
            "quadrature" => Ok(ShiftMode::Quadrature),
            "exact" => Ok(ShiftMode::Exact),
            other => Err(format!(
                "unknown shift mode `{other}` (expected estimate, quadrature or exact)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BoundOptions {
    pub drop_spreading: bool,
    pub shift_mode: ShiftMode,
}

impl BoundOptions {
    pub fn drop_spreading(mut self, drop: bool) -> Self {
        self.drop_spreading = drop;
        self
    }

    pub fn shift_mode(mut self, mode: ShiftMode) -> Self {
        self.shift_mode = mode;
        self
    }
}

/// User-supplied `c ↦ ‖(V(x − c e_z) − V)ψ‖` (or an upper estimate of it).
pub type ShiftNormFn = Arc<dyn Fn(f64) -> Result<MatrixElementValue, BoundsError> + Send + Sync>;

#[derive(Clone)]
pub enum ShiftSource {
    /// Only the constant `C` is known.
    ConstantOnly,
    /// Hydrogen ground state: shifted-Coulomb integrals.
    HydrogenGround,
    Custom(ShiftNormFn),
}

impl fmt::Debug for ShiftSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftSource::ConstantOnly => f.write_str("ConstantOnly"),
            ShiftSource::HydrogenGround => f.write_str("HydrogenGround"),
            ShiftSource::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Everything the bounds need to know about the initial state.
#[derive(Debug, Clone)]
pub struct StateData {
    pub energy: f64,
    /// `‖p_z ψ‖` (a norm, not its square).
    pub pz_norm: MatrixElementValue,
    /// `‖z ψ‖`.
    pub z_norm: MatrixElementValue,
    /// `C` with `‖(V(x − c e_z) − V)ψ‖ ≤ C` for all `c`.
    pub generic_shift_constant: f64,
    pub shift: ShiftSource,
}

fn sqrt_element(v: MatrixElementValue) -> MatrixElementValue {
    MatrixElementValue {
        value: v.value.sqrt(),
        exactness: v.exactness,
    }
}

impl StateData {
    pub fn new(
        energy: f64,
        pz_norm: MatrixElementValue,
        z_norm: MatrixElementValue,
        generic_shift_constant: f64,
    ) -> Result<Self, BoundsError> {
        if !(energy < 0.0 && energy.is_finite()) {
            return Err(BoundsError::InvalidStateData(format!(
                "energy must be negative, got {energy}"
            )));
        }
        for (name, v) in [
            ("pz_norm", pz_norm.value),
            ("z_norm", z_norm.value),
            ("generic_shift_constant", generic_shift_constant),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(BoundsError::InvalidStateData(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        Ok(Self {
            energy,
            pz_norm,
            z_norm,
            generic_shift_constant,
            shift: ShiftSource::ConstantOnly,
        })
    }

    pub fn with_shift_fn(mut self, f: ShiftNormFn) -> Self {
        self.shift = ShiftSource::Custom(f);
        self
    }

    /// Hydrogen eigenstate data. The ground state uses `C = 2` and the
    /// shifted-Coulomb integrals; other states use the Kato coefficient
    /// `K(n, ℓ)` as `C`.
    pub fn hydrogen(state: &HydrogenState) -> Self {
        let (c, shift) = if state.is_ground() {
            (2.0, ShiftSource::HydrogenGround)
        } else {
            (
                kato::generic_first_term_coefficient(state),
                ShiftSource::ConstantOnly,
            )
        };
        Self {
            energy: state.energy(),
            pz_norm: sqrt_element(state.pz_norm_sq()),
            z_norm: sqrt_element(state.z_norm_sq()),
            generic_shift_constant: c,
            shift,
        }
    }

    /// `‖(V(x − c e_z) − V)ψ‖` (or an upper estimate) in the given mode.
    pub fn shift_norm(&self, c: f64, mode: ShiftMode) -> Result<MatrixElementValue, BoundsError> {
        match (mode, &self.shift) {
            (ShiftMode::Estimate, _) | (ShiftMode::Quadrature, ShiftSource::ConstantOnly) => {
                Ok(MatrixElementValue::upper_estimate(self.generic_shift_constant))
            }
            (ShiftMode::Quadrature, ShiftSource::HydrogenGround) => {
                Ok(hydrogen::shift_difference_norm(c, ShiftNorm::Estimate)?)
            }
            (ShiftMode::Exact, ShiftSource::HydrogenGround) => Ok(hydrogen::shift_difference_norm(c, ShiftNorm::Exact)?),
            (_, ShiftSource::Custom(f)) => f(c),
            (ShiftMode::Exact, ShiftSource::ConstantOnly) => Err(BoundsError::UnsupportedShiftMode {
                mode,
                reason: "exact shifted-potential norms are only implemented for the hydrogen ground state".into(),
            }),
        }
    }

    /// Checks up front that `mode` can be evaluated for this state.
    pub fn supports(&self, mode: ShiftMode) -> Result<(), BoundsError> {
        self.shift_norm(0.0, mode).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Upper1,
    Upper2,
    Lower,
    Pfeifer,
    Pert1,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        BoundKind::Upper1,
        BoundKind::Upper2,
        BoundKind::Lower,
        BoundKind::Pfeifer,
        BoundKind::Pert1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Upper1 => "upper1",
            BoundKind::Upper2 => "upper2",
            BoundKind::Lower => "lower",
            BoundKind::Pfeifer => "pfeifer",
            BoundKind::Pert1 => "pert1",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// Probability-scale value before clipping; `None` when invalid.
    pub raw: Option<f64>,
    /// `raw` clipped to `[0, 1]`.
    pub clipped: Option<f64>,
    pub valid: bool,
    pub reason: String,
    pub terms: Vec<Term>,
}

impl BoundReport {
    fn valid(kind: BoundKind, raw: f64, terms: Vec<Term>) -> Self {
        Self {
            kind,
            raw: Some(raw),
            clipped: Some(raw.clamp(0.0, 1.0)),
            valid: true,
            reason: "ok".into(),
            terms,
        }
    }

    fn invalid(kind: BoundKind, reason: String, terms: Vec<Term>) -> Self {
        Self {
            kind,
            raw: None,
            clipped: None,
            valid: false,
            reason,
            terms,
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }

    /// Rebuilds the raw value from the reported terms.
    pub fn recombine(&self) -> Option<f64> {
        if !self.valid {
            return None;
        }
        let sum = |names: &[&str]| -> Option<f64> { names.iter().map(|n| self.term(n)).sum() };
        match self.kind {
            BoundKind::Upper1 => sum(&["T1", "T2", "T3"]).map(|s| s * s),
            BoundKind::Upper2 => sum(&["T1", "T2", "T3_prime"]).map(|s| s * s),
            BoundKind::Lower => sum(&["T1", "shift", "momentum"]).map(|s| 1.0 - s * s),
            BoundKind::Pfeifer => {
                let v = self.term("abs_field_integral")? * self.term("z_norm")?;
                Some(v * v)
            }
            BoundKind::Pert1 => {
                let v = self.term("b")? * self.term("z_norm")?;
                Some(v * v)
            }
        }
    }
}

fn term(name: &'static str, value: f64) -> Term {
    Term { name, value }
}

/// Tolerances for integrating shift norms along `c(t)`; the integrand is
/// itself a quadrature result, so the outer rule is slightly looser.
fn first_term_integrator() -> Integrator {
    Integrator::new(1e-11, 1e-9)
}

/// `T₁`, or 0 with `drop_spreading`.
pub fn first_term(
    pulse: &Pulse,
    state: &StateData,
    options: BoundOptions,
) -> Result<f64, BoundsError> {
    if options.drop_spreading {
        return Ok(0.0);
    }
    let tau = pulse.duration();
    let constant_only =
        matches!(state.shift, ShiftSource::ConstantOnly) && options.shift_mode != ShiftMode::Exact;
    if options.shift_mode == ShiftMode::Estimate || constant_only {
        state.supports(options.shift_mode)?;
        return Ok(tau * state.generic_shift_constant);
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    let failure = RefCell::new(None);
    let integrand = |t: f64| {
        let value = pulse
            .displacement(t)
            .map_err(BoundsError::from)
            .and_then(|c| state.shift_norm(c, options.shift_mode));
        match value {
            Ok(v) => v.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let mut points = vec![0.0];
    points.extend_from_slice(pulse.breakpoints());
    points.push(tau);
    let result = first_term_integrator().integrate_pieces(integrand, &points);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(result?.value)
}

struct Common {
    t1: f64,
    b: f64,
    c: f64,
}

fn common(pulse: &Pulse, state: &StateData, options: BoundOptions) -> Result<Common, BoundsError> {
    let tau = pulse.duration();
    Ok(Common {
        t1: first_term(pulse, state, options)?,
        b: pulse.momentum_transfer(tau)?,
        c: pulse.displacement(tau)?,
    })
}

fn upper_1_from(common: &Common, state: &StateData) -> BoundReport {
    let Common { t1, b, c } = *common;
    let t2 = c.abs() * state.pz_norm.value;
    let gap = -state.energy - 0.5 * b * b;
    if gap <= 0.0 {
        return BoundReport::invalid(
            BoundKind::Upper1,
            format!(
                "classical energy transfer b²/2 = {} is not below the ionization energy {}",
                0.5 * b * b,
                -state.energy
            ),
            vec![term("T1", t1), term("T2", t2)],
        );
    }
    let t3 = b.abs() * state.pz_norm.value / gap;
    let s = t1 + t2 + t3;
    BoundReport::valid(
        BoundKind::Upper1,
        s * s,
        vec![term("T1", t1), term("T2", t2), term("T3", t3)],
    )
}

fn upper_2_from(common: &Common, state: &StateData) -> BoundReport {
    let Common { t1, b, c } = *common;
    let t2 = c.abs() * state.pz_norm.value;
    let t3 = b.abs() * state.z_norm.value;
    let s = t1 + t2 + t3;
    BoundReport::valid(
        BoundKind::Upper2,
        s * s,
        vec![term("T1", t1), term("T2", t2), term("T3_prime", t3)],
    )
}

fn lower_from(
    common: &Common,
    state: &StateData,
    options: BoundOptions,
) -> Result<BoundReport, BoundsError> {
    let Common { t1, b, c } = *common;
    let excess = state.energy + 0.5 * b * b;
    if excess <= 0.0 {
        return Ok(BoundReport::invalid(
            BoundKind::Lower,
            format!(
                "classical energy transfer b²/2 = {} does not exceed the ionization energy {}",
                0.5 * b * b,
                -state.energy
            ),
            vec![term("T1", t1)],
        ));
    }
    let shift = state.shift_norm(c, options.shift_mode)?.value / excess;
    let momentum = b.abs() * state.pz_norm.value / excess;
    let s = t1 + shift + momentum;
    Ok(BoundReport::valid(
        BoundKind::Lower,
        1.0 - s * s,
        vec![
            term("T1", t1),
            term("shift", shift),
            term("momentum", momentum),
        ],
    ))
}

pub fn upper_bound_1(
    pulse: &Pulse,
    state: &StateData,
    options: BoundOptions,
) -> Result<BoundReport, BoundsError> {
    Ok(upper_1_from(&common(pulse, state, options)?, state))
}

pub fn upper_bound_2(
    pulse: &Pulse,
    state: &StateData,
    options: BoundOptions,
) -> Result<BoundReport, BoundsError> {
    Ok(upper_2_from(&common(pulse, state, options)?, state))
}

pub fn lower_bound(
    pulse: &Pulse,
    state: &StateData,
    options: BoundOptions,
) -> Result<BoundReport, BoundsError> {
    lower_from(&common(pulse, state, options)?, state, options)
}

/// `(∫₀^τ |E|)² ‖zψ‖²`, using `⟨z⟩ = 0` so the dispersion is `‖zψ‖`.
pub fn pfeifer_bound(pulse: &Pulse, state: &StateData) -> Result<BoundReport, BoundsError> {
    let a = pulse.abs_field_integral()?;
    let v = a * state.z_norm.value;
    Ok(BoundReport::valid(
        BoundKind::Pfeifer,
        v * v,
        vec![
            term("abs_field_integral", a),
            term("z_norm", state.z_norm.value),
        ],
    ))
}

/// `b(τ)² ‖zψ‖²`.
pub fn first_order_pert_bound(
    pulse: &Pulse,
    state: &StateData,
) -> Result<BoundReport, BoundsError> {
    let b = pulse.momentum_transfer(pulse.duration())?;
    let v = b * state.z_norm.value;
    Ok(BoundReport::valid(
        BoundKind::Pert1,
        v * v,
        vec![term("b", b), term("z_norm", state.z_norm.value)],
    ))
}

/// All five bounds in [`BoundKind::ALL`] order, sharing one `T₁` evaluation.
pub fn all_bounds(
    pulse: &Pulse,
    state: &StateData,
    options: BoundOptions,
) -> Result<Vec<BoundReport>, BoundsError> {
    let common = common(pulse, state, options)?;
    Ok(vec![
        upper_1_from(&common, state),
        upper_2_from(&common, state),
        lower_from(&common, state, options)?,
        pfeifer_bound(pulse, state)?,
        first_order_pert_bound(pulse, state)?,
    ])
}

/// `max(0, 1 − (τC)²)`: what the lower bound tends to as `|b| → ∞` at fixed
/// `τ`, since only `T₁ ≤ τC` survives.
pub fn stabilization_floor(state: &StateData, tau: f64) -> f64 {
    let t = tau * state.generic_shift_constant;
    (1.0 - t * t).max(0.0)
}
