//! Gordon–Volkov propagators and the gauge transformations between the
//! length, velocity and Kramers–Henneberger frames.
//!
//! Conventions: `p_z = −i ∂_z`, so `(e^{iσp_z} ψ)(z) = ψ(z + σ)`. The three
//! field-driven free Hamiltonians are
//!
//! * length:   `H₁ = −Δ/2 + z E(t)`,
//! * velocity: `H₂ = (p − b(t) e_z)²/2`,
//! * KH:       `H₃ = −Δ/2`,
//!
//! related by `A₂←₁ = e^{ibz}` and `A₁←₃ = T = e^{−ia} e^{−ibz} e^{icp_z}`.
//! Conjugating the free kernel with `T` gives the length-gauge kernel
//!
//! ```text
//! U₀,₁(x,t; x′,t′) = e^{i(a′−a)} e^{i(b′z′ − b z)} K₀(x + c e_z, t; x′ + c′ e_z, t′)
//! ```
//!
//! and the velocity-gauge kernel is the same without the `b` phase. Primed
//! quantities are evaluated at `t′`.
//!
//! Every pulse dependence is a pure phase on the `z`-factor, so 1-D kernels
//! along the polarization axis carry all the physics; the transverse factors
//! are plain free kernels.
//!
//! The complex power `(2πiΔ)^{−3/2}` uses the principal branch: its phase
//! is `−3π/4 · sign(Δ)` (and `−π/4 · sign(Δ)` for the 1-D factor).

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::parallel::{self, Execution};
use crate::pulse::{Pulse, PulseError};
use crate::quadrature::{Integrator, QuadratureError};

/// Fractional part of `σ/dz` below which a shift counts as grid-commensurate.
const COMMENSURATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VolkovError {
    #[error("kernel at equal times is the distribution δ(x − x′), not a function")]
    EqualTimes,
    #[error(transparent)]
    Pulse(#[from] PulseError),
    #[error("propagation quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("shift {shift} moves the whole grid span {span} out of range")]
    ShiftExceedsGrid { shift: f64, span: f64 },
    #[error(
        "shift {shift} is not a multiple of the grid step {step} and interpolation is disabled"
    )]
    NonCommensurateShift { shift: f64, step: f64 },
    #[error("gauge frames do not chain: {0}")]
    FrameMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaugeFrame {
    Length,
    Velocity,
    KramersHenneberger,
}

/// Pulse integrals at the two kernel times.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VolkovKernelParams {
    pub t: f64,
    pub t_prime: f64,
    pub b_t: f64,
    pub b_tp: f64,
    pub c_t: f64,
    pub c_tp: f64,
    pub a_t: f64,
    pub a_tp: f64,
}

impl VolkovKernelParams {
    pub fn from_pulse(pulse: &Pulse, t: f64, t_prime: f64) -> Result<Self, VolkovError> {
        let now = pulse.integrals(t)?;
        let then = pulse.integrals(t_prime)?;
        Ok(Self {
            t,
            t_prime,
            b_t: now.b,
            b_tp: then.b,
            c_t: now.c,
            c_tp: then.c,
            a_t: now.a,
            a_tp: then.a,
        })
    }

    /// Field-free parameters (all integrals zero).
    pub fn free(t: f64, t_prime: f64) -> Self {
        Self {
            t,
            t_prime,
            ..Self::default()
        }
    }

    fn delta(&self) -> Result<f64, VolkovError> {
        let d = self.t - self.t_prime;
        if d == 0.0 {
            Err(VolkovError::EqualTimes)
        } else {
            Ok(d)
        }
    }
}

/// `(2πiΔ)^{−d/2}` on the principal branch.
fn prefactor(delta: f64, dims: i32) -> Complex64 {
    let half = dims as f64 / 2.0;
    let modulus = (2.0 * PI * delta.abs()).powf(-half);
    Complex64::from_polar(modulus, -half * 0.5 * PI * delta.signum())
}

/// 1-D free kernel `(2πiΔ)^{−1/2} exp(i(z − z′)²/(2Δ))`, `Δ = t − t′`.
pub fn free_kernel_1d(
    z: f64,
    t: f64,
    z_prime: f64,
    t_prime: f64,
) -> Result<Complex64, VolkovError> {
    let delta = VolkovKernelParams::free(t, t_prime).delta()?;
    let d = z - z_prime;
    Ok(prefactor(delta, 1) * Complex64::from_polar(1.0, d * d / (2.0 * delta)))
}

/// 3-D free kernel `(2πiΔ)^{−3/2} exp(i|x − x′|²/(2Δ))`.
pub fn free_kernel(
    x: [f64; 3],
    t: f64,
    x_prime: [f64; 3],
    t_prime: f64,
) -> Result<Complex64, VolkovError> {
    let delta = VolkovKernelParams::free(t, t_prime).delta()?;
    let r2: f64 = x.iter().zip(&x_prime).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(prefactor(delta, 3) * Complex64::from_polar(1.0, r2 / (2.0 * delta)))
}

/// Total kernel phase apart from the prefactor, for the `z`-factor.
fn z_phase(frame: GaugeFrame, p: &VolkovKernelParams, z: f64, z_prime: f64, delta: f64) -> f64 {
    match frame {
        GaugeFrame::KramersHenneberger => {
            let d = z - z_prime;
            d * d / (2.0 * delta)
        }
        GaugeFrame::Velocity | GaugeFrame::Length => {
            let d = (z + p.c_t) - (z_prime + p.c_tp);
            let mut phase = (p.a_tp - p.a_t) + d * d / (2.0 * delta);
            if frame == GaugeFrame::Length {
                phase += p.b_tp * z_prime - p.b_t * z;
            }
            phase
        }
    }
}

/// `z`-factor of the Volkov kernel in `frame`. The KH frame has no field
/// terms and gives the free kernel.
pub fn volkov_kernel_1d(
    frame: GaugeFrame,
    params: &VolkovKernelParams,
    z: f64,
    z_prime: f64,
) -> Result<Complex64, VolkovError> {
    let delta = params.delta()?;
    Ok(prefactor(delta, 1) * Complex64::from_polar(1.0, z_phase(frame, params, z, z_prime, delta)))
}

/// Full 3-D Volkov kernel.
pub fn volkov_kernel(
    frame: GaugeFrame,
    params: &VolkovKernelParams,
    x: [f64; 3],
    x_prime: [f64; 3],
) -> Result<Complex64, VolkovError> {
    let delta = params.delta()?;
    let transverse = ((x[0] - x_prime[0]).powi(2) + (x[1] - x_prime[1]).powi(2)) / (2.0 * delta);
    let phase = transverse + z_phase(frame, params, x[2], x_prime[2], delta);
    Ok(prefactor(delta, 3) * Complex64::from_polar(1.0, phase))
}

/// `A = e^{−iφ} e^{−iκz} e^{iσp_z}`, i.e. `(Aψ)(z) = e^{−iφ} e^{−iκz} ψ(z + σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GaugeTransform {
    pub phase: f64,
    pub slope: f64,
    pub shift: f64,
    /// `(from, to)` frames when known; used to reject chains that don't meet.
    pub frames: Option<(GaugeFrame, GaugeFrame)>,
}

impl GaugeTransform {
    pub fn new(phase: f64, slope: f64, shift: f64) -> Self {
        Self {
            phase,
            slope,
            shift,
            frames: None,
        }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// `A₂←₁(t) = e^{ibz}`.
    pub fn length_to_velocity(b: f64) -> Self {
        Self {
            frames: Some((GaugeFrame::Length, GaugeFrame::Velocity)),
            ..Self::new(0.0, -b, 0.0)
        }
    }

    /// `A₁←₃(t) = T(t) = e^{−ia} e^{−ibz} e^{icp_z}`.
    pub fn kramers_henneberger(a: f64, b: f64, c: f64) -> Self {
        Self {
            frames: Some((GaugeFrame::KramersHenneberger, GaugeFrame::Length)),
            ..Self::new(a, b, c)
        }
    }

    /// `self ∘ other` (apply `other` first). Uses
    /// `e^{iσ₁p} e^{−iκ₂z} = e^{−iκ₂σ₁} e^{−iκ₂z} e^{iσ₁p}`.
    pub fn compose(&self, other: &Self) -> Result<Self, VolkovError> {
        let frames = match (self.frames, other.frames) {
            (Some((from1, to1)), Some((from2, to2))) => {
                if from1 != to2 {
                    return Err(VolkovError::FrameMismatch(format!(
                        "{from2:?}→{to2:?} followed by {from1:?}→{to1:?}"
                    )));
                }
                Some((from2, to1))
            }
            _ => None,
        };
        Ok(Self {
            phase: self.phase + other.phase + other.slope * self.shift,
            slope: self.slope + other.slope,
            shift: self.shift + other.shift,
            frames,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            phase: -self.phase + self.slope * self.shift,
            slope: -self.slope,
            shift: -self.shift,
            frames: self.frames.map(|(from, to)| (to, from)),
        }
    }

    /// Kernel `⟨z|A|z′⟩` is `e^{−iφ} e^{−iκz} δ(z′ − z − σ)`; applies it to a
    /// function.
    pub fn apply_fn<F>(&self, f: F, z: f64) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        Complex64::from_polar(1.0, -self.phase - self.slope * z) * f(z + self.shift)
    }

    /// Applies the transform to a sampled wave.
    pub fn apply(
        &self,
        wave: &SampledWave,
        options: ShiftOptions,
    ) -> Result<Transformed, VolkovError> {
        let shifted = wave.translate(self.shift, options)?;
        let values = shifted
            .wave
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| Complex64::from_polar(1.0, -self.phase - self.slope * wave.z(j)) * v)
            .collect();
        Ok(Transformed {
            wave: SampledWave {
                values,
                ..shifted.wave
            },
            ..shifted
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.phase - other.phase).abs() <= tol
            && (self.slope - other.slope).abs() <= tol
            && (self.shift - other.shift).abs() <= tol
    }
}

/// Values on a uniform grid `z_j = z_min + j·dz`, `j = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWave {
    pub z_min: f64,
    pub dz: f64,
    pub values: Vec<Complex64>,
}

impl SampledWave {
    pub fn new(z_min: f64, z_max: f64, values: Vec<Complex64>) -> Result<Self, VolkovError> {
        let n = values.len();
        if n < 2 {
            return Err(VolkovError::InvalidGrid("need at least two points".into()));
        }
        if !(z_max > z_min && z_min.is_finite() && z_max.is_finite()) {
            return Err(VolkovError::InvalidGrid(format!(
                "bad span [{z_min}, {z_max}]"
            )));
        }
        Ok(Self {
            z_min,
            dz: (z_max - z_min) / (n - 1) as f64,
            values,
        })
    }

    /// Samples `f` at `n` points spanning `[z_min, z_max]`.
    pub fn sample<F>(z_min: f64, z_max: f64, n: usize, f: F) -> Result<Self, VolkovError>
    where
        F: Fn(f64) -> Complex64,
    {
        if n < 2 {
            return Err(VolkovError::InvalidGrid("need at least two points".into()));
        }
        let dz = (z_max - z_min) / (n - 1) as f64;
        Self::new(
            z_min,
            z_max,
            (0..n).map(|j| f(z_min + j as f64 * dz)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn z(&self, j: usize) -> f64 {
        self.z_min + j as f64 * self.dz
    }

    pub fn z_max(&self) -> f64 {
        self.z(self.len() - 1)
    }

    /// Discrete `L²` norm squared, `Σ |ψ_j|² dz`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dz
    }

    /// Band-limited (Whittaker–Shannon) value at an arbitrary `z`.
    pub fn sinc_interpolate(&self, z: f64) -> Complex64 {
        let u = (z - self.z_min) / self.dz;
        self.values
            .iter()
            .enumerate()
            .map(|(j, v)| v * sinc(u - j as f64))
            .sum()
    }

    /// `ψ(z) ↦ ψ(z + σ)` on the same grid.
    pub fn translate(&self, shift: f64, options: ShiftOptions) -> Result<Transformed, VolkovError> {
        let span = self.z_max() - self.z_min;
        if shift.abs() >= span {
            return Err(VolkovError::ShiftExceedsGrid { shift, span });
        }
        let norm_before = self.norm_sq();
        let steps = shift / self.dz;
        let rounded = steps.round();
        let n = self.len() as i64;
        let (values, interpolated) = if (steps - rounded).abs() < COMMENSURATE_TOL {
            let k = rounded as i64;
            let values = (0..n)
                .map(|j| {
                    let src = j + k;
                    if (0..n).contains(&src) {
                        self.values[src as usize]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            (values, false)
        } else {
            if !options.allow_interpolation {
                return Err(VolkovError::NonCommensurateShift {
                    shift,
                    step: self.dz,
                });
            }
            let idx: Vec<usize> = (0..self.len()).collect();
            let values = parallel::map(options.execution, &idx, |&j| {
                self.sinc_interpolate(self.z(j) + shift)
            });
            (values, true)
        };
        let wave = SampledWave {
            z_min: self.z_min,
            dz: self.dz,
            values,
        };
        let norm_after = wave.norm_sq();
        Ok(Transformed {
            wave,
            norm_before,
            norm_after,
            interpolated,
        })
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftOptions {
    pub allow_interpolation: bool,
    pub execution: Execution,
}

impl Default for ShiftOptions {
    fn default() -> Self {
        Self {
            allow_interpolation: true,
            execution: Execution::default(),
        }
    }
}

/// Result of a grid transformation with its norm bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Transformed {
    pub wave: SampledWave,
    pub norm_before: f64,
    pub norm_after: f64,
    pub interpolated: bool,
}

impl Transformed {
    /// Norm lost off the grid edges or to interpolation, `‖ψ‖² − ‖Aψ‖²`.
    pub fn norm_loss(&self) -> f64 {
        self.norm_before - self.norm_after
    }
}

/// Kramers–Henneberger transform `T = e^{−ia} e^{−ibz} e^{icp_z}` (or its
/// inverse) applied to a sampled wave.
pub fn kh_transform(
    wave: &SampledWave,
    b: f64,
    c: f64,
    a: f64,
    inverse: bool,
    options: ShiftOptions,
) -> Result<Transformed, VolkovError> {
    let t = GaugeTransform::kramers_henneberger(a, b, c);
    let t = if inverse { t.inverse() } else { t };
    t.apply(wave, options)
}

/// Kernel of `A · K · B⁻¹` for gauge transforms `A`, `B` and a 1-D kernel `K`.
///
/// An operator `(φ, κ, σ)` has kernel `e^{−iφ} e^{−iκz} δ(z′ − z − σ)`, so
/// the delta functions collapse both convolutions.
pub fn conjugate_kernel_1d<K>(
    left: &GaugeTransform,
    right: &GaugeTransform,
    kernel: K,
    z: f64,
    z_prime: f64,
) -> Result<Complex64, VolkovError>
where
    K: Fn(f64, f64) -> Result<Complex64, VolkovError>,
{
    let r = right.inverse();
    let y = z_prime - r.shift;
    let outer = Complex64::from_polar(1.0, -left.phase - left.slope * z);
    let inner = Complex64::from_polar(1.0, -r.phase - r.slope * y);
    Ok(outer * kernel(z + left.shift, y)? * inner)
}

/// `∫ K(z, z′) f(z′) dz′` over `support` by adaptive quadrature of the real
/// and imaginary parts. `f` must be negligible outside `support`.
pub fn propagate_1d<K, F>(
    kernel: K,
    f: F,
    z: f64,
    support: (f64, f64),
    integrator: &Integrator,
) -> Result<Complex64, VolkovError>
where
    K: Fn(f64, f64) -> Result<Complex64, VolkovError>,
    F: Fn(f64) -> Complex64,
{
    let failure = RefCell::new(None);
    let integrand = |zp: f64| match kernel(z, zp) {
        Ok(k) => k * f(zp),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let re = integrator.integrate(|zp| integrand(zp).re, support.0, support.1);
    let im = integrator.integrate(|zp| integrand(zp).im, support.0, support.1);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(Complex64::new(re?.value, im?.value))
}

/// Free evolution of `exp(−z²/2)` over `Δ`: `(1 + iΔ)^{−1/2} exp(−z²/(2(1 + iΔ)))`.
pub fn free_gaussian(z: f64, delta: f64) -> Complex64 {
    let w = Complex64::new(1.0, delta);
    w.powf(-0.5) * (-(z * z) / (2.0 * w)).exp()
}
