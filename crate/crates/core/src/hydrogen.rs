//! Hydrogen eigenstates and the matrix elements the ionization bounds need.
//!
//! Closed forms are used wherever they exist. Quantities only known as upper
//! estimates for non-s states (`‖p_z ψ‖²`, `‖z ψ‖²`) are tagged as such in a
//! [`MatrixElementValue`] so callers never mix exact and bounded numbers by
//! accident.
//!
//! The ground-state functions of the displacement `c` describe the
//! translated Coulomb potential seen in the Kramers–Henneberger frame:
//!
//! * `N₁(c) = −⟨ψ₁₀₀, V(x − c e_z) ψ₁₀₀⟩`,
//! * `N₂(c) = ⟨ψ₁₀₀, V(x − c e_z)² ψ₁₀₀⟩`,
//! * `X(c) = ⟨ψ₁₀₀, V(x − c e_z) V(x) ψ₁₀₀⟩`,
//!
//! all obtained by quadrature after the angular integrals are done through
//! the multipole expansion of `1/|x − c e_z|`. Both `N₁` and `N₂` decrease
//! monotonically in `c`, so `‖(V(x − c e_z) − V(x)) ψ₁₀₀‖² ≤ N₂(c) + 2 ≤ 4`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::quadrature::{Integrator, QuadratureError};

/// Below this displacement the shifted-Coulomb integrals switch to their
/// small-`c` expansions.
pub const SMALL_SHIFT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HydrogenError {
    #[error("invalid hydrogen state (n={n}, l={l}, m={m}): {reason}")]
    InvalidState {
        n: i64,
        l: i64,
        m: i64,
        reason: &'static str,
    },
    #[error("cannot parse state `{0}`; expected `n,l,m`")]
    Parse(String),
    #[error("displacement must be finite, got {0}")]
    NonFiniteShift(f64),
    #[error("matrix element quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    UpperEstimate,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Exact => "exact",
            Exactness::UpperEstimate => "upper_estimate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElementValue {
    pub value: f64,
    pub exactness: Exactness,
}

impl MatrixElementValue {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            exactness: Exactness::Exact,
        }
    }

    pub fn upper_estimate(value: f64) -> Self {
        Self {
            value,
            exactness: Exactness::UpperEstimate,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }
}

/// Bound eigenstate `ψ_{nℓm}` of hydrogen (nuclear charge 1, atomic units).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HydrogenState {
    n: u32,
    l: u32,
    m: i32,
}

impl HydrogenState {
    pub fn new(n: i64, l: i64, m: i64) -> Result<Self, HydrogenError> {
        let bad = |reason| HydrogenError::InvalidState { n, l, m, reason };
        if n < 1 {
            return Err(bad("n must be at least 1"));
        }
        if n > u32::MAX as i64 {
            return Err(bad("n is too large"));
        }
        if l < 0 || l >= n {
            return Err(bad("l must satisfy 0 <= l <= n-1"));
        }
        if m.abs() > l {
            return Err(bad("m must satisfy |m| <= l"));
        }
        Ok(Self {
            n: n as u32,
            l: l as u32,
            m: m as i32,
        })
    }

    pub fn ground() -> Self {
        Self { n: 1, l: 0, m: 0 }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn is_ground(&self) -> bool {
        self.n == 1
    }

    pub fn is_s_state(&self) -> bool {
        self.l == 0
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    fn lf(&self) -> f64 {
        self.l as f64
    }

    /// `E_n = −1/(2n²)`.
    pub fn energy(&self) -> f64 {
        -0.5 / (self.nf() * self.nf())
    }

    /// `⟨1/r⟩ = 1/n²`.
    pub fn inv_r_mean(&self) -> f64 {
        1.0 / (self.nf() * self.nf())
    }

    /// `⟨1/r²⟩ = 1/(n³(ℓ + ½))`.
    pub fn inv_r2_mean(&self) -> f64 {
        1.0 / (self.nf().powi(3) * (self.lf() + 0.5))
    }

    /// `‖V ψ‖ = ⟨1/r²⟩^{1/2}`.
    pub fn coulomb_norm(&self) -> f64 {
        self.inv_r2_mean().sqrt()
    }

    /// `⟨r²⟩ = (n²/2)[5n² + 1 − 3ℓ(ℓ+1)]`.
    pub fn r2_mean(&self) -> f64 {
        let (n, l) = (self.nf(), self.lf());
        0.5 * n * n * (5.0 * n * n + 1.0 - 3.0 * l * (l + 1.0))
    }

    /// `‖p_z ψ‖²`: exactly `1/(3n²)` for s states, otherwise the virial
    /// estimate `2⟨H₀⟩ = −2E = 1/n²`.
    pub fn pz_norm_sq(&self) -> MatrixElementValue {
        if self.is_s_state() {
            MatrixElementValue::exact(1.0 / (3.0 * self.nf() * self.nf()))
        } else {
            MatrixElementValue::upper_estimate(-2.0 * self.energy())
        }
    }

    /// `‖z ψ‖²`: exactly `⟨r²⟩/3` for s states, otherwise `⟨r²⟩`.
    ///
    /// `⟨z⟩` vanishes by parity for every eigenstate, so this is also the
    /// squared dispersion `a_ψ²` entering the survival-probability bound.
    pub fn z_norm_sq(&self) -> MatrixElementValue {
        if self.is_s_state() {
            MatrixElementValue::exact(self.r2_mean() / 3.0)
        } else {
            MatrixElementValue::upper_estimate(self.r2_mean())
        }
    }

    /// `‖(2H₀ + 1) ψ‖²`.
    ///
    /// On an eigenstate `H₀ψ = (E + 1/r)ψ`, so the square expands to
    /// `(2E+1)² + 4(2E+1)⟨1/r⟩ + 4⟨1/r²⟩ = 1 + 2/n² − 3/n⁴ + 4/(n³(ℓ+½))`.
    /// Equals 8 for the ground state and tends to 1 as `n → ∞`.
    pub fn h0_shift_norm_sq(&self) -> f64 {
        let shift = 2.0 * self.energy() + 1.0;
        shift * shift + 4.0 * shift * self.inv_r_mean() + 4.0 * self.inv_r2_mean()
    }

    /// Normalized radial function `R_{nℓ}(r)` with `∫ R² r² dr = 1`.
    pub fn radial(&self, r: f64) -> f64 {
        let (n, l) = (self.nf(), self.l);
        let rho = 2.0 * r / n;
        // (n−ℓ−1)!/(n+ℓ)! as a product to stay in range for large n
        let ratio: f64 = ((self.n - l)..=(self.n + l))
            .map(|k| 1.0 / k as f64)
            .product();
        let norm = ((2.0 / n).powi(3) * ratio / (2.0 * n)).sqrt();
        norm * rho.powi(l as i32) * (-0.5 * rho).exp() * laguerre(self.n - l - 1, 2 * l + 1, rho)
    }

    /// `⟨f(r)⟩` by quadrature of `R_{nℓ}(r)² f(r) r²` on the half line.
    pub fn radial_expectation<F>(&self, f: F, integrator: &Integrator) -> Result<f64, HydrogenError>
    where
        F: Fn(f64) -> f64,
    {
        let decay = 2.0 / self.nf();
        let r = integrator.integrate_semi_infinite(
            |r| {
                let rr = self.radial(r);
                rr * rr * r * r * f(r)
            },
            0.0,
            decay,
        )?;
        Ok(r.value)
    }
}

impl fmt::Display for HydrogenState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.n, self.l, self.m)
    }
}

impl FromStr for HydrogenState {
    type Err = HydrogenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [n, l, m] = parts.as_slice() else {
            return Err(HydrogenError::Parse(s.to_string()));
        };
        let num = |p: &str| {
            p.parse::<i64>()
                .map_err(|_| HydrogenError::Parse(s.to_string()))
        };
        Self::new(num(n)?, num(l)?, num(m)?)
    }
}

/// Generalized Laguerre polynomial `L_k^{(α)}(x)` by upward recursion.
fn laguerre(k: u32, alpha: u32, x: f64) -> f64 {
    let a = alpha as f64;
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn check_shift(c: f64) -> Result<f64, HydrogenError> {
    if c.is_finite() {
        Ok(c.abs())
    } else {
        Err(HydrogenError::NonFiniteShift(c))
    }
}

/// Closed form of `N₁(c) = (1 − e^{−2c}(1 + c))/c`, with its series near 0.
pub fn coulomb_mean_shifted_closed(c: f64) -> f64 {
    let c = c.abs();
    if c < SMALL_SHIFT {
        return 1.0 - 2.0 / 3.0 * c * c + 2.0 / 3.0 * c * c * c;
    }
    -(-2.0 * c).exp_m1() / c - (-2.0 * c).exp()
}

/// `N₁(c) = −⟨ψ₁₀₀, V(x − c e_z) ψ₁₀₀⟩` by quadrature of the radial form
/// `(4/c)∫₀ᶜ r² e^{−2r} dr + 4∫_c^∞ r e^{−2r} dr`.
///
/// Depends only on `|c|`.
pub fn coulomb_mean_shifted(c: f64) -> Result<f64, HydrogenError> {
    coulomb_mean_shifted_with(c, &Integrator::default())
}

pub fn coulomb_mean_shifted_with(c: f64, integrator: &Integrator) -> Result<f64, HydrogenError> {
    let c = check_shift(c)?;
    if c < SMALL_SHIFT {
        return Ok(coulomb_mean_shifted_closed(c));
    }
    // (4/c)∫₀ᶜ r² e^{−2r} dr = 4c² ∫₀¹ x² e^{−2cx} dx keeps the prefactor
    // from amplifying the absolute tolerance at small c
    let inner = integrator.integrate(|x| 4.0 * c * c * x * x * (-2.0 * c * x).exp(), 0.0, 1.0)?;
    let outer = integrator.integrate_semi_infinite(|r| 4.0 * r * (-2.0 * r).exp(), c, 2.0)?;
    Ok(inner.value + outer.value)
}

/// `N₂(c) = ⟨ψ₁₀₀, V(x − c e_z)² ψ₁₀₀⟩`.
///
/// After summing the multipole series,
/// `N₂ = (2/c)∫₀ᶜ r e^{−2r} L(r/c) dr + (2/c)∫_c^∞ r e^{−2r} L(c/r) dr`
/// with `L(x) = ln(1+x) − ln(1−x)`. Both pieces carry an integrable log
/// singularity at `r = c`, which is kept on a panel boundary. The first piece
/// is integrated in `x = r/c` and the second in `s = r − c` so the singular
/// point is never rounded onto.
pub fn coulomb_sq_mean_shifted(c: f64) -> Result<f64, HydrogenError> {
    coulomb_sq_mean_shifted_with(c, &Integrator::default())
}

pub fn coulomb_sq_mean_shifted_with(c: f64, integrator: &Integrator) -> Result<f64, HydrogenError> {
    let c = check_shift(c)?;
    if c < SMALL_SHIFT {
        if c == 0.0 {
            return Ok(2.0);
        }
        return Ok(2.0 - 8.0 / 3.0 * c * c * (1.0 / c).ln());
    }
    // (2/c)∫₀ᶜ r e^{−2r} L(r/c) dr = 2c ∫₀¹ x e^{−2cx} L(x) dx
    let inner = integrator.integrate_pieces(
        |x| 2.0 * c * x * (-2.0 * c * x).exp() * (x.ln_1p() - (-x).ln_1p()),
        &[0.0, 0.5, 1.0],
    )?;
    // (2/c)∫_c^∞ r e^{−2r} L(c/r) dr with r = c + s, L(c/r) = ln((2c + s)/s).
    // For small c the integrand changes character on the scale s ~ c, far
    // below anything the error estimate would sample, so that range gets
    // explicit geometric breakpoints before the exponential tail.
    let tail = (-2.0 * c).exp();
    let f = |s: f64| 2.0 / c * tail * (c + s) * (-2.0 * s).exp() * (2.0 * c / s).ln_1p();
    let mut points = vec![0.0];
    let mut p = c;
    while p < 1.0 {
        points.push(p);
        p *= 10.0;
    }
    points.push(1.0);
    let near = integrator.integrate_pieces(f, &points)?;
    let far = integrator.integrate_semi_infinite(f, 1.0, 2.0)?;
    Ok(inner.value + near.value + far.value)
}

/// Closed form of the cross term
/// `X(c) = 4∫₀^∞ r e^{−2r}/max(r, c) dr = (1 − e^{−2c}(2c+1))/c + 2e^{−2c}`.
pub fn cross_term_closed(c: f64) -> f64 {
    let c = c.abs();
    if c < SMALL_SHIFT {
        return 2.0 - 2.0 * c + 4.0 / 3.0 * c * c;
    }
    let e = (-2.0 * c).exp();
    (-(-2.0 * c).exp_m1() - 2.0 * c * e) / c + 2.0 * e
}

/// `X(c) = ⟨ψ₁₀₀, V(x − c e_z) V(x) ψ₁₀₀⟩` by 2-D quadrature over `(r, cos θ)`.
///
/// With `cos θ = 1 − w²` the inner integrand
/// `2w / √((r − c)² + 2rc w²)` stays bounded at the coincidence point.
pub fn cross_term(c: f64) -> Result<f64, HydrogenError> {
    cross_term_with(c, &Integrator::default())
}

pub fn cross_term_with(c: f64, integrator: &Integrator) -> Result<f64, HydrogenError> {
    let c = check_shift(c)?;
    if c < SMALL_SHIFT {
        return Ok(cross_term_closed(c));
    }
    let w_max = std::f64::consts::SQRT_2;
    let failure = std::cell::RefCell::new(None);
    // ∫_{−1}^{1} dμ / |x − c e_z|, multiplied through by r e^{−2r}
    let angular = |r: f64| -> f64 {
        let d = r - c;
        let inner = integrator.integrate(
            |w| 2.0 * w / (d * d + 2.0 * r * c * w * w).sqrt(),
            0.0,
            w_max,
        );
        match inner {
            Ok(v) => r * (-2.0 * r).exp() * v.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let near = integrator.integrate(angular, 0.0, c);
    let far = integrator.integrate_semi_infinite(angular, c, 2.0);
    if let Some(e) = failure.into_inner() {
        return Err(e.into());
    }
    // (1/π) · 2π from the azimuth
    Ok(2.0 * (near?.value + far?.value))
}

/// How `‖(V(x − c e_z) − V(x)) ψ₁₀₀‖` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftNorm {
    /// Drop the non-negative cross term: `√(N₂(c) + 2) ≤ 2`.
    #[default]
    Estimate,
    /// Full square `√(N₂(c) − 2X(c) + 2)`.
    Exact,
}

/// `‖(V(x − c e_z) − V(x)) ψ₁₀₀‖` in the requested mode.
pub fn shift_difference_norm(c: f64, mode: ShiftNorm) -> Result<MatrixElementValue, HydrogenError> {
    let n2 = coulomb_sq_mean_shifted(c)?;
    Ok(match mode {
        ShiftNorm::Estimate => MatrixElementValue::upper_estimate((n2 + 2.0).sqrt()),
        ShiftNorm::Exact => {
            let x = cross_term(c)?;
            MatrixElementValue::exact((n2 - 2.0 * x + 2.0).max(0.0).sqrt())
        }
    })
}
