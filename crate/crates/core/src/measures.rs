//! Entanglement quantities: spectral negativity, Wootters concurrence, the
//! determinant witness and its rescaled form, negativity recovered from
//! moments through a quartic, and the witness-based negativity bounds.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::MeasureError;
use crate::poly;
use crate::qmat::{kron, partial_transpose, pauli, DensityMatrix, MomentSet, C64};

/// Imaginary parts below this mark a quartic root as real.
pub const REAL_ROOT_TOL: f64 = 1e-9;
/// Loosest imaginary part still accepted for the clamped fallback.
pub const FALLBACK_ROOT_TOL: f64 = 1e-6;
/// Slack above 1 allowed for an admissible negativity root.
pub const UPPER_SLACK: f64 = 1e-9;

/// `N = 2 max(0, -min eig(rho^Gamma))`.
pub fn negativity_spectral(rho: &DensityMatrix) -> f64 {
    2.0 * (-partial_transpose(rho).eigenvalues()[0]).max(0.0)
}

/// Wootters concurrence.
///
/// The `lambda_j` are the square roots of the eigenvalues of
/// `rho (Y(x)Y) rho* (Y(x)Y)`. They are obtained as singular values of
/// `sqrt(rho) (Y(x)Y) sqrt(rho)* (Y(x)Y)`, which keeps rank-deficient states
/// accurate (no square roots of round-off sized eigenvalues).
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let yy = kron(&pauli(2), &pauli(2));
    let root = rho.sqrt();
    let flipped = yy * root.map(|z| z.conj()) * yy;
    let sv = (root * flipped).singular_values();
    let mut lambdas = [sv[0], sv[1], sv[2], sv[3]];
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

/// Determinant witness `W = det rho^Gamma` and its rescaling `w = max(0, -16 W)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessValue {
    pub det_pt: f64,
    pub w: f64,
}

impl WitnessValue {
    pub fn from_det(det_pt: f64) -> Self {
        Self {
            det_pt,
            w: (-16.0 * det_pt).max(0.0),
        }
    }
}

/// The determinant of rho^Gamma written through its moments (Newton identities).
pub fn uwe(m: &MomentSet) -> WitnessValue {
    let det = (1.0 - 6.0 * m.pi4 + 8.0 * m.pi3 + 3.0 * m.pi2 * m.pi2 - 6.0 * m.pi2) / 24.0;
    WitnessValue::from_det(det)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NegativityMethod {
    Spectral,
    QuarticExact,
    QuarticClamped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativityResult {
    pub value: f64,
    pub method: NegativityMethod,
    /// All four roots of the negativity quartic, as `[re, im]`.
    pub all_roots: Vec<[f64; 2]>,
}

impl NegativityResult {
    pub fn roots(&self) -> impl Iterator<Item = C64> + '_ {
        self.all_roots.iter().map(|[re, im]| Complex::new(*re, *im))
    }

    /// Real part of the real root nearest to `target`, no clamping.
    pub fn closest_real_root(&self, target: f64) -> Option<f64> {
        self.roots()
            .filter(|z| z.im.abs() < REAL_ROOT_TOL)
            .map(|z| z.re)
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
    }
}

/// Coefficients (highest power first) of the quartic whose positive root is
/// the negativity: `3N^4 + 6N^3 - 6(pi2-1)N^2 - 4(3pi2 - 2pi3 - 1)N + 48 det`.
pub fn negativity_quartic(m: &MomentSet, det_pt: f64) -> [f64; 5] {
    [
        3.0,
        6.0,
        -6.0 * (m.pi2 - 1.0),
        -4.0 * (3.0 * m.pi2 - 2.0 * m.pi3 - 1.0),
        48.0 * det_pt,
    ]
}

/// Value of the negativity quartic at `n` (the determinant taken from the moments).
pub fn quartic_residual(m: &MomentSet, n: f64) -> f64 {
    let det = uwe(m).det_pt;
    poly::eval(&negativity_quartic(m, det), Complex::new(n, 0.0)).re
}

/// Negativity from the moments alone.
///
/// For `det >= 0` the state is separable and the value is 0. Otherwise the
/// real root in `(0, 1]` is returned; noisy moments without such a root fall
/// back to the nearest real root clamped into `[0, 1]`.
pub fn negativity_from_moments(m: &MomentSet) -> Result<NegativityResult, MeasureError> {
    let det = uwe(m).det_pt;
    let roots = poly::quartic_roots(negativity_quartic(m, det));
    let all_roots: Vec<[f64; 2]> = roots.iter().map(|z| [z.re, z.im]).collect();

    if det >= 0.0 {
        return Ok(NegativityResult {
            value: 0.0,
            method: NegativityMethod::QuarticExact,
            all_roots,
        });
    }

    let admissible = roots
        .iter()
        .filter(|z| z.im.abs() < REAL_ROOT_TOL && z.re > 0.0 && z.re <= 1.0 + UPPER_SLACK)
        .map(|z| z.re)
        .max_by(|a, b| a.total_cmp(b));
    if let Some(value) = admissible {
        return Ok(NegativityResult {
            value: value.min(1.0),
            method: NegativityMethod::QuarticExact,
            all_roots,
        });
    }

    let distance_to_unit = |x: f64| (x - x.clamp(0.0, 1.0)).abs();
    let fallback = roots
        .iter()
        .filter(|z| z.im.abs() < FALLBACK_ROOT_TOL)
        .map(|z| z.re)
        .min_by(|a, b| distance_to_unit(*a).total_cmp(&distance_to_unit(*b)));
    match fallback {
        Some(x) => Ok(NegativityResult {
            value: x.clamp(0.0, 1.0),
            method: NegativityMethod::QuarticClamped,
            all_roots,
        }),
        None => Err(MeasureError::NoRealRoot {
            min_imaginary: roots.iter().map(|z| z.im.abs()).fold(f64::INFINITY, f64::min),
        }),
    }
}

fn check_unit(w: f64) -> Result<(), MeasureError> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(MeasureError::OutOfRange {
            value: w,
            min: 0.0,
            max: 1.0,
        })
    }
}

/// `w(N) = N (N+2)^3 / 27`, the witness of Werner states as a function of N.
pub fn werner_witness(n: f64) -> f64 {
    n * (n + 2.0).powi(3) / 27.0
}

/// Inverse of [`werner_witness`] on `[0, 1]` in closed form.
pub fn werner_negativity(w: f64) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    // 2 sqrt(w^2 (16w+1)) - 2w, written without cancellation
    let inner = 32.0 * w * w / ((16.0 * w + 1.0).sqrt() + 1.0);
    let x = 3.0 * inner.cbrt();
    let y = 36.0 * w / x;
    let z = 1.0 - y + x;
    let n = 0.5 * (-3.0 + z.sqrt() + (3.0 - z + 2.0 / z.sqrt()).sqrt());
    // one Newton step against the forward polynomial
    let slope = (n + 2.0).powi(2) * (4.0 * n + 2.0) / 27.0;
    n - (werner_witness(n) - w) / slope
}

/// Lower and upper negativity bounds implied by the rescaled witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn bounds_from_witness(w: f64) -> Result<NegativityBounds, MeasureError> {
    check_unit(w)?;
    Ok(NegativityBounds {
        lower: werner_negativity(w),
        upper: w.powf(0.25),
    })
}

/// `h(y) = -y log2 y - (1-y) log2 (1-y)`, with `0 log 0 = 0`.
pub fn binary_entropy(y: f64) -> f64 {
    let term = |t: f64| if t <= 0.0 { 0.0 } else { -t * t.log2() };
    term(y) + term(1.0 - y)
}

/// Entanglement of formation of a pure state expressed through its witness.
/// Only meaningful for pure states, where `w = C^4`.
pub fn entanglement_of_formation_pure(w: f64) -> Result<f64, MeasureError> {
    check_unit(w)?;
    Ok(binary_entropy(0.5 * (1.0 + (1.0 - w.sqrt()).sqrt())))
}
