//! X-states: the diagonal + anti-diagonal family
//!
//! ```text
//!     | a  0  0  b |
//!     | 0  c  d  0 |
//!     | 0  d* e  0 |
//!     | b* 0  0  f |
//! ```
//!
//! with its factored witness and closed-form concurrence, the rank-specific
//! canonical mixtures of `phi±(theta)` / `psi±(theta)`, and the eight
//! reference subfamilies (cases 1..=8) together with closed forms for their
//! moments, witness, concurrence and negativity.
//!
//! Throughout, `g_n = 1 - n f`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::error::XStateError;
use crate::measures::{bounds_from_witness, concurrence, negativity_spectral, uwe};
use crate::qmat::{moments, r, DensityMatrix, Matrix4c, C64};

const PARAM_TOL: f64 = 1e-12;
/// Tolerance for recognizing that parameters belong to a case.
const CASE_TOL: f64 = 1e-9;
/// Eigenvalues above this count towards the rank.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XStateParams {
    pub a: f64,
    #[serde(with = "crate::io::complex_pair")]
    pub b: C64,
    pub c: f64,
    #[serde(with = "crate::io::complex_pair")]
    pub d: C64,
    pub e: f64,
    pub f: f64,
}

impl XStateParams {
    /// Real, nonnegative coherences.
    pub fn real(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        Self {
            a,
            b: r(b),
            c,
            d: r(d),
            e,
            f,
        }
    }

    pub fn validate(&self) -> Result<(), XStateError> {
        let diag = [self.a, self.c, self.e, self.f];
        if diag
            .iter()
            .chain([self.b.re, self.b.im, self.d.re, self.d.im].iter())
            .any(|x| !x.is_finite())
        {
            return Err(XStateError::InvalidParams("non-finite entry".into()));
        }
        if diag.iter().any(|&x| x < -PARAM_TOL) {
            return Err(XStateError::InvalidParams("negative diagonal entry".into()));
        }
        let trace: f64 = diag.iter().sum();
        if (trace - 1.0).abs() > PARAM_TOL {
            return Err(XStateError::InvalidParams(format!(
                "a + c + e + f = {trace}, expected 1"
            )));
        }
        if self.d.norm() > (self.c * self.e).max(0.0).sqrt() + PARAM_TOL {
            return Err(XStateError::InvalidParams("|d| > sqrt(ce)".into()));
        }
        if self.b.norm() > (self.a * self.f).max(0.0).sqrt() + PARAM_TOL {
            return Err(XStateError::InvalidParams("|b| > sqrt(af)".into()));
        }
        Ok(())
    }

    fn matrix(&self) -> Matrix4c {
        let z = r(0.0);
        #[rustfmt::skip]
        let m = Matrix4c::from_row_slice(&[
            r(self.a), z, z, self.b,
            z, r(self.c), self.d, z,
            z, self.d.conj(), r(self.e), z,
            self.b.conj(), z, z, r(self.f),
        ]);
        m
    }
}

pub fn xstate(p: &XStateParams) -> Result<DensityMatrix, XStateError> {
    p.validate()?;
    Ok(DensityMatrix::from_matrix(p.matrix())?)
}

/// `C = 2 max(0, |d| - sqrt(af), |b| - sqrt(ce))`.
pub fn xstate_concurrence(p: &XStateParams) -> f64 {
    let outer = p.d.norm() - (p.a * p.f).sqrt();
    let inner = p.b.norm() - (p.c * p.e).sqrt();
    2.0 * outer.max(inner).max(0.0)
}

/// det rho^Gamma as a product of the two 2x2 block determinants.
pub fn xstate_witness_factored(p: &XStateParams) -> f64 {
    let (d, b) = (p.d.norm(), p.b.norm());
    let saf = (p.a * p.f).sqrt();
    let sce = (p.c * p.e).sqrt();
    (d - saf) * (d + saf) * (b - sce) * (b + sce)
}

/// `phi±(theta)`: weight cos^2 on |00>, sin^2 on |11>, coherence ±sin(2 theta)/2.
pub fn phi(theta: f64, sign: f64) -> Matrix4c {
    let mut m = Matrix4c::zeros();
    let (cos, sin) = (theta.cos(), theta.sin());
    m[(0, 0)] = r(cos * cos);
    m[(3, 3)] = r(sin * sin);
    m[(0, 3)] = r(sign * 0.5 * (2.0 * theta).sin());
    m[(3, 0)] = m[(0, 3)];
    m
}

/// `psi±(theta)`: the same pattern on |01>, |10>.
pub fn psi(theta: f64, sign: f64) -> Matrix4c {
    let mut m = Matrix4c::zeros();
    let (cos, sin) = (theta.cos(), theta.sin());
    m[(1, 1)] = r(cos * cos);
    m[(2, 2)] = r(sin * sin);
    m[(1, 2)] = r(sign * 0.5 * (2.0 * theta).sin());
    m[(2, 1)] = m[(1, 2)];
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankLabel {
    R1,
    R2a,
    R2b,
    R3,
    R4,
}

impl RankLabel {
    pub fn rank(self) -> usize {
        match self {
            RankLabel::R1 => 1,
            RankLabel::R2a | RankLabel::R2b => 2,
            RankLabel::R3 => 3,
            RankLabel::R4 => 4,
        }
    }
}

/// Weighted mixture `p1 phi+(t1) + p2 phi-(t2) + p3 psi+(t3) + p4 psi-(t4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalXSpec {
    pub rank_label: RankLabel,
    pub weights: [f64; 4],
    pub angles: [f64; 4],
}

impl CanonicalXSpec {
    pub fn validate(&self) -> Result<(), XStateError> {
        if self.weights.iter().chain(&self.angles).any(|x| !x.is_finite()) {
            return Err(XStateError::InvalidSpec("non-finite weight or angle".into()));
        }
        if self.weights.iter().any(|&w| w < 0.0) {
            return Err(XStateError::InvalidSpec("negative weight".into()));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > PARAM_TOL {
            return Err(XStateError::InvalidSpec(format!("weights sum to {total}")));
        }
        let used = self.weights.iter().filter(|&&w| w > 0.0).count();
        if used != self.rank_label.rank() {
            return Err(XStateError::InvalidSpec(format!(
                "{:?} takes {} pure terms, got {used}",
                self.rank_label,
                self.rank_label.rank()
            )));
        }
        Ok(())
    }
}

/// Builds the mixture; `RankDeficient` (carrying the state) when the chosen
/// angles collapse the rank below the label.
pub fn canonical_xstate(spec: &CanonicalXSpec) -> Result<DensityMatrix, XStateError> {
    spec.validate()?;
    let [p1, p2, p3, p4] = spec.weights;
    let [t1, t2, t3, t4] = spec.angles;
    let m = phi(t1, 1.0) * r(p1) + phi(t2, -1.0) * r(p2) + psi(t3, 1.0) * r(p3) + psi(t4, -1.0) * r(p4);
    let rho = DensityMatrix::from_trusted(m);
    let actual = rho.rank(RANK_TOL);
    let expected = spec.rank_label.rank();
    if actual < expected {
        return Err(XStateError::RankDeficient {
            expected,
            actual,
            state: Box::new(rho),
        });
    }
    Ok(rho)
}

fn g(n: f64, f: f64) -> f64 {
    1.0 - n * f
}

/// Number of free parameters of each case.
pub fn free_param_count(case_id: u8) -> Result<usize, XStateError> {
    match case_id {
        1 | 2 | 3 | 8 => Ok(1),
        4..=7 => Ok(2),
        _ => Err(XStateError::UnknownCase(case_id)),
    }
}

fn out_of_range(case_id: u8, constraint: &str) -> XStateError {
    XStateError::OutOfValidityRange {
        case_id,
        constraint: constraint.to_string(),
    }
}

/// Builds the X-state of a reference case from its free parameters.
///
/// | case | params      | family                                              |
/// |------|-------------|-----------------------------------------------------|
/// | 1    | `[c]`       | a=b=f=0, e=1-c, d=sqrt(ce)                          |
/// | 2    | `[f]`       | a=b=f<1/2, c=d=e=g2/2                                |
/// | 3    | `[d]`       | a=b=f=0, c=e=1/2, 0<=d<1/2                           |
/// | 4    | `[f, c]`    | a=b=0, e=1-f-c, d=sqrt(ce)                           |
/// | 5    | `[f, c]`    | b=0, a=f, e=1-2f-c, d=sqrt(ce)>f                     |
/// | 6    | `[f, d]`    | a=b=f in (1/4,1/2), c=e=g2/2, 0<=d<g2/2              |
/// | 7    | `[f, C]`    | b=0, a=f, c=c'+f/2, e=e'+f/2, c'+e'=g3, d=sqrt(c'e')=C/2+f |
/// | 8    | `[f]`       | a=f<1/6, b=0, c=e=g2/2, d=g4/2                       |
pub fn case_family(case_id: u8, params: &[f64]) -> Result<XStateParams, XStateError> {
    let expected = free_param_count(case_id)?;
    if params.len() != expected {
        return Err(XStateError::ParamCount {
            case_id,
            expected,
            got: params.len(),
        });
    }
    if params.iter().any(|x| !x.is_finite()) {
        return Err(XStateError::InvalidParams("non-finite parameter".into()));
    }
    let x = XStateParams::real;
    let p = match case_id {
        1 => {
            let c = params[0];
            if !(c > 0.0 && c < 1.0) {
                return Err(out_of_range(1, "0 < c < 1 required"));
            }
            let e = 1.0 - c;
            x(0.0, 0.0, c, (c * e).sqrt(), e, 0.0)
        }
        2 => {
            let f = params[0];
            if !(f > 0.0 && f < 0.5) {
                return Err(out_of_range(2, "0 < a = b = f < 1/2 required"));
            }
            let h = g(2.0, f) / 2.0;
            x(f, f, h, h, h, f)
        }
        3 => {
            let d = params[0];
            if !(0.0..0.5).contains(&d) {
                return Err(out_of_range(3, "0 <= |d| < 1/2 required"));
            }
            x(0.0, 0.0, 0.5, d, 0.5, 0.0)
        }
        4 => {
            let (f, c) = (params[0], params[1]);
            let e = 1.0 - f - c;
            if !(f > 0.0 && c > 0.0 && e > 0.0) {
                return Err(out_of_range(4, "f > 0, c > 0 and e = 1 - f - c > 0 required"));
            }
            x(0.0, 0.0, c, (c * e).sqrt(), e, f)
        }
        5 => {
            let (f, c) = (params[0], params[1]);
            let e = 1.0 - 2.0 * f - c;
            if !(f > 0.0 && c > 0.0 && e > 0.0) {
                return Err(out_of_range(5, "f > 0, c > 0 and e = 1 - 2f - c > 0 required"));
            }
            let d = (c * e).sqrt();
            if d <= f {
                return Err(out_of_range(5, "|d| = sqrt(ce) > f required"));
            }
            x(f, 0.0, c, d, e, f)
        }
        6 => {
            let (f, d) = (params[0], params[1]);
            if !(f > 0.25 && f < 0.5) {
                return Err(out_of_range(6, "1/4 < a = b = f < 1/2 required"));
            }
            let h = g(2.0, f) / 2.0;
            if !(d >= 0.0 && d < h) {
                return Err(out_of_range(6, "0 <= |d| < sqrt(ce) = g2/2 required"));
            }
            x(f, f, h, d, h, f)
        }
        7 => {
            let (f, conc) = (params[0], params[1]);
            if !(f > 0.0 && conc > 0.0 && conc < g(5.0, f)) {
                return Err(out_of_range(7, "f > 0 and 0 < C < 1 - 5f required"));
            }
            let d = conc / 2.0 + f;
            let g3 = g(3.0, f);
            // c' >= e' roots of t^2 - g3 t + d^2
            let spread = (g3 * g3 - 4.0 * d * d).max(0.0).sqrt();
            let cp = (g3 + spread) / 2.0;
            let ep = g3 - cp;
            x(f, 0.0, cp + f / 2.0, d, ep + f / 2.0, f)
        }
        8 => {
            let f = params[0];
            if !(f > 0.0 && f < 1.0 / 6.0) {
                return Err(out_of_range(8, "0 < a = f < 1/6 required"));
            }
            let h = g(2.0, f) / 2.0;
            x(f, 0.0, h, g(4.0, f) / 2.0, h, f)
        }
        _ => unreachable!(),
    };
    Ok(p)
}

fn mismatch(case_id: u8, reason: &str) -> XStateError {
    XStateError::CaseMismatch {
        case_id,
        reason: reason.to_string(),
    }
}

fn near(x: f64, y: f64) -> bool {
    (x - y).abs() <= CASE_TOL
}

fn check_case(case_id: u8, p: &XStateParams) -> Result<(), XStateError> {
    p.validate()?;
    let (a, b, c, d, e, f) = (p.a, p.b.norm(), p.c, p.d.norm(), p.e, p.f);
    let fail = |why: &str| Err(mismatch(case_id, why));
    match case_id {
        1 if !(near(a, 0.0) && near(b, 0.0) && near(f, 0.0)) => fail("a = b = f = 0"),
        1 if !near(d, (c * e).sqrt()) => fail("|d| = sqrt(ce)"),
        2 if !(near(a, f) && near(b, f)) => fail("a = |b| = f"),
        2 if !(near(c, g(2.0, f) / 2.0) && near(d, c) && near(e, c)) => fail("c = |d| = e = g2/2"),
        3 if !(near(a, 0.0) && near(b, 0.0) && near(f, 0.0)) => fail("a = b = f = 0"),
        3 if !(near(c, 0.5) && near(e, 0.5) && d < 0.5) => fail("c = e = 1/2, |d| < 1/2"),
        4 if !(near(a, 0.0) && near(b, 0.0)) => fail("a = b = 0"),
        4 if !near(d, (c * e).sqrt()) => fail("|d| = sqrt(ce)"),
        5 if !(near(b, 0.0) && near(a, f)) => fail("b = 0, a = f"),
        5 if !(near(d, (c * e).sqrt()) && d > f) => fail("|d| = sqrt(ce) > f"),
        6 if !(near(a, f) && near(b, f) && f > 0.25) => fail("a = |b| = f > 1/4"),
        6 if !(near(c, g(2.0, f) / 2.0) && near(e, c) && d < c) => fail("c = e = g2/2, |d| < g2/2"),
        7 if !(near(b, 0.0) && near(a, f) && f < d) => fail("b = 0, a = f < |d|"),
        7 if !near(d, ((c - f / 2.0) * (e - f / 2.0)).max(0.0).sqrt()) => fail("|d| = sqrt(c'e')"),
        8 if !(near(a, f) && near(b, 0.0)) => fail("a = f, b = 0"),
        8 if !(near(c, g(2.0, f) / 2.0) && near(e, c) && near(d, g(4.0, f) / 2.0)) => fail("c = e = g2/2, |d| = g4/2"),
        1..=8 => Ok(()),
        _ => Err(XStateError::UnknownCase(case_id)),
    }
}

/// Where a predicted negativity comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NegativitySource {
    /// A closed-form C-N relation of the case.
    ClosedForm,
    /// No closed form; taken from the spectrum of rho^Gamma.
    Spectral,
}

/// Closed-form moments, witness, concurrence and negativity of a case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CasePrediction {
    pub case_id: u8,
    pub pi2: f64,
    pub pi3: f64,
    pub pi4: f64,
    /// det rho^Gamma
    #[serde(rename = "W")]
    pub det_pt: f64,
    #[serde(rename = "C")]
    pub concurrence: f64,
    #[serde(rename = "N")]
    pub negativity: f64,
    pub negativity_source: NegativitySource,
}

pub fn case_predictions(case_id: u8, p: &XStateParams) -> Result<CasePrediction, XStateError> {
    check_case(case_id, p)?;
    let f = p.f;
    let d = p.d.norm();
    let (g1, g2, g3, g4, g10) = (g(1.0, f), g(2.0, f), g(3.0, f), g(4.0, f), g(10.0, f));
    let spectral = || -> Result<f64, XStateError> { Ok(negativity_spectral(&xstate(p)?)) };

    let closed = |n: f64, pi2: f64, pi3: f64, pi4: f64, det_pt: f64, conc: f64| CasePrediction {
        case_id,
        pi2,
        pi3,
        pi4,
        det_pt,
        concurrence: conc,
        negativity: n,
        negativity_source: NegativitySource::ClosedForm,
    };

    let pred = match case_id {
        1 => {
            let n = 2.0 * d;
            let n2 = n * n;
            closed(n, 1.0, 1.0 - 0.75 * n2, (1.0 - n2 / 2.0).powi(2), -n2 * n2 / 16.0, n)
        }
        2 | 3 => {
            let n = if case_id == 2 { g4.abs() } else { 2.0 * d };
            let n2 = n * n;
            closed(n, 0.5 * (n2 + 1.0), 0.25, (n2 * n2 + 1.0) / 8.0, -n2 / 16.0, n)
        }
        4 => {
            let conc = 2.0 * d;
            let c2 = conc * conc;
            let n = -f + (f * f + c2).sqrt();
            closed(
                n,
                g2 + 2.0 * f * f,
                1.0 - 3.0 * (1.0 + c2 / 2.0) * g1 + 3.0 * g1 * g1 + 0.75 * c2,
                c2 * c2 / 4.0 - g2 * c2 + g1.powi(4) + f.powi(4),
                -c2 * c2 / 16.0,
                conc,
            )
        }
        5 => {
            let conc = 2.0 * d - 2.0 * f;
            let s = conc + 2.0 * f;
            CasePrediction {
                negativity: spectral()?,
                negativity_source: NegativitySource::Spectral,
                ..closed(
                    f64::NAN,
                    g4 + 6.0 * f * f,
                    g2.powi(3) + 2.0 * f.powi(3) - 0.75 * g4 * s * s,
                    (g2 * g2 - 0.5 * s * s).powi(2) + 3.0 * (conc * f + 2.0 * f * f).powi(2) + 2.0 * f.powi(4),
                    -conc * (conc + 4.0 * f) * s * s / 16.0,
                    conc,
                )
            }
        }
        6 => {
            let conc = g4.abs();
            let (c1, c2, c3, c4) = (conc, conc * conc, conc.powi(3), conc.powi(4));
            let d2 = d * d;
            CasePrediction {
                negativity: spectral()?,
                negativity_source: NegativitySource::Spectral,
                ..closed(
                    f64::NAN,
                    c1 / 8.0 * (3.0 * c1 + 2.0) + 2.0 * d2 + 0.375,
                    (3.0 * c1 * (1.0 - c2 + c1 + 16.0 * d2) + 48.0 * d2 + 5.0) / 32.0,
                    (9.0 * c4
                        + 4.0 * c3
                        + 6.0 * (16.0 * d2 + 1.0) * c2
                        + 4.0 * (48.0 * d2 + 1.0) * c1
                        + 256.0 * d2 * d2
                        + 96.0 * d2
                        + 9.0)
                        / 128.0,
                    -c1 * (c2 + 2.0 * c1 + 1.0 - 16.0 * d2) / 64.0,
                    conc,
                )
            }
        }
        7 => {
            let conc = 2.0 * d - 2.0 * f;
            let (c1, c2, c3, c4) = (conc, conc * conc, conc.powi(3), conc.powi(4));
            let (f2, f3, f4) = (f * f, f.powi(3), f.powi(4));
            let pi3 = -0.75 * c2 * g4 - 1.5 * f3 - 3.0 * f * g4 * c1 + 63.0 / 4.0 * f2 - 7.5 * f + 1.0;
            let pi4 = 0.25 * c4 + 2.0 * f * c3 + 0.75 * (5.0 * f2 + 6.0 * f - 4.0 / 3.0) * c2 + 289.0 / 8.0 * f4
                - f * (f2 - 18.0 * f + 4.0) * c1
                - 89.0 / 2.0 * f3
                + 67.0 / 2.0 * f2
                + g10;
            let det_pt = -c4 / 16.0 - 0.5 * f * c3 - f * (15.0 * f + 2.0) * c2 / 16.0 - 0.25 * f2 * (2.0 - f) * c1;
            CasePrediction {
                negativity: spectral()?,
                negativity_source: NegativitySource::Spectral,
                ..closed(f64::NAN, g3 * g3 + g3 * f + 2.5 * f2, pi3, pi4, det_pt, conc)
            }
        }
        8 => {
            let n = g(6.0, f).abs();
            let (n2, n3, n4) = (n * n, n.powi(3), n.powi(4));
            closed(
                n,
                n + (1.0 - n).powi(2) / 3.0,
                (-4.0 * n3 + 3.0 * n2 + 6.0 * n + 4.0) / 36.0,
                (7.0 * n4 + 2.0 * n3 + 6.0 * n2 + 8.0 * n + 4.0) / 108.0,
                ((1.0 - n) / 3.0 - 1.0).powi(3) * n / 16.0,
                n,
            )
        }
        _ => unreachable!(),
    };
    Ok(pred)
}

/// Canonical mixture reproducing a case up to local unitaries.
pub fn canonical_spec(case_id: u8, p: &XStateParams) -> Result<CanonicalXSpec, XStateError> {
    check_case(case_id, p)?;
    let (c, d, e, f) = (p.c, p.d.norm(), p.e, p.f);
    let q = FRAC_PI_4;
    let spec = |rank_label, weights, angles| CanonicalXSpec {
        rank_label,
        weights,
        angles,
    };
    Ok(match case_id {
        1 => spec(RankLabel::R1, [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, c.sqrt().acos(), 0.0]),
        2 => spec(RankLabel::R2a, [2.0 * f, 0.0, g(2.0, f), 0.0], [q, 0.0, q, 0.0]),
        3 => spec(RankLabel::R2b, [0.0, 0.0, 0.5 + d, 0.5 - d], [0.0, 0.0, q, q]),
        4 => {
            let g1 = g(1.0, f);
            spec(
                RankLabel::R2b,
                [f, 0.0, g1, 0.0],
                [FRAC_PI_2, 0.0, (c / g1).sqrt().acos(), 0.0],
            )
        }
        5 => {
            let g2 = g(2.0, f);
            spec(RankLabel::R3, [f, f, g2, 0.0], [q, q, (c / g2).sqrt().acos(), 0.0])
        }
        6 => {
            let h = g(2.0, f) / 2.0;
            spec(RankLabel::R3, [2.0 * f, 0.0, h + d, h - d], [q, 0.0, q, q])
        }
        7 => {
            // eigen-decomposition of the inner block [[c, d], [d, e]]
            let mean = (c + e) / 2.0;
            let radius = (((c - e) / 2.0).powi(2) + d * d).sqrt();
            let angle = 0.5 * (2.0 * d).atan2(c - e);
            spec(
                RankLabel::R4,
                [f, f, mean + radius, mean - radius],
                [q, q, angle, FRAC_PI_2 - angle],
            )
        }
        8 => spec(RankLabel::R4, [f, f, g(3.0, f), f], [q; 4]),
        _ => unreachable!(),
    })
}

/// Directly computed quantities of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericSummary {
    pub pi2: f64,
    pub pi3: f64,
    pub pi4: f64,
    #[serde(rename = "W")]
    pub det_pt: f64,
    #[serde(rename = "C")]
    pub concurrence: f64,
    #[serde(rename = "N")]
    pub negativity: f64,
}

impl NumericSummary {
    pub fn of(rho: &DensityMatrix) -> Self {
        let m = moments(rho);
        Self {
            pi2: m.pi2,
            pi3: m.pi3,
            pi4: m.pi4,
            det_pt: uwe(&m).det_pt,
            concurrence: concurrence(rho),
            negativity: negativity_spectral(rho),
        }
    }

    fn max_invariant_gap(&self, other: &Self) -> f64 {
        [
            self.pi2 - other.pi2,
            self.pi3 - other.pi3,
            self.pi4 - other.pi4,
            self.negativity - other.negativity,
            self.concurrence - other.concurrence,
        ]
        .iter()
        .fold(0.0, |acc, x| acc.max(x.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviations {
    pub pi2: f64,
    pub pi3: f64,
    pub pi4: f64,
    #[serde(rename = "W")]
    pub det_pt: f64,
    #[serde(rename = "C")]
    pub concurrence: f64,
    #[serde(rename = "N")]
    pub negativity: f64,
    /// Deviation of the case's C-N relation evaluated on numeric C and N.
    pub cn_relation: Option<f64>,
}

impl Deviations {
    pub fn max(&self) -> f64 {
        [
            self.pi2,
            self.pi3,
            self.pi4,
            self.det_pt,
            self.concurrence,
            self.negativity,
            self.cn_relation.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalCheck {
    pub spec: CanonicalXSpec,
    pub rank: usize,
    /// Max gap over (pi2, pi3, pi4, N, C) between the mixture and the case state.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_id: u8,
    pub free_params: Vec<f64>,
    pub params: XStateParams,
    pub predicted: CasePrediction,
    pub numeric: NumericSummary,
    pub deviations: Deviations,
    pub canonical: CanonicalCheck,
}

impl CaseReport {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.max().max(self.canonical.max_deviation)
    }
}

fn cn_relation(case_id: u8, f: f64, conc: f64, n: f64) -> Option<f64> {
    match case_id {
        1 | 2 | 3 | 8 => Some((conc - n).abs()),
        4 => Some((conc - (n * n + 2.0 * f * n).sqrt()).abs()),
        _ => None,
    }
}

/// Builds a case state, evaluates its closed forms and its numerics, and
/// compares both along with the canonical-mixture construction.
pub fn verify_case(case_id: u8, free_params: &[f64]) -> Result<CaseReport, XStateError> {
    let params = case_family(case_id, free_params)?;
    let rho = xstate(&params)?;
    let numeric = NumericSummary::of(&rho);
    let predicted = case_predictions(case_id, &params)?;
    let deviations = Deviations {
        pi2: (predicted.pi2 - numeric.pi2).abs(),
        pi3: (predicted.pi3 - numeric.pi3).abs(),
        pi4: (predicted.pi4 - numeric.pi4).abs(),
        det_pt: (predicted.det_pt - numeric.det_pt).abs(),
        concurrence: (predicted.concurrence - numeric.concurrence).abs(),
        negativity: (predicted.negativity - numeric.negativity).abs(),
        cn_relation: cn_relation(case_id, params.f, numeric.concurrence, numeric.negativity),
    };

    let spec = canonical_spec(case_id, &params)?;
    let mixture = match canonical_xstate(&spec) {
        Ok(rho) => rho,
        Err(XStateError::RankDeficient { state, .. }) => *state,
        Err(other) => return Err(other),
    };
    let canonical = CanonicalCheck {
        spec,
        rank: mixture.rank(RANK_TOL),
        max_deviation: NumericSummary::of(&mixture).max_invariant_gap(&numeric),
    };

    Ok(CaseReport {
        case_id,
        free_params: free_params.to_vec(),
        params,
        predicted,
        numeric,
        deviations,
        canonical,
    })
}

/// `n` interior parameter settings covering a case's validity region.
pub fn sweep_params(case_id: u8, n: usize) -> Result<Vec<Vec<f64>>, XStateError> {
    free_param_count(case_id)?;
    // u on a midpoint grid, v on a golden-ratio lattice, both inside (0, 1)
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let points = (0..n).map(|k| {
        let u = (k as f64 + 0.5) / n as f64;
        let v = (0.5 + k as f64 * golden).fract().clamp(1e-3, 1.0 - 1e-3);
        (u, v)
    });
    Ok(points
        .map(|(u, v)| match case_id {
            1 => vec![u],
            2 => vec![u / 2.0],
            3 => vec![u / 2.0],
            4 => vec![u, v * (1.0 - u)],
            5 => {
                // pick the split c : e first, then f below the entanglement threshold
                let root = (v * (1.0 - v)).sqrt();
                let f = u * root / (1.0 + 2.0 * root);
                vec![f, v * (1.0 - 2.0 * f)]
            }
            6 => {
                let f = 0.25 + u / 4.0;
                vec![f, v * g(2.0, f) / 2.0]
            }
            7 => {
                let f = u / 5.0;
                vec![f, v * g(5.0, f)]
            }
            8 => vec![u / 6.0],
            _ => unreachable!(),
        })
        .collect())
}

/// One point of an (N, w) scatter for a case, with the witness bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub case_id: u8,
    pub params: Vec<f64>,
    #[serde(rename = "N")]
    pub negativity: f64,
    #[serde(rename = "C")]
    pub concurrence: f64,
    pub w: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

pub fn sweep(case_id: u8, n: usize) -> Result<Vec<SweepRow>, XStateError> {
    sweep_params(case_id, n)?
        .into_iter()
        .map(|params| {
            let rho = xstate(&case_family(case_id, &params)?)?;
            let w = uwe(&moments(&rho)).w.min(1.0);
            let bounds = bounds_from_witness(w).expect("w clamped into [0, 1]");
            Ok(SweepRow {
                case_id,
                params,
                negativity: negativity_spectral(&rho),
                concurrence: concurrence(&rho),
                w,
                lower_bound: bounds.lower,
                upper_bound: bounds.upper,
            })
        })
        .collect()
}
