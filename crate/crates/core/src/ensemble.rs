//! Random two-qubit states, noisy moments, Monte-Carlo noise studies and the
//! two witness counterexamples (LOCC monotonicity and convexity).
//!
//! Every state index `i` of a study draws from its own ChaCha substream
//! `(seed, i)`, so results do not depend on the number of rayon workers.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, OMatrix, U4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::EnsembleError;
use crate::measures::{negativity_quartic, negativity_spectral, uwe, REAL_ROOT_TOL};
use crate::poly::quartic_roots;
use crate::qmat::{c, moments, r, Bell, DensityMatrix, Ket, Matrix2c, Matrix4c, MomentSet, C64};
use crate::xstates::{phi, psi};

/// Distribution random states are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    /// `G G^dag / tr`, G a 4x4 complex Ginibre matrix.
    #[default]
    HilbertSchmidt,
    /// `(1 + U) G G^dag (1 + U)^dag / tr`, U Haar distributed.
    Bures,
    /// Induced measure with ancilla dimension k drawn uniformly from 1..=4,
    /// so pure states (k = 1) and near-maximally entangled states occur.
    MixedRank,
}

impl Ensemble {
    pub fn name(self) -> &'static str {
        match self {
            Ensemble::HilbertSchmidt => "hs",
            Ensemble::Bures => "bures",
            Ensemble::MixedRank => "mixed-rank",
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = EnsembleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hs" => Ok(Ensemble::HilbertSchmidt),
            "bures" => Ok(Ensemble::Bures),
            "mixed-rank" => Ok(Ensemble::MixedRank),
            other => Err(EnsembleError::UnknownEnsemble(other.to_string())),
        }
    }
}

/// Deterministic substream for state `index` of a run seeded with `seed`.
pub fn index_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, cols: usize) -> Matrix4c {
    let mut g = Matrix4c::zeros();
    for j in 0..cols {
        for i in 0..4 {
            g[(i, j)] = gaussian(rng);
        }
    }
    g
}

fn normalized(m: Matrix4c) -> DensityMatrix {
    let m = m * r(1.0 / m.trace().re);
    // symmetrize away round-off so validation sees an exactly Hermitian matrix
    DensityMatrix::from_trusted((m + m.adjoint()) * r(0.5))
}

/// Haar unitary from the QR decomposition of a Ginibre matrix, with the
/// phases of R's diagonal moved into Q.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix4c {
    let qr = ginibre(rng, 4).qr();
    let (mut q, rr): (OMatrix<C64, U4, U4>, Matrix4<C64>) = (qr.q(), qr.r());
    for j in 0..4 {
        let d = rr[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { r(1.0) };
        for i in 0..4 {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Hilbert-Schmidt random density matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let g = ginibre(rng, 4);
    normalized(g * g.adjoint())
}

pub fn sample_state<R: Rng + ?Sized>(ensemble: Ensemble, rng: &mut R) -> DensityMatrix {
    match ensemble {
        Ensemble::HilbertSchmidt => random_density_matrix(rng),
        Ensemble::Bures => {
            let g = ginibre(rng, 4);
            let a = (Matrix4c::identity() + random_unitary(rng)) * g;
            normalized(a * a.adjoint())
        }
        Ensemble::MixedRank => {
            let k = rng.gen_range(1..=4);
            let g = ginibre(rng, k);
            normalized(g * g.adjoint())
        }
    }
}

/// Haar-random pure two-qubit ket.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R) -> Ket {
    let v = Ket::from_fn(|_, _| gaussian(rng));
    v / r(v.norm())
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let v = random_ket(rng);
    DensityMatrix::from_trusted(v * v.adjoint())
}

/// Haar-random SU(2) element from a uniformly random unit quaternion.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2c {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = c(q[0] / n, q[1] / n);
    let b = c(q[2] / n, q[3] / n);
    Matrix2c::new(a, -b.conj(), b, a.conj())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Maximal relative error `dPi_n / Pi_n`.
    pub relative_bound: f64,
    pub seed: u64,
    pub ensemble: Ensemble,
}

impl NoiseSpec {
    pub fn new(relative_bound: f64, seed: u64, ensemble: Ensemble) -> Result<Self, EnsembleError> {
        if !(relative_bound.is_finite() && relative_bound >= 0.0) {
            return Err(EnsembleError::InvalidNoiseBound(relative_bound));
        }
        Ok(Self {
            relative_bound,
            seed,
            ensemble,
        })
    }
}

/// Adds independent uniform noise on `[-b pi_n, b pi_n]` to pi2, pi3 and pi4.
pub fn perturb_moments<R: Rng + ?Sized>(m: &MomentSet, relative_bound: f64, rng: &mut R) -> MomentSet {
    let mut shift = |x: f64| {
        let u: f64 = rng.gen_range(-1.0..=1.0);
        x + u * relative_bound * x
    };
    MomentSet {
        pi1: m.pi1,
        pi2: shift(m.pi2),
        pi3: shift(m.pi3),
        pi4: shift(m.pi4),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterRecord {
    pub n_theory: f64,
    pub n_experiment: f64,
    pub w_theory: f64,
    pub w_experiment: f64,
}

/// Negativity read off noisy moments.
///
/// A nonnegative determinant means no entanglement is detected. Otherwise
/// the quartic root closest to `n_theory` is taken, unclamped; when noise
/// has pushed the roots off the real axis, its real part is used.
pub fn noisy_negativity(noisy: &MomentSet, n_theory: f64) -> f64 {
    let det = uwe(noisy).det_pt;
    if det >= 0.0 {
        return 0.0;
    }
    let roots = quartic_roots(negativity_quartic(noisy, det));
    let distance = |z: &C64| (*z - n_theory).norm();
    roots
        .iter()
        .filter(|z| z.im.abs() < REAL_ROOT_TOL)
        .min_by(|a, b| distance(a).total_cmp(&distance(b)))
        .or_else(|| roots.iter().min_by(|a, b| distance(a).total_cmp(&distance(b))))
        .map_or(0.0, |z| z.re)
}

fn record(index: usize, spec: &NoiseSpec, with_negativity: bool) -> ScatterRecord {
    let mut rng = index_rng(spec.seed, index as u64);
    let rho = sample_state(spec.ensemble, &mut rng);
    let exact = moments(&rho);
    let noisy = perturb_moments(&exact, spec.relative_bound, &mut rng);
    let n_theory = negativity_spectral(&rho);
    let n_experiment = if with_negativity {
        noisy_negativity(&noisy, n_theory)
    } else {
        f64::NAN
    };
    ScatterRecord {
        n_theory,
        n_experiment,
        w_theory: uwe(&exact).w,
        w_experiment: uwe(&noisy).w,
    }
}

fn study(n_states: usize, spec: &NoiseSpec, with_negativity: bool) -> Result<Vec<ScatterRecord>, EnsembleError> {
    if n_states == 0 {
        return Err(EnsembleError::EmptyStudy);
    }
    NoiseSpec::new(spec.relative_bound, spec.seed, spec.ensemble)?;
    Ok((0..n_states)
        .into_par_iter()
        .map(|i| record(i, spec, with_negativity))
        .collect())
}

/// Exact vs noisy negativity (and witness) for `n_states` random states.
pub fn negativity_noise_study(n_states: usize, spec: &NoiseSpec) -> Result<Vec<ScatterRecord>, EnsembleError> {
    study(n_states, spec, true)
}

/// Exact vs noisy witness. Uses the same states and noise draws as
/// [`negativity_noise_study`]; `n_experiment` is left as NaN.
pub fn witness_noise_study(n_states: usize, spec: &NoiseSpec) -> Result<Vec<ScatterRecord>, EnsembleError> {
    study(n_states, spec, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinSpread {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
}

/// Spread of `n_experiment - n_theory` over records with `n_theory` in `[lo, hi]`.
pub fn negativity_error_spread(records: &[ScatterRecord], lo: f64, hi: f64) -> Option<BinSpread> {
    let errors: Vec<f64> = records
        .iter()
        .filter(|rec| rec.n_theory >= lo && rec.n_theory <= hi)
        .map(|rec| rec.n_experiment - rec.n_theory)
        .collect();
    if errors.len() < 2 {
        return None;
    }
    let count = errors.len();
    let mean = errors.iter().sum::<f64>() / count as f64;
    let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
    Some(BinSpread {
        count,
        mean,
        std_dev: var.sqrt(),
    })
}

pub fn max_abs_negativity_error(records: &[ScatterRecord]) -> f64 {
    records
        .iter()
        .map(|rec| (rec.n_experiment - rec.n_theory).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs_witness_error(records: &[ScatterRecord]) -> f64 {
    records
        .iter()
        .map(|rec| (rec.w_experiment - rec.w_theory).abs())
        .fold(0.0, f64::max)
}

/// Fidelity with the singlet.
pub fn singlet_fidelity(rho: &DensityMatrix) -> f64 {
    (rho.matrix() * DensityMatrix::bell(Bell::PsiMinus).matrix()).trace().re
}

/// Average over `U (x) U` rotations, in closed form: the Werner state
/// `q psi- + (1 - q) I/4` with the same singlet fidelity F, `q = (4F - 1)/3`.
pub fn twirl_to_werner(rho: &DensityMatrix) -> DensityMatrix {
    werner_state((4.0 * singlet_fidelity(rho) - 1.0) / 3.0)
}

/// `q psi- + (1 - q) I/4`, a state for `-1/3 <= q <= 1`.
pub fn werner_state(q: f64) -> DensityMatrix {
    let m = DensityMatrix::bell(Bell::PsiMinus).matrix() * r(q) + Matrix4c::identity() * r((1.0 - q) / 4.0);
    DensityMatrix::from_trusted(m)
}

fn witness(rho: &DensityMatrix) -> f64 {
    uwe(&moments(rho)).w
}

/// `p psi- + (1 - p) phi+`.
pub fn locc_input(p: f64) -> DensityMatrix {
    DensityMatrix::from_trusted(psi(FRAC_PI_4, -1.0) * r(p) + phi(FRAC_PI_4, 1.0) * r(1.0 - p))
}

/// `w(twirl(rho_p)) - w(rho_p)`; positive values violate monotonicity under LOCC.
pub fn locc_gap(p: f64) -> f64 {
    let rho = locc_input(p);
    witness(&twirl_to_werner(&rho)) - witness(&rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoccReport {
    pub p: f64,
    pub w_before: f64,
    pub w_after: f64,
    pub violated: bool,
}

/// The mixture at `p = (3 sqrt 17 - 7)/8`, where the twirl raises `w` the most.
pub fn locc_counterexample() -> LoccReport {
    let p = (3.0 * 17f64.sqrt() - 7.0) / 8.0;
    let rho = locc_input(p);
    let w_before = witness(&rho);
    let w_after = witness(&twirl_to_werner(&rho));
    LoccReport {
        p,
        w_before,
        w_after,
        violated: w_before < w_after,
    }
}

/// Grid point of `(1/4, 1]` with the largest [`locc_gap`].
pub fn locc_gap_argmax(step: f64) -> (f64, f64) {
    let steps = (0.75 / step).round() as usize;
    (1..=steps)
        .map(|k| {
            let p = 0.25 + k as f64 * step;
            (p, locc_gap(p))
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty grid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub w_rho1: f64,
    pub w_rho2: f64,
    pub w_mixture: f64,
    pub violated: bool,
}

/// `rho1 = [phi+(0) + psi+(pi/8)]/2`, `rho2 = [phi+(0) + psi-(5 pi/8)]/2` and
/// their equal mixture, whose witness exceeds the average of theirs.
pub fn convexity_counterexample() -> ConvexityReport {
    let half = r(0.5);
    let rho1 = (phi(0.0, 1.0) + psi(FRAC_PI_8, 1.0)) * half;
    let rho2 = (phi(0.0, 1.0) + psi(5.0 * FRAC_PI_8, -1.0)) * half;
    let mix = (rho1 + rho2) * half;
    let [w_rho1, w_rho2, w_mixture] = [rho1, rho2, mix].map(|m| witness(&DensityMatrix::from_trusted(m)));
    ConvexityReport {
        w_rho1,
        w_rho2,
        w_mixture,
        violated: w_mixture > (w_rho1 + w_rho2) / 2.0,
    }
}
