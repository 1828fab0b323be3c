//! Local-unitary invariants of a two-qubit state built from its Bloch form,
//! and the reconstruction of the partial-transpose moments from them.

use serde::{Deserialize, Serialize};

use crate::qmat::{BlochForm, MomentSet};

/// The nine Makhlin invariants that enter the moments.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InvariantSet {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub i5: f64,
    pub i7: f64,
    pub i8: f64,
    pub i12: f64,
    pub i14: f64,
}

impl InvariantSet {
    pub fn as_array(&self) -> [f64; 9] {
        [
            self.i1, self.i2, self.i3, self.i4, self.i5, self.i7, self.i8, self.i12, self.i14,
        ]
    }
}

/// Combinations `x1..x4` entering the moment formulas and the six
/// independent invariants `y1..y6` they are built from.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DerivedInvariants {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
    pub y4: f64,
    pub y5: f64,
    pub y6: f64,
}

type Mat3 = [[f64; 3]; 3];

fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn gram(beta: &Mat3) -> Mat3 {
    let mut g = [[0.0; 3]; 3];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (0..3).map(|k| beta[k][i] * beta[k][j]).sum();
        }
    }
    g
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nonzero entries of the Levi-Civita symbol as (i, j, k, sign).
const LEVI_CIVITA: [(usize, usize, usize, f64); 6] = [
    (0, 1, 2, 1.0),
    (1, 2, 0, 1.0),
    (2, 0, 1, 1.0),
    (0, 2, 1, -1.0),
    (2, 1, 0, -1.0),
    (1, 0, 2, -1.0),
];

/// `e_ijk e_lmn s_i p_l beta_jm beta_kn`, summed over the 36 nonzero index pairs.
fn levi_civita_contraction(s: &[f64; 3], p: &[f64; 3], beta: &Mat3) -> f64 {
    let mut total = 0.0;
    for &(i, j, k, e1) in &LEVI_CIVITA {
        for &(l, m, n, e2) in &LEVI_CIVITA {
            total += e1 * e2 * s[i] * p[l] * beta[j][m] * beta[k][n];
        }
    }
    total
}

pub fn makhlin_invariants(b: &BlochForm) -> InvariantSet {
    let beta = &b.beta;
    let g = gram(beta);
    let trace_g = g[0][0] + g[1][1] + g[2][2];
    let trace_g2: f64 = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| g[i][j] * g[j][i])
        .sum();
    // s as a row vector, p as a column vector
    let s_beta: [f64; 3] = std::array::from_fn(|j| (0..3).map(|i| b.s[i] * beta[i][j]).sum());
    let beta_p: [f64; 3] = std::array::from_fn(|i| (0..3).map(|j| beta[i][j] * b.p[j]).sum());

    InvariantSet {
        i1: det3(beta),
        i2: trace_g,
        i3: trace_g2,
        i4: dot(&b.s, &b.s),
        i5: dot(&s_beta, &s_beta),
        i7: dot(&b.p, &b.p),
        i8: dot(&beta_p, &beta_p),
        i12: dot(&s_beta, &b.p),
        i14: levi_civita_contraction(&b.s, &b.p, beta),
    }
}

pub fn derived_invariants(inv: &InvariantSet) -> DerivedInvariants {
    let y1 = inv.i2;
    let y2 = inv.i4;
    let y3 = inv.i7;
    let y4 = inv.i1 + inv.i12;
    let y5 = inv.i5 + inv.i8 + inv.i14;
    let y6 = inv.i3;
    DerivedInvariants {
        x1: y1 + y2 + y3,
        x2: y4,
        x3: y1 * y1 - y6,
        x4: y5 + y2 * y3,
        y1,
        y2,
        y3,
        y4,
        y5,
        y6,
    }
}

pub fn moments_from_invariants(d: &DerivedInvariants) -> MomentSet {
    MomentSet {
        pi1: 1.0,
        pi2: (1.0 + d.x1) / 4.0,
        pi3: (1.0 + 3.0 * d.x1 + 6.0 * d.x2) / 16.0,
        pi4: (1.0 + 6.0 * d.x1 + 24.0 * d.x2 + d.x1 * d.x1 + 2.0 * d.x3 + 4.0 * d.x4) / 64.0,
    }
}

/// Moments reached through the invariant route: Bloch form, Makhlin
/// invariants, derived combinations.
pub fn moments_via_invariants(b: &BlochForm) -> MomentSet {
    moments_from_invariants(&derived_invariants(&makhlin_invariants(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{bloch_decompose, Bell, DensityMatrix};
    use approx::assert_abs_diff_eq;

    fn levi(i: usize, j: usize, k: usize) -> f64 {
        ((j as f64 - i as f64) * (k as f64 - i as f64) * (k as f64 - j as f64)) / 2.0
    }

    #[test]
    fn maximally_mixed_has_zero_invariants() {
        let inv = makhlin_invariants(&bloch_decompose(&DensityMatrix::maximally_mixed()));
        assert_eq!(inv, InvariantSet::default());
        assert_eq!(derived_invariants(&inv), DerivedInvariants::default());
        let m = moments_from_invariants(&DerivedInvariants::default());
        assert_eq!(m.as_array(), [1.0, 0.25, 1.0 / 16.0, 1.0 / 64.0]);
    }

    #[test]
    fn singlet_invariants() {
        let inv = makhlin_invariants(&bloch_decompose(&DensityMatrix::bell(Bell::PsiMinus)));
        let want = [-1.0, 3.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        for (x, y) in inv.as_array().iter().zip(want) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-14);
        }
        let d = derived_invariants(&inv);
        assert_abs_diff_eq!(d.x1, 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.x2, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.x3, 6.0, epsilon = 1e-13);
        assert_abs_diff_eq!(d.x4, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn singlet_moments_from_exact_derived_values() {
        let d = DerivedInvariants {
            x1: 3.0,
            x2: -1.0,
            x3: 6.0,
            x4: 0.0,
            ..Default::default()
        };
        assert_eq!(moments_from_invariants(&d).as_array(), [1.0, 1.0, 0.25, 0.25]);
    }

    #[test]
    fn x1_two_ways() {
        let inv = InvariantSet {
            i1: 0.1,
            i2: 0.7,
            i3: 0.3,
            i4: 0.2,
            i5: 0.05,
            i7: 0.4,
            i8: 0.01,
            i12: -0.02,
            i14: 0.03,
        };
        let d = derived_invariants(&inv);
        assert_eq!(d.x1, inv.i2 + inv.i4 + inv.i7);
        assert_eq!(d.x1, d.y1 + d.y2 + d.y3);
        assert_eq!(d.x4, inv.i5 + inv.i8 + inv.i14 + inv.i4 * inv.i7);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn levi_civita_matches_brute_force() {
        let s = [0.3, -0.2, 0.5];
        let p = [-0.1, 0.4, 0.25];
        let beta = [[0.2, -0.3, 0.1], [0.05, 0.4, -0.2], [0.3, 0.1, -0.6]];
        let mut brute = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        for m in 0..3 {
                            for n in 0..3 {
                                brute += levi(i, j, k) * levi(l, m, n) * s[i] * p[l] * beta[j][m] * beta[k][n];
                            }
                        }
                    }
                }
            }
        }
        assert_abs_diff_eq!(levi_civita_contraction(&s, &p, &beta), brute, epsilon = 1e-15);
    }
}
