//! Closed-form roots of real quartics (Ferrari, with a Cardano resolvent),
//! polished by Newton steps on the undepressed polynomial.

use nalgebra::Complex;

type C64 = Complex<f64>;

/// Evaluates `coeffs[0] x^n + ... + coeffs[n]` and its derivative.
pub fn eval_with_derivative(coeffs: &[f64], x: C64) -> (C64, C64) {
    let mut value = C64::new(0.0, 0.0);
    let mut slope = C64::new(0.0, 0.0);
    for &a in coeffs {
        slope = slope * x + value;
        value = value * x + a;
    }
    (value, slope)
}

pub fn eval(coeffs: &[f64], x: C64) -> C64 {
    eval_with_derivative(coeffs, x).0
}

fn polish(coeffs: &[f64], mut z: C64) -> C64 {
    let (mut p, mut dp) = eval_with_derivative(coeffs, z);
    for _ in 0..8 {
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let (np, ndp) = eval_with_derivative(coeffs, next);
        if np.norm() >= p.norm() {
            break;
        }
        z = next;
        p = np;
        dp = ndp;
    }
    z
}

/// Roots of the monic cubic `t^3 + a t^2 + b t + c`.
fn cubic_roots(a: C64, b: C64, c: C64) -> [C64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + c;
    let disc = (q / 2.0).powu(2) + (p / 3.0).powu(3);
    let sq = disc.sqrt();
    let (u1, u2) = (-q / 2.0 + sq, -q / 2.0 - sq);
    let big = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let omega = C64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut out = [C64::new(0.0, 0.0); 3];
    if big.norm() == 0.0 {
        // p = q = 0: triple root
        return [-shift; 3];
    }
    let s = big.cbrt();
    let mut rot = C64::new(1.0, 0.0);
    for root in out.iter_mut() {
        let sk = s * rot;
        *root = sk - p / (3.0 * sk) - shift;
        rot *= omega;
    }
    out
}

/// All four complex roots of `a x^4 + b x^3 + c x^2 + d x + e` (`a != 0`).
pub fn quartic_roots(coeffs: [f64; 5]) -> [C64; 4] {
    let [a, b, c, d, e] = coeffs;
    assert!(a != 0.0, "leading coefficient must be nonzero");
    let (b, c, d, e) = (b / a, c / a, d / a, e / a);
    let shift = b / 4.0;
    // depressed quartic y^4 + p y^2 + q y + r, x = y - b/4
    let p = c - 3.0 * b * b / 8.0;
    let q = b * b * b / 8.0 - b * c / 2.0 + d;
    let r = -3.0 * b.powi(4) / 256.0 + b * b * c / 16.0 - b * d / 4.0 + e;

    let scale = 1.0 + p.abs() + r.abs().sqrt();
    let depressed: [C64; 4] = if q.abs() <= 1e-14 * scale * scale.sqrt() {
        let disc = C64::new(p * p - 4.0 * r, 0.0).sqrt();
        let z1 = (-p + disc) / 2.0;
        let z2 = (-p - disc) / 2.0;
        [z1.sqrt(), -z1.sqrt(), z2.sqrt(), -z2.sqrt()]
    } else {
        // resolvent 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0, any m != 0 works
        let ms = cubic_roots(
            C64::new(p, 0.0),
            C64::new(p * p / 4.0 - r, 0.0),
            C64::new(-q * q / 8.0, 0.0),
        );
        let m = ms.into_iter().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
        let root2m = (2.0 * m).sqrt();
        let mut out = [C64::new(0.0, 0.0); 4];
        let mut k = 0;
        for s1 in [1.0, -1.0] {
            let inner = -(2.0 * p + 2.0 * m + s1 * 2.0 * q / root2m);
            let root_inner = inner.sqrt();
            for s2 in [1.0, -1.0] {
                out[k] = (s1 * root2m + s2 * root_inner) / 2.0;
                k += 1;
            }
        }
        out
    };
    depressed.map(|y| polish(&coeffs, y - shift))
}
