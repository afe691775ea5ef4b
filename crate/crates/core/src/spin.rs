//! Closed-form spectral splitting in spin factors.
//!
//! Every nonzero `z` in a spin factor decomposes as `z = α₁d + α₂d₂` with
//! `α₁ ≥ α₂ ≥ 0`, where `d, d₂` are triple-orthogonal minimal tripotents of
//! the form `e^{iφ/2}(û ± i v̂)/√2` for orthonormal real vectors `û, v̂`.
//! The split: align the phase of `q(z) = Σ zᵢ²`, separate real and imaginary
//! parts (they are orthogonal after alignment), and recombine.

use crate::linalg::C64;

pub(crate) struct SpinSplit {
    pub alpha1: f64,
    pub e1: Vec<C64>,
    pub alpha2: f64,
    pub e2: Vec<C64>,
}

pub(crate) fn split(z: &[C64]) -> Option<SpinSplit> {
    let n = z.len();
    let s: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    if s <= 0.0 {
        return None;
    }
    let q: C64 = z.iter().map(|c| c * c).sum();
    let phi = if q.norm() > 0.0 { q.arg() } else { 0.0 };
    let rot = C64::new(0.0, -phi / 2.0).exp();
    let u: Vec<f64> = z.iter().map(|c| (c * rot).re).collect();
    let mut v: Vec<f64> = z.iter().map(|c| (c * rot).im).collect();
    let a = norm(&u);
    // After the phase alignment a² − b² = |q| ≥ 0 holds exactly, so b can
    // exceed a only by rounding when the two coefficients coincide; α₂ is
    // clamped at zero below and the frame assignment stays consistent with
    // the reconstruction z = e^{iφ/2}(u + iv).
    if a <= 0.0 {
        return None;
    }
    // the alignment also makes ⟨u,v⟩ ≈ 0 up to rounding; remove the residual
    // overlap exactly, otherwise it is amplified by 1/b when b is small
    let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    let a2 = a * a;
    for (vi, ui) in v.iter_mut().zip(&u) {
        *vi -= dot / a2 * ui;
    }
    let b = norm(&v);
    let uhat: Vec<f64> = u.iter().map(|x| x / a).collect();
    let vhat: Vec<f64> = if b > 1e-14 * a {
        v.iter().map(|x| x / b).collect()
    } else {
        real_unit_orthogonal(&uhat, n)
    };
    let back = C64::new(0.0, phi / 2.0).exp();
    let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let e1: Vec<C64> = (0..n)
        .map(|k| back * inv_sqrt2 * C64::new(uhat[k], vhat[k]))
        .collect();
    let e2: Vec<C64> = (0..n)
        .map(|k| back * inv_sqrt2 * C64::new(uhat[k], -vhat[k]))
        .collect();
    Some(SpinSplit {
        alpha1: (a + b) * std::f64::consts::FRAC_1_SQRT_2,
        e1,
        alpha2: ((a - b).max(0.0)) * std::f64::consts::FRAC_1_SQRT_2,
        e2,
    })
}

/// The minimal tripotent carrying the norm of `z`, i.e. the gradient of the
/// spin norm at a generic point.
pub(crate) fn leading_tripotent(z: &[C64]) -> Option<Vec<C64>> {
    split(z).map(|s| s.e1)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn real_unit_orthogonal(uhat: &[f64], n: usize) -> Vec<f64> {
    // Gram-Schmidt a canonical axis against û; pick the axis û is furthest from.
    let (k, _) = uhat
        .iter()
        .enumerate()
        .map(|(i, x)| (i, x.abs()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .expect("nonempty");
    let mut w = vec![0.0; n];
    w[k] = 1.0;
    let dot: f64 = uhat[k];
    for i in 0..n {
        w[i] -= dot * uhat[i];
    }
    let nw = norm(&w);
    w.iter_mut().for_each(|x| *x /= nw);
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_matches_hand_computation() {
        // z = (a, ib, 0) with a > b > 0: α = ((a+b)/√2, (a−b)/√2), d = (x̂+iŷ)/√2
        let (a, b) = (0.8, 0.3);
        let z = vec![C64::new(a, 0.0), C64::new(0.0, b), C64::new(0.0, 0.0)];
        let s = split(&z).unwrap();
        assert!((s.alpha1 - (a + b) / std::f64::consts::SQRT_2).abs() < 1e-14);
        assert!((s.alpha2 - (a - b) / std::f64::consts::SQRT_2).abs() < 1e-14);
        let d = &s.e1;
        assert!((d[0] - C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-14);
        assert!((d[1] - C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-14);
    }

    #[test]
    fn reconstruction_is_exact() {
        let z = vec![
            C64::new(0.3, -0.4),
            C64::new(0.1, 0.9),
            C64::new(-0.2, 0.05),
            C64::new(0.0, 0.7),
        ];
        let s = split(&z).unwrap();
        for k in 0..z.len() {
            let back = s.e1[k] * s.alpha1 + s.e2[k] * s.alpha2;
            assert!((back - z[k]).norm() < 1e-12);
        }
        // tripotency of e1: q(e1) = 0 and ⟨e1,e1⟩ = 1
        let q: C64 = s.e1.iter().map(|c| c * c).sum();
        let ip: f64 = s.e1.iter().map(|c| c.norm_sqr()).sum();
        assert!(q.norm() < 1e-12);
        assert!((ip - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximal_tripotent_splits_into_conjugate_pair() {
        let z = vec![
            C64::new(std::f64::consts::SQRT_2, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        let s = split(&z).unwrap();
        assert!((s.alpha1 - 1.0).abs() < 1e-14);
        assert!((s.alpha2 - 1.0).abs() < 1e-14);
        for k in 0..3 {
            assert!((s.e1[k].conj() - s.e2[k]).norm() < 1e-14);
        }
    }
}
