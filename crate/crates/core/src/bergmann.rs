//! Bergmann operators, their fractional powers, Möbius transformations, the
//! Kobayashi distance, and the norm identity
//! `‖B(a,a)^{-1/2} B(a,z) B(z,z)^{-1/2}‖ = 1/(1 − ‖g₋z(a)‖²)`.

use crate::error::{CartanError, Result};
use crate::linalg::{self, CMat};
use crate::operator::{LinearOp, NormEstimator};
use crate::space::{Element, TripleSpace};
use crate::spectral::{spectral_decompose, PeirceSystem, SpectralDecomp};
use crate::triple::box_operator;

/// Reject negative Bergmann powers this close to the boundary: the inverse
/// square root blows up like `1/(1−‖a‖²)`.
const BOUNDARY_GUARD: f64 = 1e-12;

/// `B(a,b): x ↦ x − 2{a,b,x} + {a,{b,x,b},a}`.
///
/// On matrix factors this is the two-sided multiplication
/// `x ↦ (1 − ab*) x (1 − b*a)`, assembled from the cached small matrices;
/// spin blocks are built from the definition columnwise.
pub fn bergmann(a: &Element, b: &Element) -> Result<LinearOp> {
    a.check_same_space(b, "bergmann")?;
    let space = a.space().clone();
    let n = space.total_dim();
    let mut mat = CMat::zeros(n, n);
    for i in 0..space.factors().len() {
        let kind = space.factors()[i];
        let range = space.factor_range(i);
        let af = a.factor_coords(i);
        let bf = b.factor_coords(i);
        let dim = kind.dim();
        match kind {
            crate::space::FactorKind::Spin { .. } => {
                let mut basis = vec![linalg::ZERO; dim];
                for k in 0..dim {
                    basis[k] = linalg::ONE;
                    let t1 = crate::triple::factor_triple(kind, af, bf, &basis)?;
                    let inner = crate::triple::factor_triple(kind, bf, &basis, bf)?;
                    let t2 = crate::triple::factor_triple(kind, af, &inner, af)?;
                    for r in 0..dim {
                        let idk = if r == k { linalg::ONE } else { linalg::ZERO };
                        mat[(range.start + r, range.start + k)] = idk - 2.0 * t1[r] + t2[r];
                    }
                    basis[k] = linalg::ZERO;
                }
            }
            _ => {
                let ma = crate::space::unpack_matrix(kind, af)?;
                let mb = crate::space::unpack_matrix(kind, bf)?;
                let s = ma.nrows();
                let r = ma.ncols();
                let left = CMat::identity(s, s) - &ma * mb.adjoint();
                let right = CMat::identity(r, r) - mb.adjoint() * &ma;
                let mut basis = vec![linalg::ZERO; dim];
                for k in 0..dim {
                    basis[k] = linalg::ONE;
                    let f = crate::space::unpack_matrix(kind, &basis)?;
                    let col = crate::space::pack_projected(kind, &(&left * &f * &right));
                    for (row, v) in col.into_iter().enumerate() {
                        mat[(range.start + row, range.start + k)] = v;
                    }
                    basis[k] = linalg::ZERO;
                }
            }
        }
    }
    LinearOp::from_matrix(&space, mat)
}

/// `B(a,a)^t` for `t ∈ {1, −1, 1/2, −1/2}` through the joint Peirce grid of
/// the spectral frame of `a`: for `a = Σ λᵢeᵢ`,
/// `B(a,a)^t = Σ_{i≤j} ((1−λᵢ²)(1−λⱼ²))^t P_ij` with `λ₀ = 0`.
pub fn bergmann_power(a: &Element, t: f64) -> Result<LinearOp> {
    if ![1.0, -1.0, 0.5, -0.5].contains(&t) {
        return Err(CartanError::InvalidArgument(format!(
            "Bergmann power {t} not supported (use 1, -1, 1/2, -1/2)"
        )));
    }
    let norm = a.jb_norm();
    if t < 0.0 && norm >= 1.0 - BOUNDARY_GUARD {
        return Err(CartanError::Singular(format!(
            "negative Bergmann power at ‖a‖ = {norm} (too close to the boundary)"
        )));
    }
    if norm > 1.0 + 1e-12 {
        return Err(CartanError::Domain(format!(
            "Bergmann power requires ‖a‖ ≤ 1, got {norm}"
        )));
    }
    let decomp = spectral_decompose(a)?;
    bergmann_power_of_decomp(&decomp, t)
}

/// Same as [`bergmann_power`], reusing a known decomposition of `a`.
pub fn bergmann_power_of_decomp(decomp: &SpectralDecomp, t: f64) -> Result<LinearOp> {
    let space = decomp.source().space();
    if decomp.is_empty() {
        return Ok(LinearOp::identity(space));
    }
    let frame = decomp.frame()?;
    let lambdas: Vec<f64> = decomp.coefficients();
    let m = frame.len();
    let weight = |i: usize| -> f64 {
        let l = if i == 0 { 0.0 } else { lambdas[i - 1] };
        1.0 - l * l
    };
    let sys = PeirceSystem::new(&frame)?;
    let mut acc = LinearOp::zero(space);
    for i in 0..=m {
        for j in i..=m {
            let w = (weight(i) * weight(j)).powf(t);
            let p = sys.joint(i, j)?;
            acc = acc.add(&p.scale(w))?;
        }
    }
    Ok(acc)
}

/// Dense route for `B(a,a)^t`: principal matrix function through the
/// Hermitian eigensystem of `B(a,a)`. Cross-checks the spectral route.
pub fn bergmann_power_dense(a: &Element, t: f64) -> Result<LinearOp> {
    let b = bergmann(a, a)?;
    let m = linalg::hermitian_matrix_function(b.matrix(), |x| x.powf(t))?;
    LinearOp::from_matrix(a.space(), m)
}

/// The Möbius transformation `g_a(z) = a + B(a,a)^{1/2}(1 + z□a)^{-1}(z)`,
/// with the square root cached.
#[derive(Debug, Clone)]
pub struct MobiusMap {
    a: Element,
    sqrt: LinearOp,
}

impl MobiusMap {
    pub fn new(a: &Element) -> Result<Self> {
        let n = a.jb_norm();
        if n >= 1.0 {
            return Err(CartanError::Domain(format!(
                "Möbius parameter must satisfy ‖a‖ < 1, got {n}"
            )));
        }
        Ok(MobiusMap {
            a: a.clone(),
            sqrt: bergmann_power(a, 0.5)?,
        })
    }

    pub fn parameter(&self) -> &Element {
        &self.a
    }

    pub fn space(&self) -> &TripleSpace {
        self.a.space()
    }

    /// `g_a(z)`; defined for `‖z‖ ≤ 1` and maps the open ball into itself.
    pub fn apply(&self, z: &Element) -> Result<Element> {
        z.check_same_space(&self.a, "mobius_apply")?;
        if z.jb_norm() > 1.0 + 1e-10 {
            return Err(CartanError::Domain(
                "Möbius transformation applied outside the closed ball".into(),
            ));
        }
        let resolvent_arg = box_operator(z, &self.a)?;
        let n = z.coords().len();
        let sys = CMat::identity(n, n) + resolvent_arg.matrix();
        let w = linalg::lu_solve(&sys, z.coords())?;
        let w_el = Element::from_coords(z.space(), w)?;
        Ok(&self.a + &self.sqrt.apply(&w_el)?)
    }

    pub fn inverse(&self) -> Result<MobiusMap> {
        MobiusMap::new(&-&self.a)
    }
}

/// One-shot `g_a(z)`.
pub fn mobius_apply(a: &Element, z: &Element) -> Result<Element> {
    MobiusMap::new(a)?.apply(z)
}

/// `g_a^{-1}(z) = g_{-a}(z)`.
pub fn mobius_inverse_apply(a: &Element, z: &Element) -> Result<Element> {
    MobiusMap::new(&-a)?.apply(z)
}

/// Kobayashi distance `κ(x,y) = tanh⁻¹ ‖g₋ₓ(y)‖`.
pub fn kobayashi_distance(x: &Element, y: &Element) -> Result<f64> {
    x.check_same_space(y, "kobayashi_distance")?;
    if x.jb_norm() >= 1.0 || y.jb_norm() >= 1.0 {
        return Err(CartanError::Domain(
            "Kobayashi distance needs interior points".into(),
        ));
    }
    let g = mobius_apply(&-x, y)?;
    Ok(g.jb_norm().atanh())
}

/// Membership in the Kobayashi ball `{x : ‖g₋z₀(x)‖ < r}` of radius
/// `tanh⁻¹ r` around `z₀`.
pub fn kobayashi_ball_contains(center: &Element, r: f64, x: &Element) -> Result<bool> {
    if !(0.0 < r && r < 1.0) {
        return Err(CartanError::InvalidArgument(format!(
            "Kobayashi ball radius parameter must lie in (0,1), got {r}"
        )));
    }
    if center.jb_norm() >= 1.0 || x.jb_norm() >= 1.0 {
        return Err(CartanError::Domain(
            "Kobayashi ball membership needs interior points".into(),
        ));
    }
    let g = mobius_apply(&-center, x)?;
    Ok(g.jb_norm() < r)
}

/// The norm `‖B(a,a)^{-1/2} B(a,z) B(z,z)^{-1/2}‖` (in the triple operator
/// norm), which equals `1/(1 − ‖g₋z(a)‖²)` for interior points.
pub fn gab_ratio(a: &Element, z: &Element) -> Result<f64> {
    a.check_same_space(z, "gab_ratio")?;
    if a.jb_norm() >= 1.0 || z.jb_norm() >= 1.0 {
        return Err(CartanError::Domain("gab_ratio needs interior points".into()));
    }
    let da = spectral_decompose(a)?;
    let dz = spectral_decompose(z)?;
    let left = bergmann_power_of_decomp(&da, -0.5)?;
    let right = bergmann_power_of_decomp(&dz, -0.5)?;
    let t = left.compose(&bergmann(a, z)?)?.compose(&right)?;
    let mut hints: Vec<&Element> = Vec::new();
    let ha: Vec<&Element> = da.pairs().iter().map(|p| p.1.element()).collect();
    let hz: Vec<&Element> = dz.pairs().iter().map(|p| p.1.element()).collect();
    hints.extend(ha);
    hints.extend(hz);
    Ok(t.jb_op_norm_with(&NormEstimator::default(), &hints))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{C64, CVec};
    use crate::space::{random_element, FactorKind, TripleSpace};

    fn disc_el(v: f64) -> (TripleSpace, Element) {
        let s = TripleSpace::disc();
        let e = Element::from_coords(&s, CVec::from_vec(vec![C64::new(v, 0.0)])).unwrap();
        (s, e)
    }

    #[test]
    fn disc_bergmann_value() {
        let (_, a) = disc_el(0.5);
        let (_, x) = disc_el(1.0);
        let b = bergmann(&a, &a).unwrap();
        let y = b.apply(&x).unwrap();
        assert!((y.coords()[0].re - 0.5625).abs() < 1e-14);
    }

    #[test]
    fn bergmann_with_zero_is_identity() {
        let space = TripleSpace::new(vec![FactorKind::Spin { n: 4 }]).unwrap();
        let a = random_element(&space, 1, 0.8);
        let zero = Element::zero(&space);
        let b = bergmann(&a, &zero).unwrap();
        let d = b.sub(&LinearOp::identity(&space)).unwrap();
        assert!(d.euclid_norm() < 1e-14);
    }

    #[test]
    fn disc_negative_half_power() {
        let (_, a) = disc_el(0.6);
        let op = bergmann_power(&a, -0.5).unwrap();
        let (_, x) = disc_el(1.0);
        let y = op.apply(&x).unwrap();
        assert!((y.coords()[0].re - 1.5625).abs() < 1e-12);
    }

    #[test]
    fn power_zero_parameter_is_identity() {
        let space = TripleSpace::new(vec![FactorKind::Rect { rows: 2, cols: 2 }]).unwrap();
        let zero = Element::zero(&space);
        for t in [1.0, -1.0, 0.5, -0.5] {
            let op = bergmann_power(&zero, t).unwrap();
            assert!(op.sub(&LinearOp::identity(&space)).unwrap().euclid_norm() < 1e-13);
        }
    }

    #[test]
    fn sqrt_squares_to_bergmann() {
        for kind in [
            FactorKind::Rect { rows: 2, cols: 3 },
            FactorKind::Sym { n: 3 },
            FactorKind::Antisym { n: 4 },
            FactorKind::Spin { n: 4 },
        ] {
            let space = TripleSpace::new(vec![kind]).unwrap();
            for seed in 0..6u64 {
                let a = random_element(&space, 33 + seed, 0.9);
                let half = bergmann_power(&a, 0.5).unwrap();
                let b = bergmann(&a, &a).unwrap();
                let err = half.compose(&half).unwrap().sub(&b).unwrap().euclid_norm();
                assert!(err < 1e-8, "sqrt squared mismatch on {kind:?}: {err:.2e}");
                let nhalf = bergmann_power(&a, -0.5).unwrap();
                let id_err = half
                    .compose(&nhalf)
                    .unwrap()
                    .sub(&LinearOp::identity(&space))
                    .unwrap()
                    .euclid_norm();
                assert!(id_err < 1e-8, "inverse sqrt mismatch on {kind:?}: {id_err:.2e}");
            }
        }
    }

    #[test]
    fn spectral_power_matches_dense() {
        for kind in [
            FactorKind::Rect { rows: 2, cols: 2 },
            FactorKind::Spin { n: 5 },
            FactorKind::Sym { n: 3 },
        ] {
            let space = TripleSpace::new(vec![kind]).unwrap();
            for seed in 0..5u64 {
                let a = random_element(&space, 77 + seed, 0.9);
                for t in [0.5, -0.5, -1.0] {
                    let s = bergmann_power(&a, t).unwrap();
                    let d = bergmann_power_dense(&a, t).unwrap();
                    let err = s.sub(&d).unwrap().euclid_norm();
                    assert!(err < 1e-8, "power {t} mismatch on {kind:?}: {err:.2e}");
                }
            }
        }
    }

    #[test]
    fn disc_mobius_value_and_roundtrip() {
        let (_, a) = disc_el(0.5);
        let (_, z) = disc_el(0.5);
        let g = mobius_apply(&a, &z).unwrap();
        assert!((g.coords()[0].re - 0.8).abs() < 1e-12);
        let back = mobius_inverse_apply(&a, &g).unwrap();
        assert!((back.coords()[0].re - 0.5).abs() < 1e-12);
        // g_a(0) = a
        let zero = Element::zero(a.space());
        let g0 = mobius_apply(&a, &zero).unwrap();
        assert!((&g0 - &a).jb_norm() < 1e-14);
    }

    #[test]
    fn mobius_roundtrip_on_factors() {
        for kind in [
            FactorKind::Rect { rows: 3, cols: 2 },
            FactorKind::Sym { n: 3 },
            FactorKind::Antisym { n: 4 },
            FactorKind::Spin { n: 5 },
        ] {
            let space = TripleSpace::new(vec![kind]).unwrap();
            for seed in 0..8u64 {
                let a = random_element(&space, 1000 + seed, 0.8);
                let z = random_element(&space, 2000 + seed, 0.95);
                let g = mobius_apply(&a, &z).unwrap();
                assert!(g.jb_norm() < 1.0, "Möbius image left the ball on {kind:?}");
                let back = mobius_inverse_apply(&a, &g).unwrap();
                assert!(
                    (&back - &z).jb_norm() < 1e-8,
                    "round trip failed on {kind:?}"
                );
            }
        }
    }

    #[test]
    fn kobayashi_distance_examples() {
        let (s, zero) = disc_el(0.0);
        let half = Element::from_coords(&s, CVec::from_vec(vec![C64::new(0.5, 0.0)])).unwrap();
        let d = kobayashi_distance(&zero, &half).unwrap();
        assert!((d - 0.5f64.atanh()).abs() < 1e-12);
        assert!(kobayashi_distance(&half, &half).unwrap() < 1e-12);
    }

    #[test]
    fn mobius_extends_to_the_closed_ball() {
        // g_a is defined for ‖z‖ ≤ 1 and fixes the boundary of the disc
        let (_, a) = disc_el(0.5);
        let (_, one) = disc_el(1.0);
        let g = MobiusMap::new(&a).unwrap().apply(&one).unwrap();
        assert!((g.coords()[0].re - 1.0).abs() < 1e-12);
        for kind in [FactorKind::Rect { rows: 2, cols: 2 }, FactorKind::Spin { n: 4 }] {
            let space = TripleSpace::new(vec![kind]).unwrap();
            let av = random_element(&space, 5, 0.7);
            let m = MobiusMap::new(&av).unwrap();
            for seed in 0..6u64 {
                let z = random_element(&space, 50 + seed, 1.0).rescale_to_norm(1.0);
                let img = m.apply(&z).unwrap();
                assert!(img.jb_norm() <= 1.0 + 1e-9, "{kind:?}: left the closed ball");
                assert!(img.jb_norm() >= 1.0 - 1e-9, "{kind:?}: boundary not preserved");
            }
        }
    }

    #[test]
    fn kobayashi_distance_is_symmetric() {
        for kind in [FactorKind::Sym { n: 3 }, FactorKind::Spin { n: 4 }] {
            let space = TripleSpace::new(vec![kind]).unwrap();
            for seed in 0..8u64 {
                let x = random_element(&space, 600 + seed, 0.9);
                let y = random_element(&space, 700 + seed, 0.9);
                let d1 = kobayashi_distance(&x, &y).unwrap();
                let d2 = kobayashi_distance(&y, &x).unwrap();
                assert!((d1 - d2).abs() < 1e-8, "{kind:?}: {d1} vs {d2}");
                assert!(d1 >= 0.0);
            }
        }
    }

    #[test]
    fn gab_examples_on_disc() {
        let (_, a) = disc_el(0.5);
        let (_, mz) = disc_el(-0.5);
        // g_{0.5}(0.5) = 0.8, so the ratio is 1/(1-0.64)
        let r = gab_ratio(&a, &mz).unwrap();
        assert!((r - 1.0 / 0.36).abs() < 1e-9, "got {r}");
        let r_eq = gab_ratio(&a, &a).unwrap();
        assert!((r_eq - 1.0).abs() < 1e-9);
    }
}
