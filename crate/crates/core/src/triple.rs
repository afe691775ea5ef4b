//! The Jordan triple product, box operators, and friends.
//!
//! Per factor the product is
//!
//! * matrix factors: `{a,b,c} = (a b* c + c b* a)/2`,
//! * spin factors:   `{x,y,z} = (⟨x,y⟩z + ⟨z,y⟩x − ⟨x,z*⟩y*)/2`,
//!
//! extended coordinatewise over ℓ∞ direct sums. The product is symmetric and
//! linear in the outer variables and conjugate-linear in the middle one.

use crate::error::Result;
use crate::linalg::C64;
use crate::operator::LinearOp;
use crate::space::{pack_projected, unpack_matrix, Element, FactorKind};

/// `{a, b, c}` for three elements of the same space.
pub fn triple_product(a: &Element, b: &Element, c: &Element) -> Result<Element> {
    a.check_same_space(b, "triple_product")?;
    a.check_same_space(c, "triple_product")?;
    let space = a.space();
    let mut out = Element::zero(space);
    for i in 0..space.factors().len() {
        let kind = space.factors()[i];
        let range = space.factor_range(i);
        let block = factor_triple(
            kind,
            a.factor_coords(i),
            b.factor_coords(i),
            c.factor_coords(i),
        )?;
        for (k, v) in block.into_iter().enumerate() {
            out.coords_mut()[range.start + k] = v;
        }
    }
    Ok(out)
}

pub(crate) fn factor_triple(
    kind: FactorKind,
    a: &[C64],
    b: &[C64],
    c: &[C64],
) -> Result<Vec<C64>> {
    match kind {
        FactorKind::Spin { .. } => Ok(spin_triple(a, b, c)),
        _ => {
            let ma = unpack_matrix(kind, a)?;
            let mb = unpack_matrix(kind, b)?;
            let mc = unpack_matrix(kind, c)?;
            let bh = mb.adjoint();
            let prod = (&ma * &bh * &mc + &mc * &bh * &ma).scale(0.5);
            // the product stays in the symmetry class; packing symmetrizes
            // the last-bit rounding skew
            Ok(pack_projected(kind, &prod))
        }
    }
}

pub(crate) fn spin_triple(x: &[C64], y: &[C64], z: &[C64]) -> Vec<C64> {
    let xy: C64 = x.iter().zip(y).map(|(p, q)| p * q.conj()).sum();
    let zy: C64 = z.iter().zip(y).map(|(p, q)| p * q.conj()).sum();
    // ⟨x, z*⟩ = Σ xᵢ zᵢ
    let xzs: C64 = x.iter().zip(z).map(|(p, q)| p * q).sum();
    (0..x.len())
        .map(|i| (xy * z[i] + zy * x[i] - xzs * y[i].conj()) * C64::new(0.5, 0.0))
        .collect()
}

/// The box operator `a □ b : x ↦ {a, b, x}` as a dense linear map.
///
/// On matrix factors this is `x ↦ (P x + x Q)/2` with `P = a b*`, `Q = b* a`,
/// assembled columnwise from the cached small matrices; spin blocks come from
/// the spin formula. The product is factorwise, so the result is block
/// diagonal over the factors.
pub fn box_operator(a: &Element, b: &Element) -> Result<LinearOp> {
    a.check_same_space(b, "box_operator")?;
    let space = a.space().clone();
    let n = space.total_dim();
    let mut mat = crate::linalg::CMat::zeros(n, n);
    for i in 0..space.factors().len() {
        let kind = space.factors()[i];
        let range = space.factor_range(i);
        let af = a.factor_coords(i);
        let bf = b.factor_coords(i);
        let dim = kind.dim();
        match kind {
            FactorKind::Spin { .. } => {
                let mut basis = vec![C64::new(0.0, 0.0); dim];
                for k in 0..dim {
                    basis[k] = C64::new(1.0, 0.0);
                    let col = spin_triple(af, bf, &basis);
                    for (r, v) in col.into_iter().enumerate() {
                        mat[(range.start + r, range.start + k)] = v;
                    }
                    basis[k] = C64::new(0.0, 0.0);
                }
            }
            _ => {
                let ma = unpack_matrix(kind, af)?;
                let mb = unpack_matrix(kind, bf)?;
                let p = &ma * mb.adjoint();
                let q = mb.adjoint() * &ma;
                let mut basis = vec![C64::new(0.0, 0.0); dim];
                for k in 0..dim {
                    basis[k] = C64::new(1.0, 0.0);
                    let f = unpack_matrix(kind, &basis)?;
                    let col = pack_projected(kind, &(&p * &f + &f * &q).scale(0.5));
                    for (r, v) in col.into_iter().enumerate() {
                        mat[(range.start + r, range.start + k)] = v;
                    }
                    basis[k] = C64::new(0.0, 0.0);
                }
            }
        }
    }
    LinearOp::from_matrix(&space, mat)
}

/// Quadratic representation `Q_a(x) = {a, x, a}`.
pub fn quadratic_rep(a: &Element, x: &Element) -> Result<Element> {
    triple_product(a, x, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVec;
    use crate::space::{random_element, TripleSpace};

    fn disc_point(v: f64) -> (TripleSpace, Element) {
        let space = TripleSpace::disc();
        let e = Element::from_coords(&space, CVec::from_vec(vec![C64::new(v, 0.0)])).unwrap();
        (space, e)
    }

    #[test]
    fn disc_triple_is_ab_bar_c() {
        let (_, one) = disc_point(1.0);
        let t = triple_product(&one, &one, &one).unwrap();
        assert!((t.coords()[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn middle_slot_zero_kills_product() {
        let space = TripleSpace::new(vec![crate::space::FactorKind::Sym { n: 3 }]).unwrap();
        let a = random_element(&space, 1, 0.9);
        let c = random_element(&space, 2, 0.9);
        let zero = Element::zero(&space);
        let t = triple_product(&a, &zero, &c).unwrap();
        assert!(t.l2_norm() == 0.0);
    }

    #[test]
    fn spin_sqrt2_unit_vector_is_tripotent() {
        let space = TripleSpace::new(vec![crate::space::FactorKind::Spin { n: 3 }]).unwrap();
        let x = Element::from_coords(
            &space,
            CVec::from_vec(vec![
                C64::new(std::f64::consts::SQRT_2, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ]),
        )
        .unwrap();
        // hand expansion: {x,x,x} = (2⟨x,x⟩x − ⟨x,x*⟩x*)/2 = (4√2 − 2√2)/2 ê₁ = x
        let t = triple_product(&x, &x, &x).unwrap();
        assert!((&t - &x).l2_norm() < 1e-14);
    }

    #[test]
    fn box_on_disc_multiplies() {
        let (_, a) = disc_point(0.6);
        let op = box_operator(&a, &a).unwrap();
        let (_, x) = disc_point(1.0);
        let y = op.apply(&x).unwrap();
        assert!((y.coords()[0] - C64::new(0.36, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn box_zero_is_zero() {
        let space = TripleSpace::new(vec![crate::space::FactorKind::Rect { rows: 2, cols: 2 }])
            .unwrap();
        let zero = Element::zero(&space);
        let b = random_element(&space, 5, 0.9);
        let op = box_operator(&zero, &b).unwrap();
        assert!(op.euclid_norm() < 1e-15);
    }

    #[test]
    fn triple_identity_on_samples() {
        // {x,y,{a,b,c}} = {{x,y,a},b,c} − {a,{y,x,b},c} + {a,b,{x,y,c}}
        for kind in [
            crate::space::FactorKind::Rect { rows: 2, cols: 3 },
            crate::space::FactorKind::Sym { n: 3 },
            crate::space::FactorKind::Antisym { n: 4 },
            crate::space::FactorKind::Spin { n: 5 },
        ] {
            let space = TripleSpace::new(vec![kind]).unwrap();
            for seed in 0..40u64 {
                let x = random_element(&space, 5 * seed, 1.0);
                let y = random_element(&space, 5 * seed + 1, 1.0);
                let a = random_element(&space, 5 * seed + 2, 1.0);
                let b = random_element(&space, 5 * seed + 3, 1.0);
                let c = random_element(&space, 5 * seed + 4, 1.0);
                let abc = triple_product(&a, &b, &c).unwrap();
                let lhs = triple_product(&x, &y, &abc).unwrap();
                let t1 = triple_product(&triple_product(&x, &y, &a).unwrap(), &b, &c).unwrap();
                let t2 = triple_product(&a, &triple_product(&y, &x, &b).unwrap(), &c).unwrap();
                let t3 = triple_product(&a, &b, &triple_product(&x, &y, &c).unwrap()).unwrap();
                let rhs = &(&t1 - &t2) + &t3;
                let scale = x.jb_norm() * y.jb_norm() * a.jb_norm() * b.jb_norm() * c.jb_norm();
                assert!(
                    (&lhs - &rhs).jb_norm() <= 1e-10 * scale.max(1e-30),
                    "triple identity failed on {kind:?}"
                );
            }
        }
    }
}
