//! Tripotents, spectral decompositions into orthogonal minimal frames, and
//! the Peirce projection calculus.
//!
//! Decomposition routes per factor:
//!
//! * `Rect`: singular value decomposition; minimal tripotents are the
//!   rank-one outer products `uᵢvᵢ*`.
//! * `Sym`: Takagi factorization `z = UΣUᵗ`, computed through the real
//!   symmetric embedding `[[X, Y], [Y, −X]]` of `z = X + iY`; minimal
//!   tripotents are `uᵢuᵢᵗ`.
//! * `Antisym`: Youla pairing: eigenvectors of `zz*` come in quaternionic
//!   pairs `(v, z v̄/σ)`; minimal tripotents are `uvᵗ − vuᵗ`.
//! * `Spin`: the closed-form phase split (align the phase of `Σ zᵢ²`,
//!   separate the now-orthogonal real and imaginary parts, recombine).
//!
//! A generic route through the eigensystem of `z □ z` is also provided
//! ([`spectral_decompose_coarse`]); it yields possibly non-minimal tripotents
//! with distinct coefficients and is refined by [`refine_to_minimal_frame`].

use crate::bergmann::bergmann;
use crate::error::{CartanError, Result};
use crate::linalg::{self, C64, CMat, CVec};
use crate::operator::LinearOp;
use crate::space::{unpack_matrix, Element, FactorKind, TripleSpace};
use crate::triple::triple_product;

/// Default tolerance for tripotency checks.
pub const TRIPOTENT_TOL: f64 = 1e-9;
/// Default tolerance under which a box operator counts as zero.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;
/// Singular value gap factor for the numerical minimality decision.
const MINIMALITY_GAP: f64 = 1e6;
/// Relative drop threshold for vanishing spectral coefficients.
const COEFF_DROP: f64 = 1e-13;

/// A validated tripotent: `{e,e,e} = e` within tolerance.
#[derive(Debug, Clone)]
pub struct Tripotent {
    elem: Element,
    minimal: bool,
}

impl Tripotent {
    /// Validate `{e,e,e} ≈ e` (and `‖e‖ ≈ 1` unless `e = 0`), then record
    /// whether `e` is minimal.
    pub fn new(elem: Element, tol: f64) -> Result<Self> {
        let cube = triple_product(&elem, &elem, &elem)?;
        let dev = (&cube - &elem).jb_norm();
        if dev > tol {
            return Err(CartanError::Validation(format!(
                "not a tripotent: ‖{{e,e,e}} − e‖ = {dev:.3e} > {tol:.1e}"
            )));
        }
        let n = elem.jb_norm();
        if n > 0.0 && (n - 1.0).abs() > tol.max(1e-9) {
            return Err(CartanError::Validation(format!(
                "nonzero tripotent must have norm 1, got {n}"
            )));
        }
        let minimal = minimality_rank_is_one(&elem)?;
        Ok(Tripotent { elem, minimal })
    }

    pub fn element(&self) -> &Element {
        &self.elem
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn space(&self) -> &TripleSpace {
        self.elem.space()
    }

    pub fn is_zero(&self) -> bool {
        self.elem.jb_norm() == 0.0
    }
}

/// `{e,e,e} = e` within `tol`?
pub fn is_tripotent(e: &Element, tol: f64) -> bool {
    match triple_product(e, e, e) {
        Ok(cube) => (&cube - e).jb_norm() <= tol,
        Err(_) => false,
    }
}

/// Triple orthogonality: `‖a □ b‖ ≤ tol` (equivalent to `b □ a = 0`).
pub fn are_orthogonal(a: &Element, b: &Element, tol: f64) -> Result<bool> {
    Ok(crate::triple::box_operator(a, b)?.euclid_norm() <= tol)
}

/// Numerical rank-one test for `v ↦ {e, v, e}`.
fn minimality_rank_is_one(e: &Element) -> Result<bool> {
    let space = e.space();
    let n = space.total_dim();
    let mut m = CMat::zeros(n, n);
    let mut basis = Element::zero(space);
    for k in 0..n {
        basis.coords_mut()[k] = C64::new(1.0, 0.0);
        let col = triple_product(e, &basis, e)?;
        m.set_column(k, col.coords());
        basis.coords_mut()[k] = C64::new(0.0, 0.0);
    }
    let s = linalg::singular_values_desc(&m);
    if s.is_empty() || s[0] <= 1e-9 {
        return Ok(false);
    }
    Ok(s.len() == 1 || s[1] <= s[0] / MINIMALITY_GAP)
}

/// Ordered spectral decomposition `z = Σ αᵢ eᵢ`, coefficients descending.
#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    source: Element,
    pairs: Vec<(f64, Tripotent)>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct PairRepr {
    alpha: f64,
    element: Element,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct DecompRepr {
    source: Element,
    pairs: Vec<PairRepr>,
}

impl SpectralDecomp {
    fn from_pairs(source: Element, mut pairs: Vec<(f64, Tripotent)>) -> Self {
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        SpectralDecomp { source, pairs }
    }

    /// Assemble a decomposition from pairs the caller already knows to be an
    /// orthogonal minimal family reconstructing `source` (validated by use).
    pub fn assemble(source: Element, pairs: Vec<(f64, Tripotent)>) -> Self {
        SpectralDecomp::from_pairs(source, pairs)
    }

    /// Serialize as a list of `(α, element)` records.
    pub fn to_json(&self) -> String {
        let repr = DecompRepr {
            source: self.source.clone(),
            pairs: self
                .pairs
                .iter()
                .map(|(alpha, t)| PairRepr {
                    alpha: *alpha,
                    element: t.element().clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).expect("decomposition serialization cannot fail")
    }

    /// Parse the `(α, element)` record list, re-validating every tripotent.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: DecompRepr =
            serde_json::from_str(text).map_err(|e| CartanError::InvalidArgument(e.to_string()))?;
        let pairs = repr
            .pairs
            .into_iter()
            .map(|p| Tripotent::new(p.element, TRIPOTENT_TOL).map(|t| (p.alpha, t)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectralDecomp::from_pairs(repr.source, pairs))
    }

    pub fn source(&self) -> &Element {
        &self.source
    }

    pub fn pairs(&self) -> &[(f64, Tripotent)] {
        &self.pairs
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `Σ αᵢ eᵢ`.
    pub fn reconstruct(&self) -> Element {
        let mut out = Element::zero(self.source.space());
        for (alpha, t) in &self.pairs {
            out = &out + &t.element().scale_re(*alpha);
        }
        out
    }

    /// The tripotents as a frame (requires all of them minimal).
    pub fn frame(&self) -> Result<Frame> {
        Frame::new(self.pairs.iter().map(|p| p.1.clone()).collect())
    }

    /// Check the decomposition invariants: reconstruction, mutual
    /// orthogonality, and `α₁ = ‖z‖`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let err = (&self.reconstruct() - &self.source).jb_norm();
        if err > tol {
            return Err(CartanError::Validation(format!(
                "reconstruction error {err:.3e} exceeds {tol:.1e}"
            )));
        }
        for i in 0..self.pairs.len() {
            for j in i + 1..self.pairs.len() {
                if !are_orthogonal(
                    self.pairs[i].1.element(),
                    self.pairs[j].1.element(),
                    ORTHOGONALITY_TOL,
                )? {
                    return Err(CartanError::Validation(format!(
                        "tripotents {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        if let Some((a1, _)) = self.pairs.first() {
            if (a1 - self.source.jb_norm()).abs() > tol {
                return Err(CartanError::Validation(
                    "leading coefficient does not equal the norm".into(),
                ));
            }
        } else if self.source.jb_norm() > tol {
            return Err(CartanError::Validation(
                "empty decomposition of a nonzero element".into(),
            ));
        }
        Ok(())
    }
}

/// Spectral decomposition into an orthogonal family of *minimal* tripotents,
/// by the factor-specific algorithms.
pub fn spectral_decompose(z: &Element) -> Result<SpectralDecomp> {
    let space = z.space();
    let mut pairs: Vec<(f64, Tripotent)> = Vec::new();
    for i in 0..space.factors().len() {
        let kind = space.factors()[i];
        let slice = z.factor_coords(i);
        for (alpha, packed) in decompose_factor(kind, slice)? {
            let mut e = Element::zero(space);
            let range = space.factor_range(i);
            for (k, v) in packed.into_iter().enumerate() {
                e.coords_mut()[range.start + k] = v;
            }
            pairs.push((alpha, Tripotent::new(e, TRIPOTENT_TOL)?));
        }
    }
    Ok(SpectralDecomp::from_pairs(z.clone(), pairs))
}

fn decompose_factor(kind: FactorKind, slice: &[C64]) -> Result<Vec<(f64, Vec<C64>)>> {
    match kind {
        FactorKind::Rect { .. } => decompose_rect(kind, slice),
        FactorKind::Sym { n } => decompose_sym(n, slice),
        FactorKind::Antisym { .. } => decompose_antisym(kind, slice),
        FactorKind::Spin { .. } => Ok(decompose_spin(slice)),
    }
}

fn decompose_rect(kind: FactorKind, slice: &[C64]) -> Result<Vec<(f64, Vec<C64>)>> {
    let m = unpack_matrix(kind, slice)?;
    let (u, s, v_t) = linalg::svd(&m)?;
    let mut out = Vec::new();
    let top = s.first().copied().unwrap_or(0.0);
    for (i, &sigma) in s.iter().enumerate() {
        if sigma <= COEFF_DROP * top || sigma == 0.0 {
            continue;
        }
        let mut e = CMat::zeros(m.nrows(), m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                e[(r, c)] = u[(r, i)] * v_t[(i, c)];
            }
        }
        out.push((sigma, e.as_slice().to_vec()));
    }
    Ok(out)
}

fn decompose_sym(n: usize, slice: &[C64]) -> Result<Vec<(f64, Vec<C64>)>> {
    let kind = FactorKind::Sym { n };
    let m = unpack_matrix(kind, slice)?;
    let x = m.map(|z| z.re);
    let y = m.map(|z| z.im);
    let mut big = nalgebra::DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            big[(i, j)] = x[(i, j)];
            big[(i, n + j)] = y[(i, j)];
            big[(n + i, j)] = y[(i, j)];
            big[(n + i, n + j)] = -x[(i, j)];
        }
    }
    let (vals, vecs) = linalg::real_symmetric_eigen(&big);
    let top = vals.first().copied().unwrap_or(0.0).max(0.0);
    let mut out = Vec::new();
    for (i, &sigma) in vals.iter().enumerate() {
        if sigma <= COEFF_DROP * top || sigma <= 0.0 {
            continue;
        }
        let u = CVec::from_fn(n, |k, _| C64::new(vecs[(k, i)], vecs[(n + k, i)]));
        let mut e = CMat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                e[(r, c)] = u[r] * u[c];
            }
        }
        out.push((sigma, crate::space::pack_projected(kind, &e)));
    }
    Ok(out)
}

fn decompose_antisym(kind: FactorKind, slice: &[C64]) -> Result<Vec<(f64, Vec<C64>)>> {
    let z = unpack_matrix(kind, slice)?;
    let n = z.nrows();
    let a = &z * z.adjoint();
    let (vals, vecs) = linalg::hermitian_eigen(&a);
    let top = vals.first().copied().unwrap_or(0.0).max(0.0);
    if top <= 0.0 {
        return Ok(Vec::new());
    }
    // group eigenvalues into clusters; exact pairs split only by rounding
    let mut out = Vec::new();
    let mut i = 0;
    while i < vals.len() {
        let mut j = i + 1;
        while j < vals.len() && (vals[j] - vals[i]).abs() <= 1e-10 * top {
            j += 1;
        }
        let lambda = vals[i..j].iter().sum::<f64>() / (j - i) as f64;
        if lambda > COEFF_DROP * COEFF_DROP * top {
            // columns of the cluster eigenspace; the quaternionic pairing
            // consumes two dimensions per tripotent, so a 2m-dimensional
            // cluster yields exactly m pairs
            let mut basis: Vec<CVec> = (i..j).map(|k| vecs.column(k).into_owned()).collect();
            let max_pairs = (j - i) / 2;
            for _ in 0..max_pairs {
                let Some(v) = basis.first().cloned() else { break };
                basis.remove(0);
                let zvbar = &z * v.map(|c| c.conj());
                let sigma = zvbar.norm();
                if sigma <= COEFF_DROP * top.sqrt() {
                    break;
                }
                let u = zvbar.map(|c| c / C64::new(sigma, 0.0));
                let mut e = CMat::zeros(n, n);
                for r in 0..n {
                    for c in 0..n {
                        e[(r, c)] = u[r] * v[c] - v[r] * u[c];
                    }
                }
                out.push((sigma, crate::space::pack_projected(kind, &e)));
                // remove span{v, u} from the remaining basis and
                // re-orthonormalize; residuals far below 1 are projection
                // leftovers (eigenvector contamination of order eps over the
                // cluster gap), not new directions
                let mut next: Vec<CVec> = Vec::new();
                for w in basis.into_iter() {
                    let mut w2 = w;
                    let pv: C64 = w2.iter().zip(v.iter()).map(|(a, b)| a * b.conj()).sum();
                    w2 -= v.map(|c| c * pv);
                    let pu: C64 = w2.iter().zip(u.iter()).map(|(a, b)| a * b.conj()).sum();
                    w2 -= u.map(|c| c * pu);
                    for prev in &next {
                        let pp: C64 = w2.iter().zip(prev.iter()).map(|(a, b)| a * b.conj()).sum();
                        w2 -= prev.map(|c| c * pp);
                    }
                    let nw = w2.norm();
                    if nw > 1e-3 {
                        next.push(w2.map(|c| c / C64::new(nw, 0.0)));
                    }
                }
                basis = next;
            }
        }
        i = j;
    }
    Ok(out)
}

fn decompose_spin(slice: &[C64]) -> Vec<(f64, Vec<C64>)> {
    match crate::spin::split(slice) {
        None => Vec::new(),
        Some(s) => {
            let mut out = vec![(s.alpha1, s.e1)];
            if s.alpha2 > COEFF_DROP * s.alpha1 {
                out.push((s.alpha2, s.e2));
            }
            out
        }
    }
}

/// Generic spectral route: eigensystem of `z □ z`. Each eigenvalue cluster
/// `α² > 0` contributes the spectral projection of `z` onto it, rescaled by
/// `1/α`, a tripotent that collects every frame member with coefficient `α`
/// and is minimal only when that coefficient is simple.
pub fn spectral_decompose_coarse(z: &Element) -> Result<SpectralDecomp> {
    let nz = z.jb_norm();
    if nz == 0.0 {
        return Ok(SpectralDecomp::from_pairs(z.clone(), Vec::new()));
    }
    let boxop = crate::triple::box_operator(z, z)?;
    let (vals, vecs) = linalg::hermitian_eigen(boxop.matrix());
    let delta = 1e-8 * nz * nz;
    let mut pairs = Vec::new();
    let mut i = 0;
    while i < vals.len() {
        let mut j = i + 1;
        while j < vals.len() && (vals[i] - vals[j]).abs() <= delta {
            j += 1;
        }
        let lambda = vals[i..j].iter().sum::<f64>() / (j - i) as f64;
        if lambda > delta.max(1e-14 * nz * nz) {
            // project z onto the cluster eigenspace
            let mut comp = CVec::zeros(z.coords().len());
            for k in i..j {
                let v = vecs.column(k);
                let coef: C64 = z
                    .coords()
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| a * b.conj())
                    .sum();
                comp += v.map(|c| c * coef);
            }
            if comp.norm() > 1e-12 * z.l2_norm().max(1e-300) {
                let alpha = lambda.sqrt();
                let e = Element::from_coords(z.space(), comp.map(|c| c / C64::new(alpha, 0.0)))?;
                pairs.push((alpha, Tripotent::new(e, 1e-6)?));
            }
        }
        i = j;
    }
    Ok(SpectralDecomp::from_pairs(z.clone(), pairs))
}

/// Split every non-minimal tripotent of a decomposition into minimal ones,
/// preserving the coefficient multiset and the reconstruction.
pub fn refine_to_minimal_frame(d: &SpectralDecomp) -> Result<SpectralDecomp> {
    let space = d.source().space();
    let mut pairs: Vec<(f64, Tripotent)> = Vec::new();
    for (alpha, t) in d.pairs() {
        if t.is_minimal() {
            pairs.push((*alpha, t.clone()));
            continue;
        }
        // decompose the tripotent itself, factor by factor; its spectral
        // coefficients are 1, so the refined pieces inherit alpha
        for i in 0..space.factors().len() {
            let kind = space.factors()[i];
            let slice = t.element().factor_coords(i);
            if slice.iter().all(|c| c.norm() < 1e-14) {
                continue;
            }
            for (unit, packed) in decompose_factor(kind, slice)? {
                let mut e = Element::zero(space);
                let range = space.factor_range(i);
                for (k, v) in packed.into_iter().enumerate() {
                    e.coords_mut()[range.start + k] = v;
                }
                pairs.push((alpha * unit, Tripotent::new(e, 1e-7)?));
            }
        }
    }
    Ok(SpectralDecomp::from_pairs(d.source().clone(), pairs))
}

/// A family of mutually orthogonal minimal tripotents.
#[derive(Debug, Clone)]
pub struct Frame {
    trips: Vec<Tripotent>,
}

impl Frame {
    pub fn new(trips: Vec<Tripotent>) -> Result<Self> {
        if trips.is_empty() {
            return Err(CartanError::Validation("empty frame".into()));
        }
        let space = trips[0].space().clone();
        for t in &trips {
            if t.space() != &space {
                return Err(CartanError::SpaceMismatch(
                    "frame tripotents live in different spaces".into(),
                ));
            }
            if t.is_zero() {
                return Err(CartanError::Validation("frame contains zero".into()));
            }
            if !t.is_minimal() {
                return Err(CartanError::Validation(
                    "frame contains a non-minimal tripotent".into(),
                ));
            }
        }
        for i in 0..trips.len() {
            for j in i + 1..trips.len() {
                if !are_orthogonal(trips[i].element(), trips[j].element(), ORTHOGONALITY_TOL)? {
                    return Err(CartanError::Validation(format!(
                        "frame tripotents {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        Ok(Frame { trips })
    }

    pub fn tripotents(&self) -> &[Tripotent] {
        &self.trips
    }

    pub fn len(&self) -> usize {
        self.trips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trips.is_empty()
    }

    pub fn space(&self) -> &TripleSpace {
        self.trips[0].space()
    }

    /// `e₁ + ⋯ + e_m`, itself a tripotent.
    pub fn sum(&self) -> Element {
        let mut out = Element::zero(self.space());
        for t in &self.trips {
            out = &out + t.element();
        }
        out
    }

    /// Linear combination `Σ cᵢ eᵢ`.
    pub fn combine(&self, coeffs: &[C64]) -> Result<Element> {
        if coeffs.len() != self.trips.len() {
            return Err(CartanError::InvalidArgument(
                "coefficient count does not match the frame".into(),
            ));
        }
        let mut out = Element::zero(self.space());
        for (c, t) in coeffs.iter().zip(&self.trips) {
            out = &out + &t.element().scale(*c);
        }
        Ok(out)
    }
}

/// Peirce projection `P_k(e)` for `k ∈ {0,1,2}`:
/// `P₂ = 2(e□e)² − e□e`, `P₁ = 4(e□e − (e□e)²)`, `P₀ = B(e,e)`.
pub fn peirce_projection(e: &Tripotent, k: usize) -> Result<LinearOp> {
    peirce_projection_raw(e.element(), k)
}

pub(crate) fn peirce_projection_raw(e: &Element, k: usize) -> Result<LinearOp> {
    if !is_tripotent(e, TRIPOTENT_TOL.max(1e-8)) {
        return Err(CartanError::Validation(
            "Peirce projection of a non-tripotent".into(),
        ));
    }
    let l = crate::triple::box_operator(e, e)?;
    let l2 = l.compose(&l)?;
    match k {
        0 => bergmann(e, e),
        1 => Ok(l.sub(&l2)?.scale(4.0)),
        2 => l2.scale(2.0).sub(&l),
        _ => Err(CartanError::InvalidArgument(format!(
            "Peirce index {k} out of range"
        ))),
    }
}

/// The three Peirce projections of every frame member, cached so that the
/// full joint grid can be assembled without recomputing box operators.
pub struct PeirceSystem {
    projections: Vec<[LinearOp; 3]>,
    space: TripleSpace,
}

impl PeirceSystem {
    pub fn new(frame: &Frame) -> Result<Self> {
        let mut projections = Vec::with_capacity(frame.len());
        for t in frame.tripotents() {
            projections.push([
                peirce_projection(t, 0)?,
                peirce_projection(t, 1)?,
                peirce_projection(t, 2)?,
            ]);
        }
        Ok(PeirceSystem {
            projections,
            space: frame.space().clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    /// `P_ij` for `0 ≤ i ≤ j ≤ n`; index 0 is the joint annihilator slot.
    pub fn joint(&self, i: usize, j: usize) -> Result<LinearOp> {
        let n = self.len();
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if j > n {
            return Err(CartanError::InvalidArgument(format!(
                "joint Peirce index ({i},{j}) out of range for a frame of {n}"
            )));
        }
        let p = |idx: usize, k: usize| &self.projections[idx - 1][k];
        if i == 0 && j == 0 {
            let mut acc = LinearOp::identity(&self.space);
            for t in 1..=n {
                acc = acc.compose(p(t, 0))?;
            }
            Ok(acc)
        } else if i == 0 {
            let mut acc = p(j, 1).clone();
            for t in 1..=n {
                if t != j {
                    acc = acc.compose(p(t, 0))?;
                }
            }
            Ok(acc)
        } else if i == j {
            Ok(p(i, 2).clone())
        } else {
            p(i, 1).compose(p(j, 1))
        }
    }
}

/// Joint Peirce projection `P_ij(e₁,…,e_n)` for `0 ≤ i ≤ j ≤ n`, with the
/// convention that index 0 denotes the joint annihilator slot.
pub fn joint_peirce_projection(frame: &Frame, i: usize, j: usize) -> Result<LinearOp> {
    PeirceSystem::new(frame)?.joint(i, j)
}

/// Rank of a space: the sum of its factor ranks.
pub fn rank_of(space: &TripleSpace) -> usize {
    space.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{random_element, Element};
    use crate::triple::box_operator;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn matrix_space(rows: usize, cols: usize) -> TripleSpace {
        TripleSpace::new(vec![FactorKind::Rect { rows, cols }]).unwrap()
    }

    fn matrix_unit(space: &TripleSpace, rows: usize, r: usize, col: usize) -> Element {
        let mut e = Element::zero(space);
        e.coords_mut()[col * rows + r] = c(1.0, 0.0);
        e
    }

    #[test]
    fn tripotent_examples_on_disc() {
        let space = TripleSpace::disc();
        let one = Element::from_coords(&space, CVec::from_vec(vec![c(1.0, 0.0)])).unwrap();
        let half = Element::from_coords(&space, CVec::from_vec(vec![c(0.5, 0.0)])).unwrap();
        assert!(is_tripotent(&one, 1e-12));
        assert!(!is_tripotent(&half, 1e-12));
    }

    #[test]
    fn partial_isometries_are_tripotents() {
        let space = matrix_space(2, 2);
        // u = E11 + E22 is a unitary, hence a (maximal) tripotent
        let u = &matrix_unit(&space, 2, 0, 0) + &matrix_unit(&space, 2, 1, 1);
        assert!(is_tripotent(&u, 1e-12));
        let t = Tripotent::new(u, 1e-10).unwrap();
        assert!(!t.is_minimal());
        let e11 = Tripotent::new(matrix_unit(&space, 2, 0, 0), 1e-10).unwrap();
        assert!(e11.is_minimal());
    }

    #[test]
    fn orthogonality_examples() {
        let space = matrix_space(2, 2);
        let e11 = matrix_unit(&space, 2, 0, 0);
        let e12 = matrix_unit(&space, 2, 0, 1);
        let e22 = matrix_unit(&space, 2, 1, 1);
        // disjoint rows and columns: orthogonal
        assert!(are_orthogonal(&e11, &e22, 1e-10).unwrap());
        // shared row: not orthogonal
        assert!(!are_orthogonal(&e11, &e12, 1e-10).unwrap());
        // zero is orthogonal to anything
        assert!(are_orthogonal(&e11, &Element::zero(&space), 1e-10).unwrap());
    }

    #[test]
    fn disc_polar_decomposition() {
        let space = TripleSpace::disc();
        let theta = 0.83f64;
        let z = Element::from_coords(
            &space,
            CVec::from_vec(vec![c(0.8 * theta.cos(), 0.8 * theta.sin())]),
        )
        .unwrap();
        let d = spectral_decompose(&z).unwrap();
        assert_eq!(d.pairs().len(), 1);
        assert!((d.pairs()[0].0 - 0.8).abs() < 1e-14);
        let e = d.pairs()[0].1.element().coords()[0];
        assert!((e - c(theta.cos(), theta.sin())).norm() < 1e-14);
    }

    #[test]
    fn rect_diagonal_svd_oracle() {
        let space = matrix_space(2, 2);
        let z = &matrix_unit(&space, 2, 0, 0).scale_re(0.9)
            + &matrix_unit(&space, 2, 1, 1).scale_re(0.4);
        let d = spectral_decompose(&z).unwrap();
        let alphas = d.coefficients();
        assert!((alphas[0] - 0.9).abs() < 1e-14);
        assert!((alphas[1] - 0.4).abs() < 1e-14);
        d.validate(1e-10).unwrap();
    }

    #[test]
    fn decomposition_validates_on_all_kinds() {
        for kind in [
            FactorKind::Rect { rows: 3, cols: 2 },
            FactorKind::Rect { rows: 4, cols: 4 },
            FactorKind::Sym { n: 3 },
            FactorKind::Antisym { n: 4 },
            FactorKind::Antisym { n: 5 },
            FactorKind::Spin { n: 3 },
            FactorKind::Spin { n: 6 },
        ] {
            let space = TripleSpace::new(vec![kind]).unwrap();
            for seed in 0..200u64 {
                let z = random_element(&space, 1000 + seed, 0.95);
                let d = spectral_decompose(&z).unwrap();
                d.validate(1e-8)
                    .unwrap_or_else(|e| panic!("{kind:?} seed {seed}: {e}"));
                assert!(d.pairs().iter().all(|p| p.1.is_minimal()));
                assert!(d.pairs().len() <= kind.rank());
            }
        }
    }

    #[test]
    fn coarse_route_agrees_with_factor_route() {
        for kind in [
            FactorKind::Rect { rows: 2, cols: 2 },
            FactorKind::Sym { n: 3 },
            FactorKind::Spin { n: 5 },
        ] {
            let space = TripleSpace::new(vec![kind]).unwrap();
            for seed in 0..10u64 {
                let z = random_element(&space, 400 + seed, 0.9);
                let coarse = spectral_decompose_coarse(&z).unwrap();
                assert!((&coarse.reconstruct() - &z).jb_norm() < 1e-7);
                let refined = refine_to_minimal_frame(&coarse).unwrap();
                refined.validate(1e-6).unwrap();
                // coefficient multisets agree with the direct factor route
                let direct = spectral_decompose(&z).unwrap();
                let mut a = refined.coefficients();
                let mut b = direct.coefficients();
                a.sort_by(|x, y| y.partial_cmp(x).unwrap());
                b.sort_by(|x, y| y.partial_cmp(x).unwrap());
                assert_eq!(a.len(), b.len(), "{kind:?} seed {seed}");
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-6, "{kind:?} seed {seed}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn refine_splits_the_identity() {
        let space = matrix_space(2, 2);
        let id = &matrix_unit(&space, 2, 0, 0) + &matrix_unit(&space, 2, 1, 1);
        let t = Tripotent::new(id.clone(), 1e-10).unwrap();
        let d = SpectralDecomp::assemble(id, vec![(1.0, t)]);
        let refined = refine_to_minimal_frame(&d).unwrap();
        assert_eq!(refined.pairs().len(), 2);
        assert!(refined.pairs().iter().all(|p| p.1.is_minimal()));
        assert!((refined.pairs()[0].0 - 1.0).abs() < 1e-12);
        assert!((refined.pairs()[1].0 - 1.0).abs() < 1e-12);
        refined.validate(1e-9).unwrap();
        // an already minimal decomposition is unchanged
        let space2 = TripleSpace::disc();
        let z = Element::from_coords(&space2, CVec::from_vec(vec![c(0.5, 0.0)])).unwrap();
        let d2 = spectral_decompose(&z).unwrap();
        let r2 = refine_to_minimal_frame(&d2).unwrap();
        assert_eq!(r2.pairs().len(), d2.pairs().len());
    }

    #[test]
    fn spin_maximal_tripotent_splits_evenly() {
        let space = TripleSpace::new(vec![FactorKind::Spin { n: 3 }]).unwrap();
        let z = Element::from_coords(
            &space,
            CVec::from_vec(vec![c(std::f64::consts::SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
        )
        .unwrap();
        let d = spectral_decompose(&z).unwrap();
        assert_eq!(d.pairs().len(), 2);
        assert!((d.pairs()[0].0 - 1.0).abs() < 1e-12);
        assert!((d.pairs()[1].0 - 1.0).abs() < 1e-12);
        d.validate(1e-10).unwrap();
    }

    #[test]
    fn peirce_projection_examples() {
        // disc, e = 1: P2 = id, P1 = P0 = 0
        let disc = TripleSpace::disc();
        let one = Tripotent::new(
            Element::from_coords(&disc, CVec::from_vec(vec![c(1.0, 0.0)])).unwrap(),
            1e-10,
        )
        .unwrap();
        let p2 = peirce_projection(&one, 2).unwrap();
        let p1 = peirce_projection(&one, 1).unwrap();
        let p0 = peirce_projection(&one, 0).unwrap();
        assert!(p2.sub(&LinearOp::identity(&disc)).unwrap().euclid_norm() < 1e-12);
        assert!(p1.euclid_norm() < 1e-12);
        assert!(p0.euclid_norm() < 1e-12);

        // e = 0: P0 = id
        let zero = Tripotent::new(Element::zero(&disc), 1e-10).unwrap();
        let p0z = peirce_projection(&zero, 0).unwrap();
        assert!(p0z.sub(&LinearOp::identity(&disc)).unwrap().euclid_norm() < 1e-12);

        // Rect(2,2), e = E11: eigenvalues of e□e are 1, 1/2, 1/2, 0
        let space = matrix_space(2, 2);
        let e11 = Tripotent::new(matrix_unit(&space, 2, 0, 0), 1e-10).unwrap();
        let l = box_operator(e11.element(), e11.element()).unwrap();
        let (mut vals, _) = crate::linalg::hermitian_eigen(l.matrix());
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let expected = [1.0, 0.5, 0.5, 0.0];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 1e-12);
        }
        // P2 picks E11, P1 spans {E12, E21}, P0 spans {E22}
        let p2 = peirce_projection(&e11, 2).unwrap();
        let p1 = peirce_projection(&e11, 1).unwrap();
        let p0 = peirce_projection(&e11, 0).unwrap();
        let e12 = matrix_unit(&space, 2, 0, 1);
        let e21 = matrix_unit(&space, 2, 1, 0);
        let e22 = matrix_unit(&space, 2, 1, 1);
        assert!((&p2.apply(e11.element()).unwrap() - e11.element()).jb_norm() < 1e-12);
        assert!(p2.apply(&e12).unwrap().jb_norm() < 1e-12);
        assert!((&p1.apply(&e12).unwrap() - &e12).jb_norm() < 1e-12);
        assert!((&p1.apply(&e21).unwrap() - &e21).jb_norm() < 1e-12);
        assert!(p1.apply(&e22).unwrap().jb_norm() < 1e-12);
        assert!((&p0.apply(&e22).unwrap() - &e22).jb_norm() < 1e-12);
        assert!(p0.apply(e11.element()).unwrap().jb_norm() < 1e-12);
    }

    #[test]
    fn joint_peirce_on_rect22_frame() {
        let space = matrix_space(2, 2);
        let e1 = Tripotent::new(matrix_unit(&space, 2, 0, 0), 1e-10).unwrap();
        let e2 = Tripotent::new(matrix_unit(&space, 2, 1, 1), 1e-10).unwrap();
        let frame = Frame::new(vec![e1, e2]).unwrap();
        // P12 spans {E12, E21}; P00 = 0
        let p12 = joint_peirce_projection(&frame, 1, 2).unwrap();
        let e12 = matrix_unit(&space, 2, 0, 1);
        assert!((&p12.apply(&e12).unwrap() - &e12).jb_norm() < 1e-12);
        let p00 = joint_peirce_projection(&frame, 0, 0).unwrap();
        assert!(p00.euclid_norm() < 1e-12);
        // single-tripotent wrappers: P11 = P2, P10 = P1, P00 = P0
        let sub = Frame::new(vec![frame.tripotents()[0].clone()]).unwrap();
        let p11 = joint_peirce_projection(&sub, 1, 1).unwrap();
        let p2 = peirce_projection(&frame.tripotents()[0], 2).unwrap();
        assert!(p11.sub(&p2).unwrap().euclid_norm() < 1e-12);
        let p01 = joint_peirce_projection(&sub, 0, 1).unwrap();
        let p1 = peirce_projection(&frame.tripotents()[0], 1).unwrap();
        assert!(p01.sub(&p1).unwrap().euclid_norm() < 1e-12);
    }

    #[test]
    fn decomposition_json_records() {
        let space = TripleSpace::new(vec![FactorKind::Spin { n: 4 }]).unwrap();
        let z = random_element(&space, 5, 0.8);
        let d = spectral_decompose(&z).unwrap();
        let text = d.to_json();
        let back = SpectralDecomp::from_json(&text).unwrap();
        assert_eq!(back.coefficients(), d.coefficients());
        assert!((&back.reconstruct() - &z).jb_norm() < 1e-10);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of(&TripleSpace::disc()), 1);
        assert_eq!(
            rank_of(&TripleSpace::new(vec![FactorKind::Spin { n: 7 }]).unwrap()),
            2
        );
        assert_eq!(rank_of(&matrix_space(3, 2)), 2);
    }

    #[test]
    fn rank_one_matrix_orthogonality_matches_vector_orthogonality() {
        // e_i = a_i ⊗ b_i are triple orthogonal iff a_1 ⊥ a_2 and b_1 ⊥ b_2
        let space = matrix_space(3, 3);
        let mk = |a: [C64; 3], b: [C64; 3]| {
            let mut m = CMat::zeros(3, 3);
            for r in 0..3 {
                for cidx in 0..3 {
                    m[(r, cidx)] = b[r] * a[cidx].conj();
                }
            }
            Element::from_matrix(&space, 0, &m).unwrap()
        };
        let a1 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let a2 = [c(0.0, 0.0), c(0.7, 0.1), c(0.0, 0.4)];
        let b1 = [c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)];
        let b2 = [c(0.0, 0.0), c(0.3, -0.2), c(0.5, 0.0)];
        let e1 = mk(a1, b1);
        let e2 = mk(a2, b2);
        assert!(are_orthogonal(&e1, &e2, 1e-10).unwrap());
        // shared column vector: not orthogonal
        let e3 = mk(a1, b2);
        assert!(!are_orthogonal(&e1, &e3, 1e-8).unwrap());
    }
}
