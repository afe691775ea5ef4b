//! Triple spaces and their elements.
//!
//! A [`TripleSpace`] is a finite ℓ∞ direct sum of finite-rank Cartan factors
//! of types I–IV. Elements are stored as one flat complex coordinate vector,
//! one block per factor, in the following canonical bases:
//!
//! * `Rect(s, r)`: the `s×r` matrix entries in column-major order
//!   (basis: matrix units `E_ij`).
//! * `Sym(n)`: packed upper triangle, pairs `(i, j)` with `i ≤ j` ordered by
//!   `(j, i)`; basis `E_ii` on the diagonal and `(E_ij + E_ji)/√2` off it.
//! * `Antisym(n)`: packed strict upper triangle, same ordering; basis
//!   `(E_ij − E_ji)/√2`.
//! * `Spin(n)`: the `n` coordinates of ℂⁿ with the standard inner product
//!   and componentwise conjugation.
//!
//! The packed bases are orthonormal for the Hilbert–Schmidt inner product, so
//! the flat coordinate vector carries that inner product verbatim, and the
//! symmetry class of a Sym/Antisym element holds exactly by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CartanError, Result};
use crate::linalg::{sigma_max, C64, CMat, CVec};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// One Cartan factor of a triple space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorKind {
    /// Type I: `s×r` complex matrices, the operators ℂʳ → ℂˢ.
    Rect { rows: usize, cols: usize },
    /// Type III: symmetric `n×n` complex matrices.
    Sym { n: usize },
    /// Type II: antisymmetric `n×n` complex matrices.
    Antisym { n: usize },
    /// Type IV: spin factor on ℂⁿ.
    Spin { n: usize },
}

impl FactorKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FactorKind::Rect { rows, cols } if rows >= 1 && cols >= 1 => Ok(()),
            FactorKind::Sym { n } if n >= 1 => Ok(()),
            FactorKind::Antisym { n } if n >= 4 => Ok(()),
            FactorKind::Spin { n } if n >= 3 => Ok(()),
            _ => Err(CartanError::InvalidArgument(format!(
                "factor dimensions out of range: {self:?}"
            ))),
        }
    }

    /// Ambient coordinate dimension of the factor.
    pub fn dim(&self) -> usize {
        match *self {
            FactorKind::Rect { rows, cols } => rows * cols,
            FactorKind::Sym { n } => n * (n + 1) / 2,
            FactorKind::Antisym { n } => n * (n - 1) / 2,
            FactorKind::Spin { n } => n,
        }
    }

    /// Rank of the factor: the length of a maximal orthogonal family of
    /// minimal tripotents.
    pub fn rank(&self) -> usize {
        match *self {
            FactorKind::Rect { rows, cols } => rows.min(cols),
            FactorKind::Sym { n } => n,
            FactorKind::Antisym { n } => n / 2,
            FactorKind::Spin { .. } => 2,
        }
    }

    pub fn is_matrix(&self) -> bool {
        !matches!(self, FactorKind::Spin { .. })
    }
}

/// A finite ℓ∞ direct sum of Cartan factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct TripleSpace {
    factors: Vec<FactorKind>,
    offsets: Vec<usize>,
    total_dim: usize,
    rank: usize,
}

#[derive(Serialize, Deserialize, Clone)]
struct SpaceRepr {
    factors: Vec<FactorKind>,
}

impl TryFrom<SpaceRepr> for TripleSpace {
    type Error = CartanError;
    fn try_from(r: SpaceRepr) -> Result<Self> {
        TripleSpace::new(r.factors)
    }
}

impl From<TripleSpace> for SpaceRepr {
    fn from(s: TripleSpace) -> Self {
        SpaceRepr { factors: s.factors }
    }
}

impl TripleSpace {
    pub fn new(factors: Vec<FactorKind>) -> Result<Self> {
        if factors.is_empty() {
            return Err(CartanError::InvalidArgument(
                "a triple space needs at least one factor".into(),
            ));
        }
        for f in &factors {
            f.validate()?;
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut total = 0usize;
        for f in &factors {
            offsets.push(total);
            total += f.dim();
        }
        let rank = factors.iter().map(FactorKind::rank).sum();
        Ok(TripleSpace {
            factors,
            offsets,
            total_dim: total,
            rank,
        })
    }

    /// The unit disc: 1×1 matrices.
    pub fn disc() -> Self {
        TripleSpace::new(vec![FactorKind::Rect { rows: 1, cols: 1 }]).unwrap()
    }

    /// ℓ∞ sum of `n` discs.
    pub fn polydisc(n: usize) -> Result<Self> {
        TripleSpace::new(vec![FactorKind::Rect { rows: 1, cols: 1 }; n])
    }

    pub fn single(factor: FactorKind) -> Result<Self> {
        TripleSpace::new(vec![factor])
    }

    pub fn factors(&self) -> &[FactorKind] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Sum of the factor ranks.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Coordinate range of factor `i`.
    pub fn factor_range(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.offsets[i];
        start..start + self.factors[i].dim()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("space serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CartanError::InvalidArgument(e.to_string()))
    }
}

/// A point of a triple space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct Element {
    space: TripleSpace,
    coords: CVec,
}

#[derive(Serialize, Deserialize, Clone)]
struct ElementRepr {
    space: TripleSpace,
    /// Interleaved re/im pairs, length `2 * total_dim`.
    coords: Vec<f64>,
}

impl TryFrom<ElementRepr> for Element {
    type Error = CartanError;
    fn try_from(r: ElementRepr) -> Result<Self> {
        if r.coords.len() != 2 * r.space.total_dim() {
            return Err(CartanError::InvalidArgument(format!(
                "coordinate array has length {}, expected {}",
                r.coords.len(),
                2 * r.space.total_dim()
            )));
        }
        let coords = CVec::from_iterator(
            r.space.total_dim(),
            r.coords.chunks_exact(2).map(|p| C64::new(p[0], p[1])),
        );
        Ok(Element {
            space: r.space,
            coords,
        })
    }
}

impl From<Element> for ElementRepr {
    fn from(e: Element) -> Self {
        let coords = e.coords.iter().flat_map(|z| [z.re, z.im]).collect();
        ElementRepr {
            space: e.space,
            coords,
        }
    }
}

impl Element {
    pub fn zero(space: &TripleSpace) -> Self {
        Element {
            space: space.clone(),
            coords: CVec::zeros(space.total_dim()),
        }
    }

    pub fn from_coords(space: &TripleSpace, coords: CVec) -> Result<Self> {
        if coords.len() != space.total_dim() {
            return Err(CartanError::InvalidArgument(format!(
                "coordinate vector has length {}, expected {}",
                coords.len(),
                space.total_dim()
            )));
        }
        Ok(Element {
            space: space.clone(),
            coords,
        })
    }

    /// Build an element of a single-factor matrix space from a full matrix.
    ///
    /// Sym/Antisym inputs are checked against their symmetry class
    /// (tolerance `1e-12` relative) and then projected onto it exactly.
    pub fn from_matrix(space: &TripleSpace, factor: usize, m: &CMat) -> Result<Self> {
        let mut e = Element::zero(space);
        e.set_factor_matrix(factor, m)?;
        Ok(e)
    }

    pub fn space(&self) -> &TripleSpace {
        &self.space
    }

    pub fn coords(&self) -> &CVec {
        &self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut CVec {
        &mut self.coords
    }

    pub fn same_space(&self, other: &Element) -> bool {
        self.space == other.space
    }

    pub(crate) fn check_same_space(&self, other: &Element, what: &str) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(CartanError::SpaceMismatch(format!(
                "{what}: operands live in different spaces"
            )))
        }
    }

    pub fn factor_coords(&self, i: usize) -> &[C64] {
        &self.coords.as_slice()[self.space.factor_range(i)]
    }

    /// Unpack factor `i` into a dense matrix (matrix factors only).
    pub fn factor_matrix(&self, i: usize) -> Result<CMat> {
        let kind = self.space.factors()[i];
        let slice = self.factor_coords(i);
        unpack_matrix(kind, slice)
    }

    /// Overwrite factor `i` from a dense matrix, validating the symmetry class.
    pub fn set_factor_matrix(&mut self, i: usize, m: &CMat) -> Result<()> {
        let kind = self.space.factors()[i];
        let packed = pack_matrix(kind, m)?;
        let range = self.space.factor_range(i);
        for (k, v) in packed.into_iter().enumerate() {
            self.coords[range.start + k] = v;
        }
        Ok(())
    }

    /// Standard (Hilbert–Schmidt) inner product of the coordinate vectors.
    pub fn inner(&self, other: &Element) -> C64 {
        debug_assert!(self.same_space(other));
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// The JB*-triple norm: per matrix factor the largest singular value, per
    /// spin factor the spectral norm of the spin decomposition, and the max
    /// over direct summands.
    pub fn jb_norm(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.space.factors().len() {
            let kind = self.space.factors()[i];
            let slice = self.factor_coords(i);
            let n = match kind {
                FactorKind::Spin { .. } => spin_norm(slice),
                _ => sigma_max(&unpack_matrix(kind, slice).expect("matrix factor")),
            };
            best = best.max(n);
        }
        best
    }

    pub fn scale(&self, s: C64) -> Element {
        Element {
            space: self.space.clone(),
            coords: self.coords.clone() * s,
        }
    }

    pub fn scale_re(&self, s: f64) -> Element {
        self.scale(C64::new(s, 0.0))
    }

    /// Rescale so that `jb_norm` equals `target` (zero stays zero).
    pub fn rescale_to_norm(&self, target: f64) -> Element {
        let n = self.jb_norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale_re(target / n)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("element serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CartanError::InvalidArgument(e.to_string()))
    }
}

impl std::ops::Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert!(self.same_space(rhs), "element addition across spaces");
        Element {
            space: self.space.clone(),
            coords: &self.coords + &rhs.coords,
        }
    }
}

impl std::ops::Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        assert!(self.same_space(rhs), "element subtraction across spaces");
        Element {
            space: self.space.clone(),
            coords: &self.coords - &rhs.coords,
        }
    }
}

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale_re(-1.0)
    }
}

/// Iterate the packed index pairs of a Sym factor: `(i, j)` with `i ≤ j`.
pub(crate) fn sym_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| (0..=j).map(move |i| (i, j)))
}

/// Iterate the packed index pairs of an Antisym factor: `(i, j)` with `i < j`.
pub(crate) fn antisym_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| (0..j).map(move |i| (i, j)))
}

/// Unpack factor coordinates into a dense matrix.
pub(crate) fn unpack_matrix(kind: FactorKind, slice: &[C64]) -> Result<CMat> {
    match kind {
        FactorKind::Rect { rows, cols } => Ok(CMat::from_column_slice(rows, cols, slice)),
        FactorKind::Sym { n } => {
            let mut m = CMat::zeros(n, n);
            for (k, (i, j)) in sym_pairs(n).enumerate() {
                if i == j {
                    m[(i, i)] = slice[k];
                } else {
                    let v = slice[k] / C64::new(SQRT_2, 0.0);
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            Ok(m)
        }
        FactorKind::Antisym { n } => {
            let mut m = CMat::zeros(n, n);
            for (k, (i, j)) in antisym_pairs(n).enumerate() {
                let v = slice[k] / C64::new(SQRT_2, 0.0);
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
            Ok(m)
        }
        FactorKind::Spin { .. } => Err(CartanError::Unsupported(
            "spin factors have no matrix form".into(),
        )),
    }
}

/// Pack a dense matrix into factor coordinates, validating the symmetry class.
pub(crate) fn pack_matrix(kind: FactorKind, m: &CMat) -> Result<Vec<C64>> {
    let dims_ok = |r: usize, c: usize| m.nrows() == r && m.ncols() == c;
    match kind {
        FactorKind::Rect { rows, cols } => {
            if !dims_ok(rows, cols) {
                return Err(CartanError::InvalidArgument("matrix shape mismatch".into()));
            }
            Ok(m.as_slice().to_vec())
        }
        FactorKind::Sym { n } => {
            if !dims_ok(n, n) {
                return Err(CartanError::InvalidArgument("matrix shape mismatch".into()));
            }
            check_symmetry(m, 1.0)?;
            Ok(sym_pairs(n)
                .map(|(i, j)| {
                    if i == j {
                        m[(i, i)]
                    } else {
                        (m[(i, j)] + m[(j, i)]) * C64::new(SQRT_2 / 2.0, 0.0)
                    }
                })
                .collect())
        }
        FactorKind::Antisym { n } => {
            if !dims_ok(n, n) {
                return Err(CartanError::InvalidArgument("matrix shape mismatch".into()));
            }
            check_symmetry(m, -1.0)?;
            Ok(antisym_pairs(n)
                .map(|(i, j)| (m[(i, j)] - m[(j, i)]) * C64::new(SQRT_2 / 2.0, 0.0))
                .collect())
        }
        FactorKind::Spin { .. } => Err(CartanError::Unsupported(
            "spin factors have no matrix form".into(),
        )),
    }
}

/// Pack the orthogonal projection of `m` onto the factor's symmetry class,
/// without validating that `m` already lies in it.
pub(crate) fn pack_projected(kind: FactorKind, m: &CMat) -> Vec<C64> {
    match kind {
        FactorKind::Rect { .. } => m.as_slice().to_vec(),
        FactorKind::Sym { n } => sym_pairs(n)
            .map(|(i, j)| {
                if i == j {
                    m[(i, i)]
                } else {
                    (m[(i, j)] + m[(j, i)]) * C64::new(SQRT_2 / 2.0, 0.0)
                }
            })
            .collect(),
        FactorKind::Antisym { n } => antisym_pairs(n)
            .map(|(i, j)| (m[(i, j)] - m[(j, i)]) * C64::new(SQRT_2 / 2.0, 0.0))
            .collect(),
        FactorKind::Spin { .. } => unreachable!("spin factors have no matrix form"),
    }
}

fn check_symmetry(m: &CMat, sign: f64) -> Result<()> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].scale(sign)).norm();
            if d > 1e-12 * scale {
                return Err(CartanError::Validation(format!(
                    "matrix violates its symmetry class at ({i},{j}) by {d:.3e}"
                )));
            }
        }
    }
    Ok(())
}

/// Spin factor norm: with `s = ⟨z,z⟩` and `q = Σ zᵢ²`,
/// `‖z‖² = (s + √(s² − |q|²))/2`.
///
/// This is the unique norm for which the spin triple product satisfies
/// `‖z□z‖ = ‖z‖²`; the axiom suite pins it down. Evaluated through the phase
/// split `e^{-i·arg(q)/2} z = u + iv` (which makes `u ⊥ v`) as
/// `(‖u‖ + ‖v‖)/√2`, avoiding the cancellation in `s² − |q|²` near the
/// degenerate points where the two spectral coefficients coincide.
pub(crate) fn spin_norm(slice: &[C64]) -> f64 {
    let q: C64 = slice.iter().map(|z| z * z).sum();
    let phi = if q.norm() > 0.0 { q.arg() } else { 0.0 };
    let rot = C64::new(0.0, -phi / 2.0).exp();
    let mut a2 = 0.0f64;
    let mut b2 = 0.0f64;
    for z in slice {
        let w = z * rot;
        a2 += w.re * w.re;
        b2 += w.im * w.im;
    }
    (a2.sqrt() + b2.sqrt()) * std::f64::consts::FRAC_1_SQRT_2
}

/// Componentwise conjugation on spaces all of whose factors are spin factors.
pub fn spin_conjugate(z: &Element) -> Result<Element> {
    if let Some(k) = z.space().factors().iter().find(|k| !matches!(k, FactorKind::Spin { .. })) {
        return Err(CartanError::Unsupported(format!(
            "spin conjugation is only defined on spin factors, found {k:?}"
        )));
    }
    let coords = CVec::from_iterator(z.coords().len(), z.coords().iter().map(|c| c.conj()));
    Element::from_coords(z.space(), coords)
}

/// Deterministic pseudo-random element with `jb_norm ≤ radius`.
pub fn random_element(space: &TripleSpace, seed: u64, radius: f64) -> Element {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element_with(space, &mut rng, radius)
}

pub fn random_element_with(space: &TripleSpace, rng: &mut ChaCha8Rng, radius: f64) -> Element {
    let coords = CVec::from_iterator(
        space.total_dim(),
        (0..space.total_dim()).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)),
    );
    let raw = Element {
        space: space.clone(),
        coords,
    };
    let n = raw.jb_norm();
    if radius == 0.0 || n == 0.0 {
        return Element::zero(space);
    }
    let t: f64 = rng.random();
    raw.scale_re(radius * t / n)
}

/// Embed an element of the `index`-th factor into the direct sum.
pub fn inject_summand(space: &TripleSpace, index: usize, part: &Element) -> Result<Element> {
    if index >= space.factors().len() {
        return Err(CartanError::InvalidArgument(format!(
            "summand index {index} out of range"
        )));
    }
    let expected = TripleSpace::single(space.factors()[index])?;
    if part.space() != &expected {
        return Err(CartanError::SpaceMismatch(
            "inject_summand: element does not match the target factor".into(),
        ));
    }
    let mut out = Element::zero(space);
    let range = space.factor_range(index);
    for (k, v) in part.coords().iter().enumerate() {
        out.coords[range.start + k] = *v;
    }
    Ok(out)
}

/// Extract the `index`-th factor as an element of the single-factor space.
pub fn project_summand(z: &Element, index: usize) -> Result<Element> {
    if index >= z.space().factors().len() {
        return Err(CartanError::InvalidArgument(format!(
            "summand index {index} out of range"
        )));
    }
    let single = TripleSpace::single(z.space().factors()[index])?;
    let coords = CVec::from_column_slice(z.factor_coords(index));
    Element::from_coords(&single, coords)
}
