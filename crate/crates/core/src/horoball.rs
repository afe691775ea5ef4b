//! Invariant domains and horoballs at a boundary point.
//!
//! Given a sequence `z_k → ξ ∈ ∂D`, the function
//! `F(x) = limsup_k (1−‖z_k‖²)/(1−‖g₋zₖ(x)‖²)` cuts out the invariant
//! domains `H(ξ,λ) = {F < 1/λ}`. In finite rank these coincide with explicit
//! horoballs: with the limit frame `{e_j}` and the boundary-speed ratios
//! `σ_j = limsup (1−‖z_k‖²)/(1−α_{jk}²)`,
//!
//! `S₀(ξ,λ) = Σ_j σ_jλ/(1+σ_jλ) e_j + B(Σ_j √(σ_jλ/(1+σ_jλ)) e_j, ·)^{1/2}(D)`,
//!
//! an affine image of the ball. Membership on either description is computed
//! here, along with the σ/frame extraction and the radial non-emptiness bound.
//!
//! `F` is evaluated through the norm identity
//! `(1−‖z‖²)/(1−‖g₋z(x)‖²) = ‖B(x,x)^{-1/2}B(x,z)B(z,z)^{-1/2}‖(1−‖z‖²)`.
//! On matrix factors that composition is the two-sided multiplication
//! `E ↦ S_L E S_R` with
//! `S_L = (1−xx*)^{-1/2}(1−xz*)(1−zz*)^{-1/2}` and
//! `S_R = (1−z*z)^{-1/2}(1−z*x)(1−x*x)^{-1/2}`,
//! whose triple operator norm is `σ₁(S_L)σ₁(S_R)` (`σ₁(S_L)σ₂(S_L)` on
//! antisymmetric factors, where the unit ball is thinner); spin blocks go
//! through the generic norm search.

use crate::bergmann::bergmann_power_of_decomp;
use crate::error::{CartanError, Result};
use crate::linalg::{self, C64, CMat};
use crate::operator::{LinearOp, NormEstimator};
use crate::space::{unpack_matrix, Element, FactorKind, TripleSpace};
use crate::spectral::{spectral_decompose, Frame, SpectralDecomp, Tripotent};
use crate::triple::factor_triple;

/// Number of tail points over which limsup quantities are estimated.
pub const TAIL_LEN: usize = 10;
/// Spread threshold above which a tail estimate is flagged as not converged.
pub const TAIL_SPREAD_TOL: f64 = 1e-4;
/// Default strict-membership margin for the invariant domain test.
pub const MEMBERSHIP_MARGIN: f64 = 1e-9;
/// A coordinate belongs to the boundary frame when its limit coefficient is
/// within this distance of 1.
const XI_COORD_TOL: f64 = 1e-3;
/// Window inside which the raw max of the σ estimates is snapped to 1.
const SIGMA_SNAP_TOL: f64 = 1e-3;
/// Minimum number of points for limsup estimation.
pub const MIN_POINTS: usize = 20;

/// Per-factor data for fast evaluation of the gab norm against a fixed point.
#[derive(Debug, Clone)]
enum FactorCache {
    Matrix {
        /// the unpacked factor component
        m: CMat,
        /// `(1 − m m*)^{-1/2}`
        left: CMat,
        /// `(1 − m* m)^{-1/2}`
        right: CMat,
    },
    Spin {
        coords: Vec<C64>,
        /// dense spin block of `B(z,z)^{-1/2}`
        inv_sqrt: CMat,
    },
}

/// Cached per-factor matrices for one interior point.
#[derive(Debug, Clone)]
pub struct GabPoint {
    factors: Vec<FactorCache>,
}

impl GabPoint {
    pub fn new(z: &Element) -> Result<Self> {
        let space = z.space();
        let mut factors = Vec::with_capacity(space.factors().len());
        for i in 0..space.factors().len() {
            let kind = space.factors()[i];
            let slice = z.factor_coords(i);
            match kind {
                FactorKind::Spin { n } => {
                    // the dense Hermitian route cannot resolve the smallest
                    // eigenvalue (1-‖z‖²)² near the boundary; the joint-grid
                    // form with weights 1/(1-λ²) stays well conditioned
                    let single = TripleSpace::single(FactorKind::Spin { n })?;
                    let zf = Element::from_coords(
                        &single,
                        crate::linalg::CVec::from_column_slice(slice),
                    )?;
                    let d = spectral_decompose(&zf)?;
                    let inv_sqrt = bergmann_power_of_decomp(&d, -0.5)?.matrix().clone();
                    factors.push(FactorCache::Spin {
                        coords: slice.to_vec(),
                        inv_sqrt,
                    });
                }
                _ => {
                    let m = unpack_matrix(kind, slice)?;
                    let mmh = &m * m.adjoint();
                    let mhm = m.adjoint() * &m;
                    let left = inv_sqrt_of_one_minus(&mmh)?;
                    let right = inv_sqrt_of_one_minus(&mhm)?;
                    factors.push(FactorCache::Matrix { m, left, right });
                }
            }
        }
        Ok(GabPoint { factors })
    }
}

fn inv_sqrt_of_one_minus(h: &CMat) -> Result<CMat> {
    let n = h.nrows();
    let one_minus = CMat::identity(n, n) - h;
    linalg::hermitian_matrix_function(&one_minus, |x| x.powf(-0.5))
}

/// Dense spin block of `B(a,b)` (column by column through the spin triple).
fn spin_bergmann_block(a: &[C64], b: &[C64], n: usize) -> Result<CMat> {
    let kind = FactorKind::Spin { n };
    let mut out = CMat::zeros(n, n);
    let mut basis = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        basis[k] = C64::new(1.0, 0.0);
        let t1 = factor_triple(kind, a, b, &basis)?;
        let inner = factor_triple(kind, b, &basis, b)?;
        let t2 = factor_triple(kind, a, &inner, a)?;
        for r in 0..n {
            let e = if r == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            out[(r, k)] = e - 2.0 * t1[r] + t2[r];
        }
        basis[k] = C64::new(0.0, 0.0);
    }
    Ok(out)
}

/// `‖B(x,x)^{-1/2} B(x,z) B(z,z)^{-1/2}‖` in the triple operator norm, from
/// the cached per-factor data: exact on matrix factors, norm search on spin
/// blocks.
pub fn gab_norm_cached(
    x: &GabPoint,
    z: &GabPoint,
    space: &TripleSpace,
    cfg: &NormEstimator,
) -> Result<f64> {
    let mut best: f64 = 0.0;
    for (i, kind) in space.factors().iter().enumerate() {
        let val = match (&x.factors[i], &z.factors[i]) {
            (
                FactorCache::Matrix { m: xm, left: xl, right: xr },
                FactorCache::Matrix { m: zm, left: zl, right: zr },
            ) => {
                let s = xm.nrows();
                let r = xm.ncols();
                let mid_l = CMat::identity(s, s) - xm * zm.adjoint();
                let mid_r = CMat::identity(r, r) - zm.adjoint() * xm;
                let s_l = xl * mid_l * zl;
                let s_r = zr * mid_r * xr;
                match kind {
                    FactorKind::Antisym { .. } => {
                        let sv = linalg::singular_values_desc(&s_l);
                        sv[0] * sv.get(1).copied().unwrap_or(0.0)
                    }
                    _ => linalg::sigma_max(&s_l) * linalg::sigma_max(&s_r),
                }
            }
            (
                FactorCache::Spin { coords: xc, inv_sqrt: xi },
                FactorCache::Spin { coords: zc, inv_sqrt: zi },
            ) => {
                let n = xc.len();
                let mid = spin_bergmann_block(xc, zc, n)?;
                let t = xi * mid * zi;
                let single = TripleSpace::single(FactorKind::Spin { n })?;
                LinearOp::from_matrix(&single, t)?.jb_op_norm_with(cfg, &[])
            }
            _ => unreachable!("factor caches always match the space"),
        };
        best = best.max(val);
    }
    Ok(best)
}

/// A sequence of interior points approaching the boundary, with aligned
/// per-point spectral data and cached tail operators.
#[derive(Debug, Clone)]
pub struct ApproachSequence {
    points: Vec<Element>,
    /// Per point: coefficients aligned to the slot order of the last point.
    aligned_coeffs: Vec<Vec<f64>>,
    /// Slot tripotents from the last (most converged) point.
    slots: Vec<Tripotent>,
    /// Indices of slots whose coefficient tends to 1.
    j_set: Vec<usize>,
    xi: Element,
    /// Index from which `‖z_k − ξ‖` decreases monotonically.
    monotone_from: usize,
    tail: Vec<TailPoint>,
}

#[derive(Debug, Clone)]
struct TailPoint {
    one_minus_norm_sq: f64,
    cache: GabPoint,
}

impl ApproachSequence {
    /// Build the sequence structure: decompose every point, align the frames
    /// across `k` by coordinate overlap, extract ξ, and cache the tail data.
    pub fn new(points: Vec<Element>) -> Result<Self> {
        if points.len() < 2 {
            return Err(CartanError::InvalidArgument(
                "an approach sequence needs at least two points".into(),
            ));
        }
        let space = points[0].space().clone();
        for p in &points {
            if p.space() != &space {
                return Err(CartanError::SpaceMismatch(
                    "approach sequence points live in different spaces".into(),
                ));
            }
            if p.jb_norm() >= 1.0 {
                return Err(CartanError::Domain(
                    "approach sequence points must be interior".into(),
                ));
            }
        }
        let decomps: Vec<SpectralDecomp> = points
            .iter()
            .map(spectral_decompose)
            .collect::<Result<_>>()?;
        // Slot tripotents come from the latest point whose decomposition is a
        // clean orthogonal minimal family. The very last points sit so close
        // to the boundary that their spectral coefficients nearly coincide,
        // which makes the decomposition *vectors* ill-conditioned (the values
        // stay accurate and are tracked for every k below).
        let slots: Vec<Tripotent> = decomps
            .iter()
            .rev()
            .find_map(|d| {
                if d.pairs().is_empty() {
                    return None;
                }
                d.frame()
                    .ok()
                    .map(|f| f.tripotents().to_vec())
            })
            .ok_or_else(|| {
                CartanError::Numerical(
                    "no sequence point yields a clean spectral frame".into(),
                )
            })?;
        let mut aligned_coeffs = Vec::with_capacity(points.len());
        for d in &decomps {
            aligned_coeffs.push(align_coefficients(&slots, d)?);
        }
        // J: slots whose coefficient reaches 1
        let last_coeffs = aligned_coeffs.last().expect("nonempty");
        let j_set: Vec<usize> = (0..slots.len())
            .filter(|&j| last_coeffs[j] >= 1.0 - XI_COORD_TOL)
            .collect();
        if j_set.is_empty() {
            return Err(CartanError::Domain(
                "no coordinate of the sequence approaches the boundary".into(),
            ));
        }
        // ξ: the last point with the boundary coefficients snapped to 1
        let mut xi = Element::zero(&space);
        for (j, slot) in slots.iter().enumerate() {
            let alpha = if j_set.contains(&j) {
                1.0
            } else {
                last_coeffs[j]
            };
            xi = &xi + &slot.element().scale_re(alpha);
        }
        let monotone_from = {
            let dist: Vec<f64> = points.iter().map(|p| (p - &xi).jb_norm()).collect();
            let mut idx = dist.len().saturating_sub(1);
            while idx > 0 && dist[idx - 1] >= dist[idx] {
                idx -= 1;
            }
            idx
        };
        let start = points.len().saturating_sub(TAIL_LEN);
        let mut tail = Vec::new();
        for p in &points[start..] {
            let nk = p.jb_norm();
            tail.push(TailPoint {
                one_minus_norm_sq: 1.0 - nk * nk,
                cache: GabPoint::new(p)?,
            });
        }
        Ok(ApproachSequence {
            points,
            aligned_coeffs,
            slots,
            j_set,
            xi,
            monotone_from,
            tail,
        })
    }

    pub fn points(&self) -> &[Element] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn space(&self) -> &TripleSpace {
        self.points[0].space()
    }

    /// The boundary point the sequence approaches (unit norm within 1e-6).
    pub fn xi(&self) -> &Element {
        &self.xi
    }

    pub fn monotone_from(&self) -> usize {
        self.monotone_from
    }

    /// Aligned spectral coefficients, one row per sequence point.
    pub fn slot_coefficients(&self) -> &[Vec<f64>] {
        &self.aligned_coeffs
    }

    pub fn boundary_slots(&self) -> &[usize] {
        &self.j_set
    }
}

/// Match the tripotents of `d` to the slot tripotents by maximal coordinate
/// overlap (greedy), returning the coefficient carried by each slot.
fn align_coefficients(slots: &[Tripotent], d: &SpectralDecomp) -> Result<Vec<f64>> {
    let n = slots.len();
    let m = d.pairs().len();
    let mut overlap = vec![vec![0.0f64; m]; n];
    for (s, slot) in slots.iter().enumerate() {
        let se = slot.element();
        let sn = se.l2_norm();
        for (t, (_, trip)) in d.pairs().iter().enumerate() {
            let te = trip.element();
            let tn = te.l2_norm().max(1e-300);
            overlap[s][t] = se.inner(te).norm() / (sn * tn);
        }
    }
    let mut coeffs = vec![0.0f64; n];
    let mut used_slot = vec![false; n];
    let mut used_t = vec![false; m];
    for _ in 0..n.min(m) {
        let mut best = (0usize, 0usize, -1.0f64);
        for s in 0..n {
            if used_slot[s] {
                continue;
            }
            for t in 0..m {
                if used_t[t] {
                    continue;
                }
                if overlap[s][t] > best.2 {
                    best = (s, t, overlap[s][t]);
                }
            }
        }
        if best.2 < 0.0 {
            break;
        }
        let (s, t, _) = best;
        used_slot[s] = true;
        used_t[t] = true;
        coeffs[s] = d.pairs()[t].0;
    }
    if m > n && used_t.iter().any(|&u| !u) {
        return Err(CartanError::Numerical(
            "frame alignment failed: a sequence point has more spectral components than the limit frame".into(),
        ));
    }
    Ok(coeffs)
}

/// A tail estimate of a limsup quantity.
#[derive(Debug, Clone, Copy)]
pub struct TailEstimate {
    pub value: f64,
    pub spread: f64,
    pub converged: bool,
}

fn tail_estimate(values: &[f64]) -> TailEstimate {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = max - min;
    TailEstimate {
        value: max,
        spread,
        converged: spread <= TAIL_SPREAD_TOL,
    }
}

/// The horofunction `F(x) = limsup_k (1−‖z_k‖²)/(1−‖g₋zₖ(x)‖²)`, evaluated as
/// `‖B(x,x)^{-1/2}B(x,z_k)B(z_k,z_k)^{-1/2}‖ (1−‖z_k‖²)` over the recorded
/// tail (max of the tail values; the spread is reported alongside).
pub fn horofunction(x: &Element, seq: &ApproachSequence) -> Result<TailEstimate> {
    let xc = GabPoint::new(x)?;
    horofunction_cached(x, &xc, seq)
}

pub(crate) fn horofunction_cached(
    x: &Element,
    xc: &GabPoint,
    seq: &ApproachSequence,
) -> Result<TailEstimate> {
    if x.jb_norm() >= 1.0 {
        return Err(CartanError::Domain("horofunction needs ‖x‖ < 1".into()));
    }
    if seq.len() < MIN_POINTS {
        return Err(CartanError::InvalidArgument(format!(
            "need at least {MIN_POINTS} sequence points, got {}",
            seq.len()
        )));
    }
    let cfg = NormEstimator {
        restarts: 3,
        max_iter: 40,
        fast: true,
        ..NormEstimator::default()
    };
    let space = x.space();
    let mut values = Vec::with_capacity(seq.tail.len());
    for tp in &seq.tail {
        let r = gab_norm_cached(xc, &tp.cache, space, &cfg)?;
        values.push(r * tp.one_minus_norm_sq);
    }
    Ok(tail_estimate(&values))
}

/// Membership in the invariant domain `H(ξ,λ) = {x : F(x) < 1/λ}`, with a
/// strict margin.
pub fn invariant_domain_contains(
    x: &Element,
    seq: &ApproachSequence,
    lambda: f64,
    margin: f64,
) -> Result<bool> {
    if lambda <= 0.0 {
        return Err(CartanError::InvalidArgument("λ must be positive".into()));
    }
    let f = horofunction(x, seq)?;
    Ok(f.value < 1.0 / lambda - margin)
}

/// The frame and σ data extracted from an approach sequence.
#[derive(Debug, Clone)]
pub struct WolffSigmas {
    pub frame: Frame,
    pub sigmas: Vec<f64>,
    /// Per-σ tail spread, for diagnostics.
    pub spreads: Vec<f64>,
    pub converged: bool,
    /// Coefficients of ξ on the full slot list, before the boundary cut.
    pub xi_coefficients: Vec<f64>,
}

/// Estimate `σ_j = limsup_k (1−‖z_k‖²)/(1−α_{jk}²)` over the boundary frame
/// `{e_j : j ∈ J}` and snap `max σ_j` to 1.
pub fn wolff_sigmas(seq: &ApproachSequence) -> Result<WolffSigmas> {
    let n_pts = seq.points.len();
    let start = n_pts.saturating_sub(TAIL_LEN);
    let mut sigmas = Vec::new();
    let mut spreads = Vec::new();
    let mut converged = true;
    for &j in &seq.j_set {
        let mut vals = Vec::new();
        for k in start..n_pts {
            let nk = seq.points[k].jb_norm();
            let ajk = seq.aligned_coeffs[k][j].min(1.0);
            let denom = 1.0 - ajk * ajk;
            if denom <= 0.0 {
                vals.push(1.0);
            } else {
                vals.push(((1.0 - nk * nk) / denom).min(1.0));
            }
        }
        let est = tail_estimate(&vals);
        sigmas.push(est.value);
        spreads.push(est.spread);
        converged &= est.converged;
    }
    let raw_max = sigmas.iter().copied().fold(0.0f64, f64::max);
    if raw_max < 1.0 - SIGMA_SNAP_TOL {
        return Err(CartanError::Numerical(format!(
            "largest σ estimate {raw_max} is too far from 1 to renormalize"
        )));
    }
    let sigmas: Vec<f64> = sigmas
        .iter()
        .map(|s| (s / raw_max).clamp(0.0, 1.0))
        .collect();
    let frame = Frame::new(
        seq.j_set
            .iter()
            .map(|&j| seq.slots[j].clone())
            .collect::<Vec<_>>(),
    )?;
    let xi_coefficients = seq.aligned_coeffs.last().expect("nonempty").clone();
    Ok(WolffSigmas {
        frame,
        sigmas,
        spreads,
        converged,
        xi_coefficients,
    })
}

/// The closed-form horoball `S₀(ξ,λ) = c(λ) + B^{1/2}(D)` with
/// `c(λ) = Σ σ_jλ/(1+σ_jλ) e_j` and the Bergmann square root taken at
/// `Σ √(σ_jλ/(1+σ_jλ)) e_j`.
#[derive(Debug, Clone)]
pub struct HoroballParams {
    frame: Frame,
    sigmas: Vec<f64>,
    lambda: f64,
    center: Element,
    sqrt_op: LinearOp,
    inv_sqrt_op: LinearOp,
}

impl HoroballParams {
    pub fn new(frame: Frame, sigmas: Vec<f64>, lambda: f64) -> Result<Self> {
        if lambda <= 0.0 {
            return Err(CartanError::InvalidArgument("λ must be positive".into()));
        }
        if sigmas.len() != frame.len() {
            return Err(CartanError::InvalidArgument(
                "σ count does not match the frame".into(),
            ));
        }
        if sigmas.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(CartanError::Validation("σ values must lie in [0,1]".into()));
        }
        let max = sigmas.iter().copied().fold(0.0f64, f64::max);
        if (max - 1.0).abs() > 1e-6 {
            return Err(CartanError::Validation(format!(
                "max σ must be 1 (got {max})"
            )));
        }
        let center_coeffs: Vec<f64> = sigmas
            .iter()
            .map(|s| s * lambda / (1.0 + s * lambda))
            .collect();
        let center = frame.combine(
            &center_coeffs
                .iter()
                .map(|&c| C64::new(c, 0.0))
                .collect::<Vec<_>>(),
        )?;
        // Bergmann argument b = Σ √(σλ/(1+σλ)) e_j; its decomposition is known,
        // so the ±1/2 powers come straight off the joint Peirce grid. Every
        // weight 1−σλ/(1+σλ) = 1/(1+σλ) is positive for finite λ.
        let b = frame.combine(
            &center_coeffs
                .iter()
                .map(|&c| C64::new(c.sqrt(), 0.0))
                .collect::<Vec<_>>(),
        )?;
        let pairs: Vec<(f64, Tripotent)> = center_coeffs
            .iter()
            .zip(frame.tripotents())
            .map(|(&c, t)| (c.sqrt(), t.clone()))
            .collect();
        let decomp = SpectralDecomp::assemble(b, pairs);
        let sqrt_op = bergmann_power_of_decomp(&decomp, 0.5)?;
        let inv_sqrt_op = bergmann_power_of_decomp(&decomp, -0.5)?;
        Ok(HoroballParams {
            frame,
            sigmas,
            lambda,
            center,
            sqrt_op,
            inv_sqrt_op,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn center(&self) -> &Element {
        &self.center
    }

    pub fn sqrt_op(&self) -> &LinearOp {
        &self.sqrt_op
    }

    /// The affine chart `φ(w) = c(λ) + B^{1/2}(w)`.
    pub fn map(&self, w: &Element) -> Result<Element> {
        Ok(&self.center + &self.sqrt_op.apply(w)?)
    }

    /// `φ^{-1}(x) = B^{-1/2}(x − c(λ))`.
    pub fn inverse_map(&self, x: &Element) -> Result<Element> {
        self.inv_sqrt_op.apply(&(x - &self.center))
    }

    /// Strict membership `‖φ^{-1}(x)‖ < 1 − tol`.
    pub fn contains(&self, x: &Element, tol: f64) -> Result<bool> {
        if x.jb_norm() >= 1.0 {
            return Err(CartanError::Domain(
                "horoball membership needs ‖x‖ < 1".into(),
            ));
        }
        Ok(self.inverse_map(x)?.jb_norm() < 1.0 - tol)
    }
}

/// Left-hand side and closed-form bound of the radial non-emptiness estimate:
/// for `x_t = tξ` on a matrix-factor space,
/// `limsup ‖B(x_t,x_t)^{-1/2}B(x_t,z_k)B(z_k,z_k)^{-1/2}‖(1−‖z_k‖²)`
/// is at most `√((1−t)/(1+t)) + t(1−t)/(1+t)`.
#[derive(Debug, Clone, Copy)]
pub struct TailBound {
    pub lhs: f64,
    pub bound: f64,
    pub converged: bool,
}

pub fn radial_bound_check(xi: &Element, seq: &ApproachSequence, t: f64) -> Result<TailBound> {
    if !(0.0 < t && t < 1.0) {
        return Err(CartanError::InvalidArgument("t must lie in (0,1)".into()));
    }
    if xi.space().factors().iter().any(|k| !k.is_matrix()) {
        return Err(CartanError::Unsupported(
            "the radial bound check is implemented for matrix factors only".into(),
        ));
    }
    let x_t = xi.scale_re(t);
    let est = horofunction(&x_t, seq)?;
    let bound = ((1.0 - t) / (1.0 + t)).sqrt() + t * (1.0 - t) / (1.0 + t);
    Ok(TailBound {
        lhs: est.value,
        bound,
        converged: est.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVec;
    use crate::space::Element;

    fn disc_seq(k_max: usize) -> (TripleSpace, ApproachSequence) {
        let space = TripleSpace::disc();
        let pts: Vec<Element> = (1..=k_max)
            .map(|k| {
                Element::from_coords(
                    &space,
                    CVec::from_vec(vec![C64::new(1.0 - 0.5f64.powi(k as i32), 0.0)]),
                )
                .unwrap()
            })
            .collect();
        let seq = ApproachSequence::new(pts).unwrap();
        (space, seq)
    }

    #[test]
    fn disc_horofunction_closed_form() {
        let (space, seq) = disc_seq(30);
        assert!((seq.xi().jb_norm() - 1.0).abs() < 1e-9);
        for &x in &[-0.6, -0.2, 0.0, 0.3, 0.8] {
            let el = Element::from_coords(&space, CVec::from_vec(vec![C64::new(x, 0.0)])).unwrap();
            let f = horofunction(&el, &seq).unwrap();
            let expected = (1.0 - x) / (1.0 + x);
            assert!(
                (f.value - expected).abs() < 1e-6,
                "F({x}) = {} vs {expected}",
                f.value
            );
            assert!(f.converged);
        }
    }

    #[test]
    fn disc_invariant_domain_matches_horodisc() {
        let (space, seq) = disc_seq(30);
        // horodisc at λ: (λ−1)/(λ+1) < x < 1 on the real axis
        let lambda = 10.0;
        let inside =
            Element::from_coords(&space, CVec::from_vec(vec![C64::new(0.9, 0.0)])).unwrap();
        let outside =
            Element::from_coords(&space, CVec::from_vec(vec![C64::new(0.7, 0.0)])).unwrap();
        assert!(invariant_domain_contains(&inside, &seq, lambda, MEMBERSHIP_MARGIN).unwrap());
        assert!(!invariant_domain_contains(&outside, &seq, lambda, MEMBERSHIP_MARGIN).unwrap());
        // 0 belongs to every H(ξ,λ) with λ < 1
        let zero = Element::zero(&space);
        assert!(invariant_domain_contains(&zero, &seq, 0.5, MEMBERSHIP_MARGIN).unwrap());
    }

    #[test]
    fn disc_sigmas_and_horodisc_shape() {
        let (space, seq) = disc_seq(30);
        let ws = wolff_sigmas(&seq).unwrap();
        assert_eq!(ws.sigmas, vec![1.0]);
        for lambda in [0.1, 1.0, 10.0] {
            let hb = HoroballParams::new(ws.frame.clone(), ws.sigmas.clone(), lambda).unwrap();
            let c = hb.center().coords()[0].re;
            assert!((c - lambda / (1.0 + lambda)).abs() < 1e-9);
            // scale factor: B^{1/2} on the disc multiplies by 1/(1+λ)
            let one =
                Element::from_coords(&space, CVec::from_vec(vec![C64::new(1.0, 0.0)])).unwrap();
            let img = hb.sqrt_op().apply(&one).unwrap();
            assert!((img.coords()[0].re - 1.0 / (1.0 + lambda)).abs() < 1e-9);
        }
    }

    #[test]
    fn horoball_membership_disc_examples() {
        let (space, seq) = disc_seq(30);
        let ws = wolff_sigmas(&seq).unwrap();
        let hb = HoroballParams::new(ws.frame, ws.sigmas, 1.0).unwrap();
        let at = |v: f64| {
            Element::from_coords(&space, CVec::from_vec(vec![C64::new(v, 0.0)])).unwrap()
        };
        assert!(hb.contains(&at(0.5), 1e-9).unwrap()); // the center
        assert!(hb.contains(&at(0.99), 1e-9).unwrap()); // |0.99-0.5| < 0.5
        assert!(!hb.contains(&at(-0.2), 1e-9).unwrap()); // |-0.2-0.5| > 0.5
    }

    #[test]
    fn rank_two_frame_with_one_dead_sigma() {
        // σ = (1, 0): the center sits on e₁ alone and the Bergmann factor is
        // the identity on the Peirce spaces missing e₁
        let space = TripleSpace::new(vec![crate::space::FactorKind::Rect { rows: 2, cols: 2 }])
            .unwrap();
        let z = crate::space::random_element(&space, 3, 0.9);
        let frame = spectral_decompose(&z).unwrap().frame().unwrap();
        assert_eq!(frame.len(), 2);
        let lambda = 2.0;
        let hb = HoroballParams::new(frame.clone(), vec![1.0, 0.0], lambda).unwrap();
        let e1 = frame.tripotents()[0].element();
        let e2 = frame.tripotents()[1].element();
        let expected_center = e1.scale_re(lambda / (1.0 + lambda));
        assert!((&hb.center().clone() - &expected_center).jb_norm() < 1e-10);
        // e₂ sits in V₀(e₁)-adjacent slots with weight 1
        let img = hb.sqrt_op().apply(e2).unwrap();
        assert!((&img - e2).jb_norm() < 1e-9);
        let img1 = hb.sqrt_op().apply(e1).unwrap();
        assert!((&img1 - &e1.scale_re(1.0 / (1.0 + lambda))).jb_norm() < 1e-9);
    }

    #[test]
    fn chart_roundtrip_and_closure_characterization() {
        let (space, seq) = disc_seq(30);
        let ws = wolff_sigmas(&seq).unwrap();
        let lambda = 1.5;
        let hb = HoroballParams::new(ws.frame, ws.sigmas, lambda).unwrap();
        for seed in 0..30u64 {
            let w = crate::space::random_element(&space, 900 + seed, 0.999);
            let x = hb.map(&w).unwrap();
            // affine chart round trip
            assert!((&hb.inverse_map(&x).unwrap() - &w).jb_norm() < 1e-10);
            // points of the closed horoball satisfy F ≤ 1/λ up to the tail error
            let f = horofunction(&x, &seq).unwrap();
            assert!(f.value <= 1.0 / lambda + 1e-4, "F = {}", f.value);
        }
    }

    #[test]
    fn lambda_to_zero_fills_the_ball() {
        let (space, seq) = disc_seq(30);
        let ws = wolff_sigmas(&seq).unwrap();
        let hb = HoroballParams::new(ws.frame, ws.sigmas, 1e-9).unwrap();
        assert!(hb.center().jb_norm() < 1e-8);
        let x = Element::from_coords(&space, CVec::from_vec(vec![C64::new(-0.95, 0.0)])).unwrap();
        assert!(hb.contains(&x, 1e-9).unwrap());
    }

    #[test]
    fn bidisc_sigma_oracles() {
        let space = TripleSpace::polydisc(2).unwrap();
        let seq_pts = |f: &dyn Fn(i32) -> (f64, f64)| -> Vec<Element> {
            (1..=30)
                .map(|k| {
                    let (a, b) = f(k);
                    Element::from_coords(
                        &space,
                        crate::linalg::CVec::from_vec(vec![C64::new(a, 0.0), C64::new(b, 0.0)]),
                    )
                    .unwrap()
                })
                .collect()
        };
        // second coordinate stays interior: excluded from the boundary frame
        let seq = ApproachSequence::new(seq_pts(&|k| (1.0 - 0.5f64.powi(k), 0.5))).unwrap();
        let ws = wolff_sigmas(&seq).unwrap();
        assert_eq!(ws.frame.len(), 1);
        assert_eq!(ws.sigmas, vec![1.0]);
        assert!((seq.xi().coords()[0].re - 1.0).abs() < 1e-12);
        assert!((seq.xi().coords()[1].re - 0.5).abs() < 1e-9);
        // both reach the boundary, the second at half speed: σ = (1, 1/2)
        let seq2 =
            ApproachSequence::new(seq_pts(&|k| (1.0 - 0.5f64.powi(k), 1.0 - 2.0 * 0.5f64.powi(k))))
                .unwrap();
        let ws2 = wolff_sigmas(&seq2).unwrap();
        assert_eq!(ws2.frame.len(), 2);
        let mut sig = ws2.sigmas.clone();
        sig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((sig[0] - 1.0).abs() < 1e-6);
        assert!((sig[1] - 0.5).abs() < 1e-4, "σ₂ = {}", sig[1]);
        assert!(seq2.monotone_from() < seq2.len());
    }

    #[test]
    fn gab_routes_agree_across_factor_kinds() {
        // the cached per-factor closed form, the generic norm search, and the
        // Moebius identity all compute the same quantity
        use crate::bergmann::{gab_ratio, mobius_apply};
        for kind in [
            crate::space::FactorKind::Rect { rows: 2, cols: 3 },
            crate::space::FactorKind::Sym { n: 3 },
            crate::space::FactorKind::Antisym { n: 4 },
            crate::space::FactorKind::Spin { n: 5 },
        ] {
            let space = TripleSpace::new(vec![kind]).unwrap();
            for seed in 0..6u64 {
                let x = crate::space::random_element(&space, 8100 + seed, 0.85);
                let z = crate::space::random_element(&space, 8200 + seed, 0.85);
                let xc = GabPoint::new(&x).unwrap();
                let zc = GabPoint::new(&z).unwrap();
                let fast = gab_norm_cached(&xc, &zc, &space, &NormEstimator::default()).unwrap();
                let generic = gab_ratio(&x, &z).unwrap();
                let g = mobius_apply(&-&z, &x).unwrap();
                let exact = 1.0 / (1.0 - g.jb_norm().powi(2));
                assert!(
                    (fast - exact).abs() < 1e-6,
                    "{kind:?} fast {fast} vs exact {exact}"
                );
                assert!(
                    (generic - exact).abs() < 1e-6,
                    "{kind:?} generic {generic} vs exact {exact}"
                );
            }
        }
    }

    #[test]
    fn horofunction_growth_bound() {
        // F(x) ≤ (1+‖x‖)/(1−‖x‖)
        let (space, seq) = disc_seq(30);
        for seed in 0..20u64 {
            let x = crate::space::random_element(&space, 7000 + seed, 0.9);
            let f = horofunction(&x, &seq).unwrap();
            let bound = (1.0 + x.jb_norm()) / (1.0 - x.jb_norm());
            assert!(f.value <= bound + 1e-6);
        }
        let zero = Element::zero(&space);
        let f0 = horofunction(&zero, &seq).unwrap();
        assert!((f0.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn radial_bound_on_disc() {
        let (_, seq) = disc_seq(30);
        for t in [0.9, 0.99] {
            let tb = radial_bound_check(seq.xi(), &seq, t).unwrap();
            assert!(tb.lhs <= tb.bound + 1e-4, "lhs {} bound {}", tb.lhs, tb.bound);
        }
        let tb = radial_bound_check(seq.xi(), &seq, 0.9).unwrap();
        let expect = (0.1f64 / 1.9).sqrt() + 0.9 * 0.1 / 1.9;
        assert!((tb.bound - expect).abs() < 1e-12);
    }
}
