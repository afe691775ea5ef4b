//! Dense complex-linear operators on a triple space, with two operator norms:
//! the Euclidean one (largest singular value in the canonical coordinates) and
//! the operator norm with respect to the JB*-triple norm.
//!
//! The JB* operator norm is not induced by an inner product, so it is
//! estimated: candidate directions (canonical units, the Euclidean maximizer,
//! caller hints) are combined with projected gradient ascent of
//! `‖Tx‖/‖x‖` over the unit sphere of the triple norm. For operators that are
//! block diagonal over the factors (every operator this crate builds from
//! triple products is), the estimate reduces to a per-factor search. On
//! matrix factors the Euclidean maximizer already attains the triple-norm
//! maximum for the Bergmann-type operators used here, so the search is a
//! polish; spin factors are searched over their maximal tripotents
//! `√2·e^{iφ}·u` with `u` a real unit vector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CartanError, Result};
use crate::linalg::{self, C64, CMat, CVec};
use crate::space::{Element, FactorKind, TripleSpace};

/// A complex-linear operator stored as a dense matrix in canonical coordinates.
#[derive(Debug, Clone)]
pub struct LinearOp {
    space: TripleSpace,
    mat: CMat,
}

impl LinearOp {
    pub fn from_matrix(space: &TripleSpace, mat: CMat) -> Result<Self> {
        if mat.nrows() != space.total_dim() || mat.ncols() != space.total_dim() {
            return Err(CartanError::InvalidArgument(format!(
                "operator matrix is {}x{}, expected {n}x{n}",
                mat.nrows(),
                mat.ncols(),
                n = space.total_dim()
            )));
        }
        Ok(LinearOp {
            space: space.clone(),
            mat,
        })
    }

    pub fn identity(space: &TripleSpace) -> Self {
        LinearOp {
            space: space.clone(),
            mat: CMat::identity(space.total_dim(), space.total_dim()),
        }
    }

    pub fn zero(space: &TripleSpace) -> Self {
        LinearOp {
            space: space.clone(),
            mat: CMat::zeros(space.total_dim(), space.total_dim()),
        }
    }

    /// Build the matrix of a complex-linear map column by column.
    pub fn from_fn(space: &TripleSpace, mut f: impl FnMut(&Element) -> Result<Element>) -> Result<Self> {
        let n = space.total_dim();
        let mut mat = CMat::zeros(n, n);
        let mut basis = Element::zero(space);
        for k in 0..n {
            basis.coords_mut()[k] = C64::new(1.0, 0.0);
            let col = f(&basis)?;
            mat.set_column(k, col.coords());
            basis.coords_mut()[k] = C64::new(0.0, 0.0);
        }
        Ok(LinearOp {
            space: space.clone(),
            mat,
        })
    }

    pub fn space(&self) -> &TripleSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.space() != &self.space {
            return Err(CartanError::SpaceMismatch(
                "operator applied to an element of another space".into(),
            ));
        }
        Element::from_coords(&self.space, &self.mat * x.coords())
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &LinearOp) -> Result<LinearOp> {
        if self.space != rhs.space {
            return Err(CartanError::SpaceMismatch(
                "composing operators on different spaces".into(),
            ));
        }
        Ok(LinearOp {
            space: self.space.clone(),
            mat: &self.mat * &rhs.mat,
        })
    }

    pub fn add(&self, rhs: &LinearOp) -> Result<LinearOp> {
        if self.space != rhs.space {
            return Err(CartanError::SpaceMismatch(
                "adding operators on different spaces".into(),
            ));
        }
        Ok(LinearOp {
            space: self.space.clone(),
            mat: &self.mat + &rhs.mat,
        })
    }

    pub fn sub(&self, rhs: &LinearOp) -> Result<LinearOp> {
        if self.space != rhs.space {
            return Err(CartanError::SpaceMismatch(
                "subtracting operators on different spaces".into(),
            ));
        }
        Ok(LinearOp {
            space: self.space.clone(),
            mat: &self.mat - &rhs.mat,
        })
    }

    pub fn scale(&self, s: f64) -> LinearOp {
        LinearOp {
            space: self.space.clone(),
            mat: self.mat.clone() * C64::new(s, 0.0),
        }
    }

    /// Adjoint with respect to the canonical (Hilbert–Schmidt) inner product.
    pub fn adjoint(&self) -> LinearOp {
        LinearOp {
            space: self.space.clone(),
            mat: self.mat.adjoint(),
        }
    }

    /// Largest singular value in canonical coordinates.
    pub fn euclid_norm(&self) -> f64 {
        linalg::sigma_max(&self.mat)
    }

    /// Operator norm with respect to the JB*-triple norm, with default settings.
    pub fn jb_op_norm(&self) -> f64 {
        self.jb_op_norm_with(&NormEstimator::default(), &[])
    }

    /// Operator norm with respect to the JB*-triple norm.
    ///
    /// `hints` are extra candidate directions known to the caller (frame
    /// tripotents and similar); they are evaluated and used as ascent starts.
    pub fn jb_op_norm_with(&self, cfg: &NormEstimator, hints: &[&Element]) -> f64 {
        let nf = self.space.factors().len();
        if nf > 1 && self.is_block_diagonal() {
            let mut best: f64 = 0.0;
            for i in 0..nf {
                let single = TripleSpace::single(self.space.factors()[i]).expect("valid factor");
                let range = self.space.factor_range(i);
                let block = self.mat.view((range.start, range.start), (range.len(), range.len()));
                let sub = LinearOp {
                    space: single.clone(),
                    mat: block.into_owned(),
                };
                let sub_hints: Vec<Element> = hints
                    .iter()
                    .filter(|h| h.space() == &self.space)
                    .filter_map(|h| crate::space::project_summand(h, i).ok())
                    .collect();
                let refs: Vec<&Element> = sub_hints.iter().collect();
                best = best.max(sub.jb_op_norm_with(cfg, &refs));
            }
            return best;
        }
        if nf == 1 {
            self.single_factor_norm(cfg, hints)
        } else {
            // Not block diagonal: generic multistart ascent over the full ball.
            self.ascent_norm(cfg, hints)
        }
    }

    fn is_block_diagonal(&self) -> bool {
        let gauge = linalg::max_abs(&self.mat).max(1.0);
        let nf = self.space.factors().len();
        for i in 0..nf {
            for j in 0..nf {
                if i == j {
                    continue;
                }
                let ri = self.space.factor_range(i);
                let rj = self.space.factor_range(j);
                for r in ri.clone() {
                    for c in rj.clone() {
                        if self.mat[(r, c)].norm() > 1e-13 * gauge {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn single_factor_norm(&self, cfg: &NormEstimator, hints: &[&Element]) -> f64 {
        match self.space.factors()[0] {
            FactorKind::Spin { .. } => self.spin_factor_norm(cfg, hints),
            _ => self.matrix_factor_norm(cfg, hints),
        }
    }

    /// Matrix factors: the Euclidean top right-singular vector attains the
    /// triple-norm maximum for two-sided multiplication operators (which is
    /// what Bergmann compositions restrict to); candidates plus a short
    /// ascent cover the rest.
    fn matrix_factor_norm(&self, cfg: &NormEstimator, hints: &[&Element]) -> f64 {
        let mut best = 0.0f64;
        let mut best_x: Option<Element> = None;
        let consider = |x: &Element, best: &mut f64, best_x: &mut Option<Element>| {
            if let Some(r) = self.ratio(x) {
                if r > *best {
                    *best = r;
                    *best_x = Some(x.clone());
                }
            }
        };

        if let Ok((_, _, v_t)) = linalg::svd(&self.mat) {
            let top = CVec::from_iterator(v_t.ncols(), v_t.row(0).iter().map(|z| z.conj()));
            if let Ok(x) = Element::from_coords(&self.space, top) {
                consider(&x, &mut best, &mut best_x);
            }
        }
        for h in hints {
            if h.space() == &self.space {
                consider(h, &mut best, &mut best_x);
            }
        }
        let n = self.space.total_dim();
        let mut basis = Element::zero(&self.space);
        for k in 0..n {
            basis.coords_mut()[k] = C64::new(1.0, 0.0);
            consider(&basis.clone(), &mut best, &mut best_x);
            basis.coords_mut()[k] = C64::new(0.0, 0.0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.restarts / 4 {
            let x = crate::space::random_element_with(&self.space, &mut rng, 1.0);
            consider(&x, &mut best, &mut best_x);
        }
        if let Some(x0) = best_x {
            best = best.max(self.sphere_ascent(&x0, cfg));
        }
        best
    }

    /// Spin factors: the extreme points of the unit ball are `√2·e^{iφ}·u`
    /// with `u` a real unit vector. The operator is complex linear and the
    /// spin norm is phase invariant, so the phase drops out and
    /// `‖T‖ = max_u √(uᵗHu + √((uᵗHu)² − |uᵗSu|²))` over the real unit
    /// sphere, with `H = Re(T*T)` and `S = TᵗT`. That objective costs two
    /// small quadratic forms per point, searched by multistart projected
    /// gradient ascent.
    fn spin_factor_norm(&self, cfg: &NormEstimator, hints: &[&Element]) -> f64 {
        let n = self.space.total_dim();
        let mut best = 0.0f64;
        for h in hints {
            if h.space() == &self.space {
                if let Some(r) = self.ratio(h) {
                    best = best.max(r);
                }
            }
        }
        let th = self.mat.adjoint() * &self.mat;
        let h = nalgebra::DMatrix::<f64>::from_fn(n, n, |r, c| th[(r, c)].re);
        let s = self.mat.transpose() * &self.mat;
        let search = SpinNormSearch { n, h, s };

        let mut starts: Vec<Vec<f64>> = Vec::new();
        starts.push(search.power_seed(12));
        if cfg.fast {
            // the two heaviest coordinate axes
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| search.h[(b, b)].partial_cmp(&search.h[(a, a)]).unwrap());
            for &k in idx.iter().take(2) {
                let mut u = vec![0.0; n];
                u[k] = 1.0;
                starts.push(u);
            }
        } else {
            for k in 0..n {
                let mut u = vec![0.0; n];
                u[k] = 1.0;
                starts.push(u);
            }
            if let Ok((_, _, v_t)) = linalg::svd(&self.mat) {
                for phase in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                    let u: Vec<f64> = v_t.row(0).iter().map(|z| (z.conj() * phase).re).collect();
                    let norm: f64 = u.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if norm > 1e-12 {
                        starts.push(u.iter().map(|v| v / norm).collect());
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5bd1e995);
        for _ in 0..cfg.restarts {
            let mut u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            let norm: f64 = u.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-12 {
                continue;
            }
            u.iter_mut().for_each(|v| *v /= norm);
            starts.push(u);
        }

        let mut best_sq = 0.0f64;
        for u in starts {
            best_sq = best_sq.max(search.ascend(u, cfg.max_iter));
        }
        best.max(best_sq.max(0.0).sqrt())
    }

    /// `‖Tx‖/‖x‖` in the triple norm; `None` for x = 0.
    pub fn ratio(&self, x: &Element) -> Option<f64> {
        let nx = x.jb_norm();
        if nx <= 0.0 {
            return None;
        }
        let y = self.apply(x).ok()?;
        Some(y.jb_norm() / nx)
    }

    /// Projected gradient ascent of the norm ratio from a given start.
    fn sphere_ascent(&self, x0: &Element, cfg: &NormEstimator) -> f64 {
        let mut x = x0.rescale_to_norm(1.0);
        let Some(mut val) = self.ratio(&x) else {
            return 0.0;
        };
        let mut step = 0.2;
        for _ in 0..cfg.max_iter {
            let Ok(y) = self.apply(&x) else { break };
            let gy = match jb_norm_gradient(&y) {
                Some(g) => g,
                None => break,
            };
            let gx = match jb_norm_gradient(&x) {
                Some(g) => g,
                None => break,
            };
            // gradient of ‖Tx‖ − val·‖x‖ (Lagrangian direction on the sphere)
            let pull = self.adjoint().apply(&gy).expect("same space");
            let grad = &pull - &gx.scale_re(val);
            let gn = grad.l2_norm();
            if gn < 1e-14 {
                break;
            }
            let mut improved = false;
            while step > 1e-13 {
                let cand = (&x + &grad.scale_re(step / gn)).rescale_to_norm(1.0);
                if let Some(cv) = self.ratio(&cand) {
                    if cv > val + 1e-16 {
                        x = cand;
                        val = cv;
                        step *= 1.4;
                        improved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        val
    }

    /// Fallback for operators with cross-factor coupling.
    fn ascent_norm(&self, cfg: &NormEstimator, hints: &[&Element]) -> f64 {
        let mut best = 0.0f64;
        let mut best_x = None;
        let consider = |x: &Element, best: &mut f64, best_x: &mut Option<Element>| {
            if let Some(r) = self.ratio(x) {
                if r > *best {
                    *best = r;
                    *best_x = Some(x.clone());
                }
            }
        };
        if let Ok((_, _, v_t)) = linalg::svd(&self.mat) {
            let top = CVec::from_iterator(v_t.ncols(), v_t.row(0).iter().map(|z| z.conj()));
            if let Ok(x) = Element::from_coords(&self.space, top) {
                consider(&x, &mut best, &mut best_x);
            }
        }
        for h in hints {
            consider(h, &mut best, &mut best_x);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.restarts {
            let x = crate::space::random_element_with(&self.space, &mut rng, 1.0);
            consider(&x, &mut best, &mut best_x);
        }
        if let Some(x0) = best_x {
            best = best.max(self.sphere_ascent(&x0, cfg));
        }
        best
    }
}

/// Maximizer state for the spin-factor operator norm: the squared norm at
/// the maximal tripotent `√2·u` is `uᵗHu + √((uᵗHu)² − |uᵗSu|²)`.
struct SpinNormSearch {
    n: usize,
    h: nalgebra::DMatrix<f64>,
    s: CMat,
}

impl SpinNormSearch {
    fn forms(&self, u: &[f64], hu_vec: &mut [f64], su_vec: &mut [C64]) -> (f64, C64) {
        let mut hu = 0.0f64;
        let mut su = C64::new(0.0, 0.0);
        for r in 0..self.n {
            let mut hrow = 0.0;
            let mut srow = C64::new(0.0, 0.0);
            for c in 0..self.n {
                hrow += self.h[(r, c)] * u[c];
                srow += self.s[(r, c)] * u[c];
            }
            hu_vec[r] = hrow;
            su_vec[r] = srow;
            hu += u[r] * hrow;
            su += C64::new(u[r], 0.0) * srow;
        }
        (hu, su)
    }

    fn objective(&self, u: &[f64], hu_vec: &mut [f64], su_vec: &mut [C64]) -> f64 {
        let (hu, su) = self.forms(u, hu_vec, su_vec);
        hu + (hu * hu - su.norm_sqr()).max(0.0).sqrt()
    }

    /// A few power iterations on `H` seed the search near the heavy subspace.
    fn power_seed(&self, iters: usize) -> Vec<f64> {
        let n = self.n;
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        let mut w = vec![0.0; n];
        for _ in 0..iters {
            for r in 0..n {
                w[r] = (0..n).map(|c| self.h[(r, c)] * v[c]).sum();
            }
            let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-300 {
                break;
            }
            for r in 0..n {
                v[r] = w[r] / norm;
            }
        }
        v
    }

    /// Projected gradient ascent on the unit sphere; returns the best value
    /// of the squared norm found from this start.
    fn ascend(&self, mut u: Vec<f64>, max_iter: usize) -> f64 {
        let n = self.n;
        let mut hu_vec = vec![0.0f64; n];
        let mut su_vec = vec![C64::new(0.0, 0.0); n];
        let mut val = self.objective(&u, &mut hu_vec, &mut su_vec);
        let mut grad = vec![0.0f64; n];
        let mut cand = vec![0.0f64; n];
        let mut step = 0.4;
        let mut scratch_h = vec![0.0f64; n];
        let mut scratch_s = vec![C64::new(0.0, 0.0); n];
        for _ in 0..max_iter {
            let (hu, su) = self.forms(&u, &mut hu_vec, &mut su_vec);
            let disc = (hu * hu - su.norm_sqr()).max(0.0).sqrt();
            for r in 0..n {
                let dh = 2.0 * hu_vec[r];
                let dq = 2.0 * (su.conj() * su_vec[r]).re;
                grad[r] = if disc > 1e-14 * (1.0 + hu * hu) {
                    dh + (hu * dh - dq) / disc
                } else {
                    dh
                };
            }
            let dot: f64 = grad.iter().zip(&u).map(|(a, b)| a * b).sum();
            for r in 0..n {
                grad[r] -= dot * u[r];
            }
            let gn: f64 = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gn < 1e-13 * (1.0 + val) {
                break;
            }
            let mut improved = false;
            while step > 1e-11 {
                let mut norm = 0.0;
                for r in 0..n {
                    cand[r] = u[r] + step * grad[r] / gn;
                    norm += cand[r] * cand[r];
                }
                let norm = norm.sqrt();
                for c in cand.iter_mut() {
                    *c /= norm;
                }
                let cv = self.objective(&cand, &mut scratch_h, &mut scratch_s);
                if cv > val * (1.0 + 1e-15) {
                    std::mem::swap(&mut u, &mut cand);
                    val = cv;
                    step *= 1.5;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        val
    }
}

/// Settings for the JB* operator norm search.
#[derive(Debug, Clone)]
pub struct NormEstimator {
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
    /// Cheap profile for inner sampling loops: fewer deterministic starts.
    pub fast: bool,
}

impl Default for NormEstimator {
    fn default() -> Self {
        NormEstimator {
            restarts: 32,
            max_iter: 120,
            seed: 0x9e3779b97f4a7c15,
            fast: false,
        }
    }
}

/// A (sub)gradient of the triple norm at `z` in the real pairing
/// `df = Re⟨dz, g⟩`: the leading minimal tripotent of the factor achieving
/// the norm, scaled by the inverse of its squared HS norm.
pub(crate) fn jb_norm_gradient(z: &Element) -> Option<Element> {
    let space = z.space();
    let mut best = -1.0f64;
    let mut arg = 0usize;
    for i in 0..space.factors().len() {
        let kind = space.factors()[i];
        let slice = z.factor_coords(i);
        let n = match kind {
            FactorKind::Spin { .. } => crate::space::spin_norm(slice),
            _ => linalg::sigma_max(&crate::space::unpack_matrix(kind, slice).ok()?),
        };
        if n > best {
            best = n;
            arg = i;
        }
    }
    if best <= 0.0 {
        return None;
    }
    let kind = space.factors()[arg];
    let slice = z.factor_coords(arg);
    let mut out = Element::zero(space);
    let range = space.factor_range(arg);
    match kind {
        FactorKind::Spin { .. } => {
            let e1 = crate::spin::leading_tripotent(slice)?;
            for (k, v) in e1.into_iter().enumerate() {
                out.coords_mut()[range.start + k] = v;
            }
        }
        _ => {
            let m = crate::space::unpack_matrix(kind, slice).ok()?;
            let (u, _, v_t) = linalg::svd(&m).ok()?;
            let mut g = CMat::zeros(m.nrows(), m.ncols());
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    g[(r, c)] = u[(r, 0)] * v_t[(0, c)];
                }
            }
            // project onto the factor's symmetry class
            let packed = crate::space::pack_projected(kind, &g);
            for (k, v) in packed.into_iter().enumerate() {
                out.coords_mut()[range.start + k] = v;
            }
        }
    }
    Some(out)
}
