//! Holomorphic self-map expressions, Earle–Hamilton fixed points, the Wolff
//! construction, orbit iteration, and boundary-component dynamics.

use serde::{Deserialize, Serialize};

use crate::bergmann::{kobayashi_distance, MobiusMap};
use crate::error::{CartanError, Result};
use crate::horoball::{wolff_sigmas, ApproachSequence, WolffSigmas};
use crate::linalg::{C64, CMat};
use crate::operator::LinearOp;
use crate::space::{random_element, Element, TripleSpace};
use crate::spectral::{are_orthogonal, peirce_projection, spectral_decompose, Tripotent};
use crate::triple::triple_product;

/// Holomorphic self-map of the closed ball, as a small expression tree whose
/// every node is holomorphic and ball-stable by construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MapExpr {
    /// The Möbius transformation `g_a`.
    Mobius { a: Element },
    /// A linear triple automorphism, given as a dense matrix in canonical
    /// coordinates (interleaved re/im, column-major).
    LinearIsometry { matrix: Vec<f64> },
    /// `z ↦ αz` for `α ∈ (0,1]`.
    ScalarScale { alpha: f64 },
    /// `outer ∘ inner`.
    Compose { outer: Box<MapExpr>, inner: Box<MapExpr> },
    /// One sub-map per direct summand.
    DirectSum { parts: Vec<MapExpr> },
    /// The constant map with interior value `c`.
    Constant { c: Element },
}

impl MapExpr {
    pub fn compose(outer: MapExpr, inner: MapExpr) -> MapExpr {
        MapExpr::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    /// Validate against the ambient space and cache what evaluation needs.
    pub fn compile(&self, space: &TripleSpace) -> Result<CompiledMap> {
        let node = compile_node(self, space)?;
        Ok(CompiledMap {
            space: space.clone(),
            node,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CartanError::InvalidArgument(e.to_string()))
    }
}

/// A validated, evaluation-ready map expression.
#[derive(Debug, Clone)]
pub struct CompiledMap {
    space: TripleSpace,
    node: Node,
}

#[derive(Debug, Clone)]
enum Node {
    Mobius(MobiusMap),
    Isometry(LinearOp),
    Scale(f64),
    Compose(Box<Node>, Box<Node>),
    DirectSum(Vec<CompiledMap>),
    Constant(Element),
}

fn compile_node(expr: &MapExpr, space: &TripleSpace) -> Result<Node> {
    match expr {
        MapExpr::Mobius { a } => {
            if a.space() != space {
                return Err(CartanError::SpaceMismatch(
                    "Möbius parameter lives in another space".into(),
                ));
            }
            Ok(Node::Mobius(MobiusMap::new(a)?))
        }
        MapExpr::LinearIsometry { matrix } => {
            let n = space.total_dim();
            if matrix.len() != 2 * n * n {
                return Err(CartanError::InvalidArgument(format!(
                    "isometry matrix has {} numbers, expected {}",
                    matrix.len(),
                    2 * n * n
                )));
            }
            let mat = CMat::from_iterator(
                n,
                n,
                matrix.chunks_exact(2).map(|p| C64::new(p[0], p[1])),
            );
            let op = LinearOp::from_matrix(space, mat)?;
            validate_isometry(&op, space)?;
            Ok(Node::Isometry(op))
        }
        MapExpr::ScalarScale { alpha } => {
            if !(0.0 < *alpha && *alpha <= 1.0) {
                return Err(CartanError::InvalidArgument(format!(
                    "scaling factor must lie in (0,1], got {alpha}"
                )));
            }
            Ok(Node::Scale(*alpha))
        }
        MapExpr::Compose { outer, inner } => Ok(Node::Compose(
            Box::new(compile_node(outer, space)?),
            Box::new(compile_node(inner, space)?),
        )),
        MapExpr::DirectSum { parts } => {
            if parts.len() != space.factors().len() {
                return Err(CartanError::InvalidArgument(format!(
                    "direct-sum map has {} parts for {} factors",
                    parts.len(),
                    space.factors().len()
                )));
            }
            let compiled = parts
                .iter()
                .zip(space.factors())
                .map(|(p, &f)| p.compile(&TripleSpace::single(f)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(Node::DirectSum(compiled))
        }
        MapExpr::Constant { c } => {
            if c.space() != space {
                return Err(CartanError::SpaceMismatch(
                    "constant value lives in another space".into(),
                ));
            }
            if c.jb_norm() >= 1.0 {
                return Err(CartanError::Domain(
                    "constant map value must be interior".into(),
                ));
            }
            Ok(Node::Constant(c.clone()))
        }
    }
}

/// A triple automorphism preserves the triple norm and the triple product;
/// both are checked on deterministic samples.
fn validate_isometry(op: &LinearOp, space: &TripleSpace) -> Result<()> {
    for seed in 0..8u64 {
        let x = random_element(space, 0xA11CE + seed, 1.0);
        let y = random_element(space, 0xB0B + seed, 1.0);
        let z = random_element(space, 0xCAFE + seed, 1.0);
        let scale = (x.jb_norm() * y.jb_norm() * z.jb_norm()).max(1e-6);
        let ux = op.apply(&x)?;
        if (ux.jb_norm() - x.jb_norm()).abs() > 1e-9 * (1.0 + x.jb_norm()) {
            return Err(CartanError::Validation(
                "matrix is not a triple-norm isometry".into(),
            ));
        }
        let lhs = op.apply(&triple_product(&x, &y, &z)?)?;
        let rhs = triple_product(&ux, &op.apply(&y)?, &op.apply(&z)?)?;
        if (&lhs - &rhs).jb_norm() > 1e-9 * scale {
            return Err(CartanError::Validation(
                "matrix does not preserve the triple product".into(),
            ));
        }
    }
    Ok(())
}

impl CompiledMap {
    pub fn space(&self) -> &TripleSpace {
        &self.space
    }

    pub fn eval(&self, z: &Element) -> Result<Element> {
        if z.space() != &self.space {
            return Err(CartanError::SpaceMismatch(
                "map applied to an element of another space".into(),
            ));
        }
        if z.jb_norm() > 1.0 + 1e-10 {
            return Err(CartanError::Domain(
                "map evaluation outside the closed ball".into(),
            ));
        }
        eval_node(&self.node, z)
    }
}

fn eval_node(node: &Node, z: &Element) -> Result<Element> {
    match node {
        Node::Mobius(m) => m.apply(z),
        Node::Isometry(u) => u.apply(z),
        Node::Scale(alpha) => Ok(z.scale_re(*alpha)),
        Node::Compose(outer, inner) => eval_node(outer, &eval_node(inner, z)?),
        Node::DirectSum(parts) => {
            let space = z.space();
            let mut out = Element::zero(space);
            for (i, part) in parts.iter().enumerate() {
                let zi = crate::space::project_summand(z, i)?;
                let fi = part.eval(&zi)?;
                out = &out + &crate::space::inject_summand(space, i, &fi)?;
            }
            Ok(out)
        }
        Node::Constant(c) => Ok(c.clone()),
    }
}

/// Evaluate a map expression at one point (compiles on the fly; use
/// [`MapExpr::compile`] when iterating).
pub fn eval_map(f: &MapExpr, space: &TripleSpace, z: &Element) -> Result<Element> {
    f.compile(space)?.eval(z)
}

/// Result of a Picard iteration for the fixed point of `α·f`.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub point: Element,
    pub iterations: usize,
    pub residual: f64,
}

/// Fixed point of the strict contraction `α·f` by Picard iteration.
///
/// `α·f` maps the ball strictly inside itself, so the iteration converges
/// geometrically; the stop rule is displacement `≤ max(tol·(1−α), floor)`
/// with a floating-point floor.
pub fn earle_hamilton_fixed_point(
    f: &CompiledMap,
    alpha: f64,
    tol: f64,
    max_iter: usize,
    start: Option<&Element>,
) -> Result<FixedPoint> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(CartanError::InvalidArgument(format!(
            "α must lie in (0,1), got {alpha}"
        )));
    }
    let mut z = match start {
        Some(s) => s.clone(),
        None => Element::zero(f.space()),
    };
    let mut best_disp = f64::INFINITY;
    let mut stall = 0usize;
    for it in 0..max_iter {
        let next = f.eval(&z)?.scale_re(alpha);
        let disp = (&next - &z).jb_norm();
        z = next;
        let floor = 32.0 * f64::EPSILON * (1.0 + z.jb_norm());
        if disp <= (tol * (1.0 - alpha)).max(floor) {
            return Ok(FixedPoint {
                point: z,
                iterations: it + 1,
                residual: disp,
            });
        }
        // Once inside the tolerance, stop as soon as progress has slowed to a
        // crawl: maps with a near-unit local multiplier otherwise burn the
        // whole budget on the last decade, and the floating-point fixed point
        // itself makes the displacement dance at the floor.
        if disp >= 0.999 * best_disp {
            stall += 1;
            if stall > 200 && disp <= tol {
                return Ok(FixedPoint {
                    point: z,
                    iterations: it + 1,
                    residual: disp,
                });
            }
        } else {
            stall = 0;
        }
        best_disp = best_disp.min(disp);
    }
    let residual = {
        let next = f.eval(&z)?.scale_re(alpha);
        (&next - &z).jb_norm()
    };
    if residual <= tol {
        return Ok(FixedPoint {
            point: z,
            iterations: max_iter,
            residual,
        });
    }
    Err(CartanError::NonConvergence {
        iterations: max_iter,
        residual,
        last: z.coords().iter().map(|c| (c.re, c.im)).collect(),
    })
}

/// Schedule for the Wolff construction: `α_k = 1 − base^{−k}`.
#[derive(Debug, Clone)]
pub struct WolffSchedule {
    pub base: f64,
    pub k_max: usize,
    pub fixed_point_tol: f64,
    pub max_iter: usize,
}

impl Default for WolffSchedule {
    fn default() -> Self {
        WolffSchedule {
            base: 2.0,
            k_max: 30,
            fixed_point_tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

impl WolffSchedule {
    pub fn alphas(&self) -> Vec<f64> {
        (1..=self.k_max)
            .map(|k| 1.0 - self.base.powi(-(k as i32)))
            .collect()
    }
}

/// Output of the Wolff construction for a fixed-point-free map.
#[derive(Debug, Clone)]
pub struct WolffData {
    pub alphas: Vec<f64>,
    pub residuals: Vec<f64>,
    pub iterations: Vec<usize>,
    pub seq: ApproachSequence,
    pub sigmas: WolffSigmas,
}

impl WolffData {
    pub fn xi(&self) -> &Element {
        self.seq.xi()
    }

    pub fn points(&self) -> &[Element] {
        self.seq.points()
    }
}

/// Run the full Wolff construction: fixed points `z_k` of `α_k f` along the
/// schedule, the limit ξ, and the frame/σ extraction.
///
/// Fails with a validation error when the map has an interior fixed point
/// (detected a posteriori through `‖z_K‖`).
pub fn wolff_construction(
    f: &MapExpr,
    space: &TripleSpace,
    schedule: &WolffSchedule,
) -> Result<WolffData> {
    let compiled = f.compile(space)?;
    let alphas = schedule.alphas();
    let mut points = Vec::with_capacity(alphas.len());
    let mut residuals = Vec::with_capacity(alphas.len());
    let mut iterations = Vec::with_capacity(alphas.len());
    let mut warm: Option<Element> = None;
    for &alpha in &alphas {
        let fp = earle_hamilton_fixed_point(
            &compiled,
            alpha,
            schedule.fixed_point_tol,
            schedule.max_iter,
            warm.as_ref(),
        )?;
        warm = Some(fp.point.clone());
        points.push(fp.point);
        residuals.push(fp.residual);
        iterations.push(fp.iterations);
    }
    let last_norm = points.last().expect("nonempty schedule").jb_norm();
    if last_norm < 1.0 - 1e-3 {
        return Err(CartanError::Validation(format!(
            "map has a fixed point: ‖z_K‖ = {last_norm} stays interior"
        )));
    }
    let seq = ApproachSequence::new(points)?;
    let sigmas = wolff_sigmas(&seq)?;
    Ok(WolffData {
        alphas,
        residuals,
        iterations,
        seq,
        sigmas,
    })
}

/// Measured (not asserted) stability of ξ under a change of schedule base.
pub fn wolff_schedule_stability(f: &MapExpr, space: &TripleSpace) -> Result<f64> {
    let w2 = wolff_construction(f, space, &WolffSchedule::default())?;
    let w3 = wolff_construction(
        f,
        space,
        &WolffSchedule {
            base: 3.0,
            k_max: 20,
            ..WolffSchedule::default()
        },
    )?;
    Ok((w2.xi() - w3.xi()).jb_norm())
}

/// A recorded forward orbit.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    /// `f^0(x₀), …, f^N(x₀)`.
    pub points: Vec<Element>,
    /// `1 − ‖f^n(x₀)‖`.
    pub boundary_gaps: Vec<f64>,
    /// `κ(f^{n+1}x₀, f^n x₀)`; non-increasing by the Schwarz–Pick inequality.
    pub kappa_steps: Vec<f64>,
}

impl OrbitRecord {
    /// Distance of every orbit point from the affine slice of the boundary
    /// component (the first entry of [`BoundaryComponent::slice_distance`]).
    pub fn slice_deviations(&self, component: &BoundaryComponent) -> Result<Vec<f64>> {
        self.points
            .iter()
            .map(|p| component.slice_distance(p).map(|d| d.0))
            .collect()
    }
}

pub fn iterate_orbit(f: &CompiledMap, x0: &Element, n: usize) -> Result<OrbitRecord> {
    if x0.jb_norm() >= 1.0 {
        return Err(CartanError::Domain("orbit start must be interior".into()));
    }
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0.clone());
    for _ in 0..n {
        let next = f.eval(points.last().expect("nonempty"))?;
        points.push(next);
    }
    let boundary_gaps: Vec<f64> = points.iter().map(|p| 1.0 - p.jb_norm()).collect();
    // κ-steps are recorded while the points stay numerically interior; once
    // an orbit has collapsed onto the boundary at machine precision the
    // hyperbolic step length is no longer computable and becomes NaN.
    let mut kappa_steps = Vec::with_capacity(n);
    for (i, w) in points.windows(2).enumerate() {
        if boundary_gaps[i] > 1e-12 && boundary_gaps[i + 1] > 1e-12 {
            kappa_steps.push(kobayashi_distance(&w[1], &w[0])?);
        } else {
            kappa_steps.push(f64::NAN);
        }
    }
    Ok(OrbitRecord {
        points,
        boundary_gaps,
        kappa_steps,
    })
}

/// The boundary component `K_e = e + V₀(e) ∩ D` of a tripotent, with its
/// Peirce-0 projection cached.
#[derive(Debug, Clone)]
pub struct BoundaryComponent {
    e: Tripotent,
    p0: LinearOp,
}

impl BoundaryComponent {
    pub fn new(e: Tripotent) -> Result<Self> {
        let p0 = peirce_projection(&e, 0)?;
        Ok(BoundaryComponent { e, p0 })
    }

    pub fn tripotent(&self) -> &Tripotent {
        &self.e
    }

    pub fn p0(&self) -> &LinearOp {
        &self.p0
    }

    /// `(slice_deviation, slice_norm)`: the distance of `x` from the affine
    /// slice `e + V₀(e)` and the size of its slice coordinate,
    /// `‖x − e − P₀(e)(x−e)‖` and `‖P₀(e)(x−e)‖`.
    pub fn slice_distance(&self, x: &Element) -> Result<(f64, f64)> {
        let d = x - self.e.element();
        let p = self.p0.apply(&d)?;
        Ok(((&d - &p).jb_norm(), p.jb_norm()))
    }
}

/// Coefficients of `x` on the frame of `a`, plus the residual supported on
/// the orthogonal complement; the closed-form Möbius iteration runs
/// coordinatewise on this data.
struct FrameCoordinates {
    alphas: Vec<f64>,
    frame: Vec<Element>,
    betas: Vec<C64>,
    residual: Element,
}

fn frame_coordinates(a: &Element, x: &Element) -> Result<FrameCoordinates> {
    a.check_same_space(x, "mobius closed form")?;
    let d = spectral_decompose(a)?;
    let alphas = d.coefficients();
    let frame: Vec<Element> = d.pairs().iter().map(|p| p.1.element().clone()).collect();
    let mut betas = Vec::with_capacity(frame.len());
    let mut residual = x.clone();
    for e in &frame {
        let beta = x.inner(e) / C64::new(e.l2_norm().powi(2), 0.0);
        betas.push(beta);
        residual = &residual - &e.scale(beta);
    }
    // the residual must be triple orthogonal to the frame for the map to act
    // coordinatewise; check through the residual's own tripotents
    if residual.jb_norm() > 1e-12 {
        let dr = spectral_decompose(&residual)?;
        for (_, u) in dr.pairs() {
            for e in &frame {
                if !are_orthogonal(u.element(), e, 1e-8)? {
                    return Err(CartanError::Validation(
                        "x is not compatible with the frame of a".into(),
                    ));
                }
            }
        }
    }
    for b in &betas {
        if b.norm() >= 1.0 {
            return Err(CartanError::Domain(
                "frame coordinate of x lies outside the disc".into(),
            ));
        }
    }
    Ok(FrameCoordinates {
        alphas,
        frame,
        betas,
        residual,
    })
}

/// `n`-th iterate of the one-dimensional Möbius map `g_α` at `β`, through the
/// half-plane multiplier `M = ((1+α)/(1−α))ⁿ`.
fn disc_mobius_iterate(alpha: f64, beta: C64, n: usize) -> C64 {
    if alpha == 0.0 || n == 0 {
        return beta;
    }
    let m = ((1.0 + alpha) / (1.0 - alpha)).powi(n as i32);
    if !m.is_finite() {
        return C64::new(1.0, 0.0);
    }
    let one = C64::new(1.0, 0.0);
    let t = (one + beta) / (one - beta);
    let w = t * m;
    (w - one) / (w + one)
}

/// `g_a^n(x) = Σ g_{α_j}^n(β_j) e_j` for `x = Σ β_j e_j` on the frame of `a`
/// (coordinates with `α_j = 0` are fixed).
pub fn mobius_orbit_closed_form(a: &Element, x: &Element, n: usize) -> Result<Element> {
    let fc = frame_coordinates(a, x)?;
    let mut out = fc.residual.clone();
    for ((alpha, e), beta) in fc.alphas.iter().zip(&fc.frame).zip(&fc.betas) {
        out = &out + &e.scale(disc_mobius_iterate(*alpha, *beta, n));
    }
    Ok(out)
}

/// Classification of `lim_n g_a^n(x)`.
#[derive(Debug, Clone)]
pub struct MobiusOrbitLimit {
    /// The limit point `Σ_{α_j>0} e_j + Σ_{α_j=0} β_j e_j`.
    pub limit: Element,
    /// The target tripotent `e = Σ_{α_j>0} e_j`.
    pub target: Tripotent,
    /// True when the limit function is the constant at a maximal tripotent
    /// (every iterate limit is the single point `e`).
    pub constant_maximal: bool,
    /// The preserved slice coordinate (the `α_j = 0` part of `x`).
    pub slice_part: Element,
}

pub fn mobius_orbit_limit(a: &Element, x: &Element) -> Result<MobiusOrbitLimit> {
    let fc = frame_coordinates(a, x)?;
    let space = a.space();
    let mut target = Element::zero(space);
    let mut slice = fc.residual.clone();
    for ((alpha, e), beta) in fc.alphas.iter().zip(&fc.frame).zip(&fc.betas) {
        if *alpha > 0.0 {
            target = &target + e;
        } else {
            slice = &slice + &e.scale(*beta);
        }
    }
    let target = Tripotent::new(target, 1e-8)?;
    let p0 = peirce_projection(&target, 0)?;
    let constant_maximal = p0.euclid_norm() <= 1e-9;
    let limit = &target.element().clone() + &slice;
    Ok(MobiusOrbitLimit {
        limit,
        target,
        constant_maximal,
        slice_part: slice,
    })
}

/// Per-orbit accumulation diagnostics against the target boundary component.
#[derive(Debug, Clone)]
pub struct OrbitSummary {
    pub final_deviation: f64,
    pub max_tail_deviation: f64,
    pub final_boundary_gap: f64,
}

/// Denjoy–Wolff style report: iterate each start and measure accumulation at
/// the boundary component of `e = Σ_{j∈J} e_j` from the Wolff construction.
#[derive(Debug, Clone)]
pub struct DenjoyWolffReport {
    pub wolff: WolffData,
    pub component: BoundaryComponent,
    pub orbits: Vec<OrbitSummary>,
    pub max_tail_deviation: f64,
}

pub fn denjoy_wolff_report(
    f: &MapExpr,
    space: &TripleSpace,
    starts: &[Element],
    n: usize,
) -> Result<DenjoyWolffReport> {
    let wolff = wolff_construction(f, space, &WolffSchedule::default())?;
    let e = Tripotent::new(wolff.sigmas.frame.sum(), 1e-8)?;
    let component = BoundaryComponent::new(e)?;
    let compiled = f.compile(space)?;
    let tail = (n / 5).clamp(1, 10);
    let mut orbits = Vec::with_capacity(starts.len());
    let mut worst: f64 = 0.0;
    for x0 in starts {
        let orbit = iterate_orbit(&compiled, x0, n)?;
        let devs = orbit.slice_deviations(&component)?;
        let final_deviation = *devs.last().expect("nonempty");
        let max_tail_deviation = devs[devs.len() - tail..]
            .iter()
            .copied()
            .fold(0.0f64, f64::max);
        worst = worst.max(max_tail_deviation);
        orbits.push(OrbitSummary {
            final_deviation,
            max_tail_deviation,
            final_boundary_gap: *orbit.boundary_gaps.last().expect("nonempty"),
        });
    }
    Ok(DenjoyWolffReport {
        wolff,
        component,
        orbits,
        max_tail_deviation: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVec;

    fn disc_el(space: &TripleSpace, v: f64) -> Element {
        Element::from_coords(space, CVec::from_vec(vec![C64::new(v, 0.0)])).unwrap()
    }

    #[test]
    fn constant_map_fixed_point() {
        let space = TripleSpace::disc();
        let c = disc_el(&space, 0.3);
        let f = MapExpr::Constant { c: c.clone() }.compile(&space).unwrap();
        let fp = earle_hamilton_fixed_point(&f, 0.5, 1e-12, 100, None).unwrap();
        assert!((&fp.point - &c.scale_re(0.5)).jb_norm() < 1e-12);
    }

    #[test]
    fn disc_quadratic_oracle_for_mobius_fixed_point() {
        // z = 0.9 g_{0.5}(z) has the interior root of 0.5z² + 0.1z − 0.45 = 0
        let space = TripleSpace::disc();
        let a = disc_el(&space, 0.5);
        let f = MapExpr::Mobius { a }.compile(&space).unwrap();
        let fp = earle_hamilton_fixed_point(&f, 0.9, 1e-13, 100_000, None).unwrap();
        let root = (-0.1 + (0.01f64 + 4.0 * 0.5 * 0.45).sqrt()) / 1.0;
        assert!(
            (fp.point.coords()[0].re - root).abs() < 1e-10,
            "fixed point {} vs oracle {root}",
            fp.point.coords()[0].re
        );
    }

    #[test]
    fn wolff_on_disc_mobius() {
        let space = TripleSpace::disc();
        let a = disc_el(&space, 0.5);
        let f = MapExpr::Mobius { a };
        let w = wolff_construction(&f, &space, &WolffSchedule::default()).unwrap();
        assert!(w.points().last().unwrap().jb_norm() >= 1.0 - 1e-4);
        assert!((w.xi().coords()[0].re - 1.0).abs() < 1e-6);
        assert_eq!(w.sigmas.sigmas, vec![1.0]);
    }

    #[test]
    fn wolff_detects_interior_fixed_points() {
        let space = TripleSpace::disc();
        let zero = Element::zero(&space);
        let f = MapExpr::Mobius { a: zero };
        let err = wolff_construction(&f, &space, &WolffSchedule::default());
        assert!(err.is_err());
        let g = MapExpr::ScalarScale { alpha: 0.9 };
        assert!(wolff_construction(&g, &space, &WolffSchedule::default()).is_err());
    }

    #[test]
    fn orbit_matches_closed_form_on_disc() {
        let space = TripleSpace::disc();
        let a = disc_el(&space, 0.5);
        let f = MapExpr::Mobius { a: a.clone() }.compile(&space).unwrap();
        let x0 = Element::zero(&space);
        let orbit = iterate_orbit(&f, &x0, 10).unwrap();
        // 0, 0.5, 0.8, ...
        assert!((orbit.points[1].coords()[0].re - 0.5).abs() < 1e-12);
        assert!((orbit.points[2].coords()[0].re - 0.8).abs() < 1e-12);
        for n in 0..=10 {
            let cf = mobius_orbit_closed_form(&a, &x0, n).unwrap();
            assert!((&cf - &orbit.points[n]).jb_norm() < 1e-10);
        }
        // κ-steps non-increasing
        for w in orbit.kappa_steps.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
    }

    #[test]
    fn bidisc_limit_keeps_slice_coordinate() {
        let space = TripleSpace::polydisc(2).unwrap();
        let a = Element::from_coords(
            &space,
            CVec::from_vec(vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0)]),
        )
        .unwrap();
        let x = Element::from_coords(
            &space,
            CVec::from_vec(vec![C64::new(0.0, 0.0), C64::new(0.3, 0.0)]),
        )
        .unwrap();
        let lim = mobius_orbit_limit(&a, &x).unwrap();
        assert!(!lim.constant_maximal);
        assert!((lim.limit.coords()[0].re - 1.0).abs() < 1e-12);
        assert!((lim.limit.coords()[1].re - 0.3).abs() < 1e-12);
    }

    #[test]
    fn rank2_all_positive_gives_maximal_limit() {
        let space = TripleSpace::polydisc(2).unwrap();
        let a = Element::from_coords(
            &space,
            CVec::from_vec(vec![C64::new(0.5, 0.0), C64::new(0.25, 0.0)]),
        )
        .unwrap();
        let x = Element::zero(&space);
        let lim = mobius_orbit_limit(&a, &x).unwrap();
        assert!(lim.constant_maximal);
        assert!((lim.limit.coords()[0].re - 1.0).abs() < 1e-12);
        assert!((lim.limit.coords()[1].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn denjoy_wolff_reports() {
        // disc: the tail deviation from {1} drops below 1e-3 by n = 40
        let disc = TripleSpace::disc();
        let f = MapExpr::Mobius {
            a: disc_el(&disc, 0.5),
        };
        let starts = vec![disc_el(&disc, 0.0), disc_el(&disc, -0.4)];
        let rep = denjoy_wolff_report(&f, &disc, &starts, 40).unwrap();
        assert!(rep.max_tail_deviation <= 1e-3, "{}", rep.max_tail_deviation);

        // bidisc Möbius with an identity second coordinate: still fixed-point
        // free (the first coordinate never settles); ξ = (1, 0) and only the
        // first slot enters the boundary frame
        let bidisc = TripleSpace::polydisc(2).unwrap();
        let a_second_idle = Element::from_coords(
            &bidisc,
            CVec::from_vec(vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0)]),
        )
        .unwrap();
        let w = wolff_construction(
            &MapExpr::Mobius { a: a_second_idle },
            &bidisc,
            &WolffSchedule::default(),
        )
        .unwrap();
        assert!((w.xi().coords()[0].re - 1.0).abs() < 1e-6);
        assert!(w.xi().coords()[1].norm() < 1e-9);
        assert_eq!(w.sigmas.frame.len(), 1);

        // direct sum with a strict contraction in the second slot: limit (1,0)
        let f2 = MapExpr::DirectSum {
            parts: vec![
                MapExpr::Mobius {
                    a: disc_el(&TripleSpace::disc(), 0.5),
                },
                MapExpr::ScalarScale { alpha: 0.9 },
            ],
        };
        let x0 = Element::from_coords(
            &bidisc,
            CVec::from_vec(vec![C64::new(0.1, 0.0), C64::new(0.6, 0.0)]),
        )
        .unwrap();
        let rep2 = denjoy_wolff_report(&f2, &bidisc, &[x0], 200).unwrap();
        assert!((rep2.wolff.xi().coords()[0].re - 1.0).abs() < 1e-6);
        assert!(rep2.wolff.xi().coords()[1].norm() < 1e-6);
        assert!(rep2.max_tail_deviation <= 1e-3);
        // the orbit's second coordinate contracts to 0 inside the slice
        let (dev, slice) = rep2
            .component
            .slice_distance(
                &Element::from_coords(
                    &bidisc,
                    CVec::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
                )
                .unwrap(),
            )
            .unwrap();
        assert!(dev < 1e-12 && slice < 1e-12);
    }

    #[test]
    fn tall_rectangular_factors_run_the_whole_pipeline() {
        // L(C^2, H) truncated to an 8x2 block: rank 2, taller than wide
        let space = TripleSpace::new(vec![crate::space::FactorKind::Rect { rows: 8, cols: 2 }])
            .unwrap();
        let a = crate::report::standard_mobius_parameter(&space, 17);
        let f = MapExpr::Mobius { a };
        let w = wolff_construction(&f, &space, &WolffSchedule::default()).unwrap();
        assert!((w.xi().jb_norm() - 1.0).abs() < 1e-6);
        assert!(w.sigmas.sigmas.iter().copied().fold(0.0f64, f64::max) == 1.0);
        let hb = crate::horoball::HoroballParams::new(
            w.sigmas.frame.clone(),
            w.sigmas.sigmas.clone(),
            1.0,
        )
        .unwrap();
        assert!(hb.contains(hb.center(), 1e-9).unwrap());
        let est = crate::horoball::horofunction(&Element::zero(&space), &w.seq).unwrap();
        assert!((est.value - 1.0).abs() < 1e-5);
    }

    #[test]
    fn wolff_of_composed_and_rotated_maps() {
        // rotated hyperbolic disc map: f = e^{iθ} g_a has a boundary Wolff
        // point away from 1; the construction must find a unit-norm ξ that f
        // itself fixes
        let disc = TripleSpace::disc();
        let theta: f64 = 0.3;
        let rot = MapExpr::LinearIsometry {
            matrix: vec![theta.cos(), theta.sin()],
        };
        let f = MapExpr::compose(rot, MapExpr::Mobius { a: disc_el(&disc, 0.5) });
        let w = wolff_construction(&f, &disc, &WolffSchedule::default()).unwrap();
        let xi = w.xi().clone();
        assert!((xi.jb_norm() - 1.0).abs() < 1e-9);
        assert!((xi.coords()[0] - C64::new(1.0, 0.0)).norm() > 0.1, "ξ must rotate away from 1");
        let compiled = f.compile(&disc).unwrap();
        let fxi = compiled.eval(&xi).unwrap();
        assert!((&fxi - &xi).jb_norm() < 1e-6, "ξ is not fixed by f");

        // composition of two Möbius maps along the same axis stays fixed-point
        // free and shares the attracting frame
        let space = TripleSpace::new(vec![crate::space::FactorKind::Rect { rows: 2, cols: 2 }])
            .unwrap();
        let a = crate::report::standard_mobius_parameter(&space, 77);
        let g2 = MapExpr::compose(
            MapExpr::Mobius { a: a.scale_re(0.5) },
            MapExpr::Mobius { a: a.clone() },
        );
        let w2 = wolff_construction(&g2, &space, &WolffSchedule::default()).unwrap();
        let w1 = wolff_construction(
            &MapExpr::Mobius { a },
            &space,
            &WolffSchedule::default(),
        )
        .unwrap();
        assert!((w1.xi() - w2.xi()).jb_norm() < 1e-5);

        // constant maps have their value as an interior fixed point
        let c = MapExpr::Constant { c: disc_el(&disc, 0.3) };
        assert!(wolff_construction(&c, &disc, &WolffSchedule::default()).is_err());
    }

    #[test]
    fn mobius_orbit_of_pure_bidisc_mobius_keeps_slice() {
        // iterating g_a on the bidisc with a = (0.5, 0): the limit function
        // has value (1, β₂), the whole boundary component of e₁
        let bidisc = TripleSpace::polydisc(2).unwrap();
        let a = Element::from_coords(
            &bidisc,
            CVec::from_vec(vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0)]),
        )
        .unwrap();
        let x = Element::from_coords(
            &bidisc,
            CVec::from_vec(vec![C64::new(-0.2, 0.0), C64::new(0.25, -0.3)]),
        )
        .unwrap();
        let f = MapExpr::Mobius { a: a.clone() }.compile(&bidisc).unwrap();
        let orbit = iterate_orbit(&f, &x, 60).unwrap();
        let last = orbit.points.last().unwrap();
        assert!((last.coords()[0].re - 1.0).abs() < 1e-9);
        assert!((last.coords()[1] - C64::new(0.25, -0.3)).norm() < 1e-12);
        let lim = mobius_orbit_limit(&a, &x).unwrap();
        assert!((&lim.limit - last).jb_norm() < 1e-9);
    }

    #[test]
    fn boundary_component_of_disc() {
        let space = TripleSpace::disc();
        let one = disc_el(&space, 1.0);
        let e = Tripotent::new(one, 1e-10).unwrap();
        let comp = BoundaryComponent::new(e).unwrap();
        let x = disc_el(&space, 0.4);
        let (dev, slice) = comp.slice_distance(&x).unwrap();
        assert!((dev - 0.6).abs() < 1e-12);
        assert!(slice < 1e-12);
    }

    #[test]
    fn direct_sum_map_and_isometry_validation() {
        let space = TripleSpace::polydisc(2).unwrap();
        let f = MapExpr::DirectSum {
            parts: vec![
                MapExpr::Mobius {
                    a: disc_el(&TripleSpace::disc(), 0.5),
                },
                MapExpr::ScalarScale { alpha: 0.9 },
            ],
        };
        let compiled = f.compile(&space).unwrap();
        let z = Element::from_coords(
            &space,
            CVec::from_vec(vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0)]),
        )
        .unwrap();
        let w = compiled.eval(&z).unwrap();
        assert!((w.coords()[0].re - 0.5).abs() < 1e-12);
        assert!((w.coords()[1].re - 0.45).abs() < 1e-12);

        // a non-isometry must be rejected
        let bad = MapExpr::LinearIsometry {
            matrix: vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0],
        };
        assert!(bad.compile(&space).is_err());
        // a phase rotation is accepted
        let theta: f64 = 0.7;
        let rot = MapExpr::LinearIsometry {
            matrix: vec![
                theta.cos(),
                theta.sin(),
                0.0,
                0.0,
                0.0,
                0.0,
                theta.cos(),
                theta.sin(),
            ],
        };
        assert!(rot.compile(&space).is_ok());
    }
}
