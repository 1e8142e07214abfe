//! Smooth perturbed lifts of the trace maps through the semiconjugacy.
//!
//! For coupling `λ > 0` the spectral dynamics lives on the Fricke level set
//! `I = 1 + λ²/4`, a graph over the central surface `I = 1` along its normal
//! lines. Conjugating the digit-`a` trace map by that normal projection and
//! by the semiconjugacy `F` produces a circle-valued perturbation `T̃` of the
//! toral automorphism `A_a`. Near the four half-lattice points the
//! conjugation degenerates — at the source, where `F` folds, and equally
//! where the *image* approaches a half-lattice point, because there the
//! trace-map image sits past the neck of the perturbed surface and its
//! normal foot point exits the fundamental cube. Over an annulus in the
//! smaller of those two distances the map is blended back into the exact
//! linear model, giving a map `T̂` that is globally defined, smooth, exactly
//! linear in small disks around the degeneracy set, and exactly semiconjugate
//! to the trace map away from it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::contfrac::ContinuedFraction;
use crate::error::CoreError;
use crate::math;
use crate::surface::{fricke, fricke_gradient, fricke_level, trace_map_apply, TriplePoint};
use crate::torus::linear::{semiconjugacy_f, torus_apply};

/// Largest coupling the conjugation pipeline accepts without an explicit
/// override: beyond this the normal projection and branch selection are no
/// longer certifiably well posed.
pub const LAMBDA_GUARD: f64 = 0.2;

/// Default inner blend radius: inside this distance from a half-lattice
/// point the map is exactly linear.
pub const DEFAULT_BLEND_INNER: f64 = 0.04;

/// Default outer blend radius: outside this distance the map is the pure
/// conjugated perturbation.
pub const DEFAULT_BLEND_OUTER: f64 = 0.08;

/// Default tolerance for the normal-line lifts and projections.
pub const DEFAULT_PROJECTION_TOL: f64 = 1e-12;

/// Default branch window: a preimage candidate must land this close (torus
/// metric) to the linear prediction to be accepted.
pub const DEFAULT_BRANCH_WINDOW: f64 = 0.05;

/// The four half-lattice points `Q_1..Q_4`, the images of the singular
/// points of the central surface under the inverse semiconjugacy.
pub const HOLE_CENTERS: [[f64; 2]; 4] = [[0.0, 0.0], [0.5, 0.0], [0.5, 0.5], [0.0, 0.5]];

/// Tuning knobs for [`PerturbedMapFamily::build_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbOptions {
    /// Radius of exact linearity around each half-lattice point.
    pub blend_inner: f64,
    /// Radius beyond which the map is the pure conjugated perturbation.
    pub blend_outer: f64,
    /// Tolerance of the normal-line root solves and of the final
    /// inverse-semiconjugacy polish.
    pub projection_tol: f64,
    /// Torus-metric window around the linear prediction for branch
    /// selection.
    pub branch_window: f64,
    /// Accept couplings beyond [`LAMBDA_GUARD`] (used by negative-control
    /// experiments; the pipeline may legitimately fail there).
    pub allow_large_lambda: bool,
}

impl Default for PerturbOptions {
    fn default() -> Self {
        PerturbOptions {
            blend_inner: DEFAULT_BLEND_INNER,
            blend_outer: DEFAULT_BLEND_OUTER,
            projection_tol: DEFAULT_PROJECTION_TOL,
            branch_window: DEFAULT_BRANCH_WINDOW,
            allow_large_lambda: false,
        }
    }
}

/// The blended perturbed map `T̂_{λ,a}` for one digit at one coupling.
///
/// Built by [`build`](PerturbedMapFamily::build); applied pointwise by
/// [`apply`](PerturbedMapFamily::apply). At `λ = 0` the map short-circuits
/// to the exact toral automorphism (bit for bit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbedMapFamily {
    lambda: f64,
    a: u32,
    rho: f64,
    opts: PerturbOptions,
}

/// Wrap both coordinates into `[0, 1)`.
fn wrap_point(p: [f64; 2]) -> [f64; 2] {
    [math::fract1(p[0]), math::fract1(p[1])]
}

/// Torus (sup-wrap Euclidean) distance between two points.
fn torus_dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    math::hypot(math::wrap_half(p[0] - q[0]), math::wrap_half(p[1] - q[1]))
}

/// Distance from `p` to the nearest half-lattice point.
pub fn hole_distance(p: [f64; 2]) -> f64 {
    let mut best = f64::INFINITY;
    for q in HOLE_CENTERS {
        let d = torus_dist(p, q);
        if d < best {
            best = d;
        }
    }
    best
}

/// Quintic smoothstep: 0 for `s <= 0`, 1 for `s >= 1`, C² monotone between.
fn smoothstep5(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * s * (6.0 * s * s - 15.0 * s + 10.0)
}

impl PerturbedMapFamily {
    /// Build the digit-`a` perturbed map at coupling `lambda`, tagged with
    /// the survival-region scale `rho`, with default options.
    pub fn build(lambda: f64, a: u32, rho: f64) -> Result<Self, CoreError> {
        Self::build_with(lambda, a, rho, PerturbOptions::default())
    }

    /// Build with explicit options. Validates `lambda >= 0`, `a >= 1`,
    /// `rho` in (0, 1), `0 < blend_inner < blend_outer < 1/10`, and the
    /// coupling guard (`lambda <= 0.2` unless overridden).
    pub fn build_with(
        lambda: f64,
        a: u32,
        rho: f64,
        opts: PerturbOptions,
    ) -> Result<Self, CoreError> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(CoreError::InvalidInput("lambda must be finite and >= 0"));
        }
        if a == 0 {
            return Err(CoreError::InvalidInput("digit must be a positive integer"));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(CoreError::InvalidInput("rho must lie in (0, 1)"));
        }
        if !(opts.blend_inner > 0.0 && opts.blend_inner < opts.blend_outer) {
            return Err(CoreError::InvalidInput(
                "blend radii must satisfy 0 < inner < outer",
            ));
        }
        if !(opts.blend_outer < 0.1) {
            return Err(CoreError::InvalidInput(
                "outer blend radius must stay below 1/10",
            ));
        }
        if !(opts.projection_tol > 0.0 && opts.projection_tol <= 1e-6) {
            return Err(CoreError::InvalidInput(
                "projection tolerance must lie in (0, 1e-6]",
            ));
        }
        if !(opts.branch_window > 0.0 && opts.branch_window < 0.25) {
            return Err(CoreError::InvalidInput(
                "branch window must lie in (0, 1/4)",
            ));
        }
        if lambda > LAMBDA_GUARD && !opts.allow_large_lambda {
            return Err(CoreError::LambdaGuard {
                lambda,
                guard: LAMBDA_GUARD,
            });
        }
        Ok(PerturbedMapFamily {
            lambda,
            a,
            rho,
            opts,
        })
    }

    /// The coupling `λ`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The digit `a`.
    pub fn digit(&self) -> u32 {
        self.a
    }

    /// The survival-region scale this family is tagged with.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// The options the family was built with.
    pub fn options(&self) -> PerturbOptions {
        self.opts
    }

    /// Apply the blended map to a torus point.
    ///
    /// Outside the outer blend radius this is the conjugated perturbation
    /// `F_λ^{-1} ∘ T_a ∘ F_λ`; inside the inner radius it is exactly the
    /// linear model; in the annulus the two are mixed componentwise on the
    /// circle through a quintic smoothstep in the radial variable. The
    /// radial variable is the smaller of two half-lattice distances: that of
    /// the point itself and that of its linear image. The second term is
    /// forced: the conjugation degenerates not only where `F` folds at the
    /// source but also where the trace-map image crosses the neck of the
    /// perturbed surface near a singular point — there its normal-line
    /// foot point leaves the fundamental cube and no inverse through `F`
    /// exists, so the map must already be linear before the image gets that
    /// close. At `λ = 0` the linear model is returned directly.
    pub fn apply(&self, p: [f64; 2]) -> Result<[f64; 2], CoreError> {
        if !(p[0].is_finite() && p[1].is_finite()) {
            return Err(CoreError::InvalidInput("point must be finite"));
        }
        let p = wrap_point(p);
        let lin = torus_apply(self.a, p);
        if self.lambda == 0.0 {
            return Ok(lin);
        }
        let r = hole_distance(p).min(hole_distance(lin));
        if r <= self.opts.blend_inner {
            return Ok(lin);
        }
        let conj = self.conjugated_image(p, lin)?;
        if r >= self.opts.blend_outer {
            return Ok(conj);
        }
        let s = (r - self.opts.blend_inner) / (self.opts.blend_outer - self.opts.blend_inner);
        let w = smoothstep5(s);
        Ok([
            math::fract1(lin[0] + w * math::wrap_half(conj[0] - lin[0])),
            math::fract1(lin[1] + w * math::wrap_half(conj[1] - lin[1])),
        ])
    }

    /// The pure conjugated image (no blending): lift through `F` to the
    /// level `1 + λ²/4`, apply the trace map, project back to the central
    /// surface along its normals, and invert `F` on the branch selected by
    /// the linear prediction.
    fn conjugated_image(&self, p: [f64; 2], lin: [f64; 2]) -> Result<[f64; 2], CoreError> {
        let y0 = semiconjugacy_f(p[0], p[1]);
        let lifted = self.lift_to_level(&y0)?;
        let w = trace_map_apply(self.a, &lifted);
        let w0 = self.project_to_central(&w)?;
        self.invert_semiconjugacy(&w0, lin)
    }

    /// Move a central-surface point along the outward normal of the Fricke
    /// invariant until it reaches the level `1 + λ²/4`.
    fn lift_to_level(&self, y: &TriplePoint) -> Result<TriplePoint, CoreError> {
        let level = fricke_level(self.lambda);
        let g = fricke_gradient(y);
        let gn = math::hypot(math::hypot(g[0], g[1]), g[2]);
        if !(gn > 1e-9) {
            return Err(CoreError::ProjectionFailed {
                point: [y.x1, y.x2, y.x3],
            });
        }
        let n = [g[0] / gn, g[1] / gn, g[2] / gn];
        let at = |t: f64| TriplePoint {
            x1: y.x1 + t * n[0],
            x2: y.x2 + t * n[1],
            x3: y.x3 + t * n[2],
        };
        let mut f = |t: f64| {
            let q = at(t);
            let gq = fricke_gradient(&q);
            (
                fricke(&q) - level,
                gq[0] * n[0] + gq[1] * n[1] + gq[2] * n[2],
            )
        };
        let f0 = f(0.0).0; // = 1 - level = -λ²/4 < 0
        let mut hi = self.lambda;
        let mut fhi = f(hi).0;
        let mut grow = 0;
        while fhi < 0.0 && grow < 4 {
            hi *= 2.0;
            fhi = f(hi).0;
            grow += 1;
        }
        let t = math::newton_bisect(&mut f, 0.0, hi, f0, fhi, self.opts.projection_tol, 80)
            .ok_or(CoreError::RootFindFailed {
                what: "normal lift to the coupled level",
                at: y.x1,
            })?;
        Ok(at(t))
    }

    /// Foot-point projection of a near-surface point onto the central
    /// surface `I = 1`: alternate between the local normal direction and a
    /// 1-d root solve along it until the point stops moving.
    fn project_to_central(&self, w: &TriplePoint) -> Result<TriplePoint, CoreError> {
        let mut y = *w;
        for _ in 0..60 {
            let g = fricke_gradient(&y);
            let gn = math::hypot(math::hypot(g[0], g[1]), g[2]);
            if !(gn > 1e-9) {
                return Err(CoreError::ProjectionFailed {
                    point: [w.x1, w.x2, w.x3],
                });
            }
            let n = [g[0] / gn, g[1] / gn, g[2] / gn];
            let at = |s: f64| TriplePoint {
                x1: w.x1 - s * n[0],
                x2: w.x2 - s * n[1],
                x3: w.x3 - s * n[2],
            };
            let mut f = |s: f64| {
                let q = at(s);
                let gq = fricke_gradient(&q);
                (
                    fricke(&q) - 1.0,
                    -(gq[0] * n[0] + gq[1] * n[1] + gq[2] * n[2]),
                )
            };
            let f0 = f(0.0).0; // = λ²/4 > 0 for points on the coupled level
            if f0 == 0.0 {
                return Ok(*w);
            }
            let dir = f0.signum();
            let mut hi = self.lambda.max(1e-8) * dir;
            let mut fhi = f(hi).0;
            let mut grow = 0;
            while fhi.signum() == f0.signum() && grow < 12 {
                hi *= 2.0;
                fhi = f(hi).0;
                grow += 1;
            }
            if fhi.signum() == f0.signum() {
                return Err(CoreError::ProjectionFailed {
                    point: [w.x1, w.x2, w.x3],
                });
            }
            let s = math::newton_bisect(
                &mut f,
                0.0,
                hi,
                f0,
                fhi,
                self.opts.projection_tol,
                80,
            )
            .ok_or(CoreError::RootFindFailed {
                what: "normal projection to the central level",
                at: w.x1,
            })?;
            let next = at(s);
            let moved = (next.x1 - y.x1)
                .abs()
                .max((next.x2 - y.x2).abs())
                .max((next.x3 - y.x3).abs());
            y = next;
            if moved < self.opts.projection_tol {
                return Ok(y);
            }
        }
        Err(CoreError::ProjectionFailed {
            point: [w.x1, w.x2, w.x3],
        })
    }

    /// Invert `F` at a central-surface point, choosing among the arccos
    /// branch candidates by closeness to the linear prediction.
    ///
    /// Every candidate is polished by Gauss-Newton on `|F(x,y) - target|²`
    /// (the raw arccos loses half the working precision near the folds);
    /// polished candidates that coincide are merged before the branch rules
    /// run, so the fold-line degeneracy does not masquerade as ambiguity.
    fn invert_semiconjugacy(
        &self,
        target: &TriplePoint,
        pred: [f64; 2],
    ) -> Result<[f64; 2], CoreError> {
        const COORD_SLACK: f64 = 1e-6;
        if target.x2.abs() > 1.0 + COORD_SLACK || target.x3.abs() > 1.0 + COORD_SLACK {
            return Err(CoreError::ProjectionFailed {
                point: [target.x1, target.x2, target.x3],
            });
        }
        let two_pi = 2.0 * core::f64::consts::PI;
        let x0 = math::acos(target.x2.clamp(-1.0, 1.0)) / two_pi;
        let y0 = math::acos(target.x3.clamp(-1.0, 1.0)) / two_pi;
        let raw = [
            [x0, y0],
            [x0, 1.0 - y0],
            [1.0 - x0, y0],
            [1.0 - x0, 1.0 - y0],
        ];
        let accept = (1e3 * self.opts.projection_tol).max(1e-9);
        let mut polished: Vec<([f64; 2], f64)> = Vec::new();
        for c in raw {
            if let Some(q) = gauss_newton_invert(c, target, accept) {
                if !polished.iter().any(|(p, _)| torus_dist(*p, q) < 1e-9) {
                    polished.push((q, torus_dist(q, pred)));
                }
            }
        }
        if polished.is_empty() {
            return Err(CoreError::ProjectionFailed {
                point: [target.x1, target.x2, target.x3],
            });
        }
        polished.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("distances are finite"));
        let (best, best_d) = polished[0];
        if best_d > self.opts.branch_window {
            return Err(CoreError::NoBranchCandidate {
                point: pred,
                best: best_d,
            });
        }
        if polished.len() > 1 {
            let (_, second_d) = polished[1];
            if second_d < self.opts.branch_window && second_d < 2.0 * best_d {
                return Err(CoreError::AmbiguousBranch {
                    point: pred,
                    best: best_d,
                    runner_up: second_d,
                });
            }
        }
        Ok(best)
    }

    /// Defect of the semiconjugacy at `p`: `|F_λ(T̂(p)) - T_a(F_λ(p))|_∞`,
    /// where `F_λ` lifts `F` to the coupled level along the central
    /// surface's normals. Outside the blend annulus this is pinned to the
    /// projection tolerance; inside, the blend deliberately breaks it.
    pub fn semiconjugacy_residual(&self, p: [f64; 2]) -> Result<f64, CoreError> {
        let p = wrap_point(p);
        let im = self.apply(p)?;
        let flam = |q: [f64; 2]| -> Result<TriplePoint, CoreError> {
            let y = semiconjugacy_f(q[0], q[1]);
            if self.lambda == 0.0 {
                Ok(y)
            } else {
                self.lift_to_level(&y)
            }
        };
        let lhs = flam(im)?;
        let rhs = trace_map_apply(self.a, &flam(p)?);
        Ok((lhs.x1 - rhs.x1)
            .abs()
            .max((lhs.x2 - rhs.x2).abs())
            .max((lhs.x3 - rhs.x3).abs()))
    }
}

/// Gauss-Newton polish of an approximate `F`-preimage. Returns the wrapped
/// torus point if the final residual `|F(x,y) - target|_∞` is at most
/// `accept`, otherwise None.
fn gauss_newton_invert(start: [f64; 2], target: &TriplePoint, accept: f64) -> Option<[f64; 2]> {
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut x = start[0];
    let mut y = start[1];
    let mut best: Option<([f64; 2], f64)> = None;
    for _ in 0..12 {
        let sxy = math::sin(two_pi * (x + y));
        let sx = math::sin(two_pi * x);
        let sy = math::sin(two_pi * y);
        let r = [
            math::cos(two_pi * (x + y)) - target.x1,
            math::cos(two_pi * x) - target.x2,
            math::cos(two_pi * y) - target.x3,
        ];
        let res = r[0].abs().max(r[1].abs()).max(r[2].abs());
        if best.is_none_or(|(_, b)| res < b) {
            best = Some(([x, y], res));
        }
        if res < 1e-15 {
            break;
        }
        // J = -2π M with M = [[s_{x+y}, s_{x+y}], [s_x, 0], [0, s_y]], so
        // the Gauss-Newton step δ = -(JᵀJ)⁻¹Jᵀr reduces to
        // δ = (MᵀM)⁻¹ Mᵀ r / 2π.
        let a11 = sxy * sxy + sx * sx;
        let a12 = sxy * sxy;
        let a22 = sxy * sxy + sy * sy;
        let b1 = sxy * r[0] + sx * r[1];
        let b2 = sxy * r[0] + sy * r[2];
        let det = a11 * a22 - a12 * a12;
        if det.abs() < 1e-30 {
            break;
        }
        let dx = (b1 * a22 - b2 * a12) / (det * two_pi);
        let dy = (b2 * a11 - b1 * a12) / (det * two_pi);
        if !(dx.is_finite() && dy.is_finite()) {
            break;
        }
        x += dx;
        y += dy;
        if dx.abs().max(dy.abs()) < 1e-16 {
            break;
        }
    }
    let (p, res) = best?;
    if res <= accept {
        Some(wrap_point(p))
    } else {
        None
    }
}

/// Report of [`common_orbit_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct CommonOrbitReport {
    /// Whether every perturbed step agreed with the exact linear orbit to
    /// within 1e-9 (torus metric).
    pub equal: bool,
    /// Number of distinct points the exact orbit visited.
    pub orbit_size: usize,
    /// Largest per-step deviation observed.
    pub max_deviation: f64,
}

/// Follow the orbit of `(1/4, 1/4)` for `n` steps under both the perturbed
/// maps `T̂_{λ,a_k}` and the exact linear models (in exact rational
/// arithmetic), digit by digit.
///
/// The quarter-lattice orbit is a common orbit of the two families: it
/// stays at least `√2/4` away from every half-lattice point (so the blend
/// never engages) and its fibers are unambiguous, so the perturbed orbit
/// reproduces the linear one to projection accuracy. The exact orbit lives
/// on the 16-point quarter lattice.
pub fn common_orbit_check(
    lambda: f64,
    digits: &ContinuedFraction,
    n: usize,
) -> Result<CommonOrbitReport, CoreError> {
    use alloc::collections::BTreeSet;
    if n == 0 {
        return Err(CoreError::InvalidInput("need at least one step"));
    }
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    let mut exact = (quarter.clone(), quarter.clone());
    let mut approx = [0.25_f64, 0.25];
    let mut families: BTreeMap<u32, PerturbedMapFamily> = BTreeMap::new();
    let mut visited: BTreeSet<(BigRational, BigRational)> = BTreeSet::new();
    visited.insert(exact.clone());
    let mut equal = true;
    let mut max_dev = 0.0_f64;
    for k in 1..=n {
        let a = digits
            .digit(k)
            .ok_or(CoreError::InvalidInput("digit sequence exhausted"))?;
        let fam = match families.get(&a) {
            Some(f) => *f,
            None => {
                let f = PerturbedMapFamily::build(lambda, a, 0.3)?;
                families.insert(a, f);
                f
            }
        };
        approx = fam.apply(approx)?;
        exact = (
            fract_rational(&(BigRational::from_integer(a.into()) * &exact.0 + &exact.1)),
            exact.0.clone(),
        );
        visited.insert(exact.clone());
        let ex = [
            exact.0.to_f64().expect("quarter-lattice coordinate"),
            exact.1.to_f64().expect("quarter-lattice coordinate"),
        ];
        let dev = torus_dist(approx, ex);
        if dev > max_dev {
            max_dev = dev;
        }
        if !(dev < 1e-9) {
            equal = false;
        }
    }
    Ok(CommonOrbitReport {
        equal,
        orbit_size: visited.len(),
        max_deviation: max_dev,
    })
}

/// Fractional part of an exact rational, in [0, 1).
fn fract_rational(q: &BigRational) -> BigRational {
    let f = q.fract();
    if f.is_negative() {
        f + BigRational::from_integer(1.into())
    } else {
        f
    }
}

/// Largest two-sided length-distortion ratio along an iterated polyline.
///
/// The polyline `curve` is pushed through `T̂_{λ,a_1}, ..., T̂_{λ,a_m}`
/// (digits read from `digits`). After every step the image must stay within
/// one chart box (wrap-aware coordinate spread at most 0.2), else
/// [`CoreError::CurveLeftBox`] reports the step. The result is
/// `max_i max(R(i), 1/R(i))` over interior vertices, where `R(i)` compares
/// the arclength fraction up to vertex `i` before and after the iteration.
/// Straight segments under the `λ = 0` linear model give exactly 1.
pub fn distortion_ratio(
    lambda: f64,
    curve: &[[f64; 2]],
    digits: &ContinuedFraction,
    m: usize,
) -> Result<f64, CoreError> {
    if curve.len() < 3 {
        return Err(CoreError::InvalidInput(
            "polyline needs at least three vertices",
        ));
    }
    if m == 0 {
        return Err(CoreError::InvalidInput("need at least one iteration"));
    }
    let src: Vec<[f64; 2]> = curve.iter().map(|p| wrap_point(*p)).collect();
    if spread(&src) > 0.2 {
        return Err(CoreError::InvalidInput(
            "source polyline exceeds one chart box",
        ));
    }
    let mut img = src.clone();
    let mut families: BTreeMap<u32, PerturbedMapFamily> = BTreeMap::new();
    for k in 1..=m {
        let a = digits
            .digit(k)
            .ok_or(CoreError::InvalidInput("digit sequence exhausted"))?;
        let fam = match families.get(&a) {
            Some(f) => *f,
            None => {
                let f = PerturbedMapFamily::build(lambda, a, 0.3)?;
                families.insert(a, f);
                f
            }
        };
        for p in img.iter_mut() {
            *p = fam.apply(*p)?;
        }
        if spread(&img) > 0.2 {
            return Err(CoreError::CurveLeftBox { step: k });
        }
    }
    let cum_src = cumulative_lengths(&src);
    let cum_img = cumulative_lengths(&img);
    let total_src = *cum_src.last().expect("nonempty");
    let total_img = *cum_img.last().expect("nonempty");
    if !(total_src > 0.0 && total_img > 0.0) {
        return Err(CoreError::InvalidInput("polyline has zero length"));
    }
    let mut worst = 1.0_f64;
    for i in 1..curve.len() - 1 {
        let fs = cum_src[i] / total_src;
        let fi = cum_img[i] / total_img;
        if fs <= 0.0 || fi <= 0.0 {
            continue;
        }
        let r = fi / fs;
        worst = worst.max(r.max(1.0 / r));
    }
    Ok(worst)
}

/// Wrap-aware coordinate spread of a point cloud: the larger over the two
/// coordinates of the range of wrapped offsets from the first point.
fn spread(pts: &[[f64; 2]]) -> f64 {
    let anchor = pts[0];
    let mut lo = [0.0_f64; 2];
    let mut hi = [0.0_f64; 2];
    for p in pts {
        for c in 0..2 {
            let d = math::wrap_half(p[c] - anchor[c]);
            lo[c] = lo[c].min(d);
            hi[c] = hi[c].max(d);
        }
    }
    (hi[0] - lo[0]).max(hi[1] - lo[1])
}

/// Cumulative wrap-aware arclengths along a polyline.
fn cumulative_lengths(pts: &[[f64; 2]]) -> Vec<f64> {
    let mut out = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in pts.windows(2) {
        acc += torus_dist(w[0], w[1]);
        out.push(acc);
    }
    out
}
