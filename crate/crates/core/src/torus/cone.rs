//! Invariant cone fields and expansion certificates for the digit matrices.
//!
//! A one-parameter family of plane cones `K_β` (β in (0, 1/10]) is spanned
//! by `v1 = (1, -β)` and `v2 = (1, 1+2β)`. Every digit matrix `A_a` maps
//! `K_β \ {0}` strictly inside `K_β` and expands its directions by at least
//! `μ̄_β = sqrt((1-β)² + 1) / sqrt(β² + 1) > 1`, uniformly in `a`. The
//! checks here sample that claim densely (boundary rays included) and
//! measure the actual expansion range; an overflow check verifies the
//! box-crossing property that makes the cone family usable for the
//! perturbed maps as well.

use crate::error::CoreError;
use crate::math;
use crate::torus::linear::DigitMatrix;
use crate::torus::perturbed::PerturbedMapFamily;

/// Reference opening parameter: the cone `K_{β₀}` used by the
/// hyperbolicity certificates. Its opening angle stays below π/3 and its
/// guaranteed expansion is at least `√2 - 0.01`.
pub const BETA0: f64 = 0.01;

/// The plane cone `K_β` spanned by `(1, -β)` and `(1, 1+2β)`, symmetric
/// under `v -> -v`, together with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec {
    beta: f64,
    mu_bar: f64,
    theta0: f64,
}

impl ConeSpec {
    /// Build the cone for opening parameter `beta` in (0, 1/10].
    pub fn new(beta: f64) -> Result<ConeSpec, CoreError> {
        if !(beta > 0.0 && beta <= 0.1) {
            return Err(CoreError::InvalidInput("beta must lie in (0, 1/10]"));
        }
        let mu_bar = math::sqrt((1.0 - beta) * (1.0 - beta) + 1.0) / math::sqrt(beta * beta + 1.0);
        let theta0 = math::atan(1.0 + 2.0 * beta) + math::atan(beta);
        Ok(ConeSpec {
            beta,
            mu_bar,
            theta0,
        })
    }

    /// The reference cone `K_{β₀}` with `β₀ = 0.01`.
    pub fn reference() -> ConeSpec {
        ConeSpec::new(BETA0).expect("reference beta is valid")
    }

    /// The opening parameter β.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// First spanning ray, `(1, -β)`.
    pub fn v1(&self) -> [f64; 2] {
        [1.0, -self.beta]
    }

    /// Second spanning ray, `(1, 1+2β)`.
    pub fn v2(&self) -> [f64; 2] {
        [1.0, 1.0 + 2.0 * self.beta]
    }

    /// Central direction `v1 + v2 = (2, 1+β)`, the cone's bisecting axis V.
    pub fn v0(&self) -> [f64; 2] {
        [2.0, 1.0 + self.beta]
    }

    /// Guaranteed minimal expansion `μ̄_β = sqrt((1-β)²+1)/sqrt(β²+1)` of
    /// every digit matrix on the cone. Exceeds 1 for all admissible β and
    /// tends to √2 as β -> 0.
    pub fn mu_bar(&self) -> f64 {
        self.mu_bar
    }

    /// Opening angle `atan(1+2β) + atan(β)` between the spanning rays.
    /// Tends to π/4 as β -> 0 and stays below π/3 for admissible β.
    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// Coordinates of `w` in the spanning basis: `w = c1 v1 + c2 v2` with
    /// `c1 = ((1+2β) w1 - w2) / (1+3β)` and `c2 = (β w1 + w2) / (1+3β)`.
    pub fn coordinates(&self, w: [f64; 2]) -> [f64; 2] {
        let det = 1.0 + 3.0 * self.beta;
        [
            ((1.0 + 2.0 * self.beta) * w[0] - w[1]) / det,
            (self.beta * w[0] + w[1]) / det,
        ]
    }

    /// Closed-cone membership: the spanning coordinates carry equal signs
    /// (or one of them vanishes). The zero vector is contained.
    pub fn contains(&self, w: [f64; 2]) -> bool {
        let c = self.coordinates(w);
        c[0] * c[1] >= 0.0
    }

    /// Open-cone membership: both spanning coordinates strictly positive or
    /// both strictly negative.
    pub fn strictly_contains(&self, w: [f64; 2]) -> bool {
        let c = self.coordinates(w);
        c[0] * c[1] > 0.0
    }

    /// Unit directions fanning the closed cone: `count >= 2` rays from the
    /// `v1` boundary to the `v2` boundary, both included exactly, the rest
    /// equally spaced in angle.
    pub fn direction_fan(&self, count: usize) -> impl Iterator<Item = [f64; 2]> + '_ {
        assert!(count >= 2, "a fan needs at least its two boundary rays");
        let t1 = math::atan2(-self.beta, 1.0);
        let t2 = math::atan2(1.0 + 2.0 * self.beta, 1.0);
        (0..count).map(move |i| {
            if i == 0 {
                unit(self.v1())
            } else if i == count - 1 {
                unit(self.v2())
            } else {
                let t = t1 + (t2 - t1) * i as f64 / (count - 1) as f64;
                [math::cos(t), math::sin(t)]
            }
        })
    }
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = math::hypot(v[0], v[1]);
    [v[0] / n, v[1] / n]
}

/// Outcome of [`cone_check`]: sampled invariance and expansion range of a
/// digit matrix on a cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeCheckReport {
    /// Whether every sampled direction (boundary rays included) mapped
    /// strictly inside the open cone.
    pub invariant: bool,
    /// Smallest measured expansion `|A v| / |v|` over the fan.
    pub min_expansion: f64,
    /// Largest measured expansion over the fan.
    pub max_expansion: f64,
    /// A direction witnessing an invariance failure, if any.
    pub violating_direction: Option<[f64; 2]>,
}

/// Number of fan directions sampled by [`cone_check`].
const CONE_FAN: usize = 1200;

/// Sample the action of `A_a` on the cone: at least a thousand unit
/// directions across the fan, including the exact boundary rays. Each image
/// must land strictly inside the open cone; the expansion range is
/// measured along the way.
pub fn cone_check(cone: &ConeSpec, a: u32) -> ConeCheckReport {
    let m = DigitMatrix::new(a);
    let mut min_expansion = f64::INFINITY;
    let mut max_expansion = 0.0_f64;
    let mut violating_direction = None;
    for v in cone.direction_fan(CONE_FAN) {
        let w = m.apply_vec(v);
        let e = math::hypot(w[0], w[1]); // |v| = 1
        min_expansion = min_expansion.min(e);
        max_expansion = max_expansion.max(e);
        if !cone.strictly_contains(w) && violating_direction.is_none() {
            violating_direction = Some(v);
        }
    }
    ConeCheckReport {
        invariant: violating_direction.is_none(),
        min_expansion,
        max_expansion,
        violating_direction,
    }
}

/// Number of samples along the test segment of the perturbed overflow
/// check.
const OVERFLOW_SAMPLES: usize = 129;

/// Box-crossing (overflow) check for the cone family.
///
/// Without a perturbation: the segment through the origin along the cone
/// axis `V`, joining the two `V^⊥`-parallel sides of the unit chart box, is
/// mapped by `A_a` so that both image endpoints lie strictly beyond those
/// sides, and the image direction lies in the enlarged cone
/// `K_{min(1/10, 2β)}`.
///
/// With a perturbation: the same test runs for the perturbed map on the
/// chart box of half-width 1/10 at the half-lattice point `(0, 0)`, with
/// the image sampled polygonally; all its tangent directions must lie in
/// the enlarged cone and the endpoints beyond the sides.
pub fn overflow_check(
    cone: &ConeSpec,
    a: u32,
    perturbation: Option<&PerturbedMapFamily>,
) -> Result<bool, CoreError> {
    let enlarged = ConeSpec::new((2.0 * cone.beta()).min(0.1))?;
    let e_v = unit(cone.v0());
    match perturbation {
        None => {
            let m = DigitMatrix::new(a);
            let image_dir = m.apply_vec(e_v);
            let beyond = |w: [f64; 2]| math::abs(w[0] * e_v[0] + w[1] * e_v[1]) > 1.0;
            Ok(beyond(image_dir)
                && beyond([-image_dir[0], -image_dir[1]])
                && enlarged.strictly_contains(image_dir))
        }
        Some(fam) => {
            if fam.digit() != a {
                return Err(CoreError::InvalidInput(
                    "perturbation family must carry the digit under test",
                ));
            }
            let h = 0.1;
            let mut images = [[0.0_f64; 2]; OVERFLOW_SAMPLES];
            for (i, img) in images.iter_mut().enumerate() {
                let t = -1.0 + 2.0 * i as f64 / (OVERFLOW_SAMPLES - 1) as f64;
                let p = [t * h * e_v[0], t * h * e_v[1]];
                *img = fam.apply(p)?;
            }
            // chart V-coordinates of the image endpoints (the fixed point
            // (0,0) anchors the chart; offsets are wrap-reduced)
            let vcoord = |p: [f64; 2]| {
                math::wrap_half(p[0]) * e_v[0] + math::wrap_half(p[1]) * e_v[1]
            };
            if math::abs(vcoord(images[0])) <= h
                || math::abs(vcoord(images[OVERFLOW_SAMPLES - 1])) <= h
            {
                return Ok(false);
            }
            for w in images.windows(2) {
                let d = [
                    math::wrap_half(w[1][0] - w[0][0]),
                    math::wrap_half(w[1][1] - w[0][1]),
                ];
                if !enlarged.contains(d) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::linear::projective_contract_limit;
    use crate::testutil::Stream;
    use alloc::vec::Vec;

    #[test]
    fn cone_spec_constants() {
        assert!(ConeSpec::new(0.0).is_err());
        assert!(ConeSpec::new(0.2).is_err());
        for &beta in &[1e-6, 0.01, 0.05, 0.1] {
            let k = ConeSpec::new(beta).unwrap();
            assert!(k.mu_bar() > 1.0);
            assert!(k.theta0() < core::f64::consts::FRAC_PI_3);
        }
        // β -> 0 limits
        let tiny = ConeSpec::new(1e-9).unwrap();
        assert!((tiny.mu_bar() - core::f64::consts::SQRT_2).abs() < 1e-8);
        assert!((tiny.theta0() - core::f64::consts::FRAC_PI_4).abs() < 1e-8);
        let refc = ConeSpec::reference();
        assert!(refc.mu_bar() >= core::f64::consts::SQRT_2 - 0.01);
    }

    #[test]
    fn cone_membership_basics() {
        let k = ConeSpec::new(0.05).unwrap();
        // spanning rays on the boundary: contained, not strictly
        for v in [k.v1(), k.v2()] {
            assert!(k.contains(v));
            assert!(!k.strictly_contains(v));
            assert!(k.contains([-v[0], -v[1]]), "cone is symmetric");
        }
        // bisector strictly inside; perpendicular of bisector outside
        assert!(k.strictly_contains(k.v0()));
        let v0 = k.v0();
        assert!(!k.contains([-v0[1], v0[0]]));
        // coordinates really reconstruct
        let w = [0.3, 0.7];
        let c = k.coordinates(w);
        let back = [
            c[0] * k.v1()[0] + c[1] * k.v2()[0],
            c[0] * k.v1()[1] + c[1] * k.v2()[1],
        ];
        assert!((back[0] - w[0]).abs() < 1e-14 && (back[1] - w[1]).abs() < 1e-14);
    }

    #[test]
    fn unstable_eigendirections_live_inside_every_cone() {
        for &beta in &[0.01, 0.05, 0.1] {
            let k = ConeSpec::new(beta).unwrap();
            for a in 1..=50 {
                let m = DigitMatrix::new(a);
                assert!(
                    k.strictly_contains(m.unstable_eigenvector()),
                    "a={a} beta={beta}"
                );
            }
        }
    }

    #[test]
    fn cone_check_bounds_match_the_closed_forms() {
        let k = ConeSpec::new(0.05).unwrap();
        for a in 1..=10 {
            let rep = cone_check(&k, a);
            assert!(rep.invariant, "a={a}: {:?}", rep.violating_direction);
            assert!(
                rep.min_expansion >= k.mu_bar() - 1e-12,
                "a={a}: min {} < mu_bar {}",
                rep.min_expansion,
                k.mu_bar()
            );
            let mu_u = DigitMatrix::new(a).mu_u();
            assert!(
                rep.max_expansion <= mu_u + 1e-12,
                "a={a}: max {} > mu_u {}",
                rep.max_expansion,
                mu_u
            );
        }
        // reference cone: the uniform expansion is essentially √2
        let refc = ConeSpec::reference();
        for a in 1..=10 {
            let rep = cone_check(&refc, a);
            assert!(rep.min_expansion >= core::f64::consts::SQRT_2 - 0.01, "a={a}");
        }
    }

    #[test]
    fn boundary_ray_image_has_the_predicted_form() {
        // A_a (1, -β) = (a - β, 1) = (a - β)(1, 1/(a - β)), strictly inside.
        let k = ConeSpec::new(0.05).unwrap();
        for a in 1..=10u32 {
            let m = DigitMatrix::new(a);
            let w = m.apply_vec(k.v1());
            let s = a as f64 - 0.05;
            assert!((w[0] - s).abs() < 1e-15);
            assert!((w[1] - 1.0).abs() < 1e-15);
            assert!(k.strictly_contains(w));
            // slope 1/(a-β) lies strictly between the boundary slopes
            let slope = w[1] / w[0];
            assert!(slope > -0.05 && slope < 1.1);
        }
    }

    #[test]
    fn stable_directions_of_digit_sequences_land_in_the_perp_cone() {
        // inverse-matrix products contract to directions perpendicular to
        // the expanding cone: rotating the limit by 90° must land in K.
        let k = ConeSpec::new(0.05).unwrap();
        let mut st = Stream::new(41);
        for _ in 0..20 {
            let maps: Vec<[[f64; 2]; 2]> = (0..40)
                .map(|_| {
                    let a = st.int_in(1, 2) as f64;
                    [[0.0, 1.0], [1.0, -a]]
                })
                .collect();
            let dir = projective_contract_limit(&maps, 1e-11).unwrap();
            let rotated = [-dir[1], dir[0]];
            assert!(k.contains(rotated), "limit {dir:?} not perp to cone");
        }
    }

    #[test]
    fn overflow_check_linear_cases() {
        let k = ConeSpec::new(0.05).unwrap();
        for a in 1..=5 {
            assert!(overflow_check(&k, a, None).unwrap(), "a={a}");
        }
        let refc = ConeSpec::reference();
        assert!(overflow_check(&refc, 1, None).unwrap());
    }

    #[test]
    fn overflow_check_perturbed_case() {
        let k = ConeSpec::new(0.05).unwrap();
        let fam = PerturbedMapFamily::build(0.05, 1, 0.3).unwrap();
        assert!(overflow_check(&k, 1, Some(&fam)).unwrap());
        let wrong_digit = PerturbedMapFamily::build(0.05, 2, 0.3).unwrap();
        assert!(overflow_check(&k, 1, Some(&wrong_digit)).is_err());
    }
}
