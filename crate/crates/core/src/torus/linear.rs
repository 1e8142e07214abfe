//! Linear models on the torus and the semiconjugacy onto the surface.
//!
//! Each digit `a >= 1` acts on `T^2 = R^2/Z^2` by the hyperbolic matrix
//! `A_a = [[a, 1], [1, 0]]` (determinant -1). The map
//! `F(x, y) = (cos 2π(x+y), cos 2πx, cos 2πy)` sends this action onto the
//! digit-`a` trace map on the central Fricke surface:
//! `F ∘ A_a = T_a ∘ F`. Stable directions of digit products are computed
//! exactly from integer matrix products, and a projective contraction
//! iteration recovers limit directions for infinite digit sequences.



use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::CoreError;
use crate::math;
use crate::surface::TriplePoint;

/// The hyperbolic matrix `A_a = [[a, 1], [1, 0]]` attached to a digit,
/// with its eigendata precomputed.
///
/// `A_a` has determinant -1 and eigenvalues
/// `mu_u = (a + sqrt(4 + a^2)) / 2 > 1` and
/// `mu_s = (a - sqrt(4 + a^2)) / 2 = -1/mu_u`, with eigenvectors
/// `(mu_u, 1)` and `(mu_s, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DigitMatrix {
    a: u32,
    mu_u: f64,
    mu_s: f64,
}

impl DigitMatrix {
    /// Build the matrix for digit `a`.
    ///
    /// # Panics
    /// Panics if `a == 0`.
    pub fn new(a: u32) -> DigitMatrix {
        assert!(a >= 1, "digit must be a positive integer");
        let af = a as f64;
        let disc = math::sqrt(4.0 + af * af);
        let mu_u = (af + disc) / 2.0;
        // mu_s = (a - disc)/2 in exact arithmetic, but that form cancels
        // catastrophically for large a; -1/mu_u is the same number and keeps
        // the product identity mu_u * mu_s = -1 at full precision.
        DigitMatrix {
            a,
            mu_u,
            mu_s: -1.0 / mu_u,
        }
    }

    /// The digit this matrix belongs to.
    pub fn digit(&self) -> u32 {
        self.a
    }

    /// Integer entries `[[a, 1], [1, 0]]`, row major.
    pub fn entries(&self) -> [[i64; 2]; 2] {
        [[self.a as i64, 1], [1, 0]]
    }

    /// Integer entries of the inverse, `[[0, 1], [1, -a]]`, row major.
    pub fn inverse_entries(&self) -> [[i64; 2]; 2] {
        [[0, 1], [1, -(self.a as i64)]]
    }

    /// Expanding eigenvalue `mu_u > 1`.
    pub fn mu_u(&self) -> f64 {
        self.mu_u
    }

    /// Contracting eigenvalue `mu_s`, with `|mu_s| < 1` and `mu_u * mu_s = -1`.
    pub fn mu_s(&self) -> f64 {
        self.mu_s
    }

    /// Eigenvector `(mu_u, 1)` of the expanding eigenvalue (not normalized).
    pub fn unstable_eigenvector(&self) -> [f64; 2] {
        [self.mu_u, 1.0]
    }

    /// Eigenvector `(mu_s, 1)` of the contracting eigenvalue (not normalized).
    pub fn stable_eigenvector(&self) -> [f64; 2] {
        [self.mu_s, 1.0]
    }

    /// Apply the matrix to a plane vector (no wrapping).
    pub fn apply_vec(&self, v: [f64; 2]) -> [f64; 2] {
        [self.a as f64 * v[0] + v[1], v[0]]
    }

    /// Apply the inverse matrix to a plane vector (no wrapping).
    pub fn inverse_vec(&self, v: [f64; 2]) -> [f64; 2] {
        [v[1], v[0] - self.a as f64 * v[1]]
    }

    /// Apply the induced toral map `(x, y) -> (a x + y, x) mod 1`.
    pub fn apply_torus(&self, p: [f64; 2]) -> [f64; 2] {
        torus_apply(self.a, p)
    }
}

/// The toral automorphism of digit `a`: `(x, y) -> (a x + y mod 1, x mod 1)`.
pub fn torus_apply(a: u32, p: [f64; 2]) -> [f64; 2] {
    assert!(a >= 1, "digit must be a positive integer");
    [math::fract1(a as f64 * p[0] + p[1]), math::fract1(p[0])]
}

/// The semiconjugacy `F(x, y) = (cos 2π(x+y), cos 2πx, cos 2πy)` from the
/// torus onto the central surface (Fricke level 1).
///
/// Satisfies `F(A_a · p) = T_a(F(p))` for every digit `a` and every `p`.
pub fn semiconjugacy_f(x: f64, y: f64) -> TriplePoint {
    let two_pi = 2.0 * core::f64::consts::PI;
    // Wrap first so the trig arguments stay in [0, 2π): the identity is
    // 1-periodic in each variable and small arguments keep full precision.
    TriplePoint {
        x1: math::cos(two_pi * math::fract1(x + y)),
        x2: math::cos(two_pi * math::fract1(x)),
        x3: math::cos(two_pi * math::fract1(y)),
    }
}

fn inverse_digit_product(digits: &[u32]) -> Result<(BigInt, BigInt), CoreError> {
    if digits.is_empty() {
        return Err(CoreError::InvalidInput("digit string must be nonempty"));
    }
    if digits.iter().any(|&a| a == 0) {
        return Err(CoreError::InvalidInput("digits must be positive integers"));
    }
    // v_n = A_{a_1}^{-1} ... A_{a_n}^{-1} (0, 1)^T, accumulated from the
    // deepest factor outward; A_a^{-1} = [[0, 1], [1, -a]].
    let mut x = BigInt::from(0);
    let mut y = BigInt::from(1);
    for &a in digits.iter().rev() {
        let nx = y.clone();
        let ny = x - BigInt::from(a) * y;
        x = nx;
        y = ny;
    }
    Ok((x, y))
}

/// Slope of the line `span{ A_{a_1}^{-1} · · · A_{a_n}^{-1} (0, 1)^T }`,
/// computed from exact integer matrix products followed by one division.
///
/// Equals `-1 / [a_1, ..., a_n]` where `[a_1, ..., a_n]` is the finite
/// continued-fraction value `1/(a_1 + 1/(a_2 + ... + 1/a_n))`.
pub fn stable_slope(digits: &[u32]) -> Result<f64, CoreError> {
    let q = stable_slope_exact(digits)?;
    q.to_f64()
        .ok_or(CoreError::InvalidInput("slope overflows f64"))
}

/// Exact rational value of [`stable_slope`].
pub fn stable_slope_exact(digits: &[u32]) -> Result<BigRational, CoreError> {
    let (x, y) = inverse_digit_product(digits)?;
    if x.is_zero() {
        return Err(CoreError::InvalidInput("stable direction is vertical"));
    }
    Ok(BigRational::new(y, x))
}

/// A map acting on plane directions, for projective iteration.
pub trait DirectionMap {
    /// Image of the direction vector `v` (need not be normalized).
    fn map_direction(&self, v: [f64; 2]) -> [f64; 2];
}

impl DirectionMap for [[f64; 2]; 2] {
    fn map_direction(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self[0][0] * v[0] + self[0][1] * v[1],
            self[1][0] * v[0] + self[1][1] * v[1],
        ]
    }
}

impl DirectionMap for DigitMatrix {
    fn map_direction(&self, v: [f64; 2]) -> [f64; 2] {
        self.apply_vec(v)
    }
}

impl<M: DirectionMap> DirectionMap for &M {
    fn map_direction(&self, v: [f64; 2]) -> [f64; 2] {
        (*self).map_direction(v)
    }
}

/// Distance between the lines spanned by `u` and `v`: the angle between
/// them, measured mod π (so `v` and `-v` are the same direction).
fn projective_distance(u: [f64; 2], v: [f64; 2]) -> f64 {
    let dot = u[0] * v[0] + u[1] * v[1];
    let cross = u[0] * v[1] - u[1] * v[0];
    math::atan2(math::abs(cross), math::abs(dot))
}

/// Canonical representative of a direction: unit length, first nonzero
/// coordinate positive.
fn canonical_direction(v: [f64; 2]) -> [f64; 2] {
    let n = math::hypot(v[0], v[1]);
    let mut u = [v[0] / n, v[1] / n];
    if u[0] < 0.0 || (u[0] == 0.0 && u[1] < 0.0) {
        u = [-u[0], -u[1]];
    }
    u
}

/// Limit direction of the left-composed projective iteration
/// `x_n = t_1(t_2(· · · t_n(seed) · · ·))` with `seed = (0, 1)^T`.
///
/// Each prefix composition is recomputed from the deepest factor outward;
/// the iteration stops at the first `n` whose direction is within `tol`
/// (angle mod π) of the previous one, and returns that direction as a
/// canonically signed unit vector. If the supplied maps are exhausted
/// before two successive directions agree, the sequence did not contract
/// and [`CoreError::NoContraction`] is returned.
pub fn projective_contract_limit<M: DirectionMap>(
    maps: &[M],
    tol: f64,
) -> Result<[f64; 2], CoreError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CoreError::InvalidInput("tolerance must be positive"));
    }
    if maps.is_empty() {
        return Err(CoreError::InvalidInput("need at least one direction map"));
    }
    let seed = [0.0_f64, 1.0];
    let mut prev = canonical_direction(seed);
    let mut last_delta = f64::INFINITY;
    for n in 1..=maps.len() {
        let mut v = seed;
        for map in maps[..n].iter().rev() {
            v = map.map_direction(v);
            let norm = math::hypot(v[0], v[1]);
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(CoreError::InvalidInput(
                    "direction map collapsed or blew up a direction",
                ));
            }
            v = [v[0] / norm, v[1] / norm];
        }
        let cur = canonical_direction(v);
        last_delta = projective_distance(prev, cur);
        if last_delta < tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(CoreError::NoContraction {
        steps: maps.len(),
        last_delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{trace_map_apply, SINGULAR_POINTS};
    use crate::testutil::Stream;
    use alloc::vec;

    #[test]
    fn digit_matrix_eigen_identities() {
        for a in 1..=50u32 {
            let m = DigitMatrix::new(a);
            let af = a as f64;
            assert!((m.mu_u() + m.mu_s() - af).abs() <= 1e-14 * af.max(1.0));
            assert!((m.mu_u() * m.mu_s() + 1.0).abs() <= 1e-14);
            assert!(m.mu_u() > 1.0);
            assert!(m.mu_s().abs() < 1.0 && m.mu_s() < 0.0);
            let e = m.entries();
            assert_eq!(e[0][0] * e[1][1] - e[0][1] * e[1][0], -1);
            // eigen residual |A e - mu e|
            for (vec, mu) in [
                (m.unstable_eigenvector(), m.mu_u()),
                (m.stable_eigenvector(), m.mu_s()),
            ] {
                let w = m.apply_vec(vec);
                let r = math::hypot(w[0] - mu * vec[0], w[1] - mu * vec[1]);
                assert!(r <= 1e-12 * (1.0 + mu.abs()) * af, "a={a} r={r:e}");
            }
            // inverse really inverts
            let v = [0.3, -1.7];
            let rt = m.inverse_vec(m.apply_vec(v));
            assert!((rt[0] - v[0]).abs() < 1e-12 && (rt[1] - v[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn torus_apply_wraps() {
        let m = DigitMatrix::new(3);
        let p = [0.7, 0.9];
        let q = m.apply_torus(p);
        // 3*0.7 + 0.9 = 3.0 -> 0.0 (mod 1), second coordinate is x.
        assert!((q[0] - math::fract1(3.0 * 0.7 + 0.9)).abs() < 1e-15);
        assert!((q[1] - 0.7).abs() < 1e-15);
        assert_eq!(q, torus_apply(3, p));
        assert!(q[0] >= 0.0 && q[0] < 1.0 && q[1] >= 0.0 && q[1] < 1.0);
    }

    #[test]
    fn semiconjugacy_point_values() {
        let p1 = semiconjugacy_f(0.0, 0.0);
        assert_eq!(p1, SINGULAR_POINTS[0]);
        let q = semiconjugacy_f(0.25, 0.25);
        assert!((q.x1 + 1.0).abs() < 1e-15);
        assert!(q.x2.abs() < 1e-15);
        assert!(q.x3.abs() < 1e-15);
    }

    #[test]
    fn semiconjugacy_intertwines_linear_and_trace_maps() {
        let mut st = Stream::new(11);
        for _ in 0..2000 {
            let x = st.unit();
            let y = st.unit();
            for a in 1..=5u32 {
                let lhs = semiconjugacy_f(
                    math::fract1(a as f64 * x + y),
                    math::fract1(x),
                );
                let rhs = trace_map_apply(a, &semiconjugacy_f(x, y));
                let d = (lhs.x1 - rhs.x1)
                    .abs()
                    .max((lhs.x2 - rhs.x2).abs())
                    .max((lhs.x3 - rhs.x3).abs());
                assert!(d < 1e-12, "a={a} x={x} y={y} d={d:e}");
            }
        }
    }

    #[test]
    fn stable_slope_hand_values() {
        assert_eq!(stable_slope(&[1]).unwrap(), -1.0);
        // [1, 1] = 1/2, so the slope is -2.
        assert_eq!(stable_slope(&[1, 1]).unwrap(), -2.0);
        let golden = stable_slope(&vec![1; 30]).unwrap();
        assert!((golden - (-(1.0 + math::sqrt(5.0)) / 2.0)).abs() < 1e-9);
        let silver = stable_slope(&vec![2; 30]).unwrap();
        assert!((silver - (-(1.0 + math::sqrt(2.0)))).abs() < 1e-9);
    }

    #[test]
    fn stable_slope_exact_matches_continued_fraction_value() {
        // Independent oracle: fold the finite continued fraction
        // [a_1, ..., a_n] = 1/(a_1 + 1/(a_2 + ... + 1/a_n)) from the back
        // in exact rationals; the slope must be exactly -1/value.
        let mut st = Stream::new(23);
        for _ in 0..60 {
            let n = 1 + (st.next_u64() % 20) as usize;
            let digits: Vec<u32> = (0..n).map(|_| st.int_in(1, 9)).collect();
            let mut v = BigRational::zero();
            for &a in digits.iter().rev() {
                v = (BigRational::from_integer(a.into()) + v).recip();
            }
            let expect = -v.recip();
            assert_eq!(stable_slope_exact(&digits).unwrap(), expect);
        }
        assert!(stable_slope(&[]).is_err());
        assert!(stable_slope(&[1, 0, 2]).is_err());
    }

    #[test]
    fn projective_limit_of_constant_golden_sequence() {
        // Constant sequence of inverse digit-1 matrices: the limit is the
        // contracting eigendirection of A_1, slope -(1+sqrt 5)/2.
        let inv = [[0.0, 1.0], [1.0, -1.0]];
        let maps = vec![inv; 60];
        let dir = projective_contract_limit(&maps, 1e-12).unwrap();
        let slope = dir[1] / dir[0];
        assert!((slope - (-(1.0 + math::sqrt(5.0)) / 2.0)).abs() < 1e-10);
        // canonical sign: first coordinate positive
        assert!(dir[0] > 0.0);
        let norm = math::hypot(dir[0], dir[1]);
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn projective_limit_reports_no_contraction_for_rotation() {
        // An irrational rotation never settles projectively.
        let c = math::cos(0.7);
        let s = math::sin(0.7);
        let rot = [[c, -s], [s, c]];
        let maps = vec![rot; 40];
        match projective_contract_limit(&maps, 1e-10) {
            Err(CoreError::NoContraction { steps, .. }) => assert_eq!(steps, 40),
            other => panic!("expected NoContraction, got {other:?}"),
        }
    }

    #[test]
    fn direction_map_fixes_eigendirections() {
        for a in [1u32, 2, 5] {
            let m = DigitMatrix::new(a);
            for v in [m.unstable_eigenvector(), m.stable_eigenvector()] {
                let w = m.map_direction(v);
                assert!(projective_distance(v, w) < 1e-13);
            }
        }
    }
}
