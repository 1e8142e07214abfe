//! Uniform hyperbolicity certificate for families of perturbed maps.
//!
//! A family satisfies the cone-and-expansion property when, at every
//! point, the differential maps the unstable cone strictly inside itself
//! with expansion at least `μ₁ - δ` (and at most `μ₂ + δ`), and the
//! inverse differential does the same for the stable cone (the 90°
//! rotation of a reference cone). The verifier samples both statements on
//! a uniform grid, measuring the worst rates along the way.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::math;
use crate::torus::cone::ConeSpec;
use crate::torus::linear::DigitMatrix;
use crate::torus::perturbed::PerturbedMapFamily;

/// Sampled-certificate report of [`property_c_verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyCReport {
    /// Guaranteed lower expansion rate `μ̄` of the unstable cone.
    pub mu1: f64,
    /// Largest expanding eigenvalue `μ_u(a)` among the checked digits.
    pub mu2: f64,
    /// Slack allowed around the `[μ₁, μ₂]` corridor.
    pub delta: f64,
    /// Grid density per axis.
    pub grid_size: usize,
    /// Smallest measured expansion `|J v|` over unit unstable-cone
    /// directions (a passing certificate keeps this at least `μ₁ - δ`).
    pub worst_expansion: f64,
    /// Smallest measured backward expansion `|J⁻¹ w|` over unit
    /// stable-cone directions (equivalently, the forward dynamics
    /// contracts those directions by at least its reciprocal).
    pub worst_contraction: f64,
    /// Number of sampled failures: cone containment breaches, rates
    /// outside the corridor, singular differentials, or evaluation errors.
    pub cone_violations: usize,
}

impl PropertyCReport {
    /// Whether the sampled certificate holds.
    pub fn passes(&self) -> bool {
        self.cone_violations == 0 && self.worst_expansion >= self.mu1 - self.delta
    }
}

/// Directions sampled per cone fan at every grid point.
const FAN: usize = 16;

/// Finite-difference step for the differential of a perturbed map.
const FD_STEP: f64 = 1e-6;

/// The differential of the map at `p`: exact `A_a` for the linear model,
/// wrap-aware central differences otherwise.
fn differential(fam: &PerturbedMapFamily, p: [f64; 2]) -> Result<[[f64; 2]; 2], CoreError> {
    if fam.lambda() == 0.0 {
        let e = DigitMatrix::new(fam.digit()).entries();
        return Ok([
            [e[0][0] as f64, e[0][1] as f64],
            [e[1][0] as f64, e[1][1] as f64],
        ]);
    }
    let mut j = [[0.0_f64; 2]; 2];
    for c in 0..2 {
        let mut hi = p;
        let mut lo = p;
        hi[c] += FD_STEP;
        lo[c] -= FD_STEP;
        let qh = fam.apply(hi)?;
        let ql = fam.apply(lo)?;
        j[0][c] = math::wrap_half(qh[0] - ql[0]) / (2.0 * FD_STEP);
        j[1][c] = math::wrap_half(qh[1] - ql[1]) / (2.0 * FD_STEP);
    }
    Ok(j)
}

fn mat_vec(m: &[[f64; 2]; 2], v: [f64; 2]) -> [f64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

fn invert(m: &[[f64; 2]; 2]) -> Option<[[f64; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !(det.abs() > 1e-12) {
        return None;
    }
    Some([
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ])
}

/// Verify the cone-and-expansion property for `maps` on a `grid × grid`
/// sampling of the torus.
///
/// `unstable` is the expanding cone; the contracting cone is the 90°
/// rotation of `stable`. At every grid point and for every map, the fan of
/// each cone (boundary rays included) is pushed through the differential
/// (respectively its inverse): images must stay strictly inside the open
/// cone and the measured rates must stay within `[μ₁ - δ, μ₂ + δ]`. Every
/// sampled failure — containment, rate, singular differential, or an
/// evaluation error of the map itself — adds to `cone_violations`.
///
/// Cone-width guidance: at `λ = 0` the reference cone passes exactly (the
/// digit-1 boundary ray attains `μ̄` and stays strictly inside). At any
/// positive coupling the blend annulus contributes a first-derivative term
/// of size ≈ bump slope × conjugation deviation (about `1.4e-2` at
/// `λ = 0.02` under default radii), which exceeds the narrow reference
/// cone's invariance margin under the digit-1 map. Positive couplings are
/// therefore certified against an enlarged cone (β around `0.03`), whose
/// margin absorbs that term while the rate corridor stays intact; the
/// narrow cone remains the contract for the exactly-linear case.
pub fn property_c_verify(
    maps: &[PerturbedMapFamily],
    unstable: &ConeSpec,
    stable: &ConeSpec,
    grid: usize,
    delta: f64,
) -> Result<PropertyCReport, CoreError> {
    if maps.is_empty() {
        return Err(CoreError::InvalidInput("need at least one map"));
    }
    if grid < 2 {
        return Err(CoreError::InvalidInput("grid must be at least 2"));
    }
    if !(delta >= 0.0) {
        return Err(CoreError::InvalidInput("delta must be nonnegative"));
    }
    let mu1 = unstable.mu_bar();
    let mu2 = maps
        .iter()
        .map(|f| DigitMatrix::new(f.digit()).mu_u())
        .fold(0.0_f64, f64::max);
    let lo = mu1 - delta;
    let hi = mu2 + delta;

    let u_fan: Vec<[f64; 2]> = unstable.direction_fan(FAN).collect();
    // stable cone = 90° rotation of the `stable` spec's cone
    let s_fan: Vec<[f64; 2]> = stable
        .direction_fan(FAN)
        .map(|v| [-v[1], v[0]])
        .collect();
    let in_stable = |w: [f64; 2]| stable.strictly_contains([w[1], -w[0]]);

    let mut worst_expansion = f64::INFINITY;
    let mut worst_contraction = f64::INFINITY;
    let mut violations = 0usize;

    for fam in maps {
        for i in 0..grid {
            for k in 0..grid {
                let p = [i as f64 / grid as f64, k as f64 / grid as f64];
                let j = match differential(fam, p) {
                    Ok(j) => j,
                    Err(_) => {
                        violations += 1;
                        continue;
                    }
                };
                let j_inv = match invert(&j) {
                    Some(ji) => ji,
                    None => {
                        violations += 1;
                        continue;
                    }
                };
                for &v in &u_fan {
                    let w = mat_vec(&j, v);
                    let rate = math::hypot(w[0], w[1]); // |v| = 1
                    worst_expansion = worst_expansion.min(rate);
                    if !unstable.strictly_contains(w) || rate < lo || rate > hi {
                        violations += 1;
                    }
                }
                for &v in &s_fan {
                    let w = mat_vec(&j_inv, v);
                    let rate = math::hypot(w[0], w[1]);
                    worst_contraction = worst_contraction.min(rate);
                    if !in_stable(w) || rate < lo || rate > hi {
                        violations += 1;
                    }
                }
            }
        }
    }
    Ok(PropertyCReport {
        mu1,
        mu2,
        delta,
        grid_size: grid,
        worst_expansion,
        worst_contraction,
        cone_violations: violations,
    })
}
