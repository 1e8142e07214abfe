//! Local stable manifolds through the fixed point, by graph transform.
//!
//! All digit maps (linear and perturbed alike) fix the origin `Q = (0, 0)`.
//! In the chart at `Q` with axes `ê_V` (the cone bisector of the reference
//! cone `K_{β₀}`) and `ê_⊥` (its perpendicular), the local stable set of
//! the digit sequence `a_1 a_2 a_3 ...` is the graph of a Lipschitz
//! function `φ: [-1/10, 1/10] -> R` over the `⊥`-axis. The graph transform
//! `Γ_a` pulls a candidate graph back through `T̂_a` (images of the new
//! graph must land on the old one); composing `Γ_{a_1} ∘ ... ∘ Γ_{a_d}`
//! on the zero graph contracts, at rate `|μ_s|²` in the linear case, to
//! the invariant graph.

use alloc::vec::Vec;

use crate::contfrac::ContinuedFraction;
use crate::error::CoreError;
use crate::math;
use crate::torus::cone::ConeSpec;
use crate::torus::perturbed::PerturbedMapFamily;

/// Half-length of the chart interval the graphs live over.
pub const CHART_HALF_LEN: f64 = 0.1;

/// Number of equally spaced samples a graph carries.
pub const GRAPH_SAMPLES: usize = 512;

/// Lipschitz class of the graphs: admissible slopes (in the chart) stay
/// below this bound, which keeps every graph tangent to the stable cone.
pub const LIP_BOUND: f64 = 0.518;

/// Chart axes at the fixed point: `ê_V` along the reference-cone bisector,
/// `ê_⊥` its 90° rotation.
fn chart_axes() -> ([f64; 2], [f64; 2]) {
    let v0 = ConeSpec::reference().v0();
    let n = math::hypot(v0[0], v0[1]);
    let e_v = [v0[0] / n, v0[1] / n];
    let e_p = [-e_v[1], e_v[0]];
    (e_v, e_p)
}

/// A sampled Lipschitz graph over the `⊥`-axis of the chart at a base
/// point: the value at offset `u` along `ê_⊥` is a displacement along
/// `ê_V`.
#[derive(Debug, Clone, PartialEq)]
pub struct LipGraph {
    base: [f64; 2],
    half_len: f64,
    samples: Vec<f64>,
    lipschitz_bound: f64,
}

impl LipGraph {
    fn new(base: [f64; 2], half_len: f64, samples: Vec<f64>) -> Result<LipGraph, CoreError> {
        if !(half_len > 0.0 && half_len <= CHART_HALF_LEN) {
            return Err(CoreError::InvalidInput(
                "chart half-length must lie in (0, 1/10]",
            ));
        }
        if samples.len() < 2 {
            return Err(CoreError::InvalidInput("a graph needs at least 2 samples"));
        }
        let g = LipGraph {
            base,
            half_len,
            samples,
            lipschitz_bound: LIP_BOUND,
        };
        let worst = g.max_difference_quotient();
        if !(worst <= LIP_BOUND) {
            return Err(CoreError::InvalidInput(
                "graph transform left its Lipschitz class",
            ));
        }
        Ok(g)
    }

    /// The base point of the chart (a fixed point of the digit maps).
    pub fn base(&self) -> [f64; 2] {
        self.base
    }

    /// Half-length of the chart interval.
    pub fn half_len(&self) -> f64 {
        self.half_len
    }

    /// The sampled values, over equally spaced offsets
    /// `u_j = -half_len + 2 half_len j/(n-1)`.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// The Lipschitz class constant the graph was validated against.
    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz_bound
    }

    /// Offset of sample `j` along the `⊥`-axis.
    pub fn position(&self, j: usize) -> f64 {
        -self.half_len + 2.0 * self.half_len * j as f64 / (self.samples.len() - 1) as f64
    }

    /// Piecewise-linear evaluation, clamped to the chart interval.
    pub fn value_at(&self, u: f64) -> f64 {
        let n = self.samples.len();
        let t = (u + self.half_len) / (2.0 * self.half_len) * (n - 1) as f64;
        if t <= 0.0 {
            return self.samples[0];
        }
        if t >= (n - 1) as f64 {
            return self.samples[n - 1];
        }
        let i = t as usize;
        let frac = t - i as f64;
        self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
    }

    /// Largest sampled difference quotient `|Δφ| / |Δu|`.
    pub fn max_difference_quotient(&self) -> f64 {
        let du = 2.0 * self.half_len / (self.samples.len() - 1) as f64;
        let mut worst = 0.0_f64;
        for w in self.samples.windows(2) {
            worst = worst.max((w[1] - w[0]).abs() / du);
        }
        worst
    }

    /// Chart slope at the center, from the secant across `u = 0`.
    pub fn slope_at_center(&self) -> f64 {
        let n = self.samples.len();
        let du = 2.0 * self.half_len / (n - 1) as f64;
        let hi = n / 2;
        (self.samples[hi] - self.samples[hi - 1]) / du
    }

    /// Largest sampled difference to another graph over the same chart.
    ///
    /// # Panics
    /// Panics if the graphs do not share base, half-length, and sampling.
    pub fn sup_distance(&self, other: &LipGraph) -> f64 {
        assert_eq!(self.base, other.base, "graphs live in different charts");
        assert_eq!(self.half_len, other.half_len);
        assert_eq!(self.samples.len(), other.samples.len());
        let mut worst = 0.0_f64;
        for (a, b) in self.samples.iter().zip(other.samples.iter()) {
            worst = worst.max((a - b).abs());
        }
        worst
    }

    /// The graph as torus points: rows `(t, x, y)` with `t` the offset
    /// along `ê_⊥` and `(x, y) = base + t ê_⊥ + φ(t) ê_V` (unwrapped, so
    /// coordinates near the base stay signed).
    pub fn chart_points(&self) -> Vec<(f64, f64, f64)> {
        let (e_v, e_p) = chart_axes();
        (0..self.samples.len())
            .map(|j| {
                let t = self.position(j);
                let w = self.samples[j];
                (
                    t,
                    self.base[0] + t * e_p[0] + w * e_v[0],
                    self.base[1] + t * e_p[1] + w * e_v[1],
                )
            })
            .collect()
    }

    /// Chart slope of the straight line `y = s x` through the base, for
    /// comparing graphs against exact eigenlines.
    pub fn chart_slope_of_line(s: f64) -> f64 {
        let (e_v, e_p) = chart_axes();
        (e_v[0] + s * e_v[1]) / (e_p[0] + s * e_p[1])
    }
}

/// One backward graph-transform step `Γ_a`: the returned samples `ψ(u_j)`
/// solve "the image of `(u_j, ψ(u_j))` lies on `φ`" for the map `T̂_a`.
fn graph_step(fam: &PerturbedMapFamily, phi: &[f64]) -> Result<Vec<f64>, CoreError> {
    let (e_v, e_p) = chart_axes();
    let half = CHART_HALF_LEN;
    let n = phi.len();
    let interp = |u: f64| -> f64 {
        let t = (u + half) / (2.0 * half) * (n - 1) as f64;
        if t <= 0.0 {
            return phi[0];
        }
        if t >= (n - 1) as f64 {
            return phi[n - 1];
        }
        let i = t as usize;
        let frac = t - i as f64;
        phi[i] * (1.0 - frac) + phi[i + 1] * frac
    };
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let u = -half + 2.0 * half * j as f64 / (n - 1) as f64;
        // section defect g(w): V-offset of the image minus the old graph's
        // value at the image's ⊥-offset; monotone in w by cone expansion
        let g = |w: f64| -> Result<f64, CoreError> {
            let p = [u * e_p[0] + w * e_v[0], u * e_p[1] + w * e_v[1]];
            let q = fam.apply(p)?;
            let dx = math::wrap_half(q[0]);
            let dy = math::wrap_half(q[1]);
            let qv = dx * e_v[0] + dy * e_v[1];
            let qp = dx * e_p[0] + dy * e_p[1];
            Ok(qv - interp(qp))
        };
        let mut lo = -0.08_f64;
        let mut hi = 0.08_f64;
        let mut flo = g(lo)?;
        let mut fhi = g(hi)?;
        if flo.signum() == fhi.signum() {
            lo = -CHART_HALF_LEN;
            hi = CHART_HALF_LEN;
            flo = g(lo)?;
            fhi = g(hi)?;
        }
        let mut inner_err: Option<CoreError> = None;
        let mut g_plain = |w: f64| match g(w) {
            Ok(v) => v,
            Err(e) => {
                inner_err = Some(e);
                f64::NAN
            }
        };
        let w = math::secant_bisect(&mut g_plain, lo, hi, flo, fhi, 1e-13, 80);
        drop(g_plain);
        if let Some(e) = inner_err {
            return Err(e);
        }
        let w = w.ok_or(CoreError::RootFindFailed {
            what: "graph-transform section",
            at: u,
        })?;
        if !w.is_finite() {
            return Err(CoreError::RootFindFailed {
                what: "graph-transform section",
                at: u,
            });
        }
        out.push(w);
    }
    Ok(out)
}

/// Construct the local stable manifold of the digit sequence at the fixed
/// point `(0, 0)` by the contracting graph transform.
///
/// For each depth `d = 1, 2, ...` the composition
/// `Γ_{a_1} ∘ Γ_{a_2} ∘ · · · ∘ Γ_{a_d}` is applied to the zero graph
/// (recomputed per depth, so the deepest digit always acts first), until
/// two successive depths differ by less than `tol` in sup norm or `depth`
/// is exhausted. If the sup differences stop decreasing geometrically
/// before reaching `tol`, [`CoreError::NoContraction`] is returned; a
/// slowly-but-still-converging run returns the deepest graph.
///
/// To base the manifold at shift `m` of a sequence, pass
/// `digits.shifted(m)`.
pub fn graph_transform_manifold(
    lambda: f64,
    digits: &ContinuedFraction,
    depth: usize,
    tol: f64,
) -> Result<LipGraph, CoreError> {
    if depth == 0 {
        return Err(CoreError::InvalidInput("depth must be at least 1"));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CoreError::InvalidInput("tolerance must be positive"));
    }
    let mut families: Vec<PerturbedMapFamily> = Vec::with_capacity(depth);
    for k in 1..=depth {
        match digits.digit(k) {
            Some(a) => families.push(PerturbedMapFamily::build(lambda, a, 0.3)?),
            None => break,
        }
    }
    if families.is_empty() {
        return Err(CoreError::InvalidInput("digit sequence exhausted"));
    }
    let zero = alloc::vec![0.0_f64; GRAPH_SAMPLES];
    let mut prev = zero.clone();
    let mut diffs: Vec<f64> = Vec::new();
    let mut current = zero.clone();
    for d in 1..=families.len() {
        // deepest digit first: Γ_{a_d}(0), then Γ_{a_{d-1}}, ..., Γ_{a_1}
        let mut phi = zero.clone();
        for fam in families[..d].iter().rev() {
            phi = graph_step(fam, &phi)?;
        }
        let sup = phi
            .iter()
            .zip(prev.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        diffs.push(sup);
        current = phi.clone();
        prev = phi;
        if sup < tol {
            return LipGraph::new([0.0, 0.0], CHART_HALF_LEN, current);
        }
        // a stalled (non-geometric) difference sequence will not converge
        let k = diffs.len();
        if k >= 5 && (k - 3..k).all(|i| diffs[i] > 0.97 * diffs[i - 1]) {
            return Err(CoreError::NoContraction {
                steps: d,
                last_delta: sup,
            });
        }
    }
    if families.len() < depth {
        // ran out of digits before the budget; report it rather than
        // pretending the truncated sequence converged
        if diffs.last().copied().unwrap_or(f64::INFINITY) >= tol {
            return Err(CoreError::InvalidInput("digit sequence exhausted"));
        }
    }
    LipGraph::new([0.0, 0.0], CHART_HALF_LEN, current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn linear_golden_manifold_is_the_stable_eigenline() {
        let golden = ContinuedFraction::golden();
        let g = graph_transform_manifold(0.0, &golden, 40, 1e-10).unwrap();
        let s = -(1.0 + math::sqrt(5.0)) / 2.0;
        let sigma = LipGraph::chart_slope_of_line(s);
        let mut sup = 0.0_f64;
        for j in 0..g.samples().len() {
            let t = g.position(j);
            sup = sup.max((g.samples()[j] - sigma * t).abs());
        }
        assert!(sup < 1e-6, "sup distance to eigenline {sup:e}");
        assert!((g.slope_at_center() - sigma).abs() < 1e-8);
        assert!(g.max_difference_quotient() <= LIP_BOUND);
    }

    #[test]
    fn linear_silver_manifold_matches_its_eigenline() {
        let silver = ContinuedFraction::silver();
        let g = graph_transform_manifold(0.0, &silver, 40, 1e-10).unwrap();
        let s = -(1.0 + math::sqrt(2.0));
        let sigma = LipGraph::chart_slope_of_line(s);
        let mut sup = 0.0_f64;
        for j in 0..g.samples().len() {
            let t = g.position(j);
            sup = sup.max((g.samples()[j] - sigma * t).abs());
        }
        assert!(sup < 1e-6, "sup distance to eigenline {sup:e}");
    }

    #[test]
    fn perturbed_manifold_exists_and_tends_to_linear() {
        let golden = ContinuedFraction::golden();
        let base = graph_transform_manifold(0.0, &golden, 40, 1e-7).unwrap();
        let g1 = graph_transform_manifold(0.02, &golden, 40, 1e-7).unwrap();
        let g2 = graph_transform_manifold(0.01, &golden, 40, 1e-7).unwrap();
        let d1 = g1.sup_distance(&base);
        let d2 = g2.sup_distance(&base);
        assert!(d1 > 0.0, "perturbation must move the manifold");
        assert!(
            d2 < d1,
            "halving λ should bring the manifold closer to linear: {d2} vs {d1}"
        );
    }

    #[test]
    fn exhausted_digit_sequences_are_reported() {
        let short = ContinuedFraction::from_digits(vec![1, 2, 1]).unwrap();
        match graph_transform_manifold(0.0, &short, 30, 1e-14) {
            Err(CoreError::InvalidInput(msg)) => {
                assert!(msg.contains("exhausted"), "got: {msg}")
            }
            other => panic!("expected exhaustion error, got {other:?}"),
        }
    }

    #[test]
    fn graph_exports_chart_points_on_the_line() {
        let golden = ContinuedFraction::golden();
        let g = graph_transform_manifold(0.0, &golden, 40, 1e-10).unwrap();
        let pts = g.chart_points();
        assert_eq!(pts.len(), GRAPH_SAMPLES);
        // every exported point satisfies y/x = stable slope (through 0)
        let s = -(1.0 + math::sqrt(5.0)) / 2.0;
        for (t, x, y) in pts {
            if x.abs() > 1e-4 {
                assert!(
                    (y / x - s).abs() < 1e-4,
                    "t={t}: ({x}, {y}) off the eigenline"
                );
            }
        }
    }
}
