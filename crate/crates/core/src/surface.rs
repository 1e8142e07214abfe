//! Trace-map dynamics on the Fricke surfaces, spectral-line membership, and
//! the interval estimates built from it.
//!
//! The family of trace maps is T_a = G^a ∘ H on ℝ³ with
//! G(x₁,x₂,x₃) = (2x₁x₃−x₂, x₁, x₃) and H(x₁,x₂,x₃) = (x₁,x₃,x₂). Every T_a
//! preserves the Fricke polynomial I(x) = x₁²+x₂²+x₃²−2x₁x₂x₃, whose level
//! set at 1 + λ²/4 is the surface carrying the coupling-λ dynamics. Energies
//! are fed in through the spectral line E ↦ ((E−λ)/2, E/2, 1), which lies on
//! that level set identically in E.
//!
//! An energy belongs to the spectrum exactly when its non-stationary orbit
//! x ↦ T_{a_1}x ↦ T_{a_2}T_{a_1}x ↦ … stays bounded, with digits (a_k) read
//! from the continued fraction of the rotation number. Boundedness is only
//! semi-decidable numerically; orbits still bounded at the step budget are
//! treated as members (a conservative over-approximation, with the count of
//! such grid cells reported).

use alloc::vec::Vec;

use crate::contfrac::ContinuedFraction;
use crate::error::CoreError;
use crate::fractal::IntervalSet;
use crate::math::{self, Dd};

/// A point of ℝ³ in trace coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TriplePoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// The four singular (cone) points of the λ=0 surface, each fixed by the
/// whole trace-map family up to sign bookkeeping.
pub const SINGULAR_POINTS: [TriplePoint; 4] = [
    TriplePoint { x1: 1.0, x2: 1.0, x3: 1.0 },
    TriplePoint { x1: -1.0, x2: -1.0, x3: 1.0 },
    TriplePoint { x1: 1.0, x2: -1.0, x3: -1.0 },
    TriplePoint { x1: -1.0, x2: 1.0, x3: -1.0 },
];

impl TriplePoint {
    /// Checked constructor: rejects NaN and infinite coordinates.
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self, CoreError> {
        if !(x1.is_finite() && x2.is_finite() && x3.is_finite()) {
            return Err(CoreError::InvalidInput("coordinates must be finite"));
        }
        Ok(Self { x1, x2, x3 })
    }

    /// Largest coordinate magnitude.
    #[inline]
    pub fn max_norm(&self) -> f64 {
        math::abs(self.x1).max(math::abs(self.x2)).max(math::abs(self.x3))
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Squared Euclidean distance.
    #[inline]
    pub fn dist_sq(&self, o: &TriplePoint) -> f64 {
        let d1 = self.x1 - o.x1;
        let d2 = self.x2 - o.x2;
        let d3 = self.x3 - o.x3;
        d1 * d1 + d2 * d2 + d3 * d3
    }
}

/// A coupling constant together with its Fricke level 1 + λ²/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrickeLevel {
    pub lambda: f64,
    pub level: f64,
}

impl FrickeLevel {
    pub fn new(lambda: f64) -> Result<Self, CoreError> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(CoreError::InvalidInput("lambda must be finite and >= 0"));
        }
        Ok(Self { lambda, level: fricke_level(lambda) })
    }
}

/// The Fricke level 1 + λ²/4 preserved by the dynamics at coupling λ.
#[inline]
pub fn fricke_level(lambda: f64) -> f64 {
    1.0 + lambda * lambda / 4.0
}

/// The Fricke polynomial x₁²+x₂²+x₃²−2x₁x₂x₃, invariant under every T_a.
#[inline]
pub fn fricke(p: &TriplePoint) -> f64 {
    p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3 - 2.0 * p.x1 * p.x2 * p.x3
}

/// Gradient of the Fricke polynomial.
#[inline]
pub fn fricke_gradient(p: &TriplePoint) -> [f64; 3] {
    [
        2.0 * (p.x1 - p.x2 * p.x3),
        2.0 * (p.x2 - p.x1 * p.x3),
        2.0 * (p.x3 - p.x1 * p.x2),
    ]
}

#[inline]
fn g_step(p: TriplePoint) -> TriplePoint {
    TriplePoint { x1: 2.0 * p.x1 * p.x3 - p.x2, x2: p.x1, x3: p.x3 }
}

#[inline]
fn g_step_inverse(p: TriplePoint) -> TriplePoint {
    TriplePoint { x1: p.x2, x2: 2.0 * p.x2 * p.x3 - p.x1, x3: p.x3 }
}

#[inline]
fn h_swap(p: TriplePoint) -> TriplePoint {
    TriplePoint { x1: p.x1, x2: p.x3, x3: p.x2 }
}

/// The trace map T_a = G^a ∘ H.
///
/// Escaping orbits may legitimately overflow to ±∞; the coordinates are
/// returned as-is and a non-finite result is classified as escaped by the
/// orbit routines.
///
/// Panics if `a == 0` (digits are ≥ 1 by construction upstream).
pub fn trace_map_apply(a: u32, p: &TriplePoint) -> TriplePoint {
    assert!(a >= 1, "trace map digit must be >= 1");
    let mut q = h_swap(*p);
    for _ in 0..a {
        q = g_step(q);
    }
    q
}

/// The inverse trace map T_a⁻¹ = H ∘ G^{-a}, with
/// G⁻¹(x₁,x₂,x₃) = (x₂, 2x₂x₃−x₁, x₃).
pub fn trace_map_inverse(a: u32, p: &TriplePoint) -> TriplePoint {
    assert!(a >= 1, "trace map digit must be >= 1");
    let mut q = *p;
    for _ in 0..a {
        q = g_step_inverse(q);
    }
    h_swap(q)
}

fn fricke_dd(x1: Dd, x2: Dd, x3: Dd) -> Dd {
    let sq = x1.mul(x1).add(x2.mul(x2)).add(x3.mul(x3));
    sq.sub(x1.mul(x2).mul(x3).scale(2.0))
}

/// |I(T_a p) − I(p)| with the whole pipeline — map application and both
/// polynomial evaluations — carried out in double-length arithmetic.
///
/// Plain f64 evaluation of I(T_a p) has a rounding floor of order
/// ulp(‖T_a p‖²), which for a ≥ 4 on ‖p‖∞ ≤ 2 already exceeds 1e−12; the
/// compensated pipeline pushes the floor to ~1e−28 so that any genuine
/// formula defect (which shows up at O(1)) is cleanly separated from
/// rounding noise.
pub fn fricke_drift_extended(a: u32, p: &TriplePoint) -> f64 {
    assert!(a >= 1, "trace map digit must be >= 1");
    let x1 = Dd::from_f64(p.x1);
    let x2 = Dd::from_f64(p.x2);
    let x3 = Dd::from_f64(p.x3);
    let before = fricke_dd(x1, x2, x3);
    // H then a-fold G, in double length
    let (mut y1, mut y2, y3) = (x1, x3, x2);
    for _ in 0..a {
        let new1 = y1.mul(y3).scale(2.0).sub(y2);
        y2 = y1;
        y1 = new1;
    }
    let after = fricke_dd(y1, y2, y3);
    math::abs(after.sub(before).to_f64())
}

/// The spectral line point ((E−λ)/2, E/2, 1); lies on the Fricke level
/// 1 + λ²/4 for every E.
#[inline]
pub fn spectral_line_point(lambda: f64, e: f64) -> TriplePoint {
    TriplePoint { x1: (e - lambda) / 2.0, x2: e / 2.0, x3: 1.0 }
}

/// The survival region: max-norm at most `bound`, outside the open balls
/// B_ρ(P_i) around the four singular points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalRegionSpec {
    pub rho: f64,
    pub bound: f64,
}

impl SurvivalRegionSpec {
    /// ρ must keep the four balls disjoint (ρ < 1, half their min distance
    /// being √2); the norm bound must be positive.
    pub fn new(rho: f64, bound: f64) -> Result<Self, CoreError> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(CoreError::InvalidInput("rho must lie in (0, 1)"));
        }
        if !(bound > 0.0) || !bound.is_finite() {
            return Err(CoreError::InvalidInput("region bound must be positive"));
        }
        Ok(Self { rho, bound })
    }

    /// Region with the default norm bound 1 + λ for coupling λ.
    pub fn for_lambda(lambda: f64, rho: f64) -> Result<Self, CoreError> {
        Self::new(rho, 1.0 + lambda)
    }

    /// True when p lies in the closed survival region.
    pub fn contains(&self, p: &TriplePoint) -> bool {
        if !p.is_finite() || p.max_norm() > self.bound {
            return false;
        }
        let r2 = self.rho * self.rho;
        SINGULAR_POINTS.iter().all(|s| p.dist_sq(s) >= r2)
    }
}

/// Verdict for one orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStatus {
    BoundedUpToBudget,
    Escaped,
    LeftSurvivalRegion,
}

/// Classification of a non-stationary orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitResult {
    pub status: OrbitStatus,
    /// Trace-map applications performed before the verdict.
    pub steps: usize,
    /// Largest max-coordinate seen along the orbit (∞ on overflow).
    pub max_norm: f64,
    /// For left-survival-region: the step index (0 = the seed itself) at
    /// which the orbit left the region.
    pub exit_index: Option<usize>,
}

/// Iterates T_{a_1}, T_{a_2}, … from p and classifies the orbit.
///
/// Escape is declared when the max-coordinate exceeds `escape_threshold` on
/// two consecutive steps with strict growth (once an orbit leaves the
/// compact core of a Fricke level it grows superexponentially, so two
/// growing super-threshold values are decisive at desk scale). When `region`
/// is supplied, the orbit is additionally required to stay inside it; the
/// seed counts as step 0. Orbits still inside every test at the budget (or
/// at digit exhaustion) come back bounded-up-to-budget.
///
/// Panics if `max_steps == 0` or `escape_threshold <= 2` (documented
/// preconditions; the threshold must clear the compact core).
pub fn orbit_classify(
    p: &TriplePoint,
    digits: &ContinuedFraction,
    max_steps: usize,
    escape_threshold: f64,
    region: Option<&SurvivalRegionSpec>,
) -> OrbitResult {
    assert!(max_steps >= 1, "max_steps must be >= 1");
    assert!(escape_threshold > 2.0, "escape threshold must exceed 2");
    let mut x = *p;
    let mut max_norm = x.max_norm();
    if let Some(r) = region {
        if !r.contains(&x) {
            return OrbitResult {
                status: OrbitStatus::LeftSurvivalRegion,
                steps: 0,
                max_norm,
                exit_index: Some(0),
            };
        }
    }
    let mut prev_norm = max_norm;
    let mut steps = 0usize;
    for k in 1..=max_steps {
        let a = match digits.digit(k) {
            Some(a) => a,
            None => break,
        };
        x = trace_map_apply(a, &x);
        steps = k;
        let norm = x.max_norm();
        if norm > max_norm || norm.is_nan() {
            max_norm = norm;
        }
        if !x.is_finite() {
            return OrbitResult {
                status: OrbitStatus::Escaped,
                steps,
                max_norm: f64::INFINITY,
                exit_index: None,
            };
        }
        if let Some(r) = region {
            if !r.contains(&x) {
                return OrbitResult {
                    status: OrbitStatus::LeftSurvivalRegion,
                    steps,
                    max_norm,
                    exit_index: Some(k),
                };
            }
        }
        if prev_norm > escape_threshold && norm > prev_norm {
            return OrbitResult { status: OrbitStatus::Escaped, steps, max_norm, exit_index: None };
        }
        prev_norm = norm;
    }
    OrbitResult { status: OrbitStatus::BoundedUpToBudget, steps, max_norm, exit_index: None }
}

/// Finite-interval approximation of a spectral or survival set, with its
/// undecidedness bookkeeping. `set` is None when nothing was classified as a
/// member (allowed, flagged by `is_empty`).
#[derive(Debug, Clone, PartialEq)]
pub struct CantorApprox {
    pub set: Option<IntervalSet<f64>>,
    /// Grid cells whose verdict was bounded-at-budget: the conservative,
    /// undecided inclusions.
    pub undecided_cells: u64,
    /// Total membership evaluations spent (grid + bisection).
    pub evaluations: u64,
    /// Search window that was scanned.
    pub window: (f64, f64),
    /// Grid spacing used.
    pub resolution: f64,
}

impl CantorApprox {
    pub fn is_empty(&self) -> bool {
        self.set.is_none()
    }

    pub fn total_length(&self) -> f64 {
        self.set.as_ref().map_or(0.0, |s| s.measure())
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        self.set.as_ref().map_or(&[], |s| s.components())
    }
}

/// Search window scanned by the estimators at coupling λ.
#[inline]
pub fn spectrum_window(lambda: f64) -> (f64, f64) {
    (-2.0 - lambda - 1.0, 2.0 + lambda + 1.0)
}

/// Interval the spectrum is a priori confined to at coupling λ.
#[inline]
pub fn spectrum_clamp(lambda: f64) -> (f64, f64) {
    (-2.0 - lambda, 2.0 + lambda)
}

/// Maximum bisection halvings per classification edge.
pub const REFINE_HALVINGS: u32 = 40;

/// Grid-plus-bisection interval builder over the λ-window, generic in the
/// membership test. `eval_many` receives a batch of energies and returns
/// their verdicts in order; batches are deterministic, so callers may
/// evaluate them in parallel and merge by index. Endpoint ties resolve
/// toward inclusion (the returned endpoints are the non-member ends of the
/// final brackets), and the result is clamped to the a-priori window.
pub fn membership_estimate_with<F>(
    lambda: f64,
    resolution: f64,
    mut eval_many: F,
) -> Result<CantorApprox, CoreError>
where
    F: FnMut(&[f64]) -> Vec<bool>,
{
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(CoreError::InvalidInput("lambda must be finite and >= 0"));
    }
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(CoreError::InvalidInput("resolution must be positive"));
    }
    let (lo, hi) = spectrum_window(lambda);
    let n_cells = ((hi - lo) / resolution) as usize + 1;
    if n_cells < 2 {
        return Err(CoreError::InvalidInput("resolution coarser than the window"));
    }
    let energies: Vec<f64> = (0..n_cells).map(|i| lo + i as f64 * resolution).collect();
    let verdicts = eval_many(&energies);
    assert_eq!(verdicts.len(), energies.len(), "eval_many must return one verdict per input");
    let mut evaluations = energies.len() as u64;
    let undecided_cells = verdicts.iter().filter(|&&b| b).count() as u64;

    // maximal runs of member cells
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &v) in verdicts.iter().enumerate() {
        match (v, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, verdicts.len() - 1));
    }

    // one bracket per run edge: (inside index fixed as energy, outside moves)
    struct Bracket {
        inside: f64,
        outside: f64,
    }
    let mut left_brackets: Vec<Option<Bracket>> = Vec::with_capacity(runs.len());
    let mut right_brackets: Vec<Option<Bracket>> = Vec::with_capacity(runs.len());
    for &(s, e) in &runs {
        left_brackets.push((s > 0).then(|| Bracket {
            inside: energies[s],
            outside: energies[s - 1],
        }));
        right_brackets.push((e + 1 < energies.len()).then(|| Bracket {
            inside: energies[e],
            outside: energies[e + 1],
        }));
    }
    for _ in 0..REFINE_HALVINGS {
        let mut mids: Vec<f64> = Vec::new();
        for b in left_brackets.iter().chain(right_brackets.iter()).flatten() {
            mids.push(0.5 * (b.inside + b.outside));
        }
        if mids.is_empty() {
            break;
        }
        let res = eval_many(&mids);
        assert_eq!(res.len(), mids.len(), "eval_many must return one verdict per input");
        evaluations += mids.len() as u64;
        let mut it = res.into_iter();
        for b in left_brackets.iter_mut().chain(right_brackets.iter_mut()).flatten() {
            let mid = 0.5 * (b.inside + b.outside);
            if it.next().unwrap() {
                b.inside = mid;
            } else {
                b.outside = mid;
            }
        }
    }

    let (clamp_lo, clamp_hi) = spectrum_clamp(lambda);
    let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(runs.len());
    for (i, &(s, e)) in runs.iter().enumerate() {
        let left = left_brackets[i].as_ref().map_or(energies[s], |b| b.outside);
        let right = right_brackets[i].as_ref().map_or(energies[e], |b| b.outside);
        let left = left.max(clamp_lo);
        let right = right.min(clamp_hi);
        if left <= right {
            intervals.push((left, right));
        }
    }
    let set = if intervals.is_empty() { None } else { Some(IntervalSet::from_f64(intervals)?) };
    Ok(CantorApprox {
        set,
        undecided_cells,
        evaluations,
        window: (lo, hi),
        resolution,
    })
}

fn classify_batch(
    energies: &[f64],
    lambda: f64,
    digits: &ContinuedFraction,
    max_steps: usize,
    escape_threshold: f64,
    region: Option<&SurvivalRegionSpec>,
) -> Vec<bool> {
    energies
        .iter()
        .map(|&e| {
            let seed = spectral_line_point(lambda, e);
            let r = orbit_classify(&seed, digits, max_steps, escape_threshold, region);
            r.status == OrbitStatus::BoundedUpToBudget
        })
        .collect()
}

/// Interval approximation of the spectrum at coupling λ: energies whose
/// trace-map orbit has not escaped within the budget, resolved to
/// `resolution` and refined by bisection at the classification edges.
pub fn spectrum_estimate(
    lambda: f64,
    digits: &ContinuedFraction,
    resolution: f64,
    max_steps: usize,
    escape_threshold: f64,
) -> Result<CantorApprox, CoreError> {
    membership_estimate_with(lambda, resolution, |es| {
        classify_batch(es, lambda, digits, max_steps, escape_threshold, None)
    })
}

/// Interval approximation of the survival set: energies whose orbit stays
/// in the survival region (norm bound, outside the singular balls) for the
/// whole budget. Always a subset of the spectrum estimate under the same
/// budget. May be empty (flagged) when ρ is large.
pub fn survival_set(
    lambda: f64,
    region: &SurvivalRegionSpec,
    digits: &ContinuedFraction,
    resolution: f64,
    max_steps: usize,
) -> Result<CantorApprox, CoreError> {
    // escape threshold is immaterial here (the norm bound trips first); any
    // value above the precondition floor works
    let escape_threshold = (10.0f64).max(2.0 * region.bound);
    membership_estimate_with(lambda, resolution, |es| {
        classify_batch(es, lambda, digits, max_steps, escape_threshold, Some(region))
    })
}

/// Per-grid-cell exit-step profile over the spectral window at a given
/// coupling, used to derive resolution-matched iteration horizons.
///
/// For λ > 0 the spectrum has zero Lebesgue measure, so grid points are
/// never exact members: every cell's orbit eventually escapes (or exits the
/// survival region), only later the closer the cell sits to the limit set.
/// The n-step survivor set is a union of bands that thin out as n grows; a
/// grid of spacing r faithfully represents it only while typical bands are
/// still at least a couple of cells wide. This profile records each cell's
/// exit step once (up to a cap) so that the survivor set at *any* horizon
/// n ≤ cap can be read off without re-iterating.
#[derive(Debug, Clone)]
pub struct EscapeProfile {
    /// Exit step per grid cell (escape or region exit); `u32::MAX` marks
    /// cells still inside every test at the cap.
    pub exit_steps: Vec<u32>,
    pub cap: usize,
    pub window: (f64, f64),
    pub resolution: f64,
}

/// Minimum mean band width, in grid cells, for a horizon to count as
/// resolvable by the grid.
const MIN_MEAN_RUN_CELLS: f64 = 2.0;

/// Classifies every grid cell once with the full `cap` budget and records
/// the step at which its verdict became non-member. With `region` supplied
/// the exits are survival-region exits; otherwise escapes.
pub fn escape_profile(
    lambda: f64,
    digits: &ContinuedFraction,
    resolution: f64,
    cap: usize,
    escape_threshold: f64,
    region: Option<&SurvivalRegionSpec>,
) -> Result<EscapeProfile, CoreError> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(CoreError::InvalidInput("lambda must be finite and >= 0"));
    }
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(CoreError::InvalidInput("resolution must be positive"));
    }
    if cap == 0 || cap >= u32::MAX as usize {
        return Err(CoreError::InvalidInput("cap must be in [1, u32::MAX)"));
    }
    let (lo, hi) = spectrum_window(lambda);
    let n_cells = ((hi - lo) / resolution) as usize + 1;
    let exit_steps = (0..n_cells)
        .map(|i| {
            let e = lo + i as f64 * resolution;
            let seed = spectral_line_point(lambda, e);
            let r = orbit_classify(&seed, digits, cap, escape_threshold, region);
            if r.status == OrbitStatus::BoundedUpToBudget {
                u32::MAX
            } else {
                r.exit_index.unwrap_or(r.steps) as u32
            }
        })
        .collect();
    Ok(EscapeProfile { exit_steps, cap, window: (lo, hi), resolution })
}

impl EscapeProfile {
    /// Member cells and member runs of the survivor set at horizon `n`
    /// (matches the grid verdicts of the interval estimators run with
    /// `max_steps = n`).
    pub fn cells_and_runs(&self, n: usize) -> (u64, u64) {
        let n = n as u32;
        let mut cells = 0u64;
        let mut runs = 0u64;
        let mut in_run = false;
        for &s in &self.exit_steps {
            if s > n {
                cells += 1;
                if !in_run {
                    runs += 1;
                    in_run = true;
                }
            } else {
                in_run = false;
            }
        }
        (cells, runs)
    }

    /// The deepest horizon n ≤ cap whose survivor set the grid still
    /// resolves: mean band width ≥ 2 cells (and at least one member cell).
    /// Returns the cap itself when even the cap-horizon set is resolvable
    /// (e.g. λ = 0, where bounded orbits survive every budget); returns 1
    /// when not even one step is resolvable.
    pub fn matched_horizon(&self) -> usize {
        let ok = |n: usize| {
            let (cells, runs) = self.cells_and_runs(n);
            cells > 0 && (cells as f64) >= MIN_MEAN_RUN_CELLS * runs as f64
        };
        if ok(self.cap) {
            return self.cap;
        }
        if !ok(1) {
            return 1;
        }
        // the resolvability predicate is monotone to good approximation:
        // bands only thin as the horizon deepens
        let (mut lo, mut hi) = (1usize, self.cap);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}
