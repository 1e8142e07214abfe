//! Finite unions of closed intervals, their Newhouse thickness, and
//! box-counting dimension estimates.
//!
//! A set is stored as its presentation: maximal disjoint closed components in
//! increasing order. For a bounded gap G, the bridge at each side is the
//! contiguous span from that edge of G to the nearest gap at least as long
//! (or to the hull end), and the thickness is
//! `tau = min over gaps of min(left bridge, right bridge) / |G|`.
//! A set with no bounded gap has infinite thickness. The associated lower
//! bound for the Hausdorff dimension of a Cantor set carrying this thickness
//! is `log 2 / log(2 + 1/tau)`.
//!
//! Scalars are generic so the same code runs on f64 data and on exact
//! rationals (used to pin constructions like the middle-thirds stages, whose
//! thickness is exactly 1).

use alloc::vec::Vec;

use num_traits::{Num, ToPrimitive};

use crate::error::CoreError;
use crate::math;

/// Gap floor used when normalizing f64 interval data: gaps at or below this
/// width are treated as numerical seams and merged away.
pub const F64_GAP_FLOOR: f64 = 1e-12;

/// A finite union of closed intervals, kept as sorted disjoint components.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntervalSet<T> {
    comps: Vec<(T, T)>,
}

/// Thickness of an interval set: infinite when there is no bounded gap.
#[derive(Debug, Clone, PartialEq)]
pub enum Thickness<T> {
    Infinite,
    Finite(T),
}

impl<T: ToPrimitive> Thickness<T> {
    /// The thickness as f64, with `inf` for the gap-free case.
    pub fn to_f64(&self) -> f64 {
        match self {
            Thickness::Infinite => f64::INFINITY,
            Thickness::Finite(t) => t.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl<T> IntervalSet<T>
where
    T: Num + PartialOrd + Clone,
{
    /// Builds a set from unordered closed intervals `(lo, hi)`, merging
    /// overlapping or touching ones. Gaps of width <= `gap_floor` are also
    /// merged (pass zero for exact data).
    pub fn with_gap_floor(mut intervals: Vec<(T, T)>, gap_floor: T) -> Result<Self, CoreError> {
        if intervals.is_empty() {
            return Err(CoreError::EmptySet);
        }
        if gap_floor < T::zero() {
            return Err(CoreError::InvalidInput("gap floor must be nonnegative"));
        }
        for (lo, hi) in &intervals {
            if !(lo <= hi) {
                return Err(CoreError::InvalidInput("interval endpoints out of order"));
            }
        }
        intervals.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap()
                .then_with(|| a.1.partial_cmp(&b.1).unwrap())
        });
        let mut comps: Vec<(T, T)> = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            match comps.last_mut() {
                Some(last) if lo.clone() - last.1.clone() <= gap_floor => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => comps.push((lo, hi)),
            }
        }
        Ok(Self { comps })
    }

    /// Builds a set from unordered closed intervals with no gap floor.
    pub fn new(intervals: Vec<(T, T)>) -> Result<Self, CoreError> {
        Self::with_gap_floor(intervals, T::zero())
    }

    /// The components, sorted and disjoint.
    pub fn components(&self) -> &[(T, T)] {
        &self.comps
    }

    /// Number of components.
    pub fn component_count(&self) -> usize {
        self.comps.len()
    }

    /// Smallest interval containing the set.
    pub fn hull(&self) -> (T, T) {
        (self.comps[0].0.clone(), self.comps.last().unwrap().1.clone())
    }

    /// Total length of the components.
    pub fn measure(&self) -> T {
        let mut acc = T::zero();
        for (lo, hi) in &self.comps {
            acc = acc + (hi.clone() - lo.clone());
        }
        acc
    }

    /// The bounded gaps `(left edge, right edge)`, in increasing order.
    pub fn gaps(&self) -> Vec<(T, T)> {
        self.comps.windows(2).map(|w| (w[0].1.clone(), w[1].0.clone())).collect()
    }

    /// True if x lies in one of the closed components.
    pub fn contains(&self, x: &T) -> bool {
        // binary search on component left endpoints
        let mut lo = 0usize;
        let mut hi = self.comps.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.comps[mid].0 <= *x {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo > 0 && *x <= self.comps[lo - 1].1
    }

    /// Per-gap bridges under the decreasing-length enumeration (ties by
    /// position): when gap i is considered, the strictly longer gaps and the
    /// equal-length gaps to its left are already removed, so its left bridge
    /// runs to the nearest gap at least as long and its right bridge to the
    /// nearest strictly longer one (or the hull ends). Entries are in
    /// positional gap order.
    fn gap_bridges(&self) -> Vec<(T, T)> {
        let glen: Vec<T> = self.gaps().into_iter().map(|(a, b)| b - a).collect();
        let n = glen.len();
        let mut cuts: Vec<(Option<usize>, Option<usize>)> = alloc::vec![(None, None); n];
        // nearest gap at least as long on the left
        let mut stack: Vec<usize> = Vec::new();
        for i in 0..n {
            while let Some(&t) = stack.last() {
                if glen[t] < glen[i] {
                    stack.pop();
                } else {
                    break;
                }
            }
            cuts[i].0 = stack.last().copied();
            stack.push(i);
        }
        // nearest strictly longer gap on the right
        stack.clear();
        for i in (0..n).rev() {
            while let Some(&t) = stack.last() {
                if glen[t] <= glen[i] {
                    stack.pop();
                } else {
                    break;
                }
            }
            cuts[i].1 = stack.last().copied();
            stack.push(i);
        }
        let hull = self.hull();
        (0..n)
            .map(|i| {
                // gap i sits between components i and i+1
                let left_edge = self.comps[i].1.clone();
                let right_edge = self.comps[i + 1].0.clone();
                let left_cut = match cuts[i].0 {
                    Some(j) => self.comps[j + 1].0.clone(), // right edge of gap j
                    None => hull.0.clone(),
                };
                let right_cut = match cuts[i].1 {
                    Some(j) => self.comps[j].1.clone(), // left edge of gap j
                    None => hull.1.clone(),
                };
                (left_edge - left_cut, right_cut - right_edge)
            })
            .collect()
    }

    /// Newhouse thickness of the presentation.
    pub fn thickness(&self) -> Thickness<T> {
        let gaps = self.gaps();
        if gaps.is_empty() {
            return Thickness::Infinite;
        }
        let mut tau: Option<T> = None;
        for ((a, b), (bl, br)) in gaps.into_iter().zip(self.gap_bridges()) {
            let len = b - a;
            let bridge = if bl <= br { bl } else { br };
            let ratio = bridge / len;
            tau = Some(match tau {
                Some(t) if t <= ratio => t,
                _ => ratio,
            });
        }
        Thickness::Finite(tau.unwrap())
    }
}

impl IntervalSet<f64> {
    /// Normalizes f64 interval data with the standard [`F64_GAP_FLOOR`].
    pub fn from_f64(intervals: Vec<(f64, f64)>) -> Result<Self, CoreError> {
        for (lo, hi) in &intervals {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(CoreError::InvalidInput("interval endpoints must be finite"));
            }
        }
        Self::with_gap_floor(intervals, F64_GAP_FLOOR)
    }
}

/// Lower bound `log 2 / log(2 + 1/tau)` for the Hausdorff dimension of a
/// Cantor set of the given thickness. Infinite thickness gives 1, zero gives 0.
pub fn dim_lower_bound<T: ToPrimitive>(thickness: &Thickness<T>) -> f64 {
    match thickness {
        Thickness::Infinite => 1.0,
        Thickness::Finite(t) => {
            let tau = t.to_f64().unwrap_or(f64::NAN);
            if !(tau > 0.0) {
                return 0.0;
            }
            math::ln(2.0) / math::ln(2.0 + 1.0 / tau)
        }
    }
}

/// One gap of a presentation, with the bridge adjacent to each endpoint
/// under the decreasing-length enumeration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PresentedGap<T> {
    pub left: T,
    pub right: T,
    pub length: T,
    pub bridge_left: T,
    pub bridge_right: T,
}

/// The gaps of an interval set in the thickness-attaining enumeration:
/// decreasing length, ties by position.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GapPresentation<T> {
    pub hull: (T, T),
    pub gaps: Vec<PresentedGap<T>>,
}

/// Which endpoint of the witness gap carries the infimum-attaining bridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GapSide {
    Left,
    Right,
}

/// The gap/endpoint pair attaining the thickness infimum.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThicknessWitness<T> {
    pub gap: (T, T),
    pub side: GapSide,
    pub bridge: T,
}

/// Thickness together with the dimension bound and the witnessing gap.
#[derive(Debug, Clone, PartialEq)]
pub struct ThicknessReport<T> {
    pub tau: Thickness<T>,
    /// `log 2 / log(2 + 1/tau)`; 1 when there is no gap.
    pub dim_lower: f64,
    /// None exactly when the set has no bounded gap.
    pub witness: Option<ThicknessWitness<T>>,
}

/// Gap enumeration in decreasing length order (ties by position), with the
/// endpoint bridges of each gap under that enumeration: when a gap is
/// considered, all earlier gaps are removed from the hull, and its bridge at
/// an endpoint is the connected component of what remains adjacent to that
/// endpoint.
pub fn presentation<T>(set: &IntervalSet<T>) -> GapPresentation<T>
where
    T: Num + PartialOrd + Clone,
{
    let mut gaps: Vec<PresentedGap<T>> = set
        .gaps()
        .into_iter()
        .zip(set.gap_bridges())
        .map(|((left, right), (bridge_left, bridge_right))| PresentedGap {
            length: right.clone() - left.clone(),
            left,
            right,
            bridge_left,
            bridge_right,
        })
        .collect();
    gaps.sort_by(|a, b| {
        b.length
            .partial_cmp(&a.length)
            .unwrap()
            .then_with(|| a.left.partial_cmp(&b.left).unwrap())
    });
    GapPresentation { hull: set.hull(), gaps }
}

/// Thickness under the decreasing-length presentation: the infimum over
/// gaps and endpoints of bridge/gap, with the attaining witness. A set with
/// no bounded gap has infinite thickness and dimension bound 1.
pub fn thickness<T>(set: &IntervalSet<T>) -> ThicknessReport<T>
where
    T: Num + PartialOrd + Clone + ToPrimitive,
{
    let pres = presentation(set);
    let mut tau: Option<T> = None;
    let mut witness: Option<ThicknessWitness<T>> = None;
    for g in &pres.gaps {
        for (side, bridge) in
            [(GapSide::Left, &g.bridge_left), (GapSide::Right, &g.bridge_right)]
        {
            let ratio = bridge.clone() / g.length.clone();
            if tau.as_ref().is_none_or(|t| ratio < *t) {
                tau = Some(ratio);
                witness = Some(ThicknessWitness {
                    gap: (g.left.clone(), g.right.clone()),
                    side,
                    bridge: bridge.clone(),
                });
            }
        }
    }
    let tau = match tau {
        Some(t) => Thickness::Finite(t),
        None => Thickness::Infinite,
    };
    let dim_lower = dim_lower_bound(&tau);
    ThicknessReport { tau, dim_lower, witness }
}

/// Least-squares box-counting fit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoxDimensionFit {
    /// Fitted slope of log N(eps) against log(1/eps).
    pub dimension: f64,
    /// Coefficient of determination of the fit.
    pub r_squared: f64,
    /// `(eps, N(eps))` pairs actually used, in the order given.
    pub counts: Vec<(f64, u64)>,
}

/// Number of grid boxes `[lo + j*eps, lo + (j+1)*eps)` meeting the set, with
/// the grid anchored at the hull's left endpoint.
pub fn box_count(set: &IntervalSet<f64>, eps: f64) -> Result<u64, CoreError> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(CoreError::InvalidInput("box size must be positive and finite"));
    }
    let (hull_lo, _) = set.hull();
    let mut total: u64 = 0;
    let mut last_hi: Option<i64> = None;
    for (lo, hi) in set.components() {
        let j_lo = math::floor((lo - hull_lo) / eps) as i64;
        let j_hi = math::floor((hi - hull_lo) / eps) as i64;
        let start = match last_hi {
            Some(prev) => j_lo.max(prev + 1),
            None => j_lo,
        };
        if j_hi >= start {
            total += (j_hi - start + 1) as u64;
            last_hi = Some(j_hi);
        }
    }
    Ok(total)
}

/// Box-counting dimension estimate over the given scales: least-squares
/// slope of log N against log(1/eps), with the goodness of fit reported.
/// Scales must be positive; at least two distinct scales are required.
pub fn box_dimension(set: &IntervalSet<f64>, scales: &[f64]) -> Result<BoxDimensionFit, CoreError> {
    let mut counts: Vec<(f64, u64)> = Vec::with_capacity(scales.len());
    for &eps in scales {
        counts.push((eps, box_count(set, eps)?));
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for &(eps, n) in &counts {
        if xs.iter().any(|&x| x == math::ln(1.0 / eps)) {
            continue; // duplicate scale adds no information
        }
        xs.push(math::ln(1.0 / eps));
        ys.push(math::ln(n as f64));
    }
    if xs.len() < 2 {
        return Err(CoreError::TooFewUsableScales { usable: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else if ss_res == 0.0 { 1.0 } else { 0.0 };
    Ok(BoxDimensionFit { dimension: slope, r_squared, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Stage-k middle-thirds presentation in exact rationals.
    fn middle_thirds(stage: u32) -> IntervalSet<BigRational> {
        let mut comps = vec![(rat(0, 1), rat(1, 1))];
        for _ in 0..stage {
            let mut next = Vec::with_capacity(comps.len() * 2);
            for (a, b) in comps {
                let third = (&b - &a) / rat(3, 1);
                next.push((a.clone(), &a + &third));
                next.push((&b - &third, b.clone()));
            }
            comps = next;
        }
        IntervalSet::new(comps).unwrap()
    }

    #[test]
    fn middle_thirds_thickness_is_exactly_one() {
        for stage in [1u32, 3, 8] {
            let set = middle_thirds(stage);
            assert_eq!(set.component_count(), 1usize << stage);
            match set.thickness() {
                Thickness::Finite(t) => assert_eq!(t, rat(1, 1), "stage {stage}"),
                Thickness::Infinite => panic!("stage {stage} has gaps"),
            }
        }
        let d = dim_lower_bound(&middle_thirds(8).thickness());
        assert!((d - 2.0f64.ln() / 3.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn merge_and_accessors() {
        let set =
            IntervalSet::<f64>::new(vec![(2.0, 3.0), (0.0, 1.0), (1.0, 1.5), (3.5, 4.0)]).unwrap();
        assert_eq!(set.components(), &[(0.0, 1.5), (2.0, 3.0), (3.5, 4.0)]);
        assert_eq!(set.hull(), (0.0, 4.0));
        assert_eq!(set.gaps(), vec![(1.5, 2.0), (3.0, 3.5)]);
        assert!((set.measure() - 3.0).abs() < 1e-15);
        assert!(set.contains(&0.7));
        assert!(set.contains(&1.5));
        assert!(!set.contains(&1.7));
        assert!(!set.contains(&-0.5));
        assert!(set.contains(&4.0));
        assert!(!set.contains(&4.5));
    }

    #[test]
    fn empty_and_invalid_inputs() {
        assert!(matches!(IntervalSet::<f64>::new(vec![]), Err(CoreError::EmptySet)));
        assert!(IntervalSet::new(vec![(1.0, 0.5)]).is_err());
        assert!(IntervalSet::from_f64(vec![(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn gap_floor_merges_numerical_seams() {
        let set = IntervalSet::from_f64(vec![(0.0, 0.5), (0.5 + 1e-13, 1.0)]).unwrap();
        assert_eq!(set.component_count(), 1);
    }

    #[test]
    fn single_interval_has_infinite_thickness() {
        let set = IntervalSet::new(vec![(0.0, 2.0)]).unwrap();
        assert_eq!(set.thickness(), Thickness::Infinite);
        assert_eq!(dim_lower_bound(&set.thickness()), 1.0);
    }

    #[test]
    fn thickness_hand_examples() {
        // one gap, asymmetric bridges
        let set = IntervalSet::<f64>::new(vec![(0.0, 0.05), (0.15, 1.0)]).unwrap();
        match set.thickness() {
            Thickness::Finite(t) => assert!((t - 0.5).abs() < 1e-15),
            _ => panic!(),
        }
        // two gaps of different sizes: both ratios 1
        let set = IntervalSet::<f64>::new(vec![(0.0, 1.0), (2.0, 3.0), (3.5, 4.0)]).unwrap();
        match set.thickness() {
            Thickness::Finite(t) => assert!((t - 1.0).abs() < 1e-15),
            _ => panic!(),
        }
        // middle gap dominated by its short right bridge
        let set = IntervalSet::<f64>::new(vec![(0.0, 4.0), (5.0, 5.25), (9.0, 10.0)]).unwrap();
        // gap (4,5) len 1: bridges hull-left 4 and right up to gap (5.25,9) cut: 0.25
        // gap (5.25,9) len 3.75: bridges 5.25-0=5.25? no: left cut is hull since no gap >= 3.75
        //   left bridge 5.25, right bridge 1 -> ratio 1/3.75
        match set.thickness() {
            Thickness::Finite(t) => assert!((t - 0.25).abs() < 1e-15, "tau={t}"),
            _ => panic!(),
        }
    }

    #[test]
    fn thickness_scale_and_translation_invariant() {
        let base = vec![(0.0, 1.0), (1.7, 2.2), (4.0, 4.8), (5.0, 6.0)];
        let set = IntervalSet::new(base.clone()).unwrap();
        let tau0 = match set.thickness() {
            Thickness::Finite(t) => t,
            _ => panic!(),
        };
        for &(s, t) in &[(3.0, -7.5), (0.125, 2.0), (17.0, 0.0)] {
            let mapped: Vec<(f64, f64)> =
                base.iter().map(|&(a, b)| (s * a + t, s * b + t)).collect();
            let mset = IntervalSet::new(mapped).unwrap();
            match mset.thickness() {
                Thickness::Finite(tau) => {
                    assert!((tau - tau0).abs() < 1e-12 * (1.0 + tau0.abs()))
                }
                _ => panic!(),
            }
            assert!((mset.measure() - s * set.measure()).abs() < 1e-9);
        }
    }

    /// Order-based thickness: process gaps in the order given; each gap's
    /// bridges run to the nearest previously processed gap (or hull end).
    /// The optimum over all orders is the thickness, which gives an
    /// independent oracle for small sets.
    fn thickness_by_order(comps: &[(f64, f64)], order: &[usize]) -> f64 {
        let hull = (comps[0].0, comps[comps.len() - 1].1);
        let mut processed: Vec<usize> = Vec::new();
        let mut worst = f64::INFINITY;
        for &i in order {
            let left_edge = comps[i].1;
            let right_edge = comps[i + 1].0;
            let mut left_cut = hull.0;
            let mut right_cut = hull.1;
            for &j in &processed {
                if j < i {
                    left_cut = left_cut.max(comps[j + 1].0);
                } else {
                    right_cut = right_cut.min(comps[j].1);
                }
            }
            let bridge = (left_edge - left_cut).min(right_cut - right_edge);
            worst = worst.min(bridge / (right_edge - left_edge));
            processed.push(i);
        }
        worst
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 1 {
            return vec![vec![0]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn thickness_matches_exhaustive_order_oracle() {
        // a few fixed sets with distinct gap lengths, up to 5 gaps
        let sets: Vec<Vec<(f64, f64)>> = vec![
            vec![(0.0, 1.0), (1.5, 2.0)],
            vec![(0.0, 0.3), (0.5, 1.4), (1.5, 2.0), (2.9, 3.0)],
            vec![(0.0, 0.2), (0.31, 0.5), (0.9, 1.6), (1.8, 2.15), (2.4, 2.5), (3.4, 3.6)],
            vec![(-2.0, -1.0), (-0.5, 0.62), (1.0, 1.03), (1.9, 2.8), (4.0, 4.7)],
        ];
        for comps in sets {
            let set = IntervalSet::new(comps.clone()).unwrap();
            let tau = match set.thickness() {
                Thickness::Finite(t) => t,
                Thickness::Infinite => continue,
            };
            let ngaps = comps.len() - 1;
            let best = permutations(ngaps)
                .into_iter()
                .map(|ord| thickness_by_order(&comps, &ord))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                (tau - best).abs() < 1e-12 * (1.0 + best.abs()),
                "tau={tau} oracle={best} for {comps:?}"
            );
        }
    }

    /// Brute-force box count: test every box over the hull for intersection.
    fn box_count_oracle(set: &IntervalSet<f64>, eps: f64) -> u64 {
        let (lo, hi) = set.hull();
        let mut n = 0u64;
        let mut j = 0i64;
        loop {
            let a = lo + j as f64 * eps;
            if a > hi {
                break;
            }
            let b = a + eps;
            // closed component [p,q] meets half-open box [a,b) iff q >= a && p < b
            if set.components().iter().any(|&(p, q)| q >= a && p < b) {
                n += 1;
            }
            j += 1;
        }
        n
    }

    /// True when some component endpoint sits within `tol` (relative to eps)
    /// of a grid line: there the box index is legitimately rounding-sensitive
    /// and the two counting routes may differ.
    fn grid_aligned(set: &IntervalSet<f64>, eps: f64, tol: f64) -> bool {
        let lo = set.hull().0;
        set.components().iter().any(|&(a, b)| {
            [(a - lo) / eps, (b - lo) / eps]
                .iter()
                .any(|r| (r - r.round()).abs() < tol)
        })
    }

    #[test]
    fn box_count_matches_brute_force() {
        // dyadic endpoints with dyadic scales: all arithmetic exact, and
        // exact grid hits are resolved identically on both routes
        let dyadic = vec![
            IntervalSet::new(vec![(0.0, 1.0)]).unwrap(),
            IntervalSet::new(vec![(0.0, 0.3125), (0.4375, 0.5), (0.75, 1.0)]).unwrap(),
            IntervalSet::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap(),
        ];
        for set in &dyadic {
            for &eps in &[1.0, 0.5, 0.25, 0.125] {
                assert_eq!(box_count(set, eps).unwrap(), box_count_oracle(set, eps));
            }
        }
        // generic-position scales: no endpoint near a grid line
        let sets = vec![
            IntervalSet::new(vec![(0.0, 0.31), (0.45, 0.5), (0.75, 1.0)]).unwrap(),
            IntervalSet::new(vec![(-1.3, -0.4), (0.0, 0.1), (0.2, 2.01)]).unwrap(),
        ];
        for set in &sets {
            for &eps in &[0.31007, 0.10037, 0.071007, 0.0130017] {
                if grid_aligned(set, eps, 1e-6) {
                    continue;
                }
                assert_eq!(
                    box_count(set, eps).unwrap(),
                    box_count_oracle(set, eps),
                    "eps={eps} set={:?}",
                    set.components()
                );
            }
        }
    }

    #[test]
    fn box_dimension_of_interval_is_one() {
        // N(2^-j) = 2^j + 1 exactly (the right endpoint opens one more
        // half-open box), so the fit approaches slope 1 from below
        let set = IntervalSet::new(vec![(0.0, 1.0)]).unwrap();
        let scales: Vec<f64> = (6..15).map(|j| 0.5f64.powi(j)).collect();
        let fit = box_dimension(&set, &scales).unwrap();
        for (j, &(eps, n)) in (6..15).zip(fit.counts.iter()) {
            assert_eq!(eps, 0.5f64.powi(j));
            assert_eq!(n, (1u64 << j) + 1);
        }
        assert!((fit.dimension - 1.0).abs() < 0.01, "dim={}", fit.dimension);
        assert!(fit.r_squared > 0.9999);
    }

    #[test]
    fn box_dimension_of_middle_thirds_stage() {
        let exact = middle_thirds(10);
        let comps: Vec<(f64, f64)> = exact
            .components()
            .iter()
            .map(|(a, b)| (a.to_f64().unwrap(), b.to_f64().unwrap()))
            .collect();
        let set = IntervalSet::new(comps).unwrap();
        // scales detuned from powers of 1/3 so no endpoint sits on a grid
        // line; the detuning multiplies every count by a stable factor,
        // which moves the intercept but not the slope
        let scales: Vec<f64> = (2..8).map(|j| 3.0f64.powi(-j) * 0.987654321).collect();
        let fit = box_dimension(&set, &scales).unwrap();
        let target = 2.0f64.ln() / 3.0f64.ln();
        assert!((fit.dimension - target).abs() < 0.03, "dim={}", fit.dimension);
        assert!(fit.r_squared > 0.999);
    }

    #[test]
    fn box_dimension_needs_two_scales() {
        let set = IntervalSet::new(vec![(0.0, 1.0)]).unwrap();
        match box_dimension(&set, &[0.1, 0.1]) {
            Err(CoreError::TooFewUsableScales { usable }) => assert_eq!(usable, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(box_dimension(&set, &[0.1, -0.2]).is_err());
    }

    #[test]
    fn presentation_of_middle_thirds_stage_two() {
        let set = middle_thirds(2);
        let pres = presentation(&set);
        assert_eq!(pres.hull, (rat(0, 1), rat(1, 1)));
        assert_eq!(pres.gaps.len(), 3);
        // longest gap first, equal-length gaps by position
        assert_eq!((&pres.gaps[0].left, &pres.gaps[0].right), (&rat(1, 3), &rat(2, 3)));
        assert_eq!((&pres.gaps[1].left, &pres.gaps[1].right), (&rat(1, 9), &rat(2, 9)));
        assert_eq!((&pres.gaps[2].left, &pres.gaps[2].right), (&rat(7, 9), &rat(8, 9)));
        // the middle gap's bridges are the stage-1 thirds
        assert_eq!(pres.gaps[0].bridge_left, rat(1, 3));
        assert_eq!(pres.gaps[0].bridge_right, rat(1, 3));
        // each small gap is bridged by stage-2 ninths on both sides
        for g in &pres.gaps[1..] {
            assert_eq!(g.bridge_left, rat(1, 9));
            assert_eq!(g.bridge_right, rat(1, 9));
        }
    }

    #[test]
    fn presentation_simple_cases() {
        let single = IntervalSet::<f64>::new(vec![(0.0, 1.0)]).unwrap();
        assert!(presentation(&single).gaps.is_empty());
        let two = IntervalSet::<f64>::new(vec![(0.0, 0.25), (0.75, 1.0)]).unwrap();
        let pres = presentation(&two);
        assert_eq!(pres.gaps.len(), 1);
        let g = &pres.gaps[0];
        assert_eq!((g.left, g.right), (0.25, 0.75));
        assert_eq!(g.bridge_left, 0.25);
        assert_eq!(g.bridge_right, 0.25);
    }

    #[test]
    fn presentation_bridges_span_pending_equal_gaps_to_the_right() {
        // components [0,1] [1.5,2] [2.5,3]: two equal gaps of length 1/2.
        // When the left gap is considered, the right one is not yet removed,
        // so the left gap's right bridge runs to the hull end.
        let set = IntervalSet::<f64>::new(vec![(0.0, 1.0), (1.5, 2.0), (2.5, 3.0)]).unwrap();
        let pres = presentation(&set);
        assert_eq!((pres.gaps[0].left, pres.gaps[0].right), (1.0, 1.5));
        assert_eq!(pres.gaps[0].bridge_left, 1.0);
        assert_eq!(pres.gaps[0].bridge_right, 1.5);
        // the later equal gap sees the first one removed on its left
        assert_eq!((pres.gaps[1].left, pres.gaps[1].right), (2.0, 2.5));
        assert_eq!(pres.gaps[1].bridge_left, 0.5);
        assert_eq!(pres.gaps[1].bridge_right, 0.5);
        // thickness binds at the middle bridge either way
        let rep = thickness(&set);
        assert_eq!(rep.tau, Thickness::Finite(1.0));
    }

    #[test]
    fn thickness_report_witness_and_dim() {
        // middle-half set: tau = 0.5, witness at the central gap
        let set = IntervalSet::<f64>::new(vec![(0.0, 0.25), (0.75, 1.0)]).unwrap();
        let rep = thickness(&set);
        assert_eq!(rep.tau, Thickness::Finite(0.5));
        assert!((rep.dim_lower - 0.5).abs() < 1e-15);
        let w = rep.witness.expect("finite thickness carries a witness");
        assert_eq!(w.gap, (0.25, 0.75));
        assert_eq!(w.side, GapSide::Left);
        assert_eq!(w.bridge, 0.25);
        // no-gap set: infinite thickness, no witness
        let rep = thickness(&IntervalSet::<f64>::new(vec![(1.0, 2.0)]).unwrap());
        assert_eq!(rep.tau, Thickness::Infinite);
        assert_eq!(rep.dim_lower, 1.0);
        assert!(rep.witness.is_none());
        // asymmetric set: witness picks the smaller-bridge side
        let set = IntervalSet::<f64>::new(vec![(0.0, 0.1), (0.6, 2.0)]).unwrap();
        let rep = thickness(&set);
        assert_eq!(rep.tau, Thickness::Finite(0.2));
        let w = rep.witness.unwrap();
        assert_eq!((w.side, w.bridge), (GapSide::Left, 0.1));
    }

    #[test]
    fn report_tau_matches_method_tau() {
        let cases: Vec<IntervalSet<f64>> = vec![
            middle_thirds(4)
                .components()
                .iter()
                .map(|(a, b)| (a.to_f64().unwrap(), b.to_f64().unwrap()))
                .collect::<Vec<_>>(),
            vec![(0.0, 1.0), (1.5, 2.0), (2.5, 3.0)],
            vec![(0.0, 0.1), (0.2, 0.21), (0.5, 1.9), (2.0, 2.05)],
            vec![(-3.0, -1.0), (0.0, 0.5), (0.6, 0.7), (0.9, 4.0)],
        ]
        .into_iter()
        .map(|v| IntervalSet::new(v).unwrap())
        .collect();
        for set in &cases {
            let rep = thickness(set);
            assert_eq!(rep.tau, set.thickness());
        }
    }
}
