//! Contract-level properties of the torus factor models: the exact
//! semiconjugacy, eigenvalue identities, exact stable slopes, graph-transform
//! contraction, and the inertness of the perturbation at zero coupling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sturmian_core::contfrac::ContinuedFraction;
use sturmian_core::surface::trace_map_apply;
use sturmian_core::torus::{
    graph_transform_manifold, semiconjugacy_f, stable_slope, stable_slope_exact, torus_apply,
    DigitMatrix, PerturbedMapFamily,
};

/// |F(A_a P mod 1) − T_a(F(P))|∞ < 1e−12 on 10⁴ random torus points for each
/// digit a ∈ {1..5}.
#[test]
fn semiconjugacy_commutes_on_ten_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EC0);
    for _ in 0..10_000 {
        let p = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
        for a in 1..=5u32 {
            let via_torus = {
                let q = torus_apply(a, p);
                semiconjugacy_f(q[0], q[1])
            };
            let via_trace = trace_map_apply(a, &semiconjugacy_f(p[0], p[1]));
            let err = (via_torus.x1 - via_trace.x1)
                .abs()
                .max((via_torus.x2 - via_trace.x2).abs())
                .max((via_torus.x3 - via_trace.x3).abs());
            assert!(err < 1e-12, "semiconjugacy residual {err:e} at a={a}, p={p:?}");
        }
    }
}

#[test]
fn eigenvalue_identities_hold_to_fourteen_digits() {
    for a in 1..=50u32 {
        let m = DigitMatrix::new(a);
        let sum = m.mu_u() + m.mu_s();
        let prod = m.mu_u() * m.mu_s();
        assert!(
            (sum - a as f64).abs() <= 1e-14 * (a as f64).max(1.0),
            "trace identity failed at a={a}: {sum}"
        );
        assert!(
            (prod + 1.0).abs() <= 1e-14,
            "determinant identity failed at a={a}: {prod}"
        );
    }
}

/// stable_slope([a₁..aₙ]) equals −1/[a₁..aₙ] as an exact rational, checked
/// against an independent right-to-left fold.
#[test]
fn stable_slopes_match_exact_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51DE);
    for _ in 0..50 {
        let len = rng.gen_range(1..=14usize);
        let digits: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=6u32)).collect();
        // value of [a₁..aₙ] by folding from the innermost digit outward
        let mut r = BigRational::zero();
        for &d in digits.iter().rev() {
            r = (BigRational::from(BigInt::from(d)) + r).recip();
        }
        let expected = -r.recip();
        let exact = stable_slope_exact(&digits).unwrap();
        assert_eq!(exact, expected, "exact slope mismatch for {digits:?}");
        // the f64 variant must agree with the rational to rounding accuracy
        let approx = stable_slope(&digits).unwrap();
        let num: f64 = exact.numer().to_string().parse().unwrap();
        let den: f64 = exact.denom().to_string().parse().unwrap();
        assert!(
            (approx - num / den).abs() < 1e-12,
            "float slope strays from the rational for {digits:?}"
        );
    }
}

/// At λ = 0 the sup-distance between successive graph-transform iterates
/// shrinks by at least the squared stable multiplier of the digit-1 map
/// (plus a small margin) per step.
#[test]
fn graph_iterates_contract_at_the_squared_stable_rate() {
    let golden = ContinuedFraction::golden();
    let rate_bound = {
        let mu_s = DigitMatrix::new(1).mu_s();
        mu_s * mu_s + 0.05
    };
    let graphs: Vec<_> = (1..=12usize)
        .map(|depth| graph_transform_manifold(0.0, &golden, depth, 1e-300).unwrap())
        .collect();
    let mut prev_gap: Option<f64> = None;
    for w in graphs.windows(2) {
        let gap = w[0].sup_distance(&w[1]);
        if let Some(p) = prev_gap {
            if p < 1e-13 {
                break; // converged to rounding noise
            }
            assert!(
                gap <= rate_bound * p + 1e-15,
                "contraction rate violated: {p:e} -> {gap:e} (bound {rate_bound})"
            );
        }
        prev_gap = Some(gap);
    }
    assert!(prev_gap.is_some(), "no iterate gaps were measured");
}

/// Graphs returned by the transform always satisfy their own sampled
/// Lipschitz bound.
#[test]
fn graphs_stay_in_their_lipschitz_class() {
    let cases: [(f64, ContinuedFraction); 4] = [
        (0.0, ContinuedFraction::golden()),
        (0.0, ContinuedFraction::silver()),
        (0.02, ContinuedFraction::golden()),
        (0.03, ContinuedFraction::periodic(vec![], vec![1, 2]).unwrap()),
    ];
    for (lambda, digits) in &cases {
        let g = graph_transform_manifold(*lambda, digits, 30, 1e-10).unwrap();
        assert!(
            g.max_difference_quotient() <= g.lipschitz_bound(),
            "graph left its Lipschitz class at lambda={lambda}"
        );
    }
}

/// With λ = 0 the perturbed family reproduces the linear map bit for bit on
/// grid points: the blend is inert and the projections are identities.
#[test]
fn zero_coupling_is_bitwise_linear() {
    for a in [1u32, 2, 3] {
        let family = PerturbedMapFamily::build(0.0, a, 0.1).unwrap();
        for i in 0..50 {
            for j in 0..50 {
                let p = [i as f64 / 50.0, j as f64 / 50.0];
                let got = family.apply(p).unwrap();
                let want = torus_apply(a, p);
                assert_eq!(got[0].to_bits(), want[0].to_bits(), "x at {p:?}, a={a}");
                assert_eq!(got[1].to_bits(), want[1].to_bits(), "y at {p:?}, a={a}");
            }
        }
    }
}
