//! Contract-level properties of the continued-fraction layer, checked on
//! randomized inputs with fixed seeds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use sturmian_core::contfrac::{
    circle_arc_lengths, convergents, covering_bound, three_distance_gaps, ContinuedFraction,
};

fn random_periodic(rng: &mut ChaCha8Rng, max_digit: u32) -> ContinuedFraction {
    let prefix_len = rng.gen_range(0..=3usize);
    let cycle_len = rng.gen_range(1..=6usize);
    let prefix: Vec<u32> = (0..prefix_len)
        .map(|_| rng.gen_range(1..=max_digit))
        .collect();
    let cycle: Vec<u32> = (0..cycle_len)
        .map(|_| rng.gen_range(1..=max_digit))
        .collect();
    ContinuedFraction::periodic(prefix, cycle).expect("valid periodic expansion")
}

/// |q_k α − p_k| < 1/q_k for k ≤ 40, checked in exact rational arithmetic.
///
/// The irrational limit α of a periodic expansion lies strictly between any
/// two consecutive truncations, and t ↦ q_k·t − p_k is affine, so bounding
/// the error at both bracketing truncations bounds it at α.
#[test]
fn diophantine_bound_holds_in_exact_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD10);
    for _ in 0..25 {
        let cf = random_periodic(&mut rng, 4);
        let lo = cf.truncation_value(44).unwrap();
        let hi = cf.truncation_value(45).unwrap();
        let pairs = convergents(&cf, 40).unwrap();
        assert_eq!(pairs.len(), 40);
        for pair in &pairs {
            let p = BigRational::from(pair.p.clone());
            let q = BigRational::from(pair.q.clone());
            let err_lo = (q.clone() * lo.clone() - p.clone()).abs();
            let err_hi = (q.clone() * hi.clone() - p).abs();
            let worst = if err_lo > err_hi { err_lo } else { err_hi };
            // |q_k α − p_k| < 1/q_k  ⇔  q_k · |q_k α − p_k| < 1
            assert!(
                worst * q < BigRational::one(),
                "Diophantine bound failed at k={}",
                pair.k
            );
        }
    }
}

#[test]
fn denominators_strictly_increase_and_dominate_fibonacci() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1B);
    for _ in 0..40 {
        let digits: Vec<u32> = (0..40).map(|_| rng.gen_range(1..=9u32)).collect();
        let cf = ContinuedFraction::from_digits(digits).unwrap();
        let pairs = convergents(&cf, 40).unwrap();
        for w in pairs.windows(2) {
            assert!(w[1].q > w[0].q, "q must strictly increase from k=1 on");
        }
        // Fibonacci with F_1 = F_2 = 1
        let mut fib_prev = BigInt::zero();
        let mut fib = BigInt::one();
        for pair in &pairs {
            assert!(
                pair.q >= fib,
                "q_{} = {} fell below Fibonacci({})",
                pair.k,
                pair.q,
                pair.k
            );
            let next = &fib + &fib_prev;
            fib_prev = std::mem::replace(&mut fib, next);
        }
    }
}

#[test]
fn arc_lengths_partition_the_circle_and_take_at_most_three_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3D15);
    for _ in 0..60 {
        let alpha = random_periodic(&mut rng, 6).value_f64();
        let n = rng.gen_range(1..=300usize);
        let arcs = circle_arc_lengths(alpha, n);
        assert_eq!(arcs.len(), n + 1);
        let sum: f64 = arcs.iter().sum();
        assert!(
            (sum - 1.0).abs() < 1e-12,
            "arc lengths must sum to 1, got {sum} for alpha={alpha}, n={n}"
        );
        let distinct = three_distance_gaps(alpha, n).unwrap();
        assert!(
            (1..=3).contains(&distinct.len()),
            "{} distinct gap lengths for alpha={alpha}, n={n}",
            distinct.len()
        );
    }
}

#[test]
fn covering_bound_is_monotone_nonincreasing_in_eps() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0B);
    let mut alphabets: Vec<BTreeSet<u32>> = vec![
        BTreeSet::from([1]),
        BTreeSet::from([1, 2]),
        BTreeSet::from([2, 5]),
        BTreeSet::from([1, 3, 7]),
    ];
    for _ in 0..6 {
        let size = rng.gen_range(1..=3usize);
        let mut set = BTreeSet::new();
        while set.len() < size {
            set.insert(rng.gen_range(1..=9u32));
        }
        alphabets.push(set);
    }
    let ladder = [0.5, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005];
    for alphabet in &alphabets {
        let mut prev: Option<u64> = None;
        for &eps in &ladder {
            let bound = covering_bound(alphabet, eps).unwrap();
            if let Some(p) = prev {
                assert!(
                    bound >= p,
                    "bound must not drop when eps shrinks: {p} -> {bound} at eps={eps} for {alphabet:?}"
                );
            }
            prev = Some(bound);
        }
    }
}
