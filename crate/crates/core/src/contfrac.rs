//! Continued fractions of numbers in (0,1), their convergents, and the
//! circle-rotation combinatorics built on them.
//!
//! Conventions: for x in (0,1) we write x = [a_1, a_2, ...] meaning
//! x = 1/(a_1 + 1/(a_2 + ...)) with all a_k >= 1. Denominators follow
//! q_{k+1} = a_{k+1} q_k + q_{k-1} with q_0 = 1, q_1 = a_1; numerators follow
//! the same recurrence with p_0 = 0, p_1 = 1. All convergent arithmetic is
//! arbitrary precision, so there is no overflow cliff; the classical bound
//! |q_k x - p_k| < 1/q_k holds for every irrational x and every k.
//!
//! A sequence is of bounded type when its digits stay in a fixed finite
//! alphabet; those are the sequences the orbit and covering machinery cares
//! about. Rationals are out of scope: digit extraction reports an error
//! instead of guessing once the input's precision budget is spent.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::CoreError;
use crate::math;

/// Tolerance at which two circle-arc lengths count as the same length.
pub const GAP_DEDUP_TOL: f64 = 1e-12;

/// Digit supply for a continued fraction: a finite list, an eventually
/// periodic word, or an arbitrary generator.
pub enum DigitSource {
    Finite(Vec<u32>),
    Periodic { prefix: Vec<u32>, cycle: Vec<u32> },
    Generator(Box<dyn Fn(usize) -> u32 + Send + Sync>),
}

impl core::fmt::Debug for DigitSource {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DigitSource::Finite(d) => write!(f, "Finite({d:?})"),
            DigitSource::Periodic { prefix, cycle } => {
                write!(f, "Periodic {{ prefix: {prefix:?}, cycle: {cycle:?} }}")
            }
            DigitSource::Generator(_) => write!(f, "Generator(..)"),
        }
    }
}

/// A continued fraction [a_1, a_2, ...] of a number in (0,1), optionally
/// constrained to a bounded-type alphabet.
#[derive(Debug)]
pub struct ContinuedFraction {
    source: DigitSource,
    alphabet: Option<BTreeSet<u32>>,
}

impl ContinuedFraction {
    /// Finite digit list (a truncation of an irrational's expansion).
    pub fn from_digits(digits: Vec<u32>) -> Result<Self, CoreError> {
        if digits.iter().any(|&a| a == 0) {
            return Err(CoreError::InvalidInput("continued fraction digits must be >= 1"));
        }
        Ok(Self { source: DigitSource::Finite(digits), alphabet: None })
    }

    /// Eventually periodic expansion `prefix, (cycle)^inf`.
    pub fn periodic(prefix: Vec<u32>, cycle: Vec<u32>) -> Result<Self, CoreError> {
        if cycle.is_empty() {
            return Err(CoreError::InvalidInput("periodic part must be nonempty"));
        }
        if prefix.iter().chain(cycle.iter()).any(|&a| a == 0) {
            return Err(CoreError::InvalidInput("continued fraction digits must be >= 1"));
        }
        Ok(Self { source: DigitSource::Periodic { prefix, cycle }, alphabet: None })
    }

    /// The golden mean (sqrt(5)-1)/2 = [1, 1, 1, ...].
    pub fn golden() -> Self {
        Self::periodic(Vec::new(), alloc::vec![1]).unwrap()
    }

    /// The silver mean sqrt(2)-1 = [2, 2, 2, ...].
    pub fn silver() -> Self {
        Self::periodic(Vec::new(), alloc::vec![2]).unwrap()
    }

    /// Digits produced on demand by `gen(k)` for the 1-based index k.
    pub fn from_generator(gen: Box<dyn Fn(usize) -> u32 + Send + Sync>) -> Self {
        Self { source: DigitSource::Generator(gen), alphabet: None }
    }

    /// Declares (and checks, where digits are materialized) a bounded-type
    /// alphabet for this expansion.
    pub fn with_alphabet(mut self, alphabet: BTreeSet<u32>) -> Result<Self, CoreError> {
        if alphabet.is_empty() || alphabet.contains(&0) {
            return Err(CoreError::InvalidInput("alphabet must be a nonempty set of digits >= 1"));
        }
        let listed: Option<&[u32]> = match &self.source {
            DigitSource::Finite(d) => Some(d),
            DigitSource::Periodic { prefix, cycle } => {
                if prefix.iter().chain(cycle.iter()).any(|a| !alphabet.contains(a)) {
                    return Err(CoreError::InvalidInput("digit outside declared alphabet"));
                }
                None
            }
            DigitSource::Generator(_) => None,
        };
        if let Some(d) = listed {
            if d.iter().any(|a| !alphabet.contains(a)) {
                return Err(CoreError::InvalidInput("digit outside declared alphabet"));
            }
        }
        self.alphabet = Some(alphabet);
        Ok(self)
    }

    /// The declared alphabet, if any.
    pub fn alphabet(&self) -> Option<&BTreeSet<u32>> {
        self.alphabet.as_ref()
    }

    /// a_k for 1-based k; None once a finite supply is exhausted.
    pub fn digit(&self, k: usize) -> Option<u32> {
        if k == 0 {
            return None;
        }
        let i = k - 1;
        match &self.source {
            DigitSource::Finite(d) => d.get(i).copied(),
            DigitSource::Periodic { prefix, cycle } => {
                if i < prefix.len() {
                    Some(prefix[i])
                } else {
                    Some(cycle[(i - prefix.len()) % cycle.len()])
                }
            }
            DigitSource::Generator(gen) => Some(gen(k)),
        }
    }

    /// First n digits; errors if the supply is shorter.
    pub fn digits(&self, n: usize) -> Result<Vec<u32>, CoreError> {
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            match self.digit(k) {
                Some(a) => out.push(a),
                None => {
                    return Err(CoreError::InvalidInput("digit supply shorter than requested"))
                }
            }
        }
        Ok(out)
    }

    /// Number of digits available, if finite.
    pub fn len(&self) -> Option<usize> {
        match &self.source {
            DigitSource::Finite(d) => Some(d.len()),
            _ => None,
        }
    }

    /// True when no digits are available at all.
    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// The expansion shifted by m: [a_{m+1}, a_{m+2}, ...].
    pub fn shifted(&self, m: usize) -> Result<ContinuedFraction, CoreError> {
        let source = match &self.source {
            DigitSource::Finite(d) => {
                if m > d.len() {
                    return Err(CoreError::InvalidInput("shift exceeds digit supply"));
                }
                DigitSource::Finite(d[m..].to_vec())
            }
            DigitSource::Periodic { prefix, cycle } => {
                if m <= prefix.len() {
                    DigitSource::Periodic { prefix: prefix[m..].to_vec(), cycle: cycle.clone() }
                } else {
                    let into_cycle = (m - prefix.len()) % cycle.len();
                    let mut rotated = cycle[into_cycle..].to_vec();
                    rotated.extend_from_slice(&cycle[..into_cycle]);
                    DigitSource::Periodic { prefix: Vec::new(), cycle: rotated }
                }
            }
            DigitSource::Generator(_) => {
                return Err(CoreError::InvalidInput("cannot shift a generator-backed expansion"))
            }
        };
        Ok(ContinuedFraction { source, alphabet: self.alphabet.clone() })
    }

    /// Exact value of the truncation [a_1, ..., a_n], by backward folding.
    /// This is deliberately a different algorithm from the convergent
    /// recurrence so the two can check each other.
    pub fn truncation_value(&self, n: usize) -> Result<BigRational, CoreError> {
        if n == 0 {
            return Err(CoreError::InvalidInput("truncation needs at least one digit"));
        }
        let digits = self.digits(n)?;
        let mut acc = BigRational::from_integer(BigInt::from(*digits.last().unwrap()));
        for &a in digits[..n - 1].iter().rev() {
            acc = BigRational::from_integer(BigInt::from(a)) + acc.recip();
        }
        Ok(acc.recip())
    }

    /// Value as f64, evaluated through convergents until the bracketing
    /// interval is below f64 resolution (or digits run out).
    pub fn value_f64(&self) -> f64 {
        let mut p_prev = BigInt::zero();
        let mut q_prev = BigInt::one();
        let mut p = BigInt::one();
        let mut q = match self.digit(1) {
            Some(a) => BigInt::from(a),
            None => return f64::NAN,
        };
        let mut k = 1usize;
        loop {
            // |x - p_k/q_k| < 1/(q_k q_{k+1}) <= 1/q_k^2
            if q.bits() > 60 {
                break;
            }
            match self.digit(k + 1) {
                Some(a) => {
                    let a = BigInt::from(a);
                    let p_next = &a * &p + &p_prev;
                    let q_next = &a * &q + &q_prev;
                    p_prev = core::mem::replace(&mut p, p_next);
                    q_prev = core::mem::replace(&mut q, q_next);
                    k += 1;
                }
                None => break,
            }
        }
        BigRational::new(p, q).to_f64().unwrap_or(f64::NAN)
    }
}

/// One convergent p_k/q_k in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentPair {
    pub k: usize,
    pub p: BigInt,
    pub q: BigInt,
}

impl ConvergentPair {
    /// p/q as an exact rational.
    pub fn value(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

/// First n convergents of the expansion, via the standard recurrence.
pub fn convergents(cf: &ContinuedFraction, n: usize) -> Result<Vec<ConvergentPair>, CoreError> {
    let digits = cf.digits(n)?;
    let mut out = Vec::with_capacity(n);
    let mut p_prev = BigInt::zero(); // p_0
    let mut q_prev = BigInt::one(); // q_0
    let mut p = BigInt::one(); // p_1
    let mut q_opt: Option<BigInt> = None;
    for (i, &a) in digits.iter().enumerate() {
        let k = i + 1;
        let a = BigInt::from(a);
        match q_opt {
            None => {
                q_opt = Some(a);
            }
            Some(ref mut q) => {
                let p_next = &a * &p + &p_prev;
                let q_next = &a * &*q + &q_prev;
                p_prev = core::mem::replace(&mut p, p_next);
                q_prev = core::mem::replace(q, q_next);
            }
        }
        let q = q_opt.as_ref().unwrap();
        debug_assert!(p.gcd(q).is_one(), "convergent not in lowest terms at k={k}");
        out.push(ConvergentPair { k, p: p.clone(), q: q.clone() });
    }
    Ok(out)
}

/// Continued fraction digits of x in (0,1) by interval floor/reciprocal:
/// the expansion is tracked for the whole interval [x-eps, x+eps] (eps one
/// ulp by default), and extraction stops with an error as soon as the two
/// endpoints disagree on a digit or the remainder could be zero. That makes
/// every returned digit certified against the precision budget, with
/// re-evaluation error below 1/q_n^2 by the standard convergent bound.
pub fn cf_expand(x: f64, n: usize) -> Result<Vec<u32>, CoreError> {
    let eps = f64::from_bits(x.to_bits() + 1) - x;
    cf_expand_with_eps(x, n, eps)
}

/// `cf_expand` with an explicit uncertainty radius on x.
pub fn cf_expand_with_eps(x: f64, n: usize, eps: f64) -> Result<Vec<u32>, CoreError> {
    if !(x > 0.0 && x < 1.0) {
        return Err(CoreError::InvalidInput("cf_expand needs x in (0,1)"));
    }
    if !(eps >= 0.0) || eps >= x {
        return Err(CoreError::InvalidInput("cf_expand needs 0 <= eps < x"));
    }
    let xr = BigRational::from_float(x).expect("finite");
    let er = BigRational::from_float(eps).expect("finite");
    let mut lo = &xr - &er;
    let mut hi = &xr + &er;
    let mut digits = Vec::with_capacity(n);
    while digits.len() < n {
        if lo.is_zero() || lo.is_negative() {
            // remainder interval touches 0: rational within precision
            return Err(CoreError::RationalOrPrecisionExhausted {
                digits_extracted: digits.len(),
            });
        }
        // 1/x is decreasing, so the reciprocal interval is [1/hi, 1/lo]
        let inv_lo = hi.recip();
        let inv_hi = lo.recip();
        let a_lo = inv_lo.floor().to_integer();
        let a_hi = inv_hi.floor().to_integer();
        if a_lo != a_hi {
            return Err(CoreError::RationalOrPrecisionExhausted {
                digits_extracted: digits.len(),
            });
        }
        let a_big = a_lo;
        let a = a_big.to_u32().ok_or(CoreError::InvalidInput("digit exceeds u32"))?;
        digits.push(a);
        let a_rat = BigRational::from_integer(a_big);
        lo = inv_lo - &a_rat;
        hi = inv_hi - &a_rat;
    }
    Ok(digits)
}

/// Lengths of the n+1 arcs the points {m alpha mod 1 : 1 <= m <= n} cut the
/// circle into (the point 0 closes the circle), deduplicated at
/// [`GAP_DEDUP_TOL`] and sorted in decreasing order. The three distance
/// theorem says there are at most 3 distinct lengths, and exactly 2 at the
/// special values n = (r+1) q_k + q_{k-1} - 1.
pub fn three_distance_gaps(alpha: f64, n: usize) -> Result<Vec<f64>, CoreError> {
    if n == 0 {
        return Err(CoreError::InvalidInput("three_distance_gaps needs n >= 1"));
    }
    if !alpha.is_finite() {
        return Err(CoreError::InvalidInput("alpha must be finite"));
    }
    let mut arcs = circle_arc_lengths(alpha, n);
    arcs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut distinct: Vec<f64> = Vec::new();
    for len in arcs {
        match distinct.last() {
            Some(&last) if (last - len).abs() <= GAP_DEDUP_TOL => {}
            _ => distinct.push(len),
        }
    }
    Ok(distinct)
}

/// All n+1 arc lengths (unsorted in circle order) for {m alpha}, m = 1..=n,
/// with 0 as the closing cut point.
pub fn circle_arc_lengths(alpha: f64, n: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = Vec::with_capacity(n + 1);
    pts.push(0.0);
    for m in 1..=n {
        pts.push(math::fract1(m as f64 * alpha));
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut arcs = Vec::with_capacity(n + 1);
    for w in pts.windows(2) {
        arcs.push(w[1] - w[0]);
    }
    arcs.push(1.0 - pts.last().unwrap() + pts[0]);
    arcs
}

/// Smallest orbit length of the covering construction: the least special
/// value n = 2 M_k + M_{k-1} - 1 guaranteeing that for every alpha with
/// digits in `alphabet`, the points {m alpha : 1 <= m <= n} are eps-dense.
/// Here k is the smallest index with 1/q_{k-1} + 1/q_k < eps along the
/// all-smallest-digit sequence (the slowest-growing denominators over the
/// alphabet), and M_j is the denominator of the all-largest-digit sequence
/// (the fastest-growing), so both bounds are uniform over the alphabet.
pub fn covering_bound(alphabet: &BTreeSet<u32>, eps: f64) -> Result<u64, CoreError> {
    if alphabet.is_empty() || alphabet.contains(&0) {
        return Err(CoreError::InvalidInput("alphabet must be a nonempty set of digits >= 1"));
    }
    if !(eps > 0.0) {
        return Err(CoreError::InvalidInput("eps must be positive"));
    }
    let a_min = BigInt::from(*alphabet.iter().next().unwrap());
    let a_max = BigInt::from(*alphabet.iter().next_back().unwrap());
    // recurrences along the extreme digit sequences; k is found on the
    // all-min sequence, M_k on the all-max sequence
    let eps_r = BigRational::from_float(eps).expect("finite");
    let mut qmin_prev = BigInt::one();
    let mut qmin = a_min.clone();
    let mut qmax_prev = BigInt::one();
    let mut qmax = a_max.clone();
    for _k in 1..=64 * 1024usize {
        let density = BigRational::new(BigInt::one(), qmin_prev.clone())
            + BigRational::new(BigInt::one(), qmin.clone());
        if density < eps_r {
            let n = BigInt::from(2) * &qmax + &qmax_prev - BigInt::one();
            return n
                .to_u64()
                .ok_or(CoreError::InvalidInput("covering bound exceeds u64 range"));
        }
        let qmin_next = &a_min * &qmin + &qmin_prev;
        qmin_prev = core::mem::replace(&mut qmin, qmin_next);
        let qmax_next = &a_max * &qmax + &qmax_prev;
        qmax_prev = core::mem::replace(&mut qmax, qmax_next);
    }
    Err(CoreError::InvalidInput("eps too small: covering index not found within iteration cap"))
}

/// Parses the digit-string syntax shared by the CLI and config files:
/// `"1,1,2"` (finite), `"(1,2)*"` (periodic), `"2,(1,3)*"` (prefix plus
/// cycle), and the aliases `"golden"`, `"silver"`.
pub fn parse_digit_spec(s: &str) -> Result<ContinuedFraction, CoreError> {
    let s = s.trim();
    match s {
        "golden" => return Ok(ContinuedFraction::golden()),
        "silver" => return Ok(ContinuedFraction::silver()),
        "" => return Err(CoreError::InvalidInput("empty digit spec")),
        _ => {}
    }
    fn parse_list(part: &str) -> Result<Vec<u32>, CoreError> {
        part.split(',')
            .map(|tok| {
                let tok = tok.trim();
                if tok.is_empty() {
                    return Err(CoreError::InvalidInput("empty digit in spec"));
                }
                let v: u32 =
                    tok.parse().map_err(|_| CoreError::InvalidInput("digit is not an integer"))?;
                if v == 0 {
                    return Err(CoreError::InvalidInput("continued fraction digits must be >= 1"));
                }
                Ok(v)
            })
            .collect()
    }
    if let Some(open) = s.find('(') {
        let close = s.rfind(')').ok_or(CoreError::InvalidInput("unclosed '(' in digit spec"))?;
        let after = s[close + 1..].trim();
        if after != "*" {
            return Err(CoreError::InvalidInput("periodic digit spec must end in ')*'"));
        }
        let prefix_part = s[..open].trim().trim_end_matches(',').trim();
        let prefix =
            if prefix_part.is_empty() { Vec::new() } else { parse_list(prefix_part)? };
        let cycle = parse_list(s[open + 1..close].trim())?;
        ContinuedFraction::periodic(prefix, cycle)
    } else {
        ContinuedFraction::from_digits(parse_list(s)?)
    }
}
