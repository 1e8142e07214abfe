//! Float math routed through `num_traits::Float` so the crate builds without
//! `std` (the `libm` backend takes over there). With `std` enabled these
//! resolve to the usual intrinsics.

use num_traits::Float;

#[inline]
pub fn cos(x: f64) -> f64 {
    Float::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    Float::sin(x)
}

#[inline]
pub fn acos(x: f64) -> f64 {
    Float::acos(x)
}

#[inline]
pub fn atan(x: f64) -> f64 {
    Float::atan(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    Float::sqrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    Float::ln(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    Float::abs(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    Float::floor(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    Float::round(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    Float::hypot(x, y)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    Float::atan2(y, x)
}

/// x reduced into [0, 1).
#[inline]
pub fn fract1(x: f64) -> f64 {
    let f = x - floor(x);
    // floor rounding can land exactly on 1.0 for x just below an integer
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Signed wrap of x into (-1/2, 1/2], the nearest-representative lift on the
/// circle R/Z.
#[inline]
pub fn wrap_half(x: f64) -> f64 {
    let f = x - round(x);
    if f <= -0.5 {
        f + 1.0
    } else {
        f
    }
}

#[inline]
fn fma(a: f64, b: f64, c: f64) -> f64 {
    Float::mul_add(a, b, c)
}

/// Double-length (compensated) float: value = hi + lo with |lo| <= ulp(hi)/2.
/// Used where an algebraic identity has to be verified below the f64
/// rounding floor of its own evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bv = s - a;
    (s, (a - (s - bv)) + (b - bv))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, fma(a, b, -p))
}

impl Dd {

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + o.lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
        Dd { hi, lo }
    }

    #[inline]
    pub fn scale(self, k: f64) -> Dd {
        self.mul(Dd::from_f64(k))
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Safeguarded Newton iteration on a bracketed root: Newton steps from the
/// analytic derivative, falling back to bisection whenever a step leaves the
/// bracket or fails to shrink it. `f(a)` and `f(b)` must have opposite signs
/// (or one of them be zero). Returns None if `max_iter` is exhausted before
/// the bracket or residual reaches `tol`.
pub(crate) fn newton_bisect(
    f: &mut dyn FnMut(f64) -> (f64, f64),
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    fb: f64,
    tol: f64,
    max_iter: usize,
) -> Option<f64> {
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if fx == 0.0 || abs(fx) < tol * tol || abs(b - a) < tol {
            return Some(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let newton = x - fx / dfx;
        x = if dfx != 0.0 && newton > a.min(b) && newton < a.max(b) {
            newton
        } else {
            0.5 * (a + b)
        };
    }
    if abs(b - a) < tol {
        Some(0.5 * (a + b))
    } else {
        None
    }
}

/// Bracketed root find without derivatives: secant steps safeguarded by
/// bisection. Same contract as [`newton_bisect`].
pub(crate) fn secant_bisect(
    f: &mut dyn FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    tol: f64,
    max_iter: usize,
) -> Option<f64> {
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..max_iter {
        if abs(b - a) < tol {
            return Some(0.5 * (a + b));
        }
        // secant proposal, clipped into the open bracket
        let mut x = if fb != fa { b - fb * (b - a) / (fb - fa) } else { 0.5 * (a + b) };
        let lo = a.min(b);
        let hi = a.max(b);
        let margin = 0.01 * (hi - lo);
        if !(x > lo + margin && x < hi - margin) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    if abs(b - a) < 16.0 * tol {
        Some(0.5 * (a + b))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fract1_stays_in_unit_interval() {
        for &x in &[0.0, -0.0, 1.0, -1.0, 2.75, -2.75, 1e-17, -1e-17, 123456.4] {
            let f = fract1(x);
            assert!((0.0..1.0).contains(&f), "fract1({x}) = {f}");
        }
    }

    #[test]
    fn wrap_half_is_nearest_lift() {
        assert_eq!(wrap_half(0.75), -0.25);
        assert_eq!(wrap_half(-0.75), 0.25);
        assert_eq!(wrap_half(0.5), 0.5);
        assert_eq!(wrap_half(3.25), 0.25);
        for &x in &[0.1, 0.49, 0.51, 0.999, 17.3, -41.8] {
            let w = wrap_half(x);
            assert!(w > -0.5 && w <= 0.5);
            assert!(abs((x - w) - round(x - w)) < 1e-12);
        }
    }

    #[test]
    fn dd_recovers_cancelled_bits() {
        // (1 + 1e-18) - 1 is 0 in f64 but exact in double length
        let one = Dd::from_f64(1.0);
        let tiny = Dd::from_f64(1e-18);
        let r = one.add(tiny).sub(one);
        assert_eq!(r.to_f64(), 1e-18);
        // product nonlinearity: (1+e)^2 - 1 - 2e = e^2, with 1+e held in
        // double length (a plain f64 sum would round e away first)
        let e = 1e-9;
        let x = one.add(Dd::from_f64(e));
        let r = x.mul(x).sub(one).sub(Dd::from_f64(2.0 * e));
        assert!((r.to_f64() - e * e).abs() < 1e-26, "got {:e}", r.to_f64());
    }

    #[test]
    fn newton_bisect_finds_sqrt2() {
        let mut f = |x: f64| (x * x - 2.0, 2.0 * x);
        let r = newton_bisect(&mut f, 0.0, 2.0, -2.0, 2.0, 1e-14, 100).unwrap();
        assert!(abs(r - sqrt(2.0)) < 1e-12);
    }

    #[test]
    fn secant_bisect_finds_cos_root() {
        let mut f = |x: f64| cos(x);
        let r = secant_bisect(&mut f, 1.0, 2.0, cos(1.0), cos(2.0), 1e-13, 200).unwrap();
        assert!(abs(r - core::f64::consts::FRAC_PI_2) < 1e-10);
    }
}
