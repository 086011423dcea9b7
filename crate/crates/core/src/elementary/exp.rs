use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::dyadic::{Dyadic, Prec};
use crate::real::{bind, ceil_log2, compress, real_inv, real_mul, real_sub, Real, UcFun};
use crate::series::{factorials, powers, sum_alternating, AltSeries};

/// `e^a` for a dyadic `a ∈ [−1, 0]` from the alternating series
/// `Σ (−1)^i |a|^i / i!`. Points outside the interval are clamped.
pub fn exp_small_point(a: &Dyadic) -> Real {
    let a = a.clone().min(Dyadic::zero()).max(Dyadic::from_int(-1));
    sum_alternating(AltSeries::new(powers(a.abs()), factorials()), 1)
}

/// `e^x` for a real `x ∈ [−1, 0]`.
///
/// `exp` is 1-Lipschitz on that interval, so the lifting needs no extra
/// precision. The argument is compressed first to keep the series' powers
/// small.
pub fn exp_small(x: &Real) -> Real {
    bind(&UcFun::lipschitz(exp_small_point), &compress(x))
}

/// How far arguments are pushed toward zero before summing: `[−2^-K, 0]`
/// with `K = 50`, or `K = 75` once more than 2000 bits are requested.
pub fn reduction_depth(k: Prec) -> i64 {
    if -k.0 < 2000 {
        50
    } else {
        75
    }
}

/// `x²` for `|x| ≤ 2^b`, without probing for a bound.
fn square_bounded(x: &Real, b: i64) -> Real {
    let x = x.clone();
    Real::new(move |k| {
        let s = x.approx((k - 3 - b).min(Prec(0)));
        s.mul(&s).app_approx(k - 1)
    })
}

/// `e^x` for `x ≤ 0`, by `e^x = (e^(x/2))²` applied until the argument is
/// tiny.
fn exp_nonpos(x: &Real) -> Real {
    let x = x.clone();
    // x ∈ [−lower, 0].
    let lower = x.approx(Prec(0)).abs().add(&Dyadic::one());
    let mag = ceil_log2(&lower);
    Real::new(move |k| {
        let halvings = (reduction_depth(k) + mag).max(0);
        let mut z = exp_small(&x.shiftl(-halvings));
        for _ in 0..halvings {
            // 0 < z ≤ 1.
            z = square_bounded(&z, 0);
        }
        z.approx(k)
    })
}

/// `e^x` for any real `x`.
///
/// With `N = ⌈x⌉` bounded from one approximation, `e^x = e^(x−N) / e^(−N)`
/// where both exponentials have non-positive arguments. The reciprocal uses
/// `e^(−N) ≥ 2^(−⌈3N/2⌉)` as its witness.
pub fn exp(x: &Real) -> Real {
    // x ≤ x(0) + 1.
    let upper = x.approx(Prec(0)).add(&Dyadic::one());
    let n = ceil_dyadic(&upper);
    if !n.is_positive() {
        return exp_nonpos(x);
    }
    let n_small = n.to_i64().expect("exp argument too large");
    let shifted = real_sub(x, &Real::from_int(n.clone()));
    let scale = exp_nonpos(&Real::from_int(-n));
    let witness = -((3 * n_small + 1) / 2);
    let inv = real_inv(&scale, witness).expect("e^-N >= 2^(-3N/2)");
    real_mul(&exp_nonpos(&shifted), &inv)
}

fn ceil_dyadic(x: &Dyadic) -> BigInt {
    let e = x.expo().to_i64().expect("exponent out of range");
    if e >= 0 {
        return x.mant() << e as usize;
    }
    let den = BigInt::from(1) << e.unsigned_abs() as usize;
    num_integer::Integer::div_ceil(x.mant(), &den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Exact alternating-series enclosure of e^a for a ∈ [−1, 0].
    fn exp_bracket(a: &BigRational, terms: usize) -> (BigRational, BigRational) {
        let mut sum = q(0, 1);
        let mut term = q(1, 1);
        for i in 0..terms {
            sum += &term;
            term = term * a / BigRational::from_integer((i as i64 + 1).into());
        }
        let next = &sum + &term;
        if sum <= next { (sum, next) } else { (next, sum) }
    }

    fn assert_in_bracket(x: &Real, k: i64, (lo, hi): (BigRational, BigRational)) {
        let v = x.approx(Prec(k)).to_rational();
        let eps = Prec(k).radius();
        assert!(v >= &lo - &eps && v <= &hi + &eps, "k={k}");
    }

    #[test]
    fn exp_small_examples() {
        let one = exp_small(&Real::from_int(0));
        for k in [-5, -60, -300] {
            let v = one.approx(Prec(k)).to_rational();
            assert!((v - q(1, 1)).abs() <= Prec(k).radius());
        }
        let e_inv = exp_small(&Real::from_int(-1));
        assert_in_bracket(&e_inv, -80, exp_bracket(&q(-1, 1), 40));
        let half = exp_small(&Real::from_rational(q(-1, 2)));
        assert_in_bracket(&half, -100, exp_bracket(&q(-1, 2), 40));
    }

    #[test]
    fn reduction_depth_threshold() {
        assert_eq!(reduction_depth(Prec(-100)), 50);
        assert_eq!(reduction_depth(Prec(-1999)), 50);
        assert_eq!(reduction_depth(Prec(-2000)), 75);
    }

    #[test]
    fn exp_of_zero_and_one() {
        let one = exp(&Real::from_int(0));
        assert!((one.approx(Prec(-64)).to_rational() - q(1, 1)).abs() <= Prec(-64).radius());
        // e to 15 places, from its series: 2.718281828459045…
        let e = exp(&Real::from_int(1));
        let v = e.approx(Prec(-60)).to_rational();
        let reference = q(2_718_281_828_459_045, 1_000_000_000_000_000);
        assert!((v - reference).abs() < q(1, 1_000_000_000_000_000));
    }

    #[test]
    fn ceil_of_dyadics() {
        assert_eq!(ceil_dyadic(&Dyadic::new(5, -1)), BigInt::from(3));
        assert_eq!(ceil_dyadic(&Dyadic::new(-5, -1)), BigInt::from(-2));
        assert_eq!(ceil_dyadic(&Dyadic::new(3, 2)), BigInt::from(12));
        assert_eq!(ceil_dyadic(&Dyadic::new(4, -2)), BigInt::from(1));
    }
}
