//! Approximate rationals: an ordered ring dense in the rationals whose
//! division and rounding are only required to land within `2^k` of the
//! exact answer.
//!
//! [`AppRationals`] is the contract. [`Dyadic`] is the carrier used for
//! computation; [`BigRational`] also implements it (exact division followed
//! by rounding) so the two can be tested against each other with the same
//! [`laws`].

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{pow2_rational, Dyadic, Prec};
use crate::error::{Error, Result};

pub trait AppRationals: Clone + Debug + Send + Sync + 'static {
    fn from_int(n: BigInt) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self · 2^n`.
    fn shiftl(&self, n: i64) -> Self;
    fn abs(&self) -> Self;
    fn compare(&self, other: &Self) -> Ordering;
    /// Some value within `2^k` of `self / y`.
    fn app_div(&self, y: &Self, k: Prec) -> Result<Self>;
    /// Some value within `2^k` of `self`, ideally smaller to store.
    fn app_approx(&self, k: Prec) -> Self;
    /// Exact value, for checking the contracts.
    fn to_rational(&self) -> BigRational;

    fn zero() -> Self {
        Self::from_int(BigInt::zero())
    }

    fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn is_zero(&self) -> bool {
        self.compare(&Self::zero()) == Ordering::Equal
    }

    fn nat_pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Exact embedding of an integer into a carrier.
pub fn int_embed<A: AppRationals>(n: impl Into<BigInt>) -> A {
    A::from_int(n.into())
}

/// The greatest `k` with `2^k ≤ q`, for positive `q`.
pub fn qdlog2(q: &BigRational) -> Result<i64> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("qdlog2 of non-positive {q}")));
    }
    let num_bits = q.numer().bits() as i64;
    let den_bits = q.denom().bits() as i64;
    // 2^(nb-1) ≤ num < 2^nb and likewise for den, so log2 q lies in
    // (nb - db - 1, nb - db + 1): one comparison decides.
    let k = num_bits - den_bits;
    if pow2_rational(k) <= *q {
        Ok(k)
    } else {
        Ok(k - 1)
    }
}

/// The least `k` with `q ≤ 2^k`, for positive `q`.
pub fn qclog2(q: &BigRational) -> Result<i64> {
    let k = qdlog2(q)?;
    if pow2_rational(k) == *q {
        Ok(k)
    } else {
        Ok(k + 1)
    }
}

impl AppRationals for Dyadic {
    fn from_int(n: BigInt) -> Self {
        Dyadic::from_int(n)
    }
    fn add(&self, other: &Self) -> Self {
        Dyadic::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Dyadic::mul(self, other)
    }
    fn neg(&self) -> Self {
        Dyadic::neg(self)
    }
    fn shiftl(&self, n: i64) -> Self {
        Dyadic::shiftl(self, n)
    }
    fn abs(&self) -> Self {
        Dyadic::abs(self)
    }
    fn compare(&self, other: &Self) -> Ordering {
        Dyadic::compare(self, other)
    }
    fn is_zero(&self) -> bool {
        Dyadic::is_zero(self)
    }
    fn nat_pow(&self, n: u64) -> Self {
        Dyadic::nat_pow(self, n)
    }

    fn app_div(&self, y: &Self, k: Prec) -> Result<Self> {
        Dyadic::app_div(self, y, k)
    }
    fn app_approx(&self, k: Prec) -> Self {
        Dyadic::app_approx(self, k)
    }
    fn to_rational(&self) -> BigRational {
        Dyadic::to_rational(self)
    }
}

/// Truncates a rational toward zero at exponent `k`.
fn truncate_rational(x: &BigRational, k: Prec) -> BigRational {
    let scaled = x * pow2_rational(-k.0);
    scaled.trunc() * pow2_rational(k.0)
}

impl AppRationals for BigRational {
    fn from_int(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn shiftl(&self, n: i64) -> Self {
        self * pow2_rational(n)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn app_div(&self, y: &Self, k: Prec) -> Result<Self> {
        if Zero::is_zero(y) {
            return Err(Error::DivisionByZero);
        }
        Ok(truncate_rational(&(self / y), k))
    }
    fn app_approx(&self, k: Prec) -> Self {
        truncate_rational(self, k)
    }
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

/// Carrier-generic checks of the approximate-rationals contract, in exact
/// rational arithmetic. Each returns `true` when the law holds at the
/// given inputs.
pub mod laws {
    use super::*;

    pub fn within(eps: &BigRational, a: &BigRational, b: &BigRational) -> bool {
        Signed::abs(&(a - b)) <= *eps
    }

    pub fn app_div_in_ball<A: AppRationals>(x: &A, y: &A, k: Prec) -> bool {
        match x.app_div(y, k) {
            Ok(r) => within(&k.radius(), &r.to_rational(), &(x.to_rational() / y.to_rational())),
            Err(_) => y.is_zero(),
        }
    }

    pub fn app_approx_in_ball<A: AppRationals>(x: &A, k: Prec) -> bool {
        within(&k.radius(), &x.app_approx(k).to_rational(), &x.to_rational())
    }

    /// Ring operations agree with the exact rationals.
    pub fn ring_morphism<A: AppRationals>(x: &A, y: &A) -> bool {
        let (qx, qy) = (x.to_rational(), y.to_rational());
        x.add(y).to_rational() == &qx + &qy
            && x.mul(y).to_rational() == &qx * &qy
            && x.neg().to_rational() == -&qx
            && x.abs().to_rational() == Signed::abs(&qx)
            && x.compare(y) == qx.cmp(&qy)
    }

    pub fn shift_spec<A: AppRationals>(x: &A, n: i64) -> bool {
        x.shiftl(0).to_rational() == x.to_rational()
            && x.shiftl(n + 1).to_rational() == x.shiftl(n).to_rational() * BigRational::from_integer(2.into())
    }

    pub fn int_embed_morphism<A: AppRationals>(a: &BigInt, b: &BigInt) -> bool {
        let ea: A = int_embed(a.clone());
        let eb: A = int_embed(b.clone());
        let sum: A = int_embed(a + b);
        let prod: A = int_embed(a * b);
        sum.to_rational() == ea.add(&eb).to_rational()
            && prod.to_rational() == ea.mul(&eb).to_rational()
            && ea.compare(&eb) == a.cmp(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use num_traits::ToPrimitive;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(m, e)
    }

    fn q(n: i64, den: i64) -> BigRational {
        BigRational::new(n.into(), den.into())
    }

    #[test]
    fn app_div_examples() {
        let r = d(1, 0).app_div(&d(2, 0), Prec(-3)).unwrap();
        assert_eq!(r.to_rational(), q(1, 2));

        let r = d(1, 0).app_div(&d(3, 0), Prec(-4)).unwrap();
        assert!(Signed::abs(&(r.to_rational() - q(1, 3))) <= q(1, 16));
        assert_eq!(r, d(5, -4));

        let r = d(0, 0).app_div(&d(7, 3), Prec(-10)).unwrap();
        assert!(Signed::abs(&r.to_rational()) <= q(1, 1024));

        assert_eq!(d(1, 0).app_div(&d(0, 5), Prec(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn app_approx_examples() {
        let r = d(5, -4).app_approx(Prec(-2));
        assert_eq!(r, d(1, -2));
        assert!(Signed::abs(&(r.to_rational() - q(5, 16))) <= q(1, 4));

        let x = d(13, 2);
        let r = x.app_approx(Prec(1));
        assert_eq!((r.mant(), r.expo()), (x.mant(), x.expo()));

        assert!(d(0, -50).app_approx(Prec(3)).is_zero());
        // Negative values truncate toward zero.
        assert_eq!(d(-5, -4).app_approx(Prec(-2)), d(-1, -2));
    }

    #[test]
    fn int_embed_examples() {
        assert_eq!(int_embed::<Dyadic>(7), d(7, 0));
        assert!(int_embed::<Dyadic>(0).is_zero());
        assert_eq!(int_embed::<Dyadic>(-3), d(-3, 0));
    }

    #[test]
    fn qdlog2_examples() {
        assert_eq!(qdlog2(&q(1, 1)), Ok(0));
        assert_eq!(qdlog2(&q(3, 4)), Ok(-1));
        assert_eq!(qdlog2(&q(5, 1)), Ok(2));
        assert_eq!(qdlog2(&q(1, 1024)), Ok(-10));
        assert_eq!(qdlog2(&q(1023, 1024)), Ok(-1));
        assert!(qdlog2(&q(0, 1)).is_err());
        assert!(qdlog2(&q(-1, 2)).is_err());
        assert_eq!(qclog2(&q(5, 1)), Ok(3));
        assert_eq!(qclog2(&q(4, 1)), Ok(2));
    }

    fn dyadic() -> impl Strategy<Value = Dyadic> {
        (any::<i64>(), -80i64..80).prop_map(|(m, e)| d(m, e))
    }

    fn rational() -> impl Strategy<Value = BigRational> {
        (any::<i32>(), 1i32..i32::MAX).prop_map(|(n, den)| q(n as i64, den as i64))
    }

    proptest! {
        #[test]
        fn qdlog2_is_floor_log2(n in 1u64.., den in 1u64..) {
            let r = BigRational::new(n.into(), den.into());
            let k = qdlog2(&r).unwrap();
            prop_assert!(pow2_rational(k) <= r);
            prop_assert!(r < pow2_rational(k + 1));
        }

        #[test]
        fn dyadic_contract(x in dyadic(), y in dyadic(), k in -64i64..=8) {
            prop_assert!(laws::app_div_in_ball(&x, &y, Prec(k)));
            prop_assert!(laws::app_approx_in_ball(&x, Prec(k)));
            prop_assert!(laws::ring_morphism(&x, &y));
            prop_assert!(laws::shift_spec(&x, k));
        }

        #[test]
        fn rational_carrier_contract(x in rational(), y in rational(), k in -64i64..=8) {
            prop_assert!(laws::app_div_in_ball(&x, &y, Prec(k)));
            prop_assert!(laws::app_approx_in_ball(&x, Prec(k)));
            prop_assert!(laws::ring_morphism(&x, &y));
            prop_assert!(laws::shift_spec(&x, k));
        }

        #[test]
        fn app_approx_bounds_size(x in dyadic(), k in -100i64..100) {
            let r = x.app_approx(Prec(k));
            let drop = (k - x.expo().to_i64().unwrap()).max(0);
            let bound = (x.mant_bits() as i64 - drop).max(1);
            prop_assert!(r.mant_bits() as i64 <= bound);
        }

        #[test]
        fn embedding(a in any::<i64>(), b in any::<i64>()) {
            prop_assert!(laws::int_embed_morphism::<Dyadic>(&a.into(), &b.into()));
            prop_assert!(laws::int_embed_morphism::<BigRational>(&a.into(), &b.into()));
        }

        #[test]
        fn carriers_agree_on_division(a in any::<i64>(), b in any::<i64>(), k in -64i64..=8) {
            prop_assume!(b != 0);
            let dy = d(a, 0).app_div(&d(b, 0), Prec(k)).unwrap().to_rational();
            let ra = q(a, 1).app_div(&q(b, 1), Prec(k)).unwrap();
            // Both truncate toward zero at the same exponent.
            prop_assert_eq!(dy, ra);
        }
    }
}
